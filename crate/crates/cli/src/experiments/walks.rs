use horodyn::group::Group;
use horodyn::randwalk::{
    grigorchuk_rho, initial_segment_check, return_probabilities, rho_ell, rho_infinity_curve,
    verify_convolution_bounds, ReturnSeries, RhoEll, WalkConstants,
};
use horodyn::subgroup::subgroup_from_spec;

use super::Experiment;
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{Method, Report, Table};
use crate::tolerances::*;

/// 2√(2k − 1)/2k, the spectral radius of the simple random walk on F_k.
fn kesten(k: usize) -> f64 {
    (2.0 * k as f64 - 1.0).sqrt() / k as f64
}

fn walk_tables(r: &mut Report, s: &ReturnSeries, rho: &RhoEll) {
    let mut t = Table::new(Method::Exact, &["n", "p", "exact"]);
    for (n, (p, e)) in s.p.iter().zip(&s.exact).enumerate() {
        t.push(vec![n as f64, *p, f64::from(u8::from(*e))]);
    }
    r.table("return_probabilities", t);
    let mut t = Table::new(Method::CertifiedLowerBound, &["n", "root", "ratio_root"]);
    for ((n, a), (_, b)) in rho.roots.iter().zip(&rho.ratio_roots) {
        t.push(vec![*n as f64, *a, *b]);
    }
    r.table("roots", t);
    let method = if s.exact.last().copied().unwrap_or(false) {
        Method::CertifiedLowerBound
    } else {
        Method::Estimate
    };
    r.value("last_root", rho.last_root, method)
        .value("last_ratio_root", rho.last_ratio_root, method)
        .value("lower_bound", rho.lower_bound, method);
}

pub struct TreeWalk;

impl Experiment for TreeWalk {
    fn id(&self) -> &'static str {
        "A4"
    }

    fn title(&self) -> &'static str {
        "simple random walk on the free group"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(10.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let h = subgroup_from_spec(&g, cfg.subgroup_or("trivial"))?;
        let n_max = cfg.params.n_max.unwrap_or(24);
        let ell = cfg.params.ells.as_ref().map_or(1, |l| l[0]);
        let delta = cfg.params.delta.unwrap_or(1);
        let radius = cfg.params.radius.unwrap_or((n_max * ell).div_ceil(2));
        let s = return_probabilities(&g, h.as_ref(), ell, delta, n_max, radius)?;
        let rho = rho_ell(&s)?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        walk_tables(&mut r, &s, &rho);
        let target = g.free_rank().map_or(f64::NAN, kesten);
        r.value("target", target, Method::Exact);
        r.note("the roots increase to the spectral radius √3/2 of the simple random walk on the 4-regular tree");
        let (lo, hi) = TREE_WALK;
        r.check("even roots monotone", rho.monotone).check(
            format!("final bound in [{lo}, {hi}]"),
            (lo..=hi).contains(&rho.lower_bound),
        );
        Ok(r.finish())
    }
}

pub struct KernelWalk;

impl Experiment for KernelWalk {
    fn id(&self) -> &'static str {
        "A5"
    }

    fn title(&self) -> &'static str {
        "random walk on the abelianization kernel"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(60.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let h = subgroup_from_spec(&g, cfg.subgroup_or("ker-ab"))?;
        let n_max = cfg.params.n_max.unwrap_or(200);
        let ell = cfg.params.ells.as_ref().map_or(1, |l| l[0]);
        let radius = cfg.params.radius.unwrap_or((n_max * ell).div_ceil(2));
        let s = return_probabilities(
            &g,
            h.as_ref(),
            ell,
            cfg.params.delta.unwrap_or(1),
            n_max,
            radius,
        )?;
        let rho = rho_ell(&s)?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        walk_tables(&mut r, &s, &rho);
        r.check("even roots monotone", rho.monotone)
            .check("final even root ≥ 0.95", rho.last_root >= AMENABLE_FLOOR);
        Ok(r.finish())
    }
}

pub struct ConvolutionBounds;

impl Experiment for ConvolutionBounds {
    fn id(&self) -> &'static str {
        "A11"
    }

    fn title(&self) -> &'static str {
        "orbit and convolution bounds for sphere measures"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let ell_max = cfg
            .params
            .ells
            .as_ref()
            .map_or(2, |l| l.iter().copied().max().unwrap_or(2));
        let n_max = cfg.params.n_max.unwrap_or(4);
        let delta = cfg.params.delta.unwrap_or(1);
        let rep = verify_convolution_bounds(&g, ell_max, n_max, delta)?;
        let segment = initial_segment_check(&g, &rep.constants, ell_max.max(4), 4)?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        set_constants(&mut r, &rep.constants);
        r.value("checked", rep.checked as f64, Method::Exact)
            .value("orbit_tightness", rep.orbit_tightness, Method::Exact)
            .value(
                "convolution_tightness",
                rep.convolution_tightness,
                Method::Exact,
            )
            .value("initial_segment_ratio", segment, Method::Exact);
        for v in rep
            .orbit_violations
            .iter()
            .chain(&rep.convolution_violations)
            .take(20)
        {
            r.note(format!("violation: {v}"));
        }
        r.check(
            "orbit bound for every g ∈ B(nℓ)",
            rep.orbit_violations.is_empty(),
        )
        .check(
            "convolution bound for every g ∈ B(nℓ)",
            rep.convolution_violations.is_empty(),
        )
        .check("C₃ > 0", rep.constants.c3 > 0.0)
        .check(
            "initial segments bounded by C₂e^{ω(ℓ − r)}",
            segment <= 1.0 + 1e-12,
        );
        Ok(r.finish())
    }
}

fn set_constants(r: &mut Report, c: &WalkConstants) {
    r.constants.delta = Some(c.delta);
    r.constants.c1 = Some(c.c1);
    r.constants.c2 = Some(c.c2);
    r.constants.c3 = Some(c.c3);
    r.constants.d0 = Some(c.d0);
    r.constants.d = Some(c.d);
}

pub struct RhoInfinity;

impl Experiment for RhoInfinity {
    fn id(&self) -> &'static str {
        "A12"
    }

    fn title(&self) -> &'static str {
        "exponential rate of sphere-measure walks"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(300.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let h = subgroup_from_spec(&g, cfg.subgroup_or("trivial"))?;
        let ells = cfg.params.ells.clone().unwrap_or_else(|| (1..=6).collect());
        let n_max = cfg.params.n_max.unwrap_or(24);
        let radius = cfg.params.radius.unwrap_or(8);
        let tol = cfg.params.tol.unwrap_or(RHO_INFINITY_RELATIVE);
        let rows = rho_infinity_curve(&g, h.as_ref(), &ells, n_max, radius, 0.0)?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        let mut t = Table::new(
            Method::Estimate,
            &["ell", "rho_ell", "log_rate", "target", "deviation"],
        );
        for row in &rows {
            t.push(vec![
                row.ell as f64,
                row.rho_ell,
                row.log_rate,
                row.target,
                row.deviation,
            ]);
        }
        r.table("curve", t);
        let last = rows.last().expect("ells are nonempty");
        r.value("log_rate", last.log_rate, Method::Estimate)
            .value("target", last.target, Method::Exact)
            .value("deviation", last.deviation, Method::Estimate);
        if let Some(w) = g.exact_growth_rate() {
            let c = WalkConstants::new(&g, 1, 12);
            set_constants(&mut r, &c);
            r.note(format!(
                "the sphere walk at ℓ has ρ_ℓ ≈ e^{{−ωℓ/2}}(1 + ℓ/2) on the tree, so (1/ℓ) ln ρ_ℓ approaches −ω/2 = {:.6} only logarithmically",
                -w / 2.0
            ));
        }
        r.check(
            format!("relative deviation at ℓ = {} within {tol}", last.ell),
            last.deviation <= tol,
        );
        Ok(r.finish())
    }
}

pub struct Grigorchuk;

impl Experiment for Grigorchuk {
    fn id(&self) -> &'static str {
        "A14"
    }

    fn title(&self) -> &'static str {
        "Grigorchuk's cogrowth formula"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let at_growth = grigorchuk_rho(3.0, 3.0)?;
        let at_root = grigorchuk_rho(3.0, 3f64.sqrt())?;
        let oracle = kesten(2);
        // lower bound from the walk on the tree, as in A4
        let g = Group::from_spec("free:2")?;
        let h = subgroup_from_spec(&g, "trivial")?;
        let s = return_probabilities(&g, h.as_ref(), 1, 1, 16, 8)?;
        let walk = rho_ell(&s)?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        r.value("rho_at_growth", at_growth.rho, Method::Exact)
            .value("rho_at_root", at_root.rho, Method::Exact)
            .value("kesten", oracle, Method::Exact)
            .value(
                "walk_lower_bound",
                walk.lower_bound,
                Method::CertifiedLowerBound,
            );
        r.note(at_root.note);
        r.check("grigorchuk_rho(3, 3) = 1", at_growth.rho == 1.0)
            .check(
                "grigorchuk_rho(3, √3) = √3/2 within 1e-12",
                (at_root.rho - 3f64.sqrt() / 2.0).abs() <= FORMULA,
            )
            .check(
                "agrees with 2√(2k − 1)/2k",
                (at_root.rho - oracle).abs() <= FORMULA,
            )
            .check(
                "walk lower bound stays below the formula",
                walk.lower_bound <= at_root.rho + FORMULA,
            );
        Ok(r.finish())
    }
}
