use std::collections::BTreeMap;

use horodyn::holder::holder_data;
use horodyn::sft::{Sft, SymWord};
use horodyn::subgroup::subgroup_from_spec;
use horodyn::transfer::{
    perron_data, renormalize, variation_bound, Potential, TransferMatrix, VariationConstants,
    PERRON_TOL,
};
use horodyn::twisted::{
    growth_gap_report, seed_bound_check, CodedSystem, GapConfig, GapReport, Verdict,
};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Experiment;
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{Method, Report, Table};
use crate::tolerances::*;

pub struct CaseOneRho;

impl Experiment for CaseOneRho {
    fn id(&self) -> &'static str {
        "A1"
    }

    fn title(&self) -> &'static str {
        "spectral radius of the normalized free-group coding"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(1.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let n = cfg.params.n_max.unwrap_or(40);
        let sys = CodedSystem::new(&g, "exact")?;
        let tm = TransferMatrix::with_default_depth(sys.sft(), &sys.potential)?;
        let series = tm.rho_sup_norm(n)?;
        let pd = perron_data(&tm, PERRON_TOL)?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        let mut t = Table::new(Method::Estimate, &["n", "sup_norm", "nth_root"]);
        for row in &series.rows {
            t.push(vec![row.n as f64, row.sup_norm, row.nth_root]);
        }
        r.table("rho", t);
        r.value("rho_sup_norm", series.estimate, Method::Estimate)
            .value("rho_perron", pd.rho, Method::Estimate)
            .value(
                "rho_lower_bound",
                series.lower_bound,
                Method::CertifiedLowerBound,
            )
            .value("perron_residual", pd.residual, Method::Estimate);
        if let Some(exact) = tm.sup_norms_exact(n.min(20)) {
            let ones = exact.iter().all(|q| q.is_one());
            r.value("exact_norms_one", f64::from(u8::from(ones)), Method::Exact);
            r.check("‖ℒⁿ𝟙‖ = 1 in exact arithmetic", ones);
        }
        r.check(
            "|ρ̂ − 1| ≤ 1e-12 (sup norms)",
            (series.estimate - 1.0).abs() <= RHO_EXACT,
        )
        .check(
            "|ρ − 1| ≤ 1e-12 (Perron)",
            (pd.rho - 1.0).abs() <= RHO_EXACT,
        );
        Ok(r.finish())
    }
}

/// ρ̂_λ(R, m) ≤ ρ over a grid of subgroups, radii and depths.
pub struct TwistedUpperBound;

impl Experiment for TwistedUpperBound {
    fn id(&self) -> &'static str {
        "A6"
    }

    fn title(&self) -> &'static str {
        "twisted estimates stay below the untwisted spectral radius"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let sys = CodedSystem::new(&g, "exact")?;
        let rho = sys.rho(60)?;
        let depths = cfg.params.depths.clone().unwrap_or_else(|| vec![2, 3]);
        let radii = cfg.params.radii.clone().unwrap_or_else(|| vec![2, 4, 6, 8]);
        let n_max = cfg.params.n_max.unwrap_or(60);
        let subgroups: Vec<&str> = match &cfg.subgroup {
            Some(h) => vec![h.as_str()],
            None => vec!["trivial", "ker-ab", "ker-mod:2", "ker-mod:3", "whole"],
        };
        let mut r = Report::new(self.id(), self.title(), cfg);
        r.value("rho", rho, Method::Estimate);
        let mut worst = f64::MIN;
        for h in subgroups {
            let space = subgroup_from_spec(&g, h)?;
            let scan = sys.scan(space.as_ref(), &radii, &depths, 0, n_max)?;
            let mut t = Table::new(
                Method::Estimate,
                &["radius", "depth", "estimate", "best_n", "lower_bound"],
            );
            for row in &scan.rows {
                t.push(vec![
                    row.radius as f64,
                    row.depth as f64,
                    row.estimate,
                    row.best_n as f64,
                    row.lower_bound,
                ]);
                worst = worst.max(row.estimate - rho);
            }
            r.table(h, t);
            r.check(format!("{h}: nondecreasing in R"), scan.monotone_in_radius);
            r.check(
                format!("{h}: Collatz–Wielandt bound ≤ ρ + 1e-9"),
                scan.rows
                    .iter()
                    .all(|x| x.lower_bound <= rho + RHO_LAMBDA_SLACK),
            );
        }
        r.value("max_excess", worst, Method::Estimate);
        r.check("every ρ̂_λ(R, m) ≤ ρ + 1e-9", worst <= RHO_LAMBDA_SLACK);
        Ok(r.finish())
    }
}

fn gap_tables(r: &mut Report, rep: &GapReport) {
    let mut t = Table::new(
        Method::Estimate,
        &["radius", "depth", "estimate", "best_n", "lower_bound"],
    );
    for row in &rep.curve {
        t.push(vec![
            row.radius as f64,
            row.depth as f64,
            row.estimate,
            row.best_n as f64,
            row.lower_bound,
        ]);
    }
    r.table("rho_lambda", t);
    let omega_g_method = if rep.omega_g_method == "exact" {
        Method::Exact
    } else {
        Method::Estimate
    };
    r.value("omega_g", rep.omega_g, omega_g_method)
        .value("omega_h", rep.omega_h, Method::Estimate)
        .value("rho", rep.rho, Method::Estimate)
        .value("growth_bound", rep.lower_bound, Method::Estimate)
        .value("margin", rep.margin, Method::Estimate)
        .value("folner_ratio", rep.folner_ratio, Method::Exact);
    if let Some(p) = rep.plateau {
        r.value("plateau", p, Method::Estimate);
    }
    if let Some(last) = rep.curve.last() {
        r.value(
            "rho_lambda_lower_bound",
            last.lower_bound,
            Method::CertifiedLowerBound,
        );
    }
    r.note(format!("verdict: {}", rep.verdict));
}

fn seed_table(r: &mut Report, sys: &CodedSystem, h: &str, n: usize) -> Result<bool> {
    let space = subgroup_from_spec(&sys.ext.group, h)?;
    let rep = seed_bound_check(sys, space.as_ref(), n, 4)?;
    let mut t = Table::new(
        Method::Estimate,
        &["n", "sphere_sum", "iterate_norm", "bound"],
    );
    for row in &rep.rows {
        t.push(vec![row.n as f64, row.lhs, row.iterate_norm, row.rhs]);
    }
    r.table("seed_bound", t);
    r.value("seed_b2", rep.b2, Method::Exact)
        .value("seed_c", rep.c, Method::Exact)
        .value("seed_cover_r", rep.cover.0 as f64, Method::Exact)
        .value("seed_cover_n", rep.cover.1 as f64, Method::Exact);
    Ok(rep.pass)
}

pub struct TreeGap;

impl Experiment for TreeGap {
    fn id(&self) -> &'static str {
        "A7"
    }

    fn title(&self) -> &'static str {
        "growth gap for the trivial subgroup of the free group"
    }

    fn time_budget(&self) -> Option<f64> {
        Some(120.0)
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let h = cfg.subgroup_or("trivial");
        let config = GapConfig {
            radii: cfg.params.radii.clone().unwrap_or_else(|| vec![10, 11, 12]),
            n_max: cfg.params.n_max.unwrap_or(60),
            ..GapConfig::default()
        };
        let rep = growth_gap_report(&g, h, &config)?;
        let sys = CodedSystem::new(&g, "exact")?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        gap_tables(&mut r, &rep);
        let seed_ok = seed_table(&mut r, &sys, h, 8)?;
        let target = 3f64.powf(-0.5);
        r.value("target", target, Method::Exact);
        let last = rep.curve.last().map_or(0.0, |x| x.estimate);
        r.check(
            "verdict CONSISTENT-GAP",
            rep.verdict == Verdict::ConsistentGap,
        )
        .check(
            "plateau within [1/3, 0.7]",
            rep.plateau.is_some_and(|p| (1.0 / 3.0..=0.7).contains(&p)),
        )
        .check(
            "plateau ≥ e^{ω̂_H − ω̂_G}",
            rep.plateau
                .is_some_and(|p| p >= rep.lower_bound - RHO_LAMBDA_SLACK),
        )
        .check(
            "|ρ̂_λ − 3^{−1/2}| ≤ 1e-2 at the largest R",
            (last - target).abs() <= TREE_TARGET,
        )
        .check("seed bound for n ≤ 8", seed_ok);
        Ok(r.finish())
    }
}

pub struct AmenableTwist;

impl Experiment for AmenableTwist {
    fn id(&self) -> &'static str {
        "A8"
    }

    fn title(&self) -> &'static str {
        "twisted spectral radius over the abelianization kernel"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let g = cfg.group_or("free:2")?;
        let h = cfg.subgroup_or("ker-ab");
        let config = GapConfig {
            radii: cfg
                .params
                .radii
                .clone()
                .unwrap_or_else(|| vec![10, 15, 20, 25, 30]),
            n_max: cfg.params.n_max.unwrap_or(120),
            ..GapConfig::default()
        };
        let rep = growth_gap_report(&g, h, &config)?;
        let sys = CodedSystem::new(&g, "exact")?;
        let mut r = Report::new(self.id(), self.title(), cfg);
        gap_tables(&mut r, &rep);
        let seed_ok = seed_table(&mut r, &sys, h, 8)?;
        let last = rep.curve.last().map_or(0.0, |x| x.estimate);
        let nondecreasing = rep
            .curve
            .windows(2)
            .all(|w| w[1].estimate >= w[0].estimate - MONOTONE_SLACK);
        r.check("ρ̂_λ(R) nondecreasing", nondecreasing)
            .check("ρ̂_λ ≥ 0.95 at the largest R", last >= AMENABLE_FLOOR)
            .check(
                "ρ̂_λ ≤ ρ + 1e-9",
                rep.curve
                    .iter()
                    .all(|x| x.estimate <= rep.rho + RHO_LAMBDA_SLACK),
            )
            .check(
                "verdict CONSISTENT-AMENABLE",
                rep.verdict == Verdict::ConsistentAmenable,
            )
            .check("seed bound for n ≤ 8", seed_ok);
        Ok(r.finish())
    }
}

fn golden() -> Sft {
    Sft::new(
        vec!["0".into(), "1".into()],
        2,
        vec![vec![0, 0], vec![0, 1], vec![1, 0]],
    )
    .expect("golden mean shift")
}

fn full(k: u16) -> Sft {
    let allowed = (0..k)
        .flat_map(|a| (0..k).map(move |b| vec![a, b]))
        .collect();
    Sft::new((0..k).map(|s| s.to_string()).collect(), 2, allowed).expect("full shift")
}

fn random_potential(rng: &mut ChaCha8Rng, sft: &Sft, depth: usize) -> Result<Potential> {
    let table: BTreeMap<SymWord, f64> = sft
        .words(depth)
        .into_iter()
        .map(|w| (w, rng.gen_range(0.05..2.0)))
        .collect();
    Ok(Potential::table(sft, depth, &table)?)
}

/// Random instances of the Hölder and renormalization identities.
pub struct HolderSuite;

impl Experiment for HolderSuite {
    fn id(&self) -> &'static str {
        "A13"
    }

    fn title(&self) -> &'static str {
        "Hölder sandwich, submultiplicativity, variation bound and renormalization"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let cases = cfg.params.cases.unwrap_or(100);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.params.seed.unwrap_or(1));
        let shifts = [golden(), full(2), full(3)];
        let (mut sandwich, mut submult, mut variation, mut stochastic) =
            (0usize, 0usize, 0usize, 0usize);
        let (mut worst_submult, mut worst_variation, mut worst_stochastic) =
            (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..cases {
            let sft = &shifts[rng.gen_range(0..shifts.len())];
            let alpha = rng.gen_range(0.2..1.0);

            let m = rng.gen_range(1..5);
            let words = sft.words(m);
            let a: Vec<f64> = words.iter().map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b: Vec<f64> = words.iter().map(|_| rng.gen_range(-3.0..3.0)).collect();
            let r = (-rng.gen_range(-0.5..4.0f64)).exp();
            if holder_data(&words, &a, alpha, Some(r)).sandwich_holds() {
                sandwich += 1;
            }
            let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let lhs = holder_data(&words, &ab, alpha, None).norm;
            let rhs = holder_data(&words, &a, alpha, None).norm
                * holder_data(&words, &b, alpha, None).norm;
            worst_submult = worst_submult.max(lhs / rhs);
            if lhs <= rhs * (1.0 + 1e-12) {
                submult += 1;
            }

            let f_depth = rng.gen_range(1..3);
            let f = random_potential(&mut rng, sft, f_depth)?.with_alpha(alpha)?;
            let tm = TransferMatrix::new(sft, &f, sft.memory().max(f_depth) + rng.gen_range(0..2))?;
            let phi: Vec<f64> = (0..tm.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let consts = VariationConstants::for_sft(sft, alpha, 1);
            let n = rng.gen_range(1..5);
            let vb = variation_bound(sft, &f, &tm, &consts, &phi, n);
            worst_variation = worst_variation.max(vb.lhs / vb.rhs);
            if vb.holds {
                variation += 1;
            }

            let gm = golden();
            let depth = rng.gen_range(1..4);
            let f = random_potential(&mut rng, &gm, depth)?;
            let tm = TransferMatrix::with_default_depth(&gm, &f)?;
            // the identity is only as good as the eigenvector residual
            let pd = perron_data(&tm, 1e-13)?;
            let fr = renormalize(&gm, &f, &tm, &pd)?;
            let tr = TransferMatrix::with_default_depth(&gm, &fr)?;
            let dev = tr
                .apply(&vec![1.0; tr.dim()])
                .iter()
                .fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
            worst_stochastic = worst_stochastic.max(dev);
            if dev <= STOCHASTIC {
                stochastic += 1;
            }
        }
        let mut r = Report::new(self.id(), self.title(), cfg);
        r.value("cases", cases as f64, Method::Exact)
            .value("sandwich_holds", sandwich as f64, Method::Exact)
            .value("submultiplicative", submult as f64, Method::Exact)
            .value("variation_holds", variation as f64, Method::Exact)
            .value("stochastic", stochastic as f64, Method::Exact)
            .value("worst_submult_ratio", worst_submult, Method::Estimate)
            .value("worst_variation_ratio", worst_variation, Method::Estimate)
            .value(
                "worst_stochastic_deviation",
                worst_stochastic,
                Method::Estimate,
            );
        r.check("Hölder sandwich on every instance", sandwich == cases)
            .check("‖fΦ‖ ≤ ‖f‖‖Φ‖ on every instance", submult == cases)
            .check(
                "variation inequality with closed-form C_n",
                variation == cases,
            )
            .check("ℒ′𝟙 = 𝟙 within 1e-10", stochastic == cases);
        Ok(r.finish())
    }
}
