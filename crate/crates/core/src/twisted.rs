//! Transfer operators twisted by the right-regular representation on
//! ℓ²(H\G), restricted to a Schreier ball.
//!
//! (ℒ_λΦ)(x)(y) = Σ_{σz = x} F(z) Φ(z)(y·θ(z)⁻¹), with coordinates leaving
//! the ball dropped. Functions of depth m are stored word-major, one block
//! of |Y| values per word.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::MemBudget;
use crate::error::{Error, Result};
use crate::extension::ExtensionSystem;
use crate::group::{BallTable, Element, Group, GrowthSeries};
use crate::holder::variation_by;
use crate::horocode::{build_coding, CodingParams, HoroCoding};
use crate::linalg::{sup_norm, Csr};
use crate::randwalk::{omega_from_counts, subgroup_sphere_counts};
use crate::sft::Sft;
use crate::subgroup::{subgroup_from_spec, CosetSpace, SchreierGraph, BOUNDARY};
use crate::transfer::{
    log_power_rows, Potential, RhoRow, TransferMatrix, VariationBound, VariationConstants,
};

#[derive(Debug, Clone)]
pub struct TwistedMatrix {
    base: TransferMatrix,
    cosets: usize,
    radius: usize,
    /// label slot of each word of the index
    label_of: Vec<u32>,
    /// per label g: y ↦ y·g⁻¹, or BOUNDARY
    perms: Vec<Vec<u32>>,
}

impl TwistedMatrix {
    pub fn new(
        ext: &ExtensionSystem,
        f: &Potential,
        space: &dyn CosetSpace,
        schreier: &SchreierGraph,
        m: usize,
    ) -> Result<Self> {
        Self::with_budget(ext, f, space, schreier, m, MemBudget::from_env())
    }

    pub fn with_budget(
        ext: &ExtensionSystem,
        f: &Potential,
        space: &dyn CosetSpace,
        schreier: &SchreierGraph,
        m: usize,
        budget: MemBudget,
    ) -> Result<Self> {
        let required = ext.sft.memory().max(f.depth()).max(ext.theta.depth());
        if m < required {
            return Err(Error::Depth { given: m, required });
        }
        let words = ext.sft.words(m).len();
        let dim = words as u128 * schreier.len() as u128;
        // three vectors live during a product
        budget.check(dim * 24, || {
            format!(
                "twisted operator of dimension {dim} = {words} words × {} cosets",
                schreier.len()
            )
        })?;
        let base = TransferMatrix::new(&ext.sft, f, m)?;
        let mut slots: HashMap<Element, u32> = HashMap::new();
        let mut labels = Vec::new();
        let label_of = base
            .index()
            .iter()
            .map(|w| {
                let g = ext.theta.get(&w[..ext.theta.depth()]).ok_or_else(|| {
                    Error::input(format!("word `{}` is not labelled", ext.sft.format_word(w)))
                })?;
                Ok(*slots.entry(g.clone()).or_insert_with(|| {
                    labels.push(g.clone());
                    labels.len() as u32 - 1
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        let group = &ext.group;
        let perms = labels
            .iter()
            .map(|g| {
                let word = group.geodesic(&group.inv(g));
                (0..schreier.len() as u32)
                    .map(|y| match schreier.follow(y, &word) {
                        Some(z) => z,
                        // the path left the ball; the endpoint may not have
                        None => schreier
                            .id(&space.act_word(schreier.coset(y), &word))
                            .unwrap_or(BOUNDARY),
                    })
                    .collect()
            })
            .collect();
        Ok(TwistedMatrix {
            base,
            cosets: schreier.len(),
            radius: schreier.radius,
            label_of,
            perms,
        })
    }

    pub fn base(&self) -> &TransferMatrix {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.base.depth()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn words(&self) -> usize {
        self.base.dim()
    }

    pub fn cosets(&self) -> usize {
        self.cosets
    }

    pub fn dim(&self) -> usize {
        self.words() * self.cosets
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let y = self.cosets;
        let mut out = vec![0.0; self.dim()];
        out.par_chunks_mut(y).enumerate().for_each(|(i, block)| {
            for (j, fv) in self.base.matrix().row(i) {
                let j = j as usize;
                let perm = &self.perms[self.label_of[j] as usize];
                let src = &v[j * y..(j + 1) * y];
                for (t, o) in perm.iter().zip(block.iter_mut()) {
                    if *t != BOUNDARY {
                        *o += fv * src[*t as usize];
                    }
                }
            }
        });
        out
    }

    /// sup over words of the ℓ²(Y) norm.
    pub fn norm(&self, v: &[f64]) -> f64 {
        v.chunks(self.cosets)
            .map(|b| b.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn apply_n(&self, v: &[f64], n: usize) -> Vec<f64> {
        (0..n).fold(v.to_vec(), |acc, _| self.apply(&acc))
    }

    /// Explicit sparse form, for small instances.
    pub fn to_csr(&self) -> Csr<f64> {
        let y = self.cosets;
        let mut rows = Vec::with_capacity(self.dim());
        for i in 0..self.words() {
            for c in 0..y {
                let mut row = Vec::new();
                for (j, fv) in self.base.matrix().row(i) {
                    let t = self.perms[self.label_of[j as usize] as usize][c];
                    if t != BOUNDARY {
                        row.push(((j as usize * y + t as usize) as u32, *fv));
                    }
                }
                rows.push(row);
            }
        }
        Csr::from_rows(self.dim(), rows)
    }
}

/// Ψ ≡ 𝟙_Z with Z = y₀·B(R_seed), constant in the symbolic coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedFunction {
    pub radius: usize,
    pub support: Vec<u32>,
}

impl SeedFunction {
    pub fn new(schreier: &SchreierGraph, radius: usize) -> Self {
        SeedFunction {
            radius,
            support: schreier.ball_ids(radius),
        }
    }

    pub fn vector(&self, tm: &TwistedMatrix) -> Vec<f64> {
        let mut block = vec![0.0; tm.cosets()];
        for &y in &self.support {
            block[y as usize] = 1.0;
        }
        block.repeat(tm.words())
    }

    pub fn norm(&self) -> f64 {
        (self.support.len() as f64).sqrt()
    }
}

/// ‖ℒ_λⁿΨ‖/‖Ψ‖ and its roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistedRho {
    pub rows: Vec<RhoRow>,
    /// max over n of the n-th roots; nondecreasing in the truncation radius
    pub estimate: f64,
    pub best_n: usize,
    pub method: &'static str,
    /// Collatz–Wielandt bound of the truncated operator
    pub lower_bound: f64,
}

pub fn rho_lambda(tm: &TwistedMatrix, seed: &SeedFunction, n_max: usize) -> Result<TwistedRho> {
    if seed.support.is_empty() {
        return Err(Error::input("seed vanishes on the truncation"));
    }
    if n_max < 1 {
        return Err(Error::input("need at least one iterate"));
    }
    let (rows, cw) = log_power_rows(n_max, seed.vector(tm), |v| tm.apply(v), |v| tm.norm(v));
    let (best_n, estimate) = rows
        .iter()
        .map(|r| (r.n, r.nth_root))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(TwistedRho {
        rows,
        estimate,
        best_n,
        method: "estimate",
        lower_bound: cw,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub radius: usize,
    pub depth: usize,
    pub estimate: f64,
    pub best_n: usize,
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaScan {
    pub rows: Vec<ScanRow>,
    /// ρ̂_λ(R′, m) ≥ ρ̂_λ(R, m) − 1e-12 for R < R′
    pub monotone_in_radius: bool,
    pub max_estimate: f64,
}

/// A coding system ready for twisting: extension, Case-1 potential and the
/// untwisted spectral radius.
#[derive(Debug, Clone)]
pub struct CodedSystem {
    pub coding: HoroCoding,
    pub ext: ExtensionSystem,
    pub potential: Potential,
    pub omega: f64,
}

impl CodedSystem {
    /// Restricts to a visible communicating class when the coding is
    /// reducible.
    pub fn new(group: &Group, backend: &str) -> Result<Self> {
        let coding = build_coding(group, &CodingParams::default(), backend)?;
        let ext = if coding.sft.is_irreducible() {
            coding.extension()
        } else {
            let sel = coding.select_visible_component(2, 4, 2)?;
            let dec = coding.sft.communicating_classes();
            let comp = dec
                .component(sel.class)
                .ok_or_else(|| Error::Consistency("selected class has no subshift".into()))?;
            coding.extension().restricted(comp.clone())?
        };
        let omega = group.exact_growth_rate().ok_or_else(|| {
            Error::input(format!("no closed-form growth rate for `{}`", group.spec()))
        })?;
        let potential = Potential::case1(&ext.sft, group)?;
        Ok(CodedSystem {
            coding,
            ext,
            potential,
            omega,
        })
    }

    pub fn sft(&self) -> &Sft {
        &self.ext.sft
    }

    pub fn default_depth(&self) -> usize {
        self.sft()
            .memory()
            .max(self.potential.depth())
            .max(self.ext.theta.depth())
    }

    pub fn rho(&self, n_max: usize) -> Result<f64> {
        let tm = TransferMatrix::with_default_depth(self.sft(), &self.potential)?;
        Ok(tm.rho_sup_norm(n_max)?.estimate)
    }

    pub fn twisted(
        &self,
        space: &dyn CosetSpace,
        radius: usize,
        depth: usize,
    ) -> Result<(TwistedMatrix, SchreierGraph)> {
        let schreier = SchreierGraph::build(&self.ext.group, space, radius)?;
        let tm = TwistedMatrix::new(&self.ext, &self.potential, space, &schreier, depth)?;
        Ok((tm, schreier))
    }

    pub fn scan(
        &self,
        space: &dyn CosetSpace,
        radii: &[usize],
        depths: &[usize],
        seed_radius: usize,
        n_max: usize,
    ) -> Result<LambdaScan> {
        let mut rows = Vec::new();
        for &m in depths {
            for &r in radii {
                let (tm, schreier) = self.twisted(space, r, m)?;
                let t = rho_lambda(&tm, &SeedFunction::new(&schreier, seed_radius), n_max)?;
                rows.push(ScanRow {
                    radius: r,
                    depth: m,
                    estimate: t.estimate,
                    best_n: t.best_n,
                    lower_bound: t.lower_bound,
                });
            }
        }
        let monotone_in_radius = rows.iter().all(|a| {
            rows.iter()
                .filter(|b| b.depth == a.depth && b.radius > a.radius)
                .all(|b| b.estimate >= a.estimate - 1e-12)
        });
        let max_estimate = rows.iter().map(|r| r.estimate).fold(0.0, f64::max);
        Ok(LambdaScan {
            rows,
            monotone_in_radius,
            max_estimate,
        })
    }
}

/// ‖ℒ_λⁿΦ‖ and ‖ℒⁿ𝟙‖‖Φ‖.
pub fn operator_bound(tm: &TwistedMatrix, phi: &[f64], n: usize) -> (f64, f64) {
    let lhs = tm.norm(&tm.apply_n(phi, n));
    let ones = tm.base().apply_n(&vec![1.0; tm.words()], n);
    (lhs, sup_norm(&ones) * tm.norm(phi))
}

/// Δ_α of a depth-m ℓ²(Y)-valued function.
pub fn twisted_variation(tm: &TwistedMatrix, v: &[f64], alpha: f64) -> f64 {
    let blocks: Vec<&[f64]> = v.chunks(tm.cosets()).collect();
    variation_by(tm.base().index(), &blocks, alpha, 0, |a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    })
}

/// The variation inequality for ℒ_λⁿ with the closed-form C_n.
pub fn twisted_variation_bound(
    sft: &Sft,
    f: &Potential,
    tm: &TwistedMatrix,
    consts: &VariationConstants,
    phi: &[f64],
    n: usize,
) -> VariationBound {
    let a = consts.alpha;
    let iterate = tm.apply_n(phi, n);
    let ones = sup_norm(&tm.base().apply_n(&vec![1.0; tm.words()], n));
    let lhs = twisted_variation(tm, &iterate, a);
    let c_n = consts.c_n(sft, f, n, ones);
    let rhs = (-(n as f64) * a).exp() * ones * twisted_variation(tm, phi, a) + c_n * tm.norm(phi);
    VariationBound {
        n,
        lhs,
        rhs,
        c_n,
        holds: lhs <= rhs * (1.0 + 1e-12) + 1e-300,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedBoundRow {
    pub n: usize,
    /// Σ_{g ∈ S(n) ∩ H} e^{−ω|g|}
    pub lhs: f64,
    pub iterate_norm: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedBoundReport {
    /// 1/C ≤ F_n / e^{−ω|θ_n|} ≤ C over the words checked
    pub c: f64,
    pub cover: (usize, usize),
    pub b2: f64,
    pub rows: Vec<SeedBoundRow>,
    pub pass: bool,
}

/// B₂ = C |B(R)|² e^{2ωR} Σ_{k ≤ N} ‖ℒᵏ𝟙‖ with (R, N) from the sphere cover
/// search and Ψ = 𝟙_{y₀·B(R)}.
pub fn seed_bound_check(
    sys: &CodedSystem,
    space: &dyn CosetSpace,
    n_max: usize,
    cover_n: usize,
) -> Result<SeedBoundReport> {
    let group = &sys.ext.group;
    let sft = sys.sft();
    let omega = sys.omega;
    let mut log_c = 0.0f64;
    for n in 1..=n_max {
        for w in sft.words(n + sys.ext.theta.depth() - 1) {
            let f_n: f64 = (0..n).map(|i| sys.potential.value(&w[i..]).ln()).sum();
            let len = group.word_length(&sys.ext.cocycle(&w, n)?) as f64;
            log_c = log_c.max((f_n + omega * len).abs());
        }
    }
    let c = log_c.exp();
    let (mut big_r, mut big_n) = (0, 0);
    for s in sft.words(1) {
        for n in 1..=cover_n {
            let rep = sys.ext.sphere_cover_search(&s, n, 2, 2)?;
            let (r, k) = rep.found.ok_or_else(|| {
                Error::Exhausted(format!(
                    "no sphere cover for [{}] at n = {n}",
                    sft.format_word(&s)
                ))
            })?;
            big_r = big_r.max(r);
            big_n = big_n.max(k);
        }
    }
    let ball = BallTable::build(group, big_r)?.ball(big_r).count() as f64;
    let base = TransferMatrix::new(sft, &sys.potential, sys.default_depth())?;
    let mut v = vec![1.0; base.dim()];
    let mut powers = sup_norm(&v);
    for _ in 0..big_n {
        v = base.apply(&v);
        powers += sup_norm(&v);
    }
    let b2 = c * ball * ball * (2.0 * omega * big_r as f64).exp() * powers;

    let counts = subgroup_sphere_counts(group, space, n_max)?;
    let schreier = SchreierGraph::build(group, space, n_max + big_n + big_r + 1)?;
    let tm = TwistedMatrix::new(
        &sys.ext,
        &sys.potential,
        space,
        &schreier,
        sys.default_depth(),
    )?;
    let seed = SeedFunction::new(&schreier, big_r);
    let mut psi = seed.vector(&tm);
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            psi = tm.apply(&psi);
        }
        let lhs = counts[n] as f64 * (-omega * n as f64).exp();
        let iterate_norm = tm.norm(&psi);
        let rhs = b2 * iterate_norm;
        rows.push(SeedBoundRow {
            n,
            lhs,
            iterate_norm,
            rhs,
            holds: lhs <= rhs * (1.0 + 1e-12),
        });
    }
    Ok(SeedBoundReport {
        c,
        cover: (big_r, big_n),
        b2,
        pass: rows.iter().all(|r| r.holds),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONSISTENT-AMENABLE")]
    ConsistentAmenable,
    #[serde(rename = "CONSISTENT-GAP")]
    ConsistentGap,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentAmenable => "CONSISTENT-AMENABLE",
            Verdict::ConsistentGap => "CONSISTENT-GAP",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapConfig {
    pub backend: String,
    pub radii: Vec<usize>,
    pub depth: Option<usize>,
    pub seed_radius: usize,
    pub n_max: usize,
    /// radius for the subgroup sphere counts
    pub growth_radius: usize,
    pub plateau_window: usize,
    pub plateau_tol: f64,
    pub amenable_tol: f64,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig {
            backend: "exact".into(),
            radii: vec![8, 10, 12],
            depth: None,
            seed_radius: 0,
            n_max: 120,
            growth_radius: 20,
            plateau_window: 3,
            plateau_tol: 1e-3,
            amenable_tol: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub group: String,
    pub subgroup: String,
    pub config: GapConfig,
    pub omega_g: f64,
    pub omega_g_method: &'static str,
    pub omega_h: f64,
    pub omega_h_method: &'static str,
    pub rho: f64,
    pub curve: Vec<ScanRow>,
    pub monotone_in_radius: bool,
    /// e^{ω̂_H − ω̂_G}
    pub lower_bound: f64,
    pub plateau: Option<f64>,
    pub margin: f64,
    /// |S_Y(R)| / |B_Y(R)| at the largest radius
    pub folner_ratio: f64,
    pub verdict: Verdict,
}

pub fn growth_gap_report(group: &Group, subgroup: &str, config: &GapConfig) -> Result<GapReport> {
    if config.radii.is_empty() || config.plateau_window == 0 {
        return Err(Error::input(
            "gap report needs at least one radius and a positive window",
        ));
    }
    let space = subgroup_from_spec(group, subgroup)?;
    let sys = CodedSystem::new(group, &config.backend)?;
    let (omega_g, omega_g_method) = match group.exact_growth_rate() {
        Some(w) => (w, "exact"),
        None => (
            GrowthSeries::exact(group, config.growth_radius).omega_hat,
            "estimate",
        ),
    };
    let counts = subgroup_sphere_counts(group, space.as_ref(), config.growth_radius)?;
    let omega_h = omega_from_counts(&counts);
    let rho = sys.rho(60)?;
    let depth = config.depth.unwrap_or_else(|| sys.default_depth());
    let scan = sys.scan(
        space.as_ref(),
        &config.radii,
        &[depth],
        config.seed_radius,
        config.n_max,
    )?;
    let estimates: Vec<f64> = scan.rows.iter().map(|r| r.estimate).collect();
    let last = *estimates.last().expect("radii are nonempty");
    let plateau = (estimates.len() >= config.plateau_window)
        .then(|| &estimates[estimates.len() - config.plateau_window..])
        .filter(|w| {
            let hi = w.iter().copied().fold(f64::MIN, f64::max);
            let lo = w.iter().copied().fold(f64::MAX, f64::min);
            hi - lo <= config.plateau_tol
        })
        .map(|_| last);
    let lower_bound = (omega_h - omega_g).exp();
    let verdict = if last >= rho - config.amenable_tol {
        Verdict::ConsistentAmenable
    } else if plateau.is_some_and(|p| p >= lower_bound - 1e-9) {
        Verdict::ConsistentGap
    } else {
        Verdict::Inconclusive
    };
    let r_max = *config.radii.iter().max().unwrap();
    let schreier = SchreierGraph::build(group, space.as_ref(), r_max)?;
    let folner_ratio = schreier.folner_profile().last().map_or(0.0, |p| p.2);
    Ok(GapReport {
        group: group.spec(),
        subgroup: space.spec(),
        config: config.clone(),
        omega_g,
        omega_g_method,
        omega_h,
        omega_h_method: "estimate",
        rho,
        curve: scan.rows,
        monotone_in_radius: scan.monotone_in_radius,
        lower_bound,
        plateau,
        margin: rho - last,
        folner_ratio,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> (Group, CodedSystem) {
        let g = Group::from_spec("free:2").unwrap();
        let s = CodedSystem::new(&g, "exact").unwrap();
        (g, s)
    }

    #[test]
    fn whole_group_is_untwisted() {
        let (g, sys) = free();
        let h = subgroup_from_spec(&g, "whole").unwrap();
        let (tm, _) = sys.twisted(h.as_ref(), 3, 2).unwrap();
        assert_eq!(tm.cosets(), 1);
        assert_eq!(&tm.to_csr(), tm.base().matrix());
    }

    #[test]
    fn trivial_subgroup_radius_one() {
        let (g, sys) = free();
        let h = subgroup_from_spec(&g, "trivial").unwrap();
        let (tm, schreier) = sys.twisted(h.as_ref(), 1, 2).unwrap();
        assert_eq!(tm.dim(), 12 * 5);
        // oracle: entry ((w, y), (a·w[..1], y·θ(a·w)⁻¹)) = 1/3
        let csr = tm.to_csr();
        let idx = tm.base().index();
        for (i, w) in idx.iter().enumerate() {
            for y in 0..5u32 {
                let mut expect = Vec::new();
                for a in 0..4u16 {
                    let u = vec![a, w[0]];
                    let Some(j) = tm.base().position(&u) else {
                        continue;
                    };
                    let t = sys.coding.theta_of(a);
                    let target = h.act(schreier.coset(y), g.generators().inverse(t));
                    if let Some(z) = schreier.id(&target) {
                        expect.push((j * 5 + z as usize) as u32);
                    }
                }
                expect.sort();
                let got: Vec<u32> = csr.row(i * 5 + y as usize).map(|(c, _)| c).collect();
                assert_eq!(got, expect);
                assert!(csr
                    .row(i * 5 + y as usize)
                    .all(|(_, v)| (*v - 1.0 / 3.0).abs() < 1e-16));
            }
        }
    }

    #[test]
    fn tree_estimate_is_inverse_sqrt_three() {
        let (g, sys) = free();
        let h = subgroup_from_spec(&g, "trivial").unwrap();
        let scan = sys.scan(h.as_ref(), &[4, 6, 8], &[2, 3], 0, 40).unwrap();
        assert!(scan.monotone_in_radius);
        for r in &scan.rows {
            assert!((r.estimate - 3f64.powf(-0.5)).abs() < 1e-9, "{r:?}");
            assert!(r.estimate <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn whole_group_gives_rho() {
        let (g, sys) = free();
        let h = subgroup_from_spec(&g, "whole").unwrap();
        let scan = sys.scan(h.as_ref(), &[2], &[2], 0, 20).unwrap();
        assert!((scan.rows[0].estimate - 1.0).abs() < 1e-12);
        assert!((scan.rows[0].lower_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_scales_the_operator() {
        let (g, sys) = free();
        let h = subgroup_from_spec(&g, "trivial").unwrap();
        let schreier = SchreierGraph::build(&g, h.as_ref(), 2).unwrap();
        let a = TwistedMatrix::new(&sys.ext, &sys.potential, h.as_ref(), &schreier, 2).unwrap();
        let b = TwistedMatrix::new(
            &sys.ext,
            &sys.potential.scaled(2.0).unwrap(),
            h.as_ref(),
            &schreier,
            2,
        )
        .unwrap();
        let v: Vec<f64> = (0..a.dim()).map(|i| (i % 7) as f64).collect();
        for (x, y) in a.apply(&v).iter().zip(b.apply(&v)) {
            assert!((2.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn seed_bound_on_free_group() {
        let (g, sys) = free();
        for sub in ["trivial", "ker-ab", "whole"] {
            let h = subgroup_from_spec(&g, sub).unwrap();
            let rep = seed_bound_check(&sys, h.as_ref(), 6, 3).unwrap();
            assert!(rep.pass, "{sub}: {rep:?}");
            assert!((rep.c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn depth_is_checked() {
        let (g, sys) = free();
        let h = subgroup_from_spec(&g, "trivial").unwrap();
        assert!(matches!(
            sys.twisted(h.as_ref(), 1, 1),
            Err(Error::Depth { .. })
        ));
    }
}
