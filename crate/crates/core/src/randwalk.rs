//! Random walks driven by uniform measures on shells of the Cayley graph,
//! pushed to coset spaces.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::budget::MemBudget;
use crate::error::{Error, Result};
use crate::group::{BallTable, Element, Group, GrowthSeries, Word};
use crate::subgroup::{Coset, CosetSpace, SchreierGraph};

/// Uniform probability on S(ℓ) = B(ℓ) \ B(ℓ − δ).
#[derive(Debug, Clone)]
pub struct SphereMeasure {
    pub ell: usize,
    pub delta: usize,
    pub support: Vec<(Element, Word)>,
}

impl SphereMeasure {
    pub fn new(group: &Group, ell: usize, delta: usize) -> Result<Self> {
        if delta == 0 {
            return Err(Error::input("shell width δ must be positive"));
        }
        let table = BallTable::build(group, ell)?;
        let lo = (ell + 1).saturating_sub(delta);
        let support: Vec<(Element, Word)> = (lo..=ell)
            .flat_map(|n| {
                table
                    .sphere(n)
                    .iter()
                    .cloned()
                    .zip(table.sphere_words(n).iter().cloned())
            })
            .collect();
        if support.is_empty() {
            return Err(Error::input(format!("shell S({ell}) is empty")));
        }
        Ok(SphereMeasure {
            ell,
            delta,
            support,
        })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.support.len() as f64
    }

    pub fn is_symmetric(&self, group: &Group) -> bool {
        let set: std::collections::HashSet<&Element> =
            self.support.iter().map(|(g, _)| g).collect();
        self.support
            .iter()
            .all(|(g, _)| set.contains(&group.inv(g)))
    }
}

/// Constants of the convolution estimates, from C₁ = max_r |B(r)|e^{−ωr}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkConstants {
    pub omega: f64,
    pub delta: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub d0: f64,
    pub d: f64,
}

impl WalkConstants {
    /// `omega` is the exact growth rate when known, else a BFS estimate
    /// to `radius`.
    pub fn new(group: &Group, delta: usize, radius: usize) -> Self {
        let series = GrowthSeries::exact(group, radius);
        let omega = group.exact_growth_rate().unwrap_or(series.omega_hat);
        let c1 = series
            .balls
            .iter()
            .enumerate()
            .map(|(r, &b)| b as f64 * (-omega * r as f64).exp())
            .fold(1.0, f64::max);
        let d = delta as f64;
        let c2 = c1 * (5.0 * omega * d).exp();
        let c3 = 1.0 - c1 * (-omega * d).exp();
        let d0 = c2 * (2.0 * omega * d).exp();
        WalkConstants {
            omega,
            delta: d,
            c1,
            c2,
            c3,
            d0,
            d: if c3 > 0.0 { d0 / c3 } else { f64::INFINITY },
        }
    }

    /// (1/C₁)e^{−ωℓ} ≤ μ_ℓ(g) ≤ (1/C₃)e^{−ωℓ}; `None` when C₃ ≤ 0.
    pub fn measure_sandwich(&self, m: &SphereMeasure) -> Option<bool> {
        if self.c3 <= 0.0 {
            return None;
        }
        let e = (-self.omega * m.ell as f64).exp();
        let w = m.weight();
        Some(e / self.c1 <= w * (1.0 + 1e-12) && w <= e / self.c3 * (1.0 + 1e-12))
    }

    pub fn orbit_bound(&self, ell: usize, n: usize, len: usize) -> f64 {
        let (l, n) = (ell as f64, n as f64);
        (self.d0 * (l / self.delta + 1.0)).powf(n) * (self.omega * (n * l - len as f64) / 2.0).exp()
    }

    pub fn convolution_bound(&self, ell: usize, n: usize, len: usize) -> f64 {
        let (l, n) = (ell as f64, n as f64);
        (self.d * (l / self.delta + 1.0)).powf(n) * (-self.omega * (n * l + len as f64) / 2.0).exp()
    }
}

/// |𝒪_ℓ(g, n)| for every g at once: counts of n-tuples of shell elements
/// by their product.
pub fn orbit_counts(group: &Group, m: &SphereMeasure, n: usize) -> HashMap<Element, u128> {
    let mut cur: HashMap<Element, u128> = HashMap::from([(group.identity(), 1)]);
    for _ in 0..n {
        let mut next: HashMap<Element, u128> = HashMap::with_capacity(cur.len() * 2);
        for (g, c) in &cur {
            for (u, _) in &m.support {
                *next.entry(group.mul(g, u)).or_insert(0) += c;
            }
        }
        cur = next;
    }
    cur
}

const ORBIT_WORK_CAP: f64 = 1e8;

/// |𝒪_ℓ(g, n)| by meet in the middle over the two halves of the tuple.
pub fn orbit_count(group: &Group, g: &Element, m: &SphereMeasure, n: usize) -> Result<u128> {
    let work = (m.len() as f64).powi(n as i32);
    if work > ORBIT_WORK_CAP {
        return Err(Error::Resource {
            budget_mib: MemBudget::from_env().mib(),
            stage: format!("orbit count over |S|^n = {work:.3e} tuples"),
        });
    }
    let left = orbit_counts(group, m, n.div_ceil(2));
    let right = orbit_counts(group, m, n / 2);
    let total = right
        .iter()
        .map(|(v, c)| left.get(&group.mul(g, &group.inv(v))).map_or(0, |l| l * c))
        .sum();
    Ok(total)
}

/// One row per (ℓ, n, g ∈ B(nℓ)) checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvolutionBoundsReport {
    pub constants: WalkConstants,
    pub checked: usize,
    pub orbit_violations: Vec<String>,
    pub convolution_violations: Vec<String>,
    /// max over the grid of |𝒪| / bound and μ^{*n} / bound
    pub orbit_tightness: f64,
    pub convolution_tightness: f64,
    pub pass: bool,
}

/// Checks |𝒪_ℓ(g, n)| ≤ D₀ⁿ(ℓ/δ + 1)ⁿ e^{ω(nℓ − |g|)/2} and
/// μ_ℓ^{*n}(g) ≤ Dⁿ(ℓ/δ + 1)ⁿ e^{−ω(nℓ + |g|)/2} for all g ∈ B(nℓ).
pub fn verify_convolution_bounds(
    group: &Group,
    ell_max: usize,
    n_max: usize,
    delta: usize,
) -> Result<ConvolutionBoundsReport> {
    let consts = WalkConstants::new(group, delta, (ell_max * n_max).max(8));
    let table = BallTable::build(group, ell_max * n_max)?;
    let mut checked = 0;
    let mut orbit_violations = Vec::new();
    let mut convolution_violations = Vec::new();
    let (mut ot, mut ct) = (0.0f64, 0.0f64);
    for ell in 1..=ell_max {
        let m = SphereMeasure::new(group, ell, delta)?;
        let total = m.len() as f64;
        for n in 0..=n_max {
            let counts = orbit_counts(group, &m, n);
            for r in 0..=n * ell {
                for g in table.sphere(r) {
                    let c = counts.get(g).copied().unwrap_or(0);
                    checked += 1;
                    let ob = consts.orbit_bound(ell, n, r);
                    let p = c as f64 / total.powi(n as i32);
                    let cb = consts.convolution_bound(ell, n, r);
                    ot = ot.max(c as f64 / ob);
                    ct = ct.max(p / cb);
                    if c as f64 > ob * (1.0 + 1e-12) {
                        orbit_violations.push(format!("ℓ={ell} n={n} g={}", group.format(g)));
                    }
                    if p > cb * (1.0 + 1e-12) {
                        convolution_violations.push(format!("ℓ={ell} n={n} g={}", group.format(g)));
                    }
                }
            }
        }
    }
    Ok(ConvolutionBoundsReport {
        pass: orbit_violations.is_empty() && convolution_violations.is_empty() && consts.c3 > 0.0,
        constants: consts,
        checked,
        orbit_violations,
        convolution_violations,
        orbit_tightness: ot,
        convolution_tightness: ct,
    })
}

/// |U| ≤ C₂e^{ω(ℓ − r)} for U = {g ∈ B(ℓ) : ⟨g, x⟩₁ ≥ r}, over x ∈ B(x_max),
/// ℓ ≤ ell_max and integer r ≤ ℓ. Returns the worst ratio.
pub fn initial_segment_check(
    group: &Group,
    consts: &WalkConstants,
    ell_max: usize,
    x_max: usize,
) -> Result<f64> {
    let table = BallTable::build(group, ell_max.max(x_max))?;
    let one = group.identity();
    let mut worst = 0.0f64;
    for x in table.ball(x_max) {
        for ell in 0..=ell_max {
            let products: Vec<i64> = table
                .ball(ell)
                .map(|g| crate::group::gromov_product(group, g, x, &one).twice())
                .collect();
            for r in 0..=ell {
                let count = products.iter().filter(|&&t| t >= 2 * r as i64).count();
                let bound = consts.c2 * (consts.omega * (ell - r) as f64).exp();
                worst = worst.max(count as f64 / bound);
            }
        }
    }
    Ok(worst)
}

/// p_ℓ(n) = μ_ℓ^{*n}(H) for n = 0..=n_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnSeries {
    pub ell: usize,
    pub delta: usize,
    pub radius: usize,
    pub p: Vec<f64>,
    /// p(n) is exact, not only a lower bound
    pub exact: Vec<bool>,
    pub method: &'static str,
}

/// Prefix trie of the support words, walked once per coset.
struct Trie {
    /// (parent node, letter) per node, node 0 is the root
    nodes: Vec<(usize, u16)>,
    /// node reached by each support word
    leaves: Vec<usize>,
}

impl Trie {
    fn new(words: impl Iterator<Item = Word>) -> Self {
        let mut nodes = vec![(0, 0)];
        let mut child: HashMap<(usize, u16), usize> = HashMap::new();
        let mut leaves = Vec::new();
        for w in words {
            let mut at = 0;
            for &l in &w {
                at = *child.entry((at, l)).or_insert_with(|| {
                    nodes.push((at, l));
                    nodes.len() - 1
                });
            }
            leaves.push(at);
        }
        Trie { nodes, leaves }
    }
}

/// Transition lists of the walk on the Schreier ball of radius R, with
/// endpoints outside the ball dropped.
struct CosetWalk {
    /// vertices of the inner ball
    len: usize,
    weight: f64,
    graph: SchreierGraph,
    trie: Trie,
}

impl CosetWalk {
    fn new(
        group: &Group,
        space: &dyn CosetSpace,
        m: &SphereMeasure,
        radius: usize,
        budget: MemBudget,
    ) -> Result<Self> {
        // paths from the inner ball stay within R + ℓ
        let graph = SchreierGraph::build_with_budget(group, space, radius + m.ell, budget)?;
        let len = graph.ball_ids(radius).len();
        budget.check(len as u128 * 24, || format!("walk on {len} cosets"))?;
        Ok(CosetWalk {
            len,
            weight: m.weight(),
            graph,
            trie: Trie::new(m.support.iter().map(|(_, w)| w.clone())),
        })
    }

    /// The BFS order numbers the inner ball first.
    fn step(&self, p: &[f64]) -> Vec<f64> {
        let mut next = vec![0.0; self.len];
        let mut at = vec![0u32; self.trie.nodes.len()];
        for (y, &mass) in p.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            at[0] = y as u32;
            for k in 1..self.trie.nodes.len() {
                let (parent, l) = self.trie.nodes[k];
                at[k] = self.graph.step_raw(at[parent], l);
            }
            for &leaf in &self.trie.leaves {
                let z = at[leaf] as usize;
                if z < self.len {
                    next[z] += mass * self.weight;
                }
            }
        }
        next
    }
}

/// Distribution of the walk from y₀ on the Schreier ball of radius R,
/// after each step up to `n`.
pub fn walk_distributions(
    group: &Group,
    space: &dyn CosetSpace,
    m: &SphereMeasure,
    radius: usize,
    n: usize,
) -> Result<(SchreierGraph, Vec<Vec<f64>>)> {
    let walk = CosetWalk::new(group, space, m, radius, MemBudget::from_env())?;
    let mut p = vec![0.0; walk.len];
    p[0] = 1.0;
    let mut out = vec![p.clone()];
    for _ in 0..n {
        p = walk.step(&p);
        out.push(p.clone());
    }
    Ok((walk.graph, out))
}

pub fn return_probabilities(
    group: &Group,
    space: &dyn CosetSpace,
    ell: usize,
    delta: usize,
    n_max: usize,
    radius: usize,
) -> Result<ReturnSeries> {
    let m = SphereMeasure::new(group, ell, delta)?;
    let walk = CosetWalk::new(group, space, &m, radius, MemBudget::from_env())?;
    let mut p = vec![0.0; walk.len];
    p[0] = 1.0;
    let mut series = vec![1.0];
    for _ in 0..n_max {
        p = walk.step(&p);
        series.push(p[0]);
    }
    let exact = (0..=n_max)
        .map(|n| radius >= (n * ell).div_ceil(2))
        .collect();
    let out = ReturnSeries {
        ell,
        delta,
        radius,
        p: series,
        exact,
        method: "schreier-dp",
    };
    if let Some(n) = even_root_violation(&out.p) {
        return Err(Error::Consistency(format!(
            "p(2n)^(1/2n) decreases at n = {n}"
        )));
    }
    Ok(out)
}

/// p(n) = μ^{*n}(H) by convolving in G, for a cross-check.
pub fn return_probabilities_brute(
    group: &Group,
    space: &dyn CosetSpace,
    ell: usize,
    delta: usize,
    n_max: usize,
) -> Result<ReturnSeries> {
    let m = SphereMeasure::new(group, ell, delta)?;
    let mut cur: HashMap<Element, f64> = HashMap::from([(group.identity(), 1.0)]);
    let mut p = vec![1.0];
    for _ in 0..n_max {
        let mut next: HashMap<Element, f64> = HashMap::new();
        for (g, c) in &cur {
            for (u, _) in &m.support {
                *next.entry(group.mul(g, u)).or_insert(0.0) += c * m.weight();
            }
        }
        cur = next;
        p.push(
            cur.iter()
                .filter(|(g, _)| space.contains(g))
                .map(|(_, c)| c)
                .sum(),
        );
    }
    Ok(ReturnSeries {
        ell,
        delta,
        radius: usize::MAX,
        exact: vec![true; p.len()],
        p,
        method: "brute-convolution",
    })
}

fn even_root_violation(p: &[f64]) -> Option<usize> {
    let roots: Vec<(usize, f64)> = (1..)
        .map(|k| 2 * k)
        .take_while(|&n| n < p.len())
        .filter(|&n| p[n] > 0.0)
        .map(|n| (n, p[n].powf(1.0 / n as f64)))
        .collect();
    roots
        .windows(2)
        .find(|w| w[1].1 < w[0].1 * (1.0 - 1e-12))
        .map(|w| w[1].0 / 2)
}

/// Lower bounds on ρ_ℓ from the even terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoEll {
    /// (2n, p(2n)^{1/2n})
    pub roots: Vec<(usize, f64)>,
    /// (2n, (p(2n)/p(2n−2))^{1/2})
    pub ratio_roots: Vec<(usize, f64)>,
    pub last_root: f64,
    pub last_ratio_root: f64,
    /// max of the two; both sequences increase to ρ_ℓ
    pub lower_bound: f64,
    pub monotone: bool,
}

/// For a self-adjoint walk p(2n) = ∫t^{2n}dν, so both the roots and the
/// square roots of consecutive ratios increase to ρ_ℓ.
pub fn rho_ell(series: &ReturnSeries) -> Result<RhoEll> {
    let evens: Vec<usize> = (1..)
        .map(|k| 2 * k)
        .take_while(|&n| n < series.p.len())
        .collect();
    if evens.len() < 3 {
        return Err(Error::input("need at least three even terms"));
    }
    if evens.iter().all(|&n| series.p[n] == 0.0) {
        return Err(Error::Consistency(
            "every even return probability vanishes".into(),
        ));
    }
    let roots: Vec<(usize, f64)> = evens
        .iter()
        .map(|&n| (n, series.p[n].powf(1.0 / n as f64)))
        .collect();
    let ratio_roots: Vec<(usize, f64)> = evens
        .iter()
        .map(|&n| (n, (series.p[n] / series.p[n - 2]).sqrt()))
        .collect();
    let monotone = even_root_violation(&series.p).is_none();
    let last_root = roots.last().unwrap().1;
    let last_ratio_root = ratio_roots.last().unwrap().1;
    Ok(RhoEll {
        roots,
        ratio_roots,
        last_root,
        last_ratio_root,
        lower_bound: last_root.max(last_ratio_root),
        monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoInfinityRow {
    pub ell: usize,
    pub rho_ell: f64,
    pub log_rate: f64,
    pub target: f64,
    pub deviation: f64,
}

/// (ℓ, (1/ℓ) ln ρ̂_ℓ) against max{−ω_G/2, ω_H − ω_G}.
pub fn rho_infinity_curve(
    group: &Group,
    space: &dyn CosetSpace,
    ells: &[usize],
    n_max: usize,
    radius: usize,
    omega_h: f64,
) -> Result<Vec<RhoInfinityRow>> {
    let omega_g = group
        .exact_growth_rate()
        .unwrap_or_else(|| GrowthSeries::exact(group, 12).omega_hat);
    let target = (-omega_g / 2.0).max(omega_h - omega_g);
    ells.iter()
        .map(|&ell| {
            let s = return_probabilities(group, space, ell, 1, n_max, radius)?;
            let r = rho_ell(&s)?;
            let log_rate = r.lower_bound.ln() / ell as f64;
            let deviation = if target == 0.0 {
                log_rate.abs()
            } else {
                ((log_rate - target) / target).abs()
            };
            Ok(RhoInfinityRow {
                ell,
                rho_ell: r.lower_bound,
                log_rate,
                target,
                deviation,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrigorchukValue {
    pub rho: f64,
    /// e^{ω_N} ≥ √(e^{ω_F}); outside it the value is not compared with walks
    pub in_regime: bool,
    pub note: &'static str,
}

/// (√x/(1 + x))(√x/y + y/√x) with x = e^{ω_F}, y = e^{ω_N}, evaluated
/// as (x + y²)/(y(1 + x)).
pub fn grigorchuk_rho(x: f64, y: f64) -> Result<GrigorchukValue> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::input(format!("e^ω_F must exceed 1, got {x}")));
    }
    if !(y >= 1.0 && y.is_finite()) {
        return Err(Error::input(format!("e^ω_N must be at least 1, got {y}")));
    }
    let s = x.sqrt();
    let in_regime = y >= s;
    Ok(GrigorchukValue {
        rho: (x + y * y) / (y * (1.0 + x)),
        in_regime,
        note: if in_regime {
            "cogrowth above the square root of the growth"
        } else {
            "below e^{ω_F/2} the spectral radius is the free value 2√(2k−1)/2k, not this expression"
        },
    })
}

/// |S(n) ∩ H| for n = 0..=n_max. On free groups the kernel of the
/// abelianization and finite-index subgroups use a DP over reduced words;
/// other cases enumerate the ball.
pub fn subgroup_sphere_counts(
    group: &Group,
    space: &dyn CosetSpace,
    n_max: usize,
) -> Result<Vec<u128>> {
    if space.spec() == "ker-ab" {
        if let Some(k) = group.free_rank() {
            return Ok(ker_ab_counts(group, k, n_max));
        }
    }
    if space.spec() == "trivial" {
        let mut counts = vec![0u128; n_max + 1];
        counts[0] = 1;
        return Ok(counts);
    }
    match (space.index(), group.free_rank()) {
        (Some(1), _) => return Ok(group.sphere_counts(n_max)),
        (Some(_), Some(k)) => return Ok(finite_index_counts(group, space, k, n_max)),
        _ => {}
    }
    let table = BallTable::build(group, n_max)?;
    Ok((0..=n_max)
        .map(|n| table.sphere(n).iter().filter(|g| space.contains(g)).count() as u128)
        .collect())
}

/// Reduced words ending in H, by a walk on (coset, last letter).
fn finite_index_counts(group: &Group, space: &dyn CosetSpace, k: usize, n_max: usize) -> Vec<u128> {
    let gens = group.generators();
    let base = space.base();
    let mut cur: HashMap<(Coset, usize), u128> = HashMap::from([((base.clone(), 2 * k), 1)]);
    let mut counts = vec![1u128];
    for _ in 1..=n_max {
        let mut next: HashMap<(Coset, usize), u128> = HashMap::new();
        for ((y, last), c) in &cur {
            for l in 0..2 * k {
                if *last < 2 * k && gens.inverse(*last as u16) as usize == l {
                    continue;
                }
                *next.entry((space.act(y, l as u16), l)).or_insert(0) += c;
            }
        }
        counts.push(
            next.iter()
                .filter(|((y, _), _)| *y == base)
                .map(|(_, c)| c)
                .sum(),
        );
        cur = next;
    }
    counts
}

fn ker_ab_counts(group: &Group, k: usize, n_max: usize) -> Vec<u128> {
    let gens = group.generators();
    let steps: Vec<(usize, i64)> = (0..2 * k)
        .map(|l| {
            let v = group.abelianization(&group.gen(l as u16));
            let i = v
                .iter()
                .position(|&x| x != 0)
                .expect("generator has nonzero image");
            (i, v[i])
        })
        .collect();
    // state: exponent sums and last letter (2k for none)
    let mut cur: BTreeMap<(Vec<i64>, usize), u128> = BTreeMap::from([((vec![0; k], 2 * k), 1)]);
    let mut counts = vec![1u128];
    for n in 1..=n_max {
        let remaining = (n_max - n) as i64;
        let mut next: BTreeMap<(Vec<i64>, usize), u128> = BTreeMap::new();
        for ((v, last), c) in &cur {
            for (l, &(i, s)) in steps.iter().enumerate() {
                if *last < 2 * k && gens.inverse(*last as u16) as usize == l {
                    continue;
                }
                let mut w = v.clone();
                w[i] += s;
                // states that cannot return to zero in time are dropped
                if w.iter().map(|x| x.abs()).sum::<i64>() > remaining {
                    continue;
                }
                *next.entry((w, l)).or_insert(0) += c;
            }
        }
        counts.push(
            next.iter()
                .filter(|((v, _), _)| v.iter().all(|&x| x == 0))
                .map(|(_, c)| c)
                .sum(),
        );
        cur = next;
    }
    counts
}

/// ω̂_H from the last two nonzero counts beyond n = 0; 0 when H looks finite.
pub fn omega_from_counts(counts: &[u128]) -> f64 {
    let nz: Vec<usize> = (1..counts.len()).filter(|&n| counts[n] > 0).collect();
    match nz.as_slice() {
        [.., a, b] => (counts[*b] as f64 / counts[*a] as f64).ln() / (b - a) as f64,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::subgroup_from_spec;

    fn f2() -> Group {
        Group::from_spec("free:2").unwrap()
    }

    #[test]
    fn tree_return_probabilities() {
        let g = f2();
        let h = subgroup_from_spec(&g, "trivial").unwrap();
        let s = return_probabilities(&g, h.as_ref(), 1, 1, 4, 2).unwrap();
        assert_eq!(s.p[1], 0.0);
        assert!((s.p[2] - 0.25).abs() < 1e-15);
        assert!((s.p[4] - 28.0 / 256.0).abs() < 1e-15);
        assert!(s.exact.iter().all(|&e| e));
        let brute = return_probabilities_brute(&g, h.as_ref(), 1, 1, 4).unwrap();
        for n in 0..=4 {
            assert!((s.p[n] - brute.p[n]).abs() < 1e-15);
        }
    }

    #[test]
    fn whole_group_and_abelian_kernel() {
        let g = f2();
        let whole = subgroup_from_spec(&g, "whole").unwrap();
        let s = return_probabilities(&g, whole.as_ref(), 1, 1, 6, 3).unwrap();
        assert!(s.p.iter().all(|&p| (p - 1.0).abs() < 1e-15));
        let ab = subgroup_from_spec(&g, "ker-ab").unwrap();
        let s = return_probabilities(&g, ab.as_ref(), 1, 1, 4, 2).unwrap();
        assert!((s.p[2] - 0.25).abs() < 1e-15);
        // SRW on ℤ²: p(4) = 36/256
        assert!((s.p[4] - 36.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn orbit_counts_match() {
        let g = f2();
        let m = SphereMeasure::new(&g, 1, 1).unwrap();
        let e = g.identity();
        assert_eq!(orbit_count(&g, &e, &m, 0).unwrap(), 1);
        assert_eq!(
            orbit_count(&g, &g.parse_element("a").unwrap(), &m, 0).unwrap(),
            0
        );
        assert_eq!(orbit_count(&g, &e, &m, 2).unwrap(), 4);
        let ab = g.parse_element("ab").unwrap();
        let h = subgroup_from_spec(&g, "trivial").unwrap();
        let (graph, dist) = walk_distributions(&g, h.as_ref(), &m, 3, 3).unwrap();
        let y = graph.id(&h.coset_of(&ab)).unwrap() as usize;
        assert_eq!(
            orbit_count(&g, &ab, &m, 3).unwrap() as f64,
            dist[3][y] * 64.0
        );
    }

    #[test]
    fn constants_for_free_group() {
        let g = f2();
        let c = WalkConstants::new(&g, 1, 12);
        assert!(c.c1 < 2.0 && c.c1 > 1.99);
        assert!(c.c3 > 0.0);
        let m = SphereMeasure::new(&g, 2, 1).unwrap();
        assert!(m.is_symmetric(&g));
        assert_eq!(c.measure_sandwich(&m), Some(true));
        assert!(initial_segment_check(&g, &c, 3, 2).unwrap() <= 1.0);
    }

    #[test]
    fn grigorchuk_values() {
        assert_eq!(grigorchuk_rho(3.0, 3.0).unwrap().rho, 1.0);
        let v = grigorchuk_rho(3.0, 3f64.sqrt()).unwrap();
        assert!((v.rho - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(v.in_regime);
        assert!(!grigorchuk_rho(3.0, 1.0).unwrap().in_regime);
        assert!(grigorchuk_rho(1.0, 1.0).is_err());
        assert!((grigorchuk_rho(7.5, 7.5).unwrap().rho - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_counts_match_enumeration() {
        let g = f2();
        let table = BallTable::build(&g, 8).unwrap();
        for spec in ["ker-ab", "ker-mod:3", "trivial"] {
            let h = subgroup_from_spec(&g, spec).unwrap();
            let dp = subgroup_sphere_counts(&g, h.as_ref(), 8).unwrap();
            for n in 0..=8 {
                let brute = table.sphere(n).iter().filter(|x| h.contains(x)).count() as u128;
                assert_eq!(dp[n], brute, "{spec} n={n}");
            }
        }
        let ab = subgroup_from_spec(&g, "ker-ab").unwrap();
        assert_eq!(
            &subgroup_sphere_counts(&g, ab.as_ref(), 4).unwrap(),
            &[1, 0, 0, 0, 8]
        );
    }
}
