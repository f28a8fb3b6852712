//! Ruelle transfer operators of locally constant potentials.
//!
//! A depth-m function is a vector indexed by the admissible words of
//! length m. For m ≥ max(N, m_F) the operator
//! (ℒΦ)(x) = Σ_{σy = x} F(y)Φ(y) maps such functions to themselves, and
//! the row of w′ has one entry per letter a with a·w′ admissible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::holder::{delta_alpha, holder_data, HolderData};
use crate::linalg::{sup_norm, Csr};
use crate::sft::{Sft, SymWord};

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialTag {
    Case1Constant,
    Custom,
}

/// Strictly positive locally constant potential of depth m_F.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    depth: usize,
    words: Vec<SymWord>,
    values: Vec<f64>,
    exact: Option<Vec<BigRational>>,
    alpha: f64,
    tag: PotentialTag,
}

/// On-disk table: word (as formatted by the subshift) → value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialFile {
    pub depth: usize,
    #[serde(default)]
    pub alpha: Option<f64>,
    pub values: BTreeMap<String, f64>,
}

impl Potential {
    pub fn constant(sft: &Sft, v: f64) -> Result<Self> {
        let words = sft.words(1);
        Self::checked(
            1,
            words.clone(),
            vec![v; words.len()],
            None,
            PotentialTag::Custom,
        )
    }

    pub fn constant_exact(sft: &Sft, q: BigRational) -> Result<Self> {
        let words = sft.words(1);
        let v = q.to_f64().unwrap_or(f64::NAN);
        let n = words.len();
        Self::checked(1, words, vec![v; n], Some(vec![q; n]), PotentialTag::Custom)
    }

    /// F ≡ e^{−ω_G}, exact as 1/(2k − 1) on free:k.
    pub fn case1(sft: &Sft, group: &Group) -> Result<Self> {
        let mut p = match group.free_rank() {
            Some(k) if k > 0 => Self::constant_exact(
                sft,
                BigRational::new(BigInt::one(), BigInt::from(2 * k as i64 - 1)),
            )?,
            _ => {
                let omega = group.exact_growth_rate().ok_or_else(|| {
                    Error::input(format!("no closed-form growth rate for `{}`", group.spec()))
                })?;
                Self::constant(sft, (-omega).exp())?
            }
        };
        p.tag = PotentialTag::Case1Constant;
        Ok(p)
    }

    /// Every admissible word of length `depth` must be present.
    pub fn table(sft: &Sft, depth: usize, table: &BTreeMap<SymWord, f64>) -> Result<Self> {
        let words = sft.words(depth);
        let values = words
            .iter()
            .map(|w| {
                table.get(w).copied().ok_or_else(|| {
                    Error::input(format!(
                        "potential has no value on `{}`",
                        sft.format_word(w)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::checked(depth, words, values, None, PotentialTag::Custom)
    }

    pub fn from_file(sft: &Sft, file: &PotentialFile) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (k, v) in &file.values {
            let w = sft.parse_word(k)?;
            if w.len() != file.depth {
                return Err(Error::input(format!(
                    "word `{k}` does not have length {}",
                    file.depth
                )));
            }
            table.insert(w, *v);
        }
        let mut p = Self::table(sft, file.depth, &table)?;
        if let Some(a) = file.alpha {
            p = p.with_alpha(a)?;
        }
        Ok(p)
    }

    fn checked(
        depth: usize,
        words: Vec<SymWord>,
        values: Vec<f64>,
        exact: Option<Vec<BigRational>>,
        tag: PotentialTag,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::input("potential depth must be at least 1"));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::input(format!(
                "potential values must be positive and finite, got {v}"
            )));
        }
        Ok(Potential {
            depth,
            words,
            values,
            exact,
            alpha: DEFAULT_ALPHA,
            tag,
        })
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::input(format!(
                "Hölder exponent must be positive, got {alpha}"
            )));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| v * c).collect();
        Self::checked(
            self.depth,
            self.words.clone(),
            values,
            None,
            PotentialTag::Custom,
        )
        .and_then(|p| p.with_alpha(self.alpha))
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tag(&self) -> PotentialTag {
        self.tag
    }

    pub fn words(&self) -> &[SymWord] {
        &self.words
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn position(&self, w: &[u16]) -> usize {
        self.words
            .binary_search_by(|x| x.as_slice().cmp(&w[..self.depth]))
            .expect("admissible word has a potential value")
    }

    /// F on the cylinder of `w`; `w` must be admissible and at least m_F long.
    pub fn value(&self, w: &[u16]) -> f64 {
        self.values[self.position(w)]
    }

    pub fn value_exact(&self, w: &[u16]) -> Option<&BigRational> {
        self.exact.as_ref().map(|e| &e[self.position(w)])
    }

    /// Hölder data of ln F.
    pub fn log_holder(&self, r: Option<f64>) -> HolderData {
        let logs: Vec<f64> = self.values.iter().map(|v| v.ln()).collect();
        holder_data(&self.words, &logs, self.alpha, r)
    }
}

#[derive(Debug, Clone)]
pub struct TransferMatrix {
    depth: usize,
    index: Vec<SymWord>,
    matrix: Csr<f64>,
    exact: Option<Csr<BigRational>>,
}

impl TransferMatrix {
    pub fn new(sft: &Sft, f: &Potential, m: usize) -> Result<Self> {
        let required = sft.memory().max(f.depth());
        if m < required {
            return Err(Error::Depth { given: m, required });
        }
        let index = sft.words(m);
        let pos = |w: &[u16]| index.binary_search_by(|x| x.as_slice().cmp(w)).ok();
        let alphabet = sft.alphabet().len() as u16;
        let mut rows = Vec::with_capacity(index.len());
        let mut exact_rows = f.exact.as_ref().map(|_| Vec::with_capacity(index.len()));
        for w in &index {
            let mut row = Vec::new();
            let mut exact_row = Vec::new();
            for a in 0..alphabet {
                let mut u = Vec::with_capacity(m);
                u.push(a);
                u.extend_from_slice(&w[..m - 1]);
                if let Some(j) = pos(&u) {
                    row.push((j as u32, f.value(&u)));
                    if let Some(q) = f.value_exact(&u) {
                        exact_row.push((j as u32, q.clone()));
                    }
                }
            }
            rows.push(row);
            if let Some(e) = exact_rows.as_mut() {
                e.push(exact_row);
            }
        }
        let n = index.len();
        Ok(TransferMatrix {
            depth: m,
            index,
            matrix: Csr::from_rows(n, rows),
            exact: exact_rows.map(|r| Csr::from_rows(n, r)),
        })
    }

    /// Depth max(N, m_F) + 1.
    pub fn with_default_depth(sft: &Sft, f: &Potential) -> Result<Self> {
        Self::new(sft, f, sft.memory().max(f.depth()) + 1)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn index(&self) -> &[SymWord] {
        &self.index
    }

    pub fn matrix(&self) -> &Csr<f64> {
        &self.matrix
    }

    pub fn exact_matrix(&self) -> Option<&Csr<BigRational>> {
        self.exact.as_ref()
    }

    pub fn position(&self, w: &[u16]) -> Option<usize> {
        self.index.binary_search_by(|x| x.as_slice().cmp(w)).ok()
    }

    pub fn apply(&self, phi: &[f64]) -> Vec<f64> {
        self.matrix.matvec(phi)
    }

    pub fn apply_n(&self, phi: &[f64], n: usize) -> Vec<f64> {
        (0..n).fold(phi.to_vec(), |v, _| self.apply(&v))
    }

    /// Tabulates a function of depth ≤ m on the index.
    pub fn tabulate(&self, f: impl Fn(&[u16]) -> f64) -> Vec<f64> {
        self.index.iter().map(|w| f(w)).collect()
    }

    pub fn is_irreducible(&self) -> bool {
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.dim()).map(|_| g.add_node(())).collect();
        for (i, row) in self.matrix.pattern().iter().enumerate() {
            for &j in row {
                g.add_edge(nodes[i], nodes[j as usize], ());
            }
        }
        self.matrix.nnz() > 0 && tarjan_scc(&g).len() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoRow {
    pub n: usize,
    pub log_sup_norm: f64,
    pub sup_norm: f64,
    pub nth_root: f64,
    /// ‖ℒⁿ𝟙‖ / ‖ℒⁿ⁻¹𝟙‖
    pub ratio: f64,
}

/// ‖ℒⁿ𝟙‖_∞ for n = 1..n_max, tracked in log scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoSeries {
    pub rows: Vec<RhoRow>,
    /// The last consecutive ratio.
    pub estimate: f64,
    pub root_estimate: f64,
    /// The last two ratios agree to 1e-9 relative.
    pub cauchy: bool,
    pub method: &'static str,
    /// Collatz–Wielandt bound from the iterates, a certified lower bound.
    pub lower_bound: f64,
}

/// Iterates `step` from `start`, rescaling each iterate by `norm`.
/// Logs are relative to the norm of `start`. Also returns the best
/// Collatz–Wielandt bound min_{v_i > 0} (Mv)_i / v_i seen along the way.
pub(crate) fn log_power_rows(
    n_max: usize,
    start: Vec<f64>,
    step: impl Fn(&[f64]) -> Vec<f64>,
    norm: impl Fn(&[f64]) -> f64,
) -> (Vec<RhoRow>, f64) {
    let s0 = norm(&start);
    let mut v: Vec<f64> = start.iter().map(|x| x / s0).collect();
    let mut log_scale = 0.0f64;
    let mut prev_log = 0.0f64;
    let mut cw = 0.0f64;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let w = step(&v);
        let bound = v
            .iter()
            .zip(&w)
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| b / a)
            .fold(f64::INFINITY, f64::min);
        if bound.is_finite() {
            cw = cw.max(bound);
        }
        v = w;
        let s = norm(&v);
        let log = if s > 0.0 {
            log_scale + s.ln()
        } else {
            f64::NEG_INFINITY
        };
        if s > 0.0 {
            v.iter_mut().for_each(|x| *x /= s);
            log_scale += s.ln();
        }
        rows.push(RhoRow {
            n,
            log_sup_norm: log,
            sup_norm: log.exp(),
            nth_root: (log / n as f64).exp(),
            ratio: (log - prev_log).exp(),
        });
        prev_log = log;
        if s == 0.0 {
            // the remaining iterates vanish too
            for k in n + 1..=n_max {
                rows.push(RhoRow {
                    n: k,
                    log_sup_norm: f64::NEG_INFINITY,
                    sup_norm: 0.0,
                    nth_root: 0.0,
                    ratio: 0.0,
                });
            }
            break;
        }
    }
    (rows, cw)
}

pub(crate) fn summarize(rows: Vec<RhoRow>) -> RhoSeries {
    let last = rows.last().copied();
    let cauchy = match rows.len() {
        0 | 1 => false,
        k => {
            let (a, b) = (rows[k - 2].ratio, rows[k - 1].ratio);
            (a - b).abs() <= 1e-9 * b.abs().max(f64::MIN_POSITIVE)
        }
    };
    RhoSeries {
        estimate: last.map_or(0.0, |r| r.ratio),
        root_estimate: last.map_or(0.0, |r| r.nth_root),
        cauchy,
        rows,
        method: "estimate",
        lower_bound: 0.0,
    }
}

impl TransferMatrix {
    pub fn rho_sup_norm(&self, n_max: usize) -> Result<RhoSeries> {
        if n_max < 2 {
            return Err(Error::input("need at least two iterates"));
        }
        let (rows, cw) = log_power_rows(n_max, vec![1.0; self.dim()], |v| self.apply(v), sup_norm);
        let mut s = summarize(rows);
        s.lower_bound = cw;
        Ok(s)
    }

    /// ‖ℒⁿ𝟙‖_∞ in exact arithmetic, when F is rational.
    pub fn sup_norms_exact(&self, n_max: usize) -> Option<Vec<BigRational>> {
        let m = self.exact.as_ref()?;
        let mut v = vec![BigRational::one(); self.dim()];
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            v = m.matvec(&v);
            out.push(v.iter().fold(
                BigRational::zero(),
                |a, x| if *x > a { x.clone() } else { a },
            ));
        }
        Some(out)
    }
}

/// ρ with h > 0, ℒh = ρh, μ ≥ 0 a probability with μℒ = ρμ, and Σ h·μ = 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronData {
    pub rho: f64,
    pub h: Vec<f64>,
    pub mu: Vec<f64>,
    pub residual: f64,
    pub left_residual: f64,
    pub iterations: usize,
}

pub const PERRON_TOL: f64 = 1e-10;
pub const PERRON_CAP: usize = 100_000;

/// Power iteration on M + I, so that periodic matrices converge too.
fn dominant(m: &Csr<f64>, tol: f64, cap: usize) -> Result<(f64, Vec<f64>, f64, usize)> {
    let n = m.rows();
    let mut v = vec![1.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=cap {
        let mv = m.matvec(&v);
        let rho = sup_norm(&mv);
        residual = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - rho * b).abs())
            .fold(0.0, f64::max);
        if residual <= tol * rho {
            return Ok((rho, v, residual, it));
        }
        let mut w: Vec<f64> = mv.iter().zip(&v).map(|(a, b)| a + b).collect();
        let s = sup_norm(&w);
        w.iter_mut().for_each(|x| *x /= s);
        v = w;
    }
    Err(Error::NoConvergence {
        iterations: cap,
        residual,
    })
}

pub fn perron_data(tm: &TransferMatrix, tol: f64) -> Result<PerronData> {
    perron_data_capped(tm, tol, PERRON_CAP)
}

pub fn perron_data_capped(tm: &TransferMatrix, tol: f64, cap: usize) -> Result<PerronData> {
    if !tm.is_irreducible() {
        return Err(Error::Reducible(format!(
            "transfer matrix on {} words has more than one communicating class",
            tm.dim()
        )));
    }
    let (rho, mut h, residual, it) = dominant(tm.matrix(), tol, cap)?;
    let (_, mut mu, left_residual, it2) = dominant(&tm.matrix().transpose(), tol, cap)?;
    if h.iter().any(|x| *x <= 0.0) {
        return Err(Error::Consistency(
            "Perron vector is not strictly positive".into(),
        ));
    }
    let total: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|x| *x /= total);
    let pairing: f64 = h.iter().zip(&mu).map(|(a, b)| a * b).sum();
    h.iter_mut().for_each(|x| *x /= pairing);
    Ok(PerronData {
        rho,
        residual: residual / pairing,
        left_residual: left_residual / total,
        h,
        mu,
        iterations: it.max(it2),
    })
}

/// F′(x) = h(x)F(x) / (ρ h(σx)), of depth max(m + 1, m_F).
pub fn renormalize(
    sft: &Sft,
    f: &Potential,
    tm: &TransferMatrix,
    pd: &PerronData,
) -> Result<Potential> {
    if let Some(x) = pd.h.iter().find(|x| x.is_nan() || **x <= 0.0) {
        return Err(Error::input(format!(
            "eigenfunction must be strictly positive, found {x}"
        )));
    }
    let m = tm.depth();
    let depth = (m + 1).max(f.depth());
    let words = sft.words(depth);
    let values = words
        .iter()
        .map(|w| {
            let here = tm.position(&w[..m]).expect("admissible prefix");
            let next = tm.position(&w[1..m + 1]).expect("admissible shift");
            f.value(w) * pd.h[here] / (pd.rho * pd.h[next])
        })
        .collect();
    Potential::checked(depth, words, values, None, PotentialTag::Custom)
        .and_then(|p| p.with_alpha(f.alpha))
}

/// Both sides of Δ_α(ℒⁿΦ) ≤ e^{−nα}‖ℒⁿ𝟙‖Δ_α(Φ) + C_n‖Φ‖ with
/// C_n = e^{−nα}|𝒲ⁿ|Δ_α(F_n) + 2e^{mα}‖ℒⁿ𝟙‖ + 2r^{−α}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationBound {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub c_n: f64,
    pub holds: bool,
}

/// Parts of C_n that depend only on the potential.
#[derive(Debug, Clone, Copy)]
pub struct VariationConstants {
    pub alpha: f64,
    /// depth of the cocycle, 1 for codings
    pub label_depth: usize,
    /// points closer than r have the same preimage letters
    pub r: f64,
}

impl VariationConstants {
    pub fn for_sft(sft: &Sft, alpha: f64, label_depth: usize) -> Self {
        VariationConstants {
            alpha,
            label_depth,
            r: (-(sft.memory() as f64 - 2.0)).exp(),
        }
    }

    pub fn c_n(&self, sft: &Sft, f: &Potential, n: usize, iterate_sup: f64) -> f64 {
        let a = self.alpha;
        let (count, var) = birkhoff_variation(sft, f, n, a);
        (-(n as f64) * a).exp() * count as f64 * var
            + 2.0 * (self.label_depth as f64 * a).exp() * iterate_sup
            + 2.0 * self.r.powf(-a)
    }
}

/// |𝒲ⁿ| and Δ_α of F_n = F·F∘σ···F∘σⁿ⁻¹.
fn birkhoff_variation(sft: &Sft, f: &Potential, n: usize, alpha: f64) -> (usize, f64) {
    let count = sft.words(n).len();
    let depth = n + f.depth() - 1;
    let words = sft.words(depth);
    let values: Vec<f64> = words
        .iter()
        .map(|w| (0..n).map(|i| f.value(&w[i..])).product())
        .collect();
    (count, delta_alpha(&words, &values, alpha))
}

pub fn variation_bound(
    sft: &Sft,
    f: &Potential,
    tm: &TransferMatrix,
    consts: &VariationConstants,
    phi: &[f64],
    n: usize,
) -> VariationBound {
    let a = consts.alpha;
    let iterate = tm.apply_n(phi, n);
    let ones = tm.apply_n(&vec![1.0; tm.dim()], n);
    let iterate_sup = sup_norm(&ones);
    let lhs = delta_alpha(tm.index(), &iterate, a);
    let c_n = consts.c_n(sft, f, n, iterate_sup);
    let rhs = (-(n as f64) * a).exp() * iterate_sup * delta_alpha(tm.index(), phi, a)
        + c_n * sup_norm(phi);
    VariationBound {
        n,
        lhs,
        rhs,
        c_n,
        holds: lhs <= rhs * (1.0 + 1e-12) + 1e-300,
    }
}

/// ‖ℒⁿ𝟙‖ against Σ_{g ∈ S(n)} e^{−ω|g|} on the Case-1 system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereComparisonRow {
    pub n: usize,
    pub sup_norm: f64,
    pub sphere_sum: f64,
    pub ratio: f64,
}

pub fn sphere_comparison(
    tm: &TransferMatrix,
    group: &Group,
    omega: f64,
    n_max: usize,
) -> Vec<SphereComparisonRow> {
    let spheres = group.sphere_counts(n_max);
    let mut v = vec![1.0; tm.dim()];
    let mut rows = Vec::with_capacity(n_max + 1);
    for (n, &count) in spheres.iter().enumerate().take(n_max + 1) {
        if n > 0 {
            v = tm.apply(&v);
        }
        let sup = sup_norm(&v);
        let sphere_sum = count as f64 * (-omega * n as f64).exp();
        rows.push(SphereComparisonRow {
            n,
            sup_norm: sup,
            sphere_sum,
            ratio: sphere_sum / sup,
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horocode::{build_coding, CodingParams};

    fn golden() -> Sft {
        Sft::new(
            vec!["0".into(), "1".into()],
            2,
            vec![vec![0, 0], vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    fn free_system() -> (Sft, Group, Potential) {
        let g = Group::from_spec("free:2").unwrap();
        let c = build_coding(&g, &CodingParams::default(), "exact").unwrap();
        let f = Potential::case1(&c.sft, &g).unwrap();
        (c.sft, g, f)
    }

    #[test]
    fn free_coding_matrix() {
        let (sft, _, f) = free_system();
        let tm = TransferMatrix::new(&sft, &f, 2).unwrap();
        assert_eq!(tm.dim(), 12);
        for i in 0..12 {
            let row: Vec<_> = tm.matrix().row(i).collect();
            assert_eq!(row.len(), 3);
            assert!(row.iter().all(|(_, v)| (**v - 1.0 / 3.0).abs() < 1e-16));
        }
        assert_eq!(tm.apply(&[1.0; 12]), vec![1.0; 12]);
        let exact = tm.sup_norms_exact(6).unwrap();
        assert!(exact.iter().all(|q| q.is_one()));
        assert!(matches!(
            TransferMatrix::new(&sft, &f, 1),
            Err(Error::Depth {
                given: 1,
                required: 2
            })
        ));
    }

    #[test]
    fn full_shift_and_golden_mean() {
        let full = Sft::new(vec!["0".into(), "1".into()], 1, vec![vec![0], vec![1]]).unwrap();
        let tm =
            TransferMatrix::with_default_depth(&full, &Potential::constant(&full, 0.5).unwrap())
                .unwrap();
        assert!(tm
            .apply(&vec![1.0; tm.dim()])
            .iter()
            .all(|v| (*v - 1.0).abs() < 1e-15));

        let sft = golden();
        let tm = TransferMatrix::with_default_depth(&sft, &Potential::constant(&sft, 1.0).unwrap())
            .unwrap();
        let s = tm.rho_sup_norm(40).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s.estimate - phi).abs() < 1e-8);
        assert!(s.cauchy);
        let pd = perron_data(&tm, PERRON_TOL).unwrap();
        assert!((pd.rho - phi).abs() < 1e-9);
    }

    #[test]
    fn rho_scales_with_potential() {
        let (sft, _, f) = free_system();
        let tm = TransferMatrix::with_default_depth(&sft, &f).unwrap();
        let s = tm.rho_sup_norm(10).unwrap();
        assert!(s.rows.iter().all(|r| (r.nth_root - 1.0).abs() < 1e-12));
        let tm2 = TransferMatrix::with_default_depth(&sft, &f.scaled(2.5).unwrap()).unwrap();
        assert!((tm2.rho_sup_norm(10).unwrap().estimate - 2.5).abs() < 1e-12);
    }

    #[test]
    fn perron_free_is_uniform() {
        let (sft, _, f) = free_system();
        let tm = TransferMatrix::new(&sft, &f, 2).unwrap();
        let pd = perron_data(&tm, PERRON_TOL).unwrap();
        assert!((pd.rho - 1.0).abs() < 1e-12);
        assert!(pd.h.iter().all(|x| (x - 1.0).abs() < 1e-10));
        assert!(pd.mu.iter().all(|x| (x - 1.0 / 12.0).abs() < 1e-10));
        let g = renormalize(&sft, &f, &tm, &pd).unwrap();
        assert!(g.values().iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-10));
    }

    #[test]
    fn one_state_loop_and_reducible() {
        let one = Sft::new(vec!["x".into()], 1, vec![vec![0]]).unwrap();
        let tm = TransferMatrix::new(&one, &Potential::constant(&one, 0.7).unwrap(), 1).unwrap();
        let pd = perron_data(&tm, PERRON_TOL).unwrap();
        assert!((pd.rho - 0.7).abs() < 1e-14 && (pd.h[0] - 1.0).abs() < 1e-14);

        let two = Sft::new(
            vec!["a".into(), "b".into()],
            2,
            vec![vec![0, 0], vec![0, 1], vec![1, 1]],
        )
        .unwrap();
        let tm = TransferMatrix::new(&two, &Potential::constant(&two, 1.0).unwrap(), 2).unwrap();
        assert!(matches!(
            perron_data(&tm, PERRON_TOL),
            Err(Error::Reducible(_))
        ));
    }

    #[test]
    fn renormalized_golden_mean_is_stochastic() {
        let sft = golden();
        let f = Potential::constant(&sft, 1.0).unwrap();
        let tm = TransferMatrix::with_default_depth(&sft, &f).unwrap();
        let pd = perron_data(&tm, PERRON_TOL).unwrap();
        let g = renormalize(&sft, &f, &tm, &pd).unwrap();
        let tm2 = TransferMatrix::with_default_depth(&sft, &g).unwrap();
        let ones = tm2.apply(&vec![1.0; tm2.dim()]);
        assert!(ones.iter().all(|v| (v - 1.0).abs() < 1e-10));

        let scaled = f.scaled(3.0).unwrap();
        let tm3 = TransferMatrix::with_default_depth(&sft, &scaled).unwrap();
        let g3 = renormalize(&sft, &scaled, &tm3, &perron_data(&tm3, PERRON_TOL).unwrap()).unwrap();
        for (a, b) in g.values().iter().zip(g3.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_sandwich_on_free() {
        let (sft, g, f) = free_system();
        let tm = TransferMatrix::with_default_depth(&sft, &f).unwrap();
        let rows = sphere_comparison(&tm, &g, 3f64.ln(), 10);
        assert!((rows[0].ratio - 1.0).abs() < 1e-12);
        for r in &rows[1..] {
            assert!((r.ratio - 4.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn variation_bound_on_indicator() {
        let sft = golden();
        let f = Potential::constant(&sft, 0.6).unwrap();
        let tm = TransferMatrix::new(&sft, &f, 4).unwrap();
        let phi = tm.tabulate(|w| if w[0] == 0 { 1.0 } else { 0.0 });
        let consts = VariationConstants::for_sft(&sft, 0.5, 1);
        for n in 1..5 {
            assert!(variation_bound(&sft, &f, &tm, &consts, &phi, n).holds);
        }
    }
}
