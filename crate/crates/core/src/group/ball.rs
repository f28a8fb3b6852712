use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Element, Group, Word};
use crate::budget::MemBudget;
use crate::error::Result;

/// Spheres S(0..r) around the identity, ShortLex-ordered, with the
/// ShortLex-least geodesic word of every element.
#[derive(Debug, Clone)]
pub struct BallTable {
    spheres: Vec<Vec<Element>>,
    words: Vec<Vec<Word>>,
    /// Shell width used by sphere measures.
    pub delta: usize,
}

impl BallTable {
    pub fn build(group: &Group, r: usize) -> Result<Self> {
        Self::build_with_budget(group, r, MemBudget::from_env())
    }

    pub fn build_with_budget(group: &Group, r: usize, budget: MemBudget) -> Result<Self> {
        Self::grow(group, r, budget, false)
    }

    /// Builds as many spheres up to `r` as the budget allows.
    pub fn build_within(group: &Group, r: usize, budget: MemBudget) -> Self {
        Self::grow(group, r, budget, true).expect("partial builds stop before the budget")
    }

    fn grow(group: &Group, r: usize, budget: MemBudget, partial: bool) -> Result<Self> {
        let letters = group.generators().ordered();
        let mut spheres = vec![vec![group.identity()]];
        let mut words: Vec<Vec<Word>> = vec![vec![Vec::new()]];
        let mut total: u128 = 1;
        for n in 0..r {
            // a point of S(n), n ≥ 1, has a neighbour in S(n − 1)
            let fanout = if n == 0 {
                letters.len()
            } else {
                letters.len().saturating_sub(1)
            };
            let predicted = total + (spheres[n].len() * fanout) as u128;
            let bytes = predicted * (160 + 6 * (n as u128 + 1));
            if partial && budget.check(bytes, String::new).is_err() {
                break;
            }
            budget.check(bytes, || {
                format!("ball of radius {r}, sphere S({}) reached", n + 1)
            })?;
            let mut seen: HashSet<Element> = HashSet::new();
            let mut next = Vec::new();
            let mut next_words = Vec::new();
            for (g, w) in spheres[n].iter().zip(&words[n]) {
                for &l in &letters {
                    let h = group.mul(g, &group.gen(l));
                    if group.word_length(&h) == n + 1 && seen.insert(h.clone()) {
                        let mut hw = w.clone();
                        hw.push(l);
                        next.push(h);
                        next_words.push(hw);
                    }
                }
            }
            total += next.len() as u128;
            spheres.push(next);
            words.push(next_words);
        }
        Ok(BallTable {
            spheres,
            words,
            delta: 1,
        })
    }

    pub fn radius(&self) -> usize {
        self.spheres.len() - 1
    }

    pub fn sphere(&self, n: usize) -> &[Element] {
        &self.spheres[n]
    }

    pub fn sphere_words(&self, n: usize) -> &[Word] {
        &self.words[n]
    }

    /// Elements of B(r) in ShortLex order.
    pub fn ball(&self, r: usize) -> impl Iterator<Item = &Element> {
        self.spheres[..=r.min(self.radius())].iter().flatten()
    }

    pub fn ball_with_words(&self, r: usize) -> impl Iterator<Item = (&Element, &Word)> {
        self.spheres[..=r.min(self.radius())]
            .iter()
            .zip(&self.words)
            .flat_map(|(s, w)| s.iter().zip(w))
    }

    /// Shell S(ℓ) = B(ℓ) \ B(ℓ − δ) for the table's δ.
    pub fn shell(&self, ell: usize) -> Vec<(&Element, &Word)> {
        let lo = (ell + 1).saturating_sub(self.delta);
        (lo..=ell)
            .flat_map(|n| self.spheres[n].iter().zip(&self.words[n]))
            .collect()
    }

    pub fn sphere_sizes(&self) -> Vec<u128> {
        self.spheres.iter().map(|s| s.len() as u128).collect()
    }
}

/// Ball and sphere counts with growth diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub spheres: Vec<u128>,
    pub balls: Vec<u128>,
    /// (1/r) ln |B(r)| for r ≥ 1.
    pub log_ball_over_r: Vec<f64>,
    /// ln(|B(r)| / |B(r−1)|) at the last radius.
    pub omega_hat: f64,
    /// max_r |B(r)| e^{−ω̂ r}.
    pub c1_hat: f64,
    pub subexponential: bool,
}

impl GrowthSeries {
    pub fn from_spheres(spheres: Vec<u128>) -> Self {
        let mut balls = Vec::with_capacity(spheres.len());
        let mut acc = 0u128;
        for &s in &spheres {
            acc = acc.saturating_add(s);
            balls.push(acc);
        }
        let log_ball_over_r = balls
            .iter()
            .enumerate()
            .skip(1)
            .map(|(r, &b)| (b as f64).ln() / r as f64)
            .collect();
        let r = balls.len() - 1;
        let (omega_hat, subexponential) = if r == 0 {
            (0.0, true)
        } else {
            let ratio = balls[r] as f64 / balls[r - 1] as f64;
            if spheres[r] == 0 || ratio <= 1.0 {
                (0.0, true)
            } else {
                (ratio.ln(), false)
            }
        };
        let c1_hat = balls
            .iter()
            .enumerate()
            .map(|(k, &b)| b as f64 * (-omega_hat * k as f64).exp())
            .fold(0.0, f64::max);
        GrowthSeries {
            spheres,
            balls,
            log_ball_over_r,
            omega_hat,
            c1_hat,
            subexponential,
        }
    }

    /// Exact counts from the backend closed forms.
    pub fn exact(group: &Group, r: usize) -> Self {
        Self::from_spheres(group.sphere_counts(r))
    }

    pub fn from_table(table: &BallTable) -> Self {
        Self::from_spheres(table.sphere_sizes())
    }

    pub fn radius(&self) -> usize {
        self.balls.len() - 1
    }

    /// e^{ω̂ r} ≤ |B(r)| ≤ Ĉ₁ e^{ω̂ r} for every tabulated r, up to `tol`.
    pub fn coornaert_holds(&self, tol: f64) -> bool {
        self.balls.iter().enumerate().all(|(r, &b)| {
            let e = (self.omega_hat * r as f64).exp();
            let b = b as f64;
            e <= b * (1.0 + tol) && b <= self.c1_hat * e * (1.0 + tol)
        })
    }
}

/// A value in ½ℤ, stored as twice itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub fn from_twice(t: i64) -> Self {
        HalfInteger(t)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// ⟨x, y⟩_z = ½(d(x,z) + d(y,z) − d(x,y)).
pub fn gromov_product(group: &Group, x: &Element, y: &Element, z: &Element) -> HalfInteger {
    let t = group.distance(x, z) as i64 + group.distance(y, z) as i64 - group.distance(x, y) as i64;
    HalfInteger(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_ball_matches_closed_form() {
        let g = Group::from_spec("free:2").unwrap();
        let t = BallTable::build(&g, 3).unwrap();
        assert_eq!(t.sphere_sizes(), vec![1, 4, 12, 36]);
        assert_eq!(t.sphere_words(1).len(), 4);
        for n in 0..=3 {
            for (e, w) in t.sphere(n).iter().zip(t.sphere_words(n)) {
                assert_eq!(&g.geodesic(e), w);
            }
        }
    }

    #[test]
    fn trivial_group_growth() {
        let g = Group::from_spec("trivial").unwrap();
        let t = BallTable::build(&g, 5).unwrap();
        assert_eq!(t.sphere_sizes(), vec![1, 0, 0, 0, 0, 0]);
        let s = GrowthSeries::from_table(&t);
        assert_eq!(s.omega_hat, 0.0);
        assert!(s.subexponential);
    }

    #[test]
    fn product_sphere_one() {
        let g = Group::from_spec("product(free:2,cyclic:2)").unwrap();
        let t = BallTable::build(&g, 3).unwrap();
        assert_eq!(t.sphere(1).len(), 5);
        assert_eq!(t.sphere_sizes(), g.sphere_counts(3));
    }

    #[test]
    fn gromov_examples() {
        let g = Group::from_spec("free:2").unwrap();
        let x = g.parse_element("a").unwrap();
        let y = g.parse_element("ab").unwrap();
        let one = g.identity();
        assert_eq!(gromov_product(&g, &x, &y, &one), HalfInteger::from_twice(2));
        assert_eq!(gromov_product(&g, &y, &y, &x).to_f64(), 1.0);
        assert_eq!(HalfInteger::from_twice(3).to_string(), "1.5");
    }

    #[test]
    fn budget_error_names_sphere() {
        let g = Group::from_spec("free:3").unwrap();
        let err = BallTable::build_with_budget(&g, 12, MemBudget::new(1)).unwrap_err();
        assert!(err.to_string().contains("sphere S("));
        let part = BallTable::build_within(&g, 12, MemBudget::new(1));
        assert!(part.radius() < 12 && part.radius() > 3);
        assert_eq!(part.sphere_sizes(), g.sphere_counts(part.radius()));
    }
}
