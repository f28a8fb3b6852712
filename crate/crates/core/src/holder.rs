//! Hölder variations of locally constant functions on a subshift, with
//! d(x, y) = e^{−n} for n the length of the common prefix.

use serde::Serialize;

use crate::sft::SymWord;

/// Sup norm, Δ_α, optionally Δ_{α,r}, and ‖·‖_{∞,α} = sup + Δ_α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderData {
    pub alpha: f64,
    pub sup: f64,
    pub delta: f64,
    pub local: Option<(f64, f64)>,
    pub norm: f64,
}

impl HolderData {
    /// Δ_α − 2r^{−α}‖Φ‖ ≤ Δ_{α,r} ≤ Δ_α, up to rounding.
    pub fn sandwich_holds(&self) -> bool {
        match self.local {
            None => true,
            Some((r, local)) => {
                let slack = 1e-12 * (1.0 + self.delta);
                self.delta - 2.0 * r.powf(-self.alpha) * self.sup <= local + slack
                    && local <= self.delta + slack
            }
        }
    }
}

fn common_prefix(a: &[u16], b: &[u16]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// max over pairs with common prefix n ≥ `min_prefix` of e^{αn}·dist.
/// `words` all have the same length m and the function is constant on
/// their cylinders, so pairs with n ≥ m contribute nothing.
pub fn variation_by<V>(
    words: &[SymWord],
    values: &[V],
    alpha: f64,
    min_prefix: usize,
    dist: impl Fn(&V, &V) -> f64,
) -> f64 {
    let mut best = 0.0f64;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let n = common_prefix(&words[i], &words[j]);
            if n < min_prefix || n >= words[i].len() {
                continue;
            }
            let d = dist(&values[i], &values[j]);
            if d > 0.0 {
                best = best.max(d * (alpha * n as f64).exp());
            }
        }
    }
    best
}

/// Δ_α of a real function, using per-child extremes at each prefix node
/// instead of all pairs. `words` must be sorted.
pub fn delta_alpha(words: &[SymWord], values: &[f64], alpha: f64) -> f64 {
    delta_alpha_from(words, values, alpha, 0)
}

fn delta_alpha_from(words: &[SymWord], values: &[f64], alpha: f64, min_prefix: usize) -> f64 {
    let Some(m) = words.first().map(Vec::len) else {
        return 0.0;
    };
    let mut best = 0.0f64;
    for n in min_prefix..m {
        // runs of words sharing the first n symbols, split by symbol n
        let mut start = 0;
        while start < words.len() {
            let mut end = start;
            while end < words.len() && words[end][..n] == words[start][..n] {
                end += 1;
            }
            let mut groups: Vec<(f64, f64)> = Vec::new();
            let mut k = start;
            while k < end {
                let s = words[k][n];
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                while k < end && words[k][n] == s {
                    lo = lo.min(values[k]);
                    hi = hi.max(values[k]);
                    k += 1;
                }
                groups.push((lo, hi));
            }
            for (a, ga) in groups.iter().enumerate() {
                for (b, gb) in groups.iter().enumerate() {
                    if a != b {
                        best = best.max((ga.1 - gb.0) * (alpha * n as f64).exp());
                    }
                }
            }
            start = end;
        }
    }
    best
}

/// Hölder data of a real function; Δ_{α,r} restricts to d(x, y) < r.
pub fn holder_data(words: &[SymWord], values: &[f64], alpha: f64, r: Option<f64>) -> HolderData {
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let delta = delta_alpha(words, values, alpha);
    let local = r.map(|r| {
        (
            r,
            delta_alpha_from(words, values, alpha, local_min_prefix(r)),
        )
    });
    let data = HolderData {
        alpha,
        sup,
        delta,
        local,
        norm: sup + delta,
    };
    debug_assert!(data.sandwich_holds(), "{data:?}");
    data
}

/// Smallest n with e^{−n} < r.
pub fn local_min_prefix(r: f64) -> usize {
    let t = -r.ln();
    if t < 0.0 {
        0
    } else {
        t.floor() as usize + 1
    }
}

/// Re-expresses a depth-m table on the depth-m′ words `fine` (m′ ≥ m).
pub fn refine<V: Clone>(coarse_words: &[SymWord], values: &[V], fine: &[SymWord]) -> Vec<V> {
    let m = coarse_words.first().map_or(0, Vec::len);
    fine.iter()
        .map(|w| {
            let i = coarse_words
                .binary_search_by(|c| c.as_slice().cmp(&w[..m]))
                .expect("fine word restricts to an admissible coarse word");
            values[i].clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(m: usize) -> Vec<SymWord> {
        let mut out = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|w: SymWord| {
                    (0..2u16).map(move |s| {
                        let mut x = w.clone();
                        x.push(s);
                        x
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn constants_and_indicators() {
        let w = words(3);
        assert_eq!(delta_alpha(&w, &[2.0; 8], 0.7), 0.0);
        let ind: Vec<f64> = w
            .iter()
            .map(|x| if x[0] == 0 { 1.0 } else { 0.0 })
            .collect();
        assert_eq!(delta_alpha(&w, &ind, 0.7), 1.0);
    }

    #[test]
    fn grouped_matches_pairwise() {
        let w = words(4);
        let v: Vec<f64> = (0..16).map(|i| ((i * 7919) % 13) as f64 / 13.0).collect();
        let fast = delta_alpha(&w, &v, 0.5);
        let slow = variation_by(&w, &v, 0.5, 0, |a, b| (a - b).abs());
        assert!((fast - slow).abs() < 1e-12);
        let h = holder_data(&w, &v, 0.5, Some((-1.5f64).exp()));
        assert!(h.sandwich_holds());
        assert_eq!(local_min_prefix((-1.5f64).exp()), 2);
        assert_eq!(local_min_prefix(1.0), 1);
    }
}
