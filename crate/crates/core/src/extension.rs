//! Group extensions (x, g) ↦ (σx, g·θ(x)) of a subshift by a locally
//! constant label θ, their cocycles, reachable sets and visibility.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::MemBudget;
use crate::error::{Error, Result};
use crate::group::{BallTable, Element, Group};
use crate::sft::{Sft, SymWord, Symbol};

/// θ as a table on admissible words of length `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabellingMap {
    depth: usize,
    table: HashMap<SymWord, Element>,
}

impl LabellingMap {
    /// Checks that `table` covers every admissible word of length `depth`.
    pub fn new(sft: &Sft, depth: usize, table: HashMap<SymWord, Element>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::input("labelling depth must be at least 1"));
        }
        for w in sft.words(depth) {
            if !table.contains_key(&w) {
                return Err(Error::input(format!(
                    "labelling has no value on admissible word `{}`",
                    sft.format_word(&w)
                )));
            }
        }
        Ok(LabellingMap { depth, table })
    }

    /// Depth-one labelling given symbol by symbol.
    pub fn per_symbol(sft: &Sft, f: impl Fn(Symbol) -> Element) -> Result<Self> {
        let table = (0..sft.alphabet().len() as Symbol)
            .map(|s| (vec![s], f(s)))
            .collect();
        Self::new(sft, 1, table)
    }

    /// Parses the `theta` table of an SFT file: symbol word → group word.
    pub fn from_names(sft: &Sft, group: &Group, names: &BTreeMap<String, String>) -> Result<Self> {
        let mut table = HashMap::new();
        let mut depth = None;
        for (k, v) in names {
            let w = sft.parse_word(k)?;
            match depth {
                None => depth = Some(w.len()),
                Some(d) if d != w.len() => {
                    return Err(Error::input("theta keys have different lengths"));
                }
                _ => {}
            }
            table.insert(w, group.parse_element(v)?);
        }
        Self::new(sft, depth.unwrap_or(1), table)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn get(&self, w: &[Symbol]) -> Option<&Element> {
        self.table.get(w)
    }
}

/// Skew product of a subshift and a group along θ.
#[derive(Debug, Clone)]
pub struct ExtensionSystem {
    pub sft: Sft,
    pub theta: LabellingMap,
    pub group: Group,
}

/// One factorization g = u₁ θ_n(x) u₂ with x in the cylinder of `prefix`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub g: String,
    pub u1: String,
    pub prefix: String,
    pub n: usize,
    pub u2: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisibilityReport {
    pub pass: bool,
    pub test_radius: usize,
    pub n_max: usize,
    pub u: Vec<String>,
    pub certificates: Vec<Certificate>,
    pub uncovered: Vec<String>,
}

/// θ_n(x) for n ≤ n_max, each with its lexicographically least prefix.
#[derive(Debug, Clone)]
pub struct ReachableSet {
    pub levels: Vec<BTreeMap<Element, SymWord>>,
}

impl ReachableSet {
    pub fn level(&self, n: usize) -> &BTreeMap<Element, SymWord> {
        &self.levels[n]
    }

    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }
}

impl ExtensionSystem {
    pub fn new(sft: Sft, theta: LabellingMap, group: Group) -> Self {
        ExtensionSystem { sft, theta, group }
    }

    /// Same labelling on a subshift with the same alphabet.
    pub fn restricted(&self, sft: Sft) -> Result<Self> {
        let table = sft
            .words(self.theta.depth)
            .into_iter()
            .map(|w| {
                let g = self.theta.get(&w).cloned().ok_or_else(|| {
                    Error::input(format!("word `{}` is not labelled", sft.format_word(&w)))
                })?;
                Ok((w, g))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(ExtensionSystem {
            theta: LabellingMap::new(&sft, self.theta.depth, table)?,
            sft,
            group: self.group.clone(),
        })
    }

    /// θ_n(x) = θ(x)θ(σx)⋯θ(σ^{n−1}x), read off a finite prefix of x.
    pub fn cocycle(&self, prefix: &[Symbol], n: usize) -> Result<Element> {
        let need = if n == 0 { 0 } else { n + self.theta.depth - 1 };
        if prefix.len() < need {
            return Err(Error::InsufficientPrefix {
                have: prefix.len(),
                need,
            });
        }
        if !self.sft.is_admissible(prefix)? {
            return Err(Error::input(format!(
                "prefix `{}` is not admissible",
                self.sft.format_word(prefix)
            )));
        }
        Ok(self.cocycle_unchecked(prefix, n))
    }

    fn cocycle_unchecked(&self, prefix: &[Symbol], n: usize) -> Element {
        let m = self.theta.depth;
        (0..n).fold(self.group.identity(), |acc, i| {
            self.group.mul(&acc, &self.theta.table[&prefix[i..i + m]])
        })
    }

    pub fn reachable_set(&self, n_max: usize) -> Result<ReachableSet> {
        self.reachable_set_with_budget(n_max, MemBudget::from_env())
    }

    /// Breadth-first over (suffix, θ_n) pairs; words are extended in symbol
    /// order so the first prefix recorded per element is the least one.
    pub fn reachable_set_with_budget(
        &self,
        n_max: usize,
        budget: MemBudget,
    ) -> Result<ReachableSet> {
        let m = self.theta.depth;
        let keep = self.sft.memory().max(m) - 1;
        let k = self.sft.alphabet().len() as Symbol;
        let mut states: BTreeMap<(SymWord, Element), SymWord> = BTreeMap::new();
        for w in self.sft.words(m - 1) {
            let tail = w[w.len().saturating_sub(keep)..].to_vec();
            states.entry((tail, self.group.identity())).or_insert(w);
        }
        let mut levels = Vec::with_capacity(n_max + 1);
        levels.push(collect_level(&states));
        for n in 1..=n_max {
            let mut next: BTreeMap<(SymWord, Element), SymWord> = BTreeMap::new();
            for ((tail, g), prefix) in &states {
                for a in 0..k {
                    if !self.sft.extends(prefix, a) {
                        continue;
                    }
                    let mut ext = tail.clone();
                    ext.push(a);
                    let h = self.group.mul(g, &self.theta.table[&ext[ext.len() - m..]]);
                    let tail2 = ext[ext.len().saturating_sub(keep)..].to_vec();
                    let mut p = prefix.clone();
                    p.push(a);
                    match next.entry((tail2, h)) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(p);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            if p < *e.get() {
                                e.insert(p);
                            }
                        }
                    }
                }
            }
            let bytes = next.len() as u128 * (96 + 4 * (n + m) as u128);
            budget.check(bytes, || {
                format!("reachable set at n = {n}, {} states", next.len())
            })?;
            states = next;
            levels.push(collect_level(&states));
        }
        Ok(ReachableSet { levels })
    }

    /// Certificates g = u₁θ_n(x)u₂ for every g in B(test_radius), searched
    /// by increasing n and then least prefix.
    pub fn visibility_check(
        &self,
        u: &[Element],
        test_radius: usize,
        n_max: usize,
    ) -> Result<VisibilityReport> {
        let reach = self.reachable_set(n_max)?;
        let ball = BallTable::build(&self.group, test_radius)?;
        self.visibility_with(&reach, &ball, u, test_radius)
    }

    pub fn visibility_with(
        &self,
        reach: &ReachableSet,
        ball: &BallTable,
        u: &[Element],
        test_radius: usize,
    ) -> Result<VisibilityReport> {
        let gr = &self.group;
        let inv_u: Vec<Element> = u.iter().map(|x| gr.inv(x)).collect();
        let targets: Vec<&Element> = ball.ball(test_radius).collect();
        let found: Vec<std::result::Result<Certificate, String>> = targets
            .par_iter()
            .map(|&g| {
                for n in 0..=reach.n_max() {
                    let level = reach.level(n);
                    let mut best: Option<(&SymWord, usize, usize)> = None;
                    for (i, a) in inv_u.iter().enumerate() {
                        let ag = gr.mul(a, g);
                        for (j, b) in inv_u.iter().enumerate() {
                            if let Some(p) = level.get(&gr.mul(&ag, b)) {
                                if best.is_none_or(|(q, _, _)| p < q) {
                                    best = Some((p, i, j));
                                }
                            }
                        }
                    }
                    if let Some((p, i, j)) = best {
                        return Ok(Certificate {
                            g: gr.format(g),
                            u1: gr.format(&u[i]),
                            prefix: self.sft.format_word(p),
                            n,
                            u2: gr.format(&u[j]),
                        });
                    }
                }
                Err(gr.format(g))
            })
            .collect();
        let mut certificates = Vec::new();
        let mut uncovered = Vec::new();
        for r in found {
            match r {
                Ok(c) => certificates.push(c),
                Err(g) => uncovered.push(g),
            }
        }
        Ok(VisibilityReport {
            pass: uncovered.is_empty(),
            test_radius,
            n_max: reach.n_max(),
            u: u.iter().map(|x| gr.format(x)).collect(),
            certificates,
            uncovered,
        })
    }

    /// Tries U = B(0), B(1), ..., B(cap) and returns the first that passes.
    pub fn smallest_visible_ball(
        &self,
        test_radius: usize,
        n_max: usize,
        cap: usize,
    ) -> Result<(usize, VisibilityReport)> {
        let reach = self.reachable_set(n_max)?;
        let ball = BallTable::build(&self.group, test_radius.max(cap))?;
        let mut last = None;
        for r in 0..=cap {
            let u: Vec<Element> = ball.ball(r).cloned().collect();
            let rep = self.visibility_with(&reach, &ball, &u, test_radius)?;
            if rep.pass {
                return Ok((r, rep));
            }
            last = Some(rep);
        }
        let rep = last.expect("cap loop runs at least once");
        Err(Error::Exhausted(format!(
            "no U = B(r), r ≤ {cap}, gives visibility on B({test_radius}) with n ≤ {n_max}; {} elements uncovered, first {}",
            rep.uncovered.len(),
            rep.uncovered.first().map(String::as_str).unwrap_or("-")
        )))
    }

    /// Admissible words of length n whose concatenation with `h0` is
    /// admissible; these index the cylinders of S(h₀, n) = {h : Tⁿh ∈ [h₀]}.
    pub fn preimage_words(&self, h0: &[Symbol], n: usize) -> Vec<SymWord> {
        let mut out = Vec::new();
        for w in self.sft.words(n) {
            let mut x = w.clone();
            x.extend_from_slice(h0);
            if self.sft.admissible_unchecked(&x) {
                out.push(w);
            }
        }
        out
    }

    /// θ_n on S(h₀, n). Needs |h₀| ≥ m_θ − 1 when n > 0.
    pub fn preimage_images(&self, h0: &[Symbol], n: usize) -> Result<Vec<(SymWord, Element)>> {
        if n > 0 && h0.len() + 1 < self.theta.depth {
            return Err(Error::InsufficientPrefix {
                have: h0.len() + n,
                need: n + self.theta.depth - 1,
            });
        }
        Ok(self
            .preimage_words(h0, n)
            .into_iter()
            .map(|w| {
                let mut x = w.clone();
                x.extend_from_slice(h0);
                let g = self.cocycle_unchecked(&x, n);
                (w, g)
            })
            .collect())
    }

    /// θ_n is injective on S(h₀, n) with images in the sphere S(n).
    pub fn sphere_embedding_check(&self, h0: &[Symbol], n: usize) -> Result<EmbeddingReport> {
        let images = self.preimage_images(h0, n)?;
        let mut seen: HashMap<&Element, &SymWord> = HashMap::new();
        let mut collisions = Vec::new();
        let mut off_sphere = Vec::new();
        for (w, g) in &images {
            if self.group.word_length(g) != n {
                off_sphere.push(self.sft.format_word(w));
            }
            if let Some(prev) = seen.insert(g, w) {
                collisions.push((self.sft.format_word(prev), self.sft.format_word(w)));
            }
        }
        Ok(EmbeddingReport {
            n,
            preimages: images.len(),
            distinct_images: seen.len(),
            pass: collisions.is_empty() && off_sphere.is_empty(),
            collisions,
            off_sphere,
        })
    }

    /// Smallest (R, N), lexicographically, such that every g ∈ S(n) is
    /// u₁θ_k(h)u₂ with h ∈ S(h₀, k), n ≤ k ≤ n + N and u₁, u₂ ∈ B(R).
    pub fn sphere_cover_search(
        &self,
        h0: &[Symbol],
        n: usize,
        r_max: usize,
        big_n_max: usize,
    ) -> Result<CoverReport> {
        let gr = &self.group;
        let ball = BallTable::build(gr, n.max(r_max))?;
        let images: Vec<HashMap<Element, ()>> = (n..=n + big_n_max)
            .map(|k| {
                Ok(self
                    .preimage_images(h0, k)?
                    .into_iter()
                    .map(|(_, g)| (g, ()))
                    .collect())
            })
            .collect::<Result<_>>()?;
        let sphere = ball.sphere(n);
        let mut uncovered = Vec::new();
        for r in 0..=r_max {
            let inv_u: Vec<Element> = ball.ball(r).map(|x| gr.inv(x)).collect();
            for big_n in 0..=big_n_max {
                uncovered = sphere
                    .par_iter()
                    .filter(|g| {
                        !inv_u.iter().any(|a| {
                            let ag = gr.mul(a, g);
                            inv_u.iter().any(|b| {
                                let h = gr.mul(&ag, b);
                                images[..=big_n].iter().any(|im| im.contains_key(&h))
                            })
                        })
                    })
                    .map(|g| gr.format(g))
                    .collect();
                if uncovered.is_empty() {
                    return Ok(CoverReport {
                        n,
                        found: Some((r, big_n)),
                        uncovered,
                    });
                }
            }
        }
        Ok(CoverReport {
            n,
            found: None,
            uncovered,
        })
    }
}

fn collect_level(states: &BTreeMap<(SymWord, Element), SymWord>) -> BTreeMap<Element, SymWord> {
    let mut out: BTreeMap<Element, SymWord> = BTreeMap::new();
    for ((_, g), p) in states {
        match out.get(g) {
            Some(q) if q <= p => {}
            _ => {
                out.insert(g.clone(), p.clone());
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub n: usize,
    pub preimages: usize,
    pub distinct_images: usize,
    pub pass: bool,
    pub collisions: Vec<(String, String)>,
    pub off_sphere: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub n: usize,
    /// Smallest (R, N) found, or `None` when the caps ran out.
    pub found: Option<(usize, usize)>,
    /// Elements of S(n) left uncovered at the last (R, N) tried.
    pub uncovered: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn nb_extension() -> ExtensionSystem {
        let g = Group::from_spec("free:2").unwrap();
        let names: Vec<String> = g.generators().names().to_vec();
        let mut allowed = Vec::new();
        for x in 0..4u16 {
            for y in 0..4u16 {
                if y != g.generators().inverse(x) {
                    allowed.push(vec![x, y]);
                }
            }
        }
        let sft = Sft::new(names, 2, allowed).unwrap();
        let theta = LabellingMap::per_symbol(&sft, |s| g.gen(s)).unwrap();
        ExtensionSystem::new(sft, theta, g)
    }

    fn ray_extension() -> ExtensionSystem {
        let g = Group::from_spec("free:2").unwrap();
        let sft = Sft::from_json(r#"{"alphabet":["x","y"],"memory":2,"allowed":["xx","xy","yy"]}"#)
            .unwrap();
        let d = sft.communicating_classes();
        let comp = d.component(2).unwrap().clone();
        let theta = LabellingMap::per_symbol(&sft, |s| g.gen(2 * s)).unwrap();
        ExtensionSystem::new(sft, theta, g)
            .restricted(comp)
            .unwrap()
    }

    #[test]
    fn cocycle_basics() {
        let e = nb_extension();
        let w = e.sft.parse_word("abA").unwrap();
        assert_eq!(e.cocycle(&w, 0).unwrap(), e.group.identity());
        assert_eq!(e.group.format(&e.cocycle(&w, 2).unwrap()), "ab");
        assert!(matches!(
            e.cocycle(&w, 4),
            Err(Error::InsufficientPrefix { .. })
        ));
        assert!(e.cocycle(&e.sft.parse_word("aA").unwrap(), 1).is_err());
    }

    #[test]
    fn reachable_is_sphere() {
        let e = nb_extension();
        let r = e.reachable_set(3).unwrap();
        assert_eq!(r.level(3).len(), 36);
        assert!(r.level(3).keys().all(|g| e.group.word_length(g) == 3));
        let ray = ray_extension();
        let r = ray.reachable_set(4).unwrap();
        assert_eq!(r.level(4).len(), 1);
        assert_eq!(ray.group.format(r.level(4).keys().next().unwrap()), "bbbb");
    }

    #[test]
    fn visibility_verdicts() {
        let e = nb_extension();
        let rep = e.visibility_check(&[e.group.identity()], 6, 6).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.certificates.len(), 1 + 4 + 12 + 36 + 108 + 324 + 972);
        let ray = ray_extension();
        let u: Vec<Element> = BallTable::build(&ray.group, 1)
            .unwrap()
            .ball(1)
            .cloned()
            .collect();
        let rep = ray.visibility_check(&u, 5, 7).unwrap();
        assert!(!rep.pass);
        assert!(rep.uncovered.contains(&"aaaaa".to_string()));
    }

    #[test]
    fn embedding_and_cover() {
        let e = nb_extension();
        let a = e.sft.parse_word("a").unwrap();
        let rep = e.sphere_embedding_check(&a, 1).unwrap();
        assert_eq!((rep.preimages, rep.distinct_images, rep.pass), (3, 3, true));
        let rep = e.sphere_embedding_check(&a, 4).unwrap();
        assert_eq!(rep.preimages, 81);
        assert!(rep.pass);
        assert_eq!(e.sphere_embedding_check(&a, 0).unwrap().preimages, 1);
        assert_eq!(
            e.sphere_cover_search(&[], 5, 2, 2).unwrap().found,
            Some((0, 0))
        );
        assert_eq!(
            e.sphere_cover_search(&a, 5, 2, 2).unwrap().found,
            Some((1, 0))
        );
        let ray = ray_extension();
        let rep = ray.sphere_cover_search(&[], 3, 1, 1).unwrap();
        assert!(rep.found.is_none() && !rep.uncovered.is_empty());
    }
}
