//! Coset spaces H\G with the right action of the generators, and truncated
//! Schreier graphs.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Deserialize;

use crate::budget::MemBudget;
use crate::error::{Error, Result};
use crate::group::{Element, Group, Letter, Word};

/// Label of a coset Hg.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coset {
    Element(Element),
    Vector(Vec<i64>),
    Index(u32),
}

/// H\G with the right action y ↦ y·a of every generator.
pub trait CosetSpace: Send + Sync + fmt::Debug {
    fn spec(&self) -> String;
    /// The base coset y₀ = H.
    fn base(&self) -> Coset;
    fn act(&self, y: &Coset, l: Letter) -> Coset;
    fn coset_of(&self, g: &Element) -> Coset;
    /// [G : H] when finite.
    fn index(&self) -> Option<u64>;

    fn contains(&self, g: &Element) -> bool {
        self.coset_of(g) == self.base()
    }

    fn act_word(&self, y: &Coset, w: &[Letter]) -> Coset {
        w.iter().fold(y.clone(), |acc, &l| self.act(&acc, l))
    }
}

#[derive(Debug)]
struct TrivialSubgroup {
    group: Group,
}

impl CosetSpace for TrivialSubgroup {
    fn spec(&self) -> String {
        "trivial".into()
    }
    fn base(&self) -> Coset {
        Coset::Element(self.group.identity())
    }
    fn act(&self, y: &Coset, l: Letter) -> Coset {
        match y {
            Coset::Element(g) => Coset::Element(self.group.mul(g, &self.group.gen(l))),
            _ => unreachable!("trivial subgroup cosets are elements"),
        }
    }
    fn coset_of(&self, g: &Element) -> Coset {
        Coset::Element(g.clone())
    }
    fn index(&self) -> Option<u64> {
        self.group.order()
    }
}

#[derive(Debug)]
struct WholeGroup;

impl CosetSpace for WholeGroup {
    fn spec(&self) -> String {
        "whole".into()
    }
    fn base(&self) -> Coset {
        Coset::Index(0)
    }
    fn act(&self, y: &Coset, _l: Letter) -> Coset {
        y.clone()
    }
    fn coset_of(&self, _g: &Element) -> Coset {
        Coset::Index(0)
    }
    fn index(&self) -> Option<u64> {
        Some(1)
    }
}

/// Kernel of g ↦ (exponent sums) reduced by `moduli` (0 keeps ℤ).
#[derive(Debug)]
struct AbelianKernel {
    name: String,
    group: Group,
    moduli: Vec<u64>,
    steps: Vec<Vec<i64>>,
}

impl AbelianKernel {
    fn new(name: String, group: &Group, moduli: Vec<u64>) -> Self {
        let steps = (0..group.rank() as Letter)
            .map(|l| group.abelianization(&group.gen(l)))
            .collect();
        AbelianKernel {
            name,
            group: group.clone(),
            moduli,
            steps,
        }
    }

    fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (x, &m) in v.iter_mut().zip(&self.moduli) {
            if m > 0 {
                *x = x.rem_euclid(m as i64);
            }
        }
        v
    }
}

impl CosetSpace for AbelianKernel {
    fn spec(&self) -> String {
        self.name.clone()
    }
    fn base(&self) -> Coset {
        Coset::Vector(vec![0; self.moduli.len()])
    }
    fn act(&self, y: &Coset, l: Letter) -> Coset {
        match y {
            Coset::Vector(v) => {
                let s = &self.steps[l as usize];
                Coset::Vector(self.reduce(v.iter().zip(s).map(|(a, b)| a + b).collect()))
            }
            _ => unreachable!("abelian cosets are vectors"),
        }
    }
    fn coset_of(&self, g: &Element) -> Coset {
        Coset::Vector(self.reduce(self.group.abelianization(g)))
    }
    fn index(&self) -> Option<u64> {
        self.moduli
            .iter()
            .try_fold(1u64, |acc, &m| (m > 0).then(|| acc * m))
    }
}

/// Finite-index subgroup given by a permutation action on cosets; H is the
/// stabilizer of `base`.
#[derive(Debug)]
struct TableSubgroup {
    name: String,
    group: Group,
    base: u32,
    perms: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct TableFile {
    cosets: u32,
    #[serde(default)]
    base: u32,
    action: BTreeMap<String, Vec<u32>>,
}

impl TableSubgroup {
    fn from_json(name: String, group: &Group, text: &str) -> Result<Self> {
        let t: TableFile = serde_json::from_str(text)
            .map_err(|e| Error::parse("coset table", &name, e.to_string()))?;
        if t.base >= t.cosets {
            return Err(Error::input("coset table base out of range"));
        }
        let gens = group.generators();
        let mut perms = vec![Vec::new(); gens.len()];
        for (name, p) in &t.action {
            let l = gens.letter(name)?;
            let mut seen = vec![false; t.cosets as usize];
            if p.len() != t.cosets as usize {
                return Err(Error::input(format!(
                    "permutation for `{name}` has wrong length"
                )));
            }
            for &x in p {
                if x >= t.cosets || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::input(format!(
                        "action of `{name}` is not a permutation"
                    )));
                }
            }
            perms[l as usize] = p.clone();
        }
        for l in 0..gens.len() as Letter {
            let li = gens.inverse(l) as usize;
            if perms[l as usize].is_empty() {
                if perms[li].is_empty() {
                    return Err(Error::input(format!(
                        "no action given for `{}`",
                        gens.name(l)
                    )));
                }
                let mut inv = vec![0; t.cosets as usize];
                for (x, &y) in perms[li].iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                perms[l as usize] = inv;
            }
        }
        for l in 0..gens.len() {
            let li = gens.inverse(l as Letter) as usize;
            for x in 0..t.cosets as usize {
                if perms[li][perms[l][x] as usize] as usize != x {
                    return Err(Error::input(format!(
                        "actions of `{}` and its inverse are not mutually inverse",
                        gens.name(l as Letter)
                    )));
                }
            }
        }
        Ok(TableSubgroup {
            name,
            group: group.clone(),
            base: t.base,
            perms,
        })
    }
}

impl CosetSpace for TableSubgroup {
    fn spec(&self) -> String {
        self.name.clone()
    }
    fn base(&self) -> Coset {
        Coset::Index(self.base)
    }
    fn act(&self, y: &Coset, l: Letter) -> Coset {
        match y {
            Coset::Index(i) => Coset::Index(self.perms[l as usize][*i as usize]),
            _ => unreachable!("table cosets are indices"),
        }
    }
    fn coset_of(&self, g: &Element) -> Coset {
        self.act_word(&self.base(), &self.group.geodesic(g))
    }
    fn index(&self) -> Option<u64> {
        Some(self.perms.first().map_or(1, |p| p.len() as u64))
    }
}

/// Builds a coset space from the text after `name:` (if any).
pub type SubgroupBuilder = fn(&Group, Option<&str>) -> Result<Arc<dyn CosetSpace>>;

/// Subgroup backends registered by spec name.
#[derive(Clone)]
pub struct SubgroupRegistry {
    builders: BTreeMap<String, SubgroupBuilder>,
}

impl Default for SubgroupRegistry {
    fn default() -> Self {
        let mut r = SubgroupRegistry {
            builders: BTreeMap::new(),
        };
        r.register("trivial", |g, a| {
            no_arg("trivial", a)?;
            Ok(Arc::new(TrivialSubgroup { group: g.clone() }))
        });
        r.register("whole", |_, a| {
            no_arg("whole", a)?;
            Ok(Arc::new(WholeGroup))
        });
        r.register("ker-ab", |g, a| {
            no_arg("ker-ab", a)?;
            Ok(Arc::new(AbelianKernel::new(
                "ker-ab".into(),
                g,
                g.abelian_moduli(),
            )))
        });
        r.register("ker-mod", build_ker_mod);
        r.register("table", |g, a| {
            let path = a.ok_or_else(|| Error::input("table needs a file path"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::input(format!("cannot read coset table `{path}`: {e}")))?;
            Ok(Arc::new(TableSubgroup::from_json(
                format!("table:{path}"),
                g,
                &text,
            )?))
        });
        r
    }
}

fn no_arg(name: &str, a: Option<&str>) -> Result<()> {
    match a {
        None => Ok(()),
        Some(_) => Err(Error::input(format!("subgroup `{name}` takes no argument"))),
    }
}

fn build_ker_mod(g: &Group, a: Option<&str>) -> Result<Arc<dyn CosetSpace>> {
    let k: u64 = a
        .and_then(|t| t.parse().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::parse("subgroup spec", a.unwrap_or(""), "ker-mod needs k ≥ 1"))?;
    let mut moduli = Vec::new();
    for m in g.abelian_moduli() {
        if m != 0 && m % k != 0 {
            return Err(Error::UnsupportedSubgroup {
                group: g.spec(),
                subgroup: format!("ker-mod:{k}"),
            });
        }
        moduli.push(k);
    }
    Ok(Arc::new(AbelianKernel::new(
        format!("ker-mod:{k}"),
        g,
        moduli,
    )))
}

impl SubgroupRegistry {
    pub fn register(&mut self, name: &str, b: SubgroupBuilder) {
        self.builders.insert(name.to_string(), b);
    }

    pub fn build(&self, group: &Group, spec: &str) -> Result<Arc<dyn CosetSpace>> {
        let spec = spec.trim();
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let b = self.builders.get(name).ok_or_else(|| {
            Error::parse(
                "subgroup spec",
                spec,
                format!(
                    "unknown subgroup; known: {}",
                    self.builders.keys().cloned().collect::<Vec<_>>().join(", ")
                ),
            )
        })?;
        b(group, arg)
    }
}

pub fn subgroup_from_spec(group: &Group, spec: &str) -> Result<Arc<dyn CosetSpace>> {
    SubgroupRegistry::default().build(group, spec)
}

/// Marks an edge leaving the truncation.
pub const BOUNDARY: u32 = u32::MAX;

/// Cosets within Schreier distance R of y₀ with labeled edges; edges into
/// the exterior point at [`BOUNDARY`] (Dirichlet truncation).
#[derive(Debug, Clone)]
pub struct SchreierGraph {
    pub subgroup: String,
    pub radius: usize,
    cosets: Vec<Coset>,
    dist: Vec<u32>,
    edges: Vec<u32>,
    rank: usize,
    index: FxHashMap<Coset, u32>,
}

impl SchreierGraph {
    pub fn build(group: &Group, space: &dyn CosetSpace, radius: usize) -> Result<Self> {
        Self::build_with_budget(group, space, radius, MemBudget::from_env())
    }

    pub fn build_with_budget(
        group: &Group,
        space: &dyn CosetSpace,
        radius: usize,
        budget: MemBudget,
    ) -> Result<Self> {
        let letters = group.generators().ordered();
        let rank = group.rank();
        let mut cosets = vec![space.base()];
        let mut dist = vec![0u32];
        let mut edges = vec![BOUNDARY; rank];
        let mut index = FxHashMap::default();
        index.insert(space.base(), 0u32);
        let mut queue = VecDeque::from([0u32]);
        let mut outer = Vec::new();
        let per = 96 + 8 * rank as u128 + 8 * (radius as u128 + 1);
        while let Some(y) = queue.pop_front() {
            let d = dist[y as usize];
            if d as usize == radius {
                outer.push(y);
                continue;
            }
            for &l in &letters {
                let z = space.act(&cosets[y as usize], l);
                let id = match index.get(&z) {
                    Some(&id) => id,
                    None => {
                        let id = cosets.len() as u32;
                        index.insert(z.clone(), id);
                        cosets.push(z);
                        dist.push(d + 1);
                        edges.extend(std::iter::repeat_n(BOUNDARY, rank));
                        queue.push_back(id);
                        if cosets.len() % 4096 == 0 {
                            budget.check(cosets.len() as u128 * per, || {
                                format!(
                                    "Schreier ball of radius {radius}, distance {} reached",
                                    d + 1
                                )
                            })?;
                        }
                        id
                    }
                };
                edges[y as usize * rank + l as usize] = id;
            }
        }
        // the outer sphere only links back into the ball or to itself
        for y in outer {
            for &l in &letters {
                let z = space.act(&cosets[y as usize], l);
                if let Some(&id) = index.get(&z) {
                    edges[y as usize * rank + l as usize] = id;
                }
            }
        }
        Ok(SchreierGraph {
            subgroup: space.spec(),
            radius,
            cosets,
            dist,
            edges,
            rank,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coset(&self, y: u32) -> &Coset {
        &self.cosets[y as usize]
    }

    pub fn distance(&self, y: u32) -> usize {
        self.dist[y as usize] as usize
    }

    pub fn id(&self, c: &Coset) -> Option<u32> {
        self.index.get(c).copied()
    }

    /// y·a, or `None` when the edge leaves the truncation.
    pub fn step(&self, y: u32, l: Letter) -> Option<u32> {
        match self.edges[y as usize * self.rank + l as usize] {
            BOUNDARY => None,
            z => Some(z),
        }
    }

    pub fn step_raw(&self, y: u32, l: Letter) -> u32 {
        self.edges[y as usize * self.rank + l as usize]
    }

    pub fn follow(&self, y: u32, w: &[Letter]) -> Option<u32> {
        w.iter().try_fold(y, |acc, &l| self.step(acc, l))
    }

    /// Vertices at distance ≤ r from y₀.
    pub fn ball_ids(&self, r: usize) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&y| self.distance(y) <= r)
            .collect()
    }

    /// (|S_Y(r)|, |B_Y(r)|) for r = 0..=radius: a Følner-type diagnostic.
    pub fn folner_profile(&self) -> Vec<(usize, usize, f64)> {
        let mut counts = vec![0usize; self.radius + 1];
        for &d in &self.dist {
            counts[d as usize] += 1;
        }
        let mut acc = 0;
        counts
            .iter()
            .map(|&s| {
                acc += s;
                (s, acc, s as f64 / acc as f64)
            })
            .collect()
    }

    /// Pushes every word of `words` from y₀ and compares with membership.
    /// Returns the first word where the graph and the oracle disagree.
    pub fn consistency_violation<'a>(
        &self,
        group: &Group,
        space: &dyn CosetSpace,
        words: impl IntoIterator<Item = &'a Word>,
    ) -> Option<Word> {
        for w in words {
            if let Some(y) = self.follow(0, w) {
                if (y == 0) != space.contains(&group.eval(w)) {
                    return Some(w.clone());
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::BallTable;

    fn f2() -> Group {
        Group::from_spec("free:2").unwrap()
    }

    #[test]
    fn ker_ab_ball_is_l1_ball() {
        let g = f2();
        let h = subgroup_from_spec(&g, "ker-ab").unwrap();
        let s = SchreierGraph::build(&g, h.as_ref(), 3).unwrap();
        assert_eq!(s.len(), 25);
    }

    #[test]
    fn whole_group_single_vertex() {
        let g = f2();
        let h = subgroup_from_spec(&g, "whole").unwrap();
        let s = SchreierGraph::build(&g, h.as_ref(), 4).unwrap();
        assert_eq!(s.len(), 1);
        for l in 0..4 {
            assert_eq!(s.step(0, l), Some(0));
        }
    }

    #[test]
    fn trivial_subgroup_is_cayley_ball() {
        let g = f2();
        let h = subgroup_from_spec(&g, "trivial").unwrap();
        let s = SchreierGraph::build(&g, h.as_ref(), 2).unwrap();
        assert_eq!(s.len(), 17);
        let boundary_edges = (0..s.len() as u32)
            .flat_map(|y| (0..4).map(move |l| (y, l)))
            .filter(|&(y, l)| s.step(y, l).is_none())
            .count();
        assert_eq!(boundary_edges, 12 * 3);
    }

    #[test]
    fn membership_consistency() {
        let g = f2();
        let t = BallTable::build(&g, 6).unwrap();
        let words: Vec<Word> = t.ball_with_words(6).map(|(_, w)| w.clone()).collect();
        for spec in ["trivial", "whole", "ker-ab", "ker-mod:3"] {
            let h = subgroup_from_spec(&g, spec).unwrap();
            let s = SchreierGraph::build(&g, h.as_ref(), 3).unwrap();
            assert_eq!(
                s.consistency_violation(&g, h.as_ref(), &words),
                None,
                "{spec}"
            );
        }
    }

    #[test]
    fn ker_mod_needs_divisibility() {
        let g = Group::from_spec("product(free:2,cyclic:2)").unwrap();
        assert!(subgroup_from_spec(&g, "ker-mod:2").is_ok());
        assert!(matches!(
            subgroup_from_spec(&g, "ker-mod:3"),
            Err(Error::UnsupportedSubgroup { .. })
        ));
        assert!(subgroup_from_spec(&g, "nope").is_err());
    }

    #[test]
    fn table_subgroup() {
        let g = f2();
        // a acts as a 3-cycle, b trivially: H has index 3.
        let json = r#"{"cosets":3,"base":0,"action":{"a":[1,2,0],"b":[0,1,2]}}"#;
        let h = TableSubgroup::from_json("table:t".into(), &g, json).unwrap();
        assert_eq!(h.index(), Some(3));
        assert!(h.contains(&g.parse_element("aaa").unwrap()));
        assert!(!h.contains(&g.parse_element("bab").unwrap()));
        assert!(h.contains(&g.parse_element("aBAb").unwrap()));
        let s = SchreierGraph::build(&g, &h, 5).unwrap();
        assert_eq!(s.len(), 3);
        let bad = r#"{"cosets":2,"action":{"a":[0,0]}}"#;
        assert!(TableSubgroup::from_json("t".into(), &g, bad).is_err());
    }
}
