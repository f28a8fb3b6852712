//! Integral horofunctions on a Cayley graph and their coding by a
//! subshift of finite type over an alphabet of local patches.

mod exact;
mod generic;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::extension::{ExtensionSystem, LabellingMap, VisibilityReport};
use crate::group::{Element, Group, Letter};
use crate::sft::{Sft, SymWord, Symbol};

pub use exact::{gradient_ray_check, ExactFree, ExactFreeByFinite, ExactHorofunction};
pub use generic::GenericPatches;

/// Restriction of an integral horofunction to a finite domain containing 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HorofunctionPatch {
    pub domain: Vec<Element>,
    pub values: Vec<i64>,
}

impl HorofunctionPatch {
    /// Sorts the domain so equal restrictions compare equal.
    pub fn new(mut pairs: Vec<(Element, i64)>) -> Self {
        pairs.sort();
        pairs.dedup_by(|a, b| a.0 == b.0);
        let (domain, values) = pairs.into_iter().unzip();
        HorofunctionPatch { domain, values }
    }

    pub fn value(&self, x: &Element) -> Option<i64> {
        self.domain.binary_search(x).ok().map(|i| self.values[i])
    }

    /// The smallest generator a with value −1.
    pub fn first_letter(&self, group: &Group) -> Option<Letter> {
        group
            .generators()
            .ordered()
            .into_iter()
            .find(|&a| self.value(&group.gen(a)) == Some(-1))
    }

    /// Value 0 at 1, 1-Lipschitz along edges inside the domain, and the
    /// distance-like property one level down wherever a point has its whole
    /// neighbourhood in the domain.
    pub fn check_axioms(&self, group: &Group) -> std::result::Result<(), String> {
        if self.value(&group.identity()) != Some(0) {
            return Err("value at the identity is not 0".into());
        }
        let letters = group.generators().ordered();
        let lowest = self.values.iter().copied().min().unwrap_or(0);
        for (x, &hx) in self.domain.iter().zip(&self.values) {
            let mut all_inside = true;
            let mut descends = false;
            for &a in &letters {
                match self.value(&group.mul(x, &group.gen(a))) {
                    Some(hy) => {
                        if (hx - hy).abs() > 1 {
                            return Err(format!("not 1-Lipschitz at {}", group.format(x)));
                        }
                        descends |= hy == hx - 1;
                    }
                    None => all_inside = false,
                }
            }
            if all_inside && hx > lowest && !descends {
                return Err(format!("no descent from {}", group.format(x)));
            }
        }
        Ok(())
    }
}

/// Radii of the patch window and, for the generic backend, the sphere
/// radius at which patch sets are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingParams {
    pub r0: usize,
    pub l0: usize,
    pub r_stab: Option<usize>,
}

impl Default for CodingParams {
    fn default() -> Self {
        CodingParams {
            r0: 1,
            l0: 3,
            r_stab: None,
        }
    }
}

/// The coded system: one symbol per patch, θ per symbol, and the SFT.
#[derive(Debug, Clone)]
pub struct HoroCoding {
    pub group: Group,
    pub backend: String,
    pub params: CodingParams,
    pub certified: bool,
    pub sft: Sft,
    pub patches: Vec<HorofunctionPatch>,
    pub theta: Vec<Letter>,
    /// Finite-factor coordinate of each symbol, for free-by-finite groups.
    pub layers: Option<Vec<Element>>,
}

impl HoroCoding {
    pub fn extension(&self) -> ExtensionSystem {
        let theta = LabellingMap::per_symbol(&self.sft, |s| self.group.gen(self.theta[s as usize]))
            .expect("every symbol carries a letter");
        ExtensionSystem::new(self.sft.clone(), theta, self.group.clone())
    }

    pub fn theta_of(&self, s: Symbol) -> Letter {
        self.theta[s as usize]
    }

    pub fn layer(&self, s: Symbol) -> Option<&Element> {
        self.layers.as_ref().map(|l| &l[s as usize])
    }

    /// Emits θ of the first patch and returns the shifted prefix.
    pub fn shift_step(&self, prefix: &[Symbol]) -> Result<(Letter, SymWord)> {
        if prefix.is_empty() {
            return Err(Error::input("shift_step needs a nonempty prefix"));
        }
        if !self.sft.is_admissible(prefix)? {
            return Err(Error::input(format!(
                "prefix `{}` is not admissible",
                self.sft.format_word(prefix)
            )));
        }
        Ok((self.theta_of(prefix[0]), prefix[1..].to_vec()))
    }

    /// Every patch satisfies the patch axioms; returns the first failure.
    pub fn check_patches(&self) -> std::result::Result<(), String> {
        for (i, p) in self.patches.iter().enumerate() {
            p.check_axioms(&self.group)
                .map_err(|e| format!("patch {}: {e}", self.sft.alphabet()[i]))?;
            if p.first_letter(&self.group) != Some(self.theta[i]) {
                return Err(format!(
                    "patch {}: θ is not its smallest descending letter",
                    i
                ));
            }
        }
        Ok(())
    }

    /// First communicating class whose extension is visible with
    /// U = B(r), r ≤ `u_cap`, on B(`test_radius`).
    pub fn select_visible_component(
        &self,
        test_radius: usize,
        n_max: usize,
        u_cap: usize,
    ) -> Result<Selection> {
        let decomposition = self.sft.communicating_classes();
        let ext = self.extension();
        let mut tried = Vec::new();
        for (k, comp) in &decomposition.component_sfts {
            let sub = ext.restricted(comp.clone())?;
            match sub.smallest_visible_ball(test_radius, n_max, u_cap) {
                Ok((u_radius, report)) => {
                    return Ok(Selection {
                        class: *k,
                        u_radius,
                        report,
                    })
                }
                Err(Error::Exhausted(_)) => tried.push(*k),
                Err(e) => return Err(e),
            }
        }
        Err(Error::Exhausted(format!(
            "no class among {tried:?} is visible with U ⊆ B({u_cap}) on B({test_radius}), n ≤ {n_max}"
        )))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut file = self.sft.to_file();
        file.theta = Some(
            (0..self.sft.alphabet().len())
                .map(|s| {
                    (
                        self.sft.alphabet()[s].clone(),
                        self.group.generators().name(self.theta[s]).to_string(),
                    )
                })
                .collect(),
        );
        let patches: Vec<serde_json::Value> = self
            .patches
            .iter()
            .enumerate()
            .map(|(s, p)| {
                let values: BTreeMap<String, i64> = p
                    .domain
                    .iter()
                    .zip(&p.values)
                    .map(|(x, &v)| (self.group.format(x), v))
                    .collect();
                json!({ "symbol": self.sft.alphabet()[s], "values": values })
            })
            .collect();
        json!({
            "backend": self.backend,
            "group": self.group.spec(),
            "order": self.group.generators().order_names(),
            "params": self.params,
            "certified": self.certified,
            "sft": file,
            "patches": patches,
        })
    }
}

/// Outcome of [`HoroCoding::select_visible_component`].
#[derive(Debug, Clone, Serialize)]
pub struct Selection {
    pub class: usize,
    pub u_radius: usize,
    pub report: VisibilityReport,
}

/// Strategy producing a coding for a group.
pub trait CodingBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn supports(&self, group: &Group) -> bool;
    fn build(&self, group: &Group, params: &CodingParams) -> Result<HoroCoding>;
}

/// Picks the first exact backend that accepts the group.
struct AutoExact;

impl CodingBackend for AutoExact {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn supports(&self, group: &Group) -> bool {
        ExactFree.supports(group) || ExactFreeByFinite.supports(group)
    }

    fn build(&self, group: &Group, params: &CodingParams) -> Result<HoroCoding> {
        if ExactFree.supports(group) {
            ExactFree.build(group, params)
        } else if ExactFreeByFinite.supports(group) {
            ExactFreeByFinite.build(group, params)
        } else {
            Err(Error::input(format!(
                "no exact coding for `{}`; use the generic backend",
                group.spec()
            )))
        }
    }
}

pub struct CodingRegistry {
    backends: BTreeMap<&'static str, Arc<dyn CodingBackend>>,
}

impl Default for CodingRegistry {
    fn default() -> Self {
        let mut r = CodingRegistry {
            backends: BTreeMap::new(),
        };
        r.register(Arc::new(ExactFree));
        r.register(Arc::new(ExactFreeByFinite));
        r.register(Arc::new(GenericPatches));
        r.register(Arc::new(AutoExact));
        r
    }
}

impl CodingRegistry {
    pub fn register(&mut self, b: Arc<dyn CodingBackend>) {
        self.backends.insert(b.name(), b);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.backends.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&Arc<dyn CodingBackend>> {
        self.backends.get(name).ok_or_else(|| {
            Error::parse(
                "coding backend",
                name,
                format!("expected one of {}", self.names().join(", ")),
            )
        })
    }
}

pub fn build_coding(group: &Group, params: &CodingParams, backend: &str) -> Result<HoroCoding> {
    CodingRegistry::default().get(backend)?.build(group, params)
}

/// A 1-block code φ from one coding onto another, with a k-block inverse.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyWitness {
    /// φ as symbol names, source → target.
    pub block_map: BTreeMap<String, String>,
    pub windows_preserved: bool,
    pub theta_preserved: bool,
    pub surjective: bool,
    /// Window length of the inverse code, if one was found.
    pub inverse_window: Option<usize>,
}

impl ConjugacyWitness {
    pub fn is_conjugacy(&self) -> bool {
        self.windows_preserved
            && self.theta_preserved
            && self.surjective
            && self.inverse_window.is_some()
    }
}

/// Matches each source patch with the target patch it restricts to, then
/// checks that the induced 1-block map is a conjugacy.
pub fn conjugacy_witness(
    from: &HoroCoding,
    to: &HoroCoding,
    k_max: usize,
) -> Result<ConjugacyWitness> {
    let mut phi: Vec<Symbol> = Vec::with_capacity(from.patches.len());
    for (s, p) in from.patches.iter().enumerate() {
        let hits: Vec<usize> = to
            .patches
            .iter()
            .enumerate()
            .filter(|(_, q)| {
                q.domain
                    .iter()
                    .zip(&q.values)
                    .all(|(x, &v)| p.value(x) == Some(v))
            })
            .map(|(i, _)| i)
            .collect();
        if hits.len() != 1 {
            return Err(Error::NoWitness {
                from: from.sft.alphabet()[s].clone(),
                to: format!("{} matching target patches", hits.len()),
            });
        }
        phi.push(hits[0] as Symbol);
    }
    let theta_preserved = (0..phi.len()).all(|s| from.theta[s] == to.theta[phi[s] as usize]);
    let l = from.sft.memory().max(to.sft.memory());
    let image: HashSet<SymWord> = from
        .sft
        .words(l)
        .iter()
        .map(|w| w.iter().map(|&s| phi[s as usize]).collect())
        .collect();
    let windows_preserved = image.iter().all(|w| to.sft.admissible_unchecked(w));
    let surjective = to.sft.words(l).iter().all(|w| image.contains(w));
    let mut inverse_window = None;
    for k in 1..=k_max {
        let mut first: HashMap<SymWord, Symbol> = HashMap::new();
        let ok = from.sft.words(k).into_iter().all(|v| {
            let img: SymWord = v.iter().map(|&s| phi[s as usize]).collect();
            *first.entry(img).or_insert(v[0]) == v[0]
        });
        if ok {
            inverse_window = Some(k);
            break;
        }
    }
    Ok(ConjugacyWitness {
        block_map: (0..phi.len())
            .map(|s| {
                (
                    from.sft.alphabet()[s].clone(),
                    to.sft.alphabet()[phi[s] as usize].clone(),
                )
            })
            .collect(),
        windows_preserved,
        theta_preserved,
        surjective,
        inverse_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horocode::exact::gradient_ray_check;

    fn f2() -> Group {
        Group::from_spec("free:2").unwrap()
    }

    fn f2z2(b_first: bool) -> Group {
        let g = Group::from_spec("product(free:2,cyclic:2)").unwrap();
        if b_first {
            g.with_order(&["t1", "a", "A", "b", "B"]).unwrap()
        } else {
            g
        }
    }

    #[test]
    fn exact_free_is_non_backtracking() {
        let c = build_coding(&f2(), &CodingParams::default(), "exact").unwrap();
        assert_eq!(c.sft.alphabet().len(), 4);
        assert_eq!(c.sft.allowed().len(), 12);
        for w in c.sft.allowed() {
            assert_ne!(w[1], c.group.generators().inverse(w[0]));
        }
        assert_eq!(c.theta, vec![0, 1, 2, 3]);
        c.check_patches().unwrap();
        assert_eq!(gradient_ray_check(&c, 6).unwrap(), 4 * 3usize.pow(6));
    }

    #[test]
    fn shift_step_emits_first_letter() {
        let c = build_coding(&f2(), &CodingParams::default(), "exact").unwrap();
        let (a, rest) = c.shift_step(&c.sft.parse_word("abab").unwrap()).unwrap();
        assert_eq!(c.group.generators().name(a), "a");
        assert_eq!(c.sft.format_word(&rest), "bab");
        let (b, _) = c.shift_step(&c.sft.parse_word("Ba").unwrap()).unwrap();
        assert_eq!(c.group.generators().name(b), "B");
        assert!(c.shift_step(&c.sft.parse_word("aA").unwrap()).is_err());
        assert!(c.shift_step(&[]).is_err());
    }

    #[test]
    fn free_by_finite_layers() {
        let last = build_coding(&f2z2(false), &CodingParams::default(), "exact").unwrap();
        assert_eq!(last.sft.allowed().len(), 24);
        let d = last.sft.communicating_classes();
        assert_eq!(d.component_sfts.len(), 2);
        for w in last.sft.allowed() {
            assert_eq!(last.layer(w[0]), last.layer(w[1]));
        }
        last.check_patches().unwrap();
        gradient_ray_check(&last, 6).unwrap();

        let first = build_coding(&f2z2(true), &CodingParams::default(), "exact").unwrap();
        assert_eq!(first.sft.allowed().len(), 16);
        let one = Element::Cyclic(0);
        for w in first.sft.allowed() {
            assert_eq!(first.layer(w[1]), Some(&one));
        }
        let d = first.sft.communicating_classes();
        assert_eq!(d.component_sfts.len(), 1);
        let (_, comp) = &d.component_sfts[0];
        assert!(comp
            .allowed()
            .iter()
            .flatten()
            .all(|&s| first.layer(s) == Some(&one)));
        first.check_patches().unwrap();
        gradient_ray_check(&first, 6).unwrap();
    }

    #[test]
    fn generic_free_is_conjugate_to_exact() {
        let params = CodingParams {
            r0: 1,
            l0: 3,
            r_stab: Some(8),
        };
        let generic = build_coding(&f2(), &params, "generic").unwrap();
        assert_eq!(generic.patches.len(), 108);
        assert!(generic.certified);
        generic.check_patches().unwrap();
        let exact = build_coding(&f2(), &params, "exact").unwrap();
        let w = conjugacy_witness(&generic, &exact, 6).unwrap();
        assert!(w.is_conjugacy());
        assert_eq!(w.inverse_window, Some(4));
    }

    #[test]
    fn generic_free_by_finite_matches_exact() {
        for b_first in [false, true] {
            let g = f2z2(b_first);
            let params = CodingParams {
                r0: 1,
                l0: 3,
                r_stab: Some(7),
            };
            let generic = build_coding(&g, &params, "generic").unwrap();
            assert!(!generic.certified);
            generic.check_patches().unwrap();
            let exact = build_coding(&g, &params, "exact").unwrap();
            let w = conjugacy_witness(&generic, &exact, 6).unwrap();
            assert!(w.theta_preserved && w.windows_preserved && w.inverse_window.is_some());
        }
    }

    #[test]
    fn visible_components() {
        let c = build_coding(&f2(), &CodingParams::default(), "exact").unwrap();
        let s = c.select_visible_component(4, 4, 3).unwrap();
        assert_eq!((s.class, s.u_radius), (0, 0));
        let c = build_coding(&f2z2(true), &CodingParams::default(), "exact").unwrap();
        let s = c.select_visible_component(4, 6, 3).unwrap();
        assert!(s.u_radius <= 2);
        assert!(s.report.pass);
    }

    #[test]
    fn unknown_backend() {
        assert!(build_coding(&f2(), &CodingParams::default(), "nope").is_err());
        assert!(build_coding(&f2(), &CodingParams::default(), "exact-free-by-finite").is_err());
    }
}
