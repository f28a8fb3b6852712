//! Finitely generated groups as multiplication oracles with word-metric geometry.

mod ball;
mod cyclic;
mod free;
mod gens;
mod product;
mod spec;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

pub use ball::{gromov_product, BallTable, GrowthSeries, HalfInteger};
pub use cyclic::CyclicGroup;
pub use free::FreeGroup;
pub use gens::{GeneratorSet, Letter, Word};
pub use product::ProductGroup;
pub use spec::{GroupBuilder, GroupRegistry, SpecArg, SpecNode};

use crate::error::Result;

/// Group element in backend-specific canonical form.
///
/// `Free` holds a freely reduced word in the backend's local letters, `Cyclic`
/// a residue, `Pair` the two coordinates of a direct product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Free(Vec<Letter>),
    Cyclic(u64),
    Pair(Box<(Element, Element)>),
}

impl Element {
    pub fn pair(a: Element, b: Element) -> Self {
        Element::Pair(Box::new((a, b)))
    }
}

/// A group backend. Letter indices are local to the backend and fixed.
pub trait GroupBackend: Send + Sync + fmt::Debug {
    fn spec(&self) -> String;
    fn letter_names(&self) -> Vec<String>;
    fn letter_inverses(&self) -> Vec<Letter>;

    fn identity(&self) -> Element;
    fn multiply(&self, a: &Element, b: &Element) -> Element;
    fn inverse(&self, a: &Element) -> Element;
    fn generator(&self, l: Letter) -> Element;
    fn word_length(&self, g: &Element) -> usize;

    /// ShortLex-least geodesic word for `g`, letters compared by `rank`.
    fn geodesic(&self, g: &Element, rank: &dyn Fn(Letter) -> u32) -> Word;

    /// Image in the abelianization, one coordinate per cyclic factor.
    fn abelianization(&self, g: &Element) -> Vec<i64>;
    /// Moduli of the abelianization coordinates; 0 stands for ℤ.
    fn abelian_moduli(&self) -> Vec<u64>;

    /// Exact sphere sizes |S(0)|, ..., |S(r)|.
    fn sphere_counts(&self, r: usize) -> Vec<u128>;

    /// Certified hyperbolicity constant of the Cayley graph, if known.
    fn hyperbolicity(&self) -> Option<u32> {
        None
    }

    /// `Some(k)` when the backend is the free group of rank k.
    fn free_rank(&self) -> Option<usize> {
        None
    }

    /// Group order when finite.
    fn order(&self) -> Option<u64> {
        None
    }

    /// All elements of a finite group, sorted.
    fn elements(&self) -> Option<Vec<Element>> {
        None
    }

    /// The two factors of a direct product.
    fn factors(&self) -> Option<(&Arc<dyn GroupBackend>, &Arc<dyn GroupBackend>)> {
        None
    }
}

/// A group backend together with an ordered generating set.
#[derive(Clone)]
pub struct Group {
    backend: Arc<dyn GroupBackend>,
    gens: GeneratorSet,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Group({}; {})",
            self.spec(),
            self.gens.order_names().join("<")
        )
    }
}

impl Group {
    pub fn new(backend: Arc<dyn GroupBackend>) -> Result<Self> {
        let gens = GeneratorSet::new(backend.letter_names(), backend.letter_inverses())?;
        Ok(Group { backend, gens })
    }

    /// Parses the spec mini-language with the default registry.
    pub fn from_spec(spec: &str) -> Result<Self> {
        GroupRegistry::default().build(spec)
    }

    pub fn with_order<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        Ok(Group {
            backend: self.backend.clone(),
            gens: self.gens.with_order(order)?,
        })
    }

    pub fn backend(&self) -> &Arc<dyn GroupBackend> {
        &self.backend
    }

    pub fn spec(&self) -> String {
        self.backend.spec()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn identity(&self) -> Element {
        self.backend.identity()
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.backend.multiply(a, b)
    }

    pub fn inv(&self, a: &Element) -> Element {
        self.backend.inverse(a)
    }

    pub fn gen(&self, l: Letter) -> Element {
        self.backend.generator(l)
    }

    pub fn eval(&self, w: &[Letter]) -> Element {
        w.iter()
            .fold(self.identity(), |acc, &l| self.mul(&acc, &self.gen(l)))
    }

    pub fn word_length(&self, g: &Element) -> usize {
        self.backend.word_length(g)
    }

    /// d(x, y) = |x⁻¹y|.
    pub fn distance(&self, x: &Element, y: &Element) -> usize {
        self.word_length(&self.mul(&self.inv(x), y))
    }

    pub fn geodesic(&self, g: &Element) -> Word {
        let gens = &self.gens;
        self.backend.geodesic(g, &|l| gens.rank(l))
    }

    pub fn shortlex_cmp(&self, x: &Element, y: &Element) -> Ordering {
        self.gens.shortlex_cmp(&self.geodesic(x), &self.geodesic(y))
    }

    pub fn format(&self, g: &Element) -> String {
        self.gens.format_word(&self.geodesic(g))
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        Ok(self.eval(&self.gens.parse_word(text)?))
    }

    pub fn abelianization(&self, g: &Element) -> Vec<i64> {
        self.backend.abelianization(g)
    }

    pub fn abelian_moduli(&self) -> Vec<u64> {
        self.backend.abelian_moduli()
    }

    pub fn sphere_counts(&self, r: usize) -> Vec<u128> {
        self.backend.sphere_counts(r)
    }

    pub fn hyperbolicity(&self) -> Option<u32> {
        self.backend.hyperbolicity()
    }

    pub fn free_rank(&self) -> Option<usize> {
        self.backend.free_rank()
    }

    pub fn order(&self) -> Option<u64> {
        self.backend.order()
    }

    /// Exact growth rate when a closed form is known.
    pub fn exact_growth_rate(&self) -> Option<f64> {
        if let Some(k) = self.free_rank() {
            return Some(if k == 0 {
                0.0
            } else {
                ((2 * k - 1) as f64).ln()
            });
        }
        if self.order().is_some() {
            return Some(0.0);
        }
        if let Some((a, b)) = self.backend.factors() {
            let ra = Group::new(a.clone()).ok()?.exact_growth_rate()?;
            let rb = Group::new(b.clone()).ok()?.exact_growth_rate()?;
            return Some(ra.max(rb));
        }
        None
    }

    /// Elements of the sphere S(r), ShortLex-sorted. Plain BFS; use
    /// [`BallTable`] for repeated access.
    pub fn sphere(&self, r: usize) -> Result<Vec<Element>> {
        Ok(BallTable::build(self, r)?.sphere(r).to_vec())
    }
}
