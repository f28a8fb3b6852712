use super::{Element, GroupBackend, Letter, Word};

/// ℤ/n generated by all of its nontrivial elements, named t1, ..., t(n-1).
/// Every nontrivial element has word length 1.
#[derive(Debug, Clone)]
pub struct CyclicGroup {
    n: u64,
}

impl CyclicGroup {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        CyclicGroup { n }
    }

    fn val(&self, g: &Element) -> u64 {
        match g {
            Element::Cyclic(k) => *k,
            _ => panic!("element {g:?} does not belong to cyclic:{}", self.n),
        }
    }
}

impl GroupBackend for CyclicGroup {
    fn spec(&self) -> String {
        if self.n == 1 {
            "trivial".into()
        } else {
            format!("cyclic:{}", self.n)
        }
    }

    fn letter_names(&self) -> Vec<String> {
        (1..self.n).map(|k| format!("t{k}")).collect()
    }

    fn letter_inverses(&self) -> Vec<Letter> {
        (1..self.n).map(|k| (self.n - k - 1) as Letter).collect()
    }

    fn identity(&self) -> Element {
        Element::Cyclic(0)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        Element::Cyclic((self.val(a) + self.val(b)) % self.n)
    }

    fn inverse(&self, a: &Element) -> Element {
        Element::Cyclic((self.n - self.val(a)) % self.n)
    }

    fn generator(&self, l: Letter) -> Element {
        Element::Cyclic(l as u64 + 1)
    }

    fn word_length(&self, g: &Element) -> usize {
        (self.val(g) != 0) as usize
    }

    fn geodesic(&self, g: &Element, _rank: &dyn Fn(Letter) -> u32) -> Word {
        match self.val(g) {
            0 => Vec::new(),
            k => vec![(k - 1) as Letter],
        }
    }

    fn abelianization(&self, g: &Element) -> Vec<i64> {
        vec![self.val(g) as i64]
    }

    fn abelian_moduli(&self) -> Vec<u64> {
        vec![self.n]
    }

    fn sphere_counts(&self, r: usize) -> Vec<u128> {
        let mut out = vec![1u128];
        out.extend((1..=r).map(|i| if i == 1 { (self.n - 1) as u128 } else { 0 }));
        out
    }

    fn hyperbolicity(&self) -> Option<u32> {
        Some(1)
    }

    fn order(&self) -> Option<u64> {
        Some(self.n)
    }

    fn elements(&self) -> Option<Vec<Element>> {
        Some((0..self.n).map(Element::Cyclic).collect())
    }
}
