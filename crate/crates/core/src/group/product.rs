use std::sync::Arc;

use super::{Element, GroupBackend, Letter, Word};

/// Direct product generated by the union of the factor generating sets.
/// Word length is additive over the factors. Right-factor letters whose
/// name collides with a left one get a `'` suffix.
#[derive(Debug, Clone)]
pub struct ProductGroup {
    left: Arc<dyn GroupBackend>,
    right: Arc<dyn GroupBackend>,
    split: Letter,
}

impl ProductGroup {
    pub fn new(left: Arc<dyn GroupBackend>, right: Arc<dyn GroupBackend>) -> Self {
        let split = left.letter_names().len() as Letter;
        ProductGroup { left, right, split }
    }

    fn parts<'a>(&self, g: &'a Element) -> (&'a Element, &'a Element) {
        match g {
            Element::Pair(p) => (&p.0, &p.1),
            _ => panic!("element {g:?} does not belong to {}", self.spec()),
        }
    }
}

impl GroupBackend for ProductGroup {
    fn spec(&self) -> String {
        format!("product({},{})", self.left.spec(), self.right.spec())
    }

    fn letter_names(&self) -> Vec<String> {
        let mut names = self.left.letter_names();
        for n in self.right.letter_names() {
            let mut n = n;
            while names.contains(&n) {
                n.push('\'');
            }
            names.push(n);
        }
        names
    }

    fn letter_inverses(&self) -> Vec<Letter> {
        let mut inv = self.left.letter_inverses();
        inv.extend(
            self.right
                .letter_inverses()
                .into_iter()
                .map(|l| l + self.split),
        );
        inv
    }

    fn identity(&self) -> Element {
        Element::pair(self.left.identity(), self.right.identity())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let (a0, a1) = self.parts(a);
        let (b0, b1) = self.parts(b);
        Element::pair(self.left.multiply(a0, b0), self.right.multiply(a1, b1))
    }

    fn inverse(&self, a: &Element) -> Element {
        let (a0, a1) = self.parts(a);
        Element::pair(self.left.inverse(a0), self.right.inverse(a1))
    }

    fn generator(&self, l: Letter) -> Element {
        if l < self.split {
            Element::pair(self.left.generator(l), self.right.identity())
        } else {
            Element::pair(self.left.identity(), self.right.generator(l - self.split))
        }
    }

    fn word_length(&self, g: &Element) -> usize {
        let (a, b) = self.parts(g);
        self.left.word_length(a) + self.right.word_length(b)
    }

    fn geodesic(&self, g: &Element, rank: &dyn Fn(Letter) -> u32) -> Word {
        let (a, b) = self.parts(g);
        let split = self.split;
        let u = self.left.geodesic(a, &|l| rank(l));
        let v: Word = self
            .right
            .geodesic(b, &|l| rank(l + split))
            .into_iter()
            .map(|l| l + split)
            .collect();
        // Letters of the two factors commute, so the least geodesic is the
        // least shuffle; heads never tie, hence greedy merging is optimal.
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(u.len() + v.len());
        while i < u.len() || j < v.len() {
            let take_left = j == v.len() || (i < u.len() && rank(u[i]) < rank(v[j]));
            if take_left {
                out.push(u[i]);
                i += 1;
            } else {
                out.push(v[j]);
                j += 1;
            }
        }
        out
    }

    fn abelianization(&self, g: &Element) -> Vec<i64> {
        let (a, b) = self.parts(g);
        let mut v = self.left.abelianization(a);
        v.extend(self.right.abelianization(b));
        v
    }

    fn abelian_moduli(&self) -> Vec<u64> {
        let mut v = self.left.abelian_moduli();
        v.extend(self.right.abelian_moduli());
        v
    }

    fn sphere_counts(&self, r: usize) -> Vec<u128> {
        let a = self.left.sphere_counts(r);
        let b = self.right.sphere_counts(r);
        (0..=r)
            .map(|n| {
                (0..=n)
                    .map(|k| a[k].saturating_mul(b[n - k]))
                    .fold(0u128, |s, x| s.saturating_add(x))
            })
            .collect()
    }

    fn order(&self) -> Option<u64> {
        Some(self.left.order()? * self.right.order()?)
    }

    fn elements(&self) -> Option<Vec<Element>> {
        let a = self.left.elements()?;
        let b = self.right.elements()?;
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                out.push(Element::pair(x.clone(), y.clone()));
            }
        }
        out.sort();
        Some(out)
    }

    fn factors(&self) -> Option<(&Arc<dyn GroupBackend>, &Arc<dyn GroupBackend>)> {
        Some((&self.left, &self.right))
    }
}
