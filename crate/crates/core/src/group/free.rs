use super::{Element, GroupBackend, Letter, Word};

/// Free group of rank k on letters a, A, b, B, ... (lowercase generator,
/// uppercase inverse). Local letter 2i is generator i, 2i+1 its inverse.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }

    fn word<'a>(&self, g: &'a Element) -> &'a [Letter] {
        match g {
            Element::Free(w) => w,
            _ => panic!("element {g:?} does not belong to free:{}", self.rank),
        }
    }
}

fn inv(l: Letter) -> Letter {
    l ^ 1
}

/// Free reduction of the concatenation `u v`, both already reduced.
pub(crate) fn reduce_concat(u: &[Letter], v: &[Letter]) -> Word {
    let mut k = 0;
    while k < u.len() && k < v.len() && u[u.len() - 1 - k] == inv(v[k]) {
        k += 1;
    }
    let mut out = Vec::with_capacity(u.len() + v.len() - 2 * k);
    out.extend_from_slice(&u[..u.len() - k]);
    out.extend_from_slice(&v[k..]);
    out
}

impl GroupBackend for FreeGroup {
    fn spec(&self) -> String {
        format!("free:{}", self.rank)
    }

    fn letter_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            let c = if i < 26 {
                (b'a' + i as u8) as char
            } else {
                '?'
            };
            if i < 26 {
                out.push(c.to_string());
                out.push(c.to_ascii_uppercase().to_string());
            } else {
                out.push(format!("x{i}"));
                out.push(format!("X{i}"));
            }
        }
        out
    }

    fn letter_inverses(&self) -> Vec<Letter> {
        (0..2 * self.rank as Letter).map(inv).collect()
    }

    fn identity(&self) -> Element {
        Element::Free(Vec::new())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        Element::Free(reduce_concat(self.word(a), self.word(b)))
    }

    fn inverse(&self, a: &Element) -> Element {
        Element::Free(self.word(a).iter().rev().map(|&l| inv(l)).collect())
    }

    fn generator(&self, l: Letter) -> Element {
        Element::Free(vec![l])
    }

    fn word_length(&self, g: &Element) -> usize {
        self.word(g).len()
    }

    fn geodesic(&self, g: &Element, _rank: &dyn Fn(Letter) -> u32) -> Word {
        self.word(g).to_vec()
    }

    fn abelianization(&self, g: &Element) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &l in self.word(g) {
            v[(l / 2) as usize] += if l % 2 == 0 { 1 } else { -1 };
        }
        v
    }

    fn abelian_moduli(&self) -> Vec<u64> {
        vec![0; self.rank]
    }

    fn sphere_counts(&self, r: usize) -> Vec<u128> {
        let mut out = vec![1u128];
        let k = self.rank as u128;
        let mut s = 2 * k;
        for _ in 1..=r {
            out.push(s);
            s = s.saturating_mul((2 * k).saturating_sub(1));
        }
        out
    }

    fn hyperbolicity(&self) -> Option<u32> {
        Some(0)
    }

    fn free_rank(&self) -> Option<usize> {
        Some(self.rank)
    }

    fn order(&self) -> Option<u64> {
        (self.rank == 0).then_some(1)
    }

    fn elements(&self) -> Option<Vec<Element>> {
        (self.rank == 0).then(|| vec![self.identity()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(reduce_concat(&[0, 2], &[3, 1, 2]), vec![2]);
        assert_eq!(reduce_concat(&[0], &[1]), Vec::<Letter>::new());
    }

    #[test]
    fn counts() {
        let f = FreeGroup::new(2);
        assert_eq!(f.sphere_counts(3), vec![1, 4, 12, 36]);
        assert_eq!(f.letter_names(), vec!["a", "A", "b", "B"]);
    }
}
