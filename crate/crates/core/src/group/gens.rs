use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a generator inside its [`GeneratorSet`].
pub type Letter = u16;
/// A word over the generators, read left to right.
pub type Word = Vec<Letter>;

/// Symmetric generating set with a fixed total order on letters.
///
/// Letter indices are fixed by the group backend; the order (`rank`) can be
/// permuted freely with [`GeneratorSet::with_order`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    names: Vec<String>,
    inverse: Vec<Letter>,
    rank: Vec<u32>,
    #[serde(skip)]
    lookup: HashMap<String, Letter>,
}

impl GeneratorSet {
    pub fn new(names: Vec<String>, inverse: Vec<Letter>) -> Result<Self> {
        if names.len() != inverse.len() {
            return Err(Error::input(
                "generator names and inverse table differ in length",
            ));
        }
        if names.len() > Letter::MAX as usize {
            return Err(Error::input("too many generators"));
        }
        for (i, &j) in inverse.iter().enumerate() {
            let j = j as usize;
            if j >= names.len() || inverse[j] as usize != i {
                return Err(Error::input(format!(
                    "inverse table is not an involution at letter {}",
                    names[i]
                )));
            }
        }
        let mut lookup = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n == "1" || n.contains([',', ' ', '.']) {
                return Err(Error::input(format!("bad generator name `{n}`")));
            }
            if lookup.insert(n.clone(), i as Letter).is_some() {
                return Err(Error::input(format!("duplicate generator name `{n}`")));
            }
        }
        let rank = (0..names.len() as u32).collect();
        Ok(GeneratorSet {
            names,
            inverse,
            rank,
            lookup,
        })
    }

    /// Same letters, ordered as listed in `order` (which must name every letter once).
    pub fn with_order<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::input(format!(
                "order lists {} letters, the group has {}",
                order.len(),
                self.len()
            )));
        }
        let mut rank = vec![u32::MAX; self.len()];
        for (r, name) in order.iter().enumerate() {
            let l = self.letter(name.as_ref())?;
            if rank[l as usize] != u32::MAX {
                return Err(Error::input(format!(
                    "letter `{}` listed twice",
                    name.as_ref()
                )));
            }
            rank[l as usize] = r as u32;
        }
        let mut out = self.clone();
        out.rank = rank;
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        self.inverse[l as usize]
    }

    pub fn rank(&self, l: Letter) -> u32 {
        self.rank[l as usize]
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.lookup
            .get(name)
            .copied()
            .or_else(|| {
                self.names
                    .iter()
                    .position(|n| n == name)
                    .map(|i| i as Letter)
            })
            .ok_or_else(|| Error::parse("letter", name, "unknown generator"))
    }

    /// Letters sorted by the total order.
    pub fn ordered(&self) -> Vec<Letter> {
        let mut v: Vec<Letter> = (0..self.len() as Letter).collect();
        v.sort_by_key(|&l| self.rank(l));
        v
    }

    /// Letter names sorted by the total order.
    pub fn order_names(&self) -> Vec<String> {
        self.ordered()
            .into_iter()
            .map(|l| self.name(l).to_string())
            .collect()
    }

    pub fn cmp_letters(&self, a: Letter, b: Letter) -> Ordering {
        self.rank(a).cmp(&self.rank(b))
    }

    pub fn lex_cmp(&self, u: &[Letter], v: &[Letter]) -> Ordering {
        for (&a, &b) in u.iter().zip(v) {
            match self.cmp_letters(a, b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        u.len().cmp(&v.len())
    }

    pub fn shortlex_cmp(&self, u: &[Letter], v: &[Letter]) -> Ordering {
        u.len().cmp(&v.len()).then_with(|| self.lex_cmp(u, v))
    }

    pub fn inverse_word(&self, w: &[Letter]) -> Word {
        w.iter().rev().map(|&l| self.inverse(l)).collect()
    }

    /// Parses a word. Letters may be separated by `.` or spaces; otherwise the
    /// longest matching generator name is taken. `1` and the empty string are
    /// the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for chunk in t.split(['.', ' ']).filter(|c| !c.is_empty()) {
            let mut rest = chunk;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, n)) => {
                        out.push(i as Letter);
                        rest = &rest[n.len()..];
                    }
                    None => {
                        return Err(Error::parse(
                            "word",
                            text,
                            format!("no generator matches `{rest}`"),
                        ))
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let single = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = w.iter().map(|&l| self.name(l)).collect();
        if single {
            parts.concat()
        } else {
            parts.join(".")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2() -> GeneratorSet {
        GeneratorSet::new(
            vec!["a".into(), "A".into(), "b".into(), "B".into()],
            vec![1, 0, 3, 2],
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_involution() {
        assert!(GeneratorSet::new(vec!["a".into(), "b".into()], vec![1, 1]).is_err());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let g = free2();
        let w = g.parse_word("abAB").unwrap();
        assert_eq!(w, vec![0, 2, 1, 3]);
        assert_eq!(g.format_word(&w), "abAB");
        assert_eq!(g.parse_word("1").unwrap(), Vec::<Letter>::new());
        assert!(g.parse_word("ax").is_err());
    }

    #[test]
    fn reordering_changes_shortlex() {
        let g = free2();
        let h = g.with_order(&["b", "B", "a", "A"]).unwrap();
        assert_eq!(g.lex_cmp(&[0], &[2]), Ordering::Less);
        assert_eq!(h.lex_cmp(&[0], &[2]), Ordering::Greater);
        assert_eq!(h.order_names(), vec!["b", "B", "a", "A"]);
        assert!(g.with_order(&["a", "a", "b", "B"]).is_err());
    }

    #[test]
    fn multi_char_names() {
        let g = GeneratorSet::new(vec!["t1".into(), "t2".into()], vec![1, 0]).unwrap();
        assert_eq!(g.parse_word("t1t2t1").unwrap(), vec![0, 1, 0]);
        assert_eq!(g.format_word(&[0, 1]), "t1.t2");
        assert_eq!(g.parse_word("t1.t2").unwrap(), vec![0, 1]);
    }
}
