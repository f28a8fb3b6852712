use std::sync::Arc;

use super::{CodingBackend, CodingParams, HoroCoding, HorofunctionPatch};
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupBackend, Letter, Word};
use crate::sft::{Sft, SymWord, Symbol};

/// Non-backtracking coding of a free group: one symbol per letter.
pub struct ExactFree;

/// Coding of F_k × B for a finite group B: symbols are pairs (letter, c)
/// standing for the horofunctions h(x, b) = β_ξ(x) + d_B(b, c) − |c|_B.
pub struct ExactFreeByFinite;

struct Parts {
    free: Arc<dyn GroupBackend>,
    finite: Option<Arc<dyn GroupBackend>>,
}

fn parts(group: &Group) -> Option<Parts> {
    let b = group.backend();
    if b.free_rank().is_some() {
        return Some(Parts {
            free: b.clone(),
            finite: None,
        });
    }
    let (l, r) = b.factors()?;
    if l.free_rank().is_some() && r.order().is_some() {
        Some(Parts {
            free: l.clone(),
            finite: Some(r.clone()),
        })
    } else {
        None
    }
}

impl CodingBackend for ExactFree {
    fn name(&self) -> &'static str {
        "exact-free"
    }

    fn supports(&self, group: &Group) -> bool {
        group.free_rank().is_some()
    }

    fn build(&self, group: &Group, params: &CodingParams) -> Result<HoroCoding> {
        if !self.supports(group) {
            return Err(Error::input(format!(
                "`{}` is not a free group",
                group.spec()
            )));
        }
        build_exact(group, params, self.name())
    }
}

impl CodingBackend for ExactFreeByFinite {
    fn name(&self) -> &'static str {
        "exact-free-by-finite"
    }

    fn supports(&self, group: &Group) -> bool {
        parts(group).is_some_and(|p| p.finite.is_some())
    }

    fn build(&self, group: &Group, params: &CodingParams) -> Result<HoroCoding> {
        if !self.supports(group) {
            return Err(Error::input(format!(
                "`{}` is not of the form product(free:k, finite)",
                group.spec()
            )));
        }
        build_exact(group, params, self.name())
    }
}

fn build_exact(group: &Group, params: &CodingParams, backend: &str) -> Result<HoroCoding> {
    let p = parts(group).expect("caller checked the shape");
    let split = p.free.letter_names().len() as Letter;
    let finite_elems: Vec<Element> = match &p.finite {
        Some(b) => b.elements().expect("finite factor lists its elements"),
        None => vec![Element::Cyclic(0)],
    };
    let finite_group = p
        .finite
        .as_ref()
        .map(|b| Group::new(b.clone()))
        .transpose()?;
    let gens = group.generators();
    let c_len = |c: &Element| p.finite.as_ref().map_or(0, |b| b.word_length(c) as i64);
    let c_dist = |s: &Element, c: &Element| {
        p.finite
            .as_ref()
            .map_or(0, |b| b.word_length(&b.multiply(&b.inverse(s), c)) as i64)
    };

    let mut names = Vec::new();
    let mut patches = Vec::new();
    let mut layers = Vec::new();
    let mut keys = Vec::new();
    for x in 0..split {
        for c in &finite_elems {
            let mut pairs = vec![(group.identity(), 0)];
            for l in 0..gens.len() as Letter {
                let v = if l < split {
                    if l == x {
                        -1
                    } else {
                        1
                    }
                } else {
                    let s = finite_part(&group.gen(l));
                    c_dist(&s, c) - c_len(c)
                };
                pairs.push((group.gen(l), v));
            }
            patches.push(HorofunctionPatch::new(pairs));
            names.push(match &finite_group {
                Some(fg) => format!("{}@{}", gens.name(x), fg.format(c)),
                None => gens.name(x).to_string(),
            });
            layers.push(c.clone());
            keys.push((x, c.clone()));
        }
    }
    let index = |x: Letter, c: &Element| -> Symbol {
        (x as usize * finite_elems.len() + finite_elems.iter().position(|e| e == c).unwrap())
            as Symbol
    };
    let mut theta = Vec::with_capacity(keys.len());
    let mut allowed = Vec::new();
    for (s, (x, c)) in keys.iter().enumerate() {
        let t = patches[s].first_letter(group).ok_or_else(|| {
            Error::Consistency(format!("patch {} has no descending letter", names[s]))
        })?;
        theta.push(t);
        if t < split {
            for y in 0..split {
                if y != p.free.letter_inverses()[t as usize] {
                    allowed.push(vec![s as Symbol, index(y, c)]);
                }
            }
        } else {
            let b = p
                .finite
                .as_ref()
                .expect("B-letter only exists with a finite factor");
            let sb = finite_part(&group.gen(t));
            allowed.push(vec![
                s as Symbol,
                index(*x, &b.multiply(&b.inverse(&sb), c)),
            ]);
        }
    }
    let sft = Sft::new(names, 2, allowed)?;
    Ok(HoroCoding {
        group: group.clone(),
        backend: backend.to_string(),
        params: *params,
        certified: true,
        sft,
        patches,
        theta,
        layers: p.finite.as_ref().map(|_| layers),
    })
}

fn finite_part(g: &Element) -> Element {
    match g {
        Element::Pair(p) => p.1.clone(),
        _ => panic!("expected a product element"),
    }
}

/// The horofunction coded by an admissible word of an exact coding,
/// evaluated exactly on elements whose free part is no longer than the
/// known prefix of ξ.
#[derive(Debug, Clone)]
pub struct ExactHorofunction {
    pub xi: Word,
    pub c: Option<Element>,
    group: Group,
}

impl ExactHorofunction {
    pub fn from_word(coding: &HoroCoding, word: &[Symbol]) -> Result<Self> {
        let group = &coding.group;
        let p = parts(group).ok_or_else(|| Error::input("not an exact coding"))?;
        let split = p.free.letter_names().len() as Letter;
        let free_letter = |s: Symbol| -> Letter {
            (0..split)
                .find(|&l| coding.patches[s as usize].value(&group.gen(l)) == Some(-1))
                .expect("exact patches descend along a free letter")
        };
        let Some(&first) = word.first() else {
            return Err(Error::input("empty word"));
        };
        let mut xi = vec![free_letter(first)];
        for i in 0..word.len() - 1 {
            if coding.theta_of(word[i]) < split {
                xi.push(free_letter(word[i + 1]));
            }
        }
        Ok(ExactHorofunction {
            xi,
            c: coding.layer(first).cloned(),
            group: group.clone(),
        })
    }

    pub fn eval(&self, g: &Element) -> Option<i64> {
        let b = self.group.backend();
        let (x, y) = match (&self.c, g) {
            (Some(_), Element::Pair(p)) => (&p.0, Some(&p.1)),
            _ => (g, None),
        };
        let free = parts(&self.group)?.free;
        if free.word_length(x) > self.xi.len() {
            return None;
        }
        let ray = Element::Free(self.xi.clone());
        let beta =
            free.word_length(&free.multiply(&free.inverse(x), &ray)) as i64 - self.xi.len() as i64;
        let fin = match (&self.c, y, b.factors()) {
            (Some(c), Some(y), Some((_, bb))) => {
                bb.word_length(&bb.multiply(&bb.inverse(y), c)) as i64 - bb.word_length(c) as i64
            }
            _ => 0,
        };
        Some(beta + fin)
    }

    /// All h-gradient paths of length n from 1, least one first.
    pub fn gradient_paths(&self, n: usize) -> Option<Vec<Word>> {
        let letters = self.group.generators().ordered();
        let mut out = Vec::new();
        let mut stack: Vec<(Element, i64, Word)> = vec![(self.group.identity(), 0, Vec::new())];
        // depth-first in reverse letter order so paths pop out least first
        while let Some((g, v, w)) = stack.pop() {
            if w.len() == n {
                out.push(w);
                continue;
            }
            for &a in letters.iter().rev() {
                let h = self.group.mul(&g, &self.group.gen(a));
                if self.eval(&h)? == v - 1 {
                    let mut w2 = w.clone();
                    w2.push(a);
                    stack.push((h, v - 1, w2));
                }
            }
        }
        Some(out)
    }
}

/// For every admissible word of the coding, the ray read off θ is the
/// least of all gradient rays of length `n` of the coded horofunction.
/// Returns the number of words checked.
pub fn gradient_ray_check(coding: &HoroCoding, n: usize) -> Result<usize> {
    // each step along the finite factor repeats a free letter of ξ
    let diameter = match (&coding.layers, coding.group.backend().factors()) {
        (Some(l), Some((_, b))) => l.iter().map(|c| b.word_length(c)).max().unwrap_or(0),
        _ => 0,
    };
    let len = n + 1 + diameter;
    let words: Vec<SymWord> = coding.sft.words(len);
    for w in &words {
        let h = ExactHorofunction::from_word(coding, w)?;
        let paths = h
            .gradient_paths(n)
            .ok_or_else(|| Error::Consistency("ray prefix too short to evaluate".into()))?;
        let theta_path: Word = w[..n].iter().map(|&s| coding.theta_of(s)).collect();
        let least = paths
            .iter()
            .min_by(|a, b| coding.group.generators().lex_cmp(a, b))
            .ok_or_else(|| Error::Consistency("no gradient path".into()))?;
        if *least != theta_path || paths.first() != Some(least) {
            return Err(Error::Consistency(format!(
                "word {}: θ gives {}, least gradient ray is {}",
                coding.sft.format_word(w),
                coding.group.generators().format_word(&theta_path),
                coding.group.generators().format_word(least)
            )));
        }
    }
    Ok(words.len())
}
