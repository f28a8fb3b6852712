//! Subshifts of finite type: admissibility, the window graph on 𝒲^N,
//! communicating classes and connecting words.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u16;
pub type SymWord = Vec<Symbol>;

/// A one-sided subshift of finite type given by its allowed windows of
/// length N (the memory).
///
/// Windows without an infinite forward continuation are pruned on
/// construction, so every admissible word extends to a point of Σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    alphabet: Vec<String>,
    memory: usize,
    allowed: Vec<SymWord>,
    window_index: HashMap<SymWord, usize>,
    pruned: Vec<SymWord>,
    prefixes: HashSet<SymWord>,
}

/// On-disk form: `{"alphabet": [...], "memory": N, "allowed": [...]}` with an
/// optional labelling table under `theta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SftFile {
    pub alphabet: Vec<String>,
    pub memory: usize,
    pub allowed: Vec<WordSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<BTreeMap<String, String>>,
}

/// A word written either as one string or as a list of symbol names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    Text(String),
    Symbols(Vec<String>),
}

impl Sft {
    /// Validates and builds the shift. Every symbol must occur in some
    /// allowed window and the resulting shift must be nonempty.
    pub fn new(alphabet: Vec<String>, memory: usize, allowed: Vec<SymWord>) -> Result<Self> {
        if memory == 0 {
            return Err(Error::input("memory must be at least 1"));
        }
        let mut seen = HashSet::new();
        for n in &alphabet {
            if n.is_empty() || !seen.insert(n) {
                return Err(Error::input(format!("bad or duplicate symbol `{n}`")));
            }
        }
        let mut used = vec![false; alphabet.len()];
        for w in &allowed {
            if w.len() != memory {
                return Err(Error::input(format!(
                    "allowed word of length {} but memory is {memory}",
                    w.len()
                )));
            }
            for &s in w {
                if s as usize >= alphabet.len() {
                    return Err(Error::input(format!("symbol index {s} out of range")));
                }
                used[s as usize] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::input(format!(
                "symbol `{}` occurs in no allowed word",
                alphabet[i]
            )));
        }
        Self::assemble(alphabet, memory, allowed)
    }

    /// Builds without the symbol-occurrence check; used for restrictions
    /// that keep the parent alphabet.
    pub(crate) fn assemble(
        alphabet: Vec<String>,
        memory: usize,
        allowed: Vec<SymWord>,
    ) -> Result<Self> {
        let mut set: Vec<SymWord> = allowed;
        set.sort();
        set.dedup();
        let (kept, pruned) = prune(memory, set);
        if kept.is_empty() {
            return Err(Error::input(
                "the sliding-window rule admits no infinite sequence",
            ));
        }
        let window_index = kept
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut prefixes = HashSet::new();
        for w in &kept {
            for k in 0..=memory {
                prefixes.insert(w[..k].to_vec());
            }
        }
        Ok(Sft {
            alphabet,
            memory,
            allowed: kept,
            window_index,
            pruned,
            prefixes,
        })
    }

    pub fn from_file(file: &SftFile) -> Result<Self> {
        let alphabet = file.alphabet.clone();
        let lookup: HashMap<&str, Symbol> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as Symbol))
            .collect();
        let words = file
            .allowed
            .iter()
            .map(|w| parse_with(&alphabet, &lookup, w))
            .collect::<Result<Vec<_>>>()?;
        Sft::new(alphabet, file.memory, words)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SftFile = serde_json::from_str(text)
            .map_err(|e| Error::parse("SFT file", "<json>", e.to_string()))?;
        Sft::from_file(&file)
    }

    pub fn to_file(&self) -> SftFile {
        SftFile {
            alphabet: self.alphabet.clone(),
            memory: self.memory,
            allowed: self
                .allowed
                .iter()
                .map(|w| {
                    WordSpec::Symbols(
                        w.iter()
                            .map(|&s| self.alphabet[s as usize].clone())
                            .collect(),
                    )
                })
                .collect(),
            theta: None,
        }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Allowed windows after pruning, sorted.
    pub fn allowed(&self) -> &[SymWord] {
        &self.allowed
    }

    /// Windows removed because they admit no infinite continuation.
    pub fn pruned(&self) -> &[SymWord] {
        &self.pruned
    }

    pub fn window_id(&self, w: &[Symbol]) -> Option<usize> {
        self.window_index.get(w).copied()
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::parse("symbol", name, "not in the alphabet"))
    }

    pub fn parse_word(&self, text: &str) -> Result<SymWord> {
        let lookup: HashMap<&str, Symbol> = self
            .alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as Symbol))
            .collect();
        parse_with(&self.alphabet, &lookup, &WordSpec::Text(text.to_string()))
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        let single = self.alphabet.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = w
            .iter()
            .map(|&s| self.alphabet[s as usize].as_str())
            .collect();
        if single {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    /// True iff every length-N window of `w` is allowed; shorter words must
    /// be prefixes of an allowed window. Unknown symbols are an input error.
    pub fn is_admissible(&self, w: &[Symbol]) -> Result<bool> {
        if let Some(&s) = w.iter().find(|&&s| s as usize >= self.alphabet.len()) {
            return Err(Error::input(format!(
                "symbol index {s} is not in the alphabet"
            )));
        }
        Ok(self.admissible_unchecked(w))
    }

    pub(crate) fn admissible_unchecked(&self, w: &[Symbol]) -> bool {
        if w.len() < self.memory {
            return self.prefixes.contains(w);
        }
        w.windows(self.memory)
            .all(|x| self.window_index.contains_key(x))
    }

    /// Can `a` be appended to an admissible word ending in `tail`?
    pub(crate) fn extends(&self, word: &[Symbol], a: Symbol) -> bool {
        let n = self.memory;
        if word.len() + 1 < n {
            let mut w = word.to_vec();
            w.push(a);
            return self.prefixes.contains(&w);
        }
        let mut w = word[word.len() + 1 - n..].to_vec();
        w.push(a);
        self.window_index.contains_key(&w)
    }

    /// All admissible words of length m, lexicographic in symbol index.
    pub fn words(&self, m: usize) -> Vec<SymWord> {
        if m <= self.memory {
            let mut v: Vec<SymWord> = self.allowed.iter().map(|w| w[..m].to_vec()).collect();
            v.dedup();
            return v;
        }
        let mut cur = self.allowed.clone();
        for _ in self.memory..m {
            let mut next = Vec::with_capacity(cur.len() * 2);
            for w in &cur {
                for a in 0..self.alphabet.len() as Symbol {
                    if self.extends(w, a) {
                        let mut x = w.clone();
                        x.push(a);
                        next.push(x);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Successor windows: w₁ → w₂ when w₁[1..] = w₂[..N−1].
    pub fn successors(&self, window: usize) -> Vec<usize> {
        let w = &self.allowed[window];
        (0..self.alphabet.len() as Symbol)
            .filter_map(|a| {
                let mut x = w[1..].to_vec();
                x.push(a);
                self.window_index.get(&x).copied()
            })
            .collect()
    }

    /// Subshift on a subset of windows, keeping this alphabet.
    pub fn restrict(&self, windows: &[usize]) -> Result<Sft> {
        let ws = windows.iter().map(|&i| self.allowed[i].clone()).collect();
        Sft::assemble(self.alphabet.clone(), self.memory, ws)
    }

    pub fn communicating_classes(&self) -> ComponentDecomposition {
        ComponentDecomposition::of(self)
    }

    pub fn is_irreducible(&self) -> bool {
        let d = self.communicating_classes();
        d.classes.len() == 1 && d.recurrent[0]
    }

    /// Shortest w₀ with w w₀ w′ admissible.
    pub fn irreducibility_witness(&self, w: &[Symbol], w2: &[Symbol]) -> Result<SymWord> {
        let fail = || Error::NoWitness {
            from: self.format_word(w),
            to: self.format_word(w2),
        };
        if !self.is_admissible(w)? || !self.is_admissible(w2)? {
            return Err(Error::input("witness endpoints must be admissible"));
        }
        let keep = self.memory.saturating_sub(1);
        let tail = |s: &[Symbol]| s[s.len().saturating_sub(keep)..].to_vec();
        let joins = |state: &[Symbol]| {
            let mut x = state.to_vec();
            x.extend_from_slice(w2);
            self.admissible_unchecked(&x)
        };
        let start = w.to_vec();
        let mut seen: HashSet<SymWord> = HashSet::new();
        let mut queue: VecDeque<(SymWord, SymWord)> = VecDeque::new();
        seen.insert(tail(&start));
        queue.push_back((start, Vec::new()));
        while let Some((state, path)) = queue.pop_front() {
            if joins(&state) {
                return Ok(path);
            }
            for a in 0..self.alphabet.len() as Symbol {
                if self.extends(&state, a) {
                    let mut next = state.clone();
                    next.push(a);
                    let next = if next.len() > keep.max(w.len()) {
                        tail(&next)
                    } else {
                        next
                    };
                    if seen.insert(tail(&next)) || next.len() < keep {
                        let mut p = path.clone();
                        p.push(a);
                        queue.push_back((next, p));
                    }
                }
            }
        }
        Err(fail())
    }

    /// max over pairs of windows in the given class of the shortest
    /// connector length (the constant K), or `None` if some pair has none.
    pub fn connector_bound(&self, class: &[usize]) -> Option<usize> {
        let mut k = 0;
        for &i in class {
            for &j in class {
                let w = self.witness_between_windows(i, j)?;
                k = k.max(w);
            }
        }
        Some(k)
    }

    fn witness_between_windows(&self, i: usize, j: usize) -> Option<usize> {
        // A word w w₀ w′ of windows corresponds to a path of length |w₀| + N.
        let n = self.memory;
        let mut frontier: HashSet<usize> = HashSet::from([i]);
        for steps in 1..=(n + self.allowed.len()) {
            let next: HashSet<usize> = frontier.iter().flat_map(|&x| self.successors(x)).collect();
            if steps >= n && next.contains(&j) {
                return Some(steps - n);
            }
            frontier = next;
        }
        None
    }
}

fn parse_with(
    alphabet: &[String],
    lookup: &HashMap<&str, Symbol>,
    w: &WordSpec,
) -> Result<SymWord> {
    match w {
        WordSpec::Symbols(v) => v
            .iter()
            .map(|s| {
                lookup
                    .get(s.as_str())
                    .copied()
                    .ok_or_else(|| Error::parse("word", s, "unknown symbol"))
            })
            .collect(),
        WordSpec::Text(t) => {
            let mut out = Vec::new();
            for chunk in t.split(['.', ' ']).filter(|c| !c.is_empty()) {
                let mut rest = chunk;
                while !rest.is_empty() {
                    let best = alphabet
                        .iter()
                        .enumerate()
                        .filter(|(_, n)| rest.starts_with(n.as_str()))
                        .max_by_key(|(_, n)| n.len())
                        .ok_or_else(|| {
                            Error::parse("word", t, format!("unknown symbol at `{rest}`"))
                        })?;
                    out.push(best.0 as Symbol);
                    rest = &rest[best.1.len()..];
                }
            }
            Ok(out)
        }
    }
}

fn prune(memory: usize, mut set: Vec<SymWord>) -> (Vec<SymWord>, Vec<SymWord>) {
    let mut pruned = Vec::new();
    loop {
        let heads: HashSet<&[Symbol]> = set.iter().map(|w| &w[..memory - 1]).collect();
        let (keep, drop): (Vec<SymWord>, Vec<SymWord>) =
            set.iter().cloned().partition(|w| heads.contains(&w[1..]));
        if drop.is_empty() {
            pruned.sort();
            return (keep, pruned);
        }
        pruned.extend(drop);
        set = keep;
    }
}

/// Communicating classes of the window graph and their condensation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentDecomposition {
    /// Window indices of each class, classes ordered by smallest window.
    pub classes: Vec<Vec<usize>>,
    /// Whether the class carries a cycle (hence infinite paths).
    pub recurrent: Vec<bool>,
    /// Edges between distinct classes.
    pub dag: Vec<(usize, usize)>,
    /// One irreducible subshift per recurrent class: (class index, shift).
    #[serde(skip)]
    pub component_sfts: Vec<(usize, Sft)>,
    /// Human-readable notes on dropped classes.
    pub notices: Vec<String>,
}

impl ComponentDecomposition {
    fn of(sft: &Sft) -> Self {
        let n = sft.allowed.len();
        let mut g = DiGraph::<(), ()>::with_capacity(n, n * 2);
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        let succ: Vec<Vec<usize>> = (0..n).map(|i| sft.successors(i)).collect();
        for (i, s) in succ.iter().enumerate() {
            for &j in s {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
        let mut classes: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
                v.sort();
                v
            })
            .collect();
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (k, c) in classes.iter().enumerate() {
            for &i in c {
                class_of[i] = k;
            }
        }
        let mut dag = std::collections::BTreeSet::new();
        let mut recurrent = vec![false; classes.len()];
        for (i, s) in succ.iter().enumerate() {
            for &j in s {
                if class_of[i] == class_of[j] {
                    recurrent[class_of[i]] = true;
                } else {
                    dag.insert((class_of[i], class_of[j]));
                }
            }
        }
        let mut component_sfts = Vec::new();
        let mut notices = Vec::new();
        for (k, c) in classes.iter().enumerate() {
            if recurrent[k] {
                let sub = sft
                    .restrict(c)
                    .expect("a recurrent class carries infinite paths");
                component_sfts.push((k, sub));
            } else {
                let names: Vec<String> = c
                    .iter()
                    .map(|&i| sft.format_word(&sft.allowed[i]))
                    .collect();
                notices.push(format!(
                    "class {k} {{{}}} is transient and carries no infinite path; dropped",
                    names.join(", ")
                ));
            }
        }
        ComponentDecomposition {
            classes,
            recurrent,
            dag: dag.into_iter().collect(),
            component_sfts,
            notices,
        }
    }

    /// Shift restricted to class `k`, if that class is recurrent.
    pub fn component(&self, k: usize) -> Option<&Sft> {
        self.component_sfts
            .iter()
            .find(|(i, _)| *i == k)
            .map(|(_, s)| s)
    }

    pub fn to_json(&self, sft: &Sft) -> serde_json::Value {
        let classes: Vec<serde_json::Value> = self
            .classes
            .iter()
            .enumerate()
            .map(|(k, c)| {
                serde_json::json!({
                    "index": k,
                    "recurrent": self.recurrent[k],
                    "windows": c.iter().map(|&i| sft.format_word(&sft.allowed()[i])).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "classes": classes,
            "dag": self.dag.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
            "notices": self.notices,
            "pruned": sft.pruned().iter().map(|w| sft.format_word(w)).collect::<Vec<_>>(),
        })
    }
}

/// d(x, y) = e^{−n} with n the length of the common prefix. On finite
/// prefixes that agree entirely the result is the bound e^{−len}.
pub fn prefix_distance(x: &[Symbol], y: &[Symbol]) -> f64 {
    let n = x.iter().zip(y).take_while(|(a, b)| a == b).count();
    (-(n as f64)).exp()
}

/// A sequence u v v v ... given by a finite prefix and a nonempty period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventuallyPeriodic {
    pub prefix: SymWord,
    pub period: SymWord,
}

impl EventuallyPeriodic {
    pub fn new(prefix: SymWord, period: SymWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::input("period must be nonempty"));
        }
        Ok(EventuallyPeriodic { prefix, period })
    }

    pub fn take(&self, n: usize) -> SymWord {
        self.prefix
            .iter()
            .chain(self.period.iter().cycle())
            .take(n)
            .copied()
            .collect()
    }

    pub fn at(&self, i: usize) -> Symbol {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// σ applied once.
    pub fn shift(&self) -> Self {
        if self.prefix.is_empty() {
            let mut p = self.period[1..].to_vec();
            p.push(self.period[0]);
            EventuallyPeriodic {
                prefix: Vec::new(),
                period: p,
            }
        } else {
            EventuallyPeriodic {
                prefix: self.prefix[1..].to_vec(),
                period: self.period.clone(),
            }
        }
    }

    /// Admissibility of the whole infinite sequence.
    pub fn is_admissible(&self, sft: &Sft) -> Result<bool> {
        let n = self.prefix.len() + self.period.len() * (sft.memory() + 1) + sft.memory();
        sft.is_admissible(&self.take(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn nb_shift() -> Sft {
        let names: Vec<String> = ["a", "A", "b", "B"].iter().map(|s| s.to_string()).collect();
        let mut allowed = Vec::new();
        for x in 0..4u16 {
            for y in 0..4u16 {
                if y != x ^ 1 {
                    allowed.push(vec![x, y]);
                }
            }
        }
        Sft::new(names, 2, allowed).unwrap()
    }

    fn golden() -> Sft {
        Sft::from_json(r#"{"alphabet":["0","1"],"memory":2,"allowed":["00","01","10"]}"#).unwrap()
    }

    fn two_class() -> Sft {
        Sft::from_json(r#"{"alphabet":["a","b"],"memory":2,"allowed":["aa","ab","bb"]}"#).unwrap()
    }

    #[test]
    fn admissibility() {
        let full =
            Sft::from_json(r#"{"alphabet":["0","1"],"memory":1,"allowed":["0","1"]}"#).unwrap();
        assert!(full.is_admissible(&[0, 1, 1, 0, 1]).unwrap());
        let nb = nb_shift();
        assert!(!nb.is_admissible(&nb.parse_word("aAb").unwrap()).unwrap());
        assert!(nb.is_admissible(&nb.parse_word("abAB").unwrap()).unwrap());
        let g = golden();
        assert!(g.is_admissible(&g.parse_word("10101").unwrap()).unwrap());
        assert!(!g.is_admissible(&g.parse_word("0110").unwrap()).unwrap());
        assert!(g.is_admissible(&[7]).is_err());
        assert!(g.is_admissible(&[1]).unwrap());
    }

    #[test]
    fn classes() {
        assert_eq!(nb_shift().communicating_classes().classes.len(), 1);
        let d = two_class().communicating_classes();
        assert_eq!(d.classes, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(d.recurrent, vec![true, false, true]);
        assert_eq!(d.dag, vec![(0, 1), (1, 2)]);
        assert_eq!(d.component_sfts.len(), 2);
        assert_eq!(d.notices.len(), 1);
    }

    #[test]
    fn restricting_a_class_is_irreducible() {
        let d = two_class().communicating_classes();
        for (_, s) in &d.component_sfts {
            assert!(s.is_irreducible());
        }
    }

    #[test]
    fn witnesses() {
        let nb = nb_shift();
        let a = nb.parse_word("a").unwrap();
        let big_a = nb.parse_word("A").unwrap();
        assert_eq!(
            nb.format_word(&nb.irreducibility_witness(&a, &big_a).unwrap()),
            "b"
        );
        assert!(nb.irreducibility_witness(&a, &a).unwrap().is_empty());
        let t = two_class();
        let err =
            t.irreducibility_witness(&t.parse_word("b").unwrap(), &t.parse_word("a").unwrap());
        assert!(matches!(err, Err(Error::NoWitness { .. })));
        assert_eq!(nb.connector_bound(&(0..12).collect::<Vec<_>>()), Some(1));
    }

    #[test]
    fn pruning_dead_windows() {
        let s =
            Sft::from_json(r#"{"alphabet":["a","b","c"],"memory":2,"allowed":["aa","ab","bc"]}"#)
                .unwrap();
        assert_eq!(s.allowed().len(), 1);
        assert_eq!(s.pruned().len(), 2);
        assert!(Sft::from_json(r#"{"alphabet":["a","b"],"memory":2,"allowed":["ab"]}"#).is_err());
    }

    #[test]
    fn words_and_periodic() {
        let g = golden();
        assert_eq!(g.words(3).len(), 5);
        let x = EventuallyPeriodic::new(vec![0], vec![1, 0]).unwrap();
        assert!(x.is_admissible(&g).unwrap());
        assert_eq!(x.shift().take(4), vec![1, 0, 1, 0]);
        let y = EventuallyPeriodic::new(vec![], vec![1]).unwrap();
        assert!(!y.is_admissible(&g).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let g = golden();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        assert_eq!(Sft::from_json(&text).unwrap(), g);
    }
}
