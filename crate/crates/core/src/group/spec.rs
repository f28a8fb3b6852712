use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CyclicGroup, FreeGroup, Group, GroupBackend, ProductGroup};
use crate::error::{Error, Result};

/// Parsed group spec: `name`, `name:k` or `name(spec, spec, ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecNode {
    pub name: String,
    pub args: Vec<SpecArg>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecArg {
    Int(u64),
    Spec(SpecNode),
}

impl SpecNode {
    pub fn parse(text: &str) -> Result<SpecNode> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            s: compact.as_bytes(),
            pos: 0,
            text,
        };
        let node = p.node()?;
        if p.pos != p.s.len() {
            return Err(p.err("trailing characters"));
        }
        Ok(node)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, why: &str) -> Error {
        Error::parse(
            "group spec",
            self.text,
            format!("{why} at offset {}", self.pos),
        )
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn node(&mut self) -> Result<SpecNode> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'-' || c == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a name"));
        }
        let name = String::from_utf8_lossy(&self.s[start..self.pos]).to_string();
        let mut args = Vec::new();
        match self.peek() {
            Some(b':') => {
                self.pos += 1;
                args.push(SpecArg::Int(self.int()?));
            }
            Some(b'(') => {
                self.pos += 1;
                loop {
                    if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        args.push(SpecArg::Int(self.int()?));
                    } else {
                        args.push(SpecArg::Spec(self.node()?));
                    }
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected `,` or `)`")),
                    }
                }
            }
            _ => {}
        }
        Ok(SpecNode { name, args })
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected an integer"))
    }
}

/// Builds a backend from the arguments of a spec node.
pub type GroupBuilder = fn(&[SpecArg], &GroupRegistry) -> Result<Arc<dyn GroupBackend>>;

/// Group backends registered by spec name.
#[derive(Clone)]
pub struct GroupRegistry {
    builders: BTreeMap<String, GroupBuilder>,
}

impl Default for GroupRegistry {
    fn default() -> Self {
        let mut r = GroupRegistry {
            builders: BTreeMap::new(),
        };
        r.register("free", build_free);
        r.register("cyclic", build_cyclic);
        r.register("trivial", build_trivial);
        r.register("product", build_product);
        r
    }
}

impl GroupRegistry {
    pub fn register(&mut self, name: &str, builder: GroupBuilder) {
        self.builders.insert(name.to_string(), builder);
    }

    pub fn names(&self) -> Vec<&str> {
        self.builders.keys().map(String::as_str).collect()
    }

    pub fn backend(&self, node: &SpecNode) -> Result<Arc<dyn GroupBackend>> {
        let b = self.builders.get(&node.name).ok_or_else(|| {
            Error::parse(
                "group spec",
                &node.name,
                format!("unknown backend; known: {}", self.names().join(", ")),
            )
        })?;
        b(&node.args, self)
    }

    pub fn build(&self, spec: &str) -> Result<Group> {
        Group::new(self.backend(&SpecNode::parse(spec)?)?)
    }
}

fn one_int(args: &[SpecArg], what: &str) -> Result<u64> {
    match args {
        [SpecArg::Int(k)] => Ok(*k),
        _ => Err(Error::input(format!(
            "{what} takes exactly one integer argument"
        ))),
    }
}

fn build_free(args: &[SpecArg], _: &GroupRegistry) -> Result<Arc<dyn GroupBackend>> {
    let k = one_int(args, "free")?;
    if k > 64 {
        return Err(Error::input("free rank above 64 is not supported"));
    }
    Ok(Arc::new(FreeGroup::new(k as usize)))
}

fn build_cyclic(args: &[SpecArg], _: &GroupRegistry) -> Result<Arc<dyn GroupBackend>> {
    let n = one_int(args, "cyclic")?;
    if n == 0 || n > 4096 {
        return Err(Error::input("cyclic order must be in 1..=4096"));
    }
    Ok(Arc::new(CyclicGroup::new(n)))
}

fn build_trivial(args: &[SpecArg], _: &GroupRegistry) -> Result<Arc<dyn GroupBackend>> {
    if !args.is_empty() {
        return Err(Error::input("trivial takes no arguments"));
    }
    Ok(Arc::new(CyclicGroup::new(1)))
}

fn build_product(args: &[SpecArg], reg: &GroupRegistry) -> Result<Arc<dyn GroupBackend>> {
    if args.len() < 2 {
        return Err(Error::input("product needs at least two factors"));
    }
    let mut factors = Vec::new();
    for a in args {
        match a {
            SpecArg::Spec(node) => factors.push(reg.backend(node)?),
            SpecArg::Int(_) => return Err(Error::input("product factors must be group specs")),
        }
    }
    let mut it = factors.into_iter();
    let first = it.next().expect("two factors");
    Ok(it.fold(first, |acc, f| {
        Arc::new(ProductGroup::new(acc, f)) as Arc<dyn GroupBackend>
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested() {
        let n = SpecNode::parse("product(free:2, cyclic:2)").unwrap();
        assert_eq!(n.name, "product");
        assert_eq!(n.args.len(), 2);
        assert!(SpecNode::parse("free:").is_err());
        assert!(SpecNode::parse("product(free:2").is_err());
        assert!(GroupRegistry::default().build("frob:2").is_err());
    }

    #[test]
    fn product_names() {
        let g = Group::from_spec("product(free:2,cyclic:2)").unwrap();
        assert_eq!(g.generators().names(), &["a", "A", "b", "B", "t1"]);
        let h = Group::from_spec("product(cyclic:3,cyclic:3)").unwrap();
        assert_eq!(h.generators().names(), &["t1", "t2", "t1'", "t2'"]);
    }
}
