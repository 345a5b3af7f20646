use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::expr::Expression;
use super::generator::Generator;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Quantum commutator `[a, b] = ab - ba`; words are ordered.
    Commutator,
    /// Classical Poisson bracket; words are commutative monomials.
    Poisson,
}

/// Structure data of an algebra: brackets between pairs of generators.
///
/// Absent pairs bracket to zero. Entries are stored for both orders so that
/// antisymmetry holds by construction.
#[derive(Clone, Debug)]
pub struct BracketTable {
    dim: usize,
    mode: Mode,
    universe: BTreeSet<Generator>,
    entries: HashMap<(Generator, Generator), Expression>,
    definitions: BTreeMap<Generator, Expression>,
}

impl BracketTable {
    pub fn new(dim: usize, mode: Mode) -> Self {
        BracketTable {
            dim,
            mode,
            universe: BTreeSet::new(),
            entries: HashMap::new(),
            definitions: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn add_generator(&mut self, g: Generator) {
        self.universe.insert(g);
    }

    pub fn universe(&self) -> impl Iterator<Item = &Generator> {
        self.universe.iter()
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.universe.contains(g)
    }

    /// Sets `[a, b] = value` and `[b, a] = -value`.
    pub fn set(&mut self, a: Generator, b: Generator, value: Expression) -> Result<()> {
        if value.degree() > 1 {
            return Err(Error::InvalidArgument(format!(
                "bracket [{a}, {b}] has degree > 1"
            )));
        }
        for g in [a, b].iter().chain(value.generators()) {
            if !self.universe.contains(g) {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
        }
        if a == b {
            if value.is_zero() {
                return Ok(());
            }
            return Err(Error::InvalidArgument(format!("[{a}, {a}] must vanish")));
        }
        if value.is_zero() {
            self.entries.remove(&(a, b));
            self.entries.remove(&(b, a));
        } else {
            self.entries.insert((b, a), -&value);
            self.entries.insert((a, b), value);
        }
        Ok(())
    }

    pub fn get(&self, a: &Generator, b: &Generator) -> Option<&Expression> {
        self.entries.get(&(*a, *b))
    }

    /// Registers `g` as shorthand for `value`; it is expanded before rewriting.
    pub fn define(&mut self, g: Generator, value: Expression) {
        self.definitions.insert(g, value);
    }

    pub fn definition(&self, g: &Generator) -> Option<&Expression> {
        self.definitions.get(g)
    }

    /// All nonzero entries with `a < b`, sorted.
    pub fn nonzero_entries(&self) -> Vec<(Generator, Generator, &Expression)> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .filter(|((a, b), _)| a < b)
            .map(|((a, b), e)| (*a, *b, e))
            .collect();
        v.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        v
    }

    /// Text dump, one `[a, b] = value` line per nonzero entry.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (a, b, e) in self.nonzero_entries() {
            s.push_str(&format!("[{a}, {b}] = {e}\n"));
        }
        s
    }
}
