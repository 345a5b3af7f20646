use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::generator::{Generator, Kind};
use crate::scalar::GaussianRational;

/// An ordered product of generators. The empty word is the unit.
pub type Word = Vec<Generator>;

/// Finite sum of words with exact Gaussian-rational coefficients.
///
/// Zero coefficients are never stored, so the empty map is the zero expression.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expression {
    terms: BTreeMap<Word, GaussianRational>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression::default()
    }

    pub fn one() -> Self {
        Expression::scalar(GaussianRational::from_int(1))
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Expression::term(Vec::new(), c)
    }

    pub fn gen(g: Generator) -> Self {
        Expression::term(vec![g], GaussianRational::from_int(1))
    }

    pub fn term(word: Word, c: GaussianRational) -> Self {
        let mut e = Expression::zero();
        e.add_term(word, c);
        e
    }

    /// `x[i]`, `p[i]`, `Z[i]`, `K[i]`, `X[i]`.
    pub fn vector(kind: Kind, i: u8) -> Self {
        Expression::gen(Generator::vector(kind, i))
    }

    /// `theta[i,j]` or `pi[i,j]` with the antisymmetry sign folded in.
    pub fn pair(kind: Kind, i: u8, j: u8) -> Self {
        match Generator::pair(kind, i, j) {
            None => Expression::zero(),
            Some((s, g)) => Expression::term(vec![g], GaussianRational::from_int(s as i64)),
        }
    }

    pub fn add_term(&mut self, word: Word, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, GaussianRational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, word: &[Generator]) -> GaussianRational {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Largest word length, 0 for scalars and for zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// The coefficient of the empty word when the expression is a pure scalar.
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Expression::zero();
        if c.is_zero() {
            return out;
        }
        for (w, k) in &self.terms {
            out.add_term(w.clone(), k * c);
        }
        out
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.terms.keys().flat_map(|w| w.iter())
    }

    /// Terms in display order: higher degree first, then lexicographic.
    pub fn display_terms(&self) -> Vec<(&Word, &GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        v
    }
}

impl From<Generator> for Expression {
    fn from(g: Generator) -> Self {
        Expression::gen(g)
    }
}

impl From<GaussianRational> for Expression {
    fn from(c: GaussianRational) -> Self {
        Expression::scalar(c)
    }
}

impl<'a> Add<&'a Expression> for &'a Expression {
    type Output = Expression;
    fn add(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Add for Expression {
    type Output = Expression;
    fn add(mut self, rhs: Expression) -> Expression {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<'a> Sub<&'a Expression> for &'a Expression {
    type Output = Expression;
    fn sub(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Sub for Expression {
    type Output = Expression;
    fn sub(mut self, rhs: Expression) -> Expression {
        for (w, c) in rhs.terms {
            self.add_term(w, -c);
        }
        self
    }
}

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl<'a> Neg for &'a Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        -(self.clone())
    }
}

/// Word concatenation; the result is not normal ordered.
impl<'a> Mul<&'a Expression> for &'a Expression {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        let mut out = Expression::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        out
    }
}

impl Mul for Expression {
    type Output = Expression;
    fn mul(self, rhs: Expression) -> Expression {
        &self * &rhs
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (word, c)) in self.display_terms().into_iter().enumerate() {
            let (neg, body) = c.sign_and_body();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let gens: Vec<String> = word.iter().map(|g| g.to_string()).collect();
            let gens = gens.join("*");
            match (body.is_empty(), gens.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{gens}")?,
                (false, true) => write!(f, "{body}")?,
                (false, false) => write!(f, "{body}*{gens}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn zero_terms_are_dropped() {
        let x = Expression::gen(Generator::x(1));
        assert!((&x - &x).is_zero());
        assert_eq!(Expression::zero().to_string(), "0");
    }

    #[test]
    fn display_orders_by_degree() {
        let e = Expression::scalar(-GaussianRational::i())
            + &Expression::gen(Generator::x(1)) * &Expression::gen(Generator::p(1));
        assert_eq!(e.to_string(), "x[1]*p[1] - i");
        let h =
            Expression::pair(Kind::ThetaMomentum, 2, 1).scale(&GaussianRational::imag(rat(1, 2)));
        assert_eq!(h.to_string(), "-(1/2)i*pi[1,2]");
    }
}
