//! Truncated Moyal star product on polynomials with exact coefficients:
//! `f * g = sum_n (i/2)^n / n! theta^{a1 b1}..theta^{an bn}
//!          (d_a1..d_an f)(d_b1..d_bn g)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::GaussianRational;

type Exps = Vec<u32>;

/// Polynomial in `n` commuting variables `x[1..=n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: usize,
    terms: BTreeMap<Exps, GaussianRational>,
}

impl Poly {
    pub fn zero(vars: usize) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// `x[k]`, 1-based.
    pub fn var(vars: usize, k: usize) -> Self {
        let mut e = vec![0; vars];
        e[k - 1] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, GaussianRational::one());
        p
    }

    pub fn monomial(c: GaussianRational, exps: Vec<u32>) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn add_term(&mut self, e: Exps, c: GaussianRational) {
        assert_eq!(e.len(), self.vars, "exponent arity");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            let key: Vec<_> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, e: &[u32]) -> GaussianRational {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Partial derivative with respect to `x[k+1]` (0-based `k`).
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut d = e.clone();
                d[k] -= 1;
                out.add_term(d, c * &GaussianRational::from_int(i64::from(e[k])));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (neg, body) = c.sign_and_body();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(k, &p)| {
                    if p == 1 {
                        format!("x[{}]", k + 1)
                    } else {
                        format!("x[{}]^{p}", k + 1)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let text = match (body.is_empty(), mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono,
                (false, true) => body,
                (false, false) => format!("{body}*{mono}"),
            };
            write!(f, "{sep}{text}")?;
            first = false;
        }
        Ok(())
    }
}

/// Terms `x^a (x) y^b`: the two factors are kept apart while derivatives act.
type BiPoly = BTreeMap<(Exps, Exps), GaussianRational>;

fn bi_add(bp: &mut BiPoly, key: (Exps, Exps), c: GaussianRational) {
    if c.is_zero() {
        return;
    }
    let slot = bp.entry(key.clone()).or_insert_with(GaussianRational::zero);
    *slot += c;
    if slot.is_zero() {
        bp.remove(&key);
    }
}

/// `f * g` truncated after `order` powers of theta. Exact once `order` reaches
/// the smaller of the two degrees.
pub fn moyal_star(f: &Poly, g: &Poly, theta: &Mat<BigRational>, order: usize) -> Result<Poly> {
    let n = f.vars;
    if g.vars != n || theta.rows() != n || theta.cols() != n {
        return Err(Error::InvalidArgument(
            "variable count and theta shape must agree".into(),
        ));
    }
    if !theta.is_antisymmetric() {
        return Err(Error::InvalidArgument("theta must be antisymmetric".into()));
    }
    if order < 1 {
        return Err(Error::InvalidArgument(
            "truncation order must be >= 1".into(),
        ));
    }
    let mut layer: BiPoly = BTreeMap::new();
    for (ea, ca) in &f.terms {
        for (eb, cb) in &g.terms {
            bi_add(&mut layer, (ea.clone(), eb.clone()), ca * cb);
        }
    }
    let collapse = |bp: &BiPoly, out: &mut Poly, weight: &GaussianRational| {
        for ((ea, eb), c) in bp {
            let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
            out.add_term(e, c * weight);
        }
    };
    let mut out = Poly::zero(n);
    let mut weight = GaussianRational::one();
    collapse(&layer, &mut out, &weight);
    let half_i = GaussianRational::new(
        BigRational::zero(),
        BigRational::new(BigInt::from(1), BigInt::from(2)),
    );
    for k in 1..=order {
        let mut next: BiPoly = BTreeMap::new();
        for ((ea, eb), c) in &layer {
            for a in 0..n {
                if ea[a] == 0 {
                    continue;
                }
                for b in 0..n {
                    let t = &theta[(a, b)];
                    if eb[b] == 0 || t.is_zero() {
                        continue;
                    }
                    let mut da = ea.clone();
                    da[a] -= 1;
                    let mut db = eb.clone();
                    db[b] -= 1;
                    let factor = GaussianRational::real(
                        t * BigRational::from_integer(BigInt::from(ea[a] * eb[b])),
                    );
                    bi_add(&mut next, (da, db), c * &factor);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        weight = weight * half_i.clone() / GaussianRational::from_int(k as i64);
        collapse(&next, &mut out, &weight);
        layer = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn theta2(t: i64) -> Mat<BigRational> {
        Mat::from_rows(vec![
            vec![rat(0, 1), rat(t, 1)],
            vec![rat(-t, 1), rat(0, 1)],
        ])
        .unwrap()
    }

    fn theta3() -> Mat<BigRational> {
        Mat::from_rows(vec![
            vec![rat(0, 1), rat(1, 1), rat(-2, 3)],
            vec![rat(-1, 1), rat(0, 1), rat(1, 2)],
            vec![rat(2, 3), rat(-1, 2), rat(0, 1)],
        ])
        .unwrap()
    }

    fn factorial(n: usize) -> i64 {
        (1..=n as i64).product()
    }

    /// Brute force: every index sequence `(a1..an), (b1..bn)` separately.
    fn oracle(f: &Poly, g: &Poly, theta: &Mat<BigRational>, order: usize) -> Poly {
        let n = f.vars();
        let mut out = Poly::zero(n);
        for k in 0..=order {
            let total = n.pow(2 * k as u32);
            for code in 0..total {
                let mut c = code;
                let mut idx = Vec::with_capacity(2 * k);
                for _ in 0..2 * k {
                    idx.push(c % n);
                    c /= n;
                }
                let mut coeff = GaussianRational::one();
                let (mut df, mut dg) = (f.clone(), g.clone());
                for j in 0..k {
                    coeff =
                        coeff * GaussianRational::real(theta[(idx[2 * j], idx[2 * j + 1])].clone());
                    df = df.derivative(idx[2 * j]);
                    dg = dg.derivative(idx[2 * j + 1]);
                }
                let mut w = GaussianRational::one();
                for _ in 0..k {
                    w = w * GaussianRational::new(rat(0, 1), rat(1, 2));
                }
                w = w / GaussianRational::from_int(factorial(k));
                out = out.add(&df.mul(&dg).scale(&(coeff * w)));
            }
        }
        out
    }

    #[test]
    fn coordinate_commutator() {
        let th = theta2(3);
        let (x1, x2) = (Poly::var(2, 1), Poly::var(2, 2));
        for order in 1..4 {
            let c = moyal_star(&x1, &x2, &th, order)
                .unwrap()
                .sub(&moyal_star(&x2, &x1, &th, order).unwrap());
            assert_eq!(
                c,
                Poly::constant(2, GaussianRational::new(rat(0, 1), rat(3, 1)))
            );
        }
        assert_eq!(c_text(&x1, &x2, &th), "x[1]*x[2] + (3/2)i");
    }

    fn c_text(a: &Poly, b: &Poly, th: &Mat<BigRational>) -> String {
        moyal_star(a, b, th, 1).unwrap().to_string()
    }

    #[test]
    fn unit_and_errors() {
        let th = theta3();
        let f = Poly::monomial(GaussianRational::ratio(2, 5), vec![2, 1, 0]).add(&Poly::var(3, 3));
        assert_eq!(
            moyal_star(&f, &Poly::constant(3, GaussianRational::one()), &th, 3).unwrap(),
            f
        );
        assert!(moyal_star(&f, &f, &th, 0).is_err());
        assert!(moyal_star(&f, &Poly::var(2, 1), &th, 1).is_err());
    }

    #[test]
    fn squares_match_oracle() {
        let th = theta2(1);
        let f = Poly::monomial(GaussianRational::one(), vec![2, 0]);
        let g = Poly::monomial(GaussianRational::one(), vec![0, 2]);
        let got = moyal_star(&f, &g, &th, 2).unwrap();
        assert_eq!(got, oracle(&f, &g, &th, 2));
        // x1^2 x2^2 + 2i x1 x2 - 1/2
        assert_eq!(got.coefficient(&[2, 2]), GaussianRational::one());
        assert_eq!(
            got.coefficient(&[1, 1]),
            GaussianRational::new(rat(0, 1), rat(2, 1))
        );
        assert_eq!(got.coefficient(&[0, 0]), GaussianRational::ratio(-1, 2));
    }

    fn arb_poly(vars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (
                prop::collection::vec(0u32..=max_deg, vars),
                -3i64..4,
                -2i64..3,
            ),
            1..4,
        )
        .prop_map(move |ts| {
            let mut p = Poly::zero(vars);
            for (e, re, im) in ts {
                if e.iter().sum::<u32>() <= max_deg {
                    p.add_term(e, GaussianRational::new(rat(re, 1), rat(im, 1)));
                }
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn matches_bruteforce(f in arb_poly(2, 3), g in arb_poly(2, 3), order in 1usize..4) {
            let th = theta2(2);
            prop_assert_eq!(moyal_star(&f, &g, &th, order).unwrap(), oracle(&f, &g, &th, order));
        }

        #[test]
        fn associative(f in arb_poly(3, 2), g in arb_poly(3, 2), h in arb_poly(3, 2)) {
            let th = theta3();
            let l = moyal_star(&moyal_star(&f, &g, &th, 6).unwrap(), &h, &th, 6).unwrap();
            let r = moyal_star(&f, &moyal_star(&g, &h, &th, 6).unwrap(), &th, 6).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
