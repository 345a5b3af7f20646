//! The extended noncommutative algebra of `x`, `p`, `theta`, `pi` in any
//! dimension, its derived operators and closure checks.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{rat, GaussianRational};
use crate::symcore::{
    bracket, jacobi_residual, normal_form, BracketTable, Expression, Generator, Kind, Mode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `L = X p - X p`, built from the shifted coordinate.
    L,
    /// Total angular momentum including the `theta`/`pi` sector.
    J,
    /// Naive `x p - x p`, which does not close.
    LittleL,
}

#[derive(Clone, Debug)]
pub struct DfraAlgebra {
    d: usize,
    relativistic: bool,
    table: BracketTable,
}

fn gi(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

fn ihalf(sign: i64) -> GaussianRational {
    GaussianRational::imag(rat(sign, 2))
}

impl DfraAlgebra {
    /// Builds the commutator table. Indices run over `1..=d`, or `0..=d` with
    /// metric `diag(-1, 1, ..., 1)` when `relativistic`.
    pub fn build(d: usize, relativistic: bool) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension {d} < 2 leaves theta without components"
            )));
        }
        if d >= 200 {
            return Err(Error::InvalidArgument(format!("dimension {d} too large")));
        }
        let mut alg = DfraAlgebra {
            d,
            relativistic,
            table: BracketTable::new(d, Mode::Commutator),
        };
        let idx = alg.indices();
        for &i in &idx {
            alg.table.add_generator(Generator::x(i));
            alg.table.add_generator(Generator::p(i));
        }
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                alg.table.add_generator(pair(Kind::Theta, i, j));
                alg.table.add_generator(pair(Kind::ThetaMomentum, i, j));
            }
        }
        let i_unit = Expression::scalar(GaussianRational::i());
        for &m in &idx {
            alg.table
                .set(Generator::x(m), Generator::p(m), i_unit.clone())?;
            for &n in &idx {
                if m < n {
                    let th = Expression::pair(Kind::Theta, m, n);
                    alg.table.set(
                        Generator::x(m),
                        Generator::x(n),
                        th.scale(&GaussianRational::i()),
                    )?;
                }
            }
            for (a, &al) in idx.iter().enumerate() {
                for &be in &idx[a + 1..] {
                    // [x^m, pi_{al be}] = -(i/2)(delta^m_al p_be - delta^m_be p_al)
                    let mut v = Expression::zero();
                    if m == al {
                        v = v + Expression::vector(Kind::Momentum, be).scale(&ihalf(-1));
                    }
                    if m == be {
                        v = v + Expression::vector(Kind::Momentum, al).scale(&ihalf(1));
                    }
                    if !v.is_zero() {
                        alg.table
                            .set(Generator::x(m), pair(Kind::ThetaMomentum, al, be), v)?;
                    }
                }
            }
        }
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                alg.table.set(
                    pair(Kind::Theta, i, j),
                    pair(Kind::ThetaMomentum, i, j),
                    i_unit.clone(),
                )?;
            }
        }
        for &m in &idx {
            let x = alg.shifted_definition(m);
            alg.table.define(Generator::vector(Kind::Shifted, m), x);
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_relativistic(&self) -> bool {
        self.relativistic
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }

    /// Admissible index values in order.
    pub fn indices(&self) -> Vec<u8> {
        let lo = if self.relativistic { 0 } else { 1 };
        (lo..=self.d as u8).collect()
    }

    /// Diagonal metric component `g^{mm} = g_{mm}`.
    pub fn metric(&self, m: u8) -> i64 {
        if self.relativistic && m == 0 {
            -1
        } else {
            1
        }
    }

    fn check(&self, m: u8) -> Result<()> {
        if self.indices().contains(&m) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("index {m} out of range")))
        }
    }

    /// All generators of the table in the global order.
    pub fn generators(&self) -> Vec<Generator> {
        self.table.universe().cloned().collect()
    }

    pub fn x(&self, m: u8) -> Expression {
        Expression::vector(Kind::Coordinate, m)
    }

    /// `p_m`.
    pub fn p(&self, m: u8) -> Expression {
        Expression::vector(Kind::Momentum, m)
    }

    /// `p^m`.
    pub fn p_up(&self, m: u8) -> Expression {
        self.p(m).scale(&gi(self.metric(m)))
    }

    pub fn theta(&self, m: u8, n: u8) -> Expression {
        Expression::pair(Kind::Theta, m, n)
    }

    /// `pi_{mn}`.
    pub fn pi(&self, m: u8, n: u8) -> Expression {
        Expression::pair(Kind::ThetaMomentum, m, n)
    }

    /// `pi_l^n`.
    pub fn pi_mixed(&self, l: u8, n: u8) -> Expression {
        self.pi(l, n).scale(&gi(self.metric(n)))
    }

    fn shifted_definition(&self, m: u8) -> Expression {
        let mut e = self.x(m);
        for n in self.indices() {
            let t = &self.theta(m, n) * &self.p(n);
            e = e + t.scale(&GaussianRational::ratio(1, 2));
        }
        e
    }

    /// `X^m = x^m + (1/2) theta^{mn} p_n`, in normal form.
    pub fn shifted_coordinate(&self, m: u8) -> Result<Expression> {
        self.check(m)?;
        normal_form(&self.shifted_definition(m), &self.table)
    }

    pub fn angular_momentum(&self, i: u8, j: u8, variant: Variant) -> Result<Expression> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::InvalidArgument(format!(
                "angular momentum needs distinct indices, got {i}{j}"
            )));
        }
        let (ci, cj) = match variant {
            Variant::LittleL => (self.x(i), self.x(j)),
            _ => (self.shifted_definition(i), self.shifted_definition(j)),
        };
        let mut e = &(&ci * &self.p_up(j)) - &(&cj * &self.p_up(i));
        if variant == Variant::J {
            for l in self.indices() {
                e = e - &self.theta(i, l) * &self.pi_mixed(l, j);
                e = e + &self.theta(j, l) * &self.pi_mixed(l, i);
            }
        }
        normal_form(&e, &self.table)
    }

    /// Lorentz generator `M^{mn}` of the relativistic algebra.
    pub fn lorentz_generator(&self, m: u8, n: u8) -> Result<Expression> {
        if !self.relativistic {
            return Err(Error::InvalidArgument(
                "Lorentz generator needs the relativistic algebra".into(),
            ));
        }
        if m == n {
            self.check(m)?;
            return Ok(Expression::zero());
        }
        self.angular_momentum(m, n, Variant::J)
    }

    /// Infinitesimal rotation `(i/2) eps_{kl} [e, J^{kl}]`, with `eps` carrying
    /// lower indices in the order of [`indices`](Self::indices).
    pub fn rotate(&self, eps: &Mat<BigRational>, e: &Expression) -> Result<Expression> {
        let idx = self.indices();
        if eps.rows() != idx.len() || eps.cols() != idx.len() {
            return Err(Error::InvalidArgument(format!(
                "parameter matrix is {}x{}, expected {n}x{n}",
                eps.rows(),
                eps.cols(),
                n = idx.len()
            )));
        }
        if !eps.is_antisymmetric() {
            return Err(Error::InvalidArgument(
                "rotation parameters must be antisymmetric".into(),
            ));
        }
        let mut out = Expression::zero();
        for (a, &k) in idx.iter().enumerate() {
            for (b, &l) in idx.iter().enumerate() {
                if a >= b || eps[(a, b)].is_zero() {
                    continue;
                }
                // eps_{kl} J^{kl} summed over both orders doubles the k<l terms
                let c = GaussianRational::imag(eps[(a, b)].clone());
                out = out
                    + bracket(e, &self.angular_momentum(k, l, Variant::J)?, &self.table)?.scale(&c);
            }
        }
        Ok(out)
    }

    /// Nonzero Jacobi residuals over every unordered triple of generators.
    pub fn jacobi_failures(&self) -> Result<Vec<(Generator, Generator, Generator, Expression)>> {
        let gens = self.generators();
        let mut bad = Vec::new();
        for a in 0..gens.len() {
            for b in a..gens.len() {
                for c in b..gens.len() {
                    let (ga, gb, gc) = (gens[a], gens[b], gens[c]);
                    let r = jacobi_residual(&ga.into(), &gb.into(), &gc.into(), &self.table)?;
                    if !r.is_zero() {
                        bad.push((ga, gb, gc, r));
                    }
                }
            }
        }
        Ok(bad)
    }

    /// Number of unordered generator triples checked by [`jacobi_failures`](Self::jacobi_failures).
    pub fn triple_count(&self) -> usize {
        let n = self.generators().len();
        n * (n + 1) * (n + 2) / 6
    }

    /// `[J^{ij}, J^{kl}]` minus the rotation-algebra pattern built from `variant`.
    pub fn closure_residual(
        &self,
        variant: Variant,
        i: u8,
        j: u8,
        k: u8,
        l: u8,
    ) -> Result<Expression> {
        let g = |a: u8, b: u8| -> Result<Expression> {
            if a == b {
                Ok(Expression::zero())
            } else {
                self.angular_momentum(a, b, variant)
            }
        };
        let lhs = bracket(&g(i, j)?, &g(k, l)?, &self.table)?;
        let delta = |a: u8, b: u8| if a == b { self.metric(a) } else { 0 };
        let mut rhs = Expression::zero();
        for (s, d, a, b) in [
            (1, delta(i, l), k, j),
            (-1, delta(j, l), k, i),
            (-1, delta(i, k), l, j),
            (1, delta(j, k), l, i),
        ] {
            if d != 0 {
                rhs = rhs + g(a, b)?.scale(&GaussianRational::imag(rat(s * d, 1)));
            }
        }
        normal_form(&(lhs - rhs), &self.table)
    }

    /// The `theta p p` terms that spoil closure of the naive angular momentum:
    /// `-i th^{il} p^k p^j + i th^{jl} p^k p^i + i th^{ik} p^l p^j - i th^{jk} p^l p^i`.
    pub fn little_l_defect(&self, i: u8, j: u8, k: u8, l: u8) -> Result<Expression> {
        let t = |a, b, c, d, s: i64| -> Expression {
            let w = &(&self.theta(a, b) * &self.p_up(c)) * &self.p_up(d);
            w.scale(&GaussianRational::imag(rat(s, 1)))
        };
        let e = t(i, l, k, j, -1) + t(j, l, k, i, 1) + t(i, k, l, j, 1) + t(j, k, l, i, -1);
        normal_form(&e, &self.table)
    }

    /// `[M^{mn}, p_r] - i(delta^m_r p^n - delta^n_r p^m)`.
    pub fn translation_residual(&self, m: u8, n: u8, r: u8) -> Result<Expression> {
        let lhs = bracket(&self.lorentz_generator(m, n)?, &self.p(r), &self.table)?;
        let mut rhs = Expression::zero();
        if m == r {
            rhs = rhs + self.p_up(n).scale(&GaussianRational::i());
        }
        if n == r {
            rhs = rhs - self.p_up(m).scale(&GaussianRational::i());
        }
        normal_form(&(lhs - rhs), &self.table)
    }
}

fn pair(kind: Kind, i: u8, j: u8) -> Generator {
    Generator::pair(kind, i, j).expect("distinct indices").1
}

/// Residuals of the two quantum conditions on a numeric antisymmetric 4x4
/// `theta` with upper indices: `theta_{mn} theta^{mn}` and
/// `((1/4) *theta^{mn} theta_{mn})^2 - lp^8`, where `*theta_{mn} =
/// (1/2) eps_{mnrs} theta^{rs}` and `eps_{0123} = +1`.
pub fn quantum_conditions(theta: &[[f64; 4]; 4], planck_length: f64) -> Result<(f64, f64)> {
    for m in 0..4 {
        for n in 0..4 {
            if (theta[m][n] + theta[n][m]).abs() > 1e-12 * (1.0 + theta[m][n].abs()) {
                return Err(Error::InvalidArgument("theta must be antisymmetric".into()));
            }
        }
    }
    if planck_length <= 0.0 || !planck_length.is_finite() {
        return Err(Error::InvalidArgument(
            "planck length must be positive".into(),
        ));
    }
    let eta = [-1.0, 1.0, 1.0, 1.0];
    let lower = |m: usize, n: usize| eta[m] * eta[n] * theta[m][n];
    let mut first = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            first += lower(m, n) * theta[m][n];
        }
    }
    let mut dual_contr = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            let mut star = 0.0;
            for r in 0..4 {
                for s in 0..4 {
                    star += 0.5 * levi_civita([m, n, r, s]) * theta[r][s];
                }
            }
            // *theta_{mn} theta^{mn}
            dual_contr += star * theta[m][n];
        }
    }
    let second = (0.25 * dual_contr).powi(2) - planck_length.powi(8);
    Ok((first, second))
}

/// Sign of a permutation of `0..4`, zero when indices repeat.
pub fn levi_civita(ix: [usize; 4]) -> f64 {
    let mut v = ix;
    let mut sign = 1.0;
    for a in 0..4 {
        for b in a + 1..4 {
            if v[a] == v[b] {
                return 0.0;
            }
            if v[a] > v[b] {
                v.swap(a, b);
                sign = -sign;
            }
        }
    }
    sign
}

/// Exact antisymmetric rotation parameters with `eps[a][b] = 1` and `eps[b][a] = -1`.
pub fn unit_rotation(n: usize, a: usize, b: usize) -> Mat<BigRational> {
    let mut m = Mat::zeros(n, n);
    m[(a, b)] = BigRational::one();
    m[(b, a)] = -BigRational::one();
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse;
    use proptest::prelude::*;

    fn p(s: &str, a: &DfraAlgebra) -> Expression {
        parse(s, Some(a.table())).unwrap()
    }

    #[test]
    fn base_relations() {
        let a = DfraAlgebra::build(3, false).unwrap();
        assert_eq!(p("p[1]*x[1]", &a).to_string(), "x[1]*p[1] - i");
        assert_eq!(p("x[2]*x[1]", &a).to_string(), "x[1]*x[2] - i*theta[1,2]");
        assert_eq!(p("[x[1], pi[1,2]]", &a).to_string(), "-(1/2)i*p[2]");
        assert!(p("[x[1], pi[2,3]]", &a).is_zero());
        assert!(p("[theta[1,2], theta[1,3]]", &a).is_zero());
        assert!(p("[X[1], X[2]]", &a).is_zero());
        assert_eq!(p("[X[1], p[1]]", &a).to_string(), "i");
        assert!(p("[X[1], pi[2,3]]", &a).is_zero());
        assert!(p("[X[1], theta[2,3]]", &a).is_zero());
    }

    #[test]
    fn rejects_small_dimension_and_bad_index() {
        assert!(DfraAlgebra::build(1, false).is_err());
        let a = DfraAlgebra::build(2, false).unwrap();
        assert!(a.shifted_coordinate(0).is_err());
        assert!(a.angular_momentum(1, 1, Variant::J).is_err());
        assert!(a.lorentz_generator(0, 1).is_err());
        assert_eq!(a.generators().len(), 2 + 2 + 1 + 1);
    }

    #[test]
    fn jacobi_small() {
        for (d, rel) in [(2, false), (3, false)] {
            let a = DfraAlgebra::build(d, rel).unwrap();
            assert!(a.jacobi_failures().unwrap().is_empty());
        }
    }

    #[test]
    fn j_closes_little_l_does_not() {
        let a = DfraAlgebra::build(3, false).unwrap();
        let ix = a.indices();
        for &i in &ix {
            for &j in &ix {
                for &k in &ix {
                    for &l in &ix {
                        if i == j || k == l {
                            continue;
                        }
                        assert!(a
                            .closure_residual(Variant::J, i, j, k, l)
                            .unwrap()
                            .is_zero());
                        assert!(a
                            .closure_residual(Variant::L, i, j, k, l)
                            .unwrap()
                            .is_zero());
                        let r = a.closure_residual(Variant::LittleL, i, j, k, l).unwrap();
                        assert_eq!(r, a.little_l_defect(i, j, k, l).unwrap());
                    }
                }
            }
        }
        assert!(!a
            .closure_residual(Variant::LittleL, 1, 2, 2, 3)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn j_reduces_to_l_in_two_dimensions() {
        let a = DfraAlgebra::build(2, false).unwrap();
        assert_eq!(
            a.angular_momentum(1, 2, Variant::J).unwrap(),
            a.angular_momentum(1, 2, Variant::L).unwrap()
        );
    }

    #[test]
    fn rotations_act_as_tensors() {
        let a = DfraAlgebra::build(3, false).unwrap();
        let ix = a.indices();
        for (ea, eb) in [(0, 1), (0, 2), (1, 2)] {
            let eps = unit_rotation(3, ea, eb);
            let e = |i: u8, k: u8| {
                GaussianRational::real(eps[(i as usize - 1, k as usize - 1)].clone())
            };
            for &i in &ix {
                for (make, name) in [(0, "x"), (1, "X"), (2, "p")] {
                    let v = |m: u8| match make {
                        0 => a.x(m),
                        1 => a.shifted_coordinate(m).unwrap(),
                        _ => a.p(m),
                    };
                    let lhs = a.rotate(&eps, &v(i)).unwrap();
                    let mut rhs = Expression::zero();
                    for &k in &ix {
                        rhs = rhs + v(k).scale(&e(i, k));
                    }
                    assert_eq!(lhs, normal_form(&rhs, a.table()).unwrap(), "{name}[{i}]");
                }
                for &j in &ix {
                    if i >= j {
                        continue;
                    }
                    for kind in [Kind::Theta, Kind::ThetaMomentum] {
                        let t = |m, n| Expression::pair(kind, m, n);
                        let lhs = a.rotate(&eps, &t(i, j)).unwrap();
                        let mut rhs = Expression::zero();
                        for &k in &ix {
                            rhs = rhs + t(k, j).scale(&e(i, k)) + t(i, k).scale(&e(j, k));
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
        let eps = unit_rotation(3, 0, 1);
        assert!(a.rotate(&eps, &Expression::one()).unwrap().is_zero());
        assert!(a.rotate(&unit_rotation(2, 0, 1), &a.x(1)).is_err());
    }

    #[test]
    fn lorentz_generator_relations() {
        let a = DfraAlgebra::build(3, true).unwrap();
        let ix = a.indices();
        for &m in &ix {
            for &n in &ix {
                let s = a.lorentz_generator(m, n).unwrap() + a.lorentz_generator(n, m).unwrap();
                assert!(s.is_zero());
                for &r in &ix {
                    if m != n {
                        assert!(a.translation_residual(m, n, r).unwrap().is_zero());
                    }
                }
            }
        }
        for (i, j, k, l) in [(0, 1, 1, 2), (0, 1, 0, 2), (0, 3, 1, 3), (1, 2, 2, 3)] {
            assert!(a
                .closure_residual(Variant::J, i, j, k, l)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn lorentz_boost_of_coordinates() {
        // delta x^m = omega^m_n x^n with omega_{01} = 1
        let a = DfraAlgebra::build(3, true).unwrap();
        let w = unit_rotation(4, 0, 1);
        let dx0 = a.rotate(&w, &a.x(0)).unwrap();
        // omega^0_1 = eta^{00} omega_{01} = -1
        assert_eq!(dx0, a.x(1).scale(&gi(-1)));
        let dx1 = a.rotate(&w, &a.x(1)).unwrap();
        // omega^1_0 = omega_{10} = -1
        assert_eq!(dx1, a.x(0).scale(&gi(-1)));
        // delta p_0 = omega_0^n p_n = omega_{01} p_1
        assert_eq!(a.rotate(&w, &a.p(0)).unwrap(), a.p(1));
    }

    #[test]
    fn table_dump_lists_pairs() {
        let a = DfraAlgebra::build(2, false).unwrap();
        let dump = a.table().dump();
        assert!(dump.contains("[x[1], x[2]] = i*theta[1,2]"));
        assert!(dump.contains("[x[1], pi[1,2]] = -(1/2)i*p[2]"));
        assert!(dump.contains("[theta[1,2], pi[1,2]] = i"));
    }

    #[test]
    fn quantum_condition_examples() {
        let zero = [[0.0; 4]; 4];
        let (a, b) = quantum_conditions(&zero, 1.0).unwrap();
        assert_eq!((a, b), (0.0, -1.0));
        let lp2 = 1.3f64.powi(2);
        let mut th = [[0.0; 4]; 4];
        th[0][1] = lp2;
        th[1][0] = -lp2;
        th[2][3] = lp2;
        th[3][2] = -lp2;
        let (a, b) = quantum_conditions(&th, 1.3).unwrap();
        assert!(a.abs() < 1e-12 && b.abs() < 1e-9, "{a} {b}");
        let mut bad = th;
        bad[0][1] = 2.0;
        assert!(quantum_conditions(&bad, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn first_condition_scales_quadratically(v in prop::collection::vec(-2.0f64..2.0, 6), c in -3.0f64..3.0) {
            let mut th = [[0.0; 4]; 4];
            let mut th_c = [[0.0; 4]; 4];
            let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            for (k, &(m, n)) in pairs.iter().enumerate() {
                th[m][n] = v[k];
                th[n][m] = -v[k];
                th_c[m][n] = c * v[k];
                th_c[n][m] = -c * v[k];
            }
            let (a, _) = quantum_conditions(&th, 1.0).unwrap();
            let (ac, _) = quantum_conditions(&th_c, 1.0).unwrap();
            prop_assert!((ac - c * c * a).abs() < 1e-9 * (1.0 + a.abs() * c * c));
        }
    }
}
