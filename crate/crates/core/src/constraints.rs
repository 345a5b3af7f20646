//! Classical constrained Hamiltonian machinery: Poisson structure on the
//! enlarged phase space `(x, p, theta, pi, Z, K)`, second-class constraints
//! and Dirac brackets.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{rat, GaussianRational};
use crate::symcore::{
    bracket, normal_form, parse, BracketTable, Expression, Generator, Kind, Mode,
};

fn g(r: &BigRational) -> GaussianRational {
    GaussianRational::real(r.clone())
}

fn gint(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

/// Canonical Poisson structure: only `{x,p}`, `{theta,pi}` and `{Z,K}` are nonzero.
#[derive(Clone, Debug)]
pub struct PhaseSpace {
    d: usize,
    relativistic: bool,
    table: BracketTable,
}

impl PhaseSpace {
    pub fn new(d: usize, relativistic: bool) -> Result<Self> {
        if !(2..200).contains(&d) {
            return Err(Error::InvalidArgument(format!(
                "dimension {d} outside 2..200"
            )));
        }
        let mut ps = PhaseSpace {
            d,
            relativistic,
            table: BracketTable::new(d, Mode::Poisson),
        };
        let idx = ps.indices();
        for &i in &idx {
            for k in [Kind::Coordinate, Kind::Momentum, Kind::AuxZ, Kind::AuxK] {
                ps.table.add_generator(Generator::vector(k, i));
            }
            for &j in &idx {
                if i < j {
                    for k in [Kind::Theta, Kind::ThetaMomentum] {
                        ps.table.add_generator(Generator::pair(k, i, j).unwrap().1);
                    }
                }
            }
        }
        let one = Expression::one();
        for &i in &idx {
            ps.table
                .set(Generator::x(i), Generator::p(i), one.clone())?;
            ps.table.set(
                Generator::vector(Kind::AuxZ, i),
                Generator::vector(Kind::AuxK, i),
                one.clone(),
            )?;
            for &j in &idx {
                if i < j {
                    let t = Generator::pair(Kind::Theta, i, j).unwrap().1;
                    let p = Generator::pair(Kind::ThetaMomentum, i, j).unwrap().1;
                    ps.table.set(t, p, one.clone())?;
                }
            }
        }
        for &i in &idx {
            let mut x = ps.x(i);
            for &j in &idx {
                x = x + (&ps.theta(i, j) * &ps.p(j)).scale(&GaussianRational::ratio(1, 2));
            }
            ps.table.define(Generator::vector(Kind::Shifted, i), x);
        }
        Ok(ps)
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

    pub fn indices(&self) -> Vec<u8> {
        let lo = if self.relativistic { 0 } else { 1 };
        (lo..=self.d as u8).collect()
    }

    pub fn metric(&self, m: u8) -> i64 {
        if self.relativistic && m == 0 {
            -1
        } else {
            1
        }
    }

    pub fn x(&self, i: u8) -> Expression {
        Expression::vector(Kind::Coordinate, i)
    }
    pub fn p(&self, i: u8) -> Expression {
        Expression::vector(Kind::Momentum, i)
    }
    pub fn p_up(&self, i: u8) -> Expression {
        self.p(i).scale(&gint(self.metric(i)))
    }
    pub fn z(&self, i: u8) -> Expression {
        Expression::vector(Kind::AuxZ, i)
    }
    pub fn k(&self, i: u8) -> Expression {
        Expression::vector(Kind::AuxK, i)
    }
    pub fn theta(&self, i: u8, j: u8) -> Expression {
        Expression::pair(Kind::Theta, i, j)
    }
    pub fn pi(&self, i: u8, j: u8) -> Expression {
        Expression::pair(Kind::ThetaMomentum, i, j)
    }
    /// `X^i = x^i + (1/2) theta^{ij} p_j`.
    pub fn shifted(&self, i: u8) -> Result<Expression> {
        normal_form(&Expression::vector(Kind::Shifted, i), &self.table)
    }

    /// Number of phase-space variables.
    pub fn variable_count(&self) -> usize {
        self.table.universe().count()
    }

    pub fn poisson(&self, a: &Expression, b: &Expression) -> Result<Expression> {
        bracket(a, b, &self.table)
    }

    pub fn parse(&self, src: &str) -> Result<Expression> {
        parse(src, Some(&self.table))
    }
}

/// Coefficients of the general linear-plus-quadratic constraint ansatz
/// `Psi^i = Z^i + alpha x^i + beta theta^{ij} p_j + gamma theta^{ij} K_j`,
/// `Phi_i = K_i + rho p_i + sigma pi_{ij} x^j + lambda pi_{ij} Z^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
    pub rho: BigRational,
    pub sigma: BigRational,
    pub lambda: BigRational,
}

impl Default for Ansatz {
    fn default() -> Self {
        Ansatz {
            alpha: BigRational::zero(),
            beta: rat(-1, 2),
            gamma: BigRational::zero(),
            rho: -BigRational::one(),
            sigma: BigRational::zero(),
            lambda: BigRational::zero(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConstraintSet {
    labels: Vec<String>,
    constraints: Vec<Expression>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        ConstraintSet::default()
    }

    pub fn push(&mut self, label: impl Into<String>, e: Expression) -> Result<()> {
        if e.degree() > 2 {
            return Err(Error::InvalidArgument(
                "constraints must have degree at most 2".into(),
            ));
        }
        self.labels.push(label.into());
        self.constraints.push(e);
        Ok(())
    }

    /// `Psi^i = Z^i - (1/2) theta^{ij} p_j`, `Phi_i = K_i - p_i`. In the
    /// relativistic case `Phi` carries an upper index.
    pub fn dfra(ps: &PhaseSpace) -> Result<Self> {
        Self::from_ansatz(ps, &Ansatz::default())
    }

    pub fn from_ansatz(ps: &PhaseSpace, a: &Ansatz) -> Result<Self> {
        let mut cs = ConstraintSet::new();
        let idx = ps.indices();
        for &i in &idx {
            let mut psi = ps.z(i) + ps.x(i).scale(&g(&a.alpha));
            for &j in &idx {
                psi = psi + (&ps.theta(i, j) * &ps.p(j)).scale(&g(&a.beta));
                psi = psi + (&ps.theta(i, j) * &ps.k(j)).scale(&g(&a.gamma));
            }
            cs.push(format!("Psi^{i}"), normal_form(&psi, ps.table())?)?;
        }
        for &i in &idx {
            let mut phi = ps.k(i) + ps.p(i).scale(&g(&a.rho));
            for &j in &idx {
                phi = phi + (&ps.pi(i, j) * &ps.x(j)).scale(&g(&a.sigma));
                phi = phi + (&ps.pi(i, j) * &ps.z(j)).scale(&g(&a.lambda));
            }
            let (label, phi) = if ps.is_relativistic() {
                (format!("Phi^{i}"), phi.scale(&gint(ps.metric(i))))
            } else {
                (format!("Phi_{i}"), phi)
            };
            cs.push(label, normal_form(&phi, ps.table())?)?;
        }
        Ok(cs)
    }

    /// Builds a set from `(label, text)` pairs in the expression syntax.
    pub fn parse(ps: &PhaseSpace, items: &[(&str, &str)]) -> Result<Self> {
        let mut cs = ConstraintSet::new();
        for (label, src) in items {
            cs.push(*label, ps.parse(src)?)?;
        }
        Ok(cs)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constraints(&self) -> &[Expression] {
        &self.constraints
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintMatrix {
    entries: Vec<Vec<Expression>>,
}

impl ConstraintMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, a: usize, b: usize) -> &Expression {
        &self.entries[a][b]
    }

    /// The matrix as exact scalars, or `FieldDependent` if any entry still
    /// involves phase-space variables.
    pub fn scalar(&self) -> Result<Mat<GaussianRational>> {
        let n = self.size();
        let mut m = Mat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                m[(a, b)] = self.entries[a][b]
                    .as_scalar()
                    .ok_or(Error::FieldDependent)?;
            }
        }
        Ok(m)
    }
}

/// `Delta^{ab} = {Xi^a, Xi^b}`.
pub fn constraint_matrix(ps: &PhaseSpace, cs: &ConstraintSet) -> Result<ConstraintMatrix> {
    let n = cs.len();
    let mut entries = vec![vec![Expression::zero(); n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let v = ps.poisson(&cs.constraints[a], &cs.constraints[b])?;
            entries[b][a] = -&v;
            entries[a][b] = v;
        }
    }
    Ok(ConstraintMatrix { entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    SecondClass,
    NotSecondClass,
}

pub fn classify(ps: &PhaseSpace, cs: &ConstraintSet) -> Result<Classification> {
    let m = constraint_matrix(ps, cs)?.scalar()?;
    if m.rank() == m.rows() {
        Ok(Classification::SecondClass)
    } else {
        Ok(Classification::NotSecondClass)
    }
}

/// A second-class constraint set with its inverted constraint matrix, ready
/// to evaluate Dirac brackets.
#[derive(Clone, Debug)]
pub struct DiracStructure {
    ps: PhaseSpace,
    cs: ConstraintSet,
    inverse: Mat<GaussianRational>,
}

impl DiracStructure {
    pub fn new(ps: &PhaseSpace, cs: &ConstraintSet) -> Result<Self> {
        let m = constraint_matrix(ps, cs)?.scalar()?;
        let (rank, _) = m.rank_det();
        if rank < m.rows() {
            return Err(Error::NotSecondClass {
                rank,
                size: m.rows(),
            });
        }
        let inverse = m.inverse()?;
        Ok(DiracStructure {
            ps: ps.clone(),
            cs: cs.clone(),
            inverse,
        })
    }

    pub fn phase_space(&self) -> &PhaseSpace {
        &self.ps
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.cs
    }

    pub fn inverse(&self) -> &Mat<GaussianRational> {
        &self.inverse
    }

    /// `{A,B}_D = {A,B} - {A,Xi^a} Delta^{-1}_{ab} {Xi^b,B}`.
    pub fn bracket(&self, a: &Expression, b: &Expression) -> Result<Expression> {
        let xi = self.cs.constraints();
        let left: Vec<Expression> = xi
            .iter()
            .map(|c| self.ps.poisson(a, c))
            .collect::<Result<_>>()?;
        let right: Vec<Expression> = xi
            .iter()
            .map(|c| self.ps.poisson(c, b))
            .collect::<Result<_>>()?;
        let mut out = self.ps.poisson(a, b)?;
        for (i, l) in left.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            for (j, r) in right.iter().enumerate() {
                let w = &self.inverse[(i, j)];
                if r.is_zero() || w.is_zero() {
                    continue;
                }
                out = out - (l * r).scale(w);
            }
        }
        normal_form(&out, self.ps.table())
    }

    /// Classical angular momentum
    /// `J^{ij} = X^i p^j - X^j p^i - theta^{il} pi_l^j + theta^{jl} pi_l^i`.
    pub fn classical_j(&self, i: u8, j: u8) -> Result<Expression> {
        let ps = &self.ps;
        if i == j {
            return Err(Error::InvalidArgument(
                "angular momentum needs distinct indices".into(),
            ));
        }
        if !ps.indices().contains(&i) || !ps.indices().contains(&j) {
            return Err(Error::InvalidArgument("index out of range".into()));
        }
        let mut e = &(&ps.shifted(i)? * &ps.p_up(j)) - &(&ps.shifted(j)? * &ps.p_up(i));
        for l in ps.indices() {
            e = e - (&ps.theta(i, l) * &ps.pi(l, j)).scale(&gint(ps.metric(j)));
            e = e + (&ps.theta(j, l) * &ps.pi(l, i)).scale(&gint(ps.metric(i)));
        }
        normal_form(&e, ps.table())
    }

    /// `{J^{ij}, J^{kl}}_D` minus the rotation-algebra right-hand side.
    pub fn j_closure_residual(&self, i: u8, j: u8, k: u8, l: u8) -> Result<Expression> {
        let jj = |a: u8, b: u8| {
            if a == b {
                Ok(Expression::zero())
            } else {
                self.classical_j(a, b)
            }
        };
        let lhs = self.bracket(&jj(i, j)?, &jj(k, l)?)?;
        let delta = |a: u8, b: u8| if a == b { self.ps.metric(a) } else { 0 };
        let mut rhs = Expression::zero();
        for (s, d, a, b) in [
            (1, delta(i, l), k, j),
            (-1, delta(j, l), k, i),
            (-1, delta(i, k), l, j),
            (1, delta(j, k), l, i),
        ] {
            if d != 0 {
                rhs = rhs + jj(a, b)?.scale(&gint(s * d));
            }
        }
        normal_form(&(lhs - rhs), self.ps.table())
    }

    /// `delta A = -(1/2) eps_{kl} {A, J^{kl}}_D`, `eps` indexed like
    /// [`PhaseSpace::indices`].
    pub fn rotate(&self, eps: &Mat<BigRational>, a: &Expression) -> Result<Expression> {
        let idx = self.ps.indices();
        if eps.rows() != idx.len() || eps.cols() != idx.len() || !eps.is_antisymmetric() {
            return Err(Error::InvalidArgument(
                "rotation parameters must be an antisymmetric index-sized matrix".into(),
            ));
        }
        let mut out = Expression::zero();
        for (x, &k) in idx.iter().enumerate() {
            for (y, &l) in idx.iter().enumerate() {
                if x < y && !eps[(x, y)].is_zero() {
                    let c = g(&-eps[(x, y)].clone());
                    out = out + self.bracket(a, &self.classical_j(k, l)?)?.scale(&c);
                }
            }
        }
        Ok(out)
    }

    /// Time derivative `{A, H}_D`. `H` may be quadratic in the shifted
    /// coordinate, hence quartic once expanded in `x`, `theta`, `p`.
    pub fn hamiltonian_flow(&self, h: &Expression, a: &Expression) -> Result<Expression> {
        self.bracket(a, h)
    }
}

/// Convenience wrapper building the Dirac structure on each call.
pub fn dirac_bracket(
    ps: &PhaseSpace,
    cs: &ConstraintSet,
    a: &Expression,
    b: &Expression,
) -> Result<Expression> {
    DiracStructure::new(ps, cs)?.bracket(a, b)
}

/// Parameters of the two-sector isotropic oscillator.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorParams {
    pub m: BigRational,
    pub omega: BigRational,
    pub lambda: BigRational,
    pub big_omega: BigRational,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        OscillatorParams {
            m: BigRational::one(),
            omega: BigRational::one(),
            lambda: BigRational::one(),
            big_omega: BigRational::one(),
        }
    }
}

/// `H = p^2/2m + m w^2 X^2/2 + pi^2/(2 Lam) + Lam W^2 theta^2/2`, where
/// `theta^2` and `pi^2` sum over independent components `i < j`.
pub fn oscillator_hamiltonian(ps: &PhaseSpace, h: &OscillatorParams) -> Result<Expression> {
    if [&h.m, &h.omega, &h.lambda, &h.big_omega]
        .iter()
        .any(|v| **v <= BigRational::zero())
    {
        return Err(Error::InvalidArgument(
            "oscillator parameters must be positive".into(),
        ));
    }
    let two = BigRational::from_integer(2.into());
    let c_p = g(&(BigRational::one() / (&two * &h.m)));
    let c_x = g(&(&h.m * &h.omega * &h.omega / &two));
    let c_pi = g(&(BigRational::one() / (&two * &h.lambda)));
    let c_th = g(&(&h.lambda * &h.big_omega * &h.big_omega / &two));
    let mut e = Expression::zero();
    let idx = ps.indices();
    for &i in &idx {
        e = e + (&ps.p(i) * &ps.p_up(i)).scale(&c_p);
        let x = ps.shifted(i)?;
        e = e + (&x * &x).scale(&c_x).scale(&gint(ps.metric(i)));
        for &j in &idx {
            if i < j {
                e = e + (&ps.pi(i, j) * &ps.pi(i, j)).scale(&c_pi);
                e = e + (&ps.theta(i, j) * &ps.theta(i, j)).scale(&c_th);
            }
        }
    }
    normal_form(&e, ps.table())
}

/// Mass-shell condition `p^2 + m^2`.
pub fn mass_shell(ps: &PhaseSpace, m: &BigRational) -> Result<Expression> {
    let mut e = Expression::scalar(g(&(m * m)));
    for i in ps.indices() {
        e = e + &ps.p(i) * &ps.p_up(i);
    }
    normal_form(&e, ps.table())
}

/// `(phase-space variables, second-class constraints, effective variables)`.
pub fn degrees_of_freedom(ps: &PhaseSpace, cs: &ConstraintSet) -> Result<(usize, usize, usize)> {
    let total = ps.variable_count();
    let rank = constraint_matrix(ps, cs)?.scalar()?.rank();
    Ok((total, rank, total - rank))
}
