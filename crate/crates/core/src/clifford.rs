//! Ten-dimensional Clifford algebra with the 4 + 6 index split, spinor
//! Lorentz generators and the generalized Dirac operator.
//!
//! Convention: `{G^A, G^B} = -2 eta^{AB}` with `eta = diag(-1, 1, 1, 1)` on the
//! vector block, so `G^0` squares to `+I` and is Hermitian; the other vector
//! gammas are anti-Hermitian. On the pair block
//! `eta^{mn,ab} = eta^{ma} eta^{nb} - eta^{mb} eta^{na}` over the canonical
//! pairs (01),(02),(03),(12),(13),(23).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::reps::{pair_slot, PAIRS};

pub type CMat = DMatrix<Complex64>;

pub const SPINOR_DIM: usize = 32;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn eta4(m: usize) -> f64 {
    if m == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Macro index `A` as either a vector index or a canonical pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacroIndex {
    Vector(usize),
    Pair(usize, usize),
}

pub fn macro_index(a: usize) -> Option<MacroIndex> {
    match a {
        0..=3 => Some(MacroIndex::Vector(a)),
        4..=9 => {
            let (m, n) = PAIRS[a - 4];
            Some(MacroIndex::Pair(m, n))
        }
        _ => None,
    }
}

/// Diagonal of the extended metric `eta^{AB}`.
pub fn extended_metric() -> [f64; 10] {
    let mut e = [0.0; 10];
    for (a, slot) in e.iter_mut().enumerate() {
        *slot = match macro_index(a).expect("A < 10") {
            MacroIndex::Vector(m) => eta4(m),
            MacroIndex::Pair(m, n) => eta4(m) * eta4(n),
        };
    }
    e
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

fn pauli() -> [CMat; 4] {
    let z = Complex64::new(0.0, 0.0);
    let o = c(1.0);
    [
        CMat::from_row_slice(2, 2, &[o, z, z, o]),
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -I, I, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// Immutable set of the ten gamma matrices.
#[derive(Clone, Debug)]
pub struct GammaSet {
    gamma: Vec<CMat>,
    eta: [f64; 10],
}

/// Iterated tensor products of Pauli matrices (Jordan-Wigner ladder). The ten
/// Hermitian generators `e_k` square to `I`; each `G^A` is `e_A` or `i e_A`
/// according to the sign required by the metric.
pub fn build_gammas() -> GammaSet {
    let [id, sx, sy, sz] = pauli();
    let eta = extended_metric();
    let mut gamma = Vec::with_capacity(10);
    for a in 0..10 {
        let site = a / 2;
        let mut m = CMat::identity(1, 1);
        for s in 0..5 {
            let f = match s.cmp(&site) {
                std::cmp::Ordering::Less => &sz,
                std::cmp::Ordering::Equal => {
                    if a % 2 == 0 {
                        &sx
                    } else {
                        &sy
                    }
                }
                std::cmp::Ordering::Greater => &id,
            };
            m = kron(&m, f);
        }
        // G^2 = -eta I
        if eta[a] < 0.0 {
            gamma.push(m);
        } else {
            gamma.push(m * I);
        }
    }
    GammaSet { gamma, eta }
}

impl GammaSet {
    pub fn get(&self, a: usize) -> &CMat {
        &self.gamma[a]
    }

    pub fn all(&self) -> &[CMat] {
        &self.gamma
    }

    pub fn eta(&self) -> &[f64; 10] {
        &self.eta
    }

    /// `G^mu`.
    pub fn vector(&self, mu: usize) -> &CMat {
        &self.gamma[mu]
    }

    /// `G^mu` with the index lowered.
    pub fn vector_lower(&self, mu: usize) -> CMat {
        &self.gamma[mu] * c(eta4(mu))
    }

    /// `G^{mn}` for any ordered pair; zero when `m == n`.
    pub fn pair(&self, m: usize, n: usize) -> CMat {
        match pair_slot(m, n) {
            Some((k, flip)) => {
                let g = &self.gamma[4 + k];
                if flip {
                    -g
                } else {
                    g.clone()
                }
            }
            None => CMat::zeros(SPINOR_DIM, SPINOR_DIM),
        }
    }

    /// `G^m_n`: second index lowered.
    pub fn pair_mixed(&self, m: usize, n: usize) -> CMat {
        self.pair(m, n) * c(eta4(n))
    }

    /// `G_{mn}`: both indices lowered.
    pub fn pair_lower(&self, m: usize, n: usize) -> CMat {
        self.pair(m, n) * c(eta4(m) * eta4(n))
    }

    /// Row-major text dump: one header line per matrix, then one line per
    /// entry holding `row col re im`.
    pub fn export_text(&self) -> String {
        let mut s = String::new();
        for (a, g) in self.gamma.iter().enumerate() {
            s.push_str(&format!("# gamma {a} {SPINOR_DIM}x{SPINOR_DIM}\n"));
            for r in 0..SPINOR_DIM {
                for col in 0..SPINOR_DIM {
                    let z = g[(r, col)];
                    s.push_str(&format!("{r} {col} {:.17e} {:.17e}\n", z.re, z.im));
                }
            }
        }
        s
    }
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn max_entry(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise residual of `{G^A, G^B} + 2 eta^{AB} I` over all 100 pairs.
pub fn clifford_residual(gs: &GammaSet) -> f64 {
    let id = CMat::identity(SPINOR_DIM, SPINOR_DIM);
    let mut worst = 0.0f64;
    for a in 0..10 {
        for b in 0..10 {
            let target = if a == b {
                &id * c(-2.0 * gs.eta[a])
            } else {
                CMat::zeros(SPINOR_DIM, SPINOR_DIM)
            };
            worst = worst.max(max_entry(
                &(anticommutator(&gs.gamma[a], &gs.gamma[b]) - target),
            ));
        }
    }
    worst
}

/// `M^{mu nu}` for all `mu, nu` in `0..4`.
#[derive(Clone, Debug)]
pub struct SpinorGenerator {
    m: Vec<CMat>,
}

impl SpinorGenerator {
    pub fn upper(&self, mu: usize, nu: usize) -> &CMat {
        &self.m[4 * mu + nu]
    }

    pub fn lower(&self, mu: usize, nu: usize) -> CMat {
        self.upper(mu, nu) * c(eta4(mu) * eta4(nu))
    }
}

/// `M^{mu nu} = (i/4)([G^mu, G^nu] + [G^{mu a}, G^nu_a])`.
pub fn spinor_generator(gs: &GammaSet) -> SpinorGenerator {
    let mut m = Vec::with_capacity(16);
    for mu in 0..4 {
        for nu in 0..4 {
            let mut acc = commutator(gs.vector(mu), gs.vector(nu));
            for a in 0..4 {
                acc += commutator(&gs.pair(mu, a), &gs.pair_mixed(nu, a));
            }
            m.push(acc * (I * 0.25));
        }
    }
    SpinorGenerator { m }
}

/// Residual of
/// `[M^{mn}, M^{rs}] = i eta^{ms} M^{rn} - i eta^{ns} M^{rm} - i eta^{mr} M^{sn} + i eta^{nr} M^{sm}`.
pub fn lorentz_algebra_residual(sg: &SpinorGenerator) -> f64 {
    let d = |a: usize, b: usize| if a == b { eta4(a) } else { 0.0 };
    let mut worst = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            for r in 0..4 {
                for s in 0..4 {
                    let lhs = commutator(sg.upper(mu, nu), sg.upper(r, s));
                    let rhs = (sg.upper(r, nu) * c(d(mu, s))
                        - sg.upper(r, mu) * c(d(nu, s))
                        - sg.upper(s, nu) * c(d(mu, r))
                        + sg.upper(s, mu) * c(d(nu, r)))
                        * I;
                    worst = worst.max(max_entry(&(lhs - rhs)));
                }
            }
        }
    }
    worst
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Residual of `[G^mu, M_{ab}] = coeff (d^mu_a G_b - d^mu_b G_a)` over all
/// index values. The `2i delta^mu_[a G_b]` form, with the unit-weight
/// antisymmetrizer `X_[a Y_b] = (X_a Y_b - X_b Y_a)/2`, is `coeff = i`; these
/// generators satisfy it with `coeff = -i`.
pub fn vector_covariance_residual(gs: &GammaSet, sg: &SpinorGenerator, coeff: Complex64) -> f64 {
    let mut worst = 0.0f64;
    for mu in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let lhs = commutator(gs.vector(mu), &sg.lower(a, b));
                let rhs = (gs.vector_lower(b) * c(delta(mu, a))
                    - gs.vector_lower(a) * c(delta(mu, b)))
                    * coeff;
                worst = worst.max(max_entry(&(lhs - rhs)));
            }
        }
    }
    worst
}

/// Residual of
/// `[G^{mn}, M_{ab}] = coeff (d^m_a G_b^n - d^m_b G_a^n - d^n_a G_b^m + d^n_b G_a^m)`.
/// The `2i` form is `coeff = i`.
pub fn pair_covariance_residual(gs: &GammaSet, sg: &SpinorGenerator, coeff: Complex64) -> f64 {
    // G_b^n = eta_bb G^{bn}
    let low_first = |b: usize, n: usize| gs.pair(b, n) * c(eta4(b));
    let mut worst = 0.0f64;
    for m in 0..4 {
        for n in 0..4 {
            let g = gs.pair(m, n);
            for a in 0..4 {
                for b in 0..4 {
                    let lhs = commutator(&g, &sg.lower(a, b));
                    let rhs = (low_first(b, n) * c(delta(m, a))
                        - low_first(a, n) * c(delta(m, b))
                        - low_first(b, m) * c(delta(n, a))
                        + low_first(a, m) * c(delta(n, b)))
                        * coeff;
                    worst = worst.max(max_entry(&(lhs - rhs)));
                }
            }
        }
    }
    worst
}

fn check_antisym(big_k: &[[f64; 4]; 4]) -> Result<()> {
    for a in 0..4 {
        for b in 0..4 {
            if (big_k[a][b] + big_k[b][a]).abs() > 1e-12 * (1.0 + big_k[a][b].abs()) {
                return Err(Error::InvalidArgument("K must be antisymmetric".into()));
            }
        }
    }
    Ok(())
}

fn slash(gs: &GammaSet, k: &[f64; 4], big_k: &[[f64; 4]; 4], lambda: f64) -> Result<CMat> {
    check_antisym(big_k)?;
    let mut s = CMat::zeros(SPINOR_DIM, SPINOR_DIM);
    for mu in 0..4 {
        s += gs.vector(mu) * c(k[mu]);
    }
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                s += gs.pair(a, b) * c(0.5 * lambda * big_k[a][b]);
            }
        }
    }
    Ok(s)
}

/// `D(k, K) = G^mu k_mu + (lambda/2) G^{ab} K_{ab} - m I` with lower-index
/// momenta.
pub fn dirac_operator(
    gs: &GammaSet,
    k: &[f64; 4],
    big_k: &[[f64; 4]; 4],
    lambda: f64,
    m: f64,
) -> Result<CMat> {
    let s = slash(gs, k, big_k, lambda)?;
    Ok(s - CMat::identity(SPINOR_DIM, SPINOR_DIM) * c(m))
}

/// `D(k, K) + 2m`, the factor applied from the left to square the operator.
pub fn dirac_conjugate(
    gs: &GammaSet,
    k: &[f64; 4],
    big_k: &[[f64; 4]; 4],
    lambda: f64,
    m: f64,
) -> Result<CMat> {
    let s = slash(gs, k, big_k, lambda)?;
    Ok(s + CMat::identity(SPINOR_DIM, SPINOR_DIM) * c(m))
}

/// `k^2 + (lambda^2/2) K^2 + m^2` with `k^2 = eta^{mn} k_m k_n` and
/// `K^2 = K_{ab} K^{ab}`.
pub fn kg_form(k: &[f64; 4], big_k: &[[f64; 4]; 4], lambda: f64, m: f64) -> f64 {
    let k2: f64 = (0..4).map(|mu| eta4(mu) * k[mu] * k[mu]).sum();
    let mut kk = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            kk += eta4(a) * eta4(b) * big_k[a][b] * big_k[a][b];
        }
    }
    k2 + 0.5 * lambda * lambda * kk + m * m
}

/// `Lambda^mu_nu = exp(omega^mu_nu)` where `omega_{mn}` is given with lower indices.
pub fn lorentz_from_omega(omega: &[[f64; 4]; 4]) -> Result<DMatrix<f64>> {
    check_antisym(omega)?;
    let w = DMatrix::from_fn(4, 4, |m, n| eta4(m) * omega[m][n]);
    Ok(w.exp())
}

/// `S = exp(-(i/2) omega_{mn} M^{mn})`. The exponential is the Pade
/// scaling-and-squaring one provided by nalgebra.
pub fn spinor_boost(sg: &SpinorGenerator, omega: &[[f64; 4]; 4]) -> Result<CMat> {
    check_antisym(omega)?;
    let mut gen = CMat::zeros(SPINOR_DIM, SPINOR_DIM);
    for m in 0..4 {
        for n in 0..4 {
            gen += sg.upper(m, n) * c(omega[m][n]);
        }
    }
    let s = (gen * (-0.5 * I)).exp();
    if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("matrix exponential diverged".into()));
    }
    Ok(s)
}

/// `max_mu || S^-1 G^mu S - Lambda^mu_nu G^nu ||` (entrywise). `inverse`
/// selects `Lambda^-1` on the right-hand side, the other common convention.
pub fn intertwining_residual(
    gs: &GammaSet,
    s: &CMat,
    lambda: &DMatrix<f64>,
    inverse: bool,
) -> Result<f64> {
    let s_inv = s.clone().try_inverse().ok_or(Error::Singular)?;
    let l = if inverse {
        lambda.clone().try_inverse().ok_or(Error::Singular)?
    } else {
        lambda.clone()
    };
    let mut worst = 0.0f64;
    for mu in 0..4 {
        let lhs = &s_inv * gs.vector(mu) * s;
        let mut rhs = CMat::zeros(SPINOR_DIM, SPINOR_DIM);
        for nu in 0..4 {
            rhs += gs.vector(nu) * c(l[(mu, nu)]);
        }
        worst = worst.max(max_entry(&(lhs - rhs)));
    }
    Ok(worst)
}
