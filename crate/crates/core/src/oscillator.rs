//! Two-sector isotropic oscillator: spectrum, theta-sector ground state and
//! Gaussian moments with independent numeric oracles.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_hermite, integrate_cube};

#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorConfig {
    pub m: f64,
    pub omega: f64,
    /// Theta-sector stiffness, units of length^-3.
    pub lambda: f64,
    pub big_omega: f64,
    pub d: usize,
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        OscillatorConfig {
            m: 1.0,
            omega: 1.0,
            lambda: 1.0,
            big_omega: 1.0,
            d: 3,
        }
    }
}

impl OscillatorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m", self.m),
            ("omega", self.omega),
            ("Lambda", self.lambda),
            ("Omega", self.big_omega),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.d < 2 {
            return Err(Error::InvalidArgument(format!("dimension {} < 2", self.d)));
        }
        Ok(())
    }

    /// Number of independent theta components, `D(D-1)/2`.
    pub fn theta_modes(&self) -> usize {
        self.d * (self.d - 1) / 2
    }

    fn lo(&self) -> f64 {
        self.lambda * self.big_omega
    }

    /// Canonical slot of `theta^{ij}` (1-based, `i < j`).
    pub fn slot(&self, i: usize, j: usize) -> Result<usize> {
        if !(1 <= i && i < j && j <= self.d) {
            return Err(Error::InvalidArgument(format!(
                "theta[{i},{j}] is not a canonical component"
            )));
        }
        let before: usize = (1..i).map(|r| self.d - r).sum();
        Ok(before + (j - i - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occupation {
    pub n_x: Vec<u32>,
    pub n_theta: Vec<u32>,
}

impl Occupation {
    pub fn ground(cfg: &OscillatorConfig) -> Self {
        Occupation {
            n_x: vec![0; cfg.d],
            n_theta: vec![0; cfg.theta_modes()],
        }
    }
}

/// `E = omega (sum n_x + D/2) + Omega (sum n_theta + D(D-1)/4)`.
pub fn energy(cfg: &OscillatorConfig, occ: &Occupation) -> Result<f64> {
    if occ.n_x.len() != cfg.d || occ.n_theta.len() != cfg.theta_modes() {
        return Err(Error::InvalidArgument(
            "occupation shape does not match the dimension".into(),
        ));
    }
    let nx: f64 = occ.n_x.iter().map(|&n| n as f64).sum();
    let nt: f64 = occ.n_theta.iter().map(|&n| n as f64).sum();
    let d = cfg.d as f64;
    Ok(cfg.omega * (nx + d / 2.0) + cfg.big_omega * (nt + d * (d - 1.0) / 4.0))
}

/// Zero-point shift of the theta sector, `D(D-1) Omega / 4`.
pub fn vacuum_shift(cfg: &OscillatorConfig) -> f64 {
    let d = cfg.d as f64;
    d * (d - 1.0) * cfg.big_omega / 4.0
}

/// Number of occupation vectors of `modes` oscillators with total quantum
/// number `level`, by explicit enumeration.
pub fn degeneracy(modes: usize, level: u32) -> u64 {
    fn rec(modes: usize, left: u32) -> u64 {
        if modes == 1 {
            return 1;
        }
        (0..=left).map(|k| rec(modes - 1, left - k)).sum()
    }
    if modes == 0 {
        return u64::from(level == 0);
    }
    rec(modes, level)
}

fn sum_sq(theta: &[f64]) -> f64 {
    theta.iter().map(|t| t * t).sum()
}

fn check_len(cfg: &OscillatorConfig, theta: &[f64]) -> Result<()> {
    if theta.len() != cfg.theta_modes() {
        return Err(Error::InvalidArgument(format!(
            "expected {} theta components, got {}",
            cfg.theta_modes(),
            theta.len()
        )));
    }
    Ok(())
}

/// Theta-sector ground state
/// `(LO/pi)^{D(D-1)/8} exp(-(LO/4) theta_ij theta^ij) exp(-i D(D-1) Omega t / 4)`
/// with `theta_ij theta^ij = 2 sum_{i<j} (theta^ij)^2` and `LO = Lambda Omega`.
pub fn ground_wavefunction(cfg: &OscillatorConfig, theta: &[f64], t: f64) -> Result<Complex64> {
    check_len(cfg, theta)?;
    let n = (cfg.d * (cfg.d - 1)) as f64;
    let amp = (cfg.lo() / std::f64::consts::PI).powf(n / 8.0)
        * (-(cfg.lo() / 4.0) * 2.0 * sum_sq(theta)).exp();
    Ok(Complex64::from_polar(amp, -n * cfg.big_omega * t / 4.0))
}

/// `W(theta) = (LO/pi)^{D(D-1)/4} exp(-(LO/2) theta_rs theta^rs)`.
pub fn weight_function(cfg: &OscillatorConfig, theta: &[f64]) -> Result<f64> {
    check_len(cfg, theta)?;
    let n = (cfg.d * (cfg.d - 1)) as f64;
    Ok((cfg.lo() / std::f64::consts::PI).powf(n / 4.0)
        * (-(cfg.lo() / 2.0) * 2.0 * sum_sq(theta)).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moment {
    Unit,
    /// `<theta^{ij}>`, canonical slot.
    Theta(usize),
    /// `<theta^2> = (1/2) <theta_ij theta^ij>`.
    Theta2,
    /// `<theta^{ij} theta^{kl}>`, canonical slots.
    Pair(usize, usize),
}

/// `<theta^2> = 1 / (2 Lambda Omega)`.
pub fn theta2(cfg: &OscillatorConfig) -> f64 {
    1.0 / (2.0 * cfg.lo())
}

/// Closed-form moments of the ground state.
pub fn moment(cfg: &OscillatorConfig, which: Moment) -> Result<f64> {
    cfg.validate()?;
    let n = cfg.theta_modes();
    let check = |s: usize| {
        if s < n {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "theta slot {s} out of range"
            )))
        }
    };
    Ok(match which {
        Moment::Unit => 1.0,
        Moment::Theta(s) => {
            check(s)?;
            0.0
        }
        Moment::Theta2 => theta2(cfg),
        Moment::Pair(a, b) => {
            check(a)?;
            check(b)?;
            if a == b {
                2.0 / (cfg.d * (cfg.d - 1)) as f64 * theta2(cfg)
            } else {
                0.0
            }
        }
    })
}

/// `<x^2> = <X^2> + (2/D) <theta^2> <p^2>`.
pub fn x2_expectation(cfg: &OscillatorConfig, x2: f64, p2: f64) -> Result<f64> {
    cfg.validate()?;
    Ok(x2 + 2.0 / cfg.d as f64 * theta2(cfg) * p2)
}

/// Polynomial in the theta components: `sum c * prod theta_k^e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaPoly {
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl ThetaPoly {
    pub fn constant(c: f64, modes: usize) -> Self {
        ThetaPoly {
            terms: vec![(c, vec![0; modes])],
        }
    }

    pub fn monomial(modes: usize, powers: &[(usize, u32)]) -> Self {
        let mut e = vec![0; modes];
        for &(k, p) in powers {
            e[k] += p;
        }
        ThetaPoly {
            terms: vec![(1.0, e)],
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                c * e
                    .iter()
                    .zip(theta)
                    .map(|(&p, t)| t.powi(p as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Quadrature: difference between two rule orders. Monte Carlo: standard error.
    pub error: f64,
}

const MC_CHUNK: usize = 1 << 16;

/// Numeric `int W(theta) f(theta) dtheta`. Quadrature (tensor Gauss-Hermite)
/// is limited to three theta components; Monte Carlo works in any dimension
/// and is deterministic for a given seed.
pub fn moment_oracle(
    cfg: &OscillatorConfig,
    f: &ThetaPoly,
    method: OracleMethod,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    cfg.validate()?;
    let n = cfg.theta_modes();
    if f.terms.iter().any(|(_, e)| e.len() != n) {
        return Err(Error::InvalidArgument(
            "polynomial arity does not match theta components".into(),
        ));
    }
    if f.degree() > 4 {
        return Err(Error::InvalidArgument(
            "oracle polynomials are limited to degree 4".into(),
        ));
    }
    match method {
        OracleMethod::Quadrature => {
            if n > 3 {
                return Err(Error::Unsupported(format!(
                    "quadrature over {n} theta components (max 3)"
                )));
            }
            let lo = quadrature_rule(cfg, f, 10)?;
            let hi = quadrature_rule(cfg, f, 20)?;
            Ok(Estimate {
                value: hi,
                error: (hi - lo).abs(),
            })
        }
        OracleMethod::MonteCarlo => {
            if samples < 2 {
                return Err(Error::InvalidArgument(
                    "Monte Carlo needs at least 2 samples".into(),
                ));
            }
            let sigma = (1.0 / (2.0 * cfg.lo())).sqrt();
            let normal = Normal::new(0.0, sigma).map_err(|e| Error::Numerical(e.to_string()))?;
            let chunks = samples.div_ceil(MC_CHUNK);
            let partial: Vec<(f64, f64)> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(c as u64);
                    let count = MC_CHUNK.min(samples - c * MC_CHUNK);
                    let mut th = vec![0.0; n];
                    let (mut s, mut s2) = (0.0, 0.0);
                    for _ in 0..count {
                        for t in th.iter_mut() {
                            *t = normal.sample(&mut rng);
                        }
                        let v = f.eval(&th);
                        s += v;
                        s2 += v * v;
                    }
                    (s, s2)
                })
                .collect();
            let (s, s2) = partial
                .iter()
                .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            let nf = samples as f64;
            let mean = s / nf;
            let var = ((s2 / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
            Ok(Estimate {
                value: mean,
                error: (var / nf).sqrt(),
            })
        }
    }
}

fn quadrature_rule(cfg: &OscillatorConfig, f: &ThetaPoly, order: usize) -> Result<f64> {
    let n = cfg.theta_modes();
    let (x, w) = gauss_hermite(order)?;
    // theta = u / sqrt(LO) maps W to pi^{-n/2} exp(-|u|^2)
    let scale = 1.0 / cfg.lo().sqrt();
    let norm = std::f64::consts::PI.powf(-(n as f64) / 2.0);
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    let mut th = vec![0.0; n];
    loop {
        let mut wt = norm;
        for (k, &i) in idx.iter().enumerate() {
            th[k] = x[i] * scale;
            wt *= w[i];
        }
        total += wt * f.eval(&th);
        let mut k = 0;
        loop {
            if k == n {
                return Ok(total);
            }
            idx[k] += 1;
            if idx[k] < order {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `int |psi(theta, t)|^2 dtheta` by adaptive quadrature over a box wide
/// enough that the Gaussian tail is below `tol`.
pub fn wavefunction_norm(cfg: &OscillatorConfig, t: f64, tol: f64) -> Result<(f64, f64)> {
    cfg.validate()?;
    let n = cfg.theta_modes();
    if n > 3 {
        return Err(Error::Unsupported(format!(
            "adaptive quadrature over {n} theta components (max 3)"
        )));
    }
    let half = 9.0 / cfg.lo().sqrt();
    let f = |th: &[f64]| {
        ground_wavefunction(cfg, th, t)
            .map(|z| z.norm_sqr())
            .unwrap_or(f64::NAN)
    };
    integrate_cube(&f, n, half, tol)
}
