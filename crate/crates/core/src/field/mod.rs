//! Scalar fields on the extended `(x, theta)` space: dispersion, propagator,
//! lattice Klein-Gordon dynamics, conserved charges and the Moyal product.

pub mod io;
pub mod lattice;
pub mod moyal;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use lattice::{
    greens_solve, kg_apply, lattice_symbol, noether_charges, Charges, GreensSolution, Grid,
    LatticeField, Leapfrog, SourceTerm,
};
pub use moyal::{moyal_star, Poly};

fn eta(m: usize) -> f64 {
    if m == 0 {
        -1.0
    } else {
        1.0
    }
}

/// `K2_{mn} K2^{mn}` for an antisymmetric 4x4 given with upper indices.
pub fn pair_square(k2: &[[f64; 4]; 4]) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            s += eta(a) * eta(b) * k2[a][b] * k2[a][b];
        }
    }
    s
}

fn check_antisym(k2: &[[f64; 4]; 4]) -> Result<()> {
    for a in 0..4 {
        for b in 0..4 {
            if (k2[a][b] + k2[b][a]).abs() > 1e-12 * (1.0 + k2[a][b].abs()) {
                return Err(Error::InvalidArgument(
                    "pair momentum must be antisymmetric".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Momentum conjugate to `(x, theta)`, with `K.X = k1.x + (1/2) k2.theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedMomentum {
    /// `K_(1)^mu`.
    pub k1: [f64; 4],
    /// `K_(2)^{mu nu}`.
    pub k2: [[f64; 4]; 4],
    pub lambda: f64,
}

impl ExtendedMomentum {
    pub fn new(k1: [f64; 4], k2: [[f64; 4]; 4], lambda: f64) -> Result<Self> {
        check_antisym(&k2)?;
        Ok(ExtendedMomentum { k1, k2, lambda })
    }

    /// `K^2 = eta_{mn} k1^m k1^n + (lambda^2/2) k2_{mn} k2^{mn}`.
    pub fn square(&self) -> f64 {
        let k1: f64 = (0..4).map(|m| eta(m) * self.k1[m] * self.k1[m]).sum();
        k1 + 0.5 * self.lambda * self.lambda * pair_square(&self.k2)
    }

    /// `K.X` for a point `x^mu`, `theta^{mu nu}`.
    pub fn phase(&self, x: &[f64; 4], theta: &[[f64; 4]; 4]) -> f64 {
        let mut s: f64 = (0..4).map(|m| eta(m) * self.k1[m] * x[m]).sum();
        for a in 0..4 {
            for b in 0..4 {
                s += 0.5 * eta(a) * eta(b) * self.k2[a][b] * theta[a][b];
            }
        }
        s
    }
}

/// `omega = sqrt(|k1|^2 + (lambda^2/2) K2_{mn} K2^{mn} + m^2)`.
pub fn dispersion(kvec1: &[f64; 3], k2: &[[f64; 4]; 4], lambda: f64, m: f64) -> Result<f64> {
    if !(kvec1
        .iter()
        .chain(k2.iter().flatten())
        .all(|v| v.is_finite())
        && lambda.is_finite()
        && m.is_finite())
    {
        return Err(Error::InvalidArgument(
            "non-finite momentum or parameter".into(),
        ));
    }
    check_antisym(k2)?;
    let r =
        kvec1.iter().map(|k| k * k).sum::<f64>() + 0.5 * lambda * lambda * pair_square(k2) + m * m;
    if r < 0.0 {
        return Err(Error::Tachyonic(r));
    }
    Ok(r.sqrt())
}

/// `G(K) = -1 / (K^2 + m^2)`. With `eps`, the denominator becomes
/// `K^2 + m^2 - i eps`, i.e. `(K^0)^2 - omega^2 + i eps` up to sign.
pub fn propagator(k: &ExtendedMomentum, m: f64, eps: Option<f64>) -> Result<Complex64> {
    let d = k.square() + m * m;
    match eps {
        Some(e) if e > 0.0 => Ok(-Complex64::new(d, -e).inv()),
        Some(e) => Err(Error::InvalidArgument(format!(
            "i-epsilon must be positive, got {e}"
        ))),
        None => {
            let scale = k.k1.iter().map(|v| v * v).sum::<f64>() + m * m + 1.0;
            if d.abs() <= 1e-14 * scale {
                return Err(Error::Pole(d));
            }
            Ok(Complex64::new(-1.0 / d, 0.0))
        }
    }
}
