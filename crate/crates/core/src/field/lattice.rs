//! Reduced `(t, x, theta^12)` lattice. With a single retained pair component,
//! `(1/2) d^{mn} d_{mn}` acts as `d_theta^2`, so the operator is
//! `-d_t^2 + d_x^2 + lambda^2 d_theta^2 - m^2`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub nt: usize,
    pub nx: usize,
    pub nth: usize,
    pub dt: f64,
    pub dx: f64,
    pub dth: f64,
    pub lambda: f64,
    pub m: f64,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.nt < MIN_POINTS || self.nx < MIN_POINTS || self.nth < MIN_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid sizes must be >= {MIN_POINTS}"
            )));
        }
        for (n, v) in [("dt", self.dt), ("dx", self.dx), ("dtheta", self.dth)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{n} must be positive")));
            }
        }
        if !(self.lambda.is_finite() && self.m.is_finite()) {
            return Err(Error::InvalidArgument("lambda and m must be finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nt * self.nx * self.nth
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, it: usize, ix: usize, ith: usize) -> usize {
        (it * self.nx + ix) * self.nth + ith
    }

    pub fn volume_element(&self) -> f64 {
        self.dx * self.dth
    }

    /// Leapfrog stability parameter `dt * sqrt(1/dx^2 + lambda^2/dth^2 + m^2/4)`;
    /// the scheme is stable for values below 1.
    pub fn cfl(&self) -> f64 {
        self.dt * stability_rate(self.dx, self.dth, self.lambda, self.m)
    }

    pub fn is_interior(&self, it: usize, ix: usize, ith: usize) -> bool {
        (1..self.nt - 1).contains(&it)
            && (1..self.nx - 1).contains(&ix)
            && (1..self.nth - 1).contains(&ith)
    }
}

fn stability_rate(dx: f64, dth: f64, lambda: f64, m: f64) -> f64 {
    (1.0 / (dx * dx) + lambda * lambda / (dth * dth) + m * m / 4.0).sqrt()
}

/// Time step giving the requested leapfrog stability parameter.
pub fn dt_for_cfl(cfl: f64, dx: f64, dth: f64, lambda: f64, m: f64) -> f64 {
    cfl / stability_rate(dx, dth, lambda, m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl LatticeField {
    pub fn zeros(grid: Grid) -> Result<Self> {
        grid.validate()?;
        let n = grid.len();
        Ok(LatticeField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64, f64) -> Complex64) -> Result<Self> {
        let mut out = Self::zeros(grid)?;
        let g = &out.grid;
        let mut vals = Vec::with_capacity(g.len());
        for it in 0..g.nt {
            for ix in 0..g.nx {
                for ith in 0..g.nth {
                    vals.push(f(it as f64 * g.dt, ix as f64 * g.dx, ith as f64 * g.dth));
                }
            }
        }
        out.values = vals;
        Ok(out)
    }

    pub fn at(&self, it: usize, ix: usize, ith: usize) -> Complex64 {
        self.values[self.grid.index(it, ix, ith)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest magnitude over interior points only.
    pub fn interior_max_abs(&self) -> f64 {
        let g = &self.grid;
        let mut worst = 0.0f64;
        for it in 1..g.nt - 1 {
            for ix in 1..g.nx - 1 {
                for ith in 1..g.nth - 1 {
                    worst = worst.max(self.at(it, ix, ith).norm());
                }
            }
        }
        worst
    }

    /// Real action density at cell `(it, ix, ith)` with forward differences:
    /// `(1/2)(-(d_t phi)^2 + (d_x phi)^2 + lambda^2 (d_theta phi)^2 + m^2 phi^2)`.
    /// Uses the real part of the samples.
    pub fn action_density(&self, it: usize, ix: usize, ith: usize) -> Result<f64> {
        let g = &self.grid;
        if it + 1 >= g.nt || ix + 1 >= g.nx || ith + 1 >= g.nth {
            return Err(Error::Boundary(format!(
                "forward stencil at ({it}, {ix}, {ith}) leaves the grid"
            )));
        }
        let p = self.at(it, ix, ith).re;
        let ft = (self.at(it + 1, ix, ith).re - p) / g.dt;
        let fx = (self.at(it, ix + 1, ith).re - p) / g.dx;
        let fth = (self.at(it, ix, ith + 1).re - p) / g.dth;
        Ok(0.5 * (-ft * ft + fx * fx + g.lambda * g.lambda * fth * fth + g.m * g.m * p * p))
    }

    /// Sum of the action density over all complete cells times the cell volume.
    pub fn action(&self) -> f64 {
        let g = &self.grid;
        let mut s = 0.0;
        for it in 0..g.nt - 1 {
            for ix in 0..g.nx - 1 {
                for ith in 0..g.nth - 1 {
                    s += self.action_density(it, ix, ith).expect("cell inside grid");
                }
            }
        }
        s * g.dt * g.dx * g.dth
    }
}

/// Source samples; must vanish on the outer layer of the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceTerm {
    pub field: LatticeField,
}

impl SourceTerm {
    pub fn new(field: LatticeField) -> Result<Self> {
        let g = &field.grid;
        for it in 0..g.nt {
            for ix in 0..g.nx {
                for ith in 0..g.nth {
                    if !g.is_interior(it, ix, ith)
                        && field.at(it, ix, ith) != Complex64::new(0.0, 0.0)
                    {
                        return Err(Error::InvalidArgument(format!(
                            "source is not compactly supported: nonzero at ({it}, {ix}, {ith})"
                        )));
                    }
                }
            }
        }
        Ok(SourceTerm { field })
    }
}

/// `(-D_tt + D_xx + lambda^2 D_thth - m^2) phi` at one interior point.
pub fn kg_apply_at(f: &LatticeField, it: usize, ix: usize, ith: usize) -> Result<Complex64> {
    let g = &f.grid;
    if !g.is_interior(it, ix, ith) {
        return Err(Error::Boundary(format!(
            "stencil at ({it}, {ix}, {ith}) touches the boundary"
        )));
    }
    let c = f.at(it, ix, ith);
    let dtt = (f.at(it + 1, ix, ith) - c * 2.0 + f.at(it - 1, ix, ith)) / (g.dt * g.dt);
    let dxx = (f.at(it, ix + 1, ith) - c * 2.0 + f.at(it, ix - 1, ith)) / (g.dx * g.dx);
    let dthth = (f.at(it, ix, ith + 1) - c * 2.0 + f.at(it, ix, ith - 1)) / (g.dth * g.dth);
    Ok(-dtt + dxx + dthth * (g.lambda * g.lambda) - c * (g.m * g.m))
}

/// Klein-Gordon operator on all interior points; boundary entries are zero.
pub fn kg_apply(f: &LatticeField) -> LatticeField {
    let g = &f.grid;
    let mut out = LatticeField {
        grid: g.clone(),
        values: vec![Complex64::new(0.0, 0.0); g.len()],
    };
    for it in 1..g.nt - 1 {
        for ix in 1..g.nx - 1 {
            for ith in 1..g.nth - 1 {
                out.values[g.index(it, ix, ith)] = kg_apply_at(f, it, ix, ith).expect("interior");
            }
        }
    }
    out
}

/// Discrete symbol of the operator on `exp(i(k x + kappa theta - w t))`, with
/// a complex `w` allowed.
pub fn lattice_symbol(grid: &Grid, w: Complex64, k: f64, kappa: f64) -> Complex64 {
    let st = (w * (grid.dt / 2.0)).sin();
    let sx = (k * grid.dx / 2.0).sin();
    let sth = (kappa * grid.dth / 2.0).sin();
    st * st * (4.0 / (grid.dt * grid.dt))
        - 4.0 * sx * sx / (grid.dx * grid.dx)
        - grid.lambda * grid.lambda * 4.0 * sth * sth / (grid.dth * grid.dth)
        - grid.m * grid.m
}

#[derive(Clone, Debug)]
pub struct GreensSolution {
    pub field: LatticeField,
    /// Ratio of largest to smallest symbol magnitude.
    pub condition_number: f64,
    pub epsilon: f64,
}

pub const CONDITION_WARN: f64 = 1e10;

fn fft_axis(
    data: &mut [Complex64],
    dims: [usize; 3],
    axis: usize,
    inverse: bool,
    planner: &mut FftPlanner<f64>,
) {
    let n = dims[axis];
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let stride = match axis {
        0 => dims[1] * dims[2],
        1 => dims[2],
        _ => 1,
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for base in 0..data.len() {
        // line starts are the points whose coordinate along `axis` is zero
        if (base / stride) % n != 0 {
            continue;
        }
        for (k, b) in buf.iter_mut().enumerate() {
            *b = data[base + k * stride];
        }
        fft.process(&mut buf);
        for (k, b) in buf.iter().enumerate() {
            data[base + k * stride] = *b;
        }
    }
}

/// Retarded solve of `KG phi = J`. The field is written as
/// `phi = exp(eps t) psi` with `psi` periodic on the grid, which moves the
/// poles to `w -> w + i eps`; the periodic problem is inverted exactly by FFT.
/// `eps` defaults to `10 / T`.
pub fn greens_solve(source: &SourceTerm, eps: Option<f64>) -> Result<GreensSolution> {
    let g = source.field.grid.clone();
    g.validate()?;
    let total_t = g.nt as f64 * g.dt;
    let eps = eps.unwrap_or(10.0 / total_t);
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let dims = [g.nt, g.nx, g.nth];
    let mut data: Vec<Complex64> = source
        .field
        .values
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let it = i / (g.nx * g.nth);
            j * (-eps * it as f64 * g.dt).exp()
        })
        .collect();
    let mut planner = FftPlanner::new();
    for axis in 0..3 {
        fft_axis(&mut data, dims, axis, false, &mut planner);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let (mut smax, mut smin) = (0.0f64, f64::INFINITY);
    for it in 0..g.nt {
        let at = two_pi * it as f64 / g.nt as f64;
        // e^{+-(eps dt + i a)} second difference
        let z = Complex64::new(eps * g.dt, at);
        let dtt = (z.cosh() * 2.0 - 2.0) / (g.dt * g.dt);
        for ix in 0..g.nx {
            let sx = (std::f64::consts::PI * ix as f64 / g.nx as f64).sin();
            let dxx = -4.0 * sx * sx / (g.dx * g.dx);
            for ith in 0..g.nth {
                let sth = (std::f64::consts::PI * ith as f64 / g.nth as f64).sin();
                let dthth = -4.0 * sth * sth / (g.dth * g.dth);
                let s = -dtt + dxx + g.lambda * g.lambda * dthth - g.m * g.m;
                let mag = s.norm();
                smax = smax.max(mag);
                smin = smin.min(mag);
                let idx = g.index(it, ix, ith);
                data[idx] = if mag == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    data[idx] / s
                };
            }
        }
    }
    if smin == 0.0 {
        return Err(Error::Singular);
    }
    let cond = smax / smin;
    if cond > CONDITION_WARN {
        log::warn!("Green's solve is ill-conditioned: condition number {cond:.3e}");
    }
    for axis in 0..3 {
        fft_axis(&mut data, dims, axis, true, &mut planner);
    }
    let norm = 1.0 / g.len() as f64;
    for (i, v) in data.iter_mut().enumerate() {
        let it = i / (g.nx * g.nth);
        *v *= norm * (eps * it as f64 * g.dt).exp();
    }
    Ok(GreensSolution {
        field: LatticeField {
            grid: g,
            values: data,
        },
        condition_number: cond,
        epsilon: eps,
    })
}

/// Charges carried between two adjacent time slices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Charges {
    pub p0: f64,
    pub p1: f64,
    pub ptheta: f64,
    pub q: f64,
}

/// Free leapfrog evolution on a spatial `(x, theta)` torus.
#[derive(Clone, Debug)]
pub struct Leapfrog {
    pub nx: usize,
    pub nth: usize,
    pub dx: f64,
    pub dth: f64,
    pub dt: f64,
    pub lambda: f64,
    pub m: f64,
    pub prev: Vec<Complex64>,
    pub cur: Vec<Complex64>,
    pub step: usize,
}

impl Leapfrog {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        nx: usize,
        nth: usize,
        dx: f64,
        dth: f64,
        dt: f64,
        lambda: f64,
        m: f64,
        prev: Vec<Complex64>,
        cur: Vec<Complex64>,
    ) -> Result<Self> {
        if nx < MIN_POINTS || nth < MIN_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid sizes must be >= {MIN_POINTS}"
            )));
        }
        if prev.len() != nx * nth || cur.len() != nx * nth {
            return Err(Error::InvalidArgument(
                "slice shapes do not match the grid".into(),
            ));
        }
        let lf = Leapfrog {
            nx,
            nth,
            dx,
            dth,
            dt,
            lambda,
            m,
            prev,
            cur,
            step: 0,
        };
        if lf.cfl() >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "unstable time step: CFL {:.3} >= 1",
                lf.cfl()
            )));
        }
        Ok(lf)
    }

    /// Initial slices `A exp(i(k x + kappa theta - w t))` at `t = 0, dt` on a
    /// periodic grid; `k` and `kappa` are integer mode numbers, `sign` picks the
    /// frequency branch and `w` comes from the continuum dispersion.
    #[allow(clippy::too_many_arguments)]
    pub fn plane_wave(
        nx: usize,
        nth: usize,
        dx: f64,
        dth: f64,
        cfl: f64,
        lambda: f64,
        m: f64,
        amp: Complex64,
        modes: (i64, i64),
        sign: f64,
    ) -> Result<Self> {
        let dt = dt_for_cfl(cfl, dx, dth, lambda, m);
        let (k, kappa) = Self::wavenumbers(nx, nth, dx, dth, modes);
        let w = sign * (k * k + lambda * lambda * kappa * kappa + m * m).sqrt();
        let slice = |t: f64| -> Vec<Complex64> {
            let mut v = Vec::with_capacity(nx * nth);
            for ix in 0..nx {
                for ith in 0..nth {
                    let ph = k * ix as f64 * dx + kappa * ith as f64 * dth - w * t;
                    v.push(amp * Complex64::from_polar(1.0, ph));
                }
            }
            v
        };
        Self::new(nx, nth, dx, dth, dt, lambda, m, slice(0.0), slice(dt))
    }

    pub fn wavenumbers(nx: usize, nth: usize, dx: f64, dth: f64, modes: (i64, i64)) -> (f64, f64) {
        let two_pi = 2.0 * std::f64::consts::PI;
        (
            two_pi * modes.0 as f64 / (nx as f64 * dx),
            two_pi * modes.1 as f64 / (nth as f64 * dth),
        )
    }

    pub fn cfl(&self) -> f64 {
        self.dt * stability_rate(self.dx, self.dth, self.lambda, self.m)
    }

    pub fn time(&self) -> f64 {
        (self.step + 1) as f64 * self.dt
    }

    fn idx(&self, ix: usize, ith: usize) -> usize {
        ix * self.nth + ith
    }

    /// `(D_xx + lambda^2 D_thth - m^2) u` with periodic wrap.
    pub fn spatial_operator(&self, u: &[Complex64]) -> Vec<Complex64> {
        let (nx, nth) = (self.nx, self.nth);
        let l2 = self.lambda * self.lambda;
        let mut out = vec![Complex64::new(0.0, 0.0); nx * nth];
        for ix in 0..nx {
            for ith in 0..nth {
                let c = u[self.idx(ix, ith)];
                let xp = u[self.idx((ix + 1) % nx, ith)];
                let xm = u[self.idx((ix + nx - 1) % nx, ith)];
                let tp = u[self.idx(ix, (ith + 1) % nth)];
                let tm = u[self.idx(ix, (ith + nth - 1) % nth)];
                out[self.idx(ix, ith)] = (xp - c * 2.0 + xm) / (self.dx * self.dx)
                    + (tp - c * 2.0 + tm) * (l2 / (self.dth * self.dth))
                    - c * (self.m * self.m);
            }
        }
        out
    }

    fn central(&self, u: &[Complex64], along_x: bool) -> Vec<Complex64> {
        let (nx, nth) = (self.nx, self.nth);
        let mut out = vec![Complex64::new(0.0, 0.0); nx * nth];
        for ix in 0..nx {
            for ith in 0..nth {
                out[self.idx(ix, ith)] = if along_x {
                    (u[self.idx((ix + 1) % nx, ith)] - u[self.idx((ix + nx - 1) % nx, ith)])
                        / (2.0 * self.dx)
                } else {
                    (u[self.idx(ix, (ith + 1) % nth)] - u[self.idx(ix, (ith + nth - 1) % nth)])
                        / (2.0 * self.dth)
                };
            }
        }
        out
    }

    pub fn advance(&mut self) {
        let a = self.spatial_operator(&self.cur);
        let dt2 = self.dt * self.dt;
        let next: Vec<Complex64> = self
            .cur
            .iter()
            .zip(&self.prev)
            .zip(&a)
            .map(|((c, p), a)| c * 2.0 - p + a * dt2)
            .collect();
        self.prev = std::mem::replace(&mut self.cur, next);
        self.step += 1;
    }

    pub fn charges(&self) -> Result<Charges> {
        noether_charges(self, &self.prev, &self.cur)
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Two-slice discrete charges for slices `n` and `n+1`, with `pi = d_t phi*`:
/// - `P0 = [|phi1 - phi0|^2/dt^2 - Re<phi1, A phi0>] dV`, `A = D_xx + lambda^2 D_thth - m^2`,
///   the discrete `pi* pi + |d_x phi|^2 + lambda^2 |d_theta phi|^2 + m^2 |phi|^2`;
/// - `P1 = 2 Re<phi1, D_x phi0>/dt dV`, the discrete `int (pi d_x phi + c.c.)`;
/// - `Ptheta = Re<phi1, D_theta phi0>/dt dV`, the discrete `(1/2) int (pi d_theta phi + c.c.)`;
/// - `Q = 2 Im<phi0, phi1>/dt dV`, the discrete `i int (pi phi - pi* phi*)`.
///
/// All four are exactly invariant under the leapfrog update.
pub fn noether_charges(lf: &Leapfrog, phi0: &[Complex64], phi1: &[Complex64]) -> Result<Charges> {
    let n = lf.nx * lf.nth;
    if phi0.len() != n || phi1.len() != n {
        return Err(Error::InvalidArgument(format!(
            "slice shapes {} and {} do not match grid size {n}",
            phi0.len(),
            phi1.len()
        )));
    }
    let dv = lf.dx * lf.dth;
    let diff: Vec<Complex64> = phi1.iter().zip(phi0).map(|(a, b)| a - b).collect();
    let kin = inner(&diff, &diff).re / (lf.dt * lf.dt);
    let pot = -inner(phi1, &lf.spatial_operator(phi0)).re;
    let p1 = 2.0 * inner(phi1, &lf.central(phi0, true)).re / lf.dt;
    let pth = inner(phi1, &lf.central(phi0, false)).re / lf.dt;
    let q = 2.0 * inner(phi0, phi1).im / lf.dt;
    Ok(Charges {
        p0: (kin + pot) * dv,
        p1: p1 * dv,
        ptheta: pth * dv,
        q: q * dv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize, h: f64) -> Grid {
        Grid {
            nt: n,
            nx: n,
            nth: n,
            dt: h,
            dx: h,
            dth: h,
            lambda: 0.8,
            m: 1.1,
        }
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_fields() {
        let g = Grid {
            m: 0.0,
            ..grid(6, 0.1)
        };
        let f = LatticeField::from_fn(g.clone(), |_, _, _| c(2.5)).unwrap();
        assert!(kg_apply(&f).max_abs() < 1e-12);
        let g = grid(6, 0.1);
        let f = LatticeField::from_fn(g.clone(), |_, _, _| c(2.0)).unwrap();
        let r = kg_apply_at(&f, 2, 2, 2).unwrap();
        assert!((r - c(-1.21 * 2.0)).norm() < 1e-12);
        assert!(matches!(kg_apply_at(&f, 0, 2, 2), Err(Error::Boundary(_))));
        assert!((f.action_density(1, 1, 1).unwrap() - 0.5 * 1.21 * 4.0).abs() < 1e-12);
        assert!(f.action_density(5, 1, 1).is_err());
        assert!(LatticeField::zeros(grid(4, 0.1)).is_err());
    }

    #[test]
    fn plane_wave_converges_second_order() {
        let (k, kappa, lam, m): (f64, f64, f64, f64) = (1.3, 0.7, 0.8, 1.1);
        let w = (k * k + lam * lam * kappa * kappa + m * m).sqrt();
        let err = |h: f64| {
            let g = Grid {
                nt: 7,
                nx: 7,
                nth: 7,
                dt: h,
                dx: h,
                dth: h,
                lambda: lam,
                m,
            };
            let f = LatticeField::from_fn(g, |t, x, th| {
                Complex64::from_polar(1.0, k * x + kappa * th - w * t)
            })
            .unwrap();
            kg_apply_at(&f, 3, 3, 3).unwrap().norm()
        };
        let e: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().map(|&h| err(h)).collect();
        for pair in e.windows(2) {
            let slope = (pair[0] / pair[1]).log2();
            assert!((slope - 2.0).abs() < 0.1, "{e:?}");
        }
    }

    #[test]
    fn symbol_matches_inverse_propagator() {
        let g = grid(8, 1e-3);
        let (w, k, kappa) = (1.7, 0.4, 0.9);
        let s = lattice_symbol(&g, c(w), k, kappa);
        let cont = w * w - k * k - g.lambda * g.lambda * kappa * kappa - g.m * g.m;
        assert!((s.re - cont).abs() < 1e-5 && s.im.abs() < 1e-12);
    }

    fn point_source(g: &Grid, it: usize) -> SourceTerm {
        let mut f = LatticeField::zeros(g.clone()).unwrap();
        let i = g.index(it, g.nx / 2, g.nth / 2);
        f.values[i] = c(1.0 / (g.dt * g.dx * g.dth));
        SourceTerm::new(f).unwrap()
    }

    #[test]
    fn greens_residual_and_causality() {
        let g = Grid {
            nt: 64,
            nx: 32,
            nth: 16,
            dt: 0.05,
            dx: 0.1,
            dth: 0.1,
            lambda: 0.8,
            m: 1.0,
        };
        let src = point_source(&g, 20);
        let sol = greens_solve(&src, None).unwrap();
        let res = kg_apply(&sol.field);
        let mut worst = 0.0f64;
        for it in 1..g.nt - 1 {
            for ix in 1..g.nx - 1 {
                for ith in 1..g.nth - 1 {
                    let i = g.index(it, ix, ith);
                    worst = worst.max((res.values[i] - src.field.values[i]).norm());
                }
            }
        }
        assert!(worst / src.field.max_abs() < 1e-6, "{worst}");
        let early = (0..10 * g.nx * g.nth)
            .map(|i| sol.field.values[i].norm())
            .fold(0.0, f64::max);
        assert!(early < 1e-3 * sol.field.max_abs(), "{early}");
        let zero = SourceTerm::new(LatticeField::zeros(g).unwrap()).unwrap();
        assert_eq!(greens_solve(&zero, None).unwrap().field.max_abs(), 0.0);
    }

    #[test]
    fn source_must_be_compact() {
        let g = grid(6, 0.1);
        let mut f = LatticeField::zeros(g.clone()).unwrap();
        f.values[0] = c(1.0);
        assert!(SourceTerm::new(f).is_err());
    }

    #[test]
    fn leapfrog_charges_conserved() {
        let mut lf =
            Leapfrog::plane_wave(16, 12, 0.2, 0.25, 0.5, 0.8, 1.0, c(0.7), (2, 1), 1.0).unwrap();
        let mut extra = lf.cur.clone();
        for (i, v) in extra.iter_mut().enumerate() {
            *v += Complex64::new(0.05 * (i as f64 * 0.37).sin(), 0.0);
        }
        lf.cur = extra;
        let c0 = lf.charges().unwrap();
        for _ in 0..1000 {
            lf.advance();
        }
        let c1 = lf.charges().unwrap();
        for (a, b) in [
            (c0.p0, c1.p0),
            (c0.p1, c1.p1),
            (c0.ptheta, c1.ptheta),
            (c0.q, c1.q),
        ] {
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} {b}");
        }
        assert!(c0.p0 > 0.0);
    }

    #[test]
    fn plane_wave_charge_sign() {
        let amp = 0.6;
        for sign in [1.0, -1.0] {
            let lf = Leapfrog::plane_wave(32, 32, 0.1, 0.1, 0.2, 0.8, 1.0, c(amp), (1, 1), sign)
                .unwrap();
            let (k, kappa) = Leapfrog::wavenumbers(32, 32, 0.1, 0.1, (1, 1));
            let w = sign * (k * k + 0.64 * kappa * kappa + 1.0).sqrt();
            let vol = 32.0 * 0.1 * 32.0 * 0.1;
            let q = lf.charges().unwrap().q;
            let expect = -2.0 * w * amp * amp * vol;
            assert!((q - expect).abs() < 1e-2 * expect.abs(), "{q} {expect}");
        }
    }

    #[test]
    fn measured_frequency_matches_dispersion() {
        let err = |h: f64| {
            let n = (3.2 / h).round() as usize;
            let mut lf =
                Leapfrog::plane_wave(n, n, h, h, 0.5, 0.8, 1.0, c(1.0), (1, 1), 1.0).unwrap();
            let (k, kappa) = Leapfrog::wavenumbers(n, n, h, h, (1, 1));
            let w = (k * k + 0.64 * kappa * kappa + 1.0).sqrt();
            let steps = 50;
            let mut phase = 0.0;
            for _ in 0..steps {
                let before = lf.cur[0];
                lf.advance();
                phase -= (lf.cur[0] / before).arg();
            }
            let measured = phase / (steps as f64 * lf.dt);
            (measured - w).abs()
        };
        let (e1, e2) = (err(0.2), err(0.1));
        assert!(e1 / e2 > 3.0, "{e1} {e2}");
    }

    #[test]
    fn mismatched_slices_rejected() {
        let lf = Leapfrog::plane_wave(8, 8, 0.2, 0.2, 0.5, 1.0, 1.0, c(1.0), (1, 0), 1.0).unwrap();
        assert!(noether_charges(&lf, &lf.prev[..10], &lf.cur).is_err());
        assert!(Leapfrog::new(
            8,
            8,
            0.2,
            0.2,
            1.0,
            1.0,
            1.0,
            lf.prev.clone(),
            lf.cur.clone()
        )
        .is_err());
    }

    #[test]
    fn real_static_field_has_no_charge() {
        let v: Vec<Complex64> = (0..64).map(|i| c((i as f64 * 0.3).cos())).collect();
        let lf = Leapfrog::new(8, 8, 0.2, 0.2, 0.05, 1.0, 1.0, v.clone(), v).unwrap();
        assert_eq!(lf.charges().unwrap().q, 0.0);
    }

    #[test]
    fn action_gradient_is_minus_kg() {
        let g = Grid {
            nt: 6,
            nx: 6,
            nth: 6,
            dt: 0.1,
            dx: 0.12,
            dth: 0.15,
            lambda: 0.9,
            m: 1.3,
        };
        let f =
            LatticeField::from_fn(g.clone(), |t, x, th| c((t + 2.0 * x).sin() + th * th)).unwrap();
        let dv = g.dt * g.dx * g.dth;
        for &(it, ix, ith) in &[(2, 2, 2), (3, 1, 4), (1, 4, 3)] {
            let i = g.index(it, ix, ith);
            let h = 1e-4;
            let mut fp = f.clone();
            fp.values[i] += c(h);
            let mut fm = f.clone();
            fm.values[i] -= c(h);
            let grad = (fp.action() - fm.action()) / (2.0 * h);
            let kg = kg_apply_at(&f, it, ix, ith).unwrap().re;
            assert!((grad + kg * dv).abs() < 1e-8, "{grad} {}", -kg * dv);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn greens_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, t1 in 3usize..8, t2 in 3usize..8) {
            let g = Grid { nt: 12, nx: 8, nth: 8, dt: 0.1, dx: 0.2, dth: 0.2, lambda: 0.5, m: 1.0 };
            let s1 = point_source(&g, t1);
            let mut f2 = LatticeField::zeros(g.clone()).unwrap();
            f2.values[g.index(t2, 3, 5)] = Complex64::new(0.0, 1.0);
            let s2 = SourceTerm::new(f2).unwrap();
            let mut combo = s1.field.clone();
            for (v, w) in combo.values.iter_mut().zip(&s2.field.values) {
                *v = *v * a + w * b;
            }
            let lhs = greens_solve(&SourceTerm::new(combo).unwrap(), Some(1.0)).unwrap().field;
            let r1 = greens_solve(&s1, Some(1.0)).unwrap().field;
            let r2 = greens_solve(&s2, Some(1.0)).unwrap().field;
            let scale = lhs.max_abs().max(1.0);
            for i in 0..lhs.values.len() {
                prop_assert!((lhs.values[i] - (r1.values[i] * a + r2.values[i] * b)).norm() < 1e-12 * scale);
            }
        }

        #[test]
        fn energy_nonnegative(seed in prop::collection::vec(-1.0f64..1.0, 128)) {
            let prev: Vec<Complex64> = seed[..64].iter().map(|&v| c(v)).collect();
            let cur: Vec<Complex64> = seed[64..].iter().zip(&prev).map(|(&v, p)| p + c(0.1 * v)).collect();
            let lf = Leapfrog::new(8, 8, 0.2, 0.2, dt_for_cfl(0.5, 0.2, 0.2, 1.0, 1.0), 1.0, 1.0, prev, cur).unwrap();
            prop_assert!(lf.charges().unwrap().p0 >= 0.0);
        }
    }
}
