//! Gauss-Hermite rules and adaptive Gauss-Kronrod integration.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Nodes and weights for `int exp(-u^2) f(u) du` via Golub-Welsch.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > 200 {
        return Err(Error::InvalidArgument(format!(
            "Gauss-Hermite order {n} outside 1..=200"
        )));
    }
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let x = h * XGK[k];
        let s = f(c - x) + f(c + x);
        kron += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) on `[a, b]`. Returns the integral and an
/// error estimate.
pub fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let mut segs = vec![{
        let (v, e) = gk15(f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..2000 {
        let total_err: f64 = segs.iter().map(|s| s.3).sum();
        if total_err <= tol {
            let total: f64 = segs.iter().map(|s| s.2).sum();
            return Ok((total, total_err));
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (l, r, _, _) = segs.swap_remove(idx);
        let m = 0.5 * (l + r);
        let (v1, e1) = gk15(f, l, m);
        let (v2, e2) = gk15(f, m, r);
        segs.push((l, m, v1, e1));
        segs.push((m, r, v2, e2));
    }
    Err(Error::Numerical(
        "adaptive quadrature did not converge".into(),
    ))
}

/// Nested adaptive integration over the cube `[-half, half]^dims`.
pub fn integrate_cube(
    f: &dyn Fn(&[f64]) -> f64,
    dims: usize,
    half: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    fn rec(
        f: &dyn Fn(&[f64]) -> f64,
        point: &mut Vec<f64>,
        dims: usize,
        half: f64,
        tol: f64,
    ) -> Result<(f64, f64)> {
        if point.len() == dims {
            return Ok((f(point), 0.0));
        }
        let mut inner_err = 0.0f64;
        let mut failure = None;
        let mut g = |x: f64| {
            point.push(x);
            let r = rec(f, point, dims, half, tol);
            point.pop();
            match r {
                Ok((v, e)) => {
                    inner_err = inner_err.max(e);
                    v
                }
                Err(err) => {
                    failure = Some(err);
                    0.0
                }
            }
        };
        let (v, e) = integrate(&mut g, -half, half, tol)?;
        if let Some(err) = failure {
            return Err(err);
        }
        Ok((v, e + 2.0 * half * inner_err))
    }
    if dims == 0 {
        return Ok((f(&[]), 0.0));
    }
    rec(f, &mut Vec::with_capacity(dims), dims, half, tol)
}
