//! Matrix representations of the extended Poincare group acting on
//! `(X^mu, theta^{mu nu}, 1)`, its Lie algebra and Casimir invariants.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};
use crate::scalar::rat;

/// Canonical ordering of antisymmetric index pairs.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot of the pair `(m, n)` and the sign picked up by reordering it.
pub fn pair_slot(m: usize, n: usize) -> Option<(usize, bool)> {
    let (lo, hi, flip) = if m < n { (m, n, false) } else { (n, m, true) };
    PAIRS.iter().position(|&p| p == (lo, hi)).map(|k| (k, flip))
}

/// Independent components of an antisymmetric 4x4 matrix.
pub fn antisym_to_vec<T: Field>(m: &Mat<T>) -> Vec<T> {
    PAIRS.iter().map(|&(a, b)| m[(a, b)].clone()).collect()
}

pub fn vec_to_antisym<T: Field>(v: &[T]) -> Mat<T> {
    let mut m = Mat::zeros(4, 4);
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        m[(a, b)] = v[k].clone();
        m[(b, a)] = -v[k].clone();
    }
    m
}

fn eta<T: Field>(m: usize) -> T {
    if m == 0 {
        -T::one()
    } else {
        T::one()
    }
}

pub fn metric<T: Field>() -> Mat<T> {
    Mat::from_fn(4, 4, |i, j| if i == j { eta(i) } else { T::zero() })
}

fn half<T: Field>() -> T {
    T::one() / (T::one() + T::one())
}

/// Max entry of `Lambda^T eta Lambda - eta`.
pub fn lorentz_defect<T: Field>(l: &Mat<T>) -> f64 {
    let e = metric::<T>();
    (&(&l.transpose() * &(&e * l)) - &e).max_abs()
}

/// Finite element `(Lambda, A, B)`: Lorentz matrix, x-translation and
/// antisymmetric theta-translation.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<T> {
    pub lambda: Mat<T>,
    pub a: Vec<T>,
    pub b: Mat<T>,
}

impl<T: Field> GroupElement<T> {
    pub fn new(lambda: Mat<T>, a: Vec<T>, b: Mat<T>) -> Result<Self> {
        if lambda.rows() != 4
            || lambda.cols() != 4
            || a.len() != 4
            || b.rows() != 4
            || b.cols() != 4
        {
            return Err(Error::InvalidArgument(
                "group element needs 4x4 Lambda, 4-vector A, 4x4 B".into(),
            ));
        }
        let scale = lambda.max_abs().max(1.0);
        if lorentz_defect(&lambda) > 1e-12 * scale * scale {
            return Err(Error::InvalidArgument(
                "Lambda does not preserve the metric".into(),
            ));
        }
        if !b.is_antisymmetric() && (&b + &b.transpose()).max_abs() > 1e-12 * b.max_abs().max(1.0) {
            return Err(Error::InvalidArgument("B must be antisymmetric".into()));
        }
        Ok(GroupElement { lambda, a, b })
    }

    pub fn identity() -> Self {
        GroupElement {
            lambda: Mat::identity(4),
            a: vec![T::zero(); 4],
            b: Mat::zeros(4, 4),
        }
    }

    /// `g1 . g2`, so that `d5(g1) d5(g2) = d5(g1 . g2)`.
    pub fn compose(&self, g2: &Self) -> Self {
        let lambda = &self.lambda * &g2.lambda;
        let la = self.lambda.mul_vec(&g2.a);
        let a = la
            .into_iter()
            .zip(&self.a)
            .map(|(x, y)| x + y.clone())
            .collect();
        let bv = d2(&self.lambda).mul_vec(&antisym_to_vec(&g2.b));
        let b1 = antisym_to_vec(&self.b);
        let b = vec_to_antisym(
            &bv.into_iter()
                .zip(b1)
                .map(|(x, y)| x + y)
                .collect::<Vec<_>>(),
        );
        GroupElement { lambda, a, b }
    }
}

pub fn d1<T: Field>(l: &Mat<T>) -> Mat<T> {
    l.clone()
}

/// Antisymmetric product representation on the six pair slots.
pub fn d2<T: Field>(l: &Mat<T>) -> Mat<T> {
    Mat::from_fn(6, 6, |r, c| {
        let (m, n) = PAIRS[r];
        let (a, b) = PAIRS[c];
        l[(m, a)].clone() * l[(n, b)].clone() - l[(m, b)].clone() * l[(n, a)].clone()
    })
}

pub fn d3<T: Field>(g: &GroupElement<T>) -> Mat<T> {
    Mat::from_fn(5, 5, |i, j| match (i < 4, j < 4) {
        (true, true) => g.lambda[(i, j)].clone(),
        (true, false) => g.a[i].clone(),
        (false, false) => T::one(),
        (false, true) => T::zero(),
    })
}

pub fn d4<T: Field>(g: &GroupElement<T>) -> Mat<T> {
    let l2 = d2(&g.lambda);
    let b = antisym_to_vec(&g.b);
    Mat::from_fn(7, 7, |i, j| match (i < 6, j < 6) {
        (true, true) => l2[(i, j)].clone(),
        (true, false) => b[i].clone(),
        (false, false) => T::one(),
        (false, true) => T::zero(),
    })
}

pub fn d5<T: Field>(g: &GroupElement<T>) -> Mat<T> {
    let l2 = d2(&g.lambda);
    let b = antisym_to_vec(&g.b);
    let mut m = Mat::zeros(11, 11);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = g.lambda[(i, j)].clone();
        }
        m[(i, 10)] = g.a[i].clone();
    }
    for i in 0..6 {
        for j in 0..6 {
            m[(4 + i, 4 + j)] = l2[(i, j)].clone();
        }
        m[(4 + i, 10)] = b[i].clone();
    }
    m[(10, 10)] = T::one();
    m
}

/// Infinitesimal element with `omega^{mu nu}` (upper indices), `a^mu`, `b^{mu nu}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfinitesimalElement<T> {
    pub omega: Mat<T>,
    pub a: Vec<T>,
    pub b: Mat<T>,
}

impl<T: Field> InfinitesimalElement<T> {
    pub fn new(omega: Mat<T>, a: Vec<T>, b: Mat<T>) -> Result<Self> {
        if omega.rows() != 4 || omega.cols() != 4 || a.len() != 4 || b.rows() != 4 || b.cols() != 4
        {
            return Err(Error::InvalidArgument(
                "infinitesimal element needs 4x4 omega, 4-vector a, 4x4 b".into(),
            ));
        }
        if !omega.is_antisymmetric() || !b.is_antisymmetric() {
            return Err(Error::InvalidArgument(
                "omega and b must be antisymmetric".into(),
            ));
        }
        Ok(InfinitesimalElement { omega, a, b })
    }

    pub fn zero() -> Self {
        InfinitesimalElement {
            omega: Mat::zeros(4, 4),
            a: vec![T::zero(); 4],
            b: Mat::zeros(4, 4),
        }
    }

    /// `omega^mu_nu = omega^{mu rho} eta_{rho nu}`.
    pub fn omega_mixed(&self) -> Mat<T> {
        &self.omega * &metric::<T>()
    }

    fn from_mixed(w: Mat<T>, a: Vec<T>, b: Mat<T>) -> Self {
        InfinitesimalElement {
            omega: &w * &metric::<T>(),
            a,
            b,
        }
    }
}

/// Parameter composition of two infinitesimal transformations.
pub fn compose_infinitesimal<T: Field>(
    e1: &InfinitesimalElement<T>,
    e2: &InfinitesimalElement<T>,
) -> InfinitesimalElement<T> {
    let w1 = e1.omega_mixed();
    let w2 = e2.omega_mixed();
    let w3 = w1.commutator(&w2);
    let a3: Vec<T> = w1
        .mul_vec(&e2.a)
        .into_iter()
        .zip(w2.mul_vec(&e1.a))
        .map(|(x, y)| x - y)
        .collect();
    let t1 = &w1 * &e2.b;
    let t2 = &w2 * &e1.b;
    let b3 = Mat::from_fn(4, 4, |m, n| {
        t1[(m, n)].clone() - t2[(m, n)].clone() - t1[(n, m)].clone() + t2[(n, m)].clone()
    });
    InfinitesimalElement::from_mixed(w3, a3, b3)
}

/// Derivative of [`d2`] at the identity along `w` (mixed indices).
pub fn d2_generator<T: Field>(w: &Mat<T>) -> Mat<T> {
    let d = |i: usize, j: usize| if i == j { T::one() } else { T::zero() };
    Mat::from_fn(6, 6, |r, c| {
        let (m, n) = PAIRS[r];
        let (a, b) = PAIRS[c];
        w[(m, a)].clone() * d(n, b) + d(m, a) * w[(n, b)].clone()
            - w[(m, b)].clone() * d(n, a)
            - d(m, b) * w[(n, a)].clone()
    })
}

/// The 11x11 Lie-algebra matrix of an infinitesimal element.
pub fn d5_generator<T: Field>(e: &InfinitesimalElement<T>) -> Mat<T> {
    let w = e.omega_mixed();
    let w2 = d2_generator(&w);
    let b = antisym_to_vec(&e.b);
    let mut m = Mat::zeros(11, 11);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = w[(i, j)].clone();
        }
        m[(i, 10)] = e.a[i].clone();
    }
    for i in 0..6 {
        for j in 0..6 {
            m[(4 + i, 4 + j)] = w2[(i, j)].clone();
        }
        m[(4 + i, 10)] = b[i].clone();
    }
    m
}

/// `eps_{mnrs}` with `eps_{0123} = +1`.
fn levi<T: Field>(ix: [usize; 4]) -> T {
    let s = crate::dfra::levi_civita(ix);
    if s > 0.0 {
        T::one()
    } else if s < 0.0 {
        -T::one()
    } else {
        T::zero()
    }
}

fn lower<T: Field>(m: &Mat<T>) -> Mat<T> {
    let e = metric::<T>();
    &(&e * m) * &e
}

/// The four invariants `(C1, C2, C3, C4)` on momenta `k^mu`, `K^{mu nu}` and
/// angular momenta `M1^{mu nu}`, `M2^{mu nu}` (all upper indices):
/// `C1 = k.k`, `C2 = s.s` with `s_mu = (1/2) eps_{mnrs} M1^{nr} k^s`,
/// `C3 = (1/2) K_{mn} K^{mn}`, `C4 = (1/2) M2^{mn} K_{mn}`.
pub fn casimirs<T: Field>(k: &[T], big_k: &Mat<T>, m1: &Mat<T>, m2: &Mat<T>) -> [T; 4] {
    let e = |m| eta::<T>(m);
    let c1 = (0..4).fold(T::zero(), |acc, m| acc + e(m) * k[m].clone() * k[m].clone());
    let mut s = vec![T::zero(); 4];
    for (mu, sm) in s.iter_mut().enumerate() {
        for n in 0..4 {
            for r in 0..4 {
                for q in 0..4 {
                    let l: T = levi([mu, n, r, q]);
                    if !l.is_zero() {
                        *sm = sm.clone() + l * m1[(n, r)].clone() * k[q].clone();
                    }
                }
            }
        }
        *sm = sm.clone() * half::<T>();
    }
    let c2 = (0..4).fold(T::zero(), |acc, m| acc + e(m) * s[m].clone() * s[m].clone());
    let kl = lower(big_k);
    let mut c3 = T::zero();
    let mut c4 = T::zero();
    for m in 0..4 {
        for n in 0..4 {
            c3 = c3 + kl[(m, n)].clone() * big_k[(m, n)].clone();
            c4 = c4 + kl[(m, n)].clone() * m2[(m, n)].clone();
        }
    }
    [c1, c2, c3 * half::<T>(), c4 * half::<T>()]
}

/// Orbital `M1^{mn} = X^m k^n - X^n k^m`.
pub fn orbital_m1<T: Field>(x: &[T], k: &[T]) -> Mat<T> {
    Mat::from_fn(4, 4, |m, n| {
        x[m].clone() * k[n].clone() - x[n].clone() * k[m].clone()
    })
}

/// Orbital `M2^{mn} = -theta^{ms} K_s^n + theta^{ns} K_s^m`.
pub fn orbital_m2<T: Field>(theta: &Mat<T>, big_k: &Mat<T>) -> Mat<T> {
    // K_s^n = eta_{sa} K^{an}
    let mixed = &metric::<T>() * big_k;
    let t = theta * &mixed;
    Mat::from_fn(4, 4, |m, n| t[(n, m)].clone() - t[(m, n)].clone())
}

/// Applies `Lambda` to an upper-index antisymmetric tensor.
pub fn transform_tensor<T: Field>(l: &Mat<T>, t: &Mat<T>) -> Mat<T> {
    &(l * t) * &l.transpose()
}

/// Exact boost along spatial axis `axis` with rapidity parameter `t`,
/// `cosh = (1+t^2)/(1-t^2)`, `sinh = 2t/(1-t^2)`, `|t| < 1`.
pub fn rational_boost(axis: usize, t: &BigRational) -> Result<Mat<BigRational>> {
    let one = BigRational::one();
    if !(1..=3).contains(&axis) || t * t >= one {
        return Err(Error::InvalidArgument(
            "boost needs axis 1..=3 and |t| < 1".into(),
        ));
    }
    let den = &one - t * t;
    let ch = (&one + t * t) / &den;
    let sh = (t + t) / &den;
    let mut m = Mat::identity(4);
    m[(0, 0)] = ch.clone();
    m[(axis, axis)] = ch;
    m[(0, axis)] = sh.clone();
    m[(axis, 0)] = sh;
    Ok(m)
}

/// Exact rotation in the spatial plane `(i, j)` with `cos = (1-t^2)/(1+t^2)`,
/// `sin = 2t/(1+t^2)`.
pub fn rational_rotation(i: usize, j: usize, t: &BigRational) -> Result<Mat<BigRational>> {
    if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(Error::InvalidArgument(
            "rotation needs two distinct spatial axes".into(),
        ));
    }
    let one = BigRational::one();
    let den = &one + t * t;
    let c = (&one - t * t) / &den;
    let s = (t + t) / &den;
    let mut m = Mat::identity(4);
    m[(i, i)] = c.clone();
    m[(j, j)] = c;
    m[(i, j)] = -s.clone();
    m[(j, i)] = s;
    Ok(m)
}

fn small_rat<R: Rng>(rng: &mut R, bound: i64, den: i64) -> BigRational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=den))
}

/// Random exact element: a product of three rational boosts and rotations
/// plus rational translations.
pub fn random_rational_element<R: Rng>(rng: &mut R) -> GroupElement<BigRational> {
    let mut l = Mat::identity(4);
    for _ in 0..3 {
        let t = rat(rng.gen_range(-4..=4), rng.gen_range(5..=9));
        let m = if rng.gen_bool(0.5) {
            rational_boost(rng.gen_range(1..=3), &t)
        } else {
            let i = rng.gen_range(1..=3);
            let j = 1 + (i % 3);
            rational_rotation(i, j, &t)
        }
        .expect("parameters are in range");
        l = &l * &m;
    }
    let a = (0..4).map(|_| small_rat(rng, 5, 4)).collect();
    let b = vec_to_antisym(&(0..6).map(|_| small_rat(rng, 5, 4)).collect::<Vec<_>>());
    GroupElement { lambda: l, a, b }
}

/// Random exact infinitesimal element with small rational entries.
pub fn random_infinitesimal<R: Rng>(rng: &mut R) -> InfinitesimalElement<BigRational> {
    let w = vec_to_antisym(&(0..6).map(|_| small_rat(rng, 4, 3)).collect::<Vec<_>>());
    let a = (0..4).map(|_| small_rat(rng, 4, 3)).collect();
    let b = vec_to_antisym(&(0..6).map(|_| small_rat(rng, 4, 3)).collect::<Vec<_>>());
    InfinitesimalElement { omega: w, a, b }
}

/// Random proper orthochronous Lorentz matrix in doubles.
pub fn random_float_lorentz<R: Rng>(rng: &mut R) -> Mat<f64> {
    let mut l = Mat::identity(4);
    for _ in 0..4 {
        let mut m: Mat<f64> = Mat::identity(4);
        if rng.gen_bool(0.5) {
            let ax = rng.gen_range(1..=3);
            let r: f64 = rng.gen_range(-1.5..1.5);
            m[(0, 0)] = r.cosh();
            m[(ax, ax)] = r.cosh();
            m[(0, ax)] = r.sinh();
            m[(ax, 0)] = r.sinh();
        } else {
            let i = rng.gen_range(1..=3);
            let j = 1 + (i % 3);
            let a: f64 = rng.gen_range(-3.0..3.0);
            m[(i, i)] = a.cos();
            m[(j, j)] = a.cos();
            m[(i, j)] = -a.sin();
            m[(j, i)] = a.sin();
        }
        l = &l * &m;
    }
    l
}

pub fn to_f64_element(g: &GroupElement<BigRational>) -> GroupElement<f64> {
    let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
    GroupElement {
        lambda: g.lambda.map(f),
        a: g.a.iter().map(f).collect(),
        b: g.b.map(f),
    }
}

/// A point of the extended space: `x^mu` followed by the six `theta` slots.
pub type Point = [f64; 10];

/// First-order variation of a scalar field,
/// `delta phi = -(a + omega x)^mu d_mu phi - (1/2)(b + 2 omega theta)^{mu nu} d_{mu nu} phi`,
/// with derivatives taken by central differences of step `h`. The sum over
/// `mu nu` runs over all ordered pairs with `d_{nu mu} = -d_{mu nu}`.
pub fn scalar_field_transform<'a, F>(
    e: &'a InfinitesimalElement<f64>,
    phi: F,
    h: f64,
) -> Result<impl Fn(&Point) -> f64 + 'a>
where
    F: Fn(&Point) -> f64 + 'a,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument(
            "stencil step must be positive".into(),
        ));
    }
    let w = e.omega_mixed();
    Ok(move |y: &Point| {
        let d = |k: usize| {
            let mut p = *y;
            let mut q = *y;
            p[k] += h;
            q[k] -= h;
            (phi(&p) - phi(&q)) / (2.0 * h)
        };
        let theta = vec_to_antisym(&y[4..].to_vec());
        let mut out = 0.0;
        for m in 0..4 {
            let v = e.a[m] + (0..4).map(|n| w[(m, n)] * y[n]).sum::<f64>();
            out -= v * d(m);
        }
        // c^{mn} = b^{mn} + 2 omega^m_r theta^{rn}; antisymmetrize onto slots
        let wt = &w * &theta;
        for (k, &(m, n)) in PAIRS.iter().enumerate() {
            let c_mn = e.b[(m, n)] + 2.0 * wt[(m, n)];
            let c_nm = e.b[(n, m)] + 2.0 * wt[(n, m)];
            out -= 0.5 * (c_mn - c_nm) * d(4 + k);
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_round_trip() {
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            assert_eq!(pair_slot(a, b), Some((k, false)));
            assert_eq!(pair_slot(b, a), Some((k, true)));
        }
        assert_eq!(pair_slot(2, 2), None);
        let v: Vec<f64> = (1..=6).map(f64::from).collect();
        assert_eq!(antisym_to_vec(&vec_to_antisym(&v)), v);
    }

    #[test]
    fn identity_images() {
        let g = GroupElement::<BigRational>::identity();
        assert_eq!(d2(&g.lambda), Mat::identity(6));
        assert_eq!(d5(&g), Mat::identity(11));
    }

    #[test]
    fn d2_matches_full_tensor_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_rational_element(&mut rng);
        let th = vec_to_antisym(&(0..6).map(|k| rat(k as i64 - 2, 3)).collect::<Vec<_>>());
        let full = transform_tensor(&g.lambda, &th);
        let via = d2(&g.lambda).mul_vec(&antisym_to_vec(&th));
        assert_eq!(antisym_to_vec(&full), via);
        assert!(vec_to_antisym(&via).is_antisymmetric());
    }

    #[test]
    fn homomorphism_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let g1 = random_rational_element(&mut rng);
            let g2 = random_rational_element(&mut rng);
            assert_eq!(lorentz_defect(&g1.lambda), 0.0);
            let g3 = g1.compose(&g2);
            assert_eq!(&d1(&g1.lambda) * &d1(&g2.lambda), d1(&g3.lambda));
            assert_eq!(&d2(&g1.lambda) * &d2(&g2.lambda), d2(&g3.lambda));
            assert_eq!(&d3(&g1) * &d3(&g2), d3(&g3));
            assert_eq!(&d4(&g1) * &d4(&g2), d4(&g3));
            assert_eq!(&d5(&g1) * &d5(&g2), d5(&g3));
        }
    }

    #[test]
    fn rejects_non_lorentz() {
        let mut l: Mat<f64> = Mat::identity(4);
        l[(0, 1)] = 0.5;
        assert!(GroupElement::new(l, vec![0.0; 4], Mat::zeros(4, 4)).is_err());
        assert!(rational_boost(1, &rat(1, 1)).is_err());
    }

    fn rand_inf(rng: &mut ChaCha8Rng) -> InfinitesimalElement<BigRational> {
        let e = random_infinitesimal(rng);
        InfinitesimalElement::new(e.omega, e.a, e.b).unwrap()
    }

    #[test]
    fn infinitesimal_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let e1 = rand_inf(&mut rng);
            let e2 = rand_inf(&mut rng);
            let e3 = compose_infinitesimal(&e1, &e2);
            assert!(e3.omega.is_antisymmetric() && e3.b.is_antisymmetric());
            let (g1, g2) = (d5_generator(&e1), d5_generator(&e2));
            assert_eq!(d5_generator(&e3), g1.commutator(&g2));
            // [delta2, delta1] y = delta1(delta2 y) - delta2(delta1 y) on a vector
            let y: Vec<BigRational> = (0..11)
                .map(|k| {
                    if k == 10 {
                        BigRational::one()
                    } else {
                        small_rat(&mut rng, 5, 2)
                    }
                })
                .collect();
            let lhs: Vec<_> = g1
                .mul_vec(&g2.mul_vec(&y))
                .into_iter()
                .zip(g2.mul_vec(&g1.mul_vec(&y)))
                .map(|(p, q)| p - q)
                .collect();
            assert_eq!(lhs, d5_generator(&e3).mul_vec(&y));
        }
        let e = rand_inf(&mut rng);
        let z = InfinitesimalElement::zero();
        assert_eq!(compose_infinitesimal(&e, &z), z);
        let t1 = InfinitesimalElement {
            omega: Mat::zeros(4, 4),
            ..rand_inf(&mut rng)
        };
        let t2 = InfinitesimalElement {
            omega: Mat::zeros(4, 4),
            ..rand_inf(&mut rng)
        };
        assert_eq!(compose_infinitesimal(&t1, &t2), z);
    }

    #[test]
    fn first_order_d2_is_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = rand_inf(&mut rng);
        let w = e.omega_mixed();
        let quad = |eps: BigRational| {
            let l = &Mat::identity(4) + &w.scale(&eps);
            let r = &(&d2(&l) - &Mat::identity(6)) - &d2_generator(&w).scale(&eps);
            r.scale(&(BigRational::one() / (&eps * &eps)))
        };
        // the remainder is exactly quadratic in eps
        assert_eq!(quad(rat(1, 7)), quad(rat(-3, 11)));
        // generator action reproduces delta theta = w theta + theta w^T + b
        let th = vec_to_antisym(&(0..6).map(|k| rat(k as i64 + 1, 5)).collect::<Vec<_>>());
        let lhs = d2_generator(&w).mul_vec(&antisym_to_vec(&th));
        let wt = &w * &th;
        let expect: Vec<_> = PAIRS
            .iter()
            .map(|&(m, n)| wt[(m, n)].clone() - wt[(n, m)].clone())
            .collect();
        assert_eq!(lhs, expect);
    }

    #[test]
    fn casimir_values_and_invariance() {
        let m = 1.7;
        let c = casimirs(
            &[m, 0.0, 0.0, 0.0],
            &Mat::zeros(4, 4),
            &Mat::zeros(4, 4),
            &Mat::zeros(4, 4),
        );
        assert!((c[0] + m * m).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let k: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let kk = vec_to_antisym(&(0..6).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>());
            let m1 = vec_to_antisym(&(0..6).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>());
            let m2 = vec_to_antisym(&(0..6).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>());
            let l = random_float_lorentz(&mut rng);
            let before = casimirs(&k, &kk, &m1, &m2);
            let after = casimirs(
                &l.mul_vec(&k),
                &transform_tensor(&l, &kk),
                &transform_tensor(&l, &m1),
                &transform_tensor(&l, &m2),
            );
            for i in 0..4 {
                let scale = 1.0 + before[i].abs() + l.max_abs().powi(4);
                assert!(
                    (before[i] - after[i]).abs() < 1e-10 * scale,
                    "C{} {} {}",
                    i + 1,
                    before[i],
                    after[i]
                );
            }
        }
    }

    #[test]
    fn orbital_spin_parts_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x: Vec<BigRational> = (0..4).map(|_| small_rat(&mut rng, 5, 3)).collect();
        let k: Vec<BigRational> = (0..4).map(|_| small_rat(&mut rng, 5, 3)).collect();
        let th = vec_to_antisym(
            &(0..6)
                .map(|_| small_rat(&mut rng, 5, 3))
                .collect::<Vec<_>>(),
        );
        let kk = vec_to_antisym(
            &(0..6)
                .map(|_| small_rat(&mut rng, 5, 3))
                .collect::<Vec<_>>(),
        );
        let m1 = orbital_m1(&x, &k);
        let m2 = orbital_m2(&th, &kk);
        assert!(m1.is_antisymmetric() && m2.is_antisymmetric());
        let c = casimirs(&k, &kk, &m1, &m2);
        assert!(c[1].is_zero());
        assert!(c[3].is_zero());
    }

    #[test]
    fn exact_invariance_c1_c3() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = random_rational_element(&mut rng);
        let k: Vec<BigRational> = (0..4).map(|_| small_rat(&mut rng, 5, 3)).collect();
        let kk = vec_to_antisym(
            &(0..6)
                .map(|_| small_rat(&mut rng, 5, 3))
                .collect::<Vec<_>>(),
        );
        let z = Mat::zeros(4, 4);
        let c0 = casimirs(&k, &kk, &z, &z);
        let c1 = casimirs(
            &g.lambda.mul_vec(&k),
            &vec_to_antisym(&d2(&g.lambda).mul_vec(&antisym_to_vec(&kk))),
            &z,
            &z,
        );
        assert_eq!(c0[0], c1[0]);
        assert_eq!(c0[2], c1[2]);
    }

    #[test]
    fn scalar_transform_examples() {
        let trans =
            InfinitesimalElement::new(Mat::zeros(4, 4), vec![0.0, 1.0, 0.0, 0.0], Mat::zeros(4, 4))
                .unwrap();
        let f = scalar_field_transform(&trans, |_: &Point| 3.0, 1e-3).unwrap();
        assert_eq!(f(&[0.5; 10]), 0.0);
        let f = scalar_field_transform(&trans, |y: &Point| y[1], 1e-3).unwrap();
        assert!((f(&[0.2; 10]) + 1.0).abs() < 1e-12);
        assert!(scalar_field_transform(&trans, |_: &Point| 0.0, 0.0).is_err());
    }

    fn smooth(y: &Point) -> f64 {
        let mut s = 0.0;
        for (k, v) in y.iter().enumerate() {
            s += (0.3 + 0.1 * k as f64) * v;
        }
        s.sin() + 0.2 * (y[0] * y[5] - y[2] * y[9]) + 0.1 * y[1] * y[1] * y[4]
    }

    #[test]
    fn field_commutator_closes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let to_f = |e: InfinitesimalElement<BigRational>| InfinitesimalElement {
            omega: e.omega.map(|x| x.to_f64().unwrap()),
            a: e.a.iter().map(|x| x.to_f64().unwrap()).collect(),
            b: e.b.map(|x| x.to_f64().unwrap()),
        };
        let e1 = to_f(rand_inf(&mut rng));
        let e2 = to_f(rand_inf(&mut rng));
        let e3 = compose_infinitesimal(&e1, &e2);
        let y: Point = std::array::from_fn(|k| 0.1 * k as f64 - 0.3);
        let comm = |h: f64| {
            let t2 = scalar_field_transform(&e2, smooth, h).unwrap();
            let t12 = scalar_field_transform(&e1, t2, h).unwrap();
            let t1 = scalar_field_transform(&e1, smooth, h).unwrap();
            let t21 = scalar_field_transform(&e2, t1, h).unwrap();
            t12(&y) - t21(&y)
        };
        let h = 1e-2;
        let rich = (4.0 * comm(h / 2.0) - comm(h)) / 3.0;
        let exact = scalar_field_transform(&e3, smooth, h / 4.0).unwrap()(&y);
        assert!(
            (rich - exact).abs() < 1e-5 * (1.0 + exact.abs()),
            "{rich} {exact}"
        );
    }
}
