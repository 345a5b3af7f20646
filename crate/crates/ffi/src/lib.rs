//! C ABI over `dfra-core`.
//!
//! Every fallible function returns a [`DfraStatus`]; on failure a message is
//! available from [`dfra_last_error`] on the same thread. Handles are opaque
//! and must be released with their matching `*_free` function. Strings
//! returned through out-pointers are owned by the caller and released with
//! [`dfra_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dfra_core::clifford::{self, GammaSet, SPINOR_DIM};
use dfra_core::dfra::DfraAlgebra as CoreAlgebra;
use dfra_core::linalg::Mat;
use dfra_core::oscillator::{self, Moment, Occupation, OscillatorConfig};
use dfra_core::reps::{self, GroupElement};
use dfra_core::{field, symcore, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfraStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    UnknownGenerator = 4,
    Pole = 5,
    Tachyonic = 6,
    Numerical = 7,
    BufferTooSmall = 8,
    InvalidUtf8 = 9,
    Panic = 10,
}

/// Opaque handle to a commutator algebra.
pub struct DfraAlgebra {
    inner: CoreAlgebra,
}

/// Opaque handle to the 10 gamma matrices of size 32x32.
pub struct DfraGammaSet {
    inner: GammaSet,
}

/// Parameters of the two-sector oscillator.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DfraOscillatorConfig {
    pub m: f64,
    pub omega: f64,
    /// Theta-sector stiffness.
    pub lambda: f64,
    pub big_omega: f64,
    pub d: u32,
}

impl From<DfraOscillatorConfig> for OscillatorConfig {
    fn from(c: DfraOscillatorConfig) -> Self {
        OscillatorConfig {
            m: c.m,
            omega: c.omega,
            lambda: c.lambda,
            big_omega: c.big_omega,
            d: c.d as usize,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DfraStatus {
    match e {
        Error::Parse { .. } => DfraStatus::ParseError,
        Error::UnknownGenerator(_) => DfraStatus::UnknownGenerator,
        Error::Pole(_) => DfraStatus::Pole,
        Error::Tachyonic(_) => DfraStatus::Tachyonic,
        Error::Numerical(_) | Error::NonTerminating(_) | Error::Singular => DfraStatus::Numerical,
        _ => DfraStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (DfraStatus, String)>) -> DfraStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DfraStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            DfraStatus::Panic
        }
    }
}

fn core<T>(r: dfra_core::Result<T>) -> Result<T, (DfraStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (DfraStatus, String) {
    (DfraStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read<'a, T>(
    p: *const T,
    len: usize,
    what: &str,
) -> Result<&'a [T], (DfraStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), (DfraStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

fn mat4(v: &[f64]) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| v[4 * i + j]))
}

/// Message describing the last failure on this thread; empty after success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn dfra_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dfra_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn dfra_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the commutator algebra in `d` dimensions (`d + 1` with a time index
/// when `relativistic`).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dfra_algebra_new(
    d: u32,
    relativistic: bool,
    out: *mut *mut DfraAlgebra,
) -> DfraStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = core(CoreAlgebra::build(d as usize, relativistic))?;
        out.write(Box::into_raw(Box::new(DfraAlgebra { inner })));
        Ok(())
    })
}

/// # Safety
/// `alg` must be null or a handle from [`dfra_algebra_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dfra_algebra_free(alg: *mut DfraAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Parses `src` (brackets written `[a, b]`) and writes its normal form.
///
/// # Safety
/// `alg` must be a live handle, `src` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_algebra_eval(
    alg: *const DfraAlgebra,
    src: *const c_char,
    out: *mut *mut c_char,
) -> DfraStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algebra"))?;
        if src.is_null() {
            return Err(null("src"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(src)
            .to_str()
            .map_err(|e| (DfraStatus::InvalidUtf8, e.to_string()))?;
        let e = core(symcore::parse(text, Some(alg.inner.table())))?;
        let s = CString::new(e.to_string())
            .map_err(|e| (DfraStatus::InvalidArgument, e.to_string()))?;
        out.write(s.into_raw());
        Ok(())
    })
}

/// Counts generator triples whose Jacobi sum fails to vanish.
///
/// # Safety
/// `alg` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_algebra_jacobi_failures(
    alg: *const DfraAlgebra,
    out: *mut usize,
) -> DfraStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algebra"))?;
        let n = core(alg.inner.jacobi_failures())?.len();
        write(out, n, "out")
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dfra_gammas_new(out: *mut *mut DfraGammaSet) -> DfraStatus {
    guard(|| {
        write(
            out,
            Box::into_raw(Box::new(DfraGammaSet {
                inner: clifford::build_gammas(),
            })),
            "out",
        )
    })
}

/// # Safety
/// `gs` must be null or a handle from [`dfra_gammas_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dfra_gammas_free(gs: *mut DfraGammaSet) {
    if !gs.is_null() {
        drop(Box::from_raw(gs));
    }
}

/// Copies gamma matrix `index` (0..10: four vectors, then the six pairs
/// 01, 02, 03, 12, 13, 23) row-major into `re` and `im`, each of length
/// `len >= 1024`.
///
/// # Safety
/// `gs` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn dfra_gamma_matrix(
    gs: *const DfraGammaSet,
    index: u32,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> DfraStatus {
    guard(|| {
        let gs = gs.as_ref().ok_or_else(|| null("gamma set"))?;
        if index >= 10 {
            return Err((
                DfraStatus::InvalidArgument,
                format!("gamma index {index} outside 0..10"),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let n = SPINOR_DIM * SPINOR_DIM;
        if len < n {
            return Err((
                DfraStatus::BufferTooSmall,
                format!("need {n} entries, got {len}"),
            ));
        }
        let g = gs.inner.get(index as usize);
        let (re, im) = (
            std::slice::from_raw_parts_mut(re, n),
            std::slice::from_raw_parts_mut(im, n),
        );
        for r in 0..SPINOR_DIM {
            for c in 0..SPINOR_DIM {
                re[r * SPINOR_DIM + c] = g[(r, c)].re;
                im[r * SPINOR_DIM + c] = g[(r, c)].im;
            }
        }
        Ok(())
    })
}

/// Largest entry of `{G^A, G^B} + 2 eta^AB` over all index pairs.
///
/// # Safety
/// `gs` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_gammas_clifford_residual(
    gs: *const DfraGammaSet,
    out: *mut f64,
) -> DfraStatus {
    guard(|| {
        let gs = gs.as_ref().ok_or_else(|| null("gamma set"))?;
        write(out, clifford::clifford_residual(&gs.inner), "out")
    })
}

/// On-shell frequency for spatial momentum `k[3]` and pair momentum `k2[16]`
/// (row-major, antisymmetric, upper indices).
///
/// # Safety
/// `k` must hold 3 doubles, `k2` 16, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_dispersion(
    k: *const f64,
    k2: *const f64,
    lambda: f64,
    m: f64,
    out: *mut f64,
) -> DfraStatus {
    guard(|| {
        let k = read(k, 3, "k")?;
        let k2 = mat4(read(k2, 16, "k2")?);
        let w = core(field::dispersion(&[k[0], k[1], k[2]], &k2, lambda, m))?;
        write(out, w, "out")
    })
}

/// Momentum-space propagator `-1 / (K^2 + m^2 - i eps)`; pass `eps <= 0`
/// for no regulator.
///
/// # Safety
/// `k1` must hold 4 doubles, `k2` 16, and both outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_propagator(
    k1: *const f64,
    k2: *const f64,
    lambda: f64,
    m: f64,
    eps: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DfraStatus {
    guard(|| {
        let k1 = read(k1, 4, "k1")?;
        let k2 = mat4(read(k2, 16, "k2")?);
        let mom = core(field::ExtendedMomentum::new(
            [k1[0], k1[1], k1[2], k1[3]],
            k2,
            lambda,
        ))?;
        let g = core(field::propagator(&mom, m, (eps > 0.0).then_some(eps)))?;
        write(out_re, g.re, "out_re")?;
        write(out_im, g.im, "out_im")
    })
}

/// Energy of the occupation `(n_x[d], n_theta[d(d-1)/2])`.
///
/// # Safety
/// The arrays must hold `nx_len` and `nth_len` entries; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_oscillator_energy(
    cfg: DfraOscillatorConfig,
    n_x: *const u32,
    nx_len: usize,
    n_theta: *const u32,
    nth_len: usize,
    out: *mut f64,
) -> DfraStatus {
    guard(|| {
        let cfg: OscillatorConfig = cfg.into();
        core(cfg.validate())?;
        let occ = Occupation {
            n_x: read(n_x, nx_len, "n_x")?.to_vec(),
            n_theta: read(n_theta, nth_len, "n_theta")?.to_vec(),
        };
        write(out, core(oscillator::energy(&cfg, &occ))?, "out")
    })
}

/// Ground-state `<theta^2>`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_oscillator_theta2(
    cfg: DfraOscillatorConfig,
    out: *mut f64,
) -> DfraStatus {
    guard(|| {
        write(
            out,
            core(oscillator::moment(&cfg.into(), Moment::Theta2))?,
            "out",
        )
    })
}

/// Ground-state `<theta_a theta_b>` for canonical component slots `a`, `b`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dfra_oscillator_pair_moment(
    cfg: DfraOscillatorConfig,
    a: u32,
    b: u32,
    out: *mut f64,
) -> DfraStatus {
    guard(|| {
        write(
            out,
            core(oscillator::moment(
                &cfg.into(),
                Moment::Pair(a as usize, b as usize),
            ))?,
            "out",
        )
    })
}

/// The 11x11 matrix of the element `(Lambda[16], A[4], B[16])`, row-major
/// into `out[121]`.
///
/// # Safety
/// Inputs must hold 16, 4 and 16 doubles; `out` must hold 121.
#[no_mangle]
pub unsafe extern "C" fn dfra_d5(
    lambda: *const f64,
    a: *const f64,
    b: *const f64,
    out: *mut f64,
) -> DfraStatus {
    guard(|| {
        let l = read(lambda, 16, "lambda")?;
        let av = read(a, 4, "a")?.to_vec();
        let bv = read(b, 16, "b")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = core(GroupElement::new(
            Mat::from_fn(4, 4, |i, j| l[4 * i + j]),
            av,
            Mat::from_fn(4, 4, |i, j| bv[4 * i + j]),
        ))?;
        let m = reps::d5(&g);
        let o = std::slice::from_raw_parts_mut(out, 121);
        for i in 0..11 {
            for j in 0..11 {
                o[11 * i + j] = m[(i, j)];
            }
        }
        Ok(())
    })
}
