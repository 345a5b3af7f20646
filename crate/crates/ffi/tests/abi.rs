use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dfra_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dfra_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn eval(alg: *const DfraAlgebra, src: &str) -> Result<String, (DfraStatus, String)> {
    let c = CString::new(src).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { dfra_algebra_eval(alg, c.as_ptr(), &mut out) };
    if st != DfraStatus::Ok {
        return Err((st, last_error()));
    }
    let s = unsafe { CStr::from_ptr(out) }
        .to_string_lossy()
        .into_owned();
    unsafe { dfra_string_free(out) };
    Ok(s)
}

#[test]
fn algebra_handle_round_trip() {
    let mut alg = ptr::null_mut();
    assert_eq!(
        unsafe { dfra_algebra_new(3, false, &mut alg) },
        DfraStatus::Ok
    );
    assert_eq!(eval(alg, "[x[1], x[2]]").unwrap(), "i*theta[1,2]");
    assert_eq!(eval(alg, "[x[1], pi[1,2]]").unwrap(), "-(1/2)i*p[2]");
    let (st, msg) = eval(alg, "[x[1], ").unwrap_err();
    assert_eq!(st, DfraStatus::ParseError);
    assert!(!msg.is_empty());
    let (st, _) = eval(alg, "x[7]").unwrap_err();
    assert!(matches!(
        st,
        DfraStatus::UnknownGenerator | DfraStatus::InvalidArgument | DfraStatus::ParseError
    ));
    let mut n = usize::MAX;
    assert_eq!(
        unsafe { dfra_algebra_jacobi_failures(alg, &mut n) },
        DfraStatus::Ok
    );
    assert_eq!(n, 0);
    unsafe { dfra_algebra_free(alg) };
    unsafe { dfra_algebra_free(ptr::null_mut()) };

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { dfra_algebra_new(1, false, &mut bad) },
        DfraStatus::InvalidArgument
    );
    assert!(bad.is_null());
    assert_eq!(
        unsafe { dfra_algebra_new(3, false, ptr::null_mut()) },
        DfraStatus::NullPointer
    );
}

#[test]
fn gamma_export_satisfies_clifford_relations() {
    let mut gs = ptr::null_mut();
    assert_eq!(unsafe { dfra_gammas_new(&mut gs) }, DfraStatus::Ok);
    let n = 32;
    let fetch = |a: u32| {
        let (mut re, mut im) = (vec![0.0; n * n], vec![0.0; n * n]);
        assert_eq!(
            unsafe { dfra_gamma_matrix(gs, a, re.as_mut_ptr(), im.as_mut_ptr(), n * n) },
            DfraStatus::Ok
        );
        (re, im)
    };
    // G^0 squares to +1 and G^1 to -1 under {G^A, G^B} = -2 eta^AB
    for (a, want) in [(0u32, 1.0), (1, -1.0), (4, 1.0), (7, -1.0)] {
        let (re, im) = fetch(a);
        for r in 0..n {
            for c in 0..n {
                let (mut sr, mut si) = (0.0, 0.0);
                for k in 0..n {
                    let (ar, ai) = (re[r * n + k], im[r * n + k]);
                    let (br, bi) = (re[k * n + c], im[k * n + c]);
                    sr += ar * br - ai * bi;
                    si += ar * bi + ai * br;
                }
                let d = if r == c { want } else { 0.0 };
                assert!(
                    (sr - d).abs() < 1e-12 && si.abs() < 1e-12,
                    "gamma {a} at ({r},{c})"
                );
            }
        }
    }
    let mut small = vec![0.0; 10];
    let st = unsafe { dfra_gamma_matrix(gs, 0, small.as_mut_ptr(), small.as_mut_ptr(), 10) };
    assert_eq!(st, DfraStatus::BufferTooSmall);
    let (mut re, mut im) = (vec![0.0; n * n], vec![0.0; n * n]);
    assert_eq!(
        unsafe { dfra_gamma_matrix(gs, 10, re.as_mut_ptr(), im.as_mut_ptr(), n * n) },
        DfraStatus::InvalidArgument
    );
    let mut res = 1.0;
    assert_eq!(
        unsafe { dfra_gammas_clifford_residual(gs, &mut res) },
        DfraStatus::Ok
    );
    assert!(res < 1e-12);
    unsafe { dfra_gammas_free(gs) };
}

#[test]
fn kinematics() {
    let k = [0.3, 0.4, 0.0];
    let mut k2 = [0.0; 16];
    k2[4 + 2] = 0.5;
    k2[2 * 4 + 1] = -0.5;
    let mut w = 0.0;
    assert_eq!(
        unsafe { dfra_dispersion(k.as_ptr(), k2.as_ptr(), 2.0, 1.0, &mut w) },
        DfraStatus::Ok
    );
    // 0.25 + (4/2) * 2 * 0.25 + 1
    assert!((w - 2.25f64.sqrt()).abs() < 1e-14);

    let on = [w, 0.3, 0.4, 0.0];
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { dfra_propagator(on.as_ptr(), k2.as_ptr(), 2.0, 1.0, 0.0, &mut re, &mut im) },
        DfraStatus::Pole
    );
    assert_eq!(
        unsafe { dfra_propagator(on.as_ptr(), k2.as_ptr(), 2.0, 1.0, 0.5, &mut re, &mut im) },
        DfraStatus::Ok
    );
    // -1 / (0 - 0.5 i) = -2i
    assert!(re.abs() < 1e-12 && (im + 2.0).abs() < 1e-12);

    let mut tachyon = 0.0;
    let st = unsafe { dfra_dispersion(k.as_ptr(), k2.as_ptr(), 2.0, f64::NAN, &mut tachyon) };
    assert_eq!(st, DfraStatus::InvalidArgument);
    let mut mixed = [0.0; 16];
    mixed[1] = 3.0;
    mixed[4] = -3.0;
    let st = unsafe { dfra_dispersion(k.as_ptr(), mixed.as_ptr(), 2.0, 1.0, &mut tachyon) };
    assert_eq!(st, DfraStatus::Tachyonic);
    assert!(last_error().contains("tachyonic"));
}

#[test]
fn oscillator_and_d5() {
    let cfg = DfraOscillatorConfig {
        m: 1.0,
        omega: 2.0,
        lambda: 1.0,
        big_omega: 0.5,
        d: 3,
    };
    let (nx, nth) = ([1u32, 0, 0], [0u32, 2, 0]);
    let mut e = 0.0;
    assert_eq!(
        unsafe { dfra_oscillator_energy(cfg, nx.as_ptr(), 3, nth.as_ptr(), 3, &mut e) },
        DfraStatus::Ok
    );
    assert_eq!(e, 2.0 * (1.0 + 1.5) + 0.5 * (2.0 + 1.5));
    assert_eq!(
        unsafe { dfra_oscillator_energy(cfg, nx.as_ptr(), 2, nth.as_ptr(), 3, &mut e) },
        DfraStatus::InvalidArgument
    );
    let mut t2 = 0.0;
    assert_eq!(
        unsafe { dfra_oscillator_theta2(cfg, &mut t2) },
        DfraStatus::Ok
    );
    assert_eq!(t2, 1.0);
    let mut off = 1.0;
    assert_eq!(
        unsafe { dfra_oscillator_pair_moment(cfg, 0, 1, &mut off) },
        DfraStatus::Ok
    );
    assert_eq!(off, 0.0);

    let mut ident = [0.0; 16];
    for i in 0..4 {
        ident[5 * i] = 1.0;
    }
    let a = [1.0, 2.0, 3.0, 4.0];
    let mut b = [0.0; 16];
    b[1] = 0.5;
    b[4] = -0.5;
    let mut m = [0.0; 121];
    assert_eq!(
        unsafe { dfra_d5(ident.as_ptr(), a.as_ptr(), b.as_ptr(), m.as_mut_ptr()) },
        DfraStatus::Ok
    );
    for i in 0..11 {
        assert_eq!(m[11 * i + i], 1.0);
    }
    assert_eq!(&[m[10], m[21], m[32], m[43]], &a);
    assert_eq!(m[4 * 11 + 10], 0.5);
    let mut scaled = ident;
    scaled[0] = 2.0;
    assert_eq!(
        unsafe { dfra_d5(scaled.as_ptr(), a.as_ptr(), b.as_ptr(), m.as_mut_ptr()) },
        DfraStatus::InvalidArgument
    );
}

#[test]
fn header_is_current_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/dfra.h")).unwrap();
    for sym in [
        "dfra_algebra_new",
        "dfra_algebra_eval",
        "dfra_string_free",
        "dfra_gamma_matrix",
        "dfra_dispersion",
        "dfra_propagator",
        "dfra_oscillator_energy",
        "dfra_d5",
        "DFRA_STATUS_OK = 0",
    ] {
        assert!(header.contains(sym), "{sym} missing from header");
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping header compile check");
        return;
    }
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("smoke.o");
    let st = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-c"])
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .arg("-o")
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
}
