//! Named verification suites run by the command-line front end.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{self, build_gammas, spinor_generator};
use crate::constraints::{Classification, ConstraintSet, DiracStructure, PhaseSpace};
use crate::dfra::{DfraAlgebra, Variant};
use crate::error::{Error, Result};
use crate::field::lattice::kg_apply_at;
use crate::field::{self, Grid, LatticeField, Leapfrog, Poly, SourceTerm};
use crate::linalg::Mat;
use crate::oscillator::{self, Moment, OracleMethod, OscillatorConfig, ThetaPoly};
use crate::reps;
use crate::scalar::{rat, GaussianRational};
use crate::symcore::{bracket, normal_form, Expression, Generator};

/// Operation identifiers a record may cite in its `reference` field.
pub const OPERATIONS: &[&str] = &[
    "dfra::jacobi_residual",
    "dfra::closure_residual",
    "dfra::little_l_defect",
    "dfra::translation_residual",
    "constraints::classify",
    "constraints::dirac_bracket",
    "constraints::quantization",
    "constraints::classical_j",
    "reps::d5",
    "reps::compose_infinitesimal",
    "reps::casimirs",
    "clifford::build_gammas",
    "clifford::spinor_generator",
    "clifford::dirac_operator",
    "clifford::spinor_boost",
    "oscillator::energy",
    "oscillator::moment",
    "oscillator::ground_wavefunction",
    "oscillator::degeneracy",
    "field::dispersion",
    "field::propagator",
    "field::kg_apply",
    "field::greens_solve",
    "field::noether_charges",
    "field::moyal_star",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Constraints,
    Reps,
    Clifford,
    Oscillator,
    Field,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Algebra,
        Suite::Constraints,
        Suite::Reps,
        Suite::Clifford,
        Suite::Oscillator,
        Suite::Field,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Constraints => "constraints",
            Suite::Reps => "reps",
            Suite::Clifford => "clifford",
            Suite::Oscillator => "oscillator",
            Suite::Field => "field",
            Suite::All => "all",
        }
    }
}

/// Tunable parameters. Keys are case-sensitive (`lambda` is the field length
/// scale, `Lambda` the oscillator stiffness).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Params {
    #[serde(rename = "D")]
    pub d: usize,
    pub lambda: f64,
    pub m: f64,
    pub omega: f64,
    #[serde(rename = "Lambda")]
    pub big_lambda: f64,
    #[serde(rename = "Omega")]
    pub big_omega: f64,
    pub nt: usize,
    pub nx: usize,
    pub nth: usize,
    pub steps: usize,
    pub cfl: f64,
    pub seed: u64,
    pub samples: usize,
    pub trials: usize,
    pub timings: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            d: 3,
            lambda: 1.0,
            m: 1.0,
            omega: 1.0,
            big_lambda: 1.0,
            big_omega: 1.0,
            nt: 64,
            nx: 32,
            nth: 16,
            steps: 1000,
            cfl: 0.5,
            seed: 1,
            samples: 1_000_000,
            trials: 100,
            timings: false,
        }
    }
}

pub const PARAM_KEYS: &[&str] = &[
    "D", "lambda", "m", "omega", "Lambda", "Omega", "nt", "nx", "nth", "steps", "cfl", "seed",
    "samples", "trials", "timings",
];

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid value `{v}` for `{key}`")))
}

impl Params {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let k = key.trim();
        match k {
            "D" => self.d = parse_value(k, value)?,
            "lambda" => self.lambda = parse_value(k, value)?,
            "m" => self.m = parse_value(k, value)?,
            "omega" => self.omega = parse_value(k, value)?,
            "Lambda" => self.big_lambda = parse_value(k, value)?,
            "Omega" => self.big_omega = parse_value(k, value)?,
            "nt" => self.nt = parse_value(k, value)?,
            "nx" => self.nx = parse_value(k, value)?,
            "nth" => self.nth = parse_value(k, value)?,
            "steps" => self.steps = parse_value(k, value)?,
            "cfl" => self.cfl = parse_value(k, value)?,
            "seed" => self.seed = parse_value(k, value)?,
            "samples" => self.samples = parse_value(k, value)?,
            "trials" => self.trials = parse_value(k, value)?,
            "timings" => self.timings = parse_value(k, value)?,
            _ => return Err(Error::InvalidArgument(format!("unknown parameter `{k}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.d) {
            return Err(Error::InvalidArgument(format!(
                "D = {} outside 2..=8",
                self.d
            )));
        }
        for (k, v) in [("lambda", self.lambda), ("m", self.m), ("cfl", self.cfl)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{k} must be finite and non-negative"
                )));
            }
        }
        for (k, v) in [
            ("omega", self.omega),
            ("Lambda", self.big_lambda),
            ("Omega", self.big_omega),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{k} must be positive")));
            }
        }
        if self.cfl >= 1.0 {
            return Err(Error::InvalidArgument("cfl must be below 1".into()));
        }
        if self.nt < 5 || self.nx < 5 || self.nth < 5 {
            return Err(Error::InvalidArgument("grid sizes must be >= 5".into()));
        }
        if self.samples < 2 || self.trials == 0 {
            return Err(Error::InvalidArgument(
                "samples must be >= 2 and trials >= 1".into(),
            ));
        }
        Ok(())
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(salt);
        r
    }

    fn oscillator(&self) -> OscillatorConfig {
        OscillatorConfig {
            m: self.m,
            omega: self.omega,
            lambda: self.big_lambda,
            big_omega: self.big_omega,
            d: self.d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub suite: &'static str,
    pub reference: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip)]
    pub runtime: Duration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

struct Recorder {
    suite: &'static str,
    out: Vec<CheckRecord>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Recorder {
            suite: suite.name(),
            out: Vec::new(),
        }
    }

    /// Runs `f`, which yields `(residual, tolerance)`; passes when `residual <= tolerance`.
    fn check(
        &mut self,
        name: impl Into<String>,
        reference: &'static str,
        f: impl FnOnce() -> Result<(f64, f64)>,
    ) {
        let start = Instant::now();
        let r = f();
        let runtime = start.elapsed();
        let name = name.into();
        let rec = match r {
            Ok((res, tol)) => CheckRecord {
                name,
                suite: self.suite,
                reference,
                passed: res <= tol,
                residual: res,
                tolerance: tol,
                runtime,
                detail: None,
            },
            Err(e) => CheckRecord {
                name,
                suite: self.suite,
                reference,
                passed: false,
                residual: f64::NAN,
                tolerance: 0.0,
                runtime,
                detail: Some(e.to_string()),
            },
        };
        log::debug!("{} {}: residual {:e}", rec.suite, rec.name, rec.residual);
        self.out.push(rec);
    }
}

/// Runs one suite, or every suite in parallel for [`Suite::All`]. Output
/// order is fixed.
pub fn run(suite: Suite, p: &Params) -> Result<Vec<CheckRecord>> {
    p.validate()?;
    if suite == Suite::All {
        let parts: Vec<Vec<CheckRecord>> = Suite::EACH.par_iter().map(|&s| run_one(s, p)).collect();
        return Ok(parts.into_iter().flatten().collect());
    }
    Ok(run_one(suite, p))
}

fn run_one(suite: Suite, p: &Params) -> Vec<CheckRecord> {
    let mut r = Recorder::new(suite);
    match suite {
        Suite::Algebra => algebra(&mut r, p),
        Suite::Constraints => constraint_checks(&mut r, p),
        Suite::Reps => rep_checks(&mut r, p),
        Suite::Clifford => clifford_checks(&mut r, p),
        Suite::Oscillator => oscillator_checks(&mut r, p),
        Suite::Field => field_checks(&mut r, p),
        Suite::All => unreachable!("expanded by run"),
    }
    r.out
}

fn count(n: usize) -> (f64, f64) {
    (n as f64, 0.0)
}

fn algebra(r: &mut Recorder, p: &Params) {
    let mut dims = vec![2, 3, 4];
    if !dims.contains(&p.d) {
        dims.push(p.d);
    }
    for d in dims {
        r.check(
            format!("Jacobi identity, all generator triples, D={d}"),
            "dfra::jacobi_residual",
            || {
                Ok(count(
                    DfraAlgebra::build(d, false)?.jacobi_failures()?.len(),
                ))
            },
        );
    }
    r.check(
        "Jacobi identity, all generator triples, relativistic D=4",
        "dfra::jacobi_residual",
        || Ok(count(DfraAlgebra::build(3, true)?.jacobi_failures()?.len())),
    );
    let d = p.d;
    r.check(
        format!("J closes into so({d})"),
        "dfra::closure_residual",
        || {
            let a = DfraAlgebra::build(d, false)?;
            let ix = a.indices();
            let mut bad = 0;
            for &i in &ix {
                for &j in &ix {
                    for &k in &ix {
                        for &l in &ix {
                            if i != j
                                && k != l
                                && !a.closure_residual(Variant::J, i, j, k, l)?.is_zero()
                            {
                                bad += 1;
                            }
                        }
                    }
                }
            }
            Ok(count(bad))
        },
    );
    r.check(
        format!("naive l^ij non-closure equals the theta p p defect, D={d}"),
        "dfra::little_l_defect",
        || {
            let a = DfraAlgebra::build(d, false)?;
            let ix = a.indices();
            let mut bad = 0;
            for &i in &ix {
                for &j in &ix {
                    for &k in &ix {
                        for &l in &ix {
                            if i != j
                                && k != l
                                && a.closure_residual(Variant::LittleL, i, j, k, l)?
                                    != a.little_l_defect(i, j, k, l)?
                            {
                                bad += 1;
                            }
                        }
                    }
                }
            }
            Ok(count(bad))
        },
    );
    r.check(
        "[M^{mn}, p_r] Lorentz relations, relativistic D=4",
        "dfra::translation_residual",
        || {
            let a = DfraAlgebra::build(3, true)?;
            let ix = a.indices();
            let mut bad = 0;
            for &m in &ix {
                for &n in &ix {
                    for &q in &ix {
                        if m != n && !a.translation_residual(m, n, q)?.is_zero() {
                            bad += 1;
                        }
                    }
                }
            }
            Ok(count(bad))
        },
    );
}

/// Expected Dirac brackets of the basic variables, `(a, b, {a, b}_D)`.
pub const DIRAC_TABLE: &[(&str, &str, &str)] = &[
    ("x[1]", "p[1]", "1"),
    ("x[1]", "x[2]", "theta[1,2]"),
    ("p[1]", "p[2]", "0"),
    ("theta[1,2]", "pi[1,2]", "1"),
    ("theta[1,2]", "theta[1,2]", "0"),
    ("x[1]", "pi[1,2]", "-(1/2)*p[2]"),
    ("x[2]", "pi[1,2]", "(1/2)*p[1]"),
    ("p[1]", "pi[1,2]", "0"),
    ("Z[1]", "x[2]", "-(1/2)*theta[1,2]"),
    ("Z[1]", "p[1]", "0"),
    ("K[1]", "x[1]", "-1"),
    ("K[1]", "p[1]", "0"),
    ("Z[1]", "pi[1,2]", "(1/2)*p[2]"),
    ("Z[1]", "K[1]", "0"),
    ("X[1]", "x[2]", "(1/2)*theta[1,2]"),
    ("X[1]", "Z[2]", "-(1/2)*theta[1,2]"),
    ("X[1]", "K[1]", "1"),
    ("X[1]", "X[2]", "0"),
];

/// Random polynomial of degree at most two in the phase-space generators.
pub fn random_phase_space_expression<R: Rng>(rng: &mut R, gens: &[Generator]) -> Expression {
    let mut e = Expression::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let len = rng.gen_range(0..=2);
        let word = (0..len)
            .map(|_| gens[rng.gen_range(0..gens.len())])
            .collect();
        let c = GaussianRational::new(
            rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
            rat(rng.gen_range(-2..=2), 1),
        );
        e.add_term(word, c);
    }
    e
}

fn constraint_checks(r: &mut Recorder, p: &Params) {
    let d = p.d;
    let setup = || -> Result<(PhaseSpace, DiracStructure)> {
        let ps = PhaseSpace::new(d, false)?;
        let cs = ConstraintSet::dfra(&ps)?;
        let ds = DiracStructure::new(&ps, &cs)?;
        Ok((ps, ds))
    };
    r.check(
        format!("constraints are second class, D={d}"),
        "constraints::classify",
        || {
            let ps = PhaseSpace::new(d, false)?;
            let cs = ConstraintSet::dfra(&ps)?;
            Ok(match crate::constraints::classify(&ps, &cs)? {
                Classification::SecondClass => (0.0, 0.0),
                Classification::NotSecondClass { .. } => (1.0, 0.0),
            })
        },
    );
    r.check(
        "Dirac brackets of the basic variables",
        "constraints::dirac_bracket",
        || {
            let (ps, ds) = setup()?;
            let mut bad = 0;
            for (a, b, want) in DIRAC_TABLE {
                let got = ds.bracket(&ps.parse(a)?, &ps.parse(b)?)?;
                if got != ps.parse(want)? {
                    log::warn!("{{{a}, {b}}}_D = {got}, expected {want}");
                    bad += 1;
                }
            }
            Ok(count(bad))
        },
    );
    let trials = 2 * p.trials;
    let mut rng = p.rng(2);
    r.check(
        format!("constraints are central for {trials} random expressions"),
        "constraints::dirac_bracket",
        || {
            let (ps, ds) = setup()?;
            let gens: Vec<Generator> = ps.table().universe().cloned().collect();
            let mut bad = 0;
            for _ in 0..trials {
                let a = random_phase_space_expression(&mut rng, &gens);
                for c in ds.constraints().constraints() {
                    if !ds.bracket(&a, c)?.is_zero() {
                        bad += 1;
                    }
                }
            }
            Ok(count(bad))
        },
    );
    r.check(
        "i times the Dirac bracket reproduces every commutator",
        "constraints::quantization",
        || {
            let (ps, ds) = setup()?;
            let alg = DfraAlgebra::build(d, false)?;
            let gens = alg.generators();
            let mut bad = 0;
            for a in &gens {
                for b in &gens {
                    let (ea, eb) = (Expression::gen(*a), Expression::gen(*b));
                    let q = bracket(&ea, &eb, alg.table())?;
                    let c = normal_form(
                        &ds.bracket(&ea, &eb)?.scale(&GaussianRational::i()),
                        ps.table(),
                    )?;
                    if q.to_string() != c.to_string() {
                        bad += 1;
                    }
                }
            }
            Ok(count(bad))
        },
    );
    r.check(
        format!("classical J closes under the Dirac bracket, D={d}"),
        "constraints::classical_j",
        || {
            let (ps, ds) = setup()?;
            let ix = ps.indices();
            let mut bad = 0;
            for &i in &ix {
                for &j in &ix {
                    for &k in &ix {
                        for &l in &ix {
                            if i != j && k != l && !ds.j_closure_residual(i, j, k, l)?.is_zero() {
                                bad += 1;
                            }
                        }
                    }
                }
            }
            Ok(count(bad))
        },
    );
}

fn rep_checks(r: &mut Recorder, p: &Params) {
    let n = p.trials;
    let mut rng = p.rng(3);
    r.check(
        format!("d5 homomorphism on {n} exact element pairs"),
        "reps::d5",
        || {
            let mut bad = 0;
            for _ in 0..n {
                let g1 = reps::random_rational_element(&mut rng);
                let g2 = reps::random_rational_element(&mut rng);
                if &reps::d5(&g1) * &reps::d5(&g2) != reps::d5(&g1.compose(&g2)) {
                    bad += 1;
                }
            }
            Ok(count(bad))
        },
    );
    let mut rng = p.rng(4);
    r.check(
        format!("infinitesimal composition matches the generator commutator, {n} pairs"),
        "reps::compose_infinitesimal",
        || {
            let mut bad = 0;
            for _ in 0..n {
                let e1 = reps::random_infinitesimal(&mut rng);
                let e2 = reps::random_infinitesimal(&mut rng);
                let e3 = reps::compose_infinitesimal(&e1, &e2);
                if reps::d5_generator(&e3)
                    != reps::d5_generator(&e1).commutator(&reps::d5_generator(&e2))
                {
                    bad += 1;
                }
            }
            Ok(count(bad))
        },
    );
    let mut rng = p.rng(5);
    r.check(
        format!("C1..C4 invariant under {n} random Lorentz transformations"),
        "reps::casimirs",
        || {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let k: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let mut six = || {
                    reps::vec_to_antisym(
                        &(0..6)
                            .map(|_| rng.gen_range(-2.0..2.0))
                            .collect::<Vec<f64>>(),
                    )
                };
                let (kk, m1, m2) = (six(), six(), six());
                let l = reps::random_float_lorentz(&mut rng);
                let before = reps::casimirs(&k, &kk, &m1, &m2);
                let after = reps::casimirs(
                    &l.mul_vec(&k),
                    &reps::transform_tensor(&l, &kk),
                    &reps::transform_tensor(&l, &m1),
                    &reps::transform_tensor(&l, &m2),
                );
                let scale = l.max_abs().powi(4);
                for i in 0..4 {
                    worst =
                        worst.max((before[i] - after[i]).abs() / (scale * (1.0 + before[i].abs())));
                }
            }
            Ok((worst, 1e-10))
        },
    );
}

fn random_kk<R: Rng>(rng: &mut R) -> [[f64; 4]; 4] {
    let mut kk = [[0.0; 4]; 4];
    for &(a, b) in reps::PAIRS.iter() {
        let v = rng.gen_range(-2.0..2.0);
        kk[a][b] = v;
        kk[b][a] = -v;
    }
    kk
}

fn clifford_checks(r: &mut Recorder, p: &Params) {
    let gs = build_gammas();
    let sg = spinor_generator(&gs);
    let i = Complex64::new(0.0, 1.0);
    r.check(
        "all 100 anticommutators {G^A, G^B} = -2 eta^AB",
        "clifford::build_gammas",
        || Ok((clifford::clifford_residual(&gs), 1e-12)),
    );
    r.check(
        "every gamma matrix is traceless",
        "clifford::build_gammas",
        || {
            Ok((
                gs.all()
                    .iter()
                    .map(|g| g.trace().norm())
                    .fold(0.0, f64::max),
                1e-12,
            ))
        },
    );
    let n = p.trials;
    let mut rng = p.rng(6);
    let (lambda, m) = (p.lambda, p.m);
    r.check(
        format!("squared Dirac operator is scalar for {n} random (k, K)"),
        "clifford::dirac_operator",
        || {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let k: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                let kk = random_kk(&mut rng);
                let prod = clifford::dirac_conjugate(&gs, &k, &kk, lambda, m)?
                    * clifford::dirac_operator(&gs, &k, &kk, lambda, m)?;
                let target = -clifford::kg_form(&k, &kk, lambda, m);
                for row in 0..clifford::SPINOR_DIM {
                    for col in 0..clifford::SPINOR_DIM {
                        let want = if row == col { target } else { 0.0 };
                        worst = worst.max((prod[(row, col)] - want).norm());
                    }
                }
            }
            Ok((worst, 1e-12))
        },
    );
    r.check(
        "Dirac operator is singular exactly on shell",
        "clifford::dirac_operator",
        || {
            let kk = random_kk(&mut rng);
            let mut spatial_kk = kk;
            for b in 0..4 {
                spatial_kk[0][b] = 0.0;
                spatial_kk[b][0] = 0.0;
            }
            let sp = [0.0, 0.4, -0.3, 0.8];
            let e = clifford::kg_form(&sp, &spatial_kk, lambda, m).sqrt();
            let smin = |k: &[f64; 4]| -> Result<f64> {
                let d = clifford::dirac_operator(&gs, k, &spatial_kk, lambda, m)?;
                Ok(d.singular_values()
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min))
            };
            let on = smin(&[e, 0.4, -0.3, 0.8])?;
            let off = smin(&[e + 0.5, 0.4, -0.3, 0.8])?;
            Ok((if off > 1e-3 { on } else { f64::INFINITY }, 1e-10))
        },
    );
    r.check(
        "M^{mn} closes in the Lorentz algebra",
        "clifford::spinor_generator",
        || Ok((clifford::lorentz_algebra_residual(&sg), 1e-12)),
    );
    r.check(
        "[G^mu, M_ab] = 2i delta^mu_[a G_b]",
        "clifford::spinor_generator",
        || Ok((clifford::vector_covariance_residual(&gs, &sg, i), 1e-12)),
    );
    r.check(
        "[G^mn, M_ab] = 2i delta^m_[a G_b]^n - 2i delta^n_[a G_b]^m",
        "clifford::spinor_generator",
        || Ok((clifford::pair_covariance_residual(&gs, &sg, i), 1e-12)),
    );
    r.check(
        "[G^mu, M_ab] = -2i delta^mu_[a G_b] (diagnostic)",
        "clifford::spinor_generator",
        || Ok((clifford::vector_covariance_residual(&gs, &sg, -i), 1e-12)),
    );
    r.check(
        "[G^mn, M_ab] = -2i delta^m_[a G_b]^n + 2i delta^n_[a G_b]^m (diagnostic)",
        "clifford::spinor_generator",
        || Ok((clifford::pair_covariance_residual(&gs, &sg, -i), 1e-12)),
    );
    let mut rng = p.rng(7);
    let omegas: Vec<[[f64; 4]; 4]> = (0..10)
        .map(|_| {
            let mut w = random_kk(&mut rng);
            for row in w.iter_mut() {
                for v in row.iter_mut() {
                    *v *= 0.1;
                }
            }
            w
        })
        .collect();
    for (label, inverse) in [("Lambda", false), ("Lambda^-1 (diagnostic)", true)] {
        r.check(
            format!("S^-1 G^mu S = {label} G for small omega"),
            "clifford::spinor_boost",
            || {
                let mut worst = 0.0f64;
                for w in &omegas {
                    let s = clifford::spinor_boost(&sg, w)?;
                    let l = clifford::lorentz_from_omega(w)?;
                    worst = worst.max(clifford::intertwining_residual(&gs, &s, &l, inverse)?);
                }
                Ok((worst, 1e-10))
            },
        );
    }
    r.check(
        "2 pi rotation acts as -I on spinors",
        "clifford::spinor_boost",
        || {
            let mut w = [[0.0; 4]; 4];
            w[1][2] = 2.0 * std::f64::consts::PI;
            w[2][1] = -w[1][2];
            let s = clifford::spinor_boost(&sg, &w)?;
            Ok((
                clifford::max_entry(&(s + clifford::CMat::identity(32, 32))),
                1e-10,
            ))
        },
    );
}

fn monomials(n: usize) -> Vec<(String, ThetaPoly, Moment)> {
    let mut out = vec![("<1>".to_string(), ThetaPoly::constant(1.0, n), Moment::Unit)];
    for a in 0..n {
        out.push((
            format!("<theta_{a}>"),
            ThetaPoly::monomial(n, &[(a, 1)]),
            Moment::Theta(a),
        ));
    }
    for a in 0..n {
        for b in a..n {
            out.push((
                format!("<theta_{a} theta_{b}>"),
                ThetaPoly::monomial(n, &[(a, 1), (b, 1)]),
                Moment::Pair(a, b),
            ));
        }
    }
    out
}

fn oscillator_checks(r: &mut Recorder, p: &Params) {
    let cfg = p.oscillator();
    let n = cfg.theta_modes();
    let d = p.d;
    let t2 = oscillator::theta2(&cfg);
    r.check(format!("<theta^2> = {t2}"), "oscillator::moment", || {
        Ok((
            (oscillator::moment(&cfg, Moment::Theta2)? - 1.0 / (2.0 * p.big_lambda * p.big_omega))
                .abs(),
            0.0,
        ))
    });
    r.check(
        "vacuum shift D(D-1) Omega / 4",
        "oscillator::energy",
        || {
            let g = oscillator::energy(&cfg, &oscillator::Occupation::ground(&cfg))?;
            let shift = g - cfg.omega * d as f64 / 2.0;
            let want = (d * (d - 1)) as f64 * cfg.big_omega / 4.0;
            Ok(((shift - want).abs(), 0.0))
        },
    );
    r.check(
        "degeneracy of level 2 by enumeration",
        "oscillator::degeneracy",
        || {
            let want = ((d + 1) * d / 2) as f64;
            Ok(((oscillator::degeneracy(d, 2) as f64 - want).abs(), 0.0))
        },
    );
    if n <= 3 {
        r.check(
            "ground state is normalised (adaptive quadrature)",
            "oscillator::ground_wavefunction",
            || {
                let (v, _) = oscillator::wavefunction_norm(&cfg, 0.7, 1e-10)?;
                Ok(((v - 1.0).abs(), 1e-8))
            },
        );
        let mons = monomials(n);
        r.check(
            format!("closed-form moments of degree <= 2 vs Gauss-Hermite quadrature, D={d}"),
            "oscillator::moment",
            || {
                let mut worst = 0.0f64;
                for (label, f, which) in &mons {
                    let q = oscillator::moment_oracle(&cfg, f, OracleMethod::Quadrature, 0, 0)?;
                    let c = oscillator::moment(&cfg, *which)?;
                    if (q.value - c).abs() > 1e-8 {
                        log::warn!("{label}: closed form {c}, quadrature {}", q.value);
                    }
                    worst = worst.max((q.value - c).abs());
                }
                Ok((worst, 1e-8))
            },
        );
        r.check(
            format!("<theta^2> = (1/2) <theta_ij theta^ij> vs quadrature, D={d}"),
            "oscillator::moment",
            || {
                let f = ThetaPoly {
                    terms: (0..n)
                        .map(|a| ThetaPoly::monomial(n, &[(a, 2)]).terms[0].clone())
                        .collect(),
                };
                let q = oscillator::moment_oracle(&cfg, &f, OracleMethod::Quadrature, 0, 0)?;
                Ok(((q.value - t2).abs(), 1e-8))
            },
        );
    }
    let samples = p.samples;
    let seed = p.seed;
    r.check(
        format!("closed-form moments vs Monte Carlo ({samples} samples), worst deviation in sigma"),
        "oscillator::moment",
        || {
            let mut worst = 0.0f64;
            for (label, f, which) in monomials(n) {
                let est =
                    oscillator::moment_oracle(&cfg, &f, OracleMethod::MonteCarlo, samples, seed)?;
                let c = oscillator::moment(&cfg, which)?;
                let dev = if est.error > 0.0 {
                    (est.value - c).abs() / est.error
                } else if (est.value - c).abs() < 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                };
                if dev > 3.0 {
                    log::warn!(
                        "{label}: closed form {c}, Monte Carlo {} +- {}",
                        est.value,
                        est.error
                    );
                }
                worst = worst.max(dev);
            }
            Ok((worst, 3.0))
        },
    );
}

fn plane_wave_error(h: f64, p: &Params) -> Result<f64> {
    let (k, kappa) = (1.3, 0.7);
    let w = (k * k + p.lambda * p.lambda * kappa * kappa + p.m * p.m).sqrt();
    let g = Grid {
        nt: 7,
        nx: 7,
        nth: 7,
        dt: h,
        dx: h,
        dth: h,
        lambda: p.lambda,
        m: p.m,
    };
    let f = LatticeField::from_fn(g, |t, x, th| {
        Complex64::from_polar(1.0, k * x + kappa * th - w * t)
    })?;
    Ok(kg_apply_at(&f, 3, 3, 3)?.norm())
}

/// Real root of `s(w)` in `[lo, hi]` by bisection; `s` must change sign.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::Numerical(
            "no sign change while bracketing the pole".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn field_checks(r: &mut Recorder, p: &Params) {
    r.check(
        "plane-wave KG residual converges at order 2 (three refinements)",
        "field::kg_apply",
        || {
            let errs: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
                .iter()
                .map(|&h| plane_wave_error(h, p))
                .collect::<Result<_>>()?;
            let worst = errs
                .windows(2)
                .map(|e| ((e[0] / e[1]).log2() - 2.0).abs())
                .fold(0.0, f64::max);
            Ok((worst, 0.1))
        },
    );
    let grid = Grid {
        nt: p.nt,
        nx: p.nx,
        nth: p.nth,
        dt: 0.05,
        dx: 0.1,
        dth: 0.1,
        lambda: p.lambda,
        m: p.m,
    };
    r.check(
        "retarded Green's solve reproduces the source",
        "field::greens_solve",
        || {
            let mut f = LatticeField::zeros(grid.clone())?;
            let at = grid.index(grid.nt / 3, grid.nx / 2, grid.nth / 2);
            f.values[at] = Complex64::new(1.0 / (grid.dt * grid.dx * grid.dth), 0.0);
            let src = SourceTerm::new(f)?;
            let sol = field::greens_solve(&src, None)?;
            let res = field::kg_apply(&sol.field);
            let mut worst = 0.0f64;
            for it in 1..grid.nt - 1 {
                for ix in 1..grid.nx - 1 {
                    for ith in 1..grid.nth - 1 {
                        let i = grid.index(it, ix, ith);
                        worst = worst.max((res.values[i] - src.field.values[i]).norm());
                    }
                }
            }
            Ok((worst / src.field.max_abs(), 1e-6))
        },
    );
    let steps = p.steps;
    let cfl = p.cfl;
    r.check(
        format!("P0, P1, Ptheta, Q drift over {steps} leapfrog steps at CFL {cfl}"),
        "field::noether_charges",
        || {
            let mut lf = Leapfrog::plane_wave(
                24,
                16,
                0.2,
                0.25,
                cfl,
                p.lambda,
                p.m,
                Complex64::new(0.7, 0.0),
                (2, 1),
                1.0,
            )?;
            let bump = Leapfrog::plane_wave(
                24,
                16,
                0.2,
                0.25,
                cfl,
                p.lambda,
                p.m,
                Complex64::new(0.0, 0.3),
                (-1, 2),
                -1.0,
            )?;
            for (a, b) in lf.prev.iter_mut().zip(&bump.prev) {
                *a += b;
            }
            for (a, b) in lf.cur.iter_mut().zip(&bump.cur) {
                *a += b;
            }
            let c0 = lf.charges()?;
            for _ in 0..steps {
                lf.advance();
            }
            let c1 = lf.charges()?;
            let floor = 1e-12 * c0.p0.abs();
            let worst = [
                (c0.p0, c1.p0),
                (c0.p1, c1.p1),
                (c0.ptheta, c1.ptheta),
                (c0.q, c1.q),
            ]
            .iter()
            .map(|(a, b)| (a - b).abs() / a.abs().max(floor))
            .fold(0.0, f64::max);
            Ok((worst, 1e-6))
        },
    );
    r.check(
        "propagator poles at K^0 = +-omega",
        "field::propagator",
        || {
            let mut k2 = [[0.0; 4]; 4];
            k2[1][2] = 0.6;
            k2[2][1] = -0.6;
            let kv = [0.5, -0.2, 0.3];
            let w = field::dispersion(&kv, &k2, p.lambda, p.m)?;
            let mut bad = 0.0;
            for s in [1.0, -1.0] {
                let on = field::ExtendedMomentum::new([s * w, kv[0], kv[1], kv[2]], k2, p.lambda)?;
                if !matches!(field::propagator(&on, p.m, None), Err(Error::Pole(_))) {
                    bad += 1.0;
                }
            }
            // lattice symbol root vs continuum frequency at a fine grid
            let h = 1e-3;
            let g = Grid {
                nt: 8,
                nx: 8,
                nth: 8,
                dt: h,
                dx: h,
                dth: h,
                lambda: p.lambda,
                m: p.m,
            };
            let (k, kappa) = (0.5, 0.6);
            let wc = (k * k + p.lambda * p.lambda * kappa * kappa + p.m * p.m).sqrt();
            let root = bisect(
                |x| field::lattice_symbol(&g, Complex64::new(x, 0.0), k, kappa).re,
                0.5 * wc,
                1.5 * wc,
            )?;
            let neg = bisect(
                |x| field::lattice_symbol(&g, Complex64::new(x, 0.0), k, kappa).re,
                -1.5 * wc,
                -0.5 * wc,
            )?;
            Ok((bad + (root - wc).abs().max((neg + wc).abs()), 1e-5))
        },
    );
    r.check(
        "leapfrog plane wave frequency matches the dispersion to O(h^2)",
        "field::dispersion",
        || {
            let err = |h: f64| -> Result<f64> {
                let nx = (3.2 / h).round() as usize;
                let mut lf = Leapfrog::plane_wave(
                    nx,
                    nx,
                    h,
                    h,
                    cfl,
                    p.lambda,
                    p.m,
                    Complex64::new(1.0, 0.0),
                    (1, 1),
                    1.0,
                )?;
                let (k, kappa) = Leapfrog::wavenumbers(nx, nx, h, h, (1, 1));
                let w = (k * k + p.lambda * p.lambda * kappa * kappa + p.m * p.m).sqrt();
                let mut phase = 0.0;
                for _ in 0..40 {
                    let before = lf.cur[0];
                    lf.advance();
                    phase -= (lf.cur[0] / before).arg();
                }
                Ok((phase / (40.0 * lf.dt) - w).abs())
            };
            let ratio = err(0.2)? / err(0.1)?;
            Ok(((ratio.log2() - 2.0).abs(), 0.25))
        },
    );
    let d = p.d;
    let mut rng = p.rng(8);
    let mut random_theta = |n: usize| {
        let mut t: Mat<BigRational> = Mat::zeros(n, n);
        for a in 0..n {
            for b in a + 1..n {
                let v = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
                t[(a, b)] = v.clone();
                t[(b, a)] = -v;
            }
        }
        t
    };
    let theta = random_theta(d);
    let t3 = random_theta(3);
    r.check(
        format!("star commutator of coordinates is i theta exactly, D={d}"),
        "field::moyal_star",
        || {
            let mut bad = 0;
            for a in 0..d {
                for b in 0..d {
                    let (xa, xb) = (Poly::var(d, a + 1), Poly::var(d, b + 1));
                    let c = field::moyal_star(&xa, &xb, &theta, 3)?
                        .sub(&field::moyal_star(&xb, &xa, &theta, 3)?);
                    let want = Poly::constant(d, GaussianRational::imag(theta[(a, b)].clone()));
                    if c != want {
                        bad += 1;
                    }
                }
            }
            Ok(count(bad))
        },
    );
    let n = (p.trials / 5).max(1);
    r.check(
        format!("star product associative on {n} random cubic triples at order 6"),
        "field::moyal_star",
        || {
            let vars = 3;
            let mut bad = 0;
            for _ in 0..n {
                let mut poly = || {
                    let mut f = Poly::zero(vars);
                    for _ in 0..3 {
                        let mut e = vec![0u32; vars];
                        for _ in 0..rng.gen_range(0..=3) {
                            e[rng.gen_range(0..vars)] += 1;
                        }
                        f.add_term(
                            e,
                            GaussianRational::new(
                                rat(rng.gen_range(-3..=3), 1),
                                rat(rng.gen_range(-2..=2), 1),
                            ),
                        );
                    }
                    f
                };
                let (f, g, h) = (poly(), poly(), poly());
                let l = field::moyal_star(&field::moyal_star(&f, &g, &t3, 6)?, &h, &t3, 6)?;
                let r = field::moyal_star(&f, &field::moyal_star(&g, &h, &t3, 6)?, &t3, 6)?;
                if l != r {
                    bad += 1;
                }
            }
            Ok(count(bad))
        },
    );
}
