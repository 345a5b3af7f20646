use dfra_core::clifford::{anticommutator, build_gammas, max_entry, CMat};
use dfra_core::constraints::PhaseSpace;
use dfra_core::dfra::DfraAlgebra;
use dfra_core::symcore::{bracket, normal_form, Expression, Generator, Kind};
use dfra_core::GaussianRational;
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

fn arb_pair_kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Theta), Just(Kind::ThetaMomentum)]
}

/// Random term list: (generator indices, real part, imaginary part).
fn arb_expr(n_gens: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..n_gens, 0..4), -3i64..=3, -2i64..=2),
        0..5,
    )
}

fn build(gens: &[Generator], terms: &[(Vec<usize>, i64, i64)]) -> Expression {
    let mut e = Expression::zero();
    for (w, re, im) in terms {
        let c = GaussianRational::new(
            num_rational::BigRational::from_integer((*re).into()),
            num_rational::BigRational::from_integer((*im).into()),
        );
        e.add_term(w.iter().map(|&i| gens[i]).collect(), c);
    }
    e
}

fn is_canonical(e: &Expression) -> bool {
    e.terms()
        .all(|(w, c)| !c.is_zero() && w.windows(2).all(|p| p[0] <= p[1]))
}

proptest! {
    #[test]
    fn pair_indices_normalize_with_sign(kind in arb_pair_kind(), i in 0u8..6, j in 0u8..6) {
        match (Generator::pair(kind, i, j), Generator::pair(kind, j, i)) {
            (None, None) => prop_assert_eq!(i, j),
            (Some((s1, g1)), Some((s2, g2))) => {
                prop_assert_eq!(g1, g2);
                prop_assert_eq!(s1, -s2);
                prop_assert!(matches!(g1.index, dfra_core::symcore::Index::Pair(a, b) if a < b));
            }
            _ => prop_assert!(false, "asymmetric normalization"),
        }
    }

    #[test]
    fn normal_form_is_canonical_and_zero_free(d in 2usize..5, terms in arb_expr(12)) {
        let alg = DfraAlgebra::build(d, false).unwrap();
        let gens = alg.generators();
        let terms: Vec<_> = terms.into_iter().map(|(w, a, b)| (w.into_iter().map(|i| i % gens.len()).collect(), a, b)).collect();
        let e = build(&gens, &terms);
        prop_assert!(e.terms().all(|(_, c)| !c.is_zero()));
        let n = normal_form(&e, alg.table()).unwrap();
        prop_assert!(is_canonical(&n));
        prop_assert_eq!(normal_form(&n, alg.table()).unwrap(), n.clone());
        let sq = normal_form(&(&n * &n), alg.table()).unwrap();
        prop_assert!(is_canonical(&sq));
    }

    #[test]
    fn table_entries_antisymmetric_and_linear(d in 2usize..6, rel: bool, a in 0usize..64, b in 0usize..64) {
        let alg = DfraAlgebra::build(d, rel).unwrap();
        let gens = alg.generators();
        let (ga, gb) = (Expression::gen(gens[a % gens.len()]), Expression::gen(gens[b % gens.len()]));
        let ab = bracket(&ga, &gb, alg.table()).unwrap();
        let ba = bracket(&gb, &ga, alg.table()).unwrap();
        prop_assert_eq!(normal_form(&(ab.clone() + ba), alg.table()).unwrap(), Expression::zero());
        prop_assert!(ab.degree() <= 1);
    }

    #[test]
    fn poisson_table_is_canonical(d in 2usize..6) {
        let ps = PhaseSpace::new(d, false).unwrap();
        for (a, b, v) in ps.table().nonzero_entries() {
            let canonical = matches!(
                (a.kind, b.kind),
                (Kind::Coordinate, Kind::Momentum) | (Kind::Theta, Kind::ThetaMomentum) | (Kind::AuxZ, Kind::AuxK)
            ) && a.index == b.index;
            prop_assert!(canonical, "unexpected bracket {{{}, {}}}", a, b);
            prop_assert_eq!(v.as_scalar(), Some(GaussianRational::from_int(1)));
        }
        prop_assert_eq!(ps.table().nonzero_entries().len(), 2 * d + d * (d - 1) / 2);
    }

    #[test]
    fn gamma_anticommutators(a in 0usize..10, b in 0usize..10) {
        let gs = build_gammas();
        let eta = gs.eta()[a];
        let want = if a == b { CMat::identity(32, 32) * Complex64::new(-2.0 * eta, 0.0) } else { CMat::zeros(32, 32) };
        prop_assert!(max_entry(&(anticommutator(gs.get(a), gs.get(b)) - want)) < 1e-12);
    }
}

#[test]
fn gamma_zero_is_hermitian() {
    let gs = build_gammas();
    let g0 = gs.vector(0);
    assert!(max_entry(&(g0 - g0.adjoint())) < 1e-14);
    for mu in 1..4 {
        let g = gs.vector(mu);
        assert!(
            max_entry(&(g + g.adjoint())) < 1e-14,
            "spatial gammas are anti-Hermitian"
        );
    }
}
