use g2zeta_core::counting;
use g2zeta_core::g2::{self, Quadruple};
use g2zeta_core::haar::{self, PhaseResolver, VarDomain};
use g2zeta_core::integrals::{self, Case11Mode, CaseId, LocalParams};
use g2zeta_core::padic::{self, rat, Valuation};
use g2zeta_core::poly::IntPoly;
use g2zeta_core::symval::{QPoly, ZetaExpr};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const PRIMES: [u64; 5] = [5, 11, 17, 23, 29];

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=30).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn gl2() -> impl Strategy<Value = g2::Matrix> {
    (rational(), rational(), rational(), rational())
        .prop_map(|(a, b, c, d)| g2::gl2(a, b, c, d))
        .prop_filter("invertible", |g| !g.det().is_zero())
}

fn quadruple() -> impl Strategy<Value = Quadruple> {
    (rational(), rational(), rational(), rational()).prop_map(|(a, b, c, d)| [a, b, c, d])
}

fn qpoly(p: u64) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((-6i64..=6, 0i64..=6), 0..4).prop_map(move |t| QPoly::from_terms(p, &t))
}

fn zeta(p: u64) -> impl Strategy<Value = ZetaExpr> {
    (qpoly(p), qpoly(p)).prop_filter_map("denominator nonzero at q = 0", move |(n, d)| {
        let d = d.add(&QPoly::one(p)).sub(&QPoly::constant(p, d.coeff(0)));
        ZetaExpr::new(n, d).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_additive(a in nonzero_rational(), b in nonzero_rational(), pi in 0usize..5) {
        let p = PRIMES[pi];
        let (va, vb) = (padic::ord(&a, p).unwrap(), padic::ord(&b, p).unwrap());
        let vab = padic::ord(&(&a * &b), p).unwrap();
        prop_assert_eq!(vab, Valuation::Finite(va.finite().unwrap() + vb.finite().unwrap()));
    }

    #[test]
    fn ultrametric_inequality(a in rational(), b in rational(), pi in 0usize..5) {
        let p = PRIMES[pi];
        let s = &a + &b;
        let abs = |x: &BigRational| padic::abs_p(x, p).unwrap();
        prop_assert!(abs(&s) <= abs(&a).max(abs(&b)));
    }

    #[test]
    fn character_is_additive(a in rational(), b in rational(), pi in 0usize..5) {
        let p = PRIMES[pi];
        let lhs = padic::e_p(&(&a + &b), p).unwrap();
        let rhs = padic::e_p(&a, p).unwrap().add(&padic::e_p(&b, p).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn zeta_ring_laws(a in zeta(5), b in zeta(5), c in zeta(5)) {
        prop_assert!(a.add(&b).sub(&b).equals(&a));
        prop_assert!(a.mul(&b.add(&c)).equals(&a.mul(&b).add(&a.mul(&c))));
        if !b.is_zero() {
            prop_assert!(a.mul(&b).div(&b).unwrap().equals(&a));
        }
    }

    #[test]
    fn zeta_eval_is_a_homomorphism(a in zeta(5), b in zeta(5), s in 1.1f64..3.0) {
        let (x, y) = (a.eval(s).unwrap(), b.eval(s).unwrap());
        let sum = a.add(&b).eval(s).unwrap();
        let prod = a.mul(&b).eval(s).unwrap();
        prop_assert!((sum - (x + y)).abs() <= 1e-9 * (1.0 + x.abs() + y.abs()));
        prop_assert!((prod - x * y).abs() <= 1e-9 * (1.0 + (x * y).abs()));
    }

    #[test]
    fn varrho_is_a_homomorphism(g in gl2(), h in gl2()) {
        let lhs = g2::varrho(&g).unwrap().mul(&g2::varrho(&h).unwrap());
        prop_assert_eq!(lhs, g2::varrho(&g.mul(&h)).unwrap());
    }

    #[test]
    fn varrho_matches_form_action(g in gl2(), c in quadruple()) {
        prop_assert_eq!(g2::act(&c, &g2::varrho(&g).unwrap()), g2::act_on_form(&c, &g));
    }

    #[test]
    fn discriminant_covariance(g in gl2(), c in quadruple()) {
        let det = g.det();
        let moved = g2::disc_p(&g2::act(&c, &g2::varrho(&g).unwrap()));
        prop_assert_eq!(moved, &det * &det * g2::disc_p(&c));
    }

    #[test]
    fn levi_embedding_is_a_homomorphism(g in gl2(), h in gl2()) {
        let lhs = g2::m(&g).unwrap().matrix.mul(&g2::m(&h).unwrap().matrix);
        prop_assert_eq!(lhs, g2::m(&g.mul(&h)).unwrap().matrix);
    }

    #[test]
    fn levi_normalizes_n(g in gl2(), x in rational(), y in rational(), z in rational(), u in rational(), v in rational()) {
        let mg = g2::m(&g).unwrap().matrix;
        let conj = mg.inverse().unwrap().mul(&g2::n(&x, &y, &z, &u, &v).matrix).mul(&mg);
        let nu = g2::nu(&conj).unwrap();
        let want = g2::rho(&g).unwrap().apply_row(&[x, y, u, v]);
        prop_assert_eq!(nu, want);
    }

    #[test]
    fn weyl_conjugation(x in rational(), y in rational(), z in rational(), u in rational(), v in rational()) {
        let w = g2::w0().matrix;
        let lhs = w.mul(&g2::n(&x, &y, &z, &u, &v).matrix).mul(&w.inverse().unwrap());
        prop_assert_eq!(lhs, g2::n_minus(&-x, &y, &z, &u, &-v).matrix);
    }

    #[test]
    fn n_is_a_bijection_onto_its_image(x in rational(), y in rational(), z in rational(), u in rational(), v in rational()) {
        let e = g2::n(&x, &y, &z, &u, &v).matrix;
        prop_assert_eq!(g2::n_coordinates(&e), Some([x, y, z, u, v]));
        prop_assert_eq!(e.det(), BigRational::one());
    }

    #[test]
    fn orbit_kind_is_gl2_invariant(seed in any::<u64>(), pi in 0usize..2, c in prop::array::uniform4(0i64..11)) {
        use rand::SeedableRng;
        let p = [5u64, 11][pi];
        prop_assume!(c.iter().any(|&x| x % p as i64 != 0));
        let c = g2::quadruple(c);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = g2::random_unimodular_mod_p(&mut rng, p);
        let moved = g2::reduce_quadruple(&g2::act(&c, &g2::varrho(&g).unwrap()), p);
        prop_assert_eq!(g2::classify_form(&c, p).unwrap().kind, g2::classify_form(&moved, p).unwrap().kind);
    }

    #[test]
    fn psi1_count_formula(pi in 0usize..2, b in 1i64..11, k in 1u32..=2) {
        let p = [5u64, 11][pi];
        prop_assume!(b % p as i64 != 0);
        let r = counting::psi1_count(b, p, k).unwrap();
        prop_assert!(r.matches_prediction());
    }

    #[test]
    fn brute_and_lift_counts_agree(pi in 0usize..2, b in 1i64..11, c in 1i64..11) {
        let p = [5u64, 11][pi];
        let prob = counting::conjecture_problem(p, b, c, 2).unwrap();
        let brute = counting::count_brute(&prob, u128::MAX).unwrap();
        let lift = counting::count_exhaustive_lift(&prob, u128::MAX).unwrap();
        prop_assert_eq!(brute, lift);
    }

    #[test]
    fn theorem_holds_for_every_irreducible_pair(pi in 0usize..5, idx in any::<prop::sample::Index>()) {
        let p = PRIMES[pi];
        let pairs = counting::irreducible_unit_pairs(p).unwrap();
        let (b, c) = pairs[idx.index(pairs.len())];
        let params = LocalParams::new(p, b, c).unwrap();
        let total = integrals::aggregate(&params, Case11Mode::Counted).unwrap().total;
        prop_assert!(total.equals(&integrals::theorem_target(p)));
    }

    #[test]
    fn case_ids_roundtrip(n in 1u8..=16) {
        let c = CaseId::from_number(n).unwrap();
        prop_assert_eq!(c.to_string().parse::<CaseId>().unwrap(), c);
    }

    #[test]
    fn unit_phase_sums_match_closed_values(pi in 0usize..2, t in -3i64..=2) {
        let p = [5u64, 11][pi];
        let res = PhaseResolver::new(p, 3).unwrap();
        prop_assert_eq!(res.r(t), haar::unit_value(p, t));
    }
}

/// Shell volumes sum to the product measure, whatever the polynomial.
#[test]
fn ord_distribution_is_a_probability_split() {
    let g = IntPoly::from_terms(2, &[(1, &[2, 0]), (3, &[1, 1]), (3, &[0, 2]), (-1, &[0, 0])]).unwrap();
    for p in [5u64, 11] {
        let dist = haar::ord_distribution(&g, &[VarDomain::Full, VarDomain::Unit], p, 6, 1_000_000).unwrap();
        assert_eq!(dist.total(), rat(p as i64 - 1, p as i64));
    }
}
