//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

use std::time::{Duration, Instant};

use g2zeta_core::counting::{self, PairSelection};
use g2zeta_core::g2::{self, OrbitKind, Quadruple};
use g2zeta_core::integrals::{self, Case11Mode, CaseId, LocalParams, NumericConfig};
use g2zeta_core::padic::int;
use g2zeta_core::symval::{QPoly, ZetaExpr};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NUMERIC_TOL_COARSE: f64 = 1e-6;
const NUMERIC_TOL_FINE: f64 = 1e-9;
const THEOREM_PRIMES: [u64; 4] = [5, 11, 17, 23];
const PAIRS_PER_PRIME: usize = 3;
const IDENTITY_TRIALS: usize = 100;
const ORBIT_ACTIONS: usize = 100;

fn verdict(n: u8, name: &str, ok: bool, detail: &str) {
    println!("criterion {n}: {} ({name}) {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed: {detail}");
}

/// `(1 - q^3)(1 - p q^3)(1 - p^2 q^6)` expanded by hand.
fn target_oracle(p: u64) -> ZetaExpr {
    let p = p as i64;
    ZetaExpr::from_poly(QPoly::from_terms(
        p as u64,
        &[(1, 0), (-(1 + p), 3), (p - p * p, 6), (p * p + p * p * p, 9), (-p * p * p, 12)],
    ))
}

/// Irreducibility of `-u^3 + b u + c` by trying every residue.
fn irreducible_oracle(p: i64, b: i64, c: i64) -> bool {
    (0..p).all(|u| (-u * u * u + b * u + c).rem_euclid(p) != 0)
}

#[test]
fn criterion_1_main_theorem_identity() {
    let start = Instant::now();
    let mut checked = 0;
    let mut ok = true;
    for p in THEOREM_PRIMES {
        let pi = p as i64;
        let pairs: Vec<(i64, i64)> = (1..pi)
            .flat_map(|b| (1..pi).map(move |c| (b, c)))
            .filter(|&(b, c)| irreducible_oracle(pi, b, c))
            .take(PAIRS_PER_PRIME)
            .collect();
        ok &= pairs.len() == PAIRS_PER_PRIME;
        for (b, c) in pairs {
            let params = LocalParams::new(p, b, c).unwrap();
            let agg = integrals::aggregate(&params, Case11Mode::AssumeConjecture).unwrap();
            ok &= agg.total.equals(&target_oracle(p));
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    verdict(1, "main theorem identity", ok, &format!("{checked} (p, b, c) triples, exact, {elapsed:?}"));
}

/// Naive count of `(r, y, u)` with `r` a unit and `h = 0` mod `p`.
fn conjecture_count_oracle(p: i64, b: i64, c: i64) -> u64 {
    let mut n = 0;
    for r in 1..p {
        for y in 0..p {
            for u in 0..p {
                let h = -u * u * u + b * u + c - 3 * r * y * u - r * r * y * y * y + r;
                n += u64::from(h.rem_euclid(p) == 0);
            }
        }
    }
    n
}

#[test]
fn criterion_2_conjecture_reproduction() {
    let start = Instant::now();
    let mut ok = true;
    let mut full = 0;
    let mut sampled = 0;
    for p in (5..=89u64).filter(|&p| p % 6 == 5 && g2zeta_core::padic::is_prime(p)) {
        let selection = if p <= 29 { PairSelection::All } else { PairSelection::Sample { n: 50, seed: 1 } };
        let report = counting::verify_conjecture(p, selection).unwrap();
        ok &= report.passed() && report.expected == p * p - 1;
        if p <= 29 {
            ok &= report.pairs_tested == report.irreducible_pairs;
            full += report.pairs_tested;
        } else {
            ok &= report.pairs_tested >= 50;
            sampled += report.pairs_tested;
        }
    }
    // Independent triple loop on the two smallest primes.
    for p in [5i64, 11] {
        for b in 1..p {
            for c in 1..p {
                if irreducible_oracle(p, b, c) {
                    ok &= conjecture_count_oracle(p, b, c) == (p * p - 1) as u64;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(600);
    verdict(
        2,
        "conjecture counts",
        ok,
        &format!("{full} pairs exhaustively (p <= 29), {sampled} sampled (29 < p <= 89), {elapsed:?}"),
    );
}

#[test]
fn criterion_3_norm_form_counts() {
    let start = Instant::now();
    let mut ok = true;
    let mut runs = 0;
    for p in [5u64, 11, 17] {
        for k in 1..=3u32 {
            for b in 1..p as i64 {
                let report = counting::psi1_count(b, p, k).unwrap();
                let want = (p as u128 + 1) * (p as u128).pow(k - 1);
                ok &= report.count == want && report.method == counting::CountMethod::BruteForce;
                runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    verdict(3, "norm-form counts (p+1)p^(k-1)", ok, &format!("{runs} brute-force counts, {elapsed:?}"));
}

#[test]
fn criterion_4_hensel_multiplicativity() {
    let mut ok = true;
    let mut checked = 0;
    for p in [5u64, 11] {
        let pairs: Vec<(i64, i64)> = counting::irreducible_unit_pairs(p).unwrap().into_iter().take(5).collect();
        ok &= pairs.len() == 5;
        for (b, c) in pairs {
            let base = counting::conjecture_problem(p, b, c, 1).unwrap();
            let cert = counting::hensel_certificate(&base).unwrap();
            for k in 1..=2u32 {
                let lo = counting::count_exact(&base.with_exponent(k).unwrap(), counting::DEFAULT_WORK_LIMIT).unwrap();
                let hi_prob = base.with_exponent(k + 1).unwrap();
                let hi = counting::count_exact(&hi_prob, counting::DEFAULT_WORK_LIMIT).unwrap();
                let lifted = counting::hensel_count(&hi_prob, &cert).unwrap();
                let pp = (p as u128).pow(2);
                ok &= hi.count == pp * lo.count && hi.count == lifted.count;
                checked += 1;
            }
        }
    }
    verdict(4, "count(k+1) = p^2 count(k)", ok, &format!("{checked} (p, b, c, k) checks, exact"));
}

#[test]
fn criterion_5_numeric_symbolic_agreement() {
    let params = LocalParams::new(5, 1, 2).unwrap();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut vanishing = 0;
    for (depth, vmin, tol) in [(4u32, -10i64, NUMERIC_TOL_COARSE), (6, -14, NUMERIC_TOL_FINE)] {
        for s in [1.1, 1.5] {
            let cfg = NumericConfig::new(s, depth, vmin);
            for case in CaseId::all() {
                let r = integrals::evaluate_case(case, &params, Case11Mode::AssumeConjecture, Some(&cfg)).unwrap();
                let num = r.numeric.as_ref().unwrap();
                if CaseId::nonvanishing().contains(&case) {
                    let err = r.agreement.unwrap();
                    worst = worst.max(err);
                    ok &= err < tol;
                } else {
                    ok &= r.closed_form.is_zero() && num.value_re == 0.0 && num.value_im == 0.0 && num.certified_zero;
                    vanishing += 1;
                }
            }
        }
    }
    verdict(
        5,
        "numeric vs closed form",
        ok,
        &format!("worst relative error {worst:e}; {vanishing} vanishing evaluations exactly 0"),
    );
}

#[test]
fn criterion_6_matrix_identities() {
    let start = Instant::now();
    let report = g2::verify_identities(20_240_601, IDENTITY_TRIALS);
    let required = [
        "w0_conjugation",
        "x_alpha_plus_3beta_commutation",
        "nu_conjugation_rho",
        "rho_equals_w1_varrho_w1inv_on_generators",
        "p_covariance",
        "m_homomorphism",
    ];
    let mut ok = true;
    for name in required {
        let r = report.results.iter().find(|r| r.name == name);
        ok &= r.is_some_and(|r| r.passed() && r.trials >= IDENTITY_TRIALS);
    }
    ok &= report.passed();
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    verdict(
        6,
        "G2 matrix identities",
        ok,
        &format!("{} identities x {IDENTITY_TRIALS} trials, {elapsed:?}", report.results.len()),
    );
}

#[test]
fn criterion_7_reference_forms() {
    let mut ok = true;
    for p in THEOREM_PRIMES {
        for kind in
            [OrbitKind::ThreeDistinctLinear, OrbitKind::LinearTimesIrreducibleQuadratic, OrbitKind::IrreducibleCubic]
        {
            let z = integrals::jr_reference_values(kind, p).unwrap();
            ok &= !z.to_string().is_empty() && z.denominator().coeff(0) == int(1);
        }
        let cube = integrals::jr_reference_values(OrbitKind::IrreducibleCubic, p).unwrap();
        ok &= cube.equals(&target_oracle(p));
    }
    verdict(7, "reference quotients", ok, "three quotients render; cube-root quotient equals the product formula");
}

fn classify_random_orbits(p: u64, rng: &mut ChaCha8Rng) -> bool {
    use rand::Rng;
    let mut ok = true;
    for _ in 0..ORBIT_ACTIONS {
        let c: Quadruple = loop {
            let c: [i64; 4] = std::array::from_fn(|_| rng.gen_range(0..p as i64));
            if c.iter().any(|&x| x != 0) {
                break g2::quadruple(c);
            }
        };
        let g = g2::random_unimodular_mod_p(rng, p);
        let moved = g2::reduce_quadruple(&g2::act(&c, &g2::varrho(&g).unwrap()), p);
        let (a, b) = (g2::classify_form(&c, p).unwrap(), g2::classify_form(&moved, p).unwrap());
        ok &= a.kind == b.kind && a.degenerate == b.degenerate;
        // Same statement for characters, which move by rho.
        let moved_sigma = g2::reduce_quadruple(&g2::act(&c, &g2::rho(&g).unwrap()), p);
        ok &= g2::orbit_classify(&c, p).unwrap().kind == g2::orbit_classify(&moved_sigma, p).unwrap().kind;
    }
    ok
}

#[test]
fn criterion_8_orbit_classifier() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    for p in [5u64, 11] {
        ok &= classify_random_orbits(p, &mut rng);
        let label = g2::orbit_classify(&g2::quadruple([1, 0, 0, p as i64]), p).unwrap();
        ok &= label.kind == OrbitKind::RepeatedRoot && label.degenerate && label.discriminant_valuation == Some(2);
    }
    verdict(
        8,
        "orbit classifier invariance",
        ok,
        &format!("{ORBIT_ACTIONS} actions per prime at p = 5, 11; (1,0,0,p) degenerate"),
    );
}
