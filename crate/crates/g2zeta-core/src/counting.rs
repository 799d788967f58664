//! Counting solutions of polynomial congruences mod `p^k`.

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::haar::VarDomain;
use crate::padic;
use crate::poly::{IntPoly, ModPoly};

/// Default cap on evaluated tuples.
pub const DEFAULT_WORK_LIMIT: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceProblem {
    pub names: Vec<String>,
    pub poly: IntPoly,
    pub prime: u64,
    pub exponent: u32,
    pub domains: Vec<VarDomain>,
}

impl CongruenceProblem {
    pub fn new(names: &[&str], poly: IntPoly, prime: u64, exponent: u32, domains: Vec<VarDomain>) -> Result<Self> {
        padic::check_prime(prime)?;
        if exponent == 0 {
            return Err(Error::InvalidInput("exponent k must be at least 1".into()));
        }
        if poly.nvars() != names.len() {
            return Err(Error::Arity { expected: names.len(), found: poly.nvars() });
        }
        if domains.len() != names.len() {
            return Err(Error::Arity { expected: names.len(), found: domains.len() });
        }
        if (prime as u128).checked_pow(exponent).is_none_or(|m| m > u64::MAX as u128 / 4) {
            return Err(Error::InvalidInput(format!("modulus {prime}^{exponent} too large")));
        }
        Ok(CongruenceProblem { names: names.iter().map(|s| s.to_string()).collect(), poly, prime, exponent, domains })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.exponent)
    }

    pub fn with_exponent(&self, k: u32) -> Result<Self> {
        let names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        Self::new(&names, self.poly.clone(), self.prime, k, self.domains.clone())
    }

    pub fn polynomial_string(&self) -> String {
        self.poly.display_with(&self.names)
    }

    /// Size of the residue space `p^(k n)`, units excluded.
    pub fn tuple_count(&self) -> u128 {
        let n = self.modulus() as u128;
        let units = n - n / self.prime as u128;
        self.domains
            .iter()
            .map(|d| if *d == VarDomain::Unit { units } else { n })
            .fold(1u128, |a, b| a.saturating_mul(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CountMethod {
    /// Every residue tuple mod `p^k` evaluated.
    BruteForce,
    /// Every solution mod `p^j` lifted through all `p^n` candidates mod
    /// `p^(j+1)`; exhaustive, no smoothness assumption.
    ExhaustiveLift,
    /// `base * p^(2(k-1))`, valid under a gradient certificate.
    HenselLift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub value: u128,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub prime: u64,
    pub exponent: u32,
    pub polynomial: String,
    pub domains: Vec<VarDomain>,
    pub count: u128,
    pub predicted: Option<Prediction>,
    pub method: CountMethod,
    pub elapsed_ms: u128,
}

impl CountReport {
    fn new(prob: &CongruenceProblem, count: u128, method: CountMethod, start: Instant) -> Self {
        CountReport {
            prime: prob.prime,
            exponent: prob.exponent,
            polynomial: prob.polynomial_string(),
            domains: prob.domains.clone(),
            count,
            predicted: None,
            method,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }

    pub fn matches_prediction(&self) -> bool {
        self.predicted.as_ref().is_none_or(|p| p.value == self.count)
    }
}

fn axis_values(domain: VarDomain, n: u64, p: u64) -> Vec<u64> {
    (0..n).filter(|t| domain == VarDomain::Full || t % p != 0).collect()
}

/// Exact count by evaluating every tuple.
pub fn count_brute(prob: &CongruenceProblem, work_limit: u128) -> Result<u128> {
    let required = prob.tuple_count();
    if required > work_limit {
        return Err(Error::WorkLimit { required, limit: work_limit });
    }
    let n = prob.modulus();
    let modp = prob.poly.reduce(n);
    let axes: Vec<Vec<u64>> = prob.domains.iter().map(|d| axis_values(*d, n, prob.prime)).collect();
    if axes.is_empty() {
        return Ok(u128::from(modp.is_zero()));
    }
    // Fix every axis but the last, then run Horner along the last axis.
    let (last, prefix_axes) = axes.split_last().unwrap();
    let horner = |coeffs: &[u64], x: u64| -> u64 {
        if n < 1 << 32 {
            coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % n)
        } else {
            let nn = n as u128;
            coeffs.iter().rev().fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % nn) as u64
        }
    };
    let count_prefix = |prefix: &[u64]| -> u128 {
        let coeffs = modp.restrict_last(prefix);
        last.iter().filter(|&&x| horner(&coeffs, x) == 0).count() as u128
    };
    if prefix_axes.is_empty() {
        return Ok(count_prefix(&[]));
    }
    let first = &prefix_axes[0];
    let rest = &prefix_axes[1..];
    let inner: usize = rest.iter().map(Vec::len).product();
    let count = first
        .par_iter()
        .map(|&x0| {
            let mut point = vec![0u64; prefix_axes.len()];
            point[0] = x0;
            let mut digits = vec![0usize; rest.len()];
            for (j, axis) in rest.iter().enumerate() {
                point[j + 1] = axis[0];
            }
            let mut c: u128 = 0;
            for _ in 0..inner {
                c += count_prefix(&point);
                // odometer step, last axis fastest
                for j in (0..rest.len()).rev() {
                    digits[j] += 1;
                    if digits[j] < rest[j].len() {
                        point[j + 1] = rest[j][digits[j]];
                        break;
                    }
                    digits[j] = 0;
                    point[j + 1] = rest[j][0];
                }
            }
            c
        })
        .sum();
    Ok(count)
}

/// Exact count by lifting every solution one level at a time.
pub fn count_exhaustive_lift(prob: &CongruenceProblem, work_limit: u128) -> Result<u128> {
    let p = prob.prime;
    let nv = prob.nvars();
    let mut sols: Vec<Vec<u64>> = Vec::new();
    let base = prob.with_exponent(1)?;
    let modp = base.poly.reduce(p);
    let axes: Vec<Vec<u64>> = prob.domains.iter().map(|d| axis_values(*d, p, p)).collect();
    let total: usize = axes.iter().map(Vec::len).product();
    for mut idx in 0..total {
        let mut pt = vec![0u64; nv];
        for (j, axis) in axes.iter().enumerate().rev() {
            pt[j] = axis[idx % axis.len()];
            idx /= axis.len();
        }
        if modp.eval(&pt) == 0 {
            sols.push(pt);
        }
    }
    let lifts = p.pow(nv as u32);
    let mut work: u128 = total as u128;
    for j in 1..prob.exponent {
        work = work.saturating_add(sols.len() as u128 * lifts as u128);
        if work > work_limit {
            return Err(Error::WorkLimit { required: work, limit: work_limit });
        }
        let pj = p.pow(j);
        let next_mod = prob.poly.reduce(pj * p);
        sols = sols
            .par_iter()
            .flat_map_iter(|t| {
                let next_mod = &next_mod;
                (0..lifts).filter_map(move |mut a| {
                    let mut pt = t.clone();
                    for x in pt.iter_mut() {
                        *x += pj * (a % p);
                        a /= p;
                    }
                    (next_mod.eval(&pt) == 0).then_some(pt)
                })
            })
            .collect();
    }
    Ok(sols.len() as u128)
}

/// Brute force when the residue space fits the budget, otherwise the
/// exhaustive lift.
pub fn count_exact(prob: &CongruenceProblem, work_limit: u128) -> Result<CountReport> {
    let start = Instant::now();
    if prob.tuple_count() <= work_limit {
        let c = count_brute(prob, work_limit)?;
        Ok(CountReport::new(prob, c, CountMethod::BruteForce, start))
    } else {
        let c = count_exhaustive_lift(prob, work_limit)?;
        Ok(CountReport::new(prob, c, CountMethod::ExhaustiveLift, start))
    }
}

/// Evidence that every solution mod `p` is a smooth point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HenselCertificate {
    pub prime: u64,
    pub base_count: u128,
    pub checked: usize,
}

/// Checks the gradient mod `p` at every base solution of a three-variable
/// problem.
pub fn hensel_certificate(prob: &CongruenceProblem) -> Result<HenselCertificate> {
    if prob.nvars() != 3 {
        return Err(Error::Arity { expected: 3, found: prob.nvars() });
    }
    let p = prob.prime;
    let modp = prob.poly.reduce(p);
    let grads: Vec<ModPoly> = (0..3).map(|i| modp.partial(i)).collect();
    let axes: Vec<Vec<u64>> = prob.domains.iter().map(|d| axis_values(*d, p, p)).collect();
    let mut base = 0u128;
    let mut checked = 0;
    for &a in &axes[0] {
        for &b in &axes[1] {
            for &c in &axes[2] {
                let pt = [a, b, c];
                if modp.eval(&pt) != 0 {
                    continue;
                }
                base += 1;
                checked += 1;
                if grads.iter().all(|g| g.eval(&pt) == 0) {
                    return Err(Error::SingularPoint { tuple: pt.to_vec() });
                }
            }
        }
    }
    Ok(HenselCertificate { prime: p, base_count: base, checked })
}

/// `base * p^(2(k-1))` for a certified three-variable problem.
pub fn hensel_count(prob: &CongruenceProblem, cert: &HenselCertificate) -> Result<CountReport> {
    let start = Instant::now();
    if prob.nvars() != 3 {
        return Err(Error::Arity { expected: 3, found: prob.nvars() });
    }
    if cert.prime != prob.prime {
        return Err(Error::InvalidInput("certificate issued for a different prime".into()));
    }
    let p = prob.prime as u128;
    let count = cert.base_count * p.pow(2 * (prob.exponent - 1));
    Ok(CountReport::new(prob, count, CountMethod::HenselLift, start))
}

/// Roots of `g(u) = -u^3 + b u + c` mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CubicRoots {
    /// Distinct roots in `F_p`.
    pub count: u8,
    /// The discriminant `4 b^3 - 27 c^2` vanishes mod `p`.
    pub degenerate: bool,
}

fn residue(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub fn cubic_roots(b: i64, c: i64, p: u64) -> Result<CubicRoots> {
    padic::check_prime(p)?;
    let (bb, cc) = (residue(b, p) as u128, residue(c, p) as u128);
    let pp = p as u128;
    let count = (0..pp).filter(|&u| (pp * pp * pp + bb * u + cc - u * u * u % pp).is_multiple_of(pp)).count();
    let disc = (4 * bb * bb * bb + pp * pp * 27 - 27 * cc * cc % pp) % pp;
    Ok(CubicRoots { count: count as u8, degenerate: disc == 0 })
}

/// `N(b, c)`, the number of distinct roots of `g` mod `p`.
pub fn cubic_root_count(b: i64, c: i64, p: u64) -> Result<u8> {
    Ok(cubic_roots(b, c, p)?.count)
}

pub fn is_irreducible_cubic(b: i64, c: i64, p: u64) -> Result<bool> {
    Ok(cubic_root_count(b, c, p)? == 0)
}

/// `h(r, y, u) = g(u) - (3 u y r + y^3 r^2 - r)` with `r` a unit.
pub fn conjecture_problem(p: u64, b: i64, c: i64, k: u32) -> Result<CongruenceProblem> {
    let poly = IntPoly::from_terms(
        3,
        &[(-1, &[0, 0, 3]), (b, &[0, 0, 1]), (c, &[0, 0, 0]), (-3, &[1, 1, 1]), (-1, &[2, 3, 0]), (1, &[1, 0, 0])],
    )?;
    CongruenceProblem::new(&["r", "y", "u"], poly, p, k, vec![VarDomain::Unit, VarDomain::Full, VarDomain::Full])
}

/// `w^2 + 3 w y + 3 y^2 - b`.
pub fn psi1_problem(b: i64, p: u64, k: u32) -> Result<CongruenceProblem> {
    let poly = IntPoly::from_terms(2, &[(1, &[2, 0]), (3, &[1, 1]), (3, &[0, 2]), (-b, &[0, 0])])?;
    CongruenceProblem::new(&["w", "y"], poly, p, k, vec![VarDomain::Full, VarDomain::Full])
}

fn require_five_mod_six(p: u64) -> Result<()> {
    padic::check_prime(p)?;
    if p % 6 != 5 {
        return Err(Error::Precondition(format!("p = {p} is not 5 mod 6")));
    }
    Ok(())
}

/// Count of `w^2 + 3wy + 3y^2 = b mod p^k` against `(p + 1) p^(k-1)`.
pub fn psi1_count(b: i64, p: u64, k: u32) -> Result<CountReport> {
    require_five_mod_six(p)?;
    if residue(b, p) == 0 {
        return Err(Error::Precondition(format!("b = {b} is not a unit mod {p}")));
    }
    let prob = psi1_problem(b, p, k)?;
    let mut report = count_exact(&prob, DEFAULT_WORK_LIMIT)?;
    report.predicted =
        Some(Prediction { value: (p as u128 + 1) * (p as u128).pow(k - 1), formula: "(p+1)p^(k-1)".into() });
    Ok(report)
}

/// Which `(b, c)` pairs [`verify_conjecture`] examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "mode")]
pub enum PairSelection {
    All,
    Sample { n: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub b: u64,
    pub c: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub prime: u64,
    pub selection: PairSelection,
    pub expected: u64,
    /// Irreducible unit pairs available at this prime.
    pub irreducible_pairs: usize,
    /// Pairs whose count was computed.
    pub pairs_tested: usize,
    pub counterexamples: Vec<Counterexample>,
    pub warning: Option<String>,
    pub elapsed_ms: u128,
}

impl ConjectureReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.pairs_tested > 0
    }
}

/// Root counts of `-u^3 + B u + C` mod `p` for every `(B, C)`.
struct RootTable {
    p: usize,
    counts: Vec<u8>,
}

impl RootTable {
    fn new(p: u64) -> Self {
        let pu = p as usize;
        let mut counts = vec![0u8; pu * pu];
        for u in 0..p {
            let u3 = u * u % p * u % p;
            for bb in 0..p {
                // C = u^3 - B u
                let cc = (u3 + p * p - bb * u % p) % p;
                counts[bb as usize * pu + cc as usize] += 1;
            }
        }
        RootTable { p: pu, counts }
    }

    fn get(&self, bb: u64, cc: u64) -> u8 {
        self.counts[bb as usize * self.p + cc as usize]
    }
}

/// Number of `(r, y, u)` in `F_p^* x F_p x F_p` with
/// `g(u) = 3 u y r + y^3 r^2 - r`, grouped by `u`: for fixed `(r, y)` the
/// equation is `-u^3 + (b - 3 y r) u + (c - y^3 r^2 + r) = 0`.
fn conjecture_count(table: &RootTable, p: u64, b: u64, c: u64) -> u64 {
    let mut total = 0u64;
    for r in 1..p {
        for y in 0..p {
            let bb = (b + 3 * p * p - 3 * y % p * r % p) % p;
            let y3 = y * y % p * y % p;
            let cc = (c + p * p + r - y3 * r % p * r % p) % p;
            total += table.get(bb, cc) as u64;
        }
    }
    total
}

/// Checks that every irreducible unit pair `(b, c)` has `p^2 - 1` solutions
/// mod `p`.
pub fn verify_conjecture(p: u64, selection: PairSelection) -> Result<ConjectureReport> {
    let start = Instant::now();
    require_five_mod_six(p)?;
    let table = RootTable::new(p);
    let pairs: Vec<(u64, u64)> =
        (1..p).flat_map(|b| (1..p).map(move |c| (b, c))).filter(|&(b, c)| table.get(b, c) == 0).collect();
    let irreducible_pairs = pairs.len();
    let chosen: Vec<(u64, u64)> = match selection {
        PairSelection::All => pairs,
        PairSelection::Sample { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
            let mut idx = sample(&mut rng, pairs.len(), n.min(pairs.len())).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| pairs[i]).collect()
        }
    };
    let expected = p * p - 1;
    let counterexamples: Vec<Counterexample> = chosen
        .par_iter()
        .filter_map(|&(b, c)| {
            let count = conjecture_count(&table, p, b, c);
            (count != expected).then_some(Counterexample { b, c, count })
        })
        .collect();
    let warning = chosen.is_empty().then(|| format!("no irreducible unit pair at p = {p}"));
    Ok(ConjectureReport {
        prime: p,
        selection,
        expected,
        irreducible_pairs,
        pairs_tested: chosen.len(),
        counterexamples,
        warning,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Count of the conjecture polynomial for one pair mod `p`, by the root table.
pub fn conjecture_pair_count(p: u64, b: i64, c: i64) -> Result<u64> {
    padic::check_prime(p)?;
    let table = RootTable::new(p);
    Ok(conjecture_count(&table, p, residue(b, p), residue(c, p)))
}

/// Irreducible unit pairs `(b, c)` mod `p`, in increasing order.
pub fn irreducible_unit_pairs(p: u64) -> Result<Vec<(i64, i64)>> {
    padic::check_prime(p)?;
    let table = RootTable::new(p);
    Ok((1..p)
        .flat_map(|b| (1..p).map(move |c| (b, c)))
        .filter(|&(b, c)| table.get(b, c) == 0)
        .map(|(b, c)| (b as i64, c as i64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_examples() {
        let sq = IntPoly::from_terms(1, &[(1, &[2]), (-1, &[0])]).unwrap();
        let prob = CongruenceProblem::new(&["u"], sq, 5, 1, vec![VarDomain::Full]).unwrap();
        assert_eq!(count_brute(&prob, DEFAULT_WORK_LIMIT).unwrap(), 2);
        let conj = conjecture_problem(5, 1, 2, 1).unwrap();
        assert_eq!(count_brute(&conj, DEFAULT_WORK_LIMIT).unwrap(), 24);
        let psi = psi1_problem(1, 5, 1).unwrap();
        assert_eq!(count_brute(&psi, DEFAULT_WORK_LIMIT).unwrap(), 6);
    }

    #[test]
    fn brute_respects_work_limit() {
        let conj = conjecture_problem(11, 1, 3, 3).unwrap();
        assert!(matches!(count_brute(&conj, 1000), Err(Error::WorkLimit { .. })));
    }

    #[test]
    fn hensel_examples() {
        let base = conjecture_problem(5, 1, 2, 1).unwrap();
        let cert = hensel_certificate(&base).unwrap();
        assert_eq!(cert.base_count, 24);
        let lifted = hensel_count(&base.with_exponent(2).unwrap(), &cert).unwrap();
        assert_eq!(lifted.count, 600);
        let brute = count_brute(&base.with_exponent(2).unwrap(), DEFAULT_WORK_LIMIT).unwrap();
        assert_eq!(brute, 600);
        let zero_cert = HenselCertificate { prime: 5, base_count: 0, checked: 0 };
        assert_eq!(hensel_count(&base.with_exponent(4).unwrap(), &zero_cert).unwrap().count, 0);
        let psi = psi1_problem(1, 5, 2).unwrap();
        assert!(matches!(hensel_certificate(&psi), Err(Error::Arity { .. })));
    }

    #[test]
    fn singular_base_point_is_reported() {
        // r (u^2 + y^2): every point with u = y = 0 is singular.
        let poly = IntPoly::from_terms(3, &[(1, &[1, 0, 2]), (1, &[1, 2, 0])]).unwrap();
        let prob = CongruenceProblem::new(
            &["r", "y", "u"],
            poly,
            5,
            1,
            vec![VarDomain::Unit, VarDomain::Full, VarDomain::Full],
        )
        .unwrap();
        assert!(matches!(hensel_certificate(&prob), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn exhaustive_lift_agrees_with_brute() {
        for (b, c) in [(1, 2), (2, 1)] {
            let prob = conjecture_problem(5, b, c, 3).unwrap();
            assert_eq!(
                count_exhaustive_lift(&prob, DEFAULT_WORK_LIMIT).unwrap(),
                count_brute(&prob, DEFAULT_WORK_LIMIT).unwrap()
            );
        }
        let psi = psi1_problem(2, 5, 3).unwrap();
        assert_eq!(
            count_exhaustive_lift(&psi, DEFAULT_WORK_LIMIT).unwrap(),
            count_brute(&psi, DEFAULT_WORK_LIMIT).unwrap()
        );
    }

    fn roots_by_hand(b: i64, c: i64, p: i64) -> u8 {
        (0..p).filter(|u| (-u * u * u + b * u + c).rem_euclid(p) == 0).count() as u8
    }

    #[test]
    fn cubic_examples() {
        assert_eq!(cubic_root_count(1, 0, 5).unwrap(), 3);
        assert_eq!(cubic_root_count(1, 2, 5).unwrap(), 0);
        assert_eq!(cubic_root_count(1, 1, 5).unwrap(), 1);
        assert!(is_irreducible_cubic(1, 2, 5).unwrap());
        assert!(!is_irreducible_cubic(1, 0, 5).unwrap());
        assert_eq!(is_irreducible_cubic(1, 3, 11).unwrap(), roots_by_hand(1, 3, 11) == 0);
        // u^3 - 3u + 2 = (u - 1)^2 (u + 2)
        let d = cubic_roots(3, -2, 5).unwrap();
        assert_eq!(d, CubicRoots { count: 2, degenerate: true });
        for p in [5i64, 7, 11, 13] {
            for b in -3..p {
                for c in -3..p {
                    assert_eq!(cubic_root_count(b, c, p as u64).unwrap(), roots_by_hand(b, c, p));
                }
            }
        }
    }

    #[test]
    fn psi1_examples() {
        let r = psi1_count(1, 5, 1).unwrap();
        assert_eq!(r.count, 6);
        assert!(r.matches_prediction());
        assert_eq!(psi1_count(2, 5, 2).unwrap().count, 30);
        assert_eq!(psi1_count(1, 11, 1).unwrap().count, 12);
        assert!(matches!(psi1_count(1, 7, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn conjecture_examples() {
        let r5 = verify_conjecture(5, PairSelection::All).unwrap();
        assert!(r5.passed());
        assert!(r5.pairs_tested > 0);
        let r11 = verify_conjecture(11, PairSelection::All).unwrap();
        assert!(r11.passed());
        assert_eq!(r11.expected, 120);
        assert!(matches!(verify_conjecture(7, PairSelection::All), Err(Error::Precondition(_))));
    }

    #[test]
    fn table_count_agrees_with_brute() {
        for p in [5u64, 11] {
            for (b, c) in irreducible_unit_pairs(p).unwrap().into_iter().take(4) {
                let prob = conjecture_problem(p, b, c, 1).unwrap();
                assert_eq!(
                    conjecture_pair_count(p, b, c).unwrap() as u128,
                    count_brute(&prob, DEFAULT_WORK_LIMIT).unwrap()
                );
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = verify_conjecture(41, PairSelection::Sample { n: 50, seed: 7 }).unwrap();
        let b = verify_conjecture(41, PairSelection::Sample { n: 50, seed: 7 }).unwrap();
        assert_eq!(a.pairs_tested, 50);
        assert_eq!(a.counterexamples, b.counterexamples);
    }
}
