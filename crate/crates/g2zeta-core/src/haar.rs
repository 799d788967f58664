//! Haar-measure integration on `Q_p` with exact phases.
//!
//! Three layers live here:
//!
//! - closed-form character integrals ([`char_integral_zp`],
//!   [`unit_char_integral`], [`tail_sum`], [`lemma1_integral`]);
//! - a generic step-function integrator ([`integrate_numeric`]) that sums a
//!   [`LocallyConstantFn`] over residue tuples and keeps every phase as an
//!   exact root of unity until the end;
//! - an order-distribution engine ([`ord_distribution`], [`shell`]) that
//!   computes integrals of the form `int psi(nu p^t F(X)) dnu dX` exactly by
//!   recursive residue refinement with a Hensel shortcut at smooth zeros.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{self, CharValue, Valuation};
use crate::poly::{IntPoly, ScaledPoly};
use crate::symval::{QPoly, ZetaExpr};

/// Default cap on residue tuples for [`integrate_numeric`].
pub const DEFAULT_WORK_LIMIT: u128 = 20_000_000;

/// Default cap on refinement nodes for [`ord_distribution`].
pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

/// Integration domain for one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `center + p^radius Z_p`.
    Ball {
        center: BigRational,
        radius: i64,
    },
    /// `p^scale Z_p^*`.
    Units {
        scale: i64,
    },
    /// Union of `p^v Z_p^*` for `lo <= v <= hi`.
    Annulus {
        lo: i64,
        hi: i64,
    },
    FullIntegers,
    /// `p Z_p`.
    IntegersMinusUnits,
    /// `Q_p - Z_p`, truncated to valuations `>= vmin` when given.
    NonIntegers {
        vmin: Option<i64>,
    },
}

/// One affine chart `x = offset + p^scale * t` with `t` in `Z_p` or `Z_p^*`.
#[derive(Clone, Debug)]
struct Piece {
    offset: BigRational,
    scale: i64,
    units: bool,
}

impl Domain {
    fn pieces(&self, vmin: Option<i64>) -> Result<Vec<Piece>> {
        let zero = BigRational::zero();
        let unit_shells = |lo: i64, hi: i64| -> Vec<Piece> {
            (lo..=hi).map(|v| Piece { offset: zero.clone(), scale: v, units: true }).collect()
        };
        Ok(match self {
            Domain::Ball { center, radius } => {
                vec![Piece { offset: center.clone(), scale: *radius, units: false }]
            }
            Domain::Units { scale } => vec![Piece { offset: zero, scale: *scale, units: true }],
            Domain::Annulus { lo, hi } => {
                if lo > hi {
                    return Err(Error::UnsupportedDomain(format!("empty annulus [{lo}, {hi}]")));
                }
                unit_shells(*lo, *hi)
            }
            Domain::FullIntegers => vec![Piece { offset: zero, scale: 0, units: false }],
            Domain::IntegersMinusUnits => vec![Piece { offset: zero, scale: 1, units: false }],
            Domain::NonIntegers { vmin: own } => {
                let v = own
                    .or(vmin)
                    .ok_or_else(|| Error::UnsupportedDomain("Q_p - Z_p needs a truncation V_min".into()))?;
                if v >= 0 {
                    return Err(Error::UnsupportedDomain(format!("truncation V_min = {v} must be negative")));
                }
                unit_shells(v, -1)
            }
        })
    }
}

/// Exact Haar measure of a bounded domain.
pub fn measure(d: &Domain, p: u64) -> Result<BigRational> {
    padic::check_prime(p)?;
    if let Domain::NonIntegers { vmin: None } = d {
        return Err(Error::UnsupportedDomain("Q_p - Z_p has infinite measure".into()));
    }
    let unit = BigRational::one() - padic::rat(1, p as i64);
    let mut total = BigRational::zero();
    for piece in d.pieces(None)? {
        let m = padic::pow_p(p, -piece.scale);
        total += if piece.units { m * &unit } else { m };
    }
    Ok(total)
}

/// `int_{Z_p} psi(a x) dx`: 1 when `a` is integral, else 0.
pub fn char_integral_zp(a: &BigRational, p: u64) -> Result<u8> {
    Ok(u8::from(padic::ord(a, p)?.is_integral()))
}

/// `int_{Z_p^*} psi(t x) dx = 1_{Z_p}(t) - p^{-1} 1_{Z_p}(p t)`.
pub fn unit_char_integral(t: &BigRational, p: u64) -> Result<BigRational> {
    Ok(match padic::ord(t, p)? {
        Valuation::Infinity => unit_value(p, 0),
        Valuation::Finite(o) => unit_value(p, o),
    })
}

/// Value of the unit integral for `ord(t) = o`.
pub fn unit_value(p: u64, o: i64) -> BigRational {
    if o >= 0 {
        BigRational::one() - padic::rat(1, p as i64)
    } else if o == -1 {
        -padic::rat(1, p as i64)
    } else {
        BigRational::zero()
    }
}

/// `int_{Q_p - Z_p} |u|^(a s + b) psi(c u) du` as a function of `q`.
///
/// With `X = p^(a s + b + 1) = p^(b+1) q^(-a)` and `o = ord(c) >= 0` the
/// integral is `sum_{j=1}^{o} X^j - p^{-1} sum_{j=1}^{o+1} X^j`; for `c = 0`
/// both sums run to infinity. For `c` outside `Z_p` it is zero.
pub fn tail_sum(a: i64, b: i64, c: &BigRational, p: u64) -> Result<ZetaExpr> {
    let o = match padic::ord(c, p)? {
        Valuation::Finite(o) if o < 0 => return Ok(ZetaExpr::zero(p)),
        Valuation::Finite(o) => Some(o),
        Valuation::Infinity => None,
    };
    let x = QPoly::monomial(p, padic::pow_p(p, b + 1), -a);
    let one = QPoly::one(p);
    let inv_p = padic::rat(1, p as i64);
    let expr = match o {
        None => {
            // (1 - 1/p) X / (1 - X)
            ZetaExpr::new(x.scale(&(BigRational::one() - inv_p)), one.sub(&x))?
        }
        Some(o) => {
            let geometric = |n: i64| -> QPoly {
                let mut acc = QPoly::zero(p);
                let mut pw = one.clone();
                for _ in 0..n {
                    pw = pw.mul(&x);
                    acc = acc.add(&pw);
                }
                acc
            };
            ZetaExpr::from_poly(geometric(o).sub(&geometric(o + 1).scale(&inv_p)))
        }
    };
    Ok(expr)
}

/// `int_{Q_p} f_s(n^-(-x)) psi(a x) dx`: zero unless `a` is integral, else
/// `(1 - q^3)/(1 - p q^3) * (1 - |a|^(3s-1) p q^3)`.
pub fn lemma1_integral(a: &BigRational, p: u64) -> Result<ZetaExpr> {
    let pre =
        ZetaExpr::new(QPoly::from_terms(p, &[(1, 0), (-1, 3)]), QPoly::from_terms(p, &[(1, 0), (-(p as i64), 3)]))?;
    let bracket = match padic::ord(a, p)? {
        Valuation::Finite(o) if o < 0 => return Ok(ZetaExpr::zero(p)),
        // |a|^(3s-1) = p^(-o(3s-1)) = p^o q^(3o)
        Valuation::Finite(o) => QPoly::one(p).sub(&QPoly::monomial(p, padic::pow_p(p, o + 1), 3 * o + 3)),
        Valuation::Infinity => QPoly::one(p),
    };
    Ok(pre.mul(&ZetaExpr::from_poly(bracket)))
}

/// Exact finite sum `sum_k c_k exp(2 pi i f_k)` with `f_k` in `Z[1/p]/Z`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseSum {
    terms: BTreeMap<BigRational, BigRational>,
}

impl PhaseSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, phase: &CharValue, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(phase.fraction().clone()).or_insert_with(BigRational::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(phase.fraction());
        }
    }

    pub fn merge(&mut self, other: PhaseSum) {
        for (f, c) in other.terms {
            let e = self.terms.entry(f.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                self.terms.remove(&f);
            }
        }
    }

    /// Coordinates in the basis `{zeta^a : a < p^M, a div p^(M-1) != p-1}` of
    /// `Q(zeta_{p^M})`, using `sum_j zeta^(i + j p^(M-1)) = 0`.
    pub fn reduced(&self, p: u64) -> BTreeMap<u64, BigRational> {
        let level = self.terms.keys().map(|f| padic::split_int(f.denom(), p).0 as u32).max().unwrap_or(0);
        let pm = BigInt::from(p).pow(level);
        let mut coeffs: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (f, c) in &self.terms {
            let a = (f * BigRational::from_integer(pm.clone())).to_integer().to_u64().unwrap();
            *coeffs.entry(a).or_insert_with(BigRational::zero) += c;
        }
        if level > 0 {
            let block = p.pow(level - 1);
            let top: Vec<u64> = coeffs.keys().copied().filter(|a| a / block == p - 1).collect();
            for a in top {
                let c = coeffs.remove(&a).unwrap();
                let i = a % block;
                for j in 0..p - 1 {
                    *coeffs.entry(i + j * block).or_insert_with(BigRational::zero) -= &c;
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        coeffs
    }

    pub fn is_zero(&self, p: u64) -> bool {
        self.reduced(p).is_empty()
    }

    /// The value when it is rational (no irrational root-of-unity part).
    pub fn as_rational(&self, p: u64) -> Option<BigRational> {
        let r = self.reduced(p);
        match r.len() {
            0 => Some(BigRational::zero()),
            1 => r.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(f, c)| {
                let t = 2.0 * std::f64::consts::PI * f.to_f64().unwrap_or(0.0);
                Complex64::new(t.cos(), t.sin()) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }
}

/// One evaluated value `coeff * q^qexp * exp(2 pi i phase)`.
#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: BigRational,
    pub qexp: i64,
    pub phase: CharValue,
}

impl Term {
    pub fn new(coeff: BigRational, qexp: i64, phase: CharValue) -> Self {
        Term { coeff, qexp, phase }
    }

    pub fn zero(p: u64) -> Self {
        Term { coeff: BigRational::zero(), qexp: 0, phase: CharValue::zero(p) }
    }
}

type Evaluator = dyn Fn(&[BigRational]) -> Term + Send + Sync;

/// A function on `Q_p^n` that is constant on the cosets of `p^depth Z_p` in
/// each chart coordinate of every domain piece.
#[derive(Clone)]
pub struct LocallyConstantFn {
    pub depth: u32,
    pub nvars: usize,
    evaluator: Arc<Evaluator>,
}

impl LocallyConstantFn {
    pub fn new<F>(nvars: usize, depth: u32, f: F) -> Self
    where
        F: Fn(&[BigRational]) -> Term + Send + Sync + 'static,
    {
        LocallyConstantFn { depth, nvars, evaluator: Arc::new(f) }
    }

    pub fn eval(&self, x: &[BigRational]) -> Term {
        (self.evaluator)(x)
    }
}

/// Exact result of a step-function integral: per power of `q` a phase sum.
#[derive(Clone, Debug, Default)]
pub struct ExactIntegral {
    pub by_qexp: BTreeMap<i64, PhaseSum>,
}

impl ExactIntegral {
    fn add(&mut self, t: &Term, weight: &BigRational) {
        if t.coeff.is_zero() {
            return;
        }
        self.by_qexp.entry(t.qexp).or_default().add_term(&t.phase, &(&t.coeff * weight));
    }

    fn merge(mut self, other: ExactIntegral) -> ExactIntegral {
        for (e, s) in other.by_qexp {
            self.by_qexp.entry(e).or_default().merge(s);
        }
        self
    }

    pub fn is_zero(&self, p: u64) -> bool {
        self.by_qexp.values().all(|s| s.is_zero(p))
    }

    /// Evaluates at `q = p^(-s)`; exactly `0` when every phase sum cancels.
    pub fn value(&self, p: u64, s: f64) -> Complex64 {
        let q = (p as f64).powf(-s);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, sum) in &self.by_qexp {
            if sum.is_zero(p) {
                continue;
            }
            acc += sum.to_complex() * q.powi(*e as i32);
        }
        acc
    }
}

/// Residues `t mod p^k` used as chart representatives, units optional.
fn representatives(p: u64, k: u32, units: bool) -> Vec<u64> {
    let n = p.pow(k);
    (0..n).filter(|t| !units || t % p != 0).collect()
}

/// Sums `f` over all residue tuples of the given domains at `f.depth`.
pub fn integrate_exact(
    f: &LocallyConstantFn,
    domains: &[Domain],
    p: u64,
    vmin: Option<i64>,
    work_limit: u128,
) -> Result<ExactIntegral> {
    padic::check_prime(p)?;
    if domains.len() != f.nvars {
        return Err(Error::Arity { expected: f.nvars, found: domains.len() });
    }
    if f.depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    let k = f.depth;
    // Per variable: list of (point, weight).
    let mut axes: Vec<Vec<(BigRational, BigRational)>> = Vec::with_capacity(domains.len());
    let mut required: u128 = 1;
    for d in domains {
        let pieces = d.pieces(vmin)?;
        let per_piece = p.checked_pow(k).map(|x| x as u128).unwrap_or(u128::MAX);
        required = required.saturating_mul(per_piece.saturating_mul(pieces.len() as u128));
        if required > work_limit {
            return Err(Error::WorkLimit { required, limit: work_limit });
        }
        let mut axis = Vec::new();
        for piece in pieces {
            let cell = padic::pow_p(p, -(piece.scale + k as i64));
            let scale = padic::pow_p(p, piece.scale);
            for t in representatives(p, k, piece.units) {
                let x = &piece.offset + &scale * BigRational::from_integer(t.into());
                axis.push((x, cell.clone()));
            }
        }
        axes.push(axis);
    }
    let total: usize = axes.iter().map(|a| a.len()).product();
    let result = (0..total)
        .into_par_iter()
        .fold(ExactIntegral::default, |mut acc, mut idx| {
            let mut point = Vec::with_capacity(axes.len());
            let mut weight = BigRational::one();
            for axis in axes.iter().rev() {
                let (x, w) = &axis[idx % axis.len()];
                idx /= axis.len();
                point.push(x.clone());
                weight *= w;
            }
            point.reverse();
            acc.add(&f.eval(&point), &weight);
            acc
        })
        .reduce(ExactIntegral::default, ExactIntegral::merge);
    Ok(result)
}

/// Numeric value of [`integrate_exact`] at real `s`.
pub fn integrate_numeric(
    f: &LocallyConstantFn,
    domains: &[Domain],
    p: u64,
    s: f64,
    vmin: Option<i64>,
) -> Result<Complex64> {
    Ok(integrate_exact(f, domains, p, vmin, DEFAULT_WORK_LIMIT)?.value(p, s))
}

/// Domain flag for the order-distribution engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum VarDomain {
    Full,
    Unit,
}

/// Volumes of `{X : ord G(X) = j}` for `j < cap`, plus the volume with
/// `ord >= cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdDistribution {
    pub cap: i64,
    pub exact: BTreeMap<i64, BigRational>,
    pub at_least: BigRational,
    pub nodes: u64,
}

impl OrdDistribution {
    fn add(&mut self, ord: i64, vol: BigRational) {
        if ord >= self.cap {
            self.at_least += vol;
        } else {
            *self.exact.entry(ord).or_insert_with(BigRational::zero) += vol;
        }
    }

    pub fn total(&self) -> BigRational {
        self.exact.values().fold(self.at_least.clone(), |a, b| a + b)
    }
}

/// Distribution of `ord G(X)` for `X` uniform on the product domain.
///
/// Each node holds `p^e * G(T0 + p^m T)`; the residues of the variables that
/// `G` actually depends on mod `p` are enumerated. A residue where `G` is
/// nonzero mod `p` has order `e`; a smooth zero spreads its mass
/// geometrically over `e + 1, e + 2, ...`; a singular zero is refined.
pub fn ord_distribution(
    g: &IntPoly,
    domains: &[VarDomain],
    p: u64,
    cap: i64,
    node_limit: u64,
) -> Result<OrdDistribution> {
    if domains.len() != g.nvars() {
        return Err(Error::Arity { expected: g.nvars(), found: domains.len() });
    }
    let mut dist = OrdDistribution { cap, exact: BTreeMap::new(), at_least: BigRational::zero(), nodes: 0 };
    let pb = BigInt::from(p);
    let inv_p = padic::rat(1, p as i64);
    let mut stack: Vec<(IntPoly, BigRational, i64, bool)> = vec![(g.clone(), BigRational::one(), 0, true)];
    while let Some((mut poly, mu, mut e, root)) = stack.pop() {
        dist.nodes += 1;
        if dist.nodes > node_limit {
            return Err(Error::WorkLimit { required: dist.nodes as u128, limit: node_limit as u128 });
        }
        let Some(content) = poly.content_valuation(p) else {
            dist.add(cap, mu);
            continue;
        };
        if content > 0 {
            poly = poly.divide_exact(&pb.pow(content as u32));
            e += content;
        }
        if e >= cap {
            dist.add(cap, mu);
            continue;
        }
        let modp = poly.reduce(p);
        let mut support = modp.support();
        if root {
            for (i, d) in domains.iter().enumerate() {
                if *d == VarDomain::Unit && !support.contains(&i) {
                    support.push(i);
                }
            }
            support.sort_unstable();
        }
        let ranges: Vec<(u64, u64)> =
            support.iter().map(|&i| if root && domains[i] == VarDomain::Unit { (1, p) } else { (0, p) }).collect();
        let sub = &mu * num_traits::pow(inv_p.clone(), support.len());
        let grads: Vec<_> = (0..g.nvars()).map(|i| modp.partial(i)).collect();
        let mut base = vec![0u64; g.nvars()];
        let count: u64 = ranges.iter().map(|(lo, hi)| hi - lo).product();
        for mut idx in 0..count {
            for (slot, &(lo, hi)) in support.iter().zip(&ranges) {
                base[*slot] = lo + idx % (hi - lo);
                idx /= hi - lo;
            }
            if modp.eval(&base) != 0 {
                dist.add(e, sub.clone());
                continue;
            }
            if grads.iter().any(|d| d.eval(&base) != 0) {
                // ord = e + k with volume sub * (p^-(k-1) - p^-k)
                let mut k = 1;
                let mut tail = sub.clone();
                while e + k < cap {
                    let next = &tail * &inv_p;
                    dist.add(e + k, &tail - &next);
                    tail = next;
                    k += 1;
                }
                dist.add(cap, tail);
            } else {
                stack.push((poly.shift_subset(&base, &support, p), sub.clone(), e, false));
            }
        }
    }
    Ok(dist)
}

/// Values of `R(t) = int_{Z_p^*} psi(p^t x) dx`, computed by an exact phase
/// sum for `-depth <= t < 0` and by the unit-integral formula below that.
#[derive(Clone, Debug)]
pub struct PhaseResolver {
    p: u64,
    depth: u32,
    table: Vec<BigRational>,
}

impl PhaseResolver {
    pub fn new(p: u64, depth: u32) -> Result<Self> {
        padic::check_prime(p)?;
        let required = (p as u128).saturating_pow(depth);
        if required > DEFAULT_WORK_LIMIT {
            return Err(Error::WorkLimit { required, limit: DEFAULT_WORK_LIMIT });
        }
        let mut table = Vec::with_capacity(depth as usize);
        for m in 1..=depth {
            let pm = p.pow(m);
            let weight = padic::rat(1, pm as i64);
            let mut sum = PhaseSum::new();
            for x in (1..pm).filter(|x| x % p != 0) {
                let arg = padic::rat(x as i64, pm as i64);
                sum.add_term(&padic::e_p(&arg, p)?, &weight);
            }
            let value = sum
                .as_rational(p)
                .ok_or_else(|| Error::Arithmetic(format!("unit phase sum at level {m} is not rational")))?;
            table.push(value);
        }
        Ok(PhaseResolver { p, depth, table })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn r(&self, t: i64) -> BigRational {
        if t >= 0 {
            unit_value(self.p, 0)
        } else if -t <= self.depth as i64 {
            self.table[(-t - 1) as usize].clone()
        } else {
            unit_value(self.p, t)
        }
    }

    /// `int_{Z_p} psi(p^o x) dx`, by phase sum when `o < 0` is resolvable.
    pub fn zp(&self, o: i64) -> BigRational {
        if o >= 0 {
            return BigRational::one();
        }
        // Z_p = Z_p^* + p Z_p, so the integral is R(o) + p^-1 int_{Z_p} psi(p^(o+1) x).
        self.r(o) + padic::rat(1, self.p as i64) * self.zp(o + 1)
    }
}

/// `int_nu int_X psi(nu p^t0 F(X))` over `nu` in `Z_p^*` and `X` in the
/// product domain, exact.
pub fn shell(
    f: &ScaledPoly,
    domains: &[VarDomain],
    t0: i64,
    resolver: &PhaseResolver,
    node_limit: u64,
) -> Result<BigRational> {
    let t = t0 + f.shift;
    let cap = (-t).max(0);
    let dist = ord_distribution(&f.poly, domains, resolver.prime(), cap, node_limit)?;
    let mut acc = resolver.r(0) * &dist.at_least;
    for (j, vol) in &dist.exact {
        acc += resolver.r(t + j) * vol;
    }
    Ok(acc)
}

/// `int_{Q_p} f_s(n^-(-x)) psi(a x) dx` for `ord(a) = o`, truncated at
/// `|x| <= p^(-vmin)`.
pub fn lemma1_numeric(o: i64, s: f64, vmin: i64, resolver: &PhaseResolver) -> f64 {
    let p = resolver.prime() as f64;
    let mut acc = resolver.zp(o).to_f64().unwrap_or(f64::NAN);
    for x in (vmin..=-1).rev() {
        let r = resolver.r(o + x);
        if r.is_zero() {
            continue;
        }
        acc += p.powf(x as f64 * (3.0 * s - 1.0)) * r.to_f64().unwrap_or(f64::NAN);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{int, rat};
    use crate::poly::RatPoly;

    #[test]
    fn measures() {
        assert_eq!(measure(&Domain::Ball { center: int(0), radius: 2 }, 5).unwrap(), rat(1, 25));
        assert_eq!(measure(&Domain::Units { scale: 0 }, 5).unwrap(), rat(4, 5));
        assert_eq!(measure(&Domain::Ball { center: int(3), radius: 0 }, 7).unwrap(), int(1));
        assert_eq!(measure(&Domain::IntegersMinusUnits, 5).unwrap(), rat(1, 5));
        assert!(matches!(measure(&Domain::NonIntegers { vmin: None }, 5), Err(Error::UnsupportedDomain(_))));
        assert_eq!(measure(&Domain::NonIntegers { vmin: Some(-1) }, 5).unwrap(), int(4));
    }

    #[test]
    fn character_integrals() {
        assert_eq!(char_integral_zp(&int(3), 5).unwrap(), 1);
        assert_eq!(char_integral_zp(&rat(1, 5), 5).unwrap(), 0);
        assert_eq!(char_integral_zp(&int(0), 5).unwrap(), 1);
        assert_eq!(unit_char_integral(&int(1), 5).unwrap(), rat(4, 5));
        assert_eq!(unit_char_integral(&rat(1, 5), 5).unwrap(), rat(-1, 5));
        assert_eq!(unit_char_integral(&rat(1, 25), 5).unwrap(), int(0));
    }

    fn truncated_tail(a: i64, b: i64, o: Option<i64>, p: u64, s: f64, depth: i64) -> f64 {
        let pf = p as f64;
        let mut acc = 0.0;
        for u in 1..=depth {
            let uu = -u;
            let ind = |t: i64| match o {
                None => 1.0,
                Some(o) => f64::from(u8::from(o + t >= 0)),
            };
            acc += pf.powf(-(uu as f64) * (a as f64 * s + b as f64 + 1.0)) * (ind(uu) - ind(uu + 1) / pf);
        }
        acc
    }

    #[test]
    fn tail_sum_matches_truncation() {
        let p = 5;
        for (a, b, c, o) in
            [(-3, 0, int(2), Some(0)), (-9, 4, int(5), Some(1)), (-3, 0, int(0), None), (-6, 1, int(50), Some(2))]
        {
            let z = tail_sum(a, b, &c, p).unwrap();
            for s in [1.1, 1.5] {
                let want = truncated_tail(a, b, o, p, s, 30);
                let got = z.eval(s).unwrap();
                assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{a} {b} {c} {s}: {got} vs {want}");
            }
        }
        assert!(tail_sum(-3, 0, &rat(1, 5), 5).unwrap().is_zero());
    }

    #[test]
    fn lemma1_examples() {
        let p = 5;
        assert_eq!(lemma1_integral(&int(2), p).unwrap().to_string(), "1 - q^3");
        assert!(lemma1_integral(&rat(1, 5), p).unwrap().is_zero());
        assert_eq!(lemma1_integral(&int(0), p).unwrap().to_string(), "(1 - q^3)/(1 - 5*q^3)");
    }

    #[test]
    fn phase_sum_cancellation() {
        let mut s = PhaseSum::new();
        for x in 0..5 {
            s.add_term(&padic::e_p(&rat(x, 5), 5).unwrap(), &int(1));
        }
        assert!(s.is_zero(5));
        let mut t = PhaseSum::new();
        for x in 1..25 {
            if x % 5 != 0 {
                t.add_term(&padic::e_p(&rat(x, 25), 5).unwrap(), &int(1));
            }
        }
        assert!(t.is_zero(5));
        let mut u = PhaseSum::new();
        for x in 1..5 {
            u.add_term(&padic::e_p(&rat(x, 5), 5).unwrap(), &int(1));
        }
        assert_eq!(u.as_rational(5), Some(int(-1)));
    }

    #[test]
    fn integrate_examples() {
        let p = 5;
        let one = LocallyConstantFn::new(1, 3, move |_| Term::new(int(1), 0, CharValue::zero(p)));
        let v = integrate_numeric(&one, &[Domain::FullIntegers], p, 1.0, None).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15 && v.im == 0.0);

        let chi = LocallyConstantFn::new(1, 2, move |x| {
            Term::new(int(1), 0, padic::e_p(&(&x[0] / int(p as i64)), p).unwrap())
        });
        let exact = integrate_exact(&chi, &[Domain::FullIntegers], p, None, DEFAULT_WORK_LIMIT).unwrap();
        assert!(exact.is_zero(p));
        assert_eq!(exact.value(p, 1.0), Complex64::new(0.0, 0.0));

        // |x|^(-3s) = q^(-3 ord x) on the annulus [-6, -1]
        let mag = LocallyConstantFn::new(1, 1, move |x| {
            let o = padic::ord(&x[0], p).unwrap().finite().unwrap();
            Term::new(int(1), -3 * o, CharValue::zero(p))
        });
        let got = integrate_numeric(&mag, &[Domain::Annulus { lo: -6, hi: -1 }], p, 1.0, None).unwrap();
        let want = 0.8 * (5f64.powi(-2) * (1.0 - 5f64.powi(-12)) / (1.0 - 5f64.powi(-2)));
        assert!((got.re - want).abs() < 1e-15);
    }

    #[test]
    fn work_limit_reports_required_count() {
        let f = LocallyConstantFn::new(3, 6, move |_| Term::zero(5));
        let d = vec![Domain::FullIntegers; 3];
        match integrate_exact(&f, &d, 5, None, 1000) {
            Err(Error::WorkLimit { required, limit }) => {
                assert_eq!(limit, 1000);
                assert!(required > 1000);
            }
            other => panic!("expected work limit, got {other:?}"),
        }
    }

    #[test]
    fn resolver_matches_closed_form() {
        let r = PhaseResolver::new(5, 4).unwrap();
        for t in -8..3 {
            assert_eq!(r.r(t), unit_value(5, t));
        }
        assert_eq!(r.zp(-3), int(0));
        assert_eq!(r.zp(1), int(1));
    }

    /// Exhaustive `ord` histogram of `G` on residues mod `p^m`.
    fn brute_ord(g: &RatPoly, domains: &[VarDomain], p: u64, m: u32) -> BTreeMap<i64, BigRational> {
        let n = p.pow(m);
        let mut out = BTreeMap::new();
        let nv = domains.len();
        let total = n.pow(nv as u32);
        let w = padic::pow_p(p, -(m as i64) * nv as i64);
        for mut idx in 0..total {
            let mut pt = Vec::new();
            let mut ok = true;
            for d in domains {
                let t = idx % n;
                idx /= n;
                if *d == VarDomain::Unit && t.is_multiple_of(p) {
                    ok = false;
                }
                pt.push(int(t as i64));
            }
            if !ok {
                continue;
            }
            let v = g.eval(&pt);
            let o = match padic::ord(&v, p).unwrap() {
                Valuation::Finite(o) if o < m as i64 => o,
                _ => m as i64,
            };
            *out.entry(o).or_insert_with(BigRational::zero) += &w;
        }
        out
    }

    #[test]
    fn ord_distribution_matches_brute_force() {
        let p = 5;
        let u = RatPoly::var(2, 0);
        let y = RatPoly::var(2, 1);
        // (u^2 - 1) * y + 5 u, with a singular zero at u = y = 0 mod p pieces
        let g = u.pow(2).sub(&RatPoly::int(2, 1)).mul(&y).add(&u.scale(&int(5)));
        let g2 = u.pow(2).add(&y.pow(2).scale(&int(25)));
        for (poly, doms) in [
            (g, vec![VarDomain::Full, VarDomain::Full]),
            (g2.clone(), vec![VarDomain::Full, VarDomain::Full]),
            (g2, vec![VarDomain::Unit, VarDomain::Full]),
        ] {
            let sp = poly.to_scaled(p).unwrap();
            assert_eq!(sp.shift, 0);
            let cap = 3;
            let d = ord_distribution(&sp.poly, &doms, p, cap, DEFAULT_NODE_LIMIT).unwrap();
            let b = brute_ord(&poly, &doms, p, cap as u32);
            for j in 0..cap {
                assert_eq!(
                    d.exact.get(&j).cloned().unwrap_or_default(),
                    b.get(&j).cloned().unwrap_or_default(),
                    "ord {j}"
                );
            }
            assert_eq!(d.at_least, b.get(&cap).cloned().unwrap_or_default());
        }
    }
}
