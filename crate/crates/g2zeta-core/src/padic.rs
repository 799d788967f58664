//! Exact p-adic arithmetic on rational numbers.
//!
//! Everything here is exact: valuations, absolute values, truncated digit
//! expansions and the additive character `e_p`, whose value is returned as an
//! element of `Q/Z` rather than a complex number.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Deterministic primality test for the small primes this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `ord_p` of a rational, with `Infinity` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_integral(self) -> bool {
        self >= Valuation::Finite(0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer, together with the cofactor.
pub fn split_int(n: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

pub fn int_valuation(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        Valuation::Infinity
    } else {
        Valuation::Finite(split_int(n, p).0)
    }
}

fn ord_unchecked(x: &BigRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let (a, _) = split_int(x.numer(), p);
    let (b, _) = split_int(x.denom(), p);
    Valuation::Finite(a - b)
}

pub fn ord(x: &BigRational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(ord_unchecked(x, p))
}

pub fn pow_p(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn pow_p_int(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `|x|_p = p^(-ord x)`, and `0` for `x = 0`.
pub fn abs_p(x: &BigRational, p: u64) -> Result<BigRational> {
    Ok(match ord(x, p)? {
        Valuation::Infinity => BigRational::zero(),
        Valuation::Finite(v) => pow_p(p, -v),
    })
}

/// Inverse of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// An element of `Q/Z` with `p`-power denominator, standing for `exp(2 pi i f)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharValue {
    fraction: BigRational,
    prime: u64,
}

impl CharValue {
    pub fn zero(p: u64) -> Self {
        CharValue { fraction: BigRational::zero(), prime: p }
    }

    /// Builds `f mod 1`; fails unless the denominator of `f` is a power of `p`.
    pub fn new(f: BigRational, p: u64) -> Result<Self> {
        check_prime(p)?;
        let (_, rest) = split_int(f.denom(), p);
        if !rest.abs().is_one() {
            return Err(Error::InvalidInput(format!("character fraction {f} has a non-{p}-power denominator")));
        }
        Ok(CharValue { fraction: frac_mod_one(&f), prime: p })
    }

    pub fn fraction(&self) -> &BigRational {
        &self.fraction
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_trivial(&self) -> bool {
        self.fraction.is_zero()
    }

    /// Exponent `m` with denominator `p^m`.
    pub fn level(&self) -> u32 {
        split_int(self.fraction.denom(), self.prime).0 as u32
    }

    pub fn add(&self, other: &CharValue) -> CharValue {
        assert_eq!(self.prime, other.prime, "characters at different primes");
        CharValue { fraction: frac_mod_one(&(&self.fraction + &other.fraction)), prime: self.prime }
    }

    pub fn neg(&self) -> CharValue {
        CharValue { fraction: frac_mod_one(&-self.fraction.clone()), prime: self.prime }
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let f = self.fraction.to_f64().unwrap_or(0.0);
        let t = 2.0 * std::f64::consts::PI * f;
        num_complex::Complex64::new(t.cos(), t.sin())
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fraction)
    }
}

fn frac_mod_one(f: &BigRational) -> BigRational {
    f - f.floor()
}

/// The `p`-adic fractional part: the unique `r / p^m` in `[0, 1)` with
/// `x - r / p^m` in `Z_p`.
pub fn padic_fractional_part(x: &BigRational, p: u64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let (m, rest) = split_int(x.denom(), p);
    if m == 0 {
        return BigRational::zero();
    }
    let pm = pow_p_int(p, m as u32);
    let inv = mod_inverse(&rest, &pm).expect("cofactor is prime to p");
    let r = (x.numer() * inv).mod_floor(&pm);
    BigRational::new(r, pm)
}

/// The standard character `e_p(x) = exp(-2 pi i {x}_p)`, returned as the
/// fraction `-{x}_p mod 1`.
pub fn e_p(x: &BigRational, p: u64) -> Result<CharValue> {
    check_prime(p)?;
    let fp = padic_fractional_part(x, p);
    Ok(CharValue { fraction: frac_mod_one(&-fp), prime: p })
}

/// `sum d_n p^n` truncated to `digits.len()` digits from `start_order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicExpansion {
    pub prime: u64,
    pub start_order: i64,
    pub digits: Vec<u64>,
}

impl PadicExpansion {
    /// The rational `sum d_n p^(start_order + n)`.
    pub fn value(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, d) in self.digits.iter().enumerate() {
            acc += BigRational::from_integer(BigInt::from(*d)) * pow_p(self.prime, self.start_order + i as i64);
        }
        acc
    }
}

pub fn expand(x: &BigRational, p: u64, k: usize) -> Result<PadicExpansion> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidInput("expansion depth must be at least 1".into()));
    }
    if x.is_zero() {
        return Ok(PadicExpansion { prime: p, start_order: 0, digits: vec![] });
    }
    let (a, na) = split_int(x.numer(), p);
    let (b, nb) = split_int(x.denom(), p);
    let pk = pow_p_int(p, k as u32);
    let inv = mod_inverse(&nb, &pk).expect("cofactor is prime to p");
    let mut unit = (na * inv).mod_floor(&pk);
    let pb = BigInt::from(p);
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        let (q, r) = unit.div_rem(&pb);
        digits.push(r.to_u64().expect("digit below p"));
        unit = q;
    }
    Ok(PadicExpansion { prime: p, start_order: a - b, digits })
}

/// A rational viewed at a fixed prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    value: BigRational,
    prime: u64,
}

impl PadicScalar {
    pub fn new(value: BigRational, prime: u64) -> Result<Self> {
        check_prime(prime)?;
        Ok(PadicScalar { value, prime })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn ord(&self) -> Valuation {
        ord_unchecked(&self.value, self.prime)
    }

    pub fn abs(&self) -> BigRational {
        match self.ord() {
            Valuation::Infinity => BigRational::zero(),
            Valuation::Finite(v) => pow_p(self.prime, -v),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.ord().is_integral()
    }

    pub fn is_unit(&self) -> bool {
        self.ord() == Valuation::Finite(0)
    }

    pub fn character(&self) -> CharValue {
        e_p(&self.value, self.prime).expect("prime checked at construction")
    }

    pub fn expand(&self, k: usize) -> Result<PadicExpansion> {
        expand(&self.value, self.prime, k)
    }
}

/// Shorthand for building rationals in tests and tables.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
