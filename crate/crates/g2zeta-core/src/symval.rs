//! Rational functions in the formal variable `q = p^(-s)`.
//!
//! The prime is fixed per value and folded into the coefficients, so
//! `p^(-3s+1)` is the monomial `p*q^3`. Values are kept in a canonical form:
//! numerator and denominator coprime over `Q`, denominator an ordinary
//! polynomial with constant term `1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{self, int};

/// Laurent polynomial `sum c_m q^m` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    prime: u64,
    terms: BTreeMap<i64, BigRational>,
}

impl QPoly {
    pub fn zero(p: u64) -> Self {
        QPoly { prime: p, terms: BTreeMap::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, BigRational::one())
    }

    pub fn constant(p: u64, c: BigRational) -> Self {
        Self::monomial(p, c, 0)
    }

    pub fn monomial(p: u64, c: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        QPoly { prime: p, terms }
    }

    /// Builds from `(coefficient, exponent)` pairs with integer coefficients.
    pub fn from_terms(p: u64, terms: &[(i64, i64)]) -> Self {
        let mut out = QPoly::zero(p);
        for &(c, e) in terms {
            out = out.add(&QPoly::monomial(p, int(c), e));
        }
        out
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        QPoly { prime: self.prime, terms }
    }

    pub fn neg(&self) -> QPoly {
        QPoly { prime: self.prime, terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        let mut terms: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let entry = terms.entry(e1 + e2).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        QPoly { prime: self.prime, terms }
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero(self.prime);
        }
        QPoly { prime: self.prime, terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn shift(&self, by: i64) -> QPoly {
        QPoly { prime: self.prime, terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> QPoly {
        let mut acc = QPoly::one(self.prime);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.terms.iter().map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * q.powi(*e as i32)).sum()
    }

    /// Sum of `|c_m| q^m`, the natural scale for judging cancellation.
    fn eval_abs(&self, q: f64) -> f64 {
        self.terms.iter().map(|(e, c)| c.abs().to_f64().unwrap_or(f64::NAN) * q.powi(*e as i32)).sum()
    }

    /// Dense coefficients from exponent 0 upward; requires `min_exp >= 0`.
    fn dense(&self) -> Vec<BigRational> {
        let top = self.max_exp().unwrap_or(0).max(0) as usize;
        let mut v = vec![BigRational::zero(); top + 1];
        for (e, c) in &self.terms {
            v[*e as usize] = c.clone();
        }
        v
    }

    fn from_dense(p: u64, v: &[BigRational]) -> QPoly {
        let mut terms = BTreeMap::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(i as i64, c.clone());
            }
        }
        QPoly { prime: p, terms }
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn dense_is_zero(v: &[BigRational]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Quotient and remainder of dense polynomials over `Q`.
fn dense_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut bb = b.to_vec();
    trim(&mut bb);
    let db = bb.len() - 1;
    let lead = bb[db].clone();
    if r.len() < bb.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in bb.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn dense_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !dense_is_zero(&y) {
        let (_, r) = dense_divmod(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().cloned().unwrap_or_else(BigRational::one);
    x.iter().map(|c| c / &lead).collect()
}

/// Exact rational function `numerator / denominator` in `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZetaExpr {
    numerator: QPoly,
    denominator: QPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ZetaExpr {
    pub fn new(numerator: QPoly, denominator: QPoly) -> Result<Self> {
        if numerator.prime != denominator.prime {
            return Err(Error::Arithmetic("numerator and denominator at different primes".into()));
        }
        if denominator.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Self::canonical(numerator, denominator))
    }

    pub fn from_poly(numerator: QPoly) -> Self {
        let p = numerator.prime;
        Self::canonical(numerator, QPoly::one(p))
    }

    pub fn zero(p: u64) -> Self {
        Self::from_poly(QPoly::zero(p))
    }

    pub fn one(p: u64) -> Self {
        Self::from_poly(QPoly::one(p))
    }

    pub fn constant(p: u64, c: BigRational) -> Self {
        Self::from_poly(QPoly::constant(p, c))
    }

    pub fn numerator(&self) -> &QPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &QPoly {
        &self.denominator
    }

    pub fn prime(&self) -> u64 {
        self.numerator.prime
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn canonical(num: QPoly, den: QPoly) -> Self {
        let p = num.prime;
        if num.is_zero() {
            return ZetaExpr { numerator: QPoly::zero(p), denominator: QPoly::one(p) };
        }
        // Move powers of q to the numerator so both are ordinary polynomials
        // with nonzero constant terms.
        let nmin = num.min_exp().unwrap();
        let dmin = den.min_exp().unwrap();
        let n0 = num.shift(-nmin);
        let d0 = den.shift(-dmin);
        let g = dense_gcd(&n0.dense(), &d0.dense());
        let (nq, _) = dense_divmod(&n0.dense(), &g);
        let (dq, _) = dense_divmod(&d0.dense(), &g);
        let mut n = QPoly::from_dense(p, &nq).shift(nmin - dmin);
        let mut d = QPoly::from_dense(p, &dq);
        let c0 = d.coeff(0);
        let inv = c0.recip();
        n = n.scale(&inv);
        d = d.scale(&inv);
        ZetaExpr { numerator: n, denominator: d }
    }

    /// Re-normalizes; a no-op on values built through the public API.
    pub fn normalize(&self) -> Self {
        Self::canonical(self.numerator.clone(), self.denominator.clone())
    }

    fn check_prime(&self, other: &ZetaExpr) -> Result<()> {
        if self.prime() != other.prime() {
            return Err(Error::Arithmetic(format!("mixing primes {} and {}", self.prime(), other.prime())));
        }
        Ok(())
    }

    pub fn arith(&self, other: &ZetaExpr, op: ArithOp) -> Result<ZetaExpr> {
        self.check_prime(other)?;
        let (a, b) = (&self.numerator, &self.denominator);
        let (c, d) = (&other.numerator, &other.denominator);
        Ok(match op {
            ArithOp::Add => Self::canonical(a.mul(d).add(&b.mul(c)), b.mul(d)),
            ArithOp::Sub => Self::canonical(a.mul(d).sub(&b.mul(c)), b.mul(d)),
            ArithOp::Mul => Self::canonical(a.mul(c), b.mul(d)),
            ArithOp::Div => {
                if other.is_zero() {
                    return Err(Error::Arithmetic("division by the zero expression".into()));
                }
                Self::canonical(a.mul(d), b.mul(c))
            }
        })
    }

    pub fn add(&self, other: &ZetaExpr) -> ZetaExpr {
        self.arith(other, ArithOp::Add).expect("same prime")
    }

    pub fn sub(&self, other: &ZetaExpr) -> ZetaExpr {
        self.arith(other, ArithOp::Sub).expect("same prime")
    }

    pub fn mul(&self, other: &ZetaExpr) -> ZetaExpr {
        self.arith(other, ArithOp::Mul).expect("same prime")
    }

    pub fn div(&self, other: &ZetaExpr) -> Result<ZetaExpr> {
        self.arith(other, ArithOp::Div)
    }

    pub fn scale(&self, c: &BigRational) -> ZetaExpr {
        Self::canonical(self.numerator.scale(c), self.denominator.clone())
    }

    /// Exact identity test by cross-multiplication.
    pub fn equals(&self, other: &ZetaExpr) -> bool {
        self.prime() == other.prime()
            && self.numerator.mul(&other.denominator) == other.numerator.mul(&self.denominator)
    }

    /// Evaluates at `q = p^(-s)`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let q = (self.prime() as f64).powf(-s);
        let den = self.denominator.eval(q);
        let scale = self.denominator.eval_abs(q);
        if den == 0.0 || den.abs() <= 1e-13 * scale {
            return Err(Error::Pole { s: format!("{s}"), denominator: poly_string(&self.denominator) });
        }
        Ok(self.numerator.eval(q) / den)
    }

    /// Coefficients of the power series in `q` up to `q^n` (inclusive);
    /// numerator exponents below zero are kept as they are.
    pub fn series(&self, n: i64) -> BTreeMap<i64, BigRational> {
        let d = self.denominator.dense();
        let mut inv = vec![BigRational::zero(); (n.max(0) + 1) as usize];
        inv[0] = BigRational::one();
        for k in 1..inv.len() {
            let mut acc = BigRational::zero();
            for j in 1..=k.min(d.len() - 1) {
                acc -= &d[j] * &inv[k - j];
            }
            inv[k] = acc;
        }
        let mut out = BTreeMap::new();
        for (e, c) in self.numerator.terms() {
            for (k, ik) in inv.iter().enumerate() {
                let exp = e + k as i64;
                if exp > n {
                    break;
                }
                let entry = out.entry(exp).or_insert_with(BigRational::zero);
                *entry += c * ik;
            }
        }
        out.retain(|_, c: &mut BigRational| !c.is_zero());
        out
    }
}

/// `ze_arith` as a free function.
pub fn ze_arith(a: &ZetaExpr, b: &ZetaExpr, op: ArithOp) -> Result<ZetaExpr> {
    a.arith(b, op)
}

pub fn ze_equals(a: &ZetaExpr, b: &ZetaExpr) -> bool {
    a.equals(b)
}

pub fn ze_eval(a: &ZetaExpr, s: f64, p: u64) -> Result<f64> {
    if p != a.prime() {
        return Err(Error::InvalidInput(format!("expression lives at p = {}, not {p}", a.prime())));
    }
    a.eval(s)
}

fn coeff_string(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text form, exponents ascending, e.g. `1 - 5*q^3`.
pub fn poly_string(poly: &QPoly) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in poly.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match *e {
            0 => String::new(),
            1 => "q".into(),
            e => format!("q^{e}"),
        };
        if mono.is_empty() {
            out.push_str(&coeff_string(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", coeff_string(&a), mono));
        }
    }
    out
}

impl fmt::Display for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == QPoly::one(self.prime()) {
            write!(f, "{}", poly_string(&self.numerator))
        } else {
            write!(f, "({})/({})", poly_string(&self.numerator), poly_string(&self.denominator))
        }
    }
}

/// `1 - c*q^e`, the shape of every Euler-type factor below.
pub fn one_minus(p: u64, c: i64, e: i64) -> QPoly {
    QPoly::from_terms(p, &[(1, 0), (-c, e)])
}

/// `p^k` as an exact rational (negative `k` allowed).
pub fn p_pow(p: u64, k: i64) -> BigRational {
    padic::pow_p(p, k)
}

/// The q-monomial equal to `p^(a*s + b)`, i.e. `p^b * q^(-a)`.
pub fn p_power_monomial(p: u64, a: i64, b: i64) -> QPoly {
    QPoly::monomial(p, p_pow(p, b), -a)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
