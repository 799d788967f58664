//! Sparse multivariate polynomials.
//!
//! [`RatPoly`] carries exact rational coefficients and is what integrands are
//! written in. [`IntPoly`] is the integer form used by the counting and
//! order-distribution engines; [`RatPoly::to_scaled`] converts one into the
//! other by pulling out the smallest power of `p`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{self, Valuation};

type Monomial = Vec<u32>;

/// Polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl RatPoly {
    pub fn zero(nvars: usize) -> Self {
        RatPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut out = RatPoly::zero(nvars);
        if !c.is_zero() {
            out.terms.insert(vec![0; nvars], c);
        }
        out
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut out = RatPoly::zero(nvars);
        out.terms.insert(m, BigRational::one());
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn insert_add(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_add(&mut terms, m.clone(), c.clone());
        }
        RatPoly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> RatPoly {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                Self::insert_add(&mut terms, m, c1 * c2);
            }
        }
        RatPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, n: u32) -> RatPoly {
        let mut acc = RatPoly::int(self.nvars, 1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero(self.nvars);
        }
        RatPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(m) {
                if *e > 0 {
                    t *= num_traits::pow(x.clone(), *e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i -> a + b * x_i`.
    pub fn affine(&self, i: usize, a: &BigRational, b: &BigRational) -> RatPoly {
        let mut sub = RatPoly::var(self.nvars, i).scale(b);
        sub = sub.add(&RatPoly::constant(self.nvars, a.clone()));
        self.compose_var(i, &sub)
    }

    /// Replaces variable `i` by the polynomial `by`.
    pub fn compose_var(&self, i: usize, by: &RatPoly) -> RatPoly {
        let mut out = RatPoly::zero(self.nvars);
        let mut powers: Vec<RatPoly> = vec![RatPoly::int(self.nvars, 1)];
        for (m, c) in &self.terms {
            while powers.len() <= m[i] as usize {
                let next = powers.last().unwrap().mul(by);
                powers.push(next);
            }
            let mut rest = m.clone();
            rest[i] = 0;
            let mono = RatPoly { nvars: self.nvars, terms: BTreeMap::from([(rest, c.clone())]) };
            out = out.add(&mono.mul(&powers[m[i] as usize]));
        }
        out
    }

    /// Writes the polynomial as `p^e * G` with `G` integral and primitive at
    /// `p` (some coefficient a unit). Coefficients must have no prime-to-`p`
    /// denominators.
    pub fn to_scaled(&self, p: u64) -> Result<ScaledPoly> {
        let mut shift: Option<i64> = None;
        for c in self.terms.values() {
            if let Valuation::Finite(v) = padic::ord(c, p)? {
                shift = Some(shift.map_or(v, |s| s.min(v)));
            }
        }
        let shift = shift.unwrap_or(0);
        let scale = padic::pow_p(p, -shift);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let x = c * &scale;
            if !x.is_integer() {
                return Err(Error::InvalidInput(format!("coefficient {c} has a denominator prime to {p}")));
            }
            terms.insert(m.clone(), x.to_integer());
        }
        Ok(ScaledPoly { shift, poly: IntPoly { nvars: self.nvars, terms } })
    }
}

/// Polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

/// `p^shift * poly`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPoly {
    pub shift: i64,
    pub poly: IntPoly,
}

impl IntPoly {
    pub fn from_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (c, m) in terms {
            if m.len() != nvars {
                return Err(Error::Arity { expected: nvars, found: m.len() });
            }
            *map.entry(m.to_vec()).or_insert_with(BigInt::zero) += BigInt::from(*c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(IntPoly { nvars, terms: map })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone()))).collect(),
        }
    }

    /// Largest `c` with `p^c` dividing every coefficient.
    pub fn content_valuation(&self, p: u64) -> Option<i64> {
        self.terms.values().map(|c| padic::split_int(c, p).0).min()
    }

    pub fn divide_exact(&self, d: &BigInt) -> IntPoly {
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect() }
    }

    /// Coefficients reduced mod `n`, zeros dropped.
    pub fn reduce(&self, n: u64) -> ModPoly {
        let nb = BigInt::from(n);
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&nb).to_u64().unwrap();
                (r != 0).then(|| (m.clone(), r))
            })
            .collect();
        ModPoly { nvars: self.nvars, modulus: n, terms }
    }

    /// `G(T0 + p T)` in the variables listed in `subset`, others untouched.
    pub fn shift_subset(&self, base: &[u64], subset: &[usize], p: u64) -> IntPoly {
        let pb = BigInt::from(p);
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        // binomial(e, k) * t0^(e-k) * p^k for each substituted variable
        for (m, c) in &self.terms {
            let mut partial: Vec<(Monomial, BigInt)> = vec![(m.clone(), c.clone())];
            for &i in subset {
                let e = m[i];
                if e == 0 {
                    continue;
                }
                let t0 = BigInt::from(base[i]);
                let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                for (mm, cc) in &partial {
                    for k in 0..=e {
                        let coef = binomial(e, k)
                            * num_traits::pow(t0.clone(), (e - k) as usize)
                            * num_traits::pow(pb.clone(), k as usize);
                        if coef.is_zero() {
                            continue;
                        }
                        let mut m2 = mm.clone();
                        m2[i] = k;
                        next.push((m2, cc * coef));
                    }
                }
                partial = next;
            }
            for (mm, cc) in partial {
                *out.entry(mm).or_insert_with(BigInt::zero) += cc;
            }
        }
        out.retain(|_, c| !c.is_zero());
        IntPoly { nvars: self.nvars, terms: out }
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> IntPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm[i] -= 1;
            terms.insert(mm, c * BigInt::from(m[i]));
        }
        IntPoly { nvars: self.nvars, terms }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        self.to_rat().display_with(names)
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Polynomial with coefficients reduced mod a machine-sized modulus.
#[derive(Clone, Debug)]
pub struct ModPoly {
    nvars: usize,
    modulus: u64,
    terms: Vec<(Monomial, u64)>,
}

impl ModPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        if self.modulus < 1 << 32 {
            return self.eval_small(x);
        }
        let n = self.modulus as u128;
        let mut acc: u128 = 0;
        for (m, c) in &self.terms {
            let mut t = *c as u128;
            for (xi, e) in x.iter().zip(m) {
                for _ in 0..*e {
                    t = t * (*xi as u128) % n;
                }
            }
            acc = (acc + t) % n;
        }
        acc as u64
    }

    /// `eval` for moduli below `2^32`, where products fit in `u64`.
    fn eval_small(&self, x: &[u64]) -> u64 {
        let n = self.modulus;
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (xi, e) in x.iter().zip(m) {
                for _ in 0..*e {
                    t = t * (xi % n) % n;
                }
            }
            acc = (acc + t) % n;
        }
        acc
    }

    /// Coefficients, by degree, of the polynomial in the last variable left
    /// after fixing the others to `prefix`.
    pub fn restrict_last(&self, prefix: &[u64]) -> Vec<u64> {
        let n = self.modulus as u128;
        let last = self.nvars - 1;
        let mut out: Vec<u64> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = *c as u128;
            for (xi, e) in prefix.iter().zip(&m[..last]) {
                for _ in 0..*e {
                    t = t * (*xi as u128) % n;
                }
            }
            let d = m[last] as usize;
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] = ((out[d] as u128 + t) % n) as u64;
        }
        out
    }

    /// Variables occurring with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.iter().any(|(m, _)| m[i] > 0)).collect()
    }

    pub fn partial(&self, i: usize) -> ModPoly {
        let n = self.modulus;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[i] > 0)
            .filter_map(|(m, c)| {
                let mut mm = m.clone();
                mm[i] -= 1;
                let r = ((*c as u128 * m[i] as u128) % n as u128) as u64;
                (r != 0).then_some((mm, r))
            })
            .collect();
        ModPoly { nvars: self.nvars, modulus: n, terms }
    }
}

impl RatPoly {
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let coeff = if a.is_integer() { a.numer().to_string() } else { a.to_string() };
            if mono.is_empty() {
                out.push_str(&coeff);
            } else if a.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", coeff, mono.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{int, rat};

    #[test]
    fn scaled_form_pulls_out_p_power() {
        // 5^-2 * x + 5 * y^2 = 5^-2 (x + 125 y^2)
        let x = RatPoly::var(2, 0).scale(&rat(1, 25));
        let y = RatPoly::var(2, 1).pow(2).scale(&int(5));
        let s = x.add(&y).to_scaled(5).unwrap();
        assert_eq!(s.shift, -2);
        assert_eq!(s.poly, IntPoly::from_terms(2, &[(1, &[1, 0]), (125, &[0, 2])]).unwrap());
        assert!(RatPoly::var(1, 0).scale(&rat(1, 2)).to_scaled(5).is_err());
    }

    #[test]
    fn shift_subset_matches_composition() {
        let p = 5;
        let g = IntPoly::from_terms(2, &[(-1, &[3, 0]), (1, &[1, 0]), (2, &[0, 0]), (3, &[1, 2])]).unwrap();
        let shifted = g.shift_subset(&[3, 0], &[0], p);
        let direct = g.to_rat().affine(0, &int(3), &int(5));
        assert_eq!(shifted.to_rat(), direct);
    }

    #[test]
    fn mod_eval_agrees_with_exact() {
        let g = IntPoly::from_terms(3, &[(7, &[2, 1, 0]), (-4, &[0, 0, 3]), (11, &[0, 0, 0])]).unwrap();
        let m = g.reduce(125);
        for x in 0..6u64 {
            let pt = [x, x + 1, 2 * x];
            let exact = g.to_rat().eval(&pt.iter().map(|v| int(*v as i64)).collect::<Vec<_>>());
            let want = exact.to_integer().mod_floor(&BigInt::from(125)).to_u64().unwrap();
            assert_eq!(m.eval(&pt), want);
        }
    }

    #[test]
    fn display_is_readable() {
        let names = vec!["u".to_string(), "y".to_string()];
        let g = IntPoly::from_terms(2, &[(-1, &[3, 0]), (1, &[1, 0]), (2, &[0, 0])]).unwrap();
        assert_eq!(g.display_with(&names), "-u^3 + u + 2");
    }
}
