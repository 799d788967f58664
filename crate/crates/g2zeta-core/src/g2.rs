//! The 8x8 realization of G2, the Levi representations on binary cubics and
//! the orbit classifier.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{self, int, Valuation};
use crate::symval::{QPoly, ZetaExpr};

/// Dense square matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<BigRational>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix rows must form a square".into()));
        }
        Ok(Matrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::InvalidInput("singular matrix".into()))?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let d = a.get(col, col).clone();
            for j in 0..n {
                a.data[col * n + j] /= &d;
                inv.data[col * n + j] /= &d;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let (ac, ic) = (a.get(col, j).clone(), inv.get(col, j).clone());
                    a.data[r * n + j] -= &f * ac;
                    inv.data[r * n + j] -= &f * ic;
                }
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> BigRational {
        let n = self.n;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let d = a.get(col, col).clone();
            det *= &d;
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) / &d;
                for j in col..n {
                    let v = a.get(col, j).clone();
                    a.data[r * n + j] -= &f * v;
                }
            }
        }
        det
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.n).map(|j| (0..self.n).fold(BigRational::zero(), |acc, i| acc + &v[i] * self.get(i, j))).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:>width$}", cells[i * self.n + j])).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// 2x2 matrix `[[a, b], [c, d]]`.
pub fn gl2(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Matrix {
    Matrix::from_rows(vec![vec![a, b], vec![c, d]]).unwrap()
}

/// An element of G2 with the constructor calls that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2Element {
    pub matrix: Matrix,
    pub provenance: Vec<String>,
}

impl G2Element {
    fn single(matrix: Matrix, word: String) -> Self {
        G2Element { matrix, provenance: vec![word] }
    }

    pub fn mul(&self, other: &G2Element) -> G2Element {
        let mut provenance = self.provenance.clone();
        provenance.extend(other.provenance.iter().cloned());
        G2Element { matrix: self.matrix.mul(&other.matrix), provenance }
    }

    pub fn inverse(&self) -> Result<G2Element> {
        Ok(G2Element {
            matrix: self.matrix.inverse()?,
            provenance: vec![format!("inv({})", self.provenance.join("*"))],
        })
    }
}

fn m8(entries: &[(usize, usize, BigRational)]) -> Matrix {
    let mut m = Matrix::identity(8);
    for (i, j, v) in entries {
        m.set(*i, *j, v.clone());
    }
    m
}

/// Long root subgroup `x_alpha(a)`.
pub fn x_alpha(a: &BigRational) -> G2Element {
    let m = m8(&[(1, 2, a.clone()), (5, 6, -a.clone())]);
    G2Element::single(m, format!("x_alpha({a})"))
}

/// Short root subgroup `x_beta(b)`.
pub fn x_beta(b: &BigRational) -> G2Element {
    let m = m8(&[
        (0, 1, b.clone()),
        (2, 3, b.clone()),
        (2, 4, b.clone()),
        (2, 5, -(b * b)),
        (3, 5, -b.clone()),
        (4, 5, -b.clone()),
        (6, 7, -b.clone()),
    ]);
    G2Element::single(m, format!("x_beta({b})"))
}

/// `n(x, y, z, u, v)`, the generic element of the unipotent radical `N`.
pub fn n(x: &BigRational, y: &BigRational, z: &BigRational, u: &BigRational, v: &BigRational) -> G2Element {
    let two = int(2);
    let m = m8(&[
        (0, 2, -u.clone()),
        (0, 3, -y.clone()),
        (0, 4, -y.clone()),
        (0, 5, -x.clone()),
        (0, 6, v * x + &two * u * y - z),
        (0, 7, -(u * x) - y * y),
        (1, 2, v.clone()),
        (1, 3, u.clone()),
        (1, 4, u.clone()),
        (1, 5, -y.clone()),
        (1, 6, -(u * u) + v * y),
        (1, 7, -(u * y) + z),
        (2, 6, y.clone()),
        (2, 7, x.clone()),
        (3, 6, -u.clone()),
        (3, 7, y.clone()),
        (4, 6, -u.clone()),
        (4, 7, y.clone()),
        (5, 6, -v.clone()),
        (5, 7, u.clone()),
    ]);
    G2Element::single(m, format!("n({x},{y},{z},{u},{v})"))
}

/// `n^-(x, y, z, u, v)`, the opposite unipotent radical.
pub fn n_minus(x: &BigRational, y: &BigRational, z: &BigRational, u: &BigRational, v: &BigRational) -> G2Element {
    let two = int(2);
    let m = m8(&[
        (2, 0, -y.clone()),
        (2, 1, x.clone()),
        (3, 0, -u.clone()),
        (3, 1, y.clone()),
        (4, 0, -u.clone()),
        (4, 1, y.clone()),
        (5, 0, -v.clone()),
        (5, 1, -u.clone()),
        (6, 0, v * x + &two * u * y - z),
        (6, 1, u * x - y * y),
        (6, 2, u.clone()),
        (6, 3, -y.clone()),
        (6, 4, -y.clone()),
        (6, 5, -x.clone()),
        (7, 0, -(u * u) - v * y),
        (7, 1, -(u * y) + z),
        (7, 2, v.clone()),
        (7, 3, u.clone()),
        (7, 4, u.clone()),
        (7, 5, y.clone()),
    ]);
    G2Element::single(m, format!("n-({x},{y},{z},{u},{v})"))
}

/// Levi embedding `m(g)` of `GL_2`.
pub fn m(g: &Matrix) -> Result<G2Element> {
    if g.size() != 2 {
        return Err(Error::InvalidInput("m(g) needs a 2x2 matrix".into()));
    }
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let delta = a * d - b * c;
    if delta.is_zero() {
        return Err(Error::InvalidInput("m(g) needs det g != 0".into()));
    }
    let q = |x: BigRational| x / &delta;
    let mut mat = Matrix::zero(8);
    let rows: [(usize, usize, BigRational); 24] = [
        (0, 0, a.clone()),
        (0, 1, b.clone()),
        (1, 0, c.clone()),
        (1, 1, d.clone()),
        (2, 2, q(a * a)),
        (2, 3, q(a * b)),
        (2, 4, q(a * b)),
        (2, 5, q(-(b * b))),
        (3, 2, q(a * c)),
        (3, 3, q(a * d)),
        (3, 4, q(b * c)),
        (3, 5, q(-(b * d))),
        (4, 2, q(a * c)),
        (4, 3, q(b * c)),
        (4, 4, q(a * d)),
        (4, 5, q(-(b * d))),
        (5, 2, q(-(c * c))),
        (5, 3, q(-(c * d))),
        (5, 4, q(-(c * d))),
        (5, 5, q(d * d)),
        (6, 6, q(a.clone())),
        (6, 7, q(-b.clone())),
        (7, 6, q(-c.clone())),
        (7, 7, q(d.clone())),
    ];
    for (i, j, v) in rows {
        mat.set(i, j, v);
    }
    Ok(G2Element::single(mat, format!("m([[{a},{b}],[{c},{d}]])")))
}

/// The long Weyl element `w_0`.
pub fn w0() -> G2Element {
    let mut mat = Matrix::zero(8);
    for (i, j, v) in [(0, 6, 1), (1, 7, 1), (2, 2, -1), (3, 3, 1), (4, 4, 1), (5, 5, -1), (6, 0, 1), (7, 1, 1)] {
        mat.set(i, j, int(v));
    }
    G2Element::single(mat, "w0".into())
}

/// The 4x4 matrix intertwining the two Levi representations.
pub fn w1() -> Matrix {
    Matrix::from_ints(&[&[0, 0, 0, -1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]).unwrap()
}

/// Named constructors, for callers that pick one at run time.
#[derive(Clone, Debug)]
pub enum BuildKind {
    XAlpha(BigRational),
    XBeta(BigRational),
    N([BigRational; 5]),
    NMinus([BigRational; 5]),
    M(Matrix),
    W0,
}

pub fn build(kind: &BuildKind) -> Result<G2Element> {
    Ok(match kind {
        BuildKind::XAlpha(a) => x_alpha(a),
        BuildKind::XBeta(b) => x_beta(b),
        BuildKind::N([x, y, z, u, v]) => n(x, y, z, u, v),
        BuildKind::NMinus([x, y, z, u, v]) => n_minus(x, y, z, u, v),
        BuildKind::M(g) => m(g)?,
        BuildKind::W0 => w0(),
    })
}

/// Coordinates `(x, y, z, u, v)` of an element of `N`, if it is one.
pub fn n_coordinates(e: &Matrix) -> Option<[BigRational; 5]> {
    let x = e.get(2, 7).clone();
    let y = e.get(2, 6).clone();
    let u = e.get(5, 7).clone();
    let v = -e.get(5, 6).clone();
    let z = e.get(1, 7) + &u * &y;
    (n(&x, &y, &z, &u, &v).matrix == *e).then_some([x, y, z, u, v])
}

/// `nu(n) = [x, y, u, v]`.
pub fn nu(e: &Matrix) -> Result<Vec<BigRational>> {
    let [x, y, _, u, v] = n_coordinates(e).ok_or_else(|| Error::InvalidInput("matrix is not in N".into()))?;
    Ok(vec![x, y, u, v])
}

fn varrho_upper(a: &BigRational) -> Matrix {
    let a2 = a * a;
    let a3 = &a2 * a;
    let (o, z) = (BigRational::one(), BigRational::zero());
    Matrix::from_rows(vec![
        vec![o.clone(), a.clone(), a2.clone(), a3],
        vec![z.clone(), o.clone(), a * int(2), &a2 * int(3)],
        vec![z.clone(), z.clone(), o.clone(), a * int(3)],
        vec![z.clone(), z.clone(), z, o],
    ])
    .unwrap()
}

fn varrho_lower(a: &BigRational) -> Matrix {
    let a2 = a * a;
    let a3 = &a2 * a;
    let (o, z) = (BigRational::one(), BigRational::zero());
    Matrix::from_rows(vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![a * int(3), o.clone(), z.clone(), z.clone()],
        vec![&a2 * int(3), a * int(2), o.clone(), z.clone()],
        vec![a3, a2, a.clone(), o],
    ])
    .unwrap()
}

fn varrho_diag(t1: &BigRational, t2: &BigRational) -> Matrix {
    let mut m = Matrix::zero(4);
    m.set(0, 0, t1 * t1 / t2);
    m.set(1, 1, t1.clone());
    m.set(2, 2, t2.clone());
    m.set(3, 3, t2 * t2 / t1);
    m
}

/// `g = L(c/a) D(a, det/a) U(b/a)` when `a != 0`.
fn ldu(g: &Matrix) -> Option<(BigRational, BigRational, BigRational, BigRational)> {
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    if a.is_zero() {
        return None;
    }
    let det = a * d - b * c;
    Some((c / a, a.clone(), det / a, b / a))
}

fn check_gl2(g: &Matrix) -> Result<()> {
    if g.size() != 2 {
        return Err(Error::InvalidInput("expected a 2x2 matrix".into()));
    }
    if g.det().is_zero() {
        return Err(Error::InvalidInput("singular 2x2 matrix".into()));
    }
    Ok(())
}

/// The action on cubic-form coefficients: `g . F_c = F_{c varrho(g)^t}`,
/// assembled from the three generator families.
pub fn varrho(g: &Matrix) -> Result<Matrix> {
    check_gl2(g)?;
    if let Some((l, t1, t2, u)) = ldu(g) {
        return Ok(varrho_lower(&l).mul(&varrho_diag(&t1, &t2)).mul(&varrho_upper(&u)));
    }
    // a = 0: g = U(1) (U(-1) g) and U(-1) g has a nonzero corner.
    let one = BigRational::one();
    let shifted = gl2(one.clone(), -one.clone(), BigRational::zero(), one.clone()).mul(g);
    Ok(varrho_upper(&one).mul(&varrho(&shifted)?))
}

/// `rho(g) = w1 varrho(det(g)^-1 g) w1^-1`.
pub fn rho(g: &Matrix) -> Result<Matrix> {
    check_gl2(g)?;
    let w = w1();
    let scaled = g.scale(&g.det().recip());
    Ok(w.mul(&varrho(&scaled)?).mul(&w.inverse()?))
}

/// The displayed formulas for `rho` on the two unipotent families.
pub fn rho_upper_display(a: &BigRational) -> Matrix {
    let a2 = a * a;
    let a3 = &a2 * a;
    let (o, z) = (BigRational::one(), BigRational::zero());
    Matrix::from_rows(vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![a * int(-3), o.clone(), z.clone(), z.clone()],
        vec![&a2 * int(-3), a * int(2), o.clone(), z.clone()],
        vec![-a3, a2, a.clone(), o],
    ])
    .unwrap()
}

pub fn rho_lower_display(a: &BigRational) -> Matrix {
    let a2 = a * a;
    let a3 = &a2 * a;
    let (o, z) = (BigRational::one(), BigRational::zero());
    Matrix::from_rows(vec![
        vec![o.clone(), -a.clone(), -a2.clone(), -a3],
        vec![z.clone(), o.clone(), a * int(2), &a2 * int(3)],
        vec![z.clone(), z.clone(), o.clone(), a * int(3)],
        vec![z.clone(), z.clone(), z, o],
    ])
    .unwrap()
}

/// `rho(diag(t1, t2)) = diag(t2/t1^2, 1/t1, 1/t2, t1/t2^2)`.
pub fn rho_diag_expected(t1: &BigRational, t2: &BigRational) -> Matrix {
    let mut m = Matrix::zero(4);
    m.set(0, 0, t2 / (t1 * t1));
    m.set(1, 1, t1.recip());
    m.set(2, 2, t2.recip());
    m.set(3, 3, t1 / (t2 * t2));
    m
}

/// `(c1, c2, c3, c4)`.
pub type Quadruple = [BigRational; 4];

pub fn quadruple(c: [i64; 4]) -> Quadruple {
    c.map(int)
}

/// `c2^2 c3^2 + 18 c1 c2 c3 c4 - 4 c2^3 c4 - 4 c1 c3^3 - 27 c1^2 c4^2`.
pub fn disc_p(c: &Quadruple) -> BigRational {
    let [c1, c2, c3, c4] = c;
    c2 * c2 * c3 * c3 + int(18) * c1 * c2 * c3 * c4
        - int(4) * c2 * c2 * c2 * c4
        - int(4) * c1 * c3 * c3 * c3
        - int(27) * c1 * c1 * c4 * c4
}

/// `c . M^t` for a row quadruple.
pub fn act(c: &Quadruple, mat: &Matrix) -> Quadruple {
    let v = mat.transpose().apply_row(c);
    [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
}

/// Coefficients of `det(g)^-1 F_c([x, y] g)`, computed by substitution.
pub fn act_on_form(c: &Quadruple, g: &Matrix) -> Quadruple {
    // [x, y] g = (a x + c y, b x + d y); expand each x^(3-i) y^i.
    let (a, b, cc, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let lin1 = [a.clone(), cc.clone()];
    let lin2 = [b.clone(), d.clone()];
    let mul = |p: &[BigRational], l: &[BigRational; 2]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); p.len() + 1];
        for (i, x) in p.iter().enumerate() {
            out[i] += x * &l[0];
            out[i + 1] += x * &l[1];
        }
        out
    };
    let det = g.det();
    let mut out = vec![BigRational::zero(); 4];
    for (i, ci) in c.iter().enumerate() {
        let mut poly = vec![BigRational::one()];
        for _ in 0..3 - i {
            poly = mul(&poly, &lin1);
        }
        for _ in 0..i {
            poly = mul(&poly, &lin2);
        }
        for (k, x) in poly.iter().enumerate() {
            out[k] += ci * x;
        }
    }
    let out: Vec<BigRational> = out.into_iter().map(|x| x / &det).collect();
    [out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()]
}

/// `sigma . w1`: the cubic-form coefficients attached to a character.
pub fn form_of_sigma(sigma: &Quadruple) -> Quadruple {
    act(sigma, &w1().transpose())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OrbitKind {
    ThreeDistinctLinear,
    LinearTimesIrreducibleQuadratic,
    IrreducibleCubic,
    RepeatedRoot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitLabel {
    pub kind: OrbitKind,
    /// `ord_p` of the discriminant; `None` when it is exactly zero.
    pub discriminant_valuation: Option<i64>,
    pub degenerate: bool,
}

fn reduce_mod_p(x: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let inv = padic::mod_inverse(x.denom(), &pb).expect("p-integral");
    (x.numer() * inv).mod_floor(&pb).to_u64().unwrap()
}

/// Classifies the binary cubic `F_c` over `F_p` after clearing the content.
pub fn classify_form(c: &Quadruple, p: u64) -> Result<OrbitLabel> {
    padic::check_prime(p)?;
    let min_ord = c
        .iter()
        .filter_map(|x| padic::ord(x, p).ok().and_then(Valuation::finite))
        .min()
        .ok_or_else(|| Error::InvalidInput("zero quadruple".into()))?;
    let scale = padic::pow_p(p, -min_ord);
    let prim: Vec<BigRational> = c.iter().map(|x| x * &scale).collect();
    let prim: Quadruple = [prim[0].clone(), prim[1].clone(), prim[2].clone(), prim[3].clone()];
    let disc = disc_p(&prim);
    let disc_val = padic::ord(&disc, p)?.finite();
    let r: Vec<u64> = prim.iter().map(|x| reduce_mod_p(x, p)).collect();
    let degenerate = disc_val != Some(0);
    let kind = if degenerate {
        OrbitKind::RepeatedRoot
    } else {
        let pp = p as u128;
        let mut roots = usize::from(r[0] == 0);
        for x in 0..pp {
            // F(x, 1) = c1 x^3 + c2 x^2 + c3 x + c4
            let v =
                ((r[0] as u128 * x % pp * x % pp * x) + (r[1] as u128 * x % pp * x) + r[2] as u128 * x + r[3] as u128)
                    % pp;
            if v == 0 {
                roots += 1;
            }
        }
        match roots {
            3 => OrbitKind::ThreeDistinctLinear,
            1 => OrbitKind::LinearTimesIrreducibleQuadratic,
            0 => OrbitKind::IrreducibleCubic,
            _ => unreachable!("a separable cubic has 0, 1 or 3 roots"),
        }
    };
    Ok(OrbitLabel { kind, discriminant_valuation: disc_val, degenerate })
}

/// Orbit of the character `sigma`, read off `g_sigma = f_{sigma w1}`.
pub fn orbit_classify(sigma: &Quadruple, p: u64) -> Result<OrbitLabel> {
    classify_form(&form_of_sigma(sigma), p)
}

/// Witness `element = n(coords) m(g) k` with `k` in `G2(Z_p)`.
#[derive(Clone, Debug)]
pub struct IwasawaWitness {
    pub n_coords: [BigRational; 5],
    pub g: Matrix,
    pub k: Matrix,
}

fn is_p_integral(mat: &Matrix, p: u64) -> bool {
    (0..mat.size())
        .all(|i| (0..mat.size()).all(|j| padic::ord(mat.get(i, j), p).map(|v| v.is_integral()).unwrap_or(false)))
}

/// `f_s(element)` on the supported families, as a power of `q`.
pub fn f_circ(element: &G2Element, p: u64, witness: Option<&IwasawaWitness>) -> Result<ZetaExpr> {
    padic::check_prime(p)?;
    if let Some(w) = witness {
        let [x, y, z, u, v] = &w.n_coords;
        let prod = n(x, y, z, u, v).matrix.mul(&m(&w.g)?.matrix).mul(&w.k);
        if prod != element.matrix {
            return Err(Error::UnsupportedElement("witness does not multiply out to the element".into()));
        }
        let kinv = w.k.inverse()?;
        if !is_p_integral(&w.k, p) || !is_p_integral(&kinv, p) {
            return Err(Error::UnsupportedElement("witness k is not in GL_8(Z_p)".into()));
        }
        let o = padic::ord(&w.g.det(), p)?.finite().unwrap();
        // |det g|^s = p^(-o s) = q^o
        return Ok(ZetaExpr::from_poly(QPoly::monomial(p, BigRational::one(), o)));
    }
    // n^-(-x, 0, 0, 0, 0)
    let x = -element.matrix.get(2, 1).clone();
    let zero = BigRational::zero();
    if n_minus(&-x.clone(), &zero, &zero, &zero, &zero).matrix == element.matrix {
        return Ok(match padic::ord(&x, p)? {
            Valuation::Finite(o) if o < 0 => ZetaExpr::from_poly(QPoly::monomial(p, BigRational::one(), -3 * o)),
            _ => ZetaExpr::one(p),
        });
    }
    Err(Error::UnsupportedElement("no witness and not of the form n^-(-x, 0, 0, 0, 0)".into()))
}

/// One identity family checked on random inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(IdentityResult::passed)
    }
}

/// Small random rational, numerator in `[-9, 9]`, denominator in `[1, 5]`.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    padic::rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn random_nonzero(rng: &mut impl Rng) -> BigRational {
    loop {
        let x = random_rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random invertible 2x2 rational matrix.
pub fn random_gl2(rng: &mut impl Rng) -> Matrix {
    loop {
        let g = gl2(random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng));
        if !g.det().is_zero() {
            return g;
        }
    }
}

fn check<F>(name: &str, trials: usize, rng: &mut ChaCha8Rng, mut f: F) -> IdentityResult
where
    F: FnMut(&mut ChaCha8Rng) -> std::result::Result<(), String>,
{
    let mut failures = 0;
    let mut first_failure = None;
    for _ in 0..trials {
        if let Err(msg) = f(rng) {
            failures += 1;
            first_failure.get_or_insert(msg);
        }
    }
    IdentityResult { name: name.into(), trials, failures, first_failure }
}

fn five(rng: &mut impl Rng) -> [BigRational; 5] {
    std::array::from_fn(|_| random_rational(rng))
}

/// Checks the matrix identities on `trials` random inputs each.
pub fn verify_identities(seed: u64, trials: usize) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = BigRational::zero();
    let mut results = Vec::new();

    results.push(check("w0_conjugation", trials, &mut rng, |r| {
        let [x, y, z, u, v] = five(r);
        let w = w0();
        let lhs = w.matrix.mul(&n(&x, &y, &z, &u, &v).matrix).mul(&w.matrix.inverse().unwrap());
        let rhs = n_minus(&-x.clone(), &y, &z, &u, &-v.clone()).matrix;
        (lhs == rhs).then_some(()).ok_or_else(|| format!("x={x} y={y} z={z} u={u} v={v}"))
    }));

    results.push(check("x_alpha_plus_3beta_commutation", trials, &mut rng, |r| {
        let [x, y, z, u, v] = five(r);
        let xa3b = n(&-v.clone(), &zero, &zero, &zero, &zero).matrix;
        let lhs = n_minus(&-x.clone(), &y, &z, &u, &zero).matrix.mul(&xa3b);
        let rhs = xa3b.mul(&x_beta(&(&u * &v)).matrix).mul(
            &n_minus(
                &(-x.clone() + &v * &z - int(3) * &u * &v * &y + &u * &u * &u * &v * &v),
                &(&y - &u * &u * &v),
                &(&z - &u * &u * &u * &v),
                &u,
                &zero,
            )
            .matrix,
        );
        (lhs == rhs).then_some(()).ok_or_else(|| format!("x={x} y={y} z={z} u={u} v={v}"))
    }));

    results.push(check("nu_conjugation_rho", trials, &mut rng, |r| {
        let [x, y, z, u, v] = five(r);
        let g = random_gl2(r);
        let mg = m(&g).unwrap().matrix;
        let conj = mg.inverse().unwrap().mul(&n(&x, &y, &z, &u, &v).matrix).mul(&mg);
        let lhs = nu(&conj).map_err(|e| e.to_string())?;
        let rhs = rho(&g).unwrap().apply_row(&[x.clone(), y.clone(), u.clone(), v.clone()]);
        (lhs == rhs).then_some(()).ok_or_else(|| format!("g={g:?}"))
    }));

    results.push(check("rho_equals_w1_varrho_w1inv_on_generators", trials, &mut rng, |r| {
        let a = random_rational(r);
        let (t1, t2) = (random_nonzero(r), random_nonzero(r));
        let (o, z) = (BigRational::one(), BigRational::zero());
        let up = rho(&gl2(o.clone(), a.clone(), z.clone(), o.clone())).unwrap() == rho_upper_display(&a);
        let lo = rho(&gl2(o.clone(), z.clone(), a.clone(), o.clone())).unwrap() == rho_lower_display(&a);
        let di = rho(&gl2(t1.clone(), z.clone(), z, t2.clone())).unwrap() == rho_diag_expected(&t1, &t2);
        (up && lo && di).then_some(()).ok_or_else(|| format!("a={a} t1={t1} t2={t2} upper={up} lower={lo} diag={di}"))
    }));

    results.push(check("rho_homomorphism", trials, &mut rng, |r| {
        let (g, h) = (random_gl2(r), random_gl2(r));
        let ok = rho(&g).unwrap().mul(&rho(&h).unwrap()) == rho(&g.mul(&h)).unwrap();
        ok.then_some(()).ok_or_else(|| format!("g={g:?} h={h:?}"))
    }));

    results.push(check("varrho_matches_form_action", trials, &mut rng, |r| {
        let g = random_gl2(r);
        let c: Quadruple = std::array::from_fn(|_| random_rational(r));
        let ok = act(&c, &varrho(&g).unwrap()) == act_on_form(&c, &g);
        ok.then_some(()).ok_or_else(|| format!("g={g:?}"))
    }));

    results.push(check("p_covariance", trials, &mut rng, |r| {
        let g = random_gl2(r);
        let c: Quadruple = std::array::from_fn(|_| random_rational(r));
        let lhs = disc_p(&act(&c, &varrho(&g).unwrap()));
        let det = g.det();
        let rhs = &det * &det * disc_p(&c);
        (lhs == rhs).then_some(()).ok_or_else(|| format!("g={g:?} c={c:?}"))
    }));

    results.push(check("m_homomorphism", trials, &mut rng, |r| {
        let (g, h) = (random_gl2(r), random_gl2(r));
        let ok = m(&g).unwrap().matrix.mul(&m(&h).unwrap().matrix) == m(&g.mul(&h)).unwrap().matrix;
        ok.then_some(()).ok_or_else(|| format!("g={g:?} h={h:?}"))
    }));

    results.push(check("center_commutator", trials, &mut rng, |r| {
        let z = random_rational(r);
        let o = BigRational::one();
        let a = n(&zero, &zero, &zero, &zero, &z).matrix;
        let b = n(&o, &zero, &zero, &zero, &zero).matrix;
        let lhs = a.mul(&b).mul(&a.inverse().unwrap()).mul(&b.inverse().unwrap());
        let ok = lhs == n(&zero, &zero, &z, &zero, &zero).matrix;
        ok.then_some(()).ok_or_else(|| format!("z={z}"))
    }));

    results.push(check("root_subgroups_additive", trials, &mut rng, |r| {
        let (a, b) = (random_rational(r), random_rational(r));
        let sum = &a + &b;
        let ok_a = x_alpha(&a).matrix.mul(&x_alpha(&b).matrix) == x_alpha(&sum).matrix;
        let ok_b = x_beta(&a).matrix.mul(&x_beta(&b).matrix) == x_beta(&sum).matrix;
        (ok_a && ok_b).then_some(()).ok_or_else(|| format!("a={a} b={b}"))
    }));

    IdentityReport { seed, results }
}

/// Random `g` in `GL_2(Z)` whose determinant is prime to `p`.
pub fn random_unimodular_mod_p(rng: &mut impl Rng, p: u64) -> Matrix {
    let hi = p as i64 - 1;
    loop {
        let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(0..=hi));
        let det = e[0] * e[3] - e[1] * e[2];
        if det.rem_euclid(p as i64) != 0 {
            return gl2(int(e[0]), int(e[1]), int(e[2]), int(e[3]));
        }
    }
}

/// Reduces a quadruple of `p`-integral rationals to representatives in `[0, p)`.
pub fn reduce_quadruple(c: &Quadruple, p: u64) -> Quadruple {
    std::array::from_fn(|i| int(reduce_mod_p(&c[i], p) as i64))
}

impl OrbitLabel {
    pub fn is_split(&self) -> bool {
        self.kind == OrbitKind::ThreeDistinctLinear
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;

    #[test]
    fn constructor_examples() {
        let z = BigRational::zero();
        assert_eq!(n(&z, &z, &z, &z, &z).matrix, Matrix::identity(8));
        assert_eq!(m(&Matrix::identity(2)).unwrap().matrix, Matrix::identity(8));
        assert!(m(&gl2(int(1), int(2), int(2), int(4))).is_err());
        let a = rat(3, 2);
        assert_eq!(x_alpha(&a).matrix, n(&z, &z, &z, &z, &a).matrix);
    }

    #[test]
    fn varrho_examples() {
        let (t1, t2) = (int(2), int(3));
        let d = varrho(&gl2(t1.clone(), int(0), int(0), t2.clone())).unwrap();
        assert_eq!(d, varrho_diag(&t1, &t2));
        let a = int(5);
        let u = varrho(&gl2(int(1), a.clone(), int(0), int(1))).unwrap();
        assert_eq!((0..4).map(|j| u.get(0, j).clone()).collect::<Vec<_>>(), vec![int(1), int(5), int(25), int(125)]);
        // a = 0 corner goes through the shifted decomposition
        let g = gl2(int(0), int(1), int(-1), int(2));
        assert_eq!(act(&quadruple([1, 2, 3, 4]), &varrho(&g).unwrap()), act_on_form(&quadruple([1, 2, 3, 4]), &g));
    }

    #[test]
    fn disc_examples() {
        assert_eq!(disc_p(&quadruple([0, 1, 1, 0])), int(1));
        assert_eq!(disc_p(&quadruple([1, 0, 0, 7])), int(-27 * 49));
        assert_eq!(disc_p(&quadruple([1, 0, 2, 3])), int(-4 * 8 - 27 * 9));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(orbit_classify(&quadruple([0, 1, 1, 0]), 5).unwrap().kind, OrbitKind::ThreeDistinctLinear);
        assert_eq!(orbit_classify(&quadruple([1, 0, 1, 2]), 5).unwrap().kind, OrbitKind::IrreducibleCubic);
        let d = orbit_classify(&quadruple([1, 0, 0, 5]), 5).unwrap();
        assert_eq!(d.kind, OrbitKind::RepeatedRoot);
        assert_eq!(d.discriminant_valuation, Some(2));
        assert!(orbit_classify(&quadruple([0, 0, 0, 0]), 5).is_err());
    }

    #[test]
    fn identities_hold() {
        let report = verify_identities(2024, 25);
        for r in &report.results {
            assert!(r.passed(), "{} failed: {:?}", r.name, r.first_failure);
        }
    }

    #[test]
    fn f_circ_examples() {
        let z = BigRational::zero();
        let p = 5;
        let unit = n_minus(&int(-3), &z, &z, &z, &z);
        assert!(f_circ(&unit, p, None).unwrap().equals(&ZetaExpr::one(p)));
        let far = n_minus(&-rat(1, 25), &z, &z, &z, &z);
        assert_eq!(f_circ(&far, p, None).unwrap().to_string(), "q^6");
        let g = gl2(int(5), int(0), int(0), int(1));
        let k = Matrix::identity(8);
        let elem = m(&g).unwrap();
        let w = IwasawaWitness { n_coords: std::array::from_fn(|_| BigRational::zero()), g, k };
        assert_eq!(f_circ(&elem, p, Some(&w)).unwrap().to_string(), "q");
        assert!(matches!(f_circ(&w0(), p, None), Err(Error::UnsupportedElement(_))));
    }

    #[test]
    fn matrix_inverse_and_det() {
        let g = gl2(int(2), int(1), int(7), int(4));
        assert_eq!(g.det(), int(1));
        assert_eq!(g.mul(&g.inverse().unwrap()), Matrix::identity(2));
        let w = w0().matrix;
        assert_eq!(w.mul(&w.inverse().unwrap()), Matrix::identity(8));
        assert!(format!("{}", Matrix::identity(2)).contains("[1 0]"));
    }
}
