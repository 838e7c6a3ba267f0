//! Sparse multivariate polynomials with exact coefficients.
//!
//! All graded bases enumerate monomials in graded lexicographic order
//! (total degree first, then lexicographically with the first variable
//! largest), so every matrix built from them is reproducible bit for bit.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{FieldTag, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    field: FieldTag,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

/// Monomials of the given total degree, in graded-lex order: exponent
/// vectors sorted lexicographically descending (so `x0^d` comes first).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(pos: usize, nvars: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == nvars {
            cur[pos] = rem;
            out.push(cur.clone());
            cur[pos] = 0;
            return;
        }
        for e in (0..=rem).rev() {
            cur[pos] = e;
            rec(pos + 1, nvars, rem - e, cur, out);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, nvars, degree, &mut cur, &mut out);
    out
}

/// Number of degree-`d` monomials in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    // C(degree + nvars - 1, nvars - 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(nvars as u128 - 1) {
        num *= degree as u128 + nvars as u128 - 1 - i;
        den *= i + 1;
    }
    (num / den) as usize
}

impl MultiPoly {
    pub fn zero(nvars: usize, field: FieldTag) -> MultiPoly {
        MultiPoly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn variable(idx: usize, nvars: usize, field: FieldTag) -> MultiPoly {
        let mut e = vec![0u32; nvars];
        e[idx] = 1;
        MultiPoly::from_terms(vec![(e, Scalar::one(field))], nvars, field)
    }

    pub fn constant(c: Scalar, nvars: usize) -> MultiPoly {
        let field = c.field();
        MultiPoly::from_terms(vec![(vec![0u32; nvars], c)], nvars, field)
    }

    pub fn from_terms(terms: Vec<(Vec<u32>, Scalar)>, nvars: usize, field: FieldTag) -> MultiPoly {
        let mut map: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            assert_eq!(c.field(), field, "mixed fields in polynomial");
            let cur = map.remove(&e).unwrap_or_else(|| Scalar::zero(field));
            let s = cur.add(&c);
            if !s.is_zero() {
                map.insert(e, s);
            }
        }
        MultiPoly {
            nvars,
            field,
            terms: map,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, expo: &[u32]) -> Scalar {
        self.terms
            .get(expo)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: Vec<(Vec<u32>, Scalar)> = self.terms.clone().into_iter().collect();
        terms.extend(other.terms.clone());
        MultiPoly::from_terms(terms, self.nvars, self.field)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars, self.field);
        }
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                terms.push((e, ca.mul(cb)));
            }
        }
        MultiPoly::from_terms(terms, self.nvars, self.field)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Total degree when homogeneous (the zero polynomial passes with any
    /// claimed degree).
    pub fn homogeneous_degree(&self) -> Result<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let Some(d) = degs.next() else { return Ok(0) };
        if degs.all(|x| x == d) {
            Ok(d)
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero(self.field);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &p) in point.iter().zip(e.iter()) {
                for _ in 0..p {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute `x_i -> sum_j m[i][j] x_j` (a linear change of variables).
    pub fn substitute_linear(&self, m: &DenseMatrix) -> MultiPoly {
        assert_eq!(m.rows(), self.nvars);
        assert_eq!(m.cols(), self.nvars);
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                let mut t = Vec::new();
                for j in 0..self.nvars {
                    let c = m.get(i, j).clone();
                    if !c.is_zero() {
                        let mut e = vec![0u32; self.nvars];
                        e[j] = 1;
                        t.push((e, c));
                    }
                }
                MultiPoly::from_terms(t, self.nvars, self.field)
            })
            .collect();
        let mut acc = MultiPoly::zero(self.nvars, self.field);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone(), self.nvars);
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term = term.mul(&images[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Coefficient vector on the graded-lex monomial basis of the given
    /// degree (the polynomial must be homogeneous of that degree or zero).
    pub fn coefficient_vector(&self, degree: u32) -> Vec<Scalar> {
        let mons = monomials(self.nvars, degree);
        mons.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coefficient_vector(
        coeffs: &[Scalar],
        nvars: usize,
        degree: u32,
        field: FieldTag,
    ) -> MultiPoly {
        let mons = monomials(nvars, degree);
        assert_eq!(coeffs.len(), mons.len());
        MultiPoly::from_terms(
            mons.into_iter().zip(coeffs.iter().cloned()).collect(),
            nvars,
            field,
        )
    }

    /// `Some(c)` when `other == c * self` with `c != 0`; zero polynomials
    /// are proportional to each other only.
    pub fn proportional_to(&self, other: &MultiPoly) -> Option<Scalar> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some(Scalar::one(self.field))
            } else {
                None
            };
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (e0, c0) = self.terms.iter().next().unwrap();
        let d0 = other.terms.get(e0)?;
        let ratio = d0.div(c0);
        for (e, c) in &self.terms {
            if other.terms.get(e)? != &c.mul(&ratio) {
                return None;
            }
        }
        Some(ratio)
    }

    pub fn to_prime(&self, p: u64) -> Result<MultiPoly> {
        let field = FieldTag::prime(p)?;
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            terms.push((e.clone(), c.to_prime(p)?));
        }
        Ok(MultiPoly::from_terms(terms, self.nvars, field))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // print in graded-lex order, highest degree first
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then(b.cmp(a).reverse())
        });
        let mut first = true;
        for e in keys {
            let c = &self.terms[e];
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &p) in e.iter().enumerate() {
                if p == 1 {
                    write!(f, "*x{i}")?;
                } else if p > 1 {
                    write!(f, "*x{i}^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// Exact cofactor-expansion determinant of a 3x3 grid of polynomials.
pub fn poly_det3(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    if m.len() != 3 || m.iter().any(|r| r.len() != 3) {
        return Err(Error::ShapeMismatch("poly_det3 expects a 3x3 grid".into()));
    }
    let nvars = m[0][0].nvars();
    if m.iter().flatten().any(|p| p.nvars() != nvars) {
        return Err(Error::ShapeMismatch("entries disagree on nvars".into()));
    }
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]))
    };
    let d = m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)));
    Ok(d)
}

/// Matrix of multiplication by a homogeneous `f` from degree `d` to degree
/// `d + deg f`, on graded-lex monomial bases.
pub fn graded_multiplication_matrix(f: &MultiPoly, d: u32) -> Result<DenseMatrix> {
    let df = f.homogeneous_degree()?;
    if f.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let src = monomials(f.nvars(), d);
    let dst = monomials(f.nvars(), d + df);
    let index: std::collections::HashMap<&Vec<u32>, usize> =
        dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = DenseMatrix::zero(dst.len(), src.len(), f.field());
    for (c, mono) in src.iter().enumerate() {
        for (e, coef) in f.terms() {
            let target: Vec<u32> = mono.iter().zip(e).map(|(a, b)| a + b).collect();
            let r = index[&target];
            let v = out.get(r, c).add(coef);
            out.set(r, c, v);
        }
    }
    Ok(out)
}
