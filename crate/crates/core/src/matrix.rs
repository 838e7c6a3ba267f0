//! Dense exact matrices over the rationals or a prime field.
//!
//! Kernels are returned in a canonical reduced echelon form, so two
//! subspaces are equal exactly when their canonical bases are equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: FieldTag,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize, field: FieldTag) -> DenseMatrix {
        DenseMatrix {
            rows,
            cols,
            field,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldTag) -> DenseMatrix {
        let mut m = DenseMatrix::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: FieldTag) -> Result<DenseMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch(
                        field.to_string(),
                        s.field().to_string(),
                    ));
                }
                entries.push(s.clone());
            }
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            field,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: FieldTag,
        f: impl Fn(usize, usize) -> Scalar,
    ) -> DenseMatrix {
        let mut m = DenseMatrix::zero(rows, cols, field);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "mixed fields in matrix");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, self.field, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        assert_eq!(self.field, other.field, "mixed fields in mul");
        DenseMatrix::from_fn(self.rows, other.cols, self.field, |i, j| {
            let mut acc = Scalar::zero(self.field);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Row-reduce in place to reduced row echelon form.
    /// Returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.entries.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    /// Exact rank. Over the rationals this clears denominators row by row
    /// and runs fraction-free (Bareiss) elimination on integers, which
    /// keeps intermediate entries at minor size.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldTag::Prime(_) => self.rref().1.len(),
            FieldTag::Rational => self.rank_bareiss(),
        }
    }

    fn rank_bareiss(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    if let Scalar::Rat(r) = self.get(i, j) {
                        lcm = lcm.lcm(r.denom());
                    }
                }
                (0..self.cols)
                    .map(|j| match self.get(i, j) {
                        Scalar::Rat(r) => r.numer() * (&lcm / r.denom()),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, r);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            rank += 1;
            r += 1;
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Canonical basis of the right null space: the unique basis whose
    /// matrix of coordinate rows is in reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vec<Scalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(self.field); self.cols];
                v[f] = Scalar::one(self.field);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(row, f).neg();
                }
                v
            })
            .collect();
        canonical_basis(raw, self.cols, self.field)
    }

    /// Reduce all entries of a rational matrix modulo `p`.
    pub fn to_prime(&self, p: u64) -> Result<DenseMatrix> {
        let field = FieldTag::prime(p)?;
        let mut m = DenseMatrix::zero(self.rows, self.cols, field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).to_prime(p)?);
            }
        }
        Ok(m)
    }

    /// Rank of the reduction mod `p`, through the word-sized fast path.
    /// Always a lower bound for the exact rank over the rationals.
    pub fn rank_mod(&self, p: u64) -> Result<usize> {
        let mut buf = Vec::with_capacity(self.rows * self.cols);
        for e in &self.entries {
            match e.to_prime(p)? {
                Scalar::Fp { value, .. } => buf.push(value),
                _ => unreachable!(),
            }
        }
        Ok(crate::fp::rank_in_place(&mut buf, self.rows, self.cols, p))
    }

    /// Rank certified through modular reduction: when the rank mod `p`
    /// reaches `min(rows, cols)` the exact rank is forced. Returns `None`
    /// when no tried prime certifies (caller falls back to exact rank).
    pub fn rank_certified_modular(&self) -> Option<usize> {
        if self.field != FieldTag::Rational {
            return Some(self.rank());
        }
        let full = self.rows.min(self.cols);
        for p in [2_147_483_647u64, 2_147_483_629] {
            if let Ok(r) = self.rank_mod(p) {
                if r == full {
                    return Some(full);
                }
            }
        }
        None
    }

    /// Exact determinant (square matrices only), by rational elimination.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one(self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero(self.field);
            };
            if p != c {
                for j in 0..n {
                    m.entries.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            det = det.mul(m.get(c, c));
            let inv = m.get(c, c).inv();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Stack rows of `self` above rows of `other`.
    pub fn stack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols, "stack shape mismatch");
        assert_eq!(self.field, other.field);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        DenseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            entries,
        }
    }
}

/// Canonical representative of the span of `vectors` inside the
/// `dim`-dimensional coordinate space: the nonzero rows of the reduced
/// row echelon form of the stacked vectors. Two spans are equal exactly
/// when their canonical bases are equal.
pub fn canonical_basis(vectors: Vec<Vec<Scalar>>, dim: usize, field: FieldTag) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = DenseMatrix::from_rows(vectors, field).expect("ragged span");
    assert_eq!(m.cols(), dim);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Exact equality of two subspaces given by arbitrary spanning sets.
pub fn same_span(a: Vec<Vec<Scalar>>, b: Vec<Vec<Scalar>>, dim: usize, field: FieldTag) -> bool {
    canonical_basis(a, dim, field) == canonical_basis(b, dim, field)
}

/// Hadamard-style entry used by fraction-free elimination tests.
pub fn rational(num: i64, den: i64) -> Scalar {
    Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn big_rat(r: BigRational) -> Scalar {
    if r.denom().is_negative() {
        Scalar::Rat(BigRational::new(-r.numer(), -r.denom()))
    } else {
        Scalar::Rat(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> Scalar {
        Scalar::from_int(n, FieldTag::Rational)
    }

    #[test]
    fn kernel_of_coordinate_projection() {
        let m = DenseMatrix::from_rows(
            vec![vec![qi(1), qi(0), qi(0)], vec![qi(0), qi(1), qi(0)]],
            FieldTag::Rational,
        )
        .unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![qi(0), qi(0), qi(1)]]);
    }

    #[test]
    fn kernel_of_zero_matrix_is_identity() {
        let m = DenseMatrix::zero(3, 3, FieldTag::Rational);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, s) in v.iter().enumerate() {
                assert_eq!(s.is_one(), i == j);
            }
        }
    }

    #[test]
    fn rank_nullity_and_transpose_rank() {
        let m = DenseMatrix::from_rows(
            vec![
                vec![qi(1), qi(2), qi(3), qi(4)],
                vec![qi(2), qi(4), qi(6), qi(8)],
                vec![qi(0), qi(1), qi(1), qi(0)],
            ],
            FieldTag::Rational,
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank() + m.nullity(), m.cols());
        assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = DenseMatrix::from_rows(
            vec![
                vec![qi(1), qi(-2), qi(3), qi(5)],
                vec![qi(7), qi(11), qi(-1), qi(2)],
            ],
            FieldTag::Rational,
        )
        .unwrap();
        for v in m.kernel_basis() {
            assert!(m.mul_vec(&v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn bareiss_agrees_with_rref_rank() {
        let m = DenseMatrix::from_rows(
            vec![
                vec![rational(1, 2), qi(3), qi(0)],
                vec![qi(1), qi(6), qi(0)],
                vec![qi(0), qi(0), qi(5)],
            ],
            FieldTag::Rational,
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rref().1.len(), 2);
    }

    #[test]
    fn det_small() {
        let m = DenseMatrix::from_rows(
            vec![vec![qi(2), qi(1)], vec![qi(7), qi(4)]],
            FieldTag::Rational,
        )
        .unwrap();
        assert_eq!(m.det(), qi(1));
    }

    #[test]
    fn fp_kernel() {
        let f = FieldTag::prime(101).unwrap();
        let one = Scalar::one(f);
        let m = DenseMatrix::from_rows(
            vec![vec![
                one.clone(),
                Scalar::from_int(2, f),
                Scalar::from_int(3, f),
            ]],
            f,
        )
        .unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v).iter().all(|s| s.is_zero()));
        }
    }
}
