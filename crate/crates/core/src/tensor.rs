//! Trilinear tensors, their slice maps, determinantal cubics, the
//! contraction operator, and the trivial / cross-product / reversing
//! involutions for the (3,3,4) case.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{canonical_basis, DenseMatrix};
use crate::poly::{poly_det3, MultiPoly};
use crate::scalar::{FieldTag, Scalar};

/// Which leg of a tritensor to contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leg {
    One,
    Two,
    Three,
}

impl Leg {
    pub fn index(self) -> usize {
        match self {
            Leg::One => 0,
            Leg::Two => 1,
            Leg::Three => 2,
        }
    }
}

/// Basis bivectors of the rank-3 exterior square, listed so that
/// `e_{j1} ^ e_{j2} -> e_m` with `(j1, j2, m)` an even permutation of
/// `(0, 1, 2)`. This pins the orientation identification used by the
/// contraction operator and the cross-product involution.
pub const BIVECTOR_PAIRS: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriTensor {
    dims: [usize; 3],
    legs: [String; 3],
    field: FieldTag,
    entries: Vec<Scalar>,
}

/// Output of the cross-product involution: the canonical kernel basis,
/// the induced tensor, and the signs of the fixed orientation
/// identification of bivectors with vectors.
#[derive(Debug, Clone)]
pub struct InvolutionResult {
    /// Canonical (echelon) basis of the 3-dimensional kernel, re-read in
    /// the 12-dimensional space with the second leg major.
    pub uprime_basis: Vec<Vec<Scalar>>,
    /// The induced tensor, legs ordered (U'*, W, V).
    pub bprime: TriTensor,
    /// Signs of the bivector-to-vector identification, per basis vector.
    pub orientation_signs: [i64; 3],
}

impl TriTensor {
    pub fn new(
        dims: [usize; 3],
        legs: [String; 3],
        field: FieldTag,
        entries: Vec<Scalar>,
    ) -> Result<TriTensor> {
        if entries.len() != dims[0] * dims[1] * dims[2] {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries for dims {:?}, got {}",
                dims[0] * dims[1] * dims[2],
                dims,
                entries.len()
            )));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    e.field().to_string(),
                ));
            }
        }
        Ok(TriTensor {
            dims,
            legs,
            field,
            entries,
        })
    }

    pub fn zero(dims: [usize; 3], legs: [String; 3], field: FieldTag) -> TriTensor {
        TriTensor {
            dims,
            legs,
            field,
            entries: vec![Scalar::zero(field); dims[0] * dims[1] * dims[2]],
        }
    }

    /// Standard legs for a kernel-construction tensor.
    pub fn standard_legs() -> [String; 3] {
        ["U*".into(), "W".into(), "V*".into()]
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn legs(&self) -> &[String; 3] {
        &self.legs
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.entries[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.entries[(i * self.dims[1] + j) * self.dims[2] + k] = v;
    }

    pub fn is_334(&self) -> bool {
        self.dims == [3, 3, 4]
    }

    fn require_334(&self) -> Result<()> {
        if self.is_334() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "expected dims [3,3,4], got {:?}",
                self.dims
            )))
        }
    }

    /// Build a (3,3,4) tensor from a 3x3 grid of linear forms in 4
    /// variables: entry `[i][j][k]` is the coefficient of `x_k` in the
    /// grid entry at `(i, j)`.
    pub fn from_linear_form_grid(
        grid: &[Vec<MultiPoly>],
        legs: [String; 3],
        field: FieldTag,
    ) -> Result<TriTensor> {
        if grid.len() != 3 || grid.iter().any(|r| r.len() != 3) {
            return Err(Error::ShapeMismatch("expected a 3x3 grid".into()));
        }
        let mut t = TriTensor::zero([3, 3, 4], legs, field);
        for (i, row) in grid.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.nvars() != 4 {
                    return Err(Error::ShapeMismatch(
                        "linear forms must have 4 variables".into(),
                    ));
                }
                for k in 0..4 {
                    let mut e = vec![0u32; 4];
                    e[k] = 1;
                    t.set(i, j, k, p.coeff(&e));
                }
                if p.degree().unwrap_or(0) > 1 {
                    return Err(Error::ShapeMismatch("grid entries must be linear".into()));
                }
            }
        }
        Ok(t)
    }

    /// Contract the chosen leg with a coordinate vector. The result keeps
    /// the remaining two legs in their original order.
    pub fn slice(&self, leg: Leg, v: &[Scalar]) -> Result<DenseMatrix> {
        let l = leg.index();
        if v.len() != self.dims[l] {
            return Err(Error::ShapeMismatch(format!(
                "vector length {} vs leg size {}",
                v.len(),
                self.dims[l]
            )));
        }
        for s in v {
            if s.field() != self.field {
                return Err(Error::FieldMismatch(
                    self.field.to_string(),
                    s.field().to_string(),
                ));
            }
        }
        let (r, c) = match leg {
            Leg::One => (self.dims[1], self.dims[2]),
            Leg::Two => (self.dims[0], self.dims[2]),
            Leg::Three => (self.dims[0], self.dims[1]),
        };
        let mut m = DenseMatrix::zero(r, c, self.field);
        for a in 0..r {
            for b in 0..c {
                let mut acc = Scalar::zero(self.field);
                for (t, coef) in v.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let val = match leg {
                        Leg::One => self.get(t, a, b),
                        Leg::Two => self.get(a, t, b),
                        Leg::Three => self.get(a, b, t),
                    };
                    acc = acc.add(&coef.mul(val));
                }
                m.set(a, b, acc);
            }
        }
        Ok(m)
    }

    /// The symbolic 3x3 matrix of linear forms obtained by leaving leg
    /// three free, and its determinant cubic in 4 variables.
    pub fn symbolic_grid(&self) -> Result<Vec<Vec<MultiPoly>>> {
        self.require_334()?;
        let mut grid = vec![vec![MultiPoly::zero(4, self.field); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut terms = Vec::new();
                for k in 0..4 {
                    let c = self.get(i, j, k).clone();
                    if !c.is_zero() {
                        let mut e = vec![0u32; 4];
                        e[k] = 1;
                        terms.push((e, c));
                    }
                }
                grid[i][j] = MultiPoly::from_terms(terms, 4, self.field);
            }
        }
        Ok(grid)
    }

    pub fn det_cubic(&self) -> Result<MultiPoly> {
        poly_det3(&self.symbolic_grid()?)
    }

    /// Transpose the two 3-dimensional legs (names move with them).
    pub fn trivial_involution(&self) -> TriTensor {
        let mut t = TriTensor::zero(
            [self.dims[1], self.dims[0], self.dims[2]],
            [
                self.legs[1].clone(),
                self.legs[0].clone(),
                self.legs[2].clone(),
            ],
            self.field,
        );
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    t.set(j, i, k, self.get(i, j, k).clone());
                }
            }
        }
        t
    }

    /// Reorder legs by `perm`: new leg `l` is old leg `perm[l]`.
    pub fn permute_legs(&self, perm: [usize; 3]) -> TriTensor {
        let dims = [self.dims[perm[0]], self.dims[perm[1]], self.dims[perm[2]]];
        let legs = [
            self.legs[perm[0]].clone(),
            self.legs[perm[1]].clone(),
            self.legs[perm[2]].clone(),
        ];
        let mut t = TriTensor::zero(dims, legs, self.field);
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let old = [i, j, k];
                    t.set(
                        old[perm[0]],
                        old[perm[1]],
                        old[perm[2]],
                        self.get(i, j, k).clone(),
                    );
                }
            }
        }
        t
    }

    /// Matrix of the contraction on fixed bases, 9 x 12 for a (3,3,4)
    /// tensor. Rows are (leg-1 index, leg-2 dual index) with leg 1 major;
    /// columns are (bivector index, leg-3 index) with the bivector major.
    /// For a bivector `w = e_{j1} ^ e_{j2}` and a leg-3 basis vector `e_k`,
    /// the entry at `(i, j')` is `sum_j B[i][j][k] w_{j j'}` with `w`
    /// antisymmetric.
    pub fn contraction_matrix(&self) -> Result<DenseMatrix> {
        self.require_334()?;
        let mut m = DenseMatrix::zero(9, 12, self.field);
        for i in 0..3 {
            for jp in 0..3 {
                let row = 3 * i + jp;
                for (bidx, &(j1, j2)) in BIVECTOR_PAIRS.iter().enumerate() {
                    for k in 0..4 {
                        let col = 4 * bidx + k;
                        let mut v = Scalar::zero(self.field);
                        if jp == j2 {
                            v = v.add(self.get(i, j1, k));
                        }
                        if jp == j1 {
                            v = v.sub(self.get(i, j2, k));
                        }
                        m.set(row, col, v);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Surjectivity of the contraction: rank 9 of the 9 x 12 matrix.
    pub fn main_assumption(&self) -> Result<bool> {
        Ok(self.contraction_matrix()?.rank() == 9)
    }

    /// The cross-product involution. The kernel of the contraction is
    /// re-read in the 12-dimensional space through the orientation
    /// identification fixed by [`BIVECTOR_PAIRS`], and the induced tensor
    /// carries legs (U'*, W, V).
    pub fn cross_product_involution(&self) -> Result<InvolutionResult> {
        let c = self.contraction_matrix()?;
        let rank = c.rank();
        if rank != 9 {
            return Err(Error::MainAssumptionFailed { rank });
        }
        let kernel = c.kernel_basis();
        if kernel.len() != 3 {
            return Err(Error::KernelDimension {
                expected: 3,
                got: kernel.len(),
            });
        }
        // coordinates (bivector b, leg-3 k) at index 4b + k become
        // (leg-2 index b, leg-3 index k): the identification has sign +1
        // on every basis bivector with the pairing above.
        let mut bprime = TriTensor::zero(
            [3, 3, 4],
            ["U'*".into(), self.legs[1].clone(), dual_name(&self.legs[2])],
            self.field,
        );
        for (a, vec) in kernel.iter().enumerate() {
            for b in 0..3 {
                for k in 0..4 {
                    bprime.set(a, b, k, vec[4 * b + k].clone());
                }
            }
        }
        Ok(InvolutionResult {
            uprime_basis: kernel,
            bprime,
            orientation_signs: [1, 1, 1],
        })
    }

    /// Cross-product involution followed by the trivial involution:
    /// legs ordered (W, U'*, V).
    pub fn reversing_construction(&self) -> Result<TriTensor> {
        Ok(self.cross_product_involution()?.bprime.trivial_involution())
    }

    /// The span of the leg-1 coordinate slabs inside the 12-dimensional
    /// space with leg 2 major, in canonical form. This is the subspace the
    /// double application of the cross-product involution must reproduce.
    pub fn leg1_slab_span(&self) -> Result<Vec<Vec<Scalar>>> {
        self.require_334()?;
        let vectors = (0..3)
            .map(|i| {
                let mut v = Vec::with_capacity(12);
                for j in 0..3 {
                    for k in 0..4 {
                        v.push(self.get(i, j, k).clone());
                    }
                }
                v
            })
            .collect();
        Ok(canonical_basis(vectors, 12, self.field))
    }

    pub fn to_prime(&self, p: u64) -> Result<TriTensor> {
        let field = FieldTag::prime(p)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.to_prime(p)?);
        }
        TriTensor::new(self.dims, self.legs.clone(), field, entries)
    }

    /// Entries flattened mod p (leg order row-major), for the scan loops.
    pub fn entries_mod_p(&self, p: u64) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            match e.to_prime(p)? {
                Scalar::Fp { value, .. } => out.push(value),
                _ => unreachable!(),
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.dims[0])
            .map(|i| {
                Value::Array(
                    (0..self.dims[1])
                        .map(|j| {
                            Value::Array(
                                (0..self.dims[2])
                                    .map(|k| Value::String(self.get(i, j, k).to_string()))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "schema": "tritensor/1",
            "dims": self.dims,
            "field": self.field.to_string(),
            "legs": self.legs,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<TriTensor> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Other("tensor JSON must be an object".into()))?;
        if obj.get("schema").and_then(Value::as_str) != Some("tritensor/1") {
            return Err(Error::Other(
                "unknown or missing schema (expected tritensor/1)".into(),
            ));
        }
        let dims_v = obj
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Other("missing dims".into()))?;
        if dims_v.len() != 3 {
            return Err(Error::ShapeMismatch("dims must have length 3".into()));
        }
        let mut dims = [0usize; 3];
        for (i, d) in dims_v.iter().enumerate() {
            dims[i] = d.as_u64().ok_or_else(|| Error::Other("bad dims".into()))? as usize;
        }
        let field = FieldTag::parse(
            obj.get("field")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Other("missing field".into()))?,
        )?;
        let legs_v = obj.get("legs").and_then(Value::as_array);
        let legs: [String; 3] = match legs_v {
            Some(l) if l.len() == 3 => [
                l[0].as_str().unwrap_or("").to_string(),
                l[1].as_str().unwrap_or("").to_string(),
                l[2].as_str().unwrap_or("").to_string(),
            ],
            _ => TriTensor::standard_legs(),
        };
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Other("missing entries".into()))?;
        let mut entries = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        if rows.len() != dims[0] {
            return Err(Error::ShapeMismatch(
                "entries outer length != dims[0]".into(),
            ));
        }
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::ShapeMismatch("entries must nest 3 deep".into()))?;
            if row.len() != dims[1] {
                return Err(Error::ShapeMismatch(
                    "entries middle length != dims[1]".into(),
                ));
            }
            for col in row {
                let col = col
                    .as_array()
                    .ok_or_else(|| Error::ShapeMismatch("entries must nest 3 deep".into()))?;
                if col.len() != dims[2] {
                    return Err(Error::ShapeMismatch(
                        "entries inner length != dims[2]".into(),
                    ));
                }
                for s in col {
                    let s = s
                        .as_str()
                        .ok_or_else(|| Error::Other("entries must be scalar strings".into()))?;
                    entries.push(Scalar::parse(s, field)?);
                }
            }
        }
        TriTensor::new(dims, legs, field, entries)
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}
