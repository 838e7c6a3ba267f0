//! The Schur quadric of a (3,3,4) tensor, the double-six lines cut out by
//! the rank-2 slices at the base points, the orthogonality certificate,
//! and the quadric's action carrying one side of the tensor to its
//! cross-product partner.

use crate::error::{Error, Result};
use crate::matrix::{canonical_basis, DenseMatrix};
use crate::points::{self, BasePointMode, PlanePoint, Side};
use crate::scalar::{FieldTag, Scalar};
use crate::tensor::{Leg, TriTensor};

/// Index pairs `(a < b)` of a 3-set, in the fixed order used for the
/// exterior-square row blocks.
const PAIRS3: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Monomial pairs `(k <= l)` of the symmetric square of a 4-space, in
/// graded-lex order.
const PAIRS4: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Matrix of the symmetrized-slice projection on monomial bases, 9 x 10
/// for a (3,3,4) tensor. For the basis element `v_k v_l` with slices
/// `M = B(e_k)`, `M' = B(e_l)`, the entry at row `((i<i'), (j<j'))` is
/// `(M_ij M'_i'j' - M_i'j M'_ij' - M_ij' M'_i'j + M_i'j' M'_ij) / 4`
/// (symmetric in `(M, M')` as written).
pub fn schur_map(t: &TriTensor) -> Result<DenseMatrix> {
    if t.dims() != [3, 3, 4] {
        return Err(Error::ShapeMismatch(format!(
            "expected dims [3,3,4], got {:?}",
            t.dims()
        )));
    }
    let field = t.field();
    if let FieldTag::Prime(2) = field {
        return Err(Error::BadModulus(2));
    }
    let quarter = Scalar::from_int(4, field).inv();
    let slices: Vec<DenseMatrix> = (0..4)
        .map(|k| {
            let mut e = vec![Scalar::zero(field); 4];
            e[k] = Scalar::one(field);
            t.slice(Leg::Three, &e)
        })
        .collect::<Result<_>>()?;
    let mut m = DenseMatrix::zero(9, 10, field);
    for (col, &(k, l)) in PAIRS4.iter().enumerate() {
        let (a, b) = (&slices[k], &slices[l]);
        for (ru, &(i, ip)) in PAIRS3.iter().enumerate() {
            for (rw, &(j, jp)) in PAIRS3.iter().enumerate() {
                let row = 3 * ru + rw;
                let v = a
                    .get(i, j)
                    .mul(b.get(ip, jp))
                    .sub(&a.get(ip, j).mul(b.get(i, jp)))
                    .sub(&a.get(i, jp).mul(b.get(ip, j)))
                    .add(&a.get(ip, jp).mul(b.get(i, j)))
                    .mul(&quarter);
                m.set(row, col, v);
            }
        }
    }
    Ok(m)
}

/// The Schur quadric: the one-dimensional kernel of the 9 x 10 map,
/// reassembled as a symmetric 4 x 4 matrix (off-diagonal monomial
/// coefficients halved) and scaled so its first nonzero entry in
/// row-major order is 1.
#[derive(Debug, Clone)]
pub struct SchurQuadric {
    pub q: DenseMatrix,
    pub nondegenerate: bool,
}

pub fn schur_quadric(t: &TriTensor) -> Result<SchurQuadric> {
    let m = schur_map(t)?;
    let kernel = m.kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::SchurDegenerate { dim: kernel.len() });
    }
    let field = t.field();
    let half = Scalar::from_int(2, field).inv();
    let coeffs = &kernel[0];
    let mut q = DenseMatrix::zero(4, 4, field);
    for (idx, &(k, l)) in PAIRS4.iter().enumerate() {
        if k == l {
            q.set(k, k, coeffs[idx].clone());
        } else {
            let v = coeffs[idx].mul(&half);
            q.set(k, l, v.clone());
            q.set(l, k, v);
        }
    }
    // canonical scaling: first nonzero entry in row-major order becomes 1
    let lead = (0..16)
        .map(|i| q.get(i / 4, i % 4).clone())
        .find(|v| !v.is_zero())
        .expect("kernel generator is nonzero");
    let inv = lead.inv();
    let q = DenseMatrix::from_fn(4, 4, field, |i, j| q.get(i, j).mul(&inv));
    let nondegenerate = !q.det().is_zero();
    Ok(SchurQuadric { q, nondegenerate })
}

/// A line in the 4-dimensional coordinate space: a canonical 2-vector
/// basis, labeled by the side and base-point index it came from.
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    pub span: Vec<Vec<Scalar>>,
    pub side: Side,
    pub point_index: usize,
}

#[derive(Debug, Clone)]
pub struct DoubleSix {
    pub u_points: Vec<PlanePoint>,
    pub w_points: Vec<PlanePoint>,
    pub pairs: Vec<(ProjectiveLine, ProjectiveLine)>,
    /// dim(A_i + A'_j) for every i, j: 4 exactly on matched pairs.
    pub span_table: [[usize; 6]; 6],
}

fn kernel_line(t: &TriTensor, side: Side, idx: usize, pt: &PlanePoint) -> Result<ProjectiveLine> {
    let leg = side.leg_of(t)?;
    let m = t.slice(leg, pt.coords())?;
    let kernel = m.kernel_basis();
    if kernel.len() != 2 {
        return Err(Error::KernelDimension {
            expected: 2,
            got: kernel.len(),
        });
    }
    Ok(ProjectiveLine {
        span: kernel,
        side,
        point_index: idx,
    })
}

/// The twelve lines: kernels of the rank-2 slices at the six base points
/// of each side, paired combinatorially by disjointness (each line of one
/// family is disjoint from exactly one line of the other).
pub fn double_six(t: &TriTensor, mode: BasePointMode) -> Result<DoubleSix> {
    let bu = points::base_points(t, Side::U, mode)?;
    let bw = points::base_points(t, Side::W, mode)?;
    if !bu.complete || !bw.complete {
        return Err(Error::NonRationalBasePoints);
    }
    let field = bu.points[0].field();
    let a_lines: Vec<ProjectiveLine> = bu
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| kernel_line(t, Side::U, i, p))
        .collect::<Result<_>>()?;
    let b_lines: Vec<ProjectiveLine> = bw
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| kernel_line(t, Side::W, i, p))
        .collect::<Result<_>>()?;
    let mut table = [[0usize; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut vs = a_lines[i].span.clone();
            vs.extend(b_lines[j].span.iter().cloned());
            table[i][j] = canonical_basis(vs, 4, field).len();
        }
    }
    let mut pairs = Vec::with_capacity(6);
    let mut used = [false; 6];
    for i in 0..6 {
        let disjoint: Vec<usize> = (0..6).filter(|&j| table[i][j] == 4).collect();
        if disjoint.len() != 1 || used[disjoint[0]] {
            return Err(Error::PairingDegenerate);
        }
        used[disjoint[0]] = true;
        pairs.push((a_lines[i].clone(), b_lines[disjoint[0]].clone()));
    }
    Ok(DoubleSix {
        u_points: bu.points,
        w_points: bw.points,
        pairs,
        span_table: table,
    })
}

#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    /// (pair index, basis index on each side, value) for nonzero matched
    /// evaluations.
    pub violations: Vec<(usize, usize, usize, Scalar)>,
    /// At least one unmatched cross pair evaluates to a nonzero value,
    /// certifying the quadric does not vanish on everything.
    pub cross_pair_nonzero: bool,
}

fn bilinear(q: &DenseMatrix, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let qy = q.mul_vec(y);
    let field = q.field();
    let mut acc = Scalar::zero(field);
    for (xi, qyi) in x.iter().zip(&qy) {
        acc = acc.add(&xi.mul(qyi));
    }
    acc
}

/// The polar pairing of the quadric on the coordinate space the kernel
/// lines live in: the adjugate of the symmetric matrix (the inverse up to
/// the determinant scale, which does not move zeros). The quadric itself
/// is a form on the dual space, so lines are orthogonal exactly when the
/// adjugate pairing vanishes on them.
pub fn polar_matrix(q: &DenseMatrix) -> DenseMatrix {
    let field = q.field();
    let n = q.rows();
    DenseMatrix::from_fn(n, n, field, |i, j| {
        // cofactor C_ji (adjugate is the transposed cofactor matrix)
        let minor = DenseMatrix::from_fn(n - 1, n - 1, field, |r, c| {
            let rr = if r < j { r } else { r + 1 };
            let cc = if c < i { c } else { c + 1 };
            q.get(rr, cc).clone()
        });
        let d = minor.det();
        if (i + j) % 2 == 0 {
            d
        } else {
            d.neg()
        }
    })
}

/// Exact orthogonality of all matched pairs under the polar pairing of
/// the Schur quadric (four evaluations per pair), plus a nonzero
/// certificate on some unmatched cross pair.
pub fn orthogonality_check(q: &SchurQuadric, ds: &DoubleSix) -> OrthogonalityReport {
    let polar = polar_matrix(&q.q);
    let mut violations = Vec::new();
    for (pi, (a, b)) in ds.pairs.iter().enumerate() {
        for (xi, x) in a.span.iter().enumerate() {
            for (yi, y) in b.span.iter().enumerate() {
                let v = bilinear(&polar, x, y);
                if !v.is_zero() {
                    violations.push((pi, xi, yi, v));
                }
            }
        }
    }
    let mut cross_pair_nonzero = false;
    'outer: for (pi, (a, _)) in ds.pairs.iter().enumerate() {
        for (pj, (_, b)) in ds.pairs.iter().enumerate() {
            if pi == pj {
                continue;
            }
            for x in &a.span {
                for y in &b.span {
                    if !bilinear(&polar, x, y).is_zero() {
                        cross_pair_nonzero = true;
                        break 'outer;
                    }
                }
            }
        }
    }
    OrthogonalityReport {
        orthogonal: violations.is_empty(),
        violations,
        cross_pair_nonzero,
    }
}

/// Does `id (x) q` carry the span of the leg-1 slabs onto the kernel of
/// the contraction? The image of each slab `B[i][.][.]` is the slab times
/// the symmetric matrix on the leg-3 index; the comparison is between
/// canonical subspace forms.
pub fn schur_carries_u_to_uprime(t: &TriTensor) -> Result<bool> {
    let quad = schur_quadric(t)?;
    let inv = t.cross_product_involution()?;
    let field = t.field();
    let mut images = Vec::with_capacity(3);
    for i in 0..3 {
        let mut e = vec![Scalar::zero(field); 3];
        e[i] = Scalar::one(field);
        let slab = t.slice(Leg::One, &e)?; // 3 x 4 over (leg2, leg3)
        let img = slab.mul(&quad.q);
        let mut v = Vec::with_capacity(12);
        for j in 0..3 {
            for k in 0..4 {
                v.push(img.get(j, k).clone());
            }
        }
        images.push(v);
    }
    Ok(canonical_basis(images, 12, field) == inv.uprime_basis)
}

/// Which substitution convention relates the two determinant cubics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `C(q x)` is proportional to `C'(x)` (equivalently `C'(q^-1 x)` to `C`).
    QForward,
    /// `C(q^-1 x)` is proportional to `C'(x)`.
    QInverse,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::QForward => "q-forward",
            Direction::QInverse => "q-inverse",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CubicCorrespondence {
    pub holds: bool,
    pub direction: Direction,
    pub ratio: Scalar,
}

fn matrix_inverse(q: &DenseMatrix) -> Result<DenseMatrix> {
    let n = q.rows();
    let field = q.field();
    let aug = DenseMatrix::from_fn(n, 2 * n, field, |i, j| {
        if j < n {
            q.get(i, j).clone()
        } else if j - n == i {
            Scalar::one(field)
        } else {
            Scalar::zero(field)
        }
    });
    let (r, pivots) = aug.rref();
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::QuadricDegenerate);
    }
    Ok(DenseMatrix::from_fn(n, n, field, |i, j| {
        r.get(i, n + j).clone()
    }))
}

/// Test whether substituting the quadric (or its inverse) into one
/// determinant cubic reproduces the other, up to a scalar. The two
/// composite routes `C(qx) ~ C'(x)` and `C'(q^-1 x) ~ C(x)` are the same
/// convention; exactly one convention may hold for a nondegenerate
/// instance, and the suite requires the same convention across a run.
pub fn cubic_correspondence_check(t: &TriTensor) -> Result<CubicCorrespondence> {
    let quad = schur_quadric(t)?;
    if !quad.nondegenerate {
        return Err(Error::QuadricDegenerate);
    }
    let qinv = matrix_inverse(&quad.q)?;
    let c = t.det_cubic()?;
    let cprime = t.reversing_construction()?.det_cubic()?;
    if c.is_zero() || cprime.is_zero() {
        return Err(Error::NoConvention);
    }
    let forward = c.substitute_linear(&quad.q).proportional_to(&cprime);
    let inverse = c.substitute_linear(&qinv).proportional_to(&cprime);
    match (forward, inverse) {
        (Some(ratio), None) => Ok(CubicCorrespondence {
            holds: true,
            direction: Direction::QForward,
            ratio,
        }),
        (None, Some(ratio)) => Ok(CubicCorrespondence {
            holds: true,
            direction: Direction::QInverse,
            ratio,
        }),
        _ => Err(Error::NoConvention),
    }
}

/// Property behind the involution proof: the Schur quadric of the
/// reversing construction is proportional to the inverse of q.
pub fn schur_inverse_relation(t: &TriTensor) -> Result<bool> {
    let quad = schur_quadric(t)?;
    if !quad.nondegenerate {
        return Err(Error::QuadricDegenerate);
    }
    let rev = t.reversing_construction()?;
    let quad_rev = schur_quadric(&rev)?;
    let qinv = matrix_inverse(&quad.q)?;
    // compare after the same canonical scaling
    let lead = (0..16)
        .map(|i| qinv.get(i / 4, i % 4).clone())
        .find(|v| !v.is_zero())
        .ok_or(Error::QuadricDegenerate)?;
    let inv = lead.inv();
    let qinv_scaled = DenseMatrix::from_fn(4, 4, t.field(), |i, j| qinv.get(i, j).mul(&inv));
    Ok(qinv_scaled == quad_rev.q)
}

/// A seeded six-point tensor whose double six is fully rational over the
/// rationals (both base-point sixtuples extract exactly), resampling
/// sub-seeds until one is found.
pub fn rational_double_six_instance(
    seed: u64,
    max_tries: u64,
) -> Option<(u64, TriTensor, DoubleSix)> {
    for i in 0..max_tries {
        let t = crate::generate::from_points_tensor(seed + i, FieldTag::Rational);
        if let Ok(ds) = double_six(&t, BasePointMode::Minors) {
            return Some((seed + i, t, ds));
        }
    }
    None
}
