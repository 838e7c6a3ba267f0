//! Both directions of the correspondence between a tritensor and six
//! points in the plane: cubics through the points, their linear syzygy
//! matrix, the induced tensor, and the rank-drop locus of the 3x4 slices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fp;
use crate::matrix::{canonical_basis, DenseMatrix};
use crate::poly::{monomials, poly_det3, MultiPoly};
use crate::scalar::{FieldTag, Scalar};
use crate::tensor::{Leg, TriTensor};

/// A projective plane point, normalized so its first nonzero coordinate
/// is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanePoint {
    coords: [Scalar; 3],
}

impl PlanePoint {
    pub fn new(coords: [Scalar; 3]) -> Result<PlanePoint> {
        let Some(lead) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(Error::ZeroPoint);
        };
        let inv = coords[lead].inv();
        let coords = [
            coords[0].mul(&inv),
            coords[1].mul(&inv),
            coords[2].mul(&inv),
        ];
        Ok(PlanePoint { coords })
    }

    pub fn from_ints(c: [i64; 3], field: FieldTag) -> Result<PlanePoint> {
        PlanePoint::new([
            Scalar::from_int(c[0], field),
            Scalar::from_int(c[1], field),
            Scalar::from_int(c[2], field),
        ])
    }

    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    pub fn field(&self) -> FieldTag {
        self.coords[0].field()
    }

    pub fn to_strings(&self) -> [String; 3] {
        [
            self.coords[0].to_string(),
            self.coords[1].to_string(),
            self.coords[2].to_string(),
        ]
    }

    /// Evaluate a monomial exponent vector at this point.
    fn eval_monomial(&self, expo: &[u32]) -> Scalar {
        let field = self.field();
        let mut acc = Scalar::one(field);
        for (c, &e) in self.coords.iter().zip(expo) {
            for _ in 0..e {
                acc = acc.mul(c);
            }
        }
        acc
    }
}

/// Which 3-dimensional leg carries the plane points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    U,
    W,
}

impl Side {
    /// Resolve the side to a leg index by leg name prefix.
    pub fn leg_of(&self, t: &TriTensor) -> Result<Leg> {
        let prefix = match self {
            Side::U => 'U',
            Side::W => 'W',
        };
        for (idx, name) in t.legs().iter().enumerate() {
            if name.starts_with(prefix) && t.dims()[idx] == 3 {
                return Ok(match idx {
                    0 => Leg::One,
                    1 => Leg::Two,
                    _ => Leg::Three,
                });
            }
        }
        Err(Error::UnknownSide(format!("{prefix}")))
    }
}

/// Canonical basis of the cubics through six pairwise-distinct points:
/// the kernel of the 6 x 10 evaluation matrix. Exactly four when the
/// points impose independent conditions.
pub fn cubics_through_points(pts: &[PlanePoint]) -> Result<Vec<MultiPoly>> {
    if pts.len() != 6 {
        return Err(Error::ShapeMismatch(format!(
            "expected 6 points, got {}",
            pts.len()
        )));
    }
    let field = pts[0].field();
    if pts.iter().any(|p| p.field() != field) {
        return Err(Error::FieldMismatch(
            field.to_string(),
            "mixed point fields".into(),
        ));
    }
    let mons = monomials(3, 3);
    let eval = DenseMatrix::from_fn(6, 10, field, |r, c| pts[r].eval_monomial(&mons[c]));
    let kernel = eval.kernel_basis();
    if kernel.len() != 4 {
        return Err(Error::SpecialPosition { dim: kernel.len() });
    }
    for i in 0..6 {
        for j in i + 1..6 {
            if pts[i] == pts[j] {
                return Err(Error::RepeatedPoint);
            }
        }
    }
    Ok(kernel
        .into_iter()
        .map(|v| MultiPoly::from_coefficient_vector(&v, 3, 3, field))
        .collect())
}

/// Canonical basis of the linear syzygies of four independent cubics:
/// rows (L1..L4) of linear forms with sum L_m g_m = 0, computed as the
/// kernel of the 15 x 12 coefficient matrix. Exactly three rows in the
/// generic case.
pub fn linear_syzygies(cubics: &[MultiPoly]) -> Result<Vec<Vec<MultiPoly>>> {
    if cubics.len() != 4 {
        return Err(Error::ShapeMismatch(format!(
            "expected 4 cubics, got {}",
            cubics.len()
        )));
    }
    let field = cubics[0].field();
    for g in cubics {
        if g.is_zero() || g.homogeneous_degree()? != 3 || g.nvars() != 3 {
            return Err(Error::ShapeMismatch(
                "cubics must be homogeneous of degree 3 in 3 variables".into(),
            ));
        }
    }
    let span = canonical_basis(
        cubics.iter().map(|g| g.coefficient_vector(3)).collect(),
        10,
        field,
    );
    if span.len() != 4 {
        return Err(Error::ShapeMismatch(
            "cubics must be linearly independent".into(),
        ));
    }
    let quartics = monomials(3, 4);
    let index: std::collections::HashMap<&Vec<u32>, usize> =
        quartics.iter().enumerate().map(|(i, m)| (m, i)).collect();
    // column (m, c): coefficient vector of y_c * g_m
    let mut sys = DenseMatrix::zero(15, 12, field);
    for m in 0..4 {
        for c in 0..3 {
            let col = m * 3 + c;
            for (e, coef) in cubics[m].terms() {
                let mut target = e.clone();
                target[c] += 1;
                let row = index[&target];
                let v = sys.get(row, col).add(coef);
                sys.set(row, col, v);
            }
        }
    }
    let kernel = sys.kernel_basis();
    if kernel.len() != 3 {
        return Err(Error::SyzygyDegeneracy { dim: kernel.len() });
    }
    Ok(kernel
        .into_iter()
        .map(|v| {
            (0..4)
                .map(|m| {
                    let terms = (0..3)
                        .filter_map(|c| {
                            let coef = v[m * 3 + c].clone();
                            if coef.is_zero() {
                                None
                            } else {
                                let mut e = vec![0u32; 3];
                                e[c] = 1;
                                Some((e, coef))
                            }
                        })
                        .collect();
                    MultiPoly::from_terms(terms, 3, field)
                })
                .collect()
        })
        .collect())
}

/// The four maximal minors of a 3x4 matrix of linear forms, signed with
/// `(-1)^m` for the deleted column `m`, so the rows of the matrix are
/// themselves syzygies of the minors (Laplace expansion along a repeated
/// row).
pub fn syzygy_minors(syz: &[Vec<MultiPoly>]) -> Result<Vec<MultiPoly>> {
    if syz.len() != 3 || syz.iter().any(|r| r.len() != 4) {
        return Err(Error::ShapeMismatch(
            "expected a 3x4 matrix of linear forms".into(),
        ));
    }
    (0..4)
        .map(|drop| {
            let grid: Vec<Vec<MultiPoly>> = (0..3)
                .map(|r| {
                    (0..4)
                        .filter(|&c| c != drop)
                        .map(|c| syz[r][c].clone())
                        .collect()
                })
                .collect();
            let d = poly_det3(&grid)?;
            Ok(if drop % 2 == 0 { d } else { d.neg() })
        })
        .collect()
}

/// Do the maximal minors of the syzygy matrix span exactly the same
/// 4-space of cubics?
pub fn minors_respan(syz: &[Vec<MultiPoly>], cubics: &[MultiPoly]) -> bool {
    let Ok(minors) = syzygy_minors(syz) else {
        return false;
    };
    let field = cubics[0].field();
    let a = canonical_basis(
        minors.iter().map(|m| m.coefficient_vector(3)).collect(),
        10,
        field,
    );
    let b = canonical_basis(
        cubics.iter().map(|g| g.coefficient_vector(3)).collect(),
        10,
        field,
    );
    a == b
}

/// Rescale a rational vector to the primitive integer representative
/// with positive leading entry (prime-field vectors pass through).
fn primitive_vector(v: Vec<Scalar>) -> Vec<Scalar> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    if !matches!(v.first(), Some(Scalar::Rat(_))) {
        return v;
    }
    let mut lcm = BigInt::one();
    for s in &v {
        if let Scalar::Rat(r) = s {
            lcm = lcm.lcm(r.denom());
        }
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|s| match s {
            Scalar::Rat(r) => r.numer() * (&lcm / r.denom()),
            _ => unreachable!(),
        })
        .collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return v;
    }
    if let Some(lead) = ints.iter().find(|x| !x.is_zero()) {
        if lead.is_negative() {
            gcd = -gcd;
        }
    }
    ints.into_iter()
        .map(|x| Scalar::Rat(num_rational::BigRational::from(x / &gcd)))
        .collect()
}

/// Compose the two correspondence directions: points -> cubics ->
/// syzygies -> tensor. The tensor has legs (W'*, U'*, V): leg 1 indexes
/// the syzygy rows, leg 2 the plane coordinates, leg 3 the cubic slots.
/// Each syzygy row is rescaled to its primitive integer representative (a
/// leg-1 basis rescaling, invisible to every rank, kernel, and locus).
pub fn points_to_tensor(pts: &[PlanePoint]) -> Result<TriTensor> {
    let cubics = cubics_through_points(pts)?;
    let syz = linear_syzygies(&cubics)?;
    let field = pts[0].field();
    let mut t = TriTensor::zero([3, 3, 4], ["W'*".into(), "U'*".into(), "V".into()], field);
    for (s, row) in syz.iter().enumerate() {
        let mut coords = Vec::with_capacity(12);
        for form in row {
            for c in 0..3 {
                let mut e = vec![0u32; 3];
                e[c] = 1;
                coords.push(form.coeff(&e));
            }
        }
        let coords = primitive_vector(coords);
        for (m, chunk) in coords.chunks(3).enumerate() {
            for (c, val) in chunk.iter().enumerate() {
                t.set(s, c, m, val.clone());
            }
        }
    }
    Ok(t)
}

/// The full correspondence package for six points in general position:
/// the points, the cubic system through them, the linear syzygy matrix,
/// and the induced tensor. Construction validates the syzygy identity
/// and the minor re-span invariant.
#[derive(Debug, Clone)]
pub struct HilbertBurchData {
    pub points: Vec<PlanePoint>,
    pub cubic_basis: Vec<MultiPoly>,
    pub syzygies: Vec<Vec<MultiPoly>>,
    pub syzygy_tensor: TriTensor,
}

impl HilbertBurchData {
    pub fn from_points(pts: &[PlanePoint]) -> Result<HilbertBurchData> {
        let cubic_basis = cubics_through_points(pts)?;
        let syzygies = linear_syzygies(&cubic_basis)?;
        let field = pts[0].field();
        for row in &syzygies {
            let mut acc = MultiPoly::zero(3, field);
            for (l, g) in row.iter().zip(&cubic_basis) {
                acc = acc.add(&l.mul(g));
            }
            if !acc.is_zero() {
                return Err(Error::Other("syzygy identity violated".into()));
            }
        }
        if !minors_respan(&syzygies, &cubic_basis) {
            return Err(Error::Other(
                "maximal minors do not re-span the cubic system".into(),
            ));
        }
        let syzygy_tensor = points_to_tensor(pts)?;
        Ok(HilbertBurchData {
            points: pts.to_vec(),
            cubic_basis,
            syzygies,
            syzygy_tensor,
        })
    }
}

/// Exact rank of the slice of `t` at a plane point on the given leg.
pub fn slice_rank_at(t: &TriTensor, leg: Leg, point: &PlanePoint) -> Result<usize> {
    Ok(t.slice(leg, point.coords())?.rank())
}

/// How base points are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasePointMode {
    /// Exhaustive scan of the projective plane over `F_p`.
    Scan(u64),
    /// Rational extraction through the minor system: scan small primes for
    /// candidates, reconstruct small-height rationals, verify exactly.
    Minors,
}

#[derive(Debug, Clone)]
pub struct BasePoints {
    pub points: Vec<PlanePoint>,
    pub complete: bool,
    pub mode: BasePointMode,
}

/// All plane points where the 3x4 slice on the chosen side has rank at
/// most 2, with a completeness flag (six points expected; non-rational or
/// infinitely-near configurations report incomplete).
pub fn base_points(t: &TriTensor, side: Side, mode: BasePointMode) -> Result<BasePoints> {
    let leg = side.leg_of(t)?;
    match (mode, t.field()) {
        (BasePointMode::Scan(p), _) => {
            let pts = scan_rank_drop(t, leg, p)?;
            Ok(BasePoints {
                complete: pts.len() == 6,
                points: pts,
                mode,
            })
        }
        (BasePointMode::Minors, FieldTag::Prime(p)) => {
            // over a finite field the exhaustive scan is the whole story
            let pts = scan_rank_drop(t, leg, p)?;
            Ok(BasePoints {
                complete: pts.len() == 6,
                points: pts,
                mode,
            })
        }
        (BasePointMode::Minors, FieldTag::Rational) => rational_base_points(t, leg),
    }
}

fn scan_rank_drop(t: &TriTensor, leg: Leg, p: u64) -> Result<Vec<PlanePoint>> {
    let field = FieldTag::prime(p)?;
    let entries = t.entries_mod_p(p)?;
    let dims = t.dims();
    let l = leg.index();
    if dims[l] != 3 {
        return Err(Error::ShapeMismatch(
            "scan expects a 3-dimensional leg".into(),
        ));
    }
    let (rdim, cdim) = match leg {
        Leg::One => (dims[1], dims[2]),
        Leg::Two => (dims[0], dims[2]),
        Leg::Three => (dims[0], dims[1]),
    };
    let mut hits: Vec<Vec<u64>> = Vec::new();
    let mut m = vec![0u64; rdim * cdim];
    let mut work = vec![0u64; rdim * cdim];
    let fast34 = (rdim, cdim) == (3, 4);
    fp::scan_projective(p, 3, |u| {
        fill_slice_mod_p(&entries, dims, leg, u, &mut m, p);
        let drop = if fast34 {
            fp::rank3x4_le2(&m, p)
        } else {
            work.copy_from_slice(&m);
            fp::rank_in_place(&mut work, rdim, cdim, p) <= 2
        };
        if drop {
            hits.push(u.to_vec());
        }
    });
    let _ = field;
    hits.into_iter()
        .map(|u| {
            let coords = fp::to_scalars(&u, p);
            PlanePoint::new([coords[0].clone(), coords[1].clone(), coords[2].clone()])
        })
        .collect()
}

/// Fill `m` with the slice of the flattened tensor at `u` over `F_p`.
pub(crate) fn fill_slice_mod_p(
    entries: &[u64],
    dims: [usize; 3],
    leg: Leg,
    u: &[u64],
    m: &mut [u64],
    p: u64,
) {
    let (d1, d2, d3) = (dims[0], dims[1], dims[2]);
    let at = |i: usize, j: usize, k: usize| entries[(i * d2 + j) * d3 + k];
    match leg {
        Leg::One => {
            for j in 0..d2 {
                for k in 0..d3 {
                    let mut acc = 0u64;
                    for (i, &c) in u.iter().enumerate() {
                        acc = (acc + c * at(i, j, k)) % p;
                    }
                    m[j * d3 + k] = acc;
                }
            }
        }
        Leg::Two => {
            for i in 0..d1 {
                for k in 0..d3 {
                    let mut acc = 0u64;
                    for (j, &c) in u.iter().enumerate() {
                        acc = (acc + c * at(i, j, k)) % p;
                    }
                    m[i * d3 + k] = acc;
                }
            }
        }
        Leg::Three => {
            for i in 0..d1 {
                for j in 0..d2 {
                    let mut acc = 0u64;
                    for (k, &c) in u.iter().enumerate() {
                        acc = (acc + c * at(i, j, k)) % p;
                    }
                    m[i * d2 + j] = acc;
                }
            }
        }
    }
}

/// Reconstruct a small-height rational from a residue mod p (Wang bound
/// |num|, |den| <= sqrt(p/2)).
fn rational_reconstruct(r: u64, p: u64) -> Option<(i64, i64)> {
    let bound = {
        let mut b = 1i64;
        while (b + 1) * (b + 1) <= (p / 2) as i64 {
            b += 1;
        }
        b
    };
    let (mut r0, mut r1) = (p as i64, (r % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some((num, den))
}

fn rational_base_points(t: &TriTensor, leg: Leg) -> Result<BasePoints> {
    let mut verified: Vec<PlanePoint> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for &p in &[1009u64, 3001, 8009] {
        let Ok(candidates) = scan_rank_drop(t, leg, p) else {
            continue; // bad reduction at p
        };
        counts.push(candidates.len());
        if candidates.len() > 24 {
            // the rank-drop locus is not a reduced sixtuple (a curve or
            // worse); no rational extraction to attempt
            break;
        }
        let mut found: BTreeSet<PlanePoint> = BTreeSet::new();
        for cand in &candidates {
            let mut coords = Vec::with_capacity(3);
            let mut ok = true;
            for c in cand.coords() {
                let Scalar::Fp { value, .. } = c else {
                    unreachable!()
                };
                match rational_reconstruct(*value, p) {
                    Some((num, den)) => {
                        coords.push(Scalar::from_ratio(num, den, FieldTag::Rational))
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let Ok(point) =
                PlanePoint::new([coords[0].clone(), coords[1].clone(), coords[2].clone()])
            else {
                continue;
            };
            if slice_rank_at(t, leg, &point)? <= 2 {
                found.insert(point);
            }
        }
        if found.len() == 6 && candidates.len() == 6 {
            verified = found.into_iter().collect();
            break;
        }
        if found.len() > verified.len() {
            verified = found.into_iter().collect();
        }
    }
    let complete = verified.len() == 6 && counts.iter().any(|&c| c == 6);
    Ok(BasePoints {
        points: verified,
        complete,
        mode: BasePointMode::Minors,
    })
}

/// Exhaustive scan of the projective space contracted against `leg`,
/// recording the minimum slice rank and one witness point.
pub fn min_slice_rank_scan(t: &TriTensor, leg: Leg, p: u64) -> Result<(usize, Vec<Scalar>)> {
    let entries = t.entries_mod_p(p)?;
    let dims = t.dims();
    let l = leg.index();
    let n = dims[l];
    let (rdim, cdim) = match leg {
        Leg::One => (dims[1], dims[2]),
        Leg::Two => (dims[0], dims[2]),
        Leg::Three => (dims[0], dims[1]),
    };
    let mut best = rdim.min(cdim) + 1;
    let mut witness = Vec::new();
    let mut m = vec![0u64; rdim * cdim];
    let mut work = vec![0u64; rdim * cdim];
    fp::scan_projective(p, n, |u| {
        if best == 0 {
            return;
        }
        fill_slice_mod_p(&entries, dims, leg, u, &mut m, p);
        work.copy_from_slice(&m);
        let r = fp::rank_in_place(&mut work, rdim, cdim, p);
        if r < best {
            best = r;
            witness = fp::to_scalars(u, p);
        }
    });
    Ok((best, witness))
}
