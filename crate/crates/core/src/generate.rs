//! Deterministic tensor and point generation. All randomness flows from a
//! single 64-bit seed through ChaCha8, so identical specs produce
//! byte-identical artifacts on every platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::points::{self, PlanePoint};
use crate::scalar::{FieldTag, Scalar};
use crate::tensor::TriTensor;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gen_int(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    r.gen_range(lo..=hi)
}

/// A random scalar of the field: an integer in `[-bound, bound]` for the
/// rationals, a uniform residue otherwise.
pub fn random_scalar(r: &mut ChaCha8Rng, field: FieldTag, bound: i64) -> Scalar {
    match field {
        FieldTag::Rational => Scalar::from_int(r.gen_range(-bound..=bound), field),
        FieldTag::Prime(p) => Scalar::from_int(r.gen_range(0..p) as i64, field),
    }
}

/// Random tensor with integer entries in `[-bound, bound]` (rationals) or
/// uniform residues (prime fields).
pub fn random_tensor(seed: u64, field: FieldTag, bound: i64) -> TriTensor {
    let mut r = rng(seed);
    random_tensor_from(&mut r, field, bound)
}

pub fn random_tensor_from(r: &mut ChaCha8Rng, field: FieldTag, bound: i64) -> TriTensor {
    let entries = (0..36)
        .map(|_| match field {
            FieldTag::Rational => Scalar::from_int(r.gen_range(-bound..=bound), field),
            FieldTag::Prime(p) => Scalar::from_int(r.gen_range(0..p) as i64, field),
        })
        .collect();
    TriTensor::new([3, 3, 4], TriTensor::standard_legs(), field, entries).unwrap()
}

fn random_point(r: &mut ChaCha8Rng, field: FieldTag) -> PlanePoint {
    loop {
        let coords: Vec<Scalar> = (0..3)
            .map(|_| match field {
                FieldTag::Rational => Scalar::from_int(r.gen_range(-9..=9), field),
                FieldTag::Prime(p) => Scalar::from_int(r.gen_range(0..p) as i64, field),
            })
            .collect();
        if let Ok(p) = PlanePoint::new([coords[0].clone(), coords[1].clone(), coords[2].clone()]) {
            return p;
        }
    }
}

/// Six points in general position: pairwise distinct, imposing independent
/// conditions on cubics, with a 3-dimensional linear syzygy space whose
/// maximal minors span the full cubic system. Resamples until all hold.
pub fn general_points(seed: u64, field: FieldTag) -> Vec<PlanePoint> {
    let mut r = rng(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
    'outer: loop {
        let mut pts: Vec<PlanePoint> = Vec::with_capacity(6);
        while pts.len() < 6 {
            let p = random_point(&mut r, field);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let Ok(cubics) = points::cubics_through_points(&pts) else {
            continue 'outer;
        };
        let Ok(syz) = points::linear_syzygies(&cubics) else {
            continue 'outer;
        };
        if !points::minors_respan(&syz, &cubics) {
            continue 'outer;
        }
        return pts;
    }
}

/// Tensor of the linear syzygies of the cubics through six general seeded
/// points.
pub fn from_points_tensor(seed: u64, field: FieldTag) -> TriTensor {
    let pts = general_points(seed, field);
    points::points_to_tensor(&pts).expect("general points must produce a tensor")
}

/// The fixed example point set (1:0:0), (0:1:0), (0:0:1), (1:1:1),
/// (1:2:3), (1:4:9).
pub fn cayley6_points() -> Vec<PlanePoint> {
    let q = |n: i64| Scalar::from_int(n, FieldTag::Rational);
    let raw = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 1],
        [1, 2, 3],
        [1, 4, 9],
    ];
    raw.iter()
        .map(|c| PlanePoint::new([q(c[0]), q(c[1]), q(c[2])]).unwrap())
        .collect()
}

/// Tensor attached to the fixed six-point example set.
pub fn cayley6() -> TriTensor {
    points::points_to_tensor(&cayley6_points()).expect("example points are in general position")
}

/// First explicit degenerate-cubic tensor: the matrix of linear forms
/// [[x0, 0, x1], [0, x1, -x0], [-x2, -x3, 0]].
pub fn doubleline1() -> TriTensor {
    tensor_from_coeffs(&[
        // (i, j, k, value)
        (0, 0, 0, 1),
        (0, 2, 1, 1),
        (1, 1, 1, 1),
        (1, 2, 0, -1),
        (2, 0, 2, -1),
        (2, 1, 3, -1),
    ])
}

/// Second explicit degenerate-cubic tensor: [[x3, -x2, -x0], [-x1, 0, x3],
/// [0, x3, -x1]].
pub fn doubleline2() -> TriTensor {
    tensor_from_coeffs(&[
        (0, 0, 3, 1),
        (0, 1, 2, -1),
        (0, 2, 0, -1),
        (1, 0, 1, -1),
        (1, 2, 3, 1),
        (2, 1, 3, 1),
        (2, 2, 1, -1),
    ])
}

fn tensor_from_coeffs(coeffs: &[(usize, usize, usize, i64)]) -> TriTensor {
    let mut t = TriTensor::zero([3, 3, 4], TriTensor::standard_legs(), FieldTag::Rational);
    for &(i, j, k, v) in coeffs {
        t.set(i, j, k, Scalar::from_int(v, FieldTag::Rational));
    }
    t
}

pub fn fixture(name: &str) -> Result<TriTensor> {
    match name {
        "doubleline-1" => Ok(doubleline1()),
        "doubleline-2" => Ok(doubleline2()),
        "cayley6" => Ok(cayley6()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

pub const FIXTURE_NAMES: [&str; 3] = ["doubleline-1", "doubleline-2", "cayley6"];

/// What to generate, mirroring the CLI flags.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    RandomEntries {
        seed: u64,
        field: FieldTag,
        bound: i64,
    },
    FromPoints {
        points: Vec<PlanePoint>,
    },
    SeededPoints {
        seed: u64,
        field: FieldTag,
    },
    Fixture {
        name: String,
    },
}

pub fn tensor_from_spec(spec: &GeneratorSpec) -> Result<TriTensor> {
    match spec {
        GeneratorSpec::RandomEntries { seed, field, bound } => {
            Ok(random_tensor(*seed, *field, *bound))
        }
        GeneratorSpec::FromPoints { points } => points::points_to_tensor(points),
        GeneratorSpec::SeededPoints { seed, field } => Ok(from_points_tensor(*seed, *field)),
        GeneratorSpec::Fixture { name } => fixture(name),
    }
}
