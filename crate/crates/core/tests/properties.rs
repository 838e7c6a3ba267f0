//! Property tests for the spec-level invariants that hold on all inputs,
//! not just the worked examples.

use proptest::prelude::*;

use trikit_core::generate;
use trikit_core::lattice::{self, DivisorClass};
use trikit_core::matrix::DenseMatrix;
use trikit_core::poly::{monomials, poly_det3, MultiPoly};
use trikit_core::scalar::{FieldTag, Scalar};
use trikit_core::series::TruncatedSeries;

fn qi(n: i64) -> Scalar {
    Scalar::from_int(n, FieldTag::Rational)
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    proptest::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
        DenseMatrix::from_fn(rows, cols, FieldTag::Rational, |i, j| qi(v[i * cols + j]))
    })
}

fn small_fp_matrix(rows: usize, cols: usize, p: u64) -> impl Strategy<Value = DenseMatrix> {
    proptest::collection::vec(0i64..p as i64, rows * cols).prop_map(move |v| {
        DenseMatrix::from_fn(rows, cols, FieldTag::Prime(p), |i, j| {
            Scalar::from_int(v[i * cols + j], FieldTag::Prime(p))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity_and_transpose(m in small_matrix(4, 6)) {
        prop_assert_eq!(m.rank() + m.nullity(), m.cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_annihilates_exactly(m in small_matrix(3, 5)) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len(), m.nullity());
        for v in kernel {
            prop_assert!(m.mul_vec(&v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn kernel_annihilates_over_f101(m in small_fp_matrix(4, 6, 101)) {
        for v in m.kernel_basis() {
            prop_assert!(m.mul_vec(&v).iter().all(|s| s.is_zero()));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn det3_alternating(coeffs in proptest::collection::vec(-5i64..=5, 36)) {
        // random 3x3 grid of linear forms in 4 variables
        let grid: Vec<Vec<MultiPoly>> = (0..3).map(|i| (0..3).map(|j| {
            let terms = (0..4).map(|k| {
                let mut e = vec![0u32; 4];
                e[k] = 1;
                (e, qi(coeffs[(i * 3 + j) * 4 + k]))
            }).collect();
            MultiPoly::from_terms(terms, 4, FieldTag::Rational)
        }).collect()).collect();
        let d = poly_det3(&grid).unwrap();
        let mut swapped = grid.clone();
        swapped.swap(0, 2);
        prop_assert_eq!(poly_det3(&swapped).unwrap(), d.neg());
        let repeated = vec![grid[1].clone(), grid[1].clone(), grid[2].clone()];
        prop_assert!(poly_det3(&repeated).unwrap().is_zero());
    }

    #[test]
    fn series_inverse_at_every_order(c0 in 1i64..9, rest in proptest::collection::vec(-9i64..=9, 7)) {
        for order in 1..=8usize {
            let mut coeffs = vec![c0];
            coeffs.extend(&rest);
            let s = TruncatedSeries::from_ints(&coeffs, order);
            let inv = s.invert().unwrap();
            prop_assert_eq!(s.mul(&inv), TruncatedSeries::one(order, FieldTag::Rational));
        }
    }

    #[test]
    fn cremona_isometry_and_involution(
        n1 in -6i64..=10, a1 in proptest::collection::vec(-5i64..=5, 6),
        n2 in -6i64..=10, a2 in proptest::collection::vec(-5i64..=5, 6),
        t in prop::sample::select(vec![[0usize,1,2],[0,2,4],[1,3,5],[3,4,5],[0,1,5]]),
    ) {
        let c1 = DivisorClass::new(n1, [a1[0], a1[1], a1[2], a1[3], a1[4], a1[5]]);
        let c2 = DivisorClass::new(n2, [a2[0], a2[1], a2[2], a2[3], a2[4], a2[5]]);
        prop_assert_eq!(lattice::cremona(&lattice::cremona(&c1, t), t), c1);
        prop_assert_eq!(
            lattice::pairing(&lattice::cremona(&c1, t), &lattice::cremona(&c2, t)),
            lattice::pairing(&c1, &c2)
        );
        // both conditions are preserved (H is fixed by the move)
        if c1.satisfies_nn2() {
            prop_assert!(lattice::cremona(&c1, t).satisfies_nn2());
        }
    }

    #[test]
    fn tensor_involution_properties(seed in 0u64..500) {
        let t = generate::random_tensor(seed, FieldTag::Rational, 4);
        prop_assert_eq!(t.trivial_involution().trivial_involution(), t.clone());
        prop_assert_eq!(t.det_cubic().unwrap(), t.trivial_involution().det_cubic().unwrap());
        let c = t.contraction_matrix().unwrap();
        let rank = c.rank();
        prop_assert!(rank <= 9);
        prop_assert_eq!(c.kernel_basis().len(), 12 - rank);
    }

    #[test]
    fn monomial_enumeration_is_graded_lex(n in 1usize..5, d in 0u32..5) {
        let mons = monomials(n, d);
        for w in mons.windows(2) {
            // strictly descending lexicographic within the degree
            prop_assert!(w[0] > w[1]);
        }
        for m in &mons {
            prop_assert_eq!(m.iter().sum::<u32>(), d);
        }
    }

    #[test]
    fn determinism_same_seed_same_bytes(seed in 0u64..1000) {
        let a = generate::random_tensor(seed, FieldTag::Rational, 5);
        let b = generate::random_tensor(seed, FieldTag::Rational, 5);
        prop_assert_eq!(
            serde_json::to_string(&a.to_json()).unwrap(),
            serde_json::to_string(&b.to_json()).unwrap()
        );
    }
}
