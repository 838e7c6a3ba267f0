//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Everything is exact; no tolerances appear anywhere.
//!
//! Criterion 10 is split: 10a (enumeration facts) and the companion nef
//! statement hold; 10b asserts the literal universal-reduction claim,
//! which is arithmetically false for the six non-nef solutions, and is
//! kept as an honest failing assertion with the counterexamples printed.

use std::process::Command;

use trikit_core::bundle;
use trikit_core::generate;
use trikit_core::lattice;
use trikit_core::points::{self, BasePointMode, Side};
use trikit_core::poly::MultiPoly;
use trikit_core::resolution;
use trikit_core::scalar::{FieldTag, Scalar};
use trikit_core::schur;
use trikit_core::tensor::{Leg, TriTensor};

fn q(n: i64) -> Scalar {
    Scalar::from_int(n, FieldTag::Rational)
}

fn pass(name: &str, detail: &str) {
    println!("PASS {name}: {detail}");
}

#[test]
fn criterion_01_chern_regression() {
    assert_eq!(bundle::chern_polynomial(), [1, 3, 6, 4]);
    let (num, den) = bundle::chern_factors();
    assert_eq!(num, [1, 9, 36, 84]);
    assert_eq!(den, [1, -6, 24, -80]);
    pass(
        "criterion 01",
        "chern [1,3,6,4] with factors [1,9,36,84] and [1,-6,24,-80]",
    );
}

#[test]
fn criterion_02_doubleline_fixtures() {
    let d1 = generate::doubleline1();
    let d2 = generate::doubleline2();
    // exact determinant cubic of the first fixture
    let expected = MultiPoly::from_terms(
        vec![(vec![2, 0, 0, 1], q(-1)), (vec![0, 2, 1, 0], q(1))],
        4,
        FieldTag::Rational,
    );
    assert_eq!(d1.det_cubic().unwrap(), expected);
    // slice rank 1 at five points of each fixture's rank-drop line
    // (x0 = x1 = 0 for the first; x1 = x3 = 0 for the second)
    for s in 1..=5i64 {
        let p1 = [q(0), q(0), q(1), q(s)];
        assert_eq!(d1.slice(Leg::Three, &p1).unwrap().rank(), 1);
        let p2 = [q(1), q(0), q(s), q(0)];
        assert_eq!(d2.slice(Leg::Three, &p2).unwrap().rank(), 1);
    }
    for t in [&d1, &d2] {
        assert!(t.main_assumption().unwrap());
        let image = t.cross_product_involution().unwrap().bprime;
        assert!(!image.main_assumption().unwrap());
    }
    pass(
        "criterion 02",
        "doubleline cubics exact, rank-1 lines confirmed, main assumption holds and fails after the involution",
    );
}

#[test]
fn criterion_03_involution_suite() {
    let mut pass_count = 0u32;
    let mut resampled = 0u32;
    let mut seed = 0u64;
    let mut collected = 0u32;
    while collected < 100 {
        let t = generate::random_tensor(seed, FieldTag::Rational, 5);
        seed += 1;
        let Ok(first) = t.cross_product_involution() else {
            resampled += 1;
            continue;
        };
        let Ok(second) = first.bprime.cross_product_involution() else {
            resampled += 1;
            continue;
        };
        collected += 1;
        if second.uprime_basis == t.leg1_slab_span().unwrap() {
            pass_count += 1;
        }
    }
    assert_eq!(pass_count, 100, "subspace equality must hold 100/100");
    pass(
        "criterion 03",
        &format!("double application recovers the slab span 100/100 ({resampled} degenerate draws resampled)"),
    );
}

#[test]
fn criterion_04_schur_suite() {
    let mut tensors = vec![generate::cayley6()];
    for i in 0..10u64 {
        tensors.push(generate::random_tensor(40 + i, FieldTag::Rational, 5));
    }
    let mut convention = None;
    for t in &tensors {
        let map = schur::schur_map(t).unwrap();
        assert_eq!(map.rank(), 9);
        assert_eq!(map.kernel_basis().len(), 1);
        let quad = schur::schur_quadric(t).unwrap();
        assert!(quad.nondegenerate);
        assert!(schur::schur_carries_u_to_uprime(t).unwrap());
        let q2 = schur::schur_quadric(&t.trivial_involution()).unwrap();
        assert_eq!(
            quad.q, q2.q,
            "Q must be invariant under the trivial involution"
        );
        let corr = schur::cubic_correspondence_check(t).unwrap();
        assert!(corr.holds);
        let dir = convention.get_or_insert(corr.direction);
        assert_eq!(*dir, corr.direction, "one fixed convention across the run");
    }
    pass(
        "criterion 04",
        &format!(
            "rank 9, kernel 1, nondegenerate Q, carries U to U', invariance, correspondence ({}) on 11/11",
            convention.unwrap().as_str()
        ),
    );
}

#[test]
fn criterion_05_double_six_orthogonality() {
    // one instance over the rationals, the rest found over F_1009
    let mut instances = Vec::new();
    let t = generate::cayley6();
    let ds = schur::double_six(&t, BasePointMode::Minors).unwrap();
    instances.push((t, ds));
    let f = FieldTag::prime(1009).unwrap();
    let mut seed = 500u64;
    while instances.len() < 4 {
        let t = generate::from_points_tensor(seed, f);
        seed += 1;
        let nondeg = schur::schur_quadric(&t).map_or(false, |q| q.nondegenerate);
        if !nondeg {
            continue;
        }
        if let Ok(ds) = schur::double_six(&t, BasePointMode::Scan(1009)) {
            instances.push((t, ds));
        }
    }
    for (t, ds) in &instances {
        assert_eq!(ds.pairs.len(), 6);
        let quad = schur::schur_quadric(t).unwrap();
        let rep = schur::orthogonality_check(&quad, ds);
        assert!(rep.orthogonal, "24 matched evaluations must vanish exactly");
        assert!(rep.cross_pair_nonzero, "some cross pair must be nonzero");
        // pairing is a perfect matching in the disjointness graph
        for i in 0..6 {
            assert_eq!((0..6).filter(|&j| ds.span_table[i][j] == 4).count(), 1);
        }
    }
    pass(
        "criterion 05",
        &format!(
            "{} instances with fully rational double sixes, 24 exact zeros each",
            instances.len()
        ),
    );
}

#[test]
fn criterion_06_hilbert_burch_roundtrip() {
    let mut ok = 0;
    for i in 0..20u64 {
        let pts = generate::general_points(600 + i, FieldTag::Rational);
        let t = points::points_to_tensor(&pts).unwrap();
        let bp = points::base_points(&t, Side::U, BasePointMode::Minors).unwrap();
        let mut expected = pts.clone();
        expected.sort();
        let cubics = points::cubics_through_points(&pts).unwrap();
        let syz = points::linear_syzygies(&cubics).unwrap();
        if bp.complete && bp.points == expected && points::minors_respan(&syz, &cubics) {
            ok += 1;
        }
    }
    assert_eq!(ok, 20, "roundtrip and minor re-span must hold 20/20");
    pass(
        "criterion 06",
        "base points of the syzygy tensor reproduce the inputs 20/20",
    );
}

#[test]
fn criterion_07_cohomology_table() {
    for i in 0..10u64 {
        let t = generate::from_points_tensor(700 + i, FieldTag::Rational);
        let table = bundle::cohomology_table(&t, -4, 4).unwrap();
        let expect: [(i64, i64, i64); 5] =
            [(0, 6, 0), (-1, 0, 3), (-2, 0, 3), (-3, 0, 0), (-4, 0, 0)];
        for (n, h0, h1) in expect {
            let row = table.row(n).unwrap();
            assert_eq!((row.h[0], row.h[1]), (h0, h1), "twist {n}");
        }
        assert!(table.minimal_cohomology());
        for n in -1..=4i64 {
            let row = table.row(n).unwrap();
            assert_eq!(
                row.h[0] - row.h[1],
                bundle::euler_characteristic(n),
                "chi at twist {n}"
            );
        }
    }
    pass(
        "criterion 07",
        "(6,0),(0,3),(0,3),(0,0),(0,0) and the chi identity on [-1,4], 10/10",
    );
}

#[test]
fn criterion_08_degeneracy_locus() {
    let mut fixtures = vec![generate::cayley6()];
    let mut seed = 800u64;
    while fixtures.len() < 3 {
        let t = generate::from_points_tensor(seed, FieldTag::Rational);
        seed += 1;
        // skip seeds with bad reduction at the scan prime; the check on
        // every admitted fixture is exact set equality
        if !matches!(
            bundle::degeneracy_locus_check(&t, 101),
            Err(trikit_core::Error::BadReduction { .. })
        ) {
            fixtures.push(t);
        }
    }
    for t in &fixtures {
        let rep = bundle::degeneracy_locus_check(t, 101).unwrap();
        assert!(
            rep.matches,
            "locus must equal the cubic's zero set: {rep:?}"
        );
        assert!(rep.locus_size > 0);
        assert_eq!(rep.jumping_points, 0);
    }
    pass(
        "criterion 08",
        "section-degeneracy locus equals the reversing cubic over F_101, 3/3",
    );
}

#[test]
fn criterion_09_eagon_northcott() {
    for i in 0..10u64 {
        let t = generate::random_tensor(900 + i, FieldTag::Rational, 5).permute_legs([2, 1, 0]);
        // 20 off-support rational sample points
        let mut rng = generate::rng(9000 + i);
        let mut sample = Vec::new();
        while sample.len() < 20 {
            let pt: Vec<Scalar> = (0..4)
                .map(|_| generate::random_scalar(&mut rng, FieldTag::Rational, 9))
                .collect();
            if pt.iter().all(|x| x.is_zero()) || resolution::on_support(&t, &pt).unwrap() {
                continue;
            }
            sample.push(pt);
        }
        for twist in 1..=3 {
            let c = resolution::en_complex(&t, twist).unwrap();
            assert!(resolution::verify_dd_zero(&c).0, "seed {i} twist {twist}");
            assert!(
                resolution::verify_generic_exactness(&t, &c, &sample).unwrap(),
                "seed {i} twist {twist}"
            );
        }
        let plane = generate::random_tensor(900 + i, FieldTag::Rational, 5).permute_legs([1, 0, 2]);
        let dual = resolution::en_complex(&plane, 1).unwrap();
        assert!(resolution::verify_dd_zero(&dual).0);
        let h = resolution::hilbert_function(&dual, 3..=6);
        assert!(
            h.iter().all(|&(_, v)| v == 6),
            "dual twist-1 Hilbert function stabilizes at 6"
        );
    }
    pass(
        "criterion 09",
        "d.d = 0 and rank-split exactness at 20 points, twists 1-3, 10/10",
    );
}

#[test]
fn criterion_10a_cremona_enumeration() {
    let all = lattice::enumerate_nn2(64);
    assert!(!all.is_empty());
    assert!(all.iter().all(|c| c.satisfies_nn2()));
    let n4: Vec<_> = all.iter().filter(|c| c.n == 4).cloned().collect();
    assert_eq!(
        n4,
        vec![
            lattice::DivisorClass::new(4, [3, 1, 1, 1, 0, 0]),
            lattice::DivisorClass::new(4, [2, 2, 2, 0, 0, 0]),
        ],
        "exactly the two listed degree-4 solutions"
    );
    let eq: Vec<_> = all
        .iter()
        .filter(|c| c.a.iter().all(|&x| x == c.a[0]))
        .collect();
    assert_eq!(eq.len(), 2);
    assert_eq!((eq[0].n, eq[0].a[0]), (2, 0));
    assert_eq!((eq[1].n, eq[1].a[0]), (10, 4));
    pass(
        "criterion 10a",
        &format!(
            "{} solutions, two degree-4 classes, all-equal exactly at n=2 and n=10",
            all.len()
        ),
    );
}

/// The criterion as literally stated: every enumerated solution reduces
/// to (2;0^6) or (3;2,1,0,0,0,0). This is arithmetically false: the six
/// solutions that pair negatively against an exceptional class cannot
/// reach either terminal (the pairing multiset with the 27 classes is
/// invariant under the moves, and both terminals have minimum 0). The
/// assertion is kept as stated and fails honestly; see the companion
/// test for the corrected statement.
#[test]
fn criterion_10b_cremona_universal_reduction() {
    let all = lattice::enumerate_nn2(64);
    let mut exceptions = Vec::new();
    for c in &all {
        let trace = lattice::reduce(c).unwrap();
        if !trace.terminal_expected {
            exceptions.push((*c, trace.terminal));
        }
    }
    for (c, term) in &exceptions {
        println!(
            "counterexample: {} reduces to {} (minimum pairing against the 27 exceptional classes: {})",
            c.to_compact_string(),
            term.to_compact_string(),
            c.line_pairings()[0]
        );
    }
    assert!(
        exceptions.is_empty(),
        "{} of {} solutions do not reduce to the two terminals; these are exactly the solutions \
         that are not nef on the 27 exceptional classes, which no Cremona sequence can repair",
        exceptions.len(),
        all.len()
    );
    pass(
        "criterion 10b",
        "every solution reduces to one of the two terminals",
    );
}

/// Corrected statement: every solution that is nef on the 27 exceptional
/// classes reduces to one of the two terminals, and the exceptions of the
/// literal statement are exactly the non-nef solutions.
#[test]
fn criterion_10_nef_refinement() {
    let all = lattice::enumerate_nn2(64);
    let mut nef_total = 0;
    for c in &all {
        let trace = lattice::reduce(c).unwrap();
        if c.is_nef_on_lines() {
            nef_total += 1;
            assert!(
                trace.terminal_expected,
                "nef class {} must reduce",
                c.to_compact_string()
            );
            assert!(trace.negatives_logged.is_empty());
        } else {
            assert!(
                !trace.terminal_expected,
                "non-nef class {} cannot reduce",
                c.to_compact_string()
            );
        }
    }
    pass(
        "criterion 10 (nef refinement)",
        &format!(
            "{nef_total}/{} nef solutions reduce; exceptions are exactly the non-nef ones",
            all.len()
        ),
    );
}

fn trikit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trikit"))
}

fn strip_timing(text: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(text).expect("valid JSON report");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timing_ms");
    }
    serde_json::to_string_pretty(&v).unwrap()
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for fixture in ["doubleline-1", "doubleline-2", "cayley6"] {
        let gen = |run: usize| {
            let path = dir.path().join(format!("{fixture}-{run}.json"));
            let out = trikit()
                .args(["gen", "--fixture", fixture, "--out", path.to_str().unwrap()])
                .output()
                .unwrap();
            assert!(out.status.success());
            std::fs::read_to_string(&path).unwrap()
        };
        let (a, b) = (gen(0), gen(1));
        assert_eq!(a, b, "gen must be byte-identical for {fixture}");
        let tensor_path = dir.path().join(format!("{fixture}-0.json"));
        let analyze = || {
            let out = trikit()
                .args([
                    "analyze",
                    tensor_path.to_str().unwrap(),
                    "--scan-prime",
                    "11",
                ])
                .output()
                .unwrap();
            String::from_utf8(out.stdout).unwrap()
        };
        let (r1, r2) = (analyze(), analyze());
        assert_eq!(
            strip_timing(&r1),
            strip_timing(&r2),
            "analyze must be byte-identical for {fixture} after stripping timing"
        );
    }
    pass(
        "criterion 11",
        "gen and analyze are byte-identical across runs (timing excluded)",
    );
}

/// Extra regression behind criteria 4 and 8: the determinant cubic of a
/// general six-point tensor has no linear factor over F_101, hence is
/// irreducible of degree exactly 3 over the rationals (a rational linear
/// factor would reduce to one at a prime of good reduction).
#[test]
fn determinant_cubic_has_no_linear_factor() {
    let p = 101u64;
    let t = generate::cayley6();
    let cubic = t.det_cubic().unwrap().to_prime(p).unwrap();
    let field = FieldTag::Prime(p);
    // exhaustive trial over every linear form: the form divides the cubic
    // exactly when the cubic vanishes on its hyperplane, which a handful
    // of plane points refutes (a vanishing witness set would force the
    // full restriction check, which no form survives)
    let samples: Vec<[i64; 3]> = vec![
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 1],
        [1, 2, 3],
        [1, 4, 9],
        [2, 1, 5],
        [1, 7, 2],
    ];
    for hp in trikit_core::fp::ProjectivePoints::new(p, 4) {
        let lead = hp.iter().position(|&c| c != 0).unwrap();
        // plane basis: e_j - hp_j e_lead for j != lead (hp[lead] = 1)
        let basis: Vec<[u64; 4]> = (0..4)
            .filter(|&j| j != lead)
            .map(|j| {
                let mut b = [0u64; 4];
                b[j] = 1;
                b[lead] = (p - hp[j] % p) % p;
                b
            })
            .collect();
        let mut refuted = false;
        for s in &samples {
            let mut x = [0u64; 4];
            for (coef, b) in s.iter().zip(&basis) {
                for k in 0..4 {
                    x[k] = (x[k] + (*coef as u64) * b[k]) % p;
                }
            }
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            let pt: Vec<Scalar> = x
                .iter()
                .map(|&c| Scalar::from_int(c as i64, field))
                .collect();
            if !cubic.eval(&pt).is_zero() {
                refuted = true;
                break;
            }
        }
        assert!(refuted, "possible linear factor at {hp:?}");
    }
    pass(
        "extra",
        "no linear divisor of the determinant cubic over F_101",
    );
}
