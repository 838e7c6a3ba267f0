//! Seeded property-verification suites. Each suite runs its module
//! invariants over the fixtures plus `trials` seeded random instances,
//! prints one line per property with pass counts, and reports the first
//! counterexample when one exists.

use std::process::ExitCode;

use trikit_core::bundle;
use trikit_core::generate;
use trikit_core::lattice;
use trikit_core::points::BasePointMode;
use trikit_core::resolution;
use trikit_core::scalar::{FieldTag, Scalar};
use trikit_core::schur;
use trikit_core::TriTensor;

struct Suite {
    failures: usize,
}

impl Suite {
    fn new() -> Suite {
        Suite { failures: 0 }
    }

    fn report(&mut self, name: &str, pass: usize, total: usize, note: &str) {
        let tag = if pass == total { "ok" } else { "FAIL" };
        self.failures += usize::from(pass != total);
        if note.is_empty() {
            println!("{tag:>4}  {name}: {pass}/{total}");
        } else {
            println!("{tag:>4}  {name}: {pass}/{total}  ({note})");
        }
    }

    fn info(&self, text: &str) {
        println!("      {text}");
    }
}

pub fn run(suite: &str, trials: u64, seed: u64) -> ExitCode {
    let mut s = Suite::new();
    let known = ["involution", "schur", "cohomology", "cremona", "en", "all"];
    if !known.contains(&suite) {
        eprintln!("unknown suite {suite:?}; expected one of {known:?}");
        return ExitCode::from(2);
    }
    if suite == "involution" || suite == "all" {
        involution_suite(&mut s, trials, seed);
    }
    if suite == "schur" || suite == "all" {
        schur_suite(&mut s, trials, seed);
    }
    if suite == "cohomology" || suite == "all" {
        cohomology_suite(&mut s, trials, seed);
    }
    if suite == "cremona" || suite == "all" {
        cremona_suite(&mut s);
    }
    if suite == "en" || suite == "all" {
        en_suite(&mut s, trials, seed);
    }
    println!(
        "summary: {}",
        if s.failures == 0 {
            "all properties hold".to_string()
        } else {
            format!("{} properties failed", s.failures)
        }
    );
    if s.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Seeded tensors that pass the main assumption on both applications;
/// degenerate draws are resampled and counted separately.
fn sampled_involution_instances(trials: u64, seed: u64) -> (Vec<(u64, TriTensor)>, usize) {
    let mut out = Vec::new();
    let mut resampled = 0usize;
    let mut s = seed;
    while out.len() < trials as usize {
        let t = generate::random_tensor(s, FieldTag::Rational, 5);
        s += 1;
        let ok = t
            .cross_product_involution()
            .and_then(|inv| inv.bprime.cross_product_involution())
            .is_ok();
        if ok {
            out.push((s - 1, t));
        } else {
            resampled += 1;
        }
    }
    (out, resampled)
}

fn involution_suite(s: &mut Suite, trials: u64, seed: u64) {
    let (instances, resampled) = sampled_involution_instances(trials, seed);
    let mut pass = 0;
    let mut counterexample = None;
    for (sd, t) in &instances {
        let first = t.cross_product_involution().unwrap();
        let second = first.bprime.cross_product_involution().unwrap();
        if second.uprime_basis == t.leg1_slab_span().unwrap() {
            pass += 1;
        } else if counterexample.is_none() {
            counterexample = Some(*sd);
        }
    }
    s.report(
        "involution/double-application-subspace",
        pass,
        instances.len(),
        &format!("{resampled} degenerate draws resampled"),
    );
    if let Some(sd) = counterexample {
        s.info(&format!("first counterexample: seed {sd}"));
    }
    // fixtures: both explicit degenerate-cubic tensors pass the main
    // assumption while their cross-product images do not
    let mut fixture_pass = 0;
    for name in ["doubleline-1", "doubleline-2"] {
        let t = generate::fixture(name).unwrap();
        let ma = t.main_assumption().unwrap();
        let img_fails = !t
            .cross_product_involution()
            .unwrap()
            .bprime
            .main_assumption()
            .unwrap();
        if ma && img_fails {
            fixture_pass += 1;
        }
    }
    s.report("involution/degenerate-fixtures", fixture_pass, 2, "");
}

fn schur_tensors(trials: u64, seed: u64) -> Vec<TriTensor> {
    let mut ts = vec![generate::cayley6()];
    for i in 0..trials {
        ts.push(generate::random_tensor(seed + i, FieldTag::Rational, 5));
    }
    ts
}

fn schur_suite(s: &mut Suite, trials: u64, seed: u64) {
    let ts = schur_tensors(trials, seed);
    let total = ts.len();
    let mut rank9 = 0;
    let mut nondeg = 0;
    let mut carries = 0;
    let mut invariant = 0;
    let mut convention: Option<schur::Direction> = None;
    let mut consistent = 0;
    let mut inverse_rel = 0;
    for t in &ts {
        let Ok(quad) = schur::schur_quadric(t) else {
            continue;
        };
        rank9 += 1;
        nondeg += usize::from(quad.nondegenerate);
        carries += usize::from(schur::schur_carries_u_to_uprime(t).unwrap_or(false));
        if let Ok(q2) = schur::schur_quadric(&t.trivial_involution()) {
            invariant += usize::from(quad.q == q2.q);
        }
        if let Ok(c) = schur::cubic_correspondence_check(t) {
            let dir = convention.get_or_insert(c.direction);
            consistent += usize::from(c.holds && *dir == c.direction);
        }
        inverse_rel += usize::from(schur::schur_inverse_relation(t).unwrap_or(false));
    }
    s.report("schur/map-rank-9-kernel-1", rank9, total, "");
    s.report("schur/quadric-nondegenerate", nondeg, total, "");
    s.report("schur/carries-U-to-U'", carries, total, "");
    s.report(
        "schur/Q-invariant-under-trivial-involution",
        invariant,
        total,
        "",
    );
    s.report(
        "schur/cubic-correspondence-consistent",
        consistent,
        total,
        convention.map(|d| d.as_str()).unwrap_or("none"),
    );
    s.report("schur/reversed-quadric-is-inverse", inverse_rel, total, "");
    // orthogonality over instances with a fully rational double six: the
    // fixed example set over the rationals plus instances found over F_1009
    let mut ds_total = 0;
    let mut ds_pass = 0;
    let f1009 = FieldTag::Prime(1009);
    let mut instances = vec![(generate::cayley6(), BasePointMode::Minors)];
    let mut sub_seed = seed + 1000;
    while instances.len() < 4 {
        let t = generate::from_points_tensor(sub_seed, f1009);
        sub_seed += 1;
        let nondeg = schur::schur_quadric(&t).map_or(false, |q| q.nondegenerate);
        if nondeg && schur::double_six(&t, BasePointMode::Scan(1009)).is_ok() {
            instances.push((t, BasePointMode::Scan(1009)));
        }
        if sub_seed > seed + 1050 {
            break;
        }
    }
    for (t, mode) in &instances {
        let Ok(ds) = schur::double_six(t, *mode) else {
            continue;
        };
        ds_total += 1;
        let quad = schur::schur_quadric(t).unwrap();
        let rep = schur::orthogonality_check(&quad, &ds);
        ds_pass += usize::from(rep.orthogonal && rep.cross_pair_nonzero);
    }
    s.report(
        "schur/double-six-orthogonality",
        ds_pass,
        ds_total,
        "24 exact zeros per instance",
    );
}

fn cohomology_suite(s: &mut Suite, trials: u64, seed: u64) {
    let mut minimal = 0;
    let mut chi = 0;
    let total = trials as usize;
    for i in 0..trials {
        let t = generate::from_points_tensor(seed + i, FieldTag::Rational);
        let table = bundle::cohomology_table(&t, -4, 2).unwrap();
        minimal += usize::from(table.minimal_cohomology());
        chi += usize::from(
            table
                .rows
                .iter()
                .all(|r| r.h[0] - r.h[1] + r.h[2] - r.h[3] == r.chi),
        );
    }
    s.report(
        "cohomology/minimal-pattern",
        minimal,
        total,
        "(6,0),(0,3),(0,3),(0,0),(0,0)",
    );
    s.report("cohomology/chi-identity", chi, total, "");
    let chern_ok = bundle::chern_polynomial() == [1, 3, 6, 4];
    s.report(
        "cohomology/chern-regression",
        usize::from(chern_ok),
        1,
        "1+3t+6t^2+4t^3",
    );
}

fn cremona_suite(s: &mut Suite) {
    let all = lattice::enumerate_nn2(64);
    s.report(
        "cremona/enumeration-finite",
        usize::from(!all.is_empty()),
        1,
        &format!("{} solutions", all.len()),
    );
    let n4: Vec<_> = all.iter().filter(|c| c.n == 4).collect();
    let n4_ok = n4.len() == 2
        && n4.contains(&&lattice::DivisorClass::new(4, [3, 1, 1, 1, 0, 0]))
        && n4.contains(&&lattice::DivisorClass::new(4, [2, 2, 2, 0, 0, 0]));
    s.report("cremona/n4-solutions", usize::from(n4_ok), 1, "");
    let eq: Vec<_> = all
        .iter()
        .filter(|c| c.a.iter().all(|&x| x == c.a[0]))
        .collect();
    let eq_ok = eq.len() == 2 && eq[0].n == 2 && eq[1].n == 10;
    s.report(
        "cremona/all-equal-solutions",
        usize::from(eq_ok),
        1,
        "n=2 and n=10",
    );
    let mut reduced = 0;
    let mut exceptions = Vec::new();
    for c in &all {
        let t = lattice::reduce(c).unwrap();
        if t.terminal_expected {
            reduced += 1;
        } else {
            exceptions.push((*c, t.terminal));
        }
    }
    s.report(
        "cremona/universal-reduction-as-stated",
        reduced,
        all.len(),
        "the source argument assumes nonnegative multiplicities",
    );
    for (c, term) in &exceptions {
        s.info(&format!(
            "exception {} -> {} (min line pairing {})",
            c.to_compact_string(),
            term.to_compact_string(),
            c.line_pairings()[0]
        ));
    }
    // the corrected statement: every class nef on the 27 lines reduces,
    // and the exceptions are exactly the non-nef classes
    let nef_ok = all
        .iter()
        .filter(|c| c.is_nef_on_lines())
        .all(|c| lattice::reduce(c).unwrap().terminal_expected);
    let exceptions_are_non_nef = exceptions.iter().all(|(c, _)| !c.is_nef_on_lines());
    s.report(
        "cremona/nef-reduction",
        usize::from(nef_ok && exceptions_are_non_nef),
        1,
        "every nef solution reduces; exceptions are exactly the non-nef ones",
    );
    let dchecks = all
        .iter()
        .filter(|c| {
            let (_, dh, dd) = lattice::dcheck(c).unwrap();
            (dh, dd) == (3, -5)
        })
        .count();
    s.report("cremona/dcheck", dchecks, all.len(), "D.H = 3, D^2 = -5");
}

fn en_suite(s: &mut Suite, trials: u64, seed: u64) {
    let total = trials as usize;
    let mut dd = 0;
    let mut exact = 0;
    let mut hilbert = 0;
    for i in 0..trials {
        let t = generate::random_tensor(seed + i, FieldTag::Rational, 5).permute_legs([2, 1, 0]);
        let mut ok_dd = true;
        let mut ok_exact = true;
        let mut rng = generate::rng(seed + i + 7777);
        let mut sample = Vec::new();
        let mut tries = 0;
        while sample.len() < 5 && tries < 200 {
            tries += 1;
            let pt: Vec<Scalar> = (0..4)
                .map(|_| generate::random_scalar(&mut rng, FieldTag::Rational, 9))
                .collect();
            if pt.iter().all(|x| x.is_zero()) {
                continue;
            }
            if let Ok(false) = resolution::on_support(&t, &pt) {
                sample.push(pt);
            }
        }
        for twist in 1..=3 {
            let c = resolution::en_complex(&t, twist).unwrap();
            ok_dd &= resolution::verify_dd_zero(&c).0;
            ok_exact &= resolution::verify_generic_exactness(&t, &c, &sample).unwrap_or(false);
        }
        dd += usize::from(ok_dd);
        exact += usize::from(ok_exact);
        let plane =
            generate::random_tensor(seed + i, FieldTag::Rational, 5).permute_legs([1, 0, 2]);
        let dual = resolution::en_complex(&plane, 1).unwrap();
        hilbert += usize::from(
            resolution::hilbert_function(&dual, 3..=6)
                .iter()
                .all(|&(_, v)| v == 6),
        );
    }
    s.report("en/dd-zero-twists-1-3", dd, total, "");
    s.report("en/generic-exactness", exact, total, "");
    s.report("en/dual-twist1-hilbert-six", hilbert, total, "");
}
