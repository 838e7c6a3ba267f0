//! The analysis report: every check the toolkit knows how to run against
//! a single tensor, in dependency order, with per-check pass/fail/skip
//! status and timing. Skipped checks carry their upstream cause. Reports
//! are plain JSON with sorted keys; the timing block is excluded from
//! golden comparisons.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Map, Value};

use trikit_core::bundle;
use trikit_core::error::Error;
use trikit_core::generate;
use trikit_core::matrix::DenseMatrix;
use trikit_core::points::{self, BasePointMode, Side};
use trikit_core::resolution;
use trikit_core::scalar::{FieldTag, Scalar};
use trikit_core::schur;
use trikit_core::tensor::TriTensor;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

struct Ctx<'a> {
    t: &'a TriTensor,
    scan_prime: u64,
    cross: Option<trikit_core::tensor::InvolutionResult>,
    quadric: Option<schur::SchurQuadric>,
    double_six: Option<schur::DoubleSix>,
    base_complete: [bool; 2],
}

type CheckResult = Result<(bool, Map<String, Value>), Error>;

pub fn analyze(t: &TriTensor, scan_prime: u64, skip: &[String]) -> (Value, usize) {
    let mut checks: Map<String, Value> = Map::new();
    let mut timing: Map<String, Value> = Map::new();
    let mut status: BTreeMap<&'static str, Status> = BTreeMap::new();
    let mut failures = 0usize;
    let mut ctx = Ctx {
        t,
        scan_prime,
        cross: None,
        quadric: None,
        double_six: None,
        base_complete: [false, false],
    };

    let plan: Vec<(&'static str, &'static [&'static str])> = vec![
        ("validate", &[]),
        ("moduli_arithmetic", &[]),
        ("det_cubic", &["validate"]),
        ("main_assumption", &["validate"]),
        ("base_points_u", &["validate"]),
        ("base_points_w", &["validate"]),
        ("gamma_scan", &["validate"]),
        ("cross_product", &["main_assumption"]),
        ("involution_roundtrip", &["cross_product"]),
        ("schur_quadric", &["validate"]),
        ("q_trivial_invariance", &["schur_quadric"]),
        ("schur_carries_u", &["schur_quadric", "cross_product"]),
        ("double_six", &["base_points_u", "base_points_w"]),
        ("orthogonality", &["schur_quadric", "double_six"]),
        ("cubic_correspondence", &["schur_quadric", "cross_product"]),
        ("cohomology_table", &["validate"]),
        ("multiplication", &["validate"]),
        ("sections", &["validate"]),
        ("degeneracy_locus", &["sections", "cross_product"]),
        ("en_complexes", &["validate"]),
    ];

    for (name, deps) in plan {
        if skip.iter().any(|s| s == name) {
            checks.insert(
                name.into(),
                json!({"status": "skip", "reason": "skipped by request"}),
            );
            status.insert(name, Status::Skip);
            continue;
        }
        if let Some(bad) = deps.iter().find(|d| status.get(*d) != Some(&Status::Pass)) {
            checks.insert(
                name.into(),
                json!({"status": "skip", "reason": format!("upstream {bad} did not pass")}),
            );
            status.insert(name, Status::Skip);
            continue;
        }
        let started = Instant::now();
        let outcome = run_check(name, &mut ctx);
        timing.insert(name.into(), json!(started.elapsed().as_millis() as u64));
        match outcome {
            Ok((true, mut data)) => {
                data.insert("status".into(), json!("pass"));
                checks.insert(name.into(), Value::Object(data));
                status.insert(name, Status::Pass);
            }
            Ok((false, mut data)) => {
                data.insert("status".into(), json!("fail"));
                checks.insert(name.into(), Value::Object(data));
                status.insert(name, Status::Fail);
                failures += 1;
            }
            Err(e) => {
                checks.insert(
                    name.into(),
                    json!({"status": "skip", "reason": format!("degenerate: {e}")}),
                );
                status.insert(name, Status::Skip);
            }
        }
    }

    let pass = status.values().filter(|s| **s == Status::Pass).count();
    let skip_count = status.values().filter(|s| **s == Status::Skip).count();
    let report = json!({
        "schema": "tritensor-analysis/1",
        "tensor": t.to_json(),
        "scan_prime": scan_prime,
        "moduli": {"ambient": 35, "group": 16, "dimension": 19},
        "checks": Value::Object(checks),
        "summary": {"pass": pass, "fail": failures, "skip": skip_count},
        "timing_ms": Value::Object(timing),
    });
    (report, failures)
}

fn run_check(name: &str, ctx: &mut Ctx) -> CheckResult {
    match name {
        "validate" => check_validate(ctx),
        "moduli_arithmetic" => check_moduli(),
        "det_cubic" => check_det_cubic(ctx),
        "main_assumption" => check_main_assumption(ctx),
        "base_points_u" => check_base_points(ctx, Side::U),
        "base_points_w" => check_base_points(ctx, Side::W),
        "gamma_scan" => check_gamma(ctx),
        "cross_product" => check_cross_product(ctx),
        "involution_roundtrip" => check_involution_roundtrip(ctx),
        "schur_quadric" => check_schur_quadric(ctx),
        "q_trivial_invariance" => check_q_invariance(ctx),
        "schur_carries_u" => check_carries(ctx),
        "double_six" => check_double_six(ctx),
        "orthogonality" => check_orthogonality(ctx),
        "cubic_correspondence" => check_correspondence(ctx),
        "cohomology_table" => check_cohomology(ctx),
        "multiplication" => check_multiplication(ctx),
        "sections" => check_sections(ctx),
        "degeneracy_locus" => check_degeneracy(ctx),
        "en_complexes" => check_en(ctx),
        other => unreachable!("unknown check {other}"),
    }
}

fn poly_value(p: &trikit_core::MultiPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| {
                json!([
                    e.iter().map(|&x| x as i64).collect::<Vec<_>>(),
                    c.to_string()
                ])
            })
            .collect(),
    )
}

fn matrix_value(m: &DenseMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| json!(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn check_validate(ctx: &mut Ctx) -> CheckResult {
    let mut data = Map::new();
    data.insert("dims".into(), json!(ctx.t.dims().to_vec()));
    data.insert("field".into(), json!(ctx.t.field().to_string()));
    Ok((ctx.t.dims() == [3, 3, 4], data))
}

fn check_moduli() -> CheckResult {
    let mut data = Map::new();
    data.insert("ambient".into(), json!(35));
    data.insert("group".into(), json!(16));
    data.insert("dimension".into(), json!(19));
    Ok((35 - 16 == 19, data))
}

fn check_det_cubic(ctx: &mut Ctx) -> CheckResult {
    let c = ctx.t.det_cubic()?;
    let c_t = ctx.t.trivial_involution().det_cubic()?;
    let mut data = Map::new();
    data.insert("cubic".into(), poly_value(&c));
    data.insert("zero".into(), json!(c.is_zero()));
    data.insert("transpose_invariant".into(), json!(c == c_t));
    Ok((c == c_t, data))
}

fn check_main_assumption(ctx: &mut Ctx) -> CheckResult {
    let m = ctx.t.contraction_matrix()?;
    let rank = m.rank();
    let mut data = Map::new();
    data.insert("rank".into(), json!(rank));
    data.insert("kernel_dimension".into(), json!(12 - rank));
    Ok((rank == 9, data))
}

fn scan_prime_for(ctx: &Ctx) -> u64 {
    match ctx.t.field() {
        FieldTag::Prime(p) => p,
        FieldTag::Rational => ctx.scan_prime,
    }
}

fn check_base_points(ctx: &mut Ctx, side: Side) -> CheckResult {
    let mode = match ctx.t.field() {
        FieldTag::Rational => BasePointMode::Minors,
        FieldTag::Prime(p) => BasePointMode::Scan(p),
    };
    let bp = points::base_points(ctx.t, side, mode)?;
    let idx = match side {
        Side::U => 0,
        Side::W => 1,
    };
    ctx.base_complete[idx] = bp.complete;
    let mut data = Map::new();
    data.insert(
        "points".into(),
        Value::Array(
            bp.points
                .iter()
                .map(|p| json!(p.to_strings().to_vec()))
                .collect(),
        ),
    );
    data.insert("count".into(), json!(bp.points.len()));
    data.insert("complete".into(), json!(bp.complete));
    if !bp.complete {
        return Err(Error::Other(format!(
            "base points on side {side:?} are not a rational sixtuple ({} found)",
            bp.points.len()
        )));
    }
    Ok((true, data))
}

fn check_gamma(ctx: &mut Ctx) -> CheckResult {
    let p = scan_prime_for(ctx);
    let scan = resolution::gamma_points(ctx.t, p)?;
    let mut data = Map::new();
    data.insert("prime".into(), json!(p));
    data.insert("count".into(), json!(scan.pairs.len()));
    data.insert("degenerate_points".into(), json!(scan.degenerate_points));
    data.insert("saturated".into(), json!(scan.saturated));
    data.insert(
        "pairs".into(),
        Value::Array(
            scan.pairs
                .iter()
                .map(|(u, w)| {
                    json!([
                        u.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                        w.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    ])
                })
                .collect(),
        ),
    );
    if scan.saturated {
        return Err(Error::Other("base locus saturates the scan plane".into()));
    }
    Ok((true, data))
}

fn check_cross_product(ctx: &mut Ctx) -> CheckResult {
    let inv = ctx.t.cross_product_involution()?;
    let image_ma = inv.bprime.main_assumption()?;
    let mut data = Map::new();
    data.insert(
        "uprime_basis".into(),
        Value::Array(
            inv.uprime_basis
                .iter()
                .map(|v| Value::Array(v.iter().map(|s| json!(s.to_string())).collect()))
                .collect(),
        ),
    );
    data.insert("image_main_assumption".into(), json!(image_ma));
    data.insert(
        "image_contraction_rank".into(),
        json!(inv.bprime.contraction_matrix()?.rank()),
    );
    ctx.cross = Some(inv);
    Ok((true, data))
}

fn check_involution_roundtrip(ctx: &mut Ctx) -> CheckResult {
    let first = ctx.cross.as_ref().expect("dependency ran");
    let second = first.bprime.cross_product_involution()?;
    let expected = ctx.t.leg1_slab_span()?;
    let equal = second.uprime_basis == expected;
    let mut data = Map::new();
    data.insert("subspace_equal".into(), json!(equal));
    Ok((equal, data))
}

fn check_schur_quadric(ctx: &mut Ctx) -> CheckResult {
    let map = schur::schur_map(ctx.t)?;
    let rank = map.rank();
    let quad = schur::schur_quadric(ctx.t)?;
    let mut data = Map::new();
    data.insert("map_rank".into(), json!(rank));
    data.insert("kernel_dimension".into(), json!(10 - rank));
    data.insert("q".into(), matrix_value(&quad.q));
    data.insert("nondegenerate".into(), json!(quad.nondegenerate));
    let pass = rank == 9 && quad.nondegenerate;
    ctx.quadric = Some(quad);
    Ok((pass, data))
}

fn check_q_invariance(ctx: &mut Ctx) -> CheckResult {
    let q1 = ctx.quadric.as_ref().expect("dependency ran");
    let q2 = schur::schur_quadric(&ctx.t.trivial_involution())?;
    let equal = q1.q == q2.q;
    let mut data = Map::new();
    data.insert("invariant".into(), json!(equal));
    Ok((equal, data))
}

fn check_carries(ctx: &mut Ctx) -> CheckResult {
    let ok = schur::schur_carries_u_to_uprime(ctx.t)?;
    let mut data = Map::new();
    data.insert("carries".into(), json!(ok));
    Ok((ok, data))
}

fn check_double_six(ctx: &mut Ctx) -> CheckResult {
    let mode = match ctx.t.field() {
        FieldTag::Rational => BasePointMode::Minors,
        FieldTag::Prime(p) => BasePointMode::Scan(p),
    };
    let ds = schur::double_six(ctx.t, mode)?;
    let mut data = Map::new();
    data.insert(
        "pairs".into(),
        Value::Array(
            ds.pairs
                .iter()
                .map(|(a, b)| json!([a.point_index, b.point_index]))
                .collect(),
        ),
    );
    data.insert(
        "span_table".into(),
        Value::Array(
            ds.span_table
                .iter()
                .map(|row| Value::Array(row.iter().map(|&d| json!(d)).collect()))
                .collect(),
        ),
    );
    ctx.double_six = Some(ds);
    Ok((true, data))
}

fn check_orthogonality(ctx: &mut Ctx) -> CheckResult {
    let quad = ctx.quadric.as_ref().expect("dependency ran");
    let ds = ctx.double_six.as_ref().expect("dependency ran");
    let rep = schur::orthogonality_check(quad, ds);
    let mut data = Map::new();
    data.insert("orthogonal".into(), json!(rep.orthogonal));
    data.insert("violations".into(), json!(rep.violations.len()));
    data.insert("cross_pair_nonzero".into(), json!(rep.cross_pair_nonzero));
    Ok((rep.orthogonal && rep.cross_pair_nonzero, data))
}

fn check_correspondence(ctx: &mut Ctx) -> CheckResult {
    let c = schur::cubic_correspondence_check(ctx.t)?;
    let mut data = Map::new();
    data.insert("direction".into(), json!(c.direction.as_str()));
    data.insert("ratio".into(), json!(c.ratio.to_string()));
    Ok((c.holds, data))
}

fn check_cohomology(ctx: &mut Ctx) -> CheckResult {
    let table = bundle::cohomology_table(ctx.t, -4, 2)?;
    let minimal = table.minimal_cohomology();
    let chi_ok = table
        .rows
        .iter()
        .all(|r| r.h[0] - r.h[1] + r.h[2] - r.h[3] == r.chi);
    let mut data = Map::new();
    data.insert(
        "rows".into(),
        Value::Array(
            table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "h": r.h.to_vec(),
                        "chi": r.chi,
                        "provenance": r.provenance.iter().map(|p| p.as_str()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    );
    data.insert("minimal_cohomology".into(), json!(minimal));
    data.insert("chi_identity".into(), json!(chi_ok));
    Ok((minimal && chi_ok, data))
}

fn check_multiplication(ctx: &mut Ctx) -> CheckResult {
    let mc = bundle::multiplication_check(ctx.t)?;
    let mut data = Map::new();
    data.insert("recovered_equals_input".into(), json!(mc.ok));
    if let Some(d) = &mc.diagnostic {
        data.insert("diagnostic".into(), json!(d));
    }
    Ok((mc.ok, data))
}

fn check_sections(ctx: &mut Ctx) -> CheckResult {
    let sections = bundle::section_basis(ctx.t)?;
    let mut data = Map::new();
    data.insert("count".into(), json!(sections.len()));
    Ok((sections.len() == 6, data))
}

fn check_degeneracy(ctx: &mut Ctx) -> CheckResult {
    let p = scan_prime_for(ctx);
    let rep = bundle::degeneracy_locus_check(ctx.t, p)?;
    let mut data = Map::new();
    data.insert("prime".into(), json!(rep.prime));
    data.insert("locus_size".into(), json!(rep.locus_size));
    data.insert("cubic_zero_size".into(), json!(rep.cubic_zero_size));
    data.insert("mismatches".into(), json!(rep.mismatches));
    data.insert("jumping_points".into(), json!(rep.jumping_points));
    Ok((rep.matches, data))
}

fn check_en(ctx: &mut Ctx) -> CheckResult {
    let p3 = ctx.t.permute_legs([2, 1, 0]);
    let mut data = Map::new();
    let mut all_ok = true;
    let mut twists = Vec::new();
    // sample points off the support for the rank-splitting certificate
    let field = ctx.t.field();
    let mut rng = generate::rng(0xEA60);
    let mut sample = Vec::new();
    let mut tries = 0;
    while sample.len() < 6 && tries < 400 {
        tries += 1;
        let pt: Vec<Scalar> = (0..4)
            .map(|_| generate::random_scalar(&mut rng, field, 9))
            .collect();
        if pt.iter().all(|x| x.is_zero()) {
            continue;
        }
        if let Ok(false) = resolution::on_support(&p3, &pt) {
            sample.push(pt);
        }
    }
    for twist in 1..=3 {
        let c = resolution::en_complex(&p3, twist)?;
        let (dd, _) = resolution::verify_dd_zero(&c);
        let exact = if sample.is_empty() {
            None
        } else {
            resolution::verify_generic_exactness(&p3, &c, &sample).ok()
        };
        let ranks: Vec<usize> = c.terms.iter().map(|t| t.rank).collect();
        all_ok &= dd && exact.unwrap_or(false);
        twists.push(json!({
            "twist": twist,
            "ranks": ranks,
            "dd_zero": dd,
            "exact_at_samples": exact,
            "alternating_rank_sum": c.alternating_rank_sum,
        }));
    }
    // the plane-side twist-1 shape with its stabilized Hilbert function
    let plane = ctx.t.permute_legs([1, 0, 2]);
    let dual = resolution::en_complex(&plane, 1)?;
    let (dual_dd, _) = resolution::verify_dd_zero(&dual);
    let hf = resolution::hilbert_function(&dual, 3..=6);
    let stabilizes = hf.iter().all(|&(_, v)| v == 6);
    all_ok &= dual_dd && stabilizes;
    data.insert("p3_twists".into(), Value::Array(twists));
    data.insert(
        "dual_twist1".into(),
        json!({
            "ranks": dual.terms.iter().map(|t| t.rank).collect::<Vec<_>>(),
            "dd_zero": dual_dd,
            "hilbert_3_to_6": hf.iter().map(|&(d, v)| json!([d, v])).collect::<Vec<_>>(),
            "stabilizes_at_six": stabilizes,
        }),
    );
    data.insert("sample_points".into(), json!(sample.len()));
    Ok((all_ok, data))
}
