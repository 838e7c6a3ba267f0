//! Command-line front end. Subcommands: gen, analyze, verify, cremona, en.
//! All output is JSON with sorted keys; exit codes are 0 (all pass),
//! 1 (a check failed), 2 (input error).

mod report;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use trikit_core::error::Error;
use trikit_core::generate::{self, GeneratorSpec};
use trikit_core::lattice::{self, DivisorClass};
use trikit_core::points::PlanePoint;
use trikit_core::resolution;
use trikit_core::scalar::{FieldTag, Scalar};
use trikit_core::tensor::TriTensor;

#[derive(Parser)]
#[command(
    name = "trikit",
    about = "exact toolkit for (3,3,4) tensors and their cubic surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tensor as JSON on standard output.
    Gen(GenArgs),
    /// Run the full analysis report on a tensor file.
    Analyze(AnalyzeArgs),
    /// Run a property-verification suite over seeded instances.
    Verify(VerifyArgs),
    /// Reduce a divisor class, printing the full trace as JSON.
    Cremona(CremonaArgs),
    /// Build a direct-image resolution and report it as JSON.
    En(EnArgs),
}

#[derive(Args)]
struct GenArgs {
    /// random-entries | from-points | fixture (inferred from flags when omitted)
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    fixture: Option<String>,
    /// points as "(1:0:0),(0:1:0),(0:0:1),(1:1:1),(1:2:3),(1:4:9)"
    #[arg(long)]
    points: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Q or Fp:<p>
    #[arg(long, default_value = "Q")]
    field: String,
    /// entry bound for rational random entries
    #[arg(long, default_value_t = 5)]
    bound: i64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: String,
    #[arg(long, default_value_t = 101)]
    scan_prime: u64,
    /// comma-separated check names to skip
    #[arg(long, value_delimiter = ',')]
    skip: Vec<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// involution | schur | cohomology | cremona | en | all
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CremonaArgs {
    /// class as "n:a1,a2,a3,a4,a5,a6"
    class: String,
}

#[derive(Args)]
struct EnArgs {
    file: String,
    #[arg(long)]
    twist: i64,
    /// leg order as a permutation like "3,2,1" (new position <- old leg)
    #[arg(long, default_value = "1,2,3")]
    order: String,
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Verify(a) => verify::run(&a.suite, a.trials, a.seed),
        Command::Cremona(a) => run_cremona(a),
        Command::En(a) => run_en(a),
    }
}

fn emit(value: &Value, out: Option<&str>) -> ExitCode {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("cannot write {path}: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
            ExitCode::SUCCESS
        }
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("input error: {msg}");
    ExitCode::from(2)
}

fn parse_points(spec: &str, field: FieldTag) -> Result<Vec<PlanePoint>, Error> {
    let mut pts = Vec::new();
    for chunk in spec.split(')').map(str::trim) {
        let chunk = chunk.trim_start_matches(',').trim().trim_start_matches('(');
        if chunk.is_empty() {
            continue;
        }
        let coords: Vec<&str> = chunk.split(':').collect();
        if coords.len() != 3 {
            return Err(Error::Other(format!(
                "bad point {chunk:?}: expected (a:b:c)"
            )));
        }
        let parse = |s: &str| Scalar::parse(s, field);
        pts.push(PlanePoint::new([
            parse(coords[0])?,
            parse(coords[1])?,
            parse(coords[2])?,
        ])?);
    }
    Ok(pts)
}

fn run_gen(a: GenArgs) -> ExitCode {
    let field = match FieldTag::parse(&a.field) {
        Ok(f) => f,
        Err(e) => return input_error(e),
    };
    let kind = a.kind.as_deref().unwrap_or(if a.fixture.is_some() {
        "fixture"
    } else if a.points.is_some() {
        "from-points"
    } else {
        "random-entries"
    });
    let spec = match kind {
        "fixture" => {
            let Some(name) = a.fixture else {
                return input_error("--fixture required for kind fixture");
            };
            GeneratorSpec::Fixture { name }
        }
        "from-points" => match a.points {
            Some(p) => match parse_points(&p, field) {
                Ok(points) => GeneratorSpec::FromPoints { points },
                Err(e) => return input_error(e),
            },
            None => GeneratorSpec::SeededPoints {
                seed: a.seed,
                field,
            },
        },
        "random-entries" => GeneratorSpec::RandomEntries {
            seed: a.seed,
            field,
            bound: a.bound,
        },
        other => return input_error(format!("unknown kind {other:?}")),
    };
    match generate::tensor_from_spec(&spec) {
        Ok(t) => emit(&t.to_json(), a.out.as_deref()),
        Err(e) => input_error(e),
    }
}

fn load_tensor(path: &str) -> Result<TriTensor, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("malformed JSON: {e}"))?;
    TriTensor::from_json(&value).map_err(|e| format!("bad tensor: {e}"))
}

fn run_analyze(a: AnalyzeArgs) -> ExitCode {
    let tensor = match load_tensor(&a.file) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let (value, failures) = report::analyze(&tensor, a.scan_prime, &a.skip);
    let code = emit(&value, a.out.as_deref());
    if code != ExitCode::SUCCESS {
        return code;
    }
    if failures > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn parse_class(spec: &str) -> Result<DivisorClass, String> {
    let (n, rest) = spec.split_once(':').ok_or("expected n:a1,a2,a3,a4,a5,a6")?;
    let n: i64 = n.trim().parse().map_err(|_| "bad degree")?;
    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() != 6 {
        return Err("expected six multiplicities".into());
    }
    let mut a = [0i64; 6];
    for (i, p) in parts.iter().enumerate() {
        a[i] = p
            .trim()
            .parse()
            .map_err(|_| format!("bad multiplicity {p:?}"))?;
    }
    Ok(DivisorClass::new(n, a))
}

fn class_json(c: &DivisorClass) -> Value {
    json!({"n": c.n, "a": c.a.to_vec()})
}

fn run_cremona(a: CremonaArgs) -> ExitCode {
    let class = match parse_class(&a.class) {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    let trace = match lattice::reduce(&class) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let (d, dh, dd) = lattice::dcheck(&class).expect("nn2 checked by reduce");
    let value = json!({
        "schema": "cremona-trace/1",
        "input": class_json(&class),
        "nn2": true,
        "steps": trace.steps.iter().map(|s| json!({
            "before": class_json(&s.before),
            "triple": s.triple.to_vec(),
            "after": class_json(&s.after),
        })).collect::<Vec<_>>(),
        "terminal": class_json(&trace.terminal),
        "terminal_expected": trace.terminal_expected,
        "negatives_logged": trace.negatives_logged.iter().map(class_json).collect::<Vec<_>>(),
        "dcheck": {"d": class_json(&d), "dh": dh, "d2": dd},
    });
    let code = emit(&value, None);
    if code != ExitCode::SUCCESS {
        return code;
    }
    if trace.terminal_expected {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn poly_json(p: &trikit_core::MultiPoly) -> Value {
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

fn run_en(a: EnArgs) -> ExitCode {
    let tensor = match load_tensor(&a.file) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let order: Vec<usize> = a
        .order
        .split(',')
        .filter_map(|s| s.trim().parse::<usize>().ok())
        .collect();
    let perm: [usize; 3] = match order.as_slice() {
        [x, y, z]
            if {
                let mut s = [*x, *y, *z];
                s.sort_unstable();
                s == [1, 2, 3]
            } =>
        {
            [order[0] - 1, order[1] - 1, order[2] - 1]
        }
        _ => return input_error("--order must be a permutation of 1,2,3"),
    };
    let t = tensor.permute_legs(perm);
    let complex = match resolution::en_complex(&t, a.twist) {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    let (dd, witness) = resolution::verify_dd_zero(&complex);
    let hilbert = resolution::hilbert_function(&complex, 0..=6);
    let value = json!({
        "schema": "en-complex/1",
        "dims": complex.dims.to_vec(),
        "twist": complex.twist,
        "order": order,
        "terms": complex.terms.iter().map(|t| {
            let sym = match t.sym {
                resolution::SymFactor::Pow(a) => json!({"pow": a}),
                resolution::SymFactor::DualPow(a) => json!({"dual_pow": a}),
            };
            json!({"exterior": t.exterior, "sym": sym, "twist": t.twist, "rank": t.rank})
        }).collect::<Vec<_>>(),
        "alternating_rank_sum": complex.alternating_rank_sum,
        "dd_zero": dd,
        "dd_witness": witness.map(|(k, r, c)| json!([k, r, c])),
        "hilbert": hilbert.iter().map(|(d, v)| json!([d, v])).collect::<Vec<_>>(),
        "differentials": complex.differentials.iter().map(|d| json!({
            "rows": d.rows,
            "cols": d.cols,
            "entries": (0..d.rows).map(|r| {
                (0..d.cols).map(|c| poly_json(d.get(r, c))).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    let code = emit(&value, a.out.as_deref());
    if code != ExitCode::SUCCESS {
        return code;
    }
    if dd {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
