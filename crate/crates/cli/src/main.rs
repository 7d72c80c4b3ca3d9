//! Command-line front end: progression search, congruent-number conversions,
//! 4-torsion normalization, verification suites, and q-series dumps. All
//! numbers cross the boundary as exact strings; exit code 0 on success, 1 on
//! a computational failure (structured error object), 2 on invalid input.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use conicap::conic::Sign;
use conicap::curve::{normalize_four_torsion, x024_curve, CurvePoint, WeierstrassCurve};
use conicap::exact::{format_rat, height, parse_rat, Rat};
use conicap::progression::{
    ap_search, congruum_curve, congruum_curve_to_ap, congruum_curve_to_triangle,
    congruum_triangle_to_curve, four_squares_to_curve, sigma_action, tau_action,
};
use conicap::series::{j_series, k_series, r_series, verify_tower, QSeries};
use conicap::{Conic, LinFracMap};

#[derive(Parser)]
#[command(name = "conicap", version, about = "Exact arithmetic progressions on conic sections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// JSON payload path, or "-" for stdin
    #[arg(long, default_value = "-")]
    input: String,
    /// Output path, or "-" for stdout
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Subcommand)]
enum Command {
    /// Search for 3-term arithmetic progressions on a conic
    FindAp {
        #[command(flatten)]
        io: IoArgs,
        /// Height bound for the E_k point grid search
        #[arg(long, default_value_t = 20)]
        height: u32,
        /// Square-root branch for the emitted conic points
        #[arg(long, default_value = "+", value_parser = parse_sign)]
        sign: Sign,
    },
    /// Convert between congruum representations (squares / point / triangle)
    Congruent {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Normalize a curve with a marked 4-torsion point to the E_k form
    Normalize {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Run a verification suite
    Verify {
        /// Which suite to run
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Truncation order for the tower suite
        #[arg(long, default_value_t = 20)]
        order: i64,
        /// Output path, or "-" for stdout
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Dump a q-expansion as exact coefficient strings
    Series {
        /// Which series to expand
        #[arg(long, value_enum)]
        which: Which,
        /// Number of known coefficients starting at the leading exponent
        #[arg(long, default_value_t = 10)]
        order: i64,
        /// Output path, or "-" for stdout
        #[arg(long, default_value = "-")]
        output: String,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Table1,
    Tower,
    Symmetry,
    All,
}

#[derive(Copy, Clone, ValueEnum)]
enum Which {
    K,
    R,
    J,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" => Ok(Sign::Plus),
        "-" => Ok(Sign::Minus),
        _ => Err("sign must be '+' or '-'".into()),
    }
}

/// Failure carrying the process exit code and a structured JSON error object.
struct Failure {
    exit: u8,
    body: Value,
}

impl Failure {
    fn invalid(msg: impl std::fmt::Display) -> Failure {
        Failure {
            exit: 2,
            body: json!({"error": {"code": "invalid_input", "message": msg.to_string()}}),
        }
    }

    fn computational(e: conicap::Error) -> Failure {
        Failure {
            exit: 1,
            body: json!({"error": {"code": e.code(), "message": e.to_string()}}),
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(Failure::invalid)?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{path}: {e}")))
    }
}

fn write_output(path: &str, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    if path == "-" {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(Failure::invalid)?;
    } else {
        fs::write(path, text).map_err(|e| Failure::invalid(format!("{path}: {e}")))?;
    }
    Ok(())
}

fn json_rat(v: &Value, key: &str) -> Result<Rat, Failure> {
    let s = v
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::invalid(format!("missing string field {key:?}")))?;
    parse_rat(s).map_err(|e| Failure::invalid(format!("field {key:?}: {e}")))
}

fn json_field<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<T, Failure> {
    let field = v
        .get(key)
        .ok_or_else(|| Failure::invalid(format!("missing field {key:?}")))?;
    serde_json::from_value(field.clone())
        .map_err(|e| Failure::invalid(format!("field {key:?}: {e}")))
}

fn parse_payload(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(Failure::invalid)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output_path) = match cli.command {
        Command::FindAp { io, height, sign } => (cmd_find_ap(&io.input, height, sign), io.output),
        Command::Congruent { io } => (cmd_congruent(&io.input), io.output),
        Command::Normalize { io } => (cmd_normalize(&io.input), io.output),
        Command::Verify { suite, order, output } => (cmd_verify(suite, order), output),
        Command::Series { which, order, output } => (cmd_series(which, order), output),
    };
    match result {
        Ok(value) => match write_output(&output_path, &value) {
            Ok(()) => ExitCode::SUCCESS,
            Err(f) => {
                eprintln!("{}", f.body);
                ExitCode::from(f.exit)
            }
        },
        Err(f) => {
            // error objects go to stdout so callers always get valid JSON
            let _ = write_output("-", &f.body);
            ExitCode::from(f.exit)
        }
    }
}

fn cmd_find_ap(input: &str, height_bound: u32, sign: Sign) -> Result<Value, Failure> {
    let payload = parse_payload(&read_input(input)?)?;
    let conic: Conic = json_field(&payload, "conic")?;
    let map: LinFracMap = json_field(&payload, "map")?;
    let t0 = json_rat(&payload, "t0")?;
    let mut triples =
        ap_search(&conic, &map, &t0, height_bound, sign).map_err(Failure::computational)?;
    // deterministic ordering: by height of delta, then by delta, then by t
    triples.sort_by(|a, b| {
        (height(&a.delta), &a.delta, &a.t_values).cmp(&(height(&b.delta), &b.delta, &b.t_values))
    });
    let disc = conicap::disc_poly(&conic, &map);
    let k = conicap::modulus_k(&disc, &t0).map_err(Failure::computational)?;
    Ok(json!({
        "k": format_rat(&k),
        "count": triples.len(),
        "triples": serde_json::to_value(&triples).expect("serializable"),
    }))
}

fn cmd_congruent(input: &str) -> Result<Value, Failure> {
    let payload = parse_payload(&read_input(input)?)?;
    // accepted forms: {"triangle": ["a","b","c"]} or {"delta": "d", "point": {...}}
    let (x, y, delta) = if payload.get("triangle").is_some() {
        let sides: [String; 3] = json_field(&payload, "triangle")?;
        let a = parse_rat(&sides[0]).map_err(Failure::invalid)?;
        let b = parse_rat(&sides[1]).map_err(Failure::invalid)?;
        let c = parse_rat(&sides[2]).map_err(Failure::invalid)?;
        congruum_triangle_to_curve(&a, &b, &c).map_err(Failure::computational)?
    } else if payload.get("point").is_some() {
        let delta = json_rat(&payload, "delta")?;
        if delta == parse_rat("0").unwrap() {
            return Err(Failure::computational(conicap::Error::ZeroInput));
        }
        let p: CurvePoint = json_field(&payload, "point")?;
        let (x, y) = match p {
            CurvePoint::Affine(x, y) => (x, y),
            CurvePoint::Infinity => {
                return Err(Failure::computational(conicap::Error::PointAtInfinity))
            }
        };
        if !congruum_curve(&delta).contains(&CurvePoint::affine(x.clone(), y.clone())) {
            return Err(Failure::computational(conicap::Error::PointNotOnCurve));
        }
        (x, y, delta)
    } else {
        return Err(Failure::invalid(
            "supply either \"triangle\" or \"delta\" + \"point\"",
        ));
    };
    let (r1, r2, r3) = congruum_curve_to_ap(&x, &y, &delta).map_err(Failure::computational)?;
    let tri = congruum_curve_to_triangle(&x, &y, &delta).map_err(Failure::computational)?;
    Ok(json!({
        "delta": format_rat(&delta),
        "point": {"X": format_rat(&x), "Y": format_rat(&y)},
        "squares": [format_rat(&(&r1 * &r1)), format_rat(&(&r2 * &r2)), format_rat(&(&r3 * &r3))],
        "square_roots": [format_rat(&r1), format_rat(&r2), format_rat(&r3)],
        "triangle": [format_rat(&tri.a), format_rat(&tri.b), format_rat(&tri.c)],
    }))
}

fn cmd_normalize(input: &str) -> Result<Value, Failure> {
    let payload = parse_payload(&read_input(input)?)?;
    let curve: WeierstrassCurve = json_field(&payload, "curve")?;
    let point: CurvePoint = json_field(&payload, "point")?;
    let (ek, norm) = normalize_four_torsion(&curve, &point).map_err(Failure::computational)?;
    Ok(json!({
        "k": format_rat(ek.k()),
        "k1": format_rat(&norm.k1),
        "x0": format_rat(&norm.x0),
        "y0": format_rat(&norm.y0),
        "curve": serde_json::to_value(ek.curve()).expect("serializable"),
    }))
}

fn series_value(s: &QSeries, count: i64) -> Value {
    json!({
        "lead": s.lead,
        "coeffs": (s.lead..s.lead + count)
            .map(|n| format_rat(&s.coeff(n).expect("below precision")))
            .collect::<Vec<_>>(),
    })
}

fn cmd_series(which: Which, order: i64) -> Result<Value, Failure> {
    if order < 1 {
        return Err(Failure::invalid("--order must be at least 1"));
    }
    let prec = order - 1; // all three series lead at q^-1
    let (name, s) = match which {
        Which::K => ("k", k_series(prec)),
        Which::R => ("r", r_series(prec)),
        Which::J => ("j", j_series(prec)),
    };
    let mut v = series_value(&s, order);
    v["name"] = json!(name);
    Ok(v)
}

fn cmd_verify(suite: Suite, order: i64) -> Result<Value, Failure> {
    let mut checks: Vec<Value> = Vec::new();
    let run = |checks: &mut Vec<Value>, name: &str, result: Result<String, String>| match result {
        Ok(detail) => checks.push(json!({"name": name, "pass": true, "detail": detail})),
        Err(detail) => checks.push(json!({"name": name, "pass": false, "detail": detail})),
    };
    match suite {
        Suite::Table1 => run(&mut checks, "table1", verify_table1()),
        Suite::Tower => run(&mut checks, "tower", verify_tower_suite(order)),
        Suite::Symmetry => run(&mut checks, "symmetry", verify_symmetry()),
        Suite::All => {
            run(&mut checks, "table1", verify_table1());
            run(&mut checks, "tower", verify_tower_suite(order));
            run(&mut checks, "symmetry", verify_symmetry());
        }
    }
    let passed = checks.iter().all(|c| c["pass"] == json!(true));
    let report = json!({"passed": passed, "checks": checks});
    if passed {
        Ok(report)
    } else {
        Err(Failure { exit: 1, body: report })
    }
}

/// The 8 golden rows: mapping, curve membership, and the Z2 x Z4 structure.
fn verify_table1() -> Result<String, String> {
    use conicap::exact::int;
    #[allow(clippy::type_complexity)]
    let rows: [([i64; 4], Option<(i64, i64)>); 8] = [
        ([-1, -1, 1, 1], None),
        ([-1, 1, -1, 1], Some((0, 0))),
        ([-1, -1, -1, 1], Some((-2, 2))),
        ([-1, 1, 1, 1], Some((-2, -2))),
        ([1, 1, 1, 1], Some((-1, 0))),
        ([1, -1, -1, 1], Some((-4, 0))),
        ([1, 1, -1, 1], Some((2, -6))),
        ([1, -1, 1, 1], Some((2, 6))),
    ];
    let curve = x024_curve();
    let mut points = Vec::new();
    for (xs, want) in rows {
        let p = four_squares_to_curve(&int(xs[0]), &int(xs[1]), &int(xs[2]), &int(xs[3]))
            .map_err(|e| format!("row {xs:?}: {e}"))?;
        let expect = match want {
            None => CurvePoint::Infinity,
            Some((x, y)) => CurvePoint::affine(int(x), int(y)),
        };
        if p != expect {
            return Err(format!("row {xs:?} mapped to {p:?}, expected {expect:?}"));
        }
        if !curve.contains(&p) {
            return Err(format!("row {xs:?}: point not on the curve"));
        }
        points.push(p);
    }
    // closure under the group law
    for p in &points {
        for q in &points {
            let s = curve.add(p, q).map_err(|e| e.to_string())?;
            if !points.contains(&s) {
                return Err(format!("{p:?} + {q:?} = {s:?} escapes the set"));
            }
        }
    }
    // element orders multiset {1, 2, 2, 2, 4, 4, 4, 4}
    let mut orders: Vec<u32> = points
        .iter()
        .map(|p| {
            curve
                .order_up_to_12(p)
                .ok()
                .flatten()
                .ok_or_else(|| format!("{p:?}: order not found"))
        })
        .collect::<Result<_, _>>()?;
    orders.sort_unstable();
    if orders != vec![1, 2, 2, 2, 4, 4, 4, 4] {
        return Err(format!("group structure mismatch: orders {orders:?}"));
    }
    Ok("8/8 rows; closed; orders {1,2,2,2,4,4,4,4} (Z2 x Z4)".into())
}

fn verify_tower_suite(order: i64) -> Result<String, String> {
    let (m1, m2) = verify_tower(order);
    match (m1, m2) {
        (None, None) => Ok(format!("both identities hold through q^{}", order - 1)),
        _ => Err(format!(
            "first mismatch: j r^2 = (r+256)^3 at {m1:?}, r(1-k) = 16 k^2 at {m2:?}"
        )),
    }
}

/// sigma^4 = tau^2 = id and tau sigma tau = sigma^-1 on a sampled point set.
fn verify_symmetry() -> Result<String, String> {
    use conicap::exact::rat;
    let k = rat(25, 9);
    let curve = conicap::ek_model(&k);
    let mut sample = conicap::ek_point_search(&k, 40);
    sample.retain(|p| !p.is_infinity());
    if sample.is_empty() {
        return Err("empty sample".into());
    }
    let n = sample.len();
    for p in &sample {
        let mut q = p.clone();
        for _ in 0..4 {
            q = sigma_action(&k, &q).map_err(|e| e.to_string())?;
        }
        if &q != p {
            return Err(format!("sigma^4 != id at {p:?}"));
        }
        let tp = tau_action(&k, p).map_err(|e| e.to_string())?;
        let ttp = tau_action(&k, &tp).map_err(|e| e.to_string())?;
        if &ttp != p {
            return Err(format!("tau^2 != id at {p:?}"));
        }
        let lhs = tau_action(&k, &sigma_action(&k, &tp).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let sigma_inv = curve
            .add(&curve.neg(&CurvePoint::affine(rat(0, 1), rat(0, 1))), p)
            .map_err(|e| e.to_string())?;
        if lhs != sigma_inv {
            return Err(format!("tau sigma tau != sigma^-1 at {p:?}"));
        }
    }
    Ok(format!("sigma^4 = tau^2 = id, tau sigma tau = sigma^-1 on {n} points"))
}
