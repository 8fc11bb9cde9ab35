use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Number, Value};

use qmock_core::dsl::{evaluate, parse, parse_corpus, verify_identity, IdentityRecord, Status, VerificationReport};
use qmock_core::{GaussianRational, QExponent, QSeries};

const BUILTIN_ORDER: i64 = 100;

#[derive(Parser)]
#[command(name = "qmock", version, about = "Expand q-series and verify mock theta identities exactly")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an expression to a given order
    Expand {
        expr: String,
        /// truncation order (default: $QMOCK_DEFAULT_ORDER or 100)
        #[arg(long, value_parser = rational)]
        order: Option<QExponent>,
        #[arg(long)]
        json: bool,
    },
    /// Check `lhs = rhs` below a given order
    Verify {
        lhs: String,
        rhs: String,
        #[arg(long, value_parser = rational)]
        order: Option<QExponent>,
        #[arg(long)]
        json: bool,
    },
    /// Verify every identity in a corpus file
    Corpus {
        path: std::path::PathBuf,
        /// override every stanza's order
        #[arg(long, value_parser = rational)]
        order: Option<QExponent>,
        /// worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
        /// omit timings so repeated runs are byte-identical
        #[arg(long)]
        stable: bool,
    },
}

fn rational(s: &str) -> Result<QExponent, String> {
    let r = QExponent::from_str(s)?;
    if r.is_positive() {
        Ok(r)
    } else {
        Err(format!("order must be positive, got {r}"))
    }
}

fn default_order() -> Result<QExponent, String> {
    match std::env::var("QMOCK_DEFAULT_ORDER") {
        Ok(v) => rational(&v).map_err(|e| format!("QMOCK_DEFAULT_ORDER: {e}")),
        Err(_) => Ok(QExponent::from_int(BUILTIN_ORDER)),
    }
}

fn num(n: impl ToString) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

fn exponent_json(e: &QExponent) -> Value {
    json!([num(e.numer()), num(e.denom())])
}

fn coeff_json(c: &GaussianRational) -> Vec<Value> {
    vec![num(c.re().numer()), num(c.re().denom()), num(c.im().numer()), num(c.im().denom())]
}

fn series_json(s: &QSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(e, c)| {
            let mut row = vec![num(e.numer()), num(e.denom())];
            row.extend(coeff_json(c));
            Value::Array(row)
        })
        .collect();
    json!({ "terms": terms, "precision": s.precision().map(exponent_json) })
}

fn q_power(e: &QExponent) -> String {
    if e.is_integer() && !e.is_negative() {
        format!("q^{e}")
    } else {
        format!("q^({e})")
    }
}

fn report_json(r: &VerificationReport, stable: bool) -> Value {
    let mut v = json!({
        "id": r.id,
        "anchor": r.anchor,
        "status": r.status.to_string(),
        "order": exponent_json(&r.order),
        "achieved_precision": r.achieved_precision.as_ref().map(exponent_json),
        "first_mismatch": r.first_mismatch.as_ref().map(|(e, c)| json!({ "exponent": exponent_json(e), "coefficient": coeff_json(c) })),
        "error": r.error,
    });
    if !stable {
        v["elapsed_ms"] = num(r.elapsed_ms);
    }
    v
}

fn report_line(r: &VerificationReport, stable: bool) -> String {
    let detail = match r.status {
        Status::Pass => format!("to {}", q_power(&r.order)),
        Status::Fail => {
            let (e, c) = r.first_mismatch.as_ref().expect("failing report has a mismatch");
            format!("lhs - rhs has coefficient {c} at {}", q_power(e))
        }
        Status::Error => r.error.clone().unwrap_or_default(),
    };
    let time = if stable { String::new() } else { format!(" [{} ms]", r.elapsed_ms) };
    format!("{:<5} {}: {detail}{time}", r.status, r.id)
}

fn expand(expr: &str, order: QExponent, as_json: bool) -> ExitCode {
    let ast = match parse(expr) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match evaluate(&ast, &order) {
        Ok(s) if as_json => println!("{}", series_json(&s)),
        Ok(s) => println!("{s}"),
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            return ExitCode::from(3);
        }
    }
    ExitCode::SUCCESS
}

fn verify(lhs: &str, rhs: &str, order: QExponent, as_json: bool) -> ExitCode {
    let (l, r) = match (parse(lhs), parse(rhs)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rec = IdentityRecord { id: "verify".into(), anchor: String::new(), order, lhs: l, rhs: r, line: 0 };
    let rep = verify_identity(&rec);
    if as_json {
        println!("{}", report_json(&rep, false));
    } else {
        println!("{}", report_line(&rep, false));
    }
    ExitCode::from(match rep.status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Error => 3,
    })
}

fn corpus(path: &std::path::Path, order: Option<QExponent>, jobs: Option<usize>, as_json: bool, stable: bool) -> ExitCode {
    let fallback = match default_order() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let mut records = match parse_corpus(&text, &fallback) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}:{e}", path.display());
            return ExitCode::from(2);
        }
    };
    if let Some(o) = order {
        for r in &mut records {
            r.order = o.clone();
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().expect("thread pool");
    let mut reports: Vec<VerificationReport> = pool.install(|| records.par_iter().map(verify_identity).collect());
    reports.sort_by(|a, b| a.id.cmp(&b.id));

    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let (pass, fail, error) = (count(Status::Pass), count(Status::Fail), count(Status::Error));
    let summary = format!("PASS {pass} / FAIL {fail} / ERROR {error}");
    if as_json {
        let all: Vec<Value> = reports.iter().map(|r| report_json(r, stable)).collect();
        let out = json!({ "reports": all, "summary": { "pass": pass, "fail": fail, "error": error } });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        for r in &reports {
            println!("{}", report_line(r, stable));
        }
        println!("{summary}");
    }
    if fail + error == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let order_or_default = |o: Option<QExponent>| match o {
        Some(o) => Ok(o),
        None => default_order(),
    };
    match cli.cmd {
        Command::Expand { expr, order, json } => match order_or_default(order) {
            Ok(o) => expand(&expr, o, json),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Verify { lhs, rhs, order, json } => match order_or_default(order) {
            Ok(o) => verify(&lhs, &rhs, o, json),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Corpus { path, order, jobs, json, stable } => corpus(&path, order, jobs, json, stable),
    }
}
