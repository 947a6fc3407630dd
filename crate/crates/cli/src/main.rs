//! `dolgachev`: command-line front end to the exact computations.
//!
//! Output is JSON with sorted keys by default, or markdown with
//! `--emit markdown`. Exit status is 0 when every check passes, 1 when a
//! verification fails and 2 on usage or input errors.

use clap::{Parser, Subcommand, ValueEnum};
use dolgachev::cohom::{
    ext_table, h0_gen_bound, h0_witness_bound, pseudoheight_ac, relative_heights, rule_out, ExtOptions, ExtTable, Fixtures,
    RuleOutcome, WitnessSchedule,
};
use dolgachev::defpic::DefPic;
use dolgachev::planecurves::{condition_ideal, plane_h0, Cubics};
use dolgachev::surface::SurfaceModel;
use dolgachev::tsing::{fiber_coefficients, hj_expand};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dolgachev", version, about = "Exact checks for an exceptional collection on a Dolgachev surface of type (2,3)")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Emit::Json, global = true)]
    emit: Emit,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Cmd {
    /// Resolution chain and fiber coefficients of the T-singularity (n, a)
    Tchain { n: i64, a: i64 },
    /// Picard lattice report of the blown-up surface Y
    Surface {
        #[arg(default_value_t = 3)]
        n: i64,
        #[arg(default_value_t = 1)]
        a: i64,
    },
    /// Euler characteristic of D on the smoothing, with its pieces
    ChiGen {
        #[arg(allow_hyphen_values = true)]
        divisor: String,
    },
    /// Intersection number of two divisors on the smoothing
    Pair {
        #[arg(allow_hyphen_values = true)]
        d: String,
        #[arg(allow_hyphen_values = true)]
        e: String,
    },
    /// Verification suites
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// h⁰ of a divisor on Y through plane curves with base conditions
    PlaneH0 {
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        /// JSON file with keys schema, h1, h2, F8, F9
        #[arg(long)]
        cubics: Option<PathBuf>,
    },
    /// Upper bound for h⁰ by subtracting curves, or by the negativity lemma
    /// when no schedule is given
    H0Bound {
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        /// Comma-separated curve names, e.g. "F9,l,E2,l"
        #[arg(long)]
        schedule: Option<String>,
        /// Comma-separated `name` or `name:mult` terms of the claimed effective E with D - S = -E
        #[arg(long, default_value = "")]
        residual: String,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Gram matrix of G1..G10 against diag(-1 x9, 1)
    NsGram,
    /// The 12x12 table of Ext groups
    ExtTable {
        #[command(flatten)]
        table: TableArgs,
    },
    /// The five witness bounds for every base point
    Dictionary {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Pseudoheight lower bound from the Ext table
    Phantom {
        #[command(flatten)]
        table: TableArgs,
    },
}

#[derive(clap::Args)]
struct TableArgs {
    #[arg(long)]
    fixtures: Option<PathBuf>,
    #[arg(long)]
    cubics: Option<PathBuf>,
    /// Do not fill F1..F7 entries from the F8 ones
    #[arg(long)]
    no_symmetry: bool,
}

enum Fail {
    Usage(String),
    Check(Value),
}

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Usage(e.to_string())
    }
}

type Res = Result<Value, Fail>;

fn read(path: &PathBuf) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn fixtures(path: &Option<PathBuf>) -> Result<Fixtures, Fail> {
    Ok(match path {
        Some(p) => Fixtures::from_json(&read(p)?)?,
        None => Fixtures::shipped(),
    })
}

fn cubics(path: &Option<PathBuf>) -> Result<Cubics, Fail> {
    let c = match path {
        Some(p) => Cubics::from_json(&read(p)?)?,
        None => Cubics::standard(),
    };
    c.validate()?;
    Ok(c)
}

fn names(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn residual(list: &str) -> Result<Vec<(String, i64)>, Fail> {
    names(list)
        .into_iter()
        .map(|t| match t.split_once(':') {
            Some((n, m)) => {
                let m = m.trim().parse::<i64>().map_err(|e| Fail::Usage(format!("multiplicity in `{t}`: {e}")))?;
                Ok((n.trim().to_string(), m))
            }
            None => Ok((t, 1)),
        })
        .collect()
}

fn checked(v: Value, ok: bool) -> Res {
    if ok {
        Ok(v)
    } else {
        Err(Fail::Check(v))
    }
}

fn tchain(n: i64, a: i64) -> Res {
    let c = hj_expand(n, a)?;
    Ok(json!({ "ks": c.ks, "fiber": fiber_coefficients(&c)? }))
}

fn surface(n: i64, a: i64) -> Res {
    Ok(serde_json::to_value(SurfaceModel::build(n, a)?.report()?)?)
}

fn chi_gen(divisor: &str) -> Res {
    let dp = DefPic::default();
    let d = dp.model.parse(divisor)?;
    let adm = dp.model.is_admissible(&d)?;
    let mut v = serde_json::to_value(dp.chi_gen(&d)?)?;
    v["d1"] = json!(adm.d1);
    v["d2"] = json!(adm.d2);
    v["gen"] = json!(dp.to_gen(&d)?.0);
    Ok(v)
}

fn pair(d: &str, e: &str) -> Res {
    let dp = DefPic::default();
    let (d, e) = (dp.model.parse(d)?, dp.model.parse(e)?);
    Ok(json!({ "pair": dp.pair_gen(&d, &e)? }))
}

fn ns_gram() -> Res {
    let g = DefPic::default().ns_gram();
    let expected: Vec<Vec<i64>> =
        (0..10).map(|i| (0..10).map(|j| if i != j { 0 } else if i < 9 { -1 } else { 1 }).collect()).collect();
    let diff: Vec<Value> = (0..10)
        .flat_map(|i| (0..10).map(move |j| (i, j)))
        .filter(|&(i, j)| g[i][j] != expected[i][j])
        .map(|(i, j)| json!({ "i": i + 1, "j": j + 1, "got": g[i][j], "expected": expected[i][j] }))
        .collect();
    let ok = diff.is_empty();
    checked(json!({ "gram": g, "diagonal": (0..10).map(|i| g[i][i]).collect::<Vec<_>>(), "diff": diff, "ok": ok }), ok)
}

/// The table the theorem asserts.
fn expected_triple(i: usize, j: usize) -> [i64; 3] {
    match (i, j) {
        _ if i == j => [1, 0, 0],
        _ if j < i => [0, 0, 0],
        (0, 1..=9) => [0, 0, 1],
        (0, 10) | (10, 11) => [0, 0, 3],
        (0, 11) => [0, 0, 6],
        (1..=9, 10) => [0, 0, 2],
        (1..=9, 11) => [0, 0, 5],
        _ => [0, 0, 0],
    }
}

fn table(args: &TableArgs) -> Result<ExtTable, Fail> {
    let opts = ExtOptions { symmetry: !args.no_symmetry, cubics: cubics(&args.cubics)? };
    let fx = fixtures(&args.fixtures)?;
    ext_table(&DefPic::default(), &fx, &opts).map_err(|e| {
        Fail::Check(json!({ "ok": false, "error": e.to_string() }))
    })
}

fn verify_ext(args: &TableArgs) -> Result<(Value, ExtTable), Fail> {
    let t = table(args)?;
    let mut diff = Vec::new();
    for (i, row) in t.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let got = [e.triple.h0, e.triple.h1, e.triple.h2];
            if got != expected_triple(i, j) || e.triple.h0 - e.triple.h1 + e.triple.h2 != e.chi {
                diff.push(json!({ "i": i, "j": j, "got": got, "expected": expected_triple(i, j), "chi": e.chi }));
            }
        }
    }
    let ok = diff.is_empty();
    Ok((json!({ "entries": t.entries, "diff": diff, "ok": ok }), t))
}

fn dictionary(path: &Option<PathBuf>) -> Res {
    let fx = fixtures(path)?;
    let m = SurfaceModel::default_model();
    let want = [0, 1, 1, 2, 2];
    let mut rows = Vec::new();
    let mut ok = true;
    for k in 1..=8 {
        let entries = fx.dictionary(k);
        if entries.len() != 5 {
            ok = false;
            rows.push(json!({ "k": k, "error": "missing witness fixtures" }));
            continue;
        }
        for (n, e) in entries.into_iter().enumerate() {
            let text = e.divisor.clone().unwrap_or_default();
            let s = WitnessSchedule { curves: e.schedule.clone(), residual: e.residual.clone() };
            let got = m.parse(&text).map_err(|e| e.to_string()).and_then(|d| h0_witness_bound(&m, &d, &s).map_err(|e| e.to_string()));
            match got {
                Ok(r) => {
                    ok &= r.bound == want[n];
                    rows.push(json!({ "k": k, "entry": n + 1, "divisor": text, "bound": r.bound, "expected": want[n], "residual": r.residual }));
                }
                Err(msg) => {
                    ok = false;
                    rows.push(json!({ "k": k, "entry": n + 1, "divisor": text, "error": msg, "expected": want[n] }));
                }
            }
        }
    }
    checked(json!({ "entries": rows, "ok": ok }), ok)
}

fn phantom(args: &TableArgs) -> Res {
    let t = table(args)?;
    let e = relative_heights(&t);
    let ph = pseudoheight_ac(&e);
    let ok = ph.lower_bound >= 0;
    checked(json!({ "relative_heights": e, "lower_bound": ph.lower_bound, "chain": ph.chain, "ok": ok }), ok)
}

fn plane(divisor: &str, path: &Option<PathBuf>) -> Res {
    let m = SurfaceModel::default_model();
    let c = cubics(path)?;
    let d = m.parse(divisor)?;
    let ideal = condition_ideal(&m, &d, &c)?;
    let r = plane_h0(&m, &d, &c)?;
    let mut v = serde_json::to_value(r)?;
    v["ideal"] = json!(ideal.describe());
    Ok(v)
}

fn h0_bound(divisor: &str, schedule: &Option<String>, res: &str) -> Res {
    let m = SurfaceModel::default_model();
    let d = m.parse(divisor)?;
    let (mut v, y) = match schedule {
        Some(s) => {
            let s = WitnessSchedule { curves: names(s), residual: residual(res)? };
            let r = h0_witness_bound(&m, &d, &s)?;
            let b = r.bound;
            (serde_json::to_value(r)?, Some(b))
        }
        None => {
            let r = rule_out(&m, &d)?;
            let y = match &r.outcome {
                RuleOutcome::ZeroSections { .. } => Some(0),
                RuleOutcome::Stable(_) => None,
            };
            let outcome = match &r.outcome {
                RuleOutcome::ZeroSections { curve } => json!({ "zero_sections": curve }),
                RuleOutcome::Stable(s) => json!({ "stable": m.fmt_div(s) }),
            };
            (json!({ "steps": r.steps, "outcome": outcome, "bound": y }), y)
        }
    };
    if let (Some(y), Some(_)) = (y, m.degrees(&d)?) {
        v["gen_bound"] = json!(h0_gen_bound(&m, &d, y)?);
    }
    Ok(v)
}

fn markdown(v: &Value) -> String {
    let cell = |x: &Value| match x {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match v {
        Value::Object(map) => {
            let mut s = String::from("| key | value |\n|---|---|\n");
            for (k, x) in map {
                s.push_str(&format!("| {k} | {} |\n", cell(x)));
            }
            s
        }
        other => format!("{}\n", cell(other)),
    }
}

fn run(cli: &Cli) -> Res {
    match &cli.cmd {
        Cmd::Tchain { n, a } => tchain(*n, *a),
        Cmd::Surface { n, a } => surface(*n, *a),
        Cmd::ChiGen { divisor } => chi_gen(divisor),
        Cmd::Pair { d, e } => pair(d, e),
        Cmd::Verify { what } => match what {
            Verify::NsGram => ns_gram(),
            Verify::ExtTable { table } => {
                let (v, t) = verify_ext(table)?;
                let ok = v["ok"] == json!(true);
                if cli.emit == Emit::Markdown && ok {
                    print!("{}", t.to_markdown());
                    return Ok(Value::Null);
                }
                checked(v, ok)
            }
            Verify::Dictionary { fixtures } => dictionary(fixtures),
            Verify::Phantom { table } => phantom(table),
        },
        Cmd::PlaneH0 { divisor, cubics } => plane(divisor, cubics),
        Cmd::H0Bound { divisor, schedule, residual } => h0_bound(divisor, schedule, residual),
    }
}

fn emit(cli: &Cli, v: &Value) {
    if v.is_null() {
        return;
    }
    match cli.emit {
        Emit::Json => println!("{v}"),
        Emit::Markdown => print!("{}", markdown(v)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            emit(&cli, &v);
            ExitCode::SUCCESS
        }
        Err(Fail::Check(v)) => {
            emit(&cli, &v);
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
