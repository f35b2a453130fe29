use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use qbayes_core::classical::format_prob;
use qbayes_core::smoking::smoking_example;
use qbayes_core::verify::{fixed_witness_inputs, run_suite, Suite, TrialReport};
use qbayes_core::{Dist, Effect, FuzzyPred, QChannel, QState, StochChannel};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qbayes",
    version,
    about = "Classical and quantum Bayesian inference toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the smoking, ashtray and cancer example.
    DemoSmoking(Output),
    /// Check equational laws on random instances.
    Verify(VerifyArgs),
    /// Show that quantum conditionings do not commute.
    Witness(Output),
    /// Pretty-print a JSON object file.
    Inspect {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Output {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the JSON result to this path.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; all suites when omitted.
    #[arg(long, value_parser = parse_suite)]
    suite: Option<Suite>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Component dims of two-component quantum suites, as `n,m`.
    #[arg(long, default_value = "3,5", value_parser = parse_dims)]
    dims: (usize, usize),
    /// Override every equation's tolerance.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    #[command(flatten)]
    out: Output,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: qbayes_core::Error| e.to_string())
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected two dims like 3,5, got {s:?}"));
    };
    let a: usize = a.parse().map_err(|_| format!("bad dimension {a:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("bad dimension {b:?}"))?;
    if a == 0 || b == 0 {
        return Err("dims must be at least 1".into());
    }
    Ok((a, b))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("bad tolerance {s:?}"))?;
    if !(t.is_finite() && t >= 0.0) {
        return Err("tolerance must be a non-negative number".into());
    }
    Ok(t)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::DemoSmoking(out) => demo_smoking(&out),
        Command::Verify(args) => verify(&args),
        Command::Witness(out) => witness(&out),
        Command::Inspect { file, json } => inspect(&file, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

type CmdResult = Result<u8, String>;

fn emit(out: &Output, value: &Value, text: impl FnOnce() -> String) -> Result<(), String> {
    let pretty = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    if out.json {
        println!("{pretty}");
    } else {
        println!("{}", text());
    }
    if let Some(path) = &out.file {
        fs::write(path, pretty + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn demo_smoking(out: &Output) -> CmdResult {
    let r = smoking_example().map_err(|e| e.to_string())?;
    let gap = r.path_gap();
    let agree = gap < 1e-12;
    let mut value = serde_json::to_value(&r).map_err(|e| e.to_string())?;
    value["path_gap"] = gap.into();
    value["paths_agree"] = agree.into();
    emit(out, &value, || {
        let mut s = String::new();
        s += &format!("smoking prior      {}\n", r.smoking);
        s += &format!("ashtray prior      {}\n", r.ashtray);
        s += &format!("cancer prior       {}\n", r.cancer);
        s += "joint (ashtray, smoking, cancer)\n";
        s += &format!("  {}\n", r.joint);
        s += "cancer given an ashtray\n";
        s += &format!("  crossover        {:.3}\n", r.crossover);
        s += &format!("  channel path     {:.3}\n", r.channel_path);
        s += &format!("paths agree: {agree} (gap {gap:.1e})");
        s
    })?;
    Ok(if agree { 0 } else { EXIT_FAIL })
}

fn verify(args: &VerifyArgs) -> CmdResult {
    let suites = match args.suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let trials = args.trials as usize;
    let reports: Vec<TrialReport> = suites
        .iter()
        .map(|&s| run_suite(s, trials, args.seed, args.dims, args.tol))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let value = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    }
    .map_err(|e| e.to_string())?;
    emit(&args.out, &value, || {
        reports
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n\n")
    })?;
    let mut failed = false;
    for r in &reports {
        for name in r.failures() {
            eprintln!("failed: {} / {name}", r.suite);
            failed = true;
        }
    }
    Ok(if failed { EXIT_FAIL } else { 0 })
}

fn witness(out: &Output) -> CmdResult {
    let (sigma, p, q) = fixed_witness_inputs();
    let run = || -> qbayes_core::Result<(QState, QState)> {
        let pq = sigma.cond_lower(&p)?.cond_lower(&q)?;
        let qp = sigma.cond_lower(&q)?.cond_lower(&p)?;
        Ok((pq, qp))
    };
    let (pq, qp) = run().map_err(|e| e.to_string())?;
    let distance = pq.dist(&qp);
    let value = serde_json::json!({
        "sigma": sigma, "p": p, "q": q,
        "p_then_q": pq, "q_then_p": qp,
        "distance": distance,
    });
    emit(out, &value, || {
        format!(
            "sigma = I/2, p = |0><0|, q = |+><+|\n\
             (sigma|p)|q:\n{pq:.6}\n(sigma|q)|p:\n{qp:.6}\n\
             Frobenius distance {}",
            format_prob(distance, 10)
        )
    })?;
    Ok(if distance > 0.01 { 0 } else { EXIT_FAIL })
}

fn inspect(path: &PathBuf, json: bool) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let (kind, shown) = describe(&value)?;
    if json {
        let v = serde_json::json!({ "kind": kind, "object": value });
        println!(
            "{}",
            serde_json::to_string_pretty(&v).map_err(|e| e.to_string())?
        );
    } else {
        println!("{kind}\n{shown}");
    }
    Ok(0)
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T, String> {
    serde_json::from_value(v.clone()).map_err(|e| e.to_string())
}

fn describe(v: &Value) -> Result<(&'static str, String), String> {
    let has = |k: &str| v.get(k).is_some();
    if has("suite") && has("equations") {
        let pass = v["pass"].as_bool().unwrap_or(false);
        return Ok(("trial report", format!("suite {} pass {pass}", v["suite"])));
    }
    if has("probs") {
        let d: Dist = parse(v)?;
        return Ok(("distribution", d.to_string()));
    }
    if has("values") {
        let p: FuzzyPred = parse(v)?;
        return Ok(("fuzzy predicate", p.to_string()));
    }
    if has("dom") && has("cod") {
        let c: StochChannel = parse(v)?;
        return Ok(("stochastic channel", c.to_string()));
    }
    if has("blocks") {
        let c: QChannel = parse(v)?;
        let kind = if c.is_unital() {
            "quantum channel (unital)"
        } else {
            "quantum channel"
        };
        return Ok((kind, format!("{} -> {}", c.in_dims(), c.out_dims())));
    }
    if has("dims") && has("re") {
        match v.get("kind").and_then(Value::as_str) {
            Some("state") => {
                let s: QState = parse(v)?;
                return Ok(("quantum state", format!("{s:.6}")));
            }
            Some("effect") => {
                let e: Effect = parse(v)?;
                return Ok(("effect", format!("{e:.6}")));
            }
            _ => {}
        }
        // untagged: trace-one operators read as states, the rest as effects
        if let Ok(s) = parse::<QState>(v) {
            return Ok(("quantum state", format!("{s:.6}")));
        }
        let e: Effect = parse(v)?;
        return Ok(("effect", format!("{e:.6}")));
    }
    Err("unrecognized JSON object".into())
}
