//! Acceptance criteria. Runs without the libtest harness so each criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use qbayes_core::smoking::smoking_example;
use qbayes_core::verify::{fixed_witness_inputs, run_suite, Suite, TrialReport};

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome {
            ok,
            detail: detail.into(),
        }
    }
}

fn suite(s: Suite, trials: usize, seed: u64, dims: (usize, usize)) -> TrialReport {
    run_suite(s, trials, seed, dims, None).expect("valid suite arguments")
}

/// Every equation below `tol`, every equation evaluated on every trial.
fn all_below(r: &TrialReport, tol: f64) -> (bool, f64) {
    let worst = r.equations.iter().map(|e| e.max_dev).fold(0.0, f64::max);
    let complete = r.trial_errors == 0 && r.equations.iter().all(|e| e.evaluated == r.trials);
    (complete && r.pass && worst < tol, worst)
}

fn qbayes(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qbayes"))
        .args(args)
        .output()
        .expect("qbayes binary runs")
}

fn smoking() -> Outcome {
    let start = Instant::now();
    let r = smoking_example().expect("example runs");
    let elapsed = start.elapsed();
    let close = |a: f64, b: f64| (a - b).abs() < 5e-4;
    let mut ok = close(r.ashtray.probs()[0], 0.46)
        && close(r.ashtray.probs()[1], 0.54)
        && close(r.cancer.probs()[0], 0.155)
        && close(r.cancer.probs()[1], 0.845)
        && r.joint.probs().len() == 8
        && close(r.joint.prob(&["t", "t", "t"]).unwrap_or(-1.0), 0.114)
        && close(r.joint.prob(&["t", "t", "f"]).unwrap_or(-1.0), 0.171);
    for post in [&r.crossover, &r.channel_path] {
        ok &= close(post.probs()[0], 0.267) && close(post.probs()[1], 0.733);
    }
    let out = qbayes(&["demo-smoking"]);
    let text = String::from_utf8_lossy(&out.stdout);
    ok &= out.status.success() && text.matches("0.267|t> + 0.733|f>").count() == 2;
    ok &= elapsed < Duration::from_secs(1);
    Outcome::new(
        ok,
        format!(
            "posteriors {:.4}/{:.4}, {:?}",
            r.crossover.probs()[0],
            r.channel_path.probs()[0],
            elapsed
        ),
    )
}

fn classical_suite() -> Outcome {
    let start = Instant::now();
    let r = suite(Suite::ClassicalBayes, 1000, 2024, (3, 5));
    let elapsed = start.elapsed();
    let (ok, worst) = all_below(&r, 1e-12);
    let names = [
        "product rule",
        "Bayes rule",
        "successive conditioning",
        "commuting conditioning",
        "validity duality",
        "forward inference",
        "backward inference",
    ];
    let covered = names.iter().all(|n| r.equation(n).is_some());
    Outcome::new(
        ok && covered && elapsed < Duration::from_secs(5),
        format!("max deviation {worst:.2e} over 1000 trials, {elapsed:?}"),
    )
}

fn semiexp_suite() -> Outcome {
    let r = suite(Suite::Semiexp, 200, 2024, (3, 5));
    let beta = r.equation("beta law").map_or(f64::INFINITY, |e| e.max_dev);
    let nat = r
        .equation("naturality")
        .map_or(f64::INFINITY, |e| e.max_dev);
    let eta = r.witness("eta law violation");
    let eta_gap = eta.map_or(0.0, |w| w.deviation);
    let ok = beta < 1e-12 && nat < 1e-12 && eta.is_some_and(|w| w.found) && r.trial_errors == 0;
    Outcome::new(
        ok,
        format!("beta {beta:.2e}, naturality {nat:.2e}, eta violated by {eta_gap:.3}"),
    )
}

fn quantum_bayes_suite() -> Outcome {
    let r = suite(Suite::QuantumBayes, 500, 2024, (3, 5));
    let (ok, worst) = all_below(&r, 1e-10);
    Outcome::new(
        ok && r.dims == [2, 3, 4],
        format!("max deviation {worst:.2e}"),
    )
}

fn pair_extract_suite() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for dims in [(3, 5), (2, 2)] {
        let r = suite(Suite::PairExtract, 100, 2024, dims);
        let (pass, worst) = all_below(&r, 1e-9);
        ok &= pass;
        details.push(format!("{dims:?}: {worst:.2e}"));
    }
    Outcome::new(ok, details.join(", "))
}

fn inference_suite() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for dims in [(3, 5), (2, 2)] {
        let r = suite(Suite::Inference, 100, 2024, dims);
        let (pass, worst) = all_below(&r, 1e-9);
        ok &= pass;
        details.push(format!("{dims:?}: {worst:.2e}"));
    }
    let out = qbayes(&[
        "verify",
        "--suite",
        "inference",
        "--dims",
        "3,5",
        "--trials",
        "100",
        "--seed",
        "7",
    ]);
    let code = out.status.code();
    let elapsed = start.elapsed();
    ok &= code == Some(0) && elapsed < Duration::from_secs(10);
    details.push(format!("cli exit {code:?}, {elapsed:?}"));
    Outcome::new(ok, details.join(", "))
}

fn witness_criterion() -> Outcome {
    let (s, p, q) = fixed_witness_inputs();
    let pq = s.cond_lower(&p).and_then(|x| x.cond_lower(&q));
    let qp = s.cond_lower(&q).and_then(|x| x.cond_lower(&p));
    let d = match (pq, qp) {
        (Ok(a), Ok(b)) => a.dist(&b),
        _ => f64::NAN,
    };
    let r = suite(Suite::Witnesses, 100, 2024, (2, 2));
    let ok = (d - 1.0).abs() < 1e-10 && r.pass;
    Outcome::new(ok, format!("fixed witness distance {d:.12}"))
}

fn embedding_suite() -> Outcome {
    let r = suite(Suite::Embedding, 200, 2024, (3, 5));
    let (ok, worst) = all_below(&r, 1e-10);
    Outcome::new(
        ok && r.equations.len() == 13,
        format!(
            "{} operations, max deviation {worst:.2e}",
            r.equations.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("smoking example", smoking),
        ("classical equational suite", classical_suite),
        ("semi-exponential suite", semiexp_suite),
        ("quantum Bayes suite", quantum_bayes_suite),
        ("pair/extract recovery", pair_extract_suite),
        ("quantum crossover inference", inference_suite),
        ("non-commutation witness", witness_criterion),
        ("embedding coherence", embedding_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {} {mark} {name}: {}", i + 1, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
