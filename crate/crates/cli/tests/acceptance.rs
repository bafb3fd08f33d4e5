//! Acceptance criteria, one line per criterion. Exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use tubebound::geometry::ModelDescriptor;
use tubebound::radial::{solve_mu1, RadialProblem, DEFAULT_TOL};
use tubebound_cli::checks::{self, CheckOutcome, J01_SQ, J11_SQ};
use tubebound_cli::config::DEFAULT_SEED;

type Outcome = Result<CheckOutcome, String>;

fn merge(parts: Vec<Outcome>) -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();
    for p in parts {
        let p = p?;
        passed &= p.passed;
        detail.push(p.detail);
    }
    Ok(CheckOutcome { passed, detail: detail.join("; ") })
}

fn lift(r: tubebound::Result<CheckOutcome>) -> Outcome {
    r.map_err(|e| e.to_string())
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let out = match (out, limit) {
        (Ok(o), Some(l)) if took > l => Ok(CheckOutcome {
            passed: false,
            detail: format!("{}; runtime {took:.2?} exceeds {l:.0?}", o.detail),
        }),
        (o, _) => o,
    };
    (out, took)
}

fn flat_limit() -> Outcome {
    let mut parts = Vec::new();
    for (q, target) in [(1usize, J01_SQ), (2, J11_SQ)] {
        let start = Instant::now();
        let mu = solve_mu1(
            &RadialProblem::new(ModelDescriptor::cpq(q + 1, 1).map_err(|e| e.to_string())?, 1e-8, 1.0)
                .map_err(|e| e.to_string())?,
            DEFAULT_TOL,
        )
        .map_err(|e| e.to_string())?
        .mu1;
        let took = start.elapsed();
        let err = (mu - target).abs() / target;
        parts.push(Ok(CheckOutcome {
            passed: err <= 1e-4 && took < Duration::from_secs(1),
            detail: format!("n-q={q}: mu1 {mu:.9} rel err {err:.2e} (tol 1e-4) in {took:.2?}"),
        }));
    }
    merge(parts)
}

fn cross_model() -> Outcome {
    let inst = checks::cross_model_instances().map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut lines = Vec::new();
    for c in &inst {
        ok &= c.slack_conic >= 0.0 && c.slack_line >= 0.0;
        lines.push(format!("rho {:.4}: {:.3e}/{:.3e}", c.rho, c.slack_conic, c.slack_line));
    }
    Ok(CheckOutcome { passed: ok && inst.len() == 10, detail: format!("slacks conic/line {}", lines.join(", ")) })
}

fn binary(args: &[&str], threads: Option<&str>) -> Result<(i32, Vec<u8>), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tubebound"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("TUBEBOUND_THREADS", t);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_determinism() -> Outcome {
    let verify = ["verify", "--format", "json"];
    let (c1, a) = binary(&verify, None)?;
    let (c2, b) = binary(&verify, None)?;
    let sweep = [
        "sweep", "--model", "cpq", "--n", "3", "--q", "1", "--lambda", "1", "--degrees", "2,3",
        "--rho-start", "0.1", "--rho-stop", "0.6", "--rho-steps", "8", "--format", "json",
    ];
    let (c3, s1) = binary(&sweep, Some("1"))?;
    let (c4, s4) = binary(&sweep, Some("4"))?;
    let passed = c1 == 0 && c2 == 0 && a == b && c3 == 0 && c4 == 0 && s1 == s4;
    Ok(CheckOutcome {
        passed,
        detail: format!(
            "verify exit {c1}/{c2}, {} bytes, repeat identical {}; sweep 1 vs 4 threads identical {}",
            a.len(),
            a == b,
            s1 == s4
        ),
    })
}

fn main() -> ExitCode {
    let seed = DEFAULT_SEED;
    let criteria: Vec<(&str, Option<Duration>, Box<dyn FnOnce() -> Outcome>)> = vec![
        ("flat-limit spectrum", None, Box::new(flat_limit)),
        ("shooting vs finite differences", Some(Duration::from_secs(30)), Box::new(|| lift(checks::shooting_vs_fd()))),
        ("equality cases", None, Box::new(move || lift(checks::equality_cases(seed)))),
        (
            "sign and gap",
            None,
            Box::new(move || merge(vec![lift(checks::cpq_gap(seed, 50)), lift(checks::quadric_gap())])),
        ),
        ("quotient oracle chain", None, Box::new(|| lift(checks::oracle_chain()))),
        (
            "exact identities",
            None,
            Box::new(move || {
                merge(vec![lift(checks::gamma_generating_random(seed, 200)), lift(checks::quadric_binomial_all(50))])
            }),
        ),
        ("full tube volume", None, Box::new(|| lift(checks::volume_full_tube()))),
        ("scaling covariance", None, Box::new(|| lift(checks::scaling_covariance()))),
        ("line and conic comparison", None, Box::new(cross_model)),
        ("cli determinism", None, Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let (out, took) = timed(limit, f);
        let (passed, detail) = match out {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<32} {}  [{took:.2?}] {detail}",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
