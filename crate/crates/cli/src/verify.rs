//! The `verify` suite: every module's invariants and oracle agreements.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{self, CheckOutcome};
use crate::config::{CommandKind, OutputFormat, RhoRange, RunConfig};
use crate::emit::emit;
use crate::report::{run, ReportDocument, Results};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub suites: Vec<SuiteSummary>,
    pub checks: Vec<CheckResult>,
}

type CheckFn = fn(u64) -> Result<CheckOutcome, String>;

macro_rules! seeded {
    ($f:path) => {
        |s| $f(s).map_err(|e| e.to_string())
    };
}
macro_rules! fixed {
    ($f:path) => {
        |_| $f().map_err(|e| e.to_string())
    };
}

pub const SUITES: [&str; 5] = ["geometry-kernel", "chern-combinatorics", "radial-spectrum", "bound-engine", "cli"];

fn registry() -> Vec<(&'static str, &'static str, CheckFn)> {
    vec![
        ("geometry-kernel", "trig_identities", seeded!(checks::trig_identities)),
        ("geometry-kernel", "mean_curvature_reductions", seeded!(checks::mean_curvature_reductions)),
        ("geometry-kernel", "trace_is_log_derivative", seeded!(checks::trace_is_log_derivative)),
        ("chern-combinatorics", "gamma_generating_random", |s| {
            checks::gamma_generating_random(s, 200).map_err(|e| e.to_string())
        }),
        ("chern-combinatorics", "quadric_binomial_identity", |_| {
            checks::quadric_binomial_all(50).map_err(|e| e.to_string())
        }),
        ("chern-combinatorics", "beta_permutation_symmetry", seeded!(checks::beta_permutation_symmetry)),
        ("radial-spectrum", "flat_limit_bessel", fixed!(checks::flat_limit_bessel)),
        ("radial-spectrum", "hemisphere_exact", fixed!(checks::hemisphere_exact)),
        ("radial-spectrum", "shooting_vs_fd", fixed!(checks::shooting_vs_fd)),
        ("radial-spectrum", "fd_richardson", fixed!(checks::fd_richardson)),
        ("radial-spectrum", "eigenvalue_scaling", seeded!(checks::eigenvalue_scaling)),
        ("radial-spectrum", "solution_consistency", seeded!(checks::solution_consistency)),
        ("radial-spectrum", "radius_monotonicity", fixed!(checks::radius_monotonicity)),
        ("bound-engine", "equality_cases", seeded!(checks::equality_cases)),
        ("bound-engine", "cpq_gap", |s| checks::cpq_gap(s, 50).map_err(|e| e.to_string())),
        ("bound-engine", "quadric_gap", fixed!(checks::quadric_gap)),
        ("bound-engine", "quadric_specialization", seeded!(checks::quadric_specialization)),
        ("bound-engine", "oracle_chain", fixed!(checks::oracle_chain)),
        ("bound-engine", "threshold_examples", fixed!(checks::threshold_examples)),
        ("bound-engine", "volume_full_tube", fixed!(checks::volume_full_tube)),
        ("bound-engine", "scaling_covariance", fixed!(checks::scaling_covariance)),
        ("bound-engine", "cross_model_instance", fixed!(checks::cross_model_instance)),
        ("cli", "document_round_trip", fixed!(document_round_trip)),
        ("cli", "repeat_determinism", fixed!(repeat_determinism)),
    ]
}

pub fn run_suite(seed: u64) -> VerifySummary {
    let reg = registry();
    let checks: Vec<CheckResult> = reg
        .par_iter()
        .enumerate()
        .map(|(i, (suite, name, f))| {
            let sub_seed = seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let (passed, detail) = match f(sub_seed) {
                Ok(o) => (o.passed, o.detail),
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult { suite: suite.to_string(), name: name.to_string(), passed, detail }
        })
        .collect();
    let suites = SUITES
        .iter()
        .map(|s| {
            let (p, f) = checks
                .iter()
                .filter(|c| c.suite == *s)
                .fold((0, 0), |(p, f), c| if c.passed { (p + 1, f) } else { (p, f + 1) });
            SuiteSummary { suite: s.to_string(), passed: p, failed: f }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    VerifySummary { seed, passed, failed: checks.len() - passed, suites, checks }
}

pub fn sample_sweep_config() -> RunConfig {
    let mut c = RunConfig::new(CommandKind::Sweep);
    c.model = Some(tubebound::geometry::Family::Cpq);
    c.n = Some(3);
    c.q = Some(1);
    c.degrees = Some(vec![2, 3]);
    c.rho_range = Some(RhoRange { start: 0.1, stop: 0.6, steps: 6 });
    c
}

fn document_round_trip() -> Result<CheckOutcome, crate::error::CliError> {
    let doc = run(&sample_sweep_config())?.document;
    let json = emit(&doc, OutputFormat::Json)?;
    let back: ReportDocument = serde_json::from_slice(&json)
        .map_err(|e| crate::error::CliError::Numeric(e.to_string()))?;
    let csv = emit(&doc, OutputFormat::Csv)?;
    let mut rdr = csv::Reader::from_reader(csv.as_slice());
    let mut mismatched = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| crate::error::CliError::Numeric(e.to_string()))?;
        let num = |i: usize| rec[i].parse::<f64>().unwrap_or(f64::NAN);
        if num(1) + num(2) != num(3) {
            mismatched += 1;
        }
    }
    let same = back == doc;
    let reports = match &doc.results {
        Results::Bounds { reports } => reports.len(),
        _ => 0,
    };
    Ok(CheckOutcome {
        passed: same && mismatched == 0 && reports == 6,
        detail: format!("json round trip {}, {mismatched} csv rows with bound != mu1_model + M", if same { "exact" } else { "differs" }),
    })
}

fn repeat_determinism() -> Result<CheckOutcome, crate::error::CliError> {
    let c = sample_sweep_config();
    let a = emit(&run(&c)?.document, OutputFormat::Json)?;
    let b = emit(&run(&c)?.document, OutputFormat::Json)?;
    Ok(CheckOutcome { passed: a == b, detail: format!("{} bytes, identical: {}", a.len(), a == b) })
}
