//! Report documents and the command dispatcher.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tubebound::bound::{bound_report, BoundReport};
use tubebound::geometry::Family;
use tubebound::radial::{solve_mu1, RadialProblem};
use tubebound::volume::{tube_volume_ratio, tube_volume_ratio_quadrature};

use crate::config::{validate, CommandKind, Plan, RunConfig};
use crate::error::CliError;
use crate::verify::{run_suite, VerifySummary};

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "TUBEBOUND_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSample {
    pub r: f64,
    pub f: f64,
    pub fprime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub model: Family,
    pub n: usize,
    pub q: usize,
    pub lambda: f64,
    pub rho: f64,
    pub mu1: f64,
    pub achieved_tol: f64,
    pub grid_points: usize,
    pub samples: Vec<EigenSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeRow {
    pub rho: f64,
    pub ratio: f64,
    pub ratio_quadrature: f64,
    pub density_zero: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeTable {
    pub n: usize,
    pub q: usize,
    pub degrees: Vec<u32>,
    pub lambda: f64,
    pub rows: Vec<VolumeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Bounds { reports: Vec<BoundReport> },
    Spectrum { spectrum: SpectrumSummary },
    Volume { volume: VolumeTable },
    Verify { verify: VerifySummary },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub tol: f64,
    pub quad_tol: f64,
    pub grid_points: Vec<usize>,
    pub achieved_tol: Vec<f64>,
    /// Present only with `--timing`, so default documents stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub config: RunConfig,
    pub results: Results,
    pub provenance: Provenance,
}

/// A finished run: the document and the process exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: ReportDocument,
    pub exit_code: i32,
}

/// Thread count from the environment, or `None` for rayon's default.
pub fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let plan = validate(config)?;
    let start = Instant::now();
    let (results, grid_points, achieved_tol) = match config.command {
        CommandKind::Bound | CommandKind::Sweep => run_bounds(config, &plan)?,
        CommandKind::Spectrum => run_spectrum(config, &plan)?,
        CommandKind::Volume => run_volume(config, &plan)?,
        CommandKind::Verify => {
            let summary = with_pool(|| run_suite(config.seed))?;
            (Results::Verify { verify: summary }, Vec::new(), Vec::new())
        }
    };
    let exit_code = match &results {
        Results::Verify { verify } if verify.failed > 0 => 4,
        _ => 0,
    };
    let document = ReportDocument {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        results,
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tol: config.tol,
            quad_tol: config.quad_tol,
            grid_points,
            achieved_tol,
            wall_time_seconds: config.timing.then(|| start.elapsed().as_secs_f64()),
        },
    };
    Ok(Outcome { document, exit_code })
}

type Run = (Results, Vec<usize>, Vec<f64>);

fn run_bounds(config: &RunConfig, plan: &Plan) -> Result<Run, CliError> {
    let model = plan.model.expect("validated");
    let profile = plan.profile.clone().expect("validated");
    let reports: Vec<BoundReport> = with_pool(|| {
        plan.rhos
            .par_iter()
            .map(|&rho| bound_report(&model, &profile, config.lambda, rho, config.tol))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let grid = reports.iter().map(|r| r.grid_points).collect();
    let tol = reports.iter().map(|r| r.achieved_tol).collect();
    Ok((Results::Bounds { reports }, grid, tol))
}

fn run_spectrum(config: &RunConfig, plan: &Plan) -> Result<Run, CliError> {
    let model = plan.model.expect("validated");
    let rho = plan.rhos[0];
    let sol = solve_mu1(&RadialProblem::new(model, config.lambda, rho)?, config.tol)?;
    let samples = sol
        .samples(config.samples)
        .into_iter()
        .map(|(r, f, fprime)| EigenSample { r, f, fprime })
        .collect();
    let spectrum = SpectrumSummary {
        model: model.family,
        n: model.n,
        q: model.q,
        lambda: config.lambda,
        rho,
        mu1: sol.mu1,
        achieved_tol: sol.achieved_tol,
        grid_points: sol.grid.len(),
        samples,
    };
    Ok((Results::Spectrum { spectrum }, vec![sol.grid.len()], vec![sol.achieved_tol]))
}

fn run_volume(config: &RunConfig, plan: &Plan) -> Result<Run, CliError> {
    let profile = plan.profile.clone().expect("validated");
    let rows = plan
        .rhos
        .iter()
        .map(|&rho| {
            let v = tube_volume_ratio(plan.n, plan.q, &profile, config.lambda, rho)?;
            let qv = tube_volume_ratio_quadrature(plan.n, plan.q, &profile, config.lambda, rho)?;
            Ok(VolumeRow {
                rho,
                ratio: v.ratio,
                ratio_quadrature: qv,
                density_zero: v.density_zero,
                warnings: v.warnings,
            })
        })
        .collect::<Result<Vec<_>, tubebound::Error>>()?;
    let volume = VolumeTable {
        n: plan.n,
        q: plan.q,
        degrees: profile.degrees,
        lambda: config.lambda,
        rows,
    };
    Ok((Results::Volume { volume }, Vec::new(), Vec::new()))
}
