//! Run configuration: flags, an optional JSON file, and validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tubebound::bound::DEFAULT_QUAD_TOL;
use tubebound::chern::DegreeProfile;
use tubebound::geometry::{Family, ModelDescriptor};
use tubebound::radial::DEFAULT_TOL;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Bound,
    Sweep,
    Spectrum,
    Volume,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl RhoRange {
    /// `steps` equally spaced radii from `start` to `stop` inclusive.
    pub fn points(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_SAMPLES: usize = 21;

/// A fully merged configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub model: Option<Family>,
    pub n: Option<usize>,
    pub q: Option<usize>,
    pub lambda: f64,
    pub rho: Option<f64>,
    pub rho_range: Option<RhoRange>,
    pub degrees: Option<Vec<u32>>,
    pub tol: f64,
    pub quad_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            model: None,
            n: None,
            q: None,
            lambda: 1.0,
            rho: None,
            rho_range: None,
            degrees: None,
            tol: DEFAULT_TOL,
            quad_tol: DEFAULT_QUAD_TOL,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            format: OutputFormat::Table,
            out: None,
            timing: false,
        }
    }
}

/// Every field optional: the shape of both a config file and the flag set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<CommandKind>,
    pub model: Option<Family>,
    pub n: Option<usize>,
    pub q: Option<usize>,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub rho_range: Option<RhoRange>,
    pub degrees: Option<Vec<u32>>,
    pub tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            command: over.command.or(self.command),
            model: over.model.or(self.model),
            n: over.n.or(self.n),
            q: over.q.or(self.q),
            lambda: over.lambda.or(self.lambda),
            rho: over.rho.or(self.rho),
            rho_range: over.rho_range.or(self.rho_range),
            degrees: over.degrees.or(self.degrees),
            tol: over.tol.or(self.tol),
            quad_tol: over.quad_tol.or(self.quad_tol),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
            timing: over.timing.or(self.timing),
        }
    }

    pub fn finish(self) -> Result<RunConfig, CliError> {
        let command = self
            .command
            .ok_or_else(|| CliError::Config("no command given".into()))?;
        let d = RunConfig::new(command);
        Ok(RunConfig {
            command,
            model: self.model,
            n: self.n,
            q: self.q,
            lambda: self.lambda.unwrap_or(d.lambda),
            rho: self.rho,
            rho_range: self.rho_range,
            degrees: self.degrees,
            tol: self.tol.unwrap_or(d.tol),
            quad_tol: self.quad_tol.unwrap_or(d.quad_tol),
            samples: self.samples.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            format: self.format.unwrap_or(d.format),
            out: self.out,
            timing: self.timing.unwrap_or(false),
        })
    }
}

/// A validated configuration ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub model: Option<ModelDescriptor>,
    pub n: usize,
    pub q: usize,
    pub profile: Option<DegreeProfile>,
    pub rhos: Vec<f64>,
}

fn model_dims(family: Family, n: Option<usize>, q: Option<usize>) -> Result<(usize, usize), CliError> {
    let need_n = || n.ok_or_else(|| CliError::Config(format!("--n is required for model {family}")));
    let (n, q_model) = match family {
        Family::Cpq => {
            let n = need_n()?;
            let q = q.ok_or_else(|| CliError::Config("--q is required for model cpq".into()))?;
            (n, q)
        }
        Family::Quadric => {
            let n = need_n()?;
            (n, n.saturating_sub(1))
        }
        Family::Segre => {
            let n = need_n()?;
            (n, (n + 1) / 2)
        }
        Family::Su5 => (n.unwrap_or(9), 6),
        Family::So10 => (n.unwrap_or(15), 10),
    };
    if let Some(q) = q {
        if q != q_model {
            return Err(CliError::Config(format!(
                "model {family} with n = {n} has q = {q_model}, got --q {q}"
            )));
        }
    }
    Ok((n, q_model))
}

fn check_positive(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be a positive finite number, got {x}")))
    }
}

/// Resolves dimensions, degrees and radii; ranges are checked against the
/// model cut radius where one applies.
pub fn validate(config: &RunConfig) -> Result<Plan, CliError> {
    check_positive("lambda", config.lambda)?;
    check_positive("tol", config.tol)?;
    check_positive("quad_tol", config.quad_tol)?;
    if config.command == CommandKind::Verify {
        return Ok(Plan { model: None, n: 0, q: 0, profile: None, rhos: Vec::new() });
    }

    let (model, n, q) = match config.model {
        Some(family) => {
            let (n, q) = model_dims(family, config.n, config.q)?;
            let m = ModelDescriptor::new(family, n, q).map_err(CliError::from)?;
            (Some(m), n, q)
        }
        None if config.command == CommandKind::Volume => {
            let n = config.n.ok_or_else(|| CliError::Config("--n is required".into()))?;
            let q = config.q.ok_or_else(|| CliError::Config("--q is required".into()))?;
            (None, n, q)
        }
        None => return Err(CliError::Config("--model is required".into())),
    };

    let profile = match (&config.degrees, model) {
        (Some(d), _) => Some(DegreeProfile::new(n, q, d.clone()).map_err(CliError::from)?),
        (None, Some(m)) if m.family == Family::Cpq => Some(DegreeProfile::linear(n, q).map_err(CliError::from)?),
        (None, _) if config.command == CommandKind::Spectrum => None,
        (None, _) => return Err(CliError::Config("--degrees is required for this model".into())),
    };

    let rhos = match (config.command, config.rho, config.rho_range) {
        (CommandKind::Sweep, _, Some(r)) | (CommandKind::Volume, None, Some(r)) => {
            check_positive("rho start", r.start)?;
            check_positive("rho stop", r.stop)?;
            if r.steps == 0 {
                return Err(CliError::Config("rho range needs at least one step".into()));
            }
            if r.stop < r.start {
                return Err(CliError::Config(format!(
                    "rho range stop {} is below start {}",
                    r.stop, r.start
                )));
            }
            r.points()
        }
        (CommandKind::Sweep, _, None) => {
            return Err(CliError::Config("sweep needs --rho-start, --rho-stop and --rho-steps".into()))
        }
        (_, Some(rho), _) => {
            check_positive("rho", rho)?;
            vec![rho]
        }
        (_, None, _) => return Err(CliError::Config("--rho is required".into())),
    };

    if let Some(m) = model {
        if config.command != CommandKind::Volume {
            let cut = m.cut_radius(config.lambda);
            if let Some(&bad) = rhos.iter().find(|&&r| r >= cut) {
                return Err(CliError::Domain(format!(
                    "rho = {bad} is not below the cut radius {cut} of {m}"
                )));
            }
        }
    }
    if config.command == CommandKind::Spectrum && config.samples < 2 {
        return Err(CliError::Config("--samples must be at least 2".into()));
    }
    Ok(Plan { model, n, q, profile, rhos })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: CommandKind) -> RunConfig {
        RunConfig::new(command)
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = PartialConfig { n: Some(3), lambda: Some(2.0), ..Default::default() };
        let flags = PartialConfig { command: Some(CommandKind::Bound), lambda: Some(1.5), ..Default::default() };
        let c = file.overlay(flags).finish().unwrap();
        assert_eq!(c.n, Some(3));
        assert_eq!(c.lambda, 1.5);
        assert!(PartialConfig::default().finish().is_err());
    }

    #[test]
    fn config_file_rejects_unknown_fields() {
        assert!(serde_json::from_str::<PartialConfig>(r#"{"n": 3, "bogus": 1}"#).is_err());
        let p: PartialConfig = serde_json::from_str(r#"{"model": "quadric", "n": 3, "degrees": [2]}"#).unwrap();
        assert_eq!(p.model, Some(Family::Quadric));
    }

    #[test]
    fn validation_errors_are_classified() {
        let mut c = cfg(CommandKind::Bound);
        assert!(matches!(validate(&c), Err(CliError::Config(_))));
        c.model = Some(Family::Quadric);
        c.n = Some(3);
        c.degrees = Some(vec![2]);
        c.rho = Some(0.2);
        let plan = validate(&c).unwrap();
        assert_eq!((plan.n, plan.q), (3, 2));
        c.rho = Some(0.8);
        assert!(matches!(validate(&c), Err(CliError::Domain(_))));
        c.rho = Some(-0.1);
        assert!(matches!(validate(&c), Err(CliError::Config(_))));
        c.rho = Some(0.2);
        c.degrees = Some(vec![2, 2]);
        assert!(matches!(validate(&c), Err(CliError::Config(_))));
        c.degrees = Some(vec![2]);
        c.q = Some(1);
        assert!(matches!(validate(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn cpq_defaults_to_linear_degrees() {
        let mut c = cfg(CommandKind::Bound);
        c.model = Some(Family::Cpq);
        c.n = Some(4);
        c.q = Some(2);
        c.rho = Some(0.3);
        assert!(validate(&c).unwrap().profile.unwrap().is_linear());
    }

    #[test]
    fn range_points() {
        let r = RhoRange { start: 0.1, stop: 0.5, steps: 5 };
        let p = r.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[4], 0.5);
        assert!((p[2] - 0.3).abs() < 1e-15);
        assert_eq!(RhoRange { start: 0.2, stop: 0.2, steps: 1 }.points(), vec![0.2]);
    }
}
