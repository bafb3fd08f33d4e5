//! Serialization of report documents.

use std::fmt::Write as _;

use crate::config::OutputFormat;
use crate::error::CliError;
use crate::report::{ReportDocument, Results};

pub const BOUND_COLUMNS: [&str; 8] = ["rho", "mu1_model", "M", "bound", "sign_class", "rho1", "rho0", "warnings"];

/// `x` with 17 significant digits in scientific notation.
pub fn full(x: f64) -> String {
    format!("{x:.16e}")
}

fn full_opt(x: Option<f64>) -> String {
    x.map(full).unwrap_or_default()
}

/// `x` rounded to 8 significant digits.
pub fn sig8(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = format!("{x:.7e}");
    let exp: i32 = e[e.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-4..8).contains(&exp) {
        format!("{:.*}", (7 - exp) as usize, x)
    } else {
        e
    }
}

fn sig8_opt(x: Option<f64>) -> String {
    x.map(sig8).unwrap_or_else(|| "-".into())
}

pub fn emit(doc: &ReportDocument, format: OutputFormat) -> Result<Vec<u8>, CliError> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(doc)
                .map_err(|e| CliError::Numeric(format!("json encoding: {e}")))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        OutputFormat::Csv => emit_csv(doc),
        OutputFormat::Table => Ok(emit_table(doc).into_bytes()),
    }
}

fn emit_csv(doc: &ReportDocument) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let enc = |e: csv::Error| CliError::Numeric(format!("csv encoding: {e}"));
    match &doc.results {
        Results::Bounds { reports } => {
            w.write_record(BOUND_COLUMNS).map_err(enc)?;
            for r in reports {
                w.write_record([
                    full(r.rho),
                    full(r.mu1_model),
                    full(r.m),
                    full(r.bound),
                    r.sign_class.as_str().to_string(),
                    full_opt(r.rho1),
                    full_opt(r.rho0),
                    r.warnings.join("; "),
                ])
                .map_err(enc)?;
            }
        }
        Results::Spectrum { spectrum } => {
            w.write_record(["rho", "mu1", "r", "f", "fprime"]).map_err(enc)?;
            for s in &spectrum.samples {
                w.write_record([full(spectrum.rho), full(spectrum.mu1), full(s.r), full(s.f), full(s.fprime)])
                    .map_err(enc)?;
            }
        }
        Results::Volume { volume } => {
            w.write_record(["rho", "ratio", "ratio_quadrature", "density_zero", "warnings"])
                .map_err(enc)?;
            for r in &volume.rows {
                w.write_record([
                    full(r.rho),
                    full(r.ratio),
                    full(r.ratio_quadrature),
                    full_opt(r.density_zero),
                    r.warnings.join("; "),
                ])
                .map_err(enc)?;
            }
        }
        Results::Verify { verify } => {
            w.write_record(["suite", "check", "passed", "detail"]).map_err(enc)?;
            for c in &verify.checks {
                w.write_record([c.suite.as_str(), c.name.as_str(), if c.passed { "true" } else { "false" }, c.detail.as_str()])
                    .map_err(enc)?;
            }
        }
    }
    w.into_inner()
        .map_err(|e| CliError::Numeric(format!("csv encoding: {e}")))
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:>w$}", w = *w))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn emit_table(doc: &ReportDocument) -> String {
    let mut out = String::new();
    match &doc.results {
        Results::Bounds { reports } => {
            if let Some(r) = reports.first() {
                let _ = writeln!(
                    out,
                    "model {} n={} q={} lambda={} degrees={:?}",
                    r.model, r.n, r.q, sig8(r.lambda), r.profile
                );
            }
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        sig8(r.rho),
                        sig8(r.mu1_model),
                        sig8(r.m),
                        sig8(r.bound),
                        r.sign_class.as_str().to_string(),
                        sig8_opt(r.rho1),
                        sig8_opt(r.rho0),
                    ]
                })
                .collect();
            out += &aligned(&BOUND_COLUMNS[..7], &rows);
            for r in reports {
                for w in &r.warnings {
                    let _ = writeln!(out, "warning (rho={}): {w}", sig8(r.rho));
                }
            }
        }
        Results::Spectrum { spectrum: s } => {
            let _ = writeln!(
                out,
                "model {} n={} q={} lambda={} rho={}",
                s.model,
                s.n,
                s.q,
                sig8(s.lambda),
                sig8(s.rho)
            );
            let _ = writeln!(out, "mu1 = {}  (relative bracket {:.1e}, {} grid points)", sig8(s.mu1), s.achieved_tol, s.grid_points);
            let rows: Vec<Vec<String>> = s
                .samples
                .iter()
                .map(|p| vec![sig8(p.r), sig8(p.f), sig8(p.fprime)])
                .collect();
            out += &aligned(&["r", "f", "fprime"], &rows);
        }
        Results::Volume { volume: v } => {
            let _ = writeln!(out, "n={} q={} lambda={} degrees={:?}", v.n, v.q, sig8(v.lambda), v.degrees);
            let rows: Vec<Vec<String>> = v
                .rows
                .iter()
                .map(|r| vec![sig8(r.rho), sig8(r.ratio), sig8(r.ratio_quadrature), sig8_opt(r.density_zero)])
                .collect();
            out += &aligned(&["rho", "ratio", "ratio_quadrature", "density_zero"], &rows);
            for r in &v.rows {
                for w in &r.warnings {
                    let _ = writeln!(out, "warning (rho={}): {w}", sig8(r.rho));
                }
            }
        }
        Results::Verify { verify } => {
            let rows: Vec<Vec<String>> = verify
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.suite.clone(),
                        c.name.clone(),
                        if c.passed { "pass" } else { "FAIL" }.to_string(),
                        c.detail.clone(),
                    ]
                })
                .collect();
            out += &aligned(&["suite", "check", "status", "detail"], &rows);
            for s in &verify.suites {
                let _ = writeln!(out, "{}: {} passed, {} failed", s.suite, s.passed, s.failed);
            }
            let _ = writeln!(out, "total: {} passed, {} failed", verify.passed, verify.failed);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_significant_digits() {
        assert_eq!(sig8(19.842017194768296), "19.842017");
        assert_eq!(sig8(-2.2463755167), "-2.2463755");
        assert_eq!(sig8(0.000123456789), "0.00012345679");
        assert_eq!(sig8(1.234567891e-7), "1.2345679e-7");
        assert_eq!(sig8(9.999999999), "10.000000");
        assert_eq!(sig8(0.0), "0");
        assert_eq!(sig8(-0.0), "0");
    }

    #[test]
    fn full_precision_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.2463755167e-12, 6.02e23] {
            assert_eq!(full(x).parse::<f64>().unwrap(), x);
        }
    }
}
