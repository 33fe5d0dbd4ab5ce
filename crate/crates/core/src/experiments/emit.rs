use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::run::{Report, ReportBody, SweepRecord};
use crate::error::{RelspinError, Result};

pub const SWEEP_HEADER: &str = "beta,mu_x,mu_y,mu_z,mu_norm,purity,entropy_bits,converged";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Sweep records as CSV; an empty slice gives the header line alone.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.beta, r.mu_x, r.mu_y, r.mu_z, r.mu_norm, r.purity, r.entropy_bits, r.converged
        );
    }
    out
}

fn table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// CSV rendering of any report. Non-sweep experiments use their own columns.
pub fn report_csv(report: &Report) -> String {
    match &report.body {
        ReportBody::Sweep { records } => sweep_csv(records),
        ReportBody::Depolarize(s) => table(
            "radius_over_mass,relative_width,mu_norm,purity,entropy_bits,converged,below_target",
            s.rows.iter().map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    r.radius_over_mass,
                    r.relative_width,
                    r.mu_norm,
                    r.purity,
                    r.entropy_bits,
                    r.converged,
                    r.mu_norm < s.target
                )
            }),
        ),
        ReportBody::BoundCheck(s) => table(
            "sigma_over_mass,mu_norm,expansion,bound,slack,allowance,holds,converged",
            [format!(
                "{},{},{},{},{},{},{},{}",
                s.sigma_over_mass, s.mu_norm, s.expansion, s.bound, s.slack, s.allowance, s.holds, s.converged
            )],
        ),
        ReportBody::Certify(s) => table(
            "beta,mu_norm,gap,gap_integral,spread_min,spread_max,certified,converged",
            s.certificates.iter().map(|c| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    c.rapidity, c.mu_norm, c.gap, c.gap_integral, c.spread_min, c.spread_max, c.certified, c.converged
                )
            }),
        ),
    }
}

pub fn report_json(report: &Report) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(report_csv(report)),
        Format::Json => report_json(report),
    }
}

/// Where the resolved configuration goes next to a CSV file.
pub fn config_sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".config.json");
    PathBuf::from(name)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| RelspinError::Io { path: path.to_path_buf(), source })
}

/// Writes the report. CSV output carries no configuration, so it is echoed
/// to `<path>.config.json`.
pub fn emit(report: &Report, path: &Path, format: Format) -> Result<()> {
    write(path, &render(report, format)?)?;
    if format == Format::Csv {
        let mut echo = serde_json::to_string_pretty(&report.config)?;
        echo.push('\n');
        write(&config_sidecar(path), &echo)?;
    }
    Ok(())
}

pub fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(|source| RelspinError::Io { path: path.to_path_buf(), source })?;
    Ok(serde_json::from_str(&text)?)
}
