//! Experiment configuration, batch runs and result files.

mod config;
mod emit;
mod run;

pub use config::{
    DepolarizeGrid, ExperimentConfig, ExperimentKind, PacketConfig, Rapidity, DEFAULT_DEPOLARIZATION_TARGET,
};
pub use emit::{config_sidecar, emit, read_report, render, report_csv, report_json, sweep_csv, Format, SWEEP_HEADER};
pub use run::{
    run, run_bound_check, run_certify, run_depolarize, run_sweep, BoundCheckSummary, CertifySummary,
    DepolarizeRow, DepolarizeSummary, Outcome, Report, ReportBody, SweepRecord,
};

use crate::error::RelspinError;

/// Process exit code for an error raised while loading or running an
/// experiment.
pub fn error_exit_code(err: &RelspinError) -> i32 {
    match err {
        RelspinError::Config { .. }
        | RelspinError::Json(_)
        | RelspinError::InvalidPacket { .. }
        | RelspinError::OutsideValidity(_)
        | RelspinError::MissingSymmetry(_)
        | RelspinError::NonUnitAxis(_)
        | RelspinError::InvalidRapidity(_)
        | RelspinError::InvalidQuadrature(_)
        | RelspinError::NonPositiveMass(_) => 2,
        RelspinError::Normalization(_) => 4,
        _ => 1,
    }
}
