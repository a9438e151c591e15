//! Run reports: one entry per requested check, serialized as JSON with a
//! deterministic byte layout, plus plot-ready CSV extraction.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::growth::GrowthReport;
use crate::lfield::LambdaEstimate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// The check ran and its contract held.
    Pass,
    /// The check ran and found a violation.
    Fail,
    /// The check could not finish.
    Error,
}

/// Outcome of one pipeline stage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub status: CheckStatus,
    pub message: String,
    /// Stage-specific payload (criterion reports, index estimates, ...).
    pub details: serde_json::Value,
}

/// Everything one `run` produced. Wall-clock timings are kept for logs
/// but never serialized, so identical runs give identical bytes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub toolkit_version: String,
    pub config: ExperimentConfig,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn new(config: ExperimentConfig) -> Self {
        RunReport {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn any_errored(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Error)
    }

    /// Deterministic pretty JSON, newline-terminated.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Config {
            field: "<report>".into(),
            message: e.to_string(),
        })?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            field: "<report>".into(),
            message: e.to_string(),
        })
    }
}

/// Payload of the growth check, shared with the plot emitter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthCheckDetails {
    /// One report per ray, margins and bounds per radius.
    pub rays: Vec<GrowthReport>,
    /// Ray angles matching `rays`.
    pub thetas: Vec<f64>,
    /// ln|F| / integral-of-L curves per ray over the limsup radii.
    pub ratio_radii: Vec<f64>,
    pub ratio_curves: Vec<Vec<f64>>,
    pub limsup_max: f64,
    pub hypothesis_sup: f64,
    /// The N used on the right-hand side.
    pub n_used: usize,
}

/// Payload of the lclass check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LclassCheckDetails {
    pub condition2_violations: usize,
    pub points_checked: usize,
    /// First few violating points, as coordinate pairs.
    pub violation_samples: Vec<Vec<[f64; 2]>>,
    pub lambdas: Vec<LambdaEstimate>,
}

/// What emit_plot_data extracts from a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// (theta, r, lhs, rhs, margin) of the growth bound.
    GrowthCurves,
    /// (theta, r, ratio) of the boundary limsup ratio.
    RatioVsR,
    /// (eta, lambda1, lambda2) of the weight-class sweep.
    LambdaVsEta,
}

/// Renders one series of the report as CSV with a '#' header. Errors with
/// MissingSeries when the report has no such stage.
pub fn emit_plot_data(report: &RunReport, what: PlotKind) -> Result<String> {
    match what {
        PlotKind::GrowthCurves => {
            let d = growth_details(report)?;
            let mut out = String::from("# theta, r, lhs, rhs, margin\n");
            for (theta, ray) in d.thetas.iter().zip(&d.rays) {
                for i in 0..ray.r_grid.len() {
                    let _ = writeln!(
                        out,
                        "{theta:.17e}, {:.17e}, {:.17e}, {:.17e}, {:.17e}",
                        ray.r_grid[i], ray.lhs[i], ray.rhs[i], ray.margins[i]
                    );
                }
            }
            Ok(out)
        }
        PlotKind::RatioVsR => {
            let d = growth_details(report)?;
            let mut out = String::from("# theta, r, ratio\n");
            for (theta, curve) in d.thetas.iter().zip(&d.ratio_curves) {
                for (r, ratio) in d.ratio_radii.iter().zip(curve) {
                    let _ = writeln!(out, "{theta:.17e}, {r:.17e}, {ratio:.17e}");
                }
            }
            Ok(out)
        }
        PlotKind::LambdaVsEta => {
            let check = report.check("lclass").ok_or(Error::MissingSeries {
                name: "lclass".into(),
            })?;
            let d: LclassCheckDetails = serde_json::from_value(check.details.clone())
                .map_err(|e| Error::Config {
                    field: "lclass.details".into(),
                    message: e.to_string(),
                })?;
            let mut out = String::from("# eta, lambda1, lambda2\n");
            for l in &d.lambdas {
                let _ = writeln!(
                    out,
                    "{:.17e}, {:.17e}, {:.17e}",
                    l.eta, l.lambda1, l.lambda2
                );
            }
            Ok(out)
        }
    }
}

fn growth_details(report: &RunReport) -> Result<GrowthCheckDetails> {
    let check = report.check("growth").ok_or(Error::MissingSeries {
        name: "growth".into(),
    })?;
    serde_json::from_value(check.details.clone()).map_err(|e| Error::Config {
        field: "growth.details".into(),
        message: e.to_string(),
    })
}
