//! Serializable records of library runs.
//!
//! Every field is a pure function of the inputs and options, so serializing
//! a record twice for the same run yields identical bytes.

use serde::{Deserialize, Serialize};

use crate::capacity::{OptimizerDiagnostics, OptimizerOptions};
use crate::descriptor::{BuiltChannel, ChannelDescriptor, DensityPayload};

/// One named residual compared against its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expected_failure: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    /// A check that passes when the residual is within tolerance.
    pub fn from_residual(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual.abs() <= tolerance,
            expected_failure: false,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn expecting_failure(mut self, expected: bool) -> Self {
        self.expected_failure = expected;
        self
    }

    /// Whether the outcome matches what the descriptor declared.
    pub fn as_expected(&self) -> bool {
        self.pass != self.expected_failure
    }
}

/// What the channel under examination is.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSummary {
    pub channel_type: String,
    pub dim: usize,
    pub descriptor_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noiseless_bits: Option<f64>,
}

impl ChannelSummary {
    pub fn new(descriptor: &ChannelDescriptor, built: &BuiltChannel) -> Self {
        let channel_type = match descriptor {
            ChannelDescriptor::DiagonalUnital { .. } => "diagonal_unital",
            ChannelDescriptor::QubitAffine { .. } => "qubit_affine",
            ChannelDescriptor::Product { .. } => "product",
        };
        Self {
            channel_type: channel_type.into(),
            dim: built.dim(),
            descriptor_sha256: descriptor.sha256_hex(),
            noiseless_bits: built.as_weyl_diagonal().map(|ch| ch.noiseless_bits()),
        }
    }
}

/// The options a run was started with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptionsRecord {
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble_size: Option<usize>,
}

impl From<&OptimizerOptions> for OptionsRecord {
    fn from(opts: &OptimizerOptions) -> Self {
        Self {
            seed: opts.seed,
            restarts: opts.restarts,
            max_iterations: opts.max_iterations,
            ensemble_size: opts.ensemble_size,
        }
    }
}

/// Serializable mirror of the optimizer diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub restarts: usize,
    pub converged_restarts: usize,
    pub total_iterations: usize,
    pub best_restart: usize,
    pub objective_per_restart: Vec<f64>,
    pub converged: bool,
}

impl From<&OptimizerDiagnostics> for DiagnosticsRecord {
    fn from(d: &OptimizerDiagnostics) -> Self {
        Self {
            restarts: d.restarts,
            converged_restarts: d.converged_restarts,
            total_iterations: d.total_iterations,
            best_restart: d.best_restart,
            objective_per_restart: d.objective_per_restart.clone(),
            converged: d.converged,
        }
    }
}

/// Result of the independent ensemble maximizer run as a cross-check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub chi_bits: f64,
    /// |capacity - chi|, the agreement between the two estimators.
    pub capacity_agreement_residual: f64,
    pub checks: Vec<CheckRecord>,
    pub diagnostics: DiagnosticsRecord,
}

/// Full record of a capacity run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityRecord {
    pub channel: ChannelSummary,
    pub options: OptionsRecord,
    /// Which estimator produced `capacity_bits`: "min_output_entropy" for
    /// diagonal channels, "ensemble" for channels without the closed route.
    pub estimator: String,
    pub capacity_bits: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_output_entropy_bits: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_capacity_bits: Option<f64>,
    /// Input state achieving the minimum output entropy, when the
    /// estimator is "min_output_entropy".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub argmin_input: Option<DensityPayload>,
    /// Optimal average output state, when the estimator is "ensemble".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average_output: Option<DensityPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRecord>,
    pub diagnostics: DiagnosticsRecord,
}

/// Full record of a validation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub channel: ChannelSummary,
    pub allow_non_cp: bool,
    pub expected_failure: bool,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
    /// Whether the overall outcome matches the descriptor's declaration.
    pub as_expected: bool,
    /// Optimizer settings, present when optimality checks ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsRecord>,
    /// Optimizer diagnostics, present when optimality checks ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsRecord>,
}

impl VerifyRecord {
    pub fn new(
        channel: ChannelSummary,
        allow_non_cp: bool,
        expected_failure: bool,
        checks: Vec<CheckRecord>,
    ) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        let as_expected = all_pass != expected_failure;
        Self {
            channel,
            allow_non_cp,
            expected_failure,
            checks,
            all_pass,
            as_expected,
            options: None,
            diagnostics: None,
        }
    }
}

/// Full record of an operator algebra self-test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraRecord {
    pub dims: Vec<usize>,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
}

impl AlgebraRecord {
    pub fn new(dims: Vec<usize>, checks: Vec<CheckRecord>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Self {
            dims,
            checks,
            all_pass,
        }
    }
}

/// Capacity of one tensor factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorCapacityRecord {
    pub dim: usize,
    pub capacity_bits: f64,
    pub converged: bool,
}

/// Full record of a product channel capacity run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductRecord {
    pub channel: ChannelSummary,
    pub options: OptionsRecord,
    pub factor_capacities: Vec<FactorCapacityRecord>,
    pub factor_capacity_sum: f64,
    pub composite_capacity_bits: f64,
    /// |composite - sum of factors|; small values exhibit additivity.
    pub additivity_residual: f64,
    pub diagnostics: DiagnosticsRecord,
}
