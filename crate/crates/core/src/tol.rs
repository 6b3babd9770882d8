//! Numerical tolerances used by validators, checks, and optimizers.

/// Exact operator identities (commutation, conjugation phases, orthogonality).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Aggregated sums and state validation (hermiticity, trace, coefficient sums).
pub const AGGREGATE_TOL: f64 = 1e-10;

/// Smallest eigenvalue a positive semidefinite matrix may show before it is
/// rejected; values in `[PSD_EIG_FLOOR, 0)` count as rounding noise.
pub const PSD_EIG_FLOOR: f64 = -1e-9;

/// Eigenvalues below this are treated as exact zeros inside entropies.
pub const ENTROPY_EIG_CLAMP: f64 = 1e-14;

/// Eigenvalues of the second relative-entropy argument below this count as
/// lying outside its support.
pub const SUPPORT_EIG_TOL: f64 = 1e-12;

/// Probability weight the first argument may place on the second argument's
/// null space before the relative entropy is reported as infinite.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-9;

/// Objective improvement below this counts as a stalled optimizer iteration.
pub const STALL_TOL: f64 = 1e-9;

/// Consecutive stalled iterations required to declare convergence.
pub const STALL_WINDOW: usize = 50;

/// Ensemble members below this probability are ignored by the optimality checks.
pub const PROB_FLOOR: f64 = 1e-6;

/// Fraction of the maximally mixed state mixed into a probe state before
/// matrix logarithms are taken inside gradients.
pub const GRAD_SMOOTHING: f64 = 1e-9;

/// Allowed violation of the coefficient hermiticity constraint during
/// reconstruction of a matrix from its operator-basis coefficients.
pub const HERMITICITY_CONSTRAINT_TOL: f64 = 1e-8;

/// Allowed violation of the multiplier pairing constraint at channel construction.
pub const PAIRING_TOL: f64 = 1e-12;

/// Default cap on the dimension for which the full phased operator group is
/// materialized.
pub const GROUP_DIM_CAP: usize = 8;

/// Default cap on the composite dimension of tensor-product channels.
pub const PRODUCT_DIM_CAP: usize = 16;
