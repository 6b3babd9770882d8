//! Qudit quantum channels in the generalized Pauli basis and their classical
//! capacity.
//!
//! The crate is organized around three layers:
//!
//! - operator algebra: the shift and clock matrices, their products, and the
//!   identities they satisfy ([`weyl`]);
//! - states and channels: density matrices expanded over that operator basis,
//!   channels acting diagonally on the expansion, qubit affine maps, and
//!   tensor products ([`density`], [`channel`]);
//! - information quantities: entropies, the Holevo quantity, relative
//!   entropy, and two independent routes to the classical capacity
//!   ([`entropy`], [`capacity`]).
//!
//! Channels can be described as JSON documents ([`descriptor`]) and runs can
//! be reported as deterministic serializable records ([`report`]).
//!
//! # Example
//!
//! ```
//! use qhsw_core::{
//!     hsw_capacity_diagonal, qubit_unital_capacity_closed_form, DiagonalUnitalChannel,
//!     OptimizerOptions,
//! };
//!
//! let ch = DiagonalUnitalChannel::qubit(0.5, 0.5, 0.9).unwrap();
//! let res = hsw_capacity_diagonal(&ch, &OptimizerOptions::default()).unwrap();
//! let closed = qubit_unital_capacity_closed_form([0.5, 0.5, 0.9]).unwrap();
//! assert!((res.capacity_bits - closed).abs() < 1e-6);
//! ```

pub mod capacity;
pub mod channel;
pub mod density;
pub mod descriptor;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod report;
pub mod tol;
pub mod weyl;

pub use capacity::{
    average_output_uniqueness_check, equal_distance_check, hsw_capacity_diagonal,
    maximal_distance_check, min_output_entropy, min_output_entropy_qubit_grid, optimize_ensemble,
    output_entropy, qubit_unital_capacity_closed_form, CapacityResult, DistanceCheckEntry,
    EnsembleResult, EqualDistanceReport, MaximalDistanceReport, MinEntropyResult,
    OptimizerDiagnostics, OptimizerOptions, UniquenessReport, WeylDiagonalChannel,
};
pub use channel::{
    choi_matrix, cp_min_eigenvalue, decode_index, encode_index, is_completely_positive, is_unital,
    tensor, tensor_conjugation_residual, tensor_orthonormality_residual, tensor_with_cap,
    trace_preservation_residual, unitality_residual, DiagonalUnitalChannel, IndexBijection,
    ProductChannel, QuantumChannel, QubitAffineChannel,
};
pub use density::{
    bloch_to_density, density_to_bloch, expand, random_pure_state, random_state_vector,
    reconstruct, DensityMatrix, ValidationReport, WeylCoefficients,
};
pub use descriptor::{
    describe_diagonal, describe_product, parse_channel_document, BuiltChannel, ChannelDescriptor,
    ChannelDocument, DensityPayload, LambdaEntry,
};
pub use entropy::{
    binary_entropy, chi_unitary_invariance_residual, holevo_quantity, relative_entropy,
    von_neumann_entropy, Ensemble,
};
pub use error::{QhswError, Result};
pub use linalg::{CMatrix, CVector};
pub use report::{
    AlgebraRecord, CapacityRecord, ChannelSummary, CheckRecord, DiagnosticsRecord,
    FactorCapacityRecord, OptionsRecord, OracleRecord, ProductRecord, VerifyRecord,
};
pub use weyl::{
    all_weyl_matrices, clock_matrix, commutation_residual, conjugate_weyl, conjugation_residual,
    generate_group_q, generate_group_q_with_cap, group_closure_residual, hs_inner,
    irreducibility_sum, orthonormality_residual, phased_weyl_operator, root_of_unity, root_power,
    shift_matrix, weyl_operator, PhasedWeylOperator, WeylIndex, WeylOperator,
};
