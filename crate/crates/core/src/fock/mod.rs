//! Dense truncated-Fock realization of the extended generators, used as an
//! independent numerical check of the symbolic layers.

mod checks;
mod coherent;
mod config;
pub mod dump;
mod expm;
mod generators;
mod operator;
mod verify;
mod vev;

use thiserror::Error;

pub use checks::{
    algebra_checks, heisenberg_phase_check, idempotence_defect, low_excitation_columns,
    resolution_of_identity_defect, safe_columns, CheckResult, Evolution, HeisenbergProbe,
    ALGEBRA_TOL, HEISENBERG_TOL,
};
pub use coherent::{
    coherent_state, eigen_residual, energies, field_averages, mode_superposition,
    truncated_coherent, FieldAverages, FieldGeometry, ModeGeometry, COHERENT_NORM_TOL,
};
pub use config::{ExtensionWeights, OracleConfig, DEFAULT_DENSE_CAP, DEFAULT_DIM_CAP};
pub use expm::expm;
pub use generators::{build_generators, hamiltonians, lowering_matrix, Generators};
pub use operator::{DenseOperator, FockState, OneBodyOperator, SparseVec};
pub use verify::{
    agreement_suite, random_vacuum, random_word, run_verification, AgreementCase, VerifyReport,
    AGREEMENT_TOL, DEFAULT_SEED, DEFAULT_WORD_COUNT, MAX_WORD_LEN,
};
pub use vev::{
    apply_normal_form, apply_word, ground_profile, tensor_power, vacuum_energies, vacuum_state,
    vev_oracle,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("unsupported vacuum: {0}")]
    UnsupportedVacuum(String),
    #[error("truncation: {0}")]
    TruncationWarning(String),
    #[error("mode `{0}` is not part of the oracle configuration")]
    UnknownMode(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl OracleError {
    pub fn name(&self) -> &'static str {
        match self {
            OracleError::DimensionCap { .. } => "DimensionCap",
            OracleError::UnsupportedVacuum(_) => "UnsupportedVacuum",
            OracleError::TruncationWarning(_) => "TruncationWarning",
            OracleError::UnknownMode(_) => "UnknownMode",
            OracleError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}
