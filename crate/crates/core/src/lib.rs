//! Concurrence and squashed-entanglement dynamics for Werner and MEMS
//! two-qubit states coupled to an auxiliary qubit through a diagonal spin
//! bond, plus direct evaluators for the published closed-form expressions
//! and an auditing comparator between the two.

pub mod analysis;
pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod output;
pub mod states;
pub mod tolerances;

#[cfg(test)]
mod oracle;

pub use dynamics::{HamiltonianKind, HamiltonianSpec};
pub use error::{AnalysisError, ClosedFormError, LinalgError, StateError};
pub use linalg::ComplexMatrix;
pub use measures::{MeasureName, MeasureValue};
pub use states::{DensityMatrix, ModelParams, StateFamily};
pub use tolerances::Tolerances;
