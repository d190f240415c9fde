use serde::{Deserialize, Serialize};

/// Every numeric threshold used by the crate, in one place.
///
/// Library functions without an explicit tolerance argument use
/// `Tolerances::default()`. The analysis entry points take the record as a
/// parameter so a run configuration can override it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max elementwise |m - m^dagger| accepted as Hermitian.
    pub hermitian: f64,
    /// Allowed |trace - 1| for density matrices.
    pub trace: f64,
    /// Most negative eigenvalue accepted (and clamped) as PSD.
    pub psd: f64,
    /// Jacobi stops when the off-diagonal Frobenius norm falls below this
    /// (relative to max(1, ||m||_F)).
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues below this are exact zeros before logs and square roots.
    pub eigen_clamp: f64,
    /// Slack allowed below zero for conditional mutual information.
    pub strong_subadditivity: f64,
    /// Concurrence below this counts as zero for ESD zones.
    pub zero_concurrence: f64,
    /// Final bracket width for root refinement.
    pub root_bracket: f64,
    pub root_max_iterations: usize,
    /// Points in the pre-scan used to bracket crossings.
    pub prescan_points: usize,
    /// Closed-form vs numeric agreement threshold.
    pub compare_pass: f64,
    /// Largest imaginary part accepted on a closed-form value.
    pub imaginary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            trace: 1e-10,
            psd: 1e-10,
            jacobi_off_diagonal: 1e-14,
            jacobi_max_sweeps: 100,
            eigen_clamp: 1e-12,
            strong_subadditivity: 1e-9,
            zero_concurrence: 1e-7,
            root_bracket: 1e-6,
            root_max_iterations: 200,
            prescan_points: 200,
            compare_pass: 1e-6,
            imaginary: 1e-9,
        }
    }
}
