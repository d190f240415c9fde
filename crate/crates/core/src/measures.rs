//! Numeric ground truth for the two correlation measures.
//!
//! Entropies are in bits. The squashed entanglement here is evaluated for the
//! single extension the model builds (the auxiliary qubit E), so it is an
//! upper bound on the true infimum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, HamiltonianSpec};
use crate::error::StateError;
use crate::linalg::{hermitian_eigensystem_with, kron, pauli, psd_sqrt_with, ComplexMatrix};
use crate::states::{initial_state, DensityMatrix, ModelParams};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureName {
    SquashedProxy,
    Concurrence,
}

impl MeasureName {
    pub const ALL: [MeasureName; 2] = [MeasureName::SquashedProxy, MeasureName::Concurrence];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureName::SquashedProxy => "squashed_proxy",
            MeasureName::Concurrence => "concurrence",
        }
    }
}

impl fmt::Display for MeasureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "squashed_proxy" => Ok(MeasureName::SquashedProxy),
            "concurrence" => Ok(MeasureName::Concurrence),
            other => Err(format!("unknown measure `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub name: MeasureName,
    pub value: f64,
    pub params: ModelParams,
}

fn clamped_spectrum(rho: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<f64>, StateError> {
    let eig = hermitian_eigensystem_with(rho, tol)?;
    Ok(eig
        .eigenvalues
        .into_iter()
        .map(|x| if x < tol.eigen_clamp { 0.0 } else { x.min(1.0) })
        .collect())
}

/// -sum lambda log2 lambda, with 0 log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64, StateError> {
    entropy_of(rho.matrix(), &Tolerances::default())
}

fn entropy_of(m: &ComplexMatrix, tol: &Tolerances) -> Result<f64, StateError> {
    Ok(clamped_spectrum(m, tol)?
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum())
}

/// I(A;B|E) = S(AE) + S(BE) - S(ABE) - S(E), qubit order (A, B, E).
pub fn conditional_mutual_information(rho_abe: &DensityMatrix) -> Result<f64, StateError> {
    conditional_mutual_information_with(rho_abe, &Tolerances::default())
}

pub fn conditional_mutual_information_with(rho_abe: &DensityMatrix, tol: &Tolerances) -> Result<f64, StateError> {
    rho_abe.expect_qubits(3)?;
    let s_ae = entropy_of(rho_abe.reduce(&[0, 2])?.matrix(), tol)?;
    let s_be = entropy_of(rho_abe.reduce(&[1, 2])?.matrix(), tol)?;
    let s_e = entropy_of(rho_abe.reduce(&[2])?.matrix(), tol)?;
    let s_abe = entropy_of(rho_abe.matrix(), tol)?;
    let cmi = s_ae + s_be - s_abe - s_e;
    if cmi < -tol.strong_subadditivity {
        return Err(StateError::Invalid {
            reason: format!("conditional mutual information {cmi:e} violates strong subadditivity"),
        });
    }
    Ok(cmi.max(0.0))
}

/// Half the conditional mutual information of the given extension.
pub fn squashed_proxy(rho_abe: &DensityMatrix) -> Result<f64, StateError> {
    squashed_proxy_with(rho_abe, &Tolerances::default())
}

pub fn squashed_proxy_with(rho_abe: &DensityMatrix, tol: &Tolerances) -> Result<f64, StateError> {
    Ok(0.5 * conditional_mutual_information_with(rho_abe, tol)?)
}

/// (sy (x) sy) rho* (sy (x) sy)
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix, StateError> {
    rho.expect_qubits(2)?;
    Ok(spin_flip_matrix(rho.matrix()))
}

fn spin_flip_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&pauli::y(), &pauli::y());
    &(&yy * &m.conj()) * &yy
}

/// Descending square roots of the spectrum of rho * rho_tilde.
///
/// The product is not Hermitian, but it is similar to
/// sqrt(rho) rho_tilde sqrt(rho), which is.
pub fn wootters_lambdas(rho: &DensityMatrix, tol: &Tolerances) -> Result<[f64; 4], StateError> {
    rho.expect_qubits(2)?;
    let root = psd_sqrt_with(rho.matrix(), tol)?;
    let tilde = spin_flip_matrix(rho.matrix());
    let r = &(&root * &tilde) * &root;
    let spectrum = clamped_spectrum(&r, tol)?;
    let mut lam = [0.0; 4];
    for (dst, x) in lam.iter_mut().zip(spectrum.iter().rev()) {
        *dst = x.sqrt();
    }
    Ok(lam)
}

/// lambda1 - lambda2 - lambda3 - lambda4 without the clip at zero. Its sign
/// change marks the onset of concurrence.
pub fn concurrence_margin(rho: &DensityMatrix) -> Result<f64, StateError> {
    concurrence_margin_with(rho, &Tolerances::default())
}

pub fn concurrence_margin_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64, StateError> {
    let l = wootters_lambdas(rho, tol)?;
    Ok(l[0] - l[1] - l[2] - l[3])
}

pub fn concurrence(rho: &DensityMatrix) -> Result<f64, StateError> {
    concurrence_with(rho, &Tolerances::default())
}

pub fn concurrence_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64, StateError> {
    Ok(concurrence_margin_with(rho, tol)?.max(0.0))
}

/// The evolved three-qubit state for a parameter point.
pub fn evolved_state(params: &ModelParams) -> Result<DensityMatrix, StateError> {
    let rho0 = initial_state(params)?;
    evolve(&rho0, &HamiltonianSpec::new(params.hamiltonian, params.j), params.t)
}

/// Build, evolve, and measure one point: the squashed proxy on the evolved
/// three-qubit state and concurrence on its A-B marginal.
pub fn measure_point(params: &ModelParams) -> Result<(MeasureValue, MeasureValue), StateError> {
    measure_point_with(params, &Tolerances::default())
}

pub fn measure_point_with(params: &ModelParams, tol: &Tolerances) -> Result<(MeasureValue, MeasureValue), StateError> {
    let rho = evolved_state(params)?;
    let sq = squashed_proxy_with(&rho, tol)?;
    let c = concurrence_with(&rho.reduce(&[0, 1])?, tol)?;
    Ok((
        MeasureValue {
            name: MeasureName::SquashedProxy,
            value: sq,
            params: *params,
        },
        MeasureValue {
            name: MeasureName::Concurrence,
            value: c,
            params: *params,
        },
    ))
}
