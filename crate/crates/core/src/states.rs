//! Werner and MEMS two-qubit states, the environment qubit, and the
//! tripartite product states built from them.
//!
//! Qubit order is (A, B, E) with E the least significant index bit, so the
//! computational basis state |a b e> sits at index `4a + 2b + e`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::HamiltonianKind;
use crate::error::StateError;
use crate::linalg::{hermitian_eigensystem_with, kron, ComplexMatrix, C64, ZERO};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateFamily {
    Werner,
    Mems,
}

impl StateFamily {
    pub const ALL: [StateFamily; 2] = [StateFamily::Werner, StateFamily::Mems];

    pub fn as_str(self) -> &'static str {
        match self {
            StateFamily::Werner => "werner",
            StateFamily::Mems => "mems",
        }
    }

    /// The two-qubit state of this family at mixing parameter `gamma`.
    pub fn bipartite(self, gamma: f64) -> Result<DensityMatrix, StateError> {
        match self {
            StateFamily::Werner => werner(gamma),
            StateFamily::Mems => mems(gamma),
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "werner" => Ok(StateFamily::Werner),
            "mems" => Ok(StateFamily::Mems),
            other => Err(format!("unknown state family `{other}`")),
        }
    }
}

/// One point of the model: state family, Hamiltonian, mixing parameter
/// `gamma`, environment amplitude `alpha`, coupling `j` and time `t`.
///
/// Reported results key on the product `jt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub state: StateFamily,
    pub hamiltonian: HamiltonianKind,
    pub gamma: f64,
    pub alpha: f64,
    pub j: f64,
    pub t: f64,
}

impl ModelParams {
    /// Unit coupling with `t = jt`.
    pub fn new(state: StateFamily, hamiltonian: HamiltonianKind, gamma: f64, alpha: f64, jt: f64) -> Self {
        Self {
            state,
            hamiltonian,
            gamma,
            alpha,
            j: 1.0,
            t: jt,
        }
    }

    pub fn jt(&self) -> f64 {
        self.j * self.t
    }

    pub fn validate(&self) -> Result<(), StateError> {
        check_unit("gamma", self.gamma)?;
        check_unit("alpha", self.alpha)?;
        if !self.j.is_finite() {
            return Err(StateError::NotFinite { name: "j" });
        }
        if !self.t.is_finite() || !self.jt().is_finite() {
            return Err(StateError::NotFinite { name: "t" });
        }
        Ok(())
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<(), StateError> {
    if !value.is_finite() {
        return Err(StateError::NotFinite { name });
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(StateError::OutOfRange { name, value });
    }
    Ok(())
}

/// A validated density matrix on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, StateError> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self, StateError> {
        let n_qubits = qubit_count(matrix.dim())?;
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(StateError::Invalid {
                reason: format!("trace {tr} differs from 1"),
            });
        }
        let eig = hermitian_eigensystem_with(&matrix, tol)?;
        let min = eig.eigenvalues[0];
        if min < -tol.psd {
            return Err(StateError::Invalid {
                reason: format!("negative eigenvalue {min:e}"),
            });
        }
        Ok(Self { matrix, n_qubits })
    }

    /// For matrices that are density matrices by construction (unitary
    /// images, partial traces and products of validated states).
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.dim().trailing_zeros() as usize;
        debug_assert_eq!(1usize << n_qubits, matrix.dim());
        Self { matrix, n_qubits }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn expect_qubits(&self, expected: usize) -> Result<(), StateError> {
        if self.n_qubits != expected {
            return Err(StateError::WrongQubitCount {
                expected,
                dim: self.matrix.dim(),
            });
        }
        Ok(())
    }

    /// Reduced state on the listed qubits (ascending order kept).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix, StateError> {
        let dims = vec![2; self.n_qubits];
        let m = crate::linalg::partial_trace(&self.matrix, &dims, keep)?;
        Ok(Self::from_trusted(m))
    }
}

fn qubit_count(dim: usize) -> Result<usize, StateError> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(StateError::Invalid {
            reason: format!("dimension {dim} is not a qubit register"),
        });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// MEMS diagonal weight: 1/3 below gamma = 2/3, gamma/2 from there on.
pub fn g_of_gamma(gamma: f64) -> Result<f64, StateError> {
    check_unit("gamma", gamma)?;
    Ok(mems_delta(gamma))
}

pub(crate) fn mems_delta(gamma: f64) -> f64 {
    if gamma < 2.0 / 3.0 {
        1.0 / 3.0
    } else {
        gamma / 2.0
    }
}

/// gamma |psi-><psi-| + (1 - gamma) I/4 with |psi-> = (|01> - |10>)/sqrt(2).
pub fn werner(gamma: f64) -> Result<DensityMatrix, StateError> {
    check_unit("gamma", gamma)?;
    let mut m = ComplexMatrix::identity(4).scale_real((1.0 - gamma) / 4.0);
    let half = C64::new(gamma / 2.0, 0.0);
    m[(1, 1)] += half;
    m[(2, 2)] += half;
    m[(1, 2)] -= half;
    m[(2, 1)] -= half;
    Ok(DensityMatrix::from_trusted(m))
}

pub fn mems(gamma: f64) -> Result<DensityMatrix, StateError> {
    check_unit("gamma", gamma)?;
    Ok(DensityMatrix::from_trusted(mems_matrix(gamma, mems_delta(gamma))))
}

fn mems_matrix(gamma: f64, delta: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = C64::new(delta, 0.0);
    m[(1, 1)] = C64::new(1.0 - 2.0 * delta, 0.0);
    m[(3, 3)] = C64::new(delta, 0.0);
    m[(0, 3)] = C64::new(gamma / 2.0, 0.0);
    m[(3, 0)] = C64::new(gamma / 2.0, 0.0);
    m
}

/// |E><E| for |E> = alpha|0> + sqrt(1 - alpha^2)|1>.
pub fn environment_qubit(alpha: f64) -> Result<DensityMatrix, StateError> {
    check_unit("alpha", alpha)?;
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let v = [C64::new(alpha, 0.0), C64::new(beta, 0.0)];
    Ok(DensityMatrix::from_trusted(ComplexMatrix::projector(&v)))
}

/// rho_ab (x) rho_e in qubit order (A, B, E).
pub fn tripartite_initial(rho_ab: &DensityMatrix, rho_e: &DensityMatrix) -> Result<DensityMatrix, StateError> {
    rho_ab.expect_qubits(2)?;
    rho_e.expect_qubits(1)?;
    Ok(DensityMatrix::from_trusted(kron(rho_ab.matrix(), rho_e.matrix())))
}

/// rho_W(0) or rho_M(0) for the given parameters.
pub fn initial_state(params: &ModelParams) -> Result<DensityMatrix, StateError> {
    params.validate()?;
    let ab = params.state.bipartite(params.gamma)?;
    let e = environment_qubit(params.alpha)?;
    tripartite_initial(&ab, &e)
}

/// Singlet amplitudes in the two-qubit computational basis.
pub fn singlet() -> [C64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [ZERO, C64::new(s, 0.0), C64::new(-s, 0.0), ZERO]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigensystem, partial_trace};
    use crate::oracle;
    use proptest::prelude::*;

    fn gamma_grid() -> impl Iterator<Item = f64> {
        (0..=100).map(|k| k as f64 / 100.0)
    }

    #[test]
    fn g_of_gamma_branches() {
        assert_eq!(g_of_gamma(0.0).unwrap(), 1.0 / 3.0);
        assert!((g_of_gamma(2.0 / 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(g_of_gamma(1.0).unwrap(), 0.5);
        assert!(matches!(
            g_of_gamma(1.5),
            Err(StateError::OutOfRange { name: "gamma", .. })
        ));
        assert!(matches!(g_of_gamma(f64::NAN), Err(StateError::NotFinite { .. })));
    }

    #[test]
    fn werner_limits() {
        let w0 = werner(0.0).unwrap();
        assert!(w0.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);
        let w1 = werner(1.0).unwrap();
        let singlet = ComplexMatrix::projector(&singlet());
        assert!(w1.matrix().max_abs_diff(&singlet) < 1e-15);
        assert!((w1.matrix()[(1, 2)].re + 0.5).abs() < 1e-15);
        assert!(werner(-0.1).is_err());
    }

    #[test]
    fn werner_half_spectrum_matches_characteristic_polynomial() {
        // det(x - rho) must be (x - 1/8)^3 (x - 5/8)
        let rho = werner(0.5).unwrap();
        let poly = oracle::char_poly(rho.matrix());
        let (a, b) = (0.125, 0.625);
        let expected = [
            1.0,
            -(3.0 * a + b),
            3.0 * a * a + 3.0 * a * b,
            -(a * a * a + 3.0 * a * a * b),
            a * a * a * b,
        ];
        for (c, e) in poly.iter().zip(expected) {
            assert!((c.re - e).abs() < 1e-14 && c.im.abs() < 1e-14);
        }
        let eig = hermitian_eigensystem(rho.matrix()).unwrap();
        for (x, e) in eig.eigenvalues.iter().zip([a, a, a, b]) {
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn mems_limits() {
        let m1 = mems(1.0).unwrap();
        let bell = ComplexMatrix::from_real_rows(&[
            &[0.5, 0.0, 0.0, 0.5],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.5, 0.0, 0.0, 0.5],
        ])
        .unwrap();
        assert!(m1.matrix().max_abs_diff(&bell) < 1e-15);
        let m0 = mems(0.0).unwrap();
        let third = 1.0 / 3.0;
        assert!(
            m0.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[third, third, 0.0, third]))
                < 1e-15
        );
    }

    #[test]
    fn mems_continuous_at_two_thirds() {
        let g = 2.0 / 3.0;
        let left = mems_matrix(g, 1.0 / 3.0);
        let right = mems_matrix(g, g / 2.0);
        assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn constructors_emit_valid_density_matrices() {
        for g in gamma_grid() {
            for fam in StateFamily::ALL {
                let rho = fam.bipartite(g).unwrap();
                DensityMatrix::new(rho.matrix().clone()).unwrap();
            }
        }
    }

    #[test]
    fn environment_qubit_cases() {
        let e1 = environment_qubit(1.0).unwrap();
        assert!(
            e1.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0]))
                < 1e-15
        );
        let e0 = environment_qubit(0.0).unwrap();
        assert!(
            e0.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0]))
                < 1e-15
        );
        let eh = environment_qubit(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        for z in eh.matrix().entries() {
            assert!((z.re - 0.5).abs() < 1e-15 && z.im == 0.0);
        }
        for k in 0..=100 {
            let e = environment_qubit(k as f64 / 100.0).unwrap();
            assert!((e.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tripartite_product_structure() {
        let ab = mems(0.4).unwrap();
        let e = environment_qubit(0.3).unwrap();
        let abe = tripartite_initial(&ab, &e).unwrap();
        assert_eq!(abe.n_qubits(), 3);
        assert!((abe.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!(
            partial_trace(abe.matrix(), &[2, 2, 2], &[0, 1])
                .unwrap()
                .max_abs_diff(ab.matrix())
                < 1e-15
        );
        assert!(
            partial_trace(abe.matrix(), &[2, 2, 2], &[2])
                .unwrap()
                .max_abs_diff(e.matrix())
                < 1e-15
        );
        assert!(matches!(
            tripartite_initial(&e, &ab),
            Err(StateError::WrongQubitCount { expected: 2, .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(4)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
        let ok = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.25, 0.75])).unwrap();
        assert_eq!(ok.n_qubits(), 1);
    }

    proptest! {
        #[test]
        fn werner_is_u_tensor_u_invariant(seed in any::<u64>(), gamma in 0.0f64..=1.0) {
            let mut rng = oracle::rng(seed);
            let u = oracle::random_unitary(&mut rng, 2);
            let uu = kron(&u, &u);
            let rho = werner(gamma).unwrap();
            let turned = rho.matrix().conjugate_by(&uu).unwrap();
            prop_assert!(turned.max_abs_diff(rho.matrix()) < 1e-10);
        }
    }
}
