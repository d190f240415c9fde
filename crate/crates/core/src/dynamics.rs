//! The two spin Hamiltonians on the B-E bond and unitary evolution of
//! three-qubit density matrices (hbar = 1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::StateError;
use crate::linalg::{hermitian_eigensystem, kron, pauli, ComplexMatrix, C64};
use crate::states::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianKind {
    /// -j sz(x)sz
    H1,
    /// j [sz(x)sz - (sz(x)sz)^2]
    H2,
}

impl HamiltonianKind {
    pub const ALL: [HamiltonianKind; 2] = [HamiltonianKind::H1, HamiltonianKind::H2];

    pub fn as_str(self) -> &'static str {
        match self {
            HamiltonianKind::H1 => "h1",
            HamiltonianKind::H2 => "h2",
        }
    }
}

impl fmt::Display for HamiltonianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HamiltonianKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h1" => Ok(HamiltonianKind::H1),
            "h2" => Ok(HamiltonianKind::H2),
            other => Err(format!("unknown hamiltonian `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub j: f64,
}

impl HamiltonianSpec {
    pub fn new(kind: HamiltonianKind, j: f64) -> Self {
        Self { kind, j }
    }
}

/// Two-qubit bond operator acting on (B, E).
pub fn bond_matrix(spec: &HamiltonianSpec) -> ComplexMatrix {
    let zz = kron(&pauli::z(), &pauli::z());
    match spec.kind {
        HamiltonianKind::H1 => zz.scale_real(-spec.j),
        HamiltonianKind::H2 => {
            let zz2 = &zz * &zz;
            (&zz - &zz2).scale_real(spec.j)
        }
    }
}

/// I_A (x) h_BE in the (A, B, E) basis.
pub fn hamiltonian_matrix(spec: &HamiltonianSpec) -> ComplexMatrix {
    kron(&ComplexMatrix::identity(2), &bond_matrix(spec))
}

/// exp(-i H t), computed through the Hermitian eigendecomposition of H.
pub fn unitary_of(spec: &HamiltonianSpec, t: f64) -> ComplexMatrix {
    let h = hamiltonian_matrix(spec);
    // H is real diagonal for both kinds, so Jacobi returns immediately; the
    // general path is kept for non-diagonal couplings.
    let eig = hermitian_eigensystem(&h).expect("spin Hamiltonians are Hermitian");
    eig.map_spectrum(|e| C64::from_polar(1.0, -e * t))
}

/// rho(t) = U rho(0) U^dagger.
pub fn evolve(rho0: &DensityMatrix, spec: &HamiltonianSpec, t: f64) -> Result<DensityMatrix, StateError> {
    rho0.expect_qubits(3)?;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let u = unitary_of(spec, t);
    let m = rho0.matrix().conjugate_by(&u)?;
    Ok(DensityMatrix::from_trusted(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigensystem, I};
    use crate::oracle;
    use crate::states::{environment_qubit, tripartite_initial, werner};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn random_state(seed: u64) -> DensityMatrix {
        let mut rng = oracle::rng(seed);
        DensityMatrix::new(oracle::random_density(&mut rng, 8)).unwrap()
    }

    #[test]
    fn hamiltonian_diagonals() {
        let h1 = hamiltonian_matrix(&HamiltonianSpec::new(HamiltonianKind::H1, 1.0));
        assert_eq!(
            h1,
            ComplexMatrix::from_real_diagonal(&[-1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0])
        );
        let h2 = hamiltonian_matrix(&HamiltonianSpec::new(HamiltonianKind::H2, 1.0));
        assert_eq!(
            h2,
            ComplexMatrix::from_real_diagonal(&[0.0, -2.0, -2.0, 0.0, 0.0, -2.0, -2.0, 0.0])
        );
        let zero = hamiltonian_matrix(&HamiltonianSpec::new(HamiltonianKind::H1, 0.0));
        assert_eq!(zero.frobenius_norm(), 0.0);
    }

    #[test]
    fn unitary_at_zero_and_quarter_turn() {
        let spec = HamiltonianSpec::new(HamiltonianKind::H1, 1.0);
        assert!(unitary_of(&spec, 0.0).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
        // h = -1 -> e^{+i pi/2} = i ; h = +1 -> e^{-i pi/2} = -i
        let u = unitary_of(&spec, PI / 2.0);
        let pattern = [1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0];
        let want: Vec<C64> = pattern.iter().map(|&s| I * s).collect();
        assert!(u.max_abs_diff(&ComplexMatrix::from_diagonal(&want)) < 1e-14);
    }

    #[test]
    fn evolve_fixed_points() {
        let spec = HamiltonianSpec::new(HamiltonianKind::H1, 0.7);
        let rho = random_state(3);
        assert_eq!(evolve(&rho, &spec, 0.0).unwrap(), rho);
        let diag = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[
            0.1, 0.2, 0.05, 0.15, 0.1, 0.1, 0.2, 0.1,
        ]))
        .unwrap();
        for t in [0.3, 1.0, 5.0] {
            assert!(evolve(&diag, &spec, t).unwrap().matrix().max_abs_diff(diag.matrix()) < 1e-15);
        }
        let two = werner(0.5).unwrap();
        assert!(matches!(
            evolve(&two, &spec, 1.0),
            Err(StateError::WrongQubitCount { .. })
        ));
    }

    #[test]
    fn werner_coherence_follows_phase_bookkeeping() {
        // Each entry (k, l) picks up u_k conj(u_l); tracing E leaves
        // <01|rho_AB|10> = -(gamma/2)(alpha^2 e^{-2ijt} + (1-alpha^2) e^{2ijt}).
        for &(gamma, alpha, jt) in &[(0.8, 0.3, 0.4), (0.5, 0.9, 1.3), (1.0, 0.600001, 0.600001)] {
            let rho0 = tripartite_initial(&werner(gamma).unwrap(), &environment_qubit(alpha).unwrap()).unwrap();
            let rho = evolve(&rho0, &HamiltonianSpec::new(HamiltonianKind::H1, 1.0), jt).unwrap();
            let ab = rho.reduce(&[0, 1]).unwrap();
            let a2 = alpha * alpha;
            let want = (C64::from_polar(a2, -2.0 * jt) + C64::from_polar(1.0 - a2, 2.0 * jt)) * (-gamma / 2.0);
            assert!((ab.matrix()[(1, 2)] - want).norm() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn unitary_is_unitary(j in -3.0f64..3.0, t in -5.0f64..5.0, h2 in any::<bool>()) {
            let kind = if h2 { HamiltonianKind::H2 } else { HamiltonianKind::H1 };
            let u = unitary_of(&HamiltonianSpec::new(kind, j), t);
            prop_assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
        }

        #[test]
        fn evolve_preserves_spectrum(seed in any::<u64>(), j in -2.0f64..2.0, t in 0.0f64..4.0) {
            let rho = random_state(seed);
            let out = evolve(&rho, &HamiltonianSpec::new(HamiltonianKind::H1, j), t).unwrap();
            let before = hermitian_eigensystem(rho.matrix()).unwrap().eigenvalues;
            let after = hermitian_eigensystem(out.matrix()).unwrap().eigenvalues;
            for (a, b) in before.iter().zip(&after) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            prop_assert!((out.purity() - rho.purity()).abs() < 1e-10);
        }

        #[test]
        fn h2_is_h1_with_negated_coupling(seed in any::<u64>(), j in -2.0f64..2.0, t in 0.0f64..4.0) {
            let rho = random_state(seed);
            let a = evolve(&rho, &HamiltonianSpec::new(HamiltonianKind::H2, j), t).unwrap();
            let b = evolve(&rho, &HamiltonianSpec::new(HamiltonianKind::H1, -j), t).unwrap();
            prop_assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }

        #[test]
        fn conjugation_covariance(seed in any::<u64>(), j in -2.0f64..2.0, t in 0.0f64..4.0) {
            let rho = random_state(seed);
            let conj = DensityMatrix::new(rho.matrix().conj()).unwrap();
            let lhs = evolve(&conj, &HamiltonianSpec::new(HamiltonianKind::H1, j), t).unwrap();
            let rhs = evolve(&rho, &HamiltonianSpec::new(HamiltonianKind::H1, -j), t).unwrap();
            prop_assert!(lhs.matrix().max_abs_diff(&rhs.matrix().conj()) < 1e-12);
        }
    }
}
