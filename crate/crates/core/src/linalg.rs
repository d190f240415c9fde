//! Small dense complex matrices (2x2 through 8x8) and the handful of
//! operations the rest of the crate needs: products, Kronecker products,
//! a cyclic Jacobi Hermitian eigensolver, PSD square roots and partial traces.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::LinalgError;
use crate::tolerances::Tolerances;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. The length must be a perfect
    /// square and every entry finite.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self, LinalgError> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(LinalgError::NotSquare { len: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect::<Vec<_>>();
        let m = Self::from_row_major(data)?;
        if rows.len() != m.dim {
            return Err(LinalgError::NotSquare { len: m.data.len() });
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &z) in diag.iter().enumerate() {
            m[(k, k)] = z;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Outer product |v><v|.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|k| self[(k, k)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    /// Elementwise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.check_same_dim(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.check_same_dim(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn check_same_dim(&self, rhs: &Self) -> Result<(), LinalgError> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(())
    }

    /// U * self * U^dagger
    pub fn conjugate_by(&self, u: &Self) -> Result<Self, LinalgError> {
        u.try_mul(self)?.try_mul(&u.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus of `self - other`. Returns infinity on a
    /// dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max elementwise |m - m^dagger|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += self[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

// Operator forms panic on mismatched dimensions; the `try_*` methods are the
// fallible versions.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

/// Kronecker product: entry `(i*db + k, j*db + l)` is `a[i,j] * b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![ONE, ZERO, ZERO, C64::new(-1.0, 0.0)]).unwrap()
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors stored as columns, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
    pub sweeps: usize,
}

impl HermitianEigenSystem {
    /// V diag(f(lambda)) V^dagger
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            if w == ZERO {
                continue;
            }
            for r in 0..n {
                let vr = v[(r, k)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * v[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| C64::new(x, 0.0))
    }
}

pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<HermitianEigenSystem, LinalgError> {
    hermitian_eigensystem_with(m, &Tolerances::default())
}

/// Cyclic Jacobi for complex Hermitian matrices.
///
/// Each rotation first strips the phase of the pivot `a[p,q]` with a diagonal
/// unitary, then applies the classical real rotation to the resulting real
/// symmetric 2x2 block.
pub fn hermitian_eigensystem_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigenSystem, LinalgError> {
    let defect = m.hermiticity_defect();
    if defect > tol.hermitian {
        return Err(LinalgError::NotHermitian { defect });
    }
    let n = m.dim;
    let mut a = m.clone();
    // symmetrize so round-off in the input does not leak into the rotations
    for r in 0..n {
        a[(r, r)] = C64::new(a[(r, r)].re, 0.0);
        for c in (r + 1)..n {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.jacobi_off_diagonal * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = a.off_diagonal_norm();
        if off < threshold {
            break;
        }
        if sweeps >= tol.jacobi_max_sweeps {
            return Err(LinalgError::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on columns (p, q)
    let ph = phase.conj();
    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = ph * (-s);
    let gqq = ph * c;

    let n = a.dim;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Hermitian square root of a positive semidefinite matrix. Eigenvalues in
/// `[-tol.psd, 0)` are clamped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    psd_sqrt_with(m, &Tolerances::default())
}

pub fn psd_sqrt_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, LinalgError> {
    let eig = hermitian_eigensystem_with(m, tol)?;
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -tol.psd {
            return Err(LinalgError::NegativeEigenvalue { value: min });
        }
    }
    Ok(eig.map_spectrum(|x| C64::new(x.max(0.0).sqrt(), 0.0)))
}

/// Partial trace over every subsystem not listed in `keep`.
///
/// `dims` lists subsystem dimensions with the first subsystem as the most
/// significant index digit. The kept subsystems appear in ascending order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix, LinalgError> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != rho.dim {
        return Err(LinalgError::InvalidSubsystems {
            reason: format!(
                "subsystem dims {:?} do not multiply to matrix dimension {}",
                dims, rho.dim
            ),
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(LinalgError::InvalidSubsystems {
            reason: format!("keep set {:?} invalid for {} subsystems", keep, dims.len()),
        });
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();

    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let env_dim: usize = traced_dims.iter().product();

    // strides of each subsystem in the full index
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let compose = |sys: &[usize], sys_dims: &[usize], mut idx: usize| -> usize {
        let mut full = 0;
        for (pos, &s) in sys.iter().enumerate().rev() {
            let d = sys_dims[pos];
            full += (idx % d) * strides[s];
            idx /= d;
        }
        full
    };

    let mut out = ComplexMatrix::zeros(out_dim);
    for r in 0..out_dim {
        let r_full = compose(&kept, &kept_dims, r);
        for c in 0..out_dim {
            let c_full = compose(&kept, &kept_dims, c);
            let mut acc = ZERO;
            for e in 0..env_dim {
                let e_full = compose(&traced, &traced_dims, e);
                acc += rho[(r_full + e_full, c_full + e_full)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}
