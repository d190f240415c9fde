//! Test-only reference computations that share no code path with the
//! implementations they check.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    ComplexMatrix::from_row_major(data).unwrap()
}

/// A^dagger A normalized to unit trace.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(rng, dim);
    let m = &a.adjoint() * &a;
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// Haar-ish unitary by Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(rng, dim);
    let mut cols: Vec<Vec<C64>> = (0..dim).map(|c| (0..dim).map(|r| a[(r, c)]).collect()).collect();
    for k in 0..dim {
        for j in 0..k {
            let proj: C64 = (0..dim).map(|r| cols[j][r].conj() * cols[k][r]).sum();
            let (done, rest) = cols.split_at_mut(k);
            for (x, y) in rest[0].iter_mut().zip(&done[j]) {
                *x -= proj * y;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[k].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(dim);
    for c in 0..dim {
        for r in 0..dim {
            u[(r, c)] = cols[c][r];
        }
    }
    u
}

/// Coefficients of det(x I - m), highest degree first, by Faddeev-LeVerrier.
pub fn char_poly(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.dim();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut mk = ComplexMatrix::zeros(n);
    let id = ComplexMatrix::identity(n);
    for k in 1..=n {
        let shifted = &mk + &id.scale(*coeffs.last().unwrap());
        mk = m * &shifted;
        let ck = -mk.trace() / (k as f64);
        coeffs.push(ck);
    }
    coeffs
}

/// Polynomial roots by Durand-Kerner iteration.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |x: C64| monic.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

pub fn char_poly_roots(m: &ComplexMatrix) -> Vec<C64> {
    poly_roots(&char_poly(m))
}

/// Concurrence of an X-shaped two-qubit state:
/// 2 max(0, |r03| - sqrt(r11 r22), |r12| - sqrt(r00 r33)).
pub fn x_state_concurrence(rho: &ComplexMatrix) -> f64 {
    let d = |k: usize| rho[(k, k)].re.max(0.0);
    let a = rho[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let b = rho[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    2.0 * a.max(b).max(0.0)
}

/// Wootters concurrence with the spectrum of rho * rho_tilde taken from the
/// characteristic polynomial of the non-Hermitian product.
pub fn wootters_by_char_poly(rho: &ComplexMatrix) -> f64 {
    let yy = crate::linalg::kron(&crate::linalg::pauli::y(), &crate::linalg::pauli::y());
    let tilde = &(&yy * &rho.conj()) * &yy;
    let prod = rho * &tilde;
    let mut lam: Vec<f64> = char_poly_roots(&prod).iter().map(|z| z.re.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// Shannon entropy in bits.
pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}
