//! Direct evaluation of the published closed-form expressions for the
//! squashed entanglement and for the spectrum of rho * rho_tilde, for both
//! state families under both Hamiltonians.
//!
//! Every expression is evaluated as printed, in complex arithmetic, with
//! natural logarithms and `0 log 0 = 0`. The state parameters are real, so
//! conjugation only acts on sub-expressions containing the phase `a`.
//! Nothing here is rescaled or patched; disagreement with the numeric
//! pipeline is reported by [`compare`].

pub mod compare;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::HamiltonianKind;
use crate::error::ClosedFormError;
use crate::states::{mems_delta, ModelParams, StateFamily};
use crate::tolerances::Tolerances;

pub use compare::{compare_closed_vs_numeric, DeviationRow, DiscrepancyReport, MeasureDiscrepancy};

/// The two numeric constants the formulas carry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormulaConstants {
    /// Prefactor in front of every log term (0.180337 as printed, which is
    /// 1/(8 ln 2) to six digits).
    pub b: f64,
    pub b_prime: f64,
}

impl FormulaConstants {
    pub const PRINTED: FormulaConstants = FormulaConstants {
        b: 0.180337,
        b_prime: 0.333333,
    };
}

impl Default for FormulaConstants {
    fn default() -> Self {
        Self::PRINTED
    }
}

/// Symbols shared by all formulas, evaluated at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolTable {
    /// e^{2ijt}
    pub a: C64,
    pub a_inv: C64,
    pub b: f64,
    pub b_prime: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub delta: f64,
    /// 1 - gamma
    pub f: f64,
    /// 1 - gamma^2
    pub f_prime: f64,
    /// 1 + gamma* (gamma real)
    pub f_2prime: f64,
    /// 1 + gamma
    pub f_3prime: f64,
    /// 1 - gamma*
    pub f_4prime: f64,
    /// 1 - alpha^2
    pub g: f64,
    /// 1 + a^4
    pub g_prime: C64,
    /// 1 - delta
    pub h: f64,
    /// 1 - 2 delta
    pub h_prime: f64,
    /// 0.25 + 0.75 gamma
    pub v: f64,
    /// gamma - 2 delta
    pub m: f64,
    /// gamma + 2 delta
    pub m_prime: f64,
    /// delta - gamma/2
    pub n: f64,
    /// delta + gamma/2
    pub n_prime: f64,
    pub werner: WernerSymbols,
    pub mems: MemsSymbols,
}

/// Werner-state symbols under H1 (entropy part: G, H, c, c', d, d';
/// spectrum part: X, Y, Z, p, p').
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerSymbols {
    pub root_g: C64,
    pub root_h: C64,
    pub c: C64,
    pub c_prime: C64,
    pub d: C64,
    pub d_prime: C64,
    pub x: C64,
    pub y: C64,
    pub z: C64,
    pub p: C64,
    pub p_prime: C64,
}

/// MEMS symbols under H1 (entropy part: P, Q, k, k', l, l'; spectrum
/// part: R, S, q, q', w) plus T from the H2 spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemsSymbols {
    pub root_p: C64,
    pub root_q: C64,
    pub k: C64,
    pub k_prime: C64,
    pub l: C64,
    pub l_prime: C64,
    pub r: C64,
    pub s: C64,
    pub q: C64,
    pub q_prime: C64,
    pub w: C64,
    pub t_cross: f64,
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn eval_symbols(params: &ModelParams) -> SymbolTable {
    eval_symbols_with(params, &FormulaConstants::PRINTED)
}

pub fn eval_symbols_with(params: &ModelParams, consts: &FormulaConstants) -> SymbolTable {
    let gamma = params.gamma;
    let alpha = params.alpha;
    let delta = mems_delta(gamma);
    let a = C64::from_polar(1.0, 2.0 * params.jt());
    let ai = a.conj();
    let a2 = a * a;
    let al2 = alpha * alpha;

    let f = 1.0 - gamma;
    let f_prime = 1.0 - gamma * gamma;
    let f_2prime = 1.0 + gamma;
    let f_3prime = 1.0 + gamma;
    let f_4prime = 1.0 - gamma;
    let g = 1.0 - al2;
    let g_prime = re(1.0) + a.powu(4);
    let h = 1.0 - delta;
    let h_prime = 1.0 - 2.0 * delta;
    let v = 0.25 + 0.75 * gamma;

    // Werner, entropy
    let root_g = (g_prime * (al2 * g) + a2 * (1.0 - 2.0 * al2 * g)).sqrt();
    let root_h = (g_prime * (al2 * f_prime * g) + a2 * (1.0 - 2.0 * al2 * f_prime * g)).sqrt();

    // Werner, spectrum
    let x = re(al2 * f + g * f).conj() * 0.25;
    let y = (a * (al2 * gamma) + ai * (g * gamma)).conj() * -0.5;
    let z = (ai * (al2 * gamma) + a * (g * gamma)).conj() * -0.5;
    let p = (z + y * al2 - z * al2) * (-4.0 * gamma) - a2 * (4.0 * gamma) * (y - y * al2 + z * al2)
        + a * (f_2prime * f_3prime);
    let bracket =
        g_prime * (4.0 * al2 * gamma * gamma * g) - a2 * (1.0 + 2.0 * gamma - (3.0 - 8.0 * al2 * g) * gamma * gamma);
    let p_prime = (p * p - 16.0 * bracket * (y * z - f_2prime * f_2prime / 16.0)).sqrt();

    // MEMS, entropy
    let root_p = (a2 * (0.25 - (0.5 + 2.0 * al2 * g) * delta + (0.25 + 4.0 * al2 * g) * delta * delta)
        + g_prime * (al2 * delta * g * h_prime))
        .sqrt();
    let root_q = (g_prime * (4.0 * al2 * h * delta * g) + a2 * (1.0 - 8.0 * al2 * g * h * delta)).sqrt();

    // MEMS, spectrum
    let r = (a * (al2 * gamma) + ai * (g * gamma)).conj() * (0.5 * gamma);
    let s = (ai * (al2 * gamma) + a * (g * gamma)).conj() * (0.5 * gamma);
    let q = s + r * al2 - s * al2 + a2 * (r - r * al2 + s * al2) + a * (4.0 * delta * delta);
    let w = g_prime * (al2 * gamma * gamma * g) + a2 * ((1.0 - 2.0 * al2 * g) * gamma * gamma - 4.0 * delta * delta);
    let u1 = (a * (0.5 * al2 * gamma) + ai * (0.5 * g * gamma)).conj();
    let u2 = (ai * (0.5 * al2 * gamma) + a * (0.5 * g * gamma)).conj();
    let q_prime = (-w * u1 * u2 + w * (delta * delta) + 0.25 * q * q).sqrt();

    SymbolTable {
        a,
        a_inv: ai,
        b: consts.b,
        b_prime: consts.b_prime,
        gamma,
        alpha,
        delta,
        f,
        f_prime,
        f_2prime,
        f_3prime,
        f_4prime,
        g,
        g_prime,
        h,
        h_prime,
        v,
        m: gamma - 2.0 * delta,
        m_prime: gamma + 2.0 * delta,
        n: delta - 0.5 * gamma,
        n_prime: 0.5 * gamma + delta,
        werner: WernerSymbols {
            root_g,
            root_h,
            c: 0.5 - 0.5 * ai * root_g,
            c_prime: 0.5 + 0.5 * ai * root_g,
            d: 0.25 - 0.25 * ai * root_h,
            d_prime: 0.25 + 0.25 * ai * root_h,
            x,
            y,
            z,
            p,
            p_prime,
        },
        mems: MemsSymbols {
            root_p,
            root_q,
            k: 0.5 - 0.5 * ai * root_q,
            k_prime: 0.5 + 0.5 * ai * root_q,
            l: 0.5 - ai * root_p - 0.5 * delta,
            l_prime: 0.5 + ai * root_p - 0.5 * delta,
            r,
            s,
            q,
            q_prime,
            w,
            t_cross: 2.0 * gamma * delta,
        },
    }
}

/// A closed-form value before discarding its imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedScalar {
    pub value: f64,
    pub imag: f64,
}

impl From<C64> for ClosedScalar {
    fn from(z: C64) -> Self {
        Self {
            value: z.re,
            imag: z.im,
        }
    }
}

/// The four printed spectrum entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumQuadruple {
    pub entries: [C64; 4],
}

impl SpectrumQuadruple {
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Square roots sorted descending, then max(0, l1 - l2 - l3 - l4).
    /// Entries must be nonnegative reals within `tol`.
    pub fn concurrence(&self, tol: f64) -> Result<f64, ClosedFormError> {
        let mut roots = [0.0; 4];
        for (index, (z, dst)) in self.entries.iter().zip(roots.iter_mut()).enumerate() {
            if z.im.abs() > tol || z.re < -tol {
                return Err(ClosedFormError::ComplexSpectrum {
                    index,
                    re: z.re,
                    im: z.im,
                });
            }
            *dst = z.re.max(0.0).sqrt();
        }
        roots.sort_by(|x, y| y.total_cmp(x));
        Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
    }
}

/// Evaluator bundling the formula constants with the tolerances it uses.
#[derive(Debug, Clone, Default)]
pub struct ClosedForms {
    pub constants: FormulaConstants,
    pub tol: Tolerances,
}

/// coef * ln(arg), with 0 ln 0 = 0. Zero or negative-real arguments under a
/// live coefficient are domain violations.
fn xlog(coef: C64, arg: C64, term: &'static str) -> Result<C64, ClosedFormError> {
    const ARG_ZERO: f64 = 1e-12;
    const COEF_ZERO: f64 = 1e-9;
    if arg.norm() <= ARG_ZERO {
        if coef.norm() <= COEF_ZERO {
            return Ok(C64::new(0.0, 0.0));
        }
        return Err(ClosedFormError::DomainViolation {
            term,
            argument: format!("zero ({arg}) with coefficient {coef}"),
        });
    }
    if arg.im.abs() <= ARG_ZERO && arg.re < 0.0 {
        return Err(ClosedFormError::DomainViolation {
            term,
            argument: format!("negative value {}", arg.re),
        });
    }
    Ok(coef * arg.ln())
}

impl ClosedForms {
    pub fn new(constants: FormulaConstants, tol: Tolerances) -> Self {
        Self { constants, tol }
    }

    pub fn symbols(&self, params: &ModelParams) -> SymbolTable {
        eval_symbols_with(params, &self.constants)
    }

    pub fn sqe(&self, params: &ModelParams) -> Result<ClosedScalar, ClosedFormError> {
        params.validate()?;
        let s = self.symbols(params);
        let z = match (params.state, params.hamiltonian) {
            (StateFamily::Werner, HamiltonianKind::H1) => werner_h1_sqe(&s)?,
            (StateFamily::Mems, HamiltonianKind::H1) => mems_h1_sqe(&s)?,
            (StateFamily::Werner, HamiltonianKind::H2) => werner_h2_sqe(&s)?,
            (StateFamily::Mems, HamiltonianKind::H2) => mems_h2_sqe(&s)?,
        };
        Ok(z.into())
    }

    pub fn spectrum(&self, params: &ModelParams) -> Result<SpectrumQuadruple, ClosedFormError> {
        params.validate()?;
        let s = self.symbols(params);
        let zero = C64::new(0.0, 0.0);
        let entries = match (params.state, params.hamiltonian) {
            (StateFamily::Werner, HamiltonianKind::H1) => {
                let w = &s.werner;
                let first = w.x * (s.f / 4.0);
                [
                    first,
                    first,
                    s.a_inv * (w.p - w.p_prime) / 16.0,
                    s.a_inv * (w.p + w.p_prime) / 16.0,
                ]
            }
            (StateFamily::Mems, HamiltonianKind::H1) => {
                let m = &s.mems;
                [
                    zero,
                    zero,
                    0.25 * s.a_inv * (m.q - 2.0 * m.q_prime),
                    0.25 * s.a_inv * (m.q + 2.0 * m.q_prime),
                ]
            }
            (StateFamily::Werner, HamiltonianKind::H2) => {
                let small = re(s.f * s.f_4prime / 16.0);
                let g = s.gamma;
                [small, small, small, re((1.0 + 3.0 * g) * (1.0 + 3.0 * g) / 16.0)]
            }
            (StateFamily::Mems, HamiltonianKind::H2) => {
                let (g, d, t) = (s.gamma, s.delta, s.mems.t_cross);
                [
                    zero,
                    zero,
                    re(0.25 * g * g + d * d - 0.5 * t),
                    re(0.5 * (t + 0.5 * g * g + 2.0 * d * d)),
                ]
            }
        };
        Ok(SpectrumQuadruple { entries })
    }

    pub fn concurrence(&self, params: &ModelParams) -> Result<f64, ClosedFormError> {
        self.spectrum(params)?.concurrence(self.tol.imaginary)
    }
}

fn werner_h1_sqe(s: &SymbolTable) -> Result<C64, ClosedFormError> {
    let w = &s.werner;
    let a = s.a;
    let b = s.b;
    let inner = xlog(a - w.root_g, w.c, "(a-G) log c")? + xlog(a + w.root_g, w.c_prime, "(a+G) log c'")?
        - xlog(a - w.root_h, w.d, "(a-H) log d")?
        - xlog(a + w.root_h, w.d_prime, "(a+H) log d'")?;
    let tail =
        xlog(re(s.f), re(0.25 * s.f), "f log(0.25 f)")? + xlog(re(s.b_prime + s.gamma), re(s.v), "(b'+gamma) log v")?;
    Ok(re(0.5) + 2.0 * s.a_inv * b * inner + 3.0 * b * tail)
}

fn mems_h1_sqe(s: &SymbolTable) -> Result<C64, ClosedFormError> {
    let m = &s.mems;
    let (a, ai, b, h, delta) = (s.a, s.a_inv, s.b, s.h, s.delta);
    let first =
        2.0 * ai * b * (xlog(a - m.root_q, m.k, "(a-Q) log k")? + xlog(a + m.root_q, m.k_prime, "(a+Q) log k'")?);
    let diag = xlog(re(8.0 * b * (0.5 - delta)), re(s.h_prime), "8b(0.5-delta) log h'")?
        - xlog(re(4.0 * b * h), re(h), "4bh log h")?
        - xlog(re(4.0 * b * delta), re(delta), "4b delta log delta")?;
    let coherent = ai
        * (xlog(4.0 * b * m.root_p - 2.0 * a * b * h, m.l, "(4bP-2abh) log l")?
            - xlog(4.0 * b * m.root_p + 2.0 * a * b * h, m.l_prime, "(4bP+2abh) log l'")?
            - xlog(4.0 * a * b * delta, re(delta), "4ab delta log delta")?);
    let mixed = -2.0 * b * (xlog(re(s.m), re(s.n), "m log n")? - xlog(re(s.m_prime), re(s.n_prime), "m' log n'")?);
    Ok(first + diag + coherent + mixed)
}

fn werner_h2_sqe(s: &SymbolTable) -> Result<C64, ClosedFormError> {
    let b = s.b;
    Ok(re(1.0)
        + xlog(re(3.0 * b * s.f), re(0.25 * s.f), "3bf log(0.25 f)")?
        + xlog(re(b * (1.0 + 3.0 * s.gamma)), re(s.v), "b(1+3gamma) log v")?)
}

fn mems_h2_sqe(s: &SymbolTable) -> Result<C64, ClosedFormError> {
    let (b, h, delta) = (s.b, s.h, s.delta);
    let inner = xlog(re(16.0 * b * (0.5 - delta)), re(s.h_prime), "16b(0.5-delta) log h'")?
        - xlog(re(16.0 * b * h), re(h), "16bh log h")?
        - xlog(re(16.0 * b * delta), re(delta), "16b delta log delta")?
        - 4.0 * b * (xlog(re(s.m), re(s.n), "m log n")? - xlog(re(s.m_prime), re(s.n_prime), "m' log n'")?);
    Ok(0.5 * inner)
}

pub fn closed_sqe(params: &ModelParams) -> Result<ClosedScalar, ClosedFormError> {
    ClosedForms::default().sqe(params)
}

pub fn closed_spectrum(params: &ModelParams) -> Result<SpectrumQuadruple, ClosedFormError> {
    ClosedForms::default().spectrum(params)
}

pub fn closed_concurrence(params: &ModelParams) -> Result<f64, ClosedFormError> {
    ClosedForms::default().concurrence(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{evolved_state, spin_flip};
    use crate::oracle;
    use proptest::prelude::*;
    use HamiltonianKind::{H1, H2};
    use StateFamily::{Mems, Werner};

    fn p(state: StateFamily, ham: HamiltonianKind, gamma: f64, alpha: f64, jt: f64) -> ModelParams {
        ModelParams::new(state, ham, gamma, alpha, jt)
    }

    #[test]
    fn symbol_examples() {
        let s = eval_symbols(&p(Werner, H1, 0.0, 0.3, 0.0));
        assert_eq!(s.a, C64::new(1.0, 0.0));
        assert_eq!((s.f, s.f_prime, s.v), (1.0, 1.0, 0.25));
        let s = eval_symbols(&p(Werner, H1, 1.0, 0.3, 0.7));
        assert_eq!((s.f, s.f_3prime, s.v), (0.0, 2.0, 1.0));
        assert_eq!(s.delta, 0.5);
    }

    #[test]
    fn werner_h2_endpoint_and_concurrence() {
        let one = closed_sqe(&p(Werner, H2, 1.0, 0.0, 0.0)).unwrap();
        assert!((one.value - 1.0).abs() < 1e-15 && one.imag == 0.0);
        let spec = closed_spectrum(&p(Werner, H2, 1.0, 0.0, 0.0)).unwrap();
        let want = [0.0, 0.0, 0.0, 1.0];
        for (z, w) in spec.entries.iter().zip(want) {
            assert!((z - re(w)).norm() < 1e-15);
        }
        assert!((closed_concurrence(&p(Werner, H2, 1.0, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((closed_concurrence(&p(Werner, H2, 0.5, 0.0, 0.0)).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mems_h2_spectrum_simplifies_to_squares() {
        for k in 0..=100 {
            let g = k as f64 / 100.0;
            let d = mems_delta(g);
            let spec = closed_spectrum(&p(Mems, H2, g, 0.2, 0.9)).unwrap();
            let want = [0.0, 0.0, (g / 2.0 - d).powi(2), (g / 2.0 + d).powi(2)];
            for (z, w) in spec.entries.iter().zip(want) {
                assert!((z - re(w)).norm() < 1e-14);
            }
        }
        assert!((closed_concurrence(&p(Mems, H2, 0.4, 0.0, 0.0)).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn mems_h1_origin_term_by_term() {
        // At gamma = alpha = jt = 0 the printed expression collapses to
        // (4b/3) ln(1/3) - (16b/3) ln(2/3).
        let b = FormulaConstants::PRINTED.b;
        let manual = 4.0 * b / 3.0 * (1.0f64 / 3.0).ln() - 16.0 * b / 3.0 * (2.0f64 / 3.0).ln();
        let got = closed_sqe(&p(Mems, H1, 0.0, 0.0, 0.0)).unwrap();
        assert!((got.value - manual).abs() < 1e-12);
        assert!(got.imag.abs() < 1e-15);
        // printed b is 1/(8 ln 2), so this lands on the bit-valued proxy 0.12581
        assert!((manual - 0.125815).abs() < 1e-6);
        // with b = 1/(4 ln 2) the same expression doubles to 0.251629
        let doubled = ClosedForms::new(
            FormulaConstants {
                b: 1.0 / (4.0 * std::f64::consts::LN_2),
                b_prime: 0.333333,
            },
            Tolerances::default(),
        )
        .sqe(&p(Mems, H1, 0.0, 0.0, 0.0))
        .unwrap();
        assert!((doubled.value - 0.251629).abs() < 1e-6);
    }

    #[test]
    fn werner_h1_origin_against_numeric_spectrum() {
        let params = p(Werner, H1, 0.5, 0.0, 0.0);
        let closed = closed_spectrum(&params).unwrap();
        let ab = evolved_state(&params).unwrap().reduce(&[0, 1]).unwrap();
        let tilde = spin_flip(&ab).unwrap();
        let prod = ab.matrix() * &tilde;
        let mut numeric: Vec<f64> = oracle::char_poly_roots(&prod).iter().map(|z| z.re).collect();
        numeric.sort_by(f64::total_cmp);
        let mut printed: Vec<f64> = closed.entries.iter().map(|z| z.re).collect();
        printed.sort_by(f64::total_cmp);
        assert!(closed.max_imag() < 1e-12);
        // triple root: Durand-Kerner converges only to ~eps^(1/3)
        for (a, b) in numeric.iter().zip(&printed) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        // the exact multiset for Werner is {(1-g)^2/16 x3, (1+3g)^2/16}
        let exact = [1.0 / 64.0, 1.0 / 64.0, 1.0 / 64.0, 6.25 / 16.0];
        for (a, b) in printed.iter().zip(exact) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn werner_h1_sqe_origin_limits() {
        let top = closed_sqe(&p(Werner, H1, 1.0, 0.0, 0.0)).unwrap();
        assert!((top.value - 1.0).abs() < 1e-5);
        let bottom = closed_sqe(&p(Werner, H1, 0.0, 0.0, 0.0)).unwrap();
        assert!(bottom.value.abs() < 1e-5, "{}", bottom.value);
    }

    #[test]
    fn domain_violations_are_reported() {
        assert!(matches!(
            xlog(re(1.0), re(-0.5), "t"),
            Err(ClosedFormError::DomainViolation { term: "t", .. })
        ));
        assert!(xlog(re(1.0), re(0.0), "t").is_err());
        assert_eq!(xlog(re(0.0), re(0.0), "t").unwrap(), C64::new(0.0, 0.0));
        assert!(closed_sqe(&p(Mems, H1, 1.2, 0.0, 0.0)).is_err());
    }

    #[test]
    fn complex_spectrum_is_flagged() {
        let q = SpectrumQuadruple {
            entries: [re(0.1), C64::new(0.1, 0.01), re(0.0), re(0.0)],
        };
        assert!(matches!(
            q.concurrence(1e-9),
            Err(ClosedFormError::ComplexSpectrum { index: 1, .. })
        ));
    }

    #[test]
    fn origin_closed_concurrence_agrees_between_hamiltonians() {
        for k in 0..=100 {
            let g = k as f64 / 100.0;
            for fam in StateFamily::ALL {
                let c1 = closed_concurrence(&p(fam, H1, g, 0.0, 0.0)).unwrap();
                let c2 = closed_concurrence(&p(fam, H2, g, 0.0, 0.0)).unwrap();
                assert!((c1 - c2).abs() < 1e-9, "{fam} {g}: {c1} vs {c2}");
            }
        }
    }

    proptest! {
        #[test]
        fn phase_has_unit_modulus(jt in -50.0f64..50.0) {
            let s = eval_symbols(&p(Werner, H1, 0.5, 0.5, jt));
            prop_assert!((s.a.norm() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn werner_h2_spectrum_is_real_and_reproduces_threshold_law(g in 0.0f64..=1.0) {
            let spec = closed_spectrum(&p(Werner, H2, g, 0.0, 0.0)).unwrap();
            for z in spec.entries {
                prop_assert!(z.im == 0.0 && z.re >= 0.0);
            }
            let c = spec.concurrence(1e-9).unwrap();
            prop_assert!((c - ((3.0 * g - 1.0) / 2.0).max(0.0)).abs() < 1e-12);
        }

        #[test]
        fn h2_forms_ignore_alpha_and_jt(g in 0.0f64..=1.0, seed in any::<u64>()) {
            use rand::Rng;
            let mut rng = oracle::rng(seed);
            for fam in StateFamily::ALL {
                let base_sqe = closed_sqe(&p(fam, H2, g, 0.0, 0.0)).unwrap().value;
                let base_spec = closed_spectrum(&p(fam, H2, g, 0.0, 0.0)).unwrap();
                for _ in 0..25 {
                    let (al, jt) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..3.0));
                    let v = closed_sqe(&p(fam, H2, g, al, jt)).unwrap().value;
                    prop_assert!((v - base_sqe).abs() < 1e-12);
                    let spec = closed_spectrum(&p(fam, H2, g, al, jt)).unwrap();
                    for (x, y) in spec.entries.iter().zip(base_spec.entries.iter()) {
                        prop_assert!((x - y).norm() < 1e-12);
                    }
                }
            }
        }
    }
}
