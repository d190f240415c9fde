use serde::{Deserialize, Serialize};

use super::sweep::describe;
use super::{par_map, SweepOptions};
use crate::dynamics::HamiltonianKind;
use crate::error::{AnalysisError, StateError};
use crate::measures::{concurrence_margin_with, evolved_state, measure_point_with};
use crate::states::{ModelParams, StateFamily};

/// Differences smaller than this count as "no sign" during bracketing.
const SIGN_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingResult {
    /// Midpoint of the final bracket.
    pub location: f64,
    pub bracket: (f64, f64),
    /// |f(location)|.
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection on a bracket with a sign change (or an exact zero at an end).
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, width: f64, max_iter: usize) -> Result<CrossingResult, AnalysisError>
where
    F: FnMut(f64) -> Result<f64, AnalysisError>,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 || fb == 0.0 {
        let x = if fa == 0.0 { a } else { b };
        return Ok(CrossingResult {
            location: x,
            bracket: (x, x),
            residual: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(AnalysisError::NoSignChange { lo: a, hi: b });
    }
    let mut iterations = 0;
    while b - a > width && iterations < max_iter {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        iterations += 1;
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let location = 0.5 * (a + b);
    Ok(CrossingResult {
        location,
        bracket: (a, b),
        residual: f(location)?.abs(),
        iterations,
    })
}

/// First pair of sampled points where `ys` changes strict sign, skipping
/// samples with |y| below the zero threshold.
pub fn first_sign_change(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let mut last: Option<(f64, f64)> = None;
    for (&x, &y) in xs.iter().zip(ys) {
        if y.abs() < SIGN_ZERO {
            continue;
        }
        if let Some((lx, ly)) = last {
            if ly.signum() != y.signum() {
                return Some((lx, x));
            }
        }
        last = Some((x, y));
    }
    None
}

/// A one-parameter search over gamma at fixed alpha and jt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceQuery {
    pub state: StateFamily,
    pub hamiltonian: HamiltonianKind,
    pub alpha: f64,
    pub jt: f64,
    pub j: f64,
    pub lo: f64,
    pub hi: f64,
}

impl SceQuery {
    pub fn new(state: StateFamily, hamiltonian: HamiltonianKind, alpha: f64, jt: f64) -> Self {
        Self {
            state,
            hamiltonian,
            alpha,
            jt,
            j: 1.0,
            lo: 0.0,
            hi: 1.0,
        }
    }

    fn params(&self, gamma: f64) -> ModelParams {
        ModelParams {
            state: self.state,
            hamiltonian: self.hamiltonian,
            gamma,
            alpha: self.alpha,
            j: self.j,
            t: self.jt / self.j,
        }
    }

    fn check(&self) -> Result<(), AnalysisError> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && 0.0 <= self.lo
            && self.lo < self.hi
            && self.hi <= 1.0
            && self.j.is_finite()
            && self.j != 0.0;
        if ok {
            Ok(())
        } else {
            Err(AnalysisError::InvalidGrid(format!(
                "gamma bracket [{}, {}] with j = {}",
                self.lo, self.hi, self.j
            )))
        }
    }
}

fn locate<F>(query: &SceQuery, opts: &SweepOptions, f: F) -> Result<CrossingResult, AnalysisError>
where
    F: Fn(&ModelParams) -> Result<f64, StateError> + Sync + Send,
{
    query.check()?;
    let eval = |g: f64| {
        let p = query.params(g);
        f(&p).map_err(|source| AnalysisError::Numerical {
            point: describe(&p),
            source,
        })
    };
    let n = opts.tol.prescan_points.max(2);
    let xs: Vec<f64> = (0..n)
        .map(|k| {
            if k + 1 == n {
                query.hi
            } else {
                query.lo + (query.hi - query.lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect();
    let ys = par_map(&xs, opts.threads, |&g| eval(g))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let (a, b) = first_sign_change(&xs, &ys).ok_or(AnalysisError::NoSignChange {
        lo: query.lo,
        hi: query.hi,
    })?;
    bisect(eval, a, b, opts.tol.root_bracket, opts.tol.root_max_iterations)
}

/// Gamma at which the squashed proxy and the concurrence cross (the first
/// strict sign change of their difference inside the bracket).
pub fn find_sce(query: &SceQuery, opts: &SweepOptions) -> Result<CrossingResult, AnalysisError> {
    locate(query, opts, |p| {
        let (sq, c) = measure_point_with(p, &opts.tol)?;
        Ok(sq.value - c.value)
    })
}

/// Gamma at which the concurrence becomes positive: the root of the
/// unclipped Wootters margin.
pub fn find_concurrence_onset(query: &SceQuery, opts: &SweepOptions) -> Result<CrossingResult, AnalysisError> {
    locate(query, opts, |p| {
        let rho = evolved_state(p)?.reduce(&[0, 1])?;
        concurrence_margin_with(&rho, &opts.tol)
    })
}
