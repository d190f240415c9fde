use serde::{Deserialize, Serialize};

use super::roots::bisect;
use super::sweep::describe;
use super::{par_map, SweepOptions};
use crate::dynamics::HamiltonianKind;
use crate::error::AnalysisError;
use crate::measures::{concurrence_with, evolved_state};
use crate::states::{ModelParams, StateFamily};

/// Scan of concurrence over jt at fixed gamma and alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsdQuery {
    pub state: StateFamily,
    pub hamiltonian: HamiltonianKind,
    pub gamma: f64,
    pub alpha: f64,
    pub j: f64,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl EsdQuery {
    pub fn new(state: StateFamily, hamiltonian: HamiltonianKind, gamma: f64, alpha: f64) -> Self {
        Self {
            state,
            hamiltonian,
            gamma,
            alpha,
            j: 1.0,
            start: 0.0,
            stop: 2.0,
            steps: 401,
        }
    }

    pub fn with_range(mut self, start: f64, stop: f64, steps: usize) -> Self {
        self.start = start;
        self.stop = stop;
        self.steps = steps;
        self
    }

    fn params(&self, jt: f64) -> ModelParams {
        ModelParams {
            state: self.state,
            hamiltonian: self.hamiltonian,
            gamma: self.gamma,
            alpha: self.alpha,
            j: self.j,
            t: jt / self.j,
        }
    }

    fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// A closed jt interval on which the concurrence is below the zero threshold.
/// Edges that coincide with the scan range are not refined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsdZone {
    pub onset: f64,
    pub offset: f64,
    pub onset_bracket: (f64, f64),
    pub offset_bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceMinimum {
    pub jt: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdReport {
    pub query: EsdQuery,
    pub zero_threshold: f64,
    pub zones: Vec<EsdZone>,
    pub minimum: ConcurrenceMinimum,
}

pub fn find_esd_zones(query: &EsdQuery, opts: &SweepOptions) -> Result<EsdReport, AnalysisError> {
    let ok = query.steps >= 2
        && query.start.is_finite()
        && query.stop.is_finite()
        && query.start < query.stop
        && query.j.is_finite()
        && query.j != 0.0;
    if !ok {
        return Err(AnalysisError::InvalidGrid(format!(
            "jt range [{}, {}] with {} steps",
            query.start, query.stop, query.steps
        )));
    }
    query
        .params(query.start)
        .validate()
        .map_err(|source| AnalysisError::Numerical {
            point: describe(&query.params(query.start)),
            source,
        })?;

    let conc = |jt: f64| {
        let p = query.params(jt);
        evolved_state(&p)
            .and_then(|rho| rho.reduce(&[0, 1]))
            .and_then(|ab| concurrence_with(&ab, &opts.tol))
            .map_err(|source| AnalysisError::Numerical {
                point: describe(&p),
                source,
            })
    };
    let thr = opts.tol.zero_concurrence;
    let xs = query.values();
    let cs = par_map(&xs, opts.threads, |&x| conc(x))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let below: Vec<bool> = cs.iter().map(|&c| c < thr).collect();

    let edge = |a: f64, b: f64| -> Result<(f64, (f64, f64)), AnalysisError> {
        let r = bisect(
            |x| Ok(conc(x)? - thr),
            a,
            b,
            opts.tol.root_bracket,
            opts.tol.root_max_iterations,
        )?;
        Ok((r.location, r.bracket))
    };

    let mut zones = Vec::new();
    let mut k = 0;
    while k < xs.len() {
        if !below[k] {
            k += 1;
            continue;
        }
        let first = k;
        while k + 1 < xs.len() && below[k + 1] {
            k += 1;
        }
        let last = k;
        let (onset, onset_bracket) = if first == 0 {
            (xs[0], (xs[0], xs[0]))
        } else {
            edge(xs[first - 1], xs[first])?
        };
        let (offset, offset_bracket) = if last + 1 == xs.len() {
            (xs[last], (xs[last], xs[last]))
        } else {
            edge(xs[last], xs[last + 1])?
        };
        zones.push(EsdZone {
            onset,
            offset,
            onset_bracket,
            offset_bracket,
        });
        k += 1;
    }

    let imin = (0..cs.len()).min_by(|&a, &b| cs[a].total_cmp(&cs[b])).unwrap_or(0);
    let lo = xs[imin.saturating_sub(1)];
    let hi = xs[(imin + 1).min(xs.len() - 1)];
    let minimum = golden_min(&conc, lo, hi, 1e-9)?;
    let minimum = if minimum.value <= cs[imin] {
        minimum
    } else {
        ConcurrenceMinimum {
            jt: xs[imin],
            value: cs[imin],
        }
    };

    Ok(EsdReport {
        query: *query,
        zero_threshold: thr,
        zones,
        minimum,
    })
}

fn golden_min<F>(f: &F, mut a: f64, mut b: f64, width: f64) -> Result<ConcurrenceMinimum, AnalysisError>
where
    F: Fn(f64) -> Result<f64, AnalysisError>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    let jt = 0.5 * (a + b);
    Ok(ConcurrenceMinimum { jt, value: f(jt)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    // Werner concurrence with the A-B coherence scaled by |k|:
    // C = 2 max(0, |k| gamma / 2 - (1 - gamma) / 4),
    // |k|^2 = a^4 + (1 - a^2)^2 + 2 a^2 (1 - a^2) cos(4 jt).
    fn werner_formula(gamma: f64, alpha: f64, jt: f64) -> f64 {
        let a2 = alpha * alpha;
        let k2 = a2 * a2 + (1.0 - a2).powi(2) + 2.0 * a2 * (1.0 - a2) * (4.0 * jt).cos();
        2.0 * (k2.max(0.0).sqrt() * gamma / 2.0 - (1.0 - gamma) / 4.0).max(0.0)
    }

    #[test]
    fn werner_zone_matches_formula() {
        let (gamma, alpha) = (0.600001, 0.600001);
        let q = EsdQuery::new(StateFamily::Werner, HamiltonianKind::H1, gamma, alpha);
        let r = find_esd_zones(&q, &SweepOptions::default()).unwrap();
        assert_eq!(r.zones.len(), 1);
        let z = r.zones[0];
        // the zone edges solve |k| = (1 - gamma) / (2 gamma)
        let target = ((1.0 - gamma) / (2.0 * gamma)).powi(2);
        let a2 = alpha * alpha;
        let (base, amp) = (a2 * a2 + (1.0 - a2).powi(2), 2.0 * a2 * (1.0 - a2));
        let x = ((target - base) / amp).acos() / 4.0;
        assert!((z.onset - x).abs() < 2e-6, "{} vs {x}", z.onset);
        assert!((z.offset - (std::f64::consts::FRAC_PI_2 - x)).abs() < 2e-6);
        assert!(z.onset_bracket.1 - z.onset_bracket.0 <= 1e-6);
        assert!(werner_formula(gamma, alpha, z.onset - 1e-4) > 0.0);
        assert!(werner_formula(gamma, alpha, 0.5 * (z.onset + z.offset)) == 0.0);
    }

    #[test]
    fn mems_has_no_zone_and_minimum_at_quarter_pi() {
        let q = EsdQuery::new(StateFamily::Mems, HamiltonianKind::H1, 0.600001, 0.600001);
        let r = find_esd_zones(&q, &SweepOptions::default()).unwrap();
        assert!(r.zones.is_empty());
        assert!((r.minimum.jt - FRAC_PI_4).abs() < 1e-6);
        assert!(r.minimum.value > 0.1);
    }

    #[test]
    fn zone_at_range_start_is_not_refined() {
        let q = EsdQuery::new(StateFamily::Werner, HamiltonianKind::H1, 0.2, 0.5).with_range(0.0, 1.0, 11);
        let r = find_esd_zones(&q, &SweepOptions::default()).unwrap();
        assert_eq!(r.zones.len(), 1);
        assert_eq!((r.zones[0].onset, r.zones[0].offset), (0.0, 1.0));
    }

    #[test]
    fn bad_range() {
        let q = EsdQuery::new(StateFamily::Werner, HamiltonianKind::H1, 0.5, 0.5).with_range(1.0, 0.0, 11);
        assert!(find_esd_zones(&q, &SweepOptions::default()).is_err());
    }
}
