//! Closed-form vs numeric comparison over a sweep grid.

use serde::{Deserialize, Serialize};

use super::ClosedForms;
use crate::analysis::{par_map, Status, SweepGrid, SweepOptions};
use crate::dynamics::HamiltonianKind;
use crate::measures::{measure_point_with, MeasureName};
use crate::states::{ModelParams, StateFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub axis_value: f64,
    pub params: ModelParams,
    pub numeric: Option<f64>,
    pub closed: Option<f64>,
    /// Imaginary part left over on the closed-form value.
    pub closed_imag: Option<f64>,
    /// |closed - numeric| when both sides are usable.
    pub deviation: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDiscrepancy {
    pub measure: MeasureName,
    pub status: Status,
    pub max_abs_deviation: f64,
    /// Axis value where the largest deviation occurs.
    pub argmax: Option<f64>,
    /// s minimizing sum (closed - s * numeric)^2; absent when numeric is
    /// identically zero.
    pub best_fit_scale: Option<f64>,
    pub max_deviation_after_scale: Option<f64>,
    /// Points where either side could not be evaluated as a real number.
    pub failed_points: usize,
    pub note: String,
    pub rows: Vec<DeviationRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub state: StateFamily,
    pub hamiltonian: HamiltonianKind,
    pub grid: SweepGrid,
    pub threshold: f64,
    pub measures: Vec<MeasureDiscrepancy>,
}

impl DiscrepancyReport {
    pub fn measure(&self, name: MeasureName) -> Option<&MeasureDiscrepancy> {
        self.measures.iter().find(|m| m.measure == name)
    }

    pub fn status(&self) -> Status {
        self.measures.iter().map(|m| m.status).max().unwrap_or(Status::Pass)
    }
}

struct PointEval {
    axis_value: f64,
    params: ModelParams,
    numeric: Result<(f64, f64), String>,
    closed_sqe: Result<(f64, f64), String>,
    closed_conc: Result<f64, String>,
}

/// Evaluates both pipelines at every grid point for one (state, Hamiltonian)
/// pair. Never rescales; a global-scale fit is reported as a diagnostic only.
pub fn compare_closed_vs_numeric(
    state: StateFamily,
    hamiltonian: HamiltonianKind,
    grid: &SweepGrid,
    opts: &SweepOptions,
) -> DiscrepancyReport {
    let mut grid = grid.clone();
    grid.states = vec![state];
    grid.hamiltonians = vec![hamiltonian];
    let forms = ClosedForms::new(opts.constants, opts.tol.clone());

    let values = grid.values();
    let evals = par_map(&values, opts.threads, |&x| {
        let params = grid.params_at(x, state, hamiltonian);
        PointEval {
            axis_value: x,
            params,
            numeric: measure_point_with(&params, &opts.tol)
                .map(|(s, c)| (s.value, c.value))
                .map_err(|e| e.to_string()),
            closed_sqe: forms.sqe(&params).map(|z| (z.value, z.imag)).map_err(|e| e.to_string()),
            closed_conc: forms.concurrence(&params).map_err(|e| e.to_string()),
        }
    });

    let threshold = opts.tol.compare_pass;
    let measures = MeasureName::ALL
        .iter()
        .map(|&name| summarize(name, &evals, threshold, opts.tol.imaginary))
        .collect();
    DiscrepancyReport {
        state,
        hamiltonian,
        grid,
        threshold,
        measures,
    }
}

fn summarize(name: MeasureName, evals: &[PointEval], threshold: f64, imag_tol: f64) -> MeasureDiscrepancy {
    let rows: Vec<DeviationRow> = evals
        .iter()
        .map(|e| {
            let (numeric, num_err) = match &e.numeric {
                Ok((s, c)) => (Some(if name == MeasureName::SquashedProxy { *s } else { *c }), None),
                Err(msg) => (None, Some(format!("numeric: {msg}"))),
            };
            let (closed, closed_imag, closed_err) = match name {
                MeasureName::SquashedProxy => match &e.closed_sqe {
                    Ok((v, im)) if im.abs() > imag_tol => (
                        Some(*v),
                        Some(*im),
                        Some(format!("closed form has imaginary part {im:e}")),
                    ),
                    Ok((v, im)) => (Some(*v), Some(*im), None),
                    Err(msg) => (None, None, Some(format!("closed: {msg}"))),
                },
                MeasureName::Concurrence => match &e.closed_conc {
                    Ok(v) => (Some(*v), None, None),
                    Err(msg) => (None, None, Some(format!("closed: {msg}"))),
                },
            };
            let note = match (num_err, closed_err) {
                (None, None) => None,
                (a, b) => Some(a.into_iter().chain(b).collect::<Vec<_>>().join("; ")),
            };
            let deviation = match (numeric, closed, &note) {
                (Some(n), Some(c), None) => Some((c - n).abs()),
                _ => None,
            };
            DeviationRow {
                axis_value: e.axis_value,
                params: e.params,
                numeric,
                closed,
                closed_imag,
                deviation,
                note,
            }
        })
        .collect();

    let failed_points = rows.iter().filter(|r| r.deviation.is_none()).count();
    let mut max_abs_deviation: f64 = 0.0;
    let mut argmax = None;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for r in &rows {
        if let (Some(d), Some(n), Some(c)) = (r.deviation, r.numeric, r.closed) {
            if argmax.is_none() || d > max_abs_deviation {
                max_abs_deviation = d;
                argmax = Some(r.axis_value);
            }
            sxy += c * n;
            sxx += n * n;
        }
    }
    let best_fit_scale = (sxx > 0.0).then(|| sxy / sxx);
    let max_deviation_after_scale = best_fit_scale.map(|s| {
        rows.iter()
            .filter_map(|r| match (r.deviation, r.numeric, r.closed) {
                (Some(_), Some(n), Some(c)) => Some((c - s * n).abs()),
                _ => None,
            })
            .fold(0.0, f64::max)
    });

    let usable = rows.len() - failed_points;
    let pass = failed_points == 0 && max_abs_deviation < threshold;
    let status = if pass { Status::Pass } else { Status::Flagged };
    let mut notes = Vec::new();
    if failed_points > 0 {
        notes.push(format!(
            "{failed_points} of {} points could not be compared",
            rows.len()
        ));
    }
    if usable > 0 && max_abs_deviation >= threshold {
        notes.push(format!(
            "max |closed - numeric| = {max_abs_deviation:.6e} at axis value {:.6}",
            argmax.unwrap_or(f64::NAN)
        ));
        if let (Some(s), Some(after)) = (best_fit_scale, max_deviation_after_scale) {
            if after < threshold {
                notes.push(format!("agrees after a global factor: closed = {s:.6} * numeric"));
            } else {
                notes.push(format!("best-fit scale {s:.6} leaves residual {after:.6e}"));
            }
        }
    }
    if pass {
        notes.push(format!("agrees within {threshold:e}"));
    }

    MeasureDiscrepancy {
        measure: name,
        status,
        max_abs_deviation,
        argmax,
        best_fit_scale,
        max_deviation_after_scale,
        failed_points,
        note: notes.join("; "),
        rows,
    }
}
