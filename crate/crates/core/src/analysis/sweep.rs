use std::fmt;

use serde::{Deserialize, Serialize};

use super::{par_map, SweepGrid};
use crate::closed_form::{ClosedForms, FormulaConstants};
use crate::dynamics::HamiltonianKind;
use crate::error::AnalysisError;
use crate::measures::{measure_point_with, MeasureName};
use crate::states::{ModelParams, StateFamily};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Numeric,
    ClosedForm,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Numeric => "numeric",
            Source::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One value in a sweep output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub state: StateFamily,
    pub hamiltonian: HamiltonianKind,
    pub measure: MeasureName,
    pub source: Source,
    pub alpha: f64,
    pub gamma: f64,
    pub j: f64,
    pub t: f64,
    pub jt: f64,
    pub value: f64,
}

impl MeasureRecord {
    fn new(params: &ModelParams, measure: MeasureName, source: Source, value: f64) -> Self {
        Self {
            state: params.state,
            hamiltonian: params.hamiltonian,
            measure,
            source,
            alpha: params.alpha,
            gamma: params.gamma,
            j: params.j,
            t: params.t,
            jt: params.jt(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOptions {
    /// Worker count; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub tol: Tolerances,
    pub constants: FormulaConstants,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepOutput {
    pub records: Vec<MeasureRecord>,
    /// Closed-form values that could not be produced, one line each.
    pub flags: Vec<String>,
}

/// Evaluates every grid point. Records are ordered by axis value, then state
/// family, Hamiltonian, measure and source, independent of thread count.
///
/// A numeric failure aborts the sweep; a closed-form failure only drops that
/// record and adds a flag.
pub fn sweep(grid: &SweepGrid, opts: &SweepOptions) -> Result<SweepOutput, AnalysisError> {
    grid.validate()?;
    let mut work = Vec::new();
    for x in grid.values() {
        for &state in &grid.states {
            for &ham in &grid.hamiltonians {
                work.push(grid.params_at(x, state, ham));
            }
        }
    }
    let forms = ClosedForms::new(opts.constants, opts.tol.clone());

    let chunks = par_map(&work, opts.threads, |p| {
        eval_point(p, grid.include_closed, &forms, &opts.tol)
    });
    let mut out = SweepOutput::default();
    for chunk in chunks {
        let (records, flags) = chunk?;
        out.records.extend(records);
        out.flags.extend(flags);
    }
    Ok(out)
}

fn eval_point(
    p: &ModelParams,
    include_closed: bool,
    forms: &ClosedForms,
    tol: &Tolerances,
) -> Result<(Vec<MeasureRecord>, Vec<String>), AnalysisError> {
    let (sq, conc) = measure_point_with(p, tol).map_err(|source| AnalysisError::Numerical {
        point: describe(p),
        source,
    })?;
    let mut records = Vec::with_capacity(4);
    let mut flags = Vec::new();
    records.push(MeasureRecord::new(
        p,
        MeasureName::SquashedProxy,
        Source::Numeric,
        sq.value,
    ));
    if include_closed {
        match forms.sqe(p) {
            Ok(z) if z.imag.abs() <= tol.imaginary => records.push(MeasureRecord::new(
                p,
                MeasureName::SquashedProxy,
                Source::ClosedForm,
                z.value,
            )),
            Ok(z) => flags.push(format!(
                "{}: closed squashed value has imaginary part {:e}",
                describe(p),
                z.imag
            )),
            Err(e) => flags.push(format!("{}: closed squashed value: {e}", describe(p))),
        }
    }
    records.push(MeasureRecord::new(
        p,
        MeasureName::Concurrence,
        Source::Numeric,
        conc.value,
    ));
    if include_closed {
        match forms.concurrence(p) {
            Ok(v) => records.push(MeasureRecord::new(p, MeasureName::Concurrence, Source::ClosedForm, v)),
            Err(e) => flags.push(format!("{}: closed concurrence: {e}", describe(p))),
        }
    }
    Ok((records, flags))
}

pub(crate) fn describe(p: &ModelParams) -> String {
    format!(
        "{}/{} gamma={} alpha={} jt={}",
        p.state,
        p.hamiltonian,
        p.gamma,
        p.alpha,
        p.jt()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Axis;

    #[test]
    fn record_order_and_count() {
        let grid = SweepGrid::new(Axis::Jt, 0.0, 1.0, 5)
            .with_fixed(0.8, 0.6, 0.0)
            .with_hamiltonians(&HamiltonianKind::ALL)
            .with_closed(true);
        let out = sweep(&grid, &SweepOptions::default()).unwrap();
        // 5 points x 2 states x 2 Hamiltonians x 2 measures x 2 sources
        assert_eq!(out.records.len() + out.flags.len(), 80);
        let first: Vec<_> = out.records[..4].iter().map(|r| (r.measure, r.source)).collect();
        assert_eq!(
            first,
            vec![
                (MeasureName::SquashedProxy, Source::Numeric),
                (MeasureName::SquashedProxy, Source::ClosedForm),
                (MeasureName::Concurrence, Source::Numeric),
                (MeasureName::Concurrence, Source::ClosedForm),
            ]
        );
        assert!(out.records.windows(2).all(|w| w[0].jt <= w[1].jt));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let grid = SweepGrid::new(Axis::Gamma, 0.0, 1.0, 41).with_fixed(0.0, 0.3, 0.9);
        let one = sweep(
            &grid,
            &SweepOptions {
                threads: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let four = sweep(
            &grid,
            &SweepOptions {
                threads: Some(4),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn invalid_grid_is_rejected() {
        let grid = SweepGrid::new(Axis::Gamma, 0.0, 1.0, 1);
        assert!(matches!(
            sweep(&grid, &SweepOptions::default()),
            Err(AnalysisError::InvalidGrid(_))
        ));
    }

    #[test]
    fn werner_endpoint_values() {
        let grid = SweepGrid::new(Axis::Gamma, 0.0, 1.0, 2).with_states(&[StateFamily::Werner]);
        let out = sweep(&grid, &SweepOptions::default()).unwrap();
        let last: Vec<f64> = out.records[2..].iter().map(|r| r.value).collect();
        assert!((last[0] - 1.0).abs() < 1e-12 && (last[1] - 1.0).abs() < 1e-12);
    }
}
