use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::HamiltonianKind;
use crate::error::AnalysisError;
use crate::states::{ModelParams, StateFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Gamma,
    Alpha,
    Jt,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Gamma => "gamma",
            Axis::Alpha => "alpha",
            Axis::Jt => "jt",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" => Ok(Axis::Gamma),
            "alpha" => Ok(Axis::Alpha),
            "jt" => Ok(Axis::Jt),
            other => Err(format!("unknown axis `{other}`")),
        }
    }
}

/// A one-dimensional sweep: `steps` evenly spaced values of `axis` from
/// `start` to `stop` inclusive, with the other two parameters held at the
/// `gamma` / `alpha` / `jt` fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub gamma: f64,
    pub alpha: f64,
    pub jt: f64,
    /// Coupling constant; time is `jt / j`.
    pub j: f64,
    pub states: Vec<StateFamily>,
    pub hamiltonians: Vec<HamiltonianKind>,
    /// Also emit closed-form values next to the numeric ones.
    pub include_closed: bool,
}

impl SweepGrid {
    pub fn new(axis: Axis, start: f64, stop: f64, steps: usize) -> Self {
        Self {
            axis,
            start,
            stop,
            steps,
            gamma: 0.0,
            alpha: 0.0,
            jt: 0.0,
            j: 1.0,
            states: StateFamily::ALL.to_vec(),
            hamiltonians: vec![HamiltonianKind::H1],
            include_closed: false,
        }
    }

    pub fn with_fixed(mut self, gamma: f64, alpha: f64, jt: f64) -> Self {
        self.gamma = gamma;
        self.alpha = alpha;
        self.jt = jt;
        self
    }

    pub fn with_states(mut self, states: &[StateFamily]) -> Self {
        self.states = states.to_vec();
        self
    }

    pub fn with_hamiltonians(mut self, hamiltonians: &[HamiltonianKind]) -> Self {
        self.hamiltonians = hamiltonians.to_vec();
        self
    }

    pub fn with_closed(mut self, include: bool) -> Self {
        self.include_closed = include;
        self
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        let bad = |msg: String| Err(AnalysisError::InvalidGrid(msg));
        if self.steps < 2 {
            return bad(format!("steps = {} (need at least 2)", self.steps));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start > self.stop {
            return bad(format!("range [{}, {}] is empty or not finite", self.start, self.stop));
        }
        if self.states.is_empty() || self.hamiltonians.is_empty() {
            return bad("no state family or Hamiltonian selected".into());
        }
        if !self.j.is_finite() || self.j == 0.0 {
            return bad(format!("coupling j = {} must be finite and nonzero", self.j));
        }
        let unit = |name: &str, lo: f64, hi: f64| {
            if lo < 0.0 || hi > 1.0 || !lo.is_finite() || !hi.is_finite() {
                Err(AnalysisError::InvalidGrid(format!(
                    "{name} range [{lo}, {hi}] leaves [0, 1]"
                )))
            } else {
                Ok(())
            }
        };
        let (glo, ghi) = if self.axis == Axis::Gamma {
            (self.start, self.stop)
        } else {
            (self.gamma, self.gamma)
        };
        let (alo, ahi) = if self.axis == Axis::Alpha {
            (self.start, self.stop)
        } else {
            (self.alpha, self.alpha)
        };
        unit("gamma", glo, ghi)?;
        unit("alpha", alo, ahi)?;
        if self.axis != Axis::Jt && !self.jt.is_finite() {
            return bad("jt is not finite".into());
        }
        Ok(())
    }

    /// Axis values in ascending order; the last one is exactly `stop`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        let width = self.stop - self.start;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.stop
                } else {
                    self.start + width * (k as f64) / ((n - 1) as f64)
                }
            })
            .collect()
    }

    pub fn params_at(&self, value: f64, state: StateFamily, hamiltonian: HamiltonianKind) -> ModelParams {
        let (mut gamma, mut alpha, mut jt) = (self.gamma, self.alpha, self.jt);
        match self.axis {
            Axis::Gamma => gamma = value,
            Axis::Alpha => alpha = value,
            Axis::Jt => jt = value,
        }
        ModelParams {
            state,
            hamiltonian,
            gamma,
            alpha,
            j: self.j,
            t: jt / self.j,
        }
    }

    pub fn axis_value(&self, params: &ModelParams) -> f64 {
        match self.axis {
            Axis::Gamma => params.gamma,
            Axis::Alpha => params.alpha,
            Axis::Jt => params.jt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_are_ascending_and_hit_the_ends() {
        let g = SweepGrid::new(Axis::Gamma, 0.0, 1.0, 101);
        let v = g.values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 1.0);
        assert!((v[37] - 0.37).abs() < 1e-15);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn validation() {
        assert!(SweepGrid::new(Axis::Gamma, 0.0, 1.0, 1).validate().is_err());
        assert!(SweepGrid::new(Axis::Gamma, 0.0, 1.0, 0).validate().is_err());
        assert!(SweepGrid::new(Axis::Gamma, 0.5, 0.2, 10).validate().is_err());
        assert!(SweepGrid::new(Axis::Gamma, 0.0, 1.2, 10).validate().is_err());
        assert!(SweepGrid::new(Axis::Jt, 0.0, 10.0, 10).validate().is_ok());
        assert!(SweepGrid::new(Axis::Jt, 0.0, 1.0, 10)
            .with_fixed(2.0, 0.0, 0.0)
            .validate()
            .is_err());
        assert!(SweepGrid::new(Axis::Jt, 0.0, 1.0, 10)
            .with_states(&[])
            .validate()
            .is_err());
        let mut g = SweepGrid::new(Axis::Jt, 0.0, 1.0, 10);
        g.j = 0.0;
        assert!(g.validate().is_err());
    }

    #[test]
    fn params_follow_the_axis() {
        let mut g = SweepGrid::new(Axis::Jt, 0.0, 2.0, 5).with_fixed(0.6, 0.3, 9.0);
        g.j = 2.0;
        let p = g.params_at(1.0, StateFamily::Mems, HamiltonianKind::H2);
        assert_eq!((p.gamma, p.alpha, p.j, p.t), (0.6, 0.3, 2.0, 0.5));
        assert_eq!(g.axis_value(&p), 1.0);
    }
}
