//! Sweeps, crossings, sudden-death zones and anchor checks built on the
//! numeric pipeline.

mod anchors;
mod esd;
mod grid;
mod roots;
mod sweep;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use anchors::{standard_audits, verify_anchors, AnchorCheck, AnchorReport, PANEL_FIXED};
pub use esd::{find_esd_zones, ConcurrenceMinimum, EsdQuery, EsdReport, EsdZone};
pub use grid::{Axis, SweepGrid};
pub use roots::{bisect, find_concurrence_onset, find_sce, first_sign_change, CrossingResult, SceQuery};
pub use sweep::{sweep, MeasureRecord, Source, SweepOptions, SweepOutput};

/// Outcome of a check against a reference value. Ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "PASS-WITH-NOTE")]
    PassWithNote,
    #[serde(rename = "FLAGGED")]
    Flagged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::PassWithNote => "PASS-WITH-NOTE",
            Status::Flagged => "FLAGGED",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ordered parallel map, optionally on a dedicated pool of `threads` workers.
pub(crate) fn par_map<T, R, F>(items: &[T], threads: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let run = || items.par_iter().map(&f).collect();
    match threads.map(|n| rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()) {
        Some(Ok(pool)) => pool.install(run),
        _ => run(),
    }
}
