use serde::{Deserialize, Serialize};

use super::{
    find_concurrence_onset, find_esd_zones, find_sce, par_map, Axis, EsdQuery, SceQuery, Status, SweepGrid,
    SweepOptions,
};
use crate::closed_form::{compare_closed_vs_numeric, DiscrepancyReport};
use crate::dynamics::{evolve, HamiltonianKind, HamiltonianSpec};
use crate::error::StateError;
use crate::measures::measure_point_with;
use crate::states::{initial_state, ModelParams, StateFamily};

/// Fixed value used for the alpha, gamma and jt panels.
pub const PANEL_FIXED: f64 = 0.600001;
const PANEL_ALPHAS: [f64; 4] = [0.200001, 0.400001, 0.600001, 0.800001];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorCheck {
    pub id: String,
    pub description: String,
    pub reference: f64,
    pub computed: Option<f64>,
    pub tolerance: f64,
    pub deviation: Option<f64>,
    pub status: Status,
    pub note: String,
}

impl AnchorCheck {
    /// PASS within the comparison threshold, PASS-WITH-NOTE within the
    /// anchor tolerance, FLAGGED otherwise or when nothing was computed.
    fn graded(id: &str, description: &str, reference: f64, computed: Option<f64>, tolerance: f64, exact: f64) -> Self {
        let deviation = computed.map(|c| (c - reference).abs());
        let status = match deviation {
            Some(d) if d <= exact => Status::Pass,
            Some(d) if d <= tolerance => Status::PassWithNote,
            _ => Status::Flagged,
        };
        let note = match (status, deviation) {
            (Status::Pass, _) => String::new(),
            (Status::PassWithNote, Some(d)) => format!("within tolerance, off by {d:.3e}"),
            (_, Some(d)) => format!("outside tolerance by {:.3e}", d - tolerance),
            (_, None) => "no value computed".to_string(),
        };
        Self {
            id: id.to_string(),
            description: description.to_string(),
            reference,
            computed,
            tolerance,
            deviation,
            status,
            note,
        }
    }

    fn with_note(mut self, extra: impl Into<String>) -> Self {
        let extra = extra.into();
        if self.note.is_empty() {
            self.note = extra;
        } else if !extra.is_empty() {
            self.note = format!("{}; {extra}", self.note);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AnchorReport {
    pub anchors: Vec<AnchorCheck>,
}

impl AnchorReport {
    pub fn get(&self, id: &str) -> Option<&AnchorCheck> {
        self.anchors.iter().find(|a| a.id == id)
    }

    pub fn status(&self) -> Status {
        self.anchors.iter().map(|a| a.status).max().unwrap_or(Status::Pass)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &AnchorCheck> {
        self.anchors.iter().filter(|a| a.status == Status::Flagged)
    }
}

fn point(state: StateFamily, ham: HamiltonianKind, gamma: f64, alpha: f64, jt: f64) -> ModelParams {
    ModelParams::new(state, ham, gamma, alpha, jt)
}

fn gamma_values(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Max of one measure over a gamma range; `which` picks squashed (0) or
/// concurrence (1).
fn max_over_gamma(
    state: StateFamily,
    alpha: f64,
    jt: f64,
    lo: f64,
    hi: f64,
    which: usize,
    opts: &SweepOptions,
) -> Result<(f64, f64), StateError> {
    let gs = gamma_values(lo, hi, 401);
    let vals = par_map(&gs, opts.threads, |&g| {
        measure_point_with(&point(state, HamiltonianKind::H1, g, alpha, jt), &opts.tol).map(|(s, c)| {
            if which == 0 {
                s.value
            } else {
                c.value
            }
        })
    });
    let mut best = (f64::NEG_INFINITY, lo);
    for (g, v) in gs.iter().zip(vals) {
        let v = v?;
        if v > best.0 {
            best = (v, *g);
        }
    }
    Ok(best)
}

/// Runs every numeric claim that has a reference value and grades it.
pub fn verify_anchors(opts: &SweepOptions) -> AnchorReport {
    let tol = &opts.tol;
    let exact = tol.compare_pass;
    let mut out = Vec::new();
    let origin = |state, gamma| measure_point_with(&point(state, HamiltonianKind::H1, gamma, 0.0, 0.0), tol);

    let endpoint = origin(StateFamily::Werner, 1.0);
    out.push(
        AnchorCheck::graded(
            "werner-endpoint",
            "Werner squashed proxy at gamma=1, alpha=0, jt=0",
            1.0,
            endpoint.as_ref().ok().map(|(s, _)| s.value),
            0.005,
            exact,
        )
        .with_note(error_note(&endpoint)),
    );
    out.push(AnchorCheck::graded(
        "werner-endpoint-concurrence",
        "Werner concurrence at gamma=1, alpha=0, jt=0",
        1.0,
        endpoint.as_ref().ok().map(|(_, c)| c.value),
        0.005,
        exact,
    ));

    let onset = find_concurrence_onset(&SceQuery::new(StateFamily::Werner, HamiltonianKind::H1, 0.0, 0.0), opts);
    out.push(
        AnchorCheck::graded(
            "werner-concurrence-threshold",
            "gamma where Werner concurrence becomes nonzero at jt=0",
            1.0 / 3.0,
            onset.as_ref().ok().map(|r| r.location),
            0.005,
            exact,
        )
        .with_note(error_note(&onset)),
    );

    for (id, state, reference, tolerance) in [
        ("werner-sce", StateFamily::Werner, 0.4630, 0.005),
        ("mems-sce", StateFamily::Mems, 0.139, 0.02),
    ] {
        let r = find_sce(&SceQuery::new(state, HamiltonianKind::H1, 0.0, 0.0), opts);
        out.push(
            AnchorCheck::graded(
                id,
                &format!("{state} squashed proxy / concurrence crossing in gamma at alpha=0, jt=0"),
                reference,
                r.as_ref().ok().map(|c| c.location),
                tolerance,
                exact,
            )
            .with_note(error_note(&r)),
        );
    }

    let mems0 = origin(StateFamily::Mems, 0.0);
    out.push(
        AnchorCheck::graded(
            "mems-sqe-origin",
            "MEMS squashed proxy at gamma=0, alpha=0, jt=0",
            0.126365,
            mems0.as_ref().ok().map(|(s, _)| s.value),
            0.002,
            exact,
        )
        .with_note(error_note(&mems0)),
    );

    let low = max_over_gamma(StateFamily::Mems, 0.0, 0.0, 0.0, 2.0 / 3.0, 0, opts);
    out.push(
        AnchorCheck::graded(
            "mems-sqe-max",
            "largest MEMS squashed proxy for gamma in [0, 2/3] at alpha=0, jt=0",
            0.4428,
            low.as_ref().ok().map(|v| v.0),
            0.005,
            exact,
        )
        .with_note(match &low {
            Ok((_, g)) => format!("attained at gamma={g:.6}"),
            Err(e) => e.to_string(),
        }),
    );

    let high = max_over_gamma(StateFamily::Mems, 0.0, 0.0, 2.0 / 3.0, 1.0, 0, opts);
    out.push(
        AnchorCheck::graded(
            "mems-sqe-vanishes-above-2/3",
            "largest MEMS squashed proxy for gamma in [2/3, 1] (reference: zero)",
            0.0,
            high.as_ref().ok().map(|v| v.0),
            0.005,
            exact,
        )
        .with_note(match &high {
            Ok((_, g)) => format!("attained at gamma={g:.6}"),
            Err(e) => e.to_string(),
        }),
    );

    out.push(case3_freeze(opts));
    out.extend(esd_anchors(opts));
    out.push(h2_time_dependence(opts));

    AnchorReport { anchors: out }
}

fn error_note<T, E: std::fmt::Display>(r: &Result<T, E>) -> String {
    match r {
        Ok(_) => String::new(),
        Err(e) => e.to_string(),
    }
}

/// Max over gamma of Werner concurrence at jt = 0.600001, for each panel
/// alpha; the alpha = 0.600001 value is graded and the spread reported.
fn case3_freeze(opts: &SweepOptions) -> AnchorCheck {
    let per_alpha: Result<Vec<(f64, f64)>, StateError> = PANEL_ALPHAS
        .iter()
        .map(|&a| max_over_gamma(StateFamily::Werner, a, PANEL_FIXED, 0.0, 1.0, 1, opts).map(|(v, _)| (a, v)))
        .collect();
    let description = "largest Werner concurrence over gamma at jt=0.600001 (interpretation of the frozen amplitude)";
    match per_alpha {
        Ok(rows) => {
            let at_fixed = rows.iter().find(|(a, _)| *a == PANEL_FIXED).map(|r| r.1);
            let lo = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
            let hi = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
            let listing = rows
                .iter()
                .map(|(a, v)| format!("alpha={a}: {v:.6}"))
                .collect::<Vec<_>>()
                .join(", ");
            AnchorCheck::graded(
                "case3-concurrence-freeze",
                description,
                0.363468,
                at_fixed,
                0.05,
                opts.tol.compare_pass,
            )
            .with_note(format!("spread over alpha {:.6} ({listing})", hi - lo))
        }
        Err(e) => AnchorCheck::graded("case3-concurrence-freeze", description, 0.363468, None, 0.05, 0.0)
            .with_note(e.to_string()),
    }
}

fn esd_anchors(opts: &SweepOptions) -> Vec<AnchorCheck> {
    let mut out = Vec::new();
    let werner = find_esd_zones(
        &EsdQuery::new(StateFamily::Werner, HamiltonianKind::H1, PANEL_FIXED, PANEL_FIXED),
        opts,
    );
    let desc = "first Werner concurrence-zero onset in jt at gamma=alpha=0.600001";
    out.push(match &werner {
        Ok(r) => {
            let onset = r.zones.first().map(|z| z.onset);
            let zones = r
                .zones
                .iter()
                .map(|z| format!("[{:.6}, {:.6}]", z.onset, z.offset))
                .collect::<Vec<_>>()
                .join(", ");
            AnchorCheck::graded("werner-esd-onset", desc, 0.623712, onset, 0.05, opts.tol.compare_pass)
                .with_note(format!("zones {zones}"))
        }
        Err(e) => AnchorCheck::graded("werner-esd-onset", desc, 0.623712, None, 0.05, 0.0).with_note(e.to_string()),
    });

    let mems = find_esd_zones(
        &EsdQuery::new(StateFamily::Mems, HamiltonianKind::H1, PANEL_FIXED, PANEL_FIXED),
        opts,
    );
    let desc = "first MEMS concurrence zero in jt at gamma=alpha=0.600001";
    out.push(match &mems {
        Ok(r) => match r.zones.first() {
            Some(z) => AnchorCheck::graded(
                "mems-concurrence-zero",
                desc,
                0.787579,
                Some(z.onset),
                0.05,
                opts.tol.compare_pass,
            ),
            None => AnchorCheck::graded("mems-concurrence-zero", desc, 0.787579, None, 0.05, 0.0).with_note(format!(
                "concurrence never drops below {:e}; its minimum is {:.6} at jt={:.6}",
                r.zero_threshold, r.minimum.value, r.minimum.jt
            )),
        },
        Err(e) => {
            AnchorCheck::graded("mems-concurrence-zero", desc, 0.787579, None, 0.05, 0.0).with_note(e.to_string())
        }
    });
    out
}

/// Variation in jt of both measures under the second Hamiltonian, graded
/// against the claim that it leaves the correlations untouched.
fn h2_time_dependence(opts: &SweepOptions) -> AnchorCheck {
    let desc = "largest change over jt in [0, 2] of either measure under h2 (reference: none)";
    let grid = SweepGrid::new(Axis::Jt, 0.0, 2.0, 201)
        .with_fixed(PANEL_FIXED, PANEL_FIXED, 0.0)
        .with_hamiltonians(&[HamiltonianKind::H2]);
    let run = || -> Result<(f64, f64), StateError> {
        let mut spread: f64 = 0.0;
        let mut conj: f64 = 0.0;
        for state in StateFamily::ALL {
            let values = grid.values();
            let rows = par_map(&values, opts.threads, |&x| {
                let p = grid.params_at(x, state, HamiltonianKind::H2);
                let (s, c) = measure_point_with(&p, &opts.tol)?;
                let rho0 = initial_state(&p)?;
                let a = evolve(&rho0, &HamiltonianSpec::new(HamiltonianKind::H2, p.j), p.t)?;
                let b = evolve(&rho0, &HamiltonianSpec::new(HamiltonianKind::H1, -p.j), p.t)?;
                Ok::<_, StateError>((s.value, c.value, a.matrix().max_abs_diff(b.matrix())))
            });
            let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
            let (s0, c0, _) = rows[0];
            for (s, c, d) in rows {
                spread = spread.max((s - s0).abs()).max((c - c0).abs());
                conj = conj.max(d);
            }
        }
        Ok((spread, conj))
    };
    match run() {
        Ok((spread, conj)) => AnchorCheck::graded(
            "h2-time-independence",
            desc,
            0.0,
            Some(spread),
            opts.tol.compare_pass,
            opts.tol.compare_pass,
        )
        .with_note(format!(
            "evolution under h2(j) equals h1(-j) to {conj:.1e}, so h2 produces the same jt dependence as h1"
        )),
        Err(e) => AnchorCheck::graded("h2-time-independence", desc, 0.0, None, 0.0, 0.0).with_note(e.to_string()),
    }
}

/// Closed-form audits for every (family, Hamiltonian) on a 101-point gamma
/// grid, at the origin and at alpha = jt = 0.600001.
pub fn standard_audits(opts: &SweepOptions) -> Vec<DiscrepancyReport> {
    let mut out = Vec::new();
    for (alpha, jt) in [(0.0, 0.0), (PANEL_FIXED, PANEL_FIXED)] {
        let grid = SweepGrid::new(Axis::Gamma, 0.0, 1.0, 101).with_fixed(0.0, alpha, jt);
        for state in StateFamily::ALL {
            for ham in HamiltonianKind::ALL {
                out.push(compare_closed_vs_numeric(state, ham, &grid, opts));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_rule() {
        assert_eq!(
            AnchorCheck::graded("x", "", 1.0, Some(1.0), 0.1, 1e-6).status,
            Status::Pass
        );
        assert_eq!(
            AnchorCheck::graded("x", "", 1.0, Some(1.05), 0.1, 1e-6).status,
            Status::PassWithNote
        );
        assert_eq!(
            AnchorCheck::graded("x", "", 1.0, Some(1.2), 0.1, 1e-6).status,
            Status::Flagged
        );
        assert_eq!(
            AnchorCheck::graded("x", "", 1.0, None, 0.1, 1e-6).status,
            Status::Flagged
        );
    }

    #[test]
    fn anchor_table() {
        let r = verify_anchors(&SweepOptions::default());
        let status = |id: &str| r.get(id).unwrap_or_else(|| panic!("missing {id}")).status;
        assert_eq!(status("werner-endpoint"), Status::Pass);
        assert_eq!(status("werner-endpoint-concurrence"), Status::Pass);
        assert_eq!(status("werner-concurrence-threshold"), Status::Pass);
        assert_eq!(status("mems-sqe-origin"), Status::PassWithNote);
        assert_eq!(status("h2-time-independence"), Status::Flagged);
        assert_eq!(status("mems-concurrence-zero"), Status::Flagged);
        let sce = r.get("werner-sce").unwrap().computed.unwrap();
        assert!((sce - 0.4630).abs() < 0.005);
        assert_eq!(r.status(), Status::Flagged);
        assert!(r.anchors.len() >= 12);
    }

    #[test]
    fn audits_cover_all_pairs() {
        let a = standard_audits(&SweepOptions::default());
        assert_eq!(a.len(), 8);
        assert!(a
            .iter()
            .all(|r| r.measures.len() == 2 && r.measures[0].rows.len() == 101));
    }
}
