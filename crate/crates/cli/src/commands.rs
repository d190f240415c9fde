use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use entlab_core::analysis::{
    find_esd_zones, find_sce, standard_audits, sweep, verify_anchors, AnchorReport, Axis, CrossingResult, EsdQuery,
    EsdReport, MeasureRecord, SceQuery, Status, SweepGrid, SweepOptions, PANEL_FIXED,
};
use entlab_core::closed_form::DiscrepancyReport;
use entlab_core::output::{format_value, write_records_csv, write_table_csv};
use entlab_core::{HamiltonianKind, MeasureName, StateFamily};
use serde::Serialize;

use crate::config::{Command, Failure, Format, HamSel, RunConfig, StateSel};

const PANEL_VALUES: [f64; 4] = [0.200001, 0.400001, 0.600001, 0.800001];
const DEFAULT_STEPS: usize = 401;

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let command = cfg
        .command
        .ok_or_else(|| Failure::usage("no command given (sweep, sce, esd, verify, figures)"))?;
    if cfg.threads == Some(0) {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let opts = SweepOptions {
        threads: cfg.threads,
        tol: cfg.tolerances.clone().unwrap_or_default(),
        constants: cfg.constants.unwrap_or_default(),
    };
    match command {
        Command::Sweep => run_sweep(cfg, &opts),
        Command::Sce => run_sce(cfg, &opts),
        Command::Esd => run_esd(cfg, &opts),
        Command::Verify => run_verify(cfg, &opts),
        Command::Figures => run_figures(cfg, &opts),
    }
}

fn format(cfg: &RunConfig) -> Format {
    cfg.format.unwrap_or_default()
}

fn families(cfg: &RunConfig) -> Vec<StateFamily> {
    cfg.state.unwrap_or(StateSel::Both).families()
}

fn hamiltonians(cfg: &RunConfig) -> Vec<HamiltonianKind> {
    cfg.hamiltonian.unwrap_or(HamSel::H1).kinds()
}

/// Opens `--out` as a file, or stdout when absent.
fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let f = File::create(p).map_err(|e| Failure::usage(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn out_dir(cfg: &RunConfig, default: &str) -> Result<PathBuf, Failure> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(default));
    fs::create_dir_all(&dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn run_sweep(cfg: &RunConfig, opts: &SweepOptions) -> Result<(), Failure> {
    let axis = cfg.axis.unwrap_or(Axis::Gamma);
    let default_stop = if axis == Axis::Jt { 2.0 } else { 1.0 };
    let mut grid = SweepGrid::new(
        axis,
        cfg.start.unwrap_or(0.0),
        cfg.stop.unwrap_or(default_stop),
        cfg.steps.unwrap_or(DEFAULT_STEPS),
    )
    .with_fixed(
        cfg.gamma.unwrap_or(0.0),
        cfg.alpha.unwrap_or(0.0),
        cfg.jt.unwrap_or(0.0),
    )
    .with_states(&families(cfg))
    .with_hamiltonians(&hamiltonians(cfg))
    .with_closed(cfg.closed.unwrap_or(false));
    grid.j = cfg.j.unwrap_or(1.0);

    let result = sweep(&grid, opts)?;
    for flag in &result.flags {
        eprintln!("flag: {flag}");
    }
    match format(cfg) {
        Format::Csv => {
            let mut w = sink(cfg.out.as_deref())?;
            write_records_csv(&mut w, &result.records)?;
            w.flush()?;
            Ok(())
        }
        Format::Json => write_json(cfg.out.as_deref(), &result),
    }
}

#[derive(Serialize)]
struct SceRow {
    state: StateFamily,
    hamiltonian: HamiltonianKind,
    alpha: f64,
    jt: f64,
    crossing: CrossingResult,
}

fn run_sce(cfg: &RunConfig, opts: &SweepOptions) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for state in families(cfg) {
        for ham in hamiltonians(cfg) {
            let mut q = SceQuery::new(state, ham, cfg.alpha.unwrap_or(0.0), cfg.jt.unwrap_or(0.0));
            q.lo = cfg.start.unwrap_or(0.0);
            q.hi = cfg.stop.unwrap_or(1.0);
            q.j = cfg.j.unwrap_or(1.0);
            let crossing = find_sce(&q, opts).map_err(|e| Failure::from(e).prefixed(&format!("{state}/{ham}")))?;
            rows.push(SceRow {
                state,
                hamiltonian: ham,
                alpha: q.alpha,
                jt: q.jt,
                crossing,
            });
        }
    }
    match format(cfg) {
        Format::Json => write_json(cfg.out.as_deref(), &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(cfg.out.as_deref())?);
            w.write_record([
                "state",
                "hamiltonian",
                "alpha",
                "jt",
                "gamma",
                "bracket_lo",
                "bracket_hi",
                "residual",
                "iterations",
            ])?;
            for r in &rows {
                w.write_record([
                    r.state.to_string(),
                    r.hamiltonian.to_string(),
                    format_value(r.alpha),
                    format_value(r.jt),
                    format_value(r.crossing.location),
                    format_value(r.crossing.bracket.0),
                    format_value(r.crossing.bracket.1),
                    format_value(r.crossing.residual),
                    r.crossing.iterations.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn run_esd(cfg: &RunConfig, opts: &SweepOptions) -> Result<(), Failure> {
    let mut reports: Vec<EsdReport> = Vec::new();
    for state in families(cfg) {
        for ham in hamiltonians(cfg) {
            let mut q = EsdQuery::new(
                state,
                ham,
                cfg.gamma.unwrap_or(PANEL_FIXED),
                cfg.alpha.unwrap_or(PANEL_FIXED),
            )
            .with_range(
                cfg.start.unwrap_or(0.0),
                cfg.stop.unwrap_or(2.0),
                cfg.steps.unwrap_or(DEFAULT_STEPS),
            );
            q.j = cfg.j.unwrap_or(1.0);
            reports.push(find_esd_zones(&q, opts)?);
        }
    }
    match format(cfg) {
        Format::Json => write_json(cfg.out.as_deref(), &reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(cfg.out.as_deref())?);
            w.write_record([
                "state",
                "hamiltonian",
                "gamma",
                "alpha",
                "kind",
                "jt_start",
                "jt_end",
                "concurrence",
            ])?;
            for r in &reports {
                let lead = [
                    r.query.state.to_string(),
                    r.query.hamiltonian.to_string(),
                    format_value(r.query.gamma),
                    format_value(r.query.alpha),
                ];
                for z in &r.zones {
                    let mut row = lead.to_vec();
                    row.extend(["zone".into(), format_value(z.onset), format_value(z.offset), "0".into()]);
                    w.write_record(row)?;
                }
                let mut row = lead.to_vec();
                row.extend([
                    "minimum".into(),
                    format_value(r.minimum.jt),
                    format_value(r.minimum.jt),
                    format_value(r.minimum.value),
                ]);
                w.write_record(row)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    anchors: &'a AnchorReport,
    audits: &'a [DiscrepancyReport],
}

fn print_anchor_table(report: &AnchorReport, audits: &[DiscrepancyReport]) {
    println!(
        "{:<15} {:<30} {:>12} {:>12}  note",
        "status", "anchor", "reference", "computed"
    );
    for a in &report.anchors {
        let computed = a.computed.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<15} {:<30} {:>12.6} {:>12}  {}",
            a.status.as_str(),
            a.id,
            a.reference,
            computed,
            a.note
        );
    }
    println!();
    println!(
        "{:<15} {:<6} {:<3} {:<18} {:<15} {:>12} {:>10}",
        "status", "state", "ham", "alpha=jt", "measure", "max dev", "scale"
    );
    for r in audits {
        for m in &r.measures {
            let scale = m
                .best_fit_scale
                .map(|s| format!("{s:.4}"))
                .unwrap_or_else(|| "-".into());
            println!(
                "{:<15} {:<6} {:<3} {:<18} {:<15} {:>12.3e} {:>10}",
                m.status.as_str(),
                r.state.as_str(),
                r.hamiltonian.as_str(),
                format_value(r.grid.alpha),
                m.measure.as_str(),
                m.max_abs_deviation,
                scale
            );
        }
    }
}

fn run_verify(cfg: &RunConfig, opts: &SweepOptions) -> Result<(), Failure> {
    let report = verify_anchors(opts);
    let audits = standard_audits(opts);
    print_anchor_table(&report, &audits);

    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
        match format(cfg) {
            Format::Json => write_json(
                Some(&dir.join("verify.json")),
                &VerifyOutput {
                    anchors: &report,
                    audits: &audits,
                },
            )?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(sink(Some(&dir.join("anchors.csv")))?);
                w.write_record([
                    "anchor",
                    "status",
                    "reference",
                    "computed",
                    "tolerance",
                    "deviation",
                    "note",
                ])?;
                for a in &report.anchors {
                    w.write_record([
                        a.id.clone(),
                        a.status.to_string(),
                        format_value(a.reference),
                        a.computed.map(format_value).unwrap_or_default(),
                        format_value(a.tolerance),
                        a.deviation.map(format_value).unwrap_or_default(),
                        a.note.clone(),
                    ])?;
                }
                w.flush()?;
                let mut w = csv::Writer::from_writer(sink(Some(&dir.join("audits.csv")))?);
                w.write_record([
                    "state",
                    "hamiltonian",
                    "alpha",
                    "jt",
                    "measure",
                    "status",
                    "max_abs_deviation",
                    "argmax_gamma",
                    "best_fit_scale",
                    "max_deviation_after_scale",
                    "failed_points",
                    "note",
                ])?;
                for r in &audits {
                    for m in &r.measures {
                        w.write_record([
                            r.state.to_string(),
                            r.hamiltonian.to_string(),
                            format_value(r.grid.alpha),
                            format_value(r.grid.jt),
                            m.measure.to_string(),
                            m.status.to_string(),
                            format_value(m.max_abs_deviation),
                            m.argmax.map(format_value).unwrap_or_default(),
                            m.best_fit_scale.map(format_value).unwrap_or_default(),
                            m.max_deviation_after_scale.map(format_value).unwrap_or_default(),
                            m.failed_points.to_string(),
                            m.note.clone(),
                        ])?;
                    }
                }
                w.flush()?;
                write_json(Some(&dir.join("audits.json")), &audits)?;
            }
        }
    }

    if cfg.strict.unwrap_or(false) && report.status() == Status::Flagged {
        let ids: Vec<&str> = report.flagged().map(|a| a.id.as_str()).collect();
        return Err(Failure {
            code: Failure::STRICT,
            message: format!("strict mode: flagged anchors: {}", ids.join(", ")),
        });
    }
    Ok(())
}

/// One figure panel: the axis column followed by SE_W, SE_M, C_W, C_M.
fn panel(grid: SweepGrid, opts: &SweepOptions) -> Result<Vec<Vec<f64>>, Failure> {
    let grid = grid.with_states(&StateFamily::ALL).with_closed(false);
    let out = sweep(&grid, opts)?;
    let value_of = |r: &MeasureRecord, state: StateFamily, measure: MeasureName| {
        debug_assert_eq!((r.state, r.measure), (state, measure));
        r.value
    };
    Ok(out
        .records
        .chunks(4)
        .map(|c| {
            let x = match grid.axis {
                Axis::Gamma => c[0].gamma,
                Axis::Alpha => c[0].alpha,
                Axis::Jt => c[0].jt,
            };
            vec![
                x,
                value_of(&c[0], StateFamily::Werner, MeasureName::SquashedProxy),
                value_of(&c[2], StateFamily::Mems, MeasureName::SquashedProxy),
                value_of(&c[1], StateFamily::Werner, MeasureName::Concurrence),
                value_of(&c[3], StateFamily::Mems, MeasureName::Concurrence),
            ]
        })
        .collect())
}

fn run_figures(cfg: &RunConfig, opts: &SweepOptions) -> Result<(), Failure> {
    let dir = out_dir(cfg, "figures")?;
    let steps = cfg.steps.unwrap_or(DEFAULT_STEPS);
    let j = cfg.j.unwrap_or(1.0);
    let mut written = Vec::new();
    for ham in hamiltonians(cfg) {
        let suffix = if ham == HamiltonianKind::H1 { "" } else { "_h2" };
        let mut jobs: Vec<(String, SweepGrid)> = vec![(
            format!("fig1{suffix}.csv"),
            SweepGrid::new(Axis::Gamma, 0.0, 1.0, steps).with_fixed(0.0, 0.0, 0.0),
        )];
        for v in PANEL_VALUES {
            let tag = format_value(v);
            jobs.push((
                format!("fig2_jt{tag}{suffix}.csv"),
                SweepGrid::new(Axis::Gamma, 0.0, 1.0, steps).with_fixed(0.0, PANEL_FIXED, v),
            ));
            jobs.push((
                format!("fig3_alpha{tag}{suffix}.csv"),
                SweepGrid::new(Axis::Gamma, 0.0, 1.0, steps).with_fixed(0.0, v, PANEL_FIXED),
            ));
            jobs.push((
                format!("fig4_gamma{tag}{suffix}.csv"),
                SweepGrid::new(Axis::Jt, 0.0, 2.0, steps).with_fixed(v, PANEL_FIXED, 0.0),
            ));
            jobs.push((
                format!("fig5_alpha{tag}{suffix}.csv"),
                SweepGrid::new(Axis::Jt, 0.0, 2.0, steps).with_fixed(PANEL_FIXED, v, 0.0),
            ));
        }
        for (name, mut grid) in jobs {
            grid.j = j;
            let grid = grid.with_hamiltonians(&[ham]);
            let header = [grid.axis.as_str(), "SE_W", "SE_M", "C_W", "C_M"];
            let rows = panel(grid, opts)?;
            let path = dir.join(&name);
            let mut w = sink(Some(&path))?;
            write_table_csv(&mut w, &header, &rows)?;
            w.flush()?;
            written.push(name);
        }
    }
    written.sort();
    for name in written {
        println!("{}", dir.join(name).display());
    }
    Ok(())
}

impl Failure {
    fn prefixed(mut self, prefix: &str) -> Self {
        self.message = format!("{prefix}: {}", self.message);
        self
    }
}
