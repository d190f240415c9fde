use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use entlab_core::analysis::Axis;
use entlab_core::closed_form::FormulaConstants;
use entlab_core::{AnalysisError, HamiltonianKind, StateFamily, Tolerances};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Sweep,
    Sce,
    Esd,
    Verify,
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSel {
    Werner,
    Mems,
    Both,
}

impl StateSel {
    pub fn families(self) -> Vec<StateFamily> {
        match self {
            StateSel::Werner => vec![StateFamily::Werner],
            StateSel::Mems => vec![StateFamily::Mems],
            StateSel::Both => StateFamily::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamSel {
    H1,
    H2,
    Both,
}

impl HamSel {
    pub fn kinds(self) -> Vec<HamiltonianKind> {
        match self {
            HamSel::H1 => vec![HamiltonianKind::H1],
            HamSel::H2 => vec![HamiltonianKind::H2],
            HamSel::Both => HamiltonianKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything a run needs. Every field is optional so a config file and the
/// command line can be layered; command-line values win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub state: Option<StateSel>,
    pub hamiltonian: Option<HamSel>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub jt: Option<f64>,
    pub j: Option<f64>,
    pub axis: Option<Axis>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub strict: Option<bool>,
    pub threads: Option<usize>,
    pub closed: Option<bool>,
    pub tolerances: Option<Tolerances>,
    pub constants: Option<FormulaConstants>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f),)* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("bad config {}: {e}", path.display())))
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay_fields!(base, top; command, state, hamiltonian, alpha, gamma, jt, j, axis, start, stop,
            steps, out, format, strict, threads, closed, tolerances, constants)
    }
}

/// An error carrying its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const USAGE: u8 = 1;
    pub const NUMERICAL: u8 = 2;
    pub const STRICT: u8 = 3;

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: Self::USAGE,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: Self::NUMERICAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InvalidGrid(_) => Failure::usage(e.to_string()),
            _ => Failure::numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::usage(format!("output: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(format!("output: {e}"))
    }
}
