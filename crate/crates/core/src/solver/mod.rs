//! Approximate solutions over `k[[x,y]]` refined into exact ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ideal::AFn;

pub mod linalg;
mod one_var;
mod pipeline;
mod probe;
mod selection;
mod tougeron;

pub use one_var::{
    build_one_var_system, jet_search, reconstruct, solve_one_var, solve_univariate, DegreeCheck, JetLimits,
    OneVarSummary, OneVarSystem,
};
pub use pipeline::{approximate_solve, solve_problem, Measurements, PipelineInfo, Problem};
pub use probe::{artin_probe, isolated_growth_audit, GrowthAudit, ProbeConfig, ProbeReport, ProbeRow};
pub use selection::{select_minor, MinorSelection};
pub use tougeron::{tougeron_refine, CertificateStatus, RefinementCertificate};

/// How the one-variable system is solved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Newton iteration from the prepared point.
    #[default]
    Newton,
    /// Exhaustive search over jets modulo `x^L`; finite fields only.
    JetSearch,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "newton" => Ok(Strategy::Newton),
            "jet-search" => Ok(Strategy::JetSearch),
            _ => Err(Error::Config(format!("unknown strategy `{s}` (expected newton or jet-search)"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Newton => "newton",
            Strategy::JetSearch => "jet-search",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Certification precision `N`; defaults to the precision of `z̄`.
    pub precision: Option<u32>,
    /// Requested closeness `c`: the solution agrees with `z̄` modulo `m^c`.
    pub target_order: u32,
    pub a_fn: AFn,
    pub strategy: Strategy,
    /// Seed for the random shears tried over finite fields.
    pub seed: u64,
    pub jets: JetLimits,
    /// Refuse to run when `ord f(z̄) < γ(m,d,s,c)`.
    pub enforce_gamma: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            precision: None,
            target_order: 1,
            a_fn: AFn::default(),
            strategy: Strategy::Newton,
            seed: 0,
            jets: JetLimits::default(),
            enforce_gamma: false,
        }
    }
}
