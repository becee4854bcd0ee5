//! Claim suites that cross-check presentations, invariant rings, subrings and
//! group-theoretic rank predictions, with deterministic text and JSON reports.

mod claims;
mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use render::{render_json, render_text};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("s-max must be between 1 and 16 (got {0})")]
    SMax(u32),
    #[error("rank s-max must be between 1 and 16 (got {0})")]
    RankSMax(u32),
    #[error("m-max must be between 1 and 12 (got {0})")]
    MMax(u32),
    #[error("k-max must be between 1 and 12 (got {0})")]
    KMax(u32),
    #[error("degree bound must be at least 4 (got {0})")]
    DegreeBound(u64),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown output format `{0}`")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    RankVsOracle,
    Invariant,
    Subring,
    Homogeneity,
    FgRecursion,
    Icosahedral,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::RankVsOracle,
        Suite::Invariant,
        Suite::Subring,
        Suite::Homogeneity,
        Suite::FgRecursion,
        Suite::Icosahedral,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::RankVsOracle => "rank_vs_oracle",
            Suite::Invariant => "invariant",
            Suite::Subring => "subring",
            Suite::Homogeneity => "homogeneity",
            Suite::FgRecursion => "fg_recursion",
            Suite::Icosahedral => "icosahedral",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(ConfigError::UnknownFormat(other.to_string())),
        }
    }
}

/// What to run and how to report it.
///
/// `s_max` bounds every suite; `rank_s_max` bounds the cheap rank claims
/// (`Q_8`, cyclic, binary tetrahedral) and the homogeneity sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub s_max: u32,
    pub rank_s_max: u32,
    pub m_max: u32,
    pub k_max: u32,
    pub degree_bound: u64,
    pub suites: BTreeSet<Suite>,
    pub output_format: OutputFormat,
    pub allow_discrepancies: bool,
    pub timings: bool,
    /// Cap on commuting tuples visited by one oracle count.
    pub oracle_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            s_max: 2,
            rank_s_max: 3,
            m_max: 3,
            k_max: 3,
            degree_bound: 40,
            suites: Suite::ALL.into_iter().collect(),
            output_format: OutputFormat::Text,
            allow_discrepancies: false,
            timings: false,
            oracle_budget: 50_000,
        }
    }
}

impl RunConfig {
    pub fn with_suites(suites: impl IntoIterator<Item = Suite>) -> Self {
        RunConfig { suites: suites.into_iter().collect(), ..RunConfig::default() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(1..=16).contains(&self.s_max) {
            return Err(ConfigError::SMax(self.s_max));
        }
        if !(1..=16).contains(&self.rank_s_max) {
            return Err(ConfigError::RankSMax(self.rank_s_max));
        }
        if !(1..=12).contains(&self.m_max) {
            return Err(ConfigError::MMax(self.m_max));
        }
        if !(1..=12).contains(&self.k_max) {
            return Err(ConfigError::KMax(self.k_max));
        }
        if self.degree_bound < 4 {
            return Err(ConfigError::DegreeBound(self.degree_bound));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Verified,
    Refuted,
    /// Computed and reported; no expected value is asserted.
    Recorded,
    Skipped(String),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Verified => f.write_str("VERIFIED"),
            Status::Refuted => f.write_str("REFUTED"),
            Status::Recorded => f.write_str("RECORDED"),
            Status::Skipped(reason) => write!(f, "SKIPPED({reason})"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Either a polynomial (in the ring named by the claim's inputs) or a tuple of integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Integers(Vec<u64>),
    Poly(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Integers(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
            Witness::Poly(p) => f.write_str(p),
        }
    }
}

pub type Inputs = BTreeMap<String, serde_json::Value>;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClaimReport {
    pub claim_id: String,
    pub inputs: Inputs,
    pub status: Status,
    pub witness: Option<Witness>,
    pub elapsed_ms: Option<u64>,
    /// A recorded comparison whose sides disagree.
    #[serde(skip)]
    pub discrepancy: bool,
}

/// Runs every claim of the selected suites, in parallel, sorted by claim id.
pub fn run_suite(config: &RunConfig) -> Result<Vec<ClaimReport>, ConfigError> {
    config.validate()?;
    let claims = claims::collect(config);
    let mut reports: Vec<ClaimReport> = claims
        .into_par_iter()
        .map(|claim| {
            let start = Instant::now();
            let outcome = (claim.eval)();
            let elapsed_ms = config.timings.then(|| start.elapsed().as_millis() as u64);
            let (status, witness, discrepancy) = match outcome {
                Ok(o) => (o.status, o.witness, o.discrepancy),
                Err(e) => (Status::Skipped(e.to_string()), None, false),
            };
            ClaimReport { claim_id: claim.id, inputs: claim.inputs, status, witness, elapsed_ms, discrepancy }
        })
        .collect();
    reports.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    Ok(reports)
}

/// 0 when nothing is refuted and, unless discrepancies are allowed, no
/// recorded comparison disagrees; 1 otherwise.
pub fn exit_code(reports: &[ClaimReport], allow_discrepancies: bool) -> i32 {
    let failed = reports
        .iter()
        .any(|r| r.status == Status::Refuted || (!allow_discrepancies && r.status == Status::Recorded && r.discrepancy));
    i32::from(failed)
}

pub fn render(reports: &[ClaimReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => render_text(reports),
        OutputFormat::Json => render_json(reports),
    }
}
