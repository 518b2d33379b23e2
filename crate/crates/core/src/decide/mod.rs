//! Satisfiability deciders and the dispatch over them.

pub mod graph;
pub mod monadic;
pub mod oracle;

use std::str::FromStr;

use thiserror::Error;

use crate::atp::{AtpError, Prover, SzsStatus};
use crate::fol::{to_tptp, Names};
use crate::syntax::Sentence;

pub use graph::{
    decide_graph, forbidden_configs, min_config_size, Condition, ConfigKind, ConfigSummary, ForbiddenConfig,
    LiteralGraph,
};
pub use monadic::decide_monadic;
pub use oracle::{bounded_model_search, holds, Model, OracleConfig, OracleError};

pub use crate::atp::ProofStats;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Satisfiable { witness: Option<Model> },
    Unsatisfiable { config: Option<ForbiddenConfig>, proof: Option<ProofStats> },
    Unknown,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Satisfiable { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsatisfiable { .. })
    }

    /// `Some(true)` for satisfiable, `Some(false)` for unsatisfiable.
    pub fn bit(&self) -> Option<bool> {
        match self {
            Verdict::Satisfiable { .. } => Some(true),
            Verdict::Unsatisfiable { .. } => Some(false),
            Verdict::Unknown => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum DecideError {
    #[error("the {method} decider does not accept sentence {sentence}")]
    WrongFragment { method: &'static str, sentence: usize },
    #[error("no theorem prover is configured")]
    ProverUnavailable,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Prover(#[from] AtpError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Graph,
    Monadic,
    Oracle,
    Atp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Graph => "graph",
            Method::Monadic => "monadic",
            Method::Oracle => "oracle",
            Method::Atp => "atp",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graph" => Ok(Method::Graph),
            "monadic" => Ok(Method::Monadic),
            "oracle" => Ok(Method::Oracle),
            "atp" => Ok(Method::Atp),
            _ => Err(format!("unknown method {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Backend<'a> {
    Graph,
    Monadic,
    Oracle(&'a OracleConfig),
    Atp(Option<&'a Prover>),
}

/// Runs the prover on the first-order translation. A timeout yields
/// [`Verdict::Unknown`]; an unsatisfiable result carries proof statistics
/// when a refutation could be read from the output.
pub fn decide_atp(sentences: &[Sentence], prover: &Prover) -> Result<Verdict, DecideError> {
    let doc = to_tptp(sentences, Names::Abstract, None);
    let out = prover.run(&doc)?;
    Ok(match out.status {
        SzsStatus::Satisfiable => Verdict::Satisfiable { witness: None },
        SzsStatus::Unsatisfiable => {
            Verdict::Unsatisfiable { config: None, proof: crate::atp::proof_stats(&out.raw, sentences.len()).ok() }
        }
        SzsStatus::Timeout => Verdict::Unknown,
        SzsStatus::Error(detail) => return Err(AtpError::ProverError(detail).into()),
    })
}

pub fn decide(sentences: &[Sentence], backend: Backend<'_>) -> Result<Verdict, DecideError> {
    match backend {
        Backend::Graph => decide_graph(sentences),
        Backend::Monadic => decide_monadic(sentences),
        Backend::Oracle(cfg) => Ok(bounded_model_search(sentences, cfg)?),
        Backend::Atp(Some(p)) => decide_atp(sentences, p),
        Backend::Atp(None) => Err(DecideError::ProverUnavailable),
    }
}
