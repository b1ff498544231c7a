//! The diagnostic evaluation protocol: prediction parsing and
//! normalization, exact/hierarchical matching, Top-K accuracy with
//! bootstrap confidence intervals, scorecard aggregation, surrogate
//! interpretability, and evidence profiling.

mod evidence;
mod finder;
mod matching;
mod predictions;
mod report;
mod stats;
mod surrogate;

pub use evidence::{profile_evidence, summarize_evidence, EvidenceProfile, EvidenceSummary};
pub use finder::{aggregate_finder, FinderAggregate, FinderDimension, FinderScorecard};
pub use matching::{match_diagnosis, MatchPolicy};
pub use predictions::{
    normalize_predictions, parse_prediction_list, Prediction, PredictionSet, MAX_PREDICTIONS,
};
pub use report::{topk_accuracy, CutoffAccuracy, EvalCase, EvalReport};
pub use stats::{bootstrap_ci, compare_groups, BootstrapResult};
pub use surrogate::{fit_global_surrogate, SurrogateFit};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::OntologyError;
use crate::term::TermId;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no list structure found in model output")]
    NoListFound,
    #[error("empty input")]
    EmptyInput,
    #[error("no cases to evaluate")]
    EmptyCaseSet,
    #[error("case {0} has no truth diagnosis")]
    MissingTruth(String),
    #[error("unknown disease {0}")]
    UnknownDisease(TermId),
    #[error("groups are degenerate: {0}")]
    DegenerateVariance(String),
    #[error("scorecard for case {case_id} is missing dimension {dimension}")]
    IncompleteScorecard { case_id: String, dimension: String },
    #[error("scorecard score {score} out of range 1..=5")]
    ScoreOutOfRange { score: i64 },
    #[error("surrogate design matrix unusable: {0}")]
    BadDesign(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Evaluation knobs, defaulted to the protocol constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub k_cutoffs: Vec<usize>,
    pub hierarchical: bool,
    /// `None` = unlimited ancestor depth; `Some(1)` = immediate parents.
    pub max_ancestor_depth: Option<usize>,
    pub bootstrap_resamples: usize,
    pub ci_level: f64,
    pub rng_seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            k_cutoffs: vec![1, 3, 5, 10, 20],
            hierarchical: true,
            max_ancestor_depth: Some(1),
            bootstrap_resamples: 1000,
            ci_level: 0.95,
            rng_seed: 0,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.k_cutoffs.is_empty() {
            return Err("k_cutoffs must be nonempty".to_string());
        }
        if self.k_cutoffs.windows(2).any(|w| w[0] >= w[1]) {
            return Err("k_cutoffs must be strictly ascending".to_string());
        }
        if *self.k_cutoffs.last().unwrap() > predictions::MAX_PREDICTIONS {
            return Err(format!(
                "cutoffs beyond {} are meaningless",
                predictions::MAX_PREDICTIONS
            ));
        }
        if !(0.0..1.0).contains(&self.ci_level) || self.ci_level <= 0.0 {
            return Err("ci_level must be in (0,1)".to_string());
        }
        Ok(())
    }
}
