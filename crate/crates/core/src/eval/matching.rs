//! Exact and hierarchical diagnosis matching over the disease ontology.

use super::{EvalConfig, EvalError};
use crate::ontology::OntologyGraph;
use crate::term::TermId;

/// How hierarchical credit is granted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchPolicy {
    Exact,
    /// Prediction may be an ancestor of the truth within the given depth
    /// (`None` = unlimited).
    Hierarchical { max_depth: Option<usize> },
}

impl MatchPolicy {
    pub fn from_config(cfg: &EvalConfig) -> MatchPolicy {
        if cfg.hierarchical {
            MatchPolicy::Hierarchical {
                max_depth: cfg.max_ancestor_depth,
            }
        } else {
            MatchPolicy::Exact
        }
    }
}

/// True iff the prediction equals the truth, or (hierarchical mode) is an
/// ancestor of the truth in the disease hierarchy. A prediction that is a
/// *child* of the truth is never credited.
pub fn match_diagnosis(
    pred: &TermId,
    truth: &TermId,
    disease_ontology: &OntologyGraph,
    policy: MatchPolicy,
) -> Result<bool, EvalError> {
    if pred == truth {
        return Ok(true);
    }
    match policy {
        MatchPolicy::Exact => Ok(false),
        MatchPolicy::Hierarchical { max_depth } => {
            if !disease_ontology.contains(truth) {
                return Err(EvalError::UnknownDisease(truth.clone()));
            }
            let ancestors = match max_depth {
                Some(depth) => disease_ontology.ancestors_within(truth, depth)?,
                None => disease_ontology.ancestors(truth, false)?,
            };
            Ok(ancestors.contains(pred))
        }
    }
}
