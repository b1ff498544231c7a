//! Quantifying the share of diagnostic evidence that has no ontology
//! mapping (imaging findings, interventions, functional tests).

use serde::{Deserialize, Serialize};

use super::stats::percentile;
use super::EvalError;
use crate::ontology::OntologyGraph;
use crate::term::TermId;

/// Per-case split of extracted features into HPO-mappable and not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceProfile {
    pub case_id: String,
    pub hpo_features: Vec<(String, TermId)>,
    /// Unmapped features with an optional externally supplied category tag.
    pub non_hpo_features: Vec<(String, Option<String>)>,
    pub non_hpo_fraction: f64,
}

/// Routes each feature through label/synonym matching; unmapped features
/// are recorded as non-HPO evidence.
pub fn profile_evidence(
    graph: &OntologyGraph,
    case_id: &str,
    features: &[String],
) -> Result<EvidenceProfile, EvalError> {
    if features.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut hpo = Vec::new();
    let mut non_hpo = Vec::new();
    for feature in features {
        match graph.map_feature_to_hpo(feature)? {
            Some(id) => hpo.push((feature.clone(), id)),
            None => non_hpo.push((feature.clone(), None)),
        }
    }
    let fraction = non_hpo.len() as f64 / features.len() as f64;
    Ok(EvidenceProfile {
        case_id: case_id.to_string(),
        hpo_features: hpo,
        non_hpo_features: non_hpo,
        non_hpo_fraction: fraction,
    })
}

/// Cohort-level distribution of non-HPO fractions. Quantiles use linear
/// interpolation over the sorted fractions (type 7).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSummary {
    pub n_cases: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

pub fn summarize_evidence(profiles: &[EvidenceProfile]) -> Result<EvidenceSummary, EvalError> {
    if profiles.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut fractions: Vec<f64> = profiles.iter().map(|p| p.non_hpo_fraction).collect();
    fractions.sort_by(|a, b| a.partial_cmp(b).expect("fractions are finite"));
    Ok(EvidenceSummary {
        n_cases: profiles.len(),
        median: percentile(&fractions, 0.5),
        q1: percentile(&fractions, 0.25),
        q3: percentile(&fractions, 0.75),
    })
}
