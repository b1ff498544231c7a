//! Top-K accuracy with bootstrap CIs and stratified breakdowns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matching::{match_diagnosis, MatchPolicy};
use super::stats::bootstrap_ci;
use super::{EvalConfig, EvalError, PredictionSet};
use crate::ontology::OntologyGraph;
use crate::term::TermId;

/// One case presented to the harness: predictions, the confirmed
/// diagnosis, and optional stratum/category labels for breakdowns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalCase {
    pub predictions: PredictionSet,
    pub truth: TermId,
    pub stratum: Option<String>,
    pub category: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffAccuracy {
    pub k: usize,
    pub accuracy: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_cases: usize,
    pub per_cutoff: Vec<CutoffAccuracy>,
    pub per_stratum: BTreeMap<String, Vec<CutoffAccuracy>>,
    pub per_category: BTreeMap<String, Vec<CutoffAccuracy>>,
    pub excluded_predictions: usize,
    pub config: EvalConfig,
}

fn accuracy_rows(
    hit_ranks: &[Option<usize>],
    cfg: &EvalConfig,
) -> Result<Vec<CutoffAccuracy>, EvalError> {
    let mut rows = Vec::with_capacity(cfg.k_cutoffs.len());
    for &k in &cfg.k_cutoffs {
        let hits: Vec<f64> = hit_ranks
            .iter()
            .map(|r| match r {
                Some(rank) if *rank <= k => 1.0,
                _ => 0.0,
            })
            .collect();
        let boot = bootstrap_ci(&hits, cfg.bootstrap_resamples, cfg.ci_level, cfg.rng_seed)?;
        rows.push(CutoffAccuracy {
            k,
            accuracy: boot.mean,
            ci_lower: boot.lower,
            ci_upper: boot.upper,
            stderr: boot.stderr,
        });
    }
    Ok(rows)
}

/// Best (lowest) matching rank for one case, if any kept prediction
/// matches the truth under the policy.
pub(crate) fn best_match_rank(
    case: &EvalCase,
    disease_ontology: &OntologyGraph,
    policy: MatchPolicy,
) -> Result<Option<usize>, EvalError> {
    let mut best: Option<usize> = None;
    for (position, pred) in case.predictions.kept().enumerate() {
        let code = pred.normalized.as_ref().expect("kept predictions are normalized");
        if match_diagnosis(code, &case.truth, disease_ontology, policy)? {
            best = Some(best.map_or(position + 1, |b| b.min(position + 1)));
            break; // positions ascend, first hit is best
        }
    }
    Ok(best)
}

/// Computes per-cutoff accuracy (fraction of cases with a matching
/// prediction at rank <= k) with bootstrap CIs, plus per-stratum and
/// per-category sub-reports for cases that carry those labels.
pub fn topk_accuracy(
    cases: &[EvalCase],
    disease_ontology: &OntologyGraph,
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    if cases.is_empty() {
        return Err(EvalError::EmptyCaseSet);
    }
    let policy = MatchPolicy::from_config(cfg);
    let mut hit_ranks = Vec::with_capacity(cases.len());
    let mut excluded = 0usize;
    for case in cases {
        excluded += case
            .predictions
            .predictions
            .iter()
            .filter(|p| p.excluded())
            .count();
        hit_ranks.push(best_match_rank(case, disease_ontology, policy)?);
    }

    let per_cutoff = accuracy_rows(&hit_ranks, cfg)?;

    let group_rows = |label_of: &dyn Fn(&EvalCase) -> Option<String>| -> Result<
        BTreeMap<String, Vec<CutoffAccuracy>>,
        EvalError,
    > {
        let mut groups: BTreeMap<String, Vec<Option<usize>>> = BTreeMap::new();
        for (case, &rank) in cases.iter().zip(&hit_ranks) {
            if let Some(label) = label_of(case) {
                groups.entry(label).or_default().push(rank);
            }
        }
        groups
            .into_iter()
            .map(|(label, ranks)| Ok((label, accuracy_rows(&ranks, cfg)?)))
            .collect()
    };

    Ok(EvalReport {
        n_cases: cases.len(),
        per_cutoff,
        per_stratum: group_rows(&|c: &EvalCase| c.stratum.clone())?,
        per_category: group_rows(&|c: &EvalCase| c.category.clone())?,
        excluded_predictions: excluded,
        config: cfg.clone(),
    })
}
