//! Phenotype-driven disease scoring and cohort difficulty analysis.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::DiseaseAnnotationSet;
use crate::ontology::{OntologyError, OntologyGraph, TermIC};
use crate::term::TermId;

#[derive(Debug, Error)]
pub enum RankingError {
    #[error("both term sets must be nonempty")]
    EmptySet,
    #[error("annotation corpus is empty")]
    EmptyCorpus,
    #[error("case {0} has no truth diagnosis")]
    MissingTruth(String),
    #[error("cohort is degenerate: {0}")]
    DegenerateCohort(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// One patient's phenotype set with an optional confirmed diagnosis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatientProfile {
    pub case_id: String,
    pub phenotypes: BTreeSet<TermId>,
    pub truth: Option<TermId>,
}

/// One entry of a ranked differential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDiagnosis {
    pub rank: usize,
    pub disease: TermId,
    pub score: f64,
    /// Contributing patient terms and their score contributions (BASE_IC).
    pub breakdown: BTreeMap<TermId, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMethod {
    BaseIc,
    Bidirectional,
}

impl RankMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RankMethod::BaseIc => "base_ic",
            RankMethod::Bidirectional => "bidirectional",
        }
    }
}

/// Whether a patient term matches a disease annotated with a descendant of
/// that term (ontology propagation) or only on exact annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    #[default]
    Propagated,
    Exact,
}

/// Base_IC: sum of IC over patient terms shared with the candidate
/// disease's (optionally propagated) annotation set.
pub fn score_base_ic(
    ic: &TermIC,
    graph: &OntologyGraph,
    patient_terms: &BTreeSet<TermId>,
    disease_terms: &BTreeSet<TermId>,
    mode: MatchMode,
) -> Result<(f64, BTreeMap<TermId, f64>), RankingError> {
    let matchable: BTreeSet<TermId> = match mode {
        MatchMode::Exact => disease_terms.clone(),
        MatchMode::Propagated => {
            let mut closure = BTreeSet::new();
            for t in disease_terms {
                closure.extend(graph.ancestors(t, true)?);
            }
            closure
        }
    };
    let mut breakdown = BTreeMap::new();
    let mut score = 0.0;
    for t in patient_terms {
        if matchable.contains(t) {
            let contribution = ic.ic(t);
            score += contribution;
            breakdown.insert(t.clone(), contribution);
        }
    }
    Ok((score, breakdown))
}

/// Resnik pairwise similarity: IC of the most-informative common ancestor
/// (reflexive closure on both sides).
pub fn resnik_similarity(
    ic: &TermIC,
    graph: &OntologyGraph,
    a: &TermId,
    b: &TermId,
) -> Result<f64, RankingError> {
    let anc_a = graph.ancestors(a, true)?;
    let anc_b = graph.ancestors(b, true)?;
    Ok(anc_a
        .intersection(&anc_b)
        .map(|t| ic.ic(t))
        .fold(0.0, f64::max))
}

/// Symmetric bidirectional set similarity: for each direction, the mean
/// over one side's terms of its best Resnik match on the other side; the
/// two directed scores are averaged.
pub fn score_bidirectional(
    ic: &TermIC,
    graph: &OntologyGraph,
    patient_terms: &BTreeSet<TermId>,
    disease_terms: &BTreeSet<TermId>,
) -> Result<f64, RankingError> {
    if patient_terms.is_empty() || disease_terms.is_empty() {
        return Err(RankingError::EmptySet);
    }
    let directed = |from: &BTreeSet<TermId>, to: &BTreeSet<TermId>| -> Result<f64, RankingError> {
        let mut sum = 0.0;
        for a in from {
            let mut best = 0.0f64;
            for b in to {
                best = best.max(resnik_similarity(ic, graph, a, b)?);
            }
            sum += best;
        }
        Ok(sum / from.len() as f64)
    };
    Ok((directed(patient_terms, disease_terms)? + directed(disease_terms, patient_terms)?) / 2.0)
}

/// Scores every annotated disease for one patient and returns the top-k
/// differential ordered by (score desc, disease key asc).
pub fn rank_diseases(
    ic: &TermIC,
    graph: &OntologyGraph,
    annotations: &DiseaseAnnotationSet,
    patient: &PatientProfile,
    method: RankMethod,
    k: usize,
) -> Result<Vec<RankedDiagnosis>, RankingError> {
    if annotations.disease_count() == 0 {
        return Err(RankingError::EmptyCorpus);
    }
    let mut scored: Vec<RankedDiagnosis> = Vec::with_capacity(annotations.disease_count());
    for disease in annotations.diseases() {
        let disease_terms = annotations.phenotypes_of(disease);
        let (score, breakdown) = match method {
            RankMethod::BaseIc => score_base_ic(
                ic,
                graph,
                &patient.phenotypes,
                &disease_terms,
                MatchMode::Propagated,
            )?,
            RankMethod::Bidirectional => {
                let score = if patient.phenotypes.is_empty() || disease_terms.is_empty() {
                    0.0
                } else {
                    score_bidirectional(ic, graph, &patient.phenotypes, &disease_terms)?
                };
                (score, BTreeMap::new())
            }
        };
        scored.push(RankedDiagnosis {
            rank: 0,
            disease: disease.clone(),
            score,
            breakdown,
        });
    }
    scored.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("scores are finite")
            .then_with(|| a.disease.cmp(&b.disease))
    });
    scored.truncate(k);
    for (i, entry) in scored.iter_mut().enumerate() {
        entry.rank = i + 1;
    }
    Ok(scored)
}

/// Key-phenotype abundance tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    Few,
    Moderate,
    Rich,
}

impl Tier {
    pub fn from_count(n: usize) -> Tier {
        match n {
            0 | 1 => Tier::Few,
            2..=4 => Tier::Moderate,
            _ => Tier::Rich,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Tier::Few => "few",
            Tier::Moderate => "moderate",
            Tier::Rich => "rich",
        }
    }
}

/// A case's key-phenotype stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseStratum {
    pub tier: Tier,
    pub key_count: usize,
    pub key_terms: BTreeSet<TermId>,
}

/// Key phenotypes are the patient terms that exactly match a direct HPOA
/// annotation of the confirmed diagnosis. `propagated` extends the match
/// to annotation ancestors for sensitivity analysis.
pub fn stratify_case(
    annotations: &DiseaseAnnotationSet,
    graph: &OntologyGraph,
    patient: &PatientProfile,
    propagated: bool,
) -> Result<CaseStratum, RankingError> {
    let truth = patient
        .truth
        .as_ref()
        .ok_or_else(|| RankingError::MissingTruth(patient.case_id.clone()))?;
    let direct = annotations.phenotypes_of(truth);
    let matchable: BTreeSet<TermId> = if propagated {
        let mut closure = BTreeSet::new();
        for t in &direct {
            closure.extend(graph.ancestors(t, true)?);
        }
        closure
    } else {
        direct
    };
    let key_terms: BTreeSet<TermId> = patient
        .phenotypes
        .intersection(&matchable)
        .cloned()
        .collect();
    Ok(CaseStratum {
        tier: Tier::from_count(key_terms.len()),
        key_count: key_terms.len(),
        key_terms,
    })
}

/// Per-case difficulty metrics plus the cohort extrema they were
/// normalized against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyScore {
    pub case_id: String,
    pub mean_ic: f64,
    pub norm_mean_ic: f64,
    pub phen_count: usize,
    pub norm_cnt: f64,
    pub composite: f64,
    pub mean_ic_min: f64,
    pub mean_ic_max: f64,
    pub n_min: usize,
    pub n_max: usize,
}

/// Applies the min-max normalized difficulty construction over a cohort:
/// composite = (1 - norm_mean_ic) * norm_cnt. Refuses cohorts where either
/// normalization range is zero.
pub fn composite_difficulty(
    ic: &TermIC,
    cohort: &[PatientProfile],
) -> Result<Vec<DifficultyScore>, RankingError> {
    if cohort.len() < 2 {
        return Err(RankingError::DegenerateCohort(
            "need at least 2 cases".to_string(),
        ));
    }
    let mut means = Vec::with_capacity(cohort.len());
    for case in cohort {
        let mean = crate::ontology::mean_ic(ic, &case.phenotypes)?;
        means.push(mean);
    }
    let mean_min = means.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean_max = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n_min = cohort.iter().map(|c| c.phenotypes.len()).min().unwrap();
    let n_max = cohort.iter().map(|c| c.phenotypes.len()).max().unwrap();
    if mean_max == mean_min {
        return Err(RankingError::DegenerateCohort(
            "Mean_IC range is zero".to_string(),
        ));
    }
    if n_max == n_min {
        return Err(RankingError::DegenerateCohort(
            "phenotype-count range is zero".to_string(),
        ));
    }

    Ok(cohort
        .iter()
        .zip(means)
        .map(|(case, mean)| {
            let norm_mean_ic = (mean - mean_min) / (mean_max - mean_min);
            let n = case.phenotypes.len();
            let norm_cnt = (n - n_min) as f64 / (n_max - n_min) as f64;
            DifficultyScore {
                case_id: case.case_id.clone(),
                mean_ic: mean,
                norm_mean_ic,
                phen_count: n,
                norm_cnt,
                composite: (1.0 - norm_mean_ic) * norm_cnt,
                mean_ic_min: mean_min,
                mean_ic_max: mean_max,
                n_min,
                n_max,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// Highest composite difficulty first.
    CompositeDesc,
    /// Lowest mean IC first.
    MeanIcAsc,
}

/// Picks the `m` hardest cases under the chosen mode; ties break on
/// ascending case id. Requesting more than the cohort returns everything.
pub fn select_top_difficult(
    scores: &[DifficultyScore],
    m: usize,
    mode: SelectionMode,
) -> Vec<String> {
    let mut sorted: Vec<&DifficultyScore> = scores.iter().collect();
    sorted.sort_by(|a, b| {
        let primary = match mode {
            SelectionMode::CompositeDesc => b.composite.partial_cmp(&a.composite),
            SelectionMode::MeanIcAsc => a.mean_ic.partial_cmp(&b.mean_ic),
        };
        primary
            .expect("difficulty values are finite")
            .then_with(|| a.case_id.cmp(&b.case_id))
    });
    sorted
        .into_iter()
        .take(m)
        .map(|s| s.case_id.clone())
        .collect()
}
