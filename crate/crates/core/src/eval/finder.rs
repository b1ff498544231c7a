//! Aggregation of eight-dimension diagnostic-quality scorecards.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::stats::compare_groups;
use super::EvalError;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum FinderDimension {
    CaseComprehension,
    GuidelineCompliance,
    KeyFeatureSensitivity,
    ReasoningConsistency,
    DifferentialRelevance,
    DiagnosticAcceptability,
    BiasFairness,
    HarmPotential,
}

impl FinderDimension {
    pub const ALL: [FinderDimension; 8] = [
        FinderDimension::CaseComprehension,
        FinderDimension::GuidelineCompliance,
        FinderDimension::KeyFeatureSensitivity,
        FinderDimension::ReasoningConsistency,
        FinderDimension::DifferentialRelevance,
        FinderDimension::DiagnosticAcceptability,
        FinderDimension::BiasFairness,
        FinderDimension::HarmPotential,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FinderDimension::CaseComprehension => "case_comprehension",
            FinderDimension::GuidelineCompliance => "guideline_compliance",
            FinderDimension::KeyFeatureSensitivity => "key_feature_sensitivity",
            FinderDimension::ReasoningConsistency => "reasoning_consistency",
            FinderDimension::DifferentialRelevance => "differential_relevance",
            FinderDimension::DiagnosticAcceptability => "diagnostic_acceptability",
            FinderDimension::BiasFairness => "bias_fairness",
            FinderDimension::HarmPotential => "harm_potential",
        }
    }
}

/// One rater's 1-5 Likert scores for one model output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinderScorecard {
    pub case_id: String,
    pub model_tag: String,
    pub rater_id: String,
    pub scores: BTreeMap<FinderDimension, u8>,
}

impl FinderScorecard {
    pub fn validate(&self) -> Result<(), EvalError> {
        for dim in FinderDimension::ALL {
            match self.scores.get(&dim) {
                None => {
                    return Err(EvalError::IncompleteScorecard {
                        case_id: self.case_id.clone(),
                        dimension: dim.as_str().to_string(),
                    })
                }
                Some(&s) if !(1..=5).contains(&s) => {
                    return Err(EvalError::ScoreOutOfRange { score: s as i64 })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionStats {
    pub mean: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub n: usize,
    /// n=1 groups get a zero-width CI; this flag marks them.
    pub degenerate_ci: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinderAggregate {
    /// (model, dimension) -> mean and t-based 95% CI.
    pub per_model: BTreeMap<String, BTreeMap<FinderDimension, DimensionStats>>,
    /// (model A, model B, dimension) -> (t, two-sided p); A < B
    /// lexicographically.
    pub pairwise: Vec<PairwiseComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub model_a: String,
    pub model_b: String,
    pub dimension: FinderDimension,
    pub t: f64,
    pub p: f64,
}

/// Per-(model, dimension) mean with a t-distribution 95% CI, plus Welch
/// comparisons between every model pair on every dimension.
pub fn aggregate_finder(cards: &[FinderScorecard]) -> Result<FinderAggregate, EvalError> {
    if cards.is_empty() {
        return Err(EvalError::EmptyCaseSet);
    }
    for card in cards {
        card.validate()?;
    }

    let mut grouped: BTreeMap<String, BTreeMap<FinderDimension, Vec<f64>>> = BTreeMap::new();
    for card in cards {
        let model = grouped.entry(card.model_tag.clone()).or_default();
        for dim in FinderDimension::ALL {
            model
                .entry(dim)
                .or_default()
                .push(card.scores[&dim] as f64);
        }
    }

    let mut per_model = BTreeMap::new();
    for (model, dims) in &grouped {
        let mut out = BTreeMap::new();
        for (dim, values) in dims {
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let (lower, upper, degenerate) = if n < 2 {
                (mean, mean, true)
            } else {
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                    / (n - 1) as f64;
                let se = (var / n as f64).sqrt();
                let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("df > 0");
                let tcrit = dist.inverse_cdf(0.975);
                (mean - tcrit * se, mean + tcrit * se, false)
            };
            out.insert(
                *dim,
                DimensionStats {
                    mean,
                    ci_lower: lower,
                    ci_upper: upper,
                    n,
                    degenerate_ci: degenerate,
                },
            );
        }
        per_model.insert(model.clone(), out);
    }

    let models: Vec<&String> = grouped.keys().collect();
    let mut pairwise = Vec::new();
    for i in 0..models.len() {
        for j in i + 1..models.len() {
            for dim in FinderDimension::ALL {
                let a = &grouped[models[i]][&dim];
                let b = &grouped[models[j]][&dim];
                if a.len() < 2 || b.len() < 2 {
                    continue;
                }
                match compare_groups(a, b) {
                    Ok((t, p)) => pairwise.push(PairwiseComparison {
                        model_a: models[i].clone(),
                        model_b: models[j].clone(),
                        dimension: dim,
                        t,
                        p,
                    }),
                    // Both groups constant at different values: report a
                    // decisive comparison rather than dropping it.
                    Err(EvalError::DegenerateVariance(_)) => pairwise.push(PairwiseComparison {
                        model_a: models[i].clone(),
                        model_b: models[j].clone(),
                        dimension: dim,
                        t: f64::INFINITY,
                        p: 0.0,
                    }),
                    Err(e) => return Err(e),
                }
            }
        }
    }

    Ok(FinderAggregate {
        per_model,
        pairwise,
    })
}
