//! Rule-based extraction of ranked disease lists from raw model output,
//! and normalization to ORPHA codes.

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::ingest::NormalizationTable;
use crate::term::TermId;

/// Candidate lists are capped at the top 20 predictions.
pub const MAX_PREDICTIONS: usize = 20;

/// One extracted prediction, before or after normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub rank: usize,
    pub raw_label: String,
    pub normalized: Option<TermId>,
    pub excluded_reason: Option<String>,
}

impl Prediction {
    pub fn excluded(&self) -> bool {
        self.normalized.is_none()
    }
}

/// A model's normalized ranked differential for one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub case_id: String,
    pub model_tag: String,
    pub predictions: Vec<Prediction>,
    /// Labels dropped because an earlier prediction mapped to the same code.
    pub deduped: Vec<String>,
}

impl PredictionSet {
    /// Kept (non-excluded) predictions in rank order.
    pub fn kept(&self) -> impl Iterator<Item = &Prediction> {
        self.predictions.iter().filter(|p| !p.excluded())
    }
}

/// Extracts a ranked label list from raw model text.
///
/// Recognized shapes, in priority order: numbered items (`1.` / `1)`),
/// dash/asterisk bullets, and bare one-label-per-line lists. Trailing
/// parenthetical codes or confidence annotations are stripped. Output is
/// capped at [`MAX_PREDICTIONS`]. Prose with no list structure is
/// `NoListFound`, signalling the LLM-extraction fallback.
pub fn parse_prediction_list(text: &str) -> Result<Vec<(usize, String)>, EvalError> {
    let mut numbered: Vec<String> = Vec::new();
    let mut bulleted: Vec<String> = Vec::new();
    let mut bare: Vec<String> = Vec::new();
    let mut bare_ok = true;

    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(item) = strip_number_marker(line) {
            numbered.push(clean_label(item));
        } else if let Some(item) = line
            .strip_prefix("- ")
            .or_else(|| line.strip_prefix("* "))
            .or_else(|| line.strip_prefix("• "))
        {
            bulleted.push(clean_label(item));
        } else {
            // A bare line only counts as a list item when it looks like a
            // short name, not running prose.
            if line.len() > 60 || line.ends_with('.') || line.ends_with(':') {
                bare_ok = false;
            } else {
                bare.push(clean_label(line));
            }
        }
    }

    let labels = if !numbered.is_empty() {
        numbered
    } else if !bulleted.is_empty() {
        bulleted
    } else if bare_ok && bare.len() >= 2 {
        bare
    } else {
        return Err(EvalError::NoListFound);
    };

    let labels: Vec<String> = labels.into_iter().filter(|l| !l.is_empty()).collect();
    if labels.is_empty() {
        return Err(EvalError::NoListFound);
    }
    Ok(labels
        .into_iter()
        .take(MAX_PREDICTIONS)
        .enumerate()
        .map(|(i, label)| (i + 1, label))
        .collect())
}

fn strip_number_marker(line: &str) -> Option<&str> {
    let digits = line.bytes().take_while(|b| b.is_ascii_digit()).count();
    if digits == 0 || digits > 3 {
        return None;
    }
    let rest = &line[digits..];
    rest.strip_prefix(". ")
        .or_else(|| rest.strip_prefix(") "))
        .or_else(|| rest.strip_prefix(".").filter(|r| !r.is_empty()))
        .map(str::trim)
}

/// Drops a trailing parenthetical (identifier codes, confidence notes).
fn clean_label(raw: &str) -> String {
    let mut s = raw.trim().to_string();
    while s.ends_with(')') {
        if let Some(open) = s.rfind('(') {
            s.truncate(open);
            s = s.trim_end().to_string();
        } else {
            break;
        }
    }
    s.trim_end_matches([',', ';']).trim().to_string()
}

/// Maps extracted labels to ORPHA/OMIM codes via the local table and an
/// optional fallback resolver. Unmapped labels are kept but marked
/// excluded; duplicate codes keep the best (lowest) rank.
pub fn normalize_predictions(
    case_id: &str,
    model_tag: &str,
    labels: &[(usize, String)],
    table: &NormalizationTable,
    mut remote: Option<&mut dyn FnMut(&str) -> Option<TermId>>,
) -> PredictionSet {
    let mut predictions: Vec<Prediction> = Vec::new();
    let mut deduped: Vec<String> = Vec::new();
    let mut seen: Vec<TermId> = Vec::new();

    for (rank, label) in labels {
        let normalized = table
            .lookup(label)
            .cloned()
            .or_else(|| remote.as_mut().and_then(|f| f(label)));
        match normalized {
            Some(code) => {
                if seen.contains(&code) {
                    deduped.push(label.clone());
                } else {
                    seen.push(code.clone());
                    predictions.push(Prediction {
                        rank: *rank,
                        raw_label: label.clone(),
                        normalized: Some(code),
                        excluded_reason: None,
                    });
                }
            }
            None => predictions.push(Prediction {
                rank: *rank,
                raw_label: label.clone(),
                normalized: None,
                excluded_reason: Some("UNMAPPED".to_string()),
            }),
        }
    }

    PredictionSet {
        case_id: case_id.to_string(),
        model_tag: model_tag.to_string(),
        predictions,
        deduped,
    }
}
