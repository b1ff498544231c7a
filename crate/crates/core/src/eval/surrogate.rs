//! Global linear surrogate over phenotype indicator features.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::term::TermId;

const RIDGE_PENALTY: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurrogateFit {
    /// Feature coefficients sorted by descending |coefficient|.
    pub coefficients: Vec<(TermId, f64)>,
    pub intercept: f64,
    /// Features dropped for having no variance across cases.
    pub dropped_features: Vec<TermId>,
    /// True when the normal equations were rank-deficient and a ridge
    /// penalty was applied.
    pub ridge_applied: bool,
}

impl SurrogateFit {
    pub fn coefficient(&self, feature: &TermId) -> Option<f64> {
        self.coefficients
            .iter()
            .find(|(t, _)| t == feature)
            .map(|(_, c)| *c)
    }
}

/// Least-squares fit of a 0/1 "model predicted the target disease"
/// response on per-case phenotype indicators. Zero-variance columns are
/// dropped and reported; a rank-deficient system falls back to ridge
/// regression with a documented penalty.
pub fn fit_global_surrogate(
    features: &[TermId],
    rows: &[Vec<f64>],
    response: &[f64],
) -> Result<SurrogateFit, EvalError> {
    if rows.len() < 2 {
        return Err(EvalError::BadDesign("need at least 2 cases".to_string()));
    }
    if rows.len() != response.len() {
        return Err(EvalError::BadDesign(format!(
            "{} rows but {} responses",
            rows.len(),
            response.len()
        )));
    }
    if rows.iter().any(|r| r.len() != features.len()) {
        return Err(EvalError::BadDesign(
            "row width does not match feature count".to_string(),
        ));
    }

    let n = rows.len();
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped: Vec<TermId> = Vec::new();
    for (j, feature) in features.iter().enumerate() {
        let first = rows[0][j];
        if rows.iter().any(|r| r[j] != first) {
            kept.push(j);
        } else {
            dropped.push(feature.clone());
        }
    }
    if kept.is_empty() {
        // Constant response: intercept-only model.
        let mean = response.iter().sum::<f64>() / n as f64;
        return Ok(SurrogateFit {
            coefficients: features.iter().map(|t| (t.clone(), 0.0)).collect(),
            intercept: mean,
            dropped_features: dropped,
            ridge_applied: false,
        });
    }

    let p = kept.len() + 1; // + intercept
    let mut design = DMatrix::zeros(n, p);
    for (i, row) in rows.iter().enumerate() {
        design[(i, 0)] = 1.0;
        for (jj, &j) in kept.iter().enumerate() {
            design[(i, jj + 1)] = row[j];
        }
    }
    let y = DVector::from_column_slice(response);

    let xtx = design.transpose() * &design;
    let xty = design.transpose() * y;
    let (solution, ridge_applied) = match xtx.clone().cholesky() {
        Some(chol) => (chol.solve(&xty), false),
        None => {
            let ridged = xtx + DMatrix::identity(p, p) * RIDGE_PENALTY;
            let chol = ridged
                .cholesky()
                .ok_or_else(|| EvalError::BadDesign("ridge system not positive definite".to_string()))?;
            (chol.solve(&xty), true)
        }
    };

    let intercept = solution[0];
    let mut coefficients: Vec<(TermId, f64)> = Vec::with_capacity(features.len());
    for (jj, &j) in kept.iter().enumerate() {
        coefficients.push((features[j].clone(), solution[jj + 1]));
    }
    for t in &dropped {
        coefficients.push((t.clone(), 0.0));
    }
    coefficients.sort_by(|a, b| {
        b.1.abs()
            .partial_cmp(&a.1.abs())
            .expect("coefficients are finite")
            .then_with(|| a.0.cmp(&b.0))
    });

    Ok(SurrogateFit {
        coefficients,
        intercept,
        dropped_features: dropped,
        ridge_applied,
    })
}
