//! File-based run configuration shared by every subcommand.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use rarekg::eval::EvalConfig;

use crate::error::CliError;

/// Default sampling parameters for synthetic cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticDefaults {
    pub n_signal: usize,
    pub n_distractors: usize,
}

impl Default for SyntheticDefaults {
    fn default() -> Self {
        SyntheticDefaults {
            n_signal: 5,
            n_distractors: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientSettings {
    pub resolver_url: String,
    pub llm_url: String,
    pub llm_model: String,
}

impl Default for ClientSettings {
    fn default() -> Self {
        ClientSettings {
            resolver_url: "https://api-v3.monarchinitiative.org/v3/api".to_string(),
            llm_url: "http://localhost:8000/v1".to_string(),
            llm_model: "default".to_string(),
        }
    }
}

/// Everything a pipeline run needs: input paths, module settings, output
/// directory, and the global seed. Serialized as JSON; the SHA-256 of the
/// canonical serialization is embedded in every report this run writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub ontology: Option<PathBuf>,
    /// "obo" or "json"
    pub ontology_format: String,
    /// Disease hierarchy used by hierarchical diagnosis matching.
    pub disease_ontology: Option<PathBuf>,
    pub hpoa: Option<PathBuf>,
    pub genes: Option<PathBuf>,
    pub variants: Option<PathBuf>,
    /// "vcf" or "tsv"
    pub variant_format: String,
    pub normalization: Option<PathBuf>,
    pub cases: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub eval: EvalConfig,
    pub synthetic: SyntheticDefaults,
    pub clients: ClientSettings,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ontology: None,
            ontology_format: "obo".to_string(),
            disease_ontology: None,
            hpoa: None,
            genes: None,
            variants: None,
            variant_format: "vcf".to_string(),
            normalization: None,
            cases: None,
            predictions: None,
            snapshot: None,
            eval: EvalConfig::default(),
            synthetic: SyntheticDefaults::default(),
            clients: ClientSettings::default(),
            out_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("config {}: {e}", path.display())))?;
        config.check_paths()?;
        Ok(config)
    }

    /// Every referenced input path must exist at load time.
    fn check_paths(&self) -> Result<(), CliError> {
        let paths = [
            &self.ontology,
            &self.disease_ontology,
            &self.hpoa,
            &self.genes,
            &self.variants,
            &self.normalization,
            &self.cases,
            &self.predictions,
            &self.snapshot,
        ];
        for path in paths.into_iter().flatten() {
            if !path.exists() {
                return Err(CliError::Validation(format!(
                    "configured path does not exist: {}",
                    path.display()
                )));
            }
        }
        self.eval.validate().map_err(CliError::Validation)?;
        Ok(())
    }

    /// SHA-256 over the canonical JSON serialization; field order is fixed
    /// by the struct, so equal configs hash equally.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hex::encode(hasher.finalize())
    }
}
