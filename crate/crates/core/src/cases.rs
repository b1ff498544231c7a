//! Sectioned clinical cases: synthetic generation with distractor noise,
//! incremental and ablation slicing, and prompt-completion pair assembly.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{DiseaseAnnotationSet, NormalizationTable, VariantRecord};
use crate::ontology::{OntologyError, OntologyGraph, TermIC};
use crate::term::{Namespace, TermId};

/// The six narrative fields in clinical acquisition order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Section {
    ChiefComplaint,
    PresentIllness,
    FamilyHistory,
    PhysicalExam,
    SpecialtyAssessment,
    AncillaryTests,
}

impl Section {
    pub const ALL: [Section; 6] = [
        Section::ChiefComplaint,
        Section::PresentIllness,
        Section::FamilyHistory,
        Section::PhysicalExam,
        Section::SpecialtyAssessment,
        Section::AncillaryTests,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Section::ChiefComplaint => "chief_complaint",
            Section::PresentIllness => "present_illness",
            Section::FamilyHistory => "family_history",
            Section::PhysicalExam => "physical_exam",
            Section::SpecialtyAssessment => "specialty_assessment",
            Section::AncillaryTests => "ancillary_tests",
        }
    }

    pub fn from_str_key(key: &str) -> Option<Section> {
        Section::ALL.iter().copied().find(|s| s.as_str() == key)
    }
}

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("disease {disease} has {available} direct annotations, need {needed}")]
    InsufficientAnnotations {
        disease: TermId,
        available: usize,
        needed: usize,
    },
    #[error("distractor pool has {available} eligible terms, need {needed}")]
    InsufficientDistractorPool { available: usize, needed: usize },
    #[error("slice step {0} out of range 1..=6")]
    StepOutOfRange(usize),
    #[error("diagnosis {0} not resolvable in the normalization table")]
    UnresolvableDiagnosis(String),
    #[error("case text is empty")]
    EmptyCase,
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// A sectioned clinical case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case_id: String,
    pub sections: BTreeMap<Section, String>,
    pub phenotypes: BTreeSet<TermId>,
    pub variants: Vec<VariantRecord>,
    pub truth: Option<TermId>,
    pub orphanet_categories: BTreeSet<String>,
}

impl CaseRecord {
    /// All six section keys present with empty text.
    pub fn empty(case_id: impl Into<String>) -> CaseRecord {
        CaseRecord {
            case_id: case_id.into(),
            sections: Section::ALL
                .iter()
                .map(|&s| (s, String::new()))
                .collect(),
            phenotypes: BTreeSet::new(),
            variants: Vec::new(),
            truth: None,
            orphanet_categories: BTreeSet::new(),
        }
    }

    pub fn section(&self, s: Section) -> &str {
        self.sections.get(&s).map(String::as_str).unwrap_or("")
    }

    pub fn set_section(&mut self, s: Section, text: impl Into<String>) {
        self.sections.insert(s, text.into());
    }

    /// Section keys with non-blank text.
    pub fn nonblank_sections(&self) -> BTreeSet<Section> {
        Section::ALL
            .iter()
            .copied()
            .filter(|&s| !self.section(s).trim().is_empty())
            .collect()
    }
}

/// Parameters for one synthetic case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticCaseSpec {
    pub disease: TermId,
    pub n_signal: usize,
    pub n_distractors: usize,
    pub rng_seed: u64,
}

/// Generates a phenotype-only case: `n_signal` terms sampled without
/// replacement from the disease's direct annotations plus `n_distractors`
/// HP terms sampled from outside the reflexive ancestor-descendant closure
/// of the annotation set. Deterministic under `rng_seed`.
pub fn generate_synthetic_case(
    ontology: &OntologyGraph,
    annotations: &DiseaseAnnotationSet,
    _ic: &TermIC,
    spec: &SyntheticCaseSpec,
) -> Result<CaseRecord, CaseError> {
    let direct: Vec<TermId> = annotations
        .phenotypes_of(&spec.disease)
        .into_iter()
        .collect();
    if direct.len() < spec.n_signal {
        return Err(CaseError::InsufficientAnnotations {
            disease: spec.disease.clone(),
            available: direct.len(),
            needed: spec.n_signal,
        });
    }

    let mut closure: BTreeSet<TermId> = BTreeSet::new();
    for term in &direct {
        closure.insert(term.clone());
        closure.extend(ontology.ancestors(term, false)?);
        closure.extend(ontology.descendants(term, false)?);
    }

    let pool: Vec<TermId> = ontology
        .terms()
        .filter(|t| {
            t.id.namespace() == Namespace::Hp && !t.obsolete && !closure.contains(&t.id)
        })
        .map(|t| t.id.clone())
        .collect();
    if pool.len() < spec.n_distractors {
        return Err(CaseError::InsufficientDistractorPool {
            available: pool.len(),
            needed: spec.n_distractors,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let signal: Vec<TermId> = direct
        .choose_multiple(&mut rng, spec.n_signal)
        .cloned()
        .collect();
    let distractors: Vec<TermId> = pool
        .choose_multiple(&mut rng, spec.n_distractors)
        .cloned()
        .collect();

    let mut case = CaseRecord::empty(format!(
        "syn-{}-{}",
        spec.disease.to_string().replace(':', "_"),
        spec.rng_seed
    ));
    case.phenotypes = signal.into_iter().chain(distractors).collect();
    case.truth = Some(spec.disease.clone());
    Ok(case)
}

/// Keeps sections 1..=step (in acquisition order) and blanks the rest.
pub fn slice_incremental(case: &CaseRecord, step: usize) -> Result<CaseRecord, CaseError> {
    if !(1..=6).contains(&step) {
        return Err(CaseError::StepOutOfRange(step));
    }
    let mut out = case.clone();
    for (i, &section) in Section::ALL.iter().enumerate() {
        if i >= step {
            out.sections.insert(section, String::new());
        }
    }
    Ok(out)
}

/// Blanks exactly one section, preserving everything else.
pub fn slice_ablation(case: &CaseRecord, field: Section) -> CaseRecord {
    let mut out = case.clone();
    out.sections.insert(field, String::new());
    out
}

/// Prompt/completion assembly markers. The defaults round-trip through
/// [`parse_prompt`] and [`parse_completion`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub case_marker: String,
    pub guideline_marker: String,
    pub reasoning_marker: String,
    pub diagnosis_marker: String,
    pub no_guideline_text: String,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        PromptTemplate {
            case_marker: "[CASE]".to_string(),
            guideline_marker: "[GUIDELINE]".to_string(),
            reasoning_marker: "[REASONING]".to_string(),
            diagnosis_marker: "[DIAGNOSIS]".to_string(),
            no_guideline_text: "(no guideline provided)".to_string(),
        }
    }
}

/// A supervised pair: prompt from (case text, guideline), completion from
/// (reasoning chain, diagnosis).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoTExample {
    pub case_text: String,
    pub diagnosis: TermId,
    pub diagnosis_label: String,
    pub reasoning: String,
    pub guideline: String,
    pub prompt: String,
    pub completion: String,
}

/// Builds the (prompt, completion) pair. Both strings are deterministic
/// functions of their inputs, and the structured fields are recoverable
/// from the rendered text.
pub fn build_cot_pair(
    case_text: &str,
    diagnosis_label: &str,
    reasoning: &str,
    guideline: &str,
    table: &NormalizationTable,
    template: &PromptTemplate,
) -> Result<CoTExample, CaseError> {
    if case_text.trim().is_empty() {
        return Err(CaseError::EmptyCase);
    }
    let diagnosis = table
        .lookup(diagnosis_label)
        .cloned()
        .ok_or_else(|| CaseError::UnresolvableDiagnosis(diagnosis_label.to_string()))?;

    let guideline_body = if guideline.trim().is_empty() {
        template.no_guideline_text.clone()
    } else {
        guideline.to_string()
    };
    let prompt = format!(
        "{}\n{}\n{}\n{}\n",
        template.case_marker, case_text, template.guideline_marker, guideline_body
    );
    let completion = format!(
        "{}\n{}\n{}\n{} | {}\n",
        template.reasoning_marker, reasoning, template.diagnosis_marker, diagnosis, diagnosis_label
    );
    Ok(CoTExample {
        case_text: case_text.to_string(),
        diagnosis,
        diagnosis_label: diagnosis_label.to_string(),
        reasoning: reasoning.to_string(),
        guideline: guideline.to_string(),
        prompt,
        completion,
    })
}

/// Recovers (case text, guideline) from a rendered prompt.
pub fn parse_prompt(prompt: &str, template: &PromptTemplate) -> Option<(String, String)> {
    let body = prompt.strip_prefix(&format!("{}\n", template.case_marker))?;
    let split_at = body.find(&format!("\n{}\n", template.guideline_marker))?;
    let case_text = body[..split_at].to_string();
    let guideline = body[split_at + template.guideline_marker.len() + 2..]
        .trim_end_matches('\n')
        .to_string();
    let guideline = if guideline == template.no_guideline_text {
        String::new()
    } else {
        guideline
    };
    Some((case_text, guideline))
}

/// Recovers (reasoning, diagnosis id, diagnosis label) from a completion.
pub fn parse_completion(
    completion: &str,
    template: &PromptTemplate,
) -> Option<(String, TermId, String)> {
    let body = completion.strip_prefix(&format!("{}\n", template.reasoning_marker))?;
    let split_at = body.find(&format!("\n{}\n", template.diagnosis_marker))?;
    let reasoning = body[..split_at].to_string();
    let diag_line = body[split_at + template.diagnosis_marker.len() + 2..].trim_end_matches('\n');
    let (id_part, label) = diag_line.split_once(" | ")?;
    let id: TermId = id_part.parse().ok()?;
    Some((reasoning, id, label.to_string()))
}

/// Minimal GA4GH phenopacket importer: maps phenotypicFeatures to the
/// phenotype set, interpretations to variant records, and the first
/// disease entry to the truth diagnosis.
pub fn import_phenopacket(json: &str) -> Result<CaseRecord, serde_json::Error> {
    #[derive(Deserialize)]
    #[serde(rename_all = "camelCase")]
    struct Packet {
        id: String,
        #[serde(default)]
        phenotypic_features: Vec<Feature>,
        #[serde(default)]
        interpretations: Vec<Interpretation>,
        #[serde(default)]
        diseases: Vec<Disease>,
    }
    #[derive(Deserialize)]
    struct Feature {
        #[serde(rename = "type")]
        kind: OntologyClass,
        #[serde(default)]
        excluded: bool,
    }
    #[derive(Deserialize)]
    struct OntologyClass {
        id: String,
    }
    #[derive(Deserialize)]
    #[serde(rename_all = "camelCase")]
    struct Disease {
        term: OntologyClass,
    }
    #[derive(Deserialize)]
    #[serde(rename_all = "camelCase")]
    struct Interpretation {
        #[serde(default)]
        variant: Option<PacketVariant>,
    }
    #[derive(Deserialize)]
    #[serde(rename_all = "camelCase")]
    struct PacketVariant {
        chrom: String,
        pos: u64,
        #[serde(rename = "ref")]
        reference: String,
        alt: String,
        #[serde(default)]
        gene: String,
    }

    let packet: Packet = serde_json::from_str(json)?;
    let mut case = CaseRecord::empty(packet.id);
    for feature in packet.phenotypic_features {
        if feature.excluded {
            continue;
        }
        if let Ok(id) = feature.kind.id.parse::<TermId>() {
            case.phenotypes.insert(id);
        }
    }
    for interp in packet.interpretations {
        if let Some(v) = interp.variant {
            case.variants.push(VariantRecord {
                chrom: v.chrom,
                pos: v.pos,
                reference: v.reference,
                alt: v.alt,
                gene: v.gene,
                transcript: None,
                hgvs_c: None,
                hgvs_p: None,
                significance: crate::ingest::Significance::Other,
                provenance: BTreeSet::from(["phenopacket".to_string()]),
            });
        }
    }
    case.truth = packet
        .diseases
        .first()
        .and_then(|d| d.term.id.parse().ok());
    Ok(case)
}
