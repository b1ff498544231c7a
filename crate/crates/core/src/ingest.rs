//! Parsers for annotation, gene, variant, and name-normalization sources.
//!
//! All record types are plain immutable values. Parsers collect malformed
//! rows instead of aborting, up to a configurable reject-rate threshold.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{Namespace, TermId};

/// Orphanet-style annotation frequency buckets.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub enum Frequency {
    AlwaysPresent,
    VeryFrequent,
    Frequent,
    Occasional,
    Rare,
    #[default]
    Unknown,
}

impl Frequency {
    /// Maps an HPOA frequency token: either an HP frequency-subontology code
    /// or an Orphanet bucket label. Unrecognized tokens map to `Unknown`.
    pub fn from_token(token: &str) -> Frequency {
        match token.trim() {
            "HP:0040280" => Frequency::AlwaysPresent,
            "HP:0040281" => Frequency::VeryFrequent,
            "HP:0040282" => Frequency::Frequent,
            "HP:0040283" => Frequency::Occasional,
            "HP:0040284" => Frequency::Rare,
            "" | "HP:0040285" => Frequency::Unknown,
            other => match other.to_ascii_lowercase().as_str() {
                "always present" | "obligate" => Frequency::AlwaysPresent,
                "very frequent" => Frequency::VeryFrequent,
                "frequent" => Frequency::Frequent,
                "occasional" => Frequency::Occasional,
                "very rare" | "rare" => Frequency::Rare,
                _ => Frequency::Unknown,
            },
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Frequency::AlwaysPresent => "always_present",
            Frequency::VeryFrequent => "very_frequent",
            Frequency::Frequent => "frequent",
            Frequency::Occasional => "occasional",
            Frequency::Rare => "rare",
            Frequency::Unknown => "unknown",
        }
    }
}

/// One disease-phenotype link from an annotation source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiseaseAnnotation {
    pub disease: TermId,
    pub phenotype: TermId,
    pub frequency: Frequency,
    pub provenance: String,
}

/// Disease-phenotype annotations with lookup indexes by both endpoints.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DiseaseAnnotationSet {
    annotations: Vec<DiseaseAnnotation>,
    by_disease: BTreeMap<TermId, Vec<usize>>,
    by_phenotype: BTreeMap<TermId, Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("phenotype must be HP-namespaced, got {0}")]
    BadPhenotypeNamespace(TermId),
    #[error("disease must be ORPHA- or OMIM-namespaced, got {0}")]
    BadDiseaseNamespace(TermId),
    #[error("duplicate annotation ({disease}, {phenotype}) from {provenance}")]
    Duplicate {
        disease: TermId,
        phenotype: TermId,
        provenance: String,
    },
}

impl DiseaseAnnotationSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, ann: DiseaseAnnotation) -> Result<(), AnnotationError> {
        if ann.phenotype.namespace() != Namespace::Hp {
            return Err(AnnotationError::BadPhenotypeNamespace(ann.phenotype));
        }
        if !ann.disease.is_disease() {
            return Err(AnnotationError::BadDiseaseNamespace(ann.disease));
        }
        let dup = self.by_disease.get(&ann.disease).is_some_and(|ids| {
            ids.iter().any(|&i| {
                self.annotations[i].phenotype == ann.phenotype
                    && self.annotations[i].provenance == ann.provenance
            })
        });
        if dup {
            return Err(AnnotationError::Duplicate {
                disease: ann.disease,
                phenotype: ann.phenotype,
                provenance: ann.provenance,
            });
        }
        let idx = self.annotations.len();
        self.by_disease
            .entry(ann.disease.clone())
            .or_default()
            .push(idx);
        self.by_phenotype
            .entry(ann.phenotype.clone())
            .or_default()
            .push(idx);
        self.annotations.push(ann);
        Ok(())
    }

    pub fn annotations(&self) -> &[DiseaseAnnotation] {
        &self.annotations
    }

    pub fn len(&self) -> usize {
        self.annotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.annotations.is_empty()
    }

    pub fn diseases(&self) -> impl Iterator<Item = &TermId> {
        self.by_disease.keys()
    }

    pub fn disease_count(&self) -> usize {
        self.by_disease.len()
    }

    /// Direct (non-propagated) phenotype annotations of one disease.
    pub fn phenotypes_of(&self, disease: &TermId) -> BTreeSet<TermId> {
        self.by_disease
            .get(disease)
            .map(|ids| {
                ids.iter()
                    .map(|&i| self.annotations[i].phenotype.clone())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn annotations_of(&self, disease: &TermId) -> Vec<&DiseaseAnnotation> {
        self.by_disease
            .get(disease)
            .map(|ids| ids.iter().map(|&i| &self.annotations[i]).collect())
            .unwrap_or_default()
    }

    /// Diseases directly annotated with the given phenotype.
    pub fn diseases_with(&self, phenotype: &TermId) -> BTreeSet<TermId> {
        self.by_phenotype
            .get(phenotype)
            .map(|ids| {
                ids.iter()
                    .map(|&i| self.annotations[i].disease.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// A row-level problem recorded while parsing a tabular source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowIssue {
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("reject rate {rejected}/{total} exceeds threshold {threshold}")]
    RejectRateExceeded {
        rejected: usize,
        total: usize,
        threshold: f64,
    },
    #[error("malformed line {row}: {message}")]
    MalformedLine { row: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parser knobs shared by the tabular ingest paths.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Whole-parse failure threshold for the fraction of rejected rows.
    pub max_reject_rate: f64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_reject_rate: 0.01,
        }
    }
}

/// Outcome of a lenient parse: records plus the rows that were rejected.
#[derive(Debug)]
pub struct ParseOutcome<T> {
    pub records: T,
    pub issues: Vec<RowIssue>,
}

const HPOA_COLUMNS: [&str; 12] = [
    "database_id",
    "disease_name",
    "qualifier",
    "hpo_id",
    "reference",
    "evidence",
    "onset",
    "frequency",
    "sex",
    "modifier",
    "aspect",
    "biocuration",
];

/// Parses a `phenotype.hpoa`-layout TSV stream.
///
/// Comment lines (`#...`) are skipped; a header row naming the standard
/// columns is accepted and checked. Rows with qualifier `NOT` are skipped.
pub fn parse_hpoa<R: Read>(
    source: R,
    opts: &ParseOptions,
) -> Result<ParseOutcome<DiseaseAnnotationSet>, ParseError> {
    let reader = BufReader::new(source);
    let mut set = DiseaseAnnotationSet::new();
    let mut issues = Vec::new();
    let mut data_rows = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let row = lineno + 1;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields[0] == "database_id" {
            for (i, want) in HPOA_COLUMNS.iter().enumerate() {
                if fields.get(i).copied() != Some(*want) {
                    return Err(ParseError::HeaderMismatch(format!(
                        "column {} is {:?}, expected {want:?}",
                        i + 1,
                        fields.get(i).copied().unwrap_or("<missing>")
                    )));
                }
            }
            continue;
        }
        data_rows += 1;
        if fields.len() < 12 {
            issues.push(RowIssue {
                row,
                message: format!("expected 12 columns, found {}", fields.len()),
            });
            continue;
        }
        if fields[2].eq_ignore_ascii_case("NOT") {
            continue;
        }
        let disease = match fields[0].parse::<TermId>() {
            Ok(id) if id.is_disease() => id,
            Ok(id) => {
                issues.push(RowIssue {
                    row,
                    message: format!("disease id {id} is not ORPHA/OMIM"),
                });
                continue;
            }
            Err(e) => {
                issues.push(RowIssue {
                    row,
                    message: format!("bad disease id: {e}"),
                });
                continue;
            }
        };
        let phenotype = match fields[3].parse::<TermId>() {
            Ok(id) if id.namespace() == Namespace::Hp => id,
            Ok(id) => {
                issues.push(RowIssue {
                    row,
                    message: format!("phenotype id {id} is not HP"),
                });
                continue;
            }
            Err(e) => {
                issues.push(RowIssue {
                    row,
                    message: format!("bad phenotype id: {e}"),
                });
                continue;
            }
        };
        let ann = DiseaseAnnotation {
            disease,
            phenotype,
            frequency: Frequency::from_token(fields[7]),
            provenance: "HPOA".to_string(),
        };
        // Duplicate (disease, phenotype, provenance) rows collapse silently.
        if let Err(AnnotationError::Duplicate { .. }) = set.push(ann) {
            continue;
        }
    }

    check_reject_rate(issues.len(), data_rows, opts)?;
    Ok(ParseOutcome {
        records: set,
        issues,
    })
}

fn check_reject_rate(rejected: usize, total: usize, opts: &ParseOptions) -> Result<(), ParseError> {
    if total > 0 && (rejected as f64 / total as f64) > opts.max_reject_rate {
        return Err(ParseError::RejectRateExceeded {
            rejected,
            total,
            threshold: opts.max_reject_rate,
        });
    }
    Ok(())
}

/// Clinical significance of a variant, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Significance {
    Other,
    Vus,
    LikelyPathogenic,
    Pathogenic,
}

impl Significance {
    pub fn from_clnsig(token: &str) -> Significance {
        let t = token.trim().to_ascii_lowercase().replace(' ', "_");
        match t.as_str() {
            "pathogenic" => Significance::Pathogenic,
            "likely_pathogenic" => Significance::LikelyPathogenic,
            "uncertain_significance" | "vus" => Significance::Vus,
            _ => Significance::Other,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Significance::Pathogenic => "pathogenic",
            Significance::LikelyPathogenic => "likely_pathogenic",
            Significance::Vus => "vus",
            Significance::Other => "other",
        }
    }
}

/// One normalized variant observation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantRecord {
    pub chrom: String,
    pub pos: u64,
    pub reference: String,
    pub alt: String,
    pub gene: String,
    pub transcript: Option<String>,
    pub hgvs_c: Option<String>,
    pub hgvs_p: Option<String>,
    pub significance: Significance,
    pub provenance: BTreeSet<String>,
}

impl VariantRecord {
    /// Dedup/sort key.
    pub fn key(&self) -> (String, u64, String, String) {
        (
            self.chrom.clone(),
            self.pos,
            self.reference.clone(),
            self.alt.clone(),
        )
    }

    pub fn key_string(&self) -> String {
        format!("{}-{}-{}-{}", self.chrom, self.pos, self.reference, self.alt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantFormat {
    VcfSlim,
    Tsv,
}

/// Parses variants from a slim VCF body (CHROM/POS/REF/ALT + INFO keys
/// GENE, CLNSIG) or a TSV with the same logical columns. Multi-allelic ALT
/// values split into one record per allele.
pub fn parse_variants<R: Read>(
    source: R,
    format: VariantFormat,
    opts: &ParseOptions,
) -> Result<ParseOutcome<Vec<VariantRecord>>, ParseError> {
    let reader = BufReader::new(source);
    let mut records = Vec::new();
    let mut issues = Vec::new();
    let mut data_rows = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let row = lineno + 1;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        data_rows += 1;
        let parsed = match format {
            VariantFormat::VcfSlim => parse_vcf_line(trimmed),
            VariantFormat::Tsv => parse_variant_tsv_line(trimmed),
        };
        match parsed {
            Ok(mut recs) => records.append(&mut recs),
            Err(message) => issues.push(RowIssue { row, message }),
        }
    }

    check_reject_rate(issues.len(), data_rows, opts)?;
    Ok(ParseOutcome { records, issues })
}

fn parse_vcf_line(line: &str) -> Result<Vec<VariantRecord>, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() < 8 {
        return Err(format!("expected >=8 VCF columns, found {}", fields.len()));
    }
    let chrom = fields[0].to_string();
    let pos: u64 = fields[1]
        .parse()
        .map_err(|_| format!("bad POS {:?}", fields[1]))?;
    if pos == 0 {
        return Err("POS must be positive".to_string());
    }
    let reference = fields[3].to_string();
    let alts = fields[4];
    let mut info: BTreeMap<&str, &str> = BTreeMap::new();
    for item in fields[7].split(';') {
        if let Some((k, v)) = item.split_once('=') {
            info.insert(k, v);
        }
    }
    let gene = info.get("GENE").copied().unwrap_or("").to_string();
    let significance = info
        .get("CLNSIG")
        .map(|s| Significance::from_clnsig(s))
        .unwrap_or(Significance::Other);
    if reference.is_empty() || chrom.is_empty() {
        return Err("empty CHROM or REF".to_string());
    }
    let mut out = Vec::new();
    for alt in alts.split(',') {
        if alt.is_empty() {
            return Err("empty ALT allele".to_string());
        }
        if alt == reference {
            return Err("REF == ALT".to_string());
        }
        out.push(VariantRecord {
            chrom: chrom.clone(),
            pos,
            reference: reference.clone(),
            alt: alt.to_string(),
            gene: gene.clone(),
            transcript: info.get("TRANSCRIPT").map(|s| s.to_string()),
            hgvs_c: info.get("HGVSC").map(|s| s.to_string()),
            hgvs_p: info.get("HGVSP").map(|s| s.to_string()),
            significance,
            provenance: BTreeSet::from(["ClinVar".to_string()]),
        });
    }
    Ok(out)
}

// TSV columns: chrom, pos, ref, alt, gene, significance[, transcript, hgvs_c, hgvs_p, source]
fn parse_variant_tsv_line(line: &str) -> Result<Vec<VariantRecord>, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() < 6 {
        return Err(format!("expected >=6 TSV columns, found {}", fields.len()));
    }
    let pos: u64 = fields[1]
        .parse()
        .map_err(|_| format!("bad pos {:?}", fields[1]))?;
    if pos == 0 {
        return Err("pos must be positive".to_string());
    }
    if fields[2] == fields[3] {
        return Err("ref == alt".to_string());
    }
    if fields[0].is_empty() || fields[2].is_empty() || fields[3].is_empty() {
        return Err("empty chrom/ref/alt".to_string());
    }
    let opt = |i: usize| -> Option<String> {
        fields
            .get(i)
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string())
    };
    Ok(vec![VariantRecord {
        chrom: fields[0].to_string(),
        pos,
        reference: fields[2].to_string(),
        alt: fields[3].to_string(),
        gene: fields[4].to_string(),
        transcript: opt(6),
        hgvs_c: opt(7),
        hgvs_p: opt(8),
        significance: Significance::from_clnsig(fields[5]),
        provenance: BTreeSet::from([opt(9).unwrap_or_else(|| "TSV".to_string())]),
    }])
}

/// Collapses variants sharing (chrom, pos, ref, alt). The most severe
/// significance wins; provenance tags merge; output is key-sorted.
pub fn dedupe_variants(records: Vec<VariantRecord>) -> Vec<VariantRecord> {
    let mut by_key: BTreeMap<(String, u64, String, String), VariantRecord> = BTreeMap::new();
    for rec in records {
        match by_key.entry(rec.key()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(rec);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let kept = e.get_mut();
                if rec.significance > kept.significance {
                    kept.significance = rec.significance;
                }
                kept.provenance.extend(rec.provenance);
                if kept.transcript.is_none() {
                    kept.transcript = rec.transcript;
                }
                if kept.hgvs_c.is_none() {
                    kept.hgvs_c = rec.hgvs_c;
                }
                if kept.hgvs_p.is_none() {
                    kept.hgvs_p = rec.hgvs_p;
                }
            }
        }
    }
    by_key.into_values().collect()
}

/// A gene with its associated diseases and phenotypes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneRecord {
    pub symbol: String,
    pub diseases: BTreeSet<TermId>,
    pub phenotypes: BTreeSet<TermId>,
}

/// Parses the gene table TSV: symbol, disease_ids (|-separated),
/// phenotype_ids (|-separated).
pub fn parse_genes<R: Read>(
    source: R,
    opts: &ParseOptions,
) -> Result<ParseOutcome<Vec<GeneRecord>>, ParseError> {
    let reader = BufReader::new(source);
    let mut records = Vec::new();
    let mut issues = Vec::new();
    let mut data_rows = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let row = lineno + 1;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if row == 1 && trimmed.starts_with("symbol\t") {
            continue; // header row
        }
        data_rows += 1;
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() < 3 {
            issues.push(RowIssue {
                row,
                message: format!("expected 3 columns, found {}", fields.len()),
            });
            continue;
        }
        let symbol = fields[0].trim().to_string();
        if symbol.is_empty()
            || !symbol
                .bytes()
                .all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'-')
        {
            issues.push(RowIssue {
                row,
                message: format!("bad gene symbol {symbol:?}"),
            });
            continue;
        }
        let parse_ids = |s: &str| -> Result<BTreeSet<TermId>, String> {
            s.split('|')
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<TermId>().map_err(|e| e.to_string()))
                .collect()
        };
        match (parse_ids(fields[1]), parse_ids(fields[2])) {
            (Ok(diseases), Ok(phenotypes)) => records.push(GeneRecord {
                symbol,
                diseases,
                phenotypes,
            }),
            (Err(e), _) | (_, Err(e)) => issues.push(RowIssue { row, message: e }),
        }
    }

    check_reject_rate(issues.len(), data_rows, opts)?;
    Ok(ParseOutcome { records, issues })
}

/// Offline disease-name → ORPHA/OMIM mapping table.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct NormalizationTable {
    entries: BTreeMap<String, (TermId, String)>,
}

/// Lowercases and collapses internal whitespace runs to single spaces.
pub fn normalize_label(label: &str) -> String {
    label
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

impl NormalizationTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: &str, term: TermId, provenance: impl Into<String>) {
        self.entries
            .insert(normalize_label(label), (term, provenance.into()));
    }

    /// Case- and whitespace-insensitive lookup. Absence is a value.
    pub fn lookup(&self, label: &str) -> Option<&TermId> {
        let key = normalize_label(label);
        if key.is_empty() {
            return None;
        }
        self.entries.get(&key).map(|(t, _)| t)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &TermId, &String)> {
        self.entries.iter().map(|(k, (t, p))| (k, t, p))
    }
}

/// Parses the normalization TSV: label, term_id, provenance.
pub fn parse_normalization<R: Read>(
    source: R,
    opts: &ParseOptions,
) -> Result<ParseOutcome<NormalizationTable>, ParseError> {
    let reader = BufReader::new(source);
    let mut table = NormalizationTable::new();
    let mut issues = Vec::new();
    let mut data_rows = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let row = lineno + 1;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if row == 1 && trimmed.starts_with("label\t") {
            continue; // header row
        }
        data_rows += 1;
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() < 3 {
            issues.push(RowIssue {
                row,
                message: format!("expected 3 columns, found {}", fields.len()),
            });
            continue;
        }
        match fields[1].parse::<TermId>() {
            Ok(id) if id.is_disease() => table.insert(fields[0], id, fields[2]),
            Ok(id) => issues.push(RowIssue {
                row,
                message: format!("{id} is not a disease id"),
            }),
            Err(e) => issues.push(RowIssue {
                row,
                message: e.to_string(),
            }),
        }
    }

    check_reject_rate(issues.len(), data_rows, opts)?;
    Ok(ParseOutcome {
        records: table,
        issues,
    })
}

/// Cross-source consistency findings, produced before a KG build.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub dangling_phenotypes: Vec<String>,
    pub dangling_diseases: Vec<String>,
    pub duplicate_edges: Vec<String>,
    pub unknown_genes: Vec<String>,
}

impl ValidationReport {
    pub fn error_count(&self) -> usize {
        self.dangling_phenotypes.len()
            + self.dangling_diseases.len()
            + self.duplicate_edges.len()
            + self.unknown_genes.len()
    }

    pub fn is_clean(&self) -> bool {
        self.error_count() == 0
    }
}

/// Checks annotations, genes, and variants against the phenotype ontology
/// and each other. A clean report is a precondition of the KG build.
pub fn validate_sources(
    ontology: &crate::ontology::OntologyGraph,
    annotations: &DiseaseAnnotationSet,
    genes: &[GeneRecord],
    variants: &[VariantRecord],
) -> ValidationReport {
    let mut report = ValidationReport::default();

    for ann in annotations.annotations() {
        if !ontology.contains(&ann.phenotype) {
            report
                .dangling_phenotypes
                .push(format!("annotation {} -> {}", ann.disease, ann.phenotype));
        }
    }

    let mut seen = BTreeSet::new();
    for ann in annotations.annotations() {
        if !seen.insert((ann.disease.clone(), ann.phenotype.clone())) {
            report
                .duplicate_edges
                .push(format!("annotation {} -> {}", ann.disease, ann.phenotype));
        }
    }

    let known_diseases: BTreeSet<&TermId> = annotations.diseases().collect();
    let gene_symbols: BTreeSet<&str> = genes.iter().map(|g| g.symbol.as_str()).collect();
    for gene in genes {
        for pheno in &gene.phenotypes {
            if !ontology.contains(pheno) {
                report
                    .dangling_phenotypes
                    .push(format!("gene {} -> {}", gene.symbol, pheno));
            }
        }
        for disease in &gene.diseases {
            if !known_diseases.contains(disease) && !ontology.contains(disease) {
                report
                    .dangling_diseases
                    .push(format!("gene {} -> {}", gene.symbol, disease));
            }
        }
    }

    for variant in variants {
        if !variant.gene.is_empty() && !gene_symbols.contains(variant.gene.as_str()) {
            report.unknown_genes.push(format!(
                "variant {} -> gene {}",
                variant.key_string(),
                variant.gene
            ));
        }
    }

    report
}
