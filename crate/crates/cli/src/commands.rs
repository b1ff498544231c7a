//! Subcommand implementations: each loads its inputs via the run config,
//! delegates to the library, and writes reports stamped with the config
//! hash and seed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use rarekg::cases::{
    generate_synthetic_case, slice_ablation, slice_incremental, CaseRecord, Section,
    SyntheticCaseSpec,
};
use rarekg::clients::ReplayCache;
use rarekg::eval::{
    aggregate_finder, fit_global_surrogate, normalize_predictions, parse_prediction_list,
    profile_evidence, summarize_evidence, topk_accuracy, EvalCase, EvalError, EvidenceProfile,
    FinderScorecard, PredictionSet,
};
use rarekg::ingest::{
    dedupe_variants, parse_genes, parse_hpoa, parse_normalization, parse_variants,
    DiseaseAnnotationSet, GeneRecord, NormalizationTable, ParseOptions, VariantFormat,
    VariantRecord,
};
use rarekg::kg::{
    build_kg, load_snapshot, retrieve_by_phenotypes, save_snapshot, serialize_context,
    ContextForm, KnowledgeGraph,
};
use rarekg::ontology::{compute_ic, parse_ontology, OntologyFormat, OntologyGraph, TermIC};
use rarekg::ranking::{
    composite_difficulty, rank_diseases, stratify_case, PatientProfile, RankMethod,
};
use rarekg::TermId;

use crate::config::RunConfig;
use crate::error::CliError;

pub const REPORT_VERSION: u32 = 1;

/// Envelope written around every report payload.
#[derive(Debug, Serialize, Deserialize)]
pub struct Report<T> {
    pub version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub payload: T,
}

fn write_report<T: Serialize>(
    config: &RunConfig,
    path: &Path,
    payload: T,
) -> Result<(), CliError> {
    let report = Report {
        version: REPORT_VERSION,
        config_hash: config.hash(),
        seed: config.seed,
        payload,
    };
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Io(format!("serializing {}: {e}", path.display())))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(())
}

fn ensure_out_dir(config: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&config.out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", config.out_dir.display())))
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::Io(format!("opening {}: {e}", path.display())))
}

fn required<'a>(path: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Validation(format!("config is missing the {what} path")))
}

fn ontology_format(config: &RunConfig) -> Result<OntologyFormat, CliError> {
    match config.ontology_format.as_str() {
        "obo" => Ok(OntologyFormat::OboSubset),
        "json" => Ok(OntologyFormat::JsonSubset),
        other => Err(CliError::Validation(format!(
            "unknown ontology format {other:?} (expected \"obo\" or \"json\")"
        ))),
    }
}

fn load_ontology(config: &RunConfig) -> Result<OntologyGraph, CliError> {
    let path = required(&config.ontology, "ontology")?;
    parse_ontology(open(path)?, ontology_format(config)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_annotations(config: &RunConfig) -> Result<DiseaseAnnotationSet, CliError> {
    let path = required(&config.hpoa, "hpoa")?;
    let outcome = parse_hpoa(open(path)?, &ParseOptions::default())
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(outcome.records)
}

fn load_cases(config: &RunConfig) -> Result<Vec<CaseRecord>, CliError> {
    let path = required(&config.cases, "cases")?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn ic_from_sources(config: &RunConfig) -> Result<(OntologyGraph, DiseaseAnnotationSet, TermIC), CliError> {
    let ontology = load_ontology(config)?;
    let annotations = load_annotations(config)?;
    let ic = compute_ic(&ontology, &annotations)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok((ontology, annotations, ic))
}

fn profile_of(case: &CaseRecord) -> PatientProfile {
    PatientProfile {
        case_id: case.case_id.clone(),
        phenotypes: case.phenotypes.clone(),
        truth: case.truth.clone(),
    }
}

// ---------------------------------------------------------------- build

pub fn cmd_build(config: &RunConfig) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let ontology = load_ontology(config)?;
    let annotations = load_annotations(config)?;
    let opts = ParseOptions::default();
    let genes: Vec<GeneRecord> = match &config.genes {
        Some(path) => {
            parse_genes(open(path)?, &opts)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
                .records
        }
        None => Vec::new(),
    };
    let variants: Vec<VariantRecord> = match &config.variants {
        Some(path) => {
            let format = match config.variant_format.as_str() {
                "vcf" => VariantFormat::VcfSlim,
                "tsv" => VariantFormat::Tsv,
                other => {
                    return Err(CliError::Validation(format!(
                        "unknown variant format {other:?} (expected \"vcf\" or \"tsv\")"
                    )))
                }
            };
            dedupe_variants(
                parse_variants(open(path)?, format, &opts)
                    .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
                    .records,
            )
        }
        None => Vec::new(),
    };

    let (kg, report) = match build_kg(&ontology, &annotations, &genes, &variants) {
        Ok(pair) => pair,
        Err(rarekg::kg::KgError::ValidationNotClean(n)) => {
            let report =
                rarekg::ingest::validate_sources(&ontology, &annotations, &genes, &variants);
            write_report(config, &config.out_dir.join("validation.json"), &report)?;
            return Err(CliError::Validation(format!(
                "{n} validation findings; see validation.json"
            )));
        }
        Err(e) => return Err(CliError::Validation(e.to_string())),
    };

    let snapshot_path = config.out_dir.join("snapshot.jsonl");
    let file = File::create(&snapshot_path)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", snapshot_path.display())))?;
    save_snapshot(&kg, BufWriter::new(file))
        .map_err(|e| CliError::Io(format!("writing {}: {e}", snapshot_path.display())))?;
    write_report(config, &config.out_dir.join("build_stats.json"), kg.stats())?;
    write_report(config, &config.out_dir.join("validation.json"), &report)?;
    eprintln!("snapshot written to {}", snapshot_path.display());
    Ok(())
}

// ----------------------------------------------------------------- rank

pub fn cmd_rank(config: &RunConfig, method: &str, k: usize) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let method = match method {
        "base-ic" => RankMethod::BaseIc,
        "bidirectional" => RankMethod::Bidirectional,
        other => {
            return Err(CliError::Validation(format!(
                "unknown rank method {other:?} (expected \"base-ic\" or \"bidirectional\")"
            )))
        }
    };
    let (ontology, annotations, ic) = ic_from_sources(config)?;
    let cases = load_cases(config)?;

    let mut rankings = BTreeMap::new();
    for case in &cases {
        let profile = profile_of(case);
        let ranked = rank_diseases(&ic, &ontology, &annotations, &profile, method, k)
            .map_err(|e| CliError::Validation(format!("{}: {e}", case.case_id)))?;
        rankings.insert(case.case_id.clone(), ranked);
    }
    write_report(config, &config.out_dir.join("rankings.json"), &rankings)?;
    Ok(())
}

// ------------------------------------------------------------- retrieve

fn load_graph_snapshot(config: &RunConfig) -> Result<KnowledgeGraph, CliError> {
    let path = required(&config.snapshot, "snapshot")?;
    load_snapshot(open(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn cmd_retrieve(
    config: &RunConfig,
    phenotypes: &[String],
    k: usize,
    exact: bool,
) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let kg = load_graph_snapshot(config)?;
    let (ontology, _annotations, ic) = ic_from_sources(config)?;
    let query: BTreeSet<TermId> = phenotypes
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|e| CliError::Parse(format!("phenotype {p:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let block = retrieve_by_phenotypes(&kg, &ontology, &ic, &query, k, exact)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    std::fs::write(
        config.out_dir.join("context.txt"),
        serialize_context(&block, ContextForm::Text),
    )
    .map_err(|e| CliError::Io(e.to_string()))?;
    write_report(config, &config.out_dir.join("context.json"), &block)?;
    Ok(())
}

// ------------------------------------------------------------- simulate

pub fn cmd_simulate(
    config: &RunConfig,
    disease: &str,
    count: usize,
) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let (ontology, annotations, ic) = ic_from_sources(config)?;
    let disease: TermId = disease
        .parse()
        .map_err(|e| CliError::Parse(format!("disease {disease:?}: {e}")))?;
    let mut cases = Vec::with_capacity(count);
    for i in 0..count {
        let spec = SyntheticCaseSpec {
            disease: disease.clone(),
            n_signal: config.synthetic.n_signal,
            n_distractors: config.synthetic.n_distractors,
            rng_seed: config.seed.wrapping_add(i as u64),
        };
        let case = generate_synthetic_case(&ontology, &annotations, &ic, &spec)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        cases.push(case);
    }
    write_report(config, &config.out_dir.join("synthetic_cases.json"), &cases)?;
    Ok(())
}

// ---------------------------------------------------------------- slice

pub fn cmd_slice(config: &RunConfig, mode: &str) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let cases = load_cases(config)?;
    match mode {
        "incremental" => {
            let mut out: BTreeMap<String, Vec<CaseRecord>> = BTreeMap::new();
            for case in &cases {
                let steps: Vec<CaseRecord> = (1..=Section::ALL.len())
                    .map(|step| slice_incremental(case, step))
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                out.insert(case.case_id.clone(), steps);
            }
            write_report(config, &config.out_dir.join("slices_incremental.json"), &out)
        }
        "ablation" => {
            let mut out: BTreeMap<String, BTreeMap<String, CaseRecord>> = BTreeMap::new();
            for case in &cases {
                let ablated: BTreeMap<String, CaseRecord> = Section::ALL
                    .iter()
                    .map(|&s| (s.as_str().to_string(), slice_ablation(case, s)))
                    .collect();
                out.insert(case.case_id.clone(), ablated);
            }
            write_report(config, &config.out_dir.join("slices_ablation.json"), &out)
        }
        other => Err(CliError::Validation(format!(
            "unknown slice mode {other:?} (expected \"incremental\" or \"ablation\")"
        ))),
    }
}

// ----------------------------------------------------------------- eval

/// One model output awaiting evaluation; either raw text or a pre-parsed
/// ranked label list.
#[derive(Debug, Deserialize)]
struct PredictionRecord {
    case_id: String,
    #[serde(default)]
    model_tag: String,
    #[serde(default)]
    raw_output_text: Option<String>,
    #[serde(default)]
    predictions: Option<Vec<String>>,
}

fn load_prediction_records(path: &Path) -> Result<Vec<PredictionRecord>, CliError> {
    let file = open(path)?;
    let mut records = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord = serde_json::from_str(&line).map_err(|e| {
            CliError::Parse(format!("{} line {}: {e}", path.display(), lineno + 1))
        })?;
        records.push(record);
    }
    Ok(records)
}

fn load_normalization(config: &RunConfig) -> Result<NormalizationTable, CliError> {
    match &config.normalization {
        Some(path) => Ok(parse_normalization(open(path)?, &ParseOptions::default())
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
            .records),
        None => Ok(NormalizationTable::new()),
    }
}

#[derive(Debug, Serialize)]
struct Unevaluable {
    case_id: String,
    reason: String,
}

pub fn cmd_eval(
    config: &RunConfig,
    allow_unevaluable: bool,
    replay: Option<&Path>,
) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let cases = load_cases(config)?;
    let truths: BTreeMap<&str, &CaseRecord> =
        cases.iter().map(|c| (c.case_id.as_str(), c)).collect();
    // Stratification needs the annotation corpus; skip it silently when
    // the run has no HPOA/ontology inputs.
    let stratifier = load_annotations(config)
        .ok()
        .zip(load_ontology(config).ok());
    let strata: BTreeMap<&str, Option<String>> = cases
        .iter()
        .map(|c| {
            let label = stratifier.as_ref().and_then(|(annotations, ontology)| {
                stratify_case(annotations, ontology, &profile_of(c), false)
                    .ok()
                    .map(|s| format!("{:?}", s.tier).to_lowercase())
            });
            (c.case_id.as_str(), label)
        })
        .collect();
    let table = load_normalization(config)?;
    let disease_ontology = match &config.disease_ontology {
        Some(path) => parse_ontology(open(path)?, ontology_format(config)?)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?,
        None => OntologyGraph::from_terms(vec![]).expect("empty graph builds"),
    };
    let replay_cache = match replay {
        Some(path) => Some(ReplayCache::open(path).map_err(|e| CliError::Io(e.to_string()))?),
        None => None,
    };

    let records = load_prediction_records(required(&config.predictions, "predictions")?)?;
    let mut eval_cases = Vec::new();
    let mut unevaluable: Vec<Unevaluable> = Vec::new();
    for record in &records {
        let truth = match truths.get(record.case_id.as_str()).and_then(|c| c.truth.clone()) {
            Some(t) => t,
            None => {
                unevaluable.push(Unevaluable {
                    case_id: record.case_id.clone(),
                    reason: "no confirmed diagnosis on file".to_string(),
                });
                continue;
            }
        };
        let labels: Vec<(usize, String)> = if let Some(list) = &record.predictions {
            list.iter().cloned().enumerate().map(|(i, l)| (i + 1, l)).collect()
        } else {
            match parse_prediction_list(record.raw_output_text.as_deref().unwrap_or("")) {
                Ok(labels) => labels,
                Err(EvalError::NoListFound) | Err(EvalError::EmptyInput) => {
                    unevaluable.push(Unevaluable {
                        case_id: record.case_id.clone(),
                        reason: "no prediction list found in output".to_string(),
                    });
                    continue;
                }
                Err(e) => return Err(CliError::Parse(e.to_string())),
            }
        };
        // Replay mode resolves unmapped labels from the recorded resolver
        // cache; there is never a live call here.
        let mut resolve = replay_cache.as_ref().map(|cache| {
            move |label: &str| -> Option<TermId> {
                cache.get(&cache_key(label)).and_then(|v| v.parse().ok())
            }
        });
        let set: PredictionSet = normalize_predictions(
            &record.case_id,
            &record.model_tag,
            &labels,
            &table,
            resolve.as_mut().map(|f| f as &mut dyn FnMut(&str) -> Option<TermId>),
        );
        let stratum = strata.get(record.case_id.as_str()).cloned().flatten();
        eval_cases.push(EvalCase {
            predictions: set,
            truth,
            stratum,
            category: truths
                .get(record.case_id.as_str())
                .and_then(|c| c.orphanet_categories.iter().next().cloned()),
        });
    }

    if !unevaluable.is_empty() {
        write_report(config, &config.out_dir.join("unevaluable.json"), &unevaluable)?;
        if !allow_unevaluable {
            return Err(CliError::Validation(format!(
                "{} unevaluable cases; see unevaluable.json or pass --allow-unevaluable",
                unevaluable.len()
            )));
        }
    }

    let report = topk_accuracy(&eval_cases, &disease_ontology, &config.eval)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    write_csv(config, &report)?;
    write_report(config, &config.out_dir.join("eval_report.json"), &report)?;
    Ok(())
}

fn cache_key(label: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(b"resolve:");
    hasher.update(rarekg::ingest::normalize_label(label).as_bytes());
    hex::encode(hasher.finalize())
}

fn write_csv(config: &RunConfig, report: &rarekg::eval::EvalReport) -> Result<(), CliError> {
    let path = config.out_dir.join("accuracy.csv");
    let mut out = String::from("group,k,accuracy,ci_lower,ci_upper,stderr\n");
    for row in &report.per_cutoff {
        out.push_str(&format!(
            "all,{},{:.6},{:.6},{:.6},{:.6}\n",
            row.k, row.accuracy, row.ci_lower, row.ci_upper, row.stderr
        ));
    }
    for (label, rows) in &report.per_stratum {
        for row in rows {
            out.push_str(&format!(
                "stratum:{label},{},{:.6},{:.6},{:.6},{:.6}\n",
                row.k, row.accuracy, row.ci_lower, row.ci_upper, row.stderr
            ));
        }
    }
    for (label, rows) in &report.per_category {
        for row in rows {
            out.push_str(&format!(
                "category:{label},{},{:.6},{:.6},{:.6},{:.6}\n",
                row.k, row.accuracy, row.ci_lower, row.ci_upper, row.stderr
            ));
        }
    }
    out.push_str(&format!("# config_hash={} seed={}\n", config.hash(), config.seed));
    std::fs::write(&path, out).map_err(|e| CliError::Io(e.to_string()))
}

// ----------------------------------------------------------- difficulty

pub fn cmd_difficulty(config: &RunConfig) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let (ontology, annotations, ic) = ic_from_sources(config)?;
    let cases = load_cases(config)?;
    let profiles: Vec<PatientProfile> = cases.iter().map(profile_of).collect();
    let scores = composite_difficulty(&ic, &profiles)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut strata = BTreeMap::new();
    for profile in &profiles {
        if profile.truth.is_some() {
            let s = stratify_case(&annotations, &ontology, profile, false)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            strata.insert(profile.case_id.clone(), s);
        }
    }
    #[derive(Serialize)]
    struct DifficultyReport<A, B> {
        scores: A,
        strata: B,
    }
    write_report(
        config,
        &config.out_dir.join("difficulty.json"),
        DifficultyReport { scores, strata },
    )
}

// --------------------------------------------------------------- finder

pub fn cmd_finder(config: &RunConfig, scorecards: &Path) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let text = std::fs::read_to_string(scorecards)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", scorecards.display())))?;
    let cards: Vec<FinderScorecard> = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", scorecards.display())))?;
    let aggregate = aggregate_finder(&cards).map_err(|e| CliError::Validation(e.to_string()))?;
    write_report(config, &config.out_dir.join("finder.json"), &aggregate)
}

// ------------------------------------------------------------ surrogate

#[derive(Debug, Deserialize)]
struct SurrogateInput {
    features: Vec<TermId>,
    rows: Vec<Vec<f64>>,
    response: Vec<f64>,
}

pub fn cmd_surrogate(config: &RunConfig, design: &Path) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let text = std::fs::read_to_string(design)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", design.display())))?;
    let input: SurrogateInput = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", design.display())))?;
    let fit = fit_global_surrogate(&input.features, &input.rows, &input.response)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    write_report(config, &config.out_dir.join("surrogate.json"), &fit)
}

// ------------------------------------------------------------- evidence

#[derive(Debug, Deserialize)]
struct EvidenceInput {
    case_id: String,
    features: Vec<String>,
}

pub fn cmd_evidence(config: &RunConfig, features: &Path) -> Result<(), CliError> {
    ensure_out_dir(config)?;
    let ontology = load_ontology(config)?;
    let text = std::fs::read_to_string(features)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", features.display())))?;
    let inputs: Vec<EvidenceInput> = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", features.display())))?;
    let profiles: Vec<EvidenceProfile> = inputs
        .iter()
        .map(|i| profile_evidence(&ontology, &i.case_id, &i.features))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let summary =
        summarize_evidence(&profiles).map_err(|e| CliError::Validation(e.to_string()))?;
    #[derive(Serialize)]
    struct EvidenceReport<A, B> {
        profiles: A,
        summary: B,
    }
    write_report(
        config,
        &config.out_dir.join("evidence.json"),
        EvidenceReport { profiles, summary },
    )
}
