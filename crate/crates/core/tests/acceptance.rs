//! End-to-end acceptance gate. Each test covers one numbered criterion and
//! prints a single pass line; the suite runs fully offline.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use rarekg::cases::{
    generate_synthetic_case, slice_ablation, slice_incremental, CaseRecord, Section,
    SyntheticCaseSpec,
};
use rarekg::clients::{
    LlmClient, LlmEndpointConfig, ReplayCache, ResolverClient, ResolverConfig, StubTransport,
};
use rarekg::eval::{
    bootstrap_ci, compare_groups, match_diagnosis, parse_prediction_list, topk_accuracy,
    EvalCase, EvalConfig, MatchPolicy, Prediction, PredictionSet,
};
use rarekg::ingest::{parse_hpoa, DiseaseAnnotationSet, ParseOptions};
use rarekg::kg::{
    build_kg, load_snapshot, retrieve_by_phenotypes, save_snapshot, serialize_context,
    ContextForm,
};
use rarekg::ontology::{compute_ic, parse_ontology, OntologyFormat, OntologyGraph, TermIC};
use rarekg::ranking::{
    composite_difficulty, rank_diseases, PatientProfile, RankMethod, Tier,
};
use rarekg::TermId;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load_fixture_corpus() -> (OntologyGraph, DiseaseAnnotationSet, TermIC) {
    let graph = parse_ontology(
        std::fs::File::open(fixture("hp50.obo")).unwrap(),
        OntologyFormat::OboSubset,
    )
    .unwrap();
    let annotations = parse_hpoa(
        std::fs::File::open(fixture("phenotype.hpoa")).unwrap(),
        &ParseOptions::default(),
    )
    .unwrap()
    .records;
    let ic = compute_ic(&graph, &annotations).unwrap();
    (graph, annotations, ic)
}

fn orpha_graph() -> OntologyGraph {
    parse_ontology(
        std::fs::File::open(fixture("orpha.obo")).unwrap(),
        OntologyFormat::OboSubset,
    )
    .unwrap()
}

fn hp(n: u32) -> TermId {
    TermId::hp(n)
}

fn orpha(n: u64) -> TermId {
    TermId::orpha(n)
}

fn pass(number: u32, what: &str) {
    println!("ACCEPTANCE PASS {number:02}: {what}");
}

// ------------------------------------------------------------------- 1

/// A 5-term flat vocabulary whose ICs are -ln(1/4), -ln(2/4), -ln(4/4) by
/// construction, so the difficulty arithmetic can be checked against exact
/// hand-computed rationals.
fn difficulty_fixture() -> (TermIC, Vec<PatientProfile>) {
    let mut obo = String::from("[Term]\nid: HP:0000001\nname: root\n\n");
    for n in 2..=6 {
        obo.push_str(&format!(
            "[Term]\nid: HP:000000{n}\nname: t{n}\nis_a: HP:0000001\n\n"
        ));
    }
    let graph = parse_ontology(obo.as_bytes(), OntologyFormat::OboSubset).unwrap();

    // a=HP2, b=HP3 annotate 1 disease each; c=HP4, d=HP5 two; e=HP6 four.
    let hpoa_rows: &[(&str, &[u32])] = &[
        ("ORPHA:1", &[2, 4, 6]),
        ("ORPHA:2", &[3, 4, 6]),
        ("ORPHA:3", &[5, 6]),
        ("ORPHA:4", &[5, 6]),
    ];
    let mut tsv = String::from(
        "database_id\tdisease_name\tqualifier\thpo_id\treference\tevidence\tonset\t\
         frequency\tsex\tmodifier\taspect\tbiocuration\n",
    );
    for (disease, terms) in hpoa_rows {
        for t in *terms {
            tsv.push_str(&format!(
                "{disease}\td\t\tHP:000000{t}\tPMID:1\tPCS\t\t\t\t\tP\tx[2024-01-01]\n"
            ));
        }
    }
    let annotations = parse_hpoa(tsv.as_bytes(), &ParseOptions::default())
        .unwrap()
        .records;
    let ic = compute_ic(&graph, &annotations).unwrap();

    let case = |id: &str, terms: &[u32]| PatientProfile {
        case_id: id.to_string(),
        phenotypes: terms.iter().map(|&n| hp(n)).collect(),
        truth: None,
    };
    let cohort = vec![
        case("c1", &[2]),
        case("c2", &[2, 4]),
        case("c3", &[4, 5, 6]),
        case("c4", &[3, 4, 5, 6]),
    ];
    (ic, cohort)
}

#[test]
fn criterion_01_composite_difficulty_formula_fidelity() {
    let start = Instant::now();
    let (ic, cohort) = difficulty_fixture();

    // Sanity-check the IC construction the hand oracle assumed.
    let ln2 = std::f64::consts::LN_2;
    assert!((ic.ic(&hp(2)) - 2.0 * ln2).abs() < 1e-12);
    assert!((ic.ic(&hp(4)) - ln2).abs() < 1e-12);
    assert!(ic.ic(&hp(6)).abs() < 1e-12);

    let scores = composite_difficulty(&ic, &cohort).unwrap();
    let by_id: BTreeMap<&str, &rarekg::ranking::DifficultyScore> =
        scores.iter().map(|s| (s.case_id.as_str(), s)).collect();

    // Hand/spreadsheet oracle, computed independently from the IC values:
    //   mean_ic:      c1=2ln2, c2=1.5ln2, c3=(2/3)ln2, c4=ln2
    //   norm_mean_ic: 1, 0.625, 0, 0.25
    //   norm_cnt:     0, 1/3, 2/3, 1
    //   composite:    0, 0.125, 2/3, 0.75
    let expected = [
        ("c1", 1.0, 0.0, 0.0),
        ("c2", 0.625, 1.0 / 3.0, 0.125),
        ("c3", 0.0, 2.0 / 3.0, 2.0 / 3.0),
        ("c4", 0.25, 1.0, 0.75),
    ];
    for (id, norm_mean, norm_cnt, composite) in expected {
        let s = by_id[id];
        assert!((s.norm_mean_ic - norm_mean).abs() < 1e-12, "{id} norm_mean_ic");
        assert!((s.norm_cnt - norm_cnt).abs() < 1e-12, "{id} norm_cnt");
        assert!((s.composite - composite).abs() < 1e-12, "{id} composite");
    }
    // Boundary cases are exact, not just close.
    assert_eq!(by_id["c1"].composite, 0.0);

    // Second cohort where one case is simultaneously hardest on both axes:
    // composite exactly 1.0.
    let (ic2, cohort2) = {
        let (ic, cohort) = difficulty_fixture();
        (ic, vec![cohort[0].clone(), cohort[2].clone()])
    };
    let scores2 = composite_difficulty(&ic2, &cohort2).unwrap();
    let c3 = scores2.iter().find(|s| s.case_id == "c3").unwrap();
    assert_eq!(c3.composite, 1.0);
    let c1 = scores2.iter().find(|s| s.case_id == "c1").unwrap();
    assert_eq!(c1.composite, 0.0);

    assert!(start.elapsed().as_secs_f64() < 1.0, "runtime budget");
    pass(1, "composite difficulty matches the hand oracle to 1e-12");
}

// ------------------------------------------------------------------- 2

/// Independent ancestor closure using only the public term/parent fields.
fn naive_ancestors(graph: &OntologyGraph, t: &TermId, reflexive: bool) -> BTreeSet<TermId> {
    let mut out = BTreeSet::new();
    let mut stack = vec![t.clone()];
    while let Some(id) = stack.pop() {
        for parent in &graph.term(&id).unwrap().parents {
            if out.insert(parent.clone()) {
                stack.push(parent.clone());
            }
        }
    }
    if reflexive {
        out.insert(t.clone());
    }
    out
}

fn oracle_base_ic(
    ic: &TermIC,
    graph: &OntologyGraph,
    patient: &BTreeSet<TermId>,
    disease_terms: &BTreeSet<TermId>,
) -> f64 {
    let mut closure = BTreeSet::new();
    for t in disease_terms {
        closure.extend(naive_ancestors(graph, t, true));
    }
    patient
        .iter()
        .filter(|t| closure.contains(*t))
        .map(|t| ic.ic(t))
        .sum()
}

fn oracle_bidirectional(
    ic: &TermIC,
    graph: &OntologyGraph,
    patient: &BTreeSet<TermId>,
    disease_terms: &BTreeSet<TermId>,
) -> f64 {
    let mica = |a: &TermId, b: &TermId| -> f64 {
        let anc_a = naive_ancestors(graph, a, true);
        let anc_b = naive_ancestors(graph, b, true);
        anc_a
            .intersection(&anc_b)
            .map(|t| ic.ic(t))
            .fold(0.0, f64::max)
    };
    let directed = |from: &BTreeSet<TermId>, to: &BTreeSet<TermId>| -> f64 {
        let sum: f64 = from
            .iter()
            .map(|a| to.iter().map(|b| mica(a, b)).fold(0.0, f64::max))
            .sum();
        sum / from.len() as f64
    };
    (directed(patient, disease_terms) + directed(disease_terms, patient)) / 2.0
}

#[test]
fn criterion_02_ranking_equals_brute_force_oracles() {
    let start = Instant::now();
    let (graph, annotations, ic) = load_fixture_corpus();
    assert!(annotations.disease_count() <= 50);
    assert!(graph.len() <= 200);

    // Patients: every disease's own annotation set, plus seeded mixtures.
    let mut patients: Vec<BTreeSet<TermId>> = annotations
        .diseases()
        .map(|d| annotations.phenotypes_of(d))
        .collect();
    let all_terms: Vec<TermId> = graph.terms().map(|t| t.id.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let n = rng.gen_range(2..=6);
        patients.push(all_terms.choose_multiple(&mut rng, n).cloned().collect());
    }

    for (i, phenotypes) in patients.iter().enumerate() {
        let profile = PatientProfile {
            case_id: format!("p{i}"),
            phenotypes: phenotypes.clone(),
            truth: None,
        };
        for method in [RankMethod::BaseIc, RankMethod::Bidirectional] {
            let ranked = rank_diseases(
                &ic,
                &graph,
                &annotations,
                &profile,
                method,
                annotations.disease_count(),
            )
            .unwrap();

            // Full oracle ranking with the same (score desc, key asc)
            // tie-break, scored exhaustively.
            let mut oracle: Vec<(TermId, f64)> = annotations
                .diseases()
                .map(|d| {
                    let terms = annotations.phenotypes_of(d);
                    let score = match method {
                        RankMethod::BaseIc => {
                            oracle_base_ic(&ic, &graph, phenotypes, &terms)
                        }
                        RankMethod::Bidirectional => {
                            oracle_bidirectional(&ic, &graph, phenotypes, &terms)
                        }
                    };
                    (d.clone(), score)
                })
                .collect();
            oracle.sort_by(|a, b| {
                b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0))
            });

            assert_eq!(ranked.len(), oracle.len());
            for (got, want) in ranked.iter().zip(&oracle) {
                assert_eq!(got.disease, want.0, "patient p{i} {method:?} tie order");
                assert_eq!(got.score, want.1, "patient p{i} {method:?} score");
            }
        }
    }
    assert!(start.elapsed().as_secs_f64() < 10.0, "runtime budget");
    pass(2, "BASE_IC and BIDIRECTIONAL rankings equal brute-force oracles");
}

// ------------------------------------------------------------------- 3

#[test]
fn criterion_03_ic_properties() {
    let start = Instant::now();
    let (graph, annotations, ic) = load_fixture_corpus();

    // Anti-monotonicity along every edge.
    for term in graph.terms() {
        for parent in &term.parents {
            assert!(
                ic.ic(parent) <= ic.ic(&term.id) + 1e-12,
                "IC({parent}) > IC({})",
                term.id
            );
        }
    }
    // IC(root) = 0 under universal reachability.
    for root in graph.roots() {
        assert_eq!(ic.ic(root), 0.0);
    }

    // Permutation invariance over disease input order.
    let mut reversed = DiseaseAnnotationSet::new();
    for ann in annotations.annotations().iter().rev() {
        reversed.push(ann.clone()).unwrap();
    }
    let ic_rev = compute_ic(&graph, &reversed).unwrap();
    for term in graph.terms() {
        assert_eq!(ic.ic(&term.id), ic_rev.ic(&term.id), "{}", term.id);
    }

    assert!(start.elapsed().as_secs_f64() < 5.0, "runtime budget");
    pass(3, "IC anti-monotone, IC(root)=0, permutation invariant");
}

// ------------------------------------------------------------------- 4

fn prediction_set(case_id: &str, codes: &[TermId]) -> PredictionSet {
    PredictionSet {
        case_id: case_id.to_string(),
        model_tag: "m".to_string(),
        predictions: codes
            .iter()
            .enumerate()
            .map(|(i, code)| Prediction {
                rank: i + 1,
                raw_label: code.to_string(),
                normalized: Some(code.clone()),
                excluded_reason: None,
            })
            .collect(),
        deduped: vec![],
    }
}

#[test]
fn criterion_04_matching_semantics() {
    let graph = orpha_graph();

    // The worked hierarchy pair: predicting the parent is credited,
    // exact mode rejects it.
    let hier = MatchPolicy::Hierarchical { max_depth: Some(1) };
    assert!(match_diagnosis(&orpha(91138), &orpha(93554), &graph, hier).unwrap());
    assert!(!match_diagnosis(&orpha(91138), &orpha(93554), &graph, MatchPolicy::Exact).unwrap());
    // The child is never credited for a parent truth.
    assert!(!match_diagnosis(
        &orpha(93554),
        &orpha(91138),
        &graph,
        MatchPolicy::Hierarchical { max_depth: None }
    )
    .unwrap());

    // Hierarchical accuracy dominates exact accuracy on randomized sets.
    let diseases: Vec<TermId> = graph.terms().map(|t| t.id.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = Vec::new();
    for i in 0..1000 {
        let truth = diseases.choose(&mut rng).unwrap().clone();
        let n = rng.gen_range(1..=5);
        let codes: Vec<TermId> = (0..n)
            .map(|_| diseases.choose(&mut rng).unwrap().clone())
            .collect();
        cases.push(EvalCase {
            predictions: prediction_set(&format!("c{i}"), &codes),
            truth,
            stratum: None,
            category: None,
        });
    }
    let hier_cfg = EvalConfig::default();
    let exact_cfg = EvalConfig {
        hierarchical: false,
        ..EvalConfig::default()
    };
    let hier_report = topk_accuracy(&cases, &graph, &hier_cfg).unwrap();
    let exact_report = topk_accuracy(&cases, &graph, &exact_cfg).unwrap();
    for (h, e) in hier_report.per_cutoff.iter().zip(&exact_report.per_cutoff) {
        assert!(
            h.accuracy >= e.accuracy,
            "k={}: hierarchical {} < exact {}",
            h.k,
            h.accuracy,
            e.accuracy
        );
    }
    pass(4, "parent credited / child rejected; hierarchical >= exact on 1000 sets");
}

// ------------------------------------------------------------------- 5

#[test]
fn criterion_05_protocol_constants() {
    // Candidate lists cap at 20.
    let listing: String = (1..=35).map(|i| format!("{i}. Disease number {i}\n")).collect();
    let parsed = parse_prediction_list(&listing).unwrap();
    assert_eq!(parsed.len(), 20);
    assert_eq!(parsed.last().unwrap().0, 20);

    // Tier boundaries on n in {0, 1, 2, 4, 5}.
    assert_eq!(Tier::from_count(0), Tier::Few);
    assert_eq!(Tier::from_count(1), Tier::Few);
    assert_eq!(Tier::from_count(2), Tier::Moderate);
    assert_eq!(Tier::from_count(4), Tier::Moderate);
    assert_eq!(Tier::from_count(5), Tier::Rich);

    // Bootstrap defaults to 1,000 resamples and is seed-deterministic.
    assert_eq!(EvalConfig::default().bootstrap_resamples, 1000);
    let values: Vec<f64> = (0..60).map(|i| ((i * 7) % 10) as f64 / 10.0).collect();
    let a = bootstrap_ci(&values, 1000, 0.95, 42).unwrap();
    let b = bootstrap_ci(&values, 1000, 0.95, 42).unwrap();
    assert_eq!(a, b);
    let c = bootstrap_ci(&values, 1000, 0.95, 43).unwrap();
    assert_ne!((a.lower, a.upper), (c.lower, c.upper));

    pass(5, "cap 20, tier boundaries, 1000-resample seeded bootstrap");
}

// ------------------------------------------------------------------- 6

#[test]
fn criterion_06_bootstrap_calibration() {
    // 500 ones, 500 zeros; analytic resampling stderr of the mean is
    // sqrt(0.25/1000) * sqrt(1000/999) ~= 0.0158.
    let mut values = vec![1.0; 500];
    values.extend(vec![0.0; 500]);
    let out = bootstrap_ci(&values, 1000, 0.95, 7).unwrap();
    assert_eq!(out.mean, 0.5);
    let analytic = (0.25f64 / 1000.0).sqrt() * (1000.0f64 / 999.0).sqrt();
    let rel = (out.stderr - analytic).abs() / analytic;
    assert!(rel < 0.2, "stderr {} vs analytic {analytic}", out.stderr);

    // Zero-variance input: degenerate CI (v, v).
    let flat = bootstrap_ci(&[0.3; 64], 1000, 0.95, 7).unwrap();
    assert_eq!((flat.lower, flat.upper), (0.3, 0.3));
    assert_eq!(flat.stderr, 0.0);
    pass(6, "bootstrap stderr within 20% of analytic; degenerate CI exact");
}

// ------------------------------------------------------------------- 7

#[test]
fn criterion_07_welch_t_test() {
    // Reference values computed beforehand with an independent
    // statistics package on these exact arrays.
    let a = [
        12.9, 13.5, 12.8, 15.6, 17.2, 19.2, 12.6, 15.3, 14.4, 11.3, 14.0, 13.1, 14.7, 13.3,
        13.6,
    ];
    let b = [
        13.7, 17.2, 14.8, 18.3, 16.9, 16.2, 14.9, 16.1, 15.4, 15.6, 15.2, 16.6, 15.9, 16.2,
        15.8,
    ];
    let (t, p) = compare_groups(&a, &b).unwrap();
    assert!((t - (-2.8801850472)).abs() < 1e-6, "t = {t}");
    assert!((p - 0.0087117391).abs() < 1e-6, "p = {p}");

    // Identical groups: p = 1 exactly.
    let same = [3.0, 4.0, 5.0, 6.0];
    let (t2, p2) = compare_groups(&same, &same).unwrap();
    assert_eq!(t2, 0.0);
    assert_eq!(p2, 1.0);
    pass(7, "Welch t-test matches the precomputed reference to 1e-6");
}

// ------------------------------------------------------------------- 8

#[test]
fn criterion_08_synthetic_case_soundness() {
    let (graph, annotations, ic) = load_fixture_corpus();
    let diseases: Vec<TermId> = annotations.diseases().cloned().collect();

    let mut checked = 0usize;
    for seed in 0..1000u64 {
        let disease = diseases[(seed as usize) % diseases.len()].clone();
        let direct = annotations.phenotypes_of(&disease);
        let spec = SyntheticCaseSpec {
            disease: disease.clone(),
            n_signal: 2.min(direct.len()),
            n_distractors: 3,
            rng_seed: seed,
        };
        let case = generate_synthetic_case(&graph, &annotations, &ic, &spec).unwrap();

        // Reflexive ancestor-descendant closure of the annotation set.
        let mut closure: BTreeSet<TermId> = BTreeSet::new();
        for t in &direct {
            closure.insert(t.clone());
            closure.extend(graph.ancestors(t, false).unwrap());
            closure.extend(graph.descendants(t, false).unwrap());
        }

        let signal: Vec<&TermId> = case
            .phenotypes
            .iter()
            .filter(|t| direct.contains(*t))
            .collect();
        let distractors: Vec<&TermId> = case
            .phenotypes
            .iter()
            .filter(|t| !direct.contains(*t))
            .collect();
        assert_eq!(signal.len(), spec.n_signal, "seed {seed}");
        assert_eq!(distractors.len(), spec.n_distractors, "seed {seed}");
        for t in &signal {
            assert!(closure.contains(*t), "seed {seed}: signal {t} outside closure");
        }
        for t in &distractors {
            assert!(!closure.contains(*t), "seed {seed}: distractor {t} inside closure");
        }

        // Identical seed, identical case.
        let again = generate_synthetic_case(&graph, &annotations, &ic, &spec).unwrap();
        assert_eq!(case, again, "seed {seed}");
        checked += 1;
    }
    assert_eq!(checked, 1000);
    pass(8, "1000 seeded generations: closure-sound and reproducible");
}

// ------------------------------------------------------------------- 9

#[test]
fn criterion_09_slicing_contracts() {
    // 50-case fixture with distinct text in every section.
    let cases: Vec<CaseRecord> = (0..50)
        .map(|i| {
            let mut case = CaseRecord::empty(format!("case-{i:02}"));
            for (j, &section) in Section::ALL.iter().enumerate() {
                case.set_section(section, format!("case {i} section {j} narrative"));
            }
            case
        })
        .collect();

    for case in &cases {
        // Incremental nesting: nonblank sections at step t are a subset of
        // step t+1, with exactly t sections populated.
        let steps: Vec<CaseRecord> = (1..=6)
            .map(|step| slice_incremental(case, step).unwrap())
            .collect();
        for (t, sliced) in steps.iter().enumerate() {
            assert_eq!(sliced.nonblank_sections().len(), t + 1);
        }
        for window in steps.windows(2) {
            assert!(window[0]
                .nonblank_sections()
                .is_subset(&window[1].nonblank_sections()));
        }
        assert_eq!(&steps[5], case, "step 6 is the full case");

        // Ablation: exactly one section differs, and it is blank.
        for &field in &Section::ALL {
            let ablated = slice_ablation(case, field);
            let differing: Vec<Section> = Section::ALL
                .iter()
                .copied()
                .filter(|&s| ablated.section(s) != case.section(s))
                .collect();
            assert_eq!(differing, vec![field]);
            assert!(ablated.section(field).is_empty());
        }
    }
    pass(9, "incremental nesting and single-field ablation hold on 50 cases");
}

// ------------------------------------------------------------------ 10

#[test]
fn criterion_10_retrieval_determinism() {
    let (graph, annotations, ic) = load_fixture_corpus();
    let (kg, _report) = build_kg(&graph, &annotations, &[], &[]).unwrap();

    let query: BTreeSet<TermId> = [hp(0000102), hp(0000113), hp(0000121)]
        .into_iter()
        .collect();
    let reference = serialize_context(
        &retrieve_by_phenotypes(&kg, &graph, &ic, &query, 20, false).unwrap(),
        ContextForm::Text,
    );
    for _ in 0..100 {
        let block = retrieve_by_phenotypes(&kg, &graph, &ic, &query, 20, false).unwrap();
        assert_eq!(serialize_context(&block, ContextForm::Text), reference);
    }

    // Snapshot round-trip reproduces identical retrieval output.
    let mut buffer = Vec::new();
    save_snapshot(&kg, &mut buffer).unwrap();
    let restored = load_snapshot(buffer.as_slice()).unwrap();
    let block = retrieve_by_phenotypes(&restored, &graph, &ic, &query, 20, false).unwrap();
    assert_eq!(serialize_context(&block, ContextForm::Text), reference);
    pass(10, "100 retrievals byte-identical; snapshot round-trip identical");
}

// ------------------------------------------------------------------ 11

#[test]
fn criterion_11_surrogate_recovery() {
    // Noise-free response over three indicator features.
    let features = vec![hp(1), hp(2), hp(3)];
    let mut rows = Vec::new();
    let mut response = Vec::new();
    for mask in 0..8u8 {
        let row = vec![
            f64::from(mask & 1),
            f64::from((mask >> 1) & 1),
            f64::from((mask >> 2) & 1),
        ];
        response.push(0.1 + 0.5 * row[0] - 0.3 * row[1] + 0.2 * row[2]);
        rows.push(row);
    }
    let fit = rarekg::eval::fit_global_surrogate(&features, &rows, &response).unwrap();
    assert!((fit.coefficient(&hp(1)).unwrap() - 0.5).abs() < 1e-6);
    assert!((fit.coefficient(&hp(2)).unwrap() - (-0.3)).abs() < 1e-6);
    assert!((fit.coefficient(&hp(3)).unwrap() - 0.2).abs() < 1e-6);
    assert!((fit.intercept - 0.1).abs() < 1e-6);
    pass(11, "surrogate recovers noise-free linear coefficients to 1e-6");
}

// ------------------------------------------------------------------ 12

#[test]
fn criterion_12_evidence_profiling() {
    let (graph, _annotations, _ic) = load_fixture_corpus();

    // 10 mappable labels + 3 unmappable -> 3/13.
    let mut features: Vec<String> = vec![
        "Seizure", "Ataxia", "Tremor", "Jaundice", "Cirrhosis", "Cataract", "Nystagmus",
        "Scoliosis", "Hypertension", "Hypoglycemia",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    features.push("Liver transplantation".to_string());
    features.push("Brain MRI T2 hyperintensity".to_string());
    features.push("Plasma exchange therapy".to_string());
    let profile = rarekg::eval::profile_evidence(&graph, "c1", &features).unwrap();
    assert_eq!(profile.hpo_features.len(), 10);
    assert_eq!(profile.non_hpo_features.len(), 3);
    assert!((profile.non_hpo_fraction - 0.2308).abs() < 1e-4);

    // Cohort median/IQR against the linear-interpolation quantile oracle.
    let frac = |f: f64| rarekg::eval::EvidenceProfile {
        case_id: "c".to_string(),
        hpo_features: vec![],
        non_hpo_features: vec![],
        non_hpo_fraction: f,
    };
    let profiles: Vec<_> = [0.1, 0.2, 0.3].iter().map(|&f| frac(f)).collect();
    let summary = rarekg::eval::summarize_evidence(&profiles).unwrap();
    assert!((summary.median - 0.2).abs() < 1e-12);
    assert!((summary.q1 - 0.15).abs() < 1e-12);
    assert!((summary.q3 - 0.25).abs() < 1e-12);
    pass(12, "evidence fractions exact; quantiles match the stated rule");
}

// ------------------------------------------------------------------ 13

#[test]
fn criterion_13_offline_client_paths() {
    // Resolver replay: cache pre-seeded, zero transport calls.
    let cache = ReplayCache::in_memory();
    let live = StubTransport::new(vec![rarekg::clients::HttpResponse {
        status: 200,
        body: r#"{"items": [{"id": "ORPHA:905"}]}"#.to_string(),
    }]);
    let config = ResolverConfig {
        enabled: true,
        ..ResolverConfig::default()
    };
    // One recorded exchange...
    {
        let client = ResolverClient::new(config.clone(), &live, &cache);
        assert_eq!(client.resolve_remote("Wilson disease").unwrap(), Some(orpha(905)));
    }
    assert_eq!(live.call_count(), 1);
    // ...then replay with a transport that must never fire.
    let silent = StubTransport::new(vec![]);
    let client = ResolverClient::new(config, &silent, &cache);
    assert_eq!(client.resolve_remote("Wilson disease").unwrap(), Some(orpha(905)));
    assert_eq!(silent.call_count(), 0);

    // Completion replay: record once, then replay-only with zero calls.
    let llm_cache = ReplayCache::in_memory();
    let completion = serde_json::json!({
        "choices": [{"message": {"role": "assistant",
            "content": "1. Wilson disease\n2. Autoimmune hepatitis"}}]
    })
    .to_string();
    let recorder = StubTransport::new(vec![rarekg::clients::HttpResponse {
        status: 200,
        body: completion,
    }]);
    let mut case = CaseRecord::empty("c1");
    case.set_section(Section::ChiefComplaint, "tremor and jaundice");
    let context = rarekg::kg::ContextBlock {
        query: vec!["HP:0000102".to_string()],
        candidates: vec![],
        evidence_edges: vec![],
    };
    let recorded = {
        let client = LlmClient::new(LlmEndpointConfig::default(), &recorder, &llm_cache);
        client.augmented_diagnose(&case, &context).unwrap()
    };
    let silent2 = StubTransport::new(vec![]);
    let mut replay_client = LlmClient::new(LlmEndpointConfig::default(), &silent2, &llm_cache);
    replay_client.replay_only = true;
    assert_eq!(replay_client.augmented_diagnose(&case, &context).unwrap(), recorded);
    assert_eq!(silent2.call_count(), 0);

    pass(13, "client paths replay offline with zero live calls");
}
