//! End-to-end checks of the binary: exit codes, determinism, and the
//! evaluation pipeline against the hand-tallied accuracy oracle.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rarekg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, extra: serde_json::Value) -> PathBuf {
    let mut config = serde_json::json!({
        "ontology": fixture("hp50.obo"),
        "hpoa": fixture("phenotype.hpoa"),
        "genes": fixture("genes.tsv"),
        "variants": fixture("variants.vcf"),
        "normalization": fixture("normalization.tsv"),
        "out_dir": dir.join("out"),
        "seed": 42,
    });
    config
        .as_object_mut()
        .unwrap()
        .extend(extra.as_object().unwrap().clone());
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn build_clean_fixture_exits_zero_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), serde_json::json!({}));
    let out = run(&["--config", config.to_str().unwrap(), "build"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let snapshot = dir.path().join("out/snapshot.jsonl");
    assert!(snapshot.exists());
    let first = std::fs::read(&snapshot).unwrap();

    let out = run(&["--config", config.to_str().unwrap(), "build"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&snapshot).unwrap(), first, "rebuild byte-identical");

    // Reports embed the config hash and seed.
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/build_stats.json")).unwrap())
            .unwrap();
    assert_eq!(stats["seed"], 42);
    assert_eq!(stats["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn build_with_dangling_annotation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // Annotation referencing a phenotype the ontology does not contain.
    let mut hpoa = std::fs::read_to_string(fixture("phenotype.hpoa")).unwrap();
    hpoa.push_str(
        "ORPHA:905\tWilson disease\t\tHP:0009999\tPMID:1\tPCS\t\t\t\t\tP\tx[2024-01-01]\n",
    );
    let bad = dir.path().join("bad.hpoa");
    std::fs::write(&bad, hpoa).unwrap();
    let config = write_config(dir.path(), serde_json::json!({ "hpoa": bad }));
    let out = run(&["--config", config.to_str().unwrap(), "build"]);
    assert_eq!(out.status.code(), Some(2));
    let report = std::fs::read_to_string(dir.path().join("out/validation.json")).unwrap();
    assert!(report.contains("HP:0009999"), "finding listed: {report}");
}

#[test]
fn missing_config_path_exits_two_and_bad_json_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        serde_json::json!({ "ontology": dir.path().join("nope.obo") }),
    );
    let out = run(&["--config", config.to_str().unwrap(), "build"]);
    assert_eq!(out.status.code(), Some(2));

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{not json").unwrap();
    let out = run(&["--config", garbled.to_str().unwrap(), "build"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_matches_hand_tally_oracle() {
    let dir = tempfile::tempdir().unwrap();
    // Ten cases, all with confirmed diagnosis Wilson disease.
    let cases: Vec<serde_json::Value> = (1..=10)
        .map(|i| {
            serde_json::json!({
                "case_id": format!("c{i:02}"),
                "sections": {},
                "phenotypes": [],
                "variants": [],
                "truth": "ORPHA:905",
                "orphanet_categories": [],
            })
        })
        .collect();
    let cases_path = dir.path().join("cases.json");
    std::fs::write(&cases_path, serde_json::to_string(&cases).unwrap()).unwrap();

    // Pre-parsed prediction lists with match ranks
    // 1,1,1,2,3,5,10,miss,miss,miss.
    let w = "Wilson disease";
    let fillers = [
        "Prader-Willi syndrome",
        "Fixture hepatopathy A",
        "Fixture cardioskeletal syndrome",
        "Fixture metabolic encephalopathy",
        "Fixture oculocutaneous disorder",
        "Fixture vascular dysplasia",
        "Fixture ataxia-cataract syndrome",
        "Cryoglobulinemic vasculitis",
        "Mixed cryoglobulinemia type II",
    ];
    let mut rank10: Vec<&str> = fillers.to_vec();
    rank10.push(w);
    let lists: Vec<Vec<&str>> = vec![
        vec![w],
        vec![w, fillers[0]],
        vec![w],
        vec![fillers[0], w],
        vec![fillers[0], fillers[1], w],
        vec![fillers[0], fillers[1], fillers[2], fillers[3], w],
        rank10,
        vec![fillers[0]],
        vec![fillers[1]],
        vec![fillers[2]],
    ];
    let predictions: String = lists
        .iter()
        .enumerate()
        .map(|(i, labels)| {
            serde_json::json!({
                "case_id": format!("c{:02}", i + 1),
                "model_tag": "m",
                "predictions": labels,
            })
            .to_string()
                + "\n"
        })
        .collect();
    let predictions_path = dir.path().join("predictions.jsonl");
    std::fs::write(&predictions_path, predictions).unwrap();

    let config = write_config(
        dir.path(),
        serde_json::json!({
            "cases": cases_path,
            "predictions": predictions_path,
            "eval": {
                "k_cutoffs": [1, 3, 5, 10, 20],
                "hierarchical": false,
                "max_ancestor_depth": 1,
                "bootstrap_resamples": 1000,
                "ci_level": 0.95,
                "rng_seed": 0,
            },
        }),
    );
    let out = run(&["--config", config.to_str().unwrap(), "eval"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("out/accuracy.csv")).unwrap();
    for (k, acc) in [(1, "0.300000"), (3, "0.500000"), (5, "0.600000"), (10, "0.700000"), (20, "0.700000")]
    {
        let prefix = format!("all,{k},{acc},");
        assert!(
            csv.lines().any(|l| l.starts_with(&prefix)),
            "missing {prefix:?} in:\n{csv}"
        );
    }
}

#[test]
fn simulate_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), serde_json::json!({}));
    let args = [
        "--config",
        config.to_str().unwrap(),
        "simulate",
        "--disease",
        "ORPHA:905",
        "--count",
        "3",
    ];
    assert!(run(&args).status.success());
    let first = std::fs::read(dir.path().join("out/synthetic_cases.json")).unwrap();
    assert!(run(&args).status.success());
    let second = std::fs::read(dir.path().join("out/synthetic_cases.json")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn slice_incremental_final_step_equals_input() {
    let dir = tempfile::tempdir().unwrap();
    let case = serde_json::json!({
        "case_id": "c1",
        "sections": {
            "ChiefComplaint": "tremor",
            "PresentIllness": "progressive over two years",
            "FamilyHistory": "unremarkable",
            "PhysicalExam": "jaundice",
            "SpecialtyAssessment": "neurology consult",
            "AncillaryTests": "low ceruloplasmin",
        },
        "phenotypes": [],
        "variants": [],
        "truth": null,
        "orphanet_categories": [],
    });
    let cases_path = dir.path().join("cases.json");
    std::fs::write(&cases_path, serde_json::json!([case]).to_string()).unwrap();
    let config = write_config(dir.path(), serde_json::json!({ "cases": cases_path }));
    let out = run(&["--config", config.to_str().unwrap(), "slice", "--mode", "incremental"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/slices_incremental.json")).unwrap(),
    )
    .unwrap();
    let steps = report["payload"]["c1"].as_array().unwrap();
    assert_eq!(steps.len(), 6);
    assert_eq!(steps[5]["sections"], case["sections"]);
    // Earlier steps blank the later sections.
    assert_eq!(steps[0]["sections"]["AncillaryTests"], "");
    assert_eq!(steps[0]["sections"]["ChiefComplaint"], "tremor");
}
