//! Integration checks against the bundled fixture corpus, with oracle
//! counts frozen from independent text processing over the files
//! (grep -c over stanza and is_a lines).

use std::collections::BTreeSet;
use std::path::PathBuf;

use rarekg::ingest::{parse_genes, parse_hpoa, parse_variants, ParseOptions, VariantFormat};
use rarekg::kg::{build_kg, retrieve_by_phenotypes, serialize_context, ContextForm};
use rarekg::ontology::{compute_ic, parse_ontology, OntologyFormat, OntologyGraph};
use rarekg::TermId;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn hp_graph() -> OntologyGraph {
    parse_ontology(
        std::fs::File::open(fixture("hp50.obo")).unwrap(),
        OntologyFormat::OboSubset,
    )
    .unwrap()
}

#[test]
fn ontology_fixture_counts_match_text_oracle() {
    let graph = hp_graph();
    // Frozen from the file: 50 [Term] stanzas, 51 is_a lines, 1 root.
    assert_eq!(graph.len(), 50);
    assert_eq!(graph.edge_count(), 51);
    assert_eq!(graph.roots().len(), 1);
    assert!(graph.roots().contains(&TermId::hp(1)));
}

#[test]
fn annotation_fixture_counts_match_text_oracle() {
    let annotations = parse_hpoa(
        std::fs::File::open(fixture("phenotype.hpoa")).unwrap(),
        &ParseOptions::default(),
    )
    .unwrap()
    .records;
    // Frozen from the file: 47 data rows over 10 diseases.
    assert_eq!(annotations.len(), 47);
    assert_eq!(annotations.disease_count(), 10);
}

#[test]
fn gene_and_variant_fixtures_parse_cleanly() {
    let genes = parse_genes(
        std::fs::File::open(fixture("genes.tsv")).unwrap(),
        &ParseOptions::default(),
    )
    .unwrap();
    assert!(genes.issues.is_empty());
    assert_eq!(genes.records.len(), 4);

    let variants = parse_variants(
        std::fs::File::open(fixture("variants.vcf")).unwrap(),
        VariantFormat::VcfSlim,
        &ParseOptions::default(),
    )
    .unwrap();
    assert!(variants.issues.is_empty());
    assert_eq!(variants.records.len(), 5);
    let genes_hit: BTreeSet<&str> = variants
        .records
        .iter()
        .map(|v| v.gene.as_str())
        .collect();
    assert_eq!(genes_hit.len(), 4);
}

#[test]
fn single_annotation_term_ic_is_minus_ln_ratio() {
    let graph = hp_graph();
    let annotations = parse_hpoa(
        std::fs::File::open(fixture("phenotype.hpoa")).unwrap(),
        &ParseOptions::default(),
    )
    .unwrap()
    .records;
    let ic = compute_ic(&graph, &annotations).unwrap();
    // Kayser-Fleischer ring annotates exactly one of the 10 diseases.
    assert_eq!(annotations.diseases_with(&TermId::hp(121)).len(), 1);
    assert!((ic.ic(&TermId::hp(121)) - (10.0f64).ln()).abs() < 1e-12);
}

#[test]
fn retrieval_context_matches_golden_file() {
    let graph = hp_graph();
    let annotations = parse_hpoa(
        std::fs::File::open(fixture("phenotype.hpoa")).unwrap(),
        &ParseOptions::default(),
    )
    .unwrap()
    .records;
    let ic = compute_ic(&graph, &annotations).unwrap();
    let (kg, _) = build_kg(&graph, &annotations, &[], &[]).unwrap();
    let query: BTreeSet<TermId> = [TermId::hp(102), TermId::hp(113), TermId::hp(121)]
        .into_iter()
        .collect();
    let block = retrieve_by_phenotypes(&kg, &graph, &ic, &query, 20, false).unwrap();
    let golden = std::fs::read(fixture("context_golden.txt")).unwrap();
    assert_eq!(serialize_context(&block, ContextForm::Text), golden);
}
