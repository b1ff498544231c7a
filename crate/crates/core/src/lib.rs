//! Ontology-grounded machinery for rare disease differential diagnosis:
//! HPO/Orphanet ingestion, a typed disease-phenotype-gene-variant knowledge
//! graph with IC-ranked retrieval, phenotype-driven ranking baselines,
//! synthetic case generation and slicing, and a diagnostic evaluation
//! harness (normalization, hierarchical matching, Top-K accuracy with
//! bootstrap confidence intervals).

pub mod cases;
pub mod clients;
pub mod eval;
pub mod ingest;
pub mod kg;
pub mod ontology;
pub mod ranking;
pub mod term;

pub use term::{Namespace, TermId};
