//! The typed disease-phenotype-gene-variant knowledge graph: build,
//! deterministic retrieval, context serialization, and snapshot I/O.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{
    validate_sources, DiseaseAnnotationSet, Frequency, GeneRecord, ValidationReport, VariantRecord,
};
use crate::ontology::{OntologyError, OntologyGraph, TermIC};
use crate::ranking::{score_base_ic, MatchMode, RankingError};
use crate::term::TermId;

pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum KgError {
    #[error("source validation found {0} problems; build refused")]
    ValidationNotClean(usize),
    #[error("duplicate edge {0} (internal error: validation should prevent this)")]
    DuplicateEdge(String),
    #[error("entity not found: {0}")]
    EntityNotFound(String),
    #[error("no query phenotype resolves to a graph node")]
    NoResolvablePhenotype,
    #[error("snapshot is malformed: {0}")]
    BadSnapshot(String),
    #[error("snapshot version {0} is not supported")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum NodeKind {
    Disease,
    Phenotype,
    Gene,
    Variant,
}

impl NodeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeKind::Disease => "disease",
            NodeKind::Phenotype => "phenotype",
            NodeKind::Gene => "gene",
            NodeKind::Variant => "variant",
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum EdgeKind {
    DiseasePhenotype,
    DiseaseGene,
    GeneVariant,
    PhenotypeGene,
    DiseaseParent,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::DiseasePhenotype => "disease_phenotype",
            EdgeKind::DiseaseGene => "disease_gene",
            EdgeKind::GeneVariant => "gene_variant",
            EdgeKind::PhenotypeGene => "phenotype_gene",
            EdgeKind::DiseaseParent => "disease_parent",
        }
    }

    /// (from kind, to kind) signature of the edge type.
    pub fn signature(&self) -> (NodeKind, NodeKind) {
        match self {
            EdgeKind::DiseasePhenotype => (NodeKind::Disease, NodeKind::Phenotype),
            EdgeKind::DiseaseGene => (NodeKind::Disease, NodeKind::Gene),
            EdgeKind::GeneVariant => (NodeKind::Gene, NodeKind::Variant),
            EdgeKind::PhenotypeGene => (NodeKind::Phenotype, NodeKind::Gene),
            EdgeKind::DiseaseParent => (NodeKind::Disease, NodeKind::Disease),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGNode {
    pub kind: NodeKind,
    pub key: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGEdge {
    pub kind: EdgeKind,
    pub from: String,
    pub to: String,
    pub frequency: Option<Frequency>,
    pub provenance: BTreeSet<String>,
}

impl KGEdge {
    fn canonical_key(&self) -> (EdgeKind, &str, &str) {
        (self.kind, &self.from, &self.to)
    }
}

/// Counts per node and edge kind, embedded in snapshots and reports.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub nodes: BTreeMap<String, usize>,
    pub edges: BTreeMap<String, usize>,
}

/// Immutable typed graph with adjacency indexes in both directions.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    nodes: BTreeMap<String, KGNode>,
    edges: Vec<KGEdge>,
    out_by_node: BTreeMap<String, Vec<usize>>,
    in_by_node: BTreeMap<String, Vec<usize>>,
    stats: BuildStats,
}

impl KnowledgeGraph {
    pub fn node(&self, key: &str) -> Option<&KGNode> {
        self.nodes.get(key)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &KGNode> {
        self.nodes.values()
    }

    pub fn edges(&self) -> &[KGEdge] {
        &self.edges
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Outgoing edges of a node, optionally filtered by kind.
    pub fn edges_from(&self, key: &str, kind: Option<EdgeKind>) -> Vec<&KGEdge> {
        self.out_by_node
            .get(key)
            .map(|idxs| {
                idxs.iter()
                    .map(|&i| &self.edges[i])
                    .filter(|e| kind.is_none_or(|k| e.kind == k))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Incoming edges of a node, optionally filtered by kind.
    pub fn edges_to(&self, key: &str, kind: Option<EdgeKind>) -> Vec<&KGEdge> {
        self.in_by_node
            .get(key)
            .map(|idxs| {
                idxs.iter()
                    .map(|&i| &self.edges[i])
                    .filter(|e| kind.is_none_or(|k| e.kind == k))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Direct phenotype annotations of a disease node.
    pub fn disease_phenotypes(&self, disease: &TermId) -> BTreeSet<TermId> {
        self.edges_from(&disease.to_string(), Some(EdgeKind::DiseasePhenotype))
            .iter()
            .filter_map(|e| e.to.parse().ok())
            .collect()
    }

    /// Diseases directly annotated with a phenotype node.
    pub fn phenotype_diseases(&self, phenotype: &TermId) -> BTreeSet<TermId> {
        self.edges_to(&phenotype.to_string(), Some(EdgeKind::DiseasePhenotype))
            .iter()
            .filter_map(|e| e.from.parse().ok())
            .collect()
    }

    fn from_parts(nodes: BTreeMap<String, KGNode>, mut edges: Vec<KGEdge>) -> KnowledgeGraph {
        edges.sort_by(|a, b| {
            a.kind
                .cmp(&b.kind)
                .then_with(|| a.from.cmp(&b.from))
                .then_with(|| a.to.cmp(&b.to))
        });
        let mut out_by_node: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut in_by_node: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, edge) in edges.iter().enumerate() {
            out_by_node.entry(edge.from.clone()).or_default().push(i);
            in_by_node.entry(edge.to.clone()).or_default().push(i);
        }
        let mut stats = BuildStats::default();
        for node in nodes.values() {
            *stats.nodes.entry(node.kind.as_str().to_string()).or_insert(0) += 1;
        }
        for edge in &edges {
            *stats.edges.entry(edge.kind.as_str().to_string()).or_insert(0) += 1;
        }
        KnowledgeGraph {
            nodes,
            edges,
            out_by_node,
            in_by_node,
            stats,
        }
    }
}

/// Builds the graph from validated sources. `ontology` supplies phenotype
/// labels and, for any disease-namespaced terms it contains, the
/// disease-hierarchy (DISEASE_PARENT) edges.
pub fn build_kg(
    ontology: &OntologyGraph,
    annotations: &DiseaseAnnotationSet,
    genes: &[GeneRecord],
    variants: &[VariantRecord],
) -> Result<(KnowledgeGraph, ValidationReport), KgError> {
    let report = validate_sources(ontology, annotations, genes, variants);
    if !report.is_clean() {
        return Err(KgError::ValidationNotClean(report.error_count()));
    }

    let mut nodes: BTreeMap<String, KGNode> = BTreeMap::new();
    let mut edges: Vec<KGEdge> = Vec::new();
    let mut edge_keys: BTreeSet<(EdgeKind, String, String)> = BTreeSet::new();

    let push_edge = |edges: &mut Vec<KGEdge>,
                         edge_keys: &mut BTreeSet<(EdgeKind, String, String)>,
                         edge: KGEdge|
     -> Result<(), KgError> {
        let key = (edge.kind, edge.from.clone(), edge.to.clone());
        if !edge_keys.insert(key) {
            // Merge provenance on repeated assertions of the same edge.
            let existing = edges
                .iter_mut()
                .find(|e| e.canonical_key() == edge.canonical_key())
                .expect("key was seen");
            existing.provenance.extend(edge.provenance);
            return Ok(());
        }
        edges.push(edge);
        Ok(())
    };

    let label_of = |id: &TermId| -> String {
        ontology
            .term(id)
            .map(|t| t.label.clone())
            .unwrap_or_else(|| id.to_string())
    };

    let add_node = |nodes: &mut BTreeMap<String, KGNode>, kind: NodeKind, key: String, label: String| {
        nodes.entry(key.clone()).or_insert(KGNode { kind, key, label });
    };

    for ann in annotations.annotations() {
        add_node(
            &mut nodes,
            NodeKind::Disease,
            ann.disease.to_string(),
            label_of(&ann.disease),
        );
        add_node(
            &mut nodes,
            NodeKind::Phenotype,
            ann.phenotype.to_string(),
            label_of(&ann.phenotype),
        );
        push_edge(
            &mut edges,
            &mut edge_keys,
            KGEdge {
                kind: EdgeKind::DiseasePhenotype,
                from: ann.disease.to_string(),
                to: ann.phenotype.to_string(),
                frequency: Some(ann.frequency),
                provenance: BTreeSet::from([ann.provenance.clone()]),
            },
        )?;
    }

    for gene in genes {
        add_node(
            &mut nodes,
            NodeKind::Gene,
            gene.symbol.clone(),
            gene.symbol.clone(),
        );
        for disease in &gene.diseases {
            add_node(
                &mut nodes,
                NodeKind::Disease,
                disease.to_string(),
                label_of(disease),
            );
            push_edge(
                &mut edges,
                &mut edge_keys,
                KGEdge {
                    kind: EdgeKind::DiseaseGene,
                    from: disease.to_string(),
                    to: gene.symbol.clone(),
                    frequency: None,
                    provenance: BTreeSet::from(["gene_table".to_string()]),
                },
            )?;
        }
        for pheno in &gene.phenotypes {
            add_node(
                &mut nodes,
                NodeKind::Phenotype,
                pheno.to_string(),
                label_of(pheno),
            );
            push_edge(
                &mut edges,
                &mut edge_keys,
                KGEdge {
                    kind: EdgeKind::PhenotypeGene,
                    from: pheno.to_string(),
                    to: gene.symbol.clone(),
                    frequency: None,
                    provenance: BTreeSet::from(["gene_table".to_string()]),
                },
            )?;
        }
    }

    for variant in variants {
        let key = variant.key_string();
        add_node(&mut nodes, NodeKind::Variant, key.clone(), key.clone());
        if !variant.gene.is_empty() {
            push_edge(
                &mut edges,
                &mut edge_keys,
                KGEdge {
                    kind: EdgeKind::GeneVariant,
                    from: variant.gene.clone(),
                    to: key,
                    frequency: None,
                    provenance: variant.provenance.clone(),
                },
            )?;
        }
    }

    // Disease hierarchy edges from any disease-namespaced ontology terms.
    for term in ontology.terms() {
        if !term.id.is_disease() || term.obsolete {
            continue;
        }
        for parent in &term.parents {
            if !parent.is_disease() {
                continue;
            }
            add_node(
                &mut nodes,
                NodeKind::Disease,
                term.id.to_string(),
                term.label.clone(),
            );
            add_node(
                &mut nodes,
                NodeKind::Disease,
                parent.to_string(),
                label_of(parent),
            );
            push_edge(
                &mut edges,
                &mut edge_keys,
                KGEdge {
                    kind: EdgeKind::DiseaseParent,
                    from: term.id.to_string(),
                    to: parent.to_string(),
                    frequency: None,
                    provenance: BTreeSet::from(["disease_ontology".to_string()]),
                },
            )?;
        }
    }

    Ok((KnowledgeGraph::from_parts(nodes, edges), report))
}

/// What a retrieval is focused on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum QueryEntity {
    Disease(TermId),
    Phenotypes(BTreeSet<TermId>),
    Gene(String),
    Variant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalQuery {
    pub entity: QueryEntity,
    pub max_candidates: usize,
    /// Empty set means all edge kinds.
    pub include_kinds: BTreeSet<EdgeKind>,
}

impl RetrievalQuery {
    pub fn for_entity(entity: QueryEntity) -> Self {
        RetrievalQuery {
            entity,
            max_candidates: 20,
            include_kinds: BTreeSet::new(),
        }
    }

    fn includes(&self, kind: EdgeKind) -> bool {
        self.include_kinds.is_empty() || self.include_kinds.contains(&kind)
    }
}

/// One scored candidate disease in a context block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub disease: String,
    pub score: f64,
    pub matched_terms: Vec<MatchedTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedTerm {
    pub hpo: TermId,
    pub ic: f64,
}

/// Deterministic retrieval result, ready for prompt serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextBlock {
    pub query: Vec<String>,
    pub candidates: Vec<Candidate>,
    pub evidence_edges: Vec<KGEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextForm {
    Text,
    Structured,
}

fn sort_evidence(edges: &mut Vec<KGEdge>) {
    edges.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then_with(|| a.from.cmp(&b.from))
            .then_with(|| a.to.cmp(&b.to))
    });
    edges.dedup_by(|a, b| a.canonical_key() == b.canonical_key());
}

/// Typed neighborhood retrieval. Disease and gene foci return their 1-hop
/// neighborhoods; a variant focus walks variant -> gene -> diseases; a
/// phenotype-set focus delegates to [`retrieve_by_phenotypes`].
pub fn query_typed(
    kg: &KnowledgeGraph,
    ontology: &OntologyGraph,
    ic: &TermIC,
    q: &RetrievalQuery,
) -> Result<ContextBlock, KgError> {
    match &q.entity {
        QueryEntity::Phenotypes(set) => {
            retrieve_by_phenotypes(kg, ontology, ic, set, q.max_candidates, false)
        }
        QueryEntity::Disease(id) => {
            let key = id.to_string();
            if kg.node(&key).is_none() {
                return Err(KgError::EntityNotFound(key));
            }
            let mut evidence: Vec<KGEdge> = Vec::new();
            for e in kg.edges_from(&key, None) {
                if q.includes(e.kind) {
                    evidence.push(e.clone());
                }
            }
            for e in kg.edges_to(&key, None) {
                if q.includes(e.kind) {
                    evidence.push(e.clone());
                }
            }
            sort_evidence(&mut evidence);
            Ok(ContextBlock {
                query: vec![key],
                candidates: Vec::new(),
                evidence_edges: evidence,
            })
        }
        QueryEntity::Gene(symbol) => {
            if kg.node(symbol).is_none() {
                return Err(KgError::EntityNotFound(symbol.clone()));
            }
            let mut evidence: Vec<KGEdge> = Vec::new();
            for e in kg.edges_from(symbol, None).into_iter().chain(kg.edges_to(symbol, None)) {
                if q.includes(e.kind) {
                    evidence.push(e.clone());
                }
            }
            sort_evidence(&mut evidence);
            Ok(ContextBlock {
                query: vec![symbol.clone()],
                candidates: Vec::new(),
                evidence_edges: evidence,
            })
        }
        QueryEntity::Variant(key) => {
            if kg.node(key).is_none() {
                return Err(KgError::EntityNotFound(key.clone()));
            }
            let mut evidence: Vec<KGEdge> = Vec::new();
            // variant -> owning gene -> that gene's diseases
            for gv in kg.edges_to(key, Some(EdgeKind::GeneVariant)) {
                if q.includes(EdgeKind::GeneVariant) {
                    evidence.push(gv.clone());
                }
                for dg in kg.edges_to(&gv.from, Some(EdgeKind::DiseaseGene)) {
                    if q.includes(EdgeKind::DiseaseGene) {
                        evidence.push(dg.clone());
                    }
                }
            }
            sort_evidence(&mut evidence);
            Ok(ContextBlock {
                query: vec![key.clone()],
                candidates: Vec::new(),
                evidence_edges: evidence,
            })
        }
    }
}

/// IC-ranked disease retrieval for a phenotype set. A query term matches a
/// disease annotated with that term or (unless `exact_only`) one of its
/// descendants. Candidates are scored by summed IC of matched patient
/// terms and returned top-k by (score desc, disease key asc).
pub fn retrieve_by_phenotypes(
    kg: &KnowledgeGraph,
    ontology: &OntologyGraph,
    ic: &TermIC,
    phenotypes: &BTreeSet<TermId>,
    k: usize,
    exact_only: bool,
) -> Result<ContextBlock, KgError> {
    if phenotypes.is_empty() {
        return Err(KgError::NoResolvablePhenotype);
    }
    let resolvable: BTreeSet<&TermId> = phenotypes
        .iter()
        .filter(|t| ontology.contains(t))
        .collect();
    if resolvable.is_empty() {
        return Err(KgError::NoResolvablePhenotype);
    }

    let mut candidates_set: BTreeSet<TermId> = BTreeSet::new();
    for term in &resolvable {
        let mut match_terms: BTreeSet<TermId> = BTreeSet::from([(*term).clone()]);
        if !exact_only {
            match_terms.extend(ontology.descendants(term, false)?);
        }
        for mt in &match_terms {
            candidates_set.extend(kg.phenotype_diseases(mt));
        }
    }

    let query_set: BTreeSet<TermId> = resolvable.iter().map(|t| (*t).clone()).collect();
    let mode = if exact_only {
        MatchMode::Exact
    } else {
        MatchMode::Propagated
    };

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut evidence: Vec<KGEdge> = Vec::new();
    for disease in &candidates_set {
        let disease_terms = kg.disease_phenotypes(disease);
        let (score, breakdown) = score_base_ic(ic, ontology, &query_set, &disease_terms, mode)?;
        candidates.push(Candidate {
            disease: disease.to_string(),
            score,
            matched_terms: breakdown
                .into_iter()
                .map(|(hpo, ic)| MatchedTerm { hpo, ic })
                .collect(),
        });
    }
    candidates.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("scores are finite")
            .then_with(|| a.disease.cmp(&b.disease))
    });
    candidates.truncate(k);

    for cand in &candidates {
        for e in kg.edges_from(&cand.disease, Some(EdgeKind::DiseasePhenotype)) {
            evidence.push(e.clone());
        }
    }
    sort_evidence(&mut evidence);

    Ok(ContextBlock {
        query: query_set.iter().map(|t| t.to_string()).collect(),
        candidates,
        evidence_edges: evidence,
    })
}

/// Serializes a context block. Both forms are byte-deterministic for a
/// given block.
pub fn serialize_context(block: &ContextBlock, form: ContextForm) -> Vec<u8> {
    match form {
        ContextForm::Structured => {
            let mut bytes = serde_json::to_vec_pretty(block).expect("block serializes");
            bytes.push(b'\n');
            bytes
        }
        ContextForm::Text => {
            let mut out = String::new();
            out.push_str(&format!("# context query={}\n", block.query.join(",")));
            for cand in &block.candidates {
                let matched: Vec<String> = cand
                    .matched_terms
                    .iter()
                    .map(|m| format!("{}:{:.6}", m.hpo, m.ic))
                    .collect();
                out.push_str(&format!(
                    "candidate\t{}\t{:.6}\t{}\n",
                    cand.disease,
                    cand.score,
                    matched.join("|")
                ));
            }
            for edge in &block.evidence_edges {
                let freq = edge
                    .frequency
                    .map(|f| f.as_str())
                    .unwrap_or("-");
                let prov: Vec<&str> = edge.provenance.iter().map(|s| s.as_str()).collect();
                out.push_str(&format!(
                    "edge\t{}\t{}\t{}\t{}\t{}\n",
                    edge.kind.as_str(),
                    edge.from,
                    edge.to,
                    freq,
                    prov.join("|")
                ));
            }
            out.into_bytes()
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotHeader {
    version: u32,
    stats: BuildStats,
    node_count: usize,
    edge_count: usize,
}

/// Writes the graph as line-delimited JSON: a header with build stats,
/// then one node per line, then one edge per line, all in canonical order.
pub fn save_snapshot<W: Write>(kg: &KnowledgeGraph, mut writer: W) -> Result<(), KgError> {
    let header = SnapshotHeader {
        version: SNAPSHOT_VERSION,
        stats: kg.stats.clone(),
        node_count: kg.nodes.len(),
        edge_count: kg.edges.len(),
    };
    serde_json::to_writer(&mut writer, &header)?;
    writer.write_all(b"\n")?;
    for node in kg.nodes.values() {
        serde_json::to_writer(&mut writer, node)?;
        writer.write_all(b"\n")?;
    }
    for edge in &kg.edges {
        serde_json::to_writer(&mut writer, edge)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Loads a snapshot produced by [`save_snapshot`]. Retrieval over the
/// loaded graph is identical to retrieval over the original.
pub fn load_snapshot<R: Read>(reader: R) -> Result<KnowledgeGraph, KgError> {
    let mut lines = BufReader::new(reader).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| KgError::BadSnapshot("empty file".to_string()))??;
    let header: SnapshotHeader = serde_json::from_str(&header_line)
        .map_err(|e| KgError::BadSnapshot(format!("bad header: {e}")))?;
    if header.version != SNAPSHOT_VERSION {
        return Err(KgError::UnsupportedVersion(header.version));
    }
    let mut nodes = BTreeMap::new();
    for _ in 0..header.node_count {
        let line = lines
            .next()
            .ok_or_else(|| KgError::BadSnapshot("truncated node section".to_string()))??;
        let node: KGNode = serde_json::from_str(&line)
            .map_err(|e| KgError::BadSnapshot(format!("bad node: {e}")))?;
        nodes.insert(node.key.clone(), node);
    }
    let mut edges = Vec::with_capacity(header.edge_count);
    for _ in 0..header.edge_count {
        let line = lines
            .next()
            .ok_or_else(|| KgError::BadSnapshot("truncated edge section".to_string()))??;
        let edge: KGEdge = serde_json::from_str(&line)
            .map_err(|e| KgError::BadSnapshot(format!("bad edge: {e}")))?;
        for (endpoint, want) in [(&edge.from, edge.kind.signature().0), (&edge.to, edge.kind.signature().1)] {
            match nodes.get(endpoint) {
                Some(n) if n.kind == want => {}
                Some(n) => {
                    return Err(KgError::BadSnapshot(format!(
                        "edge {} endpoint {} has kind {:?}, expected {:?}",
                        edge.kind.as_str(),
                        endpoint,
                        n.kind,
                        want
                    )))
                }
                None => {
                    return Err(KgError::BadSnapshot(format!(
                        "edge endpoint {endpoint} is not a node"
                    )))
                }
            }
        }
        edges.push(edge);
    }
    let kg = KnowledgeGraph::from_parts(nodes, edges);
    if kg.stats != header.stats {
        return Err(KgError::BadSnapshot(
            "stats header does not match graph content".to_string(),
        ));
    }
    Ok(kg)
}
