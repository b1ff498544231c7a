//! Ontology DAG parsing, ancestor/descendant closure, and information
//! content over a disease-annotation corpus.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::DiseaseAnnotationSet;
use crate::term::TermId;

/// One ontology term with its direct parents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyTerm {
    pub id: TermId,
    pub label: String,
    pub synonyms: Vec<String>,
    pub parents: BTreeSet<TermId>,
    pub obsolete: bool,
    pub replaced_by: Option<TermId>,
}

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("cycle detected involving term {0}")]
    CycleDetected(TermId),
    #[error("term {child} references unknown parent {parent}")]
    DanglingParent { child: TermId, parent: TermId },
    #[error("malformed stanza at line {line}: {message}")]
    MalformedStanza { line: usize, message: String },
    #[error("unknown term {0}")]
    UnknownTerm(TermId),
    #[error("no annotated diseases in corpus")]
    EmptyCorpus,
    #[error("empty term set")]
    EmptyTermSet,
    #[error("feature label is empty")]
    EmptyFeature,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OntologyFormat {
    OboSubset,
    JsonSubset,
}

/// An immutable is_a DAG over ontology terms.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OntologyGraph {
    terms: BTreeMap<TermId, OntologyTerm>,
    roots: BTreeSet<TermId>,
    children: BTreeMap<TermId, BTreeSet<TermId>>,
    label_index: BTreeMap<String, Vec<TermId>>,
    /// Lines with tags outside the supported subset, counted per parse.
    pub ignored_tag_count: usize,
}

impl OntologyGraph {
    /// Builds a graph from parsed terms, checking referential integrity and
    /// acyclicity (via Kahn's topological sort).
    pub fn from_terms(terms: Vec<OntologyTerm>) -> Result<OntologyGraph, OntologyError> {
        let mut map = BTreeMap::new();
        for mut term in terms {
            if term.obsolete {
                term.parents.clear();
            }
            map.insert(term.id.clone(), term);
        }

        let mut children: BTreeMap<TermId, BTreeSet<TermId>> = BTreeMap::new();
        for term in map.values() {
            for parent in &term.parents {
                if !map.contains_key(parent) {
                    return Err(OntologyError::DanglingParent {
                        child: term.id.clone(),
                        parent: parent.clone(),
                    });
                }
                children
                    .entry(parent.clone())
                    .or_default()
                    .insert(term.id.clone());
            }
        }

        // Kahn: repeatedly remove terms whose parents are all removed.
        let mut remaining: BTreeMap<&TermId, usize> = map
            .iter()
            .map(|(id, t)| (id, t.parents.len()))
            .collect();
        let mut queue: VecDeque<&TermId> = remaining
            .iter()
            .filter(|(_, &deg)| deg == 0)
            .map(|(&id, _)| id)
            .collect();
        let mut visited = 0usize;
        while let Some(id) = queue.pop_front() {
            visited += 1;
            if let Some(kids) = children.get(id) {
                for kid in kids {
                    let deg = remaining.get_mut(kid).expect("child is a known term");
                    *deg -= 1;
                    if *deg == 0 {
                        queue.push_back(kid);
                    }
                }
            }
        }
        if visited != map.len() {
            let offender = remaining
                .iter()
                .filter(|(_, &deg)| deg > 0)
                .map(|(&id, _)| id.clone())
                .min()
                .expect("some term has unresolved parents");
            return Err(OntologyError::CycleDetected(offender));
        }

        let roots: BTreeSet<TermId> = map
            .values()
            .filter(|t| !t.obsolete && t.parents.is_empty())
            .map(|t| t.id.clone())
            .collect();

        let mut label_index: BTreeMap<String, Vec<TermId>> = BTreeMap::new();
        for term in map.values().filter(|t| !t.obsolete) {
            let key = crate::ingest::normalize_label(&term.label);
            label_index.entry(key).or_default().push(term.id.clone());
            for syn in &term.synonyms {
                label_index
                    .entry(crate::ingest::normalize_label(syn))
                    .or_default()
                    .push(term.id.clone());
            }
        }
        for ids in label_index.values_mut() {
            ids.sort();
            ids.dedup();
        }

        Ok(OntologyGraph {
            terms: map,
            roots,
            children,
            label_index,
            ignored_tag_count: 0,
        })
    }

    pub fn contains(&self, id: &TermId) -> bool {
        self.terms.contains_key(id)
    }

    pub fn term(&self, id: &TermId) -> Option<&OntologyTerm> {
        self.terms.get(id)
    }

    pub fn terms(&self) -> impl Iterator<Item = &OntologyTerm> {
        self.terms.values()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn roots(&self) -> &BTreeSet<TermId> {
        &self.roots
    }

    pub fn edge_count(&self) -> usize {
        self.terms.values().map(|t| t.parents.len()).sum()
    }

    /// Transitive closure over parent edges. Includes `t` iff `reflexive`.
    pub fn ancestors(
        &self,
        t: &TermId,
        reflexive: bool,
    ) -> Result<BTreeSet<TermId>, OntologyError> {
        let term = self
            .terms
            .get(t)
            .ok_or_else(|| OntologyError::UnknownTerm(t.clone()))?;
        let mut out = BTreeSet::new();
        let mut stack: Vec<&TermId> = term.parents.iter().collect();
        while let Some(id) = stack.pop() {
            if out.insert(id.clone()) {
                stack.extend(self.terms[id].parents.iter());
            }
        }
        if reflexive {
            out.insert(t.clone());
        }
        Ok(out)
    }

    /// Ancestors within `max_depth` parent hops (depth 1 = direct parents).
    pub fn ancestors_within(
        &self,
        t: &TermId,
        max_depth: usize,
    ) -> Result<BTreeSet<TermId>, OntologyError> {
        let term = self
            .terms
            .get(t)
            .ok_or_else(|| OntologyError::UnknownTerm(t.clone()))?;
        let mut out = BTreeSet::new();
        let mut frontier: BTreeSet<&TermId> = term.parents.iter().collect();
        let mut depth = 0usize;
        while !frontier.is_empty() && depth < max_depth {
            depth += 1;
            let mut next = BTreeSet::new();
            for id in frontier {
                if out.insert(id.clone()) {
                    next.extend(self.terms[id].parents.iter());
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Transitive closure over child edges. Includes `t` iff `reflexive`.
    pub fn descendants(
        &self,
        t: &TermId,
        reflexive: bool,
    ) -> Result<BTreeSet<TermId>, OntologyError> {
        if !self.terms.contains_key(t) {
            return Err(OntologyError::UnknownTerm(t.clone()));
        }
        let mut out = BTreeSet::new();
        let mut stack: Vec<TermId> = self
            .children
            .get(t)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default();
        while let Some(id) = stack.pop() {
            if out.insert(id.clone()) {
                if let Some(kids) = self.children.get(&id) {
                    stack.extend(kids.iter().cloned());
                }
            }
        }
        if reflexive {
            out.insert(t.clone());
        }
        Ok(out)
    }

    /// Case-insensitive exact label/synonym lookup. Labels are tried before
    /// synonyms; ties break on the lowest canonical id. Absence means the
    /// feature is non-HPO.
    pub fn map_feature_to_hpo(&self, feature: &str) -> Result<Option<TermId>, OntologyError> {
        let key = crate::ingest::normalize_label(feature);
        if key.is_empty() {
            return Err(OntologyError::EmptyFeature);
        }
        let Some(candidates) = self.label_index.get(&key) else {
            return Ok(None);
        };
        // Prefer a primary-label hit over a synonym-only hit.
        let by_label = candidates
            .iter()
            .find(|id| crate::ingest::normalize_label(&self.terms[id].label) == key);
        Ok(by_label.or(candidates.first()).cloned())
    }
}

/// Parses an ontology from the OBO or JSON subset formats.
pub fn parse_ontology<R: Read>(
    source: R,
    format: OntologyFormat,
) -> Result<OntologyGraph, OntologyError> {
    match format {
        OntologyFormat::OboSubset => parse_obo(source),
        OntologyFormat::JsonSubset => parse_json(source),
    }
}

fn parse_obo<R: Read>(source: R) -> Result<OntologyGraph, OntologyError> {
    let reader = BufReader::new(source);
    let mut terms: Vec<OntologyTerm> = Vec::new();
    let mut current: Option<(usize, OntologyTerm)> = None;
    let mut in_term_stanza = false;
    let mut ignored = 0usize;

    let finish = |current: &mut Option<(usize, OntologyTerm)>,
                  terms: &mut Vec<OntologyTerm>|
     -> Result<(), OntologyError> {
        if let Some((line, term)) = current.take() {
            if term.local_placeholder() {
                return Err(OntologyError::MalformedStanza {
                    line,
                    message: "stanza has no id".to_string(),
                });
            }
            terms.push(term);
        }
        Ok(())
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('!') {
            continue;
        }
        if line.starts_with('[') {
            finish(&mut current, &mut terms)?;
            in_term_stanza = line == "[Term]";
            if in_term_stanza {
                current = Some((lineno, OntologyTerm::placeholder()));
            }
            continue;
        }
        if !in_term_stanza {
            continue; // header lines and non-Term stanzas
        }
        let (tag, value) = line
            .split_once(':')
            .ok_or_else(|| OntologyError::MalformedStanza {
                line: lineno,
                message: format!("expected `tag: value`, got {line:?}"),
            })?;
        let value = value.trim();
        let (_, term) = current.as_mut().expect("inside a [Term] stanza");
        match tag.trim() {
            "id" => {
                term.id = value.parse().map_err(|e| OntologyError::MalformedStanza {
                    line: lineno,
                    message: format!("bad id: {e}"),
                })?;
            }
            "name" => term.label = value.to_string(),
            "synonym" => {
                // synonym: "text" SCOPE [refs]
                if let Some(text) = extract_quoted(value) {
                    term.synonyms.push(text);
                } else {
                    term.synonyms.push(value.to_string());
                }
            }
            "is_a" => {
                let id_part = value.split('!').next().unwrap_or("").trim();
                let parent: TermId =
                    id_part
                        .parse()
                        .map_err(|e| OntologyError::MalformedStanza {
                            line: lineno,
                            message: format!("bad is_a target: {e}"),
                        })?;
                term.parents.insert(parent);
            }
            "is_obsolete" => term.obsolete = value == "true",
            "replaced_by" => {
                term.replaced_by =
                    Some(value.parse().map_err(|e| OntologyError::MalformedStanza {
                        line: lineno,
                        message: format!("bad replaced_by: {e}"),
                    })?);
            }
            _ => ignored += 1,
        }
    }
    finish(&mut current, &mut terms)?;

    let mut graph = OntologyGraph::from_terms(terms)?;
    graph.ignored_tag_count = ignored;
    Ok(graph)
}

fn extract_quoted(value: &str) -> Option<String> {
    let start = value.find('"')?;
    let end = value[start + 1..].find('"')?;
    Some(value[start + 1..start + 1 + end].to_string())
}

#[derive(Deserialize)]
struct JsonTerm {
    id: String,
    lbl: String,
    #[serde(default)]
    synonyms: Vec<String>,
    #[serde(default)]
    parents: Vec<String>,
    #[serde(default)]
    obsolete: bool,
}

fn parse_json<R: Read>(source: R) -> Result<OntologyGraph, OntologyError> {
    let raw: Vec<JsonTerm> = serde_json::from_reader(source)?;
    let mut terms = Vec::with_capacity(raw.len());
    for (i, jt) in raw.into_iter().enumerate() {
        let id: TermId = jt
            .id
            .parse()
            .map_err(|e| OntologyError::MalformedStanza {
                line: i + 1,
                message: format!("bad id: {e}"),
            })?;
        let parents = jt
            .parents
            .iter()
            .map(|p| p.parse::<TermId>())
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(|e| OntologyError::MalformedStanza {
                line: i + 1,
                message: format!("bad parent: {e}"),
            })?;
        terms.push(OntologyTerm {
            id,
            label: jt.lbl,
            synonyms: jt.synonyms,
            parents,
            obsolete: jt.obsolete,
            replaced_by: None,
        });
    }
    OntologyGraph::from_terms(terms)
}

impl OntologyTerm {
    fn placeholder() -> OntologyTerm {
        OntologyTerm {
            id: TermId::hp(9_999_999),
            label: String::new(),
            synonyms: Vec::new(),
            parents: BTreeSet::new(),
            obsolete: false,
            replaced_by: None,
        }
    }

    fn local_placeholder(&self) -> bool {
        self.id == TermId::hp(9_999_999)
    }
}

/// Per-term information content in nats.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TermIC {
    ic: BTreeMap<TermId, f64>,
}

impl TermIC {
    pub fn get(&self, t: &TermId) -> Option<f64> {
        self.ic.get(t).copied()
    }

    pub fn ic(&self, t: &TermId) -> f64 {
        self.get(t).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermId, f64)> {
        self.ic.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.ic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ic.is_empty()
    }
}

/// Computes IC(t) = -ln(|D_t| / |D|) after propagating each disease's
/// direct annotations to all ancestors. Terms never reached by any disease
/// get the maximum observed IC so downstream means stay finite.
pub fn compute_ic(
    graph: &OntologyGraph,
    annotations: &DiseaseAnnotationSet,
) -> Result<TermIC, OntologyError> {
    if annotations.disease_count() == 0 {
        return Err(OntologyError::EmptyCorpus);
    }
    let total = annotations.disease_count() as f64;

    let mut counts: BTreeMap<TermId, usize> = BTreeMap::new();
    let diseases: Vec<TermId> = annotations.diseases().cloned().collect();
    for disease in &diseases {
        let mut reached: BTreeSet<TermId> = BTreeSet::new();
        for pheno in annotations.phenotypes_of(disease) {
            if !graph.contains(&pheno) {
                return Err(OntologyError::UnknownTerm(pheno));
            }
            reached.extend(graph.ancestors(&pheno, true)?);
        }
        for t in reached {
            *counts.entry(t).or_insert(0) += 1;
        }
    }

    let mut ic = BTreeMap::new();
    let mut max_ic = 0.0f64;
    for (t, &n) in &counts {
        let value = -((n as f64 / total).ln());
        // -ln(1) can be -0.0
        let value = if value == 0.0 { 0.0 } else { value };
        max_ic = max_ic.max(value);
        ic.insert(t.clone(), value);
    }
    for term in graph.terms() {
        ic.entry(term.id.clone()).or_insert(max_ic);
    }
    Ok(TermIC { ic })
}

/// Arithmetic mean of IC over a nonempty term set.
pub fn mean_ic(ic: &TermIC, terms: &BTreeSet<TermId>) -> Result<f64, OntologyError> {
    if terms.is_empty() {
        return Err(OntologyError::EmptyTermSet);
    }
    let mut sum = 0.0;
    for t in terms {
        sum += ic
            .get(t)
            .ok_or_else(|| OntologyError::UnknownTerm(t.clone()))?;
    }
    Ok(sum / terms.len() as f64)
}
