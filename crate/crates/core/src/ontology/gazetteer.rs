//! Surface-form lexicon built from the ontology plus an optional alias table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::extraction::segment::{join_tokens, normalize_surface};
use crate::rdf::{Graph, Iri, Term};

use super::seed::subclasses_of;
use super::terms;
use super::OntologyError;

/// Entity categories, declared in tie-break priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityCategory {
    Gene,
    Disease,
    BiomarkerType,
    EvidenceSource,
}

impl EntityCategory {
    pub const ALL: [EntityCategory; 4] = [
        EntityCategory::Gene,
        EntityCategory::Disease,
        EntityCategory::BiomarkerType,
        EntityCategory::EvidenceSource,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityCategory::Gene => "Gene",
            EntityCategory::Disease => "Disease",
            EntityCategory::BiomarkerType => "BiomarkerType",
            EntityCategory::EvidenceSource => "EvidenceSource",
        }
    }
}

impl fmt::Display for EntityCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GazetteerEntry {
    /// Token-joined surface as written in the source.
    pub surface: String,
    pub iri: Iri,
    pub category: EntityCategory,
    pub prior: f64,
    /// Symbols and codes match only with their exact case.
    pub case_sensitive: bool,
}

/// Lookup table from case-folded, token-normalised surface forms to
/// candidate entities.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: BTreeMap<String, Vec<GazetteerEntry>>,
    max_tokens: usize,
}

impl Gazetteer {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct surface keys.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Longest surface, in tokens.
    pub fn max_tokens(&self) -> usize {
        self.max_tokens
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &[GazetteerEntry])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Candidates for `surface`, honouring case sensitivity. Sorted by
    /// category priority then IRI.
    pub fn lookup(&self, surface: &str) -> Vec<&GazetteerEntry> {
        self.lookup_key(&normalize_surface(surface), &join_tokens(surface))
    }

    /// Lookup by precomputed key (`normalize_surface`) and exact joined text
    /// (`join_tokens`).
    pub fn lookup_key(&self, key: &str, exact: &str) -> Vec<&GazetteerEntry> {
        self.entries
            .get(key)
            .map(|v| v.iter().filter(|e| !e.case_sensitive || e.surface == exact).collect())
            .unwrap_or_default()
    }

    /// Adds a candidate. Re-adding an IRI under the same key keeps one entry,
    /// case-insensitive if either addition was.
    pub fn add(&mut self, surface: &str, iri: Iri, category: EntityCategory, prior: f64, case_sensitive: bool) {
        let key = normalize_surface(surface);
        if key.is_empty() {
            return;
        }
        self.max_tokens = self.max_tokens.max(key.split(' ').count());
        let list = self.entries.entry(key).or_default();
        if let Some(existing) = list.iter_mut().find(|e| e.iri == iri) {
            existing.case_sensitive &= case_sensitive;
            existing.prior = prior;
            return;
        }
        list.push(GazetteerEntry {
            surface: join_tokens(surface),
            iri,
            category,
            prior,
            case_sensitive,
        });
        list.sort_by(|a, b| (a.category, &a.iri).cmp(&(b.category, &b.iri)));
    }

    fn assign_uniform_priors(&mut self) {
        for list in self.entries.values_mut() {
            let p = 1.0 / list.len() as f64;
            for e in list.iter_mut() {
                e.prior = p;
            }
        }
    }

    fn cap_priors(&mut self) {
        for list in self.entries.values_mut() {
            let total: f64 = list.iter().map(|e| e.prior).sum();
            if total > 1.0 {
                for e in list.iter_mut() {
                    e.prior /= total;
                }
            }
        }
    }

    /// Merges alias lines `surface<TAB>iri<TAB>category<TAB>prior`. IRIs may be
    /// absolute or prefixed with a prefix known to `graph`. Lines starting
    /// with `#` and blank lines are skipped. When the priors of a surface
    /// add up to more than 1 they are scaled down proportionally.
    pub fn load_aliases(&mut self, text: &str, graph: &Graph) -> Result<usize, OntologyError> {
        let mut added = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| OntologyError::Alias { line: line_no, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            let [surface, iri, category, prior] = fields.as_slice() else {
                return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
            };
            let iri_text = graph.expand_prefixed(iri).unwrap_or_else(|| (*iri).to_owned());
            let iri = Iri::new(iri_text).map_err(|e| err(e.to_string()))?;
            let category: EntityCategory = category.parse().map_err(err)?;
            let prior: f64 = prior.trim().parse().map_err(|_| err(format!("invalid prior {prior:?}")))?;
            if !(0.0..=1.0).contains(&prior) {
                return Err(err(format!("prior {prior} outside [0, 1]")));
            }
            if normalize_surface(surface).is_empty() {
                return Err(err("empty surface form".into()));
            }
            self.add(surface, iri, category, prior, false);
            added += 1;
        }
        self.cap_priors();
        Ok(added)
    }
}

fn literal_values(graph: &Graph, subject: &Term, predicates: &[Iri]) -> BTreeSet<String> {
    predicates
        .iter()
        .flat_map(|p| graph.objects(subject, p))
        .filter_map(|o| o.as_literal().map(|l| l.lexical().to_owned()))
        .collect()
}

fn instances_of_any(graph: &Graph, classes: &BTreeSet<Iri>) -> BTreeSet<Iri> {
    classes
        .iter()
        .flat_map(|c| graph.instances_of(c))
        .filter_map(|t| t.as_iri().cloned())
        .collect()
}

/// Builds the gazetteer from the ontology: Biomarker symbols (Gene), Cancer
/// codes, labels and alternative labels plus the disease classes (Disease),
/// BiomarkerType subclasses (BiomarkerType) and EvidenceSource instances.
/// Local names match case-sensitively, labels case-insensitively. Each
/// surface starts with a uniform prior over its candidate IRIs.
pub fn gazetteer(graph: &Graph) -> Gazetteer {
    let labels = [terms::label(), terms::alt_label()];
    let mut gz = Gazetteer::default();
    let add_named = |gz: &mut Gazetteer, iri: &Iri, category: EntityCategory| {
        gz.add(iri.local_name(), iri.clone(), category, 1.0, true);
        for l in literal_values(graph, &Term::Iri(iri.clone()), &labels) {
            gz.add(&l, iri.clone(), category, 1.0, false);
        }
    };

    let genes = instances_of_any(graph, &subclasses_of(graph, &terms::biomarker()));
    for g in &genes {
        add_named(&mut gz, g, EntityCategory::Gene);
    }
    let disease_classes = subclasses_of(graph, &terms::disease());
    for c in &disease_classes {
        for l in literal_values(graph, &Term::Iri(c.clone()), &labels) {
            gz.add(&l, c.clone(), EntityCategory::Disease, 1.0, false);
        }
    }
    for d in instances_of_any(graph, &disease_classes) {
        add_named(&mut gz, &d, EntityCategory::Disease);
    }
    let type_root = terms::biomarker_type_class();
    for t in subclasses_of(graph, &type_root) {
        if t != type_root {
            add_named(&mut gz, &t, EntityCategory::BiomarkerType);
        }
    }
    for e in instances_of_any(graph, &subclasses_of(graph, &terms::evidence_source())) {
        add_named(&mut gz, &e, EntityCategory::EvidenceSource);
    }
    gz.assign_uniform_priors();
    gz
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle_subset;

    fn toy() -> Graph {
        parse_turtle_subset(
            r#"@prefix ono: <http://onconet.example/ono#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
ono:Cancer rdfs:subClassOf ono:Disease ; rdfs:label "cancer" .
ono:Disease rdfs:label "disease" .
ono:POTSF rdfs:subClassOf ono:BiomarkerType .
ono:TP53 a ono:Biomarker .
ono:BRCA a ono:Cancer ; rdfs:label "Breast invasive carcinoma" ; skos:altLabel "breast cancer" .
ono:LUAD a ono:Cancer ; skos:altLabel "lung cancer" .
ono:LUSC a ono:Cancer ; skos:altLabel "lung cancer" .
ono:PubMed a ono:EvidenceSource .
"#,
        )
        .unwrap()
    }

    #[test]
    fn symbol_is_case_sensitive() {
        let gz = gazetteer(&toy());
        let hits = gz.lookup("TP53");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].iri, Iri::ono("TP53"));
        assert_eq!(hits[0].category, EntityCategory::Gene);
        assert_eq!(hits[0].prior, 1.0);
        assert!(gz.lookup("tp53").is_empty());
    }

    #[test]
    fn code_and_label_resolve_to_same_cancer() {
        let gz = gazetteer(&toy());
        assert_eq!(gz.lookup("BRCA")[0].iri, Iri::ono("BRCA"));
        assert_eq!(gz.lookup("Breast Cancer")[0].iri, Iri::ono("BRCA"));
        assert_eq!(gz.lookup("disease")[0].iri, Iri::ono("Disease"));
    }

    #[test]
    fn ambiguous_surface_splits_prior() {
        let gz = gazetteer(&toy());
        let hits = gz.lookup("lung cancer");
        assert_eq!(hits.len(), 2);
        assert!(hits.iter().all(|e| e.prior == 0.5));
    }

    #[test]
    fn aliases_merge_and_cap() {
        let g = toy();
        let mut gz = gazetteer(&g);
        let n = gz
            .load_aliases(
                "# header\nLi-Fraumeni syndrome\tono:TP53\tGene\t1.0\nlung cancer\tono:LUAD\tDisease\t0.9\n",
                &g,
            )
            .unwrap();
        assert_eq!(n, 2);
        let lf = gz.lookup("li-fraumeni Syndrome");
        assert_eq!(lf[0].iri, Iri::ono("TP53"));
        let lung: f64 = gz.lookup("lung cancer").iter().map(|e| e.prior).sum();
        assert!(lung <= 1.0 + 1e-12);
    }

    #[test]
    fn malformed_alias_line() {
        let g = toy();
        let mut gz = gazetteer(&g);
        let err = gz.load_aliases("x\tono:TP53\tGene\n", &g).unwrap_err();
        assert!(matches!(err, OntologyError::Alias { line: 1, .. }));
        let err = gz.load_aliases("x\tono:TP53\tPlanet\t0.5\n", &g).unwrap_err();
        assert!(err.to_string().contains("Planet"));
    }

    #[test]
    fn category_priority_order() {
        let mut v = EntityCategory::ALL.to_vec();
        v.reverse();
        v.sort();
        assert_eq!(v, EntityCategory::ALL.to_vec());
    }
}
