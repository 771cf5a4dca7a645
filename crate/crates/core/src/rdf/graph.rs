//! Indexed in-memory triple set.
//!
//! Three nested hash indexes (SPO, POS, OSP) make every pattern with at least
//! one bound position a direct lookup. Results handed to callers through
//! [`Graph::matching`] are sorted into the canonical order so that anything
//! derived from them is reproducible.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::term::{sort_canonical, Iri, Provenance, Term, Triple};
use super::vocab;
use super::RdfError;

type Index<A, B, C> = HashMap<A, HashMap<B, HashSet<C>>>;

/// Counters maintained while statements are ingested from text, so that
/// duplicates can be measured after set semantics have collapsed them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub statements: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone)]
pub struct Graph {
    spo: Index<Term, Iri, Term>,
    pos: Index<Iri, Term, Term>,
    osp: Index<Term, Term, Iri>,
    len: usize,
    provenance: HashMap<Triple, Provenance>,
    prefixes: BTreeMap<String, String>,
    ingest: IngestStats,
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

impl PartialEq for Graph {
    /// Two graphs are equal when they hold the same triple set.
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.iter().all(|t| other.contains(&t))
    }
}

impl Graph {
    /// Empty graph with the default prefix table registered.
    pub fn new() -> Self {
        let prefixes = vocab::DEFAULT_PREFIXES
            .iter()
            .map(|(p, ns)| (p.to_string(), ns.to_string()))
            .collect();
        Graph {
            spo: HashMap::new(),
            pos: HashMap::new(),
            osp: HashMap::new(),
            len: 0,
            provenance: HashMap::new(),
            prefixes,
            ingest: IngestStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a triple. Returns `true` iff it was not already present.
    /// Provenance is recorded only for new triples: the first writer wins.
    pub fn insert(&mut self, triple: Triple, provenance: Option<Provenance>) -> bool {
        let (s, p, o) = (triple.subject(), triple.predicate(), triple.object());
        let fresh = self
            .spo
            .entry(s.clone())
            .or_default()
            .entry(p.clone())
            .or_default()
            .insert(o.clone());
        if !fresh {
            return false;
        }
        self.pos
            .entry(p.clone())
            .or_default()
            .entry(o.clone())
            .or_default()
            .insert(s.clone());
        self.osp
            .entry(o.clone())
            .or_default()
            .entry(s.clone())
            .or_default()
            .insert(p.clone());
        self.len += 1;
        if let Some(prov) = provenance {
            self.provenance.insert(triple, prov);
        }
        true
    }

    /// Builds and inserts a triple from loose parts, rejecting literal
    /// subjects.
    pub fn insert_parts(
        &mut self,
        subject: Term,
        predicate: Iri,
        object: Term,
        provenance: Option<Provenance>,
    ) -> Result<bool, RdfError> {
        Ok(self.insert(Triple::new(subject, predicate, object)?, provenance))
    }

    /// Records one ingested statement, counting it as a duplicate when it was
    /// already present.
    pub fn ingest(&mut self, triple: Triple, provenance: Option<Provenance>) -> bool {
        self.ingest.statements += 1;
        let fresh = self.insert(triple, provenance);
        if !fresh {
            self.ingest.duplicates += 1;
        }
        fresh
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (s, p, o) = (triple.subject(), triple.predicate(), triple.object());
        let removed = remove_nested(&mut self.spo, s, p, o);
        if !removed {
            return false;
        }
        remove_nested(&mut self.pos, p, o, s);
        remove_nested(&mut self.osp, o, s, p);
        self.len -= 1;
        self.provenance.remove(triple);
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(triple.subject())
            .and_then(|m| m.get(triple.predicate()))
            .is_some_and(|set| set.contains(triple.object()))
    }

    /// All triples matching the bound positions, in canonical order.
    pub fn matching(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut out = self.matching_unordered(s, p, o);
        sort_canonical(&mut out);
        out
    }

    /// Same as [`Graph::matching`] without the sort. Used on hot paths where
    /// the caller does not expose order.
    pub fn matching_unordered(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mk = |s: &Term, p: &Iri, o: &Term| Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed triples are valid");
        let mut out = Vec::new();
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                let t = mk(s, p, o);
                if self.contains(&t) {
                    out.push(t);
                }
            }
            (Some(s), Some(p), None) => {
                if let Some(objs) = self.spo.get(s).and_then(|m| m.get(p)) {
                    out.extend(objs.iter().map(|o| mk(s, p, o)));
                }
            }
            (Some(s), None, Some(o)) => {
                if let Some(preds) = self.osp.get(o).and_then(|m| m.get(s)) {
                    out.extend(preds.iter().map(|p| mk(s, p, o)));
                }
            }
            (None, Some(p), Some(o)) => {
                if let Some(subs) = self.pos.get(p).and_then(|m| m.get(o)) {
                    out.extend(subs.iter().map(|s| mk(s, p, o)));
                }
            }
            (Some(s), None, None) => {
                if let Some(m) = self.spo.get(s) {
                    for (p, objs) in m {
                        out.extend(objs.iter().map(|o| mk(s, p, o)));
                    }
                }
            }
            (None, Some(p), None) => {
                if let Some(m) = self.pos.get(p) {
                    for (o, subs) in m {
                        out.extend(subs.iter().map(|s| mk(s, p, o)));
                    }
                }
            }
            (None, None, Some(o)) => {
                if let Some(m) = self.osp.get(o) {
                    for (s, preds) in m {
                        out.extend(preds.iter().map(|p| mk(s, p, o)));
                    }
                }
            }
            (None, None, None) => out.extend(self.iter()),
        }
        out
    }

    /// Unordered iteration over every triple.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, m)| {
            m.iter().flat_map(move |(p, objs)| {
                objs.iter()
                    .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed triples are valid"))
            })
        })
    }

    /// Every triple in canonical order.
    pub fn triples(&self) -> Vec<Triple> {
        self.matching(None, None, None)
    }

    /// Objects of `(s, p, ?)`, without ordering guarantees.
    pub fn objects<'a>(&'a self, s: &Term, p: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo.get(s).and_then(|m| m.get(p)).into_iter().flatten()
    }

    /// Subjects of `(?, p, o)`, without ordering guarantees.
    pub fn subjects<'a>(&'a self, p: &Iri, o: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.pos.get(p).and_then(|m| m.get(o)).into_iter().flatten()
    }

    /// `(subject, object)` pairs for one predicate.
    pub fn pairs<'a>(&'a self, p: &Iri) -> impl Iterator<Item = (&'a Term, &'a Term)> + 'a {
        self.pos
            .get(p)
            .into_iter()
            .flat_map(|m| m.iter().flat_map(|(o, subs)| subs.iter().map(move |s| (s, o))))
    }

    pub fn has(&self, s: &Term, p: &Iri, o: &Term) -> bool {
        self.spo
            .get(s)
            .and_then(|m| m.get(p))
            .is_some_and(|objs| objs.contains(o))
    }

    /// Distinct subjects, unordered.
    pub fn subject_terms(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    /// Distinct objects, unordered.
    pub fn object_terms(&self) -> impl Iterator<Item = &Term> {
        self.osp.keys()
    }

    /// Distinct predicates, unordered.
    pub fn predicates(&self) -> impl Iterator<Item = &Iri> {
        self.pos.keys()
    }

    /// `true` when the term occurs anywhere in the graph.
    pub fn mentions(&self, term: &Term) -> bool {
        self.spo.contains_key(term)
            || self.osp.contains_key(term)
            || term.as_iri().is_some_and(|iri| self.pos.contains_key(iri))
    }

    pub fn provenance(&self, triple: &Triple) -> Option<&Provenance> {
        self.provenance.get(triple)
    }

    pub fn provenance_entries(&self) -> impl Iterator<Item = (&Triple, &Provenance)> {
        self.provenance.iter()
    }

    /// Sets provenance for a triple that is already present and has none yet.
    pub fn attach_provenance(&mut self, triple: &Triple, provenance: Provenance) -> bool {
        if !self.contains(triple) || self.provenance.contains_key(triple) {
            return false;
        }
        self.provenance.insert(triple.clone(), provenance);
        true
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    /// Registers a prefix. A label keeps exactly one namespace; rebinding a
    /// label to a different namespace is an error.
    pub fn add_prefix(&mut self, label: &str, namespace: &str) -> Result<(), RdfError> {
        match self.prefixes.get(label) {
            Some(existing) if existing != namespace => Err(RdfError::PrefixConflict {
                prefix: label.to_owned(),
                existing: existing.clone(),
                new: namespace.to_owned(),
            }),
            _ => {
                self.prefixes.insert(label.to_owned(), namespace.to_owned());
                Ok(())
            }
        }
    }

    /// Expands `prefix:local` against the prefix table.
    pub fn expand_prefixed(&self, name: &str) -> Option<String> {
        let (prefix, local) = name.split_once(':')?;
        self.prefixes.get(prefix).map(|ns| format!("{ns}{local}"))
    }

    /// Shortest `prefix:local` form of an IRI, falling back to `<iri>`.
    pub fn compact(&self, iri: &Iri) -> String {
        self.prefixes
            .iter()
            .filter(|(_, ns)| iri.as_str().starts_with(ns.as_str()) && iri.as_str().len() > ns.len())
            .max_by_key(|(_, ns)| ns.len())
            .map(|(p, ns)| format!("{p}:{}", &iri.as_str()[ns.len()..]))
            .unwrap_or_else(|| iri.to_string())
    }

    pub fn ingest_stats(&self) -> IngestStats {
        self.ingest
    }

    /// Adds every triple of `other`, keeping existing provenance.
    pub fn extend_from(&mut self, other: &Graph) -> usize {
        let mut added = 0;
        for t in other.iter() {
            let prov = other.provenance(&t).cloned();
            if self.insert(t, prov) {
                added += 1;
            }
        }
        added
    }

    /// Instances typed by `class` (exact `rdf:type` triples).
    pub fn instances_of(&self, class: &Iri) -> Vec<Term> {
        let mut out: Vec<Term> = self
            .subjects(&Iri::from_static(vocab::RDF_TYPE), &Term::Iri(class.clone()))
            .cloned()
            .collect();
        out.sort_by_cached_key(|t| t.to_string());
        out
    }
}

fn remove_nested<A, B, C>(index: &mut Index<A, B, C>, a: &A, b: &B, c: &C) -> bool
where
    A: std::hash::Hash + Eq,
    B: std::hash::Hash + Eq,
    C: std::hash::Hash + Eq,
{
    let Some(inner) = index.get_mut(a) else {
        return false;
    };
    let Some(set) = inner.get_mut(b) else {
        return false;
    };
    let removed = set.remove(c);
    if set.is_empty() {
        inner.remove(b);
    }
    if inner.is_empty() {
        index.remove(a);
    }
    removed
}
