//! Oncology biomarker knowledge graph toolkit.
//!
//! An in-memory RDF store with N-Triples and Turtle I/O, a seed ontology of
//! cancer biomarkers, text extraction into triples, forward-chaining
//! reasoning with consistency checks, description-logic class queries,
//! model-assisted refresh with a review queue, and quality scoring. The
//! `onconet` binary exposes all of it through [`cli`].

pub mod cli;
pub mod clock;
pub mod dlq;
pub mod extraction;
pub mod llm_refresh;
pub mod ontology;
pub mod quality;
pub mod rdf;
pub mod reasoner;
