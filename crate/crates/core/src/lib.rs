//! Semantic similarity for annotated tabular datasets.
//!
//! An ontology (an is-a DAG, e.g. a SNOMED-CT export) is loaded into an
//! [`OntologyGraph`]. Features of tabular datasets are mapped to ontology
//! terms in an [`AnnotationCatalog`]. From there the crate computes
//! ratio-model similarity between terms ([`RatioModel`]) and between whole
//! datasets ([`DossEngine`]), plus the coverage and term-frequency tables
//! used to describe a catalog.

pub mod catalog;
pub mod closure;
pub mod doss;
pub mod error;
pub mod ingest;
pub mod matrix;
pub mod ontology;
pub mod search;
pub mod similarity;

pub use catalog::{
    AnnotationCatalog, Category, CoverageStats, DatasetRecord, FeatureRecord, TermFrequency,
};
pub use closure::AncestorSet;
pub use doss::{shared_term_count, Aggregator, DossEngine, DossMatrix, DossResult};
pub use error::{Error, Result};
pub use ingest::{ParseReport, ParsedOntology};
pub use ontology::{OntologyGraph, TermId, TermSpec};
pub use search::{LabelIndex, LabelMatch};
pub use similarity::{RatioModel, SimilarityMatrix, SimilarityParams, Symmetrization};
