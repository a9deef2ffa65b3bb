use crate::ontology::TermId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cycle detected: {}", format_path(.path))]
    CycleDetected { path: Vec<TermId> },

    #[error("edge {child} -> {parent} references unknown term {missing}")]
    DanglingEdgeEndpoint {
        child: TermId,
        parent: TermId,
        missing: TermId,
    },

    #[error("duplicate term id {0}")]
    DuplicateTermId(TermId),

    #[error("term id must be non-empty")]
    EmptyTermId,

    #[error("unknown term {0}")]
    UnknownTerm(TermId),

    /// Batch operations report every unresolved id at once.
    #[error("unknown terms: {}", format_list(.0))]
    UnknownTerms(Vec<TermId>),

    #[error("term list is empty")]
    EmptyTermList,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("stanza starting at line {line} has no id")]
    MalformedStanza { line: usize },

    #[error("input contains no records")]
    EmptyInput,

    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },

    #[error("duplicate dataset id {0}")]
    DuplicateDatasetId(String),

    #[error("dataset {dataset}: duplicate feature name {name:?}")]
    DuplicateFeatureName { dataset: String, name: String },

    #[error("dataset {dataset}: unknown category {category:?} (expected Survey or EHR)")]
    UnknownCategory { dataset: String, category: String },

    #[error("unknown dataset {0}")]
    UnknownDataset(String),

    #[error("dataset {0} has no annotated terms")]
    EmptyTermSet(String),

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_path(path: &[TermId]) -> String {
    path.iter()
        .map(TermId::as_str)
        .collect::<Vec<_>>()
        .join(" -> ")
}

fn format_list(ids: &[TermId]) -> String {
    ids.iter()
        .map(TermId::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}
