//! Case-insensitive label lookup, used while annotating catalog features.

use std::cmp::Ordering;

use serde::Serialize;

use crate::ingest::LabelMap;
use crate::ontology::{OntologyGraph, TermId};

struct Entry {
    term: TermId,
    label: String,
    // label first, then synonyms; (original, lowercased)
    texts: Vec<(String, String)>,
}

/// Searchable label/synonym table.
pub struct LabelIndex {
    entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelMatch {
    pub term: TermId,
    pub label: String,
    /// The label or synonym that matched.
    pub matched: String,
    /// Fraction of the matched text covered by the query; 1.0 for an exact hit.
    pub score: f64,
    #[serde(skip)]
    rank: Rank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Rank {
    not_exact: bool,
    not_prefix: bool,
    position: usize,
    length: usize,
}

impl LabelIndex {
    pub fn new<I>(items: I) -> Self
    where
        I: IntoIterator<Item = (TermId, String, Vec<String>)>,
    {
        let entries = items
            .into_iter()
            .map(|(term, label, synonyms)| {
                let texts = std::iter::once(label.clone())
                    .chain(synonyms)
                    .map(|t| {
                        let lower = t.to_lowercase();
                        (t, lower)
                    })
                    .collect();
                Entry { term, label, texts }
            })
            .collect();
        LabelIndex { entries }
    }

    pub fn from_labels(labels: &LabelMap) -> Self {
        Self::new(
            labels
                .iter()
                .map(|(t, e)| (t.clone(), e.label.clone(), e.synonyms.clone())),
        )
    }

    /// Terms of `graph` that carry a label.
    pub fn from_graph(graph: &OntologyGraph) -> Self {
        Self::new(graph.terms().filter_map(|t| {
            let info = graph.info(t)?;
            let label = info.label.clone()?;
            Some((t.clone(), label, info.synonyms.clone()))
        }))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Top-`k` matches ranked by exact match, prefix match, match position
    /// and matched-text length, then ascending term id.
    pub fn search(&self, query: &str, k: usize) -> Vec<LabelMatch> {
        let needle = query.trim().to_lowercase();
        if needle.is_empty() || k == 0 {
            return Vec::new();
        }
        let mut hits: Vec<LabelMatch> = self
            .entries
            .iter()
            .filter_map(|e| {
                let (rank, text) = e
                    .texts
                    .iter()
                    .filter_map(|(orig, lower)| {
                        let position = lower.find(&needle)?;
                        let rank = Rank {
                            not_exact: *lower != needle,
                            not_prefix: position != 0,
                            position,
                            length: lower.chars().count(),
                        };
                        Some((rank, orig))
                    })
                    .min_by_key(|(rank, _)| *rank)?;
                Some(LabelMatch {
                    term: e.term.clone(),
                    label: e.label.clone(),
                    matched: text.clone(),
                    score: needle.chars().count() as f64 / rank.length as f64,
                    rank,
                })
            })
            .collect();
        hits.sort_by(|a, b| match a.rank.cmp(&b.rank) {
            Ordering::Equal => a.term.cmp(&b.term),
            o => o,
        });
        hits.truncate(k);
        hits
    }
}
