//! Dataset similarity from annotated term sets.
//!
//! `doss(D1 | D2)` takes every term of D1, finds its best match among the
//! terms of D2 under the ratio model, and summarises those maxima with an
//! aggregator `h`. The measure is directional: a small dataset whose terms
//! all appear in a large one scores 1 against it, not the other way round.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::AnnotationCatalog;
use crate::error::{Error, Result};
use crate::matrix;
use crate::ontology::TermId;
use crate::similarity::{RatioModel, Symmetrization};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregator {
    #[default]
    Mean,
    Median,
    Min,
    Max,
}

impl Aggregator {
    pub const ALL: [Aggregator; 4] = [
        Aggregator::Mean,
        Aggregator::Median,
        Aggregator::Min,
        Aggregator::Max,
    ];

    /// Summarises a non-empty list; `None` for an empty one. The result is
    /// clamped into `[min, max]` of the input so rounding in the mean can
    /// never leave that range.
    pub fn apply(&self, values: &[f64]) -> Option<f64> {
        if values.is_empty() {
            return None;
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let v = match self {
            Aggregator::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Aggregator::Median => {
                let mut sorted = values.to_vec();
                sorted.sort_by(f64::total_cmp);
                let mid = sorted.len() / 2;
                if sorted.len() % 2 == 1 {
                    sorted[mid]
                } else {
                    (sorted[mid - 1] + sorted[mid]) / 2.0
                }
            }
            Aggregator::Min => lo,
            Aggregator::Max => hi,
        };
        Some(v.clamp(lo, hi))
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregator::Mean => "mean",
            Aggregator::Median => "median",
            Aggregator::Min => "min",
            Aggregator::Max => "max",
        })
    }
}

impl FromStr for Aggregator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Aggregator::ALL
            .into_iter()
            .find(|a| a.to_string() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown aggregator {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestMatch {
    pub source_term: TermId,
    pub reference_term: TermId,
    pub similarity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DossResult {
    pub source: String,
    pub reference: String,
    pub aggregator: Aggregator,
    pub symmetrization: Symmetrization,
    pub value: f64,
    pub best_matches: Vec<BestMatch>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExcludedDataset {
    pub id: String,
    pub reason: String,
}

/// `values[i][j] = doss(datasets[i] | datasets[j])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DossMatrix {
    pub datasets: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub excluded: Vec<ExcludedDataset>,
    pub aggregator: Aggregator,
    pub symmetrization: Symmetrization,
}

impl DossMatrix {
    pub fn write_csv<W: Write>(&self, out: W, metadata: &[(&str, String)]) -> Result<()> {
        let labels: Vec<&str> = self.datasets.iter().map(String::as_str).collect();
        matrix::write_csv(out, "dataset", &labels, &self.values, metadata)
    }
}

/// |V1 ∩ V2| for two datasets of `catalog`.
pub fn shared_term_count(catalog: &AnnotationCatalog, d1: &str, d2: &str) -> Result<usize> {
    let a = catalog.term_set(d1)?;
    let b = catalog.term_set(d2)?;
    Ok(a.intersection(&b).count())
}

pub struct DossEngine<'a> {
    model: RatioModel<'a>,
    catalog: &'a AnnotationCatalog,
}

impl<'a> DossEngine<'a> {
    pub fn new(model: RatioModel<'a>, catalog: &'a AnnotationCatalog) -> Self {
        DossEngine { model, catalog }
    }

    fn checked_terms(&self, dataset: &str) -> Result<Vec<TermId>> {
        let set = self.catalog.term_set(dataset)?;
        if set.is_empty() {
            return Err(Error::EmptyTermSet(dataset.to_owned()));
        }
        Ok(set.into_iter().collect())
    }

    fn check_known<'t, I: IntoIterator<Item = &'t TermId>>(&self, terms: I) -> Result<()> {
        let graph = self.model.graph();
        let missing: BTreeSet<TermId> = terms
            .into_iter()
            .filter(|t| !graph.contains(t))
            .cloned()
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::UnknownTerms(missing.into_iter().collect()))
        }
    }

    pub fn doss(&self, source: &str, reference: &str, h: Aggregator) -> Result<DossResult> {
        let src = self.checked_terms(source)?;
        let refs = self.checked_terms(reference)?;
        self.check_known(src.iter().chain(&refs))?;
        let graph = self.model.graph();
        let ref_sets = refs
            .iter()
            .map(|t| graph.ancestor_set(t))
            .collect::<Result<Vec<_>>>()?;

        let mut best_matches = Vec::with_capacity(src.len());
        for t in &src {
            let a = graph.ancestor_set(t)?;
            // refs are sorted ascending, so strict > keeps the smallest id on ties
            let mut best = (0usize, f64::NEG_INFINITY);
            for (k, b) in ref_sets.iter().enumerate() {
                let s = self.model.sets(&a, b);
                if s > best.1 {
                    best = (k, s);
                }
            }
            best_matches.push(BestMatch {
                source_term: t.clone(),
                reference_term: refs[best.0].clone(),
                similarity: best.1,
            });
        }
        let maxima: Vec<f64> = best_matches.iter().map(|m| m.similarity).collect();
        let value = h.apply(&maxima).expect("source term set is non-empty");
        Ok(DossResult {
            source: source.to_owned(),
            reference: reference.to_owned(),
            aggregator: h,
            symmetrization: self.model.params().symmetrization(),
            value,
            best_matches,
        })
    }

    /// DOSS for every ordered pair of datasets with a non-empty term set.
    /// Datasets without annotations are listed in `excluded`; unknown terms
    /// anywhere in the included datasets are an error listing all of them.
    pub fn matrix(&self, h: Aggregator) -> Result<DossMatrix> {
        let mut ids = Vec::new();
        let mut term_sets = Vec::new();
        let mut excluded = Vec::new();
        for d in self.catalog.datasets() {
            let set = d.term_set();
            if set.is_empty() {
                excluded.push(ExcludedDataset {
                    id: d.id.clone(),
                    reason: "no annotated terms".into(),
                });
            } else {
                ids.push(d.id.clone());
                term_sets.push(set);
            }
        }

        let universe: Vec<TermId> = term_sets
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        self.check_known(&universe)?;
        let position = |t: &TermId| universe.binary_search(t).unwrap();
        let sims = if universe.is_empty() {
            Vec::new()
        } else {
            self.model.pairwise_matrix(&universe)?.values
        };
        let members: Vec<Vec<usize>> = term_sets
            .iter()
            .map(|s| s.iter().map(position).collect())
            .collect();

        let values = members
            .par_iter()
            .map(|src| {
                members
                    .iter()
                    .map(|refs| {
                        let maxima: Vec<f64> = src
                            .iter()
                            .map(|&i| {
                                refs.iter()
                                    .map(|&k| sims[i][k])
                                    .fold(f64::NEG_INFINITY, f64::max)
                            })
                            .collect();
                        h.apply(&maxima).expect("term set is non-empty")
                    })
                    .collect()
            })
            .collect();

        Ok(DossMatrix {
            datasets: ids,
            values,
            excluded,
            aggregator: h,
            symmetrization: self.model.params().symmetrization(),
        })
    }
}
