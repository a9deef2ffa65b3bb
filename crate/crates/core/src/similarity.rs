//! Tversky ratio-model similarity between ontology terms.
//!
//! For terms `t1`, `t2` with ancestor sets A(·), Θ(t) = |A(t)|,
//! Ψ = |A(t1) ∩ A(t2)| and Φ(t1, t2) = Θ(t1) − Ψ, the directed measure is
//!
//! ```text
//!                      Θ(t1)
//! sim(t1→t2) = ──────────────────────────────────
//!              α·Φ(t1,t2) + β·Φ(t2,t1) + Θ(t1)
//! ```
//!
//! with α = 7.9, β = 3.9 by default. Because the formula is not symmetric
//! when α ≠ β, the user-facing measure averages both directions unless
//! [`Symmetrization::AsPrinted`] is selected.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closure::AncestorSet;
use crate::error::{Error, Result};
use crate::matrix;
use crate::ontology::{OntologyGraph, TermId};

pub const DEFAULT_ALPHA: f64 = 7.9;
pub const DEFAULT_BETA: f64 = 3.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetrization {
    /// The directed formula, `sim(t1→t2)`.
    AsPrinted,
    /// `(sim(t1→t2) + sim(t2→t1)) / 2`.
    #[default]
    MeanOfDirections,
}

impl fmt::Display for Symmetrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetrization::AsPrinted => "as-printed",
            Symmetrization::MeanOfDirections => "mean-of-directions",
        })
    }
}

impl FromStr for Symmetrization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" => Ok(Symmetrization::AsPrinted),
            "mean" | "mean-of-directions" => Ok(Symmetrization::MeanOfDirections),
            other => Err(Error::InvalidParameter(format!(
                "unknown symmetrization {other:?} (expected as-printed or mean)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimilarityParams {
    alpha: f64,
    beta: f64,
    symmetrization: Symmetrization,
}

impl Default for SimilarityParams {
    fn default() -> Self {
        SimilarityParams {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            symmetrization: Symmetrization::default(),
        }
    }
}

impl SimilarityParams {
    pub fn new(alpha: f64, beta: f64, symmetrization: Symmetrization) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a finite non-negative number, got {v}"
                )));
            }
        }
        Ok(SimilarityParams {
            alpha,
            beta,
            symmetrization,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn symmetrization(&self) -> Symmetrization {
        self.symmetrization
    }

    pub fn with_symmetrization(mut self, symmetrization: Symmetrization) -> Self {
        self.symmetrization = symmetrization;
        self
    }
}

/// The directed ratio model evaluated from set cardinalities.
pub fn ratio_model(theta1: u32, theta2: u32, shared: u32, alpha: f64, beta: f64) -> f64 {
    debug_assert!(shared <= theta1 && shared <= theta2);
    let t1 = f64::from(theta1);
    let phi12 = f64::from(theta1 - shared);
    let phi21 = f64::from(theta2 - shared);
    t1 / (alpha * phi12 + beta * phi21 + t1)
}

/// Θ/Ψ components behind one similarity value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairBreakdown {
    pub theta1: u32,
    pub theta2: u32,
    pub psi: u32,
    pub forward: f64,
    pub backward: f64,
    pub mean: f64,
}

/// Ratio-model similarity bound to one ontology and a parameter set.
#[derive(Clone, Copy, Debug)]
pub struct RatioModel<'g> {
    graph: &'g OntologyGraph,
    params: SimilarityParams,
}

impl<'g> RatioModel<'g> {
    pub fn new(graph: &'g OntologyGraph, params: SimilarityParams) -> Self {
        RatioModel { graph, params }
    }

    pub fn graph(&self) -> &'g OntologyGraph {
        self.graph
    }

    pub fn params(&self) -> &SimilarityParams {
        &self.params
    }

    pub fn directed(&self, t1: &str, t2: &str) -> Result<f64> {
        let a = self.graph.ancestor_set(t1)?;
        let b = self.graph.ancestor_set(t2)?;
        Ok(self.directed_sets(&a, &b))
    }

    /// Similarity under the configured symmetrization.
    pub fn similarity(&self, t1: &str, t2: &str) -> Result<f64> {
        let a = self.graph.ancestor_set(t1)?;
        let b = self.graph.ancestor_set(t2)?;
        Ok(self.sets(&a, &b))
    }

    pub fn distance(&self, t1: &str, t2: &str) -> Result<f64> {
        Ok(1.0 - self.similarity(t1, t2)?)
    }

    pub fn breakdown(&self, t1: &str, t2: &str) -> Result<PairBreakdown> {
        let a = self.graph.ancestor_set(t1)?;
        let b = self.graph.ancestor_set(t2)?;
        let forward = self.directed_sets(&a, &b);
        let backward = self.directed_sets(&b, &a);
        Ok(PairBreakdown {
            theta1: a.len(),
            theta2: b.len(),
            psi: a.intersection_len(&b),
            forward,
            backward,
            mean: (forward + backward) / 2.0,
        })
    }

    fn directed_sets(&self, a: &AncestorSet, b: &AncestorSet) -> f64 {
        let shared = a.intersection_len(b);
        ratio_model(
            a.len(),
            b.len(),
            shared,
            self.params.alpha,
            self.params.beta,
        )
    }

    pub(crate) fn sets(&self, a: &AncestorSet, b: &AncestorSet) -> f64 {
        let shared = a.intersection_len(b);
        let (ta, tb) = (a.len(), b.len());
        let (al, be) = (self.params.alpha, self.params.beta);
        let forward = ratio_model(ta, tb, shared, al, be);
        match self.params.symmetrization {
            Symmetrization::AsPrinted => forward,
            Symmetrization::MeanOfDirections => {
                (forward + ratio_model(tb, ta, shared, al, be)) / 2.0
            }
        }
    }

    /// Resolves every id, reporting all unknown ones together.
    pub(crate) fn resolve_all(&self, terms: &[TermId]) -> Result<Vec<Arc<AncestorSet>>> {
        let missing: Vec<TermId> = terms
            .iter()
            .filter(|t| !self.graph.contains(t))
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(Error::UnknownTerms(missing));
        }
        terms.iter().map(|t| self.graph.ancestor_set(t)).collect()
    }

    /// Full similarity matrix over `terms` (duplicates dropped, first
    /// occurrence order kept). Rows are computed in parallel on the current
    /// rayon pool; every cell is evaluated independently, so the result does
    /// not depend on the pool size.
    pub fn pairwise_matrix(&self, terms: &[TermId]) -> Result<SimilarityMatrix> {
        let mut seen = std::collections::HashSet::new();
        let terms: Vec<TermId> = terms.iter().filter(|t| seen.insert(*t)).cloned().collect();
        if terms.is_empty() {
            return Err(Error::EmptyTermList);
        }
        let sets = self.resolve_all(&terms)?;
        let values = sets
            .par_iter()
            .map(|a| sets.iter().map(|b| self.sets(a, b)).collect())
            .collect();
        Ok(SimilarityMatrix { terms, values })
    }

    /// Top-`k` candidates by similarity to `query`, ties by ascending id.
    pub fn nearest_terms<'c, I>(
        &self,
        query: &str,
        candidates: I,
        k: usize,
    ) -> Result<Vec<(TermId, f64)>>
    where
        I: IntoIterator<Item = &'c TermId>,
    {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let q = self.graph.ancestor_set(query)?;
        let mut scored = Vec::new();
        for c in candidates {
            let s = self.graph.ancestor_set(c)?;
            scored.push((c.clone(), self.sets(&q, &s)));
        }
        scored.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
        scored.dedup_by(|a, b| a.0 == b.0);
        scored.truncate(k);
        Ok(scored)
    }
}

/// Labeled square matrix of term similarities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub terms: Vec<TermId>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// `1 − sim` for every cell.
    pub fn to_distance(&self) -> SimilarityMatrix {
        SimilarityMatrix {
            terms: self.terms.clone(),
            values: self
                .values
                .iter()
                .map(|r| r.iter().map(|v| 1.0 - v).collect())
                .collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W, metadata: &[(&str, String)]) -> Result<()> {
        let labels: Vec<&str> = self.terms.iter().map(TermId::as_str).collect();
        matrix::write_csv(out, "term", &labels, &self.values, metadata)
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let (labels, values) = matrix::read_csv(input)?;
        let terms = labels
            .into_iter()
            .map(TermId::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(SimilarityMatrix { terms, values })
    }
}
