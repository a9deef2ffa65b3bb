//! Validated is-a DAG over ontology terms.
//!
//! Terms are interned into dense `u32` indices at build time and parent
//! lists are stored in compressed sparse row form, so a SNOMED-sized
//! hierarchy (hundreds of thousands of concepts) stays compact. Ancestor
//! sets are not materialized up front; see [`crate::closure`].

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::closure::{AncestorClosure, AncestorSet};
use crate::error::{Error, Result};

/// Opaque, non-empty term identifier such as a SNOMED-CT concept id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TermId(String);

impl TermId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::EmptyTermId);
        }
        Ok(TermId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl<'de> Deserialize<'de> for TermId {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(de)?;
        TermId::new(raw).map_err(serde::de::Error::custom)
    }
}

impl Deref for TermId {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for TermId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for TermId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for TermId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TermId::new(s)
    }
}

/// One term as supplied to [`OntologyGraph::build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSpec {
    pub id: TermId,
    pub label: Option<String>,
    pub synonyms: Vec<String>,
}

impl TermSpec {
    pub fn bare(id: TermId) -> Self {
        TermSpec {
            id,
            label: None,
            synonyms: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermInfo {
    pub label: Option<String>,
    pub synonyms: Vec<String>,
}

pub struct OntologyGraph {
    ids: Vec<TermId>,
    info: Vec<TermInfo>,
    index: HashMap<TermId, u32>,
    parent_offsets: Vec<u32>,
    parents: Vec<u32>,
    closure: AncestorClosure,
}

impl fmt::Debug for OntologyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OntologyGraph")
            .field("terms", &self.ids.len())
            .field("edges", &self.parents.len())
            .finish()
    }
}

impl OntologyGraph {
    /// Validates and freezes a term/edge list.
    ///
    /// Edges are `(child, parent)` pairs. Duplicate edges collapse silently;
    /// duplicate term ids, dangling endpoints and cycles (including
    /// self-loops) are rejected.
    pub fn build(terms: Vec<TermSpec>, edges: Vec<(TermId, TermId)>) -> Result<Self> {
        let mut ids = Vec::with_capacity(terms.len());
        let mut info = Vec::with_capacity(terms.len());
        let mut index = HashMap::with_capacity(terms.len());
        for spec in terms {
            let next = ids.len() as u32;
            if index.insert(spec.id.clone(), next).is_some() {
                return Err(Error::DuplicateTermId(spec.id));
            }
            ids.push(spec.id);
            info.push(TermInfo {
                label: spec.label,
                synonyms: spec.synonyms,
            });
        }

        let mut pairs = Vec::with_capacity(edges.len());
        let mut seen = HashSet::with_capacity(edges.len());
        for (child, parent) in edges {
            let resolve = |t: &TermId| {
                index
                    .get(t)
                    .copied()
                    .ok_or_else(|| Error::DanglingEdgeEndpoint {
                        child: child.clone(),
                        parent: parent.clone(),
                        missing: t.clone(),
                    })
            };
            let c = resolve(&child)?;
            let p = resolve(&parent)?;
            if c == p {
                return Err(Error::CycleDetected {
                    path: vec![child.clone(), child],
                });
            }
            if seen.insert((c, p)) {
                pairs.push((c, p));
            }
        }

        // CSR layout; parents of each child kept in insertion order.
        let n = ids.len();
        let mut degree = vec![0u32; n + 1];
        for &(c, _) in &pairs {
            degree[c as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let parent_offsets = degree;
        let mut cursor = parent_offsets.clone();
        let mut parents = vec![0u32; pairs.len()];
        for &(c, p) in &pairs {
            let slot = &mut cursor[c as usize];
            parents[*slot as usize] = p;
            *slot += 1;
        }

        let graph = OntologyGraph {
            ids,
            info,
            index,
            parent_offsets,
            parents,
            closure: AncestorClosure::default(),
        };
        if let Some(cycle) = graph.find_cycle() {
            return Err(Error::CycleDetected {
                path: cycle
                    .into_iter()
                    .map(|i| graph.ids[i as usize].clone())
                    .collect(),
            });
        }
        Ok(graph)
    }

    pub fn term_count(&self) -> usize {
        self.ids.len()
    }

    /// Number of distinct is-a edges.
    pub fn edge_count(&self) -> usize {
        self.parents.len()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn terms(&self) -> impl Iterator<Item = &TermId> {
        self.ids.iter()
    }

    pub fn info(&self, id: &str) -> Option<&TermInfo> {
        self.index.get(id).map(|&i| &self.info[i as usize])
    }

    pub fn label(&self, id: &str) -> Option<&str> {
        self.info(id).and_then(|i| i.label.as_deref())
    }

    /// Direct parents of `id`.
    pub fn parents(&self, id: &str) -> Result<Vec<&TermId>> {
        let node = self.node(id)?;
        Ok(self
            .parent_slice(node)
            .iter()
            .map(|&p| &self.ids[p as usize])
            .collect())
    }

    /// Terms without parents.
    pub fn roots(&self) -> Vec<&TermId> {
        (0..self.ids.len() as u32)
            .filter(|&i| self.parent_slice(i).is_empty())
            .map(|i| &self.ids[i as usize])
            .collect()
    }

    /// All `(child, parent)` edges in term order.
    pub fn edges(&self) -> impl Iterator<Item = (&TermId, &TermId)> {
        (0..self.ids.len() as u32).flat_map(move |c| {
            self.parent_slice(c)
                .iter()
                .map(move |&p| (&self.ids[c as usize], &self.ids[p as usize]))
        })
    }

    /// A(t): the term together with everything reachable along is-a edges.
    pub fn ancestors(&self, id: &str) -> Result<BTreeSet<TermId>> {
        let set = self.ancestor_set(id)?;
        Ok(set
            .members()
            .iter()
            .map(|&i| self.ids[i as usize].clone())
            .collect())
    }

    /// Θ(t) = |A(t)|.
    pub fn theta(&self, id: &str) -> Result<u32> {
        Ok(self.ancestor_set(id)?.len())
    }

    /// Ψ(t1, t2) = |A(t1) ∩ A(t2)|.
    pub fn psi(&self, a: &str, b: &str) -> Result<u32> {
        let sa = self.ancestor_set(a)?;
        let sb = self.ancestor_set(b)?;
        Ok(sa.intersection_len(&sb))
    }

    /// Memoized ancestor set handle, for callers doing many Ψ lookups.
    pub fn ancestor_set(&self, id: &str) -> Result<Arc<AncestorSet>> {
        let node = self.node(id)?;
        Ok(self.closure.get_or_compute(node, |n| self.parent_slice(n)))
    }

    /// Number of terms whose closure has been computed so far.
    pub fn cached_closures(&self) -> usize {
        self.closure.cached_len()
    }

    fn node(&self, id: &str) -> Result<u32> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownTerm(TermId(id.to_owned())))
    }

    pub(crate) fn parent_slice(&self, node: u32) -> &[u32] {
        let lo = self.parent_offsets[node as usize] as usize;
        let hi = self.parent_offsets[node as usize + 1] as usize;
        &self.parents[lo..hi]
    }

    /// Iterative three-colour DFS; returns one cycle as a closed path.
    fn find_cycle(&self) -> Option<Vec<u32>> {
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;

        let n = self.ids.len();
        let mut colour = vec![WHITE; n];
        // (node, next parent position)
        let mut stack: Vec<(u32, usize)> = Vec::new();
        for start in 0..n as u32 {
            if colour[start as usize] != WHITE {
                continue;
            }
            colour[start as usize] = GREY;
            stack.push((start, 0));
            while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
                let ps = self.parent_slice(node);
                if *pos < ps.len() {
                    let next = ps[*pos];
                    *pos += 1;
                    match colour[next as usize] {
                        WHITE => {
                            colour[next as usize] = GREY;
                            stack.push((next, 0));
                        }
                        GREY => {
                            let from = stack.iter().position(|&(v, _)| v == next).unwrap();
                            let mut path: Vec<u32> =
                                stack[from..].iter().map(|&(v, _)| v).collect();
                            path.push(next);
                            return Some(path);
                        }
                        _ => {}
                    }
                } else {
                    colour[node as usize] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TermId {
        TermId::new(s).unwrap()
    }

    fn graph(terms: &[&str], edges: &[(&str, &str)]) -> Result<OntologyGraph> {
        OntologyGraph::build(
            terms.iter().map(|s| TermSpec::bare(t(s))).collect(),
            edges.iter().map(|(c, p)| (t(c), t(p))).collect(),
        )
    }

    fn names(set: BTreeSet<TermId>) -> Vec<String> {
        set.into_iter().map(|t| t.0).collect()
    }

    #[test]
    fn minimal_chain_is_valid() {
        let g = graph(&["r", "a"], &[("a", "r")]).unwrap();
        assert_eq!(g.term_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.roots(), vec![&t("r")]);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let err = graph(&["r"], &[("r", "r")]).unwrap_err();
        match err {
            Error::CycleDetected { path } => assert_eq!(path, vec![t("r"), t("r")]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_cycle_reports_path() {
        let err = graph(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        match err {
            Error::CycleDetected { path } => {
                assert_eq!(path.first(), path.last());
                assert_eq!(path.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn longer_cycle_behind_a_dag_prefix() {
        let err = graph(
            &["x", "a", "b", "c"],
            &[("x", "a"), ("a", "b"), ("b", "c"), ("c", "a")],
        )
        .unwrap_err();
        let Error::CycleDetected { path } = err else {
            panic!("expected cycle")
        };
        let ids: Vec<&str> = path.iter().map(|t| t.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c", "a"]);
    }

    #[test]
    fn dangling_endpoint_and_duplicate_id() {
        assert!(matches!(
            graph(&["a"], &[("a", "zz")]),
            Err(Error::DanglingEdgeEndpoint { missing, .. }) if missing.as_str() == "zz"
        ));
        assert!(matches!(
            graph(&["a", "a"], &[]),
            Err(Error::DuplicateTermId(id)) if id.as_str() == "a"
        ));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = graph(&["r", "a"], &[("a", "r"), ("a", "r")]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.theta("a").unwrap(), 2);
    }

    #[test]
    fn chain_and_diamond_ancestors() {
        let chain = graph(&["r", "a", "b"], &[("b", "a"), ("a", "r")]).unwrap();
        assert_eq!(names(chain.ancestors("b").unwrap()), ["a", "b", "r"]);
        assert_eq!(names(chain.ancestors("r").unwrap()), ["r"]);
        assert_eq!(chain.theta("r").unwrap(), 1);
        assert_eq!(chain.theta("b").unwrap(), 3);

        let diamond = graph(
            &["r", "x", "y", "z"],
            &[("x", "r"), ("y", "r"), ("z", "x"), ("z", "y")],
        )
        .unwrap();
        assert_eq!(names(diamond.ancestors("z").unwrap()), ["r", "x", "y", "z"]);
        assert_eq!(diamond.theta("z").unwrap(), 4);
        assert_eq!(diamond.psi("x", "y").unwrap(), 1);
    }

    #[test]
    fn psi_on_chain_with_branch() {
        let g = graph(&["r", "a", "b", "c"], &[("a", "r"), ("b", "a"), ("c", "r")]).unwrap();
        assert_eq!(g.psi("b", "c").unwrap(), 1);
        assert_eq!(g.psi("c", "b").unwrap(), 1);
        assert_eq!(g.psi("b", "b").unwrap(), g.theta("b").unwrap());
    }

    #[test]
    fn disjoint_components_share_nothing() {
        let g = graph(&["r1", "r2", "a", "b"], &[("a", "r1"), ("b", "r2")]).unwrap();
        assert_eq!(g.psi("a", "b").unwrap(), 0);
        assert_eq!(g.roots().len(), 2);
    }

    #[test]
    fn unknown_term() {
        let g = graph(&["r"], &[]).unwrap();
        assert!(matches!(g.theta("nope"), Err(Error::UnknownTerm(id)) if id.as_str() == "nope"));
        assert!(matches!(g.psi("r", "nope"), Err(Error::UnknownTerm(_))));
    }

    #[test]
    fn closures_are_lazy() {
        let g = graph(&["r", "a", "b", "c"], &[("a", "r"), ("b", "a"), ("c", "r")]).unwrap();
        assert_eq!(g.cached_closures(), 0);
        g.theta("b").unwrap();
        assert_eq!(g.cached_closures(), 1);
        g.theta("b").unwrap();
        assert_eq!(g.cached_closures(), 1);
    }

    #[test]
    fn empty_term_id_rejected() {
        assert!(matches!(TermId::new(""), Err(Error::EmptyTermId)));
        assert!(serde_json::from_str::<TermId>("\"\"").is_err());
    }
}
