//! Test-only reference implementations. Nothing here touches the closure
//! cache or bitsets of the library; ancestor sets are recomputed from the
//! raw edge list on every call.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use semfeat_core::{OntologyGraph, TermId, TermSpec};

/// Raw DAG: node `i` is named `n{i}`, edges are (child, parent) indices.
#[derive(Clone, Debug)]
pub struct RawDag {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn name(i: usize) -> String {
    format!("n{i}")
}

pub fn tid(s: &str) -> TermId {
    TermId::new(s).unwrap()
}

impl RawDag {
    /// Random DAG whose parents always have a smaller index in a hidden
    /// topological order; the order is then shuffled into the node names.
    pub fn random<R: Rng>(rng: &mut R, max_nodes: usize) -> Self {
        let n = rng.gen_range(1..=max_nodes);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut edges = Vec::new();
        for pos in 1..n {
            let k = rng.gen_range(0..=3.min(pos));
            for _ in 0..k {
                let parent_pos = rng.gen_range(0..pos);
                edges.push((perm[pos], perm[parent_pos]));
            }
        }
        RawDag { n, edges }
    }

    pub fn build(&self) -> OntologyGraph {
        // insert terms in reverse name order so insertion order differs from naming
        let terms = (0..self.n)
            .rev()
            .map(|i| TermSpec::bare(tid(&name(i))))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|&(c, p)| (tid(&name(c)), tid(&name(p))))
            .collect();
        OntologyGraph::build(terms, edges).expect("generated DAG is valid")
    }

    /// A(t) by recursive DFS over every path.
    pub fn dfs_ancestors(&self, t: usize) -> BTreeSet<usize> {
        fn walk(dag: &RawDag, node: usize, out: &mut BTreeSet<usize>) {
            out.insert(node);
            for &(c, p) in &dag.edges {
                if c == node {
                    walk(dag, p, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, t, &mut out);
        out
    }

    pub fn theta(&self, t: usize) -> usize {
        self.dfs_ancestors(t).len()
    }

    pub fn psi(&self, a: usize, b: usize) -> usize {
        self.dfs_ancestors(a)
            .intersection(&self.dfs_ancestors(b))
            .count()
    }
}

/// The directed ratio model written out directly from the ancestor sets.
pub fn ratio_from_sets(a1: &BTreeSet<usize>, a2: &BTreeSet<usize>, alpha: f64, beta: f64) -> f64 {
    let theta1 = a1.len() as f64;
    let shared = a1.intersection(a2).count() as f64;
    let phi12 = theta1 - shared;
    let phi21 = a2.len() as f64 - shared;
    theta1 / (alpha * phi12 + beta * phi21 + theta1)
}

/// Toy hierarchy r <- a <- b, r <- c as a raw DAG (r=0, a=1, b=2, c=3).
pub fn toy_raw() -> RawDag {
    RawDag {
        n: 4,
        edges: vec![(1, 0), (2, 1), (3, 0)],
    }
}

pub fn toy_graph() -> OntologyGraph {
    let terms = ["r", "a", "b", "c"]
        .iter()
        .map(|s| TermSpec::bare(tid(s)))
        .collect();
    let edges = vec![
        (tid("a"), tid("r")),
        (tid("b"), tid("a")),
        (tid("c"), tid("r")),
    ];
    OntologyGraph::build(terms, edges).unwrap()
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut out = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                out[k] = avg;
            }
            i = j + 1;
        }
        out
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
