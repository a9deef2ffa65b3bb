//! Helpers shared by the command-line test targets: running the binary,
//! locating fixtures, and brute-force oracles that never touch the library's
//! closure code.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::Rng;
use semfeat_core::{OntologyGraph, TermId, TermSpec};

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

pub fn run<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semfeat"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Data rows of a CSV artifact, with `#` metadata lines and the header removed.
pub fn csv_body(text: &str) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| r.expect("valid csv").iter().map(str::to_string).collect())
        .collect()
}

/// `# key: value` metadata lines of a CSV artifact.
pub fn csv_metadata(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Plain edge list over nodes `0..n`; node names are `v{i}`.
#[derive(Clone, Debug)]
pub struct Dag {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Dag {
    /// Random DAG with a hidden topological order and 0–3 parents per node.
    pub fn random<R: Rng>(rng: &mut R, max_nodes: usize) -> Self {
        let n = rng.gen_range(1..=max_nodes);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut edges = Vec::new();
        for pos in 1..n {
            for _ in 0..rng.gen_range(0..=pos.min(3)) {
                edges.push((order[pos], order[rng.gen_range(0..pos)]));
            }
        }
        Dag { n, edges }
    }

    /// Like [`Dag::random`], plus one extra node (the last) that every
    /// parentless node hangs off.
    pub fn rooted<R: Rng>(rng: &mut R, max_nodes: usize) -> Self {
        let mut dag = Dag::random(rng, max_nodes);
        let has_parent: BTreeSet<usize> = dag.edges.iter().map(|&(c, _)| c).collect();
        let root = dag.n;
        for v in 0..dag.n {
            if !has_parent.contains(&v) {
                dag.edges.push((v, root));
            }
        }
        dag.n += 1;
        dag
    }

    pub fn name(i: usize) -> String {
        format!("v{i}")
    }

    /// Edge-list text; only meaningful for DAGs without isolated nodes.
    pub fn edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|&(c, p)| format!("{}\t{}\n", Dag::name(c), Dag::name(p)))
            .collect()
    }

    pub fn build(&self) -> OntologyGraph {
        let terms = (0..self.n)
            .map(|i| TermSpec::bare(TermId::new(Dag::name(i)).unwrap()))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|&(c, p)| {
                (
                    TermId::new(Dag::name(c)).unwrap(),
                    TermId::new(Dag::name(p)).unwrap(),
                )
            })
            .collect();
        OntologyGraph::build(terms, edges).expect("generated DAG is valid")
    }

    /// Reflexive ancestor set by recursive DFS over the raw edge list.
    pub fn ancestors(&self, t: usize) -> BTreeSet<usize> {
        fn walk(dag: &Dag, v: usize, seen: &mut BTreeSet<usize>) {
            if seen.insert(v) {
                for &(c, p) in &dag.edges {
                    if c == v {
                        walk(dag, p, seen);
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        walk(self, t, &mut seen);
        seen
    }
}

/// Directed ratio-model similarity evaluated straight from two ancestor sets.
pub fn ratio<T: Ord>(a1: &BTreeSet<T>, a2: &BTreeSet<T>, alpha: f64, beta: f64) -> f64 {
    let theta1 = a1.len() as f64;
    let only1 = a1.difference(a2).count() as f64;
    let only2 = a2.difference(a1).count() as f64;
    theta1 / (alpha * only1 + beta * only2 + theta1)
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
            for &k in &idx[i..=j] {
                out[k] = (i + j) as f64 / 2.0 + 1.0;
            }
            i = j + 1;
        }
        out
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
