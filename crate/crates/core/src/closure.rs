//! Lazily memoized ancestor sets.
//!
//! Only the handful of terms that are actually queried get a closure. Each
//! closure is a bitset over a compact index that is assigned to graph nodes
//! the first time they appear in *any* computed closure, so bitset width
//! grows with the union of queried closures rather than with the ontology.
//! The compact layout depends on query order; counts derived from it
//! (Θ, Ψ) do not.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

/// Ancestor set of one term (the term itself included).
#[derive(Debug, Clone)]
pub struct AncestorSet {
    bits: Vec<u64>,
    // graph indices, ascending
    members: Vec<u32>,
}

impl AncestorSet {
    pub fn len(&self) -> u32 {
        self.members.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub(crate) fn members(&self) -> &[u32] {
        &self.members
    }

    /// |self ∩ other|. Both sets must come from the same graph.
    pub fn intersection_len(&self, other: &AncestorSet) -> u32 {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }
}

#[derive(Default)]
struct State {
    compact: HashMap<u32, u32>,
    sets: HashMap<u32, Arc<AncestorSet>>,
}

#[derive(Default)]
pub(crate) struct AncestorClosure {
    state: RwLock<State>,
}

impl AncestorClosure {
    pub(crate) fn cached_len(&self) -> usize {
        self.state.read().unwrap().sets.len()
    }

    pub(crate) fn get_or_compute<'g, F>(&self, node: u32, parents: F) -> Arc<AncestorSet>
    where
        F: Fn(u32) -> &'g [u32],
    {
        if let Some(hit) = self.state.read().unwrap().sets.get(&node) {
            return Arc::clone(hit);
        }

        // Traverse outside the lock; concurrent misses on the same node do
        // redundant work but converge on the first inserted set.
        let mut members = reachable(node, parents);
        members.sort_unstable();

        let mut state = self.state.write().unwrap();
        if let Some(hit) = state.sets.get(&node) {
            return Arc::clone(hit);
        }
        let mut positions = Vec::with_capacity(members.len());
        for &m in &members {
            let next = state.compact.len() as u32;
            positions.push(*state.compact.entry(m).or_insert(next));
        }
        let width = positions.iter().max().map_or(0, |&p| p as usize / 64 + 1);
        let mut bits = vec![0u64; width];
        for p in positions {
            bits[p as usize / 64] |= 1 << (p % 64);
        }
        let set = Arc::new(AncestorSet { bits, members });
        state.sets.insert(node, Arc::clone(&set));
        set
    }
}

fn reachable<'g, F>(start: u32, parents: F) -> Vec<u32>
where
    F: Fn(u32) -> &'g [u32],
{
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut out = vec![start];
    let mut frontier = vec![start];
    while let Some(n) = frontier.pop() {
        for &p in parents(n) {
            if seen.insert(p) {
                out.push(p);
                frontier.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // 0 <- 1 <- 2, 0 <- 3
    fn parents(n: u32) -> &'static [u32] {
        match n {
            1 => &[0],
            2 => &[1],
            3 => &[0],
            _ => &[],
        }
    }

    #[test]
    fn intersection_is_query_order_independent() {
        let forward = AncestorClosure::default();
        let a = forward.get_or_compute(2, parents);
        let b = forward.get_or_compute(3, parents);
        let backward = AncestorClosure::default();
        let d = backward.get_or_compute(3, parents);
        let c = backward.get_or_compute(2, parents);
        assert_eq!(a.intersection_len(&b), 1);
        assert_eq!(c.intersection_len(&d), 1);
        assert_eq!(a.members(), c.members());
    }

    #[test]
    fn shorter_bitsets_compare_against_longer() {
        let cl = AncestorClosure::default();
        let root = cl.get_or_compute(0, parents);
        let deep = cl.get_or_compute(2, parents);
        assert_eq!(root.intersection_len(&deep), 1);
        assert_eq!(deep.intersection_len(&root), 1);
        assert_eq!(deep.intersection_len(&deep), 3);
    }
}
