//! The recursive decomposition `[W]_G`.
//!
//! `Φ(W)` takes, for each district `D` of `W`, the head `barren(an(D))`; `ψ(W)`
//! removes those heads from `W`. Iterating until `W` is exhausted yields the
//! partition `[W]_G`, each head tagged with the round (depth) it was peeled at.
//!
//! [`Admg::expansion_partition`] is the variant used by the binary
//! reconstruction. It only differs on non-ancestral sets.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::graph::Admg;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub head: VertexSet,
    pub depth: usize,
}

/// `[W]_G`, blocks ordered by depth then minimum vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    source: VertexSet,
    blocks: Vec<Block>,
}

impl Decomposition {
    pub fn source(&self) -> VertexSet {
        self.source
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn heads(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.blocks.iter().map(|b| b.head)
    }

    pub fn block_of(&self, v: usize) -> Option<Block> {
        self.blocks.iter().copied().find(|b| b.head.contains(v))
    }

    /// `dep_W(v)`.
    pub fn depth_of(&self, v: usize) -> Option<usize> {
        self.block_of(v).map(|b| b.depth)
    }

    /// Number of Φ rounds, i.e. one more than the largest depth.
    pub fn rounds(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.depth + 1)
    }

    /// Whether `dep(b) < dep(c)` implies `b` before `c` for members of the source.
    pub fn is_consistent_with(&self, order: &[usize]) -> bool {
        let mut max_depth_seen = 0;
        for &v in order {
            if let Some(d) = self.depth_of(v) {
                if d < max_depth_seen {
                    return false;
                }
                max_depth_seen = d;
            }
        }
        true
    }
}

impl Admg {
    /// `Φ(W)`: one head per district of `W`, in district order.
    pub fn phi(&self, w: VertexSet) -> Vec<VertexSet> {
        self.districts_of(w)
            .blocks()
            .iter()
            .map(|&d| self.barren(self.ancestors(d)))
            .filter(|h| !h.is_empty())
            .collect()
    }

    /// `ψ(W) = W \ ∪Φ(W)`.
    pub fn psi(&self, w: VertexSet) -> VertexSet {
        self.phi(w).into_iter().fold(w, |acc, h| acc - h)
    }

    /// `[W]_G` for any `W ⊆ V`; `W` need not be ancestral.
    pub fn decompose(&self, w: VertexSet) -> Decomposition {
        self.peel(w, Self::phi)
    }

    /// Like [`Φ`](Self::phi), except that districts of `W` are merged while
    /// their union stays bi-directed connected inside its own ancestral
    /// closure. Each merged block `D` contributes `barren(an(D))`, which is
    /// always a head of the graph.
    ///
    /// For ancestral `W` this is exactly `Φ(W)`.
    pub fn expansion_phi(&self, w: VertexSet) -> Vec<VertexSet> {
        let mut rest = w;
        let mut out = Vec::new();
        while let Some(x) = rest.min() {
            // shrink to the largest block around x that is connected within an(block)
            let mut block = rest;
            loop {
                let next = self.district(self.ancestors(block), x) & block;
                if next == block {
                    break;
                }
                block = next;
            }
            rest -= block;
            out.push(self.barren(self.ancestors(block)));
        }
        out
    }

    /// The partition used by inclusion–exclusion reconstruction: peels
    /// [`expansion_phi`](Self::expansion_phi) heads the way
    /// [`decompose`](Self::decompose) peels `Φ` heads.
    ///
    /// `decompose` splits some non-ancestral sets too finely. In
    /// `2 -> 1, 0 <-> 2, 1 <-> 2` it gives `[{0,1}] = {{0},{1}}`, but the only
    /// product of parameters that makes the reconstruction exact is
    /// `q_{0,1}`.
    pub fn expansion_partition(&self, c: VertexSet) -> Decomposition {
        self.peel(c, Self::expansion_phi)
    }

    fn peel(&self, w: VertexSet, phi: impl Fn(&Self, VertexSet) -> Vec<VertexSet>) -> Decomposition {
        let mut blocks = Vec::new();
        let mut rest = w;
        let mut depth = 0;
        while !rest.is_empty() {
            let heads = phi(self, rest);
            debug_assert!(!heads.is_empty());
            for h in heads {
                rest -= h;
                blocks.push(Block { head: h, depth });
            }
            depth += 1;
        }
        Decomposition { source: w, blocks }
    }

    /// `head(x; A)` with `dep_A(x)`.
    pub fn head_of(&self, a: VertexSet, x: usize) -> Result<(VertexSet, usize)> {
        if !a.contains(x) {
            return Err(Error::VertexNotInSet {
                vertex: self.label(x).to_string(),
                set: self.fmt_set(a),
            });
        }
        let b = self.decompose(a).block_of(x).expect("[A] partitions A");
        Ok((b.head, b.depth))
    }

    /// A total order on `A ∪ {x}` consistent with the depth orderings of both
    /// `A` and `A ∪ {x}`; ties broken by ascending id.
    pub fn depth_consistent_order(&self, a: VertexSet, x: usize) -> Result<Vec<usize>> {
        if a.contains(x) {
            return Err(Error::VertexAlreadyInSet(self.label(x).to_string()));
        }
        for s in [a, a.with(x)] {
            if !self.is_ancestral(s) {
                return Err(Error::NotAncestral(self.fmt_set(s)));
            }
        }
        consistent_order(a.with(x), &[self.decompose(a), self.decompose(a.with(x))])
            .ok_or(Error::NoConsistentOrder)
    }
}

/// A total order on `universe` consistent with every decomposition's depth
/// ordering, preferring smaller ids; `None` if the constraints are cyclic.
pub fn consistent_order(universe: VertexSet, decompositions: &[Decomposition]) -> Option<Vec<usize>> {
    let n = universe.iter().next_back().map_or(0, |v| v + 1);
    let mut succ = vec![VertexSet::EMPTY; n];
    for d in decompositions {
        for b in d.blocks() {
            for c in d.blocks() {
                if b.depth < c.depth {
                    for u in b.head & universe {
                        succ[u] |= c.head & universe;
                    }
                }
            }
        }
    }
    let mut indeg = vec![0usize; n];
    for u in universe {
        for v in succ[u] {
            indeg[v] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = universe.iter().filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(universe.len());
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for v in succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    (order.len() == universe.len()).then_some(order)
}
