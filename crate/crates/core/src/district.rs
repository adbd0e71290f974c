//! Districts: bi-directed connected components relative to a vertex subset.

use crate::graph::Admg;
use crate::vertex_set::VertexSet;

/// The districts of a set `W`, ordered by minimum vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistrictPartition {
    blocks: Vec<VertexSet>,
    block_of: Vec<Option<usize>>,
}

impl DistrictPartition {
    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The block containing `v`, or `None` when `v ∉ W`.
    pub fn block_of(&self, v: usize) -> Option<VertexSet> {
        self.block_of.get(v).copied().flatten().map(|i| self.blocks[i])
    }
}

impl Admg {
    /// `dis_W(x)`; empty when `x ∉ W`.
    pub fn district(&self, w: VertexSet, x: usize) -> VertexSet {
        if !w.contains(x) {
            return VertexSet::EMPTY;
        }
        let mut seen = VertexSet::singleton(x);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = (self.spouses(frontier) & w) - seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub fn districts_of(&self, w: VertexSet) -> DistrictPartition {
        let mut blocks = Vec::new();
        let mut block_of = vec![None; self.n()];
        let mut rest = w;
        while let Some(v) = rest.min() {
            let d = self.district(w, v);
            for u in d {
                block_of[u] = Some(blocks.len());
            }
            blocks.push(d);
            rest -= d;
        }
        DistrictPartition { blocks, block_of }
    }

    /// `dis_W(B)`, the union of `dis_W(x)` over `x ∈ B`.
    pub fn district_of_set(&self, w: VertexSet, b: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for x in b {
            if !out.contains(x) {
                out |= self.district(w, x);
            }
        }
        out
    }

    /// Every district `D` of `W` satisfies `D = dis_{an(D)}(v)` for `v ∈ D`.
    pub fn has_ancestrally_closed_districts(&self, w: VertexSet) -> bool {
        self.districts_of(w).blocks().iter().all(|&d| {
            let v = d.min().unwrap();
            self.district(self.ancestors(d), v) == d
        })
    }
}
