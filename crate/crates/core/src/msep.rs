//! m-connecting paths, m-separation and Markov blankets.

use crate::error::{Error, Result};
use crate::graph::{Admg, Edge};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColliderStatus {
    Collider,
    NonCollider,
}

/// Status of the non-endpoint `z` between two consecutive path edges, both
/// incident to `z`: a collider iff both edges have an arrowhead at `z`.
pub fn is_collider(prev: Edge, next: Edge, z: usize) -> ColliderStatus {
    debug_assert!(prev.is_incident(z) && next.is_incident(z));
    if prev.has_arrowhead_at(z) && next.has_arrowhead_at(z) {
        ColliderStatus::Collider
    } else {
        ColliderStatus::NonCollider
    }
}

/// A path, kept as its edge sequence since a vertex pair may carry two edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<usize>,
    edges: Vec<Edge>,
}

impl Path {
    /// The single-vertex path.
    pub fn trivial(v: usize) -> Self {
        Path {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    /// Validates that the edges exist in `g`, chain from `start`, and visit
    /// distinct vertices.
    pub fn new(g: &Admg, start: usize, edges: Vec<Edge>) -> Result<Self> {
        if start >= g.n() {
            return Err(Error::VertexOutOfRange { index: start, n: g.n() });
        }
        let mut vertices = vec![start];
        let mut seen = VertexSet::singleton(start);
        for &e in &edges {
            if !g.has_edge(e) {
                return Err(Error::InvalidPath(format!("{e:?} is not an edge of the graph")));
            }
            let cur = *vertices.last().unwrap();
            let next = e
                .other(cur)
                .ok_or_else(|| Error::InvalidPath(format!("{e:?} is not incident to {}", g.label(cur))))?;
            if seen.contains(next) {
                return Err(Error::InvalidPath(format!("vertex {} repeats", g.label(next))));
            }
            seen.insert(next);
            vertices.push(next);
        }
        Ok(Path { vertices, edges })
    }

    /// Builds a path without validation; callers guarantee the invariants.
    pub(crate) fn from_parts(vertices: Vec<usize>, edges: Vec<Edge>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        Path { vertices, edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }
}

/// Every non-collider avoids `Z` and every collider lies in `an(Z)`.
pub fn is_m_connecting(g: &Admg, path: &Path, z: VertexSet) -> bool {
    let an_z = g.ancestors(z);
    path.edges.windows(2).enumerate().all(|(i, w)| {
        let v = path.vertices[i + 1];
        match is_collider(w[0], w[1], v) {
            ColliderStatus::Collider => an_z.contains(v),
            ColliderStatus::NonCollider => !z.contains(v),
        }
    })
}

impl Admg {
    /// `X ⊥ Y | Z` by m-separation.
    ///
    /// Reachability over (vertex, arrived-with-arrowhead) states; a collider
    /// may be passed iff it is in `an(Z)`, a non-collider iff it is not in `Z`.
    pub fn is_m_separated(&self, x: VertexSet, y: VertexSet, z: VertexSet) -> Result<bool> {
        if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
            return Err(Error::Disjointness);
        }
        Ok(self.m_separated_unchecked(x, y, z))
    }

    pub(crate) fn m_separated_unchecked(&self, x: VertexSet, y: VertexSet, z: VertexSet) -> bool {
        if x.is_empty() || y.is_empty() {
            return true;
        }
        let an_z = self.ancestors(z);
        // visited[0]: reached via an edge with a tail at the vertex,
        // visited[1]: reached via an edge with an arrowhead at it.
        let mut visited = [VertexSet::EMPTY; 2];
        let mut stack: Vec<(usize, Option<bool>)> = x.iter().map(|v| (v, None)).collect();

        while let Some((v, arrival)) = stack.pop() {
            if arrival.is_some() && y.contains(v) {
                return false;
            }
            let pass_collider = an_z.contains(v);
            let pass_non_collider = !z.contains(v);
            let mut step = |w: usize, head_at_v: bool, head_at_w: bool, stack: &mut Vec<_>| {
                if let Some(arrived_head) = arrival {
                    let ok = if arrived_head && head_at_v {
                        pass_collider
                    } else {
                        pass_non_collider
                    };
                    if !ok {
                        return;
                    }
                }
                let slot = &mut visited[head_at_w as usize];
                if !slot.contains(w) {
                    slot.insert(w);
                    stack.push((w, Some(head_at_w)));
                }
            };
            for p in self.parents_of(v) {
                step(p, true, false, &mut stack);
            }
            for c in self.children_of(v) {
                step(c, false, true, &mut stack);
            }
            for s in self.spouses_of(v) {
                step(s, true, true, &mut stack);
            }
        }
        true
    }

    /// `mb(x, A) = pa(dis_A(x)) ∪ (dis_A(x) \ {x})` for ancestral `A` and
    /// `x ∈ barren(A)`.
    pub fn markov_blanket(&self, x: usize, a: VertexSet) -> Result<VertexSet> {
        if !self.is_ancestral(a) {
            return Err(Error::NotAncestral(self.fmt_set(a)));
        }
        if !self.barren(a).contains(x) {
            return Err(Error::NotBarren {
                vertex: self.label(x).to_string(),
                set: self.fmt_set(a),
            });
        }
        let d = self.district(a, x);
        Ok(self.parents(d) | d.without(x))
    }

    /// The minimal `B ⊆ T \ S` with `S ⊥ T \ (B ∪ S) | B`.
    ///
    /// Shrinks from `T \ S` in ascending and in descending id order; if the two
    /// disagree the blanket is reported as non-unique.
    pub fn blanket_in_set(&self, s: VertexSet, t: VertexSet) -> Result<VertexSet> {
        if !s.is_subset(t) {
            let v = (s - t).min().unwrap();
            return Err(Error::VertexNotInSet {
                vertex: self.label(v).to_string(),
                set: self.fmt_set(t),
            });
        }
        let candidates: Vec<usize> = (t - s).iter().collect();
        let up = self.shrink_blanket(s, t, candidates.iter().copied());
        let down = self.shrink_blanket(s, t, candidates.iter().rev().copied());
        if up != down {
            return Err(Error::NonUniqueBlanket {
                first: self.fmt_set(up),
                second: self.fmt_set(down),
            });
        }
        Ok(up)
    }

    fn shrink_blanket(&self, s: VertexSet, t: VertexSet, order: impl Iterator<Item = usize> + Clone) -> VertexSet {
        let separates = |b: VertexSet| self.m_separated_unchecked(s, t - (b | s), b);
        let mut b = t - s;
        loop {
            let mut changed = false;
            for v in order.clone() {
                if b.contains(v) && separates(b.without(v)) {
                    b.remove(v);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        debug_assert!(separates(b));
        debug_assert!(b.iter().all(|v| !separates(b.without(v))));
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn collider_patterns() {
        let (x1, x3, x4, x5) = (1, 3, 4, 5);
        assert_eq!(
            is_collider(Edge::Directed { from: x1, to: x3 }, Edge::bidirected(x3, x4), x3),
            ColliderStatus::Collider
        );
        assert_eq!(
            is_collider(Edge::Directed { from: x1, to: x3 }, Edge::Directed { from: x3, to: x5 }, x3),
            ColliderStatus::NonCollider
        );
        // ← z ↔ : the edge 1 -> 3 has its tail at 1
        assert_eq!(
            is_collider(Edge::Directed { from: x1, to: x3 }, Edge::bidirected(x1, x4), x1),
            ColliderStatus::NonCollider
        );
        assert_eq!(
            is_collider(Edge::bidirected(0, 1), Edge::bidirected(1, 2), 1),
            ColliderStatus::Collider
        );
    }

    #[test]
    fn m_connecting_paths_on_chains() {
        let g = fixtures::chains();
        let p = Path::new(&g, 0, vec![Edge::Directed { from: 0, to: 2 }, Edge::bidirected(2, 3)]).unwrap();
        assert_eq!(p.vertices(), [0, 2, 3]);
        assert!(!is_m_connecting(&g, &p, VertexSet::EMPTY));
        assert!(is_m_connecting(&g, &p, VertexSet::singleton(2)));

        let e = Path::new(&g, 2, vec![Edge::bidirected(2, 3)]).unwrap();
        assert!(is_m_connecting(&g, &e, VertexSet::from_iter([0, 1])));
        assert!(is_m_connecting(&g, &Path::trivial(1), VertexSet::EMPTY));
    }

    #[test]
    fn invalid_paths() {
        let g = fixtures::chains();
        assert!(Path::new(&g, 0, vec![Edge::bidirected(0, 1)]).is_err());
        assert!(Path::new(&g, 1, vec![Edge::Directed { from: 0, to: 2 }]).is_err());
        assert!(Path::new(&g, 0, vec![Edge::Directed { from: 0, to: 2 }, Edge::Directed { from: 0, to: 2 }]).is_err());
    }

    #[test]
    fn separation_statements_from_the_examples() {
        let g = fixtures::chains();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert!(g.is_m_separated(s(&["x1"]), s(&["x2", "x4"]), VertexSet::EMPTY).unwrap());
        assert!(g.is_m_separated(s(&["x2"]), s(&["x1", "x3"]), VertexSet::EMPTY).unwrap());
        assert!(!g.is_m_separated(s(&["x1"]), s(&["x4"]), s(&["x3"])).unwrap());
        assert!(g.is_m_separated(VertexSet::EMPTY, s(&["x4"]), VertexSet::EMPTY).unwrap());
        assert_eq!(
            g.is_m_separated(s(&["x1"]), s(&["x1"]), VertexSet::EMPTY),
            Err(Error::Disjointness)
        );

        let g = fixtures::crossed();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert!(g.is_m_separated(s(&["x3"]), s(&["x4"]), s(&["x1", "x2"])).unwrap());
        assert!(g.is_m_separated(s(&["x1"]), s(&["x2"]), VertexSet::EMPTY).unwrap());
    }

    #[test]
    fn markov_blankets() {
        let g = fixtures::chains();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert_eq!(g.markov_blanket(3, g.vertices()).unwrap(), s(&["x1", "x2", "x3"]));
        assert!(matches!(g.markov_blanket(2, s(&["x3"])), Err(Error::NotAncestral(_))));
        assert!(matches!(g.markov_blanket(0, g.vertices()), Err(Error::NotBarren { .. })));

        let iso = Admg::new(2, &[], &[]).unwrap();
        assert_eq!(iso.markov_blanket(0, VertexSet::singleton(0)).unwrap(), VertexSet::EMPTY);

        let g = fixtures::ring();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert_eq!(g.markov_blanket(0, s(&["a", "b", "d"])).unwrap(), s(&["b"]));
    }

    #[test]
    fn blankets_in_sets() {
        let g = fixtures::chains();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert_eq!(g.blanket_in_set(s(&["x3", "x4"]), g.vertices()).unwrap(), s(&["x1", "x2"]));
        assert_eq!(g.blanket_in_set(g.vertices(), g.vertices()).unwrap(), VertexSet::EMPTY);

        let g = fixtures::crossed();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert_eq!(g.blanket_in_set(s(&["x1", "x4"]), s(&["x1", "x2", "x4"])).unwrap(), s(&["x2"]));
    }
}
