//! Acyclic directed mixed graphs and the basic vertex relations.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// Default cap on `n` for operations that enumerate all vertex subsets.
pub const ENUMERATION_BOUND: usize = 20;

/// An edge as it appears on a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    /// `from -> to`
    Directed { from: usize, to: usize },
    /// `a <-> b`, stored with `a < b`.
    Bidirected(usize, usize),
}

impl Edge {
    pub fn bidirected(a: usize, b: usize) -> Self {
        Edge::Bidirected(a.min(b), a.max(b))
    }

    pub fn endpoints(self) -> (usize, usize) {
        match self {
            Edge::Directed { from, to } => (from, to),
            Edge::Bidirected(a, b) => (a, b),
        }
    }

    pub fn is_incident(self, v: usize) -> bool {
        let (a, b) = self.endpoints();
        a == v || b == v
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(self, v: usize) -> Option<usize> {
        let (a, b) = self.endpoints();
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// Whether the edge carries an arrowhead at endpoint `v`.
    pub fn has_arrowhead_at(self, v: usize) -> bool {
        match self {
            Edge::Directed { to, .. } => to == v,
            Edge::Bidirected(a, b) => a == v || b == v,
        }
    }
}

/// The six admissible edge configurations between an unordered pair `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairState {
    None,
    /// `i -> j`
    Forward,
    /// `i <- j`
    Backward,
    /// `i <-> j`
    Bidirected,
    /// `i -> j` and `i <-> j`
    ForwardBidirected,
    /// `i <- j` and `i <-> j`
    BackwardBidirected,
}

impl PairState {
    pub const ALL: [PairState; 6] = [
        PairState::None,
        PairState::Forward,
        PairState::Backward,
        PairState::Bidirected,
        PairState::ForwardBidirected,
        PairState::BackwardBidirected,
    ];
}

/// An acyclic directed mixed graph. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Admg {
    labels: Vec<String>,
    directed: Vec<(usize, usize)>,
    bidirected: Vec<(usize, usize)>,
    pa: Vec<VertexSet>,
    ch: Vec<VertexSet>,
    sp: Vec<VertexSet>,
    an: Vec<VertexSet>,
    de: Vec<VertexSet>,
    topo: Vec<usize>,
}

impl fmt::Debug for Admg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Admg {{ nodes: {:?}", self.labels)?;
        for &(a, b) in &self.directed {
            write!(f, ", {} -> {}", self.labels[a], self.labels[b])?;
        }
        for &(a, b) in &self.bidirected {
            write!(f, ", {} <-> {}", self.labels[a], self.labels[b])?;
        }
        f.write_str(" }")
    }
}

impl Admg {
    /// Builds a graph on vertices `0..n`, labelled by their ids.
    pub fn new(n: usize, directed: &[(usize, usize)], bidirected: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..n).map(|v| v.to_string()).collect();
        Self::with_labels(labels, directed, bidirected)
    }

    /// Builds a graph whose vertex `i` carries `labels[i]`.
    pub fn with_labels(
        labels: Vec<String>,
        directed: &[(usize, usize)],
        bidirected: &[(usize, usize)],
    ) -> Result<Self> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let check = |v: usize| {
            if v >= n {
                Err(Error::VertexOutOfRange { index: v, n })
            } else {
                Ok(())
            }
        };

        let mut pa = vec![VertexSet::EMPTY; n];
        let mut ch = vec![VertexSet::EMPTY; n];
        let mut sp = vec![VertexSet::EMPTY; n];

        for &(a, b) in directed {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(Error::SelfLoop(labels[a].clone()));
            }
            if pa[b].contains(a) {
                return Err(Error::DuplicateEdge {
                    kind: "directed",
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                });
            }
            if pa[a].contains(b) {
                return Err(Error::OpposingDirected {
                    a: labels[b].clone(),
                    b: labels[a].clone(),
                });
            }
            pa[b].insert(a);
            ch[a].insert(b);
        }
        for &(a, b) in bidirected {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(Error::SelfLoop(labels[a].clone()));
            }
            if sp[a].contains(b) {
                return Err(Error::DuplicateEdge {
                    kind: "bi-directed",
                    a: labels[a.min(b)].clone(),
                    b: labels[a.max(b)].clone(),
                });
            }
            sp[a].insert(b);
            sp[b].insert(a);
        }

        let topo = topological_order(&pa, &ch).map_err(|cycle| {
            Error::Cycle(cycle.into_iter().map(|v| labels[v].clone()).collect())
        })?;

        let mut an = vec![VertexSet::EMPTY; n];
        for &v in &topo {
            let mut s = VertexSet::singleton(v);
            for p in pa[v] {
                s |= an[p];
            }
            an[v] = s;
        }
        let mut de = vec![VertexSet::EMPTY; n];
        for &v in topo.iter().rev() {
            let mut s = VertexSet::singleton(v);
            for c in ch[v] {
                s |= de[c];
            }
            de[v] = s;
        }

        let mut directed: Vec<(usize, usize)> = (0..n).flat_map(|b| pa[b].iter().map(move |a| (a, b))).collect();
        directed.sort_unstable();
        let mut bidirected: Vec<(usize, usize)> =
            (0..n).flat_map(|a| sp[a].iter().filter(move |&b| b > a).map(move |b| (a, b))).collect();
        bidirected.sort_unstable();

        Ok(Admg {
            labels,
            directed,
            bidirected,
            pa,
            ch,
            sp,
            an,
            de,
            topo,
        })
    }

    /// Builds a graph from one [`PairState`] per unordered pair, pairs listed
    /// lexicographically: `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
    pub fn from_pair_states(n: usize, states: &[PairState]) -> Result<Self> {
        assert_eq!(states.len(), n * n.saturating_sub(1) / 2, "one state per pair");
        let mut directed = Vec::new();
        let mut bidirected = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                match states[k] {
                    PairState::None => {}
                    PairState::Forward => directed.push((i, j)),
                    PairState::Backward => directed.push((j, i)),
                    PairState::Bidirected => bidirected.push((i, j)),
                    PairState::ForwardBidirected => {
                        directed.push((i, j));
                        bidirected.push((i, j));
                    }
                    PairState::BackwardBidirected => {
                        directed.push((j, i));
                        bidirected.push((i, j));
                    }
                }
                k += 1;
            }
        }
        Self::new(n, &directed, &bidirected)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Resolves labels to a vertex set.
    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        labels
            .iter()
            .map(|l| {
                self.vertex(l.as_ref())
                    .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))
            })
            .collect()
    }

    /// Renders a set with labels, e.g. `{a,c}`.
    pub fn fmt_set(&self, s: VertexSet) -> String {
        format!("{{{}}}", self.join_labels(s, ","))
    }

    pub(crate) fn join_labels(&self, s: VertexSet, sep: &str) -> String {
        s.iter().map(|v| self.labels[v].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Directed edges `(from, to)`, sorted.
    pub fn directed_edges(&self) -> &[(usize, usize)] {
        &self.directed
    }

    /// Bi-directed edges `(a, b)` with `a < b`, sorted.
    pub fn bidirected_edges(&self) -> &[(usize, usize)] {
        &self.bidirected
    }

    pub fn is_dag(&self) -> bool {
        self.bidirected.is_empty()
    }

    pub fn is_bidirected_graph(&self) -> bool {
        self.directed.is_empty()
    }

    /// Every pair of distinct vertices is joined by at least one edge.
    pub fn is_complete(&self) -> bool {
        (0..self.n()).all(|v| (self.pa[v] | self.ch[v] | self.sp[v]) == self.vertices().without(v))
    }

    pub fn pair_state(&self, i: usize, j: usize) -> PairState {
        let (i, j, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        let fwd = self.pa[j].contains(i);
        let bwd = self.pa[i].contains(j);
        let bi = self.sp[i].contains(j);
        let (fwd, bwd) = if flip { (bwd, fwd) } else { (fwd, bwd) };
        match (fwd, bwd, bi) {
            (false, false, false) => PairState::None,
            (true, _, false) => PairState::Forward,
            (_, true, false) => PairState::Backward,
            (false, false, true) => PairState::Bidirected,
            (true, _, true) => PairState::ForwardBidirected,
            (_, true, true) => PairState::BackwardBidirected,
        }
    }

    /// A topological order of the directed part (parents first).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Edges incident to `v`: in-edges, then out-edges, then bi-directed.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = Edge> + '_ {
        let ins = self.pa[v].iter().map(move |p| Edge::Directed { from: p, to: v });
        let outs = self.ch[v].iter().map(move |c| Edge::Directed { from: v, to: c });
        let bis = self.sp[v].iter().map(move |s| Edge::bidirected(v, s));
        ins.chain(outs).chain(bis)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        match e {
            Edge::Directed { from, to } => to < self.n() && self.pa[to].contains(from),
            Edge::Bidirected(a, b) => a < self.n() && self.sp[a].contains(b),
        }
    }

    #[inline]
    pub fn parents_of(&self, v: usize) -> VertexSet {
        self.pa[v]
    }

    #[inline]
    pub fn children_of(&self, v: usize) -> VertexSet {
        self.ch[v]
    }

    #[inline]
    pub fn spouses_of(&self, v: usize) -> VertexSet {
        self.sp[v]
    }

    #[inline]
    pub fn ancestors_of(&self, v: usize) -> VertexSet {
        self.an[v]
    }

    #[inline]
    pub fn descendants_of(&self, v: usize) -> VertexSet {
        self.de[v]
    }

    /// `pa(S)`; may intersect `S`.
    pub fn parents(&self, s: VertexSet) -> VertexSet {
        union_over(s, &self.pa)
    }

    pub fn children(&self, s: VertexSet) -> VertexSet {
        union_over(s, &self.ch)
    }

    pub fn spouses(&self, s: VertexSet) -> VertexSet {
        union_over(s, &self.sp)
    }

    /// `an(S)`, reflexive.
    pub fn ancestors(&self, s: VertexSet) -> VertexSet {
        union_over(s, &self.an)
    }

    /// `de(S)`, reflexive.
    pub fn descendants(&self, s: VertexSet) -> VertexSet {
        union_over(s, &self.de)
    }

    pub fn is_ancestral(&self, a: VertexSet) -> bool {
        self.ancestors(a) == a
    }

    pub fn ancestral_closure(&self, s: VertexSet) -> VertexSet {
        self.ancestors(s)
    }

    /// `barren(A)`: members of `A` with no proper descendant in `A`.
    pub fn barren(&self, a: VertexSet) -> VertexSet {
        a.iter()
            .filter(|&x| (self.de[x] & a) == VertexSet::singleton(x))
            .collect()
    }

    /// All ancestral sets, ordered by size then mask value. `∅` comes first.
    pub fn enumerate_ancestral_sets(&self) -> Result<Vec<VertexSet>> {
        self.enumerate_ancestral_sets_bounded(ENUMERATION_BOUND)
    }

    pub fn enumerate_ancestral_sets_bounded(&self, bound: usize) -> Result<Vec<VertexSet>> {
        let n = self.n();
        if n > bound {
            return Err(Error::BoundExceeded {
                what: "ancestral set enumeration",
                n,
                bound,
            });
        }
        let mut out: Vec<VertexSet> = self
            .vertices()
            .subsets()
            .filter(|&a| self.is_ancestral(a))
            .collect();
        out.sort_by_key(|s| s.size_order_key());
        Ok(out)
    }

    /// The subgraph on `A`, with vertices renumbered in ascending id order.
    /// The returned map sends new ids to the original ones.
    pub fn induced_subgraph(&self, a: VertexSet) -> (Admg, Vec<usize>) {
        let map: Vec<usize> = a.iter().collect();
        let mut inv = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            inv[v] = i;
        }
        let directed: Vec<(usize, usize)> = self
            .directed
            .iter()
            .filter(|&&(x, y)| a.contains(x) && a.contains(y))
            .map(|&(x, y)| (inv[x], inv[y]))
            .collect();
        let bidirected: Vec<(usize, usize)> = self
            .bidirected
            .iter()
            .filter(|&&(x, y)| a.contains(x) && a.contains(y))
            .map(|&(x, y)| (inv[x], inv[y]))
            .collect();
        let labels = map.iter().map(|&v| self.labels[v].clone()).collect();
        let g = Admg::with_labels(labels, &directed, &bidirected)
            .expect("an induced subgraph of a valid ADMG is valid");
        (g, map)
    }
}

#[inline]
fn union_over(s: VertexSet, rel: &[VertexSet]) -> VertexSet {
    let mut out = VertexSet::EMPTY;
    for v in s {
        out |= rel[v];
    }
    out
}

/// Kahn's algorithm; on failure returns one directed cycle `v0 -> .. -> v0`.
fn topological_order(pa: &[VertexSet], ch: &[VertexSet]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let n = pa.len();
    let mut indeg: Vec<usize> = pa.iter().map(|p| p.len()).collect();
    let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for c in ch[v].iter().rev() {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every vertex left over has a left-over parent; walk parents until one repeats.
    let left: VertexSet = (0..n).filter(|&v| indeg[v] > 0).collect();
    let mut walk = vec![left.min().unwrap()];
    let mut pos = vec![usize::MAX; n];
    pos[walk[0]] = 0;
    loop {
        let v = *walk.last().unwrap();
        let p = (pa[v] & left).min().unwrap();
        if pos[p] != usize::MAX {
            let mut cycle: Vec<usize> = walk[pos[p]..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            return Err(cycle);
        }
        pos[p] = walk.len();
        walk.push(p);
    }
}
