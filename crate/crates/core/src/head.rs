//! Heads, tails and the head set `H(G)`.

use crate::error::{Error, Result};
use crate::graph::{Admg, ENUMERATION_BOUND};
use crate::vertex_set::VertexSet;

/// A head together with its tail.
///
/// `tail = dis_tail ∪ pa_tail`; the two parts may overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeadTail {
    pub head: VertexSet,
    /// `dis_{an(H)}(H) \ H`
    pub dis_tail: VertexSet,
    /// `pa(dis_{an(H)}(H))`
    pub pa_tail: VertexSet,
    pub tail: VertexSet,
}

impl Admg {
    /// `H = barren(an(H))` and `H` is path-connected in `(G_{an(H)})↔`.
    pub fn is_head(&self, h: VertexSet) -> Result<bool> {
        if h.is_empty() {
            return Err(Error::EmptyHead);
        }
        Ok(self.is_head_nonempty(h))
    }

    fn is_head_nonempty(&self, h: VertexSet) -> bool {
        let an = self.ancestors(h);
        if self.barren(an) != h {
            return false;
        }
        // path-connected: every member has the same district in an(H)
        let d = self.district(an, h.min().unwrap());
        h.is_subset(d)
    }

    pub fn tail(&self, h: VertexSet) -> Result<HeadTail> {
        if !self.is_head(h)? {
            return Err(Error::NotAHead(self.fmt_set(h)));
        }
        Ok(self.head_tail_unchecked(h))
    }

    pub(crate) fn head_tail_unchecked(&self, h: VertexSet) -> HeadTail {
        let an = self.ancestors(h);
        let d = self.district_of_set(an, h);
        let dis_tail = d - h;
        let pa_tail = self.parents(d);
        HeadTail {
            head: h,
            dis_tail,
            pa_tail,
            tail: dis_tail | pa_tail,
        }
    }

    /// Every head with its tail, ordered by head size then mask value.
    ///
    /// Heads are exactly the sets `barren(A)` for nonempty ancestral `A` whose
    /// members share a district in `A`, and `A = an(barren(A))`.
    pub fn all_heads(&self) -> Result<Vec<HeadTail>> {
        self.all_heads_bounded(ENUMERATION_BOUND)
    }

    pub fn all_heads_bounded(&self, bound: usize) -> Result<Vec<HeadTail>> {
        let n = self.n();
        if n > bound {
            return Err(Error::BoundExceeded {
                what: "head enumeration",
                n,
                bound,
            });
        }
        let mut heads: Vec<HeadTail> = self
            .enumerate_ancestral_sets_bounded(bound)?
            .into_iter()
            .filter(|a| !a.is_empty())
            .filter_map(|a| {
                let h = self.barren(a);
                let d = self.district(a, h.min().unwrap());
                h.is_subset(d).then(|| self.head_tail_unchecked(h))
            })
            .collect();
        heads.sort_by_key(|ht| ht.head.size_order_key());
        heads.dedup_by_key(|ht| ht.head);
        Ok(heads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn head_predicate() {
        let g = fixtures::crossed();
        assert!(g.is_head(g.set_of(&["x1", "x4"]).unwrap()).unwrap());
        assert!(g.is_head(g.set_of(&["x2", "x3"]).unwrap()).unwrap());
        assert!(!g.is_head(g.set_of(&["x3", "x4"]).unwrap()).unwrap());
        for v in 0..4 {
            assert!(g.is_head(VertexSet::singleton(v)).unwrap());
        }
        let g = fixtures::chains();
        assert!(!g.is_head(g.set_of(&["x1", "x3"]).unwrap()).unwrap());
        assert_eq!(g.is_head(VertexSet::EMPTY), Err(Error::EmptyHead));
    }

    #[test]
    fn tails() {
        let g = fixtures::chains();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        let ht = g.tail(s(&["x3", "x4"])).unwrap();
        assert_eq!(ht.tail, s(&["x1", "x2"]));
        assert_eq!(ht.dis_tail, VertexSet::EMPTY);
        assert_eq!(ht.pa_tail, s(&["x1", "x2"]));
        assert!(matches!(g.tail(s(&["x1", "x3"])), Err(Error::NotAHead(_))));

        let g = fixtures::ring();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert_eq!(g.tail(s(&["a", "c"])).unwrap().tail, s(&["b", "d", "e"]));
        let cd = g.tail(s(&["c", "d"])).unwrap();
        assert_eq!(cd.tail, s(&["e"]));
        assert_eq!(cd.dis_tail, s(&["e"]));
        assert_eq!(cd.pa_tail, s(&["e"]));
    }

    #[test]
    fn heads_of_chains() {
        let g = fixtures::chains();
        let got: Vec<(String, String)> = g
            .all_heads()
            .unwrap()
            .iter()
            .map(|ht| (g.fmt_set(ht.head), g.fmt_set(ht.tail)))
            .collect();
        let want = [
            ("{x1}", "{}"),
            ("{x2}", "{}"),
            ("{x3}", "{x1}"),
            ("{x4}", "{x2}"),
            ("{x3,x4}", "{x1,x2}"),
        ];
        assert_eq!(got.len(), want.len());
        for ((h, t), (wh, wt)) in got.iter().zip(want) {
            assert_eq!((h.as_str(), t.as_str()), (wh, wt));
        }
    }

    #[test]
    fn heads_of_special_graphs() {
        let dag = Admg::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &[]).unwrap();
        let heads = dag.all_heads().unwrap();
        assert_eq!(heads.len(), 4);
        for ht in heads {
            let v = ht.head.min().unwrap();
            assert_eq!(ht.head.len(), 1);
            assert_eq!(ht.tail, dag.parents_of(v));
        }

        // path 0 <-> 1 <-> 2: connected subsets are the 3 singletons, {0,1}, {1,2}, {0,1,2}
        let bi = Admg::new(3, &[], &[(0, 1), (1, 2)]).unwrap();
        let heads: Vec<u64> = bi.all_heads().unwrap().iter().map(|h| h.head.bits()).collect();
        assert_eq!(heads, [0b001, 0b010, 0b100, 0b011, 0b110, 0b111]);
    }
}
