//! Factorizations `p(X_A) = Π_{H ∈ [A]} p(X_H | X_tail(H))` of ancestral
//! margins, and their numerical checks against joint tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Admg;
use crate::oracle::ci_holds;
use crate::table::{JointTable, Marginals};
use crate::vertex_set::VertexSet;

/// Default absolute tolerance on probabilities.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub head: VertexSet,
    pub tail: VertexSet,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    margin: VertexSet,
    terms: Vec<Term>,
}

/// An assignment at which the product of terms misses the margin.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationViolation {
    pub margin: VertexSet,
    /// Full-width assignment; only the bits in `margin` are meaningful.
    pub assignment: u64,
    pub lhs: f64,
    pub rhs: f64,
}

impl Factorization {
    /// A factorization with arbitrary terms; used to state alternatives to the
    /// graph's own factorization.
    pub fn from_terms(margin: VertexSet, terms: Vec<Term>) -> Self {
        Factorization { margin, terms }
    }

    pub fn margin(&self) -> VertexSet {
        self.margin
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `p(a,c|b,d,e) p(b,e|d) p(d)`
    pub fn render(&self, g: &Admg) -> String {
        self.terms
            .iter()
            .map(|t| render_term(g, t.head, t.tail))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `p(a,b,c,d,e) = p(a,c|b,d,e) p(b,e|d) p(d)`
    pub fn render_equation(&self, g: &Admg) -> String {
        format!("{} = {}", render_term(g, self.margin, VertexSet::EMPTY), self.render(g))
    }

    pub fn to_json(&self, g: &Admg) -> FactorizationJson {
        let labels = |s: VertexSet| s.iter().map(|v| g.label(v).to_string()).collect();
        FactorizationJson {
            margin: labels(self.margin),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    head: labels(t.head),
                    tail: labels(t.tail),
                    depth: t.depth,
                })
                .collect(),
        }
    }

    /// First assignment (in index order) where `|p(x_A) - Π terms| > tol`.
    ///
    /// A term whose conditioning event has probability `<= tol` leaves the
    /// identity vacuous at that assignment, provided the margin is also `<= tol`.
    pub fn find_violation(&self, table: &JointTable, tol: f64) -> Option<FactorizationViolation> {
        let mut m = Marginals::new(table);
        for packed in 0..1u64 << self.margin.len() {
            let x = self.margin.expand(packed);
            let lhs = m.prob(self.margin, x);
            let mut rhs = 1.0;
            let mut vacuous = false;
            for t in &self.terms {
                let denom = m.prob(t.tail, x);
                if denom <= tol {
                    vacuous = true;
                    break;
                }
                rhs *= m.prob(t.head | t.tail, x) / denom;
            }
            let ok = if vacuous { lhs <= tol } else { (lhs - rhs).abs() <= tol };
            if !ok {
                return Some(FactorizationViolation {
                    margin: self.margin,
                    assignment: x,
                    lhs,
                    rhs: if vacuous { 0.0 } else { rhs },
                });
            }
        }
        None
    }
}

pub(crate) fn render_term(g: &Admg, head: VertexSet, tail: VertexSet) -> String {
    if tail.is_empty() {
        format!("p({})", g.join_labels(head, ","))
    } else {
        format!("p({}|{})", g.join_labels(head, ","), g.join_labels(tail, ","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub margin: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub head: Vec<String>,
    pub tail: Vec<String>,
    pub depth: usize,
}

impl Admg {
    /// The factorization of the ancestral margin `A`, terms ordered by depth
    /// then minimum vertex id.
    pub fn factorize(&self, a: VertexSet) -> Result<Factorization> {
        if a.is_empty() || !self.is_ancestral(a) {
            return Err(Error::NotAncestral(self.fmt_set(a)));
        }
        let terms = self
            .decompose(a)
            .blocks()
            .iter()
            .map(|b| Term {
                head: b.head,
                tail: self.head_tail_unchecked(b.head).tail,
                depth: b.depth,
            })
            .collect();
        Ok(Factorization { margin: a, terms })
    }

    /// One factorization per nonempty ancestral set, in ancestral-set order.
    pub fn factorize_all(&self) -> Result<Vec<Factorization>> {
        self.enumerate_ancestral_sets()?
            .into_iter()
            .filter(|a| !a.is_empty())
            .map(|a| self.factorize(a))
            .collect()
    }
}

pub fn check_factorization(table: &JointTable, g: &Admg, a: VertexSet, tol: f64) -> Result<bool> {
    Ok(find_factorization_violation(table, g, a, tol)?.is_none())
}

pub fn find_factorization_violation(
    table: &JointTable,
    g: &Admg,
    a: VertexSet,
    tol: f64,
) -> Result<Option<FactorizationViolation>> {
    check_dimension(table, g)?;
    Ok(g.factorize(a)?.find_violation(table, tol))
}

pub(crate) fn check_dimension(table: &JointTable, g: &Admg) -> Result<()> {
    if table.n() != g.n() {
        return Err(Error::DimensionMismatch {
            table: table.n(),
            graph: g.n(),
        });
    }
    Ok(())
}

/// For every `x` and ancestral `A` with `x ∈ A ⊆ pre(x)`:
/// `{x} ⊥ A \ (mb(x, A) ∪ {x}) | mb(x, A)` in `table`.
pub fn check_ordered_local_markov(table: &JointTable, g: &Admg, order: &[usize], tol: f64) -> Result<bool> {
    check_dimension(table, g)?;
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InconsistentOrder("not a permutation of the vertices".into()));
        }
        pos[v] = i;
    }
    if order.len() != n {
        return Err(Error::InconsistentOrder("not a permutation of the vertices".into()));
    }
    for &(a, b) in g.directed_edges() {
        if pos[a] > pos[b] {
            return Err(Error::InconsistentOrder(format!(
                "{} precedes its ancestor {}",
                g.label(b),
                g.label(a)
            )));
        }
    }

    let mut pre = VertexSet::EMPTY;
    for &x in order {
        pre.insert(x);
        for rest in pre.without(x).subsets() {
            let a = rest.with(x);
            if !g.is_ancestral(a) {
                continue;
            }
            let mb = g.markov_blanket(x, a)?;
            let others = a - mb.with(x);
            if !others.is_empty() && !ci_holds(table, VertexSet::singleton(x), others, mb, tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
