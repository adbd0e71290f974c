//! Parametrization of binary distributions by head probabilities
//! `q_H(t) = P(X_H = 0 | X_tail(H) = t)`, and reconstruction of the joint by
//! inclusion–exclusion:
//!
//! `p(α) = Σ_{C ⊇ α⁻¹(0)} (-1)^{|C \ α⁻¹(0)|} Π_{H ∈ [C]} q_H(α(tail(H)))`
//!
//! For ancestral `C` the partition is `[C]`. For the other sets it is
//! [`Admg::expansion_partition`]. Using `[C]` there as well loses exactness on
//! graphs such as `2 -> 1, 0 <-> 2, 1 <-> 2`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{DegenerateEntry, Error, Result};
use crate::factorization::check_dimension;
use crate::graph::Admg;
use crate::table::{format_bits, parse_bits, JointTable, Marginals};
use crate::vertex_set::VertexSet;

/// Largest graph the inclusion–exclusion reconstruction accepts (it touches
/// `3^n` terms).
pub const MOEBIUS_BOUND: usize = 16;

/// Conditioning events at or below this mass are treated as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// `q_H(t)` for every tail assignment `t` of one head.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBlock {
    pub head: VertexSet,
    pub tail: VertexSet,
    /// Indexed by `tail.compress(assignment)`.
    pub values: Vec<f64>,
}

impl ParamBlock {
    /// `q_H` evaluated at the tail values of a full-width assignment.
    #[inline]
    pub fn at(&self, assignment: u64) -> f64 {
        self.values[self.tail.compress(assignment) as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryParametrization {
    blocks: Vec<ParamBlock>,
}

impl BinaryParametrization {
    /// One block per head of `g` (in `all_heads` order), values from `f(head, tail, packed_tail)`.
    pub fn from_fn(g: &Admg, mut f: impl FnMut(VertexSet, VertexSet, u64) -> f64) -> Result<Self> {
        let blocks = g
            .all_heads()?
            .into_iter()
            .map(|ht| ParamBlock {
                head: ht.head,
                tail: ht.tail,
                values: (0..1u64 << ht.tail.len()).map(|t| f(ht.head, ht.tail, t)).collect(),
            })
            .collect();
        Ok(BinaryParametrization { blocks })
    }

    /// Arbitrary blocks, e.g. a deliberately altered head/tail structure.
    pub fn from_blocks(blocks: Vec<ParamBlock>) -> Self {
        BinaryParametrization { blocks }
    }

    /// The point of independent fair coins: `q_H(t) = 2^{-|H|}`.
    pub fn independence(g: &Admg) -> Result<Self> {
        Self::from_fn(g, |h, _, _| 0.5f64.powi(h.len() as i32))
    }

    pub fn blocks(&self) -> &[ParamBlock] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [ParamBlock] {
        &mut self.blocks
    }

    pub fn block(&self, head: VertexSet) -> Option<&ParamBlock> {
        self.blocks.iter().find(|b| b.head == head)
    }

    pub fn block_mut(&mut self, head: VertexSet) -> Option<&mut ParamBlock> {
        self.blocks.iter_mut().find(|b| b.head == head)
    }

    /// Number of stored reals.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.values.len()).sum()
    }

    /// Parameter-file JSON: head labels (sorted, comma-joined) to a table
    /// keyed by tail bit-strings over the sorted tail labels.
    pub fn to_json(&self, g: &Admg) -> String {
        let mut out: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        for b in &self.blocks {
            let tail_order = sorted_by_label(g, b.tail);
            let mut table = BTreeMap::new();
            for (packed, &v) in b.values.iter().enumerate() {
                let full = b.tail.expand(packed as u64);
                let key: String = tail_order.iter().map(|&u| if full >> u & 1 == 1 { '1' } else { '0' }).collect();
                table.insert(key, v);
            }
            out.insert(head_key(g, b.head), table);
        }
        serde_json::to_string_pretty(&out).expect("parameter JSON serializes")
    }

    /// Reads a parameter file; every head of `g` and every tail assignment
    /// must be present.
    pub fn from_json(g: &Admg, text: &str) -> Result<Self> {
        let raw: BTreeMap<String, BTreeMap<String, f64>> = serde_json::from_str(text)?;
        let mut by_head: HashMap<VertexSet, &BTreeMap<String, f64>> = HashMap::new();
        for (key, table) in &raw {
            let labels: Vec<&str> = if key.is_empty() { Vec::new() } else { key.split(',').collect() };
            let h = g.set_of(&labels)?;
            if h.is_empty() || !g.is_head(h)? {
                return Err(Error::NotAHead(key.clone()));
            }
            by_head.insert(h, table);
        }
        let mut blocks = Vec::new();
        for ht in g.all_heads()? {
            let table = by_head
                .get(&ht.head)
                .ok_or_else(|| Error::IncompleteParams(format!("missing head {}", head_key(g, ht.head))))?;
            let tail_order = sorted_by_label(g, ht.tail);
            let mut values = vec![f64::NAN; 1 << ht.tail.len()];
            for (bits, &v) in table.iter() {
                let packed_sorted = parse_bits(bits)
                    .filter(|_| bits.len() == tail_order.len())
                    .ok_or_else(|| {
                        Error::Json(format!("head {}: bad tail assignment {bits:?}", head_key(g, ht.head)))
                    })?;
                let full = tail_order
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (k, &u)| acc | (packed_sorted >> k & 1) << u);
                values[ht.tail.compress(full) as usize] = v;
            }
            if let Some(missing) = values.iter().position(|v| v.is_nan()) {
                let full = ht.tail.expand(missing as u64);
                let key: String = tail_order.iter().map(|&u| if full >> u & 1 == 1 { '1' } else { '0' }).collect();
                return Err(Error::IncompleteParams(format!(
                    "head {}: missing tail assignment {key:?}",
                    head_key(g, ht.head)
                )));
            }
            blocks.push(ParamBlock {
                head: ht.head,
                tail: ht.tail,
                values,
            });
        }
        Ok(BinaryParametrization { blocks })
    }
}

fn sorted_by_label(g: &Admg, s: VertexSet) -> Vec<usize> {
    let mut v: Vec<usize> = s.iter().collect();
    v.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    v
}

fn head_key(g: &Admg, h: VertexSet) -> String {
    sorted_by_label(g, h).iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(",")
}

/// `Σ_{H ∈ H(G)} 2^{|tail(H)|}`.
pub fn param_dimension(g: &Admg) -> Result<usize> {
    Ok(g.all_heads()?.iter().map(|ht| 1usize << ht.tail.len()).sum())
}

/// Extracts `q` from a table, failing if any conditioning event is degenerate.
pub fn params_from_joint(g: &Admg, table: &JointTable) -> Result<BinaryParametrization> {
    let (q, degenerate) = params_from_joint_lenient(g, table)?;
    if degenerate.is_empty() {
        Ok(q)
    } else {
        Err(Error::DegenerateConditioning(degenerate))
    }
}

/// Extracts `q`, setting entries with a degenerate conditioning event to 0
/// and listing them.
pub fn params_from_joint_lenient(
    g: &Admg,
    table: &JointTable,
) -> Result<(BinaryParametrization, Vec<DegenerateEntry>)> {
    check_dimension(table, g)?;
    let mut m = Marginals::new(table);
    let mut degenerate = Vec::new();
    let q = BinaryParametrization::from_fn(g, |head, tail, packed| {
        let x = tail.expand(packed);
        let denom = m.prob(tail, x);
        if denom <= DEGENERATE_TOL {
            degenerate.push(DegenerateEntry {
                head,
                tail,
                tail_bits: packed,
            });
            0.0
        } else {
            m.prob(head | tail, x) / denom
        }
    })?;
    Ok((q, degenerate))
}

/// One factor `q_H(t)` of a Möbius term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoebiusFactor {
    pub head: VertexSet,
    pub tail: VertexSet,
    /// Full-width assignment restricted to `tail`.
    pub tail_values: u64,
}

/// `sign × Π factors`, contributed by the superset `set` of the zero set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusTerm {
    pub sign: i8,
    pub set: VertexSet,
    pub factors: Vec<MoebiusFactor>,
}

impl MoebiusTerm {
    /// `- p(x2,x3=0|x1=0) p(x1=0)`
    pub fn render(&self, g: &Admg) -> String {
        let mut s = String::from(if self.sign > 0 { "+" } else { "-" });
        if self.factors.is_empty() {
            s.push_str(" 1");
        }
        for f in &self.factors {
            let _ = write!(s, " p({}=0", g.join_labels(f.head, ","));
            if !f.tail.is_empty() {
                let tail: Vec<String> = f
                    .tail
                    .iter()
                    .map(|v| format!("{}={}", g.label(v), f.tail_values >> v & 1))
                    .collect();
                let _ = write!(s, "|{}", tail.join(","));
            }
            s.push(')');
        }
        s
    }
}

/// Inclusion–exclusion reconstruction with the partitions of every `C ⊆ V`
/// (see [`Admg::expansion_partition`]) computed once up front.
pub struct MoebiusEngine<'g> {
    g: &'g Admg,
    heads: Vec<VertexSet>,
    /// `decompositions[C]` lists indices into `heads`.
    decompositions: Vec<Vec<u32>>,
}

impl<'g> MoebiusEngine<'g> {
    pub fn new(g: &'g Admg) -> Result<Self> {
        let n = g.n();
        if n > MOEBIUS_BOUND {
            return Err(Error::BoundExceeded {
                what: "Moebius reconstruction",
                n,
                bound: MOEBIUS_BOUND,
            });
        }
        let mut heads = Vec::new();
        let mut index: HashMap<VertexSet, u32> = HashMap::new();
        let decompositions = (0..1u64 << n)
            .map(|c| {
                g.expansion_partition(VertexSet::from_bits(c))
                    .heads()
                    .map(|h| {
                        *index.entry(h).or_insert_with(|| {
                            heads.push(h);
                            heads.len() as u32 - 1
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(MoebiusEngine { g, heads, decompositions })
    }

    pub fn graph(&self) -> &Admg {
        self.g
    }

    /// Maps engine head indices to blocks of `q`.
    fn resolve<'q>(&self, q: &'q BinaryParametrization) -> Result<Vec<&'q ParamBlock>> {
        self.heads
            .iter()
            .map(|&h| {
                q.block(h)
                    .ok_or_else(|| Error::IncompleteParams(format!("missing head {}", self.g.fmt_set(h))))
            })
            .collect()
    }

    /// The signed terms of `p(α)`, in increasing order of `C`.
    pub fn expansion(&self, q: &BinaryParametrization, alpha: u64) -> Result<Vec<MoebiusTerm>> {
        let blocks = self.resolve(q)?;
        let v = self.g.vertices();
        let zero = v - VertexSet::from_bits(alpha);
        let ones = v - zero;
        Ok(ones
            .subsets()
            .map(|extra| {
                let c = zero | extra;
                let factors = self.decompositions[c.bits() as usize]
                    .iter()
                    .map(|&i| {
                        let b = blocks[i as usize];
                        MoebiusFactor {
                            head: b.head,
                            tail: b.tail,
                            tail_values: alpha & b.tail.bits(),
                        }
                    })
                    .collect();
                MoebiusTerm {
                    sign: if extra.len() % 2 == 0 { 1 } else { -1 },
                    set: c,
                    factors,
                }
            })
            .collect())
    }

    /// `p(α)` for one assignment.
    pub fn probability(&self, q: &BinaryParametrization, alpha: u64) -> Result<f64> {
        let blocks = self.resolve(q)?;
        Ok(self.probability_resolved(&blocks, alpha))
    }

    fn probability_resolved(&self, blocks: &[&ParamBlock], alpha: u64) -> f64 {
        let v = self.g.vertices();
        let zero = v - VertexSet::from_bits(alpha);
        let ones = v - zero;
        let mut total = 0.0;
        for extra in ones.subsets() {
            let c = zero | extra;
            let prod: f64 = self.decompositions[c.bits() as usize]
                .iter()
                .map(|&i| blocks[i as usize].at(alpha))
                .product();
            if extra.len() % 2 == 0 {
                total += prod;
            } else {
                total -= prod;
            }
        }
        total
    }

    /// The full reconstructed table; entries may be negative for invalid `q`.
    pub fn joint(&self, q: &BinaryParametrization) -> Result<JointTable> {
        let blocks = self.resolve(q)?;
        let probs = (0..1u64 << self.g.n())
            .map(|alpha| self.probability_resolved(&blocks, alpha))
            .collect();
        JointTable::from_raw(self.g.n(), probs)
    }
}

pub fn joint_from_params(g: &Admg, q: &BinaryParametrization) -> Result<JointTable> {
    MoebiusEngine::new(g)?.joint(q)
}

pub fn moebius_expansion(g: &Admg, q: &BinaryParametrization, alpha: u64) -> Result<Vec<MoebiusTerm>> {
    MoebiusEngine::new(g)?.expansion(q, alpha)
}

/// Entry tolerance: reconstructed entries above `-NEGATIVE_TOL` count as nonnegative.
pub const NEGATIVE_TOL: f64 = 1e-12;
/// Total mass tolerance for a valid reconstruction.
pub const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub min_entry: f64,
    pub sum: f64,
    pub valid: bool,
}

impl ValidityReport {
    pub fn of(table: &JointTable) -> Self {
        let min_entry = table.min_entry();
        let sum = table.sum();
        ValidityReport {
            min_entry,
            sum,
            valid: min_entry >= -NEGATIVE_TOL && (sum - 1.0).abs() <= MASS_TOL,
        }
    }
}

pub fn validate_params(g: &Admg, q: &BinaryParametrization) -> Result<ValidityReport> {
    Ok(ValidityReport::of(&joint_from_params(g, q)?))
}

/// Renders a table's assignment for messages, e.g. `0110`.
pub fn format_assignment(g: &Admg, alpha: u64) -> String {
    format_bits(alpha, g.n())
}
