//! Exact joint probability tables over binary variables.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Largest table dimension accepted (2^24 entries).
pub const MAX_TABLE_VARIABLES: usize = 24;

/// Tolerance on the total mass of a table built with [`JointTable::new`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// `2^n` probabilities indexed by assignment: bit `v` of the index is `X_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    n: usize,
    probs: Vec<f64>,
}

impl JointTable {
    /// Validating constructor: nonnegative entries summing to 1.
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        let t = Self::from_raw(n, probs)?;
        if let Some((i, p)) = t.probs.iter().enumerate().find(|(_, p)| p.is_nan() || **p < 0.0) {
            return Err(Error::InvalidTable(format!("entry {} is {p}", t.format_assignment(i as u64))));
        }
        let s = t.sum();
        if (s - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidTable(format!("entries sum to {s}")));
        }
        Ok(t)
    }

    /// Checks only the shape; entries may be negative or unnormalized.
    pub fn from_raw(n: usize, probs: Vec<f64>) -> Result<Self> {
        if n > MAX_TABLE_VARIABLES {
            return Err(Error::BoundExceeded {
                what: "joint table",
                n,
                bound: MAX_TABLE_VARIABLES,
            });
        }
        if probs.len() != 1usize << n {
            return Err(Error::InvalidTable(format!(
                "expected {} entries for {n} variables, got {}",
                1usize << n,
                probs.len()
            )));
        }
        Ok(JointTable { n, probs })
    }

    pub fn uniform(n: usize) -> Self {
        let size = 1usize << n;
        JointTable {
            n,
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn point_mass(n: usize, assignment: u64) -> Self {
        let mut probs = vec![0.0; 1usize << n];
        probs[assignment as usize] = 1.0;
        JointTable { n, probs }
    }

    /// Independent bits with `P(X_v = 0) = zero_probs[v]`.
    pub fn independent(zero_probs: &[f64]) -> Self {
        let n = zero_probs.len();
        let probs = (0..1u64 << n)
            .map(|a| {
                zero_probs
                    .iter()
                    .enumerate()
                    .map(|(v, &q)| if a >> v & 1 == 0 { q } else { 1.0 - q })
                    .product()
            })
            .collect();
        JointTable { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, assignment: u64) -> f64 {
        self.probs[assignment as usize]
    }

    /// Compensated sum of all entries.
    pub fn sum(&self) -> f64 {
        let (mut s, mut c) = (0.0f64, 0.0f64);
        for &p in &self.probs {
            let t = s + p;
            c += if s.abs() >= p.abs() { (s - t) + p } else { (p - t) + s };
            s = t;
        }
        s + c
    }

    pub fn min_entry(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// The margin on `s`, indexed by `s.compress(assignment)`.
    pub fn marginal(&self, s: VertexSet) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << s.len()];
        for (a, &p) in self.probs.iter().enumerate() {
            out[s.compress(a as u64) as usize] += p;
        }
        out
    }

    /// Assignment as a bit-string, character `v` is the value of `X_v`.
    pub fn format_assignment(&self, assignment: u64) -> String {
        format_bits(assignment, self.n)
    }

    /// `assignment,probability` rows in index order, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("assignment,probability\n");
        for (a, p) in self.probs.iter().enumerate() {
            out.push_str(&format!("{},{}\n", self.format_assignment(a as u64), p));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<(u64, f64, usize)> = Vec::new();
        let mut n = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || (i == 0 && content.starts_with("assignment")) {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line, msg };
            let (bits, p) = content
                .split_once(',')
                .ok_or_else(|| parse_err("expected `bits,probability`".into()))?;
            let bits = bits.trim();
            let a = parse_bits(bits).ok_or_else(|| parse_err(format!("bad assignment {bits:?}")))?;
            if *n.get_or_insert(bits.len()) != bits.len() {
                return Err(parse_err("assignments have differing lengths".into()));
            }
            let p: f64 = p.trim().parse().map_err(|_| parse_err(format!("bad probability {p:?}")))?;
            rows.push((a, p, line));
        }
        let n = n.unwrap_or(0);
        if n > MAX_TABLE_VARIABLES {
            return Err(Error::BoundExceeded {
                what: "joint table",
                n,
                bound: MAX_TABLE_VARIABLES,
            });
        }
        let mut probs = vec![f64::NAN; 1usize << n];
        for (a, p, line) in rows {
            if !probs[a as usize].is_nan() {
                return Err(Error::Parse {
                    line,
                    msg: "duplicate assignment".into(),
                });
            }
            probs[a as usize] = p;
        }
        if let Some(a) = probs.iter().position(|p| p.is_nan()) {
            return Err(Error::InvalidTable(format!("missing assignment {}", format_bits(a as u64, n))));
        }
        JointTable::new(n, probs)
    }
}

pub fn format_bits(bits: u64, n: usize) -> String {
    (0..n).map(|v| if bits >> v & 1 == 1 { '1' } else { '0' }).collect()
}

/// Inverse of [`format_bits`].
pub fn parse_bits(s: &str) -> Option<u64> {
    if s.len() > 64 {
        return None;
    }
    s.chars().enumerate().try_fold(0u64, |acc, (i, c)| match c {
        '0' => Some(acc),
        '1' => Some(acc | 1 << i),
        _ => None,
    })
}

/// Memoized margins of one table.
pub struct Marginals<'a> {
    table: &'a JointTable,
    cache: HashMap<VertexSet, Vec<f64>>,
}

impl<'a> Marginals<'a> {
    pub fn new(table: &'a JointTable) -> Self {
        Marginals {
            table,
            cache: HashMap::new(),
        }
    }

    /// `P(X_S = assignment|_S)`; `assignment` is a full-width bit vector.
    pub fn prob(&mut self, s: VertexSet, assignment: u64) -> f64 {
        if s.is_empty() {
            return 1.0;
        }
        let table = self.table;
        let m = self.cache.entry(s).or_insert_with(|| table.marginal(s));
        m[s.compress(assignment) as usize]
    }
}
