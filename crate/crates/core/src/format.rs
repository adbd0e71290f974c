//! The `.admg` text format and its JSON mirror.
//!
//! ```text
//! # comment
//! node a
//! node b
//! node c
//! a -> b
//! b <-> c
//! ```
//!
//! All `node` declarations come first; their order defines vertex ids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Admg;

pub fn parse_admg(text: &str) -> Result<Admg> {
    let mut labels: Vec<String> = Vec::new();
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    // Edge lines for error reporting after validation.
    let mut edge_lines: Vec<(usize, bool, usize, usize)> = Vec::new();

    let lookup = |labels: &[String], l: &str, line: usize| {
        labels.iter().position(|x| x == l).ok_or_else(|| Error::Parse {
            line,
            msg: format!("unknown node {l:?}"),
        })
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", label] => {
                if !edge_lines.is_empty() {
                    return Err(Error::Parse {
                        line,
                        msg: "node declarations must precede edges".into(),
                    });
                }
                if !valid_label(label) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("invalid node label {label:?}"),
                    });
                }
                if labels.iter().any(|l| l == label) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate node {label:?}"),
                    });
                }
                labels.push(label.to_string());
            }
            ["node", ..] => {
                return Err(Error::Parse {
                    line,
                    msg: "expected `node <label>`".into(),
                })
            }
            [a, "->", b] => {
                let (x, y) = (lookup(&labels, a, line)?, lookup(&labels, b, line)?);
                directed.push((x, y));
                edge_lines.push((line, true, x, y));
            }
            [a, "<->", b] => {
                let (x, y) = (lookup(&labels, a, line)?, lookup(&labels, b, line)?);
                bidirected.push((x, y));
                edge_lines.push((line, false, x, y));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("cannot parse {content:?}; expected `node <label>`, `a -> b` or `a <-> b`"),
                })
            }
        }
    }

    // Structural errors (self-loops, duplicates, opposing edges) are tied to
    // the first offending line; cycles are reported as a whole.
    match Admg::with_labels(labels.clone(), &directed, &bidirected) {
        Ok(g) => Ok(g),
        Err(e @ Error::Cycle(_)) => Err(e),
        Err(e) => {
            let line = first_offending_line(&edge_lines).unwrap_or(0);
            Err(Error::Parse {
                line,
                msg: e.to_string(),
            })
        }
    }
}

fn first_offending_line(edges: &[(usize, bool, usize, usize)]) -> Option<usize> {
    let mut seen_dir = std::collections::HashSet::new();
    let mut seen_bi = std::collections::HashSet::new();
    for &(line, is_dir, a, b) in edges {
        if a == b {
            return Some(line);
        }
        if is_dir {
            if !seen_dir.insert((a, b)) || seen_dir.contains(&(b, a)) {
                return Some(line);
            }
        } else if !seen_bi.insert((a.min(b), a.max(b))) {
            return Some(line);
        }
    }
    None
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && !l.contains(['#', ',']) && l != "->" && l != "<->"
}

/// Canonical text form: nodes in id order, then sorted directed edges, then
/// sorted bi-directed edges.
pub fn to_admg_string(g: &Admg) -> String {
    let mut out = String::new();
    for l in g.labels() {
        out.push_str("node ");
        out.push_str(l);
        out.push('\n');
    }
    for &(a, b) in g.directed_edges() {
        out.push_str(&format!("{} -> {}\n", g.label(a), g.label(b)));
    }
    for &(a, b) in g.bidirected_edges() {
        out.push_str(&format!("{} <-> {}\n", g.label(a), g.label(b)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    pub directed: Vec<[String; 2]>,
    pub bidirected: Vec<[String; 2]>,
}

impl From<&Admg> for GraphJson {
    fn from(g: &Admg) -> Self {
        let pair = |&(a, b): &(usize, usize)| [g.label(a).to_string(), g.label(b).to_string()];
        GraphJson {
            nodes: g.labels().to_vec(),
            directed: g.directed_edges().iter().map(pair).collect(),
            bidirected: g.bidirected_edges().iter().map(pair).collect(),
        }
    }
}

impl GraphJson {
    pub fn to_admg(&self) -> Result<Admg> {
        let idx = |l: &String| {
            self.nodes
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.clone()))
        };
        let directed = self
            .directed
            .iter()
            .map(|[a, b]| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let bidirected = self
            .bidirected
            .iter()
            .map(|[a, b]| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Admg::with_labels(self.nodes.clone(), &directed, &bidirected)
    }
}

pub fn to_json_string(g: &Admg) -> String {
    serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph JSON serializes")
}

pub fn parse_json(text: &str) -> Result<Admg> {
    let j: GraphJson = serde_json::from_str(text)?;
    j.to_admg()
}
