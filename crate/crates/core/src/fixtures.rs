//! The small worked-example graphs used throughout the tests and docs.

use crate::graph::Admg;

fn build(labels: &[&str], directed: &[(&str, &str)], bidirected: &[(&str, &str)]) -> Admg {
    let idx = |l: &str| labels.iter().position(|x| *x == l).unwrap();
    let d: Vec<_> = directed.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    let b: Vec<_> = bidirected.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    Admg::with_labels(labels.iter().map(|s| s.to_string()).collect(), &d, &b).unwrap()
}

/// `x1 -> x3`, `x2 -> x4`, `x3 <-> x4`.
pub fn chains() -> Admg {
    build(&["x1", "x2", "x3", "x4"], &[("x1", "x3"), ("x2", "x4")], &[("x3", "x4")])
}

/// `x1 -> x3`, `x2 -> x4`, `x1 <-> x4`, `x2 <-> x3`: two heads, each
/// conditioning on a member of the other.
pub fn crossed() -> Admg {
    build(
        &["x1", "x2", "x3", "x4"],
        &[("x1", "x3"), ("x2", "x4")],
        &[("x1", "x4"), ("x2", "x3")],
    )
}

/// Five vertices, one district, three levels of heads.
pub fn ring() -> Admg {
    build(
        &["a", "b", "c", "d", "e"],
        &[("e", "c"), ("d", "b"), ("b", "a")],
        &[("a", "c"), ("c", "d"), ("d", "e"), ("b", "e")],
    )
}
