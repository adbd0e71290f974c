//! Shared graph generators, independent reference computations, and the
//! structural property checks used by several integration test targets.
#![allow(dead_code)]

use admg::oracle::{enumerate_admgs, random_admg, RandomSpec};
use admg::{consistent_order, Admg, VertexSet};

pub type Check = fn(&Admg) -> Result<(), String>;

/// Every ADMG with `1..=max_n` vertices.
pub fn all_graphs(max_n: usize) -> impl Iterator<Item = Admg> {
    (1..=max_n).flat_map(|n| enumerate_admgs(n).unwrap())
}

/// `count` seeded random graphs with `1..=max_n` vertices and edge densities
/// spread over sparse to dense.
pub fn random_graphs(count: usize, max_n: usize, seed: u64) -> Vec<Admg> {
    const DENSITIES: [(f64, f64); 5] = [(0.2, 0.2), (0.4, 0.2), (0.3, 0.5), (0.6, 0.6), (0.15, 0.7)];
    (0..count)
        .map(|i| {
            let (p_directed, p_bidirected) = DENSITIES[i % DENSITIES.len()];
            random_admg(&RandomSpec {
                n: 1 + i % max_n,
                p_directed,
                p_bidirected,
                seed: seed.wrapping_add(i as u64),
            })
            .unwrap()
        })
        .collect()
}

pub fn subsets(s: VertexSet) -> impl Iterator<Item = VertexSet> {
    s.subsets()
}

pub fn ancestral_sets(g: &Admg) -> Vec<VertexSet> {
    g.vertices().subsets().filter(|&a| is_ancestral_ref(g, a)).collect()
}

// Reference computations, written against the raw edge lists only.

pub fn parents_ref(g: &Admg, s: VertexSet) -> VertexSet {
    g.directed_edges().iter().filter(|&&(_, b)| s.contains(b)).map(|&(a, _)| a).collect()
}

pub fn ancestors_ref(g: &Admg, s: VertexSet) -> VertexSet {
    let mut an = s;
    loop {
        let next = an | parents_ref(g, an);
        if next == an {
            return an;
        }
        an = next;
    }
}

pub fn descendants_ref(g: &Admg, s: VertexSet) -> VertexSet {
    let mut de = s;
    loop {
        let next = de
            | g.directed_edges()
                .iter()
                .filter(|&&(a, _)| de.contains(a))
                .map(|&(_, b)| b)
                .collect::<VertexSet>();
        if next == de {
            return de;
        }
        de = next;
    }
}

pub fn is_ancestral_ref(g: &Admg, a: VertexSet) -> bool {
    ancestors_ref(g, a) == a
}

/// Vertices of `s` without a proper descendant in `s`.
pub fn barren_ref(g: &Admg, s: VertexSet) -> VertexSet {
    s.iter()
        .filter(|&v| (descendants_ref(g, VertexSet::singleton(v)).without(v) & s).is_empty())
        .collect()
}

/// `dis_W(x)`: breadth-first search over bidirected edges inside `W`.
pub fn district_ref(g: &Admg, w: VertexSet, x: usize) -> VertexSet {
    if !w.contains(x) {
        return VertexSet::EMPTY;
    }
    let mut seen = VertexSet::singleton(x);
    let mut frontier = vec![x];
    while let Some(v) = frontier.pop() {
        for &(a, b) in g.bidirected_edges() {
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if w.contains(other) && !seen.contains(other) {
                seen.insert(other);
                frontier.push(other);
            }
        }
    }
    seen
}

pub fn district_of_set_ref(g: &Admg, w: VertexSet, s: VertexSet) -> VertexSet {
    s.iter().fold(VertexSet::EMPTY, |acc, x| acc | district_ref(g, w, x))
}

/// Head conditions: `H = barren(an(H))` and `H` path-connected in `(G_an(H))↔`.
pub fn is_head_ref(g: &Admg, h: VertexSet) -> bool {
    if h.is_empty() {
        return false;
    }
    let an = ancestors_ref(g, h);
    barren_ref(g, an) == h && h.is_subset(district_ref(g, an, h.min().unwrap()))
}

/// `(dis_an(H)(H) \ H) ∪ pa(dis_an(H)(H))`.
pub fn tail_ref(g: &Admg, h: VertexSet) -> VertexSet {
    let d = district_of_set_ref(g, ancestors_ref(g, h), h);
    (d - h) | parents_ref(g, d)
}

/// `D = dis_{an(D)}(v)` for every district `D` of `W`.
pub fn has_acd_ref(g: &Admg, w: VertexSet) -> bool {
    w.iter().all(|v| {
        let d = district_ref(g, w, v);
        district_ref(g, ancestors_ref(g, d), v) == d
    })
}

/// `Φ(W)` read literally as a set-builder over all nonempty `H ⊆ V`:
/// `H = ∩_{x ∈ H} barren(an(dis_W(x)))`.
pub fn phi_set_builder(g: &Admg, w: VertexSet) -> Vec<VertexSet> {
    let per_vertex: Vec<VertexSet> = (0..g.n())
        .map(|x| barren_ref(g, ancestors_ref(g, district_ref(g, w, x))))
        .collect();
    let mut out: Vec<VertexSet> = g
        .vertices()
        .subsets()
        .filter(|h| !h.is_empty())
        .filter(|&h| h.iter().fold(g.vertices(), |acc, x| acc & per_vertex[x]) == h)
        .collect();
    out.sort_by_key(|h| h.bits());
    out
}

/// Connected components of `s` in the bidirected part.
pub fn bidirected_components(g: &Admg, s: VertexSet) -> Vec<VertexSet> {
    let mut rest = s;
    let mut out = Vec::new();
    while let Some(v) = rest.min() {
        let c = district_ref(g, s, v);
        rest -= c;
        out.push(c);
    }
    out
}

fn fail(g: &Admg, what: String) -> Result<(), String> {
    Err(format!("{g:?}: {what}"))
}

macro_rules! ensure {
    ($g:expr, $cond:expr, $($msg:tt)*) => {
        if !$cond {
            return fail($g, format!($($msg)*));
        }
    };
}

/// Every quantified structural property, by name.
pub fn properties() -> Vec<(&'static str, Check)> {
    vec![
        ("graph relations match reference", relations),
        ("barren sets", barren_sets),
        ("districts partition", districts_partition),
        ("ancestral sets have closed districts", ancestral_closed_districts),
        ("tails avoid head descendants", tails_avoid_descendants),
        ("head enumeration matches definition", heads_match_definition),
        ("heads of ancestral subgraphs", ancestral_subgraph_heads),
        ("head to ancestral closure is injective, onto when complete", closure_injective),
        ("Phi matches its set-builder definition", phi_set_builder_agrees),
        ("Phi picks one disjoint head per district", phi_heads),
        ("decomposition partitions W", decomposition_partitions),
        ("Phi produces heads", phi_yields_heads),
        ("districts seen from an(H)", districts_from_closure),
        ("psi keeps closed districts", psi_keeps_closed_districts),
        ("district tail lies deeper", dis_tail_deeper),
        ("depths under one-vertex extension", extension_depths),
        ("blankets from a depth-consistent order", ordered_blankets),
        ("tail is a blanket of its head within an(H)", tail_blanket),
        ("expansion partition: heads, a partition, [A] on ancestral A", expansion_partition),
    ]
}

pub fn run_all(g: &Admg) -> Result<(), String> {
    for (name, check) in properties() {
        check(g).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn relations(g: &Admg) -> Result<(), String> {
    for v in 0..g.n() {
        let s = VertexSet::singleton(v);
        ensure!(g, g.parents_of(v) == parents_ref(g, s), "pa({v})");
        ensure!(g, g.ancestors_of(v) == ancestors_ref(g, s), "an({v})");
        ensure!(g, g.descendants_of(v) == descendants_ref(g, s), "de({v})");
    }
    for a in g.vertices().subsets() {
        ensure!(g, g.is_ancestral(a) == is_ancestral_ref(g, a), "is_ancestral({a})");
        ensure!(g, g.barren(a) == barren_ref(g, a), "barren({a})");
        ensure!(g, g.ancestors(a) == ancestors_ref(g, a), "an({a})");
        for v in 0..g.n() {
            ensure!(g, g.district(a, v) == district_ref(g, a, v), "dis_{a}({v})");
        }
        ensure!(g, g.has_ancestrally_closed_districts(a) == has_acd_ref(g, a), "acd({a})");
    }
    let mut listed = g.enumerate_ancestral_sets().unwrap();
    listed.sort_by_key(|s| s.bits());
    ensure!(g, listed == ancestral_sets(g), "ancestral set enumeration");
    Ok(())
}

fn barren_sets(g: &Admg) -> Result<(), String> {
    for a in g.vertices().subsets() {
        let b = g.barren(a);
        ensure!(g, g.barren(g.ancestral_closure(a)) == b && b.is_subset(a), "(i) at {a}");
        if g.is_ancestral(a) {
            ensure!(g, g.ancestral_closure(b) == a, "(ii) at {a}");
        }
        for sub in a.subsets() {
            ensure!(g, (b & sub).is_subset(g.barren(sub)), "(iii) at {a}, {sub}");
        }
    }
    Ok(())
}

fn districts_partition(g: &Admg) -> Result<(), String> {
    for w in g.vertices().subsets() {
        let part = g.districts_of(w);
        let mut union = VertexSet::EMPTY;
        for &d in part.blocks() {
            ensure!(g, !d.is_empty() && union.is_disjoint(d), "(i) overlap in {w}");
            union |= d;
            for v in d {
                ensure!(g, g.district(w, v) == d, "(i) block of {v} in {w}");
            }
        }
        ensure!(g, union == w, "(i) union of districts of {w}");
        for v in w {
            let d = g.district(w, v);
            ensure!(g, g.district(d, v) == d, "(ii) at {w}, {v}");
            for sub in w.subsets().filter(|s| s.contains(v)) {
                ensure!(g, g.district(sub, v).is_subset(d), "(iii) at {w}, {sub}, {v}");
            }
        }
    }
    Ok(())
}

fn ancestral_closed_districts(g: &Admg) -> Result<(), String> {
    for a in ancestral_sets(g) {
        ensure!(g, g.has_ancestrally_closed_districts(a), "{a} ancestral without closed districts");
    }
    Ok(())
}

fn tails_avoid_descendants(g: &Admg) -> Result<(), String> {
    for ht in g.all_heads().unwrap() {
        ensure!(g, ht.tail.is_disjoint(g.descendants(ht.head)), "tail meets de({})", ht.head);
        ensure!(g, ht.tail.is_disjoint(ht.head), "tail meets head {}", ht.head);
        ensure!(g, ht.tail == ht.dis_tail | ht.pa_tail, "tail parts of {}", ht.head);
    }
    Ok(())
}

fn heads_match_definition(g: &Admg) -> Result<(), String> {
    let listed: Vec<(VertexSet, VertexSet)> = g.all_heads().unwrap().iter().map(|ht| (ht.head, ht.tail)).collect();
    let mut want: Vec<(VertexSet, VertexSet)> = g
        .vertices()
        .subsets()
        .filter(|&h| is_head_ref(g, h))
        .map(|h| (h, tail_ref(g, h)))
        .collect();
    want.sort_by_key(|(h, _)| h.size_order_key());
    ensure!(g, listed == want, "heads {listed:?} vs {want:?}");
    for h in g.vertices().subsets().filter(|h| !h.is_empty()) {
        ensure!(g, g.is_head(h).unwrap() == is_head_ref(g, h), "is_head({h})");
    }
    Ok(())
}

fn ancestral_subgraph_heads(g: &Admg) -> Result<(), String> {
    let heads: Vec<VertexSet> = g.all_heads().unwrap().iter().map(|ht| ht.head).collect();
    for a in ancestral_sets(g) {
        let (sub, map) = g.induced_subgraph(a);
        let mut got: Vec<VertexSet> = sub
            .all_heads()
            .unwrap()
            .iter()
            .map(|ht| ht.head.iter().map(|v| map[v]).collect())
            .collect();
        got.sort_by_key(|h| h.bits());
        let mut want: Vec<VertexSet> = heads.iter().copied().filter(|h| h.is_subset(a)).collect();
        want.sort_by_key(|h| h.bits());
        ensure!(g, got == want, "heads of G_{a}");
    }
    Ok(())
}

fn closure_injective(g: &Admg) -> Result<(), String> {
    let mut images: Vec<VertexSet> = g.all_heads().unwrap().iter().map(|ht| g.ancestors(ht.head)).collect();
    let count = images.len();
    images.sort_by_key(|s| s.bits());
    images.dedup();
    ensure!(g, images.len() == count, "two heads share an ancestral closure");
    if g.is_complete() {
        let nonempty: Vec<VertexSet> = ancestral_sets(g).into_iter().filter(|a| !a.is_empty()).collect();
        ensure!(g, images == nonempty, "not onto the nonempty ancestral sets");
    }
    Ok(())
}

fn phi_set_builder_agrees(g: &Admg) -> Result<(), String> {
    for w in g.vertices().subsets() {
        let mut got = g.phi(w);
        got.sort_by_key(|h| h.bits());
        ensure!(g, got == phi_set_builder(g, w), "Phi({w})");
    }
    Ok(())
}

fn phi_heads(g: &Admg) -> Result<(), String> {
    for w in g.vertices().subsets() {
        let heads = g.phi(w);
        for (i, &h) in heads.iter().enumerate() {
            ensure!(g, h.is_subset(w), "head outside W: {h} not in {w}");
            let x0 = h.min().unwrap();
            let d = g.district(w, x0);
            for x in h {
                ensure!(g, g.district(w, x) == d, "district of {x} in {w}");
                ensure!(g, g.barren(g.ancestors(g.district(w, x))) == h, "{h} from {x}");
            }
            for &h2 in &heads[i + 1..] {
                ensure!(
                    g,
                    g.district_of_set(w, h).is_disjoint(g.district_of_set(w, h2)),
                    "heads overlap districts: {h}, {h2} in {w}"
                );
                ensure!(g, h.is_disjoint(h2), "heads intersect: {h}, {h2} in {w}");
            }
        }
        ensure!(g, w.is_empty() == heads.is_empty(), "Phi({w}) empty iff W empty");
    }
    Ok(())
}

fn decomposition_partitions(g: &Admg) -> Result<(), String> {
    for w in g.vertices().subsets() {
        let d = g.decompose(w);
        let mut union = VertexSet::EMPTY;
        for b in d.blocks() {
            ensure!(g, union.is_disjoint(b.head), "blocks of [{w}] overlap");
            union |= b.head;
        }
        ensure!(g, union == w, "[{w}] does not cover");
        ensure!(g, d.rounds() <= w.len(), "[{w}] took {} rounds", d.rounds());
        // ψ strictly shrinks nonempty sets
        ensure!(g, w.is_empty() || g.psi(w).len() < w.len(), "psi({w}) does not shrink");
    }
    Ok(())
}

fn phi_yields_heads(g: &Admg) -> Result<(), String> {
    for w in g.vertices().subsets() {
        for h in g.phi(w) {
            ensure!(g, is_head_ref(g, h), "{h} from Phi({w}) is not a head");
        }
    }
    Ok(())
}

fn districts_from_closure(g: &Admg) -> Result<(), String> {
    for w in g.vertices().subsets().filter(|&w| has_acd_ref(g, w)) {
        for h in g.phi(w) {
            let an = g.ancestors(h);
            for v in g.district_of_set(w, h) {
                ensure!(g, g.district(w, v) == g.district(an, v), "W={w}, H={h}, v={v}");
            }
        }
    }
    Ok(())
}

fn psi_keeps_closed_districts(g: &Admg) -> Result<(), String> {
    for w in g.vertices().subsets().filter(|&w| has_acd_ref(g, w)) {
        ensure!(g, has_acd_ref(g, g.psi(w)), "psi loses closed districts at {w}");
    }
    for a in ancestral_sets(g) {
        let mut cur = a;
        while !cur.is_empty() {
            ensure!(g, has_acd_ref(g, cur), "psi-iterate {cur} of {a}");
            cur = g.psi(cur);
        }
    }
    Ok(())
}

/// `ψ^{(k)}(A)` for `k = 0..=rounds`.
fn psi_iterates(g: &Admg, a: VertexSet) -> Vec<VertexSet> {
    let mut out = vec![a];
    while !out.last().unwrap().is_empty() {
        out.push(g.psi(*out.last().unwrap()));
    }
    out
}

fn dis_tail_deeper(g: &Admg) -> Result<(), String> {
    for a in ancestral_sets(g) {
        let iterates = psi_iterates(g, a);
        for b in g.decompose(a).blocks() {
            let ht = g.tail(b.head).unwrap();
            let deeper = iterates.get(b.depth + 1).copied().unwrap_or(VertexSet::EMPTY);
            ensure!(g, ht.dis_tail.is_subset(deeper), "A={a}, H={}", b.head);
        }
    }
    Ok(())
}

fn extension_depths(g: &Admg) -> Result<(), String> {
    for a in ancestral_sets(g) {
        let da = g.decompose(a);
        for x in g.vertices() - a {
            let ax = a.with(x);
            if !g.is_ancestral(ax) {
                continue;
            }
            let dax = g.decompose(ax);
            for w in a {
                let (d0, d1) = (da.depth_of(w).unwrap(), dax.depth_of(w).unwrap());
                ensure!(g, d0 <= d1, "depth decreased: A={a}, x={x}, w={w}");
                ensure!(g, d1 <= d0 + 1, "depth jumped: A={a}, x={x}, w={w}");
            }
            let order = g
                .depth_consistent_order(a, x)
                .map_err(|e| format!("{g:?}: one-vertex extension: A={a}, x={x}: {e}"))?;
            ensure!(g, order.len() == ax.len(), "one-vertex extension: order length");
            ensure!(
                g,
                da.is_consistent_with(&order) && dax.is_consistent_with(&order),
                "one-vertex extension: A={a}, x={x}, order {order:?}"
            );
        }
    }
    Ok(())
}

fn ordered_blankets(g: &Admg) -> Result<(), String> {
    for a in ancestral_sets(g) {
        let d = g.decompose(a);
        let order = consistent_order(a, std::slice::from_ref(&d)).expect("one depth ordering is always satisfiable");
        let position = |v: usize| order.iter().position(|&u| u == v).unwrap();
        for b in d.blocks() {
            let tail = g.tail(b.head).unwrap().tail;
            let mut members: Vec<usize> = b.head.iter().collect();
            members.sort_by_key(|&v| position(v));
            for (j, &h) in members.iter().enumerate() {
                let suc: VertexSet = order[position(h)..].iter().copied().collect();
                let dis = g.district(suc, h);
                let blanket = dis.without(h) | g.parents(dis);
                let t_j: VertexSet = members[j..].iter().copied().collect::<VertexSet>() | tail;
                let s = VertexSet::singleton(h);
                ensure!(g, blanket.is_subset(t_j.without(h)), "A={a}, h={h}: B={blanket} outside T={t_j}");
                let separates = |bl: VertexSet| g.is_m_separated(s, t_j - bl.with(h), bl).unwrap();
                ensure!(g, separates(blanket), "A={a}, h={h}: B={blanket} does not separate in {t_j}");
                for smaller in blanket.subsets().filter(|&x| x != blanket) {
                    ensure!(g, !separates(smaller), "A={a}, h={h}: {smaller} smaller than B={blanket}");
                }
            }
        }
    }
    Ok(())
}

fn tail_blanket(g: &Admg) -> Result<(), String> {
    for ht in g.all_heads().unwrap() {
        let w = g.ancestors(ht.head);
        let rest = w - (ht.head | ht.tail);
        ensure!(g, g.is_m_separated(ht.head, rest, ht.tail).unwrap(), "H={}", ht.head);
    }
    Ok(())
}

fn expansion_partition(g: &Admg) -> Result<(), String> {
    for c in g.vertices().subsets() {
        let d = g.expansion_partition(c);
        let mut covered = VertexSet::EMPTY;
        for h in d.heads() {
            ensure!(g, is_head_ref(g, h), "{h} in expansion of {c} is not a head");
            ensure!(g, covered.is_disjoint(h), "{h} overlaps in expansion of {c}");
            covered |= h;
        }
        ensure!(g, covered == c, "expansion of {c} covers {covered}");
        if is_ancestral_ref(g, c) {
            ensure!(g, d == g.decompose(c), "expansion of ancestral {c} differs from [{c}]");
        }
    }
    Ok(())
}
