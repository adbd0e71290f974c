//! Ground truth for cross-checking: brute-force m-separation by path
//! enumeration, d-separation on a latent DAG, exact independence tests on
//! tables, seeded sampling of graphs, tables and parameters, and the harness
//! checking factorization against m-separation in both directions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binary::{BinaryParametrization, MoebiusEngine, ParamBlock, ValidityReport};
use crate::error::{Error, Result};
use crate::factorization::{Factorization, Term};
use crate::format::GraphJson;
use crate::graph::{Admg, Edge, PairState};
use crate::msep::{is_m_connecting, Path};
use crate::table::{format_bits, JointTable};
use crate::vertex_set::VertexSet;

/// Largest graph handled by [`brute_force_m_separated`].
pub const BRUTE_FORCE_BOUND: usize = 10;
/// Largest observed-plus-latent count handled by [`sample_markov_table`].
pub const SAMPLING_BOUND: usize = 16;
/// Largest graph handled by [`enumerate_admgs`].
pub const EXHAUSTIVE_BOUND: usize = 4;
/// Largest graph handled by [`verify_equivalence`].
pub const VERIFY_BOUND: usize = 8;
/// Default shrink factor toward the independence point for random parameters.
pub const DEFAULT_LAMBDA: f64 = 0.5;
/// Conditional probability tables are drawn from `[CPT_MIN, 1 - CPT_MIN]`.
pub const CPT_MIN: f64 = 0.05;

fn check_disjoint(x: VertexSet, y: VertexSet, z: VertexSet) -> Result<()> {
    if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
        return Err(Error::Disjointness);
    }
    Ok(())
}

/// m-separation by enumerating every simple path (as an edge sequence) from
/// `X` to `Y` and testing each with [`is_m_connecting`].
pub fn brute_force_m_separated(g: &Admg, x: VertexSet, y: VertexSet, z: VertexSet) -> Result<bool> {
    let n = g.n();
    if n > BRUTE_FORCE_BOUND {
        return Err(Error::BoundExceeded {
            what: "path enumeration",
            n,
            bound: BRUTE_FORCE_BOUND,
        });
    }
    check_disjoint(x, y, z)?;
    for start in x {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        if connecting_path_from(g, y, z, &mut vertices, &mut edges) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn connecting_path_from(g: &Admg, y: VertexSet, z: VertexSet, vertices: &mut Vec<usize>, edges: &mut Vec<Edge>) -> bool {
    let cur = *vertices.last().unwrap();
    if y.contains(cur) {
        let path = Path::from_parts(vertices.clone(), edges.clone());
        return is_m_connecting(g, &path, z);
    }
    let incident: Vec<Edge> = g.incident_edges(cur).collect();
    for e in incident {
        let next = e.other(cur).unwrap();
        if vertices.contains(&next) {
            continue;
        }
        vertices.push(next);
        edges.push(e);
        let found = connecting_path_from(g, y, z, vertices, edges);
        vertices.pop();
        edges.pop();
        if found {
            return true;
        }
    }
    false
}

/// `X ⊥ Y | Z` in `table`: for every `z` with `P(z) > tol` and all `x, y`,
/// `|P(x,y|z) - P(x|z) P(y|z)| <= tol`.
pub fn ci_holds(table: &JointTable, x: VertexSet, y: VertexSet, z: VertexSet, tol: f64) -> bool {
    ci_max_deviation(table, x, y, z, tol) <= tol
}

/// The largest `|P(x,y|z) - P(x|z) P(y|z)|` over non-degenerate `z`.
pub fn ci_max_deviation(table: &JointTable, x: VertexSet, y: VertexSet, z: VertexSet, tol: f64) -> f64 {
    if x.is_empty() || y.is_empty() {
        return 0.0;
    }
    let xyz = x | y | z;
    let p_xyz = table.marginal(xyz);
    let p_xz = table.marginal(x | z);
    let p_yz = table.marginal(y | z);
    let p_z = table.marginal(z);
    let mut worst = 0.0f64;
    for packed in 0..1u64 << xyz.len() {
        let a = xyz.expand(packed);
        let pz = p_z[z.compress(a) as usize];
        if pz <= tol {
            continue;
        }
        let joint = p_xyz[packed as usize] / pz;
        let prod = p_xz[(x | z).compress(a) as usize] * p_yz[(y | z).compress(a) as usize] / (pz * pz);
        worst = worst.max((joint - prod).abs());
    }
    worst
}

/// The DAG obtained by replacing each `a <-> b` with a fresh latent parent of
/// both. Observed vertices keep their ids; latents follow in edge order.
#[derive(Debug, Clone)]
pub struct CanonicalDag {
    dag: Admg,
    n_observed: usize,
}

impl CanonicalDag {
    pub fn dag(&self) -> &Admg {
        &self.dag
    }

    pub fn n_observed(&self) -> usize {
        self.n_observed
    }

    pub fn n_latent(&self) -> usize {
        self.dag.n() - self.n_observed
    }

    /// d-separation in the DAG via the moral graph of `an(X ∪ Y ∪ Z)`.
    pub fn d_separated(&self, x: VertexSet, y: VertexSet, z: VertexSet) -> Result<bool> {
        check_disjoint(x, y, z)?;
        Ok(d_separated_moral(&self.dag, x, y, z))
    }
}

/// d-separation in a DAG by moralization; bidirected edges are ignored.
fn d_separated_moral(dag: &Admg, x: VertexSet, y: VertexSet, z: VertexSet) -> bool {
    let keep = dag.ancestors(x | y | z);
    let n = dag.n();
    let mut adj = vec![VertexSet::EMPTY; n];
    for v in keep {
        let pa = dag.parents_of(v) & keep;
        for p in pa {
            adj[v].insert(p);
            adj[p].insert(v);
            adj[p] |= pa.without(p);
        }
    }
    let mut seen = x;
    let mut stack: Vec<usize> = x.iter().collect();
    while let Some(v) = stack.pop() {
        if y.contains(v) {
            return false;
        }
        for w in adj[v] - z - seen {
            seen.insert(w);
            stack.push(w);
        }
    }
    true
}

/// Latents are named `u_{a}_{b}`, primed until the name is unused.
pub fn canonical_dag(g: &Admg) -> Result<CanonicalDag> {
    let n = g.n();
    let mut labels = g.labels().to_vec();
    let mut directed = g.directed_edges().to_vec();
    for (k, &(a, b)) in g.bidirected_edges().iter().enumerate() {
        let mut name = format!("u_{}_{}", g.label(a), g.label(b));
        while labels.contains(&name) {
            name.push('\'');
        }
        labels.push(name);
        directed.push((n + k, a));
        directed.push((n + k, b));
    }
    Ok(CanonicalDag {
        dag: Admg::with_labels(labels, &directed, &[])?,
        n_observed: n,
    })
}

/// A table over the observed vertices of `G` obtained by marginalizing a
/// random positive distribution on the canonical DAG.
pub fn sample_markov_table(g: &Admg, seed: u64) -> Result<JointTable> {
    let cd = canonical_dag(g)?;
    let total = cd.dag.n();
    if total > SAMPLING_BOUND {
        return Err(Error::BoundExceeded {
            what: "latent-DAG sampling (observed + latent)",
            n: total,
            bound: SAMPLING_BOUND,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parents: Vec<VertexSet> = (0..total).map(|v| cd.dag.parents_of(v)).collect();
    // cpt[v][config] = P(X_v = 0 | parents = config)
    let cpt: Vec<Vec<f64>> = parents
        .iter()
        .map(|pa| {
            (0..1u64 << pa.len())
                .map(|_| rng.gen_range(CPT_MIN..=1.0 - CPT_MIN))
                .collect()
        })
        .collect();

    let n = g.n();
    let mask = (1u64 << n) - 1;
    let mut probs = vec![0.0; 1 << n];
    for full in 0..1u64 << total {
        let mut p = 1.0;
        for v in 0..total {
            let q0 = cpt[v][parents[v].compress(full) as usize];
            p *= if full >> v & 1 == 0 { q0 } else { 1.0 - q0 };
        }
        probs[(full & mask) as usize] += p;
    }
    JointTable::from_raw(n, probs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub p_directed: f64,
    pub p_bidirected: f64,
    pub seed: u64,
}

/// Random topological order, then each pair independently gets a directed
/// edge (oriented by the order) and/or a bidirected edge.
pub fn random_admg(spec: &RandomSpec) -> Result<Admg> {
    for (name, p) in [("directed-edge", spec.p_directed), ("bidirected-edge", spec.p_bidirected)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("{name} probability {p} is outside [0,1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut order: Vec<usize> = (0..spec.n).collect();
    order.shuffle(&mut rng);
    let mut pos = vec![0; spec.n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            if rng.gen_bool(spec.p_directed) {
                directed.push(if pos[i] < pos[j] { (i, j) } else { (j, i) });
            }
            if rng.gen_bool(spec.p_bidirected) {
                bidirected.push((i, j));
            }
        }
    }
    Admg::new(spec.n, &directed, &bidirected)
}

/// Every ADMG on `n <= 4` labelled vertices: all pair-state assignments in
/// base-6 counter order (first pair varies slowest), cyclic ones skipped.
pub fn enumerate_admgs(n: usize) -> Result<impl Iterator<Item = Admg>> {
    if n > EXHAUSTIVE_BOUND {
        return Err(Error::BoundExceeded {
            what: "exhaustive enumeration",
            n,
            bound: EXHAUSTIVE_BOUND,
        });
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let count = 6u64.pow(pairs as u32);
    Ok((0..count).filter_map(move |mut code| {
        let mut states = vec![PairState::None; pairs];
        for s in states.iter_mut().rev() {
            *s = PairState::ALL[(code % 6) as usize];
            code /= 6;
        }
        Admg::from_pair_states(n, &states).ok()
    }))
}

/// Every entry drawn uniformly from `[0, 1]`; usually not a valid point.
pub fn random_params(g: &Admg, seed: u64) -> Result<BinaryParametrization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BinaryParametrization::from_fn(g, |_, _, _| rng.gen::<f64>())
}

/// Rejection-samples parameters `q = indep + λ (u - indep)`, `u` uniform,
/// keeping the first whose reconstruction is a distribution. `λ` halves after
/// every 64 consecutive rejections. `template` fixes the head/tail structure.
pub fn random_valid_params(
    engine: &MoebiusEngine<'_>,
    template: &BinaryParametrization,
    rng: &mut impl Rng,
    lambda: f64,
) -> Result<(BinaryParametrization, JointTable)> {
    let mut lambda = lambda;
    let mut attempts = 0u32;
    loop {
        let blocks = template
            .blocks()
            .iter()
            .map(|b| {
                let indep = 0.5f64.powi(b.head.len() as i32);
                ParamBlock {
                    head: b.head,
                    tail: b.tail,
                    values: b.values.iter().map(|_| indep + lambda * (rng.gen::<f64>() - indep)).collect(),
                }
            })
            .collect();
        let q = BinaryParametrization::from_blocks(blocks);
        let table = engine.joint(&q)?;
        if ValidityReport::of(&table).valid {
            return Ok((q, table));
        }
        attempts += 1;
        if attempts.is_multiple_of(64) {
            lambda /= 2.0;
        }
    }
}

/// A failed check found by [`Verifier`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "direction", rename_all = "lowercase")]
pub enum Counterexample {
    /// A latent-DAG table breaks the factorization of `margin`.
    Forward {
        trial: usize,
        seed: u64,
        margin: Vec<String>,
        assignment: String,
        lhs: f64,
        rhs: f64,
    },
    /// A table built from valid parameters breaks `x ⊥ y | given`.
    Reverse {
        trial: usize,
        seed: u64,
        x: String,
        y: String,
        given: Vec<String>,
        deviation: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub graph: GraphJson,
    pub trials: usize,
    pub forward_pass: usize,
    pub reverse_pass: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.forward_pass == self.trials && self.reverse_pass == self.trials
    }
}

/// Checks, per seeded trial, that latent-DAG tables factorize on every
/// ancestral set (forward) and that tables reconstructed from valid
/// parameters satisfy every m-separation with singleton `X`, `Y` (reverse).
///
/// The head/tail structure can be overridden to check that a wrong structure
/// is caught.
pub struct Verifier<'g> {
    g: &'g Admg,
    structure: Vec<(VertexSet, VertexSet)>,
    lambda: f64,
}

impl<'g> Verifier<'g> {
    pub fn new(g: &'g Admg) -> Result<Self> {
        let n = g.n();
        if n > VERIFY_BOUND {
            return Err(Error::BoundExceeded {
                what: "verification",
                n,
                bound: VERIFY_BOUND,
            });
        }
        let structure = g.all_heads()?.into_iter().map(|ht| (ht.head, ht.tail)).collect();
        Ok(Verifier {
            g,
            structure,
            lambda: DEFAULT_LAMBDA,
        })
    }

    /// Replaces the tail used for `head`.
    pub fn with_tail(mut self, head: VertexSet, tail: VertexSet) -> Result<Self> {
        let slot = self
            .structure
            .iter_mut()
            .find(|(h, _)| *h == head)
            .ok_or_else(|| Error::NotAHead(self.g.fmt_set(head)))?;
        slot.1 = tail;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    fn tail_of(&self, head: VertexSet) -> VertexSet {
        self.structure.iter().find(|(h, _)| *h == head).expect("every block of [A] is a head").1
    }

    /// Number of passing trials and the first counterexample of each failing one.
    pub fn forward(&self, trials: usize, seed: u64, tol: f64) -> Result<(usize, Vec<Counterexample>)> {
        let g = self.g;
        let factorizations: Vec<Factorization> = g
            .factorize_all()?
            .into_iter()
            .map(|f| {
                let terms = f
                    .terms()
                    .iter()
                    .map(|t| Term {
                        tail: self.tail_of(t.head),
                        ..*t
                    })
                    .collect();
                Factorization::from_terms(f.margin(), terms)
            })
            .collect();
        let mut pass = 0;
        let mut found = Vec::new();
        for trial in 0..trials {
            let s = seed.wrapping_add(trial as u64);
            let table = sample_markov_table(g, s)?;
            match factorizations.iter().find_map(|f| f.find_violation(&table, tol)) {
                None => pass += 1,
                Some(v) => found.push(Counterexample::Forward {
                    trial,
                    seed: s,
                    margin: labels(g, v.margin),
                    assignment: format_bits(v.assignment, g.n()),
                    lhs: v.lhs,
                    rhs: v.rhs,
                }),
            }
        }
        Ok((pass, found))
    }

    pub fn reverse(&self, trials: usize, seed: u64, tol: f64) -> Result<(usize, Vec<Counterexample>)> {
        let g = self.g;
        let engine = MoebiusEngine::new(g)?;
        let template = BinaryParametrization::from_blocks(
            self.structure
                .iter()
                .map(|&(head, tail)| ParamBlock {
                    head,
                    tail,
                    values: vec![0.0; 1 << tail.len()],
                })
                .collect(),
        );
        let statements = separation_statements(g);
        let mut pass = 0;
        let mut found = Vec::new();
        for trial in 0..trials {
            let s = seed.wrapping_add(trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let (_, table) = random_valid_params(&engine, &template, &mut rng, self.lambda)?;
            let failure = statements.iter().find_map(|&(x, y, z)| {
                let (xs, ys) = (VertexSet::singleton(x), VertexSet::singleton(y));
                let dev = ci_max_deviation(&table, xs, ys, z, tol);
                (dev > tol).then(|| Counterexample::Reverse {
                    trial,
                    seed: s,
                    x: g.label(x).to_string(),
                    y: g.label(y).to_string(),
                    given: labels(g, z),
                    deviation: dev,
                })
            });
            match failure {
                None => pass += 1,
                Some(c) => found.push(c),
            }
        }
        Ok((pass, found))
    }

    pub fn run(&self, trials: usize, seed: u64, tol: f64) -> Result<Report> {
        let (forward_pass, mut counterexamples) = self.forward(trials, seed, tol)?;
        let (reverse_pass, rev) = self.reverse(trials, seed, tol)?;
        counterexamples.extend(rev);
        Ok(Report {
            graph: GraphJson::from(self.g),
            trials,
            forward_pass,
            reverse_pass,
            counterexamples,
        })
    }
}

/// Every `(x, y, Z)` with `x < y` and `x ⊥ y | Z` by m-separation.
pub fn separation_statements(g: &Admg) -> Vec<(usize, usize, VertexSet)> {
    let mut out = Vec::new();
    for x in 0..g.n() {
        for y in x + 1..g.n() {
            for z in (g.vertices().without(x).without(y)).subsets() {
                if g.m_separated_unchecked(VertexSet::singleton(x), VertexSet::singleton(y), z) {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

fn labels(g: &Admg, s: VertexSet) -> Vec<String> {
    s.iter().map(|v| g.label(v).to_string()).collect()
}

/// Forward and reverse checks with the default `lambda`, as run by the `verify` subcommand.
pub fn verify_equivalence(g: &Admg, trials: usize, seed: u64, tol: f64) -> Result<Report> {
    Verifier::new(g)?.run(trials, seed, tol)
}
