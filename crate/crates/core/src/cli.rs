//! The `admg` command-line tool.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::binary::{param_dimension, BinaryParametrization, MoebiusEngine, ValidityReport};
use crate::error::{Error, Result};
use crate::factorization::{render_term, DEFAULT_TOL};
use crate::format::{parse_admg, parse_json, to_admg_string, GraphJson};
use crate::graph::Admg;
use crate::oracle::{random_admg, verify_equivalence, Counterexample, RandomSpec};
use crate::table::parse_bits;
use crate::vertex_set::VertexSet;

#[derive(Debug, Parser)]
#[command(name = "admg", version, about = "Head/tail factorizations of acyclic directed mixed graphs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph file: `.admg` text, or `.json`.
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a graph and report its size.
    Validate(GraphArg),
    /// List every head with its tail.
    Heads(GraphArg),
    /// The recursive head partition of a vertex set, with depths.
    Partition {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated labels.
        #[arg(long)]
        set: String,
    },
    /// Factorize an ancestral margin (default: all vertices).
    Factorize {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, conflicts_with = "all")]
        set: Option<String>,
        /// Every nonempty ancestral set.
        #[arg(long)]
        all: bool,
    },
    /// Test X ⊥ Y | Z by m-separation.
    Msep {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "")]
        given: String,
    },
    /// Number of binary parameters.
    Dim(GraphArg),
    /// Rebuild a joint table (CSV) from binary parameters, or expand one entry.
    Moebius {
        #[command(flatten)]
        graph: GraphArg,
        /// Parameter JSON file.
        #[arg(long)]
        params: PathBuf,
        /// Bit-string in node order, e.g. 0110.
        #[arg(long)]
        assignment: Option<String>,
    },
    /// Check factorization and m-separation against each other numerically.
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Print a random graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directed-edge probability per pair.
        #[arg(long, default_value_t = 0.3)]
        pd: f64,
        /// Bidirected-edge probability per pair.
        #[arg(long, default_value_t = 0.3)]
        pb: f64,
    },
}

/// Exit code for domain errors (bad graph, non-ancestral set, failed check).
pub const EXIT_DOMAIN: i32 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs one invocation; `args` includes the program name. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn load_graph(path: &Path) -> CliResult<Admg> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        parse_json(&text)
    } else {
        parse_admg(&text)
    };
    parsed.map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn parse_set(g: &Admg, list: &str) -> Result<VertexSet> {
    let labels: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    g.set_of(&labels)
}

fn labels(g: &Admg, s: VertexSet) -> Vec<&str> {
    s.iter().map(|v| g.label(v)).collect()
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("output serializes");
    writeln!(out, "{text}").map_err(io_failure)
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Usage(format!("write failed: {e}"))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    macro_rules! say {
        ($($arg:tt)*) => { writeln!(out, $($arg)*).map_err(io_failure)? };
    }
    match &cli.command {
        Command::Validate(GraphArg { file }) => {
            let g = load_graph(file)?;
            let (d, b) = (g.directed_edges().len(), g.bidirected_edges().len());
            if cli.json {
                write_json(out, &json!({"valid": true, "vertices": g.n(), "directed": d, "bidirected": b}))?;
            } else {
                say!("valid: {} vertices, {d} directed, {b} bidirected", g.n());
            }
        }
        Command::Heads(GraphArg { file }) => {
            let g = load_graph(file)?;
            let heads = g.all_heads()?;
            if cli.json {
                let v: Vec<_> = heads
                    .iter()
                    .map(|ht| json!({"head": labels(&g, ht.head), "tail": labels(&g, ht.tail)}))
                    .collect();
                write_json(out, &v)?;
            } else {
                for ht in heads {
                    say!("{}", render_term(&g, ht.head, ht.tail));
                }
            }
        }
        Command::Partition { graph, set } => {
            let g = load_graph(&graph.file)?;
            let w = parse_set(&g, set)?;
            let d = g.decompose(w);
            if cli.json {
                let blocks: Vec<_> = d
                    .blocks()
                    .iter()
                    .map(|b| json!({"head": labels(&g, b.head), "depth": b.depth}))
                    .collect();
                write_json(out, &json!({"set": labels(&g, w), "blocks": blocks}))?;
            } else {
                for b in d.blocks() {
                    say!("{} depth {}", g.fmt_set(b.head), b.depth);
                }
            }
        }
        Command::Factorize { graph, set, all } => {
            let g = load_graph(&graph.file)?;
            let fs = if *all {
                g.factorize_all()?
            } else {
                let a = match set {
                    Some(s) => parse_set(&g, s)?,
                    None => g.vertices(),
                };
                vec![g.factorize(a)?]
            };
            if cli.json {
                let v: Vec<_> = fs.iter().map(|f| f.to_json(&g)).collect();
                write_json(out, &v)?;
            } else {
                for f in fs {
                    say!("{}", f.render_equation(&g));
                }
            }
        }
        Command::Msep { graph, x, y, given } => {
            let g = load_graph(&graph.file)?;
            let (xs, ys, zs) = (parse_set(&g, x)?, parse_set(&g, y)?, parse_set(&g, given)?);
            let sep = g.is_m_separated(xs, ys, zs)?;
            if cli.json {
                write_json(
                    out,
                    &json!({"x": labels(&g, xs), "y": labels(&g, ys), "given": labels(&g, zs), "m_separated": sep}),
                )?;
            } else {
                say!("m-separated: {sep}");
            }
        }
        Command::Dim(GraphArg { file }) => {
            let g = load_graph(file)?;
            let d = param_dimension(&g)?;
            if cli.json {
                write_json(out, &json!({ "dimension": d }))?;
            } else {
                say!("{d}");
            }
        }
        Command::Moebius {
            graph,
            params,
            assignment,
        } => {
            let g = load_graph(&graph.file)?;
            let text = std::fs::read_to_string(params)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", params.display())))?;
            let q = BinaryParametrization::from_json(&g, &text)
                .map_err(|e| Failure::Domain(format!("{}: {e}", params.display())))?;
            let engine = MoebiusEngine::new(&g)?;
            match assignment {
                Some(bits) => {
                    let alpha = parse_bits(bits)
                        .filter(|_| bits.len() == g.n())
                        .ok_or_else(|| Failure::Usage(format!("assignment must be {} binary digits", g.n())))?;
                    let terms = engine.expansion(&q, alpha)?;
                    let p = engine.probability(&q, alpha)?;
                    if cli.json {
                        let v: Vec<_> = terms
                            .iter()
                            .map(|t| {
                                let factors: Vec<_> = t
                                    .factors
                                    .iter()
                                    .map(|f| {
                                        let tail: serde_json::Map<_, _> = f
                                            .tail
                                            .iter()
                                            .map(|v| (g.label(v).to_string(), json!(f.tail_values >> v & 1)))
                                            .collect();
                                        json!({"head": labels(&g, f.head), "tail": tail})
                                    })
                                    .collect();
                                json!({"sign": t.sign, "set": labels(&g, t.set), "factors": factors})
                            })
                            .collect();
                        write_json(out, &json!({"assignment": bits, "terms": v, "probability": p}))?;
                    } else {
                        say!("p({bits}) =");
                        for t in terms {
                            say!("  {}", t.render(&g));
                        }
                        say!("  = {p}");
                    }
                }
                None => {
                    let table = engine.joint(&q)?;
                    let report = ValidityReport::of(&table);
                    if cli.json {
                        let rows: Vec<_> = table
                            .probs()
                            .iter()
                            .enumerate()
                            .map(|(a, p)| json!({"assignment": table.format_assignment(a as u64), "probability": p}))
                            .collect();
                        write_json(
                            out,
                            &json!({"table": rows, "min_entry": report.min_entry, "sum": report.sum, "valid": report.valid}),
                        )?;
                    } else {
                        out.write_all(table.to_csv().as_bytes()).map_err(io_failure)?;
                    }
                    if !report.valid {
                        return Err(Failure::Domain(format!(
                            "parameters do not define a distribution (min entry {}, sum {})",
                            report.min_entry, report.sum
                        )));
                    }
                }
            }
        }
        Command::Verify {
            graph,
            trials,
            seed,
            tol,
        } => {
            let g = load_graph(&graph.file)?;
            let report = verify_equivalence(&g, *trials, *seed, *tol)?;
            if cli.json {
                write_json(out, &report)?;
            } else {
                say!("forward: {}/{} trials passed", report.forward_pass, report.trials);
                say!("reverse: {}/{} trials passed", report.reverse_pass, report.trials);
                for c in &report.counterexamples {
                    match c {
                        Counterexample::Forward {
                            trial,
                            margin,
                            assignment,
                            lhs,
                            rhs,
                            ..
                        } => say!(
                            "trial {trial}: factorization of {{{}}} fails at {assignment}: {lhs} vs {rhs}",
                            margin.join(",")
                        ),
                        Counterexample::Reverse {
                            trial,
                            x,
                            y,
                            given,
                            deviation,
                            ..
                        } => say!(
                            "trial {trial}: {x} and {y} dependent given {{{}}} (deviation {deviation})",
                            given.join(",")
                        ),
                    }
                }
            }
            if !report.passed() {
                return Ok(EXIT_DOMAIN);
            }
        }
        Command::Random { n, seed, pd, pb } => {
            let g = random_admg(&RandomSpec {
                n: *n,
                p_directed: *pd,
                p_bidirected: *pb,
                seed: *seed,
            })
            .map_err(|e| match e {
                Error::InvalidArgument(m) => Failure::Usage(m),
                other => other.into(),
            })?;
            if cli.json {
                write_json(out, &GraphJson::from(&g))?;
            } else {
                out.write_all(to_admg_string(&g).as_bytes()).map_err(io_failure)?;
            }
        }
    }
    Ok(0)
}
