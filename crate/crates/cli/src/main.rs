//! `skeinlab` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

mod input;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use skeinlab::report::{emit_report, write_output, Format, Report};
use skeinlab::skein::{expand_to_planar, multiply, SkeinElement};
use skeinlab::strata::classify_strata;
use skeinlab::weights::{
    find_binomial_relations, hilbert_function, minimal_generators, verlinde_dim, Variant, WeightError,
};
use skeinlab::StandardGraph;

use input::{load_element, load_graph, load_tensor, InputError};

#[derive(Parser)]
#[command(name = "skeinlab", version, about = "Exact SL2 skein algebras over trivalent ribbon graphs")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Graph files: summary and standard examples.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Number of weight diagrams of level at most L.
    Hilbert {
        graph: PathBuf,
        #[arg(long)]
        level: u32,
        #[command(flatten)]
        variant: VariantArg,
        /// One row per level 0..=L.
        #[arg(long)]
        table: bool,
    },
    /// Minimal generators of the graded semigroup.
    Generators {
        graph: PathBuf,
        #[command(flatten)]
        variant: VariantArg,
    },
    /// Binomial relations among the minimal generators, by generator index.
    Relations {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        deg: usize,
        #[command(flatten)]
        variant: VariantArg,
    },
    /// Expand a tensor file or trace word into the planar basis.
    Expand {
        graph: PathBuf,
        /// Tensor JSON file, or a word such as `x1*x2^-1`.
        #[arg(long)]
        tensor: String,
    },
    /// Product of two elements (element or tensor files, or words).
    Multiply { graph: PathBuf, a: String, b: String },
    /// Boundary strata classes and their codimensions.
    Strata {
        graph: PathBuf,
        /// Also write the Hasse diagram as JSON.
        #[arg(long)]
        hasse: Option<PathBuf>,
    },
    /// Run a randomised identity suite; exits 1 if any check fails.
    Verify {
        graph: PathBuf,
        #[arg(long, value_enum)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Largest level used by the skein and rank suites.
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Dimension of conformal blocks from the fusion rules.
    Verlinde {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        level: u32,
        /// Comma-separated leaf labels.
        #[arg(long, value_delimiter = ',')]
        labels: Vec<u32>,
        /// One row per level 0..=L.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Genus, leaves, bipartite and odd-cycle flags.
    Info { file: PathBuf },
    /// Print a named graph (`theta`, `dumbbell`, `k4`, `trinode`, `upsilon:G`, `gamma:G,N`) as a graph file.
    Standard { name: String },
}

#[derive(Args)]
struct VariantArg {
    /// Restrict to diagrams with every leaf oriented up.
    #[arg(long)]
    unipotent: bool,
}

impl VariantArg {
    fn get(&self) -> Variant {
        if self.unipotent {
            Variant::Unipotent
        } else {
            Variant::Full
        }
    }
}

enum Failure {
    Input(InputError),
    /// The report is still written before exiting.
    Verification(Report),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

fn weight_failure(path: &Path, e: WeightError) -> Failure {
    match e {
        WeightError::GenerationBound { .. } | WeightError::OracleMismatch { .. } => Failure::Verification(
            Report::Record(json!({"status": "fail", "error": e.to_string()})),
        ),
        e => Failure::Input(InputError::at(path, e.to_string())),
    }
}

fn to_report<T: serde::Serialize>(v: &T) -> Report {
    Report::record(v).expect("report types serialise")
}

fn rows(columns: &[&str], rows: &[Value]) -> Report {
    Report::rows(columns, rows).expect("json values serialise")
}

fn element_report(e: &SkeinElement, format: Format) -> Report {
    match format {
        Format::Json => to_report(e),
        Format::Tsv => {
            let r: Vec<Value> = e
                .terms()
                .into_iter()
                .map(|t| json!({"coefficient": t.coefficient.to_string(), "edges": t.diagram.edges, "leaves": t.diagram.leaves}))
                .collect();
            rows(&["coefficient", "edges", "leaves"], &r)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let report = match &cli.command {
        Command::Graph(GraphCommand::Info { file }) => {
            let g = load_graph(file)?;
            to_report(&json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "genus": g.genus(),
                "leaves": g.leaf_count(),
                "bipartite": g.is_bipartite(),
                "odd_cycle": g.has_odd_cycle(),
            }))
        }
        Command::Graph(GraphCommand::Standard { name }) => {
            let g = name
                .parse::<StandardGraph>()
                .and_then(StandardGraph::build)
                .map_err(|e| InputError::new(e.to_string()))?;
            to_report(&g.to_file())
        }
        Command::Hilbert {
            graph,
            level,
            variant,
            table,
        } => {
            let g = load_graph(graph)?;
            let count = |l| json!({"level": l, "count": hilbert_function(&g, l, variant.get())});
            if *table {
                rows(&["level", "count"], &(0..=*level).map(count).collect::<Vec<_>>())
            } else {
                to_report(&count(*level))
            }
        }
        Command::Generators { graph, variant } => {
            let g = load_graph(graph)?;
            let gens = minimal_generators(&g, variant.get()).map_err(|e| weight_failure(graph, e))?;
            let r: Vec<Value> = gens
                .iter()
                .enumerate()
                .map(|(i, x)| json!({"index": i, "level": x.level, "edges": x.diagram.edges, "leaves": x.diagram.leaves}))
                .collect();
            rows(&["index", "level", "edges", "leaves"], &r)
        }
        Command::Relations { graph, deg, variant } => {
            let g = load_graph(graph)?;
            let gens = minimal_generators(&g, variant.get()).map_err(|e| weight_failure(graph, e))?;
            let rels = find_binomial_relations(&g, &gens, *deg).map_err(|e| weight_failure(graph, e))?;
            let r: Vec<Value> = rels
                .iter()
                .map(|x| json!({"degree": x.degree(), "lhs": x.lhs, "rhs": x.rhs}))
                .collect();
            rows(&["degree", "lhs", "rhs"], &r)
        }
        Command::Expand { graph, tensor } => {
            let g = load_graph(graph)?;
            let t = load_tensor(&g, tensor)?;
            let e = expand_to_planar(&g, &t).map_err(|e| InputError::new(e.to_string()))?;
            element_report(&e, cli.format)
        }
        Command::Multiply { graph, a, b } => {
            let g = load_graph(graph)?;
            let x = load_element(&g, a)?;
            let y = load_element(&g, b)?;
            let p = multiply(&g, &x, &y).map_err(|e| InputError::new(e.to_string()))?;
            element_report(&p, cli.format)
        }
        Command::Strata { graph, hasse } => {
            let g = load_graph(graph)?;
            let poset = classify_strata(&g).map_err(|e| weight_failure(graph, e))?;
            if let Some(path) = hasse {
                let bytes = emit_report(&to_report(&poset.hasse()), Format::Json).expect("hasse serialises");
                write_output(&bytes, Some(path)).map_err(|e| InputError::new(e.to_string()))?;
            }
            let r: Vec<Value> = poset
                .classes
                .iter()
                .map(|s| json!({"class": s.canonical_class, "codim": s.codim}))
                .collect();
            rows(&["class", "codim"], &r)
        }
        Command::Verify {
            graph,
            suite,
            seed,
            samples,
            level,
        } => {
            let g = load_graph(graph)?;
            let outcome = verify::run(&g, *suite, *seed, *samples as usize, *level)?;
            let failed = outcome.failures > 0;
            let report = to_report(&outcome);
            if failed {
                return Err(Failure::Verification(report));
            }
            report
        }
        Command::Verlinde {
            genus,
            level,
            labels,
            table,
        } => {
            let dim = |l: u32| -> Result<Value, Failure> {
                let d = verlinde_dim(*genus, labels, l).map_err(|e| match e {
                    WeightError::OracleMismatch { .. } => weight_failure(Path::new(""), e),
                    e => Failure::Input(InputError::new(e.to_string())),
                })?;
                Ok(json!({"genus": genus, "labels": labels, "level": l, "dimension": d}))
            };
            if *table {
                let r = (0..=*level).map(dim).collect::<Result<Vec<_>, _>>()?;
                rows(&["genus", "labels", "level", "dimension"], &r)
            } else {
                to_report(&dim(*level)?)
            }
        }
    };
    Ok(report)
}

/// Caps the global rayon pool at `SKEINLAB_THREADS` when it is set.
fn configure_threads() -> Result<(), InputError> {
    let Ok(raw) = std::env::var("SKEINLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| InputError::new(format!("SKEINLAB_THREADS must be a positive integer, got `{raw}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| InputError::new(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn emit(cli: &Cli, report: &Report) -> Result<(), InputError> {
    let bytes = emit_report(report, cli.format).map_err(|e| InputError::new(e.to_string()))?;
    write_output(&bytes, cli.output.as_deref()).map_err(|e| InputError::new(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().map_err(Failure::Input).and_then(|()| run(&cli));
    let (report, code) = match outcome {
        Ok(r) => (r, 0),
        Err(Failure::Verification(r)) => (r, 1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
