use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::json;

use superperm::acceptance;
use superperm::bounds::{bounds_table, published_best, ratio_report};
use superperm::classic::{ashlock_tillotson, classic_bounds, is_superpermutation};
use superperm::graph::{build_graph, verify_universal_word, CoveringPath, GraphKind};
use superperm::pathfinder::{
    exact_min_word_observed, greedy_cycle_path, nearest_neighbor_path, ExactConfig, SearchResult,
};
use superperm::report;
use superperm::toric::word_to_matrix;
use superperm::{Error, Permutation, ToricBinaryMatrix, UniversalWord};

/// Superpermutation matrices, universal words and transition graphs.
#[derive(Parser)]
#[command(name = "superperm")]
struct Cli {
    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of the bounds I, C, B, B' and S.
    Bounds {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=200))]
        max: u64,
        #[arg(long, value_enum, default_value_t = BoundsFormat::Md)]
        format: BoundsFormat,
        /// Emit B/(n-1)!, B'/(n-1)! and L/(n-2)! for n = 3..max instead.
        #[arg(long)]
        ratios: bool,
    },
    /// Number of 1-cycles of each length.
    Census {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
        n: u64,
        #[arg(long, value_enum, default_value_t = CensusFormat::Table)]
        format: CensusFormat,
        /// Also enumerate the graph and compare (n <= 9).
        #[arg(long)]
        enumerate: bool,
    },
    /// Export the weighted graph H_n or K_n.
    Graph {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=9))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Kind::H)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = GraphEmit::Csv)]
        emit: GraphEmit,
        /// Largest edge weight drawn in DOT output.
        #[arg(long, default_value_t = 1)]
        cutoff: usize,
    },
    /// Build a short universal word.
    Construct {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=9))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        method: Method,
        /// Seconds allowed for the exact search.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Search nodes allowed for the exact search.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        node_limit: Option<u64>,
        /// Worker threads for the exact search.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
        threads: u64,
        /// Start vertex for the nearest-neighbour walk.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, value_enum, default_value_t = ConstructEmit::Word)]
        emit: ConstructEmit,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Check that a word holds a member of every value-shift class.
    VerifyWord {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=255))]
        n: u64,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Check that a toric matrix holds every permutation matrix as a block.
    VerifyMatrix {
        #[arg(long)]
        file: PathBuf,
        /// Block size; defaults to the one in the file header.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Classical superpermutations.
    Classic {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=10))]
        n: u64,
        /// Print the doubling construction.
        #[arg(long)]
        construct: bool,
        /// Verify the construction.
        #[arg(long)]
        verify: bool,
        /// Print the published lower and upper bounds.
        #[arg(long)]
        bounds: bool,
    },
    /// Run the acceptance suite.
    Acceptance {
        /// Run a single criterion.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=10))]
        only: Option<u64>,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsFormat {
    Csv,
    Md,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CensusFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "H", alias = "h")]
    H,
    #[value(name = "K", alias = "k")]
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphEmit {
    Dot,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    Nn,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructEmit {
    Word,
    Matrix,
    Path,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

/// What a command produced and how the process should exit.
struct Outcome {
    artifact: String,
    code: u8,
}

impl Outcome {
    fn ok(artifact: String) -> Self {
        Self { artifact, code: 0 }
    }
}

const VERIFICATION_FAILED: u8 = 1;
const USAGE: u8 = 2;
const BUDGET_EXHAUSTED: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => BUDGET_EXHAUSTED,
        Error::NotUniversal { .. } | Error::Internal(_) => VERIFICATION_FAILED,
        _ => USAGE,
    }
}

fn main() -> ExitCode {
    let version = format!("{} (formulas {})", env!("CARGO_PKG_VERSION"), superperm::FORMULA_REVISION);
    let matches = Cli::command().version(&*version.leak()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.artifact),
        None => std::io::stdout().write_all(outcome.artifact.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE);
    }
    ExitCode::from(outcome.code)
}

fn run(command: Command) -> superperm::Result<Outcome> {
    match command {
        Command::Bounds { max, format, ratios } => {
            let max = max as usize;
            if ratios {
                return Ok(Outcome::ok(report::ratios_csv(&ratio_report(max.max(3)))));
            }
            let rows = bounds_table(max, &published_best());
            Ok(Outcome::ok(match format {
                BoundsFormat::Csv => report::bounds_csv(&rows),
                BoundsFormat::Md => report::bounds_markdown(&rows),
                BoundsFormat::Json => report::bounds_json(&rows) + "\n",
            }))
        }
        Command::Census { n, format, enumerate } => {
            let r = report::census_report(n as usize, enumerate)?;
            let ok = r.fixed_points_match_phi && r.covers_all_vertices && r.enumeration_agrees != Some(false);
            let artifact = match format {
                CensusFormat::Json => report::census_json(&r) + "\n",
                CensusFormat::Table => report::census_table(&r),
            };
            Ok(Outcome { artifact, code: if ok { 0 } else { VERIFICATION_FAILED } })
        }
        Command::Graph { n, kind, emit, cutoff } => {
            let kind = match kind {
                Kind::H => GraphKind::H,
                Kind::K => GraphKind::K,
            };
            let g = build_graph(n as usize, kind)?;
            Ok(Outcome::ok(match emit {
                GraphEmit::Csv => g.to_csv(),
                GraphEmit::Dot => g.to_dot(cutoff),
            }))
        }
        Command::Construct { n, method, time_limit, node_limit, threads, start, emit, format } => {
            let n = n as usize;
            let r = match method {
                Method::Greedy => greedy_cycle_path(n)?,
                Method::Nn => {
                    let start = match start {
                        Some(s) => s.parse::<Permutation>()?,
                        None => Permutation::identity(n),
                    };
                    nearest_neighbor_path(n, &start.inc_class())?
                }
                Method::Exact => {
                    if let Some(t) = time_limit {
                        if !(t > 0.0 && t.is_finite()) {
                            return Err(Error::Parse(format!("time limit must be positive, got {t}")));
                        }
                    }
                    let cfg = ExactConfig {
                        node_limit,
                        time_limit: time_limit.map(Duration::from_secs_f64),
                        threads: threads as usize,
                    };
                    exact_min_word_observed(n, &cfg, &|i| {
                        eprintln!(
                            "incumbent length {} after {:.3}s, {} nodes",
                            i.length,
                            i.elapsed.as_secs_f64(),
                            i.nodes
                        );
                    })?
                }
            };
            eprintln!("{} letters in {:.3}s", r.length, r.elapsed.as_secs_f64());
            let artifact = render_construction(&r, emit, format)?;
            Ok(Outcome { artifact, code: if r.budget_exhausted { BUDGET_EXHAUSTED } else { 0 } })
        }
        Command::VerifyWord { n, word, format } => {
            let w = UniversalWord::parse(&word, n as usize)?;
            let r = verify_universal_word(&w);
            let artifact = match format {
                TextFormat::Json => {
                    json!({
                        "n": r.n,
                        "ok": r.ok,
                        "length": w.len(),
                        "classes": r.classes,
                        "missing": r.missing.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                    .to_string()
                        + "\n"
                }
                TextFormat::Text => pass_fail(r.ok, r.missing.iter().map(|p| format!("inc({p})"))),
            };
            Ok(Outcome { artifact, code: if r.ok { 0 } else { VERIFICATION_FAILED } })
        }
        Command::VerifyMatrix { file, n, format } => {
            let text = fs::read_to_string(&file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let (t, header_n) = ToricBinaryMatrix::from_text(&text)?;
            let r = t.is_superpermutation_matrix(n.unwrap_or(header_n))?;
            let artifact = match format {
                TextFormat::Json => serde_json::to_string(&r).expect("report serializes") + "\n",
                TextFormat::Text => pass_fail(r.ok, r.missing.iter().map(ToString::to_string)),
            };
            Ok(Outcome { artifact, code: if r.ok { 0 } else { VERIFICATION_FAILED } })
        }
        Command::Classic { n, construct, verify, bounds } => {
            let n = n as usize;
            let (construct, bounds) = if !construct && !verify && !bounds { (true, true) } else { (construct, bounds) };
            let mut out = String::new();
            let mut code = 0;
            if construct || verify {
                let w = ashlock_tillotson(n)?;
                if construct {
                    out += &format!("{w}\nlength {}\n", w.len());
                }
                if verify {
                    let r = is_superpermutation(w.word())?;
                    out += &pass_fail(r.ok, r.missing.iter().map(ToString::to_string));
                    if !r.ok {
                        code = VERIFICATION_FAILED;
                    }
                }
            }
            if bounds {
                let b = classic_bounds(n)?;
                out += &format!("lower {}\nupper {}\n", b.lower, b.upper);
            }
            Ok(Outcome { artifact: out, code })
        }
        Command::Acceptance { only, format } => {
            let results = match only {
                Some(id) => acceptance::run(id as usize).into_iter().collect(),
                None => acceptance::run_all(),
            };
            let failed = results.iter().any(|r| !r.pass);
            let artifact = match format {
                TextFormat::Json => serde_json::to_string_pretty(&results).expect("results serialize") + "\n",
                TextFormat::Text => results.iter().map(|r| format!("{r}\n")).collect(),
            };
            Ok(Outcome { artifact, code: if failed { VERIFICATION_FAILED } else { 0 } })
        }
    }
}

fn pass_fail(ok: bool, missing: impl Iterator<Item = String>) -> String {
    if ok {
        return "PASS\n".into();
    }
    let missing: Vec<String> = missing.collect();
    format!("FAIL: {} missing\n{}\n", missing.len(), missing.join("\n"))
}

fn render_construction(r: &SearchResult, emit: ConstructEmit, format: TextFormat) -> superperm::Result<String> {
    let body = match emit {
        ConstructEmit::Word => r.word.to_string(),
        ConstructEmit::Matrix => word_to_matrix(&r.word).to_text(r.n).trim_end().to_string(),
        ConstructEmit::Path => path_text(&r.path),
    };
    Ok(match format {
        TextFormat::Text => body + "\n",
        TextFormat::Json => {
            json!({
                "n": r.n,
                "method": r.method,
                "length": r.length,
                "weight": r.weight,
                "optimal": r.optimal,
                "budget_exhausted": r.budget_exhausted,
                "nodes_expanded": r.nodes_expanded,
                "word": r.word.to_string(),
                "emit": body,
            })
            .to_string()
                + "\n"
        }
    })
}

/// Canonical representatives along the path, space separated.
fn path_text(path: &CoveringPath) -> String {
    let reps = superperm::perm::canonical_reps(path.n);
    path.vertices.iter().map(|&v| reps[v].to_string()).collect::<Vec<_>>().join(" ")
}
