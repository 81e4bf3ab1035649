use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ssg_core::autosearch::{self, ColoredGraph, Mode};
use ssg_core::bicoset::{BiCosetConfig, DEFAULT_COSET_BOUND};
use ssg_core::bigraph::{BipartiteGraph, Side, VertexPartition};
use ssg_core::families::{build_family, FamilyId};
use ssg_core::permgroup::PermGroup;
use ssg_core::report::verify_paper;

const EXIT_CLAIM_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "ssg", version, about = "Build and check edge-transitive bipartite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named family graph in bigraph format.
    Family {
        token: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a graph is semisymmetric.
    Check {
        /// Family token or path to a bigraph file.
        graph: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        /// Group on W ∪ U, one permutation per line in cycle notation. Families default to
        /// their constructed group.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Also write the verdict as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the order and generators of the automorphism group.
    Aut { graph: String },
    /// Collapse twin classes on one side.
    Quotient {
        graph: String,
        #[arg(long, value_enum, default_value_t = TwinSide::UTwins)]
        by: TwinSide,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace every U-vertex by p copies with the same neighborhood.
    Expand {
        graph: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test two graphs for isomorphism. Exits 0 when isomorphic, 1 when not.
    Iso { first: String, second: String },
    /// Run the claim suite for one prime and write a JSON report.
    VerifyPaper {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow the p = 7 suite.
        #[arg(long)]
        slow: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Certificate,
}

#[derive(Clone, Copy, ValueEnum)]
enum TwinSide {
    UTwins,
    WTwins,
}

fn config_from_env() -> Result<BiCosetConfig> {
    let coset_bound = match std::env::var("SSG_COSET_BOUND") {
        Ok(v) => v
            .parse()
            .with_context(|| format!("SSG_COSET_BOUND must be a positive integer, got {v:?}"))?,
        Err(_) => DEFAULT_COSET_BOUND,
    };
    Ok(BiCosetConfig { coset_bound })
}

/// A graph argument: a family token, else a file path.
fn load(arg: &str, config: &BiCosetConfig) -> Result<(BipartiteGraph, Option<PermGroup>)> {
    if Path::new(arg).is_file() {
        let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        let g = BipartiteGraph::from_text(&text).with_context(|| format!("parsing {arg}"))?;
        return Ok((g, None));
    }
    let id: FamilyId = arg
        .parse()
        .with_context(|| format!("{arg:?} is neither a file nor a family token"))?;
    let b = build_family(id, config)?;
    Ok((b.graph, Some(b.action)))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn yes_no(v: Option<bool>) -> String {
    v.map_or("undecided".to_string(), |b| b.to_string())
}

fn run(cli: Cli) -> Result<u8> {
    let config = config_from_env()?;
    match cli.command {
        Command::Family { token, out } => {
            let id: FamilyId = token.parse()?;
            let b = build_family(id, &config)?;
            emit(&b.graph.to_text(), out.as_deref())?;
            Ok(0)
        }
        Command::Check {
            graph,
            mode,
            witness,
            out,
        } => {
            let (g, action) = load(&graph, &config)?;
            let witness = match witness {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    Some(PermGroup::from_text(&text, g.vertex_count())?)
                }
                None => action,
            };
            let mode = match mode {
                ModeArg::Full => Mode::Full,
                ModeArg::Certificate => Mode::Certificate,
            };
            let v = autosearch::semisymmetry(&g, mode, witness.as_ref())?;
            println!("regular: {}", v.regular);
            println!("edge-transitive: {}", yes_no(v.edge_transitive));
            println!("vertex-transitive: {}", yes_no(v.vertex_transitive));
            println!("semisymmetric: {}", yes_no(v.semisymmetric));
            println!("certificate: {}", v.certificate);
            if let Some(path) = out {
                fs::write(&path, serde_json::to_string_pretty(&v)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if v.is_decided() { 0 } else { EXIT_UNDECIDED })
        }
        Command::Aut { graph } => {
            let (g, _) = load(&graph, &config)?;
            let aut = autosearch::automorphism_group(&ColoredGraph::new(g))?;
            println!("order {}", aut.order);
            for gen in &aut.generators {
                println!("{gen}");
            }
            Ok(0)
        }
        Command::Quotient { graph, by, out } => {
            let (g, _) = load(&graph, &config)?;
            let (pw, pu) = match by {
                TwinSide::UTwins => (VertexPartition::singletons(Side::W, g.n_w()), g.twin_classes(Side::U)),
                TwinSide::WTwins => (g.twin_classes(Side::W), VertexPartition::singletons(Side::U, g.n_u())),
            };
            emit(&g.quotient(&pw, &pu)?.to_text(), out.as_deref())?;
            Ok(0)
        }
        Command::Expand { graph, p, out } => {
            if p == 0 {
                bail!("--p must be positive");
            }
            let (g, _) = load(&graph, &config)?;
            emit(&g.expand(p).to_text(), out.as_deref())?;
            Ok(0)
        }
        Command::Iso { first, second } => {
            let (a, _) = load(&first, &config)?;
            let (b, _) = load(&second, &config)?;
            let same = autosearch::is_isomorphic(&a, &b)?;
            println!("{same}");
            Ok(if same { 0 } else { EXIT_CLAIM_FAILED })
        }
        Command::VerifyPaper { p, out, slow } => {
            let report = verify_paper(p, slow, &config)?;
            let mut json = report.to_json();
            json.push('\n');
            emit(&json, out.as_deref())?;
            eprintln!("{} claims passed, {} failed", report.passed, report.failed);
            for c in report.claims.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: expected {}, computed {}", c.id, c.expected, c.computed);
            }
            Ok(if report.all_pass() { 0 } else { EXIT_CLAIM_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
