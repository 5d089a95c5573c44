use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use kos_core::dot::export_dot;
use kos_core::io::{import_skos_subset, parse_corpus, parse_kos, serialize_kos};
use kos_core::{
    ancestors, compose, descendants, eval_query, lint_redundant, materialize_inferences, parse_query,
    select_constrained, HierKind, KnowledgeBase, KosError, RelationType, TransitivityStatus,
};

/// Faceted knowledge organization toolkit.
#[derive(Parser)]
#[command(name = "kos", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check structural constraints and print diagnostics
    Validate { kos: PathBuf },
    /// Report associative edges already implied by other edges
    Lint { kos: PathBuf },
    /// Print the hierarchical closure of a concept
    Closure {
        kos: PathBuf,
        #[arg(long)]
        concept: String,
        #[arg(long, value_enum, default_value_t = Dir::Down)]
        dir: Dir,
        #[arg(long, value_delimiter = ',', value_parser = parse_token::<HierKind>, default_value = "generic,partitive")]
        kinds: Vec<HierKind>,
        #[arg(long)]
        no_self: bool,
    },
    /// Select concepts below a base that carry a relation into a target
    Select {
        kos: PathBuf,
        #[arg(long)]
        under: String,
        #[arg(long, value_parser = parse_token::<RelationType>)]
        rel: RelationType,
        #[arg(long)]
        target: String,
    },
    /// Print every inferred edge with a witness path
    Infer { kos: PathBuf },
    /// Look up the composition of two relation types
    Compose {
        #[arg(long, value_parser = parse_token::<RelationType>)]
        r1: RelationType,
        #[arg(long, value_parser = parse_token::<RelationType>)]
        r2: RelationType,
    },
    /// Evaluate a query against a document corpus
    Query {
        kos: PathBuf,
        corpus: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// Convert a SKOS N-Triples file into a KOS file
    ImportSkos {
        ntriples: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the knowledge base as a Graphviz DOT graph
    ExportDot { kos: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Down,
    Up,
}

fn parse_token<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

/// A failed command: the code printed after `ERROR` and the exit status.
struct Failure {
    code: &'static str,
    message: String,
    status: u8,
}

impl Failure {
    fn usage(code: &'static str, message: impl Display) -> Self {
        Failure { code, message: message.to_string(), status: 2 }
    }
}

impl From<KosError> for Failure {
    fn from(e: KosError) -> Self {
        Failure { code: e.code(), message: e.to_string(), status: 1 }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage("E_IO", format!("{}: {e}", path.display())))
}

fn load_kos(path: &Path) -> Result<KnowledgeBase, Failure> {
    parse_kos(&read(path)?).map_err(|e| Failure::usage(e.code(), format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate { kos } => {
            let diags = load_kos(&kos)?.validate();
            for d in &diags {
                println!("{d}");
            }
            return Ok(u8::from(diags.iter().any(|d| d.is_error())));
        }
        Command::Lint { kos } => {
            for d in lint_redundant(&load_kos(&kos)?)? {
                println!("{d}");
            }
        }
        Command::Closure { kos, concept, dir, kinds, no_self } => {
            let kb = load_kos(&kos)?;
            let c = kb.resolve_ref(&concept)?;
            let members = match dir {
                Dir::Down => descendants(&kb, c.as_str(), &kinds, !no_self)?,
                Dir::Up => ancestors(&kb, c.as_str(), &kinds, !no_self)?,
            };
            for m in members {
                println!("{m}");
            }
        }
        Command::Select { kos, under, rel, target } => {
            let kb = load_kos(&kos)?;
            let (under, target) = (kb.resolve_ref(&under)?, kb.resolve_ref(&target)?);
            for c in select_constrained(&kb, under.as_str(), rel, target.as_str())? {
                println!("{c}");
            }
        }
        Command::Infer { kos } => {
            for e in materialize_inferences(&load_kos(&kos)?)? {
                println!("{e}");
            }
        }
        Command::Compose { r1, r2 } => {
            let entry = compose(r1, r2);
            match entry.result {
                Some(r) if entry.status == TransitivityStatus::Given => println!("{} {r}", entry.status),
                _ => println!("{}", entry.status),
            }
        }
        Command::Query { kos, corpus, q } => {
            let kb = load_kos(&kos)?;
            let docs = parse_corpus(&read(&corpus)?)
                .map_err(|e| Failure::usage(e.code(), format!("{}: {e}", corpus.display())))?;
            let query = parse_query(&q).map_err(|e| Failure::usage("E_QUERY", e))?;
            docs.check_terms(&kb)?;
            let result = eval_query(&kb, &docs, &query)?;
            for d in &result.docs {
                println!("{d}");
            }
            let terms: Vec<&str> = result.matched_terms.iter().map(|c| c.as_str()).collect();
            println!("matched-terms: {}", terms.join(" "));
        }
        Command::ImportSkos { ntriples, out } => {
            let imported = import_skos_subset(&read(&ntriples)?)
                .map_err(|e| Failure::usage(e.code(), format!("{}: {e}", ntriples.display())))?;
            fs::write(&out, serialize_kos(&imported.kb)).map_err(|e| Failure {
                code: "E_IO",
                message: format!("{}: {e}", out.display()),
                status: 1,
            })?;
            println!("skipped: {}", imported.skipped);
        }
        Command::ExportDot { kos } => print!("{}", export_dot(&load_kos(&kos)?)),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            eprintln!("\n{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(status) => ExitCode::from(status),
        Err(f) => {
            eprintln!("ERROR {}: {}", f.code, f.message);
            ExitCode::from(f.status)
        }
    }
}
