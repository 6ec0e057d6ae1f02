use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use rmlprune::bench::{
    answers, generate_corpus, load_mapping, load_query, materialize_dir, prune_mapping, run_bench,
    BenchConfig, CorpusSpec,
};
use rmlprune::pruner::{PatternOptions, Pruned};
use rmlprune::rdf::{read_ntriples, to_ntriples_string};
use rmlprune::rml::is_fully_pruned;
use rmlprune::sparql::to_tsv;
use rmlprune::Result;

#[derive(Parser)]
#[command(name = "rmlprune", version, about = "Query-aware pruning of RML mappings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct PruneFlags {
    /// Treat every referenced value as non-empty (`.+` per reference).
    #[arg(long, action = ArgAction::Set, default_value_t = true, num_args = 0..=1, default_missing_value = "true")]
    assume_nonempty_refs: bool,
}

impl PruneFlags {
    fn options(self) -> PatternOptions {
        PatternOptions {
            assume_nonempty_refs: self.assume_nonempty_refs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Translate a mapping into the algebra and count its TrMap-expressions.
    Translate {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        dump_algebra: bool,
    },
    /// Prune a mapping for a query and write the remaining mapping.
    Prune {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print why each TrMap-expression was kept or dropped.
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        flags: PruneFlags,
    },
    /// Materialize a mapping over CSV files into N-Triples.
    Materialize {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a BGP query over an N-Triples graph.
    Query {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
    /// Compare full and pruned pipelines for every query in a directory.
    Bench {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        queries_dir: PathBuf,
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        repetitions: usize,
        #[command(flatten)]
        flags: PruneFlags,
    },
    /// Generate a synthetic transit corpus: CSV data, mapping and queries.
    GenData {
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Translate {
            mapping,
            dump_algebra,
        } => {
            let m = load_mapping(&mapping)?;
            if dump_algebra {
                println!("{}", m.expr);
            }
            println!("{} TrMap-expressions", m.expr.len());
        }
        Command::Prune {
            mapping,
            query,
            out,
            explain,
            flags,
        } => {
            let m = load_mapping(&mapping)?;
            let q = load_query(&query)?;
            let outcome = prune_mapping(&m, &q, flags.options())?;
            if explain {
                eprint!("{}", outcome.trace);
            }
            if outcome.pruned.is_empty() {
                log::warn!("every TrMap-expression was pruned; the query has no answers");
            }
            write_or_print(out.as_deref(), &outcome.turtle)?;
            eprintln!(
                "{} → {} TrMap-expressions ({:.2} ms)",
                outcome.before,
                outcome.after(),
                outcome.prune_ms
            );
        }
        Command::Materialize {
            mapping,
            data_dir,
            out,
        } => {
            let text = fs::read_to_string(&mapping)?;
            let pruned = if is_fully_pruned(&text) {
                Pruned::Empty
            } else {
                Pruned::Mapping(load_mapping(&mapping)?.expr)
            };
            let g = materialize_dir(&pruned, &data_dir)?;
            write_or_print(out.as_deref(), &to_ntriples_string(&g))?;
            eprintln!("{} triples", g.len());
        }
        Command::Query { graph, query } => {
            let g = read_ntriples(&fs::read(&graph)?)?;
            let q = load_query(&query)?;
            let rows = q.evaluate(&g)?;
            print!("{}", to_tsv(&q.projected_vars(), &rows));
            eprintln!("{} rows", rows.len());
            debug_assert_eq!(answers(&q, &g).bgp.map(|r| r.len()), Some(rows.len()));
        }
        Command::Bench {
            mapping,
            queries_dir,
            data_dir,
            out,
            repetitions,
            flags,
        } => {
            let report = run_bench(&BenchConfig {
                mapping,
                queries_dir,
                data_dir,
                repetitions,
                options: flags.options(),
            })?;
            write_or_print(out.as_deref(), &report.to_csv())?;
            for r in report.rows.iter().filter(|r| !r.query.ends_with("-full")) {
                eprintln!(
                    "{:<12} {:>4} → {:<4} {}",
                    r.query,
                    r.trmaps_before,
                    r.trmaps_after,
                    if r.equal { "PASS" } else { "FAIL" }
                );
            }
            if !report.all_equal() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::GenData { scale, seed, out } => {
            let corpus = generate_corpus(CorpusSpec { scale, seed })?;
            corpus.write_to(&out)?;
            eprintln!("wrote {} files to {}", corpus.files.len(), out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RMLPRUNE_LOG", "warn")).init();
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
