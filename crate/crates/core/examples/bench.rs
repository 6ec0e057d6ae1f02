//! Generates the synthetic transit corpus into a temporary directory and runs
//! the full and pruned pipelines for every query.
//!
//! cargo run --release --example bench [scale]

use rmlprune::bench::{generate_corpus, run_bench, BenchConfig, CorpusSpec};
use rmlprune::pruner::PatternOptions;

fn main() -> rmlprune::Result<()> {
    let scale = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let dir = std::env::temp_dir().join(format!("rmlprune-bench-{}", std::process::id()));
    generate_corpus(CorpusSpec { scale, seed: 42 })?.write_to(&dir)?;
    let report = run_bench(&BenchConfig {
        mapping: dir.join("mapping.rml.ttl"),
        queries_dir: dir.join("queries"),
        data_dir: dir.join("data"),
        repetitions: 3,
        options: PatternOptions::default(),
    })?;
    print!("{}", report.to_csv());
    std::fs::remove_dir_all(&dir)?;
    if !report.all_equal() {
        eprintln!("answers differ for at least one query");
        std::process::exit(1);
    }
    Ok(())
}
