//! Prunes the airport mapping for a two-pattern query and prints the
//! decision for every TrMap-expression along with the remaining mapping.

use std::path::Path;

use rmlprune::bench::{load_mapping, load_query, prune_mapping};
use rmlprune::pruner::PatternOptions;

fn main() -> rmlprune::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mapping = load_mapping(&dir.join("airports.rml.ttl"))?;
    let query = load_query(&dir.join("airports.rq"))?;
    let outcome = prune_mapping(&mapping, &query, PatternOptions::default())?;
    print!("{}", outcome.trace);
    println!("{} -> {} TrMap-expressions\n", outcome.before, outcome.after());
    print!("{}", outcome.turtle);
    Ok(())
}
