//! Materializes the trips mapping over its CSV files and prints N-Triples.

use std::path::Path;

use rmlprune::bench::{load_mapping, materialize_dir};
use rmlprune::pruner::Pruned;
use rmlprune::rdf::to_ntriples_string;

fn main() -> rmlprune::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let m = load_mapping(&dir.join("trips.rml.ttl"))?;
    let g = materialize_dir(&Pruned::Mapping(m.expr), &dir)?;
    print!("{}", to_ntriples_string(&g));
    eprintln!("{} triples", g.len());
    Ok(())
}
