//! Parses an RML mapping and prints its algebraic form.
//!
//! cargo run --example translate [mapping.rml.ttl]

use std::path::PathBuf;

use rmlprune::bench::load_mapping;

fn main() -> rmlprune::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/trips.rml.ttl")
    });
    let m = load_mapping(&path)?;
    println!("{} triples maps, {} TrMap-expressions", m.doc.triples_maps.len(), m.expr.len());
    for tm in m.expr.trmaps() {
        let form = if tm.body().is_joined() { "joined" } else { "simple" };
        println!("  {} ({form})", tm.provenance());
    }
    println!("\n{}", m.expr);
    Ok(())
}
