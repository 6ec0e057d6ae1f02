//! Runs a SPARQL query over the graph of the full and of the pruned trips
//! mapping and shows that both give the same rows.

use std::path::Path;

use rmlprune::bench::{load_mapping, materialize_dir};
use rmlprune::pruner::{prune, Pruned};
use rmlprune::sparql::{collect_triple_patterns, parse_query, to_tsv};

const QUERY: &str = r#"
PREFIX ex: <http://example.com/>
SELECT ?trip ?name WHERE {
  ?trip ex:route ?route .
  ?route ex:name ?name .
}"#;

fn main() -> rmlprune::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let m = load_mapping(&dir.join("trips.rml.ttl"))?.expr;
    let q = parse_query(QUERY)?;
    let patterns: Vec<_> = collect_triple_patterns(&q).into_iter().collect();
    let pruned = prune(&patterns, &m);
    println!("{} -> {} TrMap-expressions", m.len(), pruned.len());

    let full_rows = q.evaluate(&materialize_dir(&Pruned::Mapping(m), &dir)?)?;
    let pruned_rows = q.evaluate(&materialize_dir(&pruned, &dir)?)?;
    assert_eq!(full_rows, pruned_rows);
    print!("{}", to_tsv(&q.projected_vars(), &pruned_rows));
    Ok(())
}
