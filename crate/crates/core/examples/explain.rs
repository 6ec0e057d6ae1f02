//! Checks every triple pattern of a query against every TrMap-expression and
//! prints the reason for each incompatibility.

use std::path::Path;

use rmlprune::bench::load_mapping;
use rmlprune::pruner::{incompatibility, regex_of, PatternOptions};
use rmlprune::sparql::{collect_triple_patterns, parse_query};

const QUERY: &str = r#"
PREFIX ex: <http://example.com/>
SELECT * WHERE {
  ?trip ex:route <http://example.com/route/R1> .
  ?trip ex:headsign "Airport" .
  <http://elsewhere.org/trip/1> ?p ?o .
}"#;

fn main() -> rmlprune::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let m = load_mapping(&dir.join("trips.rml.ttl"))?.expr;
    let q = parse_query(QUERY)?;
    let opts = PatternOptions::default();
    for tm in m.trmaps() {
        let subject = tm.body().subject().body().map(|b| regex_of(b, opts).as_str().to_string());
        println!("{}  subject pattern {}", tm.provenance(), subject.as_deref().unwrap_or("(constant)"));
        for tp in collect_triple_patterns(&q) {
            match incompatibility(&tp, tm, opts) {
                Some(why) => println!("    {tp}: {why}"),
                None => println!("    {tp}: compatible"),
            }
        }
    }
    Ok(())
}
