//! RDF terms, graphs, triple patterns and basic graph pattern evaluation.

mod graph;
mod ntriples;
mod pattern;
mod term;

pub use graph::{RdfGraph, Triple};
pub use ntriples::{read_ntriples, to_ntriples_string, write_ntriples};
pub(crate) use ntriples::{from_ox_iri, from_ox_term, to_ox_term};
pub use pattern::{
    apply_solution, eval_bgp, eval_triple_pattern, Bgp, PatternTerm, SolutionMapping,
    TriplePattern, Variable,
};
pub use term::{
    has_scheme, is_valid_iri, rdf_type, xsd_string, BlankNode, Iri, Literal, RdfTerm, RDF_TYPE,
    XSD, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
};
pub(crate) use term::write_quoted;
