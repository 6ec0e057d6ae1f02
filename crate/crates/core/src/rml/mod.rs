//! RML mapping documents: parsing (current and legacy vocabularies),
//! normalization, translation into the mapping algebra, and serialization of
//! pruned mappings.

mod model;
mod parse;
mod serialize;
mod translate;

pub use model::{
    normalize, LogicalSource, ObjectMap, Position, PredicateObjectMap, RefObjectMap, RmlDocument,
    Template, TemplatePart, TermMap, TermMapValue, TermType, TriplesMap,
};
pub use parse::parse_rml;
pub use serialize::serialize_pruned;
pub use translate::translate;

pub const RML: &str = "http://w3id.org/rml/";
pub const R2RML: &str = "http://www.w3.org/ns/r2rml#";
pub const RML_LEGACY: &str = "http://semweb.mmlab.be/ns/rml#";
pub const QL: &str = "http://semweb.mmlab.be/ns/ql#";

/// Base IRI for documents without `@base`.
pub const DEFAULT_BASE: &str = "http://example.com/base/";

/// First line of a serialized mapping from which everything was pruned.
pub const FULLY_PRUNED: &str = "# fully pruned: no triples map can contribute to the query";

pub fn is_fully_pruned(text: &str) -> bool {
    text.lines().next() == Some(FULLY_PRUNED)
}
