//! The mapping-algebra fragment that RML triples maps translate into:
//! mapping relations, torb and extend expressions, TrMap-expressions, source
//! assignments, and their evaluation.

mod dump;
mod eval;
mod expr;
mod relation;
mod source;

pub use eval::{eval_expr, eval_extend, eval_torb, materialize, resolve_iri, s2b};
pub use expr::{
    Expr, ExtendExpr, ExtractSpec, Provenance, RmlMappingExpr, SourceRef, SourceType, TorbExpr,
    TorbPart, TrMapBody, TrMapExpr,
};
pub use relation::{graph_from_relation, Attribute, MappingRelation, MappingTuple, Value};
pub use source::{valid_input, DataObject, SourceAssignment};
