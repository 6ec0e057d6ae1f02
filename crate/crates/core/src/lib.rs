pub mod algebra;
pub mod bench;
pub mod csv_source;
pub mod error;
pub mod pruner;
pub mod rdf;
pub mod rml;
pub mod sparql;

pub use error::{Error, Result};
