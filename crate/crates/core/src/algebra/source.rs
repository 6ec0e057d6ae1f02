use std::collections::BTreeMap;
use std::sync::Arc;

use super::expr::{ExtractSpec, RmlMappingExpr, SourceRef, SourceType, TrMapBody};
use crate::csv_source::{parse_csv, CsvDataObject};
use crate::error::Result;

/// A concrete data object bound to a source reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DataObject {
    Csv(Arc<CsvDataObject>),
    /// Bytes of some kind this crate does not evaluate (e.g. `"json"`).
    Other { kind: String, bytes: Arc<[u8]> },
}

impl DataObject {
    pub fn csv(d: CsvDataObject) -> Self {
        DataObject::Csv(Arc::new(d))
    }

    pub fn parse_csv(bytes: &[u8]) -> Result<Self> {
        parse_csv(bytes).map(DataObject::csv)
    }

    pub fn kind(&self) -> &str {
        match self {
            DataObject::Csv(_) => SourceType::Csv.id(),
            DataObject::Other { kind, .. } => kind,
        }
    }

    pub fn is_of(&self, t: SourceType) -> bool {
        match (self, t) {
            (DataObject::Csv(_), SourceType::Csv) => true,
            (DataObject::Other { .. }, _) => false,
        }
    }
}

/// σ: a partial map from source references to data objects.
#[derive(Clone, Debug, Default)]
pub struct SourceAssignment {
    bindings: BTreeMap<SourceRef, DataObject>,
}

impl SourceAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, source: impl Into<String>, data: DataObject) -> &mut Self {
        self.bindings.insert(SourceRef::new(source), data);
        self
    }

    pub fn with(mut self, source: impl Into<String>, data: DataObject) -> Self {
        self.bind(source, data);
        self
    }

    pub fn get(&self, source: &SourceRef) -> Option<&DataObject> {
        self.bindings.get(source)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SourceRef, &DataObject)> {
        self.bindings.iter()
    }

    /// Why `extract` cannot be evaluated under this assignment, if it cannot.
    pub(crate) fn check_extract(&self, extract: &ExtractSpec) -> Option<String> {
        match self.get(&extract.source) {
            None => Some(format!("source reference {} is unbound", extract.source)),
            Some(d) if !d.is_of(extract.source_type) => Some(format!(
                "source reference {} is bound to a {} object, expected {}",
                extract.source,
                d.kind(),
                extract.source_type.id()
            )),
            Some(_) => None,
        }
    }

    /// The first reason σ is not a valid input for `m`.
    pub fn invalid_reason(&self, m: &RmlMappingExpr) -> Option<String> {
        m.trmaps().iter().find_map(|tm| {
            let body = tm.body();
            self.check_extract(body.extract()).or_else(|| match body {
                TrMapBody::Joined { parent_extract, .. } => self.check_extract(parent_extract),
                TrMapBody::Simple { .. } => None,
            })
        })
    }
}

/// True iff σ binds every source reference of every TrMap-expression in `m`
/// to a data object of the extract's source type.
pub fn valid_input(sigma: &SourceAssignment, m: &RmlMappingExpr) -> bool {
    sigma.invalid_reason(m).is_none()
}
