use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rdf::{RdfGraph, RdfTerm, Triple};

/// An attribute name. `@s`, `@p` and `@o` are reserved for the subject,
/// predicate and object of the produced triples.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Attribute(String);

impl Attribute {
    pub const SUBJECT: &'static str = "@s";
    pub const PREDICATE: &'static str = "@p";
    pub const OBJECT: &'static str = "@o";

    pub fn new(name: impl Into<String>) -> Self {
        Attribute(name.into())
    }

    pub fn subject() -> Self {
        Attribute::new(Self::SUBJECT)
    }

    pub fn predicate() -> Self {
        Attribute::new(Self::PREDICATE)
    }

    pub fn object() -> Self {
        Attribute::new(Self::OBJECT)
    }

    pub fn specials() -> BTreeSet<Attribute> {
        [Self::subject(), Self::predicate(), Self::object()]
            .into_iter()
            .collect()
    }

    pub fn is_special(&self) -> bool {
        matches!(self.0.as_str(), Self::SUBJECT | Self::PREDICATE | Self::OBJECT)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A value in a mapping tuple: an RDF term or the error symbol ε.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Term(RdfTerm),
    Error,
}

impl Value {
    pub fn as_term(&self) -> Option<&RdfTerm> {
        match self {
            Value::Term(t) => Some(t),
            Value::Error => None,
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, Value::Error)
    }
}

impl From<RdfTerm> for Value {
    fn from(t: RdfTerm) -> Self {
        Value::Term(t)
    }
}

impl From<Option<RdfTerm>> for Value {
    fn from(t: Option<RdfTerm>) -> Self {
        t.map_or(Value::Error, Value::Term)
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Term(t) => t.fmt(f),
            Value::Error => f.write_str("ε"),
        }
    }
}

/// A partial function from attributes to values.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MappingTuple(BTreeMap<Attribute, Value>);

impl MappingTuple {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: &Attribute) -> Option<&Value> {
        self.0.get(a)
    }

    pub fn insert(&mut self, a: Attribute, v: Value) -> Option<Value> {
        self.0.insert(a, v)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Attribute> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Attribute, &Value)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_domain(&self, attrs: &BTreeSet<Attribute>) -> bool {
        self.0.len() == attrs.len() && self.0.keys().all(|a| attrs.contains(a))
    }

    /// `t[A]`: the restriction of the tuple to `attrs`.
    pub fn restrict(&self, attrs: &BTreeSet<Attribute>) -> MappingTuple {
        MappingTuple(
            self.0
                .iter()
                .filter(|(a, _)| attrs.contains(*a))
                .map(|(a, v)| (a.clone(), v.clone()))
                .collect(),
        )
    }

    /// `t1 ∪ t2` for tuples with disjoint domains.
    pub fn union(&self, other: &MappingTuple) -> MappingTuple {
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(a, v)| (a.clone(), v.clone())));
        out
    }
}

impl FromIterator<(Attribute, Value)> for MappingTuple {
    fn from_iter<I: IntoIterator<Item = (Attribute, Value)>>(iter: I) -> Self {
        MappingTuple(iter.into_iter().collect())
    }
}

impl fmt::Debug for MappingTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

/// A mapping relation `(A, I)`: every tuple in `I` has domain exactly `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MappingRelation {
    attrs: BTreeSet<Attribute>,
    tuples: BTreeSet<MappingTuple>,
}

impl MappingRelation {
    pub fn new(attrs: BTreeSet<Attribute>, tuples: BTreeSet<MappingTuple>) -> Result<Self> {
        if let Some(bad) = tuples.iter().find(|t| !t.has_domain(&attrs)) {
            return Err(Error::Structural(format!(
                "tuple {bad:?} does not have domain {attrs:?}"
            )));
        }
        Ok(MappingRelation { attrs, tuples })
    }

    pub fn empty(attrs: BTreeSet<Attribute>) -> Self {
        MappingRelation {
            attrs,
            tuples: BTreeSet::new(),
        }
    }

    pub(crate) fn from_parts_unchecked(
        attrs: BTreeSet<Attribute>,
        tuples: BTreeSet<MappingTuple>,
    ) -> Self {
        debug_assert!(tuples.iter().all(|t| t.has_domain(&attrs)));
        MappingRelation { attrs, tuples }
    }

    pub fn attrs(&self) -> &BTreeSet<Attribute> {
        &self.attrs
    }

    pub fn tuples(&self) -> &BTreeSet<MappingTuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// The RDF graph of a relation: one triple per tuple whose `@s`, `@p`, `@o`
/// values form an RDF triple. Tuples that do not are dropped.
pub fn graph_from_relation(r: &MappingRelation) -> Result<RdfGraph> {
    let (s, p, o) = (Attribute::subject(), Attribute::predicate(), Attribute::object());
    for a in [&s, &p, &o] {
        if !r.attrs.contains(a) {
            return Err(Error::Structural(format!(
                "relation lacks special attribute {a}"
            )));
        }
    }
    Ok(r.tuples
        .iter()
        .filter_map(|t| {
            let s = t.get(&s)?.as_term()?;
            let p = t.get(&p)?.as_term()?;
            let o = t.get(&o)?.as_term()?;
            Triple::from_terms(s, p, o)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Literal;

    fn ex(s: &str) -> Value {
        Value::Term(RdfTerm::iri(format!("http://ex.org/{s}")).unwrap())
    }

    fn spo(s: Value, p: Value, o: Value) -> MappingTuple {
        [
            (Attribute::subject(), s),
            (Attribute::predicate(), p),
            (Attribute::object(), o),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn empty_relation_gives_empty_graph() {
        let r = MappingRelation::empty(Attribute::specials());
        assert!(graph_from_relation(&r).unwrap().is_empty());
    }

    #[test]
    fn single_tuple_projects_to_triple() {
        let lit = Value::Term(Literal::string("v").into());
        let r = MappingRelation::new(
            Attribute::specials(),
            [spo(ex("a"), ex("p"), lit)].into_iter().collect(),
        )
        .unwrap();
        let g = graph_from_relation(&r).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(
            g.sorted()[0].to_string(),
            "<http://ex.org/a> <http://ex.org/p> \"v\" ."
        );
    }

    #[test]
    fn non_triples_dropped() {
        let lit = Value::Term(Literal::string("v").into());
        let tuples = [
            spo(ex("a"), ex("p"), Value::Error),
            spo(Value::Error, ex("p"), ex("b")),
            spo(lit.clone(), ex("p"), ex("b")),
            spo(ex("a"), lit, ex("b")),
        ];
        let r = MappingRelation::new(Attribute::specials(), tuples.into_iter().collect()).unwrap();
        assert!(graph_from_relation(&r).unwrap().is_empty());
    }

    #[test]
    fn missing_special_attribute_is_structural_error() {
        let attrs: BTreeSet<_> = [Attribute::subject(), Attribute::predicate()].into();
        let r = MappingRelation::empty(attrs);
        assert!(matches!(graph_from_relation(&r), Err(Error::Structural(_))));
    }

    #[test]
    fn tuple_domain_must_match() {
        let t: MappingTuple = [(Attribute::new("x"), Value::Error)].into_iter().collect();
        assert!(MappingRelation::new(Attribute::specials(), [t].into()).is_err());
    }
}
