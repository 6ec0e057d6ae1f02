use std::collections::{HashMap, HashSet};
use std::fmt;

use super::term::{Iri, RdfTerm};
use crate::error::{Error, Result};

/// An RDF triple: subject is an IRI or blank node, predicate an IRI.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: RdfTerm,
    predicate: Iri,
    object: RdfTerm,
}

impl Triple {
    pub fn new(subject: RdfTerm, predicate: Iri, object: RdfTerm) -> Result<Self> {
        if subject.is_literal() {
            return Err(Error::InvalidTerm(format!(
                "literal {subject} in subject position"
            )));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    /// Builds a triple from three arbitrary terms, or `None` if they do not form one.
    pub fn from_terms(s: &RdfTerm, p: &RdfTerm, o: &RdfTerm) -> Option<Self> {
        let predicate = p.as_iri()?.clone();
        Triple::new(s.clone(), predicate, o.clone()).ok()
    }

    pub fn subject(&self) -> &RdfTerm {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &RdfTerm {
        &self.object
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A set of triples with a predicate index for pattern scans.
#[derive(Clone, Default)]
pub struct RdfGraph {
    triples: HashSet<Triple>,
    by_predicate: HashMap<Iri, Vec<Triple>>,
}

impl RdfGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a triple; returns false if it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.triples.contains(&triple) {
            return false;
        }
        self.by_predicate
            .entry(triple.predicate.clone())
            .or_default()
            .push(triple.clone());
        self.triples.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Triples with the given predicate.
    pub fn with_predicate<'a>(&'a self, p: &Iri) -> &'a [Triple] {
        self.by_predicate.get(p).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All triples in a deterministic (sorted) order.
    pub fn sorted(&self) -> Vec<&Triple> {
        let mut v: Vec<&Triple> = self.triples.iter().collect();
        v.sort();
        v
    }

    pub fn is_subgraph_of(&self, other: &RdfGraph) -> bool {
        self.triples.iter().all(|t| other.contains(t))
    }
}

impl PartialEq for RdfGraph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for RdfGraph {}

impl fmt::Debug for RdfGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sorted()).finish()
    }
}

impl FromIterator<Triple> for RdfGraph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = RdfGraph::new();
        g.extend(iter);
        g
    }
}

impl Extend<Triple> for RdfGraph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}
