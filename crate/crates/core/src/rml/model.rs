use std::fmt;

use crate::error::{Error, Result};
use crate::rdf::{rdf_type, Iri, RdfTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermType {
    Iri,
    BlankNode,
    Literal,
}

/// Where a term map sits in a triples map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Subject,
    Predicate,
    Object,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Subject => "subject map",
            Position::Predicate => "predicate map",
            Position::Object => "object map",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplatePart {
    Text(String),
    Ref(String),
}

/// A parsed `rml:template` string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Template {
    parts: Vec<TemplatePart>,
}

impl Template {
    /// `{name}` is a reference; `\{`, `\}` and `\\` are literal characters.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut text = String::new();
        let mut chars = s.chars();
        while let Some(c) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some(e @ ('{' | '}' | '\\')) => text.push(e),
                    Some(e) => {
                        text.push('\\');
                        text.push(e);
                    }
                    None => text.push('\\'),
                },
                '{' => {
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some('}') => break,
                            Some('{') | None => {
                                return Err(Error::Rml(format!("unbalanced braces in template {s:?}")))
                            }
                            Some('\\') => match chars.next() {
                                Some(e) => name.push(e),
                                None => {
                                    return Err(Error::Rml(format!(
                                        "unbalanced braces in template {s:?}"
                                    )))
                                }
                            },
                            Some(c) => name.push(c),
                        }
                    }
                    if name.is_empty() {
                        return Err(Error::Rml(format!("empty reference in template {s:?}")));
                    }
                    if !text.is_empty() {
                        parts.push(TemplatePart::Text(std::mem::take(&mut text)));
                    }
                    parts.push(TemplatePart::Ref(name));
                }
                '}' => return Err(Error::Rml(format!("unbalanced braces in template {s:?}"))),
                c => text.push(c),
            }
        }
        if !text.is_empty() {
            parts.push(TemplatePart::Text(text));
        }
        Ok(Template { parts })
    }

    pub fn parts(&self) -> &[TemplatePart] {
        &self.parts
    }

    pub fn references(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().filter_map(|p| match p {
            TemplatePart::Ref(r) => Some(r.as_str()),
            TemplatePart::Text(_) => None,
        })
    }
}

fn escape_template(s: &str, out: &mut String) {
    for c in s.chars() {
        if matches!(c, '{' | '}' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for p in &self.parts {
            match p {
                TemplatePart::Text(t) => escape_template(t, &mut out),
                TemplatePart::Ref(r) => {
                    out.push('{');
                    escape_template(r, &mut out);
                    out.push('}');
                }
            }
        }
        f.write_str(&out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermMapValue {
    Constant(RdfTerm),
    Reference(String),
    Template(Template),
}

/// A term map with its term type resolved.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermMap {
    pub value: TermMapValue,
    pub term_type: TermType,
    pub datatype: Option<Iri>,
}

impl TermMap {
    pub fn constant(t: impl Into<RdfTerm>) -> Self {
        let t = t.into();
        let term_type = match &t {
            RdfTerm::Iri(_) => TermType::Iri,
            RdfTerm::BNode(_) => TermType::BlankNode,
            RdfTerm::Literal(_) => TermType::Literal,
        };
        TermMap {
            value: TermMapValue::Constant(t),
            term_type,
            datatype: None,
        }
    }

    /// Resolves the term type (explicit, or the default for the position)
    /// and checks it against the position.
    pub fn new(
        value: TermMapValue,
        term_type: Option<TermType>,
        datatype: Option<Iri>,
        pos: Position,
    ) -> Result<Self> {
        let resolved = match (&value, term_type) {
            (TermMapValue::Constant(t), explicit) => {
                let m = TermMap::constant(t.clone());
                if explicit.is_some_and(|e| e != m.term_type) {
                    return Err(Error::Rml(format!(
                        "{pos}: term type contradicts the constant {t}"
                    )));
                }
                if datatype.is_some() {
                    return Err(Error::Rml(format!("{pos}: datatype on a constant term map")));
                }
                m.term_type
            }
            (_, Some(tt)) => tt,
            (TermMapValue::Reference(_), None) if pos == Position::Object => TermType::Literal,
            (_, None) if pos == Position::Object && datatype.is_some() => TermType::Literal,
            (_, None) => TermType::Iri,
        };
        match (pos, resolved) {
            (Position::Subject, TermType::Literal) => {
                return Err(Error::Rml("subject map cannot produce literals".into()))
            }
            (Position::Predicate, TermType::BlankNode | TermType::Literal) => {
                return Err(Error::Rml("predicate map must produce IRIs".into()))
            }
            _ => {}
        }
        if datatype.is_some() && resolved != TermType::Literal {
            return Err(Error::Rml(format!("{pos}: datatype requires term type Literal")));
        }
        if let TermMapValue::Constant(RdfTerm::BNode(_)) = value {
            return Err(Error::Rml(format!("{pos}: blank node constants are not allowed")));
        }
        Ok(TermMap {
            value,
            term_type: resolved,
            datatype,
        })
    }

    pub fn references(&self) -> Vec<&str> {
        match &self.value {
            TermMapValue::Constant(_) => Vec::new(),
            TermMapValue::Reference(r) => vec![r.as_str()],
            TermMapValue::Template(t) => t.references().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RefObjectMap {
    pub parent_triples_map: String,
    /// (child reference, parent reference)
    pub join_conditions: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjectMap {
    Term(TermMap),
    Ref(RefObjectMap),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredicateObjectMap {
    pub predicates: Vec<TermMap>,
    pub objects: Vec<ObjectMap>,
}

impl PredicateObjectMap {
    pub fn single(predicate: TermMap, object: ObjectMap) -> Self {
        PredicateObjectMap {
            predicates: vec![predicate],
            objects: vec![object],
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.predicates.len() == 1 && self.objects.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogicalSource {
    /// File path, resolved against the data directory.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriplesMap {
    /// The triples map node: an IRI, or `_:label` for a blank node.
    pub id: String,
    pub logical_source: LogicalSource,
    pub subject_map: TermMap,
    pub classes: Vec<Iri>,
    pub poms: Vec<PredicateObjectMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmlDocument {
    pub base_iri: Iri,
    pub prefixes: Vec<(String, String)>,
    pub triples_maps: Vec<TriplesMap>,
}

impl RmlDocument {
    pub fn triples_map(&self, id: &str) -> Option<&TriplesMap> {
        self.triples_maps.iter().find(|tm| tm.id == id)
    }

    pub fn is_normal(&self) -> bool {
        self.triples_maps
            .iter()
            .all(|tm| tm.classes.is_empty() && tm.poms.iter().all(PredicateObjectMap::is_singleton))
    }
}

/// Expands class assertions into `rdf:type` predicate-object maps and splits
/// every predicate-object map into singleton ones.
pub fn normalize(doc: &RmlDocument) -> RmlDocument {
    let mut out = doc.clone();
    for tm in &mut out.triples_maps {
        let mut poms = Vec::new();
        for pom in &tm.poms {
            for p in &pom.predicates {
                for o in &pom.objects {
                    poms.push(PredicateObjectMap::single(p.clone(), o.clone()));
                }
            }
        }
        for c in tm.classes.drain(..) {
            poms.push(PredicateObjectMap::single(
                TermMap::constant(rdf_type()),
                ObjectMap::Term(TermMap::constant(c)),
            ));
        }
        tm.poms = poms;
    }
    out
}
