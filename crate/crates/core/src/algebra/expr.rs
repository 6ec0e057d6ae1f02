use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::relation::Attribute;
use crate::error::{Error, Result};
use crate::rdf::{BlankNode, Iri, RdfTerm};

/// One atomic piece of a template-or-reference-based expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorbPart {
    Str(String),
    Attr(Attribute),
}

/// A template-or-reference-based (torb) string expression: a string
/// constant, an attribute reference, or a flat concatenation of at least two
/// of those.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorbExpr {
    Str(String),
    Attr(Attribute),
    Concat(Vec<TorbPart>),
}

impl TorbExpr {
    pub fn attr(name: &str) -> Self {
        TorbExpr::Attr(Attribute::new(name))
    }

    /// Builds the expression for a sequence of parts: adjacent string parts
    /// are merged, and a single part stands on its own.
    pub fn from_parts(parts: Vec<TorbPart>) -> Self {
        let mut merged: Vec<TorbPart> = Vec::with_capacity(parts.len());
        for part in parts {
            match (merged.last_mut(), part) {
                (Some(TorbPart::Str(prev)), TorbPart::Str(s)) => prev.push_str(&s),
                (_, TorbPart::Str(s)) if s.is_empty() => {}
                (_, p) => merged.push(p),
            }
        }
        match merged.len() {
            0 => TorbExpr::Str(String::new()),
            1 => match merged.pop().unwrap() {
                TorbPart::Str(s) => TorbExpr::Str(s),
                TorbPart::Attr(a) => TorbExpr::Attr(a),
            },
            _ => TorbExpr::Concat(merged),
        }
    }

    /// The parts of the expression in order; a non-concatenation is a single part.
    pub fn parts(&self) -> Vec<TorbPart> {
        match self {
            TorbExpr::Str(s) => vec![TorbPart::Str(s.clone())],
            TorbExpr::Attr(a) => vec![TorbPart::Attr(a.clone())],
            TorbExpr::Concat(parts) => parts.clone(),
        }
    }

    /// `attrs(φ)`
    pub fn attrs(&self) -> BTreeSet<Attribute> {
        match self {
            TorbExpr::Str(_) => BTreeSet::new(),
            TorbExpr::Attr(a) => [a.clone()].into(),
            TorbExpr::Concat(parts) => parts
                .iter()
                .filter_map(|p| match p {
                    TorbPart::Attr(a) => Some(a.clone()),
                    TorbPart::Str(_) => None,
                })
                .collect(),
        }
    }

    fn check(&self) -> Result<()> {
        if let TorbExpr::Concat(parts) = self {
            if parts.len() < 2 {
                return Err(Error::Structural(
                    "concatenation needs at least two parts".into(),
                ));
            }
        }
        Ok(())
    }
}

/// The extend expression forms admitted inside a TrMap-expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendExpr {
    /// A constant RDF term.
    Const(RdfTerm),
    /// A constant blank node.
    BNode(BlankNode),
    ToLiteral { body: TorbExpr, datatype: Iri },
    ToIri { body: TorbExpr, base: Iri },
    ToBNode { body: TorbExpr },
}

impl ExtendExpr {
    pub fn body(&self) -> Option<&TorbExpr> {
        match self {
            ExtendExpr::ToLiteral { body, .. }
            | ExtendExpr::ToIri { body, .. }
            | ExtendExpr::ToBNode { body } => Some(body),
            ExtendExpr::Const(_) | ExtendExpr::BNode(_) => None,
        }
    }

    pub fn attrs(&self) -> BTreeSet<Attribute> {
        self.body().map(TorbExpr::attrs).unwrap_or_default()
    }

    /// True if every evaluation yields a literal or ε.
    fn is_literal_valued(&self) -> bool {
        matches!(
            self,
            ExtendExpr::ToLiteral { .. } | ExtendExpr::Const(RdfTerm::Literal(_))
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SourceType {
    Csv,
}

impl SourceType {
    pub fn id(self) -> &'static str {
        match self {
            SourceType::Csv => "csv",
        }
    }
}

/// A source reference: the symbolic name an Extract reads from.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceRef(String);

impl SourceRef {
    pub fn new(s: impl Into<String>) -> Self {
        SourceRef(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for SourceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for SourceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parameters of an Extract operator: source reference, source type,
/// iterator query, and the attribute-to-selector map ℙ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtractSpec {
    pub source: SourceRef,
    pub source_type: SourceType,
    pub iterator: String,
    pub attr_queries: BTreeMap<Attribute, String>,
}

impl ExtractSpec {
    pub fn csv(source: impl Into<String>, attr_queries: BTreeMap<Attribute, String>) -> Self {
        ExtractSpec {
            source: SourceRef::new(source),
            source_type: SourceType::Csv,
            iterator: crate::csv_source::ROWS_QUERY.to_string(),
            attr_queries,
        }
    }

    pub fn attrs(&self) -> BTreeSet<Attribute> {
        self.attr_queries.keys().cloned().collect()
    }

    fn check(&self) -> Result<()> {
        if let Some(a) = self.attr_queries.keys().find(|a| a.is_special()) {
            return Err(Error::Structural(format!(
                "reserved attribute {a} in the attribute-query map of {}",
                self.source
            )));
        }
        Ok(())
    }
}

/// Where a TrMap-expression came from: a triples map and the index of its
/// (normalized, singleton) predicate-object map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub triples_map: String,
    pub pom: usize,
}

impl Provenance {
    pub fn new(triples_map: impl Into<String>, pom: usize) -> Self {
        Provenance {
            triples_map: triples_map.into(),
            pom,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#pom{}", self.triples_map, self.pom)
    }
}

/// The algebraic shape of a TrMap-expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrMapBody {
    /// `Extend_o(Extend_p(Extend_s(Extract)))`
    Simple {
        subject: ExtendExpr,
        predicate: ExtendExpr,
        object: ExtendExpr,
        extract: ExtractSpec,
    },
    /// `Extend_o(Join_J(Extend_p(Extend_s(Extract)), Extract'))`
    Joined {
        subject: ExtendExpr,
        predicate: ExtendExpr,
        object: ExtendExpr,
        extract: ExtractSpec,
        parent_extract: ExtractSpec,
        join: BTreeSet<(Attribute, Attribute)>,
    },
}

impl TrMapBody {
    pub fn subject(&self) -> &ExtendExpr {
        match self {
            TrMapBody::Simple { subject, .. } | TrMapBody::Joined { subject, .. } => subject,
        }
    }

    pub fn predicate(&self) -> &ExtendExpr {
        match self {
            TrMapBody::Simple { predicate, .. } | TrMapBody::Joined { predicate, .. } => predicate,
        }
    }

    pub fn object(&self) -> &ExtendExpr {
        match self {
            TrMapBody::Simple { object, .. } | TrMapBody::Joined { object, .. } => object,
        }
    }

    pub fn extract(&self) -> &ExtractSpec {
        match self {
            TrMapBody::Simple { extract, .. } | TrMapBody::Joined { extract, .. } => extract,
        }
    }

    pub fn parent_extract(&self) -> Option<&ExtractSpec> {
        match self {
            TrMapBody::Simple { .. } => None,
            TrMapBody::Joined { parent_extract, .. } => Some(parent_extract),
        }
    }

    pub fn is_joined(&self) -> bool {
        matches!(self, TrMapBody::Joined { .. })
    }

    fn check(&self) -> Result<()> {
        let extract = self.extract();
        extract.check()?;
        let dom = extract.attrs();
        for (pos, e) in [("subject", self.subject()), ("predicate", self.predicate())] {
            if let Some(b) = e.body() {
                b.check()?;
            }
            if !e.attrs().is_subset(&dom) {
                return Err(Error::Structural(format!(
                    "{pos} expression references attributes outside the extract: {:?}",
                    e.attrs().difference(&dom).collect::<Vec<_>>()
                )));
            }
        }
        let object = self.object();
        if let Some(b) = object.body() {
            b.check()?;
        }
        match self {
            TrMapBody::Simple { .. } => {
                if !object.attrs().is_subset(&dom) {
                    return Err(Error::Structural(
                        "object expression references attributes outside the extract".into(),
                    ));
                }
            }
            TrMapBody::Joined {
                parent_extract,
                join,
                ..
            } => {
                parent_extract.check()?;
                let parent_dom = parent_extract.attrs();
                if !dom.is_disjoint(&parent_dom) {
                    return Err(Error::Structural(format!(
                        "joined extracts share attributes {:?}",
                        dom.intersection(&parent_dom).collect::<Vec<_>>()
                    )));
                }
                if let Some((a, b)) = join
                    .iter()
                    .find(|(a, b)| !dom.contains(a) || !parent_dom.contains(b))
                {
                    return Err(Error::Structural(format!(
                        "join condition ({a}, {b}) is not over the child and parent extracts"
                    )));
                }
                if object.is_literal_valued() {
                    return Err(Error::Structural(
                        "the object of a joined TrMap-expression cannot be a literal".into(),
                    ));
                }
                let all: BTreeSet<_> = dom.union(&parent_dom).cloned().collect();
                if !object.attrs().is_subset(&all) {
                    return Err(Error::Structural(
                        "object expression references attributes outside both extracts".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The image of one (triples map, predicate-object map) pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrMapExpr {
    provenance: Provenance,
    body: TrMapBody,
}

impl TrMapExpr {
    pub fn new(provenance: Provenance, body: TrMapBody) -> Result<Self> {
        body.check()?;
        Ok(TrMapExpr { provenance, body })
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn body(&self) -> &TrMapBody {
        &self.body
    }

    /// The full operator tree of this TrMap-expression.
    pub fn to_expr(&self) -> Expr {
        let extend_sp = |extract: &ExtractSpec| Expr::Extend {
            attr: Attribute::predicate(),
            expr: self.body.predicate().clone(),
            input: Box::new(Expr::Extend {
                attr: Attribute::subject(),
                expr: self.body.subject().clone(),
                input: Box::new(Expr::Extract(extract.clone())),
            }),
        };
        let inner = match &self.body {
            TrMapBody::Simple { extract, .. } => extend_sp(extract),
            TrMapBody::Joined {
                extract,
                parent_extract,
                join,
                ..
            } => Expr::Join {
                left: Box::new(extend_sp(extract)),
                right: Box::new(Expr::Extract(parent_extract.clone())),
                conditions: join.clone(),
            },
        };
        Expr::Extend {
            attr: Attribute::object(),
            expr: self.body.object().clone(),
            input: Box::new(inner),
        }
    }

    /// `Project_{@s,@p,@o}(self)`
    pub fn to_projected_expr(&self) -> Expr {
        Expr::Project {
            attrs: Attribute::specials(),
            input: Box::new(self.to_expr()),
        }
    }
}

/// A union of projection-wrapped TrMap-expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmlMappingExpr {
    trmaps: Vec<TrMapExpr>,
}

impl RmlMappingExpr {
    pub fn new(trmaps: Vec<TrMapExpr>) -> Result<Self> {
        if trmaps.is_empty() {
            return Err(Error::Structural(
                "a mapping expression needs at least one TrMap-expression".into(),
            ));
        }
        Ok(RmlMappingExpr { trmaps })
    }

    pub fn trmaps(&self) -> &[TrMapExpr] {
        &self.trmaps
    }

    /// `trmaps(M)` as a set, identified by provenance.
    pub fn trmap_set(&self) -> BTreeSet<&Provenance> {
        self.trmaps.iter().map(TrMapExpr::provenance).collect()
    }

    pub fn len(&self) -> usize {
        self.trmaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trmaps.is_empty()
    }

    /// The left-deep union `((Π(M1) ∪ Π(M2)) ∪ ...)`.
    pub fn to_expr(&self) -> Expr {
        let mut iter = self.trmaps.iter();
        let first = iter.next().expect("non-empty").to_projected_expr();
        iter.fold(first, |acc, m| Expr::Union {
            left: Box::new(acc),
            right: Box::new(m.to_projected_expr()),
        })
    }
}

/// A node of the mapping algebra fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Extract(ExtractSpec),
    Extend {
        attr: Attribute,
        expr: ExtendExpr,
        input: Box<Expr>,
    },
    Project {
        attrs: BTreeSet<Attribute>,
        input: Box<Expr>,
    },
    Join {
        left: Box<Expr>,
        right: Box<Expr>,
        conditions: BTreeSet<(Attribute, Attribute)>,
    },
    Union {
        left: Box<Expr>,
        right: Box<Expr>,
    },
}
