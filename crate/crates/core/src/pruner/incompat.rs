//! Incompatibility of IRIs with extend expressions and of triple patterns with
//! TrMap-expressions.
//!
//! Incompatibility is a syntactic, one-sided test: when it holds, no source
//! assignment can make the TrMap-expression produce a triple matching the
//! pattern. When it does not hold nothing is claimed, since satisfiability
//! itself is undecidable.

use std::fmt;

use super::pattern::{regex_of, MatchingPattern, PatternOptions};
use crate::algebra::{ExtendExpr, TrMapBody, TrMapExpr};
use crate::rdf::{Iri, Literal, PatternTerm, RdfTerm, TriplePattern};

/// Why an IRI cannot be produced by an extend expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IriConflict {
    /// The expression only produces literals.
    ToLiteral,
    /// The expression only produces blank nodes.
    BlankNode,
    /// The IRI matches neither the template pattern nor its base-prefixed form.
    PatternMismatch,
    /// The expression is a different constant.
    ConstantMismatch,
}

/// Which condition made a triple pattern incompatible with a TrMap-expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incompatibility {
    Subject(IriConflict),
    Predicate(IriConflict),
    Object(IriConflict),
    /// Literal object against an IRI-producing object expression.
    LiteralVsIri,
    /// Literal object against a blank-node-producing object expression.
    LiteralVsBlankNode,
    /// The literal's lexical form does not match the object template.
    LexicalMismatch,
    /// The literal's datatype differs from the object expression's.
    DatatypeMismatch,
    /// Literal object against a different constant literal.
    LiteralConstantMismatch,
    /// Literal object against the (never literal) object of a joined form.
    LiteralVsJoinedObject,
}

impl fmt::Display for IriConflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IriConflict::ToLiteral => "expression produces literals",
            IriConflict::BlankNode => "expression produces blank nodes",
            IriConflict::PatternMismatch => "IRI does not match the template pattern",
            IriConflict::ConstantMismatch => "IRI differs from the constant",
        })
    }
}

impl fmt::Display for Incompatibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incompatibility::Subject(c) => write!(f, "subject: {c}"),
            Incompatibility::Predicate(c) => write!(f, "predicate: {c}"),
            Incompatibility::Object(c) => write!(f, "object: {c}"),
            Incompatibility::LiteralVsIri => f.write_str("object: literal vs IRI expression"),
            Incompatibility::LiteralVsBlankNode => {
                f.write_str("object: literal vs blank node expression")
            }
            Incompatibility::LexicalMismatch => {
                f.write_str("object: lexical form does not match the template pattern")
            }
            Incompatibility::DatatypeMismatch => f.write_str("object: datatype mismatch"),
            Incompatibility::LiteralConstantMismatch => {
                f.write_str("object: literal differs from the constant")
            }
            Incompatibility::LiteralVsJoinedObject => {
                f.write_str("object: literal vs referencing object map")
            }
        }
    }
}

/// An extend expression with its matching patterns computed once.
#[derive(Clone, Debug)]
pub(crate) struct CompiledExtend<'a> {
    expr: &'a ExtendExpr,
    pattern: Option<MatchingPattern>,
    based: Option<MatchingPattern>,
}

impl<'a> CompiledExtend<'a> {
    pub(crate) fn new(expr: &'a ExtendExpr, opts: PatternOptions) -> Self {
        let (pattern, based) = match expr {
            ExtendExpr::ToIri { body, base } => {
                let p = regex_of(body, opts);
                let b = p.with_literal_prefix(base.as_str());
                (Some(p), Some(b))
            }
            ExtendExpr::ToLiteral { body, .. } => (Some(regex_of(body, opts)), None),
            _ => (None, None),
        };
        CompiledExtend {
            expr,
            pattern,
            based,
        }
    }

    pub(crate) fn iri_conflict(&self, u: &Iri) -> Option<IriConflict> {
        match self.expr {
            ExtendExpr::ToLiteral { .. } => Some(IriConflict::ToLiteral),
            ExtendExpr::ToBNode { .. }
            | ExtendExpr::BNode(_)
            | ExtendExpr::Const(RdfTerm::BNode(_)) => Some(IriConflict::BlankNode),
            ExtendExpr::ToIri { .. } => {
                let plain = self.pattern.as_ref().expect("compiled");
                let based = self.based.as_ref().expect("compiled");
                if !plain.is_full_match(u.as_str()) && !based.is_full_match(u.as_str()) {
                    Some(IriConflict::PatternMismatch)
                } else {
                    None
                }
            }
            ExtendExpr::Const(t) => match t {
                RdfTerm::Iri(c) if c == u => None,
                _ => Some(IriConflict::ConstantMismatch),
            },
        }
    }

    /// Literal object against the object expression of the simple form.
    fn literal_conflict(&self, lit: &Literal) -> Option<Incompatibility> {
        match self.expr {
            ExtendExpr::ToIri { .. } | ExtendExpr::Const(RdfTerm::Iri(_)) => {
                Some(Incompatibility::LiteralVsIri)
            }
            ExtendExpr::ToBNode { .. } | ExtendExpr::BNode(_) | ExtendExpr::Const(RdfTerm::BNode(_)) => {
                Some(Incompatibility::LiteralVsBlankNode)
            }
            ExtendExpr::ToLiteral { datatype, .. } => {
                let pattern = self.pattern.as_ref().expect("compiled");
                if !pattern.is_full_match(lit.lex()) {
                    Some(Incompatibility::LexicalMismatch)
                } else if lit.datatype() != datatype {
                    Some(Incompatibility::DatatypeMismatch)
                } else {
                    None
                }
            }
            ExtendExpr::Const(RdfTerm::Literal(c)) => {
                (c != lit).then_some(Incompatibility::LiteralConstantMismatch)
            }
        }
    }
}

/// A TrMap-expression prepared for repeated incompatibility checks.
#[derive(Clone, Debug)]
pub(crate) struct CompiledTrMap<'a> {
    subject: CompiledExtend<'a>,
    predicate: CompiledExtend<'a>,
    object: CompiledExtend<'a>,
    joined: bool,
}

impl<'a> CompiledTrMap<'a> {
    pub(crate) fn new(m: &'a TrMapExpr, opts: PatternOptions) -> Self {
        let body = m.body();
        CompiledTrMap {
            subject: CompiledExtend::new(body.subject(), opts),
            predicate: CompiledExtend::new(body.predicate(), opts),
            object: CompiledExtend::new(body.object(), opts),
            joined: matches!(body, TrMapBody::Joined { .. }),
        }
    }

    pub(crate) fn incompatibility(&self, tp: &TriplePattern) -> Option<Incompatibility> {
        fn iri(t: &PatternTerm) -> Option<&Iri> {
            match t {
                PatternTerm::Term(RdfTerm::Iri(i)) => Some(i),
                _ => None,
            }
        }
        if let Some(s) = iri(tp.subject()) {
            if let Some(c) = self.subject.iri_conflict(s) {
                return Some(Incompatibility::Subject(c));
            }
        }
        if let Some(p) = iri(tp.predicate()) {
            if let Some(c) = self.predicate.iri_conflict(p) {
                return Some(Incompatibility::Predicate(c));
            }
        }
        match tp.object() {
            PatternTerm::Term(RdfTerm::Iri(o)) => self.object.iri_conflict(o).map(Incompatibility::Object),
            PatternTerm::Term(RdfTerm::Literal(lit)) => {
                if self.joined {
                    Some(Incompatibility::LiteralVsJoinedObject)
                } else {
                    self.object.literal_conflict(lit)
                }
            }
            _ => None,
        }
    }
}

/// Whether the IRI `u` is incompatible with `phi`, using default pattern options.
pub fn iri_incompatible(u: &Iri, phi: &ExtendExpr) -> bool {
    CompiledExtend::new(phi, PatternOptions::default())
        .iri_conflict(u)
        .is_some()
}

/// The first condition under which `tp` is incompatible with `m`, if any.
pub fn incompatibility(
    tp: &TriplePattern,
    m: &TrMapExpr,
    opts: PatternOptions,
) -> Option<Incompatibility> {
    CompiledTrMap::new(m, opts).incompatibility(tp)
}

/// Whether `tp` is incompatible with `m`, using default pattern options.
pub fn tp_incompatible(tp: &TriplePattern, m: &TrMapExpr) -> bool {
    incompatibility(tp, m, PatternOptions::default()).is_some()
}
