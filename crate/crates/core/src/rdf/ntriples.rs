//! N-Triples reading and writing for [`RdfGraph`].

use std::io::Write;

use oxttl::NTriplesParser;

use super::graph::{RdfGraph, Triple};
use super::term::{BlankNode, Iri, Literal, RdfTerm};
use crate::error::{Error, Result};

pub(crate) fn from_ox_iri(n: &oxrdf::NamedNode) -> Result<Iri> {
    Iri::new(n.as_str())
}

/// Blank node labels outside `[A-Za-z0-9_]` are re-labelled by hashing, which
/// keeps distinct labels distinct within a document.
pub(crate) fn from_ox_bnode(b: &oxrdf::BlankNode) -> BlankNode {
    BlankNode::new(b.as_str()).unwrap_or_else(|_| crate::algebra::s2b(b.as_str()))
}

pub(crate) fn from_ox_literal(l: &oxrdf::Literal) -> Result<Literal> {
    if let Some(lang) = l.language() {
        return Err(Error::Unsupported(format!(
            "language-tagged literal \"{}\"@{lang}",
            l.value()
        )));
    }
    Ok(Literal::new(l.value(), Iri::new(l.datatype().as_str())?))
}

pub(crate) fn from_ox_term(t: &oxrdf::Term) -> Result<RdfTerm> {
    Ok(match t {
        oxrdf::Term::NamedNode(n) => RdfTerm::Iri(from_ox_iri(n)?),
        oxrdf::Term::BlankNode(b) => RdfTerm::BNode(from_ox_bnode(b)),
        oxrdf::Term::Literal(l) => RdfTerm::Literal(from_ox_literal(l)?),
    })
}

pub(crate) fn from_ox_subject(s: &oxrdf::NamedOrBlankNode) -> Result<RdfTerm> {
    Ok(match s {
        oxrdf::NamedOrBlankNode::NamedNode(n) => RdfTerm::Iri(from_ox_iri(n)?),
        oxrdf::NamedOrBlankNode::BlankNode(b) => RdfTerm::BNode(from_ox_bnode(b)),
    })
}

pub(crate) fn to_ox_term(t: &RdfTerm) -> oxrdf::Term {
    match t {
        RdfTerm::Iri(i) => oxrdf::NamedNode::new_unchecked(i.as_str()).into(),
        RdfTerm::BNode(b) => oxrdf::BlankNode::new_unchecked(b.label()).into(),
        RdfTerm::Literal(l) => oxrdf::Literal::new_typed_literal(
            l.lex(),
            oxrdf::NamedNode::new_unchecked(l.datatype().as_str()),
        )
        .into(),
    }
}

/// Parses an N-Triples document.
pub fn read_ntriples(input: &[u8]) -> Result<RdfGraph> {
    let mut graph = RdfGraph::new();
    for item in NTriplesParser::new().for_slice(input) {
        let t = item.map_err(|e| Error::NTriples {
            line: e.location().start.line + 1,
            message: e.message().to_string(),
        })?;
        let triple = Triple::new(
            from_ox_subject(&t.subject)?,
            from_ox_iri(&t.predicate)?,
            from_ox_term(&t.object)?,
        )?;
        graph.insert(triple);
    }
    Ok(graph)
}

/// Writes the graph as N-Triples, one sorted triple per line.
pub fn write_ntriples(graph: &RdfGraph, mut out: impl Write) -> Result<()> {
    for t in graph.sorted() {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

pub fn to_ntriples_string(graph: &RdfGraph) -> String {
    graph.sorted().iter().map(|t| format!("{t}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_writes() {
        let src = "<http://ex.org/a> <http://ex.org/p> \"v\" .\n\
                   _:b1 <http://ex.org/p> \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n\
                   <http://ex.org/a> <http://ex.org/p> \"v\" .\n";
        let g = read_ntriples(src.as_bytes()).unwrap();
        assert_eq!(g.len(), 2);
        let text = to_ntriples_string(&g);
        assert_eq!(read_ntriples(text.as_bytes()).unwrap(), g);
        assert!(text.contains("_:b1 <http://ex.org/p>"));
    }

    #[test]
    fn syntax_error_has_line() {
        let src = "<http://ex.org/a> <http://ex.org/p> \"v\" .\n<http://ex.org/a> oops .\n";
        match read_ntriples(src.as_bytes()) {
            Err(Error::NTriples { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn language_tags_unsupported() {
        let src = "<http://ex.org/a> <http://ex.org/p> \"v\"@en .\n";
        assert!(matches!(read_ntriples(src.as_bytes()), Err(Error::Unsupported(_))));
    }
}
