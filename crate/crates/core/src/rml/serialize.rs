use std::collections::{BTreeSet, HashMap};

use oxrdf::{BlankNode, Literal, NamedNode, NamedOrBlankNode, Term, Triple};
use oxttl::TurtleSerializer;

use super::model::{normalize, ObjectMap, RmlDocument, TermMap, TermMapValue, TermType, TriplesMap};
use super::{FULLY_PRUNED, RML};
use crate::algebra::TrMapExpr;
use crate::error::{Error, Result};
use crate::rdf::{to_ox_term, RDF_TYPE, XSD};

fn rml(local: &str) -> NamedNode {
    NamedNode::new_unchecked(format!("{RML}{local}"))
}

fn string(s: &str) -> Term {
    Literal::new_simple_literal(s).into()
}

/// Node for a triples map id, with an optional suffix.
fn tm_node(id: &str, suffix: &str) -> NamedOrBlankNode {
    match id.strip_prefix("_:") {
        Some(label) => BlankNode::new_unchecked(format!("{label}{suffix}")).into(),
        None => NamedNode::new_unchecked(format!("{id}{suffix}")).into(),
    }
}

struct Writer {
    triples: Vec<Triple>,
    fresh: usize,
}

impl Writer {
    fn bnode(&mut self) -> NamedOrBlankNode {
        self.fresh += 1;
        BlankNode::new_unchecked(format!("n{}", self.fresh)).into()
    }

    fn add(&mut self, s: &NamedOrBlankNode, p: &str, o: impl Into<Term>) {
        let p = if p == "a" {
            NamedNode::new_unchecked(RDF_TYPE)
        } else {
            rml(p)
        };
        self.triples.push(Triple::new(s.clone(), p, o));
    }

    fn node_term(n: &NamedOrBlankNode) -> Term {
        match n {
            NamedOrBlankNode::NamedNode(n) => n.clone().into(),
            NamedOrBlankNode::BlankNode(b) => b.clone().into(),
        }
    }

    fn term_map(&mut self, tm: &TermMap) -> NamedOrBlankNode {
        let n = self.bnode();
        match &tm.value {
            TermMapValue::Constant(t) => self.add(&n, "constant", to_ox_term(t)),
            TermMapValue::Reference(r) => self.add(&n, "reference", string(r)),
            TermMapValue::Template(t) => self.add(&n, "template", string(&t.to_string())),
        }
        if !matches!(tm.value, TermMapValue::Constant(_)) {
            let tt = match tm.term_type {
                TermType::Iri => "IRI",
                TermType::BlankNode => "BlankNode",
                TermType::Literal => "Literal",
            };
            self.add(&n, "termType", rml(tt));
        }
        if let Some(dt) = &tm.datatype {
            self.add(&n, "datatype", NamedNode::new_unchecked(dt.as_str()));
        }
        n
    }

    /// Logical source and subject map of a triples map.
    fn head(&mut self, node: &NamedOrBlankNode, tm: &TriplesMap) {
        self.add(node, "a", rml("TriplesMap"));
        let ls = self.bnode();
        self.add(node, "logicalSource", Self::node_term(&ls));
        self.add(&ls, "source", string(&tm.logical_source.source));
        self.add(&ls, "referenceFormulation", rml("CSV"));
        let sm = self.term_map(&tm.subject_map);
        self.add(node, "subjectMap", Self::node_term(&sm));
    }
}

/// Writes an RML document holding one triples map per retained
/// TrMap-expression, each with the single predicate-object map it came from.
/// Parents of referencing object maps are written without their
/// predicate-object maps.
pub fn serialize_pruned(retained: &[TrMapExpr], doc: &RmlDocument) -> Result<String> {
    let doc = normalize(doc);
    if retained.is_empty() {
        return Ok(format!("{FULLY_PRUNED}\n@prefix rml: <{RML}> .\n"));
    }
    let mut w = Writer {
        triples: Vec::new(),
        fresh: 0,
    };
    let mut parents = BTreeSet::new();
    for t in retained {
        let prov = t.provenance();
        let tm = doc
            .triples_map(&prov.triples_map)
            .ok_or_else(|| Error::Rml(format!("provenance {prov} names no triples map")))?;
        let pom = tm
            .poms
            .get(prov.pom)
            .ok_or_else(|| Error::Rml(format!("provenance {prov} names no predicate-object map")))?;
        let node = tm_node(&tm.id, &format!("_pom{}", prov.pom));
        w.head(&node, tm);
        let pn = w.bnode();
        w.add(&node, "predicateObjectMap", Writer::node_term(&pn));
        let pm = w.term_map(&pom.predicates[0]);
        w.add(&pn, "predicateMap", Writer::node_term(&pm));
        let om = match &pom.objects[0] {
            ObjectMap::Term(om) => w.term_map(om),
            ObjectMap::Ref(rom) => {
                let om = w.bnode();
                let parent = tm_node(&rom.parent_triples_map, "");
                w.add(&om, "parentTriplesMap", Writer::node_term(&parent));
                for (c, p) in &rom.join_conditions {
                    let jc = w.bnode();
                    w.add(&om, "joinCondition", Writer::node_term(&jc));
                    w.add(&jc, "child", string(c));
                    w.add(&jc, "parent", string(p));
                }
                parents.insert(rom.parent_triples_map.clone());
                om
            }
        };
        w.add(&pn, "objectMap", Writer::node_term(&om));
    }
    for id in parents {
        let tm = doc.triples_map(&id).expect("parent exists in a parsed document");
        w.head(&tm_node(&id, ""), tm);
    }

    // Keep each node's triples together so they print as one block.
    let mut first_seen: HashMap<NamedOrBlankNode, usize> = HashMap::new();
    for (i, t) in w.triples.iter().enumerate() {
        first_seen.entry(t.subject.clone()).or_insert(i);
    }
    w.triples.sort_by_key(|t| first_seen[&t.subject]);

    let mut ser = TurtleSerializer::new()
        .with_prefix("rml", RML)
        .expect("valid namespace")
        .with_prefix("xsd", XSD)
        .expect("valid namespace");
    for (p, iri) in &doc.prefixes {
        if p != "rml" && p != "xsd" {
            ser = ser
                .with_prefix(p.clone(), iri.clone())
                .map_err(|e| Error::InvalidIri(e.to_string()))?;
        }
    }
    let mut out = ser.for_writer(format!("@base {} .\n", doc.base_iri).into_bytes());
    for t in &w.triples {
        out.serialize_triple(t)?;
    }
    Ok(String::from_utf8(out.finish()?).expect("Turtle output is UTF-8"))
}
