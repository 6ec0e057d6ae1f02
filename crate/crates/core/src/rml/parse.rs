use std::collections::{BTreeMap, HashMap, HashSet};

use oxrdf::{NamedOrBlankNode, Term};
use oxttl::TurtleParser;

use super::model::{
    LogicalSource, ObjectMap, Position, PredicateObjectMap, RefObjectMap, RmlDocument, Template,
    TermMap, TermMapValue, TermType, TriplesMap,
};
use super::{DEFAULT_BASE, QL, R2RML, RML, RML_LEGACY};
use crate::error::{Error, Result};
use crate::rdf::{from_ox_iri, from_ox_term, Iri};

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// Properties we know but deliberately do not support.
const UNSUPPORTED: &[&str] = &[
    "graphMap",
    "graph",
    "language",
    "languageMap",
    "logicalTable",
    "sqlQuery",
    "tableName",
    "sqlVersion",
    "functionExecution",
    "functionMap",
    "logicalTarget",
    "logicalView",
    "gatherAs",
    "iterator",
];

/// Canonical name of a mapping-vocabulary IRI, whichever namespace it uses.
fn vocab_name(iri: &str) -> Option<&str> {
    let local = [RML, R2RML, RML_LEGACY, QL]
        .iter()
        .find_map(|ns| iri.strip_prefix(ns))?;
    Some(match local {
        "datatType" => "datatype",
        "column" => "reference",
        other => other,
    })
}

fn node_name(n: &NamedOrBlankNode) -> String {
    match n {
        NamedOrBlankNode::NamedNode(n) => n.as_str().to_string(),
        NamedOrBlankNode::BlankNode(b) => format!("_:{}", b.as_str()),
    }
}

fn as_node(t: &Term) -> Option<NamedOrBlankNode> {
    match t {
        Term::NamedNode(n) => Some(n.clone().into()),
        Term::BlankNode(b) => Some(b.clone().into()),
        _ => None,
    }
}

type Props = BTreeMap<&'static str, Vec<Term>>;

struct Reader {
    out: HashMap<NamedOrBlankNode, Vec<(String, Term)>>,
    subjects: Vec<NamedOrBlankNode>,
    visited: HashSet<NamedOrBlankNode>,
}

impl Reader {
    fn new(triples: Vec<oxrdf::Triple>) -> Self {
        let mut out: HashMap<NamedOrBlankNode, Vec<(String, Term)>> = HashMap::new();
        let mut subjects = Vec::new();
        for t in triples {
            let entry = out.entry(t.subject.clone()).or_insert_with(|| {
                subjects.push(t.subject.clone());
                Vec::new()
            });
            entry.push((t.predicate.into_string(), t.object));
        }
        Reader {
            out,
            subjects,
            visited: HashSet::new(),
        }
    }

    /// The properties of `node`, keyed by canonical name (`a` for rdf:type).
    /// Anything outside `allowed` is rejected.
    fn props(
        &mut self,
        node: &NamedOrBlankNode,
        what: &str,
        allowed: &[&'static str],
    ) -> Result<Props> {
        self.visited.insert(node.clone());
        let mut props = Props::new();
        let Some(edges) = self.out.get(node) else {
            return Ok(props);
        };
        for (p, o) in edges {
            let key = if p == RDF_TYPE {
                "a"
            } else {
                match vocab_name(p) {
                    Some(k) if UNSUPPORTED.contains(&k) => {
                        return Err(Error::Unsupported(format!(
                            "<{p}> on {what} {}",
                            node_name(node)
                        )))
                    }
                    Some(k) if allowed.contains(&k) => {
                        *allowed.iter().find(|a| **a == k).expect("checked")
                    }
                    _ => {
                        return Err(Error::Rml(format!(
                            "unexpected property <{p}> on {what} {}",
                            node_name(node)
                        )))
                    }
                }
            };
            props.entry(key).or_default().push(o.clone());
        }
        Ok(props)
    }

    fn is_triples_map(&self, n: &NamedOrBlankNode) -> bool {
        self.out[n].iter().any(|(p, o)| {
            (p == RDF_TYPE
                && matches!(o, Term::NamedNode(c) if vocab_name(c.as_str()) == Some("TriplesMap")))
                || vocab_name(p) == Some("logicalSource")
        })
    }
}

fn at_most_one<'p>(props: &'p Props, key: &str, node: &str) -> Result<Option<&'p Term>> {
    match props.get(key).map(Vec::as_slice) {
        None | Some([]) => Ok(None),
        Some([t]) => Ok(Some(t)),
        Some(_) => Err(Error::Rml(format!("{node} has more than one {key}"))),
    }
}

fn exactly_one<'p>(props: &'p Props, key: &str, node: &str) -> Result<&'p Term> {
    at_most_one(props, key, node)?.ok_or_else(|| Error::Rml(format!("{node} has no {key}")))
}

fn string_of(t: &Term, what: &str) -> Result<String> {
    match t {
        Term::Literal(l) if l.language().is_none() => Ok(l.value().to_string()),
        _ => Err(Error::Rml(format!("{what} must be a plain string literal, found {t}"))),
    }
}

fn iri_of(t: &Term, what: &str) -> Result<Iri> {
    match t {
        Term::NamedNode(n) => from_ox_iri(n),
        _ => Err(Error::Rml(format!("{what} must be an IRI, found {t}"))),
    }
}

fn node_of(t: &Term, what: &str) -> Result<NamedOrBlankNode> {
    as_node(t).ok_or_else(|| Error::Rml(format!("{what} must be a node, found {t}")))
}

fn term_type_of(t: &Term) -> Result<TermType> {
    let iri = iri_of(t, "term type")?;
    match vocab_name(iri.as_str()) {
        Some("IRI") => Ok(TermType::Iri),
        Some("BlankNode") => Ok(TermType::BlankNode),
        Some("Literal") => Ok(TermType::Literal),
        _ => Err(Error::Unsupported(format!("term type {iri}"))),
    }
}

const TERM_MAP_KEYS: &[&str] = &["constant", "reference", "template", "termType", "datatype"];

/// Parses an RML mapping document.
pub fn parse_rml(input: &[u8]) -> Result<RmlDocument> {
    let mut parser = TurtleParser::new()
        .with_base_iri(DEFAULT_BASE)
        .expect("valid default base")
        .for_slice(input);
    let mut triples = Vec::new();
    for t in parser.by_ref() {
        triples.push(t.map_err(|e| Error::Turtle {
            line: e.location().start.line + 1,
            column: e.location().start.column + 1,
            message: e.message().to_string(),
        })?);
    }
    let base_iri = Iri::new(parser.base_iri().unwrap_or(DEFAULT_BASE))?;
    let prefixes = parser
        .prefixes()
        .map(|(p, iri)| (p.to_string(), iri.to_string()))
        .collect();
    drop(parser);

    let mut r = Reader::new(triples);
    let tm_nodes: Vec<NamedOrBlankNode> = r
        .subjects
        .iter()
        .filter(|n| r.is_triples_map(n))
        .cloned()
        .collect();
    if tm_nodes.is_empty() {
        return Err(Error::Rml("no triples maps".into()));
    }
    let mut triples_maps = Vec::new();
    for node in &tm_nodes {
        triples_maps.push(triples_map(&mut r, node)?);
    }
    let ids: HashSet<&str> = triples_maps.iter().map(|t| t.id.as_str()).collect();
    for tm in &triples_maps {
        for pom in &tm.poms {
            for o in &pom.objects {
                if let ObjectMap::Ref(rom) = o {
                    if !ids.contains(rom.parent_triples_map.as_str()) {
                        return Err(Error::Rml(format!(
                            "{} references unknown parent triples map {}",
                            tm.id, rom.parent_triples_map
                        )));
                    }
                }
            }
        }
    }
    for n in &r.subjects {
        if r.visited.contains(n) {
            continue;
        }
        if let Some((p, _)) = r.out[n].iter().find(|(p, _)| vocab_name(p).is_some()) {
            return Err(Error::Rml(format!(
                "node {} uses <{p}> but is not part of any triples map",
                node_name(n)
            )));
        }
    }
    Ok(RmlDocument {
        base_iri,
        prefixes,
        triples_maps,
    })
}

fn triples_map(r: &mut Reader, node: &NamedOrBlankNode) -> Result<TriplesMap> {
    let id = node_name(node);
    let props = r.props(
        node,
        "triples map",
        &["a", "logicalSource", "subjectMap", "subject", "predicateObjectMap"],
    )?;
    let ls = node_of(exactly_one(&props, "logicalSource", &id)?, "logical source")?;
    let logical_source = logical_source(r, &ls)?;
    let (subject_map, classes) = match (
        at_most_one(&props, "subjectMap", &id)?,
        at_most_one(&props, "subject", &id)?,
    ) {
        (Some(sm), None) => subject_map(r, &node_of(sm, "subject map")?)?,
        (None, Some(c)) => (TermMap::constant(iri_of(c, "subject shortcut")?), Vec::new()),
        _ => return Err(Error::Rml(format!("{id} needs exactly one subject map"))),
    };
    let mut poms = Vec::new();
    for p in props.get("predicateObjectMap").into_iter().flatten() {
        poms.push(predicate_object_map(r, &node_of(p, "predicate-object map")?)?);
    }
    Ok(TriplesMap {
        id,
        logical_source,
        subject_map,
        classes,
        poms,
    })
}

fn logical_source(r: &mut Reader, node: &NamedOrBlankNode) -> Result<LogicalSource> {
    let name = node_name(node);
    let props = r.props(node, "logical source", &["a", "source", "referenceFormulation"])?;
    if let Some(rf) = at_most_one(&props, "referenceFormulation", &name)? {
        let rf = iri_of(rf, "reference formulation")?;
        if vocab_name(rf.as_str()) != Some("CSV") {
            return Err(Error::Unsupported(format!(
                "reference formulation {rf} (only CSV is supported)"
            )));
        }
    }
    let source = match exactly_one(&props, "source", &name)? {
        t @ Term::Literal(_) => string_of(t, "source")?,
        t => {
            let n = node_of(t, "source")?;
            let sname = node_name(&n);
            let sp = r.props(&n, "source", &["a", "path", "root"])?;
            string_of(exactly_one(&sp, "path", &sname)?, "source path")?
        }
    };
    Ok(LogicalSource { source })
}

/// Reads the value and term-type properties shared by all term maps.
fn term_map(props: &Props, name: &str, pos: Position) -> Result<TermMap> {
    let constant = at_most_one(props, "constant", name)?;
    let reference = at_most_one(props, "reference", name)?;
    let template = at_most_one(props, "template", name)?;
    let value = match (constant, reference, template) {
        (Some(c), None, None) => TermMapValue::Constant(from_ox_term(c)?),
        (None, Some(r), None) => TermMapValue::Reference(string_of(r, "reference")?),
        (None, None, Some(t)) => TermMapValue::Template(Template::parse(&string_of(t, "template")?)?),
        _ => {
            return Err(Error::Rml(format!(
                "{pos} {name} needs exactly one of constant, reference or template"
            )))
        }
    };
    let term_type = at_most_one(props, "termType", name)?
        .map(term_type_of)
        .transpose()?;
    let datatype = at_most_one(props, "datatype", name)?
        .map(|t| iri_of(t, "datatype"))
        .transpose()?;
    TermMap::new(value, term_type, datatype, pos)
}

fn subject_map(r: &mut Reader, node: &NamedOrBlankNode) -> Result<(TermMap, Vec<Iri>)> {
    let name = node_name(node);
    let mut allowed = vec!["a", "class"];
    allowed.extend_from_slice(TERM_MAP_KEYS);
    let props = r.props(node, "subject map", &allowed)?;
    let tm = term_map(&props, &name, Position::Subject)?;
    let classes = props
        .get("class")
        .into_iter()
        .flatten()
        .map(|c| iri_of(c, "class"))
        .collect::<Result<_>>()?;
    Ok((tm, classes))
}

fn predicate_object_map(r: &mut Reader, node: &NamedOrBlankNode) -> Result<PredicateObjectMap> {
    let name = node_name(node);
    let props = r.props(
        node,
        "predicate-object map",
        &["a", "predicateMap", "predicate", "objectMap", "object"],
    )?;
    let mut predicates = Vec::new();
    for p in props.get("predicate").into_iter().flatten() {
        predicates.push(TermMap::constant(iri_of(p, "predicate")?));
    }
    for p in props.get("predicateMap").into_iter().flatten() {
        let n = node_of(p, "predicate map")?;
        let pname = node_name(&n);
        let mut allowed = vec!["a"];
        allowed.extend_from_slice(TERM_MAP_KEYS);
        let pp = r.props(&n, "predicate map", &allowed)?;
        predicates.push(term_map(&pp, &pname, Position::Predicate)?);
    }
    let mut objects = Vec::new();
    for o in props.get("object").into_iter().flatten() {
        let t = from_ox_term(o)?;
        objects.push(ObjectMap::Term(TermMap::new(
            TermMapValue::Constant(t),
            None,
            None,
            Position::Object,
        )?));
    }
    for o in props.get("objectMap").into_iter().flatten() {
        objects.push(object_map(r, &node_of(o, "object map")?)?);
    }
    if predicates.is_empty() || objects.is_empty() {
        return Err(Error::Rml(format!(
            "predicate-object map {name} needs at least one predicate and one object"
        )));
    }
    Ok(PredicateObjectMap {
        predicates,
        objects,
    })
}

fn object_map(r: &mut Reader, node: &NamedOrBlankNode) -> Result<ObjectMap> {
    let name = node_name(node);
    let mut allowed = vec!["a", "parentTriplesMap", "joinCondition"];
    allowed.extend_from_slice(TERM_MAP_KEYS);
    let props = r.props(node, "object map", &allowed)?;
    let Some(parent) = at_most_one(&props, "parentTriplesMap", &name)? else {
        if props.contains_key("joinCondition") {
            return Err(Error::Rml(format!("join condition without parent triples map on {name}")));
        }
        return Ok(ObjectMap::Term(term_map(&props, &name, Position::Object)?));
    };
    if let Some(k) = TERM_MAP_KEYS.iter().find(|k| props.contains_key(**k)) {
        return Err(Error::Rml(format!(
            "referencing object map {name} cannot also have {k}"
        )));
    }
    let parent_triples_map = node_name(&node_of(parent, "parent triples map")?);
    let mut join_conditions = Vec::new();
    for jc in props.get("joinCondition").into_iter().flatten() {
        let n = node_of(jc, "join condition")?;
        let jname = node_name(&n);
        let jp = r.props(&n, "join condition", &["a", "child", "parent"])?;
        join_conditions.push((
            string_of(exactly_one(&jp, "child", &jname)?, "child")?,
            string_of(exactly_one(&jp, "parent", &jname)?, "parent")?,
        ));
    }
    if join_conditions.is_empty() {
        return Err(Error::Unsupported(format!(
            "referencing object map {name} without join conditions"
        )));
    }
    Ok(ObjectMap::Ref(RefObjectMap {
        parent_triples_map,
        join_conditions,
    }))
}
