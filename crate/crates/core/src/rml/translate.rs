use std::collections::{BTreeMap, BTreeSet};

use super::model::{
    normalize, ObjectMap, RmlDocument, TemplatePart, TermMap, TermMapValue, TermType, TriplesMap,
};
use crate::algebra::{
    Attribute, ExtendExpr, ExtractSpec, Provenance, RmlMappingExpr, TorbExpr, TorbPart,
    TrMapBody, TrMapExpr,
};
use crate::error::{Error, Result};
use crate::rdf::{xsd_string, Iri};

/// Attribute naming for one side of a (possibly joined) TrMap-expression.
/// Child attributes carry the column name, escaped so they never collide with
/// the reserved names or with parent attributes, which start with `^`.
#[derive(Clone, Copy)]
enum Side {
    Child,
    Parent,
}

impl Side {
    fn attr(self, column: &str) -> Attribute {
        match self {
            Side::Child if column.starts_with(['@', '^', '\\']) => {
                Attribute::new(&format!("\\{column}"))
            }
            Side::Child => Attribute::new(column),
            Side::Parent => Attribute::new(&format!("^{column}")),
        }
    }
}

fn body(tm: &TermMap, side: Side) -> Option<TorbExpr> {
    match &tm.value {
        TermMapValue::Constant(_) => None,
        TermMapValue::Reference(r) => Some(TorbExpr::Attr(side.attr(r))),
        TermMapValue::Template(t) => Some(TorbExpr::from_parts(
            t.parts()
                .iter()
                .map(|p| match p {
                    TemplatePart::Text(s) => TorbPart::Str(s.clone()),
                    TemplatePart::Ref(r) => TorbPart::Attr(side.attr(r)),
                })
                .collect(),
        )),
    }
}

fn extend(tm: &TermMap, side: Side, base: &Iri) -> ExtendExpr {
    let Some(body) = body(tm, side) else {
        let TermMapValue::Constant(t) = &tm.value else {
            unreachable!()
        };
        return ExtendExpr::Const(t.clone());
    };
    match tm.term_type {
        TermType::Iri => ExtendExpr::ToIri {
            body,
            base: base.clone(),
        },
        TermType::BlankNode => ExtendExpr::ToBNode { body },
        TermType::Literal => ExtendExpr::ToLiteral {
            body,
            datatype: tm.datatype.clone().unwrap_or_else(xsd_string),
        },
    }
}

fn extract<'a>(
    tm: &TriplesMap,
    side: Side,
    refs: impl IntoIterator<Item = &'a str>,
) -> ExtractSpec {
    let queries: BTreeMap<Attribute, String> = refs
        .into_iter()
        .map(|r| (side.attr(r), r.to_string()))
        .collect();
    ExtractSpec::csv(tm.logical_source.source.clone(), queries)
}

/// Translates every (triples map, predicate-object map) pair of the
/// normalized document into a TrMap-expression.
pub fn translate(doc: &RmlDocument) -> Result<RmlMappingExpr> {
    let doc = if doc.is_normal() {
        doc.clone()
    } else {
        normalize(doc)
    };
    let base = &doc.base_iri;
    let mut trmaps = Vec::new();
    for tm in &doc.triples_maps {
        let subject = extend(&tm.subject_map, Side::Child, base);
        for (i, pom) in tm.poms.iter().enumerate() {
            let provenance = Provenance::new(tm.id.clone(), i);
            let predicate_map = &pom.predicates[0];
            let predicate = extend(predicate_map, Side::Child, base);
            let mut refs: Vec<&str> = tm.subject_map.references();
            refs.extend(predicate_map.references());
            let body = match &pom.objects[0] {
                ObjectMap::Term(om) => {
                    refs.extend(om.references());
                    TrMapBody::Simple {
                        subject: subject.clone(),
                        predicate,
                        object: extend(om, Side::Child, base),
                        extract: extract(tm, Side::Child, refs),
                    }
                }
                ObjectMap::Ref(rom) => {
                    let parent = doc.triples_map(&rom.parent_triples_map).ok_or_else(|| {
                        Error::Rml(format!(
                            "unknown parent triples map {}",
                            rom.parent_triples_map
                        ))
                    })?;
                    if rom.join_conditions.is_empty() {
                        return Err(Error::Unsupported(format!(
                            "{provenance}: referencing object map without join conditions"
                        )));
                    }
                    refs.extend(rom.join_conditions.iter().map(|(c, _)| c.as_str()));
                    let mut parent_refs = parent.subject_map.references();
                    parent_refs.extend(rom.join_conditions.iter().map(|(_, p)| p.as_str()));
                    let join: BTreeSet<(Attribute, Attribute)> = rom
                        .join_conditions
                        .iter()
                        .map(|(c, p)| (Side::Child.attr(c), Side::Parent.attr(p)))
                        .collect();
                    TrMapBody::Joined {
                        subject: subject.clone(),
                        predicate,
                        object: extend(&parent.subject_map, Side::Parent, base),
                        extract: extract(tm, Side::Child, refs),
                        parent_extract: extract(parent, Side::Parent, parent_refs),
                        join,
                    }
                }
            };
            trmaps.push(TrMapExpr::new(provenance, body)?);
        }
    }
    if trmaps.is_empty() {
        return Err(Error::Rml("mapping has no predicate-object maps".into()));
    }
    RmlMappingExpr::new(trmaps)
}
