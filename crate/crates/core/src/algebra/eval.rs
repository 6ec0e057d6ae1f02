//! Evaluation of algebra expressions over a source assignment.

use std::collections::{BTreeSet, HashMap, HashSet};

use sha2::{Digest, Sha256};

use super::expr::{Expr, ExtendExpr, ExtractSpec, RmlMappingExpr, TorbExpr, TorbPart};
use super::relation::{graph_from_relation, Attribute, MappingRelation, MappingTuple, Value};
use super::source::{DataObject, SourceAssignment};
use crate::csv_source::{cast, enumerate, select};
use crate::error::{Error, Result};
use crate::rdf::{has_scheme, is_valid_iri, BlankNode, Iri, Literal, RdfGraph, RdfTerm};

/// Injective string-to-blank-node map: `b` followed by the first 128 bits of
/// the SHA-256 digest of the input, in lowercase hex.
pub fn s2b(s: &str) -> BlankNode {
    let digest = Sha256::digest(s.as_bytes());
    let mut label = String::with_capacity(33);
    label.push('b');
    for byte in &digest[..16] {
        label.push_str(&format!("{byte:02x}"));
    }
    BlankNode::new(label).expect("hex label")
}

fn lookup<'t>(t: &'t MappingTuple, a: &crate::algebra::Attribute) -> Result<&'t Value> {
    t.get(a)
        .ok_or_else(|| Error::Structural(format!("attribute {a} is not bound in tuple {t:?}")))
}

/// Evaluates a torb expression; `None` stands for ε.
pub fn eval_torb(phi: &TorbExpr, t: &MappingTuple) -> Result<Option<String>> {
    let part = |p: &TorbPart| -> Result<Option<String>> {
        Ok(match p {
            TorbPart::Str(s) => Some(s.clone()),
            TorbPart::Attr(a) => match lookup(t, a)? {
                Value::Term(RdfTerm::Literal(l)) => Some(l.lex().to_string()),
                _ => None,
            },
        })
    };
    match phi {
        TorbExpr::Str(s) => Ok(Some(s.clone())),
        TorbExpr::Attr(a) => part(&TorbPart::Attr(a.clone())),
        TorbExpr::Concat(parts) => {
            let mut out = String::new();
            for p in parts {
                match part(p)? {
                    Some(s) => out.push_str(&s),
                    None => return Ok(None),
                }
            }
            Ok(Some(out))
        }
    }
}

/// Resolves a string to an IRI: absolute strings stand as-is, anything else
/// is appended to `base`. Invalid results are ε.
pub fn resolve_iri(s: &str, base: &Iri) -> Option<Iri> {
    let candidate = if has_scheme(s) {
        s.to_string()
    } else {
        format!("{}{s}", base.as_str())
    };
    if is_valid_iri(&candidate) {
        Iri::new(candidate).ok()
    } else {
        None
    }
}

pub fn eval_extend(phi: &ExtendExpr, t: &MappingTuple) -> Result<Value> {
    Ok(match phi {
        ExtendExpr::Const(term) => Value::Term(term.clone()),
        ExtendExpr::BNode(b) => Value::Term(RdfTerm::BNode(b.clone())),
        ExtendExpr::ToLiteral { body, datatype } => eval_torb(body, t)?
            .map(|s| RdfTerm::Literal(Literal::new(s, datatype.clone())))
            .into(),
        ExtendExpr::ToIri { body, base } => eval_torb(body, t)?
            .and_then(|s| resolve_iri(&s, base))
            .map(RdfTerm::Iri)
            .into(),
        ExtendExpr::ToBNode { body } => eval_torb(body, t)?
            .map(|s| RdfTerm::BNode(s2b(&s)))
            .into(),
    })
}

/// Evaluates `expr` based on σ.
pub fn eval_expr(expr: &Expr, sigma: &SourceAssignment) -> Result<MappingRelation> {
    Evaluator::new(sigma).eval(expr)
}

/// `G` for an RML mapping expression: the RDF graph of its evaluation.
pub fn materialize(m: &RmlMappingExpr, sigma: &SourceAssignment) -> Result<RdfGraph> {
    if let Some(reason) = sigma.invalid_reason(m) {
        return Err(Error::InvalidInput(reason));
    }
    graph_from_relation(&eval_expr(&m.to_expr(), sigma)?)
}

struct Evaluator<'s> {
    sigma: &'s SourceAssignment,
    warned: HashSet<(String, String)>,
}

impl<'s> Evaluator<'s> {
    fn new(sigma: &'s SourceAssignment) -> Self {
        Evaluator {
            sigma,
            warned: HashSet::new(),
        }
    }

    fn eval(&mut self, expr: &Expr) -> Result<MappingRelation> {
        match expr {
            Expr::Extract(spec) => self.extract(spec),
            Expr::Extend { attr, expr, input } => {
                let r = self.eval(input)?;
                if r.attrs().contains(attr) {
                    return Err(Error::Structural(format!(
                        "extend attribute {attr} is already present"
                    )));
                }
                let mut attrs = r.attrs().clone();
                attrs.insert(attr.clone());
                let mut tuples = BTreeSet::new();
                for t in r.tuples() {
                    let mut t2 = t.clone();
                    t2.insert(attr.clone(), eval_extend(expr, t)?);
                    tuples.insert(t2);
                }
                Ok(MappingRelation::from_parts_unchecked(attrs, tuples))
            }
            Expr::Project { attrs, input } => {
                let r = self.eval(input)?;
                let keep: BTreeSet<Attribute> = r.attrs().intersection(attrs).cloned().collect();
                let tuples = r.tuples().iter().map(|t| t.restrict(&keep)).collect();
                Ok(MappingRelation::from_parts_unchecked(keep, tuples))
            }
            Expr::Join {
                left,
                right,
                conditions,
            } => {
                let l = self.eval(left)?;
                let r = self.eval(right)?;
                join(&l, &r, conditions)
            }
            Expr::Union { left, right } => {
                let l = self.eval(left)?;
                let r = self.eval(right)?;
                if l.attrs() != r.attrs() {
                    return Err(Error::Structural(format!(
                        "union of relations over {:?} and {:?}",
                        l.attrs(),
                        r.attrs()
                    )));
                }
                let tuples = l.tuples().union(r.tuples()).cloned().collect();
                Ok(MappingRelation::from_parts_unchecked(l.attrs().clone(), tuples))
            }
        }
    }

    fn extract(&mut self, spec: &ExtractSpec) -> Result<MappingRelation> {
        if let Some(reason) = self.sigma.check_extract(spec) {
            return Err(Error::InvalidInput(reason));
        }
        let data = match self.sigma.get(&spec.source) {
            Some(DataObject::Csv(d)) => d,
            _ => unreachable!("checked above"),
        };
        for (attr, column) in &spec.attr_queries {
            if data.column_index(column).is_none()
                && self
                    .warned
                    .insert((spec.source.as_str().to_string(), column.clone()))
            {
                log::warn!(
                    "column {column:?} (attribute {attr}) is absent from {}; no tuples are produced from it",
                    spec.source
                );
            }
        }
        let attrs = spec.attrs();
        let mut tuples = BTreeSet::new();
        for row in enumerate(data, &spec.iterator)? {
            // X_d: cross product of the per-attribute selections.
            let mut product: Vec<MappingTuple> = vec![MappingTuple::new()];
            for (attr, column) in &spec.attr_queries {
                let values = select(data, row, column);
                let mut next = Vec::with_capacity(product.len() * values.len());
                for partial in &product {
                    for v in &values {
                        let mut t = partial.clone();
                        t.insert(attr.clone(), Value::Term(RdfTerm::Literal(cast(v))));
                        next.push(t);
                    }
                }
                product = next;
            }
            tuples.extend(product);
        }
        Ok(MappingRelation::from_parts_unchecked(attrs, tuples))
    }
}

fn join(
    l: &MappingRelation,
    r: &MappingRelation,
    conditions: &BTreeSet<(Attribute, Attribute)>,
) -> Result<MappingRelation> {
    if !l.attrs().is_disjoint(r.attrs()) {
        return Err(Error::Structural(format!(
            "join inputs share attributes {:?}",
            l.attrs().intersection(r.attrs()).collect::<Vec<_>>()
        )));
    }
    for (a, b) in conditions {
        if !l.attrs().contains(a) || !r.attrs().contains(b) {
            return Err(Error::Structural(format!(
                "join condition ({a}, {b}) does not refer to the inputs"
            )));
        }
    }
    let (lkeys, rkeys): (Vec<&Attribute>, Vec<&Attribute>) =
        conditions.iter().map(|(a, b)| (a, b)).unzip();
    let key = |t: &MappingTuple, attrs: &[&Attribute]| -> Vec<Value> {
        attrs.iter().map(|a| t.get(a).expect("checked").clone()).collect()
    };
    let mut index: HashMap<Vec<Value>, Vec<&MappingTuple>> = HashMap::new();
    for t in r.tuples() {
        index.entry(key(t, &rkeys)).or_default().push(t);
    }
    let mut tuples = BTreeSet::new();
    for t1 in l.tuples() {
        if let Some(matches) = index.get(&key(t1, &lkeys)) {
            for t2 in matches {
                tuples.insert(t1.union(t2));
            }
        }
    }
    let attrs = l.attrs().union(r.attrs()).cloned().collect();
    Ok(MappingRelation::from_parts_unchecked(attrs, tuples))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::algebra::{ExtractSpec, Provenance, TrMapBody, TrMapExpr};
    use crate::csv_source::parse_csv;
    use crate::rdf::{XSD_DOUBLE, XSD_STRING};

    fn lit(s: &str) -> Value {
        Value::Term(Literal::string(s).into())
    }

    fn tuple(pairs: &[(&str, Value)]) -> MappingTuple {
        pairs
            .iter()
            .map(|(a, v)| (Attribute::new(*a), v.clone()))
            .collect()
    }

    fn base() -> Iri {
        Iri::new("http://example.com/base/").unwrap()
    }

    fn route_template() -> TorbExpr {
        TorbExpr::Concat(vec![
            TorbPart::Str("http://example.com/route/".into()),
            TorbPart::Attr(Attribute::new("transitRoute")),
        ])
    }

    #[test]
    fn torb_string_literal() {
        assert_eq!(
            eval_torb(&TorbExpr::Str("x".into()), &MappingTuple::new()).unwrap(),
            Some("x".into())
        );
    }

    #[test]
    fn torb_route_template() {
        let t = tuple(&[("transitRoute", lit("43"))]);
        assert_eq!(
            eval_torb(&route_template(), &t).unwrap().as_deref(),
            Some("http://example.com/route/43")
        );
    }

    #[test]
    fn torb_error_propagates() {
        let t = tuple(&[("a", Value::Error)]);
        assert_eq!(eval_torb(&TorbExpr::attr("a"), &t).unwrap(), None);
        let concat = TorbExpr::Concat(vec![TorbPart::Str("p".into()), TorbPart::Attr(Attribute::new("a"))]);
        assert_eq!(eval_torb(&concat, &t).unwrap(), None);
    }

    #[test]
    fn torb_non_literal_value_is_error() {
        let t = tuple(&[("a", Value::Term(RdfTerm::iri("http://x.org/").unwrap()))]);
        assert_eq!(eval_torb(&TorbExpr::attr("a"), &t).unwrap(), None);
    }

    #[test]
    fn torb_unbound_attribute_is_structural() {
        assert!(matches!(
            eval_torb(&TorbExpr::attr("a"), &MappingTuple::new()),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn extend_to_literal_recasts() {
        let dbl = Iri::new(XSD_DOUBLE).unwrap();
        let phi = ExtendExpr::ToLiteral {
            body: TorbExpr::attr("long"),
            datatype: dbl.clone(),
        };
        let t = tuple(&[("long", lit("23.0"))]);
        assert_eq!(
            eval_extend(&phi, &t).unwrap(),
            Value::Term(Literal::new("23.0", dbl).into())
        );
    }

    #[test]
    fn extend_to_iri() {
        let phi = ExtendExpr::ToIri {
            body: route_template(),
            base: base(),
        };
        let t = tuple(&[("transitRoute", lit("43"))]);
        assert_eq!(
            eval_extend(&phi, &t).unwrap(),
            Value::Term(RdfTerm::iri("http://example.com/route/43").unwrap())
        );
    }

    #[test]
    fn extend_to_iri_relative_uses_base() {
        let phi = ExtendExpr::ToIri {
            body: TorbExpr::attr("a"),
            base: base(),
        };
        let t = tuple(&[("a", lit("ap1"))]);
        assert_eq!(
            eval_extend(&phi, &t).unwrap(),
            Value::Term(RdfTerm::iri("http://example.com/base/ap1").unwrap())
        );
    }

    #[test]
    fn extend_to_iri_invalid_is_error() {
        let phi = ExtendExpr::ToIri {
            body: TorbExpr::attr("a"),
            base: base(),
        };
        let t = tuple(&[("a", lit("has space"))]);
        assert_eq!(eval_extend(&phi, &t).unwrap(), Value::Error);
    }

    #[test]
    fn extend_to_bnode_is_stable() {
        let phi = ExtendExpr::ToBNode {
            body: TorbExpr::attr("a"),
        };
        let t = tuple(&[("a", lit("k"))]);
        let v1 = eval_extend(&phi, &t).unwrap();
        assert_eq!(v1, eval_extend(&phi, &t).unwrap());
        assert_eq!(v1, Value::Term(RdfTerm::BNode(s2b("k"))));
        assert_ne!(s2b("k"), s2b("k2"));
        assert_eq!(s2b("k").label().len(), 33);
    }

    fn airports() -> SourceAssignment {
        let csv = parse_csv(b"aiport_id,transitRoute,long\nap1,43,23.0\nap2,44,12.5\n").unwrap();
        SourceAssignment::new().with("airports.csv", DataObject::csv(csv))
    }

    fn extract(cols: &[&str]) -> ExtractSpec {
        ExtractSpec::csv(
            "airports.csv",
            cols.iter().map(|c| (Attribute::new(*c), c.to_string())).collect(),
        )
    }

    #[test]
    fn extract_over_empty_csv() {
        let sigma = SourceAssignment::new().with("e.csv", DataObject::csv(parse_csv(b"a,b\n").unwrap()));
        let spec = ExtractSpec::csv(
            "e.csv",
            BTreeMap::from([(Attribute::new("a"), "a".to_string())]),
        );
        let r = eval_expr(&Expr::Extract(spec), &sigma).unwrap();
        assert_eq!(r.attrs(), &[Attribute::new("a")].into());
        assert!(r.is_empty());
    }

    #[test]
    fn extract_missing_column_drops_rows() {
        let r = eval_expr(&Expr::Extract(extract(&["long", "nope"])), &airports()).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.attrs().len(), 2);
    }

    #[test]
    fn extract_empty_cell_gives_empty_string() {
        let sigma = SourceAssignment::new().with("e.csv", DataObject::csv(parse_csv(b"a,b\n,x\n").unwrap()));
        let spec = ExtractSpec::csv(
            "e.csv",
            BTreeMap::from([(Attribute::new("a"), "a".to_string())]),
        );
        let r = eval_expr(&Expr::Extract(spec), &sigma).unwrap();
        assert_eq!(r.tuples().iter().next().unwrap(), &tuple(&[("a", lit(""))]));
    }

    #[test]
    fn simple_trmap_over_two_rows() {
        let tm = TrMapExpr::new(
            Provenance::new("tm", 1),
            TrMapBody::Simple {
                subject: ExtendExpr::ToIri {
                    body: TorbExpr::attr("aiport_id"),
                    base: base(),
                },
                predicate: ExtendExpr::Const(RdfTerm::iri("http://vocab.gtfs.org/terms#long").unwrap()),
                object: ExtendExpr::ToLiteral {
                    body: TorbExpr::attr("long"),
                    datatype: Iri::new(XSD_DOUBLE).unwrap(),
                },
                extract: extract(&["aiport_id", "long"]),
            },
        )
        .unwrap();
        let r = eval_expr(&tm.to_projected_expr(), &airports()).unwrap();
        assert_eq!(r.attrs(), &Attribute::specials());
        let g = graph_from_relation(&r).unwrap();
        let lines: Vec<String> = g.sorted().iter().map(|t| t.to_string()).collect();
        assert_eq!(
            lines,
            [
                "<http://example.com/base/ap1> <http://vocab.gtfs.org/terms#long> \"23.0\"^^<http://www.w3.org/2001/XMLSchema#double> .",
                "<http://example.com/base/ap2> <http://vocab.gtfs.org/terms#long> \"12.5\"^^<http://www.w3.org/2001/XMLSchema#double> .",
            ]
        );
    }

    #[test]
    fn union_of_disjoint_relations() {
        let sigma = SourceAssignment::new()
            .with("a.csv", DataObject::csv(parse_csv(b"x\n1\n").unwrap()))
            .with("b.csv", DataObject::csv(parse_csv(b"x\n2\n").unwrap()));
        let e = |src: &str| {
            Expr::Extract(ExtractSpec::csv(
                src,
                BTreeMap::from([(Attribute::new("x"), "x".to_string())]),
            ))
        };
        let u = Expr::Union {
            left: Box::new(e("a.csv")),
            right: Box::new(e("b.csv")),
        };
        let r = eval_expr(&u, &sigma).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn join_on_error_values() {
        let attrs = |n: &str| -> BTreeSet<Attribute> { [Attribute::new(n)].into() };
        let l = MappingRelation::new(attrs("a"), [tuple(&[("a", Value::Error)]), tuple(&[("a", lit("1"))])].into()).unwrap();
        let r = MappingRelation::new(attrs("b"), [tuple(&[("b", Value::Error)]), tuple(&[("b", lit("2"))])].into()).unwrap();
        let out = join(&l, &r, &[(Attribute::new("a"), Attribute::new("b"))].into()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(
            out.tuples().iter().next().unwrap(),
            &tuple(&[("a", Value::Error), ("b", Value::Error)])
        );
    }

    #[test]
    fn unbound_source_is_invalid_input() {
        let r = eval_expr(&Expr::Extract(extract(&["long"])), &SourceAssignment::new());
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn cast_datatype_is_string() {
        let r = eval_expr(&Expr::Extract(extract(&["long"])), &airports()).unwrap();
        for t in r.tuples() {
            let v = t.get(&Attribute::new("long")).unwrap();
            assert_eq!(v.as_term().unwrap().as_literal().unwrap().datatype().as_str(), XSD_STRING);
        }
    }
}
