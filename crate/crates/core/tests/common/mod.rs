//! Random mapping instances, source assignments and BGPs shared by the
//! property tests and the acceptance suite, plus a naive BGP evaluator used
//! as an oracle against the library's indexed one.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rmlprune::algebra::{
    Attribute, DataObject, ExtendExpr, ExtractSpec, Provenance, RmlMappingExpr, SourceAssignment,
    TorbExpr, TorbPart, TrMapBody, TrMapExpr,
};
use rmlprune::csv_source::CsvDataObject;
use rmlprune::rdf::{
    BlankNode, Iri, Literal, PatternTerm, RdfGraph, RdfTerm, SolutionMapping, TriplePattern,
    Variable, XSD_DECIMAL, XSD_INTEGER, XSD_STRING,
};

pub const BASE: &str = "http://ex.org/base/";
pub const A: &str = "http://ex.org/A/";
pub const B: &str = "http://ex.org/B/";
pub const SOURCES: [&str; 2] = ["s0.csv", "s1.csv"];

/// Cell values. All non-empty; one is an absolute IRI so that relative
/// resolution is exercised in both directions.
pub const VALUES: [&str; 7] = ["a", "b", "1", "2", "x.y", "a+b", "http://ex.org/A/a"];

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

fn ex(local: &str) -> Iri {
    iri(&format!("http://ex.org/{local}"))
}

fn lit(lex: &str, dt: &str) -> RdfTerm {
    Literal::new(lex, iri(dt)).into()
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub mapping: RmlMappingExpr,
    pub patterns: Vec<TriplePattern>,
    pub ncols: usize,
    /// The assignment some patterns were read off from.
    pub probe: SourceAssignment,
}

fn col<R: Rng>(rng: &mut R, ncols: usize) -> String {
    format!("c{}", rng.gen_range(0..ncols))
}

fn extract(source: &str, ncols: usize, parent: bool) -> ExtractSpec {
    let attrs: BTreeMap<Attribute, String> = (0..ncols)
        .map(|i| {
            let c = format!("c{i}");
            let a = if parent { format!("^{c}") } else { c.clone() };
            (Attribute::new(a), c)
        })
        .collect();
    ExtractSpec::csv(source, attrs)
}

fn prefixed(prefix: &str, attr: String) -> TorbExpr {
    TorbExpr::Concat(vec![TorbPart::Str(prefix.into()), TorbPart::Attr(Attribute::new(attr))])
}

fn to_iri(body: TorbExpr) -> ExtendExpr {
    ExtendExpr::ToIri { body, base: iri(BASE) }
}

fn subject<R: Rng>(rng: &mut R, ncols: usize) -> ExtendExpr {
    let c = col(rng, ncols);
    match rng.gen_range(0..10) {
        0..=3 => to_iri(prefixed([A, B].choose(rng).unwrap(), c)),
        4..=5 => to_iri(TorbExpr::Attr(Attribute::new(c))),
        6..=7 => ExtendExpr::ToBNode { body: TorbExpr::Attr(Attribute::new(c)) },
        8 => ExtendExpr::Const(RdfTerm::Iri(iri(&format!("{A}1")))),
        _ => ExtendExpr::BNode(BlankNode::new("k").unwrap()),
    }
}

fn predicate<R: Rng>(rng: &mut R, ncols: usize) -> ExtendExpr {
    if rng.gen_bool(0.15) {
        to_iri(prefixed("http://ex.org/p", col(rng, ncols)))
    } else {
        ExtendExpr::Const(RdfTerm::Iri(ex(["p", "q", "r"].choose(rng).unwrap())))
    }
}

fn simple_object<R: Rng>(rng: &mut R, ncols: usize) -> ExtendExpr {
    let c = col(rng, ncols);
    match rng.gen_range(0..9) {
        0 => ExtendExpr::ToLiteral { body: TorbExpr::Attr(Attribute::new(c)), datatype: iri(XSD_STRING) },
        1 => ExtendExpr::ToLiteral { body: TorbExpr::Attr(Attribute::new(c)), datatype: iri(XSD_INTEGER) },
        2 => ExtendExpr::ToLiteral { body: prefixed("v-", c), datatype: iri(XSD_STRING) },
        3 => to_iri(prefixed([A, B].choose(rng).unwrap(), c)),
        4 => to_iri(TorbExpr::Attr(Attribute::new(c))),
        5 => ExtendExpr::ToBNode { body: TorbExpr::Attr(Attribute::new(c)) },
        6 => ExtendExpr::Const(lit("1", XSD_INTEGER)),
        7 => ExtendExpr::Const(lit("a", XSD_STRING)),
        _ => ExtendExpr::Const(RdfTerm::Iri(iri(&format!("{A}a")))),
    }
}

fn parent_object<R: Rng>(rng: &mut R, ncols: usize) -> ExtendExpr {
    let c = format!("^{}", col(rng, ncols));
    match rng.gen_range(0..4) {
        0 | 1 => to_iri(prefixed([A, B].choose(rng).unwrap(), c)),
        2 => to_iri(TorbExpr::Attr(Attribute::new(c))),
        _ => ExtendExpr::ToBNode { body: TorbExpr::Attr(Attribute::new(c)) },
    }
}

/// One TrMap-expression: simple with probability 0.7, joined otherwise.
pub fn random_trmap<R: Rng>(rng: &mut R, ncols: usize, i: usize) -> TrMapExpr {
    let source = *SOURCES.choose(rng).unwrap();
    let subject = subject(rng, ncols);
    let predicate = predicate(rng, ncols);
    let body = if rng.gen_bool(0.3) {
        let parent = *SOURCES.choose(rng).unwrap();
        let njoin = rng.gen_range(1..=2);
        let join = (0..njoin)
            .map(|_| {
                (
                    Attribute::new(col(rng, ncols)),
                    Attribute::new(format!("^{}", col(rng, ncols))),
                )
            })
            .collect();
        TrMapBody::Joined {
            subject,
            predicate,
            object: parent_object(rng, ncols),
            extract: extract(source, ncols, false),
            parent_extract: extract(parent, ncols, true),
            join,
        }
    } else {
        TrMapBody::Simple {
            subject,
            predicate,
            object: simple_object(rng, ncols),
            extract: extract(source, ncols, false),
        }
    };
    TrMapExpr::new(Provenance::new(format!("http://ex.org/tm{i}"), 0), body).unwrap()
}

pub fn random_mapping<R: Rng>(rng: &mut R, max_trmaps: usize, ncols: usize) -> RmlMappingExpr {
    let n = rng.gen_range(1..=max_trmaps);
    RmlMappingExpr::new((0..n).map(|i| random_trmap(rng, ncols, i)).collect()).unwrap()
}

/// Pattern constants: some inside the value space of the generated
/// expressions, some just outside it.
fn pattern_subject<R: Rng>(rng: &mut R) -> PatternTerm {
    let c = [
        format!("{A}a"),
        format!("{A}1"),
        format!("{B}b"),
        format!("{B}x.y"),
        "http://ex.org/C/a".to_string(),
        format!("{BASE}a"),
        format!("{BASE}zz"),
        "http://ex.org/A/a".to_string(),
    ];
    PatternTerm::Term(RdfTerm::Iri(iri(c.choose(rng).unwrap())))
}

fn pattern_predicate<R: Rng>(rng: &mut R) -> PatternTerm {
    PatternTerm::Term(RdfTerm::Iri(ex(["p", "q", "r", "s", "pa", "p1"].choose(rng).unwrap())))
}

fn pattern_object<R: Rng>(rng: &mut R) -> PatternTerm {
    let t = match rng.gen_range(0..12) {
        0 => lit("a", XSD_STRING),
        1 => lit("1", XSD_INTEGER),
        2 => lit("2", XSD_STRING),
        3 => lit("v-a", XSD_STRING),
        4 => lit("v-", XSD_STRING),
        5 => lit("zzz", XSD_STRING),
        6 => lit("1", XSD_DECIMAL),
        7 => RdfTerm::Iri(iri(&format!("{A}a"))),
        8 => RdfTerm::Iri(iri(&format!("{B}2"))),
        9 => RdfTerm::Iri(iri("http://ex.org/C/x")),
        10 => RdfTerm::Iri(iri(&format!("{BASE}b"))),
        _ => RdfTerm::Iri(iri(&format!("{A}http://ex.org/A/a"))),
    };
    PatternTerm::Term(t)
}

/// Variable pools per position. Subjects and objects share `y` so that
/// patterns chain; the predicate pool is disjoint.
fn var<R: Rng>(rng: &mut R, pool: &[&str]) -> PatternTerm {
    PatternTerm::var(pool.choose(rng).unwrap())
}

pub fn random_pattern<R: Rng>(rng: &mut R) -> TriplePattern {
    let s = if rng.gen_bool(0.75) { var(rng, &["x", "y"]) } else { pattern_subject(rng) };
    let p = if rng.gen_bool(0.3) { var(rng, &["p", "q"]) } else { pattern_predicate(rng) };
    let o = if rng.gen_bool(0.6) { var(rng, &["y", "z", "o"]) } else { pattern_object(rng) };
    TriplePattern::new(s, p, o).unwrap()
}

pub fn random_bgp<R: Rng>(rng: &mut R, max_patterns: usize) -> Vec<TriplePattern> {
    let n = rng.gen_range(1..=max_patterns);
    (0..n).map(|_| random_pattern(rng)).collect()
}

/// A pattern read off a produced triple, with each position replaced by a
/// variable with probability one half. Blank nodes always become variables.
fn pattern_from<R: Rng>(rng: &mut R, g: &RdfGraph) -> Option<TriplePattern> {
    let triples = g.sorted();
    let t = triples.choose(rng)?;
    let mut pos = |term: RdfTerm, pool: &[&str]| {
        if matches!(term, RdfTerm::BNode(_)) || rng.gen_bool(0.5) {
            var(rng, pool)
        } else {
            PatternTerm::Term(term)
        }
    };
    let s = pos(t.subject().clone(), &["x", "y"]);
    let p = pos(RdfTerm::Iri(t.predicate().clone()), &["p", "q"]);
    let o = pos(t.object().clone(), &["y", "z", "o"]);
    TriplePattern::new(s, p, o).ok()
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let ncols = rng.gen_range(1..=4);
    let mapping = random_mapping(rng, 5, ncols);
    let probe = random_sigma(rng, ncols);
    let g = rmlprune::algebra::materialize(&mapping, &probe).unwrap();
    let n = rng.gen_range(1..=3);
    let patterns = (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                if let Some(tp) = pattern_from(rng, &g) {
                    return tp;
                }
            }
            random_pattern(rng)
        })
        .collect();
    Instance { mapping, patterns, ncols, probe }
}

/// Binds every source to a CSV of 1..=8 rows of non-empty cells.
pub fn random_sigma<R: Rng>(rng: &mut R, ncols: usize) -> SourceAssignment {
    let header: Vec<String> = (0..ncols).map(|i| format!("c{i}")).collect();
    let mut sigma = SourceAssignment::new();
    for s in SOURCES {
        let nrows = rng.gen_range(1..=8);
        let rows = (0..nrows)
            .map(|_| (0..ncols).map(|_| VALUES.choose(rng).unwrap().to_string()).collect())
            .collect();
        sigma.bind(s, DataObject::csv(CsvDataObject::new(header.clone(), rows).unwrap()));
    }
    sigma
}

fn match_term(pt: &PatternTerm, t: &RdfTerm, mu: &mut SolutionMapping) -> bool {
    match pt {
        PatternTerm::Term(c) => c == t,
        PatternTerm::Var(v) => match mu.get(v) {
            Some(bound) => bound == t,
            None => {
                mu.insert(v.clone(), t.clone());
                true
            }
        },
    }
}

/// Full scan of the graph per pattern followed by pairwise compatible
/// merging. No indexes, no reordering.
pub fn naive_bgp(patterns: &[TriplePattern], g: &RdfGraph) -> BTreeSet<SolutionMapping> {
    let mut acc: BTreeSet<SolutionMapping> = [SolutionMapping::new()].into();
    for tp in patterns {
        let mut here = BTreeSet::new();
        for t in g.iter() {
            let mut mu = SolutionMapping::new();
            let p = RdfTerm::Iri(t.predicate().clone());
            if match_term(tp.subject(), t.subject(), &mut mu)
                && match_term(tp.predicate(), &p, &mut mu)
                && match_term(tp.object(), t.object(), &mut mu)
            {
                here.insert(mu);
            }
        }
        acc = acc
            .iter()
            .flat_map(|a| here.iter().filter_map(move |b| a.merge(b)))
            .collect();
    }
    acc
}

pub fn vars_of(patterns: &[TriplePattern]) -> BTreeSet<Variable> {
    patterns.iter().flat_map(|tp| tp.variables().into_iter().cloned()).collect()
}

/// Predicate-object maps per triples map in the wide mapping, the class
/// assertion included. Sums to 86.
pub const WIDE_SHAPE: [usize; 13] = [8, 7, 7, 7, 7, 7, 7, 6, 6, 6, 6, 6, 6];

/// RML text for a transit-style mapping with 13 triples maps and 86
/// TrMap-expressions. Every triples map after the first links to its
/// predecessor through a join.
pub fn wide_mapping() -> String {
    let mut out = String::from(
        "@prefix rml: <http://w3id.org/rml/> .\n\
         @prefix ex: <http://ex.org/> .\n\
         @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\n",
    );
    for (i, &n) in WIDE_SHAPE.iter().enumerate() {
        out.push_str(&format!(
            "<http://ex.org/map/T{i}> a rml:TriplesMap ;\n  \
             rml:logicalSource [ rml:source \"t{i}.csv\" ; rml:referenceFormulation rml:CSV ] ;\n  \
             rml:subjectMap [ rml:template \"http://ex.org/e{i}/{{id}}\" ; rml:class ex:C{i} ]"
        ));
        for j in 1..n {
            let object = match (j, i) {
                (1, i) if i > 0 => format!(
                    "rml:parentTriplesMap <http://ex.org/map/T{}> ; \
                     rml:joinCondition [ rml:child \"up\" ; rml:parent \"id\" ]",
                    i - 1
                ),
                (j, _) if j % 3 == 0 => format!("rml:template \"http://ex.org/v{i}/{{c{j}}}\""),
                (j, _) if j % 3 == 1 => format!("rml:reference \"c{j}\" ; rml:datatype xsd:integer"),
                (j, _) => format!("rml:reference \"c{j}\""),
            };
            out.push_str(&format!(
                " ;\n  rml:predicateObjectMap [ rml:predicate ex:p{i}_{j} ; rml:objectMap [ {object} ] ]"
            ));
        }
        out.push_str(" .\n\n");
    }
    out
}

/// Fifteen patterns against the wide mapping: class lookups, attribute
/// reads, constants inside and outside template ranges and one pattern that
/// matches everything.
pub fn wide_patterns() -> Vec<TriplePattern> {
    let v = PatternTerm::var;
    let c = |s: &str| PatternTerm::Term(RdfTerm::Iri(iri(s)));
    let l = |lex: &str, dt: &str| PatternTerm::Term(lit(lex, dt));
    let ty = c(rmlprune::rdf::RDF_TYPE);
    let raw = vec![
        (v("s"), ty.clone(), c("http://ex.org/C3")),
        (v("s"), c("http://ex.org/p3_2"), v("name")),
        (v("s"), c("http://ex.org/p3_4"), l("7", XSD_INTEGER)),
        (v("s"), c("http://ex.org/p4_1"), v("up")),
        (c("http://ex.org/e5/9"), v("p"), v("o")),
        (v("s"), v("p"), c("http://ex.org/v6/x")),
        (v("s"), c("http://ex.org/p7_3"), c("http://ex.org/v7/1")),
        (v("s"), c("http://ex.org/p8_5"), l("abc", XSD_STRING)),
        (v("s"), ty.clone(), v("class")),
        (c("http://other.org/e1/1"), v("p"), v("o")),
        (v("s"), c("http://ex.org/p9_2"), l("1", XSD_DECIMAL)),
        (v("s"), c("http://ex.org/p10_3"), c("http://ex.org/v9/1")),
        (v("s"), c("http://ex.org/p12_1"), c("http://ex.org/e11/4")),
        (v("s"), c("http://ex.org/nothing"), v("o")),
        (v("s"), c("http://ex.org/p0_6"), v("o")),
    ];
    raw.into_iter()
        .map(|(s, p, o)| TriplePattern::new(s, p, o).unwrap())
        .collect()
}
