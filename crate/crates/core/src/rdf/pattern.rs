//! Triple patterns, solution mappings, and evaluation of triple patterns and
//! basic graph patterns over an [`RdfGraph`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::graph::{RdfGraph, Triple};
use super::term::{Iri, RdfTerm};
use crate::error::{Error, Result};

/// A query variable. The name excludes the leading `?`.
///
/// Blank nodes written in a query act as non-distinguished variables; they are
/// kept here under a name starting with `_:` which cannot clash with `?name`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub fn blank(label: &str) -> Self {
        Variable(format!("_:{label}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_blank(&self) -> bool {
        self.0.starts_with("_:")
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_blank() {
            f.write_str(&self.0)
        } else {
            write!(f, "?{}", self.0)
        }
    }
}

/// One position of a triple pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(Variable),
    Term(RdfTerm),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(Variable::new(name))
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&RdfTerm> {
        match self {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Var(_) => None,
        }
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Var(v)
    }
}

impl From<RdfTerm> for PatternTerm {
    fn from(t: RdfTerm) -> Self {
        PatternTerm::Term(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(i: Iri) -> Self {
        PatternTerm::Term(RdfTerm::Iri(i))
    }
}

impl fmt::Debug for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => v.fmt(f),
            PatternTerm::Term(t) => t.fmt(f),
        }
    }
}

/// A triple pattern `(s, p, o)`. Subject and predicate are IRIs or variables,
/// the object additionally may be a literal. Blank nodes never occur.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    s: PatternTerm,
    p: PatternTerm,
    o: PatternTerm,
}

impl TriplePattern {
    pub fn new(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> Result<Self> {
        let bad = |pos: &str, t: &RdfTerm| {
            Err(Error::InvalidTerm(format!(
                "{t} is not allowed in the {pos} position of a triple pattern"
            )))
        };
        match &s {
            PatternTerm::Term(t @ (RdfTerm::BNode(_) | RdfTerm::Literal(_))) => {
                return bad("subject", t)
            }
            _ => {}
        }
        match &p {
            PatternTerm::Term(t @ (RdfTerm::BNode(_) | RdfTerm::Literal(_))) => {
                return bad("predicate", t)
            }
            _ => {}
        }
        if let PatternTerm::Term(t @ RdfTerm::BNode(_)) = &o {
            return bad("object", t);
        }
        Ok(TriplePattern { s, p, o })
    }

    pub fn subject(&self) -> &PatternTerm {
        &self.s
    }

    pub fn predicate(&self) -> &PatternTerm {
        &self.p
    }

    pub fn object(&self) -> &PatternTerm {
        &self.o
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.s, &self.p, &self.o]
    }

    pub fn variables(&self) -> BTreeSet<&Variable> {
        self.positions().into_iter().filter_map(PatternTerm::as_var).collect()
    }

    /// The triple this pattern denotes when it has no variables.
    pub fn as_triple(&self) -> Option<Triple> {
        Triple::from_terms(self.s.as_term()?, self.p.as_term()?, self.o.as_term()?)
    }
}

impl fmt::Debug for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.s, self.p, self.o)
    }
}

/// A partial map from variables to RDF terms.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionMapping(BTreeMap<Variable, RdfTerm>);

impl SolutionMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Variable) -> Option<&RdfTerm> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: Variable, t: RdfTerm) -> Option<RdfTerm> {
        self.0.insert(v, t)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &RdfTerm)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Two mappings are compatible when they agree on every shared variable.
    pub fn is_compatible(&self, other: &SolutionMapping) -> bool {
        self.0
            .iter()
            .all(|(v, t)| other.0.get(v).map_or(true, |u| u == t))
    }

    /// `self ∪ other`, or `None` if the mappings are incompatible.
    pub fn merge(&self, other: &SolutionMapping) -> Option<SolutionMapping> {
        if !self.is_compatible(other) {
            return None;
        }
        let mut out = self.clone();
        for (v, t) in &other.0 {
            out.0.insert(v.clone(), t.clone());
        }
        Some(out)
    }

    /// Restricts the mapping to the given variables.
    pub fn project(&self, vars: &[Variable]) -> SolutionMapping {
        SolutionMapping(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        )
    }
}

impl FromIterator<(Variable, RdfTerm)> for SolutionMapping {
    fn from_iter<I: IntoIterator<Item = (Variable, RdfTerm)>>(iter: I) -> Self {
        SolutionMapping(iter.into_iter().collect())
    }
}

impl fmt::Debug for SolutionMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

/// A conjunction of triple patterns: `P1 AND ... AND Pn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bgp {
    patterns: Vec<TriplePattern>,
}

impl Bgp {
    pub fn new(patterns: Vec<TriplePattern>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::Structural("empty basic graph pattern".into()));
        }
        Ok(Bgp { patterns })
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }
}

/// `μ[tp]`: replaces every variable of `tp` bound by `mu`.
pub fn apply_solution(mu: &SolutionMapping, tp: &TriplePattern) -> TriplePattern {
    let subst = |t: &PatternTerm| match t {
        PatternTerm::Var(v) => mu
            .get(v)
            .map_or_else(|| t.clone(), |term| PatternTerm::Term(term.clone())),
        PatternTerm::Term(_) => t.clone(),
    };
    // Substitution may place a blank node or literal where a pattern forbids
    // one, so the result is built without re-validation.
    TriplePattern {
        s: subst(&tp.s),
        p: subst(&tp.p),
        o: subst(&tp.o),
    }
}

/// Extends `mu` so that `tp` maps onto `triple`, or returns `None`.
fn match_triple(tp: &TriplePattern, triple: &Triple, mu: &SolutionMapping) -> Option<SolutionMapping> {
    let predicate = RdfTerm::Iri(triple.predicate().clone());
    let pairs = [
        (&tp.s, triple.subject()),
        (&tp.p, &predicate),
        (&tp.o, triple.object()),
    ];
    let mut out = mu.clone();
    for (pt, term) in pairs {
        match pt {
            PatternTerm::Term(t) => {
                if t != term {
                    return None;
                }
            }
            PatternTerm::Var(v) => match out.get(v) {
                Some(bound) if bound != term => return None,
                Some(_) => {}
                None => {
                    out.insert(v.clone(), term.clone());
                }
            },
        }
    }
    Some(out)
}

fn candidates<'a>(tp: &TriplePattern, g: &'a RdfGraph) -> Box<dyn Iterator<Item = &'a Triple> + 'a> {
    match &tp.p {
        PatternTerm::Term(RdfTerm::Iri(p)) => Box::new(g.with_predicate(p).iter()),
        PatternTerm::Term(_) => Box::new(std::iter::empty()),
        PatternTerm::Var(_) => Box::new(g.iter()),
    }
}

/// `⟦tp⟧_G`: all mappings μ with `dom(μ) = vars(tp)` and `μ[tp] ∈ G`.
pub fn eval_triple_pattern(tp: &TriplePattern, g: &RdfGraph) -> BTreeSet<SolutionMapping> {
    let empty = SolutionMapping::new();
    candidates(tp, g)
        .filter_map(|t| match_triple(tp, t, &empty))
        .collect()
}

/// Join semantics over all patterns of the BGP, evaluated as an index nested
/// loop: each partial solution is substituted into the next pattern.
pub fn eval_bgp(bgp: &Bgp, g: &RdfGraph) -> BTreeSet<SolutionMapping> {
    let mut current: Vec<SolutionMapping> = vec![SolutionMapping::new()];
    for tp in &bgp.patterns {
        let mut next = BTreeSet::new();
        for mu in &current {
            let bound = apply_solution(mu, tp);
            for t in candidates(&bound, g) {
                if let Some(ext) = match_triple(&bound, t, mu) {
                    next.insert(ext);
                }
            }
        }
        current = next.into_iter().collect();
        if current.is_empty() {
            break;
        }
    }
    current.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Literal, XSD_DOUBLE};

    fn ex(s: &str) -> RdfTerm {
        RdfTerm::iri(format!("http://ex.org/{s}")).unwrap()
    }

    fn exi(s: &str) -> Iri {
        Iri::new(format!("http://ex.org/{s}")).unwrap()
    }

    fn tp(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> TriplePattern {
        TriplePattern::new(s, p, o).unwrap()
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(ex(s), exi(p), ex(o)).unwrap()
    }

    fn v(n: &str) -> PatternTerm {
        PatternTerm::var(n)
    }

    fn c(s: &str) -> PatternTerm {
        PatternTerm::Term(ex(s))
    }

    #[test]
    fn apply_substitutes_bound_variables() {
        let mu: SolutionMapping = [(Variable::new("x"), ex("a"))].into_iter().collect();
        let out = apply_solution(&mu, &tp(v("x"), c("p"), c("b")));
        assert_eq!(out, tp(c("a"), c("p"), c("b")));
    }

    #[test]
    fn apply_empty_mapping_is_identity() {
        let pat = tp(v("x"), c("p"), v("y"));
        assert_eq!(apply_solution(&SolutionMapping::new(), &pat), pat);
    }

    #[test]
    fn apply_listing_pattern() {
        let dbl = Iri::new(XSD_DOUBLE).unwrap();
        let lit = PatternTerm::Term(Literal::new("23.0", dbl).into());
        let long = PatternTerm::Term(RdfTerm::iri("http://vocab.gtfs.org/terms#long").unwrap());
        let pat = tp(v("airportId"), long.clone(), lit.clone());
        let mu: SolutionMapping = [(Variable::new("airportId"), ex("ap1"))].into_iter().collect();
        assert_eq!(apply_solution(&mu, &pat), tp(c("ap1"), long, lit));
    }

    #[test]
    fn blank_nodes_rejected_in_patterns() {
        let b = PatternTerm::Term(crate::rdf::BlankNode::new("b").unwrap().into());
        assert!(TriplePattern::new(b.clone(), c("p"), c("o")).is_err());
        assert!(TriplePattern::new(c("s"), c("p"), b).is_err());
        let lit = PatternTerm::Term(Literal::string("x").into());
        assert!(TriplePattern::new(lit.clone(), c("p"), c("o")).is_err());
        assert!(TriplePattern::new(c("s"), lit, c("o")).is_err());
    }

    #[test]
    fn all_variable_pattern_on_single_triple() {
        let g: RdfGraph = [t("a", "p", "b")].into_iter().collect();
        let res = eval_triple_pattern(&tp(v("s"), v("p"), v("o")), &g);
        let expected: SolutionMapping = [
            (Variable::new("s"), ex("a")),
            (Variable::new("p"), ex("p")),
            (Variable::new("o"), ex("b")),
        ]
        .into_iter()
        .collect();
        assert_eq!(res, [expected].into_iter().collect());
    }

    #[test]
    fn ground_pattern_on_empty_graph() {
        let res = eval_triple_pattern(&tp(c("a"), c("p"), c("b")), &RdfGraph::new());
        assert!(res.is_empty());
    }

    #[test]
    fn non_matching_predicate() {
        let g: RdfGraph = [t("a", "p", "b")].into_iter().collect();
        assert!(eval_triple_pattern(&tp(v("x"), c("q"), v("y")), &g).is_empty());
    }

    #[test]
    fn repeated_variable_must_bind_consistently() {
        let g: RdfGraph = [t("a", "p", "a"), t("a", "p", "b")].into_iter().collect();
        let res = eval_triple_pattern(&tp(v("x"), c("p"), v("x")), &g);
        assert_eq!(res.len(), 1);
    }

    #[test]
    fn bgp_chain_join() {
        let g: RdfGraph = [t("x", "p", "y"), t("y", "q", "z")].into_iter().collect();
        let bgp = Bgp::new(vec![tp(v("a"), c("p"), v("b")), tp(v("b"), c("q"), v("c"))]).unwrap();
        let expected: SolutionMapping = [
            (Variable::new("a"), ex("x")),
            (Variable::new("b"), ex("y")),
            (Variable::new("c"), ex("z")),
        ]
        .into_iter()
        .collect();
        assert_eq!(eval_bgp(&bgp, &g), [expected].into_iter().collect());
    }

    #[test]
    fn bgp_contradictory_shared_variable() {
        let g: RdfGraph = [t("x", "p", "y"), t("w", "q", "z")].into_iter().collect();
        let bgp = Bgp::new(vec![tp(v("a"), c("p"), v("b")), tp(v("b"), c("q"), v("c"))]).unwrap();
        assert!(eval_bgp(&bgp, &g).is_empty());
    }

    #[test]
    fn empty_bgp_rejected() {
        assert!(Bgp::new(vec![]).is_err());
    }
}
