//! A pragmatic SPARQL subset: SELECT queries over groups of triple patterns
//! with OPTIONAL, opaque FILTERs and recorded (not evaluated) solution
//! modifiers.

mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::parse_query;

use crate::error::{Error, Result};
use crate::rdf::{eval_bgp, Bgp, RdfGraph, RdfTerm, SolutionMapping, TriplePattern, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelectItem {
    Var(Variable),
    /// `(expression AS ?var)`, expression kept as source text.
    Expr { expr: String, var: Variable },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    All,
    Items(Vec<SelectItem>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupPattern {
    pub elements: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    Triples(Vec<TriplePattern>),
    Optional(GroupPattern),
    Group(GroupPattern),
    /// Constraint source text, e.g. `(?x > 3)` or `regex(?n, "a")`.
    Filter(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub base: Option<String>,
    pub prefixes: Vec<(String, String)>,
    pub distinct: bool,
    pub reduced: bool,
    pub projection: Projection,
    pub pattern: GroupPattern,
    pub group_by: Option<String>,
    pub having: Option<String>,
    pub order_by: Option<String>,
    pub limit: Option<u64>,
    pub offset: Option<u64>,
}

impl GroupPattern {
    fn collect<'a>(&'a self, out: &mut Vec<&'a TriplePattern>) {
        for e in &self.elements {
            match e {
                GroupElement::Triples(tps) => out.extend(tps),
                GroupElement::Optional(g) | GroupElement::Group(g) => g.collect(out),
                GroupElement::Filter(_) => {}
            }
        }
    }

    /// The patterns of a group made only of triples and plain subgroups.
    fn plain_patterns(&self) -> Result<Vec<TriplePattern>> {
        let mut out = Vec::new();
        for e in &self.elements {
            match e {
                GroupElement::Triples(tps) => out.extend(tps.iter().cloned()),
                GroupElement::Group(g) => out.extend(g.plain_patterns()?),
                GroupElement::Optional(_) => {
                    return Err(Error::Unsupported("OPTIONAL is not evaluated".into()))
                }
                GroupElement::Filter(_) => {
                    return Err(Error::Unsupported("FILTER is not evaluated".into()))
                }
            }
        }
        Ok(out)
    }
}

impl Query {
    /// Every triple pattern in the query, in order of appearance.
    pub fn patterns(&self) -> Vec<&TriplePattern> {
        let mut out = Vec::new();
        self.pattern.collect(&mut out);
        out
    }

    /// The query as a basic graph pattern, if it is one up to DISTINCT and
    /// projection.
    pub fn as_bgp(&self) -> Result<Bgp> {
        let unsupported = [
            (self.group_by.is_some(), "GROUP BY"),
            (self.having.is_some(), "HAVING"),
            (self.order_by.is_some(), "ORDER BY"),
            (self.limit.is_some(), "LIMIT"),
            (self.offset.is_some(), "OFFSET"),
            (self.reduced, "REDUCED"),
        ];
        if let Some((_, what)) = unsupported.iter().find(|(on, _)| *on) {
            return Err(Error::Unsupported(format!("{what} is not evaluated")));
        }
        if let Projection::Items(items) = &self.projection {
            if items.iter().any(|i| matches!(i, SelectItem::Expr { .. })) {
                return Err(Error::Unsupported("select expressions are not evaluated".into()));
            }
        }
        Bgp::new(self.pattern.plain_patterns()?)
    }

    /// Projected variables; for `*`, the named variables in order of appearance.
    pub fn projected_vars(&self) -> Vec<Variable> {
        match &self.projection {
            Projection::Items(items) => items
                .iter()
                .map(|i| match i {
                    SelectItem::Var(v) | SelectItem::Expr { var: v, .. } => v.clone(),
                })
                .collect(),
            Projection::All => {
                let mut seen = Vec::new();
                for tp in self.patterns() {
                    for t in tp.positions() {
                        if let Some(v) = t.as_var() {
                            if !v.is_blank() && !seen.contains(v) {
                                seen.push(v.clone());
                            }
                        }
                    }
                }
                seen
            }
        }
    }

    /// Evaluates a BGP query over `g`: solutions projected, deduplicated
    /// under DISTINCT, sorted.
    pub fn evaluate(&self, g: &RdfGraph) -> Result<Vec<SolutionMapping>> {
        let bgp = self.as_bgp()?;
        let vars = self.projected_vars();
        let mut rows: Vec<SolutionMapping> =
            eval_bgp(&bgp, g).iter().map(|mu| mu.project(&vars)).collect();
        if self.distinct {
            rows = rows.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        }
        rows.sort();
        Ok(rows)
    }
}

/// The set of all triple patterns anywhere in the query, OPTIONAL and
/// filtered groups included.
pub fn collect_triple_patterns(q: &Query) -> BTreeSet<TriplePattern> {
    q.patterns().into_iter().cloned().collect()
}

/// Solutions as tab-separated values with a header row of variable names.
pub fn to_tsv(vars: &[Variable], rows: &[SolutionMapping]) -> String {
    let mut out: String = vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\t");
    out.push('\n');
    for mu in rows {
        let cells: Vec<String> = vars
            .iter()
            .map(|v| mu.get(v).map(RdfTerm::to_string).unwrap_or_default())
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

fn write_group(f: &mut fmt::Formatter<'_>, g: &GroupPattern, depth: usize) -> fmt::Result {
    let pad = "  ".repeat(depth + 1);
    writeln!(f, "{{")?;
    for e in &g.elements {
        match e {
            GroupElement::Triples(tps) => {
                for tp in tps {
                    writeln!(f, "{pad}{tp} .")?;
                }
            }
            GroupElement::Optional(inner) => {
                write!(f, "{pad}OPTIONAL ")?;
                write_group(f, inner, depth + 1)?;
            }
            GroupElement::Group(inner) => {
                write!(f, "{pad}")?;
                write_group(f, inner, depth + 1)?;
            }
            GroupElement::Filter(c) => writeln!(f, "{pad}FILTER {c}")?,
        }
    }
    writeln!(f, "{}}}", "  ".repeat(depth))
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = &self.base {
            writeln!(f, "BASE <{b}>")?;
        }
        for (p, iri) in &self.prefixes {
            writeln!(f, "PREFIX {p}: <{iri}>")?;
        }
        f.write_str("SELECT ")?;
        if self.distinct {
            f.write_str("DISTINCT ")?;
        }
        if self.reduced {
            f.write_str("REDUCED ")?;
        }
        match &self.projection {
            Projection::All => f.write_str("*")?,
            Projection::Items(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        SelectItem::Var(v) => v.to_string(),
                        SelectItem::Expr { expr, var } => format!("({expr} AS {var})"),
                    })
                    .collect();
                f.write_str(&parts.join(" "))?;
            }
        }
        f.write_str(" WHERE ")?;
        write_group(f, &self.pattern, 0)?;
        if let Some(g) = &self.group_by {
            writeln!(f, "GROUP BY {g}")?;
        }
        if let Some(h) = &self.having {
            writeln!(f, "HAVING {h}")?;
        }
        if let Some(o) = &self.order_by {
            writeln!(f, "ORDER BY {o}")?;
        }
        if let Some(l) = self.limit {
            writeln!(f, "LIMIT {l}")?;
        }
        if let Some(o) = self.offset {
            writeln!(f, "OFFSET {o}")?;
        }
        Ok(())
    }
}
