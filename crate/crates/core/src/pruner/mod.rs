//! Query-aware pruning of RML mapping expressions.
//!
//! A TrMap-expression is kept as soon as one triple pattern of the query is
//! not incompatible with it; the rest are dropped. Every dropped
//! TrMap-expression is incompatible with every pattern, so it cannot
//! contribute a triple to any answer and query results are unchanged.

mod incompat;
mod pattern;

use std::fmt;

pub use incompat::{incompatibility, iri_incompatible, tp_incompatible, Incompatibility, IriConflict};
pub use pattern::{escape_ere, regex_of, MatchingPattern, PatternOptions};

use crate::algebra::{Provenance, RmlMappingExpr, SourceAssignment, TrMapExpr};
use crate::error::Result;
use crate::rdf::{RdfGraph, TriplePattern};
use incompat::CompiledTrMap;

/// The result of pruning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pruned {
    /// The retained TrMap-expressions, in their original order.
    Mapping(RmlMappingExpr),
    /// Nothing survived. Materializes to the empty graph.
    Empty,
}

impl Pruned {
    pub fn trmaps(&self) -> &[TrMapExpr] {
        match self {
            Pruned::Mapping(m) => m.trmaps(),
            Pruned::Empty => &[],
        }
    }

    pub fn len(&self) -> usize {
        self.trmaps().len()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Pruned::Empty)
    }

    pub fn as_mapping(&self) -> Option<&RmlMappingExpr> {
        match self {
            Pruned::Mapping(m) => Some(m),
            Pruned::Empty => None,
        }
    }

    pub fn materialize(&self, sigma: &SourceAssignment) -> Result<RdfGraph> {
        match self {
            Pruned::Mapping(m) => crate::algebra::materialize(m, sigma),
            Pruned::Empty => Ok(RdfGraph::new()),
        }
    }
}

/// Per-TrMap record of a pruning decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Retained because this pattern is not incompatible with it.
    Retained { witness: TriplePattern },
    /// Pruned; one reason per input pattern.
    Pruned {
        reasons: Vec<(TriplePattern, Incompatibility)>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PruneTrace {
    pub decisions: Vec<(Provenance, Decision)>,
}

impl fmt::Display for PruneTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (prov, d) in &self.decisions {
            match d {
                Decision::Retained { witness } => {
                    writeln!(f, "keep  {prov}: compatible with {witness}")?
                }
                Decision::Pruned { reasons } => {
                    writeln!(f, "prune {prov}:")?;
                    for (tp, why) in reasons {
                        writeln!(f, "        {tp}  -- {why}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Prunes `m` for the given triple patterns with default options.
pub fn prune(patterns: &[TriplePattern], m: &RmlMappingExpr) -> Pruned {
    prune_traced(patterns, m, PatternOptions::default()).0
}

/// Prunes `m` and records, per TrMap-expression, why it was kept or dropped.
pub fn prune_traced(
    patterns: &[TriplePattern],
    m: &RmlMappingExpr,
    opts: PatternOptions,
) -> (Pruned, PruneTrace) {
    let mut retained = Vec::new();
    let mut trace = PruneTrace::default();
    for tm in m.trmaps() {
        let compiled = CompiledTrMap::new(tm, opts);
        let mut reasons = Vec::with_capacity(patterns.len());
        let mut witness = None;
        for tp in patterns {
            match compiled.incompatibility(tp) {
                Some(why) => reasons.push((tp.clone(), why)),
                None => {
                    witness = Some(tp.clone());
                    break;
                }
            }
        }
        let decision = match witness {
            Some(witness) => {
                retained.push(tm.clone());
                Decision::Retained { witness }
            }
            None => Decision::Pruned { reasons },
        };
        trace.decisions.push((tm.provenance().clone(), decision));
    }
    let pruned = match RmlMappingExpr::new(retained) {
        Ok(m) => Pruned::Mapping(m),
        Err(_) => Pruned::Empty,
    };
    (pruned, trace)
}
