//! The translate → prune → materialize → query pipeline, a benchmark driver
//! comparing full and pruned runs, and a synthetic transit corpus.

mod generate;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use generate::{generate_corpus, Corpus, CorpusSpec};

use crate::algebra::{materialize, DataObject, RmlMappingExpr, SourceAssignment};
use crate::error::{Error, Result};
use crate::pruner::{prune_traced, PatternOptions, PruneTrace, Pruned};
use crate::rdf::{eval_triple_pattern, RdfGraph, SolutionMapping, TriplePattern};
use crate::rml::{parse_rml, serialize_pruned, translate, RmlDocument};
use crate::sparql::{collect_triple_patterns, parse_query, Query};

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

/// A parsed and translated mapping document.
#[derive(Clone, Debug)]
pub struct LoadedMapping {
    pub doc: RmlDocument,
    pub expr: RmlMappingExpr,
}

pub fn load_mapping(path: &Path) -> Result<LoadedMapping> {
    let doc = parse_rml(&read(path)?)?;
    let expr = translate(&doc)?;
    Ok(LoadedMapping { doc, expr })
}

pub fn load_query(path: &Path) -> Result<Query> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::InvalidInput(format!("{} is not UTF-8", path.display())))?;
    parse_query(&text)
}

/// Binds every logical source of `m` to the CSV file of that name under
/// `data_dir`.
pub fn source_assignment(m: &RmlMappingExpr, data_dir: &Path) -> Result<SourceAssignment> {
    let mut sources = BTreeSet::new();
    for tm in m.trmaps() {
        sources.insert(tm.body().extract().source.clone());
        if let Some(p) = tm.body().parent_extract() {
            sources.insert(p.source.clone());
        }
    }
    let mut sigma = SourceAssignment::new();
    for s in sources {
        let path = data_dir.join(s.as_str());
        let bytes = fs::read(&path).map_err(|e| {
            Error::InvalidInput(format!("source {s} ({}): {e}", path.display()))
        })?;
        let data = DataObject::parse_csv(&bytes).map_err(|e| {
            Error::InvalidInput(format!("source {s} ({}): {e}", path.display()))
        })?;
        sigma.bind(s.as_str(), data);
    }
    Ok(sigma)
}

/// Materializes a (possibly fully pruned) mapping over sources in `data_dir`.
pub fn materialize_dir(pruned: &Pruned, data_dir: &Path) -> Result<RdfGraph> {
    match pruned {
        Pruned::Mapping(m) => materialize(m, &source_assignment(m, data_dir)?),
        Pruned::Empty => Ok(RdfGraph::new()),
    }
}

#[derive(Clone, Debug)]
pub struct PruneOutcome {
    pub before: usize,
    pub pruned: Pruned,
    pub trace: PruneTrace,
    pub prune_ms: f64,
    /// The pruned mapping as an RML document.
    pub turtle: String,
}

impl PruneOutcome {
    pub fn after(&self) -> usize {
        self.pruned.len()
    }
}

pub fn prune_mapping(mapping: &LoadedMapping, query: &Query, opts: PatternOptions) -> Result<PruneOutcome> {
    let patterns: Vec<TriplePattern> = collect_triple_patterns(query).into_iter().collect();
    let start = Instant::now();
    let (pruned, trace) = prune_traced(&patterns, &mapping.expr, opts);
    let prune_ms = ms_since(start);
    let turtle = serialize_pruned(pruned.trmaps(), &mapping.doc)?;
    Ok(PruneOutcome {
        before: mapping.expr.len(),
        pruned,
        trace,
        prune_ms,
        turtle,
    })
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

/// Runs `f` once to warm up, then `reps` times; returns the last result and
/// the mean wall time in milliseconds.
pub fn timed<T>(reps: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let reps = reps.max(1);
    let mut out = f()?;
    let mut total = 0.0;
    for _ in 0..reps {
        let start = Instant::now();
        out = f()?;
        total += ms_since(start);
    }
    Ok((out, total / reps as f64))
}

/// Answers of every collected pattern, and of the whole query if it is a BGP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answers {
    pub per_pattern: Vec<BTreeSet<SolutionMapping>>,
    pub bgp: Option<Vec<SolutionMapping>>,
}

impl Answers {
    pub fn rows(&self) -> usize {
        match &self.bgp {
            Some(rows) => rows.len(),
            None => self.per_pattern.iter().map(BTreeSet::len).sum(),
        }
    }
}

pub fn answers(query: &Query, g: &RdfGraph) -> Answers {
    Answers {
        per_pattern: collect_triple_patterns(query)
            .iter()
            .map(|tp| eval_triple_pattern(tp, g))
            .collect(),
        bgp: query.evaluate(g).ok(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub query: String,
    pub trmaps_before: usize,
    pub trmaps_after: usize,
    pub prune_ms: f64,
    pub materialize_ms: f64,
    pub triples: usize,
    pub query_ms: f64,
    pub result_rows: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub const REPORT_HEADER: [&str; 8] = [
    "query",
    "trmaps_before",
    "trmaps_after",
    "prune_ms",
    "materialize_ms",
    "triples",
    "query_ms",
    "equal",
];

impl BenchReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(REPORT_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.query.clone(),
                r.trmaps_before.to_string(),
                r.trmaps_after.to_string(),
                format!("{:.2}", r.prune_ms),
                format!("{:.2}", r.materialize_ms),
                r.triples.to_string(),
                format!("{:.2}", r.query_ms),
                r.equal.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("UTF-8")
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub mapping: PathBuf,
    pub queries_dir: PathBuf,
    pub data_dir: PathBuf,
    pub repetitions: usize,
    pub options: PatternOptions,
}

/// `*.rq` files of a directory in natural order (q2 before q10).
pub fn query_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "rq"))
        .collect();
    files.sort_by_key(|p| {
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let digits: String = stem.chars().filter(char::is_ascii_digit).collect();
        let prefix: String = stem.chars().filter(|c| !c.is_ascii_digit()).collect();
        (prefix, digits.parse::<u64>().unwrap_or(0), stem)
    });
    Ok(files)
}

/// For each query: one row for the full mapping (`<id>-full`) and one for
/// the pruned mapping (`<id>`). `equal` holds when every collected pattern,
/// and the whole query if it is a BGP, has the same answers on both graphs
/// and the pruned graph is a subgraph of the full one.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let mapping = load_mapping(&cfg.mapping)?;
    let queries = query_files(&cfg.queries_dir)?;
    if queries.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no .rq files in {}",
            cfg.queries_dir.display()
        )));
    }
    let full = Pruned::Mapping(mapping.expr.clone());
    let sigma = source_assignment(&mapping.expr, &cfg.data_dir)?;
    let (full_graph, full_ms) = timed(cfg.repetitions, || materialize(&mapping.expr, &sigma))?;
    let mut report = BenchReport::default();
    for path in queries {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let query = load_query(&path)?;
        let patterns: Vec<TriplePattern> = collect_triple_patterns(&query).into_iter().collect();
        let (outcome, prune_ms) = timed(cfg.repetitions, || {
            Ok(prune_traced(&patterns, &mapping.expr, cfg.options).0)
        })?;
        let (pruned_graph, pruned_ms) = timed(cfg.repetitions, || match &outcome {
            Pruned::Mapping(m) => materialize(m, &sigma),
            Pruned::Empty => Ok(RdfGraph::new()),
        })?;
        let (full_answers, full_q_ms) = timed(cfg.repetitions, || Ok(answers(&query, &full_graph)))?;
        let (pruned_answers, pruned_q_ms) =
            timed(cfg.repetitions, || Ok(answers(&query, &pruned_graph)))?;
        let equal = full_answers == pruned_answers && pruned_graph.is_subgraph_of(&full_graph);
        if !equal {
            log::error!("{id}: answers differ between full and pruned graphs");
        }
        report.rows.push(BenchRow {
            query: format!("{id}-full"),
            trmaps_before: full.len(),
            trmaps_after: full.len(),
            prune_ms: 0.0,
            materialize_ms: full_ms,
            triples: full_graph.len(),
            query_ms: full_q_ms,
            result_rows: full_answers.rows(),
            equal,
        });
        report.rows.push(BenchRow {
            query: id,
            trmaps_before: full.len(),
            trmaps_after: outcome.len(),
            prune_ms,
            materialize_ms: pruned_ms,
            triples: pruned_graph.len(),
            query_ms: pruned_q_ms,
            result_rows: pruned_answers.rows(),
            equal,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixtures() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
    }

    #[test]
    fn airports_materialize_four_triples() {
        let m = load_mapping(&fixtures().join("airports.rml.ttl")).unwrap();
        let g = materialize_dir(&Pruned::Mapping(m.expr), &fixtures()).unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn missing_source_is_named() {
        let m = load_mapping(&fixtures().join("airports.rml.ttl")).unwrap();
        let err = source_assignment(&m.expr, Path::new("/nonexistent")).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(ref s) if s.contains("airports.csv")), "{err}");
    }

    #[test]
    fn airports_prune_two_to_one() {
        let m = load_mapping(&fixtures().join("airports.rml.ttl")).unwrap();
        let q = load_query(&fixtures().join("airports.rq")).unwrap();
        let out = prune_mapping(&m, &q, PatternOptions::default()).unwrap();
        assert_eq!((out.before, out.after()), (2, 1));
        let re = parse_rml(out.turtle.as_bytes()).unwrap();
        assert_eq!(re.triples_maps[0].poms.len(), 1);
    }

    #[test]
    fn timing_averages() {
        let mut calls = 0;
        let (v, ms) = timed(4, || {
            calls += 1;
            Ok(calls)
        })
        .unwrap();
        assert_eq!((v, calls), (5, 5));
        assert!(ms >= 0.0);
    }

    #[test]
    fn report_header() {
        let csv = BenchReport::default().to_csv();
        assert_eq!(
            csv.trim_end(),
            "query,trmaps_before,trmaps_after,prune_ms,materialize_ms,triples,query_ms,equal"
        );
    }
}
