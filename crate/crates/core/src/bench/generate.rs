use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub scale: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { scale: 1, seed: 42 }
    }
}

/// Generated files, relative path and contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    pub files: Vec<(PathBuf, String)>,
}

impl Corpus {
    pub fn get(&self, path: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(p, _)| p == Path::new(path))
            .map(|(_, c)| c.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        for (rel, contents) in &self.files {
            let path = dir.join(rel);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, contents)?;
        }
        Ok(())
    }
}

const STOP_WORDS: &[&str] = &[
    "Central", "Park", "Market", "Harbor", "Station", "Bridge", "Museum", "Square", "Garden",
    "Depot", "Hill", "River", "Airport", "College", "Library",
];
const HEADSIGNS: &[&str] = &["North", "South", "East", "West", "Downtown", "Uptown", "Loop"];
const SHAPE_POINTS: usize = 10;

fn table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("UTF-8")
}

fn coord(rng: &mut ChaCha8Rng, center: f64) -> String {
    format!("{:.6}", center + rng.gen_range(-0.25..0.25))
}

/// A transit-flavored corpus: four CSV files scaling linearly with
/// `spec.scale`, a mapping over them and a set of queries.
pub fn generate_corpus(spec: CorpusSpec) -> Result<Corpus> {
    if spec.scale == 0 {
        return Err(Error::InvalidInput("scale must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n_stops = 100 * spec.scale;
    let n_routes = 10 * spec.scale;
    let n_trips = 50 * spec.scale;
    let n_shapes = 30 * spec.scale;

    let stops = (1..=n_stops)
        .map(|i| {
            let a = STOP_WORDS.choose(&mut rng).expect("non-empty");
            let b = STOP_WORDS.choose(&mut rng).expect("non-empty");
            vec![
                format!("S{i}"),
                format!("{a} {b}"),
                coord(&mut rng, 40.4),
                coord(&mut rng, -3.7),
                format!("Z{}", rng.gen_range(1..=5)),
                rng.gen_range(0..=2).to_string(),
            ]
        })
        .collect();
    let routes = (1..=n_routes)
        .map(|i| {
            let a = STOP_WORDS.choose(&mut rng).expect("non-empty");
            let b = STOP_WORDS.choose(&mut rng).expect("non-empty");
            vec![
                format!("R{i}"),
                format!("L{i}"),
                format!("{a} - {b}"),
                [0, 1, 3].choose(&mut rng).expect("non-empty").to_string(),
                format!("A{}", rng.gen_range(1..=3)),
            ]
        })
        .collect();
    let trips = (1..=n_trips)
        .map(|i| {
            vec![
                format!("T{i}"),
                format!("R{}", rng.gen_range(1..=n_routes)),
                ["weekday", "saturday", "sunday"]
                    .choose(&mut rng)
                    .expect("non-empty")
                    .to_string(),
                HEADSIGNS.choose(&mut rng).expect("non-empty").to_string(),
                format!("SH{}", rng.gen_range(1..=n_shapes)),
                rng.gen_range(0..=1).to_string(),
            ]
        })
        .collect();
    let mut shapes = Vec::new();
    for s in 1..=n_shapes {
        for seq in 1..=SHAPE_POINTS {
            shapes.push(vec![
                format!("SH{s}"),
                seq.to_string(),
                coord(&mut rng, 40.4),
                coord(&mut rng, -3.7),
            ]);
        }
    }

    let mut files = vec![
        (
            PathBuf::from("data/stops.csv"),
            table(
                &["stop_id", "stop_name", "stop_lat", "stop_lon", "zone_id", "wheelchair_boarding"],
                stops,
            ),
        ),
        (
            PathBuf::from("data/routes.csv"),
            table(
                &["route_id", "route_short_name", "route_long_name", "route_type", "agency_id"],
                routes,
            ),
        ),
        (
            PathBuf::from("data/trips.csv"),
            table(
                &["trip_id", "route_id", "service_id", "trip_headsign", "shape_id", "direction_id"],
                trips,
            ),
        ),
        (
            PathBuf::from("data/shapes.csv"),
            table(&["shape_id", "shape_pt_sequence", "shape_pt_lat", "shape_pt_lon"], shapes),
        ),
        (PathBuf::from("mapping.rml.ttl"), MAPPING.to_string()),
    ];
    for (name, _) in QUERIES {
        let text = query_text(name).expect("listed query");
        files.push((PathBuf::from(format!("queries/{name}.rq")), text));
    }
    Ok(Corpus { files })
}

const MAPPING: &str = r#"@prefix rml: <http://w3id.org/rml/> .
@prefix gtfs: <http://vocab.gtfs.org/terms#> .
@prefix geo: <http://www.w3.org/2003/01/geo/wgs84_pos#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix map: <http://transit.example.org/mapping#> .
@prefix tx: <http://transit.example.org/vocab#> .

map:Stops a rml:TriplesMap ;
  rml:logicalSource [ rml:source "stops.csv" ; rml:referenceFormulation rml:CSV ] ;
  rml:subjectMap [ rml:template "http://transit.example.org/stop/{stop_id}" ; rml:class gtfs:Stop ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:name ; rml:objectMap [ rml:reference "stop_name" ] ] ;
  rml:predicateObjectMap [ rml:predicate geo:lat ; rml:objectMap [ rml:reference "stop_lat" ; rml:datatype xsd:double ] ] ;
  rml:predicateObjectMap [ rml:predicate geo:long ; rml:objectMap [ rml:reference "stop_lon" ; rml:datatype xsd:double ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:zone ; rml:objectMap [ rml:template "http://transit.example.org/zone/{zone_id}" ] ] ;
  rml:predicateObjectMap [
    rml:predicate gtfs:wheelchairAccessible ;
    rml:objectMap [ rml:template "http://transit.example.org/wheelchair/{wheelchair_boarding}" ]
  ] .

map:Routes a rml:TriplesMap ;
  rml:logicalSource [ rml:source "routes.csv" ; rml:referenceFormulation rml:CSV ] ;
  rml:subjectMap [ rml:template "http://transit.example.org/route/{route_id}" ; rml:class gtfs:Route ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:shortName ; rml:objectMap [ rml:reference "route_short_name" ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:longName ; rml:objectMap [ rml:reference "route_long_name" ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:routeType ; rml:objectMap [ rml:template "http://transit.example.org/routetype/{route_type}" ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:agency ; rml:objectMap [ rml:template "http://transit.example.org/agency/{agency_id}" ] ] .

map:Trips a rml:TriplesMap ;
  rml:logicalSource [ rml:source "trips.csv" ; rml:referenceFormulation rml:CSV ] ;
  rml:subjectMap [ rml:template "http://transit.example.org/trip/{trip_id}" ; rml:class gtfs:Trip ] ;
  rml:predicateObjectMap [
    rml:predicate gtfs:route ;
    rml:objectMap [
      rml:parentTriplesMap map:Routes ;
      rml:joinCondition [ rml:child "route_id" ; rml:parent "route_id" ]
    ]
  ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:headsign ; rml:objectMap [ rml:reference "trip_headsign" ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:service ; rml:objectMap [ rml:template "http://transit.example.org/service/{service_id}" ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:shape ; rml:objectMap [ rml:template "http://transit.example.org/shape/{shape_id}" ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:direction ; rml:objectMap [ rml:reference "direction_id" ; rml:datatype xsd:integer ] ] .

map:ShapePoints a rml:TriplesMap ;
  rml:logicalSource [ rml:source "shapes.csv" ; rml:referenceFormulation rml:CSV ] ;
  rml:subjectMap [ rml:template "http://transit.example.org/shape/{shape_id}/{shape_pt_sequence}" ; rml:class gtfs:ShapePoint ] ;
  rml:predicateObjectMap [ rml:predicate geo:lat ; rml:objectMap [ rml:reference "shape_pt_lat" ; rml:datatype xsd:double ] ] ;
  rml:predicateObjectMap [ rml:predicate geo:long ; rml:objectMap [ rml:reference "shape_pt_lon" ; rml:datatype xsd:double ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:pointSequence ; rml:objectMap [ rml:reference "shape_pt_sequence" ; rml:datatype xsd:integer ] ] ;
  rml:predicateObjectMap [ rml:predicate gtfs:shape ; rml:objectMap [ rml:template "http://transit.example.org/shape/{shape_id}" ] ] ;
  rml:predicateObjectMap [
    rml:predicate tx:sameShapeAs ;
    rml:objectMap [
      rml:parentTriplesMap map:ShapePoints ;
      rml:joinCondition [ rml:child "shape_id" ; rml:parent "shape_id" ]
    ]
  ] .
"#;

const PREFIXES: &str = "PREFIX gtfs: <http://vocab.gtfs.org/terms#>
PREFIX geo: <http://www.w3.org/2003/01/geo/wgs84_pos#>
PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
PREFIX tx: <http://transit.example.org/vocab#>
";

const QUERIES: &[(&str, &str)] = &[
    (
        "q1",
        "SELECT ?stop ?name ?lat WHERE {\n  ?stop gtfs:name ?name ;\n        geo:lat ?lat .\n}\n",
    ),
    (
        "q2",
        "SELECT ?trip ?headsign WHERE {\n  ?trip gtfs:route <http://transit.example.org/route/R1> ;\n        gtfs:headsign ?headsign .\n}\n",
    ),
    ("q3", "SELECT * WHERE {\n  ?s ?p ?o .\n}\n"),
    (
        "q4",
        "SELECT ?s ?o WHERE {\n  ?s <http://transit.example.org/vocab#unknown> ?o .\n}\n",
    ),
    (
        "q5",
        "SELECT ?stop ?lon WHERE {\n  ?stop a gtfs:Stop ;\n        geo:long ?lon .\n}\n",
    ),
    (
        "q6",
        "SELECT ?p ?first WHERE {\n  ?p tx:sameShapeAs ?first .\n  ?first gtfs:pointSequence \"1\"^^xsd:integer .\n}\n",
    ),
    (
        "q7",
        "SELECT ?route ?short ?long WHERE {\n  ?route a gtfs:Route ;\n         gtfs:shortName ?short .\n  OPTIONAL { ?route gtfs:longName ?long }\n  FILTER (?short != \"L0\")\n}\n",
    ),
    (
        "q8",
        "SELECT DISTINCT ?zone WHERE {\n  ?stop gtfs:zone ?zone ;\n        gtfs:wheelchairAccessible <http://transit.example.org/wheelchair/1> .\n}\n",
    ),
];

pub(crate) fn query_text(name: &str) -> Option<String> {
    QUERIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, q)| format!("{PREFIXES}\n{q}"))
}
