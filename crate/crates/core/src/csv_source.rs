//! CSV files as the one concrete source type.
//!
//! A whole file is a data object, each record is a row component, the only
//! iterator query is `rows`, selector queries are column names, and every
//! selected cell is cast to an `xsd:string` literal.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::rdf::Literal;

/// The only admissible iterator query for CSV sources.
pub const ROWS_QUERY: &str = "rows";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvDataObject {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// One record of a [`CsvDataObject`].
#[derive(Clone, Copy, Debug)]
pub struct Row<'a> {
    pub index: usize,
    cells: &'a [String],
}

impl CsvDataObject {
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        validate_header(&header)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != header.len() {
                return Err(Error::Csv {
                    row: i as u64 + 2,
                    message: format!("expected {} cells, found {}", header.len(), r.len()),
                });
            }
        }
        Ok(CsvDataObject { header, rows })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Serializes back to RFC 4180 text with LF line endings.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

fn validate_header(header: &[String]) -> Result<()> {
    if header.is_empty() {
        return Err(Error::Csv {
            row: 1,
            message: "missing header".into(),
        });
    }
    let mut seen = HashSet::new();
    for h in header {
        if h.is_empty() {
            return Err(Error::Csv {
                row: 1,
                message: "empty column name in header".into(),
            });
        }
        if !seen.insert(h.as_str()) {
            return Err(Error::Csv {
                row: 1,
                message: format!("duplicate column name {h:?}"),
            });
        }
    }
    Ok(())
}

/// Parses UTF-8 CSV; the first record is the header.
pub fn parse_csv(bytes: &[u8]) -> Result<CsvDataObject> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    if bytes.iter().all(|b| b.is_ascii_whitespace()) {
        return Err(Error::Csv {
            row: 1,
            message: "missing header".into(),
        });
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(bytes);
    let mut records = reader.records();
    let header: Vec<String> = match records.next() {
        Some(r) => r.map_err(csv_error)?.iter().map(str::to_string).collect(),
        None => unreachable!("non-blank input has a first record"),
    };
    validate_header(&header)?;
    let mut rows = Vec::new();
    for r in records {
        let r = r.map_err(csv_error)?;
        rows.push(r.iter().map(str::to_string).collect());
    }
    CsvDataObject::new(header, rows)
}

fn csv_error(e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.record() + 1);
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} cells, found {len}"),
        csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".to_string(),
        _ => e.to_string(),
    };
    Error::Csv { row, message }
}

/// `eval(D, q)`: the row components of `d`, in file order.
pub fn enumerate<'a>(d: &'a CsvDataObject, q: &str) -> Result<Vec<Row<'a>>> {
    if q != ROWS_QUERY {
        return Err(Error::UnknownIterator(q.to_string()));
    }
    Ok(d
        .rows
        .iter()
        .enumerate()
        .map(|(index, cells)| Row { index, cells })
        .collect())
}

/// `eval'(D, d, q')`: the cell of `column` in `row`, or nothing when the
/// column is absent from the header.
pub fn select<'a>(d: &CsvDataObject, row: Row<'a>, column: &str) -> Vec<&'a str> {
    match d.column_index(column) {
        Some(i) => vec![row.cells[i].as_str()],
        None => Vec::new(),
    }
}

pub fn cast(v: &str) -> Literal {
    Literal::string(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::XSD_STRING;

    #[test]
    fn parses_header_and_rows() {
        let d = parse_csv(b"a,b\n1,2\n").unwrap();
        assert_eq!(d.header(), ["a", "b"]);
        assert_eq!(d.rows(), [vec!["1".to_string(), "2".to_string()]]);
    }

    #[test]
    fn quoted_comma_and_newline() {
        let d = parse_csv(b"a\n\"x,y\"\n\"l1\nl2\"\n").unwrap();
        assert_eq!(d.rows()[0], ["x,y"]);
        assert_eq!(d.rows()[1], ["l1\nl2"]);
    }

    #[test]
    fn crlf_line_endings() {
        let d = parse_csv(b"a,b\r\n1,2\r\n3,4\r\n").unwrap();
        assert_eq!(d.rows().len(), 2);
        assert_eq!(d.rows()[1], ["3", "4"]);
    }

    #[test]
    fn ragged_row_reports_row_two() {
        match parse_csv(b"a,b\n1\n") {
            Err(Error::Csv { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_errors() {
        assert!(matches!(parse_csv(b"a,a\n1,2\n"), Err(Error::Csv { row: 1, .. })));
        assert!(matches!(parse_csv(b"a,\n1,2\n"), Err(Error::Csv { row: 1, .. })));
        assert!(matches!(parse_csv(b""), Err(Error::Csv { row: 1, .. })));
    }

    #[test]
    fn enumerate_rows_in_order() {
        let d = parse_csv(b"a\nx\ny\nz\n").unwrap();
        let rows = enumerate(&d, ROWS_QUERY).unwrap();
        let vals: Vec<_> = rows.iter().map(|r| select(&d, *r, "a")[0]).collect();
        assert_eq!(vals, ["x", "y", "z"]);
        let empty = parse_csv(b"a\n").unwrap();
        assert!(enumerate(&empty, ROWS_QUERY).unwrap().is_empty());
        assert!(matches!(enumerate(&d, "cols"), Err(Error::UnknownIterator(_))));
    }

    #[test]
    fn select_is_total() {
        let d = parse_csv(b"long,name\n23.0,\n").unwrap();
        let row = enumerate(&d, ROWS_QUERY).unwrap()[0];
        assert_eq!(select(&d, row, "long"), ["23.0"]);
        assert!(select(&d, row, "missing").is_empty());
        assert_eq!(select(&d, row, "name"), [""]);
    }

    #[test]
    fn cast_to_string_literal() {
        for v in ["23.0", "", "héllo"] {
            let l = cast(v);
            assert_eq!(l.lex(), v);
            assert_eq!(l.datatype().as_str(), XSD_STRING);
        }
    }

    #[test]
    fn write_round_trip() {
        let d = parse_csv(b"a,b\n\"x,y\",\"q\"\"\"\n").unwrap();
        assert_eq!(parse_csv(d.to_csv_string().as_bytes()).unwrap(), d);
    }
}
