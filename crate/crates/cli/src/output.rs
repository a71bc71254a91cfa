//! Flat records written as newline-delimited JSON or CSV. Both formats use
//! the same key list, so CSV headers match JSON keys exactly.

use std::io::{self, Write};

use clap::ValueEnum;
use dickson_core::FieldElem;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "dickson3/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Bool(bool),
    Text(String),
    Elem(Vec<u64>),
    Ints(Vec<u64>),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&FieldElem> for Cell {
    fn from(v: &FieldElem) -> Self {
        Cell::Elem(v.coeffs_u64())
    }
}

impl From<Option<bool>> for Cell {
    fn from(v: Option<bool>) -> Self {
        v.map_or(Cell::Null, Cell::Bool)
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(v) => Value::from(v.as_str()),
            Cell::Elem(v) | Cell::Ints(v) => Value::from(v.clone()),
            Cell::Null => Value::Null,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Elem(v) | Cell::Ints(v) => join(v),
            Cell::Null => String::new(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Record(Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Record(vec![("schema", Cell::Text(SCHEMA.into()))])
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .0
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_json()))
            .collect();
        Value::Object(map)
    }

    fn keys(&self) -> Vec<&'static str> {
        self.0.iter().map(|(k, _)| *k).collect()
    }
}

/// Writes a homogeneous stream of records.
pub struct RecordWriter<W: Write> {
    format: Format,
    json: Option<W>,
    csv: Option<csv::Writer<W>>,
    header: Option<Vec<&'static str>>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: Format) -> Self {
        match format {
            Format::Json => RecordWriter {
                format,
                json: Some(out),
                csv: None,
                header: None,
            },
            Format::Csv => RecordWriter {
                format,
                json: None,
                csv: Some(
                    csv::WriterBuilder::new()
                        .quote_style(csv::QuoteStyle::Always)
                        .from_writer(out),
                ),
                header: None,
            },
        }
    }

    pub fn write(&mut self, record: &Record) -> io::Result<()> {
        match self.format {
            Format::Json => {
                let out = self.json.as_mut().expect("json sink");
                serde_json::to_writer(&mut *out, &record.to_json())?;
                out.write_all(b"\n")
            }
            Format::Csv => {
                let out = self.csv.as_mut().expect("csv sink");
                let keys = record.keys();
                match &self.header {
                    None => {
                        out.write_record(&keys)?;
                        self.header = Some(keys);
                    }
                    Some(h) if *h != keys => {
                        return Err(io::Error::other("records with differing keys in one CSV stream"));
                    }
                    Some(_) => {}
                }
                out.write_record(record.0.iter().map(|(_, v)| v.to_csv()))?;
                Ok(())
            }
        }
    }

    pub fn finish(self) -> io::Result<()> {
        if let Some(mut w) = self.json {
            w.flush()?;
        }
        if let Some(mut w) = self.csv {
            w.flush()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Record {
        Record::new()
            .with("q", 9u64)
            .with("flag", true)
            .with("value", Cell::Elem(vec![1, 2]))
            .with("criterion", None::<bool>)
    }

    #[test]
    fn json_line() {
        let mut buf = Vec::new();
        let mut w = RecordWriter::new(&mut buf, Format::Json);
        w.write(&sample()).unwrap();
        w.finish().unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"schema\":\"dickson3/v1\",\"q\":9,\"flag\":true,\"value\":[1,2],\"criterion\":null}\n"
        );
    }

    #[test]
    fn csv_header_matches_json_keys() {
        let mut buf = Vec::new();
        let mut w = RecordWriter::new(&mut buf, Format::Csv);
        w.write(&sample()).unwrap();
        w.write(&sample()).unwrap();
        w.finish().unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("\"schema\",\"q\",\"flag\",\"value\",\"criterion\""));
        assert_eq!(lines.next(), Some("\"dickson3/v1\",\"9\",\"true\",\"1,2\",\"\""));
        let json_keys: Vec<_> = sample().to_json().as_object().unwrap().keys().cloned().collect();
        assert_eq!(json_keys, vec!["schema", "q", "flag", "value", "criterion"]);
    }

    #[test]
    fn mixed_keys_are_rejected_in_csv() {
        let mut w = RecordWriter::new(Vec::new(), Format::Csv);
        w.write(&sample()).unwrap();
        assert!(w.write(&Record::new().with("other", 1u64)).is_err());
    }
}
