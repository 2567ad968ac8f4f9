//! Machine-readable output records.
//!
//! JSON layout: `{"kind": ..., "float_decimals": 10, "payload": {...}}`.
//! Rationals are strings `"n/d"` (the denominator is always written),
//! floats are JSON numbers rounded to [`FLOAT_DECIMALS`] places, integers
//! are JSON integers. Object keys are sorted, so output is byte-stable.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde_json::{Map, Number, Value as Json};

use crate::exact::{format_rational, parse_rational_exact};
use crate::report::Report;
use crate::{Error, Result};

/// Decimal places kept for every float in a record.
pub const FLOAT_DECIMALS: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Exact,
    Estimate,
    Table,
    Verify,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Exact => "exact",
            RecordKind::Estimate => "estimate",
            RecordKind::Table => "table",
            RecordKind::Verify => "verify",
        }
    }
}

impl std::str::FromStr for RecordKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RecordKind::Exact),
            "estimate" => Ok(RecordKind::Estimate),
            "table" => Ok(RecordKind::Table),
            "verify" => Ok(RecordKind::Verify),
            _ => Err(Error::Parse(format!("unknown record kind `{s}`"))),
        }
    }
}

/// A payload value. Non-negative integers are always `UInt` and floats are
/// stored already rounded, so decoding an encoded value gives it back.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Rational(BigRational),
    Float(f64),
    UInt(u64),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
    Map(BTreeMap<String, Value>),
}

fn round_float(x: f64) -> f64 {
    let scale = 10f64.powi(FLOAT_DECIMALS);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl Value {
    pub fn float(x: f64) -> Self {
        Value::Float(round_float(x))
    }

    pub fn int(x: i64) -> Self {
        if x >= 0 {
            Value::UInt(x as u64)
        } else {
            Value::Int(x)
        }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(x) => Some(*x),
            Value::UInt(x) => Some(*x as f64),
            Value::Int(x) => Some(*x as f64),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Value::UInt(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_map(&self) -> Option<&BTreeMap<String, Value>> {
        match self {
            Value::Map(m) => Some(m),
            _ => None,
        }
    }

    fn to_json(&self) -> Result<Json> {
        Ok(match self {
            Value::Rational(r) => Json::String(format_rational(r)),
            Value::Float(x) => {
                Json::Number(Number::from_f64(*x).ok_or_else(|| Error::Internal(format!("non-finite float {x}")))?)
            }
            Value::UInt(x) => Json::Number((*x).into()),
            Value::Int(x) => Json::Number((*x).into()),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::List(v) => Json::Array(v.iter().map(Value::to_json).collect::<Result<_>>()?),
            Value::Map(m) => Json::Object(map_to_json(m)?),
        })
    }

    fn from_json(j: &Json) -> Result<Self> {
        Ok(match j {
            Json::String(s) => decode_text(s),
            Json::Number(n) => {
                if let Some(u) = n.as_u64() {
                    Value::UInt(u)
                } else if let Some(i) = n.as_i64() {
                    Value::Int(i)
                } else {
                    Value::Float(n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?)
                }
            }
            Json::Bool(b) => Value::Bool(*b),
            Json::Array(v) => Value::List(v.iter().map(Value::from_json).collect::<Result<_>>()?),
            Json::Object(m) => Value::Map(map_from_json(m)?),
            Json::Null => return Err(Error::Parse("null is not a record value".into())),
        })
    }

    /// Plain-text form used in CSV cells.
    pub fn to_cell(&self) -> String {
        match self {
            Value::Rational(r) => format_rational(r),
            Value::Float(x) => format!("{x:.prec$}", prec = FLOAT_DECIMALS as usize),
            Value::UInt(x) => x.to_string(),
            Value::Int(x) => x.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::List(v) => v.iter().map(Value::to_cell).collect::<Vec<_>>().join(" "),
            Value::Map(m) => m
                .iter()
                .map(|(k, v)| format!("{k}={}", v.to_cell()))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Strings shaped like `-?digits/digits` are rationals, anything else is text.
fn decode_text(s: &str) -> Value {
    let looks_rational = s.split_once('/').is_some_and(|(n, d)| {
        let n = n.strip_prefix('-').unwrap_or(n);
        !n.is_empty() && !d.is_empty() && n.bytes().chain(d.bytes()).all(|b| b.is_ascii_digit())
    });
    match looks_rational.then(|| parse_rational_exact(s)) {
        Some(Ok(r)) => Value::Rational(r),
        _ => Value::Text(s.to_string()),
    }
}

/// Decodes one CSV cell. Cells are untyped, so integers, decimals and
/// booleans are recognised by shape.
pub fn decode_cell(s: &str) -> Value {
    if let Ok(u) = s.parse::<u64>() {
        return Value::UInt(u);
    }
    if let Ok(i) = s.parse::<i64>() {
        return Value::Int(i);
    }
    if s.contains('.') {
        if let Ok(x) = s.parse::<f64>() {
            return Value::Float(x);
        }
    }
    match s {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => decode_text(s),
    }
}

fn map_to_json(m: &BTreeMap<String, Value>) -> Result<Map<String, Json>> {
    m.iter().map(|(k, v)| Ok((k.clone(), v.to_json()?))).collect()
}

fn map_from_json(m: &Map<String, Json>) -> Result<BTreeMap<String, Value>> {
    m.iter().map(|(k, v)| Ok((k.clone(), Value::from_json(v)?))).collect()
}

impl From<BigRational> for Value {
    fn from(r: BigRational) -> Self {
        Value::Rational(r)
    }
}

impl From<&BigRational> for Value {
    fn from(r: &BigRational) -> Self {
        Value::Rational(r.clone())
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::UInt(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::UInt(x as u64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// Output format selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub kind: RecordKind,
    pub payload: BTreeMap<String, Value>,
}

impl OutputRecord {
    pub fn new(kind: RecordKind) -> Self {
        Self {
            kind,
            payload: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Value>) {
        self.payload.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.payload.get(key)
    }

    /// Rows of a table or verify record, if any.
    pub fn rows(&self) -> Option<&[Value]> {
        self.get("rows").and_then(Value::as_list)
    }

    /// Verify record for a report: `suite`, `passed`, and one row per check.
    pub fn from_report(report: &Report) -> Self {
        let rows = report
            .checks
            .iter()
            .map(|c| {
                let mut m = BTreeMap::new();
                m.insert("check".to_string(), Value::text(&c.name));
                m.insert("passed".to_string(), Value::Bool(c.passed));
                m.insert("detail".to_string(), Value::text(&c.detail));
                Value::Map(m)
            })
            .collect();
        OutputRecord::new(RecordKind::Verify)
            .with("suite", report.suite.as_str())
            .with("passed", report.all_passed())
            .with("checks", report.len())
            .with("failures", report.failures().count())
            .with("rows", Value::List(rows))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut top = Map::new();
        top.insert("kind".into(), Json::String(self.kind.as_str().into()));
        top.insert("float_decimals".into(), Json::Number(FLOAT_DECIMALS.into()));
        top.insert("payload".into(), Json::Object(map_to_json(&self.payload)?));
        serde_json::to_string_pretty(&Json::Object(top)).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: Json = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let top = j
            .as_object()
            .ok_or_else(|| Error::Parse("record is not an object".into()))?;
        let kind = top
            .get("kind")
            .and_then(Json::as_str)
            .ok_or_else(|| Error::Parse("record has no kind".into()))?
            .parse()?;
        match top.get("float_decimals").and_then(Json::as_i64) {
            Some(p) if p == FLOAT_DECIMALS as i64 => {}
            other => return Err(Error::Parse(format!("unsupported float_decimals {other:?}"))),
        }
        let payload = top
            .get("payload")
            .and_then(Json::as_object)
            .ok_or_else(|| Error::Parse("record has no payload".into()))?;
        Ok(Self {
            kind,
            payload: map_from_json(payload)?,
        })
    }

    /// CSV with a header line. Records with `rows` print one line per row
    /// (columns are the union of row keys); others print their payload as
    /// a single row.
    pub fn to_csv(&self) -> Result<String> {
        let single;
        let rows: Vec<&BTreeMap<String, Value>> = match self.rows() {
            Some(rows) => rows
                .iter()
                .map(|r| r.as_map().ok_or_else(|| Error::Internal("row is not a map".into())))
                .collect::<Result<_>>()?,
            None => {
                single = self.payload.clone();
                vec![&single]
            }
        };
        let mut columns: Vec<&String> = rows.iter().flat_map(|r| r.keys()).collect();
        columns.sort();
        columns.dedup();
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Internal(e.to_string());
        w.write_record(&columns).map_err(csv_err)?;
        for r in rows {
            w.write_record(
                columns
                    .iter()
                    .map(|c| r.get(*c).map(Value::to_cell).unwrap_or_default()),
            )
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json().map(|mut s| {
                s.push('\n');
                s
            }),
            Format::Csv => self.to_csv(),
        }
    }
}

impl fmt::Display for OutputRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_json() {
            Ok(s) => f.write_str(&s),
            Err(_) => Err(fmt::Error),
        }
    }
}

/// Reads a CSV produced by [`OutputRecord::to_csv`] back into rows.
pub fn parse_csv_rows(text: &str) -> Result<Vec<BTreeMap<String, Value>>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            Ok(header
                .iter()
                .zip(rec.iter())
                .filter(|(_, cell)| !cell.is_empty())
                .map(|(k, cell)| (k.to_string(), decode_cell(cell)))
                .collect())
        })
        .collect()
}
