//! Output rendering: JSON with 17 significant digits, CSV with 12.

use std::io;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::ser::Formatter;

pub const JSON_DIGITS: usize = 17;
pub const CSV_DIGITS: usize = 12;

/// `%g`-style rendering of `x` with `digits` significant digits.
///
/// Trailing zeros are dropped, and a `.0` is kept on integral values so the
/// text still reads as a float.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let fixed = format!("{:.*}", (digits as i32 - 1 - exp).max(0) as usize, x);
    let t = trim_zeros(&fixed);
    if t.contains('.') {
        t
    } else {
        format!("{t}.0")
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Compact JSON formatter writing every float via [`format_sig`].
struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_sig(value, JSON_DIGITS).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf)?)
}

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    UInt(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) if x.is_nan() => String::new(),
            Cell::Float(x) => format_sig(*x, CSV_DIGITS),
            Cell::Int(i) => i.to_string(),
            Cell::UInt(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::UInt(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Float(x) => s.serialize_f64(*x),
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::UInt(i) => s.serialize_u64(*i),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Null => s.serialize_none(),
        }
    }
}

/// Rows sharing a fixed column list. Serializes as a JSON array of objects
/// whose keys follow the column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        to_json(&RowsView(self))
    }

    /// JSON for a single-row table: the row object itself.
    pub fn to_json_object(&self) -> anyhow::Result<String> {
        match self.rows.as_slice() {
            [row] => to_json(&RowView(&self.columns, row)),
            _ => self.to_json(),
        }
    }
}

struct RowView<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for RowView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct RowsView<'a>(&'a Table);

impl Serialize for RowsView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.rows.iter().map(|r| RowView(&self.0.columns, r)))
    }
}
