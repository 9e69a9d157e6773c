//! Deterministic CSV and JSON output.
//!
//! CSV rows are [`CountResult`]s with a header row and LF line endings. Floats
//! are stored already rounded to 12 significant digits, so the shortest
//! round-trip rendering used by both writers reproduces them exactly.
//! JSON objects have keys in lexicographic order, and their floats pass
//! through the same rounding before rendering.

use std::io::{Read, Write};

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::bounds::{quantize, CountResult};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "N,b,k,kind,K,count,bound,bound_err,ratio,regime";

pub fn write_csv<W: Write>(rows: &[CountResult], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(true)
        .from_writer(w);
    if rows.is_empty() {
        out.write_record(CSV_HEADER.split(','))?;
    }
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<CountResult>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let rows = rd.deserialize().collect::<std::result::Result<Vec<CountResult>, _>>()?;
    Ok(rows)
}

/// Rounds every non-integer number in `v` to 12 significant digits.
/// Non-finite floats cannot occur: `serde_json` maps them to `null`.
fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = quantize(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(canonical).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        other => other,
    }
}

/// A JSON object under construction; keys come out sorted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JsonObject(Map<String, Value>);

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    /// The fields of a struct that serializes to an object.
    pub fn from_serialize<T: Serialize>(value: &T) -> Result<Self> {
        match serde_json::to_value(value)? {
            Value::Object(m) => Ok(JsonObject(m)),
            _ => Err(Error::Parse("value does not serialize to a JSON object".into())),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn render(&self) -> String {
        let mut s = canonical(Value::Object(self.0.clone())).to_string();
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{quantize, CountKind, Regime};

    #[test]
    fn csv_round_trip_with_empty_cells() {
        let rows = vec![
            CountResult {
                n: 1000,
                b: 1,
                k: 2,
                kind: CountKind::SK,
                big_k: Some(3),
                count: 17,
                bound: Some(quantize(1.0 / 3.0)),
                bound_err: Some(quantize(1e-7 / 3.0)),
                ratio: Some(quantize(51.0)),
                regime: Regime::BeyondTheorem,
            },
            CountResult::unbounded(1000, 1, 2, CountKind::SK, Some(9), 40),
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&format!("{CSV_HEADER}\n")));
        assert!(text.contains("1000,1,2,sK,9,40,,,,beyond-theorem\n"));
        assert!(!text.contains('\r'));
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn empty_csv_has_a_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn json_keys_are_sorted() {
        let mut o = JsonObject::new();
        o.set("zeta", 1).set("alpha", 0.1).set("mid", true);
        assert_eq!(o.render(), "{\"alpha\":0.1,\"mid\":true,\"zeta\":1}\n");
    }

    #[test]
    fn json_floats_are_rounded() {
        let mut o = JsonObject::new();
        o.set("x", 1.0 / 3.0).set("xs", vec![2.0f64.sqrt()]).set("n", u64::MAX);
        assert_eq!(
            o.render(),
            "{\"n\":18446744073709551615,\"x\":0.333333333333,\"xs\":[1.41421356237]}\n"
        );
    }
}
