//! Report documents and their JSON/CSV encodings.
//!
//! JSON floats carry 17 significant digits so that reports round-trip and
//! compare byte for byte.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::CliError;

/// Top-level layout shared by every command.
#[derive(Debug, Serialize)]
pub struct Document<C, R, S, V> {
    pub config: C,
    pub results: R,
    pub summary: S,
    pub violations: V,
}

/// Compact JSON (the trait defaults) with `%.16e` floats.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

/// Shortest round-trip decimal; empty for `None`.
pub fn num(x: impl Into<Option<f64>>) -> String {
    match x.into() {
        Some(v) => format!("{v:?}"),
        None => String::new(),
    }
}

pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}
