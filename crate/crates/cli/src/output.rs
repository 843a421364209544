//! JSON and CSV emission with reproducible float formatting: every float
//! is written with 17 significant digits so values round-trip exactly.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

struct SciFloatFormatter;

impl Formatter for SciFloatFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{}", fmt_f64(value))
    }
}

/// 17 significant digits in scientific notation; parses back bit-exact.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serializes a JSON value with the 17-digit float convention.
pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFloatFormatter);
    value
        .serialize(&mut ser)
        .expect("serializing an in-memory value cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// CSV for sampled points: nu_1..nu_k, min_eigenvalue, is_cp.
pub fn sample_csv(points: &[depolar::geometry::SamplePoint], k: usize) -> String {
    let mut out = String::new();
    for i in 1..=k {
        out.push_str(&format!("nu_{i},"));
    }
    out.push_str("min_eigenvalue,is_cp\n");
    for p in points {
        for x in &p.nu {
            out.push_str(&fmt_f64(*x));
            out.push(',');
        }
        out.push_str(&fmt_f64(p.min_eigenvalue));
        out.push(',');
        out.push_str(if p.is_cp { "true" } else { "false" });
        out.push('\n');
    }
    out
}
