//! JSON and CSV emitters with lossless 17-significant-digit floats.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::Value;

struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", float(value))
    }
}

/// `{:.16e}` for finite values; empty for NaN and infinities.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

pub fn to_json(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SeventeenDigits);
    v.serialize(&mut ser).expect("in-memory JSON serialisation");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub const CSV_HEADER: &str = "param,value,gamma,j,family,route,stderr_gamma,stderr_j";

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub param: String,
    pub value: f64,
    pub gamma: f64,
    pub j: f64,
    pub family: String,
    pub route: String,
    pub stderr_gamma: f64,
    pub stderr_j: f64,
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let cells = [
            r.param.clone(),
            float(r.value),
            float(r.gamma),
            float(r.j),
            r.family.clone(),
            r.route.clone(),
            float(r.stderr_gamma),
            float(r.stderr_j),
        ];
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(f64::NAN), "");
        let v = serde_json::json!({"a": 0.1, "b": [1, 2.0], "c": null});
        let text = to_json(&v);
        assert_eq!(
            text,
            "{\"a\":1.0000000000000001e-1,\"b\":[1,2.0000000000000000e0],\"c\":null}\n"
        );
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }
}
