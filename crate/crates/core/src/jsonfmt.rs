//! JSON serialization with floats written at 17 significant digits, so that
//! every f64 round-trips bit-faithfully through text.

use serde::Serialize;
use std::io;

struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{}", fmt_f64(value))
    }
}

/// 17-significant-digit decimal form of a finite f64.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serializes to a JSON string with 17-significant-digit floats.
/// Non-finite floats become `null` (serde_json's convention).
pub fn to_json_string<T: Serialize>(value: &T) -> crate::error::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| crate::error::Error::Format(e.to_string()))?;
    String::from_utf8(out).map_err(|e| crate::error::Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_roundtrip_exactly() {
        for x in [
            1.0,
            -0.1,
            std::f64::consts::PI,
            1.2345678901234567e-300,
            6.02214076e23,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn json_uses_formatter() {
        #[derive(Serialize)]
        struct R {
            v: f64,
            n: u32,
        }
        let s = to_json_string(&R { v: 0.5, n: 3 }).unwrap();
        assert_eq!(s, "{\"v\":5.0000000000000000e-1,\"n\":3}");
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["v"].as_f64().unwrap(), 0.5);
    }
}
