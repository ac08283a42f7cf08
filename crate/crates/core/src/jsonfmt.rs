//! JSON and CSV float formatting pinned to 17 significant digits, enough to
//! round-trip any f64 exactly and stable for golden-file comparison.

use serde::Serialize;
use serde_json::ser::Formatter;

/// `printf`-style `%.16e`: one leading digit plus 16 decimals.
pub fn fmt17(x: f64) -> String {
    debug_assert!(x.is_finite());
    format!("{x:.16e}")
}

struct SigDigits17;

impl Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes with every float at 17 significant digits.
pub fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value
        .serialize(&mut ser)
        .expect("serialization of plain data cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.36, std::f64::consts::PI, 1.0 / 3.0, 2.498091544796509e0, 1e-30] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn json_floats_use_fixed_format() {
        #[derive(Serialize)]
        struct Row {
            v: f64,
        }
        let js = to_json_17(&Row { v: 0.36 });
        assert_eq!(js, "{\"v\":3.5999999999999999e-1}");
        let back: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(back["v"].as_f64().unwrap(), 0.36);
    }
}
