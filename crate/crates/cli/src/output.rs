//! Number formatting and file headers shared by every command.

/// Twelve significant digits, shortest form; `-0` prints as `0`. Magnitudes
/// outside `[1e-6, 1e15)` use exponent notation.
pub fn num(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("scientific notation reparses");
    if rounded == 0.0 {
        "0".into()
    } else if (1e-6..1e15).contains(&rounded.abs()) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

/// One-line provenance record: tool version followed by `key=value` pairs.
pub fn header(meta: &[(&str, String)]) -> String {
    let mut line = format!("capra {}", env!("CARGO_PKG_VERSION"));
    for (k, v) in meta {
        line.push_str(&format!(" {k}={v}"));
    }
    line
}
