//! Number formatting shared by every CSV and JSON writer.
//!
//! Values are written with 12 significant digits so that outputs are
//! byte-stable across runs and re-ingest to within ~1e-12 relative.

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Scientific notation with 12 significant digits, e.g. `1.34500000000e0`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0.0…" for negative zero
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
}

/// Round to 12 significant digits; JSON writers emit the shortest form of the result.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    fmt_sig(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(1.345), "1.34500000000e0");
        assert_eq!(fmt_sig(-0.0), "0.00000000000e0");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
    }

    #[test]
    fn round_trip_error_bounded() {
        for x in [1e-9, 0.123456789012345, 7.77e5, -3.3] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-12 * x.abs());
        }
    }
}
