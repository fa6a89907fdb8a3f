//! Numeric formatting for machine-readable output: 12 significant digits,
//! trailing zeros trimmed (one kept after the point), scientific notation
//! only when fixed notation would be unwieldy.

/// Format with 12 significant digits. `0.9447331054820294` prints as
/// `0.944733105482`, `2.0` stays `2.0`, and very large or tiny magnitudes
/// fall back to scientific notation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..13).contains(&mag) {
        return trim_sci(format!("{x:.11e}"));
    }
    let decimals = (11 - mag).max(0) as usize;
    trim_fixed(format!("{x:.decimals$}"))
}

/// Drop trailing zeros after the decimal point but keep at least one digit
/// there, so integers still read as floats.
fn trim_fixed(s: String) -> String {
    if !s.contains('.') {
        return s + ".0";
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// Same trim applied to the mantissa of `{:e}` output.
fn trim_sci(s: String) -> String {
    let Some((mantissa, exp)) = s.split_once('e') else { return s };
    let m = if mantissa.contains('.') {
        let t = mantissa.trim_end_matches('0');
        if t.ends_with('.') {
            format!("{t}0")
        } else {
            t.to_string()
        }
    } else {
        format!("{mantissa}.0")
    };
    format!("{m}e{exp}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.9447331054820294), "0.944733105482");
        assert_eq!(sig12(2.0), "2.0");
        assert_eq!(sig12(0.0), "0.0");
        assert_eq!(sig12(-0.5), "-0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn scientific_fallback() {
        let s = sig12(3.729e-13);
        assert!(s.contains('e'), "tiny magnitude should go scientific, got {s}");
        let s = sig12(1.23e15);
        assert!(s.contains('e'), "huge magnitude should go scientific, got {s}");
        assert_eq!(sig12(1e-3), "0.001");
    }
}
