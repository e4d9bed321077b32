//! Fixed-precision text rendering for CSV output.

/// Render with nine significant digits and trailing zeros trimmed, the way
/// C's `%.9g` prints these magnitudes. Not shortest-round-trip: the value
/// is rounded to nine significant digits first, so output is stable across
/// runs and platforms.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // 9 significant digits in scientific form, e.g. "6.66666667e-1"
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:.8e} output");
    let exp: i32 = exp.parse().expect("numeric exponent");
    if (-4..9).contains(&exp) {
        let prec = (8 - exp) as usize;
        let fixed = format!("{:.*}", prec, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn trims_and_rounds() {
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(0.5), "0.5");
        assert_eq!(sig9(0.75), "0.75");
        assert_eq!(sig9(2.0 / 3.0), "0.666666667");
        assert_eq!(sig9(0.5000000000000001), "0.5");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-0.125), "-0.125");
        assert_eq!(sig9(10000.0), "10000");
        assert_eq!(sig9(1.0e-5), "1e-5");
        assert_eq!(sig9(123456789.12), "123456789");
    }
}
