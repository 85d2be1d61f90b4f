//! Number formatting shared by the CSV writers and reports.

/// Decimal rendering with 15 significant digits, trailing zeros removed.
/// Very large or very small magnitudes use scientific notation.
pub fn sig15(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        let s = format!("{v:.14e}");
        let (mantissa, exponent) = s.split_once('e').expect("scientific form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exponent}");
    }
    let decimals = (14 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(0.25), "0.25");
        assert_eq!(sig15(1.5 / 7.0), "0.214285714285714");
        assert_eq!(sig15(-0.3 / 7.0), "-0.0428571428571429");
        assert_eq!(sig15(1.0), "1");
        assert_eq!(sig15(123.0), "123");
        assert_eq!(sig15(1e-9), "1e-9");
        assert_eq!(sig15(-2.5e-17), "-2.5e-17");
    }

    #[test]
    fn reads_back_within_precision() {
        for v in [1.0 / 3.0, -2.0 / 7.0, 12345.6789, 3e-7, 9.99999999999999e-1] {
            let back: f64 = sig15(v).parse().unwrap();
            assert!((back - v).abs() <= 1e-14 * v.abs());
        }
    }
}
