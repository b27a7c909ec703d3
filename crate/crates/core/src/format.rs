//! Fixed float formatting for text outputs.

/// Formats `x` with 12 significant digits.
///
/// Magnitudes in `[1e-4, 1e6)` use positional notation, everything else
/// (except zero) uses lowercase scientific notation.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.11}", 0.0);
    }
    // exponent after rounding to 12 significant digits
    let sci = format!("{:.11e}", x);
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-4..6).contains(&exponent) {
        return sci;
    }
    format!("{:.*}", (11 - exponent) as usize, x)
}
