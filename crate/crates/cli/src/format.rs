/// Decimal rendering with 9 significant digits.
///
/// Fixed notation for magnitudes down to 1e-5, scientific below that, so
/// numerical noise near zero stays short. Negative zero prints as `0`.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // the exponent after rounding to 9 digits, so carries (0.9999999999 -> 1) count
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').map_or(0, |i| i + 1)..].parse().unwrap_or(0);
    if exp < -5 {
        return sci;
    }
    let decimals = (8 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn opt_sig9(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}
