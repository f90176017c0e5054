//! Locale-independent number formatting shared by every text output.

use num_complex::Complex64;

/// Formats `v` with 12 significant digits, `%.12g` style.
pub fn g12(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..12).contains(&exp) {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Formats a complex number in the `a+bi` / `a-bi` form accepted by
/// [`crate::states::parse_complex`].
pub fn complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", g12(z.re), g12(-z.im))
    } else {
        format!("{}+{}i", g12(z.re), g12(z.im))
    }
}
