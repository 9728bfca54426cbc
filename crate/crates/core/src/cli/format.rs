//! Fixed number formatting for CSV output.

use num_complex::Complex64;

/// Nine significant digits; plain decimal for 1e-4 <= |x| < 1e7, otherwise
/// lowercase `e` notation. Trailing zeros are dropped and zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..7).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Real numbers as [`fmt_num`]; complex ones as `re+imi`.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_num(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_num(z.re), fmt_num(-z.im))
    } else {
        format!("{}+{}i", fmt_num(z.re), fmt_num(z.im))
    }
}
