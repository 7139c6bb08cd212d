/// `%.12g`: 12 significant digits, trailing zeros dropped, scientific
/// notation outside `[1e-5, 1e12)`.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let mantissa = trim(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(real(0.1125), "0.1125");
        assert_eq!(real(2.2 / 3.0), "0.733333333333");
        assert_eq!(real(0.977_975_319_575_053), "0.977975319575");
        assert_eq!(real(4.0), "4");
        assert_eq!(real(-0.25), "-0.25");
        assert_eq!(real(1.5e-7), "1.5e-07");
        assert_eq!(real(123_456_789_012_345.0), "1.23456789012e+14");
        assert_eq!(real(99_999_999_999.96), "100000000000");
        assert_eq!(real(0.0), "0");
    }
}
