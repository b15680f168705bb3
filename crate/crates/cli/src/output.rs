use std::fmt::Display;

use sumfree_core::num_rational::Ratio;

/// Format with up to 12 significant digits, plain notation for moderate
/// magnitudes and scientific otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.11e}")
    }
}

pub fn ratio<T: Display>(r: &Ratio<T>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_reference_values() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(0.25), "0.25");
        assert_eq!(sig12(0.248120300751879699), "0.248120300752");
        assert_eq!(sig12(2.0 * 7f64.sqrt()), "5.29150262213");
        assert_eq!(sig12(6.7108864e-6), "0.0000067108864");
        assert_eq!(sig12(1.0e-30), "1.00000000000e-30");
        assert_eq!(sig12(-0.5), "-0.5");
    }
}
