//! Number formatting for reports.
//!
//! Human-readable output rounds to 6 significant digits, ties to even
//! (applied to the exact binary value, so ties only occur for exactly
//! representable halves). JSON output carries every number as a decimal
//! string holding the shortest representation that parses back to the same
//! `f64`.

/// 6 significant digits, round-half-even, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-5..15).contains(&exponent) {
        let mantissa = trim_fraction(mantissa);
        return format!("{mantissa}e{exponent}");
    }
    let decimals = (5 - exponent).max(0) as usize;
    // Re-rounding the already rounded mantissa is exact.
    let rounded: f64 = sci.parse().expect("valid float");
    trim_fraction(&format!("{:.*}", decimals, rounded)).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serde adapter: `f64` as a round-trip decimal string.
pub mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Serde adapter: `Option<f64>` as an optional decimal string.
pub mod decimal_opt {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| t.parse().map_err(D::Error::custom))
            .transpose()
    }
}

/// Serde adapter: `Vec<f64>` as a list of decimal strings.
pub mod decimal_vec {
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(52.857_426_8), "52.8574");
        assert_eq!(sig6(0.166_226_1), "0.166226");
        assert_eq!(sig6(50.37), "50.37");
        assert_eq!(sig6(-1.0), "-1");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(123_456_789.0), "123457000");
        assert_eq!(sig6(1.5e-7), "1.5e-7");
        assert_eq!(sig6(59.484_032), "59.484");
    }

    #[test]
    fn exact_ties_round_to_even() {
        assert_eq!(sig6(1_234_565.0), "1234560");
        assert_eq!(sig6(1_234_575.0), "1234580");
        assert_eq!(sig6(0.125), "0.125");
    }

    proptest! {
        #[test]
        fn sig6_is_within_half_unit(x in -1e12f64..1e12) {
            prop_assume!(x.abs() > 1e-4);
            let back: f64 = sig6(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 5e-6 * x.abs() * (1.0 + 1e-12));
        }
    }
}
