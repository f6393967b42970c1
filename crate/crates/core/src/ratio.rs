//! Exact rationals and their string encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Ratio = BigRational;

/// `num / den`; `0` when `den = 0`.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Ratio {
    let den = den.into();
    if den.is_zero() {
        return Ratio::zero();
    }
    Ratio::new(num.into(), den)
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled quotient for huge operands.
        let shift = r.denom().bits().saturating_sub(60);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// `|a − b| < tol`, decided exactly when `tol` is given as a rational.
pub fn within(a: &Ratio, b: &Ratio, tol: &Ratio) -> bool {
    (a - b).abs() < *tol
}

/// Parse `a`, `a/b`, or a decimal such as `0.01`.
pub fn parse_ratio(s: &str) -> Option<Ratio> {
    let t = s.trim();
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(Ratio::new(a, b));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Ratio::new(num, den));
    }
    if t.contains(['e', 'E']) {
        let v: f64 = t.parse().ok()?;
        return Ratio::from_float(v);
    }
    t.parse::<BigInt>().ok().map(Ratio::from_integer)
}

pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio, D::Error> {
    let s = String::deserialize(d)?;
    parse_ratio(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Ratio>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| {
            parse_ratio(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
        })
        .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ratio("2/3"), Some(ratio(2, 3)));
        assert_eq!(parse_ratio("0.01"), Some(ratio(1, 100)));
        assert_eq!(parse_ratio("5"), Some(ratio(5, 1)));
        assert_eq!(parse_ratio("1e-2").map(|r| to_f64(&r)), Some(0.01));
        assert_eq!(parse_ratio("1/0"), None);
    }

    #[test]
    fn huge_ratio_to_float() {
        let big = BigInt::from(1) << 3000u32;
        let r = Ratio::new(big.clone(), big * 3);
        assert!((to_f64(&r) - 1.0 / 3.0).abs() < 1e-12);
    }
}
