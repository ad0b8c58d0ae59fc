//! Exact rational weights and their text form.
//!
//! Values are always printed as `p/q`, including integers (`3/1`) and zero
//! (`0/1`), so that output is stable byte for byte.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Weight = BigRational;

pub fn int(v: i64) -> Weight {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Weight {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn format(w: &Weight) -> String {
    format!("{}/{}", w.numer(), w.denom())
}

/// Parses `p` or `p/q` with nonnegative integers `p`, `q > 0`.
pub fn parse(s: &str) -> Option<Weight> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(p) || !digits(q) {
        return None;
    }
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p, q))
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(ws: impl IntoIterator<Item = &'a Weight>) -> BigInt {
    ws.into_iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
}

/// Scales every weight by `scale` and converts to `i64`, or `None` when a
/// scaled value (or their sum) does not fit.
pub fn scale_to_i64(ws: &[Weight], scale: &BigInt) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(ws.len());
    let mut total: i64 = 0;
    for w in ws {
        let scaled = w * BigRational::from_integer(scale.clone());
        debug_assert!(scaled.is_integer());
        let v: i64 = i64::try_from(scaled.to_integer()).ok()?;
        if v.is_negative() {
            return None;
        }
        total = total.checked_add(v)?;
        out.push(v);
    }
    // Headroom for `rem - child` style arithmetic.
    if total > i64::MAX / 4 {
        return None;
    }
    Some(out)
}

pub fn from_scaled(v: i64, scale: &BigInt) -> Weight {
    BigRational::new(BigInt::from(v), scale.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_with_denominator() {
        assert_eq!(format(&int(0)), "0/1");
        assert_eq!(format(&int(7)), "7/1");
        assert_eq!(format(&ratio(6, 4)), "3/2");
    }

    #[test]
    fn parse_accepts_plain_and_fraction() {
        assert_eq!(parse("5"), Some(int(5)));
        assert_eq!(parse("10/4"), Some(ratio(5, 2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("-1"), None);
        assert_eq!(parse(""), None);
        assert_eq!(parse("1/"), None);
    }

    #[test]
    fn scaling_round_trips() {
        let ws = vec![ratio(1, 3), ratio(1, 6), int(2)];
        let d = common_denominator(&ws);
        assert_eq!(d, BigInt::from(6));
        let s = scale_to_i64(&ws, &d).unwrap();
        assert_eq!(s, vec![2, 1, 12]);
        assert_eq!(from_scaled(s[0], &d), ratio(1, 3));
    }
}
