//! Exact-real helpers for the codec oracle paths.
//!
//! Posit values are dyadic rationals, so every intermediate here is exact:
//! sums, products and comparisons carry no floating-point error. The hot
//! arithmetic paths never touch these; they exist for encoding arbitrary
//! reals, for the CLI's decimal output, and for test oracles.

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// floor(log2(x)) for a strictly positive rational.
pub fn floor_log2(x: &BigRational) -> i64 {
    debug_assert!(x.is_positive());
    let p = x.numer();
    let q = x.denom();
    let d = p.bits() as i64 - q.bits() as i64;
    // 2^(d-1) <= x < 2^(d+1); one comparison settles which half.
    let ge = if d >= 0 {
        *p >= (q << d as u64)
    } else {
        (p << (-d) as u64) >= *q
    };
    if ge {
        d
    } else {
        d - 1
    }
}

/// Top 64 fraction bits of x/2^sf - 1 for x in [2^sf, 2^(sf+1)),
/// plus a sticky flag covering everything below them.
pub fn frac_bits_64(x: &BigRational, sf: i64) -> (u64, bool) {
    let mut p = x.numer().clone();
    let mut q = x.denom().clone();
    if sf >= 0 {
        q <<= sf as u64;
    } else {
        p <<= (-sf) as u64;
    }
    debug_assert!(p >= q && p < (&q << 1u8));
    let scaled = p << 64u8;
    let (quot, rem) = num_integer::Integer::div_rem(&scaled, &q);
    let frac = &quot - (BigInt::one() << 64u8);
    let digits = frac.to_u64_digits().1;
    let f = match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("fraction wider than 64 bits"),
    };
    (f, !rem.is_zero())
}

/// Exact decimal rendering of a dyadic rational (denominator a power of two).
/// The expansion always terminates, so nothing is rounded.
pub fn dyadic_to_decimal(x: &BigRational) -> Result<String> {
    if x.is_zero() {
        return Ok("0".to_string());
    }
    let (num, den) = (x.numer(), x.denom());
    let k = den.trailing_zeros().unwrap_or(0);
    if *den != (BigInt::one() << k) {
        return Err(Error::Internal(format!("non-dyadic value {x}")));
    }
    let (sign, mag) = {
        let (s, m) = num.clone().into_parts();
        (s, BigInt::from(m))
    };
    let scaled = mag * BigInt::from(5u8).pow(k as u32);
    let mut digits = scaled.to_string();
    let text = if k == 0 {
        digits
    } else {
        let k = k as usize;
        if digits.len() <= k {
            let mut s = String::from("0.");
            s.extend(std::iter::repeat('0').take(k - digits.len()));
            s.push_str(&digits);
            s
        } else {
            digits.insert(digits.len() - k, '.');
            digits
        }
    };
    Ok(if sign == BigSign::Minus {
        format!("-{text}")
    } else {
        text
    })
}

/// Parse a plain decimal literal ("1.5", "-0.25", "3") into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let num: BigInt = joined.parse().ok()?;
    let den = BigInt::from(10u8).pow(frac_part.len() as u32);
    let mut r = BigRational::new(num, den);
    if neg {
        r = -r;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn floor_log2_spans_powers() {
        assert_eq!(floor_log2(&rat(1, 1)), 0);
        assert_eq!(floor_log2(&rat(3, 2)), 0);
        assert_eq!(floor_log2(&rat(2, 1)), 1);
        assert_eq!(floor_log2(&rat(1, 2)), -1);
        assert_eq!(floor_log2(&rat(1, 3)), -2);
        assert_eq!(floor_log2(&rat(7, 1)), 2);
        assert_eq!(floor_log2(&rat(1, 1024)), -10);
    }

    #[test]
    fn frac_bits_extracts_exactly() {
        // 1.5 = 2^0 * (1 + 0.5)
        let (f, sticky) = frac_bits_64(&rat(3, 2), 0);
        assert_eq!(f, 1u64 << 63);
        assert!(!sticky);
        // 1/3 scaled into [1,2): 4/3 = 2^-... -> non-terminating fraction
        let (_, sticky) = frac_bits_64(&rat(4, 3), 0);
        assert!(sticky);
    }

    #[test]
    fn decimal_rendering_is_exact() {
        assert_eq!(dyadic_to_decimal(&rat(0, 1)).unwrap(), "0");
        assert_eq!(dyadic_to_decimal(&rat(16, 1)).unwrap(), "16");
        assert_eq!(dyadic_to_decimal(&rat(1, 2)).unwrap(), "0.5");
        assert_eq!(dyadic_to_decimal(&rat(-9, 4)).unwrap(), "-2.25");
        assert_eq!(dyadic_to_decimal(&rat(1, 1 << 20)).unwrap(), "0.00000095367431640625");
        assert!(dyadic_to_decimal(&rat(1, 3)).is_err());
    }

    #[test]
    fn decimal_parse_roundtrips() {
        assert_eq!(parse_decimal("1.5").unwrap(), rat(3, 2));
        assert_eq!(parse_decimal("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_decimal("3").unwrap(), rat(3, 1));
        assert_eq!(parse_decimal("+0.1").unwrap(), rat(1, 10));
        assert!(parse_decimal("").is_none());
        assert!(parse_decimal("1.5e3").is_none());
        assert!(parse_decimal(".").is_none());
        assert_eq!(
            parse_decimal("2.25").unwrap(),
            BigRational::from_f64(2.25).unwrap()
        );
    }
}
