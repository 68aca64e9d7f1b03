//! Bit-level posit codec: decode packed patterns into (sign, regime,
//! exponent, fraction) fields, encode exact reals back into patterns with
//! round-to-nearest-even, and classify the two special values.
//!
//! A posit<n,es> pattern represents
//!
//! ```text
//!   x = (-1)^s * (2^(2^es))^k * 2^e * (1 + f)
//! ```
//!
//! where the regime `k` is run-length coded. Negative patterns are decoded
//! by two's-complementing the whole word first, which makes negation a
//! two's complement and keeps integer order equal to value order.
//!
//! Rounding maps a real to the nearest representable posit and breaks exact
//! ties toward the pattern with even LSB. Magnitudes above `maxpos` saturate
//! to `maxpos` and nonzero magnitudes below `minpos` come back as `minpos`;
//! zero and NaR are never produced by rounding alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::real;

/// The `(n, es)` configuration every codec and arithmetic operation is
/// parameterized over. `n` is the total width, `es` the maximum number of
/// exponent bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PositFormat {
    n: u32,
    es: u32,
}

impl PositFormat {
    pub const MIN_N: u32 = 3;
    pub const MAX_N: u32 = 32;
    pub const MAX_ES: u32 = 3;

    pub fn new(n: u32, es: u32) -> Result<Self> {
        if n < Self::MIN_N || n > Self::MAX_N {
            return Err(Error::InvalidFormat { n, es, reason: "n must be in 3..=32" });
        }
        if es > Self::MAX_ES {
            return Err(Error::InvalidFormat { n, es, reason: "es must be in 0..=3" });
        }
        if es > n - 3 {
            return Err(Error::InvalidFormat { n, es, reason: "es must be <= n - 3" });
        }
        Ok(PositFormat { n, es })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn es(&self) -> u32 {
        self.es
    }

    /// log2(useed) = 2^es; the regime weighs this many binades.
    pub fn useed_log2(&self) -> u32 {
        1 << self.es
    }

    /// Scale factor of maxpos: maxpos = useed^(n-2) = 2^max_scale.
    pub fn max_scale(&self) -> i64 {
        ((self.n - 2) as i64) << self.es
    }

    /// Scale factor of minpos (= -max_scale).
    pub fn min_scale(&self) -> i64 {
        -self.max_scale()
    }

    /// Mask selecting the low n bits of a word.
    pub fn mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn nar_pattern(&self) -> u32 {
        1u32 << (self.n - 1)
    }

    pub fn maxpos_pattern(&self) -> u32 {
        self.nar_pattern() - 1
    }

    pub fn minpos_pattern(&self) -> u32 {
        1
    }

    /// Hex digits needed for the canonical `0x...` rendering.
    pub fn hex_digits(&self) -> usize {
        self.n.div_ceil(4) as usize
    }

    /// Concatenated scale factor 2^es * k + e.
    pub fn scale_of(&self, k: i32, e: u32) -> ScaleFactor {
        ScaleFactor((k << self.es) + e as i32)
    }

    /// Split a representable scale factor back into (k, e).
    pub fn split_scale(&self, sf: i64) -> (i32, u32) {
        let k = (sf >> self.es) as i32;
        let e = (sf & ((1i64 << self.es) - 1)) as u32;
        (k, e)
    }
}

impl std::fmt::Display for PositFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "posit<{},{}>", self.n, self.es)
    }
}

/// Sign of a finite nonzero posit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn is_negative(self) -> bool {
        matches!(self, Sign::Negative)
    }

    /// Sign of a product.
    pub fn xor(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// An opaque packed n-bit posit pattern together with its format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PositBits {
    pattern: u32,
    format: PositFormat,
}

impl PositBits {
    pub fn from_pattern(pattern: u32, format: PositFormat) -> Result<Self> {
        if pattern & !format.mask() != 0 {
            return Err(Error::PatternOutOfRange { pattern, n: format.n() });
        }
        Ok(PositBits { pattern, format })
    }

    pub fn pattern(&self) -> u32 {
        self.pattern
    }

    pub fn format(&self) -> PositFormat {
        self.format
    }

    pub fn zero(format: PositFormat) -> Self {
        PositBits { pattern: 0, format }
    }

    pub fn nar(format: PositFormat) -> Self {
        PositBits { pattern: format.nar_pattern(), format }
    }

    pub fn one(format: PositFormat) -> Self {
        PositBits { pattern: 1u32 << (format.n() - 2), format }
    }

    pub fn maxpos(format: PositFormat) -> Self {
        PositBits { pattern: format.maxpos_pattern(), format }
    }

    pub fn minpos(format: PositFormat) -> Self {
        PositBits { pattern: format.minpos_pattern(), format }
    }

    pub fn is_zero(&self) -> bool {
        self.pattern == 0
    }

    pub fn is_nar(&self) -> bool {
        self.pattern == self.format.nar_pattern()
    }

    /// True for finite values strictly below zero (NaR is not negative).
    pub fn is_negative(&self) -> bool {
        !self.is_nar() && self.pattern >> (self.format.n() - 1) == 1
    }

    /// Two's complement negation modulo 2^n; Zero and NaR are fixed points.
    pub fn negate(&self) -> Self {
        PositBits {
            pattern: self.pattern.wrapping_neg() & self.format.mask(),
            format: self.format,
        }
    }

    /// The pattern reinterpreted as an n-bit two's-complement integer.
    /// For non-NaR patterns this order equals value order.
    pub fn as_signed(&self) -> i32 {
        let sh = 32 - self.format.n();
        ((self.pattern << sh) as i32) >> sh
    }

    /// Canonical `0x`-prefixed, zero-padded hex rendering.
    pub fn to_hex(&self) -> String {
        format!("0x{:0width$x}", self.pattern, width = self.format.hex_digits())
    }

    /// Parse a posit literal: `0x..` hex pattern, the token `nar`, or a
    /// plain decimal real routed through [`encode_real`].
    pub fn parse(s: &str, format: PositFormat) -> Result<Self> {
        let t = s.trim();
        if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            let pattern = u32::from_str_radix(hex, 16)
                .map_err(|_| Error::BadLiteral(s.to_string()))?;
            return PositBits::from_pattern(pattern, format);
        }
        if t.eq_ignore_ascii_case("nar") {
            return Ok(PositBits::nar(format));
        }
        match real::parse_decimal(t) {
            Some(r) => Ok(encode_real(&r, format)),
            None => Err(Error::BadLiteral(s.to_string())),
        }
    }
}

impl std::fmt::Display for PositBits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Concatenated regime/exponent scale 2^es * k + e. Values produced by
/// arithmetic may lie outside the representable range until packing
/// saturates them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScaleFactor(pub i32);

impl From<i32> for ScaleFactor {
    fn from(v: i32) -> Self {
        ScaleFactor(v)
    }
}

/// The unpacked fields of a finite nonzero posit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteFields {
    pub sign: Sign,
    /// Regime value; run of m ones -> m-1, run of m zeros -> -m.
    pub k: i32,
    /// Exponent value, already left-aligned when the field was truncated.
    pub e: u32,
    /// Fraction numerator; the fraction value is f_num / 2^f_width in [0,1).
    pub f_num: u64,
    pub f_width: u32,
}

impl FiniteFields {
    pub fn scale(&self, fmt: PositFormat) -> ScaleFactor {
        fmt.scale_of(self.k, self.e)
    }

    /// Significand with the hidden bit attached: 2^f_width + f_num.
    pub fn significand(&self) -> u64 {
        (1u64 << self.f_width) | self.f_num
    }
}

/// Decoded view of a pattern: one of the two specials or the field tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodedPosit {
    Zero,
    NaR,
    Finite(FiniteFields),
}

impl DecodedPosit {
    pub fn finite(&self) -> Option<&FiniteFields> {
        match self {
            DecodedPosit::Finite(f) => Some(f),
            _ => None,
        }
    }

    /// Reinterpret as the carrier fed to [`pack`]; None for specials.
    pub fn to_unrounded(&self, fmt: PositFormat) -> Option<UnroundedResult> {
        self.finite().map(|f| UnroundedResult {
            sign: f.sign,
            scale: f.scale(fmt),
            frac_num: f.f_num as u128,
            frac_width: f.f_width,
        })
    }
}

/// Normalized, not-yet-rounded value sign * 2^scale * (1 + frac_num/2^frac_width)
/// handed from a multiplier or adder core to the packing stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnroundedResult {
    pub sign: Sign,
    pub scale: ScaleFactor,
    pub frac_num: u128,
    pub frac_width: u32,
}

impl UnroundedResult {
    /// Exact value, for oracles and error analysis.
    pub fn value(&self) -> BigRational {
        let sig = BigInt::from(self.frac_num) + (BigInt::one() << self.frac_width);
        let sf = self.scale.0 as i64 - self.frac_width as i64;
        let mut v = if sf >= 0 {
            BigRational::from(sig << sf as u64)
        } else {
            BigRational::new(sig, BigInt::one() << (-sf) as u64)
        };
        if self.sign.is_negative() {
            v = -v;
        }
        v
    }
}

/// Unpack a pattern into fields. Total over all n-bit patterns.
pub fn decode(bits: PositBits) -> DecodedPosit {
    let fmt = bits.format();
    let n = fmt.n();
    let p = bits.pattern();
    if p == 0 {
        return DecodedPosit::Zero;
    }
    if p == fmt.nar_pattern() {
        return DecodedPosit::NaR;
    }
    let negative = p >> (n - 1) == 1;
    let mag = if negative { p.wrapping_neg() & fmt.mask() } else { p };

    // Regime: run length of the leading body bit, terminator included in
    // the field length unless the run hits the word end.
    let body_bits = n - 1;
    let r0 = (mag >> (n - 2)) & 1;
    let mut run = 1u32;
    while run < body_bits && (mag >> (n - 2 - run)) & 1 == r0 {
        run += 1;
    }
    let k = if r0 == 1 { run as i32 - 1 } else { -(run as i32) };
    let rlen = (run + 1).min(body_bits);
    let rem = body_bits - rlen;

    // A truncated exponent field holds the high-order bits of e.
    let t = rem.min(fmt.es());
    let e_field = if t > 0 { (mag >> (rem - t)) & ((1u32 << t) - 1) } else { 0 };
    let e = e_field << (fmt.es() - t);
    let f_width = rem - t;
    let f_num = (mag & ((1u32 << f_width) - 1)) as u64;

    DecodedPosit::Finite(FiniteFields {
        sign: if negative { Sign::Negative } else { Sign::Positive },
        k,
        e,
        f_num,
        f_width,
    })
}

/// Exact real value of a pattern. Zero decodes to 0; NaR has none.
pub fn decode_to_real(bits: PositBits) -> Result<BigRational> {
    match decode(bits) {
        DecodedPosit::Zero => Ok(BigRational::zero()),
        DecodedPosit::NaR => Err(Error::NarValue),
        DecodedPosit::Finite(f) => {
            let fmt = bits.format();
            let sig = BigInt::from(f.significand());
            let sf = f.scale(fmt).0 as i64 - f.f_width as i64;
            let mut v = if sf >= 0 {
                BigRational::from(sig << sf as u64)
            } else {
                BigRational::new(sig, BigInt::one() << (-sf) as u64)
            };
            if f.sign.is_negative() {
                v = -v;
            }
            Ok(v)
        }
    }
}

/// Round an exact real to the nearest posit (ties to even pattern,
/// saturating at maxpos/minpos) and pack it.
pub fn encode_real(x: &BigRational, fmt: PositFormat) -> PositBits {
    if x.is_zero() {
        return PositBits::zero(fmt);
    }
    let sign = if x.is_negative() { Sign::Negative } else { Sign::Positive };
    let a = x.abs();
    let sf = real::floor_log2(&a);
    let (frac, inexact) = real::frac_bits_64(&a, sf);
    round_pack(sign, sf, frac as u128, 64, inexact, fmt)
}

/// Fast exact path for f64 inputs (every finite f64 is a dyadic rational).
/// Bit-identical to `encode_real` on the equivalent rational.
pub fn encode_f64(x: f64, fmt: PositFormat) -> Result<PositBits> {
    if !x.is_finite() {
        return Err(Error::BadLiteral(format!("{x}")));
    }
    if x == 0.0 {
        return Ok(PositBits::zero(fmt));
    }
    let sign = if x < 0.0 { Sign::Negative } else { Sign::Positive };
    let bits = x.abs().to_bits();
    let exp_field = (bits >> 52) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    let (sf, frac, fw) = if exp_field == 0 {
        // Subnormal: no hidden bit; normalize on the top set bit.
        let lb = 63 - mant.leading_zeros();
        (lb as i64 - 1074, mant ^ (1u64 << lb), lb)
    } else {
        (exp_field - 1023, mant, 52)
    };
    Ok(round_pack(sign, sf, frac as u128, fw, false, fmt))
}

/// Pack a normalized unrounded value. Identical result to `encode_real`
/// on the exact value, but runs on plain integer arithmetic.
pub fn pack(r: &UnroundedResult, fmt: PositFormat) -> PositBits {
    round_pack(r.sign, r.scale.0 as i64, r.frac_num, r.frac_width, false, fmt)
}

/// Shared rounding/packing core. The value being packed is
///
/// ```text
///   sign * 2^scale * (1 + frac_num/2^frac_width)  (+ eps if sticky)
/// ```
///
/// where `sticky` says "strictly greater than the named value, by less than
/// one unit of frac_num's LSB". Saturates instead of overflowing to NaR or
/// underflowing to zero.
pub(crate) fn round_pack(
    sign: Sign,
    scale: i64,
    frac_num: u128,
    frac_width: u32,
    sticky_in: bool,
    fmt: PositFormat,
) -> PositBits {
    let n = fmt.n();
    let es = fmt.es();
    debug_assert!(frac_width >= 128 || frac_num >> frac_width == 0);

    // Cap the fraction at 64 bits; anything lower only matters as sticky.
    let mut frac = frac_num;
    let mut fw = frac_width;
    let mut sticky = sticky_in;
    if fw > 64 {
        let excess = fw - 64;
        if excess >= 128 {
            sticky |= frac != 0;
            frac = 0;
        } else {
            sticky |= frac & ((1u128 << excess) - 1) != 0;
            frac >>= excess;
        }
        fw = 64;
    }

    let sf_max = fmt.max_scale();
    if scale > sf_max {
        return finalize(fmt.maxpos_pattern(), sign, fmt);
    }
    if scale < -sf_max {
        return finalize(fmt.minpos_pattern(), sign, fmt);
    }

    let (k, e) = fmt.split_scale(scale);
    let rlen = if k >= 0 { k as u32 + 2 } else { (1 - k) as u32 };

    // Lay the unbounded bit string out MSB-first in a 128-bit register:
    // sign (0) at bit 127, regime, es exponent bits, fraction bits.
    let mut acc: u128 = 0;
    if k >= 0 {
        acc |= ((1u128 << (k + 1)) - 1) << (126 - k as u32);
    } else {
        acc |= 1u128 << (126 - (-k) as u32);
    }
    acc |= (e as u128) << (127 - rlen - es);
    acc |= frac << (127 - rlen - es - fw);

    let pattern = (acc >> (128 - n)) as u32;
    let tail = acc << n;

    let frac_bits_avail = n as i64 - 1 - rlen as i64 - es as i64;
    if frac_bits_avail >= 0 {
        // The cut falls inside the fraction field, where the lattice is
        // uniform: guard/round/sticky decides nearest-even exactly.
        let round = tail >> 127 == 1;
        let s = sticky || tail << 1 != 0;
        let up = round && (s || pattern & 1 == 1);
        let p = pattern + up as u32;
        debug_assert!(p >= 1 && p <= fmt.maxpos_pattern());
        return finalize(p, sign, fmt);
    }
    // Below here the cut bits stay part of (scale, frac): only the
    // value-level sticky from the width reduction above survives.

    // The cut fell inside the regime/exponent header. Neighboring posits
    // here are pure powers of two with uneven gaps, so compare the value
    // against the arithmetic midpoint exactly.
    let t = pattern;
    if t == fmt.maxpos_pattern() {
        return finalize(t, sign, fmt);
    }
    let s_t = power_scale(t, fmt);
    let s_t1 = power_scale(t + 1, fmt);
    debug_assert!(s_t <= scale && scale < s_t1);

    // 32 fraction bits are plenty: the midpoint is a multiple of
    // 2^(s_t - 1) and scale - s_t < 2^es, so folding lower bits into
    // sticky cannot move the value across it.
    if fw > 32 {
        let excess = fw - 32;
        sticky |= frac & ((1u128 << excess) - 1) != 0;
        frac >>= excess;
        fw = 32;
    }
    let xe = scale - fw as i64;
    let c = xe.min(s_t - 1);
    let x_int = ((1u128 << fw) | frac) << (xe - c) as u32;
    let mid_int = (1u128 << (s_t - 1 - c) as u32) + (1u128 << (s_t1 - 1 - c) as u32);
    let p = match x_int.cmp(&mid_int) {
        std::cmp::Ordering::Greater => t + 1,
        std::cmp::Ordering::Less => t,
        std::cmp::Ordering::Equal => {
            if sticky {
                t + 1
            } else if t & 1 == 0 {
                t
            } else {
                t + 1
            }
        }
    };
    finalize(p, sign, fmt)
}

/// Scale factor of a pattern known to carry no fraction payload.
fn power_scale(pattern: u32, fmt: PositFormat) -> i64 {
    match decode(PositBits { pattern, format: fmt }) {
        DecodedPosit::Finite(f) => {
            debug_assert!(f.f_num == 0, "expected a power of two");
            f.scale(fmt).0 as i64
        }
        other => unreachable!("header-region neighbor decoded to {other:?}"),
    }
}

fn finalize(positive_pattern: u32, sign: Sign, fmt: PositFormat) -> PositBits {
    debug_assert!(positive_pattern >= 1 && positive_pattern <= fmt.maxpos_pattern());
    let pattern = if sign.is_negative() {
        positive_pattern.wrapping_neg() & fmt.mask()
    } else {
        positive_pattern
    };
    PositBits { pattern, format: fmt }
}
