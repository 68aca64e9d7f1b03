//! Posit arithmetic emulation with an exact multiplier and a
//! logarithm-approximate multiplier (PLAM), plus the error-analysis and
//! inference harnesses built on top of them.
//!
//! - [`format`]: the bit-level codec (decode/encode/pack, specials, rounding).
//! - [`exact`]: exact posit multiplication and the addition used to accumulate.
//! - [`plam`]: the approximate multiplier that replaces the significand
//!   product with a fixed-point fraction addition, plus a stage trace.
//! - [`analysis`]: exhaustive/sampled error sweeps against the exact oracle
//!   and the closed-form error law.
//! - [`nn`]: a minimal dense-network inference engine where every product
//!   goes through either multiplier.

pub mod analysis;
pub mod error;
pub mod exact;
pub mod format;
pub mod nn;
pub mod plam;
pub mod real;

pub use error::{Error, Result};
pub use format::{
    decode, decode_to_real, encode_f64, encode_real, pack, DecodedPosit, FiniteFields,
    PositBits, PositFormat, ScaleFactor, Sign, UnroundedResult,
};
