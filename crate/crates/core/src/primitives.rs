//! Core value types shared across the pipeline: addresses, 32-byte words,
//! raw token amounts, and fixed-point USD values.
//!
//! Raw amounts are unscaled 256-bit integers; USD values are stored with six
//! fractional digits (micro-dollars), rounded half-even at the boundary.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid hex string {0:?}: {1}")]
    Hex(String, String),
    #[error("expected {expected} bytes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("invalid decimal integer {0:?}")]
    Decimal(String),
    #[error("value exceeds 256 bits")]
    Overflow,
}

/// A 20-byte EVM account address.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(pub [u8; 20]);

/// A 32-byte word: transaction hashes, log topics, storage values.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct B256(pub [u8; 32]);

fn strip_0x(s: &str) -> &str {
    s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s)
}

fn parse_fixed_hex<const N: usize>(s: &str) -> Result<[u8; N], ParseError> {
    let body = strip_0x(s);
    let bytes = hex::decode(body).map_err(|e| ParseError::Hex(s.to_string(), e.to_string()))?;
    if bytes.len() != N {
        return Err(ParseError::Length { expected: N, got: bytes.len() });
    }
    let mut out = [0u8; N];
    out.copy_from_slice(&bytes);
    Ok(out)
}

impl Address {
    pub const ZERO: Address = Address([0u8; 20]);

    pub fn as_bytes(&self) -> &[u8; 20] {
        &self.0
    }

    /// Extracts the address from a left-padded 32-byte ABI word.
    pub fn from_word(word: &[u8]) -> Option<Address> {
        if word.len() != 32 || word[..12].iter().any(|b| *b != 0) {
            return None;
        }
        let mut out = [0u8; 20];
        out.copy_from_slice(&word[12..]);
        Some(Address(out))
    }

    /// The address as a right-aligned 32-byte word (indexed-topic layout).
    pub fn to_word(&self) -> [u8; 32] {
        let mut word = [0u8; 32];
        word[12..].copy_from_slice(&self.0);
        word
    }
}

impl B256 {
    pub const ZERO: B256 = B256([0u8; 32]);

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", hex::encode(self.0))
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for B256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", hex::encode(self.0))
    }
}

impl fmt::Debug for B256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Address {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fixed_hex::<20>(s).map(Address)
    }
}

impl FromStr for B256 {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fixed_hex::<32>(s).map(B256)
    }
}

macro_rules! hex_string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(&self.to_string())
            }
        }
        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(de::Error::custom)
            }
        }
    };
}

hex_string_serde!(Address);
hex_string_serde!(B256);

/// An unscaled token amount: an unsigned integer bounded by 2^256.
///
/// Serialized as a decimal string so no precision is ever lost.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RawAmount(BigUint);

impl RawAmount {
    pub fn zero() -> Self {
        RawAmount(BigUint::zero())
    }

    pub fn from_u128(v: u128) -> Self {
        RawAmount(BigUint::from(v))
    }

    /// Interprets a 32-byte big-endian ABI word as an unsigned amount.
    pub fn from_word(word: &[u8]) -> Option<RawAmount> {
        if word.len() != 32 {
            return None;
        }
        Some(RawAmount(BigUint::from_bytes_be(word)))
    }

    pub fn from_biguint(v: BigUint) -> Result<Self, ParseError> {
        if v.bits() > 256 {
            return Err(ParseError::Overflow);
        }
        Ok(RawAmount(v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }

    /// Big-endian 32-byte ABI encoding.
    pub fn to_word(&self) -> [u8; 32] {
        let bytes = self.0.to_bytes_be();
        let mut word = [0u8; 32];
        word[32 - bytes.len()..].copy_from_slice(&bytes);
        word
    }

    pub fn checked_sub(&self, other: &RawAmount) -> Option<RawAmount> {
        if self.0 >= other.0 {
            Some(RawAmount(&self.0 - &other.0))
        } else {
            None
        }
    }
}

impl From<u64> for RawAmount {
    fn from(v: u64) -> Self {
        RawAmount(BigUint::from(v))
    }
}

impl fmt::Display for RawAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for RawAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for RawAmount {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = BigUint::from_str(s).map_err(|_| ParseError::Decimal(s.to_string()))?;
        RawAmount::from_biguint(v)
    }
}

/// A signed raw-unit quantity (profit legs can be negative).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SignedAmount(BigInt);

impl SignedAmount {
    pub fn zero() -> Self {
        SignedAmount(BigInt::zero())
    }

    pub fn from_bigint(v: BigInt) -> Self {
        SignedAmount(v)
    }

    /// end − start, as a signed quantity.
    pub fn difference(end: &RawAmount, start: &RawAmount) -> SignedAmount {
        SignedAmount(end.to_bigint() - start.to_bigint())
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl fmt::Display for SignedAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for SignedAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for SignedAmount {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigInt::from_str(s)
            .map(SignedAmount)
            .map_err(|_| ParseError::Decimal(s.to_string()))
    }
}

macro_rules! decimal_string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(&self.to_string())
            }
        }
        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(de::Error::custom)
            }
        }
    };
}

decimal_string_serde!(RawAmount);
decimal_string_serde!(SignedAmount);

/// Number of fractional digits carried by stored USD values.
pub const USD_SCALE: u32 = 6;

/// A USD value with exactly six fractional digits, stored as integer micros.
///
/// All upstream arithmetic is exact rational; rounding to this representation
/// happens once, half-even, when a value crosses the storage boundary.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Usd(BigInt);

impl Usd {
    pub fn zero() -> Self {
        Usd(BigInt::zero())
    }

    pub fn from_micros(micros: i64) -> Self {
        Usd(BigInt::from(micros))
    }

    /// Rounds an exact rational dollar value to micros, ties to even.
    pub fn from_rational(value: &BigRational) -> Self {
        Usd(round_half_even(&(value * BigInt::from(10u64.pow(USD_SCALE)))))
    }

    pub fn micros(&self) -> &BigInt {
        &self.0
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), BigInt::from(10u64.pow(USD_SCALE)))
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl std::ops::Add<&Usd> for Usd {
    type Output = Usd;
    fn add(self, rhs: &Usd) -> Usd {
        Usd(self.0 + &rhs.0)
    }
}

impl std::iter::Sum for Usd {
    fn sum<I: Iterator<Item = Usd>>(iter: I) -> Usd {
        iter.fold(Usd::zero(), |acc, v| acc + &v)
    }
}

impl fmt::Display for Usd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, magnitude) = match self.0.sign() {
            Sign::Minus => ("-", self.0.magnitude().clone()),
            _ => ("", self.0.magnitude().clone()),
        };
        let scale = BigUint::from(10u64.pow(USD_SCALE));
        let (whole, frac) = magnitude.div_rem(&scale);
        write!(f, "{sign}{whole}.{frac:0width$}", width = USD_SCALE as usize)
    }
}

impl fmt::Debug for Usd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Usd {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        if frac.len() > USD_SCALE as usize || whole.is_empty() {
            return Err(ParseError::Decimal(s.to_string()));
        }
        let padded = format!("{frac:0<width$}", width = USD_SCALE as usize);
        let whole = BigInt::from_str(whole).map_err(|_| ParseError::Decimal(s.to_string()))?;
        let frac = BigInt::from_str(&padded).map_err(|_| ParseError::Decimal(s.to_string()))?;
        Ok(Usd((whole * BigInt::from(10u64.pow(USD_SCALE)) + frac) * BigInt::from(sign)))
    }
}

decimal_string_serde!(Usd);

/// Rounds a rational to the nearest integer, ties to even.
pub fn round_half_even(value: &BigRational) -> BigInt {
    let numer = value.numer();
    let denom = value.denom(); // always positive after reduction
    let (quot, rem) = numer.div_rem(denom);
    if rem.is_zero() {
        return quot;
    }
    // div_rem truncates toward zero; adjust to floor for negatives.
    let (floor, twice) = if numer.is_negative() {
        (quot - 1, (rem + denom) * 2)
    } else {
        (quot, rem * 2)
    };
    let denom = denom.clone();
    if twice < denom {
        floor
    } else if twice > denom {
        floor + 1
    } else if floor.is_even() {
        floor
    } else {
        floor + 1
    }
}

/// Formats an exact rational as a decimal string with `digits` fractional
/// digits, rounded half-even.
pub fn format_rational(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u64.pow(digits));
    let scaled = round_half_even(&(value * &scale));
    let (sign, magnitude) = match scaled.sign() {
        Sign::Minus => ("-", scaled.magnitude().clone()),
        _ => ("", scaled.magnitude().clone()),
    };
    if digits == 0 {
        return format!("{sign}{magnitude}");
    }
    let scale = BigUint::from(10u64.pow(digits));
    let (whole, frac) = magnitude.div_rem(&scale);
    format!("{sign}{whole}.{frac:0width$}", width = digits as usize)
}

/// Power of ten as a big integer; token decimals reach at most 36.
pub fn pow10(exp: u32) -> BigInt {
    BigInt::from(10u32).pow(exp)
}
