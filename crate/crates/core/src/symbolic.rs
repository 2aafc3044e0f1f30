//! Exact real positions of the form `q + ε_n`.
//!
//! `q` is rational and `ε_n = √p_n / 2^n` with `p_n` the `n`-th prime
//! (`ε_0 = 0`). Because `{1, √2, √3, √5, …}` is linearly independent over
//! the rationals, two positions are equal exactly when their `(q, n)` pairs
//! are. Order is decided from exact floors of `x·2^b` at increasing `b`,
//! which always terminates for distinct positions.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Bits used when a position is rounded into floating point.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Fractional decimal digits in serialized positions.
pub const DECIMAL_DIGITS: u32 = 40;

/// The `n`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(n: u32) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    let mut count = 0;
    let mut candidate = 1u64;
    while count < n {
        candidate += 1;
        if (2..)
            .take_while(|d| d * d <= candidate)
            .all(|d| !candidate.is_multiple_of(d))
        {
            count += 1;
        }
    }
    candidate
}

/// `ε_n` as a double. `ε_0 = 0`.
pub fn epsilon_f64(n: u32) -> f64 {
    if n == 0 {
        0.0
    } else {
        (nth_prime(n) as f64).sqrt() / 2f64.powi(n as i32)
    }
}

/// The position `0 + ε_n`.
pub fn epsilon(n: u32) -> SymbolicPosition {
    SymbolicPosition::new(BigRational::zero(), n)
}

/// `floor(x·scale)` for `x = q + sign·√p/2^n`, exactly.
///
/// With `q = a/d`: `x·scale·d·2^n = a·scale·2^n + sign·√(d²·scale²·p)`, and
/// `floor(floor(z)/k) = floor(z/k)` for positive integer `k`.
fn floor_scaled(q: &BigRational, class: u32, sign: i32, scale: &BigInt) -> BigInt {
    let num = q.numer();
    let den = q.denom();
    if class == 0 || sign == 0 {
        return (num * scale).div_floor(den);
    }
    let p = BigInt::from(nth_prime(class));
    let two_n = BigInt::one() << class as usize;
    let x = num * scale * &two_n;
    let y = den * den * scale * scale * p;
    let root = y.sqrt();
    let z = if sign > 0 {
        x + root
    } else if &root * &root == y {
        x - root
    } else {
        x - root - 1
    };
    z.div_floor(&(den * two_n))
}

fn bigint_to_f64_scaled(f: &BigInt, bits: u32) -> f64 {
    // Keep 64 fractional bits before handing to floating point.
    let (f, bits) = if bits > 64 {
        (f >> (bits - 64) as usize, 64)
    } else {
        (f.clone(), bits)
    };
    f.to_f64().expect("finite") / 2f64.powi(bits as i32)
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// The real number `rational + ε_class`.
#[derive(Clone)]
pub struct SymbolicPosition {
    rational: BigRational,
    class: u32,
    approx: f64,
}

impl SymbolicPosition {
    pub fn new(rational: BigRational, class: u32) -> Self {
        let approx = rational.to_f64().unwrap_or(f64::NAN) + epsilon_f64(class);
        Self {
            rational,
            class,
            approx,
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::new(q, 0)
    }

    pub fn integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), 0)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    pub fn is_rational(&self) -> bool {
        self.class == 0
    }

    /// `floor(x·2^bits)`.
    pub fn floor_binary(&self, bits: u32) -> BigInt {
        floor_scaled(&self.rational, self.class, 1, &pow2(bits))
    }

    /// `floor(x·10^digits)`.
    pub fn floor_decimal(&self, digits: u32) -> BigInt {
        floor_scaled(&self.rational, self.class, 1, &BigInt::from(10).pow(digits))
    }

    /// Rounds to a double after evaluating at `bits` fractional bits.
    pub fn to_f64_at(&self, bits: u32) -> f64 {
        bigint_to_f64_scaled(&self.floor_binary(bits), bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_at(DEFAULT_PRECISION_BITS)
    }

    /// Fixed-point decimal expansion with `digits` fractional digits,
    /// truncated toward negative infinity.
    pub fn decimal_string(&self, digits: u32) -> String {
        let f = self.floor_decimal(digits);
        let unit = BigInt::from(10).pow(digits);
        let (sign, mag) = if f.sign() == Sign::Minus {
            // floor(x·10^d) < 0: print -(|f|) with the same digits.
            ("-", -f)
        } else {
            ("", f)
        };
        let (int, frac) = mag.div_rem(&unit);
        format!(
            "{sign}{int}.{frac:0>width$}",
            frac = frac.to_string(),
            width = digits as usize
        )
    }

    /// `self + other`, defined when at most one of them carries an `ε`.
    pub fn checked_add(&self, other: &SymbolicPosition) -> Result<SymbolicPosition> {
        let class = match (self.class, other.class) {
            (0, c) | (c, 0) => c,
            (a, b) => {
                return Err(Error::NotRepresentable(format!(
                    "sum of ε_{a} and ε_{b} has no single-class representation"
                )))
            }
        };
        Ok(SymbolicPosition::new(
            &self.rational + &other.rational,
            class,
        ))
    }

    pub fn add_rational(&self, q: &BigRational) -> SymbolicPosition {
        SymbolicPosition::new(&self.rational + q, self.class)
    }

    /// `self - other` as a double, evaluated at `bits` fractional bits.
    pub fn difference_f64(&self, other: &SymbolicPosition, bits: u32) -> f64 {
        if self.class == other.class {
            return (&self.rational - &other.rational)
                .to_f64()
                .unwrap_or(f64::NAN);
        }
        let d = self.floor_binary(bits) - other.floor_binary(bits);
        bigint_to_f64_scaled(&d, bits)
    }

    /// `"p/q"` (always with a denominator).
    pub fn rational_string(&self) -> String {
        format!("{}/{}", self.rational.numer(), self.rational.denom())
    }
}

impl PartialEq for SymbolicPosition {
    fn eq(&self, other: &Self) -> bool {
        self.class == other.class && self.rational == other.rational
    }
}

impl Eq for SymbolicPosition {}

impl Hash for SymbolicPosition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rational.hash(state);
        self.class.hash(state);
    }
}

impl Ord for SymbolicPosition {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.class == other.class {
            return self.rational.cmp(&other.rational);
        }
        // The cached doubles are within a few ulps of the true values.
        let gap = self.approx - other.approx;
        if gap.abs() > 1e-9 * (1.0 + self.approx.abs().max(other.approx.abs())) {
            return if gap < 0.0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        // Distinct classes never coincide, so the enclosures separate.
        let mut bits = 64;
        loop {
            let a = self.floor_binary(bits);
            let b = other.floor_binary(bits);
            if a != b {
                return a.cmp(&b);
            }
            bits *= 2;
        }
    }
}

impl PartialOrd for SymbolicPosition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SymbolicPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class == 0 {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + ε_{}", self.rational, self.class)
        }
    }
}

impl fmt::Display for SymbolicPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A modulation frequency `q + sign·ε_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frequency {
    rational: BigRational,
    class: u32,
    sign: i32,
}

impl Frequency {
    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn rational(q: BigRational) -> Self {
        Self {
            rational: q,
            class: 0,
            sign: 0,
        }
    }

    /// `+ε_n` or `-ε_n`.
    pub fn epsilon(n: u32, negative: bool) -> Self {
        let sign = match (n, negative) {
            (0, _) => 0,
            (_, false) => 1,
            (_, true) => -1,
        };
        Self {
            rational: BigRational::zero(),
            class: n,
            sign,
        }
    }

    pub fn from_position(p: &SymbolicPosition) -> Self {
        Self {
            rational: p.rational.clone(),
            class: p.class,
            sign: if p.class == 0 { 0 } else { 1 },
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            rational: -&self.rational,
            class: self.class,
            sign: -self.sign,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0 && self.rational.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    fn floor_binary(&self, bits: u32) -> BigInt {
        floor_scaled(&self.rational, self.class, self.sign, &pow2(bits))
    }

    pub fn to_f64(&self) -> f64 {
        bigint_to_f64_scaled(
            &self.floor_binary(DEFAULT_PRECISION_BITS),
            DEFAULT_PRECISION_BITS,
        )
    }

    /// Fractional part of `self·x`, in `[0, 1)`, from a `bits`-bit
    /// fixed-point product. Absolute error about `(|self| + |x| + 1)·2^-bits`.
    pub fn phase_turns(&self, x: &SymbolicPosition, bits: u32) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.sign == 0 && x.class == 0 {
            let prod = &self.rational * &x.rational;
            let frac = &prod - prod.floor();
            return frac.to_f64().unwrap_or(0.0);
        }
        let a = self.floor_binary(bits);
        let b = x.floor_binary(bits);
        let prod = (a * b) >> bits as usize;
        let frac = prod.mod_floor(&pow2(bits));
        bigint_to_f64_scaled(&frac, bits)
    }
}

impl fmt::Debug for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "{}", self.rational),
            1 => write!(f, "{} + ε_{}", self.rational, self.class),
            _ => write!(f, "{} - ε_{}", self.rational, self.class),
        }
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `"-12.25"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational or decimal: {s:?}"));
    if s.contains('/') {
        let r = BigRational::from_str(s).map_err(|_| err())?;
        return Ok(r);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int}{frac}");
    let numer =
        BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    let denom = BigInt::from(10).pow(frac.len() as u32);
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Parses `"p/q"` plus an explicit class into a position.
pub fn parse_position(rational: &str, class: u32) -> Result<SymbolicPosition> {
    Ok(SymbolicPosition::new(parse_rational(rational)?, class))
}
