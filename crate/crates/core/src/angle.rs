//! External angles as exact fractions in `[0, 1)` and the angle doubling map
//! `t ↦ 2t mod 1`.
//!
//! [`BinaryAngle`] is generic over its backing unsigned integer. The crate
//! root exposes [`Angle`](crate::Angle) (unbounded, backed by `BigUint`) and
//! [`Angle64`](crate::Angle64) (backed by `u64`, valid while denominators stay
//! below `2^32` so that cross products fit). Binary expansions are derived
//! views; the stored value is always the reduced fraction.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedMul, FromPrimitive, ToPrimitive, Unsigned};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Unsigned integer types that can back a [`BinaryAngle`].
pub trait AngleInt:
    Integer
    + Unsigned
    + Clone
    + Hash
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> AngleInt for T where
    T: Integer
        + Unsigned
        + Clone
        + Hash
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

pub(crate) fn small<T: AngleInt>(v: u64) -> T {
    T::from_u64(v).expect("small constant fits every backing integer")
}

/// `2^n` in the backing type.
pub fn pow2<T: AngleInt>(n: usize) -> T {
    num_traits::pow(small::<T>(2), n)
}

/// `2^n - 1`, the common denominator of angles whose period divides `n`.
pub fn mersenne<T: AngleInt>(n: usize) -> T {
    pow2::<T>(n) - T::one()
}

fn cross<T: AngleInt>(a: &T, b: &T) -> T {
    a.checked_mul(b)
        .expect("angle cross product overflows the backing integer type")
}

/// Preperiod and exact period of an angle under doubling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitType {
    pub preperiod: usize,
    pub period: usize,
}

impl OrbitType {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

/// Notation an angle was written in; output mirrors it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AngleNotation {
    #[default]
    Fraction,
    Binary,
}

/// A reduced fraction `numerator / denominator` in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryAngle<T> {
    num: T,
    den: T,
}

impl<T: AngleInt> BinaryAngle<T> {
    /// Builds `num / den mod 1` in lowest terms. `1/1` becomes `0`.
    pub fn new(num: T, den: T) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let num = num % den.clone();
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g.clone(),
            den: den / g,
        })
    }

    pub fn from_u64(num: u64, den: u64) -> Result<Self> {
        Self::new(small(num), small(den))
    }

    pub fn zero() -> Self {
        Self {
            num: T::zero(),
            den: T::one(),
        }
    }

    /// The angle `a / (2^n - 1)`, whose period divides `n`.
    pub fn periodic(a: T, n: usize) -> Result<Self> {
        Self::new(a, mersenne(n))
    }

    /// The angle with binary expansion `0.prefix(period)`; an empty `period`
    /// means a terminating expansion.
    pub fn from_binary(prefix: &[u8], period: &[u8]) -> Result<Self> {
        let word = |bits: &[u8]| -> Result<T> {
            bits.iter().try_fold(T::zero(), |acc, &b| match b {
                0 | 1 => Ok(acc * small::<T>(2) + small::<T>(b as u64)),
                _ => Err(Error::AngleSyntax(format!("binary digit {b}"))),
            })
        };
        let head = word(prefix)?;
        let scale = pow2::<T>(prefix.len());
        if period.is_empty() {
            return Self::new(head, scale);
        }
        let m = mersenne::<T>(period.len());
        let tail = word(period)?;
        Self::new(head * m.clone() + tail, scale * m)
    }

    pub fn numerator(&self) -> &T {
        &self.num
    }

    pub fn denominator(&self) -> &T {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_ratio(&self) -> Ratio<T> {
        Ratio::new_raw(self.num.clone(), self.den.clone())
    }

    /// `2a mod 1`.
    pub fn double(&self) -> Self {
        let twice = self.num.clone() + self.num.clone();
        let num = if twice >= self.den {
            twice - self.den.clone()
        } else {
            twice
        };
        // An odd denominator stays coprime to 2a; an even one may drop a factor 2.
        if self.den.is_even() && !self.num.is_zero() {
            Self::new(num, self.den.clone()).expect("denominator is positive")
        } else if num.is_zero() {
            Self::zero()
        } else {
            Self {
                num,
                den: self.den.clone(),
            }
        }
    }

    /// `2^k a mod 1`.
    pub fn double_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |a, _| a.double())
    }

    /// `a / 2`, the preimage in `[0, 1/2)`.
    pub fn half(&self) -> Self {
        Self::new(self.num.clone(), self.den.clone() * small::<T>(2)).expect("positive")
    }

    /// `(a + 1) / 2`, the preimage in `[1/2, 1)`.
    pub fn half_plus(&self) -> Self {
        Self::new(
            self.num.clone() + self.den.clone(),
            self.den.clone() * small::<T>(2),
        )
        .expect("positive")
    }

    pub fn orbit_type(&self) -> OrbitType {
        let two = small::<T>(2);
        let mut odd = self.den.clone();
        let mut preperiod = 0;
        while odd.is_even() {
            odd = odd / two.clone();
            preperiod += 1;
        }
        if odd.is_one() {
            return OrbitType {
                preperiod,
                period: 1,
            };
        }
        // multiplicative order of 2 modulo the odd part
        let mut x = T::one();
        let mut period = 0;
        loop {
            x = (x * two.clone()) % odd.clone();
            period += 1;
            if x.is_one() {
                break;
            }
        }
        OrbitType { preperiod, period }
    }

    pub fn is_periodic(&self) -> bool {
        self.den.is_odd()
    }

    /// First `count` binary digits; dyadic angles use the terminating expansion.
    pub fn binary_digits(&self, count: usize) -> Vec<u8> {
        let mut digits = Vec::with_capacity(count);
        let mut rem = self.num.clone();
        for _ in 0..count {
            rem = rem * small::<T>(2);
            if rem >= self.den {
                rem = rem - self.den.clone();
                digits.push(1);
            } else {
                digits.push(0);
            }
        }
        digits
    }

    /// The expansion split as `(preperiodic digits, repeating block)`; the
    /// block is `[0]` for dyadic angles.
    pub fn binary_expansion(&self) -> (Vec<u8>, Vec<u8>) {
        let orbit = self.orbit_type();
        let mut digits = self.binary_digits(orbit.preperiod + orbit.period);
        let block = digits.split_off(orbit.preperiod);
        (digits, block)
    }

    /// Whether `self` lies strictly inside the arc running counterclockwise
    /// from `from` to `to`.
    pub fn in_open_arc(&self, from: &Self, to: &Self) -> bool {
        if from < to {
            from < self && self < to
        } else {
            self > from || self < to
        }
    }

    pub fn format(&self, notation: AngleNotation) -> String {
        match notation {
            AngleNotation::Fraction => self.to_string(),
            AngleNotation::Binary => self.to_binary_string(),
        }
    }

    /// `0.b₁…b_k(p₁…p_n)`, or `0.b₁…b_k` for dyadic angles.
    pub fn to_binary_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let (prefix, block) = self.binary_expansion();
        let digits = |bits: &[u8]| bits.iter().map(|b| char::from(b'0' + b)).collect::<String>();
        if block == [0] {
            format!("0.{}", digits(&prefix))
        } else {
            format!("0.{}({})", digits(&prefix), digits(&block))
        }
    }

    /// Parses `a/b`, `0`, `0.b₁…b_k` or `0.b₁…b_k(p₁…p_n)` and reports which
    /// notation was used.
    pub fn parse_with_notation(text: &str) -> Result<(Self, AngleNotation)> {
        let s = text.trim();
        let bad = || Error::AngleSyntax(text.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let num = T::from_str_radix(n.trim(), 10).map_err(|_| bad())?;
            let den = T::from_str_radix(d.trim(), 10).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            if num > den {
                return Err(bad());
            }
            return Ok((Self::new(num, den)?, AngleNotation::Fraction));
        }
        if s == "0" || s == "1" {
            return Ok((Self::zero(), AngleNotation::Fraction));
        }
        let rest = s.strip_prefix("0.").ok_or_else(bad)?;
        let (head, block) = match rest.find('(') {
            Some(open) => {
                let close = rest.strip_suffix(')').ok_or_else(bad)?;
                let block = &close[open + 1..];
                if block.is_empty() {
                    return Err(bad());
                }
                (&rest[..open], block)
            }
            None => (rest, ""),
        };
        let bits = |part: &str| -> Result<Vec<u8>> {
            part.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect()
        };
        let head = bits(head)?;
        let block = bits(block)?;
        if head.is_empty() && block.is_empty() {
            return Err(bad());
        }
        Ok((Self::from_binary(&head, &block)?, AngleNotation::Binary))
    }
}

impl<T: AngleInt> PartialOrd for BinaryAngle<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: AngleInt> Ord for BinaryAngle<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        cross(&self.num, &other.den).cmp(&cross(&other.num, &self.den))
    }
}

impl<T: AngleInt> fmt::Display for BinaryAngle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl<T: AngleInt> fmt::Debug for BinaryAngle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl<T: AngleInt> std::str::FromStr for BinaryAngle<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_notation(s).map(|(a, _)| a)
    }
}

impl<T: AngleInt> Serialize for BinaryAngle<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, T: AngleInt> Deserialize<'de> for BinaryAngle<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All angles `a / (2^n - 1)` of exact period `n`, in increasing order.
pub fn angles_of_exact_period<T: AngleInt>(n: usize) -> Vec<BinaryAngle<T>> {
    exact_period_numerators::<T>(n, T::zero(), mersenne(n))
        .into_iter()
        .map(|a| BinaryAngle {
            num: a,
            den: mersenne(n),
        })
        .map(|a| BinaryAngle::new(a.num, a.den).expect("positive"))
        .collect()
}

/// Numerators `a` in `[lo, hi)` for which `a / (2^n - 1)` has exact period `n`.
pub(crate) fn exact_period_numerators<T: AngleInt>(n: usize, lo: T, hi: T) -> Vec<T> {
    let full = mersenne::<T>(n);
    // a/(2^n-1) has period dividing d < n iff (2^n-1)/(2^d-1) divides a
    let blockers: Vec<T> = (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| full.clone() / mersenne::<T>(d))
        .collect();
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        if blockers.iter().all(|b| !a.is_multiple_of(b)) {
            out.push(a.clone());
        }
        a = a + T::one();
    }
    out
}
