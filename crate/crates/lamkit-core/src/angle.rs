//! Exact rational points of the circle `R/Z`, the maps `σ_d`, d-nary
//! itineraries, and periodic points from repeating digit strings.
//!
//! All arithmetic is over arbitrary-precision integers. Denominators reach
//! `d^p − 1` for periodic points, and every ordering or crossing predicate in
//! the crate depends on these comparisons being exact.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

/// A point of the circle `R/Z`: a reduced fraction `num/den` with
/// `0 ≤ num < den`, measured in turns.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(BigRational);

fn mod_one(r: BigRational) -> BigRational {
    let f = r.floor();
    r - f
}

impl Angle {
    /// Builds `num/den` reduced mod 1. Negative numerators wrap around;
    /// a negative denominator is treated as a sign on the fraction.
    pub fn new(num: i64, den: i64) -> Result<Angle> {
        Angle::from_big(BigInt::from(num), BigInt::from(den))
    }

    /// As [`Angle::new`] but over arbitrary-precision parts.
    pub fn from_big(num: BigInt, den: BigInt) -> Result<Angle> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Angle(mod_one(BigRational::new(num, den))))
    }

    /// Reduces an arbitrary rational mod 1.
    pub fn from_rational(r: BigRational) -> Angle {
        Angle(mod_one(r))
    }

    pub fn zero() -> Angle {
        Angle(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The underlying rational value in `[0, 1)`.
    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// Image under `σ_d`: multiplication by `d` mod 1.
    pub fn sigma(&self, d: u32) -> Angle {
        Angle(mod_one(&self.0 * BigInt::from(d)))
    }

    /// `σ_d` iterated `n` times.
    pub fn sigma_iter(&self, d: u32, n: usize) -> Angle {
        // d^n mod denom keeps the intermediate product small.
        let den = self.0.denom();
        let step = BigInt::from(d);
        let mut factor = BigInt::one();
        for _ in 0..n {
            factor = (factor * &step).mod_floor(den);
        }
        Angle(mod_one(BigRational::new(
            self.0.numer() * factor,
            den.clone(),
        )))
    }

    /// Counterclockwise distance from `self` to `other`, in `[0, 1)`.
    pub fn ccw_distance(&self, other: &Angle) -> Rational {
        mod_one(&other.0 - &self.0)
    }

    /// Rotates by `offset` turns (any rational), reducing mod 1.
    pub fn rotate(&self, offset: &Rational) -> Angle {
        Angle(mod_one(&self.0 + offset))
    }

    /// Approximate position as an `f64` in `[0, 1)`, for rendering only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }
}

impl Add<&Angle> for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        Angle(mod_one(&self.0 + &rhs.0))
    }
}

impl Sub<&Angle> for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        Angle(mod_one(&self.0 - &rhs.0))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Angle> {
        let parse = || -> Option<Angle> {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s, "1"),
            };
            let num = BigInt::from_str(num).ok()?;
            let den = BigInt::from_str(den).ok()?;
            Angle::from_big(num, den).ok()
        };
        parse().ok_or_else(|| Error::Parse {
            kind: "angle",
            input: s.to_string(),
        })
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Angle, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// `σ_d(a) = d·a mod 1`, exact.
pub fn sigma(d: u32, a: &Angle) -> Angle {
    a.sigma(d)
}

/// Length of the counterclockwise arc from `start` to `end`, in `[0, 1)`.
pub fn arc_length(start: &Angle, end: &Angle) -> Rational {
    start.ccw_distance(end)
}

/// Membership of `a` in the *open* counterclockwise arc `(start, end)`.
///
/// The arc wraps through 0 when `end < start`; when `start == end` the arc
/// is empty.
pub fn in_arc(a: &Angle, start: &Angle, end: &Angle) -> bool {
    let span = start.ccw_distance(end);
    if span.is_zero() {
        return false;
    }
    let off = start.ccw_distance(a);
    !off.is_zero() && off < span
}

/// First `length` digits of the base-`d` itinerary of `a`.
///
/// Digit `n` is `k` iff `σ_d^n(a)` lies in the half-open sector
/// `[k/d, (k+1)/d)`; sector-boundary angles take the right-hand sector.
pub fn itinerary(d: u32, a: &Angle, length: usize) -> Vec<u32> {
    let mut digits = Vec::with_capacity(length);
    let mut x = a.clone();
    let big_d = BigInt::from(d);
    for _ in 0..length {
        let scaled = x.as_rational() * &big_d;
        let digit = scaled.floor().to_integer().to_u32().expect("digit < d");
        digits.push(digit);
        x = x.sigma(d);
    }
    digits
}

/// The unique `x` with `σ_d^p(x) = x` whose itinerary repeats `digits`
/// (`p = digits.len()`): `N/(d^p − 1)` with `N` the digits read base-d.
pub fn periodic_point(d: u32, digits: &[u32]) -> Result<Angle> {
    if digits.is_empty() {
        return Err(Error::EmptyDigits);
    }
    let big_d = BigInt::from(d);
    let mut n = BigInt::zero();
    for &digit in digits {
        if digit >= d {
            return Err(Error::InvalidDigit { digit, base: d });
        }
        n = n * &big_d + BigInt::from(digit);
    }
    let den = num::pow::pow(big_d, digits.len()) - BigInt::one();
    Angle::from_big(n, den)
}

/// A d-nary itinerary split into a preperiodic prefix and a repeating block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itinerary {
    pub base: u32,
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

impl Itinerary {
    pub fn new(base: u32, preperiod: Vec<u32>, period: Vec<u32>) -> Result<Itinerary> {
        if period.is_empty() {
            return Err(Error::EmptyDigits);
        }
        for &digit in preperiod.iter().chain(period.iter()) {
            if digit >= base {
                return Err(Error::InvalidDigit { digit, base });
            }
        }
        Ok(Itinerary {
            base,
            preperiod,
            period,
        })
    }

    /// Replaces the period with its primitive root (e.g. `0101` becomes `01`).
    ///
    /// Never applied implicitly: example verification elsewhere relies on the
    /// literal digit strings.
    pub fn canonicalize(&mut self) {
        let p = self.period.len();
        for root in 1..p {
            if p % root != 0 {
                continue;
            }
            if (root..p).all(|i| self.period[i] == self.period[i % root]) {
                self.period.truncate(root);
                return;
            }
        }
    }

    fn digits_to_string(&self, digits: &[u32]) -> String {
        if self.base <= 10 {
            digits.iter().map(|d| d.to_string()).collect()
        } else {
            digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})",
            self.digits_to_string(&self.preperiod),
            self.digits_to_string(&self.period)
        )
    }
}

/// Full itinerary of a rational angle: iterates `σ_d` until the orbit
/// repeats, splitting at the first recurrence.
pub fn full_itinerary(d: u32, a: &Angle) -> Itinerary {
    let mut seen: Vec<Angle> = Vec::new();
    let mut digits: Vec<u32> = Vec::new();
    let mut x = a.clone();
    let big_d = BigInt::from(d);
    loop {
        if let Some(start) = seen.iter().position(|y| *y == x) {
            let period = digits.split_off(start);
            return Itinerary {
                base: d,
                preperiod: digits,
                period,
            };
        }
        seen.push(x.clone());
        let digit = (x.as_rational() * &big_d)
            .floor()
            .to_integer()
            .to_u32()
            .expect("digit < d");
        digits.push(digit);
        x = x.sigma(d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn construction_reduces_mod_one() {
        assert_eq!(Angle::new(3, 2).unwrap(), Angle::new(1, 2).unwrap());
        assert_eq!(Angle::new(26, 26).unwrap(), Angle::zero());
        assert_eq!(Angle::new(-1, 4).unwrap(), Angle::new(3, 4).unwrap());
        assert_eq!(Angle::new(1, -4).unwrap(), Angle::new(3, 4).unwrap());
        assert_eq!(Angle::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(3, &Angle::new(1, 3).unwrap()), Angle::zero());
        assert_eq!(sigma(2, &Angle::zero()), Angle::zero());
        assert_eq!(
            sigma(3, &Angle::new(1, 26).unwrap()),
            Angle::new(3, 26).unwrap()
        );
    }

    #[test]
    fn itinerary_examples() {
        let third = Angle::new(1, 3).unwrap();
        assert_eq!(itinerary(2, &third, 4), vec![0, 1, 0, 1]);
        assert_eq!(itinerary(3, &third, 3), vec![1, 0, 0]);
        assert_eq!(itinerary(3, &Angle::zero(), 3), vec![0, 0, 0]);
    }

    #[test]
    fn sector_boundaries_take_right_hand_sector() {
        // 1/3 sits on the boundary of sectors 0 and 1 for d = 3.
        assert_eq!(itinerary(3, &Angle::new(1, 3).unwrap(), 1), vec![1]);
        assert_eq!(itinerary(4, &Angle::new(3, 4).unwrap(), 1), vec![3]);
    }

    #[test]
    fn periodic_point_examples() {
        // Oracle: 001 repeating in base 3 solves 27x = x + 1.
        assert_eq!(
            periodic_point(3, &[0, 0, 1]).unwrap(),
            Angle::new(1, 26).unwrap()
        );
        // 16x = x + 1.
        assert_eq!(
            periodic_point(4, &[0, 1]).unwrap(),
            Angle::new(1, 15).unwrap()
        );
        assert_eq!(periodic_point(3, &[0]).unwrap(), Angle::zero());
        assert_eq!(
            periodic_point(3, &[0, 0, 3]),
            Err(Error::InvalidDigit { digit: 3, base: 3 })
        );
    }

    #[test]
    fn arc_examples() {
        let q = Angle::new(1, 4).unwrap();
        let tq = Angle::new(3, 4).unwrap();
        assert_eq!(arc_length(&q, &tq), rat(1, 2));
        assert_eq!(arc_length(&tq, &q), rat(1, 2));
        assert!(in_arc(&Angle::zero(), &tq, &q));
        assert!(!in_arc(&Angle::new(1, 2).unwrap(), &tq, &q));
        // Open arc: endpoints excluded.
        assert!(!in_arc(&q, &q, &tq));
        assert!(!in_arc(&tq, &q, &tq));
    }

    #[test]
    fn shift_property_on_periodic_points() {
        for d in [2u32, 3, 4, 5] {
            let digits = [0, 2 % d, 1 % d, (d - 1) % d];
            let x = periodic_point(d, &digits).unwrap();
            let shifted = periodic_point(d, &[digits[1], digits[2], digits[3], digits[0]]).unwrap();
            assert_eq!(sigma(d, &x), shifted);
        }
    }

    #[test]
    fn exact_return_of_full_period() {
        // (σ_d)^p on N/(d^p − 1) must return the identical reduced fraction.
        for (d, p) in [(3u32, 12usize), (2, 20), (5, 8)] {
            let den = num::pow::pow(BigInt::from(d), p) - BigInt::one();
            let x = Angle::from_big(BigInt::from(12345), den).unwrap();
            assert_eq!(x.sigma_iter(d, p), x);
        }
    }

    #[test]
    fn itinerary_of_periodic_point_repeats_digits() {
        for d in [2u32, 3, 4, 7] {
            let w = [1 % d, 0, (d - 1) % d];
            let x = periodic_point(d, &w).unwrap();
            let got = itinerary(d, &x, w.len() * 3);
            let want: Vec<u32> = w.iter().copied().cycle().take(w.len() * 3).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn display_and_parse() {
        let a = Angle::new(3, 26).unwrap();
        assert_eq!(a.to_string(), "3/26");
        assert_eq!("3/26".parse::<Angle>().unwrap(), a);
        assert_eq!(Angle::zero().to_string(), "0/1");
        assert_eq!("7".parse::<Angle>().unwrap(), Angle::zero());
        assert!("x/y".parse::<Angle>().is_err());
    }

    #[test]
    fn itinerary_display() {
        let it = Itinerary::new(3, vec![1], vec![0]).unwrap();
        assert_eq!(it.to_string(), "1(0)");
        let it = Itinerary::new(12, vec![], vec![11, 0, 3]).unwrap();
        assert_eq!(it.to_string(), "(11,0,3)");
    }

    #[test]
    fn itinerary_canonicalization_is_explicit() {
        let mut it = Itinerary::new(2, vec![], vec![0, 1, 0, 1]).unwrap();
        assert_eq!(it.period, vec![0, 1, 0, 1]);
        it.canonicalize();
        assert_eq!(it.period, vec![0, 1]);
    }

    #[test]
    fn full_itinerary_splits_preperiod() {
        // 1/3 under σ_2 is purely periodic (01); under σ_3 it is 1(0).
        let third = Angle::new(1, 3).unwrap();
        let b = full_itinerary(2, &third);
        assert_eq!((b.preperiod.as_slice(), b.period.as_slice()), (&[][..], &[0, 1][..]));
        let t = full_itinerary(3, &third);
        assert_eq!((t.preperiod.as_slice(), t.period.as_slice()), (&[1][..], &[0][..]));
    }

    #[test]
    fn arc_lengths_sum_to_one() {
        let pairs = [((1i64, 7i64), (3, 5)), ((0, 1), (12, 25)), ((5, 9), (1, 2))];
        for ((an, ad), (bn, bd)) in pairs {
            let a = Angle::new(an, ad).unwrap();
            let b = Angle::new(bn, bd).unwrap();
            assert_eq!(arc_length(&a, &b) + arc_length(&b, &a), rat(1, 1));
        }
    }
}
