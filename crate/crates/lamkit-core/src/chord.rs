//! Chords of the closed unit disk: lengths, the leaf length function `τ_d`,
//! crossing tests, criticality, and the endpoint metric.
//!
//! A chord is an unordered pair of circle points, stored sorted. Degenerate
//! chords (both endpoints equal) are allowed and flagged; each operation
//! states whether it accepts them.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::Rational;

/// An unordered pair of circle points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    a: Angle,
    b: Angle,
}

impl Chord {
    /// Builds a chord; endpoints are stored sorted so equality and hashing
    /// are independent of argument order. Degenerate pairs are permitted.
    pub fn new(a: Angle, b: Angle) -> Chord {
        if b < a {
            Chord { a: b, b: a }
        } else {
            Chord { a, b }
        }
    }

    pub fn endpoints(&self) -> (&Angle, &Angle) {
        (&self.a, &self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Length of the counterclockwise arc from the smaller endpoint to the
    /// larger; `leaf_length` is the minimum of this and its complement.
    pub fn ccw_span(&self) -> Rational {
        self.a.ccw_distance(&self.b)
    }

    /// The shorter of the two subtended arc lengths, in `[0, 1/2]`.
    pub fn length(&self) -> Rational {
        let s = self.ccw_span();
        let complement = Rational::one() - &s;
        s.min(complement)
    }

    /// Endpointwise image under `σ_d` (degenerate when `self` is critical).
    pub fn sigma(&self, d: u32) -> Chord {
        Chord::new(self.a.sigma(d), self.b.sigma(d))
    }

    pub fn shares_endpoint(&self, other: &Chord) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\u{2013}{}", self.a, self.b)
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Chord {
    type Err = Error;

    /// Parses `a-b` (shell-safe) or `a–b`; each side is an angle `num/den`.
    fn from_str(s: &str) -> Result<Chord> {
        let err = || Error::Parse {
            kind: "chord",
            input: s.to_string(),
        };
        if let Some((lhs, rhs)) = s.split_once('\u{2013}') {
            let a = lhs.trim().parse::<Angle>().map_err(|_| err())?;
            let b = rhs.trim().parse::<Angle>().map_err(|_| err())?;
            return Ok(Chord::new(a, b));
        }
        // Plain hyphen: try every split point, since a leading minus sign is
        // legal inside an angle.
        for (idx, ch) in s.char_indices().skip(1) {
            if ch != '-' {
                continue;
            }
            let (lhs, rhs) = (&s[..idx], &s[idx + 1..]);
            if let (Ok(a), Ok(b)) = (lhs.trim().parse::<Angle>(), rhs.trim().parse::<Angle>()) {
                return Ok(Chord::new(a, b));
            }
        }
        Err(err())
    }
}

impl Serialize for Chord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Chord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Chord, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A chord whose endpoints share a `σ_d` image; its endpoints differ by
/// `displacement/d` of a turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalChord {
    pub chord: Chord,
    pub displacement: u32,
}

impl CriticalChord {
    /// Validates that `chord` is critical for `σ_d` and records the
    /// displacement `k` with `b − a ≡ k/d (mod 1)` for the sorted endpoints.
    pub fn new(d: u32, chord: Chord) -> Result<CriticalChord> {
        if chord.is_degenerate() {
            return Err(Error::DegenerateChord);
        }
        if !is_critical(d, &chord) {
            return Err(Error::InvalidCollection(format!(
                "chord {chord} is not critical for degree {d}"
            )));
        }
        let span = chord.ccw_span() * BigInt::from(d);
        let displacement = span.to_integer().to_u32().expect("1 <= k <= d-1");
        Ok(CriticalChord {
            chord,
            displacement,
        })
    }

    /// The critical chord `(anchor, anchor + k/d)`.
    pub fn spanning(d: u32, displacement: u32, anchor: &Angle) -> CriticalChord {
        let other = anchor.rotate(&Rational::new(
            BigInt::from(displacement),
            BigInt::from(d),
        ));
        CriticalChord {
            chord: Chord::new(anchor.clone(), other),
            displacement,
        }
    }
}

/// The shorter subtended arc length of a chord (degenerate chords have
/// length 0).
pub fn leaf_length(ch: &Chord) -> Rational {
    ch.length()
}

/// The leaf length function: the length of `σ_d(ℓ)` as a function of the
/// length `x` of `ℓ`, namely `min(dx mod 1, 1 − (dx mod 1))`.
pub fn tau(d: u32, x: &Rational) -> Result<Rational> {
    if x.is_negative() || x > &Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::OutOfRange {
            context: "tau",
            value: x.to_string(),
            expected: "[0, 1/2]",
        });
    }
    let scaled = x * BigInt::from(d);
    let m = &scaled - scaled.floor();
    let complement = Rational::one() - &m;
    Ok(m.min(complement))
}

/// Ascending fixed points of `τ_d` in `[0, 1/2]`:
/// `{0} ∪ {j/(d+1)} ∪ {j/(d−1)}` intersected with the interval.
pub fn tau_fixed_points(d: u32) -> Vec<Rational> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut out = vec![Rational::zero()];
    for den in [d + 1, d - 1] {
        if den == 0 {
            continue;
        }
        for j in 1..=den {
            let v = Rational::new(BigInt::from(j), BigInt::from(den));
            if v <= half {
                out.push(v);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Strict linking of endpoints: exactly one endpoint of `c2` lies in the
/// open arc between `c1`'s endpoints. Shared endpoints do not cross, and
/// degenerate chords never cross anything.
pub fn crosses(c1: &Chord, c2: &Chord) -> bool {
    if c1.is_degenerate() || c2.is_degenerate() || c1.shares_endpoint(c2) {
        return false;
    }
    let inside_a = crate::angle::in_arc(&c2.a, &c1.a, &c1.b);
    let inside_b = crate::angle::in_arc(&c2.b, &c1.a, &c1.b);
    inside_a != inside_b
}

/// Endpoint distance between non-crossing chords: with endpoints in circular
/// order `x1 ≤ x2 ≤ y2 ≤ y1` it is `|(x1,x2)| + |(y2,y1)|`; 0 for equal
/// chords. Crossing or degenerate chords are rejected.
pub fn endpoint_distance(c1: &Chord, c2: &Chord) -> Result<Rational> {
    if c1.is_degenerate() || c2.is_degenerate() {
        return Err(Error::DegenerateChord);
    }
    if c1 == c2 {
        return Ok(Rational::zero());
    }
    if crosses(c1, c2) {
        return Err(Error::CrossingChords);
    }
    // c2's endpoints lie in one closed arc of c1; measure the two gaps.
    let side = |p: &Angle, q: &Angle| -> Option<Rational> {
        let span = p.ccw_distance(q);
        let u = p.ccw_distance(&c2.a);
        let v = p.ccw_distance(&c2.b);
        if u <= span && v <= span {
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            Some(lo + (span - hi))
        } else {
            None
        }
    };
    side(&c1.a, &c1.b)
        .or_else(|| side(&c1.b, &c1.a))
        .ok_or(Error::CrossingChords)
}

/// True iff `σ_d` maps both endpoints to one point and the chord is
/// non-degenerate.
pub fn is_critical(d: u32, ch: &Chord) -> bool {
    if ch.is_degenerate() {
        return false;
    }
    (ch.ccw_span() * BigInt::from(d)).is_integer()
}

/// A one-parameter family of critical chords at constant endpoint distance
/// from a reference chord.
///
/// Every member is `(start + t, start + t + displacement/d)` for
/// `t ∈ [0, slack]`, and each is at endpoint distance exactly `slack`
/// from the reference chord and does not cross it.
#[derive(Debug, Clone)]
pub struct CriticalFamily {
    pub d: u32,
    pub displacement: u32,
    pub start: Angle,
    pub slack: Rational,
}

impl CriticalFamily {
    /// The member of the family at parameter `t ∈ [0, slack]`.
    pub fn chord_at(&self, t: &Rational) -> CriticalChord {
        CriticalChord::spanning(self.d, self.displacement, &self.start.rotate(t))
    }
}

/// All placements of non-crossing critical chords relative to `ch`, grouped
/// into constant-distance families: for each displacement `k`, a chord can
/// sit inside either subtended arc or span either arc. Families with
/// negative slack do not exist and are omitted.
pub fn critical_families(d: u32, ch: &Chord) -> Vec<CriticalFamily> {
    let (a, b) = ch.endpoints();
    let s = ch.ccw_span();
    let complement = Rational::one() - &s;
    let mut families = Vec::new();
    for k in 1..d {
        let step = Rational::new(BigInt::from(k), BigInt::from(d));
        let cases = [
            (a.clone(), &s - &step),                          // inside arc (a, b)
            (b.rotate(&(-step.clone())), &step - &s),         // spanning arc (a, b)
            (b.clone(), &complement - &step),                 // inside arc (b, a)
            (a.rotate(&(-step.clone())), &step - &complement) // spanning arc (b, a)
        ];
        for (start, slack) in cases {
            if !slack.is_negative() {
                families.push(CriticalFamily {
                    d,
                    displacement: k,
                    start,
                    slack,
                });
            }
        }
    }
    families
}

/// Minimum endpoint distance from `ch` to any non-crossing critical chord:
/// `min` over `k ∈ {1,…,d−1}` and both subtended arcs `s` of `|s − k/d|`.
/// Critical chords themselves are at distance 0; degenerate chords are
/// rejected.
pub fn distance_to_nearest_critical(d: u32, ch: &Chord) -> Result<Rational> {
    if ch.is_degenerate() {
        return Err(Error::DegenerateChord);
    }
    Ok(critical_families(d, ch)
        .into_iter()
        .map(|f| f.slack)
        .min()
        .expect("d >= 2 yields at least one family"))
}
