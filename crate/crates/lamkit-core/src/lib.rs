//! Exact-arithmetic combinatorial dynamics of the angle d-tupling maps
//! `σ_d(t) = d·t (mod 1)` on the circle `R/Z`.
//!
//! Everything here is computed over arbitrary-precision rationals; there is
//! no floating point anywhere in the dynamics. The crate covers:
//!
//! - [`angle`]: circle points as reduced fractions, `σ_d`, d-nary itineraries,
//!   and periodic points built from repeating digit strings.
//! - [`chord`]: chords of the disk, the leaf length function `τ_d`, crossing
//!   tests, critical chords, and the endpoint metric.
//! - [`portrait`]: full sibling collections over an image leaf, their
//!   complementary regions classified C/R, and central strips.
//! - [`tree`]: plane bicolored dual trees, rotation canonicalization, and the
//!   closed-form census `N(d)`.
//! - [`dynamics`]: leaf orbits under `σ_d` and verification of the central
//!   strip re-entry bounds on concrete orbits.
//! - [`polygon`]: identity-return polygons, the bundled example orbits, and
//!   exhaustive bounded searches.
//! - [`analysis`]: side-length and critical-approach analysis of
//!   identity-return orbits under `σ_3`.

pub mod analysis;
pub mod angle;
pub mod chord;
pub mod dynamics;
pub mod error;
pub mod polygon;
pub mod portrait;
pub mod tree;

pub use angle::{arc_length, in_arc, itinerary, periodic_point, sigma, Angle, Itinerary};
pub use chord::{
    crosses, distance_to_nearest_critical, endpoint_distance, is_critical, leaf_length, tau,
    tau_fixed_points, Chord, CriticalChord,
};
pub use error::{Error, Result};

/// Exact rational scalar used for all lengths and distances.
pub type Rational = num::BigRational;

/// Arbitrary-precision integer backing [`Rational`] and [`Angle`].
pub type Int = num::BigInt;

/// Shorthand for building a [`Rational`] from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

/// Serde adapters: exact fractions serialize as `"num/den"`-style strings.
pub mod ser {
    use super::Rational;
    use serde::Serializer;

    pub fn rational<S: Serializer>(
        value: &Rational,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&value.to_string())
    }

    pub fn rational_opt<S: Serializer>(
        value: &Option<Rational>,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match value {
            Some(v) => serializer.serialize_some(&v.to_string()),
            None => serializer.serialize_none(),
        }
    }
}
