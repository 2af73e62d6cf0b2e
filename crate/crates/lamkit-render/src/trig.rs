//! Deterministic sine/cosine of `2π·(rational turns)`.
//!
//! Range-reduces exactly in rational arithmetic to an octant, converts the
//! small remainder to `f64`, and evaluates a fixed-order Maclaurin series.
//! No platform libm is involved, so outputs are bit-identical everywhere.

use lamkit_core::{rat, Rational};
use num::ToPrimitive;

const TWO_PI: f64 = 6.283185307179586;

/// Maclaurin series with a fixed term count; |z| ≤ π/4 keeps the truncation
/// error far below the 6-decimal quantization used by the renderers.
fn cos_small(z: f64) -> f64 {
    let z2 = z * z;
    let mut acc = 1.0_f64;
    let mut term = 1.0_f64;
    let mut sign = 1.0_f64;
    let mut k = 0.0_f64;
    for _ in 0..10 {
        term *= z2 / ((k + 1.0) * (k + 2.0));
        sign = -sign;
        acc += sign * term;
        k += 2.0;
    }
    acc
}

fn sin_small(z: f64) -> f64 {
    let z2 = z * z;
    let mut acc = z;
    let mut term = z;
    let mut sign = 1.0_f64;
    let mut k = 1.0_f64;
    for _ in 0..10 {
        term *= z2 / ((k + 1.0) * (k + 2.0));
        sign = -sign;
        acc += sign * term;
        k += 2.0;
    }
    acc
}

/// `(cos, sin)` of `2π·turns` for an exact number of turns.
pub fn sincos_turns(turns: &Rational) -> (f64, f64) {
    // Reduce mod 1 exactly, then split into an octant index and a remainder
    // in [0, 1/8].
    let wrapped = turns - turns.floor();
    let eighth = rat(1, 8);
    let octant = (&wrapped / &eighth).floor();
    let octant_idx = octant.to_integer().to_u8().unwrap_or(0) % 8;
    let rem = &wrapped - &eighth * octant;
    // Fold the octant remainder: use the distance to the nearest axis.
    let (use_upper, frac) = if octant_idx % 2 == 0 {
        (false, rem)
    } else {
        (true, eighth - rem)
    };
    let z = TWO_PI * frac.to_f64().unwrap_or(0.0);
    let (c, s) = (cos_small(z), sin_small(z));
    // Move (c, s) from the folded position to the right octant.
    let quarter = octant_idx / 2;
    let (bc, bs) = if use_upper {
        // Reflected across the quarter's diagonal: swap roles.
        (s, c)
    } else {
        (c, s)
    };
    match quarter {
        0 => (bc, bs),
        1 => (-bs, bc),
        2 => (-bc, -bs),
        _ => (bs, -bc),
    }
}

pub fn cos_turns(turns: &Rational) -> f64 {
    sincos_turns(turns).0
}

pub fn sin_turns(turns: &Rational) -> f64 {
    sincos_turns(turns).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinal_points_are_exactish() {
        let cases = [
            (rat(0, 1), (1.0, 0.0)),
            (rat(1, 4), (0.0, 1.0)),
            (rat(1, 2), (-1.0, 0.0)),
            (rat(3, 4), (0.0, -1.0)),
        ];
        for (turns, (c, s)) in cases {
            let (gc, gs) = sincos_turns(&turns);
            assert!((gc - c).abs() < 1e-12, "cos at {turns}");
            assert!((gs - s).abs() < 1e-12, "sin at {turns}");
        }
    }

    #[test]
    fn agrees_with_std_trig() {
        for n in 0..97i64 {
            let turns = rat(n, 97);
            let (c, s) = sincos_turns(&turns);
            let theta = 2.0 * std::f64::consts::PI * (n as f64 / 97.0);
            assert!((c - theta.cos()).abs() < 1e-9, "cos at {turns}");
            assert!((s - theta.sin()).abs() < 1e-9, "sin at {turns}");
        }
    }

    #[test]
    fn pythagorean_identity() {
        for n in 0..50i64 {
            let (c, s) = sincos_turns(&rat(n, 50));
            assert!((c * c + s * s - 1.0).abs() < 1e-12);
        }
    }
}
