//! Side-length and critical-approach analysis of identity-return orbits
//! under `σ_3`.
//!
//! A side is *near critical* when its length lies in the open window
//! `(1/4, 5/12)`, i.e. within 1/12 of the critical length 1/3. At an
//! iterate where two sides are simultaneously near critical, either each
//! side has its own critical chord in its own outer region (two distinct
//! chords: the polygon is wedged between them) or a single critical chord
//! serves both from one side. The two regimes drive which side is longest
//! one step later.

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;

use crate::angle::Angle;
use crate::chord::{endpoint_distance, Chord};
use crate::error::{Error, Result};
use crate::polygon::{Polygon, PolygonOrbit};
use crate::{rat, Rational};

/// Which of the two simultaneous-approach regimes holds at an iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ApproachCase {
    /// Each side approaches its own critical chord in its own outer region.
    TwoChords,
    /// Both sides approach one side of a single critical chord.
    OneChord,
}

/// One iterate at which at least two sides are near critical.
#[derive(Debug, Clone, Serialize)]
pub struct ApproachReport {
    pub iterate: usize,
    /// Side indices (of the base polygon) inside the window.
    pub sides_in_window: Vec<usize>,
    /// The two approaching sides are the two longest at this iterate.
    pub approaching_are_longest: bool,
    pub case: Option<ApproachCase>,
    /// The next iterate's longest side obeys the successor rule for the
    /// classified case.
    pub successor_rule_holds: bool,
}

/// Findings for a pair of sides that share their length at every iterate.
#[derive(Debug, Clone, Serialize)]
pub struct EqualPairReport {
    pub sides: (usize, usize),
    /// Iterates at which both lie in the window (exactly one expected).
    pub joint_window_iterates: Vec<usize>,
    pub unique_joint_approach: bool,
    /// At the joint iterate the pair straddles two distinct critical chords
    /// (and no single chord serves both).
    pub straddles_two_chords: bool,
    pub no_common_chord: bool,
}

/// Full analysis of a `σ_3` identity-return orbit.
#[derive(Debug, Clone, Serialize)]
pub struct Sigma3Analysis {
    pub period: usize,
    pub gon: usize,
    /// No side has length 1/4 or 1/2 at any iterate.
    pub no_fixed_lengths: bool,
    /// First iterate at which each side enters the window.
    pub window_entry: Vec<Option<usize>>,
    /// Every side enters the window within the period.
    pub all_sides_approach: bool,
    pub approaches: Vec<ApproachReport>,
    /// Some iterate has two near-critical sides that are the two longest.
    pub has_qualifying_approach: bool,
    pub equal_pairs: Vec<EqualPairReport>,
    pub successor_rule_ok: bool,
    pub violations: Vec<String>,
}

impl Sigma3Analysis {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn window() -> (Rational, Rational) {
    (rat(1, 4), rat(5, 12))
}

fn in_window(x: &Rational) -> bool {
    let (lo, hi) = window();
    *x > lo && *x < hi
}

/// Minimum endpoint distance from a polygon side to a critical chord placed
/// in the side's own outer region (the subtended arc free of other
/// vertices); `None` when no critical chord fits there.
fn region_distance(outer_arc: &Rational) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for k in 1..3u32 {
        let step = Rational::new(BigInt::from(k), BigInt::from(3));
        if step < *outer_arc {
            let dist = outer_arc - &step;
            best = Some(match best {
                None => dist,
                Some(b) => b.min(dist),
            });
        }
    }
    best
}

/// Is some single critical chord, disjoint from the polygon's hull, within
/// 1/12 of both sides in the endpoint metric?
///
/// Critical chords of `σ_3` are parameterized as `(t, t + 1/3)`. The set of
/// admissible `t` is a finite union of intervals with rational endpoints, so
/// testing all interval endpoints plus midpoints of consecutive candidates
/// decides the question exactly.
fn common_chord_exists(polygon: &Polygon, x: &Chord, y: &Chord) -> bool {
    let third = rat(1, 3);
    let two_thirds = rat(2, 3);
    let tolerance = rat(1, 12);

    let mut candidates: Vec<Rational> = Vec::new();
    // Family boundaries for both sides: chords at constant distance from the
    // side start at these parameters.
    for side in [x, y] {
        for family in crate::chord::critical_families(3, side) {
            let base = if family.displacement == 1 {
                family.start.as_rational().clone()
            } else {
                family.start.as_rational() + &two_thirds
            };
            candidates.push(base.clone());
            candidates.push(base + &family.slack);
        }
    }
    // Hull-gap boundaries: D fits in the open arc (w, w') when t ranges over
    // (w, w' − 1/3).
    let k = polygon.len();
    for i in 0..k {
        let w = polygon.vertices()[i].as_rational().clone();
        let w_next = polygon.vertices()[(i + 1) % k].as_rational().clone();
        candidates.push(w.clone());
        candidates.push(w_next - &third);
    }
    let normalize = |v: Rational| -> Rational {
        let f = v.floor();
        v - f
    };
    let mut ts: Vec<Rational> = candidates.into_iter().map(normalize).collect();
    ts.sort();
    ts.dedup();
    let mut probes = ts.clone();
    for i in 0..ts.len() {
        let a = &ts[i];
        let b = if i + 1 < ts.len() {
            ts[i + 1].clone()
        } else {
            &ts[0] + Rational::one()
        };
        probes.push(normalize((a + b) / BigInt::from(2)));
    }

    let disjoint_from_hull = |d: &Chord| -> bool {
        let (u, v) = d.endpoints();
        (0..k).any(|i| {
            let w = &polygon.vertices()[i];
            let w_next = &polygon.vertices()[(i + 1) % k];
            crate::angle::in_arc(u, w, w_next) && crate::angle::in_arc(v, w, w_next)
        })
    };

    for t in probes {
        let start = Angle::from_rational(t);
        let end = start.rotate(&third);
        let d = Chord::new(start, end);
        let near = |side: &Chord| -> bool {
            matches!(endpoint_distance(side, &d), Ok(dist) if dist < tolerance)
        };
        if near(x) && near(y) && disjoint_from_hull(&d) {
            return true;
        }
    }
    false
}

/// Analyzes an identity-return orbit under `σ_3`:
///
/// - no side length is ever a fixed length (1/4 or 1/2);
/// - every side length enters the window `(1/4, 5/12)` within the period;
/// - some iterate has two near-critical sides that are the two longest,
///   classified as two-chord or one-chord approach;
/// - the next iterate's longest side is the image of the longest remaining
///   side (two-chord case) or of one of the approaching pair (one-chord
///   case);
/// - side pairs of equal length jointly approach exactly once, straddling
///   two distinct critical chords and sharing none.
pub fn analyze_orbit_sigma3(orbit: &PolygonOrbit) -> Result<Sigma3Analysis> {
    if orbit.d != 3 || !orbit.pairwise_disjoint {
        return Err(Error::NotSigma3IdentityReturn);
    }
    let p = orbit.period;
    let base = &orbit.polygons[0];
    let gon = base.len();
    let mut violations: Vec<String> = Vec::new();

    // Side s at iterate j, tracked through σ by identity (order preservation
    // keeps consecutive vertices consecutive).
    let side_at = |s: usize, j: usize| -> Chord {
        let k = base.len();
        let u = base.vertices()[s].sigma_iter(3, j);
        let v = base.vertices()[(s + 1) % k].sigma_iter(3, j);
        Chord::new(u, v)
    };
    let lengths: Vec<Vec<Rational>> = (0..gon)
        .map(|s| (0..p).map(|j| side_at(s, j).length()).collect())
        .collect();

    // (a) fixed lengths never occur.
    let quarter = rat(1, 4);
    let half = rat(1, 2);
    let mut no_fixed_lengths = true;
    for (s, row) in lengths.iter().enumerate() {
        for (j, len) in row.iter().enumerate() {
            if *len == quarter || *len == half {
                no_fixed_lengths = false;
                violations.push(format!("side {s} has fixed length {len} at iterate {j}"));
            }
        }
    }

    // Window entry per side.
    let window_entry: Vec<Option<usize>> = lengths
        .iter()
        .map(|row| row.iter().position(in_window))
        .collect();
    let all_sides_approach = window_entry.iter().all(Option::is_some);
    if !all_sides_approach {
        violations.push("a side never enters the critical window".into());
    }

    // Iterates with at least two near-critical sides.
    let mut approaches = Vec::new();
    let mut has_qualifying_approach = false;
    let mut successor_rule_ok = true;
    for j in 0..p {
        let in_win: Vec<usize> = (0..gon).filter(|&s| in_window(&lengths[s][j])).collect();
        if in_win.len() < 2 {
            continue;
        }
        // Two longest sides at this iterate.
        let mut order: Vec<usize> = (0..gon).collect();
        order.sort_by(|&a, &b| lengths[b][j].cmp(&lengths[a][j]));
        let (first, second) = (order[0], order[1]);
        let approaching_are_longest = in_win.contains(&first)
            && in_win.contains(&second)
            && (gon < 3 || lengths[second][j] > lengths[order[2]][j]);

        let mut case = None;
        let mut successor_rule_holds = true;
        if approaching_are_longest {
            has_qualifying_approach = true;
            let polygon = &orbit.polygons[j];
            // Outer arc of a side: the subtended arc with no other vertices,
            // i.e. the gap between the side's consecutive vertices.
            let outer = |s: usize| -> Rational {
                base.vertices()[s]
                    .sigma_iter(3, j)
                    .ccw_distance(&base.vertices()[(s + 1) % gon].sigma_iter(3, j))
            };
            let tol = rat(1, 12);
            let two_chords = [first, second].iter().all(|&s| {
                region_distance(&outer(s)).map_or(false, |dist| dist < tol)
            });
            if two_chords {
                case = Some(ApproachCase::TwoChords);
            } else if common_chord_exists(polygon, &side_at(first, j), &side_at(second, j)) {
                case = Some(ApproachCase::OneChord);
            } else {
                violations.push(format!(
                    "iterate {j}: approaching pair fits neither the two-chord nor the one-chord regime"
                ));
            }

            // Successor rule at the next iterate (cyclically).
            let nj = (j + 1) % p;
            let max_next = (0..gon)
                .map(|s| &lengths[s][nj])
                .max()
                .expect("gon >= 2")
                .clone();
            let is_longest_next = |s: usize| lengths[s][nj] == max_next;
            successor_rule_holds = match case {
                Some(ApproachCase::TwoChords) => {
                    // C = longest side other than the approaching pair.
                    let rest_longest = order
                        .iter()
                        .copied()
                        .find(|s| *s != first && *s != second);
                    rest_longest.map_or(true, is_longest_next)
                }
                Some(ApproachCase::OneChord) => is_longest_next(first) || is_longest_next(second),
                None => false,
            };
            if !successor_rule_holds {
                successor_rule_ok = false;
                violations.push(format!("iterate {j}: longest-side successor rule fails"));
            }
        }

        approaches.push(ApproachReport {
            iterate: j,
            sides_in_window: in_win,
            approaching_are_longest,
            case,
            successor_rule_holds,
        });
    }
    if !has_qualifying_approach {
        violations.push("no iterate has two near-critical sides that are the two longest".into());
    }

    // Pairs of sides with identical length sequences.
    let mut equal_pairs = Vec::new();
    for a in 0..gon {
        for b in (a + 1)..gon {
            if lengths[a] != lengths[b] {
                continue;
            }
            let joint: Vec<usize> = (0..p)
                .filter(|&j| in_window(&lengths[a][j]) && in_window(&lengths[b][j]))
                .collect();
            let unique = joint.len() == 1;
            let (mut straddles, mut no_common) = (false, false);
            if let Some(&j) = joint.first() {
                let outer = |s: usize| -> Rational {
                    base.vertices()[s]
                        .sigma_iter(3, j)
                        .ccw_distance(&base.vertices()[(s + 1) % gon].sigma_iter(3, j))
                };
                let tol = rat(1, 12);
                straddles = [a, b]
                    .iter()
                    .all(|&s| region_distance(&outer(s)).map_or(false, |dist| dist < tol));
                no_common =
                    !common_chord_exists(&orbit.polygons[j], &side_at(a, j), &side_at(b, j));
            }
            if !unique {
                violations.push(format!(
                    "equal-length sides {a},{b} jointly approach at iterates {joint:?}, not once"
                ));
            }
            if !straddles || !no_common {
                violations.push(format!(
                    "equal-length sides {a},{b} do not straddle two distinct critical chords"
                ));
            }
            equal_pairs.push(EqualPairReport {
                sides: (a, b),
                joint_window_iterates: joint,
                unique_joint_approach: unique,
                straddles_two_chords: straddles,
                no_common_chord: no_common,
            });
        }
    }

    Ok(Sigma3Analysis {
        period: p,
        gon,
        no_fixed_lengths,
        window_entry,
        all_sides_approach,
        approaches,
        has_qualifying_approach,
        equal_pairs,
        successor_rule_ok,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{example_period3, is_identity_return, search_irp, SearchLimits};

    #[test]
    fn period3_example_is_one_chord_case() {
        let orbit = example_period3(3).unwrap();
        let analysis = analyze_orbit_sigma3(&orbit).unwrap();
        assert!(analysis.ok(), "{:?}", analysis.violations);
        assert!(analysis.no_fixed_lengths);
        assert!(analysis.all_sides_approach);
        let qualifying: Vec<&ApproachReport> = analysis
            .approaches
            .iter()
            .filter(|a| a.approaching_are_longest)
            .collect();
        assert_eq!(qualifying.len(), 1);
        assert_eq!(qualifying[0].case, Some(ApproachCase::OneChord));
        assert!(qualifying[0].successor_rule_holds);
    }

    #[test]
    fn some_period4_orbit_exhibits_two_chords() {
        let outcome = search_irp(3, 3, 4, SearchLimits::default());
        assert!(outcome.complete);
        let mut saw_two_chords = false;
        for orbit in &outcome.orbits {
            let analysis = analyze_orbit_sigma3(orbit).unwrap();
            assert!(analysis.ok(), "{:?}", analysis.violations);
            if analysis
                .approaches
                .iter()
                .any(|a| a.case == Some(ApproachCase::TwoChords))
            {
                saw_two_chords = true;
            }
        }
        assert!(saw_two_chords, "period-4 triangles must include a two-chord case");
    }

    #[test]
    fn window_entry_matches_length_window() {
        let orbit = example_period3(3).unwrap();
        let analysis = analyze_orbit_sigma3(&orbit).unwrap();
        // Sides enter (1/4, 5/12) at: s0 at iterate 2 (9/26), s1 at 2
        // (10/26), s2 at 1 (9/26).
        assert_eq!(analysis.window_entry, vec![Some(2), Some(2), Some(1)]);
    }

    #[test]
    fn rejects_non_sigma3_input() {
        let poly = Polygon::new(vec![
            Angle::new(1, 15).unwrap(),
            Angle::new(2, 15).unwrap(),
            Angle::new(3, 15).unwrap(),
        ])
        .unwrap();
        let (_, orbit) = is_identity_return(4, &poly, 2);
        assert!(analyze_orbit_sigma3(&orbit.unwrap()).is_err());
    }
}
