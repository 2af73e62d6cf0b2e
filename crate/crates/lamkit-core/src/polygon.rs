//! Identity-return polygons under `σ_d`: the defining predicate, the bundled
//! example orbits, and exhaustive bounded searches.
//!
//! A polygon with vertices of period `p` is identity-return when `σ_d^p`
//! fixes every vertex, the `p` orbit polygons have pairwise disjoint closed
//! convex hulls, and every step preserves the counterclockwise circular
//! order of vertices. For inscribed polygons, hull disjointness is the
//! contiguity of the two vertex sets in their merged circular order; an
//! independent side-crossing formulation is kept alongside as an oracle.

use std::collections::BTreeMap;

use num::{BigInt, One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::angle::{full_itinerary, periodic_point, Angle};
use crate::chord::{crosses, distance_to_nearest_critical, Chord};
use crate::error::{Error, Result};
use crate::Rational;

/// A polygon inscribed in the circle: at least two pairwise distinct
/// vertices in strict counterclockwise order, canonically starting at the
/// smallest angle (so the list is simply sorted).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Polygon {
    vertices: Vec<Angle>,
}

impl Polygon {
    pub fn new(mut vertices: Vec<Angle>) -> Result<Polygon> {
        if vertices.len() < 2 {
            return Err(Error::TooFewVertices);
        }
        vertices.sort();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertices);
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Angle] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Vertexwise image under `σ_d`; fails when two vertices collide.
    pub fn sigma(&self, d: u32) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|v| v.sigma(d)).collect())
    }

    /// Sides as chords between circularly consecutive vertices (a 2-gon has
    /// one side).
    pub fn sides(&self) -> Vec<Chord> {
        let k = self.vertices.len();
        if k == 2 {
            return vec![Chord::new(
                self.vertices[0].clone(),
                self.vertices[1].clone(),
            )];
        }
        (0..k)
            .map(|i| {
                Chord::new(
                    self.vertices[i].clone(),
                    self.vertices[(i + 1) % k].clone(),
                )
            })
            .collect()
    }
}

/// Hull disjointness via merged circular order: two inscribed polygons have
/// disjoint closed hulls iff they share no vertex and one vertex set is
/// contiguous in the merged circular order.
pub fn hulls_disjoint(a: &Polygon, b: &Polygon) -> bool {
    for v in a.vertices() {
        if b.vertices().contains(v) {
            return false;
        }
    }
    let mut merged: Vec<(&Angle, bool)> = a
        .vertices()
        .iter()
        .map(|v| (v, true))
        .chain(b.vertices().iter().map(|v| (v, false)))
        .collect();
    merged.sort_by(|x, y| x.0.cmp(y.0));
    let flips = merged
        .iter()
        .zip(merged.iter().cycle().skip(1))
        .filter(|((_, fa), (_, fb))| fa != fb)
        .count();
    flips == 2
}

/// Independent formulation: disjoint iff no shared vertex and no side of one
/// crosses a side of the other. Equivalent for inscribed polygons; kept as a
/// cross-check oracle.
pub fn hulls_disjoint_by_sides(a: &Polygon, b: &Polygon) -> bool {
    for v in a.vertices() {
        if b.vertices().contains(v) {
            return false;
        }
    }
    for sa in a.sides() {
        for sb in b.sides() {
            if crosses(&sa, &sb) {
                return false;
            }
        }
    }
    true
}

/// Why a polygon fails the identity-return predicate; `None` on success.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// `σ_d^p` does not fix every vertex (or vertices collide en route, or
    /// the stated period is not the least one).
    NotPeriodic,
    /// `σ_d^p` returns the polygon setwise but permutes the vertices.
    RotatedReturn,
    /// Two orbit polygons have intersecting hulls.
    OrbitOverlap,
    /// Some step scrambles the circular order of the vertices.
    OrderReversed,
    None,
}

/// Outcome of the identity-return test.
#[derive(Debug, Clone, Serialize)]
pub struct IrpVerdict {
    pub is_identity_return: bool,
    pub reason: FailureReason,
    pub detail: Option<String>,
}

impl IrpVerdict {
    fn fail(reason: FailureReason, detail: String) -> IrpVerdict {
        IrpVerdict {
            is_identity_return: false,
            reason,
            detail: Some(detail),
        }
    }
}

/// A verified identity-return orbit: the `p` polygons with their step
/// diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct PolygonOrbit {
    pub d: u32,
    pub period: usize,
    pub polygons: Vec<Polygon>,
    pub order_preserved: Vec<bool>,
    pub pairwise_disjoint: bool,
}

impl PolygonOrbit {
    /// Canonical representative: the lexicographically least polygon of the
    /// orbit.
    pub fn canonical_polygon(&self) -> &Polygon {
        self.polygons.iter().min().expect("period >= 1")
    }
}

/// Whether each `σ_d` step preserves the counterclockwise circular order:
/// the image sequence of the sorted vertex list must have exactly one
/// cyclic descent.
fn step_preserves_order(d: u32, polygon: &Polygon) -> bool {
    let images: Vec<Angle> = polygon.vertices().iter().map(|v| v.sigma(d)).collect();
    let k = images.len();
    if k == 2 {
        return images[0] != images[1];
    }
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != k {
        return false;
    }
    let descents = (0..k)
        .filter(|&i| images[(i + 1) % k] < images[i])
        .count();
    descents == 1
}

/// Options for the identity-return predicate. The order-preservation clause
/// can be dropped to study the bare return definition on its own.
#[derive(Debug, Clone, Copy)]
pub struct IrpOptions {
    pub require_order_preservation: bool,
}

impl Default for IrpOptions {
    fn default() -> Self {
        IrpOptions {
            require_order_preservation: true,
        }
    }
}

/// Identity-return test for `polygon` at period `p`, with the full orbit on
/// success.
pub fn is_identity_return(d: u32, polygon: &Polygon, p: usize) -> (IrpVerdict, Option<PolygonOrbit>) {
    is_identity_return_with(d, polygon, p, IrpOptions::default())
}

pub fn is_identity_return_with(
    d: u32,
    polygon: &Polygon,
    p: usize,
    options: IrpOptions,
) -> (IrpVerdict, Option<PolygonOrbit>) {
    assert!(p >= 1, "period must be positive");

    // Iterate vertexwise, watching for collisions (degenerate images).
    let mut orbit_vertices: Vec<Vec<Angle>> = vec![polygon.vertices().to_vec()];
    for j in 1..=p {
        let next: Vec<Angle> = orbit_vertices[j - 1].iter().map(|v| v.sigma(d)).collect();
        let mut sorted = next.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != next.len() {
            return (
                IrpVerdict::fail(
                    FailureReason::NotPeriodic,
                    format!("vertices collide at iterate {j}"),
                ),
                None,
            );
        }
        orbit_vertices.push(next);
    }

    // σ^p must fix every vertex; setwise return with a permutation is a
    // rotated return.
    let start = &orbit_vertices[0];
    let end = &orbit_vertices[p];
    if start != &{
        let mut s = end.clone();
        s.sort();
        s
    } {
        return (
            IrpVerdict::fail(
                FailureReason::NotPeriodic,
                format!("sigma^{p} does not return the vertex set"),
            ),
            None,
        );
    }
    if start != end {
        return (
            IrpVerdict::fail(
                FailureReason::RotatedReturn,
                format!("sigma^{p} permutes the vertices nontrivially"),
            ),
            None,
        );
    }

    let polygons: Vec<Polygon> = (0..p)
        .map(|j| Polygon::new(orbit_vertices[j].clone()).expect("collisions ruled out"))
        .collect();

    // Order preservation at every step (the orbit closes, so checking
    // polygons 0..p covers the return step too).
    let order_preserved: Vec<bool> = polygons.iter().map(|q| step_preserves_order(d, q)).collect();
    if options.require_order_preservation {
        if let Some(step) = order_preserved.iter().position(|ok| !ok) {
            return (
                IrpVerdict::fail(
                    FailureReason::OrderReversed,
                    format!("circular order is not preserved at step {step}"),
                ),
                None,
            );
        }
    }

    // Pairwise hull disjointness; equal polygons (period not least) land
    // here as overlaps.
    for i in 0..p {
        for j in (i + 1)..p {
            if !hulls_disjoint(&polygons[i], &polygons[j]) {
                return (
                    IrpVerdict::fail(
                        FailureReason::OrbitOverlap,
                        format!("hulls of iterates {i} and {j} intersect"),
                    ),
                    None,
                );
            }
        }
    }

    let orbit = PolygonOrbit {
        d,
        period: p,
        polygons,
        order_preserved,
        pairwise_disjoint: true,
    };
    (
        IrpVerdict {
            is_identity_return: true,
            reason: FailureReason::None,
            detail: None,
        },
        Some(orbit),
    )
}

/// The period-3 identity-return d-gon with vertices
/// `{(001), (002), …, (00(d−1)), ((d−1)(d−1)0)}` in d-nary expansion,
/// verified on construction. Exists for every `d ≥ 3`.
pub fn example_period3(d: u32) -> Result<PolygonOrbit> {
    if d < 3 {
        return Err(Error::DegreeTooSmall(d));
    }
    let mut vertices = Vec::new();
    for j in 1..d {
        vertices.push(periodic_point(d, &[0, 0, j])?);
    }
    vertices.push(periodic_point(d, &[d - 1, d - 1, 0])?);
    let polygon = Polygon::new(vertices)?;
    let (verdict, orbit) = is_identity_return(d, &polygon, 3);
    orbit.ok_or_else(|| {
        Error::InvalidCollection(format!(
            "period-3 example failed verification: {:?}",
            verdict.reason
        ))
    })
}

/// The period-2 identity-return (d−1)-gon with vertices
/// `{(01), (02), …, (0(d−1))}`; exists for every `d > 3`.
pub fn example_period2(d: u32) -> Result<PolygonOrbit> {
    if d <= 3 {
        return Err(Error::DegreeTooSmall(d));
    }
    let mut vertices = Vec::new();
    for j in 1..d {
        vertices.push(periodic_point(d, &[0, j])?);
    }
    let polygon = Polygon::new(vertices)?;
    let (verdict, orbit) = is_identity_return(d, &polygon, 2);
    orbit.ok_or_else(|| {
        Error::InvalidCollection(format!(
            "period-2 example failed verification: {:?}",
            verdict.reason
        ))
    })
}

/// Analysis of the `σ_4` period-3 quadrilateral `{132, 032, 022, 200}`
/// (repeating blocks): the side `(022)(200)` stays at least 1/20 from every
/// critical chord across the whole orbit.
#[derive(Debug, Clone, Serialize)]
pub struct Sigma4QuadReport {
    pub orbit: PolygonOrbit,
    pub tracked_side: Chord,
    #[serde(serialize_with = "crate::ser::rational")]
    pub min_critical_distance: Rational,
    /// `min_critical_distance ≥ 1/20`.
    pub stays_far: bool,
}

pub fn example_sigma4_quadrilateral() -> Result<Sigma4QuadReport> {
    let digits: [[u32; 3]; 4] = [[1, 3, 2], [0, 3, 2], [0, 2, 2], [2, 0, 0]];
    let vertices: Vec<Angle> = digits
        .iter()
        .map(|w| periodic_point(4, w))
        .collect::<Result<_>>()?;
    let polygon = Polygon::new(vertices)?;
    let (verdict, orbit) = is_identity_return(4, &polygon, 3);
    let orbit = orbit.ok_or_else(|| {
        Error::InvalidCollection(format!(
            "sigma_4 quadrilateral failed verification: {:?}",
            verdict.reason
        ))
    })?;
    let side = Chord::new(periodic_point(4, &[0, 2, 2])?, periodic_point(4, &[2, 0, 0])?);
    let mut tracked = side.clone();
    let mut min_dist: Option<Rational> = None;
    for _ in 0..3 {
        let dist = distance_to_nearest_critical(4, &tracked)?;
        min_dist = Some(match min_dist {
            None => dist,
            Some(m) => m.min(dist),
        });
        tracked = tracked.sigma(4);
    }
    let min_critical_distance = min_dist.expect("three iterates");
    let stays_far = min_critical_distance >= crate::rat(1, 20);
    Ok(Sigma4QuadReport {
        orbit,
        tracked_side: side,
        min_critical_distance,
        stays_far,
    })
}

/// Budget guards for the exhaustive search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SearchLimits {
    /// Upper bound on `d^p − 1`, the size of the candidate point set.
    pub max_points: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_points: 200_000 }
    }
}

/// Result of a search; `complete` is false only when a budget was exceeded,
/// and then `incomplete_reason` says which.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub d: u32,
    pub gon: (usize, usize),
    pub period: usize,
    pub orbits: Vec<PolygonOrbit>,
    pub complete: bool,
    pub incomplete_reason: Option<String>,
}

/// All identity-return k-gon orbits of exact period `p` for `k` in the given
/// range, complete and duplicate-free up to orbit equivalence (orbits are
/// listed by their least polygon).
///
/// Vertices are drawn from the `d^p − 1` points of period dividing `p`;
/// only points of exact period `p` can appear (a vertex of smaller period
/// would lie on two orbit polygons at once). The DFS adds vertices in
/// increasing circular order and prunes on two necessary conditions:
/// partial image order and pairwise partial-hull disjointness.
pub fn search_irp_range(
    d: u32,
    k_min: usize,
    k_max: usize,
    p: usize,
    limits: SearchLimits,
) -> SearchOutcome {
    assert!(d >= 2 && p >= 1 && k_min >= 2 && k_min <= k_max);
    let incomplete = |reason: String| SearchOutcome {
        d,
        gon: (k_min, k_max),
        period: p,
        orbits: Vec::new(),
        complete: false,
        incomplete_reason: Some(reason),
    };
    let modulus = match (d as u64).checked_pow(p as u32) {
        Some(m) => m - 1,
        None => return incomplete("d^p overflows the point budget".into()),
    };
    if modulus > limits.max_points {
        return incomplete(format!(
            "d^p - 1 = {modulus} exceeds the configured budget {}",
            limits.max_points
        ));
    }

    // Points of exact period p under n -> d·n (mod d^p − 1).
    let divisors: Vec<usize> = (1..p).filter(|q| p % q == 0).collect();
    let shift = |n: u64, steps: usize| -> u64 {
        let mut v = n as u128;
        for _ in 0..steps {
            v = (v * d as u128) % modulus as u128;
        }
        v as u64
    };
    let candidates: Vec<u64> = (0..modulus)
        .filter(|&n| divisors.iter().all(|&q| shift(n, q) != n))
        .collect();

    // Full forward orbit rows for every candidate.
    let mut orbit_row: std::collections::HashMap<u64, Vec<u64>> = Default::default();
    for &n in &candidates {
        let mut row = Vec::with_capacity(p);
        let mut v = n;
        for _ in 0..p {
            row.push(v);
            v = shift(v, 1);
        }
        orbit_row.insert(n, row);
    }

    struct Ctx<'a> {
        d: u32,
        p: usize,
        k_min: usize,
        k_max: usize,
        modulus: u64,
        candidates: &'a [u64],
        rows: &'a std::collections::HashMap<u64, Vec<u64>>,
    }

    /// Exactly one cyclic descent: the image tuple of an increasing vertex
    /// tuple is in counterclockwise order.
    fn cyclic_ok(seq: &[u64]) -> bool {
        if seq.len() < 3 {
            return true;
        }
        let descents = (0..seq.len())
            .filter(|&i| seq[(i + 1) % seq.len()] < seq[i])
            .count();
        descents <= 1
    }

    /// Contiguity of two disjoint increasing sets in merged circular order.
    fn disjoint_sets(a: &[u64], b: &[u64]) -> bool {
        let mut merged: Vec<(u64, bool)> = a
            .iter()
            .map(|&v| (v, true))
            .chain(b.iter().map(|&v| (v, false)))
            .collect();
        merged.sort();
        for w in merged.windows(2) {
            if w[0].0 == w[1].0 {
                return false;
            }
        }
        let flips = (0..merged.len())
            .filter(|&i| merged[i].1 != merged[(i + 1) % merged.len()].1)
            .count();
        flips == 2
    }

    fn feasible(ctx: &Ctx, chosen: &[u64]) -> bool {
        // Sorted images of the chosen set at every step.
        let mut steps: Vec<Vec<u64>> = Vec::with_capacity(ctx.p);
        for j in 0..ctx.p {
            let row: Vec<u64> = chosen.iter().map(|v| ctx.rows[v][j]).collect();
            steps.push(row);
        }
        for j in 0..ctx.p {
            if !cyclic_ok(&steps[j]) {
                return false;
            }
        }
        for i in 0..ctx.p {
            for j in (i + 1)..ctx.p {
                let mut a = steps[i].clone();
                let mut b = steps[j].clone();
                a.sort();
                b.sort();
                if !disjoint_sets(&a, &b) {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(ctx: &Ctx, chosen: &mut Vec<u64>, next_idx: usize, found: &mut Vec<Vec<u64>>) {
        if chosen.len() >= ctx.k_min {
            found.push(chosen.clone());
        }
        if chosen.len() == ctx.k_max {
            return;
        }
        for idx in next_idx..ctx.candidates.len() {
            let v = ctx.candidates[idx];
            chosen.push(v);
            if feasible(ctx, chosen) {
                dfs(ctx, chosen, idx + 1, found);
            }
            chosen.pop();
        }
    }

    let ctx = Ctx {
        d,
        p,
        k_min,
        k_max,
        modulus,
        candidates: &candidates,
        rows: &orbit_row,
    };

    // First-vertex subtrees are independent; results are merged in index
    // order so the outcome is schedule-independent.
    let found: Vec<Vec<u64>> = (0..candidates.len())
        .into_par_iter()
        .map(|first| {
            let mut local = Vec::new();
            let mut chosen = vec![candidates[first]];
            if feasible(&ctx, &chosen) {
                dfs(&ctx, &mut chosen, first + 1, &mut local);
            }
            local
        })
        .reduce(Vec::new, |mut acc, mut v| {
            acc.append(&mut v);
            acc
        });

    // Convert survivors to polygons, run the full predicate, and dedupe by
    // the orbit's least polygon.
    let big_modulus = BigInt::from(modulus);
    let mut orbits: BTreeMap<Polygon, PolygonOrbit> = BTreeMap::new();
    for nums in found {
        let vertices: Vec<Angle> = nums
            .iter()
            .map(|&n| {
                Angle::from_big(BigInt::from(n), big_modulus.clone()).expect("modulus nonzero")
            })
            .collect();
        let polygon = match Polygon::new(vertices) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let (verdict, orbit) = is_identity_return(d, &polygon, p);
        if let (true, Some(orbit)) = (verdict.is_identity_return, orbit) {
            let key = orbit.canonical_polygon().clone();
            orbits.entry(key).or_insert(orbit);
        }
    }

    SearchOutcome {
        d,
        gon: (k_min, k_max),
        period: p,
        orbits: orbits.into_values().collect(),
        complete: true,
        incomplete_reason: None,
    }
}

/// Exhaustive search for identity-return `k`-gon orbits of exact period `p`.
pub fn search_irp(d: u32, k: usize, p: usize, limits: SearchLimits) -> SearchOutcome {
    search_irp_range(d, k, k, p, limits)
}

/// Complete check that no period-2 identity-return `k`-gon exists for
/// `σ_d`: exhaustive over the `d²−1` points of period dividing 2.
pub fn verify_no_period2(d: u32, k: usize) -> bool {
    let outcome = search_irp(d, k, 2, SearchLimits::default());
    assert!(outcome.complete, "period-2 search must be exhaustive");
    outcome.orbits.is_empty()
}

/// Vertex itineraries of an orbit polygon, for reports.
pub fn orbit_itineraries(orbit: &PolygonOrbit) -> Vec<String> {
    orbit
        .polygons[0]
        .vertices()
        .iter()
        .map(|v| full_itinerary(orbit.d, v).to_string())
        .collect()
}

/// Per-iterate side lengths of an orbit, for reports.
pub fn orbit_side_lengths(orbit: &PolygonOrbit) -> Vec<Vec<Rational>> {
    orbit
        .polygons
        .iter()
        .map(|p| p.sides().iter().map(Chord::length).collect())
        .collect()
}
