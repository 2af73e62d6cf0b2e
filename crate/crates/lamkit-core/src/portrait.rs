//! Full sibling collections over an image leaf and their portraits.
//!
//! For a non-diameter image chord, the `d` preimages of each endpoint
//! alternate counterclockwise around the circle. A full sibling collection is
//! a non-crossing perfect matching of the two preimage families; cutting the
//! disk along its `d` leaves produces `d+1` complementary regions, each
//! meeting the circle either only in short arcs (a C-region) or only in long
//! arcs (an R-region). The C-regions of degree at least two make up the
//! central strip.

use num::{BigInt, One};
use serde::Serialize;

use crate::angle::Angle;
use crate::chord::{is_critical, Chord, CriticalChord};
use crate::error::{Error, Result};
use crate::Rational;

/// Color class of a complementary region (or of a dual-tree vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RegionKind {
    C,
    R,
}

impl RegionKind {
    pub fn opposite(self) -> RegionKind {
        match self {
            RegionKind::C => RegionKind::R,
            RegionKind::R => RegionKind::C,
        }
    }
}

/// A pairing of the `x`-preimages with the `y`-preimages: `x_i ↔ y_{pairs[i]}`
/// (0-based). Only non-crossing matchings arise from [`Matching::enumerate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    pairs: Vec<usize>,
}

impl Matching {
    pub fn new(pairs: Vec<usize>) -> Matching {
        Matching { pairs }
    }

    pub fn d(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[usize] {
        &self.pairs
    }

    /// Partner of `x_i`.
    pub fn y_of(&self, i: usize) -> usize {
        self.pairs[i]
    }

    /// Partner of `y_j`.
    pub fn x_of(&self, j: usize) -> usize {
        self.pairs.iter().position(|&y| y == j).expect("bijection")
    }

    /// The unique all-short matching `x_i ↔ y_i`.
    pub fn is_identity(&self) -> bool {
        self.pairs.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Point index on the cyclic sequence `x_0 y_0 x_1 y_1 …`: `x_i` sits at
    /// `2i` and `y_j` at `2j+1`.
    fn chord_positions(&self, i: usize) -> (usize, usize) {
        (2 * i, 2 * self.pairs[i] + 1)
    }

    /// Pairwise non-crossing test on the cyclic position sequence.
    pub fn is_non_crossing(&self) -> bool {
        let d = self.d();
        for i in 0..d {
            for j in (i + 1)..d {
                let (a1, b1) = self.chord_positions(i);
                let (a2, b2) = self.chord_positions(j);
                let inside = |p: usize| -> bool {
                    let rel = (p + 2 * d - a1) % (2 * d);
                    let span = (b1 + 2 * d - a1) % (2 * d);
                    rel > 0 && rel < span
                };
                if inside(a2) != inside(b2) {
                    return false;
                }
            }
        }
        true
    }

    /// All non-crossing matchings of the `2d` alternating points, by the
    /// splitting recursion (match the first point, recurse on both sides).
    /// The count is the d-th Catalan number.
    pub fn enumerate(d: u32) -> Vec<Matching> {
        let n = 2 * d as usize;
        let positions: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        let mut pairs = vec![usize::MAX; d as usize];
        fn recurse(
            slice: &[usize],
            pairs: &mut Vec<usize>,
            out: &mut Vec<Matching>,
            remaining: &mut Vec<Vec<usize>>,
        ) {
            if slice.is_empty() {
                if let Some(next) = remaining.pop() {
                    recurse(&next, pairs, out, remaining);
                    remaining.push(next);
                } else {
                    out.push(Matching::new(pairs.clone()));
                }
                return;
            }
            let first = slice[0];
            // Partners sit at odd offsets so both sides stay balanced; the
            // alternation of x and y points makes types match automatically.
            for q in (1..slice.len()).step_by(2) {
                let partner = slice[q];
                let (x, y) = if first % 2 == 0 {
                    (first / 2, partner / 2)
                } else {
                    (partner / 2, first / 2)
                };
                pairs[x] = y;
                remaining.push(slice[q + 1..].to_vec());
                let inside = slice[1..q].to_vec();
                recurse(&inside, pairs, out, remaining);
                remaining.pop();
                pairs[x] = usize::MAX;
            }
        }
        let mut remaining: Vec<Vec<usize>> = Vec::new();
        recurse(&positions, &mut pairs, &mut out, &mut remaining);
        out.sort();
        out
    }

    /// Image under the rotation `x_i ↦ x_{i+by}`, `y_i ↦ y_{i+by}`.
    pub fn rotated(&self, by: usize) -> Matching {
        let d = self.d();
        let mut pairs = vec![0; d];
        for i in 0..d {
            pairs[(i + by) % d] = (self.pairs[i] + by) % d;
        }
        Matching { pairs }
    }

    /// Lexicographically minimal rotation; the canonical representative of
    /// the rotation class.
    pub fn canonical_rotation(&self) -> Matching {
        (0..self.d())
            .map(|r| self.rotated(r))
            .min()
            .expect("d >= 1")
    }
}

/// One complementary region of the matching, described combinatorially.
///
/// Arc `j` joins point `j` to point `j+1 (mod 2d)`; even arcs are the short
/// ones. Leaves are numbered by their `x` endpoint index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombRegion {
    pub kind: RegionKind,
    pub arc_indices: Vec<usize>,
    pub leaf_indices: Vec<usize>,
}

/// Walks region boundaries: from an arc's end point, cross the leaf at that
/// point and continue with the arc starting at the far endpoint. Each cycle
/// of arcs is one region.
pub fn regions_of_matching(m: &Matching) -> Vec<CombRegion> {
    let d = m.d();
    let n = 2 * d;
    // leaf_at[p] = leaf index owning point p; partner[p] = other endpoint.
    let mut leaf_at = vec![0usize; n];
    let mut partner = vec![0usize; n];
    for i in 0..d {
        let (px, py) = m.chord_positions(i);
        leaf_at[px] = i;
        leaf_at[py] = i;
        partner[px] = py;
        partner[py] = px;
    }
    let mut region_of_arc = vec![usize::MAX; n];
    let mut regions = Vec::new();
    for start in 0..n {
        if region_of_arc[start] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let mut arcs = Vec::new();
        let mut leaves = Vec::new();
        let mut arc = start;
        loop {
            region_of_arc[arc] = id;
            arcs.push(arc);
            let endpoint = (arc + 1) % n;
            leaves.push(leaf_at[endpoint]);
            arc = partner[endpoint];
            if arc == start {
                break;
            }
        }
        // Short and long arcs alternate around the circle and a region walk
        // preserves parity, so each region is pure.
        assert!(
            arcs.iter().all(|a| a % 2 == arcs[0] % 2),
            "region mixes short and long arcs"
        );
        let kind = if arcs[0] % 2 == 0 {
            RegionKind::C
        } else {
            RegionKind::R
        };
        regions.push(CombRegion {
            kind,
            arc_indices: arcs,
            leaf_indices: leaves,
        });
    }
    regions
}

/// A preimage endpoint of the image chord, tagged by which image endpoint it
/// maps to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreimagePoint {
    pub angle: Angle,
    /// True for preimages of the image endpoint that starts the short arc.
    pub is_x: bool,
}

fn normalize_image(d: u32, image: &Chord) -> Result<(Angle, Angle, Rational)> {
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    if image.is_degenerate() {
        return Err(Error::DegenerateChord);
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let (a, b) = image.endpoints();
    let span = image.ccw_span();
    if span == half {
        return Err(Error::DiameterImage);
    }
    if span < half {
        Ok((a.clone(), b.clone(), span))
    } else {
        let s = Rational::one() - span;
        Ok((b.clone(), a.clone(), s))
    }
}

/// The `2d` preimage endpoints of a non-diameter image chord, merged
/// counterclockwise starting at the first preimage of the short-arc start;
/// `x`- and `y`-preimages strictly alternate.
pub fn preimage_endpoints(d: u32, image: &Chord) -> Result<Vec<PreimagePoint>> {
    let (x, _, s) = normalize_image(d, image)?;
    let step = Rational::new(BigInt::one(), BigInt::from(d));
    let short = &s / BigInt::from(d);
    let mut points = Vec::with_capacity(2 * d as usize);
    let x0 = Angle::from_rational(x.as_rational() / BigInt::from(d));
    for i in 0..d {
        let xi = x0.rotate(&(step.clone() * BigInt::from(i)));
        let yi = xi.rotate(&short);
        points.push(PreimagePoint {
            angle: xi,
            is_x: true,
        });
        points.push(PreimagePoint {
            angle: yi,
            is_x: false,
        });
    }
    Ok(points)
}

/// A full sibling collection: `d` pairwise disjoint, pairwise non-crossing
/// chords all mapping onto one image chord under `σ_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiblingCollection {
    d: u32,
    image: Chord,
    points: Vec<PreimagePoint>,
    #[serde(skip)]
    matching: Matching,
    leaves: Vec<Chord>,
}

impl SiblingCollection {
    /// Builds the collection selected by a non-crossing matching.
    pub fn from_matching(d: u32, image: &Chord, matching: Matching) -> Result<SiblingCollection> {
        if matching.d() != d as usize {
            return Err(Error::InvalidCollection(format!(
                "matching has {} pairs, expected {}",
                matching.d(),
                d
            )));
        }
        if !matching.is_non_crossing() {
            return Err(Error::InvalidCollection(
                "matching has crossing chords".into(),
            ));
        }
        let points = preimage_endpoints(d, image)?;
        let leaves = (0..d as usize)
            .map(|i| {
                Chord::new(
                    points[2 * i].angle.clone(),
                    points[2 * matching.y_of(i) + 1].angle.clone(),
                )
            })
            .collect();
        Ok(SiblingCollection {
            d,
            image: image.clone(),
            points,
            matching,
            leaves,
        })
    }

    /// Reconstructs a collection from its leaves, validating that they form a
    /// full sibling collection over `image`.
    pub fn from_leaves(d: u32, image: &Chord, leaves: &[Chord]) -> Result<SiblingCollection> {
        let points = preimage_endpoints(d, image)?;
        if leaves.len() != d as usize {
            return Err(Error::InvalidCollection(format!(
                "expected {} leaves, got {}",
                d,
                leaves.len()
            )));
        }
        let mut pairs = vec![usize::MAX; d as usize];
        for leaf in leaves {
            let (a, b) = leaf.endpoints();
            let find = |angle: &Angle| points.iter().position(|p| &p.angle == angle);
            let (pa, pb) = match (find(a), find(b)) {
                (Some(pa), Some(pb)) => (pa, pb),
                _ => {
                    return Err(Error::InvalidCollection(format!(
                        "leaf {leaf} does not join preimage endpoints of {image}"
                    )))
                }
            };
            let (px, py) = if points[pa].is_x { (pa, pb) } else { (pb, pa) };
            if points[px].is_x == points[py].is_x {
                return Err(Error::InvalidCollection(format!(
                    "leaf {leaf} joins two preimages of the same image endpoint"
                )));
            }
            let (i, j) = (px / 2, (py - 1) / 2);
            if pairs[i] != usize::MAX {
                return Err(Error::InvalidCollection(format!(
                    "two leaves share the endpoint {}",
                    points[px].angle
                )));
            }
            pairs[i] = j;
        }
        if pairs.iter().any(|&j| j == usize::MAX) {
            return Err(Error::InvalidCollection(
                "leaves do not cover every preimage endpoint".into(),
            ));
        }
        let matching = Matching::new(pairs);
        if !matching.is_non_crossing() {
            return Err(Error::InvalidCollection("leaves cross".into()));
        }
        SiblingCollection::from_matching(d, image, matching)
    }

    /// Every full sibling collection over `image`: one per non-crossing
    /// matching, Catalan(d) in total.
    pub fn enumerate(d: u32, image: &Chord) -> Result<Vec<SiblingCollection>> {
        Matching::enumerate(d)
            .into_iter()
            .map(|m| SiblingCollection::from_matching(d, image, m))
            .collect()
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn image(&self) -> &Chord {
        &self.image
    }

    pub fn leaves(&self) -> &[Chord] {
        &self.leaves
    }

    pub fn points(&self) -> &[PreimagePoint] {
        &self.points
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    /// Length of the short image arc; every short portrait arc has length
    /// `short_span()/d`.
    pub fn short_span(&self) -> Rational {
        let (_, _, s) = normalize_image(self.d, &self.image).expect("validated on construction");
        s
    }

    /// Length of each long portrait arc, `(1 − short_span)/d`.
    pub fn long_arc(&self) -> Rational {
        (Rational::one() - self.short_span()) / BigInt::from(self.d)
    }

    /// Length of each short portrait arc, `short_span/d`; this is the `η` of
    /// the central strip when one exists.
    pub fn short_arc(&self) -> Rational {
        self.short_span() / BigInt::from(self.d)
    }
}

/// A complementary region with its circle arcs and boundary leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub kind: RegionKind,
    /// Counterclockwise arcs `(start, end)` in boundary-walk order.
    pub arcs: Vec<(Angle, Angle)>,
    pub leaves: Vec<Chord>,
    /// Arc indices into the cyclic point sequence (arc `j` joins points `j`
    /// and `j+1`).
    pub arc_indices: Vec<usize>,
    /// Leaf indices (by `x` endpoint) in boundary-walk order.
    pub leaf_indices: Vec<usize>,
}

impl Region {
    pub fn degree(&self) -> usize {
        self.arcs.len()
    }
}

/// A full sibling collection together with its `d+1` complementary regions.
#[derive(Debug, Clone, Serialize)]
pub struct SiblingPortrait {
    pub collection: SiblingCollection,
    pub regions: Vec<Region>,
    /// For each leaf, the two regions it separates.
    pub leaf_regions: Vec<(usize, usize)>,
}

/// Cuts the disk along the collection's leaves and classifies each region.
///
/// Collections with a leaf whose length is an exact multiple of `1/(2d)` are
/// rejected: such a leaf maps to a diameter and its portrait arcs would be
/// neither short nor long. (They cannot arise from a non-diameter image.)
pub fn build_portrait(coll: &SiblingCollection) -> Result<SiblingPortrait> {
    let d = coll.degree();
    let twice_d = BigInt::from(2 * d);
    for leaf in coll.leaves() {
        if (leaf.length() * &twice_d).is_integer() {
            return Err(Error::BoundaryLeaf {
                d,
                length: leaf.length().to_string(),
            });
        }
    }
    let comb = regions_of_matching(coll.matching());
    let points = coll.points();
    let n = points.len();
    let regions: Vec<Region> = comb
        .iter()
        .map(|r| Region {
            kind: r.kind,
            arcs: r
                .arc_indices
                .iter()
                .map(|&j| (points[j].angle.clone(), points[(j + 1) % n].angle.clone()))
                .collect(),
            leaves: r
                .leaf_indices
                .iter()
                .map(|&i| coll.leaves()[i].clone())
                .collect(),
            arc_indices: r.arc_indices.clone(),
            leaf_indices: r.leaf_indices.clone(),
        })
        .collect();
    let mut leaf_regions = vec![(usize::MAX, usize::MAX); d as usize];
    for (rid, region) in regions.iter().enumerate() {
        for &leaf in &region.leaf_indices {
            if leaf_regions[leaf].0 == usize::MAX {
                leaf_regions[leaf].0 = rid;
            } else {
                leaf_regions[leaf].1 = rid;
            }
        }
    }
    Ok(SiblingPortrait {
        collection: coll.clone(),
        regions,
        leaf_regions,
    })
}

/// The closure of the union of all C-regions of degree at least two.
///
/// Distinct C-regions never touch, so the strip's components are exactly
/// those regions. `η` is the common short-arc length.
#[derive(Debug, Clone, Serialize)]
pub struct CentralStrip {
    pub component_indices: Vec<usize>,
    pub components: Vec<Region>,
    pub degree: usize,
    #[serde(serialize_with = "crate::ser::rational")]
    pub eta: Rational,
}

/// Extracts the central strip; `None` exactly when every leaf is short.
pub fn central_strip(p: &SiblingPortrait) -> Option<CentralStrip> {
    let component_indices: Vec<usize> = p
        .regions
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == RegionKind::C && r.degree() >= 2)
        .map(|(i, _)| i)
        .collect();
    if component_indices.is_empty() {
        return None;
    }
    let components: Vec<Region> = component_indices
        .iter()
        .map(|&i| p.regions[i].clone())
        .collect();
    let degree = components.iter().map(Region::degree).min().unwrap();
    Some(CentralStrip {
        component_indices,
        components,
        degree,
        eta: p.collection.short_arc(),
    })
}

/// Maximum number of pairwise disjoint critical chords a region can contain
/// (`degree − 1`), plus an explicit witness set.
#[derive(Debug, Clone)]
pub struct CriticalCapacity {
    pub max: usize,
    pub witness: Vec<CriticalChord>,
}

/// Witness construction: chords from the region's first arc to each other
/// arc in counterclockwise succession, at strictly increasing offsets.
pub fn max_disjoint_critical_chords(d: u32, region: &Region) -> CriticalCapacity {
    let k = region.degree();
    if k < 2 {
        return CriticalCapacity {
            max: 0,
            witness: Vec::new(),
        };
    }
    // Arcs of one region are translates of each other by multiples of 1/d,
    // so equal offsets into two arcs always span a critical chord. Offsets
    // decrease as the target arc advances, nesting the chords.
    let mut arcs = region.arcs.clone();
    arcs.sort_by(|a, b| a.0.cmp(&b.0));
    let base = &arcs[0].0;
    let arc_len = arcs[0].0.ccw_distance(&arcs[0].1);
    let mut witness = Vec::new();
    for (idx, (lo, _)) in arcs.iter().enumerate().skip(1) {
        let t = &arc_len * BigInt::from(k - idx) / BigInt::from(k);
        let chord = Chord::new(base.rotate(&t), lo.rotate(&t));
        debug_assert!(is_critical(d, &chord));
        witness.push(CriticalChord::new(d, chord).expect("translate offsets are critical"));
    }
    CriticalCapacity {
        max: k - 1,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn angle(n: i64, d: i64) -> Angle {
        Angle::new(n, d).unwrap()
    }

    fn chord(an: i64, ad: i64, bn: i64, bd: i64) -> Chord {
        Chord::new(angle(an, ad), angle(bn, bd))
    }

    /// The generic test image used throughout: short arc 1/(4d), never
    /// putting a leaf length on a multiple of 1/(2d).
    fn generic_image(d: u32) -> Chord {
        chord(1, 8 * d as i64, 3, 8 * d as i64)
    }

    #[test]
    fn preimage_example_d2() {
        let pts = preimage_endpoints(2, &chord(1, 3, 2, 3)).unwrap();
        let want = [
            (angle(1, 6), true),
            (angle(1, 3), false),
            (angle(2, 3), true),
            (angle(5, 6), false),
        ];
        assert_eq!(pts.len(), 4);
        for (p, (a, is_x)) in pts.iter().zip(want.iter()) {
            assert_eq!((&p.angle, p.is_x), (a, *is_x));
        }
    }

    #[test]
    fn preimage_example_d3() {
        let pts = preimage_endpoints(3, &chord(1, 26, 3, 26)).unwrap();
        let xs: Vec<Angle> = pts
            .iter()
            .filter(|p| p.is_x)
            .map(|p| p.angle.clone())
            .collect();
        let ys: Vec<Angle> = pts
            .iter()
            .filter(|p| !p.is_x)
            .map(|p| p.angle.clone())
            .collect();
        assert_eq!(xs, vec![angle(1, 78), angle(27, 78), angle(53, 78)]);
        assert_eq!(ys, vec![angle(1, 26), angle(29, 78), angle(55, 78)]);
        for pair in pts.windows(2) {
            assert!(pair[0].is_x != pair[1].is_x);
        }
    }

    #[test]
    fn preimage_rejects_diameter_and_degenerate() {
        assert_eq!(
            preimage_endpoints(2, &chord(0, 1, 1, 2)),
            Err(Error::DiameterImage)
        );
        assert_eq!(
            preimage_endpoints(2, &Chord::new(angle(1, 3), angle(1, 3))),
            Err(Error::DegenerateChord)
        );
    }

    #[test]
    fn enumeration_counts_are_catalan() {
        let catalan = [1u64, 1, 2, 5, 14, 42, 132, 429];
        for d in 2..=7u32 {
            let matchings = Matching::enumerate(d);
            assert_eq!(matchings.len() as u64, catalan[d as usize], "d={d}");
            let set: std::collections::BTreeSet<_> = matchings.iter().collect();
            assert_eq!(set.len(), matchings.len(), "duplicates at d={d}");
        }
    }

    #[test]
    fn enumeration_matches_brute_force_over_permutations() {
        // Oracle: filter all d! pairings by the pairwise crossing test.
        fn permutations(d: usize) -> Vec<Vec<usize>> {
            if d == 1 {
                return vec![vec![0]];
            }
            let mut out = Vec::new();
            for p in permutations(d - 1) {
                for slot in 0..d {
                    let mut q = p.clone();
                    q.insert(slot, d - 1);
                    out.push(q);
                }
            }
            out
        }
        for d in 2..=4u32 {
            let brute: std::collections::BTreeSet<Matching> = permutations(d as usize)
                .into_iter()
                .map(Matching::new)
                .filter(Matching::is_non_crossing)
                .collect();
            let fast: std::collections::BTreeSet<Matching> =
                Matching::enumerate(d).into_iter().collect();
            assert_eq!(brute, fast, "d={d}");
        }
    }

    #[test]
    fn collections_map_onto_image_and_are_disjoint() {
        for d in 2..=5u32 {
            let image = generic_image(d);
            let colls = SiblingCollection::enumerate(d, &image).unwrap();
            for coll in &colls {
                for leaf in coll.leaves() {
                    assert_eq!(leaf.sigma(d), image);
                }
                for i in 0..coll.leaves().len() {
                    for j in (i + 1)..coll.leaves().len() {
                        let (a, b) = (&coll.leaves()[i], &coll.leaves()[j]);
                        assert!(!crate::chord::crosses(a, b));
                        assert!(!a.shares_endpoint(b));
                    }
                }
            }
        }
    }

    #[test]
    fn portrait_region_count_and_degree_sums() {
        for d in 2..=6u32 {
            let image = generic_image(d);
            for coll in SiblingCollection::enumerate(d, &image).unwrap() {
                let p = build_portrait(&coll).unwrap();
                assert_eq!(p.regions.len(), d as usize + 1);
                let sum: usize = p.regions.iter().map(|r| r.degree() - 1).sum();
                assert_eq!(sum, d as usize - 1);
                for kind in [RegionKind::C, RegionKind::R] {
                    let class_sum: usize = p
                        .regions
                        .iter()
                        .filter(|r| r.kind == kind)
                        .map(Region::degree)
                        .sum();
                    assert_eq!(class_sum, d as usize, "degree sum of {kind:?} regions");
                }
                for &(r1, r2) in &p.leaf_regions {
                    assert_eq!(p.regions[r1].kind, p.regions[r2].kind.opposite());
                }
            }
        }
    }

    #[test]
    fn all_short_d3_portrait_structure() {
        let image = generic_image(3);
        let coll =
            SiblingCollection::from_matching(3, &image, Matching::new(vec![0, 1, 2])).unwrap();
        let p = build_portrait(&coll).unwrap();
        let mut degrees: Vec<(RegionKind, usize)> =
            p.regions.iter().map(|r| (r.kind, r.degree())).collect();
        degrees.sort();
        assert_eq!(
            degrees,
            vec![
                (RegionKind::C, 1),
                (RegionKind::C, 1),
                (RegionKind::C, 1),
                (RegionKind::R, 3)
            ]
        );
        assert!(central_strip(&p).is_none());
    }

    #[test]
    fn long_leaf_d2_portrait_structure() {
        let image = generic_image(2);
        let coll =
            SiblingCollection::from_matching(2, &image, Matching::new(vec![1, 0])).unwrap();
        let p = build_portrait(&coll).unwrap();
        let mut degrees: Vec<(RegionKind, usize)> =
            p.regions.iter().map(|r| (r.kind, r.degree())).collect();
        degrees.sort();
        assert_eq!(
            degrees,
            vec![(RegionKind::C, 2), (RegionKind::R, 1), (RegionKind::R, 1)]
        );
        let strip = central_strip(&p).unwrap();
        assert_eq!(strip.degree, 2);
        assert_eq!(strip.components.len(), 1);
        assert_eq!(strip.eta, coll.short_arc());
    }

    #[test]
    fn symmetric_d3_strip_has_degree_three() {
        let image = generic_image(3);
        let coll =
            SiblingCollection::from_matching(3, &image, Matching::new(vec![2, 0, 1])).unwrap();
        for leaf in coll.leaves() {
            assert!(leaf.length() > rat(1, 6));
        }
        let p = build_portrait(&coll).unwrap();
        let strip = central_strip(&p).unwrap();
        assert_eq!(strip.components.len(), 1);
        assert_eq!(strip.degree, 3);
    }

    #[test]
    fn strip_empty_iff_all_leaves_short() {
        for d in 2..=6u32 {
            let image = generic_image(d);
            let half_step = rat(1, 2 * d as i64);
            for coll in SiblingCollection::enumerate(d, &image).unwrap() {
                let p = build_portrait(&coll).unwrap();
                let all_short = coll.leaves().iter().all(|l| l.length() < half_step);
                assert_eq!(central_strip(&p).is_none(), all_short);
                assert_eq!(all_short, coll.matching().is_identity());
            }
        }
    }

    #[test]
    fn arc_lengths_split_the_image_spans() {
        for d in 2..=5u32 {
            let image = generic_image(d);
            let short = rat(1, 4 * d as i64) / rat(d as i64, 1);
            let long = (rat(1, 1) - rat(1, 4 * d as i64)) / rat(d as i64, 1);
            for coll in SiblingCollection::enumerate(d, &image).unwrap() {
                let p = build_portrait(&coll).unwrap();
                for r in &p.regions {
                    for (start, end) in &r.arcs {
                        let len = start.ccw_distance(end);
                        match r.kind {
                            RegionKind::C => assert_eq!(len, short),
                            RegionKind::R => assert_eq!(len, long),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diameter_image_is_refused() {
        assert!(matches!(
            SiblingCollection::from_matching(2, &chord(0, 1, 1, 2), Matching::new(vec![0, 1])),
            Err(Error::DiameterImage)
        ));
    }

    #[test]
    fn from_leaves_roundtrip() {
        let image = generic_image(3);
        for coll in SiblingCollection::enumerate(3, &image).unwrap() {
            let rebuilt = SiblingCollection::from_leaves(3, &image, coll.leaves()).unwrap();
            assert_eq!(&rebuilt, &coll);
        }
        let bad = vec![chord(0, 1, 1, 3), chord(1, 3, 2, 3), chord(2, 3, 0, 1)];
        assert!(SiblingCollection::from_leaves(3, &image, &bad).is_err());
    }

    #[test]
    fn critical_capacity_witnesses() {
        let image = generic_image(3);
        let coll =
            SiblingCollection::from_matching(3, &image, Matching::new(vec![2, 0, 1])).unwrap();
        let p = build_portrait(&coll).unwrap();
        let strip = central_strip(&p).unwrap();
        let region = &strip.components[0];
        let cap = max_disjoint_critical_chords(3, region);
        assert_eq!(cap.max, 2);
        assert_eq!(cap.witness.len(), 2);
        for (i, c1) in cap.witness.iter().enumerate() {
            for endpoint in [c1.chord.endpoints().0, c1.chord.endpoints().1] {
                assert!(region.arcs.iter().any(|(lo, hi)| {
                    let span = lo.ccw_distance(hi);
                    lo.ccw_distance(endpoint) <= span
                }));
            }
            for c2 in cap.witness.iter().skip(i + 1) {
                assert!(!crate::chord::crosses(&c1.chord, &c2.chord));
                assert!(!c1.chord.shares_endpoint(&c2.chord));
            }
        }
    }

    #[test]
    fn degree_one_and_two_capacities() {
        let image = generic_image(2);
        let coll =
            SiblingCollection::from_matching(2, &image, Matching::new(vec![1, 0])).unwrap();
        let p = build_portrait(&coll).unwrap();
        let terminal = p.regions.iter().find(|r| r.degree() == 1).unwrap();
        assert_eq!(max_disjoint_critical_chords(2, terminal).max, 0);
        let strip = central_strip(&p).unwrap();
        let cap = max_disjoint_critical_chords(2, &strip.components[0]);
        assert_eq!(cap.max, 1);
        assert_eq!(cap.witness.len(), 1);
    }
}
