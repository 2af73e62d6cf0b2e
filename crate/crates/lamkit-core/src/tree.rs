//! Plane bicolored trees dual to sibling portraits: enumeration up to
//! rotation, canonical codes, the closed-form count `N(d)`, and the
//! portrait ↔ tree bijection in both directions.

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::chord::Chord;
use crate::error::{Error, Result};
use crate::portrait::{
    build_portrait, regions_of_matching, Matching, RegionKind, SiblingCollection,
    SiblingPortrait,
};

/// A tree with C/R vertex colors, no monochromatic edge, and a cyclic order
/// of edges at each vertex (a planar embedding).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneBicoloredTree {
    colors: Vec<RegionKind>,
    /// Edge ids around each vertex, counterclockwise.
    rotations: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

/// Rotation-invariant certificate: starting vertex color plus the balanced
/// parenthesis word of the contour walk, minimized over all starting
/// edge-sides.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalCode(pub String);

impl PlaneBicoloredTree {
    pub fn new(
        colors: Vec<RegionKind>,
        rotations: Vec<Vec<usize>>,
        edges: Vec<(usize, usize)>,
    ) -> PlaneBicoloredTree {
        PlaneBicoloredTree {
            colors,
            rotations,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn colors(&self) -> &[RegionKind] {
        &self.colors
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    fn other(&self, edge: usize, v: usize) -> usize {
        let (a, b) = self.edges[edge];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Next dart of the contour walk: after running `edge` into its far
    /// vertex, leave along the following edge in that vertex's rotation.
    fn next_dart(&self, from: usize, edge: usize) -> (usize, usize) {
        let v = self.other(edge, from);
        let idx = self.rotations[v]
            .iter()
            .position(|&e| e == edge)
            .expect("edge incident to vertex");
        let next = self.rotations[v][(idx + 1) % self.rotations[v].len()];
        (v, next)
    }

    /// Contour walk of all `2·edges` darts starting from `(vertex, edge)`.
    fn contour(&self, start: (usize, usize)) -> Vec<(usize, usize)> {
        let mut darts = Vec::with_capacity(2 * self.edge_count());
        let mut dart = start;
        loop {
            darts.push(dart);
            dart = self.next_dart(dart.0, dart.1);
            if dart == start {
                break;
            }
        }
        darts
    }

    fn code_from(&self, start: (usize, usize)) -> String {
        let mut out = String::with_capacity(2 * self.edge_count() + 1);
        out.push(match self.colors[start.0] {
            RegionKind::C => 'C',
            RegionKind::R => 'R',
        });
        let mut open = vec![false; self.edge_count()];
        for (_, edge) in self.contour(start) {
            if open[edge] {
                out.push(')');
            } else {
                open[edge] = true;
                out.push('(');
            }
        }
        out
    }

    /// Lexicographically minimal contour code over all starting darts; equal
    /// exactly for trees differing by a rotation of the plane.
    pub fn canonical_code(&self) -> CanonicalCode {
        let mut best: Option<String> = None;
        for v in 0..self.vertex_count() {
            for &e in &self.rotations[v] {
                let code = self.code_from((v, e));
                if best.as_ref().map_or(true, |b| code < *b) {
                    best = Some(code);
                }
            }
        }
        CanonicalCode(best.expect("tree has at least one edge"))
    }

    /// Rebuilds a tree from a contour code. The result reproduces the code
    /// exactly when the code is canonical.
    pub fn from_code(code: &CanonicalCode) -> Result<PlaneBicoloredTree> {
        let text = &code.0;
        let bad = || Error::BadTreeCode(text.clone());
        let mut chars = text.chars();
        let root_color = match chars.next() {
            Some('C') => RegionKind::C,
            Some('R') => RegionKind::R,
            _ => return Err(bad()),
        };
        let mut colors = vec![root_color];
        let mut rotations: Vec<Vec<usize>> = vec![Vec::new()];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut stack: Vec<usize> = vec![0];
        for c in chars {
            let &current = stack.last().ok_or_else(bad)?;
            match c {
                '(' => {
                    let child = colors.len();
                    colors.push(colors[current].opposite());
                    let edge = edges.len();
                    edges.push((current, child));
                    rotations[current].push(edge);
                    // The entering edge leads the child's rotation so the
                    // walk resumes with the child's own subtrees.
                    rotations.push(vec![edge]);
                    stack.push(child);
                }
                ')' => {
                    stack.pop().ok_or_else(bad)?;
                    if stack.is_empty() {
                        return Err(bad());
                    }
                }
                _ => return Err(bad()),
            }
        }
        if stack != vec![0] {
            return Err(bad());
        }
        if edges.is_empty() {
            return Err(bad());
        }
        Ok(PlaneBicoloredTree {
            colors,
            rotations,
            edges,
        })
    }

    /// Structural sanity: connected, acyclic, properly bicolored.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        if self.edge_count() + 1 != n {
            return Err(Error::BadTreeCode("edge count != vertices - 1".into()));
        }
        for &(a, b) in &self.edges {
            if self.colors[a] == self.colors[b] {
                return Err(Error::BadTreeCode("monochromatic edge".into()));
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.rotations[v] {
                let w = self.other(e, v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::BadTreeCode("disconnected".into()));
        }
        Ok(())
    }
}

/// The bicolored dual tree of a portrait: one vertex per region, one edge per
/// leaf, edges ordered around each vertex by the region's boundary walk.
pub fn dual_tree(p: &SiblingPortrait) -> PlaneBicoloredTree {
    let colors: Vec<RegionKind> = p.regions.iter().map(|r| r.kind).collect();
    let rotations: Vec<Vec<usize>> = p.regions.iter().map(|r| r.leaf_indices.clone()).collect();
    let edges: Vec<(usize, usize)> = p.leaf_regions.clone();
    PlaneBicoloredTree::new(colors, rotations, edges)
}

/// Dual tree straight from a matching, with no geometry attached.
pub fn dual_tree_of_matching(m: &Matching) -> PlaneBicoloredTree {
    let regions = regions_of_matching(m);
    let colors: Vec<RegionKind> = regions.iter().map(|r| r.kind).collect();
    let rotations: Vec<Vec<usize>> = regions.iter().map(|r| r.leaf_indices.clone()).collect();
    let mut edges = vec![(usize::MAX, usize::MAX); m.d()];
    for (rid, region) in regions.iter().enumerate() {
        for &leaf in &region.leaf_indices {
            if edges[leaf].0 == usize::MAX {
                edges[leaf].0 = rid;
            } else {
                edges[leaf].1 = rid;
            }
        }
    }
    PlaneBicoloredTree::new(colors, rotations, edges)
}

/// Euler's totient by trial division; inputs stay tiny here.
fn totient(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// The d-th Catalan number `C(2d, d)/(d+1)`.
pub fn catalan(d: u32) -> BigInt {
    binomial(2 * d as u64, d as u64) / BigInt::from(d + 1)
}

/// The sum `C(2d,d)/(d+1) + Σ_{n|d, n<d} φ(d/n)·C(2n,n)` before division
/// by `d`; always divisible by `d`.
pub fn count_formula_numerator(d: u32) -> BigInt {
    let mut total = catalan(d);
    for n in 1..d {
        if d % n == 0 {
            total += BigInt::from(totient(d / n)) * binomial(2 * n as u64, n as u64);
        }
    }
    total
}

/// Number of plane bicolored trees with `d` edges up to rotation, equally the
/// number of full sibling collections over a fixed non-diameter leaf up to
/// rotational symmetry.
pub fn count_formula(d: u32) -> BigInt {
    let total = count_formula_numerator(d);
    let (q, r) = total.div_rem(&BigInt::from(d));
    debug_assert!(r.is_zero(), "count formula numerator not divisible by d");
    q
}

/// Complete, duplicate-free list of rotation classes of plane bicolored trees
/// with `d` edges, as canonical codes in ascending order.
pub fn enumerate_trees(d: u32) -> Vec<CanonicalCode> {
    let set: BTreeSet<CanonicalCode> = Matching::enumerate(d)
        .into_iter()
        .map(|m| dual_tree_of_matching(&m).canonical_code())
        .collect();
    set.into_iter().collect()
}

/// Realizes a tree as the sibling portrait over `image` whose dual tree it
/// is: label the contour's edge-sides alternately `x_1 y_1 x_2 y_2 …`
/// starting where the pivot vertex is a C-region, then join `x_i` to `y_j`
/// when they are the two sides of one edge.
pub fn tree_to_portrait(t: &PlaneBicoloredTree, image: &Chord) -> Result<SiblingPortrait> {
    t.validate()?;
    let d = t.edge_count();
    let start = (0..t.vertex_count())
        .flat_map(|v| t.rotations()[v].iter().map(move |&e| (v, e)))
        .find(|&(v, e)| t.colors()[t.other(e, v)] == RegionKind::C)
        .expect("bicolored tree has a C vertex");
    let contour = t.contour(start);
    // Positions 0, 2, 4, … are x-sides; each edge has one x-side and one
    // y-side because contour pivot colors alternate.
    let mut x_of_edge = vec![usize::MAX; d];
    let mut y_of_edge = vec![usize::MAX; d];
    for (pos, &(_, edge)) in contour.iter().enumerate() {
        if pos % 2 == 0 {
            x_of_edge[edge] = pos / 2;
        } else {
            y_of_edge[edge] = pos / 2;
        }
    }
    let mut pairs = vec![usize::MAX; d];
    for e in 0..d {
        assert!(
            x_of_edge[e] != usize::MAX && y_of_edge[e] != usize::MAX,
            "contour must give every edge one side of each parity"
        );
        pairs[x_of_edge[e]] = y_of_edge[e];
    }
    let coll = SiblingCollection::from_matching(d as u32, image, Matching::new(pairs))?;
    build_portrait(&coll)
}

/// Cross-check report for one degree: the exhaustive enumeration against the
/// closed-form and corollary counts.
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub d: u32,
    /// Catalan(d), the number of full sibling collections.
    pub total_collections: u64,
    /// Rotation classes from canonical representatives.
    pub rotation_classes: u64,
    /// Rotation classes counted again by Burnside's lemma.
    pub burnside_classes: u64,
    /// Rotation classes with a nonempty central strip.
    pub with_strip_classes: u64,
    /// Closed-form N(d).
    pub formula: u64,
    pub catalan_expected: u64,
    /// True when every identity above holds (classes = N(d), with-strip =
    /// N(d) − 1, totals = Catalan(d)).
    pub consistent: bool,
}

/// Enumerates all collections for `d`, quotients by rotation, and compares
/// every count against the closed forms.
pub fn census_crosscheck(d: u32) -> CensusReport {
    let matchings = Matching::enumerate(d);
    let total = matchings.len() as u64;

    let mut classes = BTreeSet::new();
    let mut with_strip = BTreeSet::new();
    for m in &matchings {
        let canonical = m.canonical_rotation();
        if !m.is_identity() {
            // A collection has a central strip iff some leaf is long, i.e.
            // the matching is not the all-short identity.
            with_strip.insert(canonical.clone());
        }
        classes.insert(canonical);
    }

    let mut fixed_total: u64 = 0;
    for r in 0..d as usize {
        fixed_total += matchings.iter().filter(|m| m.rotated(r) == **m).count() as u64;
    }
    let burnside_classes = fixed_total / d as u64;

    let formula = count_formula(d).to_u64().unwrap_or(u64::MAX);
    let catalan_expected = catalan(d).to_u64().unwrap_or(u64::MAX);
    let rotation_classes = classes.len() as u64;
    let with_strip_classes = with_strip.len() as u64;
    let consistent = rotation_classes == formula
        && burnside_classes == formula
        && with_strip_classes == formula - 1
        && total == catalan_expected;
    CensusReport {
        d,
        total_collections: total,
        rotation_classes,
        burnside_classes,
        with_strip_classes,
        formula,
        catalan_expected,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::chord::Chord;
    use crate::portrait::central_strip;

    fn generic_image(d: u32) -> Chord {
        Chord::new(
            Angle::new(1, 8 * d as i64).unwrap(),
            Angle::new(3, 8 * d as i64).unwrap(),
        )
    }

    #[test]
    fn count_formula_values() {
        // (1/2)((1/3)·6 + φ(2)·2) = 2, (1/3)((1/4)·20 + φ(3)·2) = 3,
        // (1/4)((1/5)·70 + φ(4)·2 + φ(2)·6) = 6.
        assert_eq!(count_formula(2), BigInt::from(2));
        assert_eq!(count_formula(3), BigInt::from(3));
        assert_eq!(count_formula(4), BigInt::from(6));
    }

    #[test]
    fn count_formula_numerator_divisible_by_d() {
        for d in 1..=12u32 {
            let total = count_formula_numerator(d);
            assert!(
                total.div_rem(&BigInt::from(d)).1.is_zero(),
                "numerator divisibility fails at d={d}"
            );
        }
    }

    #[test]
    fn enumerate_tree_counts_match_formula() {
        for d in 1..=7u32 {
            let trees = enumerate_trees(d);
            assert_eq!(
                BigInt::from(trees.len()),
                count_formula(d),
                "tree class count at d={d}"
            );
        }
    }

    #[test]
    fn d1_tree_is_unique() {
        let trees = enumerate_trees(1);
        assert_eq!(trees.len(), 1);
        let tree = PlaneBicoloredTree::from_code(&trees[0]).unwrap();
        assert_eq!(tree.vertex_count(), 2);
        assert_eq!(tree.edge_count(), 1);
    }

    #[test]
    fn dual_tree_shapes_for_small_examples() {
        // All-short d=3: star with an R center of degree 3.
        let star = dual_tree_of_matching(&Matching::new(vec![0, 1, 2]));
        assert_eq!(star.edge_count(), 3);
        let center = (0..star.vertex_count())
            .find(|&v| star.degree(v) == 3)
            .unwrap();
        assert_eq!(star.colors()[center], RegionKind::R);

        // d=2 long-leaf portrait: path R–C–R with the C vertex of degree 2.
        let path = dual_tree_of_matching(&Matching::new(vec![1, 0]));
        assert_eq!(path.edge_count(), 2);
        let middle = (0..path.vertex_count())
            .find(|&v| path.degree(v) == 2)
            .unwrap();
        assert_eq!(path.colors()[middle], RegionKind::C);
        let ends: Vec<RegionKind> = (0..path.vertex_count())
            .filter(|&v| path.degree(v) == 1)
            .map(|v| path.colors()[v])
            .collect();
        assert_eq!(ends, vec![RegionKind::R, RegionKind::R]);
    }

    #[test]
    fn dual_trees_have_d_edges_and_alternating_colors() {
        for d in 2..=6u32 {
            for m in Matching::enumerate(d) {
                let t = dual_tree_of_matching(&m);
                assert_eq!(t.edge_count(), d as usize);
                assert_eq!(t.vertex_count(), d as usize + 1);
                t.validate().unwrap();
            }
        }
    }

    #[test]
    fn code_roundtrip_reproduces_canonical_codes() {
        for d in 1..=6u32 {
            for code in enumerate_trees(d) {
                let tree = PlaneBicoloredTree::from_code(&code).unwrap();
                tree.validate().unwrap();
                assert_eq!(tree.canonical_code(), code, "decode/encode at d={d}");
            }
        }
    }

    #[test]
    fn tree_portrait_bijection_roundtrip() {
        for d in 2..=6u32 {
            let image = generic_image(d);
            for code in enumerate_trees(d) {
                let tree = PlaneBicoloredTree::from_code(&code).unwrap();
                let portrait = tree_to_portrait(&tree, &image).unwrap();
                let back = dual_tree(&portrait).canonical_code();
                assert_eq!(back, code, "roundtrip at d={d}");
            }
        }
    }

    #[test]
    fn portrait_tree_bijection_roundtrip() {
        for d in 2..=6u32 {
            let image = generic_image(d);
            for coll in SiblingCollection::enumerate(d, &image).unwrap() {
                let p = build_portrait(&coll).unwrap();
                let code = dual_tree(&p).canonical_code();
                let tree = PlaneBicoloredTree::from_code(&code).unwrap();
                let p2 = tree_to_portrait(&tree, &image).unwrap();
                assert_eq!(dual_tree(&p2).canonical_code(), code);
            }
        }
    }

    #[test]
    fn specific_roundtrips() {
        let image = generic_image(2);
        // Path R–C–R realizes the long-leaf σ_2 portrait.
        let path = dual_tree_of_matching(&Matching::new(vec![1, 0]));
        let p = tree_to_portrait(&path, &image).unwrap();
        assert!(central_strip(&p).is_some());
        assert!(p.collection.leaves().iter().any(|l| l.length() > crate::rat(1, 4)));

        // C-centered star realizes the symmetric degree-3 strip portrait.
        let image3 = generic_image(3);
        let star_c = dual_tree_of_matching(&Matching::new(vec![2, 0, 1]));
        let center = (0..star_c.vertex_count())
            .find(|&v| star_c.degree(v) == 3)
            .unwrap();
        assert_eq!(star_c.colors()[center], RegionKind::C);
        let p3 = tree_to_portrait(&star_c, &image3).unwrap();
        let strip = central_strip(&p3).unwrap();
        assert_eq!(strip.degree, 3);
    }

    #[test]
    fn census_examples() {
        let r3 = census_crosscheck(3);
        assert_eq!(
            (r3.total_collections, r3.rotation_classes, r3.with_strip_classes),
            (5, 3, 2)
        );
        assert!(r3.consistent);

        let r2 = census_crosscheck(2);
        assert_eq!(
            (r2.total_collections, r2.rotation_classes, r2.with_strip_classes),
            (2, 2, 1)
        );
        assert!(r2.consistent);

        let r4 = census_crosscheck(4);
        assert_eq!((r4.rotation_classes, r4.with_strip_classes), (6, 5));
        assert!(r4.consistent);
    }

    #[test]
    fn census_consistent_through_d7() {
        let expected_catalan = [2u64, 5, 14, 42, 132, 429];
        for d in 2..=7u32 {
            let report = census_crosscheck(d);
            assert!(report.consistent, "census inconsistent at d={d}");
            assert_eq!(
                report.total_collections,
                expected_catalan[(d - 2) as usize]
            );
        }
    }
}
