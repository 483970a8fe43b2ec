//! Lattice geometry of balanced degrees and their dual polygons.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct IntVec2 {
    pub x: i64,
    pub y: i64,
}

impl IntVec2 {
    pub const ZERO: IntVec2 = IntVec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        IntVec2 { x, y }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// `det(self, other)`; positive when `other` is counterclockwise of `self`.
    pub fn cross(self, other: IntVec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    /// Lattice length: gcd of the absolute coordinates.
    pub fn content(self) -> i64 {
        self.x.gcd(&self.y)
    }

    pub fn primitive(self) -> IntVec2 {
        let g = self.content();
        if g == 0 {
            self
        } else {
            IntVec2::new(self.x / g, self.y / g)
        }
    }

    pub fn is_primitive(self) -> bool {
        self.content() == 1
    }

    /// Rotation by +90 degrees.
    pub fn rot90(self) -> IntVec2 {
        IntVec2::new(-self.y, self.x)
    }

    /// Counterclockwise angular order starting at the positive x-axis.
    pub fn angle_cmp(self, other: IntVec2) -> Ordering {
        fn half(v: IntVec2) -> u8 {
            if v.y > 0 || (v.y == 0 && v.x > 0) {
                0
            } else {
                1
            }
        }
        half(self)
            .cmp(&half(other))
            .then_with(|| 0.cmp(&self.cross(other)))
    }
}

impl Add for IntVec2 {
    type Output = IntVec2;
    fn add(self, rhs: IntVec2) -> IntVec2 {
        IntVec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for IntVec2 {
    type Output = IntVec2;
    fn sub(self, rhs: IntVec2) -> IntVec2 {
        IntVec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for IntVec2 {
    type Output = IntVec2;
    fn neg(self) -> IntVec2 {
        IntVec2::new(-self.x, -self.y)
    }
}

impl Mul<IntVec2> for i64 {
    type Output = IntVec2;
    fn mul(self, v: IntVec2) -> IntVec2 {
        IntVec2::new(self * v.x, self * v.y)
    }
}

impl std::iter::Sum for IntVec2 {
    fn sum<I: Iterator<Item = IntVec2>>(iter: I) -> IntVec2 {
        iter.fold(IntVec2::ZERO, Add::add)
    }
}

impl fmt::Display for IntVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A balanced collection: nonzero integer vectors summing to zero and spanning
/// the plane. Stored sorted by angle, then by length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BalancedDegree {
    vectors: Vec<IntVec2>,
}

impl BalancedDegree {
    pub fn new(mut vectors: Vec<IntVec2>) -> Result<Self> {
        if vectors.iter().any(|v| v.is_zero()) {
            return Err(Error::InvalidDegree("zero vector".into()));
        }
        if vectors.len() < 3 {
            return Err(Error::InvalidDegree(format!(
                "need at least 3 vectors, got {}",
                vectors.len()
            )));
        }
        let sum: IntVec2 = vectors.iter().copied().sum();
        if !sum.is_zero() {
            return Err(Error::InvalidDegree(format!(
                "vectors sum to {sum}, not (0,0)"
            )));
        }
        let first = vectors[0];
        if vectors.iter().all(|v| first.cross(*v) == 0) {
            return Err(Error::NotFullDimensional);
        }
        vectors.sort_by(|a, b| a.angle_cmp(*b).then_with(|| a.content().cmp(&b.content())));
        Ok(BalancedDegree { vectors })
    }

    /// `d` copies each of `(-1,0)`, `(0,-1)`, `(1,1)`.
    pub fn projective_plane(d: u32) -> Result<Self> {
        let base = [IntVec2::new(-1, 0), IntVec2::new(0, -1), IntVec2::new(1, 1)];
        Self::new(repeat(&base, d))
    }

    /// `d` copies each of `(0,±1)` and `r` copies each of `(±1,0)`; the dual
    /// polygon is the `d × r` rectangle.
    pub fn quadric(d: u32, r: u32) -> Result<Self> {
        let mut v = repeat(&[IntVec2::new(0, 1), IntVec2::new(0, -1)], d);
        v.extend(repeat(&[IntVec2::new(1, 0), IntVec2::new(-1, 0)], r));
        Self::new(v)
    }

    pub fn vectors(&self) -> &[IntVec2] {
        &self.vectors
    }

    /// The number of vectors, κ(Δ).
    pub fn kappa(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_primitive(&self) -> bool {
        self.vectors.iter().all(|v| v.is_primitive())
    }

    /// Vectors grouped by primitive direction, in counterclockwise order.
    pub fn direction_classes(&self) -> Vec<(IntVec2, Vec<IntVec2>)> {
        let mut classes: Vec<(IntVec2, Vec<IntVec2>)> = Vec::new();
        for &v in &self.vectors {
            let dir = v.primitive();
            match classes.last_mut() {
                Some((d, members)) if *d == dir => members.push(v),
                _ => classes.push((dir, vec![v])),
            }
        }
        classes
    }

    /// The dual polygon Δ*, as its canonical translate.
    pub fn dual_polygon(&self) -> LatticePolygon {
        let mut p = IntVec2::ZERO;
        let mut verts = Vec::new();
        for (_, members) in self.direction_classes() {
            verts.push(p);
            let s: IntVec2 = members.iter().copied().sum();
            p = p + s.rot90();
        }
        debug_assert!(p.is_zero());
        LatticePolygon::from_ccw_unchecked(verts)
    }

    /// Number of cyclic orders on the vectors compatible with the
    /// counterclockwise order of their directions; equal vectors are
    /// indistinguishable.
    pub fn pi_count(&self) -> BigUint {
        self.direction_classes()
            .iter()
            .map(|(_, members)| {
                let mut mult: BTreeMap<IntVec2, u64> = BTreeMap::new();
                for &v in members {
                    *mult.entry(v).or_default() += 1;
                }
                let denom: BigUint = mult.values().map(|&m| factorial(m)).product();
                factorial(members.len() as u64) / denom
            })
            .product()
    }

    /// δ(g,Δ) = #interior − g + (κ(Δ*) − κ(Δ))/2.
    pub fn delta_invariant(&self, genus: u32) -> Result<HalfInt> {
        let counts = self.dual_polygon().lattice_counts();
        if u64::from(genus) > counts.interior {
            return Err(Error::GenusTooLarge {
                genus,
                max: counts.interior,
            });
        }
        let halves = 2 * (counts.interior as i64 - i64::from(genus)) + counts.boundary as i64
            - self.kappa() as i64;
        Ok(HalfInt::from_halves(halves))
    }
}

impl fmt::Display for BalancedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.vectors.len() {
            let v = self.vectors[i];
            let n = self.vectors[i..].iter().take_while(|&&w| w == v).count();
            if !first {
                f.write_str(";")?;
            }
            write!(f, "{v}x{n}")?;
            first = false;
            i += n;
        }
        Ok(())
    }
}

fn repeat(base: &[IntVec2], n: u32) -> Vec<IntVec2> {
    (0..n).flat_map(|_| base.iter().copied()).collect()
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (1..=n)
        .map(BigUint::from)
        .product::<BigUint>()
        .max(BigUint::one())
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeCounts {
    pub interior: u64,
    pub boundary: u64,
    /// Twice the Euclidean area.
    pub normalized_area: u64,
}

/// A convex lattice polygon with nonempty interior, vertices counterclockwise,
/// translated so that the minimal x and y coordinates are 0. The first vertex
/// is the lowest, leftmost one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<IntVec2>,
}

impl LatticePolygon {
    /// Builds a polygon from its vertices in either orientation. Points on
    /// edges are allowed and dropped; reflex or interior points are rejected.
    pub fn from_vertices(points: &[IntVec2]) -> Result<Self> {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::InvalidPolygon("empty interior".into()));
        }
        let poly = LatticePolygon::from_ccw_unchecked(hull.clone());
        let min_x = hull.iter().map(|v| v.x).min().unwrap_or(0);
        let min_y = hull.iter().map(|v| v.y).min().unwrap_or(0);
        let shifted = |p: IntVec2| p - IntVec2::new(min_x, min_y);
        for &p in points {
            if !poly.on_boundary(shifted(p)) {
                return Err(Error::InvalidPolygon(format!(
                    "{p} is not on the convex boundary"
                )));
            }
        }
        Ok(poly)
    }

    /// Triangle with vertices `(0,0)`, `(d,0)`, `(0,d)`.
    pub fn triangle(d: i64) -> Self {
        Self::from_ccw_unchecked(vec![
            IntVec2::new(0, 0),
            IntVec2::new(d, 0),
            IntVec2::new(0, d),
        ])
    }

    /// Rectangle `[0,d] × [0,r]`.
    pub fn rectangle(d: i64, r: i64) -> Self {
        Self::from_ccw_unchecked(vec![
            IntVec2::new(0, 0),
            IntVec2::new(d, 0),
            IntVec2::new(d, r),
            IntVec2::new(0, r),
        ])
    }

    fn from_ccw_unchecked(mut vertices: Vec<IntVec2>) -> Self {
        let min_x = vertices.iter().map(|v| v.x).min().unwrap_or(0);
        let min_y = vertices.iter().map(|v| v.y).min().unwrap_or(0);
        for v in &mut vertices {
            *v = *v - IntVec2::new(min_x, min_y);
        }
        let start = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| (v.y, v.x))
            .map(|(i, _)| i)
            .unwrap_or(0);
        vertices.rotate_left(start);
        LatticePolygon { vertices }
    }

    pub fn vertices(&self) -> &[IntVec2] {
        &self.vertices
    }

    /// Edge vectors `v[i+1] - v[i]`, counterclockwise.
    pub fn edges(&self) -> impl Iterator<Item = (IntVec2, IntVec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            (
                self.vertices[i],
                self.vertices[(i + 1) % n] - self.vertices[i],
            )
        })
    }

    /// Primitive outward normals with the integer length of their side.
    pub fn sides(&self) -> Vec<(IntVec2, i64)> {
        self.edges()
            .map(|(_, e)| {
                let len = e.content();
                (IntVec2::new(e.y / len, -e.x / len), len)
            })
            .collect()
    }

    /// The unique primitive degree with this dual polygon.
    pub fn primitive_degree(&self) -> BalancedDegree {
        let vectors = self
            .sides()
            .into_iter()
            .flat_map(|(n, len)| std::iter::repeat_n(n, len as usize))
            .collect();
        BalancedDegree::new(vectors).expect("sides of a polygon form a balanced collection")
    }

    pub fn contains(&self, p: IntVec2) -> bool {
        self.edges().all(|(v, e)| e.cross(p - v) >= 0)
    }

    pub fn contains_strictly(&self, p: IntVec2) -> bool {
        self.edges().all(|(v, e)| e.cross(p - v) > 0)
    }

    pub fn on_boundary(&self, p: IntVec2) -> bool {
        self.contains(p) && !self.contains_strictly(p)
    }

    pub fn bounding_box(&self) -> (IntVec2, IntVec2) {
        let xs = self.vertices.iter().map(|v| v.x);
        let ys = self.vertices.iter().map(|v| v.y);
        (
            IntVec2::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            IntVec2::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// All lattice points, sorted lexicographically by `(x, y)`.
    pub fn lattice_points(&self) -> Vec<IntVec2> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                let p = IntVec2::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Boundary lattice points in counterclockwise order from the first vertex.
    pub fn boundary_points(&self) -> Vec<IntVec2> {
        let mut out = Vec::new();
        for (v, e) in self.edges() {
            let len = e.content();
            let step = e.primitive();
            out.extend((0..len).map(|k| v + k * step));
        }
        out
    }

    pub fn lattice_counts(&self) -> LatticeCounts {
        let boundary: i64 = self.edges().map(|(_, e)| e.content()).sum();
        let area2: i64 = self.edges().map(|(v, e)| v.cross(v + e)).sum::<i64>().abs();
        LatticeCounts {
            interior: ((area2 - boundary + 2) / 2) as u64,
            boundary: boundary as u64,
            normalized_area: area2 as u64,
        }
    }

    /// The h-transverse parameters, if every outward normal is `(0,±1)` or
    /// `(±1,k)`.
    pub fn h_transverse(&self) -> Option<HTransverseShape> {
        let mut shape = HTransverseShape::default();
        for (n, len) in self.sides() {
            let len_u = len as usize;
            match (n.x, n.y) {
                (0, 1) => shape.d_plus += len as u32,
                (0, -1) => shape.d_minus += len as u32,
                (-1, k) => shape.d_left.extend(std::iter::repeat_n(-k, len_u)),
                (1, k) => shape.d_right.extend(std::iter::repeat_n(k, len_u)),
                _ => return None,
            }
        }
        shape.d_left.sort_by(|a, b| b.cmp(a));
        shape.d_right.sort_by(|a, b| b.cmp(a));
        Some(shape)
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Andrew's monotone chain; collinear points dropped, counterclockwise.
fn convex_hull(points: &[IntVec2]) -> Vec<IntVec2> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<IntVec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &IntVec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - b) <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Parameters of an h-transverse polygon.
///
/// The degree has `d_plus` copies of `(0,1)`, `d_minus` copies of `(0,-1)`,
/// a vector `(-1,-k)` for each `k` in `d_left` and `(1,k)` for each `k` in
/// `d_right`. Both sequences are non-increasing; with this convention `d_left`
/// runs from the bottom of the polygon to the top and `d_right` from the top
/// to the bottom.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HTransverseShape {
    pub d_plus: u32,
    pub d_minus: u32,
    pub d_left: Vec<i64>,
    pub d_right: Vec<i64>,
}

impl HTransverseShape {
    pub fn new(
        d_plus: u32,
        d_minus: u32,
        mut d_left: Vec<i64>,
        mut d_right: Vec<i64>,
    ) -> Result<Self> {
        if d_left.len() != d_right.len() || d_left.is_empty() {
            return Err(Error::InvalidDegree(
                "d_left and d_right must be nonempty and of equal length".into(),
            ));
        }
        d_left.sort_by(|a, b| b.cmp(a));
        d_right.sort_by(|a, b| b.cmp(a));
        let shape = HTransverseShape {
            d_plus,
            d_minus,
            d_left,
            d_right,
        };
        shape.degree()?;
        Ok(shape)
    }

    pub fn height(&self) -> usize {
        self.d_left.len()
    }

    pub fn degree(&self) -> Result<BalancedDegree> {
        let mut v = Vec::new();
        v.extend(std::iter::repeat_n(
            IntVec2::new(0, 1),
            self.d_plus as usize,
        ));
        v.extend(std::iter::repeat_n(
            IntVec2::new(0, -1),
            self.d_minus as usize,
        ));
        v.extend(self.d_left.iter().map(|&k| IntVec2::new(-1, -k)));
        v.extend(self.d_right.iter().map(|&k| IntVec2::new(1, k)));
        BalancedDegree::new(v)
    }

    /// Divergence of the topmost unit slice: `(right slope) - (left slope)`.
    pub fn top_slice_divergence(&self) -> i64 {
        self.d_right[0] - self.d_left[self.height() - 1]
    }

    /// Minus the divergence of the bottom unit slice.
    pub fn bottom_slice_weight(&self) -> i64 {
        self.d_left[0] - self.d_right[self.height() - 1]
    }
}
