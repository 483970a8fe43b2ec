//! Refined lattice-path counting: λ-increasing paths in Δ* with recursive
//! multiplicities μ₊ and μ₋.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use dashmap::DashMap;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::lattice::{binomial, BalancedDegree, IntVec2, LatticePolygon};
use crate::RefinedPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// A lexicographic order on lattice points: compare `primary_sign * p[primary]`,
/// then `secondary_sign * p[other]`. This is the order induced by a linear
/// functional with a tiny irrational tie-break slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LambdaOrder {
    pub primary: Axis,
    pub primary_sign: i8,
    pub secondary_sign: i8,
}

impl Default for LambdaOrder {
    fn default() -> Self {
        LambdaOrder {
            primary: Axis::X,
            primary_sign: 1,
            secondary_sign: 1,
        }
    }
}

impl LambdaOrder {
    pub fn key(&self, p: IntVec2) -> (i64, i64) {
        let (a, b) = match self.primary {
            Axis::X => (p.x, p.y),
            Axis::Y => (p.y, p.x),
        };
        (
            i64::from(self.primary_sign) * a,
            i64::from(self.secondary_sign) * b,
        )
    }

    /// All eight orders (axis choice × sign flips).
    pub fn all() -> Vec<LambdaOrder> {
        let mut out = Vec::with_capacity(8);
        for primary in [Axis::X, Axis::Y] {
            for primary_sign in [1, -1] {
                for secondary_sign in [1, -1] {
                    out.push(LambdaOrder {
                        primary,
                        primary_sign,
                        secondary_sign,
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for LambdaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: i8| if s > 0 { '+' } else { '-' };
        let (a, b) = match self.primary {
            Axis::X => ('x', 'y'),
            Axis::Y => ('y', 'x'),
        };
        write!(
            f,
            "lex:{}{a},{}{b}",
            sign(self.primary_sign),
            sign(self.secondary_sign)
        )
    }
}

impl FromStr for LambdaOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "lambda order",
            input: s.to_string(),
        };
        let body = s.trim().strip_prefix("lex:").ok_or_else(bad)?;
        let (first, second) = body.split_once(',').ok_or_else(bad)?;
        let parse = |t: &str| -> Option<(i8, char)> {
            let mut c = t.trim().chars();
            let sign = match c.next()? {
                '+' => 1,
                '-' => -1,
                _ => return None,
            };
            let axis = c.next()?;
            c.next().is_none().then_some((sign, axis))
        };
        let (s1, a1) = parse(first).ok_or_else(bad)?;
        let (s2, a2) = parse(second).ok_or_else(bad)?;
        let primary = match (a1, a2) {
            ('x', 'y') => Axis::X,
            ('y', 'x') => Axis::Y,
            _ => return Err(bad()),
        };
        Ok(LambdaOrder {
            primary,
            primary_sign: s1,
            secondary_sign: s2,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The clockwise boundary arc from the λ-minimal to the λ-maximal vertex.
    Plus,
    /// The counterclockwise arc.
    Minus,
}

/// A λ-increasing sequence of lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePath {
    pub points: Vec<IntVec2>,
}

impl LatticePath {
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

/// Lattice paths of one polygon under one λ-order, with a shared memo table.
pub struct PathEngine {
    poly: LatticePolygon,
    lambda: LambdaOrder,
    /// All lattice points, λ-sorted.
    points: Vec<IntVec2>,
    plus_arc: Vec<IntVec2>,
    minus_arc: Vec<IntVec2>,
    interior: u64,
    kappa: u64,
    depth_limit: usize,
    memo: DashMap<(Side, Vec<IntVec2>), RefinedPoly>,
}

impl PathEngine {
    pub fn new(poly: LatticePolygon, lambda: LambdaOrder) -> Self {
        let mut points = poly.lattice_points();
        points.sort_by_key(|&p| lambda.key(p));
        let p = points[0];
        let q = *points.last().expect("polygon has lattice points");

        let ccw = poly.boundary_points();
        let ip = ccw.iter().position(|&v| v == p).expect("λ-min is a vertex");
        let iq = ccw.iter().position(|&v| v == q).expect("λ-max is a vertex");
        let n = ccw.len();
        let walk = |step: usize| {
            let mut arc = vec![p];
            let mut i = ip;
            while i != iq {
                i = (i + step) % n;
                arc.push(ccw[i]);
            }
            arc
        };
        let minus_arc = walk(1);
        let plus_arc = walk(n - 1);

        let counts = poly.lattice_counts();
        PathEngine {
            depth_limit: (points.len() + 1) * (counts.normalized_area as usize + 2),
            poly,
            lambda,
            points,
            plus_arc,
            minus_arc,
            interior: counts.interior,
            kappa: counts.boundary,
            memo: DashMap::new(),
        }
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.poly
    }

    pub fn lambda(&self) -> LambdaOrder {
        self.lambda
    }

    pub fn arc(&self, side: Side) -> &[IntVec2] {
        match side {
            Side::Plus => &self.plus_arc,
            Side::Minus => &self.minus_arc,
        }
    }

    /// Every λ-increasing path from the λ-minimal to the λ-maximal vertex
    /// with `κ + g − 1` steps. Paths are listed in lexicographic order of
    /// their chosen intermediate points (by λ-rank).
    pub fn enumerate(&self, genus: u32) -> Result<Vec<LatticePath>> {
        if u64::from(genus) > self.interior {
            return Err(Error::GenusTooLarge {
                genus,
                max: self.interior,
            });
        }
        let steps = (self.kappa + u64::from(genus) - 1) as usize;
        let inner = &self.points[1..self.points.len() - 1];
        let pick = steps - 1;
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(pick);
        combinations(inner.len(), pick, 0, &mut chosen, &mut |idx| {
            let mut pts = Vec::with_capacity(steps + 1);
            pts.push(self.points[0]);
            pts.extend(idx.iter().map(|&i| inner[i]));
            pts.push(*self.points.last().unwrap());
            out.push(LatticePath { points: pts });
        });
        Ok(out)
    }

    pub fn mu(&self, path: &LatticePath, side: Side) -> RefinedPoly {
        self.mu_rec(&path.points, side, 0)
    }

    fn mu_rec(&self, pts: &[IntVec2], side: Side, depth: usize) -> RefinedPoly {
        assert!(
            depth <= self.depth_limit,
            "lattice-path recursion exceeded its fuel ({} calls deep)",
            self.depth_limit
        );
        if pts == self.arc(side) {
            return RefinedPoly::one();
        }
        let key = (side, pts.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let result = self.mu_step(pts, side, depth);
        self.memo.insert(key, result.clone());
        result
    }

    fn mu_step(&self, pts: &[IntVec2], side: Side, depth: usize) -> RefinedPoly {
        let sign = match side {
            Side::Plus => 1,
            Side::Minus => -1,
        };
        let corner = (1..pts.len().saturating_sub(1)).find_map(|j| {
            let turn = (pts[j] - pts[j - 1]).cross(pts[j + 1] - pts[j]);
            (turn * sign > 0).then_some((j, turn.unsigned_abs()))
        });
        let Some((j, area)) = corner else {
            return RefinedPoly::zero();
        };

        let mut shortcut = pts.to_vec();
        shortcut.remove(j);
        let mut total = &RefinedPoly::quantum_integer(area).expect("corner has positive area")
            * &self.mu_rec(&shortcut, side, depth + 1);

        let flipped = pts[j - 1] + pts[j + 1] - pts[j];
        let before = self.lambda.key(pts[j - 1]);
        let after = self.lambda.key(pts[j + 1]);
        let key = self.lambda.key(flipped);
        if self.poly.contains(flipped) && before < key && key < after {
            let mut moved = pts.to_vec();
            moved[j] = flipped;
            total += &self.mu_rec(&moved, side, depth + 1);
        }
        total
    }

    pub fn path_multiplicity(&self, path: &LatticePath) -> RefinedPoly {
        let plus = self.mu(path, Side::Plus);
        if plus.is_zero() {
            return plus;
        }
        &plus * &self.mu(path, Side::Minus)
    }

    /// Σ over paths of μ₊·μ₋. This counts every curve through the points,
    /// reducible ones included; see [`compute_g_path`] for G(g,Δ).
    pub fn count(&self, genus: u32) -> Result<RefinedPoly> {
        let paths = self.enumerate(genus)?;
        let parts: Vec<RefinedPoly> = paths
            .par_iter()
            .map(|p| self.path_multiplicity(p))
            .collect();
        Ok(parts.into_iter().sum())
    }
}

fn combinations(
    n: usize,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    let need = k - chosen.len();
    for i in start..=n.saturating_sub(need) {
        if n < need {
            break;
        }
        chosen.push(i);
        combinations(n, k, i + 1, chosen, f);
        chosen.pop();
    }
}

/// G(g,Δ) through the lattice-path engine: the path count minus the
/// reducible curves through the same points.
pub fn compute_g_path(
    degree: &BalancedDegree,
    genus: u32,
    lambda: LambdaOrder,
) -> Result<RefinedPoly> {
    if !degree.is_primitive() {
        return Err(Error::NonPrimitiveDegree);
    }
    let interior = degree.dual_polygon().lattice_counts().interior;
    if u64::from(genus) > interior {
        return Err(Error::GenusTooLarge {
            genus,
            max: interior,
        });
    }
    let mut split = Components::new(degree, lambda);
    let full = split.full.clone();
    Ok(split.irreducible(degree.kappa() + genus as usize - 1, &full))
}

/// Sub-degrees of Δ as multiplicity vectors over its distinct vectors.
type SubDegree = Vec<u32>;

/// Splits curve counts into irreducible components. A curve through `n`
/// labelled points decomposes by the component through the first point, so
/// `A(n,D) = Σ C(n-1,n₁-1)·I(n₁,D₁)·A(n-n₁,D-D₁)` over balanced `D₁ ⊆ D`.
struct Components {
    kinds: Vec<IntVec2>,
    full: SubDegree,
    /// Nonempty balanced sub-degrees of Δ.
    balanced: Vec<SubDegree>,
    lambda: LambdaOrder,
    irreducible: HashMap<(usize, SubDegree), RefinedPoly>,
    all: HashMap<(usize, SubDegree), RefinedPoly>,
}

impl Components {
    fn new(degree: &BalancedDegree, lambda: LambdaOrder) -> Self {
        let mut kinds: Vec<IntVec2> = degree.vectors().to_vec();
        kinds.dedup();
        let full: SubDegree = kinds
            .iter()
            .map(|k| degree.vectors().iter().filter(|v| *v == k).count() as u32)
            .collect();
        let mut balanced = Vec::new();
        let mut cur = vec![0; kinds.len()];
        loop {
            let sum: IntVec2 = cur.iter().zip(&kinds).map(|(&c, &k)| c as i64 * k).sum();
            if sum.is_zero() && cur.iter().any(|&c| c > 0) {
                balanced.push(cur.clone());
            }
            let Some(i) = (0..cur.len()).find(|&i| cur[i] < full[i]) else {
                break;
            };
            cur[i] += 1;
            cur[..i].iter_mut().for_each(|c| *c = 0);
        }
        Components {
            kinds,
            full,
            balanced,
            lambda,
            irreducible: HashMap::new(),
            all: HashMap::new(),
        }
    }

    fn vectors(&self, d: &SubDegree) -> Vec<IntVec2> {
        d.iter()
            .zip(&self.kinds)
            .flat_map(|(&c, &k)| std::iter::repeat_n(k, c as usize))
            .collect()
    }

    /// Irreducible curves of degree `d` through `n` points.
    fn irreducible(&mut self, n: usize, d: &SubDegree) -> RefinedPoly {
        let key = (n, d.clone());
        if let Some(v) = self.irreducible.get(&key) {
            return v.clone();
        }
        let kappa: usize = d.iter().map(|&c| c as usize).sum();
        let value = match BalancedDegree::new(self.vectors(d)) {
            // only a single line is irreducible among one-dimensional degrees
            Err(_) => {
                if n == 1 && kappa == 2 {
                    RefinedPoly::one()
                } else {
                    RefinedPoly::zero()
                }
            }
            Ok(deg) => {
                let interior = deg.dual_polygon().lattice_counts().interior as usize;
                if n + 1 < kappa || n + 1 - kappa > interior {
                    RefinedPoly::zero()
                } else {
                    let genus = (n + 1 - kappa) as u32;
                    let raw = PathEngine::new(deg.dual_polygon(), self.lambda)
                        .count(genus)
                        .expect("genus within range");
                    let reducible = self.split_sum(n, d, true);
                    raw.checked_sub(&reducible)
                        .expect("reducible curves are among the counted paths")
                }
            }
        };
        self.irreducible.insert(key, value.clone());
        value
    }

    /// All curves, reducible or not, of degree `d` through `n` points.
    fn all_curves(&mut self, n: usize, d: &SubDegree) -> RefinedPoly {
        if d.iter().all(|&c| c == 0) {
            return if n == 0 {
                RefinedPoly::one()
            } else {
                RefinedPoly::zero()
            };
        }
        let key = (n, d.clone());
        if let Some(v) = self.all.get(&key) {
            return v.clone();
        }
        let value = self.split_sum(n, d, false);
        self.all.insert(key, value.clone());
        value
    }

    /// `Σ C(n-1,n₁-1)·I(n₁,D₁)·A(n-n₁,D-D₁)`, over proper `D₁` when `proper`.
    fn split_sum(&mut self, n: usize, d: &SubDegree, proper: bool) -> RefinedPoly {
        let mut total = RefinedPoly::zero();
        if n == 0 {
            return total;
        }
        let parts: Vec<SubDegree> = self
            .balanced
            .iter()
            .filter(|b| b.iter().zip(d).all(|(x, y)| x <= y) && !(proper && *b == d))
            .cloned()
            .collect();
        for first in parts {
            let rest: SubDegree = d.iter().zip(&first).map(|(x, y)| x - y).collect();
            for n1 in 1..=n {
                let irr = self.irreducible(n1, &first);
                if irr.is_zero() {
                    continue;
                }
                let others = self.all_curves(n - n1, &rest);
                if others.is_zero() {
                    continue;
                }
                let ways = binomial((n - 1) as u64, (n1 - 1) as u64);
                total += &(&irr * &others).scale(&ways);
            }
        }
        total
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCurveCensus {
    /// Coefficient of `y^δ` in G(g,Δ): the number of δ-curves.
    pub count_top: BigUint,
    /// Degree of μ₊·μ₋ for each path, `None` when the product vanishes.
    pub per_path_alpha: Vec<Option<HalfInt>>,
}

pub fn delta_curve_census(
    degree: &BalancedDegree,
    genus: u32,
    lambda: LambdaOrder,
) -> Result<DeltaCurveCensus> {
    if !degree.is_primitive() {
        return Err(Error::NonPrimitiveDegree);
    }
    let delta = degree.delta_invariant(genus)?;
    let engine = PathEngine::new(degree.dual_polygon(), lambda);
    let paths = engine.enumerate(genus)?;
    let mults: Vec<RefinedPoly> = paths
        .par_iter()
        .map(|p| engine.path_multiplicity(p))
        .collect();
    let per_path_alpha = mults.iter().map(|m| m.degree().ok()).collect();
    let total: RefinedPoly = mults.into_iter().sum();
    Ok(DeltaCurveCensus {
        count_top: total.coefficient(delta),
        per_path_alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, u32)]) -> RefinedPoly {
        RefinedPoly::from_terms(terms.iter().map(|&(e, c)| (2 * e, BigUint::from(c))))
    }

    #[test]
    fn lambda_strings() {
        for lam in LambdaOrder::all() {
            assert_eq!(lam.to_string().parse::<LambdaOrder>().unwrap(), lam);
        }
        assert_eq!(
            "lex:+x,+y".parse::<LambdaOrder>().unwrap(),
            LambdaOrder::default()
        );
        let l: LambdaOrder = "lex:-y,+x".parse().unwrap();
        assert_eq!(
            (l.primary, l.primary_sign, l.secondary_sign),
            (Axis::Y, -1, 1)
        );
        assert!("lex:+x,+x".parse::<LambdaOrder>().is_err());
        assert!("x,y".parse::<LambdaOrder>().is_err());
    }

    #[test]
    fn unit_triangle() {
        let engine = PathEngine::new(LatticePolygon::triangle(1), LambdaOrder::default());
        let paths = engine.enumerate(0).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].steps(), 2);
        // (0,0) -> (0,1) -> (1,0) hugs the upper arc
        assert!(engine.mu(&paths[0], Side::Plus).is_one());
        assert!(engine.mu(&paths[0], Side::Minus).is_one());
    }

    #[test]
    fn skipping_a_boundary_point_is_not_a_base_case() {
        let engine = PathEngine::new(LatticePolygon::triangle(3), LambdaOrder::default());
        assert_eq!(engine.arc(Side::Minus).len(), 4);
        let skip = LatticePath {
            points: vec![IntVec2::new(0, 0), IntVec2::new(2, 0), IntVec2::new(3, 0)],
        };
        assert!(engine.mu(&skip, Side::Minus).is_zero());
        let full = LatticePath {
            points: engine.arc(Side::Minus).to_vec(),
        };
        assert!(engine.mu(&full, Side::Minus).is_one());
    }

    #[test]
    fn path_counts() {
        let engine = PathEngine::new(LatticePolygon::triangle(3), LambdaOrder::default());
        assert_eq!(engine.enumerate(0).unwrap().len(), 8);
        let full = engine.enumerate(1).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].points.len(), 10);
        assert!(engine.path_multiplicity(&full[0]).is_one());
        assert!(matches!(
            engine.enumerate(2),
            Err(Error::GenusTooLarge { .. })
        ));
    }

    #[test]
    fn known_polynomials() {
        let p = |d| BalancedDegree::projective_plane(d).unwrap();
        let lam = LambdaOrder::default();
        assert_eq!(
            compute_g_path(&p(3), 0, lam).unwrap(),
            poly(&[(1, 1), (0, 10), (-1, 1)])
        );
        assert_eq!(
            compute_g_path(&p(4), 2, lam).unwrap(),
            poly(&[(1, 3), (0, 21), (-1, 3)])
        );
        let q = BalancedDegree::quadric(2, 2).unwrap();
        assert_eq!(
            compute_g_path(&q, 0, lam).unwrap(),
            poly(&[(1, 1), (0, 10), (-1, 1)])
        );
    }

    #[test]
    fn non_primitive_rejected() {
        let np = BalancedDegree::new(vec![
            IntVec2::new(-1, 0),
            IntVec2::new(1, 3),
            IntVec2::new(0, -1),
            IntVec2::new(0, -2),
        ])
        .unwrap();
        assert!(matches!(
            compute_g_path(&np, 0, LambdaOrder::default()),
            Err(Error::NonPrimitiveDegree)
        ));
    }

    #[test]
    fn census_leading_counts() {
        let p = |d| BalancedDegree::projective_plane(d).unwrap();
        let lam = LambdaOrder::default();
        let c = |d, g| delta_curve_census(&p(d), g, lam).unwrap().count_top;
        assert_eq!(c(3, 0), BigUint::from(1u32));
        assert_eq!(c(4, 1), BigUint::from(3u32));
        assert_eq!(c(4, 0), BigUint::from(1u32));
    }

    #[test]
    fn reducible_curves_are_removed() {
        let quartic = BalancedDegree::projective_plane(4).unwrap();
        let raw = PathEngine::new(quartic.dual_polygon(), LambdaOrder::default())
            .count(0)
            .unwrap();
        let g = compute_g_path(&quartic, 0, LambdaOrder::default()).unwrap();
        // a line through 2 of the 11 points and the cubic through the rest
        let pairs = RefinedPoly::one().scale(&BigUint::from(55u32));
        assert_eq!(raw, &g + &pairs);
        assert_eq!(g.eval_at_one(), 620.into());
    }
}
