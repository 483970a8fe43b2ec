//! Simple planar tropical curves given combinatorially, and their complex,
//! real and refined multiplicities.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::lattice::{BalancedDegree, IntVec2};
use crate::RefinedPoly;

/// The three outgoing edge vectors `u = weight · direction` at a trivalent vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexStar([IntVec2; 3]);

impl VertexStar {
    pub fn new(u: [IntVec2; 3]) -> Result<Self> {
        if u.iter().any(|v| v.is_zero()) {
            return Err(Error::InvalidCurve("zero edge vector at vertex".into()));
        }
        if u[0] + u[1] + u[2] != IntVec2::ZERO {
            return Err(Error::InvalidCurve("vertex star is not balanced".into()));
        }
        if u[0].cross(u[1]) == 0 {
            return Err(Error::DegenerateVertex);
        }
        Ok(VertexStar(u))
    }

    pub fn vectors(&self) -> [IntVec2; 3] {
        self.0
    }

    /// m_C(V): lattice area of the dual triangle, `|det(u1, u2)|`.
    pub fn complex_mult(&self) -> u64 {
        self.0[0].cross(self.0[1]).unsigned_abs()
    }

    /// int(V), by Pick's formula on the dual triangle.
    pub fn interior_points(&self) -> u64 {
        let boundary: i64 = self.0.iter().map(|u| u.content()).sum();
        ((self.complex_mult() as i64 - boundary) / 2 + 1) as u64
    }

    /// m_R(V): 0 when m_C is even, else `(-1)^int(V)`.
    pub fn real_mult(&self) -> i64 {
        if self.complex_mult().is_multiple_of(2) {
            0
        } else if self.interior_points().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// G_V = [m_C(V)]_y.
    pub fn refined_mult(&self) -> RefinedPoly {
        RefinedPoly::quantum_integer(self.complex_mult()).expect("nondegenerate star has m_C >= 1")
    }

    /// Vertices of the dual triangle: sides are the edge vectors rotated by 90°.
    pub fn dual_triangle(&self) -> [IntVec2; 3] {
        let a = IntVec2::ZERO;
        let b = a + self.0[0].rot90();
        let c = b + self.0[1].rot90();
        [a, b, c]
    }
}

/// Endpoint of an edge: a vertex id, or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Vertex(u32),
    Infinity,
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Endpoint::Vertex(id) => s.serialize_u32(*id),
            Endpoint::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Id(u32),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Id(id) => Ok(Endpoint::Vertex(id)),
            Raw::Tag(t) if t == "inf" => Ok(Endpoint::Infinity),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!(
                "expected vertex id or \"inf\", got {t:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: u32,
}

/// An edge; `dir` is the primitive direction leaving `from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: u32,
    pub to: Endpoint,
    pub dir: [i64; 2],
    pub weight: u64,
}

impl EdgeRecord {
    pub fn direction(&self) -> IntVec2 {
        IntVec2::new(self.dir[0], self.dir[1])
    }

    /// u_h(E) leaving `from`.
    pub fn vector(&self) -> IntVec2 {
        self.weight as i64 * self.direction()
    }

    pub fn is_infinite(&self) -> bool {
        self.to == Endpoint::Infinity
    }
}

/// A tropical curve as graph data: vertices, bounded edges and ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCombinatorics {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl CurveCombinatorics {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve serializes")
    }

    fn vertex_index(&self, id: u32) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::InvalidCurve(format!("edge refers to unknown vertex {id}")))
    }

    /// Outgoing vectors at each vertex, in edge order.
    fn incidences(&self) -> Result<Vec<Vec<IntVec2>>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            let a = self.vertex_index(e.from)?;
            out[a].push(e.vector());
            if let Endpoint::Vertex(to) = e.to {
                let b = self.vertex_index(to)?;
                out[b].push(-e.vector());
            }
        }
        Ok(out)
    }

    /// Checks connectivity, trivalence, germ consistency and balancing, in
    /// that order, and returns the vertex stars.
    pub fn validate(&self) -> Result<Vec<VertexStar>> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidCurve("no vertices".into()));
        }
        let ids: BTreeSet<u32> = self.vertices.iter().map(|v| v.id).collect();
        if ids.len() != self.vertices.len() {
            return Err(Error::InvalidCurve("duplicate vertex id".into()));
        }
        let incidences = self.incidences()?;

        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            if let Endpoint::Vertex(to) = e.to {
                let a = self.vertex_index(e.from)?;
                let b = self.vertex_index(to)?;
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidCurve(format!(
                "not connected: vertex {} unreachable",
                self.vertices[i].id
            )));
        }

        for (i, inc) in incidences.iter().enumerate() {
            if inc.len() != 3 {
                return Err(Error::InvalidCurve(format!(
                    "vertex {} has valence {}, expected 3",
                    self.vertices[i].id,
                    inc.len()
                )));
            }
        }

        for (k, e) in self.edges.iter().enumerate() {
            if e.weight == 0 {
                return Err(Error::InvalidCurve(format!("edge {k} has weight 0")));
            }
            if !e.direction().is_primitive() {
                return Err(Error::InvalidCurve(format!(
                    "edge {k} direction {} is not primitive",
                    e.direction()
                )));
            }
            if e.to == Endpoint::Vertex(e.from) {
                return Err(Error::InvalidCurve(format!("edge {k} is a loop")));
            }
        }

        let mut stars = Vec::with_capacity(incidences.len());
        for (i, inc) in incidences.iter().enumerate() {
            let sum: IntVec2 = inc.iter().copied().sum();
            if !sum.is_zero() {
                return Err(Error::InvalidCurve(format!(
                    "balancing fails at vertex {}: outgoing sum {sum}",
                    self.vertices[i].id
                )));
            }
            stars.push(VertexStar::new([inc[0], inc[1], inc[2]])?);
        }
        Ok(stars)
    }

    pub fn ends(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges.iter().filter(|e| e.is_infinite())
    }

    pub fn genus(&self) -> i64 {
        let bounded = self.edges.iter().filter(|e| !e.is_infinite()).count() as i64;
        bounded - self.vertices.len() as i64 + 1
    }

    pub fn degree(&self) -> Result<BalancedDegree> {
        BalancedDegree::new(self.ends().map(EdgeRecord::vector).collect())
    }

    pub fn multiplicities(&self) -> Result<CurveMultiplicities> {
        let stars = self.validate()?;
        let genus = self.genus();
        if genus < 0 {
            return Err(Error::InvalidCurve("negative genus".into()));
        }
        let mu_complex: BigInt = stars
            .iter()
            .map(|s| BigInt::from(s.complex_mult()))
            .product();
        let mu_real: BigInt = stars.iter().map(|s| BigInt::from(s.real_mult())).product();
        let refined: RefinedPoly = stars.iter().map(VertexStar::refined_mult).product();
        let alpha = stars
            .iter()
            .map(|s| HalfInt::from_halves(s.complex_mult() as i64 - 1))
            .fold(HalfInt::ZERO, |a, b| a + b);
        Ok(CurveMultiplicities {
            mu_complex,
            mu_real,
            refined,
            alpha,
            genus: genus as u32,
            degree: self.degree()?,
        })
    }

    /// Checks the basic properties of G_h that follow from its product form.
    pub fn property_report(&self) -> Result<PropertyReport> {
        let m = self.multiplicities()?;
        let g = &m.refined;
        let end_weights: Vec<u64> = self.ends().map(|e| e.weight).collect();
        let even_ends = end_weights.iter().filter(|w| *w % 2 == 0).count();
        let ends_3_mod_4 = end_weights.iter().filter(|w| *w % 4 == 3).count();

        let mut checks = Vec::new();
        checks.push(PropertyCheck::new("symmetric", Some(g.is_symmetric())));
        // coefficients are unsigned; nonzero ones are positive by construction
        checks.push(PropertyCheck::new(
            "positive coefficients",
            Some(!g.is_zero()),
        ));
        checks.push(PropertyCheck::new(
            "G(1) = mu_C",
            Some(g.eval_at_one() == m.mu_complex),
        ));
        let integer_powers = g.parity() == Some(crate::poly::Parity::Integer);
        let half_powers = g.parity() == Some(crate::poly::Parity::HalfInteger);
        let parity_ok = if even_ends % 2 == 0 {
            integer_powers
        } else {
            half_powers
        };
        checks.push(PropertyCheck::new("power parity", Some(parity_ok)));

        let odd_hypothesis = even_ends == 0 && ends_3_mod_4 % 2 == 0;
        let minus_one = g.eval_at_minus_one().ok();
        checks.push(PropertyCheck::new(
            "G(-1) = mu_R",
            odd_hypothesis.then(|| minus_one.as_ref() == Some(&m.mu_real)),
        ));
        let unit_ends = end_weights.iter().all(|&w| w == 1);
        checks.push(PropertyCheck::new(
            "weight-1 ends",
            unit_ends.then(|| {
                g.is_symmetric()
                    && g.eval_at_one() == m.mu_complex
                    && minus_one.as_ref() == Some(&m.mu_real)
            }),
        ));
        Ok(PropertyReport {
            multiplicities: m,
            half_integer_powers: half_powers,
            checks,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveMultiplicities {
    pub mu_complex: BigInt,
    pub mu_real: BigInt,
    pub refined: RefinedPoly,
    /// Degree of the refined multiplicity.
    pub alpha: HalfInt,
    pub genus: u32,
    pub degree: BalancedDegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    /// `None` when the hypothesis of the check does not hold.
    pub pass: Option<bool>,
}

impl PropertyCheck {
    fn new(name: &'static str, pass: Option<bool>) -> Self {
        PropertyCheck { name, pass }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub multiplicities: CurveMultiplicities,
    pub half_integer_powers: bool,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass != Some(false))
    }
}

/// i = δ(g,Δ) − α; 0 for a δ-curve.
pub fn delta_class(alpha: HalfInt, genus: u32, degree: &BalancedDegree) -> Result<HalfInt> {
    let delta = degree.delta_invariant(genus)?;
    if alpha > delta {
        return Err(Error::AboveDeltaBound { alpha, delta });
    }
    Ok(delta - alpha)
}

/// `true` when every vertex contributes a unimodular triangle.
pub fn all_unimodular(stars: &[VertexStar]) -> bool {
    stars.iter().all(|s| s.complex_mult().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> IntVec2 {
        IntVec2::new(x, y)
    }

    fn star(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> VertexStar {
        VertexStar::new([v(a.0, a.1), v(b.0, b.1), v(c.0, c.1)]).unwrap()
    }

    /// Lattice points strictly inside a triangle, by scanning its bounding box.
    fn scan_interior(t: [IntVec2; 3]) -> u64 {
        let orient = (t[1] - t[0]).cross(t[2] - t[0]).signum();
        let xs = t.iter().map(|p| p.x);
        let ys = t.iter().map(|p| p.y);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        let mut n = 0;
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = v(x, y);
                let inside = (0..3).all(|i| orient * (t[(i + 1) % 3] - t[i]).cross(p - t[i]) > 0);
                n += inside as u64;
            }
        }
        n
    }

    #[test]
    fn vertex_multiplicities() {
        let unit = star((1, 0), (0, 1), (-1, -1));
        let two = star((2, 0), (0, 1), (-2, -1));
        let nine = star((3, 0), (0, 3), (-3, -3));
        assert_eq!(unit.complex_mult(), 1);
        assert_eq!(two.complex_mult(), 2);
        assert_eq!(nine.complex_mult(), 9);
        assert_eq!(unit.interior_points(), 0);
        assert_eq!(nine.interior_points(), 1);
        assert_eq!(two.interior_points(), 0);
        assert_eq!(two.real_mult(), 0);
        assert_eq!(unit.real_mult(), 1);
        assert_eq!(nine.real_mult(), -1);
        assert_eq!(
            nine.refined_mult(),
            RefinedPoly::quantum_integer(9).unwrap()
        );
    }

    #[test]
    fn degenerate_star() {
        assert!(matches!(
            VertexStar::new([v(1, 0), v(1, 0), v(-2, 0)]),
            Err(Error::DegenerateVertex)
        ));
    }

    #[test]
    fn pick_matches_scan_exhaustively() {
        for ax in -6..=6 {
            for ay in -6..=6 {
                for bx in -6..=6 {
                    for by in -6..=6 {
                        let (a, b) = (v(ax, ay), v(bx, by));
                        let c = -(a + b);
                        if c.x.abs() > 6 || c.y.abs() > 6 {
                            continue;
                        }
                        let Ok(s) = VertexStar::new([a, b, c]) else {
                            continue;
                        };
                        assert_eq!(
                            s.interior_points(),
                            scan_interior(s.dual_triangle()),
                            "{a} {b} {c}"
                        );
                        let m = s.complex_mult();
                        assert_eq!(m, b.cross(c).unsigned_abs());
                        assert_eq!(m, a.cross(c).unsigned_abs());
                    }
                }
            }
        }
    }

    fn single_vertex(
        a: (i64, i64, u64),
        b: (i64, i64, u64),
        c: (i64, i64, u64),
    ) -> CurveCombinatorics {
        let end = |(x, y, w): (i64, i64, u64)| EdgeRecord {
            from: 0,
            to: Endpoint::Infinity,
            dir: [x, y],
            weight: w,
        };
        CurveCombinatorics {
            vertices: vec![VertexRecord { id: 0 }],
            edges: vec![end(a), end(b), end(c)],
        }
    }

    #[test]
    fn single_vertex_nine() {
        let c = single_vertex((1, 0, 3), (0, 1, 3), (-1, -1, 3));
        let m = c.multiplicities().unwrap();
        assert_eq!(m.mu_complex, BigInt::from(9));
        assert_eq!(m.mu_real, BigInt::from(-1));
        assert_eq!(m.refined, RefinedPoly::quantum_integer(9).unwrap());
        assert_eq!(m.alpha, HalfInt::from_int(4));
        assert_eq!(m.genus, 0);
    }

    #[test]
    fn one_even_end_gives_half_powers() {
        let c = single_vertex((1, 0, 2), (-1, 1, 1), (-1, -1, 1));
        let r = c.property_report().unwrap();
        assert!(r.half_integer_powers);
        assert!(r.all_pass());
        let by_name = |n: &str| r.checks.iter().find(|c| c.name == n).unwrap().pass;
        assert_eq!(by_name("power parity"), Some(true));
        assert_eq!(by_name("G(-1) = mu_R"), None);
        assert_eq!(by_name("weight-1 ends"), None);
    }

    #[test]
    fn unimodular_vertex_passes() {
        let c = single_vertex((1, 0, 1), (0, 1, 1), (-1, -1, 1));
        let r = c.property_report().unwrap();
        assert!(r.checks.iter().all(|c| c.pass == Some(true)));
        assert!(r.multiplicities.refined.is_one());
    }

    #[test]
    fn validation_order() {
        let mut c = single_vertex((1, 0, 1), (0, 1, 1), (-1, -1, 1));
        c.vertices.push(VertexRecord { id: 1 });
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("not connected"), "{err}");

        let mut c = single_vertex((1, 0, 1), (0, 1, 1), (-1, -1, 1));
        c.edges.pop();
        assert!(c.validate().unwrap_err().to_string().contains("valence"));

        let mut c = single_vertex((1, 0, 1), (0, 1, 1), (-1, -1, 1));
        c.edges[0].dir = [2, 0];
        assert!(c.validate().unwrap_err().to_string().contains("primitive"));

        let c = single_vertex((1, 0, 1), (0, 1, 1), (-1, -1, 2));
        assert!(c.validate().unwrap_err().to_string().contains("balancing"));
    }

    #[test]
    fn delta_classes() {
        let p3 = BalancedDegree::projective_plane(3).unwrap();
        let p4 = BalancedDegree::projective_plane(4).unwrap();
        assert_eq!(
            delta_class(HalfInt::from_int(1), 0, &p3).unwrap(),
            HalfInt::ZERO
        );
        assert_eq!(
            delta_class(HalfInt::ZERO, 0, &p3).unwrap(),
            HalfInt::from_int(1)
        );
        assert_eq!(
            delta_class(HalfInt::from_int(2), 1, &p4).unwrap(),
            HalfInt::ZERO
        );
        assert!(matches!(
            delta_class(HalfInt::from_int(2), 0, &p3),
            Err(Error::AboveDeltaBound { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let json = r#"{"vertices":[{"id":0}],"edges":[{"from":0,"to":"inf","dir":[1,0],"weight":1},{"from":0,"to":"inf","dir":[0,1],"weight":1},{"from":0,"to":"inf","dir":[-1,-1],"weight":1}]}"#;
        let c = CurveCombinatorics::from_json(json).unwrap();
        assert_eq!(c.to_json(), json);
        assert!(CurveCombinatorics::from_json(&json.replace("\"inf\"", "\"nowhere\"")).is_err());
    }
}
