//! Degree spec strings: `P2:d=<n>`, `P1xP1:d=<n>,r=<m>`,
//! `polygon:(x0,y0),(x1,y1),...` and `vectors:(a,b)x<k>;(c,d)x<m>;...`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::floor::FloorShape;
use crate::lattice::{BalancedDegree, IntVec2, LatticePolygon};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeSpec {
    P2 {
        d: u32,
    },
    P1xP1 {
        d: u32,
        r: u32,
    },
    /// A polygon; the degree is its primitive degree.
    Polygon(LatticePolygon),
    /// An explicit multiset of vectors.
    Vectors(BalancedDegree),
}

impl DegreeSpec {
    pub fn degree(&self) -> BalancedDegree {
        match self {
            DegreeSpec::P2 { d } => FloorShape::P2 { d: *d }.degree(),
            DegreeSpec::P1xP1 { d, r } => FloorShape::P1xP1 { d: *d, r: *r }.degree(),
            DegreeSpec::Polygon(p) => p.primitive_degree(),
            DegreeSpec::Vectors(v) => v.clone(),
        }
    }

    pub fn polygon(&self) -> LatticePolygon {
        match self {
            DegreeSpec::Polygon(p) => p.clone(),
            other => other.degree().dual_polygon(),
        }
    }

    /// The floor-diagram shape, when the degree is `Δ_d` or `Δ_{d,r}`.
    pub fn floor_shape(&self) -> Option<FloorShape> {
        match self {
            DegreeSpec::P2 { d } => Some(FloorShape::P2 { d: *d }),
            DegreeSpec::P1xP1 { d, r } => Some(FloorShape::P1xP1 { d: *d, r: *r }),
            DegreeSpec::Polygon(p) => FloorShape::from_polygon(p),
            DegreeSpec::Vectors(v) if v.is_primitive() => {
                FloorShape::from_polygon(&v.dual_polygon())
            }
            DegreeSpec::Vectors(_) => None,
        }
    }
}

impl fmt::Display for DegreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSpec::P2 { d } => write!(f, "P2:d={d}"),
            DegreeSpec::P1xP1 { d, r } => write!(f, "P1xP1:d={d},r={r}"),
            DegreeSpec::Polygon(p) => write!(f, "polygon:{p}"),
            DegreeSpec::Vectors(v) => write!(f, "vectors:{v}"),
        }
    }
}

fn parse_err(input: &str) -> Error {
    Error::Parse {
        what: "degree spec",
        input: input.to_string(),
    }
}

fn parse_params(body: &str, names: &[&str], input: &str) -> Result<Vec<u32>> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != names.len() {
        return Err(parse_err(input));
    }
    parts
        .iter()
        .zip(names)
        .map(|(part, name)| {
            let (k, v) = part.split_once('=').ok_or_else(|| parse_err(input))?;
            if k.trim() != *name {
                return Err(parse_err(input));
            }
            let n: u32 = v.trim().parse().map_err(|_| parse_err(input))?;
            if n == 0 {
                return Err(Error::InvalidDegree(format!("{name} must be positive")));
            }
            Ok(n)
        })
        .collect()
}

/// Parses `(x,y)` at the start of `s`, returning the point and the rest.
fn parse_point<'a>(s: &'a str, input: &str) -> Result<(IntVec2, &'a str)> {
    let s = s.trim_start();
    let rest = s.strip_prefix('(').ok_or_else(|| parse_err(input))?;
    let close = rest.find(')').ok_or_else(|| parse_err(input))?;
    let (x, y) = rest[..close]
        .split_once(',')
        .ok_or_else(|| parse_err(input))?;
    let x: i64 = x.trim().parse().map_err(|_| parse_err(input))?;
    let y: i64 = y.trim().parse().map_err(|_| parse_err(input))?;
    Ok((IntVec2::new(x, y), &rest[close + 1..]))
}

impl FromStr for DegreeSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let (kind, body) = input
            .trim()
            .split_once(':')
            .ok_or_else(|| parse_err(input))?;
        match kind.trim() {
            "P2" => {
                let p = parse_params(body, &["d"], input)?;
                Ok(DegreeSpec::P2 { d: p[0] })
            }
            "P1xP1" => {
                let p = parse_params(body, &["d", "r"], input)?;
                Ok(DegreeSpec::P1xP1 { d: p[0], r: p[1] })
            }
            "polygon" => {
                let mut pts = Vec::new();
                let mut rest = body;
                loop {
                    let (p, r) = parse_point(rest, input)?;
                    pts.push(p);
                    let r = r.trim_start();
                    if r.is_empty() {
                        break;
                    }
                    rest = r.strip_prefix(',').ok_or_else(|| parse_err(input))?;
                }
                Ok(DegreeSpec::Polygon(LatticePolygon::from_vertices(&pts)?))
            }
            "vectors" => {
                let mut vectors = Vec::new();
                for item in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let (v, rest) = parse_point(item, input)?;
                    let rest = rest.trim();
                    let count: usize = match rest.strip_prefix('x') {
                        Some(n) => n.trim().parse().map_err(|_| parse_err(input))?,
                        None if rest.is_empty() => 1,
                        None => return Err(parse_err(input)),
                    };
                    vectors.extend(std::iter::repeat_n(v, count));
                }
                Ok(DegreeSpec::Vectors(BalancedDegree::new(vectors)?))
            }
            _ => Err(parse_err(input)),
        }
    }
}
