//! Structural checks on computed invariants and cross-engine validation.

use std::fmt::Display;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::floor::{compute_g_floor, FloorShape};
use crate::halfint::HalfInt;
use crate::lattice::{binomial, HTransverseShape};
use crate::paths::{compute_g_path, LambdaOrder};
use crate::spec::DegreeSpec;
use crate::RefinedPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Floor,
    Path,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Floor => "floor",
            Engine::Path => "path",
        })
    }
}

/// G(g,Δ) with the chosen engine. Genera above the interior-point count give 0.
pub fn compute_g(
    spec: &DegreeSpec,
    genus: u32,
    engine: Engine,
    lambda: LambdaOrder,
) -> Result<RefinedPoly> {
    match engine {
        Engine::Floor => {
            let shape = spec.floor_shape().ok_or(Error::UnsupportedShape)?;
            Ok(compute_g_floor(shape, genus))
        }
        Engine::Path => {
            let deg = spec.degree();
            if !deg.is_primitive() {
                return Err(Error::NonPrimitiveDegree);
            }
            if u64::from(genus) > deg.dual_polygon().lattice_counts().interior {
                return Ok(RefinedPoly::zero());
            }
            compute_g_path(&deg, genus, lambda)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    /// A check that passes when both sides render identically.
    pub fn equal(name: &str, expected: impl Display, actual: impl Display) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check {
            name: name.to_string(),
            pass: expected == actual,
            expected,
            actual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluations {
    #[serde(serialize_with = "as_string")]
    pub at_one: BigInt,
    #[serde(serialize_with = "as_opt_string")]
    pub at_minus_one: Option<BigInt>,
}

impl Evaluations {
    pub fn of(g: &RefinedPoly) -> Self {
        Evaluations {
            at_one: g.eval_at_one(),
            at_minus_one: g.eval_at_minus_one().ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub spec: String,
    pub genus: u32,
    pub polynomial: RefinedPoly,
    /// δ(g,Δ); absent when the genus exceeds the interior-point count.
    #[serde(serialize_with = "as_opt_string")]
    pub delta: Option<HalfInt>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<Evaluations>,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn as_string<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn as_opt_string<T: Display, S: Serializer>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// Degree, leading coefficient, symmetry and positivity of a computed G(g,Δ),
/// plus the `a_{δ-1}` formula for rational curves on h-transverse polygons.
pub fn structural_checks(spec: &DegreeSpec, genus: u32, g: &RefinedPoly) -> InvariantReport {
    let deg = spec.degree();
    let delta = deg.delta_invariant(genus).ok();
    let mut checks = Vec::new();
    let show_degree = |p: &RefinedPoly| p.degree().map_or("-".to_string(), |d| d.to_string());

    match delta {
        None => checks.push(Check::equal("vanishes above maximal genus", "0", g)),
        Some(delta) => {
            checks.push(Check::equal("degree = delta", delta, show_degree(g)));
            if let Some(dn) = delta.to_integer() {
                let expected =
                    deg.pi_count() * binomial(u64::from(genus) + dn as u64, u64::from(genus));
                checks.push(Check::equal(
                    "leading coefficient",
                    expected,
                    g.coefficient(delta),
                ));
            }
            checks.push(Check::equal("symmetric", true, g.is_symmetric()));
            let positive = !g.is_zero() && g.terms().all(|(_, c)| !c.is_zero());
            checks.push(Check::equal("positive coefficients", true, positive));
            if genus == 0 && deg.is_primitive() {
                if let Some(shape) = deg.dual_polygon().h_transverse() {
                    if let Ok(a) = a_delta_minus_1_formula(&shape) {
                        let exp = delta - HalfInt::from_int(1);
                        checks.push(Check::equal("a_{delta-1}", a, g.coefficient(exp)));
                    }
                }
            }
        }
    }

    InvariantReport {
        spec: spec.to_string(),
        genus,
        polynomial: g.clone(),
        delta,
        checks,
        evaluations: Some(Evaluations::of(g)),
    }
}

/// `κ − 2 + c₊ + c₋ + c_l + c_r`: the coefficient of `y^{δ-1}` in G(0,Δ).
pub fn a_delta_minus_1_formula(shape: &HTransverseShape) -> Result<i64> {
    let deg = shape.degree()?;
    if deg.dual_polygon().lattice_counts().interior == 0 {
        return Err(Error::OutOfRange(
            "polygon has no interior lattice point".into(),
        ));
    }
    let corner = |d: u32, slice: i64| match (d, slice) {
        (d, _) if d > 0 => 2,
        (_, 1) => 1,
        _ => 0,
    };
    let c_plus = corner(shape.d_plus, shape.top_slice_divergence());
    let c_minus = corner(shape.d_minus, shape.bottom_slice_weight());
    let unit_steps = |s: &[i64]| s.windows(2).filter(|w| w[0] - w[1] == 1).count() as i64;
    Ok(deg.kappa() as i64 - 2
        + c_plus
        + c_minus
        + unit_steps(&shape.d_left)
        + unit_steps(&shape.d_right))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaMinusOneBound {
    /// Guaranteed number of rational (δ-1)-curves.
    pub bound: u32,
    #[serde(serialize_with = "as_string")]
    pub a_delta_minus_1: BigUint,
    /// Most that the δ-curve can contribute to `a_{δ-1}`.
    pub delta_curve_contribution: u64,
    pub slack: i64,
}

impl DeltaMinusOneBound {
    pub fn holds(&self) -> bool {
        self.slack >= i64::from(self.bound)
    }
}

pub fn delta_minus_1_lower_bound(shape: FloorShape) -> Result<DeltaMinusOneBound> {
    lower_bound_from(shape, &compute_g_floor(shape, 0))
}

fn lower_bound_from(shape: FloorShape, g: &RefinedPoly) -> Result<DeltaMinusOneBound> {
    let (bound, contribution) = match shape {
        FloorShape::P2 { d } if d >= 3 => (7, 3 * u64::from(d) - 6),
        FloorShape::P1xP1 { d, r } if d >= 2 && r >= 2 => (8, 2 * u64::from(d + r) - 6),
        _ => {
            return Err(Error::OutOfRange(format!(
                "{shape:?} is below the bound's threshold"
            )))
        }
    };
    let delta = shape.degree().delta_invariant(0)?;
    let a = g.coefficient(delta - HalfInt::from_int(1));
    let a_i: i64 = a
        .clone()
        .try_into()
        .map_err(|_| Error::OutOfRange("a_{δ-1} overflows i64".into()))?;
    Ok(DeltaMinusOneBound {
        bound,
        a_delta_minus_1: a,
        delta_curve_contribution: contribution,
        slack: a_i - contribution as i64,
    })
}

/// Computes G(g,Δ) (floor engine when available) and runs
/// [`structural_checks`], adding the (δ-1)-curve bound for rational curves.
pub fn analyze(spec: &DegreeSpec, genus: u32) -> Result<InvariantReport> {
    let engine = if spec.floor_shape().is_some() {
        Engine::Floor
    } else {
        Engine::Path
    };
    let g = compute_g(spec, genus, engine, LambdaOrder::default())?;
    let mut report = structural_checks(spec, genus, &g);
    if let (0, Some(shape)) = (genus, spec.floor_shape()) {
        if let Ok(b) = lower_bound_from(shape, &g) {
            report.checks.push(Check {
                name: "(delta-1)-curve lower bound".into(),
                expected: format!(">= {}", b.bound),
                actual: b.slack.to_string(),
                pass: b.holds(),
            });
        }
    }
    Ok(report)
}

/// G(g,Δ) from every λ-order of the path engine and from the floor engine, when
/// each applies. All results must agree.
pub fn cross_validate(spec: &DegreeSpec, genus: u32) -> Result<InvariantReport> {
    let mut results: Vec<(String, RefinedPoly)> = Vec::new();
    if spec.degree().is_primitive() {
        for lam in LambdaOrder::all() {
            results.push((
                format!("path {lam}"),
                compute_g(spec, genus, Engine::Path, lam)?,
            ));
        }
    }
    if spec.floor_shape().is_some() {
        let g = compute_g(spec, genus, Engine::Floor, LambdaOrder::default())?;
        results.push(("floor".to_string(), g));
    }
    let reference = results.first().ok_or(Error::UnsupportedShape)?.1.clone();
    let checks = results
        .iter()
        .map(|(name, g)| Check::equal(&format!("{name} agrees"), &reference, g))
        .collect();
    Ok(InvariantReport {
        spec: spec.to_string(),
        genus,
        delta: spec.degree().delta_invariant(genus).ok(),
        evaluations: Some(Evaluations::of(&reference)),
        polynomial: reference,
        checks,
    })
}
