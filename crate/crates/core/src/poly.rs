//! Symmetric Laurent polynomials in `y` with half-integer exponents.
//!
//! Exponents are kept in half units: the key `e` stands for `y^(e/2)`. The
//! coefficient ring is generic; the counting engines use [`crate::RefinedPoly`]
//! (arbitrary precision, unsigned).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigInt;
use num_traits::{CheckedSub, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Coefficient ring of a [`LaurentPoly`]: a commutative semiring that embeds in
/// the integers.
pub trait Coefficient:
    Clone + Eq + fmt::Debug + fmt::Display + Zero + One + for<'a> AddAssign<&'a Self> + Into<BigInt>
where
    for<'a> &'a Self: Mul<&'a Self, Output = Self>,
{
}

impl<C> Coefficient for C
where
    C: Clone
        + Eq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + for<'a> AddAssign<&'a C>
        + Into<BigInt>,
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
}

/// Parity class of the exponents of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// Every power of `y` is an integer.
    Integer,
    /// Every power of `y` is a strict half-integer.
    HalfInteger,
    Mixed,
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LaurentPoly<C> {
    coeffs: BTreeMap<i64, C>,
}

impl<C> Default for LaurentPoly<C> {
    fn default() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<C: Coefficient> LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(HalfInt::ZERO, C::one())
    }

    pub fn monomial(exp: HalfInt, c: C) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.coeffs.insert(exp.halves(), c);
        }
        p
    }

    /// Builds a polynomial from `(exponent in half units, coefficient)` pairs,
    /// summing repeated exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    /// The quantum integer `[m]_y = y^((m-1)/2) + y^((m-3)/2) + ... + y^((1-m)/2)`.
    pub fn quantum_integer(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroQuantumInteger);
        }
        let m = m as i64;
        Ok(Self {
            coeffs: (0..m).map(|i| (m - 1 - 2 * i, C::one())).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, e: i64, c: &C) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(C::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// Terms as `(exponent, coefficient)`, exponents ascending.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (HalfInt, &C)> {
        self.coeffs
            .iter()
            .map(|(&e, c)| (HalfInt::from_halves(e), c))
    }

    pub fn coefficient(&self, exp: HalfInt) -> C {
        self.coeffs
            .get(&exp.halves())
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Highest power of `y` with a nonzero coefficient.
    pub fn degree(&self) -> Result<HalfInt> {
        self.coeffs
            .keys()
            .next_back()
            .map(|&e| HalfInt::from_halves(e))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_coefficient(&self) -> Option<&C> {
        self.coeffs.values().next_back()
    }

    /// `p(y) == p(1/y)`.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(e, c)| self.coeffs.get(&-e) == Some(c))
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut even = false;
        let mut odd = false;
        for &e in self.coeffs.keys() {
            if e % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (false, false) => None,
            (true, false) => Some(Parity::Integer),
            (false, true) => Some(Parity::HalfInteger),
            (true, true) => Some(Parity::Mixed),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&e, a)| (e, a * c)).collect(),
        }
    }

    /// `self - other`, or `None` if some coefficient would go below zero.
    pub fn checked_sub(&self, other: &Self) -> Option<Self>
    where
        C: CheckedSub,
    {
        let mut coeffs = self.coeffs.clone();
        for (e, b) in &other.coeffs {
            let a = coeffs.get(e).cloned().unwrap_or_else(C::zero);
            let d = a.checked_sub(b)?;
            if d.is_zero() {
                coeffs.remove(e);
            } else {
                coeffs.insert(*e, d);
            }
        }
        Some(Self { coeffs })
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Value at `y = 1` (the coefficient sum).
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().cloned().map(Into::into).sum()
    }

    /// Value at `y = -1`; defined only when every power is an integer.
    pub fn eval_at_minus_one(&self) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (&e, c) in &self.coeffs {
            if e % 2 != 0 {
                return Err(Error::HalfIntegerEvaluation);
            }
            let v: BigInt = c.clone().into();
            if (e / 2) % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        Ok(total)
    }

    pub fn evaluate(&self, at: i64) -> Result<BigInt> {
        match at {
            1 => Ok(self.eval_at_one()),
            -1 => self.eval_at_minus_one(),
            other => Err(Error::UnsupportedEvaluationPoint(other)),
        }
    }

    /// `[e_half_units, "coefficient"]` pairs, exponents descending.
    pub fn to_pairs(&self) -> Vec<(i64, String)> {
        self.coeffs
            .iter()
            .rev()
            .map(|(&e, c)| (e, c.to_string()))
            .collect()
    }
}

impl<C: Coefficient + std::str::FromStr> LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    pub fn from_pairs(pairs: &[(i64, String)]) -> Result<Self> {
        let mut p = Self::zero();
        for (e, c) in pairs {
            let c: C = c.parse().map_err(|_| Error::Parse {
                what: "coefficient",
                input: c.clone(),
            })?;
            p.add_term(*e, &c);
        }
        Ok(p)
    }
}

impl<C: Coefficient> Add for &LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coefficient> Add for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    type Output = LaurentPoly<C>;
    fn add(mut self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        self += &rhs;
        self
    }
}

impl<C: Coefficient> AddAssign<&LaurentPoly<C>> for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    fn add_assign(&mut self, rhs: &LaurentPoly<C>) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, c);
        }
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::<C>::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }
}

impl<C: Coefficient> Mul for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self * &rhs
    }
}

impl<C: Coefficient> std::iter::Sum for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

impl<C: Coefficient> std::iter::Product for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, p| acc * p)
    }
}

/// Canonical text: `y^3+13*y^2+94*y+404+94*y^-1+...` and `y^(1/2)+y^(-1/2)`.
impl<C: Coefficient> fmt::Display for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if e == 0 {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            match e {
                2 => f.write_str("y")?,
                _ if e % 2 == 0 => write!(f, "y^{}", e / 2)?,
                _ => write!(f, "y^({}/2)", e)?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> Serialize for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de, C: Coefficient + std::str::FromStr> Deserialize<'de> for LaurentPoly<C>
where
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(deserializer)?;
        Self::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}
