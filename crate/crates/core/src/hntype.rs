//! Harder-Narasimhan types, their polygons, and the polygon partial order.
//!
//! A type `(f_1, ..., f_p)` is a strictly increasing sequence of numerical
//! polynomials of one common degree whose ranks strictly increase and whose
//! slope polynomials `(f_i - f_{i-1}) / (r_i - r_{i-1})` strictly decrease.
//! Slopes are never divided out: two slopes are compared by cross
//! multiplication with the (positive) rank differences.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::numpoly::{Degree, NumPoly, RatPoly, Rational};

/// Why a sequence of polynomials is not a Harder-Narasimhan type.
/// Indices are 1-based positions in the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnTypeError {
    #[error("a Harder-Narasimhan type must be nonempty")]
    EmptyType,
    #[error("condition (1) fails at index {index}: need 0 < f_1 < ... < f_p")]
    Condition1Violation { index: usize },
    #[error("condition (2) fails at index {index}: degree {found} differs from {expected}")]
    Condition2Violation {
        index: usize,
        expected: Degree,
        found: Degree,
    },
    #[error("ranks do not strictly increase at index {index}: r(f_{index}) = r(f_{prev})", prev = index - 1)]
    NonIncreasingRank { index: usize },
    #[error("condition (3) fails at index {index}: slope {index} is not strictly below slope {prev}", prev = index - 1)]
    Condition3Violation { index: usize },
    #[error("quotient shift needs a type of length at least 2")]
    TooShortForShift,
    #[error("abscissa {a} outside the polygon range [0, {max}]")]
    OutOfRange { a: Rational, max: BigInt },
}

impl HnTypeError {
    /// Stable machine-readable name of the diagnostic.
    pub fn code(&self) -> &'static str {
        match self {
            HnTypeError::EmptyType => "EmptyType",
            HnTypeError::Condition1Violation { .. } => "Condition1Violation",
            HnTypeError::Condition2Violation { .. } => "Condition2Violation",
            HnTypeError::NonIncreasingRank { .. } => "NonIncreasingRank",
            HnTypeError::Condition3Violation { .. } => "Condition3Violation",
            HnTypeError::TooShortForShift => "TooShortForShift",
            HnTypeError::OutOfRange { .. } => "OutOfRange",
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            HnTypeError::Condition1Violation { index }
            | HnTypeError::Condition2Violation { index, .. }
            | HnTypeError::NonIncreasingRank { index }
            | HnTypeError::Condition3Violation { index } => Some(*index),
            _ => None,
        }
    }
}

/// A validated Harder-Narasimhan type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HnType {
    polys: Vec<NumPoly>,
}

/// Checks the three defining conditions and returns the validated type.
pub fn validate_hn_type(polys: Vec<NumPoly>) -> Result<HnType, HnTypeError> {
    if polys.is_empty() {
        return Err(HnTypeError::EmptyType);
    }
    let zero = NumPoly::zero();
    for (i, f) in polys.iter().enumerate() {
        let prev = if i == 0 { &zero } else { &polys[i - 1] };
        if f <= prev {
            return Err(HnTypeError::Condition1Violation { index: i + 1 });
        }
    }
    let expected = polys[0].degree();
    for (i, f) in polys.iter().enumerate().skip(1) {
        if f.degree() != expected {
            return Err(HnTypeError::Condition2Violation {
                index: i + 1,
                expected,
                found: f.degree(),
            });
        }
    }
    let ranks: Vec<BigInt> = polys.iter().map(NumPoly::rank).collect();
    for i in 1..polys.len() {
        if ranks[i] <= ranks[i - 1] {
            return Err(HnTypeError::NonIncreasingRank { index: i + 1 });
        }
    }
    // piece i is (f_i - f_{i-1}, r_i - r_{i-1}); slope_i > slope_{i+1} iff
    // (f_i - f_{i-1}) (r_{i+1} - r_i) > (f_{i+1} - f_i) (r_i - r_{i-1})
    let pieces = graded_pieces(&polys, &ranks);
    for i in 1..pieces.len() {
        if slope_cmp(&pieces[i - 1], &pieces[i]) != Ordering::Greater {
            return Err(HnTypeError::Condition3Violation { index: i + 1 });
        }
    }
    Ok(HnType { polys })
}

fn graded_pieces(polys: &[NumPoly], ranks: &[BigInt]) -> Vec<(RatPoly, BigInt)> {
    let mut prev_f = RatPoly::zero();
    let mut prev_r = BigInt::zero();
    polys
        .iter()
        .zip(ranks)
        .map(|(f, r)| {
            let piece = (f.as_poly() - &prev_f, r - &prev_r);
            prev_f = f.as_poly().clone();
            prev_r = r.clone();
            piece
        })
        .collect()
}

/// Compares the reduced polynomials `f/r` and `g/s` for positive `r`, `s`
/// by comparing `s f` with `r g`.
pub fn slope_cmp((f, r): &(RatPoly, BigInt), (g, s): &(RatPoly, BigInt)) -> Ordering {
    debug_assert!(r.is_positive() && s.is_positive());
    f.scale_int(s).eventual_cmp(&g.scale_int(r))
}

impl HnType {
    /// Length `p` of the type.
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn polys(&self) -> &[NumPoly] {
        &self.polys
    }

    pub fn first(&self) -> &NumPoly {
        &self.polys[0]
    }

    pub fn last(&self) -> &NumPoly {
        self.polys.last().expect("types are nonempty")
    }

    pub fn ranks(&self) -> Vec<BigInt> {
        self.polys.iter().map(NumPoly::rank).collect()
    }

    pub fn degree(&self) -> Degree {
        self.polys[0].degree()
    }

    /// Final vertex `(r(f_p), f_p)`.
    pub fn endpoint(&self) -> (BigInt, &NumPoly) {
        (self.last().rank(), self.last())
    }

    /// Graded pieces `(f_i - f_{i-1}, r_i - r_{i-1})`.
    pub fn pieces(&self) -> Vec<(RatPoly, BigInt)> {
        graded_pieces(&self.polys, &self.ranks())
    }

    /// Slope polynomials `(f_i - f_{i-1}) / (r_i - r_{i-1})`.
    pub fn slopes(&self) -> Vec<RatPoly> {
        self.pieces()
            .into_iter()
            .map(|(f, r)| f.scale(&Rational::new(1.into(), r)))
            .collect()
    }

    /// `(f_2 - f_1, ..., f_p - f_1)`, which is again a type.
    pub fn quotient_shift(&self) -> Result<HnType, HnTypeError> {
        if self.len() < 2 {
            return Err(HnTypeError::TooShortForShift);
        }
        let f1 = self.first();
        let shifted = self.polys[1..].iter().map(|f| f - f1).collect();
        let out = validate_hn_type(shifted);
        debug_assert!(
            out.is_ok(),
            "quotient shift of {self} failed to validate: {out:?}"
        );
        out
    }

    pub fn polygon(&self) -> HnPolygon {
        polygon_of(self)
    }

    /// The partial order: every vertex of `self` lies under the polygon of `other`.
    pub fn leq(&self, other: &HnType) -> bool {
        hnt_leq(self, other)
    }

    pub fn relation(&self, other: &HnType) -> TypeRelation {
        match (self.leq(other), other.leq(self)) {
            (true, true) => TypeRelation::Eq,
            (true, false) => TypeRelation::Leq,
            (false, true) => TypeRelation::Geq,
            (false, false) => TypeRelation::Incomparable,
        }
    }
}

impl fmt::Debug for HnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HnType{self}")
    }
}

impl fmt::Display for HnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.polys.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for HnType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.polys.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HnType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let polys = Vec::<NumPoly>::deserialize(deserializer)?;
        validate_hn_type(polys).map_err(serde::de::Error::custom)
    }
}

/// Outcome of comparing two types in both directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeRelation {
    Eq,
    Leq,
    Geq,
    Incomparable,
}

impl TypeRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeRelation::Eq => "EQ",
            TypeRelation::Leq => "LEQ",
            TypeRelation::Geq => "GEQ",
            TypeRelation::Incomparable => "INCOMPARABLE",
        }
    }
}

/// A point `(a, f)` of `Q x Q[λ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonPoint {
    pub a: Rational,
    pub f: RatPoly,
}

impl PolygonPoint {
    pub fn new(a: Rational, f: RatPoly) -> Self {
        PolygonPoint { a, f }
    }

    pub fn at_rank(r: &BigInt, f: RatPoly) -> Self {
        PolygonPoint {
            a: Rational::from_integer(r.clone()),
            f,
        }
    }
}

/// The concave polygon through `(0, 0)` and the points `(r(f_i), f_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnPolygon {
    vertices: Vec<PolygonPoint>,
}

pub fn polygon_of(ty: &HnType) -> HnPolygon {
    let mut vertices = vec![PolygonPoint::new(Rational::zero(), RatPoly::zero())];
    vertices.extend(
        ty.polys()
            .iter()
            .map(|f| PolygonPoint::at_rank(&f.rank(), f.as_poly().clone())),
    );
    HnPolygon { vertices }
}

impl HnPolygon {
    pub fn vertices(&self) -> &[PolygonPoint] {
        &self.vertices
    }

    pub fn max_abscissa(&self) -> &Rational {
        &self
            .vertices
            .last()
            .expect("polygon has at least two vertices")
            .a
    }

    /// The unique `h` with `(a, h)` on the polygon.
    pub fn interpolate_at(&self, a: &Rational) -> Result<RatPoly, HnTypeError> {
        let max = self.max_abscissa();
        if a.is_negative() || a > max {
            return Err(HnTypeError::OutOfRange {
                a: a.clone(),
                max: max.to_integer(),
            });
        }
        let seg = self
            .vertices
            .windows(2)
            .find(|w| &w[0].a <= a && a <= &w[1].a)
            .expect("range checked above");
        let (left, right) = (&seg[0], &seg[1]);
        if a == &left.a {
            return Ok(left.f.clone());
        }
        if a == &right.a {
            return Ok(right.f.clone());
        }
        let t = (&right.a - a) / (&right.a - &left.a);
        let s = Rational::from_integer(1.into()) - &t;
        Ok(&left.f.scale(&t) + &right.f.scale(&s))
    }

    /// Whether `(a, f)` lies under some point of the polygon with the same abscissa.
    pub fn lies_under(&self, point: &PolygonPoint) -> bool {
        match self.interpolate_at(&point.a) {
            Ok(h) => point.f <= h,
            Err(_) => false,
        }
    }
}

pub fn interpolate_at(poly: &HnPolygon, a: &Rational) -> Result<RatPoly, HnTypeError> {
    poly.interpolate_at(a)
}

pub fn lies_under(point: &PolygonPoint, poly: &HnPolygon) -> bool {
    poly.lies_under(point)
}

/// `lower <= upper` in the polygon order.
pub fn hnt_leq(lower: &HnType, upper: &HnType) -> bool {
    let poly = upper.polygon();
    lower
        .polys()
        .iter()
        .all(|f| poly.lies_under(&PolygonPoint::at_rank(&f.rank(), f.as_poly().clone())))
}
