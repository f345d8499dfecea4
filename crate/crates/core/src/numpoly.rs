//! Exact polynomials in one variable `λ` over the rationals.
//!
//! [`RatPoly`] is stored in the monomial basis with trailing zeros trimmed.
//! Its [`Ord`] implementation is the *eventual* order: `f < g` iff
//! `f(m) < g(m)` for every sufficiently large integer `m`, which is decided
//! by the first nonzero coefficient of `f - g` from the top degree down.
//!
//! [`NumPoly`] wraps a [`RatPoly`] that takes integer values on the integers
//! (a numerical polynomial). Hilbert polynomials live here.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumPolyError {
    #[error("polynomial {0} is not numerical (takes a non-integer value at some integer)")]
    NotNumerical(RatPoly),
    #[error("polynomials are identical; the sign of their difference never stabilizes")]
    IdenticalPolynomials,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// Degree of a polynomial. The zero polynomial has degree [`Degree::MinusInfinity`],
/// which sorts below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Parses `"p/q"` or `"p"` (ASCII, optional leading `-`) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumPolyError> {
    let bad = || NumPolyError::BadRational(s.to_string());
    let t = s.trim();
    if t.is_empty() || !t.is_ascii() {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A polynomial in `λ` with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `λ`.
    pub fn lambda() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `c λ^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// Coefficients in the monomial basis, lowest degree first; empty for zero.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> RatPoly {
        self.scale(&Rational::from_integer(c.clone()))
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }

    /// Exact value at an integer point (Horner).
    pub fn evaluate(&self, m: &BigInt) -> Rational {
        let x = Rational::from_integer(m.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &x + c)
    }

    pub fn evaluate_at(&self, m: i64) -> Rational {
        self.evaluate(&BigInt::from(m))
    }

    /// Sign of `self - other` at all sufficiently large integers.
    pub fn eventual_cmp(&self, other: &RatPoly) -> Ordering {
        let n = self.coeffs.len().max(other.coeffs.len());
        for k in (0..n).rev() {
            let ord = self.coeff(k).cmp(&other.coeff(k));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

    /// Eventual sign of the polynomial itself.
    pub fn eventual_sign(&self) -> Ordering {
        match self.leading_coeff() {
            None => Ordering::Equal,
            Some(c) => c.cmp(&Rational::zero()),
        }
    }

    /// Coefficients in the binomial basis `C(λ, k)`, obtained as the forward
    /// differences `Δ^k f(0)`.
    pub fn to_binomial(&self) -> Vec<Rational> {
        let Some(d) = self.degree().finite() else {
            return Vec::new();
        };
        let mut diffs: Vec<Rational> = (0..=d as i64).map(|m| self.evaluate_at(m)).collect();
        let mut out = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            out.push(diffs[0].clone());
            diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }

    /// Inverse of [`RatPoly::to_binomial`].
    pub fn from_binomial(coeffs: &[Rational]) -> RatPoly {
        let mut acc = RatPoly::zero();
        let mut basis = RatPoly::one();
        for (k, c) in coeffs.iter().enumerate() {
            acc = &acc + &basis.scale(c);
            // C(λ, k+1) = C(λ, k) (λ - k) / (k + 1)
            let factor = RatPoly::from_coeffs(vec![rat(-(k as i64)), Rational::one()]);
            basis = basis
                .mul(&factor)
                .scale(&Rational::new(BigInt::one(), BigInt::from(k + 1)));
        }
        acc
    }

    /// True iff the polynomial maps integers to integers.
    pub fn is_numerical(&self) -> bool {
        self.to_binomial().iter().all(Rational::is_integer)
    }

    /// An integer `m0` such that the sign of `self(m) - other(m)` is the same
    /// for every integer `m >= m0`. Uses `1 + ` the Cauchy root bound of the
    /// difference, rounded up.
    pub fn stabilization_bound(&self, other: &RatPoly) -> Result<BigInt, NumPolyError> {
        let h = self - other;
        let lead = h
            .leading_coeff()
            .ok_or(NumPolyError::IdenticalPolynomials)?
            .abs();
        let n = h.coeffs.len() - 1;
        let max_ratio = h.coeffs[..n]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        Ok((max_ratio + Rational::one()).ceil().to_integer())
    }

    /// Multiplies through by the least common denominator: returns `(c, g)` with
    /// `self = g / c`, `g` integral and `c > 0`.
    pub fn clear_denominators(&self) -> (BigInt, RatPoly) {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        (lcm.clone(), self.scale_int(&lcm))
    }
}

impl PartialOrd for RatPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.eventual_cmp(other)
    }
}

impl<'a> Add<&'a RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &'a RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &'a RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Add for RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: RatPoly) -> RatPoly {
        &self + &rhs
    }
}

impl Sub for RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: RatPoly) -> RatPoly {
        &self - &rhs
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "λ".to_string(),
                _ => format!("λ^{k}"),
            };
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else if a.is_integer() {
                write!(f, "{a}{mono}")?;
            } else if a.numer().is_one() {
                write!(f, "{mono}/{}", a.denom())?;
            } else {
                write!(f, "{}{mono}/{}", a.numer(), a.denom())?;
            }
        }
        Ok(())
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CoeffsVisitor;

        impl<'de> Visitor<'de> for CoeffsVisitor {
            type Value = RatPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of rational coefficient strings, lowest degree first")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<RatPoly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(c) = seq.next_element::<CoeffLiteral>()? {
                    coeffs.push(c.0);
                }
                Ok(RatPoly::from_coeffs(coeffs))
            }
        }

        deserializer.deserialize_seq(CoeffsVisitor)
    }
}

/// A coefficient given either as a `"p/q"` string or as a bare JSON integer.
struct CoeffLiteral(Rational);

impl<'de> Deserialize<'de> for CoeffLiteral {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LitVisitor;

        impl Visitor<'_> for LitVisitor {
            type Value = CoeffLiteral;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<CoeffLiteral, E> {
                parse_rational(v).map(CoeffLiteral).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<CoeffLiteral, E> {
                Ok(CoeffLiteral(rat(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<CoeffLiteral, E> {
                Ok(CoeffLiteral(Rational::from_integer(BigInt::from(v))))
            }
        }

        deserializer.deserialize_any(LitVisitor)
    }
}

/// A numerical polynomial: integer-valued on the integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NumPoly(RatPoly);

impl NumPoly {
    pub fn new(poly: RatPoly) -> Result<Self, NumPolyError> {
        if poly.is_numerical() {
            Ok(NumPoly(poly))
        } else {
            Err(NumPolyError::NotNumerical(poly))
        }
    }

    pub fn zero() -> Self {
        NumPoly(RatPoly::zero())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        NumPoly(RatPoly::from_ints(coeffs))
    }

    pub fn as_poly(&self) -> &RatPoly {
        &self.0
    }

    pub fn into_poly(self) -> RatPoly {
        self.0
    }

    /// `r(f)`: the leading coefficient times `d!`, and `0` for the zero polynomial.
    pub fn rank(&self) -> BigInt {
        let Some(d) = self.0.degree().finite() else {
            return BigInt::zero();
        };
        let factorial: BigInt = (1..=d).map(BigInt::from).product();
        let r = self.0.coeffs[d].clone() * Rational::from_integer(factorial);
        debug_assert!(
            r.is_integer(),
            "rank of a numerical polynomial must be an integer"
        );
        r.to_integer()
    }

    /// Rank as `i64` when it fits (ranks of realistic inputs are small).
    pub fn rank_i64(&self) -> Option<i64> {
        self.rank().to_i64()
    }
}

impl Deref for NumPoly {
    type Target = RatPoly;
    fn deref(&self) -> &RatPoly {
        &self.0
    }
}

impl TryFrom<RatPoly> for NumPoly {
    type Error = NumPolyError;
    fn try_from(poly: RatPoly) -> Result<Self, NumPolyError> {
        NumPoly::new(poly)
    }
}

impl From<NumPoly> for RatPoly {
    fn from(p: NumPoly) -> RatPoly {
        p.0
    }
}

impl<'a> Add<&'a NumPoly> for &NumPoly {
    type Output = NumPoly;
    fn add(self, rhs: &'a NumPoly) -> NumPoly {
        NumPoly(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a NumPoly> for &NumPoly {
    type Output = NumPoly;
    fn sub(self, rhs: &'a NumPoly) -> NumPoly {
        NumPoly(&self.0 - &rhs.0)
    }
}

impl fmt::Debug for NumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumPoly({})", self.0)
    }
}

impl fmt::Display for NumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for NumPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NumPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let poly = RatPoly::deserialize(deserializer)?;
        NumPoly::new(poly).map_err(de::Error::custom)
    }
}
