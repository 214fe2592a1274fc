//! Exact points of the upper half-plane with rational coordinates.
//!
//! The group preserves rationality of both coordinates, so orbits of a
//! rational base point can be deduplicated exactly instead of by floating
//! tolerance. Parsing accepts the forms "i", "2i", "1/2+3/4*i",
//! "-1/3+2i"; the imaginary part must be positive.

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::plane::Point;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Exact upper-half-plane point. Ordered and hashable so orbit images can
/// be collected into ordered sets with no tolerance decisions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint {
    x: BigRational,
    y: BigRational,
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational) -> Result<Self> {
        if !y.is_positive() {
            return Err(Error::NotInUpperHalfPlane {
                x: x.to_f64().unwrap_or(f64::NAN),
                y: y.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(RationalPoint { x, y })
    }

    /// Point from integer fractions xn/xd + (yn/yd) i.
    pub fn from_integers(xn: i64, xd: i64, yn: i64, yd: i64) -> Result<Self> {
        if xd == 0 || yd == 0 {
            return Err(Error::BadParameter("zero denominator".into()));
        }
        RationalPoint::new(
            BigRational::new(BigInt::from(xn), BigInt::from(xd)),
            BigRational::new(BigInt::from(yn), BigInt::from(yd)),
        )
    }

    pub fn i() -> Self {
        RationalPoint { x: BigRational::zero(), y: BigRational::one() }
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    /// Image under the element acting as a Möbius map, computed exactly.
    pub fn apply(&self, g: &GroupElement) -> RationalPoint {
        let (a, b, c, d) = (big(g.a), big(g.b), big(g.c), big(g.d));
        let u = &self.x;
        let v = &self.y;
        let cu_d = &c * u + &d;
        let cv = &c * v;
        let den = &cu_d * &cu_d + &cv * &cv;
        // det = 1 collapses the numerator of the imaginary part to v
        let x = ((&a * u + &b) * &cu_d + &a * &c * (v * v)) / &den;
        let y = v / den;
        // den > 0: cu_d and cv cannot both vanish when v > 0 and det = 1
        RationalPoint { x, y }
    }

    /// Nearest floating point, for distance work.
    pub fn to_point(&self) -> Result<Point> {
        let x = self.x.to_f64().ok_or(Error::Overflow("rational to f64"))?;
        let y = self.y.to_f64().ok_or(Error::Overflow("rational to f64"))?;
        Point::new(x, y)
    }
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.contains('.') {
        return Err(Error::Parse(format!(
            "'{s}': decimal notation not accepted, use exact fractions like 3/2"
        )));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt =
        num.parse().map_err(|_| Error::Parse(format!("'{s}' is not a rational")))?;
    let den: BigInt =
        den.parse().map_err(|_| Error::Parse(format!("'{s}' is not a rational")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("'{s}' has a zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

impl std::str::FromStr for RationalPoint {
    type Err = Error;

    /// Accepts "x+y*i" with rational parts, and the shorthands "i", "yi",
    /// "y*i", "x+i". The imaginary term is mandatory and must come last.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s
            .strip_suffix('i')
            .ok_or_else(|| Error::Parse(format!("'{s}': expected a trailing i term")))?;
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that separates the two terms; a sign at
        // index 0 belongs to the real (or lone imaginary) coefficient
        let split = body.char_indices().rev().find(|&(k, ch)| k > 0 && (ch == '+' || ch == '-'));
        let (re, im) = match split {
            Some((k, ch)) => {
                let coef = &body[k + 1..];
                let coef = if coef.is_empty() { "1".to_string() } else { coef.to_string() };
                let signed = if ch == '-' { format!("-{coef}") } else { coef };
                (parse_rational(&body[..k])?, parse_rational(&signed)?)
            }
            None => {
                let coef = match body {
                    "" => BigRational::one(),
                    "-" => -BigRational::one(),
                    other => parse_rational(other)?,
                };
                (BigRational::zero(), coef)
            }
        };
        RationalPoint::new(re, im)
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.x.is_zero() {
            if self.y.is_one() {
                write!(f, "i")
            } else {
                write!(f, "{}i", self.y)
            }
        } else if self.y.is_one() {
            write!(f, "{}+i", self.x)
        } else if self.y.is_positive() {
            write!(f, "{}+{}i", self.x, self.y)
        } else {
            unreachable!("imaginary part is positive by construction")
        }
    }
}
