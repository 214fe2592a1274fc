//! Geometry of the upper half-plane with curvature -1.
//!
//! Distances default to hyperbolic units; the Teichmuller convention for
//! the once-punctured torus halves them, and `Units::convert` moves between
//! the two. Geodesics are stored in
//! canonical form as vertical lines or semicircles centered on the real
//! axis.

use crate::error::{Error, Result};
use crate::group::{ElementClass, GroupElement};
use serde::Serialize;

/// Absolute tolerance for boundary decisions on distances.
pub const DISTANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::NotInUpperHalfPlane { x, y });
        }
        Ok(Point { x, y })
    }

    /// The imaginary unit, center of the standard fundamental domain edge.
    pub fn i() -> Self {
        Point { x: 0.0, y: 1.0 }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Unit convention for lengths. Teichmuller units (the surface convention
/// for the once-punctured torus) are half of hyperbolic ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Units {
    Hyperbolic,
    Teichmuller,
}

impl Units {
    pub fn convert(value: f64, from: Units, to: Units) -> f64 {
        match (from, to) {
            (Units::Hyperbolic, Units::Teichmuller) => value / 2.0,
            (Units::Teichmuller, Units::Hyperbolic) => value * 2.0,
            _ => value,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Units::Hyperbolic => "hyp",
            Units::Teichmuller => "teich",
        }
    }
}

impl std::str::FromStr for Units {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyp" | "hyperbolic" => Ok(Units::Hyperbolic),
            "teich" | "teichmuller" | "surface" => Ok(Units::Teichmuller),
            other => Err(Error::Parse(format!("unknown units '{other}'"))),
        }
    }
}

/// Geodesic in canonical form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geodesic {
    Vertical { x: f64 },
    Semicircle { center: f64, radius: f64 },
}

impl Geodesic {
    pub fn from_endpoints(p: f64, q: f64) -> Result<Self> {
        if p == q || !p.is_finite() || !q.is_finite() {
            return Err(Error::BadParameter(format!(
                "geodesic endpoints must be distinct finite reals, got {p}, {q}"
            )));
        }
        Ok(Geodesic::Semicircle { center: (p + q) / 2.0, radius: (p - q).abs() / 2.0 })
    }
}

impl std::fmt::Display for Geodesic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Geodesic::Vertical { x } => write!(f, "vertical x={x}"),
            Geodesic::Semicircle { center, radius } => {
                write!(f, "semicircle center={center} radius={radius}")
            }
        }
    }
}

/// d(z, w) = 2 asinh(|z - w| / (2 sqrt(Im z Im w))), numerically stable for
/// nearby and for distant points.
pub fn distance(z: Point, w: Point) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    let chord = (dx * dx + dy * dy).sqrt();
    2.0 * (chord / (2.0 * (z.y * w.y).sqrt())).asinh()
}

/// Action of a group element as a Möbius map.
pub fn mobius_apply(g: &GroupElement, z: Point) -> Point {
    let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
    let den = (c * z.x + d).powi(2) + (c * z.y).powi(2);
    // det = 1 collapses the imaginary part to y / |cz + d|^2
    let x = ((a * z.x + b) * (c * z.x + d) + a * c * z.y * z.y) / den;
    let y = z.y / den;
    Point { x, y }
}

/// Axis of a hyperbolic element: the geodesic through its two real fixed
/// points, the roots of c x^2 + (d - a) x - b = 0.
pub fn axis_of(g: &GroupElement) -> Result<Geodesic> {
    if g.classify() != ElementClass::Hyperbolic {
        return Err(Error::WrongClass { trace: g.trace(), needed: "hyperbolic" });
    }
    // Canonical hyperbolic elements always have c > 0: c = 0 with det 1
    // forces a = d = 1 and trace 2.
    debug_assert!(g.c > 0);
    let (a, c, d) = (g.a as f64, g.c as f64, g.d as f64);
    let tr = g.a as f64 + g.d as f64;
    let disc = (tr * tr - 4.0).sqrt();
    let r1 = ((a - d) - disc) / (2.0 * c);
    let r2 = ((a - d) + disc) / (2.0 * c);
    Geodesic::from_endpoints(r1, r2)
}

/// Translation length 2 arccosh(|tr| / 2) in hyperbolic units.
pub fn translation_length(g: &GroupElement) -> Result<f64> {
    if g.classify() != ElementClass::Hyperbolic {
        return Err(Error::WrongClass { trace: g.trace(), needed: "hyperbolic" });
    }
    Ok(2.0 * (g.trace() as f64 / 2.0).acosh())
}

/// Real Möbius transformation with positive determinant; isometry of the
/// half-plane used internally to move geodesics into standard position.
#[derive(Debug, Clone, Copy)]
struct RealMobius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl RealMobius {
    fn apply(&self, z: Point) -> Point {
        let den = (self.c * z.x + self.d).powi(2) + (self.c * z.y).powi(2);
        let det = self.a * self.d - self.b * self.c;
        let x = ((self.a * z.x + self.b) * (self.c * z.x + self.d)
            + self.a * self.c * z.y * z.y)
            / den;
        let y = det * z.y / den;
        Point { x, y }
    }

    fn inverse(&self) -> RealMobius {
        RealMobius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}

/// Map sending the geodesic onto the vertical line x = 0.
fn to_standard_vertical(l: &Geodesic) -> RealMobius {
    match *l {
        Geodesic::Vertical { x } => RealMobius { a: 1.0, b: -x, c: 0.0, d: 1.0 },
        // endpoints center - radius -> 0 and center + radius -> infinity
        Geodesic::Semicircle { center, radius } => RealMobius {
            a: 1.0,
            b: -(center - radius),
            c: -1.0,
            d: center + radius,
        },
    }
}

/// Distance from a point to a geodesic, in closed form.
pub fn dist_to_geodesic(z: Point, l: &Geodesic) -> f64 {
    match *l {
        Geodesic::Vertical { x } => ((z.x - x).abs() / z.y).asinh(),
        Geodesic::Semicircle { center, radius } => {
            let u2 = (z.x - center).powi(2) + z.y * z.y;
            (((u2 - radius * radius) / (2.0 * radius * z.y)).abs()).asinh()
        }
    }
}

/// Orthogonal projection onto a geodesic: move the geodesic to the standard
/// vertical, project to i|z|, and pull back.
pub fn project_to_geodesic(z: Point, l: &Geodesic) -> Point {
    let m = to_standard_vertical(l);
    let w = m.apply(z);
    let t = (w.x * w.x + w.y * w.y).sqrt();
    m.inverse().apply(Point { x: 0.0, y: t })
}

/// Diameter of the projection of a point set onto a geodesic.
pub fn projection_span(points: &[Point], l: &Geodesic) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InsufficientData("projection span of an empty set".into()));
    }
    let m = to_standard_vertical(l);
    // On the standard vertical the projection is parametrized by
    // log |w|, so the span is the spread of that coordinate.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &p in points {
        let w = m.apply(p);
        let s = 0.5 * (w.x * w.x + w.y * w.y).ln();
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok(hi - lo)
}

/// Signed arclength coordinate of the projection of z along the geodesic.
/// Useful for locating points of an axis orbit; the origin and sign are
/// fixed by the canonical form of the geodesic, not by the element.
pub fn axis_coordinate(z: Point, l: &Geodesic) -> f64 {
    let m = to_standard_vertical(l);
    let w = m.apply(z);
    0.5 * (w.x * w.x + w.y * w.y).ln()
}

/// How far an element of translation length lambda moves a point at
/// distance t from its axis: 2 asinh(cosh t sinh(lambda / 2)), exact in
/// curvature -1.
pub fn displacement_at_offset(t: f64, lambda: f64) -> f64 {
    2.0 * (t.cosh() * (lambda / 2.0).sinh()).asinh()
}

/// Diameter of the orthogonal projection onto a geodesic of the ball of
/// radius rho whose center sits at distance t >= rho from the geodesic:
/// 2 asinh(sinh rho / cosh t).
pub fn ball_shadow_diameter(t: f64, rho: f64) -> f64 {
    2.0 * ((rho.sinh()) / t.cosh()).asinh()
}

/// The point whose projection onto the geodesic has arclength coordinate s
/// and whose distance to the geodesic is |offset|, on the side picked by the
/// sign. Inverse of (axis_coordinate, dist_to_geodesic) up to side choice.
pub fn point_at_axis_offset(l: &Geodesic, s: f64, offset: f64) -> Point {
    // On the standard vertical the locus at distance t is the ray
    // x = y sinh(t); radially, e^s (sin alpha, cos alpha) with
    // tan(alpha) = sinh(t).
    let alpha = offset.sinh().atan();
    let w = Point { x: s.exp() * alpha.sin(), y: s.exp() * alpha.cos() };
    to_standard_vertical(l).inverse().apply(w)
}
