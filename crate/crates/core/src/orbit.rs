//! Orbit and element counts in metric balls.
//!
//! The element ball Omega_r(x) = { g : d(x, g x) <= r } is enumerated by
//! scanning an entry-norm ball, using 2 cosh d(i, g i) = a^2+b^2+c^2+d^2:
//! every g moving x by at most r moves i by at most r + 2 d(i, x). Orbit
//! point counts deduplicate images exactly over rational base points.

use crate::error::{Error, Result};
use crate::group::{scan_norm_ball, ElementClass, GroupElement, MAX_NORM_BOUND};
use crate::plane::{distance, mobius_apply, Point, DISTANCE_TOL};
use crate::rational::RationalPoint;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Entry-norm cap containing every element that moves i by at most r.
fn norm_cap(r_hyp: f64) -> Result<i128> {
    if !r_hyp.is_finite() || r_hyp < 0.0 {
        return Err(Error::BadParameter(format!("ball radius {r_hyp} must be finite and >= 0")));
    }
    // small radius pad so the float filter, not the integer cap, decides
    // boundary membership
    let m = 2.0 * (r_hyp + 1e-6).cosh() + 2.0;
    if m >= MAX_NORM_BOUND as f64 {
        return Err(Error::Overflow("ball radius exceeds the entry bound"));
    }
    Ok(m as i128)
}

/// Visits every g with d(x, g x) <= r + DISTANCE_TOL, passing the exact
/// displacement alongside. Order is deterministic but not sorted.
pub fn scan_omega_ball<F: FnMut(GroupElement, f64)>(
    x: Point,
    r_hyp: f64,
    mut visit: F,
) -> Result<()> {
    let d0 = distance(Point::i(), x);
    let m = norm_cap(r_hyp + 2.0 * d0)?;
    scan_norm_ball(m, |g| {
        let d = distance(x, mobius_apply(&g, x));
        if d <= r_hyp + DISTANCE_TOL {
            visit(g, d);
        }
    })
}

/// The element ball Omega_r(x), sorted in canonical order.
pub fn omega_ball(x: Point, r_hyp: f64) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    scan_omega_ball(x, r_hyp, |g, _| out.push(g))?;
    out.sort_unstable();
    Ok(out)
}

/// Number of distinct orbit points g y within distance r of x, deduplicated
/// exactly.
pub fn orbit_point_count(x: Point, y: &RationalPoint, r_hyp: f64) -> Result<u64> {
    let yf = y.to_point()?;
    let pad = distance(Point::i(), x) + distance(Point::i(), yf);
    let m = norm_cap(r_hyp + pad)?;
    let mut seen = BTreeSet::new();
    scan_norm_ball(m, |g| {
        if distance(x, mobius_apply(&g, yf)) <= r_hyp + DISTANCE_TOL {
            seen.insert(y.apply(&g));
        }
    })?;
    Ok(seen.len() as u64)
}

/// Orbit point count for a base point without exact coordinates: images
/// closer than eps are merged greedily. Only for diagnostics; the merge is
/// order-dependent for pathological eps.
pub fn orbit_point_count_with_tolerance(
    x: Point,
    y: Point,
    r_hyp: f64,
    eps: f64,
) -> Result<u64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::BadParameter(format!("merge tolerance {eps} must be positive")));
    }
    let pad = distance(Point::i(), x) + distance(Point::i(), y);
    let m = norm_cap(r_hyp + pad)?;
    let mut images = Vec::new();
    scan_norm_ball(m, |g| {
        let w = mobius_apply(&g, y);
        if distance(x, w) <= r_hyp + DISTANCE_TOL {
            images.push(w);
        }
    })?;
    images.sort_unstable_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    let mut reps: Vec<Point> = Vec::new();
    for w in images {
        if !reps.iter().rev().any(|p| distance(*p, w) <= eps) {
            reps.push(w);
        }
    }
    Ok(reps.len() as u64)
}

/// All elements fixing x (within DISTANCE_TOL), sorted.
pub fn stabilizer_of(x: Point) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    scan_omega_ball(x, 0.0, |g, _| out.push(g))?;
    out.sort_unstable();
    Ok(out)
}

/// Largest point stabilizer in the group: realized at the two orbifold
/// points, the orbits of i and of (1 + sqrt(-3))/2.
pub fn max_stabilizer_order() -> Result<u64> {
    let corner = Point::new(0.5, 3f64.sqrt() / 2.0)?;
    let a = stabilizer_of(Point::i())?.len();
    let b = stabilizer_of(corner)?.len();
    Ok(a.max(b) as u64)
}

/// Per-radius counts over one ball scan.
#[derive(Debug, Clone, Serialize)]
pub struct CountRecord {
    pub r_hyp: f64,
    /// elements with d(x, g x) <= r
    pub omega_count: u64,
    /// distinct orbit points g x within r of x
    pub orbit_count: u64,
    pub frac_hyperbolic: f64,
    pub frac_parabolic: f64,
    pub frac_elliptic: f64,
    /// elements within DISTANCE_TOL of the sphere d = r
    pub boundary_hits: u64,
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InsufficientData("no radii given".into()));
    }
    if !radii.iter().all(|r| r.is_finite() && *r >= 0.0) {
        return Err(Error::BadParameter("radii must be finite and >= 0".into()));
    }
    if !radii.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::BadParameter("radii must be strictly ascending".into()));
    }
    Ok(())
}

/// Single-scan census of Omega_r(x) and of the orbit of x, at each radius.
pub fn census(x: &RationalPoint, radii: &[f64]) -> Result<Vec<CountRecord>> {
    check_radii(radii)?;
    let xf = x.to_point()?;
    let r_max = *radii.last().unwrap();

    let mut elements: Vec<(f64, ElementClass)> = Vec::new();
    let mut points: BTreeMap<RationalPoint, f64> = BTreeMap::new();
    scan_omega_ball(xf, r_max, |g, d| {
        elements.push((d, g.classify()));
        let dist = points.entry(x.apply(&g)).or_insert(d);
        *dist = dist.min(d);
    })?;
    elements.sort_unstable_by(|p, q| p.0.total_cmp(&q.0));
    let mut point_dists: Vec<f64> = points.into_values().collect();
    point_dists.sort_unstable_by(f64::total_cmp);

    let records = radii
        .iter()
        .map(|&r| {
            let cut = elements.partition_point(|(d, _)| *d <= r + DISTANCE_TOL);
            let inside = &elements[..cut];
            let omega = cut as u64;
            let class_count = |want: ElementClass| {
                inside.iter().filter(|(_, c)| *c == want).count() as f64 / cut.max(1) as f64
            };
            let boundary = inside.iter().filter(|(d, _)| (d - r).abs() <= DISTANCE_TOL).count();
            let orbit = point_dists.partition_point(|d| *d <= r + DISTANCE_TOL);
            CountRecord {
                r_hyp: r,
                omega_count: omega,
                orbit_count: orbit as u64,
                frac_hyperbolic: class_count(ElementClass::Hyperbolic),
                frac_parabolic: class_count(ElementClass::Parabolic),
                frac_elliptic: class_count(ElementClass::Elliptic),
                boundary_hits: boundary as u64,
            }
        })
        .collect();
    Ok(records)
}
