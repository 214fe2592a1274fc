//! Conjugacy classes of hyperbolic elements inside metric balls.
//!
//! A hyperbolic element is determined up to conjugacy by its translation
//! length, and its class sweeps out copies of one axis across the plane.
//! This module counts class members whose action drags a probe point into
//! a ball, splits the near-axis members by how close their axis passes to
//! the base point, realizes the power-shift injection used to compare
//! class counts with plain orbit counts, and tallies how many conjugators
//! share each axis (buckets). A continued-fraction diagnostic reports how
//! deep an axis dives into the cusp.
//!
//! Displacement identity used throughout: an element with translation
//! length lambda moves a point at distance t from its axis by exactly
//! 2 asinh(cosh t sinh(lambda / 2)).

use crate::error::{Error, Result};
use crate::group::{scan_norm_ball, ElementClass, GroupElement};
use crate::growth::GrowthSeries;
use crate::orbit::scan_omega_ball;
use crate::plane::{
    axis_coordinate, axis_of, dist_to_geodesic, distance, mobius_apply, project_to_geodesic,
    translation_length, Geodesic, Point, Units, DISTANCE_TOL,
};
use crate::rational::RationalPoint;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Hyperbolic element with its axis data and primitive root.
#[derive(Debug, Clone)]
pub struct PseudoAnosov {
    pub element: GroupElement,
    pub axis: Geodesic,
    /// translation length of `element`, hyperbolic units
    pub lambda_hyp: f64,
    /// generator of the cyclic centralizer, oriented so element = primitive^power
    pub primitive: GroupElement,
    pub power: u32,
}

impl PseudoAnosov {
    pub fn new(element: GroupElement) -> Result<Self> {
        let axis = axis_of(&element)?;
        let lambda_hyp = translation_length(&element)?;
        let primitive = primitive_root(&element)?;
        let mut power = 0u32;
        let mut cur = GroupElement::identity();
        while cur != element {
            cur = cur.compose(&primitive)?;
            power += 1;
            if power > 64 {
                return Err(Error::BadParameter(format!(
                    "{element} is not a positive power of its primitive root {primitive}"
                )));
            }
        }
        Ok(PseudoAnosov { element, axis, lambda_hyp, primitive, power })
    }

    pub fn lambda(&self, units: Units) -> f64 {
        Units::convert(self.lambda_hyp, Units::Hyperbolic, units)
    }

    fn lambda_primitive(&self) -> f64 {
        self.lambda_hyp / self.power as f64
    }
}

/// Primitive coefficient triple (A, B, C) of the fixed-point equation
/// A x^2 + B x + C = 0, gcd-reduced with A > 0. Conjugate elements get
/// conjugate axes; equal keys mean equal axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AxisKey(pub i128, pub i128, pub i128);

impl std::fmt::Display for AxisKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} {} {})", self.0, self.1, self.2)
    }
}

/// Exact axis invariant: the reduced coefficients of c x^2 + (d - a) x - b.
pub fn axis_key(g: &GroupElement) -> Result<AxisKey> {
    if g.classify() != ElementClass::Hyperbolic {
        return Err(Error::WrongClass { trace: g.trace(), needed: "hyperbolic" });
    }
    // canonical hyperbolic elements have c > 0, so the leading coefficient
    // is already positive
    let (a, b, c) = (g.c as i128, g.d as i128 - g.a as i128, -(g.b as i128));
    let div = gcd_i128(gcd_i128(a.abs(), b.abs()), c.abs()).max(1);
    debug_assert!(a > 0);
    Ok(AxisKey(a / div, b / div, c / div))
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Generator of the centralizer of a hyperbolic element, oriented so the
/// input is one of its positive powers. Searched by exact axis match inside
/// the entry-norm ball of the input, which always contains the root: a
/// shorter translation along the same axis moves i less far.
pub fn primitive_root(g: &GroupElement) -> Result<GroupElement> {
    let key = axis_key(g)?;
    let mut best: Option<GroupElement> = None;
    scan_norm_ball(g.frobenius_norm_sq(), |h| {
        if h.classify() == ElementClass::Hyperbolic && axis_key(&h) == Ok(key) {
            let better = match &best {
                None => true,
                Some(b) => (h.trace(), h) < (b.trace(), *b),
            };
            if better {
                best = Some(h);
            }
        }
    })?;
    let root = best.expect("the element itself matches its own axis key");
    for cand in [root, root.inverse()] {
        let mut cur = cand;
        for _ in 0..64 {
            if cur == *g {
                return Ok(cand);
            }
            // powers leaving i64 range can no longer reach g
            match cur.compose(&cand) {
                Ok(next) => cur = next,
                Err(_) => break,
            }
        }
    }
    Err(Error::BadParameter(format!("no primitive root of {g} within power 64")))
}

/// Distinct class members psi = f phi f^-1 reached by conjugators f with
/// d(x, f x) <= reach, each with its lexicographically least conjugator.
fn members_by_conjugator(
    phi: &GroupElement,
    x: Point,
    reach: f64,
) -> Result<BTreeMap<GroupElement, GroupElement>> {
    let mut map: BTreeMap<GroupElement, GroupElement> = BTreeMap::new();
    let mut first_err = None;
    scan_omega_ball(x, reach, |f, _| match phi.conjugate_by(&f) {
        Ok(psi) => {
            map.entry(psi)
                .and_modify(|cur| {
                    if f < *cur {
                        *cur = f;
                    }
                })
                .or_insert(f);
        }
        Err(e) => {
            if first_err.is_none() {
                first_err = Some(e);
            }
        }
    })?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(map),
    }
}

/// One conjugacy count query: class of phi, probe pair (x, y), ball radius.
/// `y_exact` enables exact image deduplication; d_shift caches
/// max(d(x, p), d(p, y)) for the axis projection p of x.
#[derive(Debug, Clone)]
pub struct ConjugacyQuery {
    pub phi: PseudoAnosov,
    pub x: Point,
    pub y: Point,
    pub y_exact: Option<RationalPoint>,
    pub r_hyp: f64,
    pub a_const: f64,
    pub d_shift: f64,
    pub x_proj: Point,
}

impl ConjugacyQuery {
    pub fn new(
        phi: PseudoAnosov,
        x: Point,
        y: Point,
        y_exact: Option<RationalPoint>,
        r_hyp: f64,
        a_const: f64,
    ) -> Result<Self> {
        if !(r_hyp.is_finite() && r_hyp >= 0.0) {
            return Err(Error::BadParameter(format!("radius {r_hyp} must be finite and >= 0")));
        }
        if !(a_const.is_finite() && a_const > 0.0) {
            return Err(Error::BadParameter(format!("constant A = {a_const} must be positive")));
        }
        if let Some(p) = &y_exact {
            if distance(p.to_point()?, y) > DISTANCE_TOL {
                return Err(Error::BadParameter(
                    "exact and floating coordinates of y disagree".into(),
                ));
            }
        }
        let x_proj = project_to_geodesic(x, &phi.axis);
        let d_shift = distance(x, x_proj).max(distance(x_proj, y));
        Ok(ConjugacyQuery { phi, x, y, y_exact, r_hyp, a_const, d_shift, x_proj })
    }

    /// Search radius around the axis projection of x that provably reaches a
    /// conjugator of every admissible class member. The first term is the
    /// design default; the second is what the sliding argument needs: a
    /// member whose axis passes at distance t from x has a conjugator moving
    /// the projection by at most d(x, p) + t + lambda_0 / 2.
    fn conjugator_reach(&self) -> f64 {
        let lam = self.phi.lambda_hyp;
        let design = (self.r_hyp + 2.0 * self.d_shift + self.a_const) / 2.0 + lam;
        let dx = distance(self.x, self.x_proj);
        let dxy = distance(self.x, self.y);
        let sliding = dx + max_axis_distance(self.r_hyp + dxy, lam) + self.phi.lambda_primitive() / 2.0;
        design.max(sliding) + 0.01
    }
}

/// Largest possible distance from a point to the axis of a class member
/// moving that point by at most d: inverting the displacement identity.
fn max_axis_distance(d: f64, lambda: f64) -> f64 {
    let u = ((d / 2.0).sinh() / (lambda / 2.0).sinh()).max(1.0);
    u.acosh()
}

/// Class members whose image of y lands in the R-ball around x, sorted.
pub fn conjugacy_ball(q: &ConjugacyQuery) -> Result<Vec<GroupElement>> {
    Ok(survey(q, q.r_hyp)?.into_iter().map(|(psi, _)| psi).collect())
}

/// Distinct admissible class members paired with d(x, psi y), sorted by
/// element; one conjugator scan at the given radius.
fn survey(q: &ConjugacyQuery, r_cap: f64) -> Result<Vec<(GroupElement, f64)>> {
    let reach = q.conjugator_reach();
    let mut out: BTreeMap<GroupElement, f64> = BTreeMap::new();
    let mut first_err = None;
    scan_omega_ball(q.x_proj, reach, |f, _| match q.phi.element.conjugate_by(&f) {
        Ok(psi) => {
            let d = distance(q.x, mobius_apply(&psi, q.y));
            if d <= r_cap + DISTANCE_TOL {
                out.insert(psi, d);
            }
        }
        Err(e) => {
            if first_err.is_none() {
                first_err = Some(e);
            }
        }
    })?;
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(out.into_iter().collect())
}

/// Reference implementation: filter conjugators of a plain ball around x.
/// The flag reports whether the search radius provably exhausts the class
/// members admissible at R, by the same sliding bound as the fast path.
pub fn conjugacy_ball_naive(
    q: &ConjugacyQuery,
    search_radius: f64,
) -> Result<(Vec<GroupElement>, bool)> {
    let mut out: BTreeMap<GroupElement, ()> = BTreeMap::new();
    let mut first_err = None;
    scan_omega_ball(q.x, search_radius, |f, _| match q.phi.element.conjugate_by(&f) {
        Ok(psi) => {
            if distance(q.x, mobius_apply(&psi, q.y)) <= q.r_hyp + DISTANCE_TOL {
                out.insert(psi, ());
            }
        }
        Err(e) => {
            if first_err.is_none() {
                first_err = Some(e);
            }
        }
    })?;
    if let Some(e) = first_err {
        return Err(e);
    }
    let dx = distance(q.x, q.x_proj);
    let dxy = distance(q.x, q.y);
    let required = max_axis_distance(q.r_hyp + dxy, q.phi.lambda_hyp)
        + dx
        + q.phi.lambda_primitive() / 2.0;
    let certified = search_radius >= required - DISTANCE_TOL;
    Ok((out.into_keys().collect(), certified))
}

/// Per-radius class counts: members as elements, and distinct image points
/// of y (exact when the query carries exact coordinates).
#[derive(Debug, Clone, Serialize)]
pub struct GammaRecord {
    pub r_hyp: f64,
    /// class members psi with d(x, psi y) <= r
    pub class_elements: u64,
    /// distinct points psi y in the ball
    pub gamma: u64,
    /// members within DISTANCE_TOL of the sphere
    pub boundary_hits: u64,
}

/// Counts at each radius from a single scan at the largest one.
/// Radii must be strictly ascending.
pub fn gamma_records(q: &ConjugacyQuery, radii: &[f64]) -> Result<Vec<GammaRecord>> {
    if radii.is_empty() {
        return Err(Error::InsufficientData("no radii given".into()));
    }
    if !radii.windows(2).all(|w| w[0] < w[1]) || !radii.iter().all(|r| r.is_finite() && *r >= 0.0)
    {
        return Err(Error::BadParameter("radii must be >= 0 and strictly ascending".into()));
    }
    let r_max = *radii.last().unwrap();
    let wide = ConjugacyQuery { r_hyp: r_max, ..q.clone() };
    let members = survey(&wide, r_max)?;

    // one distance per distinct image point; exact dedup when possible
    let mut point_dists: Vec<f64> = match &q.y_exact {
        Some(y) => {
            let mut seen: BTreeMap<RationalPoint, f64> = BTreeMap::new();
            for (psi, d) in &members {
                seen.entry(y.apply(psi)).or_insert(*d);
            }
            seen.into_values().collect()
        }
        None => {
            let mut images: Vec<(Point, f64)> =
                members.iter().map(|(psi, d)| (mobius_apply(psi, q.y), *d)).collect();
            images.sort_unstable_by(|p, r| p.0.x.total_cmp(&r.0.x).then(p.0.y.total_cmp(&r.0.y)));
            let mut reps: Vec<(Point, f64)> = Vec::new();
            for (w, d) in images {
                if !reps.iter().rev().any(|(p, _)| distance(*p, w) <= DISTANCE_TOL) {
                    reps.push((w, d));
                }
            }
            reps.into_iter().map(|(_, d)| d).collect()
        }
    };
    point_dists.sort_unstable_by(f64::total_cmp);
    let mut member_dists: Vec<f64> = members.iter().map(|(_, d)| *d).collect();
    member_dists.sort_unstable_by(f64::total_cmp);

    Ok(radii
        .iter()
        .map(|&r| GammaRecord {
            r_hyp: r,
            class_elements: member_dists.partition_point(|d| *d <= r + DISTANCE_TOL) as u64,
            gamma: point_dists.partition_point(|d| *d <= r + DISTANCE_TOL) as u64,
            boundary_hits: member_dists.iter().filter(|d| (*d - r).abs() <= DISTANCE_TOL).count()
                as u64,
        })
        .collect())
}

/// Distinct-image counts as a growth series in hyperbolic units.
pub fn gamma_series(q: &ConjugacyQuery, radii: &[f64]) -> Result<GrowthSeries> {
    let recs = gamma_records(q, radii)?;
    GrowthSeries::new(recs.iter().map(|r| (r.r_hyp, r.gamma)).collect(), Units::Hyperbolic)
}

/// Near-axis split of the class of phi as seen from an on-axis point.
#[derive(Debug, Clone, Serialize)]
pub struct NearAxisSplit {
    /// members whose axis passes within (r + a - lambda) / 2 of x
    pub p_plus: Vec<GroupElement>,
    /// members whose axis passes within (r - 2a - lambda) / 2 of x
    pub p_minus: Vec<GroupElement>,
    pub t_plus: f64,
    pub t_minus: f64,
    pub boundary_hits: u64,
}

/// Splits the class by axis distance. Requires x on the axis of phi.
pub fn p_sets(phi: &PseudoAnosov, x: Point, r_hyp: f64, a_const: f64) -> Result<NearAxisSplit> {
    let off = dist_to_geodesic(x, &phi.axis);
    if off > DISTANCE_TOL {
        return Err(Error::OffAxis { dist: off });
    }
    if !(r_hyp.is_finite() && a_const.is_finite() && a_const > 0.0) {
        return Err(Error::BadParameter(format!(
            "need finite radius and positive constant, got R = {r_hyp}, A = {a_const}"
        )));
    }
    let t_plus = (r_hyp + a_const - phi.lambda_hyp) / 2.0;
    let t_minus = (r_hyp - 2.0 * a_const - phi.lambda_hyp) / 2.0;
    let mut split = NearAxisSplit {
        p_plus: Vec::new(),
        p_minus: Vec::new(),
        t_plus,
        t_minus,
        boundary_hits: 0,
    };
    if t_plus < 0.0 {
        return Ok(split);
    }
    let reach = t_plus + phi.lambda_primitive() / 2.0 + 0.01;
    for psi in members_by_conjugator(&phi.element, x, reach)?.into_keys() {
        let t = dist_to_geodesic(x, &axis_of(&psi)?);
        if (t - t_plus).abs() <= DISTANCE_TOL || (t - t_minus).abs() <= DISTANCE_TOL {
            split.boundary_hits += 1;
        }
        if t <= t_plus + DISTANCE_TOL {
            split.p_plus.push(psi);
        }
        if t <= t_minus + DISTANCE_TOL {
            split.p_minus.push(psi);
        }
    }
    Ok(split)
}

/// Outcome of snapping a conjugator to the base point by a power shift:
/// g = psi^k f places the image of x within half a translation length of
/// the projection of x onto the axis of psi.
#[derive(Debug, Clone, Serialize)]
pub struct InjectionResult {
    pub psi: GroupElement,
    pub f: GroupElement,
    pub k: i64,
    pub g: GroupElement,
    /// d(x, g x)
    pub image_displacement: f64,
    /// arclength offset of g x from the projection of x on the axis of psi
    pub foot_offset: f64,
}

/// Picks the power k minimizing the offset of psi^k f x from the projection
/// of x onto axis(psi); ties take the smaller |k|, then the smaller k.
/// Requires f phi f^-1 = psi and x on the axis of phi.
pub fn injection_witness(
    psi: &GroupElement,
    f: &GroupElement,
    phi: &PseudoAnosov,
    x: Point,
) -> Result<InjectionResult> {
    if phi.element.conjugate_by(f)? != *psi {
        return Err(Error::BadParameter(format!(
            "{f} does not conjugate {} to {psi}",
            phi.element
        )));
    }
    let off = dist_to_geodesic(x, &phi.axis);
    if off > DISTANCE_TOL {
        return Err(Error::OffAxis { dist: off });
    }
    let axis = axis_of(psi)?;
    let fx = mobius_apply(f, x);
    let s_fx = axis_coordinate(fx, &axis);
    let s_foot = axis_coordinate(project_to_geodesic(x, &axis), &axis);
    let step = axis_coordinate(mobius_apply(psi, fx), &axis) - s_fx;
    debug_assert!((step.abs() - phi.lambda_hyp).abs() < 1e-6);
    let k_real = (s_foot - s_fx) / step;
    let mut k = k_real.floor();
    let err = |k: f64| (s_fx + k * step - s_foot).abs();
    let (lo, hi) = (err(k), err(k + 1.0));
    if hi < lo - 1e-12 || ((hi - lo).abs() <= 1e-12 && tie_break(k_real.floor() + 1.0, k)) {
        k += 1.0;
    }
    let k = k as i64;
    let g = psi.pow(k)?.compose(f)?;
    let gx = mobius_apply(&g, x);
    Ok(InjectionResult {
        psi: *psi,
        f: *f,
        k,
        g,
        image_displacement: distance(x, gx),
        foot_offset: axis_coordinate(gx, &axis) - s_foot,
    })
}

/// true when a is preferred over b on an exact tie
fn tie_break(a: f64, b: f64) -> bool {
    (a.abs(), a) < (b.abs(), b)
}

/// Exhaustive run of the power-shift injection over the near-axis set.
#[derive(Debug, Clone, Serialize)]
pub struct InjectionReport {
    pub r_hyp: f64,
    pub a_const: f64,
    pub total: u64,
    /// images must stay within this displacement: (r + a) / 2
    pub image_radius: f64,
    pub max_image_displacement: f64,
    pub max_foot_offset: f64,
    /// pairs of distinct members snapped to the same element; must be empty
    pub collisions: Vec<(GroupElement, GroupElement)>,
    /// members whose snapped image escapes the target ball; must be empty
    pub escapes: Vec<GroupElement>,
    pub witnesses: Vec<InjectionResult>,
}

/// Runs the witness over every member of the near-axis set P_plus(r) and
/// checks injectivity and the image bound.
pub fn injection_report(
    phi: &PseudoAnosov,
    x: Point,
    r_hyp: f64,
    a_const: f64,
) -> Result<InjectionReport> {
    let off = dist_to_geodesic(x, &phi.axis);
    if off > DISTANCE_TOL {
        return Err(Error::OffAxis { dist: off });
    }
    let t_plus = (r_hyp + a_const - phi.lambda_hyp) / 2.0;
    let mut report = InjectionReport {
        r_hyp,
        a_const,
        total: 0,
        image_radius: (r_hyp + a_const) / 2.0,
        max_image_displacement: 0.0,
        max_foot_offset: 0.0,
        collisions: Vec::new(),
        escapes: Vec::new(),
        witnesses: Vec::new(),
    };
    if t_plus < 0.0 {
        return Ok(report);
    }
    let reach = t_plus + phi.lambda_primitive() / 2.0 + 0.01;
    let mut snapped: BTreeMap<GroupElement, GroupElement> = BTreeMap::new();
    for (psi, f) in members_by_conjugator(&phi.element, x, reach)? {
        let t = dist_to_geodesic(x, &axis_of(&psi)?);
        if t > t_plus + DISTANCE_TOL {
            continue;
        }
        let w = injection_witness(&psi, &f, phi, x)?;
        report.total += 1;
        report.max_image_displacement = report.max_image_displacement.max(w.image_displacement);
        report.max_foot_offset = report.max_foot_offset.max(w.foot_offset.abs());
        if w.image_displacement > report.image_radius + DISTANCE_TOL {
            report.escapes.push(psi);
        }
        if let Some(prev) = snapped.insert(w.g, psi) {
            report.collisions.push((prev, psi));
        }
        report.witnesses.push(w);
    }
    Ok(report)
}

/// Size and axis distance of one conjugator bucket.
#[derive(Debug, Clone, Serialize)]
pub struct AxisBucket {
    pub key: AxisKey,
    /// conjugators f in the (r - 2a)/2 ball with axis(f phi f^-1) on this axis
    pub size: u64,
    pub axis_dist: f64,
    /// axis stays outside the shrunken ball of radius (r - 2a - lambda)/2 - l
    pub far: bool,
}

/// Census of conjugator buckets by image axis.
#[derive(Debug, Clone, Serialize)]
pub struct BucketReport {
    pub r_hyp: f64,
    pub a_const: f64,
    pub l_width: f64,
    pub lambda: f64,
    /// conjugators live in the ball of this radius: (r - 2a) / 2
    pub conjugator_radius: f64,
    /// near-axis members have axis distance at most this: (r - 2a - lambda) / 2
    pub inner_radius: f64,
    /// shrunken-ball radius separating far axes: inner_radius - l
    pub near_radius: f64,
    pub omega_inner: u64,
    pub omega_near: u64,
    pub axes_total: u64,
    pub axes_far: u64,
    /// 2 when an order-two element reverses the axis (the class of the
    /// primitive root contains its own inverse), doubling every bucket;
    /// 1 otherwise
    pub symmetry_factor: u32,
    /// cap on far bucket sizes: symmetry_factor (2 (l + a) / lambda0 + 2),
    /// counting one foot family per coset of the primitive's powers in the
    /// setwise axis stabilizer
    pub bucket_bound: f64,
    pub max_far_bucket: u64,
    pub far_bucket_sum: u64,
    /// lower bound for far_bucket_sum: omega_inner - (1 + 2(l+a)/lambda0) omega_near
    pub sum_lower_bound: f64,
    pub type_a: u64,
    pub type_b: u64,
    pub type_c: u64,
    pub bound_ok: bool,
    pub sum_ok: bool,
    pub buckets: Vec<AxisBucket>,
}

/// Groups the conjugators of the (r-2a)/2 ball by the axis of the member
/// they produce, and checks the far-bucket size cap plus the counting
/// inequality that powers the lower growth bound. Requires x on the axis
/// and l strictly below (r - 2a - lambda) / 2.
pub fn bucket_census(
    phi: &PseudoAnosov,
    x: Point,
    r_hyp: f64,
    a_const: f64,
    l_width: f64,
) -> Result<BucketReport> {
    let off = dist_to_geodesic(x, &phi.axis);
    if off > DISTANCE_TOL {
        return Err(Error::OffAxis { dist: off });
    }
    if !(a_const.is_finite() && a_const > 0.0 && l_width.is_finite() && l_width > 0.0) {
        return Err(Error::BadParameter(format!(
            "need positive constants, got A = {a_const}, L = {l_width}"
        )));
    }
    let lambda = phi.lambda_hyp;
    let inner_radius = (r_hyp - 2.0 * a_const - lambda) / 2.0;
    if l_width >= inner_radius {
        return Err(Error::BadParameter(format!(
            "bucket width L = {l_width:.4} must stay below (R - 2A - lambda)/2 = \
             {inner_radius:.4}; this class needs R > {:.4}",
            2.0 * l_width + 2.0 * a_const + lambda
        )));
    }
    let conjugator_radius = (r_hyp - 2.0 * a_const) / 2.0;
    let near_radius = inner_radius - l_width;

    struct Bucket {
        size: u64,
        axis_dist: f64,
    }
    let mut buckets: HashMap<AxisKey, Bucket> = HashMap::new();
    let mut omega_inner = 0u64;
    let mut omega_near = 0u64;
    let mut type_a = 0u64;
    let mut type_b = 0u64;
    let mut type_c = 0u64;
    let mut first_err: Option<Error> = None;
    scan_omega_ball(x, conjugator_radius, |f, d| {
        let psi = match phi.element.conjugate_by(&f) {
            Ok(p) => p,
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
                return;
            }
        };
        let key = match axis_key(&psi) {
            Ok(k) => k,
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
                return;
            }
        };
        let bucket = buckets.entry(key).or_insert_with(|| Bucket {
            size: 0,
            axis_dist: dist_to_geodesic(x, &axis_of(&psi).expect("member is hyperbolic")),
        });
        bucket.size += 1;
        let t = bucket.axis_dist;
        if d <= near_radius + DISTANCE_TOL {
            omega_near += 1;
        }
        if d <= inner_radius + DISTANCE_TOL {
            omega_inner += 1;
            if t > near_radius + DISTANCE_TOL {
                type_a += 1;
            } else if d <= near_radius + DISTANCE_TOL {
                type_b += 1;
            } else {
                type_c += 1;
            }
        }
    })?;
    if let Some(e) = first_err {
        return Err(e);
    }

    // slides along a bucket's axis go in steps of the primitive length, and
    // a reciprocal class carries a second, flipped family per axis
    let lambda0 = phi.lambda_primitive();
    let symmetry_factor: u32 = if reciprocal_flip(&phi.primitive)?.is_some() { 2 } else { 1 };
    let bucket_bound =
        symmetry_factor as f64 * (2.0 * (l_width + a_const) / lambda0 + 2.0);
    let mut out: Vec<AxisBucket> = buckets
        .into_iter()
        .filter(|(_, b)| b.axis_dist <= inner_radius + DISTANCE_TOL)
        .map(|(key, b)| AxisBucket {
            key,
            size: b.size,
            axis_dist: b.axis_dist,
            far: b.axis_dist > near_radius + DISTANCE_TOL,
        })
        .collect();
    out.sort_unstable_by_key(|p| p.key);
    let axes_total = out.len() as u64;
    let axes_far = out.iter().filter(|b| b.far).count() as u64;
    let max_far_bucket = out.iter().filter(|b| b.far).map(|b| b.size).max().unwrap_or(0);
    let far_bucket_sum: u64 = out.iter().filter(|b| b.far).map(|b| b.size).sum();
    let sum_lower_bound =
        omega_inner as f64 - (1.0 + 2.0 * (l_width + a_const) / lambda0) * omega_near as f64;

    Ok(BucketReport {
        r_hyp,
        a_const,
        l_width,
        lambda,
        conjugator_radius,
        inner_radius,
        near_radius,
        omega_inner,
        omega_near,
        axes_total,
        axes_far,
        symmetry_factor,
        bucket_bound,
        max_far_bucket,
        far_bucket_sum,
        sum_lower_bound,
        type_a,
        type_b,
        type_c,
        bound_ok: max_far_bucket as f64 <= bucket_bound + DISTANCE_TOL,
        sum_ok: far_bucket_sum as f64 >= sum_lower_bound - DISTANCE_TOL,
        buckets: out,
    })
}

/// Order-two element conjugating a primitive hyperbolic element to its
/// inverse, if one exists; the lexicographically least such flip. Any flip
/// is a half-turn about a point on the axis, and composing with primitive
/// powers slides that point along the axis in steps of half a translation
/// length, so when a flip exists at all, one moves i by at most
/// 2 d(i, axis) + lambda. The bounded scan therefore decides existence.
pub fn reciprocal_flip(primitive: &GroupElement) -> Result<Option<GroupElement>> {
    if primitive.classify() != ElementClass::Hyperbolic {
        return Err(Error::WrongClass { trace: primitive.trace(), needed: "hyperbolic" });
    }
    let axis = axis_of(primitive)?;
    let lambda0 = translation_length(primitive)?;
    let reach = 2.0 * dist_to_geodesic(Point::i(), &axis) + lambda0 + 0.01;
    let inv = primitive.inverse();
    let mut best: Option<GroupElement> = None;
    let mut first_err = None;
    scan_omega_ball(Point::i(), reach, |s, _| {
        // half-turns are exactly the trace-zero elements
        if s.trace() != 0 {
            return;
        }
        match primitive.conjugate_by(&s) {
            Ok(c) if c == inv => {
                if best.is_none_or(|b| s < b) {
                    best = Some(s);
                }
            }
            Ok(_) => {}
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    })?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Continued-fraction profile of the attracting fixed point.
#[derive(Debug, Clone, Serialize)]
pub struct ThicknessReport {
    /// largest partial quotient over the repeating part; high values mean
    /// the axis climbs far up the cusp
    pub max_quotient: i128,
    pub period: u32,
    /// quotients of one repeating block
    pub cycle: Vec<i128>,
    /// steps before the expansion becomes periodic
    pub preperiod: u32,
}

/// Expands the attracting fixed point (a - d + sign(tr) sqrt(tr^2 - 4))/(2c)
/// as an exact periodic continued fraction and reports the repeating block.
pub fn thickness_diagnostic(g: &GroupElement) -> Result<ThicknessReport> {
    if g.classify() != ElementClass::Hyperbolic {
        return Err(Error::WrongClass { trace: g.trace(), needed: "hyperbolic" });
    }
    let tau = g.a as i128 + g.d as i128;
    let disc = tau * tau - 4;
    // state (p, q) encodes (p + sqrt(disc)) / q; q | disc - p^2 holds at the
    // start because disc - (a - d)^2 = 4 b c, and is preserved by the step
    let (mut p, mut q) = if tau > 0 {
        (g.a as i128 - g.d as i128, 2 * g.c as i128)
    } else {
        (g.d as i128 - g.a as i128, -2 * g.c as i128)
    };
    let sqrt_floor = {
        let s = (disc as u128).isqrt() as i128;
        debug_assert!(s * s < disc && (s + 1) * (s + 1) > disc);
        s
    };
    // (p + sqrt(disc)) / q >= m, decided exactly; sqrt(disc) is irrational
    // since tr^2 - 4 is never a square for |tr| >= 3
    let ge = |p: i128, q: i128, m: i128| -> Option<bool> {
        let t = m.checked_mul(q)?.checked_sub(p)?;
        Some(if q > 0 { t <= sqrt_floor } else { t > sqrt_floor })
    };
    let floor_of = |p: i128, q: i128| -> Result<i128> {
        let overflow = Error::Overflow("continued fraction state");
        let mut m = ((p as f64 + (disc as f64).sqrt()) / q as f64).floor() as i128;
        while ge(p, q, m + 1).ok_or(overflow.clone())? {
            m += 1;
        }
        while !ge(p, q, m).ok_or(overflow.clone())? {
            m -= 1;
        }
        Ok(m)
    };

    let mut seen: HashMap<(i128, i128), u32> = HashMap::new();
    let mut quotients: Vec<i128> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p, q)) {
            let cycle: Vec<i128> = quotients[start as usize..].to_vec();
            return Ok(ThicknessReport {
                max_quotient: *cycle.iter().max().expect("cycle is nonempty"),
                period: cycle.len() as u32,
                cycle,
                preperiod: start,
            });
        }
        seen.insert((p, q), quotients.len() as u32);
        let a_k = floor_of(p, q)?;
        quotients.push(a_k);
        let p_next = a_k
            .checked_mul(q)
            .and_then(|v| v.checked_sub(p))
            .ok_or(Error::Overflow("continued fraction state"))?;
        let num = disc
            .checked_sub(p_next.checked_mul(p_next).ok_or(Error::Overflow("cf state"))?)
            .ok_or(Error::Overflow("continued fraction state"))?;
        debug_assert_eq!(num % q, 0);
        (p, q) = (p_next, num / q);
        if quotients.len() > 5_000_000 {
            return Err(Error::BadParameter("continued fraction failed to cycle".into()));
        }
    }
}
