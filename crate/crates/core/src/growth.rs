//! Growth series, exponent fits, and the constants of the coarse counting
//! bounds.
//!
//! Counts of lattice points in balls of radius R grow like e^{h R / 2} in
//! hyperbolic units (h is the volume entropy in the halved convention), so
//! analysis happens on (R, ln count) pairs. The calibration routine picks
//! the smallest contraction constant A for which the projection statements
//! hold on a randomized sample, and the width selector picks the smallest
//! bucket width L that beats the bucket cap in the defining inequality.

use crate::error::{Error, Result};
use crate::group::{enumerate_norm_ball, ElementClass};
use crate::plane::{ball_shadow_diameter, displacement_at_offset, translation_length, Units};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Monotone count data over ascending radii, tagged with its unit system.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthSeries {
    points: Vec<(f64, u64)>,
    units: Units,
}

impl GrowthSeries {
    pub fn new(points: Vec<(f64, u64)>, units: Units) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientData("empty growth series".into()));
        }
        if !points.iter().all(|(r, _)| r.is_finite()) {
            return Err(Error::BadParameter("series radii must be finite".into()));
        }
        if !points.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::BadParameter("series radii must be strictly ascending".into()));
        }
        if !points.windows(2).all(|w| w[0].1 <= w[1].1) {
            return Err(Error::BadParameter("ball counts cannot decrease with radius".into()));
        }
        Ok(GrowthSeries { points, units })
    }

    pub fn points(&self) -> &[(f64, u64)] {
        &self.points
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn convert(&self, to: Units) -> GrowthSeries {
        GrowthSeries {
            points: self
                .points
                .iter()
                .map(|&(r, c)| (Units::convert(r, self.units, to), c))
                .collect(),
            units: to,
        }
    }
}

/// Least-squares line through (R, ln count).
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// radius range actually used
    pub window: (f64, f64),
    pub residual_rms: f64,
    pub points_used: usize,
}

/// Fits ln count = slope * R + intercept over the window (whole series by
/// default), ignoring zero counts. Needs at least three usable points.
pub fn fit_exponent(series: &GrowthSeries, window: Option<(f64, f64)>) -> Result<FitResult> {
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    if lo > hi {
        return Err(Error::BadParameter(format!("empty fit window [{lo}, {hi}]")));
    }
    let pts: Vec<(f64, f64)> = series
        .points
        .iter()
        .filter(|(r, c)| *c > 0 && *r >= lo - 1e-9 && *r <= hi + 1e-9)
        .map(|&(r, c)| (r, (c as f64).ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "exponent fit needs 3 positive counts in the window, found {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_r = pts.iter().map(|(r, _)| r).sum::<f64>() / n;
    let mean_y = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|(r, _)| (r - mean_r).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::BadParameter("fit window has a single radius".into()));
    }
    let sxy: f64 = pts.iter().map(|(r, y)| (r - mean_r) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_r;
    let residual_rms = (pts
        .iter()
        .map(|(r, y)| (y - slope * r - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult {
        slope,
        intercept,
        window: (pts[0].0, pts[pts.len() - 1].0),
        residual_rms,
        points_used: pts.len(),
    })
}

/// The pointwise exponent estimate ln(count) / R, skipping zero counts and
/// the origin.
pub fn running_exponent(series: &GrowthSeries) -> Vec<(f64, f64)> {
    series
        .points
        .iter()
        .filter(|(r, c)| *c > 0 && *r > 0.0)
        .map(|&(r, c)| (r, (c as f64).ln() / r))
        .collect()
}

/// The defining margin of the bucket width: e^{h L} must strictly beat
/// 2 e^{h lambda / 2} n (1 + 2 (L + a) / lambda).
pub fn bucket_width_ok(l: f64, lambda: f64, a: f64, n: u64, h: f64) -> bool {
    (h * l).exp() > 2.0 * (h * lambda / 2.0).exp() * n as f64 * (1.0 + 2.0 * (l + a) / lambda)
}

/// Smallest L on the 0.01 grid satisfying the width inequality strictly.
/// Inputs are lengths in the same units as h is an exponent for.
pub fn choose_bucket_width(lambda: f64, a: f64, n: u64, h: f64) -> Result<f64> {
    if !(lambda > 0.0 && a > 0.0 && h > 0.0) || n == 0 {
        return Err(Error::BadParameter(format!(
            "width selection needs positive inputs, got lambda = {lambda}, a = {a}, n = {n}, h = {h}"
        )));
    }
    for k in 1..=100_000u64 {
        let l = k as f64 / 100.0;
        if bucket_width_ok(l, lambda, a, n, h) {
            return Ok(l);
        }
    }
    Err(Error::NoAdmissibleValue("no bucket width below 1000 works".into()))
}

/// Constants of the two-sided coarse count bounds, in the units of the
/// inputs (conventionally the surface convention with h = 2).
#[derive(Debug, Clone, Serialize)]
pub struct ModelConstants {
    /// volume entropy for the halved metric convention
    pub h: f64,
    /// cap on point stabilizer orders
    pub n_stab: u64,
    /// contraction constant
    pub a_const: f64,
    /// translation length of the class
    pub lambda: f64,
    /// bucket width
    pub l_width: f64,
    /// whether l_width satisfies its defining inequality strictly
    pub width_ok: bool,
    /// per-radius multiplicative lower constant
    pub g_lower: f64,
    /// per-radius multiplicative upper constant
    pub g_upper: f64,
    /// slack factor of an empirical sandwich run, if one was performed
    pub delta: Option<f64>,
    /// smallest radius from which the sandwich held empirically
    pub m_delta: Option<f64>,
}

impl ModelConstants {
    /// The single two-sided constant: counts should lie within a slack
    /// factor of e^{(h/2) R} / G .. G e^{(h/2) R}.
    pub fn g(&self) -> f64 {
        (1.0 / self.g_lower).max(self.g_upper)
    }
}

/// Assembles the constants. Positivity is required; the strict width
/// inequality is evaluated and reported rather than enforced, so the
/// formulas stay inspectable at any L.
pub fn model_constants(lambda: f64, a: f64, l: f64, n: u64, h: f64) -> Result<ModelConstants> {
    if !(lambda > 0.0 && a > 0.0 && l > 0.0 && h > 0.0) || n == 0 {
        return Err(Error::BadParameter(format!(
            "constants need positive inputs, got lambda = {lambda}, a = {a}, l = {l}, n = {n}, h = {h}"
        )));
    }
    let g_lower = lambda / (2.0 * n as f64 * (l + a + lambda) * (h * a).exp())
        / (2.0 * (h * (lambda / 2.0 + a)).exp());
    let g_upper = n as f64 * (h * a / 2.0).exp();
    Ok(ModelConstants {
        h,
        n_stab: n,
        a_const: a,
        lambda,
        l_width: l,
        width_ok: bucket_width_ok(l, lambda, a, n, h),
        g_lower,
        g_upper,
        delta: None,
        m_delta: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichViolation {
    pub r: f64,
    pub count: u64,
    pub low: f64,
    pub high: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub pass: bool,
    pub first_violation: Option<SandwichViolation>,
    /// smallest series radius from which every later point passes
    pub empirical_threshold: Option<f64>,
    pub g: f64,
    pub h: f64,
    pub delta: f64,
    pub r_min: f64,
    pub points_checked: usize,
}

/// Checks e^{(h/2) R} / (delta G) <= count <= delta G e^{(h/2) R} for every
/// series point with R >= r_min. The series radii must be in the units h
/// refers to.
pub fn coarse_sandwich_check(
    series: &GrowthSeries,
    g: f64,
    h: f64,
    delta: f64,
    r_min: f64,
) -> Result<SandwichReport> {
    if delta <= 1.0 || delta.is_nan() {
        return Err(Error::BadParameter(format!("slack factor {delta} must exceed 1")));
    }
    if !(g > 0.0 && h > 0.0) {
        return Err(Error::BadParameter(format!("need positive G and h, got {g}, {h}")));
    }
    let bounds = |r: f64| {
        let core = (h / 2.0 * r).exp();
        (core / (delta * g), delta * g * core)
    };
    let mut first_violation = None;
    let mut checked = 0;
    for &(r, c) in &series.points {
        if r < r_min - 1e-9 {
            continue;
        }
        checked += 1;
        let (low, high) = bounds(r);
        if ((c as f64) < low || (c as f64) > high) && first_violation.is_none() {
            first_violation = Some(SandwichViolation { r, count: c, low, high });
        }
    }
    // smallest radius from which the sandwich holds for every later point
    let mut empirical_threshold = None;
    for &(r, c) in series.points.iter().rev() {
        let (low, high) = bounds(r);
        if (c as f64) < low || (c as f64) > high {
            break;
        }
        empirical_threshold = Some(r);
    }
    Ok(SandwichReport {
        pass: first_violation.is_none() && checked > 0,
        first_violation,
        empirical_threshold,
        g,
        h,
        delta,
        r_min,
        points_checked: checked,
    })
}

/// Outcome of the contraction-constant calibration.
#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub a_hyp: f64,
    pub a_teich: f64,
    pub samples: u64,
    pub seed: u64,
    /// largest observed gap (2t + lambda) - displacement; A must cover it
    pub max_lower_defect: f64,
    /// largest shadow diameter at the chosen A; must stay below A
    pub max_shadow: f64,
    pub validated: bool,
}

/// (lambda, t) configurations: random translation lengths from the norm
/// ball of hyperbolic elements, random axis distances up to 10, plus fixed
/// worst-case probes at the shortest translation lengths of the group.
fn calibration_configs(samples: u64, seed: u64) -> Result<Vec<(f64, f64)>> {
    let pool: Vec<f64> = enumerate_norm_ball(10_000)?
        .into_iter()
        .filter(|g| g.classify() == ElementClass::Hyperbolic)
        .map(|g| translation_length(&g).expect("hyperbolic"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut configs: Vec<(f64, f64)> = (0..samples)
        .map(|_| (pool[rng.gen_range(0..pool.len())], rng.gen_range(0.0..10.0)))
        .collect();
    // the defect grows with t and shrinks with lambda, so the shortest
    // translation length at the largest offset dominates
    for lambda in [1.9248473002384139, 2.0 * 2f64.acosh(), 2.0 * 2.5f64.acosh(), 2.0 * 3f64.acosh()]
    {
        for t in [2.0, 4.0, 6.0, 8.0, 10.0] {
            configs.push((lambda, t));
        }
    }
    Ok(configs)
}

fn passes_at(configs: &[(f64, f64)], a: f64) -> (bool, f64, f64) {
    let mut max_defect = 0f64;
    let mut max_shadow = 0f64;
    for &(lambda, t) in configs {
        let d = displacement_at_offset(t, lambda);
        debug_assert!(d <= 2.0 * t + lambda + 1e-9);
        max_defect = max_defect.max(2.0 * t + lambda - d);
        if t > a {
            max_shadow = max_shadow.max(ball_shadow_diameter(t, t - a));
        }
    }
    (max_defect <= a + 1e-12 && max_shadow <= a + 1e-12, max_defect, max_shadow)
}

/// Smallest A on the 0.05 grid for which both projection statements hold on
/// the sampled configurations, re-validated on a fresh sample. Deterministic
/// for a given seed; reported in both unit systems.
pub fn calibrate_contraction(samples: u64, seed: u64) -> Result<CalibrationReport> {
    if samples < 1_000 {
        return Err(Error::BadParameter(format!(
            "calibration needs at least 1000 samples, got {samples}"
        )));
    }
    let configs = calibration_configs(samples, seed)?;
    let fresh = calibration_configs(samples, seed.wrapping_add(1))?;
    for k in 1..=60u64 {
        let a = k as f64 / 20.0;
        let (ok, defect, shadow) = passes_at(&configs, a);
        if !ok {
            continue;
        }
        let (validated, _, _) = passes_at(&fresh, a);
        if !validated {
            continue;
        }
        return Ok(CalibrationReport {
            a_hyp: a,
            a_teich: a / 2.0,
            samples,
            seed,
            max_lower_defect: defect,
            max_shadow: shadow,
            validated,
        });
    }
    Err(Error::NoAdmissibleValue("no contraction constant up to 3.0 works".into()))
}
