use modcount_core::growth::{
    bucket_width_ok, choose_bucket_width, coarse_sandwich_check, fit_exponent, model_constants,
    running_exponent, GrowthSeries,
};
use modcount_core::plane::Units;

fn series(points: Vec<(f64, u64)>) -> GrowthSeries {
    GrowthSeries::new(points, Units::Hyperbolic).unwrap()
}

// With radii placed at ln(count) the regression data are exactly collinear,
// so the fit must recover slope 1 and intercept 0 to full double precision.
#[test]
fn fit_is_exact_on_collinear_data() {
    let counts: Vec<u64> = (3..=13).map(|k| 1u64 << k).collect();
    let pts: Vec<(f64, u64)> = counts.iter().map(|&c| ((c as f64).ln(), c)).collect();
    let fit = fit_exponent(&series(pts), None).unwrap();
    assert!((fit.slope - 1.0).abs() < 1e-12, "slope = {}", fit.slope);
    assert!(fit.intercept.abs() < 1e-12, "intercept = {}", fit.intercept);
    assert!(fit.residual_rms < 1e-12);
    assert_eq!(fit.points_used, 11);

    // doubling the radii halves the recovered exponent, still exactly
    let pts: Vec<(f64, u64)> =
        counts.iter().map(|&c| (2.0 * (c as f64).ln(), c)).collect();
    let fit = fit_exponent(&series(pts), None).unwrap();
    assert!((fit.slope - 0.5).abs() < 1e-12, "slope = {}", fit.slope);
    assert!(fit.intercept.abs() < 1e-12);
}

#[test]
fn fit_window_restricts_the_points() {
    let counts: Vec<u64> = (3..=13).map(|k| 1u64 << k).collect();
    let mut pts: Vec<(f64, u64)> = counts.iter().map(|&c| ((c as f64).ln(), c)).collect();
    // corrupt the first two points (keeping counts monotone); a window
    // that skips them stays exact
    pts[0].1 = 1;
    pts[1].1 = 31;
    let s = series(pts.clone());
    let window = (pts[2].0 - 1e-9, pts[10].0 + 1e-9);
    let fit = fit_exponent(&s, Some(window)).unwrap();
    assert!((fit.slope - 1.0).abs() < 1e-12, "slope = {}", fit.slope);
    assert_eq!(fit.points_used, 9);
    let full = fit_exponent(&s, None).unwrap();
    assert!((full.slope - 1.0).abs() > 1e-3, "corruption must show up");
}

#[test]
fn running_exponent_settles_onto_the_true_rate() {
    // count = 7 * 2^j at radius 2 j ln 2: the pointwise exponent is
    // 1/2 + ln 7 / (2 j ln 2), strictly decreasing toward 1/2
    let pts: Vec<(f64, u64)> =
        (1..=20).map(|j| (2.0 * j as f64 * 2f64.ln(), 7 * (1u64 << j))).collect();
    let run = running_exponent(&series(pts));
    assert_eq!(run.len(), 20);
    for w in run.windows(2) {
        assert!(w[0].1 > w[1].1, "must decrease: {:?}", w);
    }
    let (_, last) = run[19];
    let expected = 0.5 + 7f64.ln() / (2.0 * 20.0 * 2f64.ln());
    assert!((last - expected).abs() < 1e-12, "last = {last}");
    assert!(last > 0.5 && last < 0.58);
}

#[test]
fn unit_conversion_rescales_radii_and_exponents() {
    let counts: Vec<u64> = (3..=10).map(|k| 1u64 << k).collect();
    let pts: Vec<(f64, u64)> = counts.iter().map(|&c| ((c as f64).ln(), c)).collect();
    let hyp = series(pts);
    let teich = hyp.convert(Units::Teichmuller);
    // halving every radius doubles the fitted exponent
    let fit = fit_exponent(&teich, None).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-12, "slope = {}", fit.slope);
    assert_eq!(teich.units(), Units::Teichmuller);
    let back = teich.convert(Units::Hyperbolic);
    for (a, b) in back.points().iter().zip(hyp.points()) {
        assert!((a.0 - b.0).abs() < 1e-12);
        assert_eq!(a.1, b.1);
    }
}

#[test]
fn bucket_width_selection_is_minimal_on_the_grid() {
    let lambda_t = 1.9248473002384139 / 2.0;
    let l = choose_bucket_width(lambda_t, 1.0, 3, 2.0).unwrap();
    assert!((l - 2.43).abs() < 1e-12, "l = {l}");
    assert!(bucket_width_ok(l, lambda_t, 1.0, 3, 2.0));
    assert!(!bucket_width_ok(l - 0.01, lambda_t, 1.0, 3, 2.0));

    // minimality holds across a spread of inputs, and more stabilizer
    // slack or a larger contraction constant never shrinks the width
    let grids = [
        (0.5, 0.8, 2, 2.0),
        (0.962424, 1.0, 3, 2.0),
        (0.962424, 0.875, 3, 2.0),
        (1.5, 2.0, 6, 2.0),
        (2.4, 1.0, 3, 1.0),
    ];
    for (lambda, a, n, h) in grids {
        let l = choose_bucket_width(lambda, a, n, h).unwrap();
        assert!(bucket_width_ok(l, lambda, a, n, h), "{lambda} {a} {n} {h}");
        assert!(!bucket_width_ok(l - 0.01, lambda, a, n, h), "{lambda} {a} {n} {h}");
        let wider_n = choose_bucket_width(lambda, a, 2 * n, h).unwrap();
        assert!(wider_n >= l);
        let wider_a = choose_bucket_width(lambda, a + 1.0, n, h).unwrap();
        assert!(wider_a >= l);
    }
}

#[test]
fn constant_formulas_match_frozen_values() {
    let lambda_t = 1.9248473002384139 / 2.0;
    // upper constant N e^{h A / 2} with N = 3, h = 2, A = 1 is exactly 3 e
    let c = model_constants(lambda_t, 1.0, 2.43, 3, 2.0).unwrap();
    assert!((c.g_upper - 8.154845485377136).abs() < 1e-12, "g_upper = {}", c.g_upper);
    assert!(c.width_ok);
    assert!((c.g_lower - 1.2774e-4).abs() < 1e-8, "g_lower = {}", c.g_lower);
    // the slightly narrower width still evaluates and is flagged
    let narrow = model_constants(lambda_t, 1.0, 2.4, 3, 2.0).unwrap();
    assert!(!narrow.width_ok);
    assert!((narrow.g_lower - 1.2861e-4).abs() < 2e-6, "g_lower = {}", narrow.g_lower);
    assert!(narrow.g_lower < narrow.g_upper);
    // the combined constant covers both sides
    assert!(c.g() >= c.g_upper && c.g() >= 1.0 / c.g_lower);
}

#[test]
fn sandwich_verdicts_on_synthetic_series() {
    let h = 2.0;
    // counts exactly e^R: inside any g >= 1 band
    let exact: Vec<(f64, u64)> =
        (4..=12).map(|r| (r as f64, (r as f64).exp().round() as u64)).collect();
    let rep = coarse_sandwich_check(&series(exact), 1.5, h, 1.01, 4.0).unwrap();
    assert!(rep.pass, "{:?}", rep.first_violation);
    assert_eq!(rep.points_checked, 9);

    // counts 10 e^R against g = 1, delta = 1.01: every point breaks the
    // upper bound and the first witness is reported
    let high: Vec<(f64, u64)> =
        (4..=12).map(|r| (r as f64, (10.0 * (r as f64).exp()).round() as u64)).collect();
    let rep = coarse_sandwich_check(&series(high.clone()), 1.0, h, 1.01, 4.0).unwrap();
    assert!(!rep.pass);
    let v = rep.first_violation.expect("witness");
    assert_eq!(v.r, 4.0);
    assert!(v.count as f64 > v.high);
    assert!(rep.empirical_threshold.is_none());

    // same data with g = 10 fits again
    let rep = coarse_sandwich_check(&series(high), 10.0, h, 1.01, 4.0).unwrap();
    assert!(rep.pass);

    // r_min skips early noise: corrupt one early point, start above it
    let mut noisy: Vec<(f64, u64)> =
        (4..=12).map(|r| (r as f64, (r as f64).exp().round() as u64)).collect();
    noisy[0].1 = 1;
    let s = series(noisy);
    assert!(!coarse_sandwich_check(&s, 1.5, h, 1.01, 4.0).unwrap().pass);
    let rep = coarse_sandwich_check(&s, 1.5, h, 1.01, 4.5).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.points_checked, 8);
}
