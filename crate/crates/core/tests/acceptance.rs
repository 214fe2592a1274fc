//! Acceptance gate: one test per numbered criterion, each printing a single
//! `criterion NN: PASS/FAIL — ...` line (run with `-- --nocapture` to see
//! them all). A failing criterion prints its live numbers before panicking.

use modcount_core::conjugacy::{
    bucket_census, conjugacy_ball, conjugacy_ball_naive, gamma_records, injection_report, p_sets,
    ConjugacyQuery, GammaRecord, PseudoAnosov,
};
use modcount_core::growth::{
    calibrate_contraction, choose_bucket_width, coarse_sandwich_check, fit_exponent,
    model_constants, running_exponent, CalibrationReport, GrowthSeries,
};
use modcount_core::orbit::{census, scan_omega_ball};
use modcount_core::plane::{
    axis_of, dist_to_geodesic, displacement_at_offset, project_to_geodesic, translation_length,
};
use modcount_core::{
    distance, enumerate_norm_ball, mobius_apply, ElementClass, GroupElement, Point, RationalPoint,
    Units, DISTANCE_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const GOLDEN_LAMBDA: f64 = 1.9248473002384139;

fn verdict(n: u32, pass: bool, detail: &str) {
    println!("criterion {n:02}: {} — {detail}", if pass { "PASS" } else { "FAIL" });
}

fn pa(a: i64, b: i64, c: i64, d: i64) -> PseudoAnosov {
    PseudoAnosov::new(GroupElement::new(a, b, c, d).unwrap()).unwrap()
}

fn golden() -> PseudoAnosov {
    pa(2, 1, 1, 1)
}

fn calibration() -> &'static CalibrationReport {
    static CAL: OnceLock<CalibrationReport> = OnceLock::new();
    CAL.get_or_init(|| calibrate_contraction(10_000, 7).expect("calibration must converge"))
}

struct GammaData {
    golden: Vec<GammaRecord>,
    square: Vec<GammaRecord>,
    elapsed: Duration,
}

/// Measured class-count series for the shortest class and its square,
/// shared across criteria 2, 3, and 9.
fn gamma_data() -> &'static GammaData {
    static DATA: OnceLock<GammaData> = OnceLock::new();
    DATA.get_or_init(|| {
        let a = calibration().a_hyp;
        let radii: Vec<f64> =
            [2, 4, 6, 8, 10, 12, 13, 14, 15, 16, 17, 18, 19, 20].map(f64::from).to_vec();
        let t0 = Instant::now();
        let q = ConjugacyQuery::new(
            golden(),
            Point::i(),
            Point::i(),
            Some(RationalPoint::i()),
            20.0,
            a,
        )
        .unwrap();
        let gold = gamma_records(&q, &radii).unwrap();
        let q2 = ConjugacyQuery::new(
            pa(5, 3, 3, 2),
            Point::i(),
            Point::i(),
            Some(RationalPoint::i()),
            20.0,
            a,
        )
        .unwrap();
        let square = gamma_records(&q2, &radii).unwrap();
        GammaData { golden: gold, square, elapsed: t0.elapsed() }
    })
}

fn gamma_growth_series(recs: &[GammaRecord]) -> GrowthSeries {
    GrowthSeries::new(recs.iter().map(|r| (r.r_hyp, r.gamma)).collect(), Units::Hyperbolic)
        .unwrap()
}

#[test]
fn criterion_01_orbit_growth_exponent() {
    let t0 = Instant::now();
    let mut dists: Vec<f64> = Vec::new();
    scan_omega_ball(Point::i(), 14.0, |_, d| dists.push(d)).unwrap();
    dists.sort_unstable_by(f64::total_cmp);
    let pts: Vec<(f64, u64)> = (8..=14)
        .map(|r| {
            let r = r as f64;
            (r, dists.partition_point(|d| *d <= r + DISTANCE_TOL) as u64)
        })
        .collect();
    let fit = fit_exponent(&GrowthSeries::new(pts, Units::Hyperbolic).unwrap(), None).unwrap();
    let elapsed = t0.elapsed();
    let pass = (0.95..=1.05).contains(&fit.slope) && elapsed < Duration::from_secs(30);
    verdict(
        1,
        pass,
        &format!(
            "ball-count slope {:.4} in [0.95, 1.05] over r = 8..14 ({} elements at 14, {:.1?})",
            fit.slope,
            dists.len(),
            elapsed
        ),
    );
    assert!(pass, "slope {} elapsed {elapsed:?}", fit.slope);
}

#[test]
fn criterion_02_conjugacy_growth_exponent() {
    let data = gamma_data();
    let mut pass = true;
    let mut parts: Vec<String> = Vec::new();
    for (name, recs) in [("phi", &data.golden), ("phi^2", &data.square)] {
        let series = gamma_growth_series(recs);
        let fit = fit_exponent(&series, Some((12.0, 20.0))).unwrap();
        let (r_last, run) = *running_exponent(&series).last().unwrap();
        assert_eq!(r_last, 20.0);
        pass &= (0.40..=0.60).contains(&fit.slope) && (0.40..=0.60).contains(&run);
        parts.push(format!("{name}: slope {:.4}, running(20) {:.4}", fit.slope, run));
    }
    pass &= data.elapsed < Duration::from_secs(120);
    verdict(2, pass, &format!("{} in [0.40, 0.60] ({:.1?})", parts.join("; "), data.elapsed));
    assert!(pass, "{parts:?} elapsed {:?}", data.elapsed);
}

#[test]
fn criterion_03_exact_count_sandwich() {
    let data = gamma_data();
    let mut violations = 0u32;
    let mut checked = 0u32;
    for recs in [&data.golden, &data.square] {
        for rec in recs.iter() {
            checked += 1;
            if !(rec.gamma <= rec.class_elements && rec.class_elements <= 3 * rec.gamma) {
                violations += 1;
            }
        }
    }
    let pass = violations == 0;
    verdict(
        3,
        pass,
        &format!(
            "gamma <= members <= 3 gamma at all {checked} measured radii ({violations} violations)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_04_near_axis_inclusions() {
    let a = calibration().a_hyp;
    let mut violations = 0u32;
    let mut checked = 0u32;
    for phi in [pa(2, 1, 1, 1), pa(5, 2, 2, 1), pa(5, 3, 3, 2)] {
        for r in [6.0, 8.0, 10.0, 12.0] {
            let split = p_sets(&phi, Point::i(), r, a).unwrap();
            let q = ConjugacyQuery::new(
                phi.clone(),
                Point::i(),
                Point::i(),
                Some(RationalPoint::i()),
                r,
                a,
            )
            .unwrap();
            let ball: BTreeSet<GroupElement> = conjugacy_ball(&q).unwrap().into_iter().collect();
            let minus: BTreeSet<GroupElement> = split.p_minus.iter().copied().collect();
            let plus: BTreeSet<GroupElement> = split.p_plus.iter().copied().collect();
            checked += 1;
            if !(minus.is_subset(&ball) && ball.is_subset(&plus)) {
                violations += 1;
            }
        }
    }
    let pass = violations == 0;
    verdict(
        4,
        pass,
        &format!(
            "near-axis sets bracket the class ball for 3 classes x 4 radii \
             (A = {a}, {checked} queries, {violations} violations)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_power_shift_injection() {
    let a = calibration().a_hyp;
    let mut total = 0u64;
    let mut collisions = 0usize;
    let mut escapes = 0usize;
    let mut feet_ok = true;
    // snapped feet land within half a translation length, class by class
    let mut worst_foot_ratio = 0f64;
    for phi in [pa(2, 1, 1, 1), pa(5, 2, 2, 1)] {
        for r in [2.0, 4.0, 6.0, 8.0, 10.0] {
            let rep = injection_report(&phi, Point::i(), r, a).unwrap();
            assert!(
                rep.max_image_displacement <= rep.image_radius + DISTANCE_TOL,
                "image must stay in the half ball at r = {r}"
            );
            total += rep.total;
            collisions += rep.collisions.len();
            escapes += rep.escapes.len();
            let cap = phi.lambda_hyp / 2.0;
            feet_ok &= rep.max_foot_offset <= cap + DISTANCE_TOL;
            worst_foot_ratio = worst_foot_ratio.max(rep.max_foot_offset / cap);
        }
    }
    let pass = collisions == 0 && escapes == 0 && total > 0 && feet_ok;
    verdict(
        5,
        pass,
        &format!(
            "power-shift map injective on {total} members up to R = 10; \
             0 collisions, 0 escapes, feet within lambda/2 (worst ratio {worst_foot_ratio:.3})"
        ),
    );
    assert!(pass, "collisions {collisions} escapes {escapes} total {total}");
}

#[test]
fn criterion_06_bucket_machinery_at_r12() {
    let cal = calibration();
    let lambda_t = GOLDEN_LAMBDA / 2.0;
    let l_teich = choose_bucket_width(lambda_t, cal.a_teich, 3, 2.0).unwrap();
    let l_hyp = 2.0 * l_teich;
    let phi = golden();
    match bucket_census(&phi, Point::i(), 12.0, cal.a_hyp, l_hyp) {
        Ok(rep) if rep.bound_ok && rep.sum_ok => {
            verdict(
                6,
                true,
                &format!(
                    "bucket cap and counting inequality hold at R = 12 with L = {l_hyp:.2} \
                     (max far bucket {} <= {:.2})",
                    rep.max_far_bucket, rep.bucket_bound
                ),
            );
        }
        Ok(rep) => {
            verdict(
                6,
                false,
                &format!(
                    "bucket checks violated at R = 12: max far bucket {} vs cap {:.2}, \
                     far sum {} vs lower bound {:.1}",
                    rep.max_far_bucket, rep.bucket_bound, rep.far_bucket_sum, rep.sum_lower_bound
                ),
            );
            panic!("criterion 06: bucket checks violated at R = 12");
        }
        Err(e) => {
            // the width the selector demands cannot fit inside the R = 12
            // conjugator ball for the shortest class; show the same
            // machinery passing at the first workable even radius
            let companion = bucket_census(&phi, Point::i(), 16.0, cal.a_hyp, l_hyp).unwrap();
            assert!(companion.bound_ok && companion.sum_ok, "companion run must pass");
            verdict(
                6,
                false,
                &format!(
                    "selected width L = {l_hyp:.2} hyp (= {l_teich:.2} surface) cannot fit at \
                     R = 12 for the shortest class: {e}; at R = 16 the same checks pass \
                     (max far bucket {} <= cap {:.2}, far sum {} >= {:.1})",
                    companion.max_far_bucket,
                    companion.bucket_bound,
                    companion.far_bucket_sum,
                    companion.sum_lower_bound
                ),
            );
            panic!(
                "criterion 06: width {l_hyp:.2} needs R > {:.2}, so R = 12 is infeasible \
                 for the shortest class",
                2.0 * l_hyp + 2.0 * cal.a_hyp + GOLDEN_LAMBDA
            );
        }
    }
}

#[test]
fn criterion_07_model_identities() {
    const CASES: usize = 10_000;
    const TOL: f64 = 1e-9;
    let ball = enumerate_norm_ball(10_000).unwrap();
    let hyperbolic: Vec<GroupElement> =
        ball.iter().copied().filter(|g| g.classify() == ElementClass::Hyperbolic).collect();
    let small_hyperbolic: Vec<GroupElement> = enumerate_norm_ball(100)
        .unwrap()
        .into_iter()
        .filter(|g| g.classify() == ElementClass::Hyperbolic)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let random_point = |rng: &mut ChaCha8Rng| {
        Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.2..4.0)).unwrap()
    };
    let mut worst: f64 = 0.0;

    // entry norm vs displacement of the base point
    for _ in 0..CASES {
        let g = ball[rng.gen_range(0..ball.len())];
        let lhs = distance(Point::i(), mobius_apply(&g, Point::i())).cosh();
        let rhs = g.frobenius_norm_sq() as f64 / 2.0;
        worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    // displacement from axis offset and translation length
    for _ in 0..CASES {
        let g = hyperbolic[rng.gen_range(0..hyperbolic.len())];
        let z = random_point(&mut rng);
        let lam = translation_length(&g).unwrap();
        let t = dist_to_geodesic(z, &axis_of(&g).unwrap());
        let direct = distance(z, mobius_apply(&g, z));
        worst = worst.max((direct - displacement_at_offset(t, lam)).abs());
    }
    // projection commutes with the action
    for _ in 0..CASES {
        let g = ball[rng.gen_range(0..ball.len())];
        let h = hyperbolic[rng.gen_range(0..hyperbolic.len())];
        let z = random_point(&mut rng);
        let axis = axis_of(&h).unwrap();
        let moved_axis = axis_of(&h.conjugate_by(&g).unwrap()).unwrap();
        let lhs = project_to_geodesic(mobius_apply(&g, z), &moved_axis);
        let rhs = mobius_apply(&g, project_to_geodesic(z, &axis));
        worst = worst.max(distance(lhs, rhs));
    }
    // translation length is linear in the power
    for _ in 0..CASES {
        let g = small_hyperbolic[rng.gen_range(0..small_hyperbolic.len())];
        let k = rng.gen_range(1..=10i64);
        let lam = translation_length(&g).unwrap();
        let powered = translation_length(&g.pow(k).unwrap()).unwrap();
        worst = worst.max((powered - k as f64 * lam).abs() / (k as f64 * lam).max(1.0));
    }
    let pass = worst <= TOL;
    verdict(
        7,
        pass,
        &format!("four identities over {CASES} random cases each, worst error {worst:.2e} <= 1e-9"),
    );
    assert!(pass, "worst {worst:e}");
}

#[test]
fn criterion_08_oracle_equivalence() {
    let a = calibration().a_hyp;
    let mut queries = 0u32;
    // on-axis and off-axis probes, both classes, radii up to 6
    let probes = [
        (Point::i(), Point::i(), Some(RationalPoint::i())),
        (Point::new(0.3, 1.4).unwrap(), Point::new(0.8, 0.9).unwrap(), None),
    ];
    for phi in [pa(2, 1, 1, 1), pa(5, 2, 2, 1)] {
        for (x, y, y_exact) in probes.clone() {
            for r in [1.93, 3.0, 4.5, 6.0] {
                let q = ConjugacyQuery::new(phi.clone(), x, y, y_exact.clone(), r, a).unwrap();
                let fast: Vec<GroupElement> = conjugacy_ball(&q).unwrap();
                let (naive, certified) = conjugacy_ball_naive(&q, 8.0).unwrap();
                assert!(certified, "naive search radius must be certified complete");
                assert_eq!(fast, naive, "class ball mismatch at r = {r}");
                queries += 1;
            }
        }
    }
    // entry-norm enumeration vs quadruple-loop brute force
    let mut checked_m = 0u32;
    for m in 2..=100i128 {
        let mut brute: Vec<GroupElement> = Vec::new();
        for a in -10..=10i64 {
            for b in -10..=10i64 {
                for c in -10..=10i64 {
                    for d in -10..=10i64 {
                        if a * d - b * c == 1
                            && a * a + b * b + c * c + d * d <= m as i64
                            && (c > 0 || (c == 0 && a > 0))
                        {
                            brute.push(GroupElement::new(a, b, c, d).unwrap());
                        }
                    }
                }
            }
        }
        brute.sort_unstable();
        assert_eq!(enumerate_norm_ball(m).unwrap(), brute, "norm ball mismatch at M = {m}");
        checked_m += 1;
    }
    verdict(
        8,
        true,
        &format!(
            "fast class enumeration equals certified brute force on {queries} queries \
             (R <= 6); norm balls match quadruple-loop scan for {checked_m} bounds M <= 100"
        ),
    );
}

#[test]
fn criterion_09_calibration_and_coarse_bounds() {
    let cal = calibration();
    let pool: Vec<f64> = enumerate_norm_ball(1_000)
        .unwrap()
        .into_iter()
        .filter(|g| g.classify() == ElementClass::Hyperbolic)
        .map(|g| translation_length(&g).unwrap())
        .collect();
    // independent validation sample: the contraction constant must cover
    // both the projection-shadow diameter and the displacement defect
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut max_defect = 0f64;
    let mut max_shadow = 0f64;
    for _ in 0..2_000 {
        let lam = pool[rng.gen_range(0..pool.len())];
        let t = rng.gen_range(0.0..10.0);
        let d = displacement_at_offset(t, lam);
        assert!(d <= 2.0 * t + lam + 1e-9, "upper displacement bound is unconditional");
        max_defect = max_defect.max(2.0 * t + lam - d);
        if t > cal.a_hyp {
            max_shadow = max_shadow
                .max(modcount_core::plane::ball_shadow_diameter(t, t - cal.a_hyp));
        }
    }
    let fresh_ok = max_defect <= cal.a_hyp + 1e-9 && max_shadow <= cal.a_hyp + 1e-9;

    // coarse two-sided bound on the measured series, surface convention
    let lambda_t = GOLDEN_LAMBDA / 2.0;
    let l_teich = choose_bucket_width(lambda_t, cal.a_teich, 3, 2.0).unwrap();
    let consts = model_constants(lambda_t, cal.a_teich, l_teich, 3, 2.0).unwrap();
    assert!(consts.width_ok);
    let series = gamma_growth_series(&gamma_data().golden).convert(Units::Teichmuller);
    let sandwich = coarse_sandwich_check(&series, consts.g(), 2.0, 1.5, 5.0).unwrap();

    let pass = cal.a_hyp <= 3.0 && cal.validated && fresh_ok && sandwich.pass;
    verdict(
        9,
        pass,
        &format!(
            "A = {} hyp (validated; fresh sample defect {:.3}, shadow {:.3}); \
             coarse bounds hold with G = {:.1} on {} measured points",
            cal.a_hyp,
            max_defect,
            max_shadow,
            consts.g(),
            sandwich.points_checked
        ),
    );
    assert!(pass, "{cal:?} fresh_ok={fresh_ok} sandwich={:?}", sandwich.first_violation);
}

#[test]
fn criterion_10_genericity_census() {
    let t0 = Instant::now();
    let recs = census(&RationalPoint::i(), &[4.0, 10.0]).unwrap();
    let elapsed = t0.elapsed();
    let pass = recs[1].frac_hyperbolic > 0.95
        && recs[1].frac_hyperbolic > recs[0].frac_hyperbolic
        && elapsed < Duration::from_secs(10);
    verdict(
        10,
        pass,
        &format!(
            "hyperbolic fraction {:.4} at r = 10 (> 0.95 and > {:.4} at r = 4) in {:.1?}",
            recs[1].frac_hyperbolic, recs[0].frac_hyperbolic, elapsed
        ),
    );
    assert!(pass, "{recs:?} elapsed {elapsed:?}");
}
