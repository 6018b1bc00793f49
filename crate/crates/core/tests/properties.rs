use irslink::channel::units::{dbm_to_watts, watts_to_dbm};
use irslink::channel::{FadingLane, FadingStream};
use irslink::sinr::aggregate_interference;
use irslink::sweep::run_distance_sweep_with;
use irslink::*;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point3> {
    (-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64).prop_map(|(x, y, z)| Point3::new(x, y, z).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn panel(t: f64, r: f64, m: u32, n: u32, a: f64, side: f64) -> IrsPanel {
    IrsPanel::new(IrsPanelParams {
        element_length: side,
        element_width: side,
        tx_side_elements: m,
        rx_side_elements: n,
        reflection_coefficient: a,
        tx_gain: 4.0,
        rx_gain: 2.0,
        theta_t: t,
        theta_r: r,
    })
    .unwrap()
}

fn legs(r1: f64, r2: f64) -> CascadeGeometry {
    cascade_distances(
        Point3::ORIGIN,
        Point3::new(r1, 0.0, 0.0).unwrap(),
        Point3::new(r1, r2, 0.0).unwrap(),
    )
    .unwrap()
}

fn channel(f: f64, pt: f64, alpha: f64) -> ChannelParams {
    ChannelParams::new(f, pt, alpha, 1e-12, 0.0).unwrap()
}

proptest! {
    #[test]
    fn distance_symmetric(a in point(), b in point()) {
        prop_assert_eq!(distance(a, b), distance(b, a));
        prop_assert!(distance(a, b) >= 0.0);
    }

    #[test]
    fn triangle_inequality(a in point(), b in point(), c in point()) {
        prop_assert!(distance(a, c) <= (distance(a, b) + distance(b, c)) * (1.0 + 1e-12));
    }

    #[test]
    fn translation_invariant(a in point(), b in point(), t in point()) {
        let d0 = distance(a, b);
        let d1 = distance(a + t, b + t);
        prop_assert!((d0 - d1).abs() <= 1e-9 * d0.max(1.0));
    }

    #[test]
    fn cascade_matches_distance(tx in point(), irs in point(), rx in point()) {
        prop_assume!(tx != irs && irs != rx);
        let g = cascade_distances(tx, irs, rx).unwrap();
        prop_assert_eq!(g.r1(), distance(tx, irs));
        prop_assert_eq!(g.r2(), distance(irs, rx));
    }

    #[test]
    fn conventional_monotone_and_exponent_law(alpha in 0.01..6.0f64, r in 0.1..1e3f64) {
        let ch = channel(3.5e9, 1.0, alpha);
        let near = conventional_rx_power(&ch, r, 1.0).unwrap();
        let far = conventional_rx_power(&ch, 2.0 * r, 1.0).unwrap();
        prop_assert!(far < near);
        prop_assert!(rel(far / near, 2f64.powf(-alpha)) < 1e-12);
    }

    #[test]
    fn powers_linear(pt in 1e-3..1e2f64, k in 0.01..100.0f64, l in 0.01..10.0f64, r in 1.0..500.0f64) {
        let a = conventional_rx_power(&channel(28e9, pt, 2.0), r, l).unwrap();
        let b = conventional_rx_power(&channel(28e9, pt * k, 2.0), r, l).unwrap();
        prop_assert!(rel(b / a, k) < 1e-12);
        let c = conventional_rx_power(&channel(28e9, pt, 2.0), r, l * k).unwrap();
        prop_assert!(rel(c / a, k) < 1e-12);

        let p = panel(30.0, 40.0, 8, 8, 0.8, 0.01);
        let g = legs(r, r / 2.0);
        let i1 = irs_rx_power(&channel(28e9, pt, 2.0), &p, &g).unwrap();
        let i2 = irs_rx_power(&channel(28e9, pt * k, 2.0), &p, &g).unwrap();
        prop_assert!(rel(i2 / i1, k) < 1e-12);
    }

    #[test]
    fn irs_independent_of_carrier(f1 in 1e8..1e11f64, f2 in 1e8..1e11f64, side in 1e-3..0.3f64) {
        let p = panel(20.0, 70.0, 10, 20, 0.7, side);
        let g = legs(30.0, 45.0);
        let a = irs_rx_power(&channel(f1, 1.0, 2.0), &p, &g).unwrap();
        let b = irs_rx_power(&channel(f2, 1.0, 2.0), &p, &g).unwrap();
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn irs_symmetric_in_angles_and_legs(t in 0.0..89.9f64, r in 0.0..89.9f64, r1 in 0.5..300.0f64, r2 in 0.5..300.0f64) {
        let ch = channel(3.5e9, 1.0, 2.0);
        let a = irs_rx_power(&ch, &panel(t, r, 4, 4, 1.0, 0.05), &legs(r1, r2)).unwrap();
        let b = irs_rx_power(&ch, &panel(r, t, 4, 4, 1.0, 0.05), &legs(r1, r2)).unwrap();
        let c = irs_rx_power(&ch, &panel(t, r, 4, 4, 1.0, 0.05), &legs(r2, r1)).unwrap();
        prop_assert!(rel(a, b) < 1e-12);
        prop_assert!(rel(a, c) < 1e-12);
    }

    #[test]
    fn irs_decreasing_in_theta_t(t in 0.0..89.0f64, dt in 0.01..1.0f64, r in 0.0..89.9f64) {
        let ch = channel(3.5e9, 1.0, 2.0);
        let g = legs(10.0, 20.0);
        let a = irs_rx_power(&ch, &panel(t, r, 4, 4, 1.0, 0.05), &g).unwrap();
        let b = irs_rx_power(&ch, &panel(t + dt, r, 4, 4, 1.0, 0.05), &g).unwrap();
        prop_assert!(b < a);
    }

    #[test]
    fn irs_scaling_laws(m in 1u32..50, n in 1u32..50, a in 0.01..0.5f64, side in 1e-3..0.1f64, r1 in 1.0..100.0f64, r2 in 1.0..100.0f64) {
        let ch = channel(3.5e9, 1.0, 2.0);
        let g = legs(r1, r2);
        let base = irs_rx_power(&ch, &panel(10.0, 10.0, m, n, a, side), &g).unwrap();
        let aa = irs_rx_power(&ch, &panel(10.0, 10.0, m, n, 2.0 * a, side), &g).unwrap();
        prop_assert!(rel(aa / base, 4.0) < 1e-12);
        let mn = irs_rx_power(&ch, &panel(10.0, 10.0, 2 * m, 3 * n, a, side), &g).unwrap();
        prop_assert!(rel(mn / base, 36.0) < 1e-12);
        let area = irs_rx_power(&ch, &panel(10.0, 10.0, m, n, a, 2.0 * side), &g).unwrap();
        prop_assert!(rel(area / base, 16.0) < 1e-12);
        let far = irs_rx_power(&ch, &panel(10.0, 10.0, m, n, a, side), &legs(2.0 * r1, 3.0 * r2)).unwrap();
        prop_assert!(rel(far / base, 1.0 / 36.0) < 1e-12);
    }

    #[test]
    fn dbm_round_trip(w in 1e-20..1e3f64) {
        let back = dbm_to_watts(watts_to_dbm(w).unwrap()).unwrap();
        prop_assert!(rel(back, w) <= 1e-12);
        let back = convert_power(convert_power(w, PowerUnit::Linear, PowerUnit::Db).unwrap(), PowerUnit::Db, PowerUnit::Linear).unwrap();
        prop_assert!(rel(back, w) <= 1e-12);
    }

    #[test]
    fn sinr_monotone(p in 1e-15..1e-3f64, i in 0.0..1e-6f64, n in 1e-15..1e-6f64, k in 1.001..10.0f64) {
        let base = sinr(p, i, n).unwrap();
        prop_assert!(sinr(p * k, i, n).unwrap().sinr_linear > base.sinr_linear);
        prop_assert!(sinr(p, i * k + 1e-18, n).unwrap().sinr_linear < base.sinr_linear);
        prop_assert!(sinr(p, i, n * k).unwrap().sinr_linear < base.sinr_linear);
        let scaled = sinr(p * k, i * k, n * k).unwrap();
        prop_assert!(rel(scaled.sinr_linear, base.sinr_linear) < 1e-12);
        let want = 10.0 * base.sinr_linear.log10();
        prop_assert!((base.sinr_db - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn aggregation_is_additive(a in prop::collection::vec(point(), 0..6), b in prop::collection::vec(point(), 0..6), rx in point()) {
        prop_assume!(a.iter().chain(&b).all(|p| *p != rx));
        let params = channel(3.5e9, 0.5, 3.0);
        let set = |v: &[Point3]| InterfererSet::ModeledInterferers(v.iter().map(|&position| Interferer { params, position }).collect());
        let both: Vec<Point3> = a.iter().chain(&b).copied().collect();
        let det = FadingModel::Deterministic;
        let sa = aggregate_interference(&set(&a), rx, det, 0).unwrap();
        let sb = aggregate_interference(&set(&b), rx, det, 0).unwrap();
        let sab = aggregate_interference(&set(&both), rx, det, 0).unwrap();
        prop_assert!((sab - (sa + sb)).abs() <= 1e-12 * sab.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn grid_contract(start in -1e3..1e3f64, span in 1e-3..1e3f64, steps in 2usize..200) {
        let spec = SweepSpec::new(SweepVariable::RxDistance, start, start + span, steps, 1, 0).unwrap();
        let stop = start + span;
        let g = spec.grid();
        prop_assert_eq!(g.len(), steps);
        for (i, x) in g.iter().enumerate() {
            prop_assert_eq!(*x, start + i as f64 * (stop - start) / (steps - 1) as f64);
        }
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}

fn faded(name: &str, seed: u64) -> (Scenario, SweepSpec) {
    let mut plan = presets::preset(name).unwrap();
    plan.scenario.fading = FadingModel::RayleighExponential { seed };
    let spec = plan.spec.with_trials(200).unwrap().with_seed(seed);
    (plan.scenario, spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sweeps_reproducible_across_execution(seed in any::<u64>()) {
        let (s, spec) = faded("fig2c", seed);
        let a = run_distance_sweep_with(&s, &spec, Execution::Serial).unwrap();
        let b = run_distance_sweep_with(&s, &spec, Execution::Parallel).unwrap();
        let c = run_distance_sweep_with(&s, &spec, Execution::Parallel).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&b, &c);
        prop_assert!(a.rows.windows(2).all(|w| w[0].x < w[1].x));
    }

    #[test]
    fn common_random_numbers_keep_gaps_exact(seed in any::<u64>(), t in 0.0..89.0f64, r in 0.0..89.0f64) {
        let (s, spec) = faded("fig2b", seed);
        let res = run_angle_sweep(&s, &[(t, r), (0.0, 0.0)], &spec).unwrap();
        let want = 10.0 * (t.to_radians().cos() * r.to_radians().cos()).log10();
        for (a, b) in res[0].rows.iter().zip(&res[1].rows) {
            prop_assert!((a.sinr_db - b.sinr_db - want).abs() < 1e-9);
        }
    }

    #[test]
    fn conventional_slope_is_minus_alpha(alpha in 0.5..5.0f64) {
        let mut plan = presets::preset("fig1").unwrap();
        plan.scenario.channel = plan.scenario.channel.with_path_loss_exponent(alpha).unwrap();
        let res = &plan.run(Execution::Serial).unwrap()[0];
        let xs: Vec<f64> = res.rows.iter().map(|r| 10.0 * r.x.log10()).collect();
        let ys: Vec<f64> = res.rows.iter().map(|r| r.sinr_db).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        prop_assert!((sxy / sxx + alpha).abs() < 1e-9);
    }
}

#[test]
fn faded_mean_converges_to_deterministic_power() {
    let ch = channel(3.5e9, 1.0, 2.0);
    let det = conventional_rx_power(&ch, 30.0, 1.0).unwrap();
    let n = 1_000_000;
    let model = FadingModel::RayleighExponential { seed: 77 };
    let mean = FadingStream::new(model, FadingLane::Signal, 0)
        .take(n)
        .map(|l| conventional_rx_power(&ch, 30.0, l).unwrap())
        .sum::<f64>()
        / n as f64;
    assert!(rel(mean, det) < 0.01, "{}", rel(mean, det));
}

#[test]
fn monte_carlo_bit_identical() {
    let (s, _) = faded("fig2a", 5);
    let rx = Point3::new(100.0, 30.0, 0.0).unwrap();
    let a = monte_carlo_stats(&s, rx, 10_000, 5).unwrap();
    let b = monte_carlo_stats(&s, rx, 10_000, 5).unwrap();
    assert_eq!(a, b);
    assert!(a.sinr_db_stddev > 0.0);
}
