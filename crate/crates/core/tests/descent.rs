use prefmax_core::descent::{
    gap_convergence_stat, quasi_fejer_check, run_descent, DescentConfig, DescentTrace, StepSchedule, Termination,
};
use prefmax_core::plastria::{gap_from_utility, nf_subgradient, GapFunction};
use prefmax_core::{rules, Error, Point, Result};
use proptest::prelude::*;

fn p2(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).unwrap()
}

fn radial_gap(a: &Point) -> GapFunction {
    gap_from_utility(rules::radial_utility(a).utility_fn().unwrap(), 1.0).unwrap()
}

fn radial_run(a: &Point, x1: &Point, schedule: &StepSchedule, iters: usize) -> DescentTrace {
    let f = radial_gap(a);
    let oracle = |x: &Point| -> Result<Point> {
        let u = x.sub(a);
        if u.is_zero() {
            Ok(Point::zeros(x.dim()))
        } else {
            nf_subgradient(&f, x, &u)
        }
    };
    let cfg = DescentConfig { max_iters: iters, ..DescentConfig::new(1.0) };
    run_descent(oracle, x1, schedule, &cfg, Some(a), Some(&f)).unwrap()
}

#[test]
fn one_dimensional_distance_recursion() {
    let a = Point::scalar(0.3).unwrap();
    let x1 = Point::scalar(-4.0).unwrap();
    let schedule = StepSchedule::harmonic(1.0);
    let trace = radial_run(&a, &x1, &schedule, 2000);
    let mut d = x1.dist(&a);
    for row in &trace.rows {
        assert!((row.dist_to_ref.unwrap() - d).abs() <= 1e-9, "k = {}", row.k);
        if let Some(t) = row.theta {
            d = (d - t).abs();
        }
    }
}

#[test]
fn distance_decreases_until_the_first_overshoot() {
    let a = p2(1.0, 2.0);
    let schedule = StepSchedule::harmonic(1.0);
    let trace = radial_run(&a, &p2(0.0, 0.0), &schedule, 10_000);
    let d: Vec<f64> = trace.rows.iter().map(|r| r.dist_to_ref.unwrap()).collect();
    let first = trace.rows.iter().position(|r| r.theta.is_some_and(|t| r.dist_to_ref.unwrap() < t)).unwrap();
    for k in 0..first {
        assert!(d[k + 1] < d[k]);
    }
    for m in first..trace.rows.len() - 1 {
        let theta = schedule.theta(trace.rows[m].k);
        assert!(d[m + 1] <= theta + 1e-12, "row {m}");
    }
}

#[test]
fn iterates_stay_bounded() {
    let a = p2(1.0, 2.0);
    let x1 = p2(-3.0, 5.0);
    for schedule in [StepSchedule::harmonic(2.0), StepSchedule::Power { theta0: 1.0, p: 0.75 }] {
        let trace = radial_run(&a, &x1, &schedule, 3000);
        let sq: f64 = (1..=trace.steps()).map(|k| schedule.theta(k).powi(2)).sum();
        let bound = a.norm() + (x1.dist(&a).powi(2) + sq).sqrt() + 1e-9;
        assert!(trace.max_norm() <= bound);
        assert!(quasi_fejer_check(&trace, &a, 1.0));
    }
}

#[test]
fn runs_are_deterministic() {
    let a = p2(1.0, 2.0);
    let one = radial_run(&a, &p2(0.0, 0.0), &StepSchedule::harmonic(1.0), 500);
    let two = radial_run(&a, &p2(0.0, 0.0), &StepSchedule::harmonic(1.0), 500);
    assert_eq!(one, two);
}

#[test]
fn short_runs_do_not_reach_the_maximum() {
    let a = p2(1.0, 2.0);
    let f = radial_gap(&a);
    let trace = radial_run(&a, &p2(-10.0, -10.0), &StepSchedule::harmonic(0.1), 10);
    assert_eq!(trace.termination, Termination::MaxIters);
    assert_eq!(trace.rows.len(), 11);
    assert!(trace.final_point().dist(&a) > 10.0);
    assert!(gap_convergence_stat(&trace, &f, &a).unwrap() > 1.0);
}

#[test]
fn oracle_contract_violations_abort() {
    let x1 = p2(0.0, 0.0);
    let cfg = DescentConfig::new(1.0);
    let schedule = StepSchedule::harmonic(1.0);
    let big = run_descent(|_: &Point| Ok(p2(2.0, 0.0)), &x1, &schedule, &cfg, None, None);
    assert!(matches!(big, Err(Error::OracleNorm { k: 1, .. })));
    let nan = run_descent(|_: &Point| Ok(p2(1.0, 0.0).scale(f64::NAN)), &x1, &schedule, &cfg, None, None);
    assert!(matches!(nan, Err(Error::OracleNonFinite { k: 1 })));
    let constant = run_descent(|_: &Point| Ok(p2(1.0, 0.0)), &x1, &StepSchedule::Constant { theta: 0.1 }, &cfg, None, None);
    assert!(matches!(constant, Err(Error::Schedule(_))));
}

#[test]
fn stop_norm_ends_the_run() {
    let cfg = DescentConfig { stop_norm: 0.5, ..DescentConfig::new(1.0) };
    let trace =
        run_descent(|_: &Point| Ok(p2(0.1, 0.0)), &p2(1.0, 1.0), &StepSchedule::harmonic(1.0), &cfg, None, None).unwrap();
    assert_eq!(trace.termination, Termination::NormBelowEps);
    assert_eq!(trace.rows.len(), 1);
    assert_eq!(trace.steps(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traces_reconstruct_and_stay_quasi_fejer(
        a in prop::collection::vec(-5.0f64..5.0, 2),
        x1 in prop::collection::vec(-5.0f64..5.0, 2),
        theta0 in 0.1f64..3.0,
        iters in 1usize..400,
    ) {
        let a = Point::new(a).unwrap();
        let x1 = Point::new(x1).unwrap();
        let trace = radial_run(&a, &x1, &StepSchedule::harmonic(theta0), iters);
        prop_assert!(trace.reconstruction_residual() <= 1e-12);
        prop_assert!(quasi_fejer_check(&trace, &a, 1.0));
        prop_assert!(trace.rows.iter().all(|r| r.xstar.as_ref().is_none_or(|v| v.norm() <= 1.0 + 1e-12)));
        for w in trace.rows.windows(2) {
            prop_assert_eq!(w[1].k, w[0].k + 1);
        }
    }
}
