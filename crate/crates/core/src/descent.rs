//! The iteration `x_{k+1} = x_k − θ_k x_k*` with `x_k* ∈ N_f(x_k)`,
//! `‖x_k*‖ ≤ L`, and its convergence diagnostics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::plastria::GapFunction;
use crate::point::Point;

/// Step sizes `θ_k`, `k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepSchedule {
    /// `θ_k = θ₀/k`
    Harmonic { theta0: f64 },
    /// `θ_k = θ₀/k^p`, `1/2 < p ≤ 1`
    Power { theta0: f64, p: f64 },
    /// `θ_k = list[k − 1]`
    Explicit { steps: Vec<f64> },
    /// `θ_k = θ`. Rejected by [`StepSchedule::validate`].
    Constant { theta: f64 },
}

impl StepSchedule {
    pub fn harmonic(theta0: f64) -> Self {
        StepSchedule::Harmonic { theta0 }
    }

    pub fn theta(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        match self {
            StepSchedule::Harmonic { theta0 } => theta0 / k as f64,
            StepSchedule::Power { theta0, p } => theta0 / (k as f64).powf(*p),
            StepSchedule::Explicit { steps } => steps[k - 1],
            StepSchedule::Constant { theta } => *theta,
        }
    }

    /// Checks the schedule can drive `horizon` iterations with `∑θ_k = ∞`
    /// and `∑θ_k² < ∞`. Explicit lists are finite, so only positivity and
    /// length are checked for them.
    pub fn validate(&self, horizon: usize) -> Result<()> {
        let positive = |t: f64, what: &str| {
            if t.is_finite() && t > 0.0 {
                Ok(())
            } else {
                Err(Error::Schedule(format!("{what} must be positive and finite, got {t}")))
            }
        };
        match self {
            StepSchedule::Harmonic { theta0 } => {
                positive(*theta0, "theta0")?;
                let squares: f64 = (1..=horizon).map(|k| self.theta(k).powi(2)).sum();
                if squares > theta0 * theta0 * PI * PI / 6.0 + 1e-9 {
                    return Err(Error::Schedule(format!("sum of squared steps {squares} exceeds its limit")));
                }
                Ok(())
            }
            StepSchedule::Power { theta0, p } => {
                positive(*theta0, "theta0")?;
                if !(*p > 0.5 && *p <= 1.0) {
                    return Err(Error::Schedule(format!("power exponent must lie in (1/2, 1], got {p}")));
                }
                Ok(())
            }
            StepSchedule::Explicit { steps } => {
                if steps.len() < horizon {
                    return Err(Error::Schedule(format!(
                        "explicit schedule has {} steps, {horizon} needed",
                        steps.len()
                    )));
                }
                steps.iter().try_for_each(|&t| positive(t, "step"))
            }
            StepSchedule::Constant { theta } => Err(Error::Schedule(format!(
                "constant step {theta} has a divergent sum of squares"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentConfig {
    pub max_iters: usize,
    /// Stop once `‖x_k*‖ ≤ stop_norm`; 0 stops only on an exact zero.
    pub stop_norm: f64,
    pub lipschitz: f64,
}

impl DescentConfig {
    pub fn new(lipschitz: f64) -> Self {
        DescentConfig { max_iters: 10_000, stop_norm: 0.0, lipschitz }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.stop_norm >= 0.0 && self.stop_norm.is_finite()) {
            return Err(Error::InvalidParameter(format!("stop norm must be nonnegative, got {}", self.stop_norm)));
        }
        if !(self.lipschitz > 0.0 && self.lipschitz.is_finite()) {
            return Err(Error::InvalidParameter(format!("L must be positive, got {}", self.lipschitz)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ZeroSubgradient,
    NormBelowEps,
    MaxIters,
}

/// One row of a trace. The last row of a run that hit `max_iters` is the
/// final point and has no subgradient or step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    pub k: usize,
    pub x: Point,
    pub xstar: Option<Point>,
    pub theta: Option<f64>,
    pub dist_to_ref: Option<f64>,
    pub gap_to_ref: Option<f64>,
    /// `dist_{k+1}² − dist_k² − θ_k²L²`
    pub fejer_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub rows: Vec<Iterate>,
    pub termination: Termination,
    pub reference: Option<Point>,
    pub lipschitz: f64,
}

impl DescentTrace {
    /// Number of steps taken; the trace has one more row.
    pub fn steps(&self) -> usize {
        self.rows.iter().filter(|r| r.theta.is_some()).count()
    }

    pub fn final_point(&self) -> &Point {
        &self.rows.last().expect("traces are non-empty").x
    }

    /// Largest `‖x_{k+1} − (x_k − θ_k x_k*)‖ / (1 + ‖x_k‖)` over the trace.
    pub fn reconstruction_residual(&self) -> f64 {
        self.rows
            .windows(2)
            .filter_map(|w| {
                let (xs, t) = (w[0].xstar.as_ref()?, w[0].theta?);
                Some(w[1].x.dist(&w[0].x.axpy(-t, xs)) / (1.0 + w[0].x.norm()))
            })
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.rows.iter().map(|r| r.x.norm()).fold(0.0, f64::max)
    }
}

/// Runs the iteration from `x1`. The oracle returns an element of `N_f(x)`
/// of norm at most `L`, or `0` at a maximal point. Larger or non-finite
/// outputs abort the run.
///
/// With a reference point, every row carries its distance to it, the gap
/// `f(x_k, reference)` when `f` is given, and the quasi-Fejér residual.
pub fn run_descent<O>(
    mut oracle: O,
    x1: &Point,
    schedule: &StepSchedule,
    config: &DescentConfig,
    reference: Option<&Point>,
    f: Option<&GapFunction>,
) -> Result<DescentTrace>
where
    O: FnMut(&Point) -> Result<Point>,
{
    config.validate()?;
    schedule.validate(config.max_iters)?;
    if let Some(r) = reference {
        check_dim(x1.dim(), r.dim())?;
    }
    let l = config.lipschitz;
    let mut rows: Vec<Iterate> = Vec::with_capacity(config.max_iters + 1);
    let mut x = x1.clone();
    let mut termination = Termination::MaxIters;
    for k in 1..=config.max_iters {
        let xs = oracle(&x)?;
        check_dim(x.dim(), xs.dim())?;
        if xs.coords().iter().any(|c| !c.is_finite()) {
            return Err(Error::OracleNonFinite { k });
        }
        let norm = xs.norm();
        if norm > l * (1.0 + 1e-12) {
            return Err(Error::OracleNorm { k, norm, bound: l });
        }
        let stop = if xs.is_zero() {
            Some(Termination::ZeroSubgradient)
        } else if norm <= config.stop_norm {
            Some(Termination::NormBelowEps)
        } else {
            None
        };
        if let Some(reason) = stop {
            rows.push(Iterate::bare(k, x.clone(), Some(xs), None));
            termination = reason;
            break;
        }
        let theta = schedule.theta(k);
        let next = x.axpy(-theta, &xs);
        rows.push(Iterate::bare(k, x, Some(xs), Some(theta)));
        x = next;
    }
    if termination == Termination::MaxIters {
        rows.push(Iterate::bare(config.max_iters + 1, x, None, None));
    }
    if let Some(r) = reference {
        for row in rows.iter_mut() {
            row.dist_to_ref = Some(row.x.dist(r));
            row.gap_to_ref = f.map(|f| f.eval(&row.x, r));
        }
        for i in 0..rows.len().saturating_sub(1) {
            if let (Some(t), Some(d0), Some(d1)) = (rows[i].theta, rows[i].dist_to_ref, rows[i + 1].dist_to_ref) {
                rows[i].fejer_residual = Some(d1 * d1 - d0 * d0 - t * t * l * l);
            }
        }
    }
    Ok(DescentTrace { rows, termination, reference: reference.cloned(), lipschitz: l })
}

impl Iterate {
    fn bare(k: usize, x: Point, xstar: Option<Point>, theta: Option<f64>) -> Self {
        Iterate { k, x, xstar, theta, dist_to_ref: None, gap_to_ref: None, fejer_residual: None }
    }
}

/// `‖x_{k+1} − u‖² ≤ ‖x_k − u‖² + θ_k²L² + 10⁻¹⁰(1 + ‖x_k − u‖²)` along the
/// trace, with distances recomputed from the iterates.
///
/// The bound is only guaranteed when `reference` is maximal and lies in the
/// strict upper contour of every non-maximal iterate; the caller vouches for
/// that.
pub fn quasi_fejer_check(trace: &DescentTrace, reference: &Point, lipschitz: f64) -> bool {
    trace.rows.windows(2).all(|w| {
        let Some(t) = w[0].theta else {
            return true;
        };
        let d0 = w[0].x.dist(reference).powi(2);
        let d1 = w[1].x.dist(reference).powi(2);
        d1 <= d0 + t * t * lipschitz * lipschitz + 1e-10 * (1.0 + d0)
    })
}

/// Largest `|f(x_k, reference)|` over the last 5% of rows (at least one).
pub fn gap_convergence_stat(trace: &DescentTrace, f: &GapFunction, reference: &Point) -> Result<f64> {
    let n = trace.rows.len();
    if n == 0 {
        return Err(Error::EmptyTrace);
    }
    let tail = (n as f64 * 0.05).ceil().max(1.0) as usize;
    Ok(trace.rows[n - tail..]
        .iter()
        .map(|r| f.eval(&r.x, reference).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plastria::{gap_from_utility, nf_subgradient};
    use crate::relation::Utility;

    fn p2(x: f64, y: f64) -> Point {
        Point::new(vec![x, y]).unwrap()
    }

    fn radial() -> (Point, GapFunction) {
        let a = p2(1.0, 2.0);
        let c = a.clone();
        let u = Utility::new("-|x-a|", move |x: &Point| -x.dist(&c));
        (a, gap_from_utility(&u, 1.0).unwrap())
    }

    #[test]
    fn radial_run_converges() {
        let (a, f) = radial();
        let oracle = |x: &Point| {
            let u = x.sub(&a);
            if u.is_zero() {
                Ok(Point::zeros(2))
            } else {
                nf_subgradient(&f, x, &u)
            }
        };
        let cfg = DescentConfig::new(1.0);
        let trace = run_descent(oracle, &p2(0.0, 0.0), &StepSchedule::harmonic(1.0), &cfg, Some(&a), Some(&f)).unwrap();
        // The iterate lands exactly on `a` in floating point.
        assert_eq!(trace.termination, Termination::ZeroSubgradient);
        assert_eq!(trace.rows.len(), trace.steps() + 1);
        assert!(trace.final_point().dist(&a) <= 0.01);
        assert!(trace.reconstruction_residual() <= 1e-12);
        assert!(quasi_fejer_check(&trace, &a, 1.0));
        assert!(gap_convergence_stat(&trace, &f, &a).unwrap() <= 0.02);
    }

    #[test]
    fn zero_oracle_stops_at_once() {
        let x1 = p2(3.0, -1.0);
        let cfg = DescentConfig::new(1.0);
        let trace = run_descent(|_| Ok(Point::zeros(2)), &x1, &StepSchedule::harmonic(1.0), &cfg, None, None).unwrap();
        assert_eq!(trace.termination, Termination::ZeroSubgradient);
        assert_eq!(trace.rows.len(), 1);
        assert_eq!(trace.final_point(), &x1);
        assert!(quasi_fejer_check(&trace, &p2(0.0, 0.0), 1.0));
    }

    #[test]
    fn norm_stop() {
        let cfg = DescentConfig { stop_norm: 0.5, ..DescentConfig::new(1.0) };
        let trace = run_descent(|_| Ok(p2(0.3, 0.0)), &p2(0.0, 0.0), &StepSchedule::harmonic(1.0), &cfg, None, None).unwrap();
        assert_eq!(trace.termination, Termination::NormBelowEps);
    }

    #[test]
    fn schedule_validation() {
        assert!(matches!(StepSchedule::Constant { theta: 0.1 }.validate(10), Err(Error::Schedule(_))));
        assert!(StepSchedule::harmonic(1.0).validate(10_000).is_ok());
        assert!(StepSchedule::harmonic(0.0).validate(10).is_err());
        assert!(StepSchedule::Power { theta0: 1.0, p: 0.5 }.validate(10).is_err());
        assert!(StepSchedule::Power { theta0: 1.0, p: 0.75 }.validate(10).is_ok());
        assert!(StepSchedule::Explicit { steps: vec![1.0; 3] }.validate(4).is_err());
        assert!(StepSchedule::Explicit { steps: vec![1.0, -1.0] }.validate(2).is_err());
        assert_eq!(StepSchedule::harmonic(2.0).theta(4), 0.5);

        let cfg = DescentConfig::new(1.0);
        let err = run_descent(|x| Ok(x.clone()), &p2(0.0, 0.0), &StepSchedule::Constant { theta: 0.1 }, &cfg, None, None);
        assert!(matches!(err, Err(Error::Schedule(_))));
    }

    #[test]
    fn oracle_norm_is_enforced() {
        let cfg = DescentConfig::new(0.1);
        let err = run_descent(|_| Ok(p2(1.0, 0.0)), &p2(0.0, 0.0), &StepSchedule::harmonic(1.0), &cfg, None, None);
        assert_eq!(err.unwrap_err(), Error::OracleNorm { k: 1, norm: 1.0, bound: 0.1 });
    }

    #[test]
    fn adversarial_trace_breaks_fejer() {
        let r = p2(0.0, 0.0);
        let rows = vec![
            Iterate::bare(1, p2(1.0, 0.0), Some(p2(-1.0, 0.0)), Some(1.0)),
            Iterate::bare(2, p2(2.0, 0.0), None, None),
        ];
        let trace = DescentTrace { rows, termination: Termination::MaxIters, reference: None, lipschitz: 0.1 };
        assert!(!quasi_fejer_check(&trace, &r, 0.1));
    }

    #[test]
    fn gap_stat_edge_cases() {
        let (a, f) = radial();
        let empty = DescentTrace { rows: vec![], termination: Termination::MaxIters, reference: None, lipschitz: 1.0 };
        assert_eq!(gap_convergence_stat(&empty, &f, &a), Err(Error::EmptyTrace));
        let still = DescentTrace {
            rows: vec![Iterate::bare(1, a.clone(), None, None)],
            termination: Termination::MaxIters,
            reference: None,
            lipschitz: 1.0,
        };
        assert_eq!(gap_convergence_stat(&still, &f, &a).unwrap(), 0.0);
    }
}
