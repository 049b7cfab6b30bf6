//! Finite ground sets standing in for a feasible set `X ⊂ ℝⁿ`.
//!
//! A ground set is either an explicit list of points or an axis-aligned
//! lattice. Grid coordinates are generated as `k / m` whenever the step is
//! `1 / m` for an integer `m`, so lattice points coincide with the decimal
//! literals they represent (`0.7`, `7/2`, `0`) and closed-form rules that test
//! for specific values behave as written.
//!
//! When `X` is the whole space the window can carry a *halo*: extra lattice
//! layers outside the window that take part in comparisons (challengers,
//! contour samples, variational constraints) but are never reported as
//! candidates. Without it, the window's boundary looks maximal for relations
//! that improve without bound.

use std::fmt;

use itertools::Itertools;

use crate::error::{check_dim, Error, Result};
use crate::point::Point;

/// One axis of a lattice: `lo, lo + step, …` up to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(Error::InvalidGround("axis bounds must be finite".into()));
        }
        if hi < lo {
            return Err(Error::InvalidGround(format!("axis upper bound {hi} < lower bound {lo}")));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGround(format!("axis step must be positive, got {step}")));
        }
        Ok(Axis { lo, hi, step })
    }

    /// Parses `lo:hi:step`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidGround(format!("axis spec `{s}` is not lo:hi:step")));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGround(format!("bad number `{t}` in axis spec `{s}`")))
        };
        Axis::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi == self.lo
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn padded(&self, layers: usize) -> Axis {
        if self.is_degenerate() {
            return *self;
        }
        let pad = layers as f64 * self.step;
        Axis { lo: self.lo - pad, hi: self.hi + pad, step: self.step }
    }

    /// Lattice values along this axis.
    pub fn values(&self) -> Vec<f64> {
        let n = self.len();
        let inv = 1.0 / self.step;
        let m = inv.round();
        let k0 = (self.lo * m).round();
        let integral = (inv - m).abs() < 1e-9 && m >= 1.0 && (self.lo * m - k0).abs() < 1e-9;
        (0..n)
            .map(|i| {
                if integral {
                    (k0 + i as f64) / m
                } else {
                    self.lo + i as f64 * self.step
                }
            })
            .collect()
    }

    fn contains_value(&self, v: f64) -> bool {
        v >= self.lo - 1e-9 * self.step && v <= self.hi + 1e-9 * self.step
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

/// Parses a grid spec `lo:hi:step[,lo:hi:step...]`, one clause per dimension.
pub fn parse_axes(spec: &str) -> Result<Vec<Axis>> {
    let axes = spec.split(',').map(Axis::parse).collect::<Result<Vec<_>>>()?;
    if axes.is_empty() {
        return Err(Error::InvalidGround("empty grid spec".into()));
    }
    Ok(axes)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroundSource {
    Explicit,
    Grid(Vec<Axis>),
}

#[derive(Debug, Clone)]
pub struct GroundSet {
    points: Vec<Point>,
    source: GroundSource,
    halo: Vec<Point>,
}

impl GroundSet {
    /// Ground set from an explicit list of distinct points of common dimension.
    pub fn explicit(points: Vec<Point>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidGround("ground set must be non-empty".into()));
        };
        let dim = first.dim();
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| q.approx_eq(p)) {
                return Err(Error::InvalidGround(format!("duplicate point {p}")));
            }
        }
        Ok(GroundSet { points, source: GroundSource::Explicit, halo: Vec::new() })
    }

    /// Axis-aligned lattice in lexicographic order (first axis slowest).
    pub fn grid(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGround("grid needs at least one axis".into()));
        }
        let points = expand(&axes);
        Ok(GroundSet { points, source: GroundSource::Grid(axes), halo: Vec::new() })
    }

    pub fn parse_grid(spec: &str) -> Result<Self> {
        Self::grid(parse_axes(spec)?)
    }

    /// One-dimensional grid `[lo, hi]` with the given step.
    pub fn interval(lo: f64, hi: f64, step: f64) -> Result<Self> {
        Self::grid(vec![Axis::new(lo, hi, step)?])
    }

    /// Adds `layers` lattice layers beyond every non-degenerate axis as halo.
    pub fn with_halo(mut self, layers: usize) -> Result<Self> {
        let GroundSource::Grid(axes) = &self.source else {
            return Err(Error::InvalidGround("a halo needs a grid source".into()));
        };
        let padded: Vec<Axis> = axes.iter().map(|a| a.padded(layers)).collect();
        self.halo = expand(&padded)
            .into_iter()
            .filter(|p| !axes.iter().zip(p.coords()).all(|(a, &c)| a.contains_value(c)))
            .collect();
        Ok(self)
    }

    /// Window points: the candidates every enumeration reports on.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Points outside the window that still belong to `X`.
    pub fn halo(&self) -> &[Point] {
        &self.halo
    }

    /// Window followed by halo: the full finite stand-in for `X`.
    pub fn all_points(&self) -> impl Iterator<Item = &Point> + Clone {
        self.points.iter().chain(self.halo.iter())
    }

    pub fn source(&self) -> &GroundSource {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|q| q.approx_eq(p))
    }

    /// Lattice resolution: the largest step over non-degenerate axes, 0 for
    /// explicit sets.
    pub fn resolution(&self) -> f64 {
        match &self.source {
            GroundSource::Explicit => 0.0,
            GroundSource::Grid(axes) => axes
                .iter()
                .filter(|a| !a.is_degenerate())
                .map(|a| a.step)
                .fold(0.0, f64::max),
        }
    }
}

fn expand(axes: &[Axis]) -> Vec<Point> {
    axes.iter()
        .map(Axis::values)
        .multi_cartesian_product()
        .map(Point::from_raw)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_hits_decimal_literals() {
        let g = GroundSet::interval(0.0, 4.0, 0.25).unwrap();
        assert_eq!(g.len(), 17);
        assert!(g.points().iter().any(|p| p[0] == 3.5));
        let g = GroundSet::interval(-1.0, 1.0, 0.01).unwrap();
        assert_eq!(g.len(), 201);
        assert!(g.points().iter().any(|p| p[0] == 0.0));
        assert!(g.points().iter().any(|p| p[0] == 0.7));
        assert_eq!(g.points()[200][0], 1.0);
    }

    #[test]
    fn grid_is_lexicographic_and_complete() {
        let g = GroundSet::parse_grid("0:1:0.5,0:0.5:0.5").unwrap();
        let coords: Vec<_> = g.points().iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(
            coords,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 0.5],
                vec![0.5, 0.0],
                vec![0.5, 0.5],
                vec![1.0, 0.0],
                vec![1.0, 0.5]
            ]
        );
        assert_eq!(g.resolution(), 0.5);
    }

    #[test]
    fn degenerate_axis_is_a_single_value() {
        let g = GroundSet::parse_grid("0:1:0.01,0:0:1").unwrap();
        assert_eq!(g.len(), 101);
        assert!(g.points().iter().all(|p| p[1] == 0.0));
        assert_eq!(g.resolution(), 0.01);
    }

    #[test]
    fn halo_pads_only_non_degenerate_axes() {
        let g = GroundSet::parse_grid("0:1:0.5,0:0:1").unwrap().with_halo(1).unwrap();
        let halo: Vec<f64> = g.halo().iter().map(|p| p[0]).collect();
        assert_eq!(halo, vec![-0.5, 1.5]);
        assert_eq!(g.all_points().count(), 5);

        let g = GroundSet::parse_grid("0:1:0.5,0:1:0.5").unwrap().with_halo(1).unwrap();
        assert_eq!(g.halo().len(), 25 - 9);
        assert!(g.halo().iter().all(|p| g.index_of(p).is_none()));
    }

    #[test]
    fn non_decimal_step_falls_back_to_accumulation() {
        let g = GroundSet::interval(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.len(), 4);
        assert!((g.points()[3][0] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn invalid_inputs() {
        assert!(Axis::parse("0:1").is_err());
        assert!(Axis::parse("1:0:0.1").is_err());
        assert!(Axis::parse("0:1:0").is_err());
        assert!(GroundSet::explicit(vec![]).is_err());
        let p = Point::scalar(1.0).unwrap();
        assert!(GroundSet::explicit(vec![p.clone(), p]).is_err());
        let q = Point::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            GroundSet::explicit(vec![Point::scalar(0.0).unwrap(), q]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(GroundSet::explicit(vec![Point::scalar(0.0).unwrap()]).unwrap().with_halo(1).is_err());
    }
}
