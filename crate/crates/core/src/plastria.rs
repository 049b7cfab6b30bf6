//! Gap functions and the Plastria-like normal cone
//! `N_f(x) = {x* : ⟨x*, y − x⟩ ≤ f(x, y) ∀ y ∈ U^s(x)}` (all of ℝⁿ at maximal
//! points).

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::ContourSample;
use crate::error::{check_dim, Error, Result};
use crate::ground::GroundSet;
use crate::point::{contains_point, Point};
use crate::properties::{maximal_elements, Property, PropertyReport};
use crate::relation::{Relation, Utility};

/// Number of pairs drawn by [`GapFunction::audit`] unless told otherwise.
pub const AUDIT_PAIRS: usize = 1000;

/// The standing assumptions on a gap function, relative to a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionFlags {
    /// (a) `f(x, y) < 0 ⇔ y ≻ x`
    pub a: bool,
    /// (b) `f(x, y) > 0 ⇔ x ≻ y`
    pub b: bool,
    /// (c) `|f(x, y)| ≤ L‖x − y‖`
    pub c: bool,
    /// (d) `x ≻ y ⇔ f(x, z) > f(y, z)` for all / for some `z`
    pub d: bool,
    /// (e) upper semicontinuity in the first argument
    pub e: bool,
}

impl AssumptionFlags {
    pub const ALL: AssumptionFlags = AssumptionFlags { a: true, b: true, c: true, d: true, e: true };
    pub const NONE: AssumptionFlags = AssumptionFlags { a: false, b: false, c: false, d: false, e: false };
}

pub type GapEval = Arc<dyn Fn(&Point, &Point) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct GapFunction {
    name: String,
    eval: GapEval,
    lipschitz: f64,
    flags: AssumptionFlags,
}

impl GapFunction {
    pub fn new(
        name: impl Into<String>,
        lipschitz: f64,
        flags: AssumptionFlags,
        eval: impl Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(lipschitz.is_finite() && lipschitz > 0.0) {
            return Err(Error::InvalidParameter(format!("Lipschitz bound must be positive, got {lipschitz}")));
        }
        Ok(GapFunction { name: name.into(), eval: Arc::new(eval), lipschitz, flags })
    }

    /// `f ≡ 0`, declared with every flag set.
    pub fn zero(lipschitz: f64) -> Result<Self> {
        Self::new("0", lipschitz, AssumptionFlags::ALL, |_, _| 0.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn flags(&self) -> AssumptionFlags {
        self.flags
    }

    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        (self.eval)(x, y)
    }

    /// Samples random pairs (and a third point for (d)) from the ground set
    /// and clears every flag that a pair contradicts. Flag (e) is not
    /// decidable from samples and is left as declared.
    pub fn audit(&mut self, rel: &Relation, ground: &GroundSet, pairs: usize, seed: u64) -> Result<AuditReport> {
        let pts: Vec<&Point> = ground.all_points().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = AuditReport { pairs, ..AuditReport::default() };
        let l = self.lipschitz;
        for _ in 0..pairs {
            let x = pts[rng.random_range(0..pts.len())];
            let y = pts[rng.random_range(0..pts.len())];
            let z = pts[rng.random_range(0..pts.len())];
            let fxy = self.eval(x, y);
            let x_over_y = rel.strictly_prefers(x, y)?;
            if (fxy < 0.0) != rel.strictly_prefers(y, x)? {
                report.a += 1;
            }
            if (fxy > 0.0) != x_over_y {
                report.b += 1;
            }
            if fxy.abs() > l * x.dist(y) * (1.0 + 1e-12) + 1e-12 {
                report.c += 1;
            }
            if (self.eval(x, z) > self.eval(y, z)) != x_over_y {
                report.d += 1;
            }
        }
        let before = self.flags;
        self.flags.a &= report.a == 0;
        self.flags.b &= report.b == 0;
        self.flags.c &= report.c == 0;
        self.flags.d &= report.d == 0;
        for (label, was, now, count) in [
            ("a", before.a, self.flags.a, report.a),
            ("b", before.b, self.flags.b, report.b),
            ("c", before.c, self.flags.c, report.c),
            ("d", before.d, self.flags.d, report.d),
        ] {
            if was && !now {
                log::warn!("gap {}: flag ({label}) contradicted by {count} of {pairs} sampled pairs", self.name);
            }
        }
        Ok(report)
    }
}

impl fmt::Debug for GapFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GapFunction")
            .field("name", &self.name)
            .field("lipschitz", &self.lipschitz)
            .field("flags", &self.flags)
            .finish()
    }
}

/// Violation counts per flag from a sampled audit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub pairs: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// `f_u(x, y) = u(x) − u(y)` with every flag set.
pub fn gap_from_utility(u: &Utility, lipschitz: f64) -> Result<GapFunction> {
    let u = u.clone();
    GapFunction::new(format!("f_u[{}]", u.name()), lipschitz, AssumptionFlags::ALL, move |x, y| {
        u.eval(x) - u.eval(y)
    })
}

/// `x* ∈ N_f(x)`: `⟨x*, y − x⟩ ≤ f(x, y) + tol·(1 + ‖y − x‖)` for every
/// sampled `y`, or the contour is empty.
pub fn nf_membership(f: &GapFunction, sample: &ContourSample, xstar: &Point, tol: f64) -> Result<bool> {
    let x = sample.base();
    check_dim(x.dim(), xstar.dim())?;
    if sample.is_empty_contour() {
        return Ok(true);
    }
    Ok(sample.points().iter().all(|y| {
        let d = y.sub(x);
        xstar.dot(&d) <= f.eval(x, y) + tol * (1.0 + d.norm())
    }))
}

/// `L·u*/‖u*‖`, an element of `N_f(x)` whenever `u*` is a strict normal at
/// `x` and `f` is order compatible and `L`-Lipschitz.
pub fn nf_subgradient(f: &GapFunction, x: &Point, ustar: &Point) -> Result<Point> {
    check_dim(x.dim(), ustar.dim())?;
    Ok(ustar.normalized()?.scale(f.lipschitz()))
}

/// For every window point: `0 ∈ N_f(x)` exactly when `x` is maximal.
///
/// Requires flags (a) and (b); otherwise returns [`Error::Precondition`].
pub fn zero_maximality_check(f: &GapFunction, rel: &Relation, ground: &GroundSet, tol: f64) -> Result<PropertyReport> {
    let flags = f.flags();
    if !(flags.a && flags.b) {
        return Err(Error::Precondition(format!(
            "gap {} lacks the sign conditions (a) and (b)",
            f.name()
        )));
    }
    let me = maximal_elements(rel, ground)?;
    let zero = Point::zeros(ground.dim());
    for x in ground.points() {
        let sample = ContourSample::from_ground(rel, x, ground)?;
        if nf_membership(f, &sample, &zero, tol)? != contains_point(&me, x) {
            return Ok(PropertyReport::fail(Property::ZeroMaximality, vec![x.clone()]));
        }
    }
    Ok(PropertyReport::pass(Property::ZeroMaximality))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{normal_membership, DEFAULT_TOL};
    use crate::rules;

    fn p(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    fn neg_abs() -> Utility {
        Utility::new("-|x|", |x: &Point| -x[0].abs())
    }

    #[test]
    fn utility_gap_values() {
        let f = gap_from_utility(&neg_abs(), 1.0).unwrap();
        assert_eq!(f.eval(&p(1.0), &p(2.0)), 1.0);
        assert_eq!(f.eval(&p(0.3), &p(0.3)), 0.0);
        assert_eq!(f.flags(), AssumptionFlags::ALL);
        assert!(gap_from_utility(&neg_abs(), 0.0).is_err());
        assert!(gap_from_utility(&neg_abs(), -1.0).is_err());
    }

    #[test]
    fn audit_keeps_valid_flags() {
        let rel = Relation::utility(1, neg_abs(), Some(1.0), true).unwrap();
        let mut f = gap_from_utility(&neg_abs(), 1.0).unwrap();
        let g = GroundSet::interval(-3.0, 3.0, 0.01).unwrap();
        let report = f.audit(&rel, &g, AUDIT_PAIRS, 7).unwrap();
        assert_eq!(report, AuditReport { pairs: AUDIT_PAIRS, ..Default::default() });
        assert_eq!(f.flags(), AssumptionFlags::ALL);
    }

    #[test]
    fn audit_downgrades_bad_flags() {
        let rel = Relation::utility(1, neg_abs(), Some(1.0), true).unwrap();
        let mut f = gap_from_utility(&neg_abs(), 0.5).unwrap();
        let g = GroundSet::interval(-3.0, 3.0, 0.01).unwrap();
        f.audit(&rel, &g, AUDIT_PAIRS, 7).unwrap();
        assert!(!f.flags().c);
        assert!(f.flags().a && f.flags().b);

        let mut f1 = GapFunction::new("y^2-x^2", 1.0, AssumptionFlags::ALL, |x, y| y[0] * y[0] - x[0] * x[0]).unwrap();
        let rel = rules::non_complete_origin();
        f1.audit(&rel, &g, AUDIT_PAIRS, 7).unwrap();
        assert!(!f1.flags().a);
        assert!(matches!(
            zero_maximality_check(&f1, &rel, &GroundSet::interval(-1.0, 1.0, 0.1).unwrap(), DEFAULT_TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn subgradient_norm_and_zero_input() {
        let f = gap_from_utility(&neg_abs(), 2.5).unwrap();
        let v = nf_subgradient(&f, &p(0.0), &p(-3.0)).unwrap();
        assert_eq!(v, p(-2.5));
        assert_eq!(nf_subgradient(&f, &p(0.0), &p(0.0)), Err(Error::ZeroVector));
    }

    #[test]
    fn peak_subgradient_in_plastria_cone() {
        let rel = rules::peak_utility(0.7);
        let f = gap_from_utility(rel.utility_fn().unwrap(), 1.0).unwrap();
        let g = GroundSet::interval(0.0, 1.4, 0.01).unwrap();
        let s = ContourSample::from_ground(&rel, &p(0.0), &g).unwrap();
        let v = nf_subgradient(&f, &p(0.0), &p(-1.0)).unwrap();
        assert_eq!(v, p(-1.0));
        assert!(nf_membership(&f, &s, &v, 1e-12).unwrap());
    }

    #[test]
    fn zero_gap_reduces_to_normal_cone() {
        let rel = rules::peak_utility(0.7);
        let f0 = GapFunction::zero(1.0).unwrap();
        let g = GroundSet::interval(0.0, 1.0, 0.05).unwrap();
        for x in g.points() {
            let s = ContourSample::from_ground(&rel, x, &g).unwrap();
            for q in [-1.0, -0.2, 0.0, 0.3, 2.0] {
                assert_eq!(
                    nf_membership(&f0, &s, &p(q), DEFAULT_TOL).unwrap(),
                    normal_membership(&s, &p(q), DEFAULT_TOL).unwrap()
                );
            }
        }
    }

    #[test]
    fn zero_membership_matches_maximality() {
        let rel = rules::peak_utility(0.7);
        let f = gap_from_utility(rel.utility_fn().unwrap(), 1.0).unwrap();
        let g = GroundSet::interval(0.0, 1.0, 0.01).unwrap();
        assert!(zero_maximality_check(&f, &rel, &g, DEFAULT_TOL).unwrap().holds);

        let rel = rules::only_origin(2);
        let g = GroundSet::parse_grid("-1:1:0.25,-1:1:0.25").unwrap();
        let f = GapFunction::zero(1.0).unwrap();
        assert!(zero_maximality_check(&f, &rel, &g, DEFAULT_TOL).unwrap().holds);
    }
}
