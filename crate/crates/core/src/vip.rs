//! Stampacchia and Minty variational inequality checks over finite ground
//! sets, and the Minty characterization of a unique maximal element.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{Cone, ConeTag, ConvexBody};
use crate::error::{check_dim, Result};
use crate::ground::GroundSet;
use crate::hull;
use crate::point::{contains_point, same_point_set, Point};
use crate::properties::{maximal_elements, Property, PropertyReport};
use crate::relation::Relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VipKind {
    Stampacchia,
    Minty,
}

/// A solution of a variational inequality together with its witness `x̂*`
/// (Stampacchia only) and the tolerance it was accepted under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VipCertificate {
    pub solution: Point,
    pub kind: VipKind,
    pub witness: Option<Point>,
    pub tol: f64,
}

impl VipCertificate {
    /// Re-checks a Stampacchia certificate: the witness lies in `body` and
    /// satisfies every inequality over the ground set. Minty certificates
    /// carry nothing to re-check and always pass.
    pub fn revalidate(&self, body: &ConvexBody, ground: &GroundSet) -> Result<bool> {
        if self.kind == VipKind::Minty {
            return Ok(true);
        }
        let Some(w) = &self.witness else {
            return Ok(false);
        };
        // Rounding allowance over the search tolerance.
        let slack = 2.0 * self.tol;
        if !body.contains(w, slack)? {
            return Ok(false);
        }
        Ok(ground.all_points().all(|y| {
            let d = y.sub(&self.solution);
            w.dot(&d) >= -slack * (1.0 + d.norm())
        }))
    }
}

/// Looks for `x̂* ∈ body` with `⟨x̂*, y − x̂⟩ ≥ −tol·(1 + ‖y − x̂‖)` for every
/// `y` of the ground set (halo included).
///
/// Exact in dimensions 1 and 2 (interval and polygon clipping, witness of
/// least norm); projected subgradient ascent over convex weights above.
pub fn svip_membership(
    body: &ConvexBody,
    xhat: &Point,
    ground: &GroundSet,
    tol: f64,
) -> Result<Option<VipCertificate>> {
    check_dim(body.dim(), xhat.dim())?;
    check_dim(ground.dim(), xhat.dim())?;
    if body.is_empty() {
        return Ok(None);
    }
    let constraints: Vec<(Point, f64)> = ground
        .all_points()
        .map(|y| {
            let d = y.sub(xhat);
            let t = tol * (1.0 + d.norm());
            (d, t)
        })
        .filter(|(d, _)| !d.is_zero())
        .collect();
    let witness = match body.dim() {
        1 => svip_interval(body, &constraints),
        2 => svip_polygon(body, &constraints),
        _ => svip_weights(body, &constraints),
    };
    Ok(witness.map(|w| VipCertificate {
        solution: xhat.clone(),
        kind: VipKind::Stampacchia,
        witness: Some(w),
        tol,
    }))
}

fn svip_interval(body: &ConvexBody, constraints: &[(Point, f64)]) -> Option<Point> {
    let vs = body.vertices().iter().map(|v| v[0]);
    let (mut lo, mut hi) = vs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    for (d, t) in constraints {
        // z·d ≥ −t
        let bound = -t / d[0];
        if d[0] > 0.0 {
            lo = lo.max(bound);
        } else {
            hi = hi.min(bound);
        }
        if lo > hi {
            return None;
        }
    }
    Some(Point::from_raw(vec![0.0_f64.clamp(lo, hi)]))
}

fn svip_polygon(body: &ConvexBody, constraints: &[(Point, f64)]) -> Option<Point> {
    let mut poly = body.polygon();
    for (d, t) in constraints {
        let dd = [d[0], d[1]];
        if poly.iter().all(|z| z[0] * dd[0] + z[1] * dd[1] >= -t) {
            continue;
        }
        poly = hull::clip(&poly, dd, *t);
        if poly.is_empty() {
            return None;
        }
    }
    hull::nearest_to_origin(&poly).map(|z| Point::from_raw(z.to_vec()))
}

const SUBGRADIENT_ITERS: usize = 10_000;

fn svip_weights(body: &ConvexBody, constraints: &[(Point, f64)]) -> Option<Point> {
    let vs = body.vertices();
    let m = vs.len();
    let combo = |lambda: &[f64]| {
        let mut z = vec![0.0; body.dim()];
        for (l, v) in lambda.iter().zip(vs) {
            for (c, vc) in z.iter_mut().zip(v.coords()) {
                *c += l * vc;
            }
        }
        Point::from_raw(z)
    };
    let worst = |z: &Point| {
        constraints
            .iter()
            .map(|(d, t)| (z.dot(d) + t) / (1.0 + d.norm()))
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };
    let mut lambda = vec![1.0 / m as f64; m];
    for k in 1..=SUBGRADIENT_ITERS {
        let z = combo(&lambda);
        let Some((j, val)) = worst(&z) else {
            return Some(z);
        };
        if val >= 0.0 {
            return Some(z);
        }
        let (d, _) = &constraints[j];
        let scale = 1.0 / (1.0 + d.norm());
        let step = 1.0 / (k as f64).sqrt();
        for (l, v) in lambda.iter_mut().zip(vs) {
            *l += step * scale * v.dot(d);
        }
        project_simplex(&mut lambda);
    }
    let z = combo(&lambda);
    match worst(&z) {
        Some((_, val)) if val < 0.0 => None,
        _ => Some(z),
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &mut [f64]) {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut shift = 0.0;
    for (i, ui) in u.iter().enumerate() {
        acc += ui;
        let t = (acc - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            shift = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - shift).max(0.0));
}

/// Stampacchia solutions among the window points, in ground order.
pub fn svip_solutions<F>(body_at: F, ground: &GroundSet, tol: f64) -> Result<Vec<VipCertificate>>
where
    F: Fn(&Point) -> Result<ConvexBody> + Sync,
{
    let found: Vec<Option<VipCertificate>> = ground
        .points()
        .par_iter()
        .map(|x| svip_membership(&body_at(x)?, x, ground, tol))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Minty test: every `y` of the ground set and every test direction `g` of
/// the cone at `y` satisfy `⟨g, x̂ − y⟩ ≤ tol·(1 + ‖x̂ − y‖)`.
///
/// Generated cones are tested on their normalized generators. Full cones use
/// the `±eᵢ` fan together with the worst direction `(x̂ − y)/‖x̂ − y‖`; zero
/// cones impose nothing.
pub fn mvip_membership<F>(cone_at: F, xhat: &Point, ground: &GroundSet, tol: f64) -> Result<bool>
where
    F: Fn(&Point) -> Result<Cone>,
{
    check_dim(ground.dim(), xhat.dim())?;
    let dim = xhat.dim();
    for y in ground.all_points() {
        let d = xhat.sub(y);
        let bound = tol * (1.0 + d.norm());
        let cone = cone_at(y)?;
        check_dim(dim, cone.dim())?;
        let ok = match cone.tag() {
            ConeTag::Zero => true,
            ConeTag::Generated(gens) => gens.iter().all(|g| g.dot(&d) / g.norm() <= bound),
            ConeTag::Full => {
                let fan = (0..dim).all(|i| d[i].abs() <= bound);
                fan && d.norm() <= bound
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minty solutions among the window points, in ground order.
pub fn mvip_solutions<F>(cone_at: F, ground: &GroundSet, tol: f64) -> Result<Vec<Point>>
where
    F: Fn(&Point) -> Result<Cone> + Sync,
{
    let keep: Vec<bool> = ground
        .points()
        .par_iter()
        .map(|x| mvip_membership(&cone_at, x, ground, tol))
        .collect::<Result<_>>()?;
    Ok(ground
        .points()
        .iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then(|| p.clone()))
        .collect())
}

/// Every Stampacchia solution must be a maximal element. A failing report
/// carries the first violator.
pub fn svip_inclusion_check<F>(rel: &Relation, ground: &GroundSet, body_at: F, tol: f64) -> Result<PropertyReport>
where
    F: Fn(&Point) -> Result<ConvexBody> + Sync,
{
    let me = maximal_elements(rel, ground)?;
    let svip = svip_solutions(body_at, ground, tol)?;
    Ok(match svip.iter().find(|c| !contains_point(&me, &c.solution)) {
        Some(c) => PropertyReport::fail(Property::SvipInclusion, vec![c.solution.clone()]),
        None => PropertyReport::pass(Property::SvipInclusion),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub maximal: Vec<Point>,
    pub mvip: Vec<Point>,
    /// `ME` is a singleton.
    pub singleton: bool,
    /// `ME = MVIP` as grid sets.
    pub coincide: bool,
}

impl UniquenessReport {
    /// `singleton ⇔ coincide`.
    pub fn equivalence(&self) -> bool {
        self.singleton == self.coincide
    }
}

/// Enumerates both sides of "ME is a singleton iff ME = MVIP".
pub fn uniqueness_check<F>(rel: &Relation, cone_at: F, ground: &GroundSet, tol: f64) -> Result<UniquenessReport>
where
    F: Fn(&Point) -> Result<Cone> + Sync,
{
    let maximal = maximal_elements(rel, ground)?;
    let mvip = mvip_solutions(cone_at, ground, tol)?;
    let singleton = maximal.len() == 1;
    let coincide = same_point_set(&maximal, &mvip);
    Ok(UniquenessReport { maximal, mvip, singleton, coincide })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{build_t, BodyMode, ContourSample, DEFAULT_TOL};
    use crate::rules;

    fn p(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    fn sampled_cone<'a>(rel: &'a Relation, ground: &'a GroundSet) -> impl Fn(&Point) -> Result<Cone> + Sync + 'a {
        move |x: &Point| Cone::from_contour(&ContourSample::from_ground(rel, x, ground)?, DEFAULT_TOL)
    }

    #[test]
    fn favored_one_stampacchia() {
        let rel = rules::favored_one();
        let g = GroundSet::interval(0.0, 2.0, 0.01).unwrap();
        let cone_at = sampled_cone(&rel, &g);
        let t = |x: &Point| Ok(build_t(&cone_at(x)?, BodyMode::T));
        assert!(svip_membership(&t(&p(1.0)).unwrap(), &p(1.0), &g, DEFAULT_TOL).unwrap().is_none());
        let cert = svip_membership(&t(&p(0.5)).unwrap(), &p(0.5), &g, DEFAULT_TOL).unwrap().unwrap();
        assert_eq!(cert.witness, Some(p(0.0)));
        assert!(cert.revalidate(&t(&p(0.5)).unwrap(), &g).unwrap());

        let report = svip_inclusion_check(&rel, &g, t, DEFAULT_TOL).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn peak_utility_solutions() {
        let rel = rules::peak_utility(0.7);
        let g = GroundSet::interval(0.0, 1.0, 0.01).unwrap();
        let cone_at = sampled_cone(&rel, &g);
        let sv = svip_solutions(|x| Ok(build_t(&cone_at(x)?, BodyMode::T)), &g, DEFAULT_TOL).unwrap();
        assert_eq!(sv.len(), 1);
        assert_eq!(sv[0].solution, p(0.7));
        assert_eq!(mvip_solutions(&cone_at, &g, DEFAULT_TOL).unwrap(), vec![p(0.7)]);
        let u = uniqueness_check(&rel, &cone_at, &g, DEFAULT_TOL).unwrap();
        assert!(u.singleton && u.coincide && u.equivalence());
    }

    #[test]
    fn non_complete_relation_has_no_minty_solution() {
        let rel = rules::non_complete_origin();
        let g = GroundSet::interval(-1.0, 1.0, 0.01).unwrap().with_halo(1).unwrap();
        let u = uniqueness_check(&rel, sampled_cone(&rel, &g), &g, DEFAULT_TOL).unwrap();
        assert_eq!(u.maximal, vec![p(0.0)]);
        assert!(u.mvip.is_empty());
        assert!(!u.equivalence());
    }

    #[test]
    fn plateau_has_neither_side_singleton() {
        let rel = rules::plateau_utility();
        let g = GroundSet::interval(-2.0, 2.0, 0.05).unwrap();
        let u = uniqueness_check(&rel, sampled_cone(&rel, &g), &g, DEFAULT_TOL).unwrap();
        assert!(u.maximal.len() > 1);
        assert!(u.mvip.is_empty());
        assert!(u.equivalence());
    }

    #[test]
    fn singleton_ground_is_minty() {
        let g = GroundSet::explicit(vec![p(0.3)]).unwrap();
        assert!(mvip_membership(|_| Ok(Cone::full(1)), &p(0.3), &g, 0.0).unwrap());
    }

    #[test]
    fn half_disc_body_certifies_segment() {
        let g = GroundSet::parse_grid("0:1:0.01,0:0:1").unwrap();
        let left = Cone::generated(vec![
            Point::new(vec![-1.0, 0.0]).unwrap(),
            Point::new(vec![0.0, 1.0]).unwrap(),
            Point::new(vec![0.0, -1.0]).unwrap(),
        ])
        .unwrap();
        let body = build_t(&left, BodyMode::G { empty_strict_contour: false });
        let x = Point::new(vec![0.5, 0.0]).unwrap();
        let cert = svip_membership(&body, &x, &g, DEFAULT_TOL).unwrap().unwrap();
        assert!(cert.witness.as_ref().unwrap().norm() < 1e-12);
        assert!(cert.revalidate(&body, &g).unwrap());
    }

    #[test]
    fn three_dimensional_search() {
        let g = GroundSet::parse_grid("0:1:0.5,0:1:0.5,0:1:0.5").unwrap();
        let corner = Point::new(vec![0.0, 0.0, 0.0]).unwrap();
        let ball = build_t(&Cone::full(3), BodyMode::T);
        let cert = svip_membership(&ball, &corner, &g, DEFAULT_TOL).unwrap().unwrap();
        assert!(cert.revalidate(&ball, &g).unwrap());
        // An inward-only body cannot be certified at the far corner.
        let far = Point::new(vec![1.0, 1.0, 1.0]).unwrap();
        let inward = ConvexBody::from_vertices(vec![Point::new(vec![1.0, 1.0, 1.0]).unwrap()]).unwrap();
        assert!(svip_membership(&inward, &far, &g, DEFAULT_TOL).unwrap().is_none());
    }

    #[test]
    fn simplex_projection() {
        let mut v = vec![0.5, 0.5, 0.5];
        project_simplex(&mut v);
        assert!(v.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-12));
        let mut v = vec![2.0, 0.0];
        project_simplex(&mut v);
        assert_eq!(v, vec![1.0, 0.0]);
    }
}
