use prefmax_core::cone::{
    build_t, complete_equivalence_check, normal_membership, strict_normal_membership, BodyMode, Cone, ContourSample,
    DEFAULT_TOL,
};
use prefmax_core::{check_property, rules, GroundSet, Point, Property, Relation};
use proptest::prelude::*;

const MARGIN: f64 = 1e-7;

fn p(x: f64) -> Point {
    Point::scalar(x).unwrap()
}

fn p2(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).unwrap()
}

fn radial_a() -> Point {
    p2(1.0, 2.0)
}

struct Case {
    rel: Relation,
    ground: GroundSet,
}

fn lsc_cases() -> Vec<Case> {
    vec![
        Case { rel: rules::favored_one(), ground: GroundSet::interval(-2.0, 4.0, 0.05).unwrap() },
        Case { rel: rules::peak_utility(0.7), ground: GroundSet::interval(0.0, 1.0, 0.01).unwrap() },
        Case {
            rel: rules::radial_utility(&radial_a()),
            ground: GroundSet::parse_grid("-1:3:0.1,0:4:0.1").unwrap(),
        },
    ]
}

fn query(dim: usize, raw: &[f64]) -> Point {
    Point::new(raw[..dim].to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normal_cone_is_a_convex_cone(
        case in 0usize..3,
        pick in any::<prop::sample::Index>(),
        a in prop::collection::vec(-3.0f64..3.0, 2),
        b in prop::collection::vec(-3.0f64..3.0, 2),
        lambda in 1e-3f64..1e3,
    ) {
        let c = &lsc_cases()[case];
        let x = &c.ground.points()[pick.index(c.ground.len())];
        let s = ContourSample::from_ground(&c.rel, x, &c.ground).unwrap();
        let dim = x.dim();
        let zero = Point::zeros(dim);
        prop_assert!(normal_membership(&s, &zero, DEFAULT_TOL).unwrap());
        let (qa, qb) = (query(dim, &a), query(dim, &b));
        let ina = normal_membership(&s, &qa, DEFAULT_TOL).unwrap();
        prop_assert_eq!(ina, normal_membership(&s, &qa.scale(lambda), DEFAULT_TOL).unwrap());
        if ina && normal_membership(&s, &qb, DEFAULT_TOL).unwrap() {
            prop_assert!(normal_membership(&s, &qa.add(&qb), DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn strict_cone_inside_normal_cone_and_lsc_gap_closes(
        case in 0usize..3,
        pick in any::<prop::sample::Index>(),
        a in prop::collection::vec(-3.0f64..3.0, 2),
    ) {
        let c = &lsc_cases()[case];
        let x = &c.ground.points()[pick.index(c.ground.len())];
        let s = ContourSample::from_ground(&c.rel, x, &c.ground).unwrap();
        let q = query(x.dim(), &a);
        let weak = normal_membership(&s, &q, DEFAULT_TOL).unwrap();
        let strict = strict_normal_membership(&s, &q, MARGIN).unwrap();
        prop_assert!(!strict || weak);
        if weak && !q.is_zero() {
            prop_assert!(strict);
        }
    }

    #[test]
    fn radial_cone_ray_is_strict(x in prop::collection::vec(-1.0f64..3.0, 2), lambda in 0.01f64..10.0) {
        let x = query(2, &x);
        let a = radial_a();
        prop_assume!(x.dist(&a) > 0.2);
        let rel = rules::radial_utility(&a);
        let s = ContourSample::refined_box(&rel, &x, 2.0 * x.dist(&a), 0.1).unwrap();
        let ray = x.sub(&a).scale(lambda);
        prop_assert!(normal_membership(&s, &ray, DEFAULT_TOL).unwrap());
        prop_assert!(strict_normal_membership(&s, &ray, MARGIN).unwrap());
        prop_assert!(!normal_membership(&s, &a.sub(&x), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn equivalence_lemma_on_complete_relation(x in 0usize..101, probes in prop::collection::vec(-2.0f64..2.0, 50)) {
        let rel = rules::peak_utility(0.7);
        let g = GroundSet::interval(0.0, 1.0, 0.01).unwrap();
        let probes: Vec<Point> = probes.into_iter().map(p).collect();
        let x = g.points()[x].clone();
        prop_assert!(complete_equivalence_check(&rel, &x, &probes, &g, DEFAULT_TOL).unwrap());
    }
}

#[test]
fn equivalence_lemma_at_favored_point() {
    let rel = rules::favored_one();
    let g = GroundSet::interval(-2.0, 4.0, 0.01).unwrap();
    let s = ContourSample::from_ground(&rel, &p(1.0), &g).unwrap();
    assert!(!normal_membership(&s, &p(0.5), DEFAULT_TOL).unwrap());
    assert!(complete_equivalence_check(&rel, &p(1.0), &[p(0.5), p(0.0)], &g, DEFAULT_TOL).unwrap());
}

#[test]
fn non_lsc_plane_keeps_the_gap() {
    let rel = rules::axis_order_plane();
    let g = GroundSet::parse_grid("-1:1:0.05,-1:1:0.05").unwrap().with_halo(1).unwrap();
    let up = p2(0.0, 1.0);
    for x in g.points().iter().filter(|q| q[1] == 0.0) {
        let s = ContourSample::from_ground(&rel, x, &g).unwrap();
        assert!(normal_membership(&s, &up, DEFAULT_TOL).unwrap(), "{x}");
        assert!(!strict_normal_membership(&s, &up, MARGIN).unwrap(), "{x}");
    }
    let s = ContourSample::from_ground(&rel, &p2(0.5, 0.5), &g).unwrap();
    assert!(s.is_empty_contour());
}

#[test]
fn closedness_along_sequences() {
    let tol = DEFAULT_TOL;
    let peak = rules::peak_utility(0.7);
    let g = GroundSet::interval(-1.0, 2.0, 0.01).unwrap();
    for k in 1..=50 {
        let xk = p(0.3 + 0.1 / k as f64);
        let s = ContourSample::from_ground(&peak, &xk, &g).unwrap();
        assert!(normal_membership(&s, &p(-(1.0 + 1.0 / k as f64)), tol).unwrap());
    }
    let s = ContourSample::from_ground(&peak, &p(0.3), &g).unwrap();
    assert!(normal_membership(&s, &p(-1.0), 10.0 * tol).unwrap());

    let a = radial_a();
    let rel = rules::radial_utility(&a);
    let x = p2(0.0, 0.0);
    for k in 1..=20 {
        let xk = p2(0.1 / k as f64, -0.1 / k as f64);
        let s = ContourSample::refined_box(&rel, &xk, 5.0, 0.1).unwrap();
        assert!(normal_membership(&s, &xk.sub(&a), tol).unwrap());
    }
    let s = ContourSample::refined_box(&rel, &x, 5.0, 0.1).unwrap();
    assert!(normal_membership(&s, &x.sub(&a), 10.0 * tol).unwrap());

    // Away from 1 the favored-one cones are all of ℝ along any sequence.
    let fav = rules::favored_one();
    let g = GroundSet::interval(-2.0, 4.0, 0.01).unwrap();
    for k in 1..=20 {
        let s = ContourSample::from_ground(&fav, &p(2.0 + 1.0 / k as f64), &g).unwrap();
        assert!(normal_membership(&s, &p(5.0), tol).unwrap());
    }
    let s = ContourSample::from_ground(&fav, &p(2.0), &g).unwrap();
    assert!(normal_membership(&s, &p(5.0), 10.0 * tol).unwrap());
}

#[test]
fn closedness_fails_where_lower_contours_are_not_open() {
    let fav = rules::favored_one();
    let g = GroundSet::interval(-2.0, 4.0, 0.01).unwrap();
    for k in 1..=20 {
        let s = ContourSample::from_ground(&fav, &p(1.0 + 1.0 / (k as f64 * 1000.0)), &g).unwrap();
        assert!(normal_membership(&s, &p(5.0), DEFAULT_TOL).unwrap());
    }
    let s = ContourSample::from_ground(&fav, &p(1.0), &g).unwrap();
    assert!(!normal_membership(&s, &p(5.0), 10.0 * DEFAULT_TOL).unwrap());
}

#[test]
fn strict_normals_everywhere_give_convexity() {
    let rel = rules::peak_utility(0.4);
    let g = GroundSet::interval(0.0, 1.0, 0.02).unwrap();
    for x in g.points() {
        let s = ContourSample::from_ground(&rel, x, &g).unwrap();
        let found = [p(1.0), p(-1.0)].iter().any(|q| strict_normal_membership(&s, q, MARGIN).unwrap());
        assert!(found, "{x}");
    }
    assert!(check_property(&rel, &g, Property::ConvexU).unwrap().holds);
}

#[test]
fn truncated_hull_examples() {
    let full = build_t(&Cone::full(1), BodyMode::T);
    assert!(full.contains(&p(-1.0), 1e-9).unwrap() && full.contains(&p(1.0), 1e-9).unwrap());
    assert!(!full.contains(&p(1.01), 1e-9).unwrap());
    assert!(build_t(&Cone::zero(1), BodyMode::T).is_empty());

    let left = Cone::generated(vec![p2(-1.0, 0.0), p2(0.0, 1.0), p2(0.0, -1.0)]).unwrap();
    let body = build_t(&left, BodyMode::T);
    assert!(body.contains(&p2(0.0, 1.0), 1e-9).unwrap());
    assert!(body.contains(&p2(0.0, 0.0), 1e-9).unwrap());
    assert!(!body.contains(&p2(0.1, 0.0), 1e-9).unwrap());
    let g = build_t(&Cone::zero(2), BodyMode::G { empty_strict_contour: true });
    assert!(g.contains(&p2(0.5, 0.5), 1e-9).unwrap());
}

#[test]
fn sampled_cones_match_closed_forms() {
    let rel = rules::halfline_order();
    let g = GroundSet::parse_grid("-1:1:0.05,0:0:1").unwrap().with_halo(1).unwrap();
    let closed = Cone::generated(vec![p2(-1.0, 0.0), p2(0.0, 1.0), p2(0.0, -1.0)]).unwrap();
    let s = ContourSample::from_ground(&rel, &p2(0.3, 0.0), &g).unwrap();
    let sampled = Cone::from_contour(&s, DEFAULT_TOL).unwrap();
    for k in 0..72 {
        let t = k as f64 * std::f64::consts::TAU / 72.0;
        let q = p2(t.cos(), t.sin());
        let truth = normal_membership(&s, &q, DEFAULT_TOL).unwrap();
        assert_eq!(closed.contains(&q).unwrap(), truth, "{q}");
        assert_eq!(sampled.contains(&q).unwrap(), truth, "{q}");
    }
}
