//! Closed-form relations used throughout the tests and the fixture registry.
//!
//! Value comparisons (`y = 1`, `x ≠ 0`, …) use the absolute point tolerance so
//! lattice points produced by [`GroundSet`](crate::GroundSet) match exactly.

use crate::point::{Point, POINT_EQ_TOL};
use crate::relation::{Relation, Utility};

fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= POINT_EQ_TOL
}

/// On `[0, 4]`: `x ⪰ y ⇔ y/2 + 2 ≤ x ≤ 4` and `(x, y) ≠ (7/2, 2)`.
///
/// Has the finite intersection property (4 beats everything) without being
/// reflexive, complete or transitive.
pub fn fip_not_transitive() -> Relation {
    Relation::predicate("fip-not-transitive", 1, |x, y| {
        let (x, y) = (x[0], y[0]);
        y / 2.0 + 2.0 <= x + POINT_EQ_TOL && x <= 4.0 + POINT_EQ_TOL && !(eq(x, 3.5) && eq(y, 2.0))
    })
}

/// On `[0, 1]`: `x ⪰ y ⇔ x = 0 or y = x`. `U(x) = {0, x}` is not convex while
/// every strict upper contour is.
pub fn convexs_not_convex() -> Relation {
    Relation::predicate("convexs-not-convex", 1, |x, y| eq(x[0], 0.0) || eq(x[0], y[0]))
}

/// On `[0, 1]`: `x ⪰ y ⇔ y = 0`, or `x = y` for `y ∈ ]0,1] ∖ {1/2}`, or
/// `x = 0` for `y = 1/2`. Convex, but `U^s(0) = ]0,1] ∖ {1/2}` is not.
pub fn convex_not_convexs() -> Relation {
    Relation::predicate("convex-not-convexs", 1, |x, y| {
        let (x, y) = (x[0], y[0]);
        if eq(y, 0.0) {
            true
        } else if eq(y, 0.5) {
            eq(x, 0.0)
        } else {
            eq(x, y)
        }
    })
}

/// On ℝ: `x ⪰ y ⇔ y = x or y = 1`. Only the point 1 has a non-empty strict
/// upper contour (everything else).
pub fn favored_one() -> Relation {
    Relation::predicate("favored-one", 1, |x, y| eq(y[0], x[0]) || eq(y[0], 1.0))
}

/// On ℝ: `x ⪰ y ⇔ (x, y) = (0, 0)` or (`x ≥ y` and `y ≠ 0`). Not complete;
/// `U^s(x) = ]x, ∞[` for `x ≠ 0` and `U^s(0) = ∅`, so the origin is its only
/// maximal element.
pub fn non_complete_origin() -> Relation {
    Relation::predicate("non-complete-origin", 1, |x, y| {
        let (x, y) = (x[0], y[0]);
        (eq(x, 0.0) && eq(y, 0.0)) || (x >= y - POINT_EQ_TOL && !eq(y, 0.0))
    })
}

/// `x ⪰ y ⇔ x = y = 0` in dimension `dim`. Its strict part is empty.
pub fn only_origin(dim: usize) -> Relation {
    Relation::predicate(format!("only-origin-{dim}d"), dim, |x, y| {
        x.coords().iter().chain(y.coords()).all(|&c| eq(c, 0.0))
    })
}

/// On `ℝ × {0} ⊂ ℝ²`: `(x, 0) ⪰ (y, 0) ⇔ x ≥ y`; points off the axis are
/// unrelated.
pub fn halfline_order() -> Relation {
    Relation::predicate("axis-order", 2, |p, q| {
        eq(p[1], 0.0) && eq(q[1], 0.0) && p[0] >= q[0] - POINT_EQ_TOL
    })
}

/// On ℝ²: `(x, y) ⪰ (a, b) ⇔ x ≥ a and y = b = 0`. Not lower semicontinuous.
pub fn axis_order_plane() -> Relation {
    Relation::predicate("axis-order-plane", 2, |p, q| {
        p[0] >= q[0] - POINT_EQ_TOL && eq(p[1], 0.0) && eq(q[1], 0.0)
    })
}

/// `u(x) = -|x - c|` on ℝ, Lipschitz with constant 1.
pub fn peak_utility(c: f64) -> Relation {
    let u = Utility::new(format!("-|x-{c}|"), move |x: &Point| -(x[0] - c).abs());
    Relation::utility(1, u, Some(1.0), true).expect("valid utility")
}

/// `u(x) = -‖x - a‖₂`, Lipschitz with constant 1.
pub fn radial_utility(a: &Point) -> Relation {
    let center = a.clone();
    let u = Utility::new(format!("-|x-{a}|"), move |x: &Point| -x.dist(&center));
    Relation::utility(a.dim(), u, Some(1.0), true).expect("valid utility")
}

/// `u(x) = -max(|x| - 1, 0)`: every point of `[-1, 1]` is a maximizer.
pub fn plateau_utility() -> Relation {
    let u = Utility::new("-max(|x|-1,0)", |x: &Point| -(x[0].abs() - 1.0).max(0.0));
    Relation::utility(1, u, Some(1.0), true).expect("valid utility")
}

/// `u(x) = |x - c|`: rational but with non-convex upper contours.
pub fn valley_utility(c: f64) -> Relation {
    let u = Utility::new(format!("|x-{c}|"), move |x: &Point| (x[0] - c).abs());
    Relation::utility(1, u, Some(1.0), false).expect("valid utility")
}
