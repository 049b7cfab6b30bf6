//! Planar convex polygons: hull construction, half-plane clipping and
//! nearest point to the origin.

pub(crate) type P2 = [f64; 2];

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points
/// dropped. Degenerate inputs give one or two vertices.
pub(crate) fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= 1e-15 && (a[1] - b[1]).abs() <= 1e-15);
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<P2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &P2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Keeps the part of a convex polygon with `⟨z, d⟩ ≥ -t`
/// (Sutherland–Hodgman against a single half-plane).
pub(crate) fn clip(poly: &[P2], d: P2, t: f64) -> Vec<P2> {
    let val = |z: P2| z[0] * d[0] + z[1] * d[1] + t;
    let n = poly.len();
    if n == 1 {
        return if val(poly[0]) >= 0.0 { poly.to_vec() } else { Vec::new() };
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let (vc, vn) = (val(cur), val(next));
        if vc >= 0.0 {
            out.push(cur);
        }
        if (vc >= 0.0) != (vn >= 0.0) {
            let s = vc / (vc - vn);
            out.push([cur[0] + s * (next[0] - cur[0]), cur[1] + s * (next[1] - cur[1])]);
        }
    }
    out
}

fn closest_on_segment(a: P2, b: P2) -> P2 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return a;
    }
    let t = (-(a[0] * ab[0] + a[1] * ab[1]) / len2).clamp(0.0, 1.0);
    [a[0] + t * ab[0], a[1] + t * ab[1]]
}

/// Point of the (counter-clockwise) convex polygon nearest to the origin.
pub(crate) fn nearest_to_origin(poly: &[P2]) -> Option<P2> {
    match poly.len() {
        0 => None,
        1 => Some(poly[0]),
        n => {
            let area: f64 = (0..n).map(|i| cross([0.0, 0.0], poly[i], poly[(i + 1) % n])).sum();
            if n >= 3 && area > 1e-15 && (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], [0.0, 0.0]) >= -1e-15) {
                return Some([0.0, 0.0]);
            }
            (0..n)
                .map(|i| closest_on_segment(poly[i], poly[(i + 1) % n]))
                .min_by(|a, b| (a[0].hypot(a[1])).total_cmp(&b[0].hypot(b[1])))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0]];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert_eq!(h[0], [0.0, 0.0]);
    }

    #[test]
    fn clipping_and_nearest_point() {
        let square = convex_hull(&[[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]);
        // z₀ ≥ 0.5
        let right = clip(&square, [1.0, 0.0], -0.5);
        assert!(right.iter().all(|z| z[0] >= 0.5 - 1e-12));
        assert_eq!(nearest_to_origin(&right), Some([0.5, 0.0]));
        assert_eq!(nearest_to_origin(&square), Some([0.0, 0.0]));
        // z₀ ≥ 2 leaves nothing
        assert!(clip(&square, [1.0, 0.0], -2.0).is_empty());
    }

    #[test]
    fn degenerate_polygons() {
        let seg = convex_hull(&[[0.0, -1.0], [0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(seg.len(), 2);
        let half = clip(&seg, [0.0, 1.0], -0.5);
        assert!(half.iter().all(|z| z[1] >= 0.5 - 1e-12));
        assert_eq!(nearest_to_origin(&half), Some([0.0, 0.5]));
    }
}
