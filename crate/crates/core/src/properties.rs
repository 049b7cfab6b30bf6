//! Contour sets and exhaustive property checks over a finite ground set.
//!
//! Every verdict is computed by brute force over the ground points. Failure
//! witnesses are the first ones found when scanning the ground in its own
//! (lexicographic) order.

use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::ground::GroundSet;
use crate::point::Point;
use crate::relation::Relation;

/// Which contour set to extract around a base point `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contour {
    /// `U(x) = {y : y ⪰ x}`
    Upper,
    /// `U^s(x) = {y : y ≻ x}`
    StrictUpper,
    /// `L(x) = {y : x ⪰ y}`
    Lower,
    /// `L^s(x) = {y : x ≻ y}`
    StrictLower,
}

fn in_contour(rel: &Relation, x: &Point, y: &Point, which: Contour) -> Result<bool> {
    match which {
        Contour::Upper => rel.holds(y, x),
        Contour::StrictUpper => rel.strictly_prefers(y, x),
        Contour::Lower => rel.holds(x, y),
        Contour::StrictLower => rel.strictly_prefers(x, y),
    }
}

/// Ground points (window only) in the selected contour of `x`.
pub fn contour(rel: &Relation, x: &Point, ground: &GroundSet, which: Contour) -> Result<Vec<Point>> {
    check_dim(ground.dim(), x.dim())?;
    let mut out = Vec::new();
    for y in ground.points() {
        if in_contour(rel, x, y, which)? {
            out.push(y.clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    Reflexive,
    Complete,
    Transitive,
    /// Every `m` points have a common upper bound.
    MFip(usize),
    /// Finite intersection property of the upper contours.
    Fip,
    /// All upper contours convex.
    ConvexU,
    /// All strict upper contours convex.
    ConvexUs,
    /// Stampacchia solutions are maximal elements.
    SvipInclusion,
    /// `0 ∈ N_f(x)` exactly at maximal elements.
    ZeroMaximality,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Reflexive => write!(f, "reflexive"),
            Property::Complete => write!(f, "complete"),
            Property::Transitive => write!(f, "transitive"),
            Property::MFip(m) => write!(f, "{m}-FIP"),
            Property::Fip => write!(f, "FIP"),
            Property::ConvexU => write!(f, "convexU"),
            Property::ConvexUs => write!(f, "convexUs"),
            Property::SvipInclusion => write!(f, "SVIP⊆ME"),
            Property::ZeroMaximality => write!(f, "0∈N_f⇔maximal"),
        }
    }
}

/// Outcome of an exhaustive check. A failing report always carries a witness.
///
/// Witness layouts: `[x]` (reflexive), `[x, y]` (complete), `[x, y, z]`
/// (transitive), the family `[x₁, …, x_m]` with no common upper bound
/// (m-FIP, FIP), `[x, a, b, p]` with `a, b` in the contour of `x` and lattice
/// point `p` near the segment `[a, b]` missing from it (convexity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Vec<Point>>,
}

impl PropertyReport {
    pub fn pass(property: Property) -> Self {
        PropertyReport { property, holds: true, witness: None }
    }

    pub fn fail(property: Property, witness: Vec<Point>) -> Self {
        PropertyReport { property, holds: false, witness: Some(witness) }
    }

    /// Re-evaluates a failure witness against the definition. Returns `true`
    /// when the witness still demonstrates the failure (and for passing
    /// reports, which have nothing to reproduce).
    pub fn witness_reproduces(&self, rel: &Relation, ground: &GroundSet) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(self.holds);
        };
        Ok(match self.property {
            Property::Reflexive => !rel.holds(&w[0], &w[0])?,
            Property::Complete => !rel.holds(&w[0], &w[1])? && !rel.holds(&w[1], &w[0])?,
            Property::Transitive => {
                rel.holds(&w[0], &w[1])? && rel.holds(&w[1], &w[2])? && !rel.holds(&w[0], &w[2])?
            }
            Property::MFip(_) | Property::Fip => {
                let mut bounded = false;
                for z in ground.points() {
                    let mut all = true;
                    for xi in w {
                        if !rel.holds(z, xi)? {
                            all = false;
                            break;
                        }
                    }
                    if all {
                        bounded = true;
                        break;
                    }
                }
                !bounded
            }
            Property::ConvexU | Property::ConvexUs => {
                let which = if self.property == Property::ConvexU {
                    Contour::Upper
                } else {
                    Contour::StrictUpper
                };
                let (x, a, b, p) = (&w[0], &w[1], &w[2], &w[3]);
                in_contour(rel, x, a, which)?
                    && in_contour(rel, x, b, which)?
                    && !in_contour(rel, x, p, which)?
                    && dist_to_segment(p, a, b) <= segment_tolerance(ground)
            }
            Property::SvipInclusion | Property::ZeroMaximality => true,
        })
    }
}

/// `holds[i]` has bit `j` set iff `ground[i] ⪰ ground[j]`.
fn relation_matrix(rel: &Relation, ground: &GroundSet) -> Result<Vec<FixedBitSet>> {
    let pts = ground.points();
    pts.par_iter()
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(pts.len());
            for (j, y) in pts.iter().enumerate() {
                if rel.holds(x, y)? {
                    row.insert(j);
                }
            }
            Ok(row)
        })
        .collect()
}

/// Column view: `upper[j]` has bit `i` set iff `ground[i] ⪰ ground[j]`.
fn upper_sets(matrix: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = matrix.len();
    let mut upper = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in matrix.iter().enumerate() {
        for j in row.ones() {
            upper[j].insert(i);
        }
    }
    upper
}

pub fn check_property(rel: &Relation, ground: &GroundSet, property: Property) -> Result<PropertyReport> {
    check_dim(rel.dim(), ground.dim())?;
    let pts = ground.points();
    let n = pts.len();
    let pick = |idx: &[usize]| idx.iter().map(|&i| pts[i].clone()).collect::<Vec<_>>();

    match property {
        Property::Reflexive => {
            for x in pts {
                if !rel.holds(x, x)? {
                    return Ok(PropertyReport::fail(property, vec![x.clone()]));
                }
            }
            Ok(PropertyReport::pass(property))
        }
        Property::Complete => {
            let m = relation_matrix(rel, ground)?;
            for i in 0..n {
                for j in i..n {
                    if !m[i][j] && !m[j][i] {
                        return Ok(PropertyReport::fail(property, pick(&[i, j])));
                    }
                }
            }
            Ok(PropertyReport::pass(property))
        }
        Property::Transitive => {
            let m = relation_matrix(rel, ground)?;
            for i in 0..n {
                for j in m[i].ones() {
                    // z with j ⪰ z but not i ⪰ z
                    let mut missing = m[j].clone();
                    missing.difference_with(&m[i]);
                    if let Some(k) = missing.ones().next() {
                        return Ok(PropertyReport::fail(property, pick(&[i, j, k])));
                    }
                }
            }
            Ok(PropertyReport::pass(property))
        }
        Property::MFip(m) => {
            let upper = upper_sets(&relation_matrix(rel, ground)?);
            let m = m.min(n);
            let mut chosen = Vec::with_capacity(m);
            let full = {
                let mut all = FixedBitSet::with_capacity(n);
                all.insert_range(..);
                all
            };
            Ok(match empty_family(&upper, m, 0, &full, &mut chosen) {
                Some(w) => PropertyReport::fail(property, pick(&w)),
                None => PropertyReport::pass(property),
            })
        }
        Property::Fip => {
            let upper = upper_sets(&relation_matrix(rel, ground)?);
            let mut acc = FixedBitSet::with_capacity(n);
            acc.insert_range(..);
            for (k, u) in upper.iter().enumerate() {
                acc.intersect_with(u);
                if acc.is_clear() {
                    let w = shrink_family(&upper, (0..=k).collect());
                    return Ok(PropertyReport::fail(property, pick(&w)));
                }
            }
            Ok(PropertyReport::pass(property))
        }
        Property::ConvexU => convexity(rel, ground, Contour::Upper, property),
        Property::ConvexUs => convexity(rel, ground, Contour::StrictUpper, property),
        Property::SvipInclusion | Property::ZeroMaximality => Err(crate::Error::InvalidParameter(format!(
            "{property} is checked by its own module, not by check_property"
        ))),
    }
}

/// Depth-first search over index sets of size ≤ `m` in lexicographic order,
/// returning the first family whose upper contours have empty intersection.
fn empty_family(
    upper: &[FixedBitSet],
    m: usize,
    start: usize,
    acc: &FixedBitSet,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chosen.len() == m {
        return None;
    }
    for i in start..upper.len() {
        let mut next = acc.clone();
        next.intersect_with(&upper[i]);
        chosen.push(i);
        if next.is_clear() {
            return Some(chosen.clone());
        }
        if let Some(w) = empty_family(upper, m, i + 1, &next, chosen) {
            return Some(w);
        }
        chosen.pop();
    }
    None
}

/// Drops members of an empty-intersection family while it stays empty.
fn shrink_family(upper: &[FixedBitSet], mut family: Vec<usize>) -> Vec<usize> {
    let n = upper.len();
    let intersect = |fam: &[usize]| {
        let mut acc = FixedBitSet::with_capacity(n);
        acc.insert_range(..);
        for &i in fam {
            acc.intersect_with(&upper[i]);
        }
        acc
    };
    let mut k = 0;
    while k < family.len() {
        let mut trial = family.clone();
        trial.remove(k);
        if !trial.is_empty() && intersect(&trial).is_clear() {
            family = trial;
        } else {
            k += 1;
        }
    }
    family
}

fn segment_tolerance(ground: &GroundSet) -> f64 {
    1e-9 * (1.0 + ground.resolution())
}

pub(crate) fn dist_to_segment(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(&ab) / len2).clamp(0.0, 1.0);
    p.dist(&a.axpy(t, &ab))
}

/// Grid convexity: for every pair in a contour, every ground point lying on
/// the segment between them must be in the contour too.
fn convexity(rel: &Relation, ground: &GroundSet, which: Contour, property: Property) -> Result<PropertyReport> {
    let pts = ground.points();
    let tol = segment_tolerance(ground);
    let found: Vec<Option<Vec<Point>>> = pts
        .par_iter()
        .map(|x| -> Result<Option<Vec<Point>>> {
            let mut members = FixedBitSet::with_capacity(pts.len());
            for (j, y) in pts.iter().enumerate() {
                if in_contour(rel, x, y, which)? {
                    members.insert(j);
                }
            }
            let idx: Vec<usize> = members.ones().collect();
            for (ai, &a) in idx.iter().enumerate() {
                for &b in &idx[ai + 1..] {
                    let (pa, pb) = (&pts[a], &pts[b]);
                    for (k, q) in pts.iter().enumerate() {
                        if !members.contains(k) && dist_to_segment(q, pa, pb) <= tol {
                            return Ok(Some(vec![x.clone(), pa.clone(), pb.clone(), q.clone()]));
                        }
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    Ok(match found.into_iter().flatten().next() {
        Some(w) => PropertyReport::fail(property, w),
        None => PropertyReport::pass(property),
    })
}

/// `ME(X) = {x ∈ X : U^s(x) ∩ X = ∅}`, candidates from the window, challengers
/// from the window and halo.
pub fn maximal_elements(rel: &Relation, ground: &GroundSet) -> Result<Vec<Point>> {
    check_dim(rel.dim(), ground.dim())?;
    let flags: Vec<bool> = ground
        .points()
        .par_iter()
        .map(|x| -> Result<bool> {
            for y in ground.all_points() {
                if rel.strictly_prefers(y, x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(select(ground.points(), &flags))
}

/// `M(X) = {x ∈ X : x ⪰ y ∀ y ∈ X}`.
pub fn maxima(rel: &Relation, ground: &GroundSet) -> Result<Vec<Point>> {
    check_dim(rel.dim(), ground.dim())?;
    let flags: Vec<bool> = ground
        .points()
        .par_iter()
        .map(|x| -> Result<bool> {
            for y in ground.all_points() {
                if !rel.holds(x, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(select(ground.points(), &flags))
}

fn select(points: &[Point], flags: &[bool]) -> Vec<Point> {
    points.iter().zip(flags).filter(|(_, &f)| f).map(|(p, _)| p.clone()).collect()
}
