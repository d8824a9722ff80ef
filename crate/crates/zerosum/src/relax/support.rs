//! Exact support functions and polygons for the weighted-sum bodies
//! Σ_R^c(A) = { Σ t_i a_i : 0 ≤ t_i ≤ μ_i, Σ t_i = c }.
//!
//! The support function in a direction d is a fractional-knapsack greedy:
//! sort entries by ⟨d, a_i⟩ descending and fill until the budget c is
//! spent. The polygon's edge directions are differences of support points,
//! so its vertex set is recovered by evaluating the greedy optimum between
//! consecutive "walls" (perpendiculars of pairwise differences) of the
//! normal fan.

use num_traits::Zero;
use serde::Serialize;

use super::RealSequence;
use crate::lattice::{LatticePoint, Rational};
use crate::RelaxError;

/// A point with exact rational coordinates. Serializes as a two-element
/// array of "num/den" strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoint {
    pub x: Rational,
    pub y: Rational,
}

impl Serialize for RatPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(serializer)
    }
}

impl RatPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RatPoint { x, y }
    }

    pub fn from_lattice(p: &LatticePoint) -> Self {
        RatPoint {
            x: Rational::from_integer(p.x.into()),
            y: Rational::from_integer(p.y.into()),
        }
    }

    /// ⟨(dx, dy), self⟩ exactly.
    pub fn dot_int(&self, dx: i64, dy: i64) -> Rational {
        &self.x * Rational::from_integer(dx.into()) + &self.y * Rational::from_integer(dy.into())
    }
}

/// Admissible weights witnessing a support value: t_i per entry, same order
/// as the sequence's entries.
#[derive(Debug, Clone)]
pub struct WeightVector {
    pub weights: Vec<Rational>,
}

impl WeightVector {
    /// The weighted sum Σ t_i a_i.
    pub fn point(&self, a: &RealSequence) -> RatPoint {
        let mut x = Rational::zero();
        let mut y = Rational::zero();
        for ((p, _), t) in a.entries().iter().zip(&self.weights) {
            x += t * Rational::from_integer(p.x.into());
            y += t * Rational::from_integer(p.y.into());
        }
        RatPoint::new(x, y)
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |acc, t| acc + t)
    }
}

/// Greedy argmax of ⟨dir, Σ t_i a_i⟩ over admissible weights of total c.
/// Ties broken by entry order; the value is tie-independent, only the
/// witness varies.
pub fn support_weights(
    a: &RealSequence,
    dir: (i64, i64),
    c: &Rational,
) -> Result<WeightVector, RelaxError> {
    if dir == (0, 0) {
        return Err(RelaxError::ZeroDirection);
    }
    if a.total_mass() < *c {
        return Err(RelaxError::InsufficientMass {
            total: a.total_mass().to_string(),
            c: c.to_string(),
        });
    }
    let mut order: Vec<usize> = (0..a.entries().len()).collect();
    let scores: Vec<i128> = a
        .entries()
        .iter()
        .map(|(p, _)| dir.0 as i128 * p.x as i128 + dir.1 as i128 * p.y as i128)
        .collect();
    order.sort_by(|&i, &j| scores[j].cmp(&scores[i]).then(i.cmp(&j)));

    let mut weights = vec![Rational::zero(); a.entries().len()];
    let mut remaining = c.clone();
    for &i in &order {
        if remaining.is_zero() {
            break;
        }
        let mu = &a.entries()[i].1;
        let take = if *mu < remaining { mu.clone() } else { remaining.clone() };
        remaining -= &take;
        weights[i] = take;
    }
    Ok(WeightVector { weights })
}

/// The support value h(dir) = max ⟨dir, x⟩ over x ∈ Σ_R^c(A).
pub fn support_function(
    a: &RealSequence,
    dir: (i64, i64),
    c: &Rational,
) -> Result<Rational, RelaxError> {
    let w = support_weights(a, dir, c)?;
    let mut h = Rational::zero();
    for ((p, _), t) in a.entries().iter().zip(&w.weights) {
        let score = dir.0 as i128 * p.x as i128 + dir.1 as i128 * p.y as i128;
        h += t * Rational::from_integer(score.into());
    }
    Ok(h)
}

/// Convex polygon (or segment, or point) with exact rational vertices in
/// counterclockwise order, no three consecutive collinear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polygon {
    pub vertices: Vec<RatPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolygonKind {
    Point,
    Segment,
    Polygon,
}

impl Polygon {
    pub fn kind(&self) -> PolygonKind {
        match self.vertices.len() {
            0 | 1 => PolygonKind::Point,
            2 => PolygonKind::Segment,
            _ => PolygonKind::Polygon,
        }
    }

    /// Rational bounding box (min, max) pairs.
    pub fn bbox(&self) -> Option<(RatPoint, RatPoint)> {
        if self.vertices.is_empty() {
            return None;
        }
        let mut min = self.vertices[0].clone();
        let mut max = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            if v.x < min.x {
                min.x = v.x.clone();
            }
            if v.y < min.y {
                min.y = v.y.clone();
            }
            if v.x > max.x {
                max.x = v.x.clone();
            }
            if v.y > max.y {
                max.y = v.y.clone();
            }
        }
        Some((min, max))
    }
}

/// Angular comparator for integer directions (by half, then cross product).
fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |v: (i64, i64)| -> u8 {
        // 0 for angle in [0, π), 1 for [π, 2π)
        if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        cross.cmp(&0).reverse()
    })
}

/// All candidate facet normals: perpendiculars of pairwise support-point
/// differences, deduplicated as primitive vectors, both signs, sorted by
/// angle.
fn wall_directions(a: &RealSequence) -> Vec<(i64, i64)> {
    use num_integer::Integer;
    let pts: Vec<&LatticePoint> = a.support().collect();
    let mut walls = std::collections::BTreeSet::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let dx = pts[j].x - pts[i].x;
            let dy = pts[j].y - pts[i].y;
            let g = dx.unsigned_abs().gcd(&dy.unsigned_abs()) as i64;
            let (dx, dy) = (dx / g, dy / g);
            // perpendicular of the difference, both signs
            walls.insert((-dy, dx));
            walls.insert((dy, -dx));
        }
    }
    let mut walls: Vec<(i64, i64)> = walls.into_iter().collect();
    walls.sort_by(|&a, &b| angle_cmp(a, b));
    walls
}

/// Exact vertex list of Σ_R^c(A), counterclockwise.
///
/// Degenerate outputs are allowed: a segment when the support is collinear,
/// a single point when c = |A| or the support is a single point.
pub fn sigma_polygon(a: &RealSequence, c: &Rational) -> Result<Polygon, RelaxError> {
    if a.total_mass() < *c {
        return Err(RelaxError::InsufficientMass {
            total: a.total_mass().to_string(),
            c: c.to_string(),
        });
    }
    if c.is_zero() {
        return Ok(Polygon {
            vertices: vec![RatPoint::new(Rational::zero(), Rational::zero())],
        });
    }
    let walls = wall_directions(a);
    if walls.is_empty() {
        // single support point: the body is the single point c·a
        let p = a.entries().first().expect("mass positive");
        let c0 = c.clone();
        return Ok(Polygon {
            vertices: vec![RatPoint::new(
                &c0 * Rational::from_integer(p.0.x.into()),
                c0.clone() * Rational::from_integer(p.0.y.into()),
            )],
        });
    }
    if walls.len() == 2 {
        // collinear support: a segment; endpoints are the greedy optima
        // along the two directions parallel to the line
        let along = (walls[0].1, -walls[0].0);
        let e1 = support_weights(a, along, c)?.point(a);
        let e2 = support_weights(a, (-along.0, -along.1), c)?.point(a);
        let vertices = if e1 == e2 { vec![e1] } else { vec![e1, e2] };
        return Ok(Polygon { vertices });
    }

    // evaluate the greedy vertex strictly inside each gap between
    // consecutive walls; the sum of two consecutive walls lies in the gap
    let mut raw: Vec<RatPoint> = Vec::new();
    let n = walls.len();
    for k in 0..n {
        let w1 = walls[k];
        let w2 = walls[(k + 1) % n];
        let mid = (w1.0 + w2.0, w1.1 + w2.1);
        debug_assert!(mid != (0, 0), "antipodal consecutive walls");
        raw.push(support_weights(a, mid, c)?.point(a));
    }
    // dedupe cyclically, then drop collinear middles
    let mut verts: Vec<RatPoint> = Vec::new();
    for v in raw {
        if verts.last() != Some(&v) {
            verts.push(v);
        }
    }
    while verts.len() > 1 && verts.first() == verts.last() {
        verts.pop();
    }
    let mut i = 0;
    while verts.len() > 2 && i < verts.len() {
        let n = verts.len();
        let a0 = &verts[(i + n - 1) % n];
        let b0 = &verts[i];
        let c0 = &verts[(i + 1) % n];
        let cross = (&b0.x - &a0.x) * (&c0.y - &a0.y) - (&b0.y - &a0.y) * (&c0.x - &a0.x);
        if cross.is_zero() {
            verts.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(Polygon { vertices: verts })
}

/// Directions whose half-plane constraints exactly cut out Σ_R^c(A):
/// pairwise differences, their perpendiculars, and the axes (the axes
/// matter only for point-degenerate bodies).
pub(crate) fn cutting_directions(a: &RealSequence) -> Vec<(i64, i64)> {
    use num_integer::Integer;
    let pts: Vec<&LatticePoint> = a.support().collect();
    let mut dirs = std::collections::BTreeSet::new();
    dirs.extend([(1i64, 0i64), (0, 1), (-1, 0), (0, -1)]);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let dx = pts[j].x - pts[i].x;
            let dy = pts[j].y - pts[i].y;
            let g = dx.unsigned_abs().gcd(&dy.unsigned_abs()) as i64;
            let (dx, dy) = (dx / g, dy / g);
            dirs.extend([(dx, dy), (-dx, -dy), (-dy, dx), (dy, -dx)]);
        }
    }
    dirs.into_iter().collect()
}

/// Membership of a rational point in Σ_R^c(A) (a closed set), decided by
/// exact half-plane tests ⟨d, q⟩ ≤ h(d) over the cutting directions.
pub fn contains(a: &RealSequence, q: &RatPoint, c: &Rational) -> Result<bool, RelaxError> {
    if a.total_mass() < *c {
        return Err(RelaxError::InsufficientMass {
            total: a.total_mass().to_string(),
            c: c.to_string(),
        });
    }
    for d in cutting_directions(a) {
        if q.dot_int(d.0, d.1) > support_function(a, d, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn diamond() -> RealSequence {
        RealSequence::from_quads(&[(0, 0, 1, 2), (1, 0, 1, 2), (0, 1, 1, 2), (1, 1, 1, 2)])
            .unwrap()
    }

    #[test]
    fn diamond_support_values() {
        let a = diamond();
        let one = rat(1, 1);
        assert_eq!(support_function(&a, (1, 0), &one).unwrap(), rat(1, 1));
        assert_eq!(support_function(&a, (1, 1), &one).unwrap(), rat(3, 2));
    }

    #[test]
    fn single_point_support_value() {
        let a = RealSequence::from_quads(&[(3, -2, 1, 1)]).unwrap();
        let one = rat(1, 1);
        for d in [(1, 0), (2, 5), (-3, 1)] {
            assert_eq!(
                support_function(&a, d, &one).unwrap(),
                rat(3 * d.0 - 2 * d.1, 1)
            );
        }
    }

    #[test]
    fn insufficient_mass_rejected() {
        let a = RealSequence::from_quads(&[(0, 0, 1, 2)]).unwrap();
        assert!(support_function(&a, (1, 0), &rat(1, 1)).is_err());
        assert!(support_function(&a, (0, 0), &rat(1, 2)).is_err());
    }

    #[test]
    fn diamond_polygon_vertices() {
        let a = diamond();
        let poly = sigma_polygon(&a, &rat(1, 1)).unwrap();
        assert_eq!(poly.kind(), PolygonKind::Polygon);
        let expect: Vec<(Rational, Rational)> = vec![
            (rat(1, 2), rat(0, 1)),
            (rat(1, 1), rat(1, 2)),
            (rat(1, 2), rat(1, 1)),
            (rat(0, 1), rat(1, 2)),
        ];
        let got: Vec<(Rational, Rational)> = poly
            .vertices
            .iter()
            .map(|v| (v.x.clone(), v.y.clone()))
            .collect();
        // CCW cyclic order, any starting vertex
        assert_eq!(got.len(), 4);
        let start = got
            .iter()
            .position(|v| *v == expect[0])
            .expect("expected vertex present");
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(&got[(start + i) % 4], e);
        }
    }

    #[test]
    fn collinear_support_gives_segment() {
        let a = RealSequence::from_quads(&[(0, 0, 1, 2), (1, 0, 1, 2), (2, 0, 1, 2)]).unwrap();
        let poly = sigma_polygon(&a, &rat(1, 1)).unwrap();
        assert_eq!(poly.kind(), PolygonKind::Segment);
        let xs: Vec<Rational> = poly.vertices.iter().map(|v| v.x.clone()).collect();
        assert!(xs.contains(&rat(1, 2)) && xs.contains(&rat(3, 2)));
        assert!(poly.vertices.iter().all(|v| v.y.is_zero()));
    }

    #[test]
    fn full_mass_forces_single_point() {
        let a = RealSequence::from_quads(&[(0, 0, 1, 2), (2, 2, 1, 2), (1, 0, 1, 1)]).unwrap();
        let poly = sigma_polygon(&a, &rat(2, 1)).unwrap();
        assert_eq!(poly.kind(), PolygonKind::Point);
        // Σ μ_i a_i = 1/2·(2,2) + 1·(1,0) = (2, 1)
        assert_eq!(poly.vertices[0], RatPoint::new(rat(2, 1), rat(1, 1)));
    }

    #[test]
    fn diamond_membership() {
        let a = diamond();
        let one = rat(1, 1);
        let inside = RatPoint::new(rat(1, 2), rat(1, 2));
        assert!(contains(&a, &inside, &one).unwrap());
        let outside = RatPoint::new(rat(1, 1), rat(0, 1));
        assert!(!contains(&a, &outside, &one).unwrap());
        let boundary = RatPoint::new(rat(1, 1), rat(1, 2));
        assert!(contains(&a, &boundary, &one).unwrap(), "closed set");
    }

    #[test]
    fn polygon_vertices_satisfy_all_support_inequalities() {
        let a = RealSequence::from_quads(&[
            (0, 0, 1, 2),
            (2, 1, 1, 3),
            (-1, 2, 2, 3),
            (1, -1, 1, 2),
            (3, 3, 1, 4),
        ])
        .unwrap();
        let c = rat(3, 2);
        let poly = sigma_polygon(&a, &c).unwrap();
        for d in cutting_directions(&a) {
            let h = support_function(&a, d, &c).unwrap();
            for v in &poly.vertices {
                assert!(v.dot_int(d.0, d.1) <= h);
            }
            // support duality: the max over vertices attains h exactly
            let best = poly
                .vertices
                .iter()
                .map(|v| v.dot_int(d.0, d.1))
                .max()
                .unwrap();
            assert_eq!(best, h, "direction {d:?}");
        }
        // vertices and edge midpoints are members (closed-set consistency)
        for (i, v) in poly.vertices.iter().enumerate() {
            assert!(contains(&a, v, &c).unwrap());
            let w = &poly.vertices[(i + 1) % poly.vertices.len()];
            let mid = RatPoint::new((&v.x + &w.x) / rat(2, 1), (&v.y + &w.y) / rat(2, 1));
            assert!(contains(&a, &mid, &c).unwrap());
        }
    }
}
