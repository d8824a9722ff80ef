//! Normalization of configurations that carry three affinely independent
//! half-mass points: a unimodular change of coordinates placing them at
//! (0,0), (1,0), (0,1), plus the witness extractor for non-primitive
//! differences between half-mass points.

use super::RealSequence;
use crate::lattice::{cross, rat, LatticePoint, UnimodularAffineMap};
use crate::RelaxError;

/// A pair of support points, each of multiplicity exactly 1/2, whose
/// difference is non-primitive (coordinate gcd ≥ 2), if one exists.
pub fn primitivity_witness(a: &RealSequence) -> Option<(LatticePoint, LatticePoint)> {
    let half = rat(1, 2);
    let halves: Vec<&LatticePoint> = a
        .entries()
        .iter()
        .filter(|(_, mu)| *mu == half)
        .map(|(p, _)| p)
        .collect();
    for i in 0..halves.len() {
        for j in (i + 1)..halves.len() {
            let d = halves[j].sub(halves[i]);
            if !d.is_primitive() {
                return Some((*halves[i], *halves[j]));
            }
        }
    }
    None
}

/// Map three half-mass, affinely independent support points spanning an
/// empty (unimodular) triangle onto (0,0), (1,0), (0,1). Returns the
/// transported sequence and the map used. The failing condition is named
/// when the precondition does not hold.
pub fn normalize_three_halves(
    a: &RealSequence,
) -> Result<(RealSequence, UnimodularAffineMap), RelaxError> {
    let half = rat(1, 2);
    let halves: Vec<&LatticePoint> = a
        .entries()
        .iter()
        .filter(|(_, mu)| *mu == half)
        .map(|(p, _)| p)
        .collect();
    if halves.len() < 3 {
        return Err(RelaxError::NormalizePrecondition(format!(
            "needs three points of multiplicity 1/2, found {}",
            halves.len()
        )));
    }
    let mut saw_independent = false;
    for i in 0..halves.len() {
        for j in (i + 1)..halves.len() {
            for k in (j + 1)..halves.len() {
                let det = cross(&halves[j].sub(halves[i]), &halves[k].sub(halves[i]));
                if det == 0 {
                    continue;
                }
                saw_independent = true;
                if det.abs() != 1 {
                    continue; // triangle not lattice-point free
                }
                // the triple works; pick the vertex assignment whose linear
                // part is the identity when one exists (so already-standard
                // and purely-translated inputs map trivially)
                let mut chosen: Option<UnimodularAffineMap> = None;
                for (a1, a2, a3) in
                    [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)]
                {
                    let (p1, p2, p3) = (halves[a1], halves[a2], halves[a3]);
                    let d = cross(&p2.sub(p1), &p3.sub(p1));
                    debug_assert!(d.abs() == 1);
                    // M = B⁻¹ for B = [p2−p1 | p3−p1]; det ±1 keeps M integral
                    let b = [
                        [p2.x - p1.x, p3.x - p1.x],
                        [p2.y - p1.y, p3.y - p1.y],
                    ];
                    let sign = d as i64;
                    let minv = [
                        [sign * b[1][1], -sign * b[0][1]],
                        [-sign * b[1][0], sign * b[0][0]],
                    ];
                    // z ↦ M (z − p1)
                    let lin = UnimodularAffineMap::new(minv, LatticePoint::new(0, 0))?;
                    let t = lin.apply(p1);
                    let map = UnimodularAffineMap::new(minv, LatticePoint::new(-t.x, -t.y))?;
                    debug_assert_eq!(map.apply(p1), LatticePoint::new(0, 0));
                    debug_assert_eq!(map.apply(p2), LatticePoint::new(1, 0));
                    debug_assert_eq!(map.apply(p3), LatticePoint::new(0, 1));
                    if minv == [[1, 0], [0, 1]] {
                        chosen = Some(map);
                        break;
                    }
                    if chosen.is_none() {
                        chosen = Some(map);
                    }
                }
                let map = chosen.expect("at least one assignment is valid");
                return Ok((a.apply_unimodular(&map), map));
            }
        }
    }
    Err(RelaxError::NormalizePrecondition(
        if saw_independent {
            "no affinely independent half-mass triple spans an empty (determinant ±1) triangle"
        } else {
            "all half-mass points are collinear"
        }
        .to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_for_gcd_two() {
        let a = RealSequence::from_quads(&[(0, 0, 1, 2), (2, 0, 1, 2)]).unwrap();
        let w = primitivity_witness(&a).unwrap();
        assert_eq!(w, (LatticePoint::new(0, 0), LatticePoint::new(2, 0)));
    }

    #[test]
    fn primitive_difference_gives_no_witness() {
        let a = RealSequence::from_quads(&[(0, 0, 1, 2), (1, 0, 1, 2)]).unwrap();
        assert!(primitivity_witness(&a).is_none());
    }

    #[test]
    fn no_half_mass_points_gives_no_witness() {
        let a = RealSequence::from_quads(&[(0, 0, 1, 4), (2, 0, 1, 4)]).unwrap();
        assert!(primitivity_witness(&a).is_none());
    }

    #[test]
    fn already_standard_is_fixed() {
        let a = RealSequence::from_quads(&[(0, 0, 1, 2), (1, 0, 1, 2), (0, 1, 1, 2)]).unwrap();
        let (b, map) = normalize_three_halves(&a).unwrap();
        assert_eq!(map, UnimodularAffineMap::identity());
        assert_eq!(b, a);
    }

    #[test]
    fn pure_translation() {
        let a = RealSequence::from_quads(&[(5, 3, 1, 2), (6, 3, 1, 2), (5, 4, 1, 2)]).unwrap();
        let (b, map) = normalize_three_halves(&a).unwrap();
        assert_eq!(map.m, [[1, 0], [0, 1]]);
        assert_eq!(b.multiplicity(&LatticePoint::new(0, 0)), rat(1, 2));
        assert_eq!(b.multiplicity(&LatticePoint::new(1, 0)), rat(1, 2));
        assert_eq!(b.multiplicity(&LatticePoint::new(0, 1)), rat(1, 2));
    }

    #[test]
    fn general_unimodular_case() {
        // (0,0),(2,1),(1,1): det = 2·1 − 1·1 = 1, mapped by a ±1 matrix
        let a = RealSequence::from_quads(&[(0, 0, 1, 2), (2, 1, 1, 2), (1, 1, 1, 2)]).unwrap();
        let (b, map) = normalize_three_halves(&a).unwrap();
        let det = map.m[0][0] * map.m[1][1] - map.m[0][1] * map.m[1][0];
        assert!(det == 1 || det == -1);
        for p in [(0, 0), (1, 0), (0, 1)] {
            assert_eq!(b.multiplicity(&LatticePoint::new(p.0, p.1)), rat(1, 2));
        }
    }

    #[test]
    fn failing_conditions_named() {
        // only two half-mass points
        let a = RealSequence::from_quads(&[(0, 0, 1, 2), (1, 0, 1, 2), (0, 1, 1, 4)]).unwrap();
        let err = normalize_three_halves(&a).unwrap_err();
        assert!(err.to_string().contains("three points"));
        // collinear half-mass points
        let b = RealSequence::from_quads(&[(0, 0, 1, 2), (1, 0, 1, 2), (3, 0, 1, 2)]).unwrap();
        let err = normalize_three_halves(&b).unwrap_err();
        assert!(err.to_string().contains("collinear"));
        // independent but non-unimodular triangle (contains lattice points)
        let c = RealSequence::from_quads(&[(0, 0, 1, 2), (2, 0, 1, 2), (0, 2, 1, 2)]).unwrap();
        let err = normalize_three_halves(&c).unwrap_err();
        assert!(err.to_string().contains("determinant"));
    }
}
