//! The mass-shift move: transfer mass from a triangle's vertices onto an
//! enclosed lattice point. The shifted amount m is capped so the result
//! stays admissible — by the remaining headroom at the target (1/2 − μ(v)),
//! by the vertex masses, and by the headroom of every line through the
//! target (3/2 − μ(ℓ)). Any weighted sum of total 1 of the new sequence is
//! one of the old, so Σ_R^1 never grows; iterating to a fixpoint yields a
//! "minimal" configuration on which interior-point claims are hardest.

use num_traits::{Signed, Zero};

use super::{is_admissible, AdmissibilityThresholds, RealSequence};
use crate::lattice::{cross, line_through, rat, LatticePoint, Line, Rational};
use crate::RelaxError;

#[derive(Debug, Clone)]
pub struct DreplaceMove {
    pub result: RealSequence,
    pub shifted: Rational,
    pub barycentric: [Rational; 3],
    /// The boundary clause kicked in: v lies on a triangle side whose
    /// supporting line was excluded from the caps, and that exclusion
    /// changed the value of m.
    pub side_exclusion_mattered: bool,
}

fn rational_from_i128(v: i128) -> Rational {
    Rational::from_integer(v.into())
}

/// Barycentric coordinates of v in the (possibly degenerate) triangle.
fn barycentric(
    v1: &LatticePoint,
    v2: &LatticePoint,
    v3: &LatticePoint,
    v: &LatticePoint,
) -> Result<[Rational; 3], RelaxError> {
    let det = cross(&v2.sub(v1), &v3.sub(v1));
    if det != 0 {
        let s2 = rational_from_i128(cross(&v.sub(v1), &v3.sub(v1))) / rational_from_i128(det);
        let s3 = rational_from_i128(cross(&v2.sub(v1), &v.sub(v1))) / rational_from_i128(det);
        let s1 = rat(1, 1) - &s2 - &s3;
        if s1.is_negative() || s2.is_negative() || s3.is_negative() {
            return Err(RelaxError::OutsideTriangle(v.to_string()));
        }
        return Ok([s1, s2, s3]);
    }
    // collinear triangle: v must lie on the segment; compute on the line
    // with the coordinate of largest spread, zeroing one vertex
    let pts = [v1, v2, v3];
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let a = pts[i];
        let b = pts[j];
        if a == b {
            continue;
        }
        if cross(&b.sub(a), &v.sub(a)) != 0 {
            continue; // v not on the line through a, b
        }
        // v = (1−t) a + t b along the dominant coordinate
        let (num, den) = if (b.x - a.x).abs() >= (b.y - a.y).abs() {
            (v.x - a.x, b.x - a.x)
        } else {
            (v.y - a.y, b.y - a.y)
        };
        if den == 0 {
            continue;
        }
        let t = rat(num, den);
        if t.is_negative() || t > rat(1, 1) {
            continue;
        }
        let mut s = [Rational::zero(), Rational::zero(), Rational::zero()];
        s[i] = rat(1, 1) - &t;
        s[j] = t;
        s[k] = Rational::zero();
        return Ok(s);
    }
    Err(RelaxError::DegenerateTriangle(v.to_string()))
}

/// One mass shift with the literal cap m ≤ μ(v_i) on each vertex. Returns
/// the updated sequence and the shifted amount m (m = 0 is legal and
/// leaves the sequence unchanged, e.g. when the target already carries
/// mass 1/2).
pub fn dreplace_move(
    a: &RealSequence,
    v1: &LatticePoint,
    v2: &LatticePoint,
    v3: &LatticePoint,
    v: &LatticePoint,
) -> Result<DreplaceMove, RelaxError> {
    shift_mass(a, v1, v2, v3, v, false)
}

/// The ω-limit of repeating one shift: vertex caps relax from μ(v_i) to
/// μ(v_i)/s_i, so a binding vertex is drained completely instead of
/// approaching zero geometrically. Shares its zero set with the literal
/// move (vertices carry positive mass, so both vanish exactly when the
/// target or a line saturates), and the containment argument is oblivious
/// to the cap, so Σ_R^1 still never grows.
fn saturating_move(
    a: &RealSequence,
    v1: &LatticePoint,
    v2: &LatticePoint,
    v3: &LatticePoint,
    v: &LatticePoint,
) -> Result<DreplaceMove, RelaxError> {
    shift_mass(a, v1, v2, v3, v, true)
}

fn shift_mass(
    a: &RealSequence,
    v1: &LatticePoint,
    v2: &LatticePoint,
    v3: &LatticePoint,
    v: &LatticePoint,
    saturating: bool,
) -> Result<DreplaceMove, RelaxError> {
    if v == v1 || v == v2 || v == v3 {
        return Err(RelaxError::ShiftTargetIsVertex);
    }
    let mu = [a.multiplicity(v1), a.multiplicity(v2), a.multiplicity(v3)];
    if mu.iter().any(|m| !m.is_positive()) {
        return Err(RelaxError::NoShiftHeadroom(
            "triangle vertices need positive mass".to_string(),
        ));
    }
    let s = barycentric(v1, v2, v3, v)?;

    let half = rat(1, 2);
    let three_halves = rat(3, 2);
    let mu_v = a.multiplicity(v);
    let mut m = &half - &mu_v;
    for (x, sx) in mu.iter().zip(&s) {
        let cap = if saturating {
            if sx.is_zero() {
                continue; // vertex untouched by this shift
            }
            x / sx
        } else {
            x.clone()
        };
        if cap < m {
            m = cap;
        }
    }

    // supporting side lines excluded for boundary targets: when s_k = 0 the
    // target sits on the side (v_i, v_j), and a shift moves as much mass
    // onto that line as it removes, so its mass cannot grow
    let verts = [v1, v2, v3];
    let mut excluded: Vec<Line> = Vec::new();
    for (k, sk) in s.iter().enumerate() {
        if sk.is_zero() {
            let (i, j) = match k {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            if verts[i] != verts[j] {
                if let Ok(line) = line_through(verts[i], verts[j]) {
                    if line.contains(v) {
                        excluded.push(line);
                    }
                }
            }
        }
    }

    // every line through v and at least one other support point caps m
    let mut line_cap: Option<Rational> = None;
    let mut line_cap_unexcluded: Option<Rational> = None;
    let mut seen: std::collections::BTreeSet<Line> = Default::default();
    for (p, _) in a.entries() {
        if p == v {
            continue;
        }
        let line = line_through(v, p).expect("distinct points");
        if !seen.insert(line) {
            continue;
        }
        // line_mass already counts v's own mass (v lies on the line)
        let cap = &three_halves - a.line_mass(&line);
        let min_in = |slot: &mut Option<Rational>, val: &Rational| {
            let replace = match slot {
                None => true,
                Some(cur) => val < cur,
            };
            if replace {
                *slot = Some(val.clone());
            }
        };
        min_in(&mut line_cap_unexcluded, &cap);
        if !excluded.contains(&line) {
            min_in(&mut line_cap, &cap);
        }
    }
    if let Some(cap) = &line_cap {
        if *cap < m {
            m = cap.clone();
        }
    }
    let side_exclusion_mattered = match (&line_cap, &line_cap_unexcluded) {
        (_, Some(unex)) => {
            let m_unexcluded = m.clone().min(unex.clone());
            m_unexcluded != m
        }
        _ => false,
    };
    if m.is_negative() {
        m = Rational::zero();
    }

    let mut result = a.clone();
    for (i, vert) in verts.iter().enumerate() {
        let new_mu = a.multiplicity(vert) - &s[i] * &m;
        debug_assert!(!new_mu.is_negative());
        result.set_multiplicity(**vert, new_mu)?;
    }
    result.set_multiplicity(*v, mu_v + &m)?;
    debug_assert_eq!(result.total_mass(), a.total_mass());

    Ok(DreplaceMove {
        result,
        shifted: m,
        barycentric: s,
        side_exclusion_mattered,
    })
}

#[derive(Debug, Clone)]
pub struct Minimized {
    pub sequence: RealSequence,
    pub moves: usize,
    pub converged: bool,
    /// Moves where the boundary-side exclusion changed the cap.
    pub side_exclusion_flags: usize,
}

/// Iterate mass shifts until no candidate move shifts positive mass, or
/// until the move budget runs out (reported, not hidden: the source
/// argument does not bound this iteration).
///
/// Candidates are all triples of positive-mass support points crossed with
/// all lattice points of the support bounding box lying in the closed
/// triangle, in deterministic order.
pub fn minimal_configuration(
    a: &RealSequence,
    th: &AdmissibilityThresholds,
    move_budget: usize,
) -> Result<Minimized, RelaxError> {
    let adm = is_admissible(a, th);
    if !adm.admissible {
        return Err(RelaxError::NotAdmissible(format!(
            "mass_ok={} max_mult_ok={} line_ok={}",
            adm.mass_ok, adm.max_mult_ok, adm.line_ok
        )));
    }
    let mut current = a.clone();
    let mut moves = 0usize;
    let mut flags = 0usize;
    loop {
        let mut applied = false;
        let pts: Vec<LatticePoint> = current.support().cloned().collect();
        let Some((lo, hi)) = current.bbox() else {
            break;
        };
        'sweep: for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                for k in (j + 1)..pts.len() {
                    for x in lo.x..=hi.x {
                        for y in lo.y..=hi.y {
                            let v = LatticePoint::new(x, y);
                            if v == pts[i] || v == pts[j] || v == pts[k] {
                                continue;
                            }
                            if current.multiplicity(&v) >= rat(1, 2) {
                                continue;
                            }
                            let Ok(mv) = saturating_move(&current, &pts[i], &pts[j], &pts[k], &v)
                            else {
                                continue; // outside triangle or degenerate
                            };
                            if mv.shifted.is_positive() {
                                if mv.side_exclusion_mattered {
                                    flags += 1;
                                }
                                current = mv.result;
                                moves += 1;
                                applied = true;
                                if moves >= move_budget {
                                    return Ok(Minimized {
                                        sequence: current,
                                        moves,
                                        converged: false,
                                        side_exclusion_flags: flags,
                                    });
                                }
                                break 'sweep;
                            }
                        }
                    }
                }
            }
        }
        if !applied {
            break;
        }
    }
    Ok(Minimized {
        sequence: current,
        moves,
        converged: true,
        side_exclusion_flags: flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relax::support::{support_function, cutting_directions};

    #[test]
    fn triangle_shift_basic() {
        // vertices (0,0),(3,0),(0,3) at 1/2 each, target (1,1):
        // barycentrics 1/3 each, m = 1/2, vertex masses drop to 1/3
        let a =
            RealSequence::from_quads(&[(0, 0, 1, 2), (3, 0, 1, 2), (0, 3, 1, 2)]).unwrap();
        let mv = dreplace_move(
            &a,
            &LatticePoint::new(0, 0),
            &LatticePoint::new(3, 0),
            &LatticePoint::new(0, 3),
            &LatticePoint::new(1, 1),
        )
        .unwrap();
        assert_eq!(mv.shifted, rat(1, 2));
        assert_eq!(mv.barycentric, [rat(1, 3), rat(1, 3), rat(1, 3)]);
        assert_eq!(mv.result.multiplicity(&LatticePoint::new(1, 1)), rat(1, 2));
        for p in [(0, 0), (3, 0), (0, 3)] {
            assert_eq!(
                mv.result.multiplicity(&LatticePoint::new(p.0, p.1)),
                rat(1, 3)
            );
        }
        assert_eq!(mv.result.total_mass(), a.total_mass());
    }

    #[test]
    fn saturated_target_shifts_nothing() {
        let a = RealSequence::from_quads(&[
            (0, 0, 1, 2),
            (3, 0, 1, 2),
            (0, 3, 1, 2),
            (1, 1, 1, 2),
        ])
        .unwrap();
        let mv = dreplace_move(
            &a,
            &LatticePoint::new(0, 0),
            &LatticePoint::new(3, 0),
            &LatticePoint::new(0, 3),
            &LatticePoint::new(1, 1),
        )
        .unwrap();
        assert!(mv.shifted.is_zero());
        assert_eq!(mv.result, a);
    }

    #[test]
    fn outside_triangle_rejected() {
        let a =
            RealSequence::from_quads(&[(0, 0, 1, 2), (3, 0, 1, 2), (0, 3, 1, 2)]).unwrap();
        let r = dreplace_move(
            &a,
            &LatticePoint::new(0, 0),
            &LatticePoint::new(3, 0),
            &LatticePoint::new(0, 3),
            &LatticePoint::new(3, 3),
        );
        assert!(matches!(r, Err(RelaxError::OutsideTriangle(_))));
    }

    #[test]
    fn collinear_on_segment_ok_and_off_segment_rejected() {
        let a =
            RealSequence::from_quads(&[(0, 0, 1, 2), (2, 0, 1, 2), (4, 0, 1, 4)]).unwrap();
        let on = dreplace_move(
            &a,
            &LatticePoint::new(0, 0),
            &LatticePoint::new(2, 0),
            &LatticePoint::new(4, 0),
            &LatticePoint::new(1, 0),
        )
        .unwrap();
        assert!(on.barycentric.iter().any(|s| s.is_zero()));
        let off = dreplace_move(
            &a,
            &LatticePoint::new(0, 0),
            &LatticePoint::new(2, 0),
            &LatticePoint::new(4, 0),
            &LatticePoint::new(1, 1),
        );
        assert!(matches!(off, Err(RelaxError::DegenerateTriangle(_))));
    }

    #[test]
    fn support_never_grows_under_move() {
        let a = RealSequence::from_quads(&[
            (0, 0, 1, 2),
            (3, 0, 1, 2),
            (0, 3, 1, 2),
            (2, 2, 1, 4),
        ])
        .unwrap();
        let mv = dreplace_move(
            &a,
            &LatticePoint::new(0, 0),
            &LatticePoint::new(3, 0),
            &LatticePoint::new(0, 3),
            &LatticePoint::new(1, 1),
        )
        .unwrap();
        assert!(mv.shifted.is_positive());
        let c = rat(1, 1);
        for d in cutting_directions(&a) {
            let before = support_function(&a, d, &c).unwrap();
            let after = support_function(&mv.result, d, &c).unwrap();
            assert!(after <= before, "direction {d:?}");
        }
    }

    #[test]
    fn fixpoint_on_triangle_instance() {
        let a =
            RealSequence::from_quads(&[(0, 0, 1, 2), (3, 0, 1, 2), (0, 3, 1, 2)]).unwrap();
        let th = AdmissibilityThresholds {
            total_mass: rat(3, 2),
            ..Default::default()
        };
        let min = minimal_configuration(&a, &th, 200).unwrap();
        assert!(min.converged);
        assert!(min.moves >= 1);
        assert_eq!(min.sequence.total_mass(), rat(3, 2));
        assert!(is_admissible(&min.sequence, &th).admissible);
        // fixpoint: no candidate move shifts positive mass any more
        let pts: Vec<LatticePoint> = min.sequence.support().cloned().collect();
        let (lo, hi) = min.sequence.bbox().unwrap();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                for k in (j + 1)..pts.len() {
                    for x in lo.x..=hi.x {
                        for y in lo.y..=hi.y {
                            let v = LatticePoint::new(x, y);
                            if v == pts[i] || v == pts[j] || v == pts[k] {
                                continue;
                            }
                            if let Ok(mv) =
                                dreplace_move(&min.sequence, &pts[i], &pts[j], &pts[k], &v)
                            {
                                assert!(mv.shifted.is_zero(), "move at {v} still live");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_admissible_input_rejected() {
        let a = RealSequence::from_quads(&[(0, 0, 3, 4)]).unwrap();
        let th = AdmissibilityThresholds::default();
        assert!(matches!(
            minimal_configuration(&a, &th, 10),
            Err(RelaxError::NotAdmissible(_))
        ));
    }
}
