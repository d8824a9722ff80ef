//! Lattice points in Z², canonical lines, exact rationals, and unimodular
//! affine maps.
//!
//! All geometry downstream of this module is exact: multiplicities and
//! coordinates are carried as [`Rational`] (arbitrary-precision), never as
//! floats, because the admissibility thresholds (3.99, 1/2, 3/2) sit on
//! razor-thin boundaries.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::CoreError;

/// Exact rational scalar used for multiplicities and geometry.
pub type Rational = BigRational;

/// Build a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse "a/b" or "a" into a rational. Denominator must be positive after
/// normalization (num-rational reduces and fixes the sign).
pub fn parse_rational(s: &str) -> Result<Rational, CoreError> {
    let s = s.trim();
    let mk_err = || CoreError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| mk_err())?;
            let d: BigInt = d.trim().parse().map_err(|_| mk_err())?;
            if d.is_zero() {
                return Err(mk_err());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Render a rational as "a" or "a/b" (the wire format used everywhere).
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

/// A point of Z².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - other.x, self.y - other.y)
    }

    /// Is the difference vector primitive (gcd of coordinates = 1)?
    pub fn is_primitive(&self) -> bool {
        self.x.unsigned_abs().gcd(&self.y.unsigned_abs()) == 1
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Exact 2D cross product (as i128 to avoid overflow).
#[inline]
pub fn cross(a: &LatticePoint, b: &LatticePoint) -> i128 {
    a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128
}

/// A line in Z² in canonical form: a primitive direction with
/// lexicographically-positive sign, plus the signed offset
/// `dir.x * y - dir.y * x` (constant along the line).
///
/// Two point pairs spanning the same line produce identical values, so the
/// type is directly usable as a hash/BTree key for line-mass aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    pub dir_x: i64,
    pub dir_y: i64,
    pub offset: i64,
}

/// Canonical line through two distinct points.
pub fn line_through(a: &LatticePoint, b: &LatticePoint) -> Result<Line, CoreError> {
    if a == b {
        return Err(CoreError::DegenerateLine);
    }
    let mut dx = b.x - a.x;
    let mut dy = b.y - a.y;
    let g = dx.unsigned_abs().gcd(&dy.unsigned_abs()) as i64;
    dx /= g;
    dy /= g;
    // lexicographically-positive sign: first nonzero of (dx, dy) is > 0
    if dx < 0 || (dx == 0 && dy < 0) {
        dx = -dx;
        dy = -dy;
    }
    let offset = dx
        .checked_mul(a.y)
        .zip(dy.checked_mul(a.x))
        .and_then(|(u, v)| u.checked_sub(v))
        .ok_or(CoreError::Overflow)?;
    Ok(Line {
        dir_x: dx,
        dir_y: dy,
        offset,
    })
}

impl Line {
    /// Membership test, consistent with the 2×2 determinant test.
    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.dir_x as i128 * p.y as i128 - self.dir_y as i128 * p.x as i128 == self.offset as i128
    }
}

/// An affine map `z ↦ M z + t` on Z² with det M = ±1, i.e. a bijection of
/// the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularAffineMap {
    pub m: [[i64; 2]; 2],
    pub t: LatticePoint,
}

impl UnimodularAffineMap {
    pub fn new(m: [[i64; 2]; 2], t: LatticePoint) -> Result<Self, CoreError> {
        let det = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
        if det != 1 && det != -1 {
            return Err(CoreError::NotUnimodular(det));
        }
        Ok(UnimodularAffineMap { m, t })
    }

    pub fn identity() -> Self {
        UnimodularAffineMap {
            m: [[1, 0], [0, 1]],
            t: LatticePoint::new(0, 0),
        }
    }

    pub fn apply(&self, p: &LatticePoint) -> LatticePoint {
        LatticePoint::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    /// Apply to a rational point.
    pub fn apply_rational(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (
            BigRational::from_integer(self.m[0][0].into()) * x
                + BigRational::from_integer(self.m[0][1].into()) * y
                + BigRational::from_integer(self.t.x.into()),
            BigRational::from_integer(self.m[1][0].into()) * x
                + BigRational::from_integer(self.m[1][1].into()) * y
                + BigRational::from_integer(self.t.y.into()),
        )
    }

    pub fn inverse(&self) -> UnimodularAffineMap {
        let det = self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]; // ±1
        let mi = [
            [det * self.m[1][1], -det * self.m[0][1]],
            [-det * self.m[1][0], det * self.m[0][0]],
        ];
        let tx = -(mi[0][0] * self.t.x + mi[0][1] * self.t.y);
        let ty = -(mi[1][0] * self.t.x + mi[1][1] * self.t.y);
        UnimodularAffineMap {
            m: mi,
            t: LatticePoint::new(tx, ty),
        }
    }

    pub fn compose(&self, other: &UnimodularAffineMap) -> UnimodularAffineMap {
        let a = &self.m;
        let b = &other.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let t = self.apply(&other.t);
        UnimodularAffineMap { m, t }
    }
}

/// Signum of a rational, as -1/0/1.
pub fn rational_sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
