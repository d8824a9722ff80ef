//! Prime fields and elements of (Z/pZ)^d for d ∈ {1, 2}.
//!
//! Residues are stored reduced into `[0, p)`. A balanced view into
//! `(-p/2, p/2]` is available through [`PrimeField::balanced`] for the
//! places where the residue of least absolute value is the natural
//! representative (character sums, reports).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::CoreError;

/// A prime modulus, validated at construction by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, CoreError> {
        if !is_prime(p) {
            return Err(CoreError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// The representative of `r` in `(-p/2, p/2]`.
    #[inline]
    pub fn balanced(&self, r: u32) -> i64 {
        let r = (r % self.p) as i64;
        if 2 * r > self.p as i64 {
            r - self.p as i64
        } else {
            r
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            return None;
        }
        // p is small; extended Euclid on i64 is plenty.
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i64) as u32)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dimension of the ambient group: Z/pZ or (Z/pZ)^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    #[inline]
    pub fn coords(&self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    /// Number of group elements, p^d.
    #[inline]
    pub fn group_size(&self, p: u32) -> usize {
        match self {
            Dim::One => p as usize,
            Dim::Two => (p as usize) * (p as usize),
        }
    }
}

/// An element of (Z/pZ)^d, coordinates reduced into `[0, p)`.
///
/// For d = 1 the second coordinate is fixed at 0, so derived ordering and
/// hashing behave uniformly across dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    y: u32,
    x: u32,
}

impl GroupElem {
    pub fn new_1d(field: &PrimeField, x: i64) -> Self {
        GroupElem {
            x: field.reduce(x),
            y: 0,
        }
    }

    pub fn new_2d(field: &PrimeField, x: i64, y: i64) -> Self {
        GroupElem {
            x: field.reduce(x),
            y: field.reduce(y),
        }
    }

    /// Element from its flat index `x + p*y`.
    #[inline]
    pub fn from_index(field: &PrimeField, idx: usize) -> Self {
        let p = field.p() as usize;
        GroupElem {
            x: (idx % p) as u32,
            y: (idx / p) as u32,
        }
    }

    #[inline]
    pub fn x(&self) -> u32 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> u32 {
        self.y
    }

    pub fn zero() -> Self {
        GroupElem { x: 0, y: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Flat bitset index `x + p*y`.
    #[inline]
    pub fn index(&self, p: u32) -> usize {
        self.x as usize + p as usize * self.y as usize
    }

    /// Coordinates in the balanced view `(-p/2, p/2]`.
    pub fn balanced(&self, field: &PrimeField) -> [i64; 2] {
        [field.balanced(self.x), field.balanced(self.y)]
    }

    pub fn add(&self, field: &PrimeField, other: &GroupElem) -> GroupElem {
        GroupElem {
            x: field.add(self.x, other.x),
            y: field.add(self.y, other.y),
        }
    }

    pub fn sub(&self, field: &PrimeField, other: &GroupElem) -> GroupElem {
        GroupElem {
            x: field.sub(self.x, other.x),
            y: field.sub(self.y, other.y),
        }
    }

    pub fn scale(&self, field: &PrimeField, k: u32) -> GroupElem {
        GroupElem {
            x: field.mul(self.x, k),
            y: field.mul(self.y, k),
        }
    }

    /// Dot product `self · other` in Z/pZ (the Fourier pairing).
    pub fn dot(&self, field: &PrimeField, other: &GroupElem) -> u32 {
        field.add(field.mul(self.x, other.x), field.mul(self.y, other.y))
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_check() {
        for p in [2u32, 3, 5, 7, 11, 13, 101] {
            assert!(PrimeField::new(p).is_ok(), "{p} should be prime");
        }
        for n in [0u32, 1, 4, 6, 9, 15, 91] {
            assert!(PrimeField::new(n).is_err(), "{n} should be rejected");
        }
    }

    #[test]
    fn reduction_and_balanced_view() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.reduce(-1), 4);
        assert_eq!(f.reduce(7), 2);
        // (-p/2, p/2] at p=5 is {-2,-1,0,1,2}
        assert_eq!(f.balanced(0), 0);
        assert_eq!(f.balanced(2), 2);
        assert_eq!(f.balanced(3), -2);
        assert_eq!(f.balanced(4), -1);
        // p=2: (-1,1] so 1 stays 1
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.balanced(1), 1);
    }

    #[test]
    fn inverse() {
        let f = PrimeField::new(13).unwrap();
        for a in 1..13 {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1);
        }
        assert!(f.inv(0).is_none());
        assert!(f.inv(13).is_none());
    }

    #[test]
    fn index_round_trip() {
        let f = PrimeField::new(7).unwrap();
        for idx in 0..49 {
            let e = GroupElem::from_index(&f, idx);
            assert_eq!(e.index(7), idx);
        }
    }
}
