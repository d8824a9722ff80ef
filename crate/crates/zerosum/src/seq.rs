//! Multiset sequences over (Z/pZ)^d and the invertible affine maps used to
//! normalize them.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Dim, GroupElem, PrimeField};
use crate::CoreError;

/// A finite multiset of group elements: element → multiplicity ≥ 1.
///
/// Entries are kept in a `BTreeMap` so iteration order (and everything
/// derived from it: reports, digests, canonical forms) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sequence {
    field: PrimeField,
    dim: Dim,
    entries: BTreeMap<GroupElem, u32>,
}

impl Sequence {
    pub fn new(field: PrimeField, dim: Dim) -> Self {
        Sequence {
            field,
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        field: PrimeField,
        dim: Dim,
        items: impl IntoIterator<Item = (GroupElem, u32)>,
    ) -> Result<Self, CoreError> {
        let mut seq = Sequence::new(field, dim);
        for (e, m) in items {
            if m == 0 {
                return Err(CoreError::ZeroMultiplicity(e.to_string()));
            }
            seq.push(e, m);
        }
        Ok(seq)
    }

    /// Convenience constructor for 1-dimensional sequences.
    pub fn from_residues(field: PrimeField, residues: &[i64]) -> Self {
        let mut seq = Sequence::new(field, Dim::One);
        for &r in residues {
            seq.push(GroupElem::new_1d(&field, r), 1);
        }
        seq
    }

    /// Convenience constructor for 2-dimensional sequences given
    /// `(x, y, multiplicity)` triples.
    pub fn from_pairs(field: PrimeField, pairs: &[(i64, i64, u32)]) -> Self {
        let mut seq = Sequence::new(field, Dim::Two);
        for &(x, y, m) in pairs {
            if m > 0 {
                seq.push(GroupElem::new_2d(&field, x, y), m);
            }
        }
        seq
    }

    /// Add `m` copies of `e` (merging with an existing entry).
    pub fn push(&mut self, e: GroupElem, m: u32) {
        if m == 0 {
            return;
        }
        *self.entries.entry(e).or_insert(0) += m;
    }

    /// Remove `m` copies of `e`. Fails if fewer than `m` copies are present.
    pub fn remove(&mut self, e: GroupElem, m: u32) -> Result<(), CoreError> {
        match self.entries.get_mut(&e) {
            Some(cur) if *cur > m => {
                *cur -= m;
                Ok(())
            }
            Some(cur) if *cur == m => {
                self.entries.remove(&e);
                Ok(())
            }
            _ => Err(CoreError::MissingElement(e.to_string())),
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Total length |A| = Σ multiplicities.
    pub fn len(&self) -> u64 {
        self.entries.values().map(|&m| m as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, e: &GroupElem) -> u32 {
        self.entries.get(e).copied().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElem, &u32)> {
        self.entries.iter()
    }

    /// Sum of all elements with multiplicity.
    pub fn total_sum(&self) -> GroupElem {
        let f = self.field;
        self.entries
            .iter()
            .fold(GroupElem::zero(), |acc, (e, &m)| {
                acc.add(&f, &e.scale(&f, m % f.p()))
            })
    }

    /// Multiplicity vector indexed by the flat element index `x + p*y`.
    pub fn multiplicity_vector(&self) -> Vec<u32> {
        let n = self.dim.group_size(self.field.p());
        let mut v = vec![0u32; n];
        for (e, &m) in &self.entries {
            v[e.index(self.field.p())] = m;
        }
        v
    }

    pub fn from_multiplicity_vector(field: PrimeField, dim: Dim, v: &[u32]) -> Self {
        let mut seq = Sequence::new(field, dim);
        for (idx, &m) in v.iter().enumerate() {
            if m > 0 {
                seq.push(GroupElem::from_index(&field, idx), m);
            }
        }
        seq
    }

    /// Expand to a flat list of elements, one entry per copy.
    pub fn expand(&self) -> Vec<GroupElem> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for (e, &m) in &self.entries {
            for _ in 0..m {
                out.push(*e);
            }
        }
        out
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, m) in &self.entries {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match self.dim {
                Dim::One => write!(f, "{}^{}", e.x(), m)?,
                Dim::Two => write!(f, "{}^{}", e, m)?,
            }
        }
        if first {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

/// An invertible affine map `z ↦ M z + t` on (Z/pZ)^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineMap {
    field: PrimeField,
    dim: Dim,
    /// Row-major matrix; for d = 1 only `m[0][0]` is used.
    m: [[u32; 2]; 2],
    t: GroupElem,
}

impl AffineMap {
    pub fn new(
        field: PrimeField,
        dim: Dim,
        m: [[i64; 2]; 2],
        t: GroupElem,
    ) -> Result<Self, CoreError> {
        let mr = [
            [field.reduce(m[0][0]), field.reduce(m[0][1])],
            [field.reduce(m[1][0]), field.reduce(m[1][1])],
        ];
        let det = match dim {
            Dim::One => mr[0][0],
            Dim::Two => field.sub(field.mul(mr[0][0], mr[1][1]), field.mul(mr[0][1], mr[1][0])),
        };
        if det == 0 {
            return Err(CoreError::SingularMatrix);
        }
        Ok(AffineMap {
            field,
            dim,
            m: mr,
            t,
        })
    }

    pub fn identity(field: PrimeField, dim: Dim) -> Self {
        AffineMap {
            field,
            dim,
            m: [[1, 0], [0, 1]],
            t: GroupElem::zero(),
        }
    }

    pub fn translation(field: PrimeField, dim: Dim, t: GroupElem) -> Self {
        AffineMap {
            field,
            dim,
            m: [[1, 0], [0, 1]],
            t,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn translation_part(&self) -> GroupElem {
        self.t
    }

    /// Apply only the linear part `M z`.
    pub fn apply_linear(&self, z: &GroupElem) -> GroupElem {
        let f = &self.field;
        match self.dim {
            Dim::One => GroupElem::new_1d(f, f.mul(self.m[0][0], z.x()) as i64),
            Dim::Two => {
                let x = f.add(f.mul(self.m[0][0], z.x()), f.mul(self.m[0][1], z.y()));
                let y = f.add(f.mul(self.m[1][0], z.x()), f.mul(self.m[1][1], z.y()));
                GroupElem::new_2d(f, x as i64, y as i64)
            }
        }
    }

    pub fn apply(&self, z: &GroupElem) -> GroupElem {
        self.apply_linear(z).add(&self.field, &self.t)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        // (M1, t1) ∘ (M2, t2) = (M1 M2, M1 t2 + t1)
        let f = &self.field;
        let a = &self.m;
        let b = &other.m;
        let mut m = [[0u32; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = f.add(f.mul(a[i][0], b[0][j]), f.mul(a[i][1], b[1][j]));
            }
        }
        AffineMap {
            field: self.field,
            dim: self.dim,
            m,
            t: self.apply_linear(&other.t).add(f, &self.t),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let f = &self.field;
        let minv = match self.dim {
            Dim::One => {
                let i = f.inv(self.m[0][0]).expect("map is invertible");
                [[i, 0], [0, 1]]
            }
            Dim::Two => {
                let det = f.sub(
                    f.mul(self.m[0][0], self.m[1][1]),
                    f.mul(self.m[0][1], self.m[1][0]),
                );
                let di = f.inv(det).expect("map is invertible");
                [
                    [f.mul(di, self.m[1][1]), f.mul(di, f.sub(0, self.m[0][1]))],
                    [f.mul(di, f.sub(0, self.m[1][0])), f.mul(di, self.m[0][0])],
                ]
            }
        };
        let inv_lin = AffineMap {
            field: self.field,
            dim: self.dim,
            m: minv,
            t: GroupElem::zero(),
        };
        let t = inv_lin.apply_linear(&self.t);
        AffineMap {
            t: GroupElem::zero().sub(f, &t),
            ..inv_lin
        }
    }
}

/// Transport a sequence along an affine map; multiplicities are preserved.
pub fn apply_affine(a: &Sequence, map: &AffineMap) -> Result<Sequence, CoreError> {
    if a.field() != map.field() || a.dim() != map.dim() {
        return Err(CoreError::MixedContext);
    }
    let mut out = Sequence::new(a.field(), a.dim());
    for (e, &m) in a.iter() {
        out.push(map.apply(e), m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn identity_fixes_sequences() {
        let f = f5();
        let a = Sequence::from_pairs(f, &[(1, 2, 3), (0, 4, 1)]);
        let id = AffineMap::identity(f, Dim::Two);
        assert_eq!(apply_affine(&a, &id).unwrap(), a);
    }

    #[test]
    fn single_element_scaling() {
        // A = {(1,0):2} over p=5, M = [[2,0],[0,1]], t = 0 → {(2,0):2}
        let f = f5();
        let a = Sequence::from_pairs(f, &[(1, 0, 2)]);
        let t = AffineMap::new(f, Dim::Two, [[2, 0], [0, 1]], GroupElem::zero()).unwrap();
        let b = apply_affine(&a, &t).unwrap();
        assert_eq!(b, Sequence::from_pairs(f, &[(2, 0, 2)]));
    }

    #[test]
    fn singular_matrix_rejected() {
        let f = f5();
        assert!(AffineMap::new(f, Dim::Two, [[2, 4], [1, 2]], GroupElem::zero()).is_err());
        assert!(AffineMap::new(f, Dim::One, [[5, 0], [0, 1]], GroupElem::zero()).is_err());
    }

    #[test]
    fn compose_and_invert() {
        let f = f5();
        let t1 = AffineMap::new(f, Dim::Two, [[2, 1], [1, 1]], GroupElem::new_2d(&f, 3, 4)).unwrap();
        let t2 = AffineMap::new(f, Dim::Two, [[1, 2], [0, 3]], GroupElem::new_2d(&f, 1, 0)).unwrap();
        let a = Sequence::from_pairs(f, &[(0, 1, 2), (2, 2, 1), (4, 3, 3)]);
        // applying t1 then t2 equals applying t2 ∘ t1
        let lhs = apply_affine(&apply_affine(&a, &t1).unwrap(), &t2).unwrap();
        let rhs = apply_affine(&a, &t2.compose(&t1)).unwrap();
        assert_eq!(lhs, rhs);
        // inverse undoes
        let back = apply_affine(&apply_affine(&a, &t1).unwrap(), &t1.inverse()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn length_preserved() {
        let f = f5();
        let a = Sequence::from_pairs(f, &[(1, 1, 4), (2, 3, 2)]);
        let t = AffineMap::new(f, Dim::Two, [[1, 1], [0, 1]], GroupElem::new_2d(&f, 2, 2)).unwrap();
        assert_eq!(apply_affine(&a, &t).unwrap().len(), a.len());
    }
}
