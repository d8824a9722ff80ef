//! Canonical forms of sequences under the invertible affine group of
//! (Z/pZ)^d.
//!
//! The canonical representative of an orbit is the one whose multiplicity
//! vector (indexed by `x + p*y`) is lexicographically greatest. That choice
//! makes three things line up:
//! * a sequence supported on a single element canonicalizes onto (0,0);
//! * the canonical representative always carries its maximal multiplicity
//!   on (0,0);
//! * in a DFS that tries multiplicities in descending order, the canonical
//!   representative of every class is visited first, which is what the
//!   symmetry pruning below relies on.
//!
//! The full affine group has |GL_d(Z/pZ)|·p^d elements (~p^6 at d = 2), so
//! orbit scans are explicit but with early-exit comparison, and the group
//! is only materialized for desk-scale p.

use crate::field::{Dim, GroupElem, PrimeField};
use crate::seq::Sequence;
use crate::SearchError;

/// Largest p for which the d = 2 affine group is materialized.
pub const MAX_CANONICAL_P: u32 = 7;

/// Index permutations of all invertible affine maps, each stored so that
/// `image_vector[j] = m[perm[j]]` is the multiplicity vector of some affine
/// image of `m` (the set of maps is closed under inversion, so storing
/// forward maps is enough to enumerate all image vectors).
pub struct AffineGroup {
    pub perms: Vec<Vec<u16>>,
    /// Cheap subset used for prefix pruning at larger p: the translations
    /// in affine mode, empty in linear mode (translations don't preserve
    /// the property there).
    pub cheap_perms: Vec<Vec<u16>>,
}

/// Which symmetry group a property admits: zero-sums of exact length p are
/// translation-invariant (p·t = 0), zero-sums of other lengths are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Affine,
    Linear,
}

impl AffineGroup {
    pub fn new(field: &PrimeField, dim: Dim, kind: GroupKind) -> Result<Self, SearchError> {
        let p = field.p();
        if dim == Dim::Two && p > MAX_CANONICAL_P {
            return Err(SearchError::BeyondDeskScale { p, max: MAX_CANONICAL_P });
        }
        let n = dim.group_size(p);
        let mut perms = Vec::new();
        let mut cheap_perms = Vec::new();
        let with_translations = kind == GroupKind::Affine;

        let elems: Vec<GroupElem> = (0..n).map(|i| GroupElem::from_index(field, i)).collect();
        let push_map = |lin: &dyn Fn(&GroupElem) -> GroupElem, t: &GroupElem| {
            let mut perm = vec![0u16; n];
            for (i, e) in elems.iter().enumerate() {
                perm[i] = lin(e).add(field, t).index(p) as u16;
            }
            perm
        };

        match dim {
            Dim::One => {
                for a in 1..p {
                    for b in 0..p {
                        if b > 0 && !with_translations {
                            continue;
                        }
                        let t = GroupElem::new_1d(field, b as i64);
                        let perm = push_map(&|e: &GroupElem| e.scale(field, a), &t);
                        if a == 1 && b > 0 {
                            cheap_perms.push(perm.clone());
                        }
                        perms.push(perm);
                    }
                }
            }
            Dim::Two => {
                let mut matrices = Vec::new();
                for a in 0..p {
                    for b in 0..p {
                        for c in 0..p {
                            for d in 0..p {
                                let det = field.sub(field.mul(a, d), field.mul(b, c));
                                if det != 0 {
                                    matrices.push([a, b, c, d]);
                                }
                            }
                        }
                    }
                }
                if with_translations {
                    for tx in 0..p {
                        for ty in 0..p {
                            if tx == 0 && ty == 0 {
                                continue;
                            }
                            let t = GroupElem::new_2d(field, tx as i64, ty as i64);
                            cheap_perms.push(push_map(&|e: &GroupElem| *e, &t));
                        }
                    }
                }
                for m in &matrices {
                    let [a, b, c, d] = *m;
                    let lin = |e: &GroupElem| {
                        GroupElem::new_2d(
                            field,
                            field.add(field.mul(a, e.x()), field.mul(b, e.y())) as i64,
                            field.add(field.mul(c, e.x()), field.mul(d, e.y())) as i64,
                        )
                    };
                    if with_translations {
                        for tx in 0..p {
                            for ty in 0..p {
                                let t = GroupElem::new_2d(field, tx as i64, ty as i64);
                                perms.push(push_map(&lin, &t));
                            }
                        }
                    } else {
                        perms.push(push_map(&lin, &GroupElem::zero()));
                    }
                }
            }
        }
        Ok(AffineGroup { perms, cheap_perms })
    }

    /// Lexicographically greatest multiplicity vector over the orbit of `m`.
    pub fn canonical_vector(&self, m: &[u32]) -> Vec<u32> {
        let mut best: Vec<u32> = m.to_vec();
        for perm in &self.perms {
            // early-exit comparison against the current best
            let mut verdict = std::cmp::Ordering::Equal;
            for (j, &src) in perm.iter().enumerate() {
                let v = m[src as usize];
                if v != best[j] {
                    verdict = v.cmp(&best[j]);
                    break;
                }
            }
            if verdict == std::cmp::Ordering::Greater {
                for (j, &src) in perm.iter().enumerate() {
                    best[j] = m[src as usize];
                }
            }
        }
        best
    }

    /// Is `m` its own canonical vector?
    pub fn is_canonical(&self, m: &[u32]) -> bool {
        for perm in &self.perms {
            for (j, &src) in perm.iter().enumerate() {
                let v = m[src as usize];
                match v.cmp(&m[j]) {
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Less => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    /// Can no completion of the prefix `m[..decided]` be canonical?
    ///
    /// Sound test: some permutation produces an image that is provably
    /// lexicographically greater using decided positions only. Positions at
    /// or beyond `decided` are unknown, so any comparison that would need
    /// them is abandoned.
    pub fn prefix_prunable(&self, m: &[u32], decided: usize, perms: &[Vec<u16>]) -> bool {
        for perm in perms {
            for j in 0..decided {
                let src = perm[j] as usize;
                if src >= decided {
                    break; // image position depends on undecided entries
                }
                match m[src].cmp(&m[j]) {
                    std::cmp::Ordering::Greater => return true,
                    std::cmp::Ordering::Less => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        false
    }
}

/// The canonical representative of the affine orbit of `a`.
///
/// Idempotent and constant on orbits; the representative of any single
/// nonzero element with multiplicity 1 is {(0,0): 1}.
pub fn canonical_form(a: &Sequence) -> Result<Sequence, SearchError> {
    let group = AffineGroup::new(&a.field(), a.dim(), GroupKind::Affine)?;
    let v = group.canonical_vector(&a.multiplicity_vector());
    Ok(Sequence::from_multiplicity_vector(a.field(), a.dim(), &v))
}
