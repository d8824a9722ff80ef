//! Exact computation of Σ^k(A), the sets of sums of subsequences of exact
//! length k, via bounded-knapsack bitset dynamic programming.
//!
//! Layer k is a flat bitset of p^d bits indexed by `x + p*y`. Adding one
//! copy of an element `a` folds `layers[k] |= translate(layers[k-1], a)`
//! for k descending; an element of multiplicity m is folded by binary
//! splitting into O(log m) chunks, each chunk c acting as a single 0/1 item
//! that shifts length by c and translates by c·a. Multiplicities are
//! clamped to kmax before folding (copies beyond kmax can never appear in a
//! subsequence of length ≤ kmax).

use crate::field::{Dim, GroupElem, PrimeField};
use crate::seq::Sequence;
use crate::SigmaError;

const MAX_WORDS: usize = 4; // supports p^d ≤ 256, i.e. p ≤ 13 at d = 2

/// Dense bitset over the p^d group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupBitset {
    words: [u64; MAX_WORDS],
    bits: usize,
}

impl GroupBitset {
    pub fn empty(bits: usize) -> Self {
        assert!(bits <= MAX_WORDS * 64, "group too large for bitset");
        GroupBitset {
            words: [0; MAX_WORDS],
            bits,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.bits);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.bits);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn is_subset_of(&self, other: &GroupBitset) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    /// `self |= perm(other)` where `perm` maps source index to target index.
    #[inline]
    fn or_permuted(&mut self, other: &GroupBitset, perm: &IndexPerm) {
        for (wi, &w) in other.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                let tgt = perm.map[wi * 64 + b] as usize;
                self.words[tgt / 64] |= 1u64 << (tgt % 64);
            }
        }
    }
}

/// Index permutation realizing translation by a fixed group element.
#[derive(Debug, Clone)]
pub struct IndexPerm {
    map: Vec<u16>,
}

impl IndexPerm {
    /// Permutation sending index(z) to index(z + a).
    pub fn translation(field: &PrimeField, dim: Dim, a: &GroupElem) -> Self {
        let n = dim.group_size(field.p());
        let mut map = vec![0u16; n];
        for (i, slot) in map.iter_mut().enumerate() {
            let z = GroupElem::from_index(field, i);
            *slot = z.add(field, a).index(field.p()) as u16;
        }
        IndexPerm { map }
    }
}

/// The per-length membership sets Σ^0(A), …, Σ^kmax(A).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTable {
    field: PrimeField,
    dim: Dim,
    layers: Vec<GroupBitset>,
}

impl SigmaTable {
    /// Table of the empty sequence: layer 0 = {0}, all others empty.
    pub fn empty(field: PrimeField, dim: Dim, kmax: u32) -> Self {
        let bits = dim.group_size(field.p());
        let mut layers = vec![GroupBitset::empty(bits); kmax as usize + 1];
        layers[0].set(GroupElem::zero().index(field.p()));
        SigmaTable { field, dim, layers }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn kmax(&self) -> u32 {
        (self.layers.len() - 1) as u32
    }

    pub fn layer(&self, k: u32) -> &GroupBitset {
        &self.layers[k as usize]
    }

    /// Fold in `m` copies of `a`, in place. Binary splitting keeps this at
    /// O(log m) passes; m is clamped to kmax first.
    pub fn add_copies(&mut self, a: &GroupElem, m: u32) {
        let kmax = self.kmax();
        let mut left = m.min(kmax.max(1));
        if kmax == 0 || left == 0 {
            return;
        }
        let mut chunk = 1u32;
        while left > 0 {
            let c = chunk.min(left);
            left -= c;
            chunk <<= 1;
            let shifted = a.scale(&self.field, c % self.field.p());
            let perm = IndexPerm::translation(&self.field, self.dim, &shifted);
            for k in (c..=kmax).rev() {
                let (lo, hi) = self.layers.split_at_mut(k as usize);
                hi[0].or_permuted(&lo[(k - c) as usize], &perm);
            }
        }
    }

    /// Membership of `s` in Σ^k(A).
    pub fn contains(&self, k: u32, s: &GroupElem) -> bool {
        self.layers[k as usize].get(s.index(self.field.p()))
    }

    /// The elements of layer k, in index order.
    pub fn layer_elements(&self, k: u32) -> Vec<GroupElem> {
        self.layers[k as usize]
            .iter_ones()
            .map(|i| GroupElem::from_index(&self.field, i))
            .collect()
    }
}

/// Build the table of Σ^0..Σ^kmax for `a`. Rejects `kmax > |A|`.
pub fn build_sigma_table(a: &Sequence, kmax: u32) -> Result<SigmaTable, SigmaError> {
    if kmax as u64 > a.len() {
        return Err(SigmaError::KmaxTooLarge {
            kmax,
            len: a.len(),
        });
    }
    let mut table = SigmaTable::empty(a.field(), a.dim(), kmax);
    for (e, &m) in a.iter() {
        table.add_copies(e, m);
    }
    Ok(table)
}

/// Pure-functional fold step: the table of `A + a^m` from the table of `A`.
pub fn incremental_add(table: &SigmaTable, a: &GroupElem, m: u32) -> SigmaTable {
    let mut out = table.clone();
    out.add_copies(a, m);
    out
}

/// Does A contain a subsequence of length exactly `k` summing to zero?
///
/// Callers must keep `k ≤ |A|`; this is asserted.
pub fn has_zero_sum_exact(a: &Sequence, k: u32) -> bool {
    assert!(k as u64 <= a.len(), "k out of range");
    let table = build_sigma_table(a, k).expect("kmax within length");
    table.contains(k, &GroupElem::zero())
}

/// The set Σ^k(A) of sums of subsequences of exact length k.
pub fn representable_targets(a: &Sequence, k: u32) -> Result<Vec<GroupElem>, SigmaError> {
    let table = build_sigma_table(a, k)?;
    Ok(table.layer_elements(k))
}

/// Replace one copy each of x−y, x, x+y by three copies of x.
///
/// The triple's subsequence sums dominate those of x³ at every exact
/// length, so the replacement never destroys a zero-sum; searches use this
/// to collapse spread-out mass. Requires y ≠ 0 and all three elements
/// present.
pub fn triple_replace(
    a: &Sequence,
    x: &GroupElem,
    y: &GroupElem,
) -> Result<Sequence, SigmaError> {
    if y.is_zero() {
        return Err(SigmaError::ZeroOffset);
    }
    let f = a.field();
    let lo = x.sub(&f, y);
    let hi = x.add(&f, y);
    let mut out = a.clone();
    for e in [&lo, x, &hi] {
        out.remove(*e, 1)
            .map_err(|_| SigmaError::MissingTripleElement(e.to_string()))?;
    }
    out.push(*x, 3);
    Ok(out)
}

/// Desk-scale probe of the one-dimensional representation lemma: a sequence
/// over Z/pZ of length ≥ 3p/2 with maximal multiplicity ≤ p/2 should
/// represent every element of its support as a sum of a subsequence of
/// length p.
///
/// The thresholds here read the source statement's bare "3/2" and "1.49"
/// as 3p/2 and 1.49p (the only scaling under which the statement is
/// non-vacuous); the note in the returned report records that emendation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LineProbeReport {
    pub p: u32,
    pub length: u64,
    pub max_multiplicity: u32,
    pub all_support_represented: bool,
    pub missing: Vec<u32>,
    pub note: String,
}

pub fn line_three_halves_probe(a: &Sequence) -> Result<LineProbeReport, SigmaError> {
    if a.dim() != Dim::One {
        return Err(SigmaError::WrongDimension);
    }
    let p = a.field().p();
    let need = (3 * p as u64).div_ceil(2);
    if a.len() < need || 2 * a.max_multiplicity() > p {
        return Err(SigmaError::ProbeHypothesisViolated {
            length: a.len(),
            need,
            max_mult: a.max_multiplicity(),
        });
    }
    let table = build_sigma_table(a, p)?;
    let mut missing = Vec::new();
    for (e, _) in a.iter() {
        if !table.contains(p, e) {
            missing.push(e.x());
        }
    }
    Ok(LineProbeReport {
        p,
        length: a.len(),
        max_multiplicity: a.max_multiplicity(),
        all_support_represented: missing.is_empty(),
        missing,
        note: "statement thresholds scaled as 3p/2 and 1.49p".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Dim, GroupElem, PrimeField};

    /// Brute-force Σ^k by expanding the multiset and walking all subsets.
    fn brute_layers(a: &Sequence, kmax: u32) -> Vec<std::collections::BTreeSet<GroupElem>> {
        let f = a.field();
        let items = a.expand();
        let mut layers = vec![std::collections::BTreeSet::new(); kmax as usize + 1];
        let n = items.len();
        assert!(n <= 20);
        for mask in 0u32..(1 << n) {
            let k = mask.count_ones();
            if k > kmax {
                continue;
            }
            let mut s = GroupElem::zero();
            for (i, item) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s = s.add(&f, item);
                }
            }
            layers[k as usize].insert(s);
        }
        layers
    }

    fn assert_matches_brute(a: &Sequence, kmax: u32) {
        let table = build_sigma_table(a, kmax).unwrap();
        let brute = brute_layers(a, kmax);
        for k in 0..=kmax {
            let got: std::collections::BTreeSet<_> =
                table.layer_elements(k).into_iter().collect();
            assert_eq!(got, brute[k as usize], "layer {k} of {a}");
        }
    }

    #[test]
    fn all_zero_sequence() {
        let f = PrimeField::new(3).unwrap();
        let a = Sequence::from_pairs(f, &[(0, 0, 3)]);
        let t = build_sigma_table(&a, 3).unwrap();
        for k in 0..=3 {
            assert_eq!(t.layer_elements(k), vec![GroupElem::zero()]);
        }
    }

    #[test]
    fn squares_sequence_layer_five() {
        // A = 0²1²2²3² over Z/5, k=5: layer 5 covers the whole group,
        // in particular the support {0,1,2,3}.
        let f = PrimeField::new(5).unwrap();
        let a = Sequence::from_residues(f, &[0, 0, 1, 1, 2, 2, 3, 3]);
        assert_matches_brute(&a, 5);
        let targets = representable_targets(&a, 5).unwrap();
        for r in 0..4 {
            assert!(targets.contains(&GroupElem::new_1d(&f, r)));
        }
    }

    #[test]
    fn p3_extremal_has_no_zero_sum_of_length_three() {
        let f = PrimeField::new(3).unwrap();
        let a = Sequence::from_pairs(f, &[(0, 0, 2), (0, 1, 2), (1, 0, 2), (1, 1, 2)]);
        assert_matches_brute(&a, 3);
        assert!(!has_zero_sum_exact(&a, 3));
        // adding any one extra element creates one (Kemnitz at p=3)
        for x in 0..3 {
            for y in 0..3 {
                let mut b = a.clone();
                b.push(GroupElem::new_2d(&f, x, y), 1);
                assert!(has_zero_sum_exact(&b, 3), "extra ({x},{y})");
            }
        }
    }

    #[test]
    fn direct_witness_zero_sum() {
        let f = PrimeField::new(3).unwrap();
        let a = Sequence::from_residues(f, &[0, 0, 1, 1, 2]);
        assert!(has_zero_sum_exact(&a, 3)); // 0+1+2
    }

    #[test]
    fn empty_sequence_layer_zero() {
        let f = PrimeField::new(7).unwrap();
        let a = Sequence::new(f, Dim::Two);
        let targets = representable_targets(&a, 0).unwrap();
        assert_eq!(targets, vec![GroupElem::zero()]);
    }

    #[test]
    fn forced_composition_single_support() {
        let f = PrimeField::new(7).unwrap();
        let a = Sequence::from_pairs(f, &[(3, 5, 4)]);
        let targets = representable_targets(&a, 4).unwrap();
        assert_eq!(targets, vec![GroupElem::new_2d(&f, 12, 20)]);
    }

    #[test]
    fn kmax_exceeding_length_rejected() {
        let f = PrimeField::new(5).unwrap();
        let a = Sequence::from_residues(f, &[1, 2]);
        assert!(build_sigma_table(&a, 3).is_err());
    }

    #[test]
    fn incremental_agrees_with_scratch() {
        let f = PrimeField::new(5).unwrap();
        let base = Sequence::from_pairs(f, &[(1, 2, 2), (0, 3, 1)]);
        let table = build_sigma_table(&base, 3).unwrap();
        let grown = incremental_add(&table, &GroupElem::new_2d(&f, 4, 4), 2);
        let mut big = base.clone();
        big.push(GroupElem::new_2d(&f, 4, 4), 2);
        assert_eq!(grown, build_sigma_table(&big, 3).unwrap());
    }

    #[test]
    fn zero_element_shifts_length_only() {
        let f = PrimeField::new(5).unwrap();
        let a = Sequence::from_pairs(f, &[(1, 0, 1), (2, 3, 1)]);
        let t = build_sigma_table(&a, 2).unwrap();
        let grown = incremental_add(&t, &GroupElem::zero(), 1);
        for k in 1..=2u32 {
            let mut expect: Vec<_> = t.layer_elements(k);
            for e in t.layer_elements(k - 1) {
                if !expect.contains(&e) {
                    expect.push(e);
                }
            }
            expect.sort();
            assert_eq!(grown.layer_elements(k), expect);
        }
    }

    #[test]
    fn multiplicity_clamped_to_kmax() {
        let f = PrimeField::new(5).unwrap();
        let t0 = SigmaTable::empty(f, Dim::One, 3);
        let a = GroupElem::new_1d(&f, 2);
        assert_eq!(incremental_add(&t0, &a, 3), incremental_add(&t0, &a, 100));
    }

    #[test]
    fn triple_replace_basic() {
        // {1,2,3} over Z/7 with x=2, y=1 → {2:3}
        let f = PrimeField::new(7).unwrap();
        let a = Sequence::from_residues(f, &[1, 2, 3]);
        let r = triple_replace(&a, &GroupElem::new_1d(&f, 2), &GroupElem::new_1d(&f, 1)).unwrap();
        assert_eq!(r, Sequence::from_entries(f, Dim::One, [(GroupElem::new_1d(&f, 2), 3)]).unwrap());
        assert_eq!(r.len(), a.len());
    }

    #[test]
    fn triple_replace_missing_rejected() {
        let f = PrimeField::new(7).unwrap();
        let a = Sequence::from_residues(f, &[1, 2]);
        assert!(triple_replace(&a, &GroupElem::new_1d(&f, 2), &GroupElem::new_1d(&f, 1)).is_err());
        assert!(triple_replace(&a, &GroupElem::new_1d(&f, 2), &GroupElem::zero()).is_err());
    }

    #[test]
    fn triple_dominates_collapsed_layers() {
        // Σ^k({x−y, x, x+y}) ⊇ Σ^k({x,x,x}) for each k ≤ 3, all (x, y≠0)
        let f = PrimeField::new(7).unwrap();
        for xi in 0..7 {
            for yi in 1..7 {
                let x = GroupElem::new_1d(&f, xi);
                let y = GroupElem::new_1d(&f, yi);
                let spread = Sequence::from_entries(
                    f,
                    Dim::One,
                    [(x.sub(&f, &y), 1), (x, 1), (x.add(&f, &y), 1)],
                )
                .unwrap();
                let collapsed = Sequence::from_entries(f, Dim::One, [(x, 3)]).unwrap();
                let ts = build_sigma_table(&spread, 3).unwrap();
                let tc = build_sigma_table(&collapsed, 3).unwrap();
                for k in 0..=3 {
                    assert!(
                        tc.layer(k).is_subset_of(ts.layer(k)),
                        "x={xi} y={yi} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn line_probe_squares() {
        // length 8 ≥ ⌈3·5/2⌉, max multiplicity 2 ≤ 5/2
        let f = PrimeField::new(5).unwrap();
        let a = Sequence::from_residues(f, &[0, 0, 1, 1, 2, 2, 3, 3]);
        let rep = line_three_halves_probe(&a).unwrap();
        assert!(rep.all_support_represented);
    }

    #[test]
    fn random_cross_checks_against_brute() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let p = *[2u32, 3, 5].iter().nth(rng.gen_range(0..3)).unwrap();
            let f = PrimeField::new(p).unwrap();
            let dim = if rng.gen_bool(0.5) { Dim::One } else { Dim::Two };
            let mut a = Sequence::new(f, dim);
            let len = rng.gen_range(0..=8u32);
            for _ in 0..len {
                let e = match dim {
                    Dim::One => GroupElem::new_1d(&f, rng.gen_range(0..p) as i64),
                    Dim::Two => GroupElem::new_2d(
                        &f,
                        rng.gen_range(0..p) as i64,
                        rng.gen_range(0..p) as i64,
                    ),
                };
                a.push(e, 1);
            }
            let kmax = rng.gen_range(0..=a.len() as u32);
            assert_matches_brute(&a, kmax);
        }
    }
}
