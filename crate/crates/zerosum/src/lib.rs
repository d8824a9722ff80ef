//! Exact verification and search toolkit for zero-sum problems over
//! (Z/pZ)².
//!
//! The crate has four computational pillars:
//!
//! * [`sigma`] — the decision core: exact computation of Σ^k(A), the set of
//!   sums of subsequences of exact length k, as bounded-knapsack bitset
//!   dynamic programming. Everything else reduces zero-sum questions to
//!   membership queries against these layers.
//! * [`search`] — exhaustive and pruned branch-and-bound verification of
//!   the Erdős–Ginzburg–Ziv theorem, Kemnitz's conjecture (Reiher's
//!   theorem), and the Gao–Geroldinger Properties B/C/D at small primes,
//!   with affine symmetry reduction, checkpointing, and deterministic
//!   reports.
//! * [`relax`] — the convex-geometric relaxation over Z²: real sequences
//!   with rational multiplicities, exact support functions and polygons for
//!   Σ_R^c(A), interior-lattice-point search, and the mass-shift reduction
//!   toward minimal configurations. All arithmetic is exact rational.
//! * [`fourier`] — numerical probes of the character-sum machinery:
//!   the product exponential sum S(α), its geometric-sum majorant Z, and
//!   the exact Fourier representation-count identity at desk-scale primes.
//!
//! The `examples/` directory contains one runnable program per capability;
//! the `zerosum` binary exposes the same operations as subcommands
//! (`sigma`, `verify`, `relax`, `fourier`) with JSON output.

pub mod cli;
pub mod field;
pub mod fourier;
pub mod io;
pub mod lattice;
pub mod relax;
pub mod search;
pub mod seq;
pub mod sigma;

pub use field::{Dim, GroupElem, PrimeField};
pub use lattice::{LatticePoint, Rational};
pub use seq::{apply_affine, AffineMap, Sequence};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("matrix is singular mod p")]
    SingularMatrix,
    #[error("determinant {0} is not ±1")]
    NotUnimodular(i128),
    #[error("zero multiplicity for element {0}")]
    ZeroMultiplicity(String),
    #[error("element {0} not present with required multiplicity")]
    MissingElement(String),
    #[error("sequence and map disagree on field or dimension")]
    MixedContext,
    #[error("line through equal points is undefined")]
    DegenerateLine,
    #[error("invalid rational literal: {0}")]
    BadRational(String),
    #[error("integer overflow in exact computation")]
    Overflow,
}

#[derive(Debug, Error)]
pub enum SigmaError {
    #[error("kmax {kmax} exceeds sequence length {len}")]
    KmaxTooLarge { kmax: u32, len: u64 },
    #[error("triple replacement requires y ≠ 0")]
    ZeroOffset,
    #[error("triple element {0} missing from sequence")]
    MissingTripleElement(String),
    #[error("operation requires a one-dimensional sequence")]
    WrongDimension,
    #[error("probe hypothesis violated: length {length} (need ≥ {need}) or max multiplicity {max_mult} > p/2")]
    ProbeHypothesisViolated { length: u64, need: u64, max_mult: u32 },
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unknown property {0:?} (expected b, c, d, egz, kemnitz)")]
    UnknownProperty(String),
    #[error("p = {p} is beyond the desk-scale search envelope (max {max})")]
    BeyondDeskScale { p: u32, max: u32 },
    #[error("node budget must be positive")]
    BadBudget,
    #[error("this check requires an odd prime")]
    OddPrimeRequired,
    #[error("checkpoint I/O failed: {0}")]
    CheckpointIo(String),
    #[error("checkpoint version {found} does not match expected {expected}")]
    CheckpointVersion { found: u32, expected: u32 },
    #[error("checkpoint belongs to a different configuration")]
    CheckpointMismatch,
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Error)]
pub enum RelaxError {
    #[error("total mass {total} is smaller than the requested sum length {c}")]
    InsufficientMass { total: String, c: String },
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("duplicate support point {0}")]
    DuplicatePoint(String),
    #[error("negative multiplicity at {0}")]
    NegativeMultiplicity(String),
    #[error("point {0} outside the triangle")]
    OutsideTriangle(String),
    #[error("degenerate triangle with {0} off its segment")]
    DegenerateTriangle(String),
    #[error("shift target must differ from the triangle vertices")]
    ShiftTargetIsVertex,
    #[error("shift target must have multiplicity < 1/2 headroom and vertices positive mass: {0}")]
    NoShiftHeadroom(String),
    #[error("input is not admissible: {0}")]
    NotAdmissible(String),
    #[error("mass-shift iteration exceeded the move budget ({0} moves)")]
    MoveBudgetExceeded(usize),
    #[error("normalization precondition failed: {0}")]
    NormalizePrecondition(String),
    #[error("rounding target {n} infeasible: floor sum {lo}, ceiling sum {hi}")]
    InfeasibleRounding { n: i64, lo: String, hi: String },
    #[error("{0}")]
    Core(#[from] CoreError),
}

#[derive(Debug, Error)]
pub enum FourierError {
    #[error("instance needs at least two distinct points")]
    TooFewPoints,
    #[error("points must be distinct")]
    DuplicatePoints,
    #[error("brute-force budget exceeded: (N+1)^pairs = {0} > {1}")]
    BudgetExceeded(f64, f64),
    #[error("designated triple degenerate: (s,t) collinear with a basis point")]
    DegenerateTriple,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("I/O error on {0}: {1}")]
    File(String, String),
    #[error("{0}")]
    Core(#[from] CoreError),
}
