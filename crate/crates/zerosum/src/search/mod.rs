//! Exhaustive and pruned verification of zero-sum properties at small
//! primes: Erdős–Ginzburg–Ziv over Z/pZ, Kemnitz over (Z/pZ)², the
//! Gao–Geroldinger Properties B, C and D, enumeration of extremal
//! sequences, and the multiplicity-dichotomy check.

mod canonical;
mod checkpoint;
mod engine;
mod packed;

pub use canonical::{canonical_form, AffineGroup, GroupKind, MAX_CANONICAL_P};
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CHECKPOINT_VERSION};

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::{Dim, GroupElem, PrimeField};
use crate::search::engine::{run_sequential, run_split, EngineOutcome, EngineParams, ZeroRule};
use crate::search::packed::{PackedSigma, TransTable};
use crate::seq::Sequence;
use crate::SearchError;

/// The verifiable properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    B,
    C,
    D,
    Egz,
    Kemnitz,
}

impl Property {
    pub fn parse(s: &str) -> Result<Self, SearchError> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(Property::B),
            "c" => Ok(Property::C),
            "d" => Ok(Property::D),
            "egz" => Ok(Property::Egz),
            "kemnitz" => Ok(Property::Kemnitz),
            _ => Err(SearchError::UnknownProperty(s.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Property::B => "B",
            Property::C => "C",
            Property::D => "D",
            Property::Egz => "EGZ",
            Property::Kemnitz => "Kemnitz",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub p: u32,
    pub property: Property,
    pub symmetry_reduction: bool,
    pub triple_pruning: bool,
    /// Write a checkpoint every this many nodes (0 = only on truncation).
    pub checkpoint_interval: u64,
    #[serde(skip)]
    pub checkpoint_path: Option<PathBuf>,
    pub node_budget: Option<u64>,
    pub seed: u64,
    /// Exhaustive EGZ enumeration for p up to this bound, randomized above.
    pub egz_exhaustive_limit: u32,
    pub egz_trials: u64,
    pub split_depth: usize,
    pub workers: usize,
}

impl SearchConfig {
    pub fn new(p: u32, property: Property) -> Self {
        SearchConfig {
            p,
            property,
            symmetry_reduction: true,
            triple_pruning: false,
            checkpoint_interval: 0,
            checkpoint_path: None,
            node_budget: None,
            seed: 0,
            egz_exhaustive_limit: 5,
            egz_trials: 100_000,
            split_depth: 2,
            workers: default_workers(),
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.node_budget == Some(0) {
            return Err(SearchError::BadBudget);
        }
        Ok(())
    }

    /// Digest binding checkpoints to the configuration that produced them.
    pub fn digest(&self) -> String {
        let body = serde_json::to_string(self).expect("config serializes");
        let mut h = Sha256::new();
        h.update(body.as_bytes());
        hex_string(&h.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Worker count: `ZEROSUM_WORKERS` env var, else available parallelism.
pub fn default_workers() -> usize {
    if let Ok(v) = std::env::var("ZEROSUM_WORKERS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// A sequence in wire form: sorted `[x, y, multiplicity]` triples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeqRepr(pub Vec<[u32; 3]>);

impl SeqRepr {
    fn from_vector(field: &PrimeField, v: &[u32]) -> Self {
        let mut out = Vec::new();
        for (idx, &m) in v.iter().enumerate() {
            if m > 0 {
                let e = GroupElem::from_index(field, idx);
                out.push([e.x(), e.y(), m]);
            }
        }
        SeqRepr(out)
    }

    pub fn to_sequence(&self, field: PrimeField, dim: Dim) -> Sequence {
        let mut s = Sequence::new(field, dim);
        for &[x, y, m] in &self.0 {
            s.push(GroupElem::new_2d(&field, x as i64, y as i64), m);
        }
        s
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.0.iter().map(|t| t[2]).max().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.0.len()
    }
}

/// One extremal class in a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalClass {
    pub sequence: SeqRepr,
    pub distinct_elements: usize,
    pub max_multiplicity: u32,
    /// Exactly the expected extremal shape (four p−1 blocks for D, three
    /// for C, multiplicity ≥ p−2 somewhere for B)?
    pub shape_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub property: String,
    pub p: u32,
    pub verified: bool,
    pub truncated: bool,
    pub exhaustive: bool,
    pub nodes: u64,
    pub leaves: u64,
    pub trials: Option<u64>,
    pub extremal_classes: Vec<ExtremalClass>,
    pub counterexamples: Vec<SeqRepr>,
    pub shape_all_ok: Option<bool>,
    pub dichotomy: Option<DichotomyReport>,
    pub notes: Vec<String>,
    pub config: SearchConfig,
    /// Wall-clock milliseconds; excluded from digests and determinism
    /// comparisons.
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DichotomyReport {
    /// For each extremal class: max multiplicity equals p−1, or
    /// 2·max ≤ p.
    pub classes_checked: usize,
    pub violations: Vec<SeqRepr>,
    pub holds: bool,
}

fn engine_params(
    cfg: &SearchConfig,
    target_len: u32,
    kmax: u32,
    rule: ZeroRule,
    group_kind: GroupKind,
) -> EngineParams {
    let field = PrimeField::new(cfg.p).expect("validated prime");
    EngineParams {
        field,
        dim: Dim::Two,
        target_len,
        cap: cfg.p - 1,
        kmax,
        zero_rule: rule,
        group_kind,
        symmetry_reduction: cfg.symmetry_reduction,
        triple_pruning: cfg.triple_pruning,
        node_budget: cfg.node_budget,
        split_depth: cfg.split_depth,
        workers: cfg.workers,
        checkpoint_path: cfg.checkpoint_path.clone(),
        checkpoint_interval: cfg.checkpoint_interval,
        config_digest: cfg.digest(),
    }
}

fn run_engine(
    pr: &EngineParams,
    resume: Option<&Checkpoint>,
) -> Result<EngineOutcome, SearchError> {
    if pr.checkpoint_path.is_some() || resume.is_some() {
        run_sequential(pr, resume)
    } else {
        run_split(pr)
    }
}

/// Erdős–Ginzburg–Ziv over Z/pZ: every sequence of length 2p−1 contains a
/// zero-sum subsequence of length p. Exhaustive over multisets for
/// p ≤ `egz_exhaustive_limit`, randomized (seeded) sampling beyond.
pub fn verify_egz(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let field = PrimeField::new(cfg.p).map_err(|_| SearchError::NotPrime(cfg.p))?;
    let p = cfg.p;
    let len = 2 * p - 1;
    let tt = TransTable::new(&field, Dim::One, p);

    let mut counterexamples = Vec::new();
    let mut nodes = 0u64;
    let exhaustive = p <= cfg.egz_exhaustive_limit;
    let mut trials = None;

    if exhaustive {
        // walk all multisets of size 2p−1 over Z/pZ
        let mut counts = vec![0u32; p as usize];
        enumerate_multisets(&mut counts, 0, len, &mut |counts| {
            nodes += 1;
            let mut t = PackedSigma::empty();
            for (i, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    t.add_one(&tt, i);
                }
            }
            if !t.zero_in_layer(p) {
                counterexamples.push(SeqRepr(
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(i, &c)| [i as u32, 0, c])
                        .collect(),
                ));
            }
        });
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.egz_trials {
            nodes += 1;
            let mut t = PackedSigma::empty();
            let mut picks = vec![0u32; p as usize];
            for _ in 0..len {
                let i = rng.gen_range(0..p as usize);
                picks[i] += 1;
                t.add_one(&tt, i);
            }
            if !t.zero_in_layer(p) {
                counterexamples.push(SeqRepr(
                    picks
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(i, &c)| [i as u32, 0, c])
                        .collect(),
                ));
            }
        }
        trials = Some(cfg.egz_trials);
    }

    Ok(SearchReport {
        property: Property::Egz.name().to_string(),
        p,
        verified: counterexamples.is_empty(),
        truncated: false,
        exhaustive,
        nodes,
        leaves: nodes,
        trials,
        extremal_classes: Vec::new(),
        counterexamples,
        shape_all_ok: None,
        dichotomy: None,
        notes: Vec::new(),
        config: cfg.clone(),
        wall_ms: t0.elapsed().as_millis() as u64,
    })
}

fn enumerate_multisets(
    counts: &mut Vec<u32>,
    idx: usize,
    remaining: u32,
    visit: &mut impl FnMut(&[u32]),
) {
    if idx + 1 == counts.len() {
        counts[idx] = remaining;
        visit(counts);
        counts[idx] = 0;
        return;
    }
    for c in (0..=remaining).rev() {
        counts[idx] = c;
        enumerate_multisets(counts, idx + 1, remaining - c, visit);
        counts[idx] = 0;
    }
}

/// Is triple pruning verdict-preserving for class enumeration at this p?
///
/// The collapse argument preserves existence verdicts at every p, but class
/// lists only where extremal classes are arithmetic-progression-free; that
/// is established for p ≤ 3 (cross-checked in tests), so enumeration
/// silently ignores the flag beyond.
fn enumeration_triple_ok(p: u32) -> bool {
    p <= 3
}

/// Kemnitz's conjecture (Reiher's theorem) at desk scale: every sequence of
/// length 4p−3 over (Z/pZ)² has a zero-sum subsequence of length p.
pub fn verify_kemnitz(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    verify_kemnitz_resumable(cfg, None)
}

pub fn verify_kemnitz_resumable(
    cfg: &SearchConfig,
    resume: Option<&Checkpoint>,
) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let field = PrimeField::new(cfg.p).map_err(|_| SearchError::NotPrime(cfg.p))?;
    let p = cfg.p;
    let pr = engine_params(cfg, 4 * p - 3, p, ZeroRule::ExactLength(p), GroupKind::Affine);
    let out = run_engine(&pr, resume)?;
    let counterexamples: Vec<SeqRepr> = out
        .survivors
        .iter()
        .map(|v| SeqRepr::from_vector(&field, v))
        .collect();
    Ok(SearchReport {
        property: Property::Kemnitz.name().to_string(),
        p,
        verified: counterexamples.is_empty() && !out.truncated,
        truncated: out.truncated,
        exhaustive: !out.truncated,
        nodes: out.nodes,
        leaves: out.leaves,
        trials: None,
        extremal_classes: Vec::new(),
        counterexamples,
        shape_all_ok: None,
        dichotomy: None,
        notes: Vec::new(),
        config: cfg.clone(),
        wall_ms: t0.elapsed().as_millis() as u64,
    })
}

/// Enumerate extremal sequences for Property D: length 4p−4 over (Z/pZ)²
/// with no zero-sum subsequence of length p, up to affine equivalence.
/// Property D holds iff every class consists of exactly four distinct
/// elements of multiplicity p−1.
pub fn enumerate_extremal_d(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    enumerate_extremal_d_resumable(cfg, None)
}

pub fn enumerate_extremal_d_resumable(
    cfg: &SearchConfig,
    resume: Option<&Checkpoint>,
) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let field = PrimeField::new(cfg.p).map_err(|_| SearchError::NotPrime(cfg.p))?;
    let p = cfg.p;
    let mut notes = Vec::new();
    let mut cfg_eff = cfg.clone();
    if cfg.triple_pruning && !enumeration_triple_ok(p) {
        cfg_eff.triple_pruning = false;
        notes.push(format!(
            "triple pruning disabled for class enumeration at p={p}: \
             collapse is only class-preserving where extremal classes are \
             progression-free (verified for p <= 3)"
        ));
    }
    let pr = engine_params(&cfg_eff, 4 * p - 4, p, ZeroRule::ExactLength(p), GroupKind::Affine);
    let out = run_engine(&pr, resume)?;

    let classes: Vec<ExtremalClass> = out
        .survivors
        .iter()
        .map(|v| {
            let repr = SeqRepr::from_vector(&field, v);
            let shape_ok = repr.distinct() == 4 && repr.0.iter().all(|t| t[2] == p - 1);
            ExtremalClass {
                distinct_elements: repr.distinct(),
                max_multiplicity: repr.max_multiplicity(),
                shape_ok,
                sequence: repr,
            }
        })
        .collect();
    let shape_all_ok = classes.iter().all(|c| c.shape_ok);
    let counterexamples: Vec<SeqRepr> = classes
        .iter()
        .filter(|c| !c.shape_ok)
        .map(|c| c.sequence.clone())
        .collect();

    Ok(SearchReport {
        property: Property::D.name().to_string(),
        p,
        verified: shape_all_ok && !out.truncated,
        truncated: out.truncated,
        exhaustive: !out.truncated,
        nodes: out.nodes,
        leaves: out.leaves,
        trials: None,
        extremal_classes: classes,
        counterexamples,
        shape_all_ok: Some(shape_all_ok),
        dichotomy: None,
        notes,
        config: cfg.clone(),
        wall_ms: t0.elapsed().as_millis() as u64,
    })
}

/// Property C: every sequence of length 3p−3 with no zero-sum subsequence
/// of length ≤ p has the shape a^(p−1) b^(p−1) c^(p−1).
pub fn verify_property_c(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let field = PrimeField::new(cfg.p).map_err(|_| SearchError::NotPrime(cfg.p))?;
    let p = cfg.p;
    let mut notes = Vec::new();
    let mut cfg_eff = cfg.clone();
    if cfg.triple_pruning && !enumeration_triple_ok(p) {
        cfg_eff.triple_pruning = false;
        notes.push(format!(
            "triple pruning disabled for class enumeration at p={p}"
        ));
    }
    let pr = engine_params(&cfg_eff, 3 * p - 3, p, ZeroRule::AnyLengthUpTo(p), GroupKind::Linear);
    let out = run_engine(&pr, None)?;
    let classes: Vec<ExtremalClass> = out
        .survivors
        .iter()
        .map(|v| {
            let repr = SeqRepr::from_vector(&field, v);
            let shape_ok = repr.distinct() == 3 && repr.0.iter().all(|t| t[2] == p - 1);
            ExtremalClass {
                distinct_elements: repr.distinct(),
                max_multiplicity: repr.max_multiplicity(),
                shape_ok,
                sequence: repr,
            }
        })
        .collect();
    let shape_all_ok = classes.iter().all(|c| c.shape_ok);
    let counterexamples = classes
        .iter()
        .filter(|c| !c.shape_ok)
        .map(|c| c.sequence.clone())
        .collect();
    Ok(SearchReport {
        property: Property::C.name().to_string(),
        p,
        verified: shape_all_ok && !out.truncated,
        truncated: out.truncated,
        exhaustive: !out.truncated,
        nodes: out.nodes,
        leaves: out.leaves,
        trials: None,
        extremal_classes: classes,
        counterexamples,
        shape_all_ok: Some(shape_all_ok),
        dichotomy: None,
        notes,
        config: cfg.clone(),
        wall_ms: t0.elapsed().as_millis() as u64,
    })
}

/// Property B: every zero-sum free sequence of length 2p−2 contains an
/// element with multiplicity ≥ p−2.
pub fn verify_property_b(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let field = PrimeField::new(cfg.p).map_err(|_| SearchError::NotPrime(cfg.p))?;
    let p = cfg.p;
    let len = 2 * p - 2;
    let pr = engine_params(cfg, len, len, ZeroRule::AnyLengthUpTo(len), GroupKind::Linear);
    let out = run_engine(&pr, None)?;
    let classes: Vec<ExtremalClass> = out
        .survivors
        .iter()
        .map(|v| {
            let repr = SeqRepr::from_vector(&field, v);
            let shape_ok = repr.max_multiplicity() + 2 >= p;
            ExtremalClass {
                distinct_elements: repr.distinct(),
                max_multiplicity: repr.max_multiplicity(),
                shape_ok,
                sequence: repr,
            }
        })
        .collect();
    let shape_all_ok = classes.iter().all(|c| c.shape_ok);
    let counterexamples = classes
        .iter()
        .filter(|c| !c.shape_ok)
        .map(|c| c.sequence.clone())
        .collect();
    Ok(SearchReport {
        property: Property::B.name().to_string(),
        p,
        verified: shape_all_ok && !out.truncated,
        truncated: out.truncated,
        exhaustive: !out.truncated,
        nodes: out.nodes,
        leaves: out.leaves,
        trials: None,
        extremal_classes: classes,
        counterexamples,
        shape_all_ok: Some(shape_all_ok),
        dichotomy: None,
        notes: Vec::new(),
        config: cfg.clone(),
        wall_ms: t0.elapsed().as_millis() as u64,
    })
}

/// The multiplicity dichotomy: on every extremal Property-D sequence, the
/// maximal multiplicity is either exactly p−1 or at most p/2.
pub fn check_multiplicity_dichotomy(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    if cfg.p == 2 {
        return Err(SearchError::OddPrimeRequired);
    }
    let mut report = enumerate_extremal_d(cfg)?;
    let mut violations = Vec::new();
    for class in &report.extremal_classes {
        let mm = class.max_multiplicity;
        let ok = mm == cfg.p - 1 || 2 * mm <= cfg.p;
        if !ok {
            violations.push(class.sequence.clone());
        }
    }
    let holds = violations.is_empty();
    report.dichotomy = Some(DichotomyReport {
        classes_checked: report.extremal_classes.len(),
        violations,
        holds,
    });
    report.verified = report.verified && holds;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::has_zero_sum_exact;

    #[test]
    fn egz_exhaustive_small_primes() {
        for (p, expect_multisets) in [(2u32, 4u64), (3, 21), (5, 715)] {
            let cfg = SearchConfig::new(p, Property::Egz);
            let rep = verify_egz(&cfg).unwrap();
            assert!(rep.verified, "EGZ at p={p}");
            assert!(rep.exhaustive);
            assert_eq!(rep.nodes, expect_multisets, "multiset count at p={p}");
        }
    }

    #[test]
    fn egz_randomized_p7() {
        let mut cfg = SearchConfig::new(7, Property::Egz);
        cfg.egz_trials = 2000;
        cfg.seed = 17;
        let rep = verify_egz(&cfg).unwrap();
        assert!(rep.verified);
        assert!(!rep.exhaustive);
        assert_eq!(rep.trials, Some(2000));
    }

    #[test]
    fn kemnitz_p2_and_p3() {
        for p in [2u32, 3] {
            let cfg = SearchConfig::new(p, Property::Kemnitz);
            let rep = verify_kemnitz(&cfg).unwrap();
            assert!(rep.verified, "Kemnitz at p={p}");
            assert!(rep.counterexamples.is_empty());
            assert!(!rep.truncated);
        }
    }

    #[test]
    fn extremal_d_p2_unique_class() {
        let cfg = SearchConfig::new(2, Property::D);
        let rep = enumerate_extremal_d(&cfg).unwrap();
        assert_eq!(rep.extremal_classes.len(), 1);
        let class = &rep.extremal_classes[0];
        assert!(class.shape_ok);
        assert_eq!(
            class.sequence.0,
            vec![[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
        );
        assert_eq!(rep.shape_all_ok, Some(true));
        assert!(rep.verified);
    }

    #[test]
    fn extremal_d_p3_contains_witness_and_all_shapes_ok() {
        let cfg = SearchConfig::new(3, Property::D);
        let rep = enumerate_extremal_d(&cfg).unwrap();
        assert!(rep.shape_all_ok.unwrap());
        assert!(rep.verified);
        // the canonical form of (0,0)²(0,1)²(1,0)²(1,1)² is among the classes
        let f = PrimeField::new(3).unwrap();
        let witness = Sequence::from_pairs(f, &[(0, 0, 2), (0, 1, 2), (1, 0, 2), (1, 1, 2)]);
        let canon = canonical_form(&witness).unwrap();
        let found = rep.extremal_classes.iter().any(|c| {
            c.sequence.to_sequence(f, Dim::Two) == canon
        });
        assert!(found, "witness class missing: {:?}", rep.extremal_classes);
        // every reported class really is extremal (soundness re-check)
        for c in &rep.extremal_classes {
            let s = c.sequence.to_sequence(f, Dim::Two);
            assert_eq!(s.len(), 8);
            assert!(!has_zero_sum_exact(&s, 3));
        }
    }

    #[test]
    fn symmetry_and_triple_cross_check() {
        // same canonical class set with all four prune combinations
        for p in [2u32, 3] {
            let mut reference: Option<Vec<SeqRepr>> = None;
            for sym in [true, false] {
                for triple in [true, false] {
                    let mut cfg = SearchConfig::new(p, Property::D);
                    cfg.symmetry_reduction = sym;
                    cfg.triple_pruning = triple;
                    let rep = enumerate_extremal_d(&cfg).unwrap();
                    let mut classes: Vec<SeqRepr> = rep
                        .extremal_classes
                        .iter()
                        .map(|c| c.sequence.clone())
                        .collect();
                    classes.sort();
                    match &reference {
                        None => reference = Some(classes),
                        Some(r) => assert_eq!(
                            r, &classes,
                            "class set differs at p={p} sym={sym} triple={triple}"
                        ),
                    }
                }
            }
        }
    }

    #[test]
    fn dichotomy_p3() {
        let cfg = SearchConfig::new(3, Property::D);
        let rep = check_multiplicity_dichotomy(&cfg).unwrap();
        let d = rep.dichotomy.unwrap();
        assert!(d.holds);
        assert!(d.classes_checked >= 1);
        assert!(d.violations.is_empty());
    }

    #[test]
    fn dichotomy_rejects_p2() {
        let cfg = SearchConfig::new(2, Property::D);
        assert!(check_multiplicity_dichotomy(&cfg).is_err());
    }

    #[test]
    fn negative_control_not_extremal() {
        // an element of multiplicity 3 at p=5 plus a length-2 zero completion
        // has a zero-sum of length 5, so it can never appear extremal
        let f = PrimeField::new(5).unwrap();
        let mut s = Sequence::from_pairs(f, &[(0, 0, 3), (1, 0, 1), (4, 0, 1)]);
        assert!(has_zero_sum_exact(&s, 5));
        // pad to full length 16: still has the zero-sum
        s.push(GroupElem::new_2d(&f, 2, 3), 4);
        s.push(GroupElem::new_2d(&f, 3, 1), 4);
        s.push(GroupElem::new_2d(&f, 1, 2), 3);
        assert_eq!(s.len(), 16);
        assert!(has_zero_sum_exact(&s, 5));
    }

    #[test]
    fn budget_truncates_without_false_verdict() {
        let mut cfg = SearchConfig::new(3, Property::Kemnitz);
        cfg.node_budget = Some(10);
        let rep = verify_kemnitz(&cfg).unwrap();
        assert!(rep.truncated);
        assert!(!rep.verified);
        assert!(rep.nodes <= 30); // prefix enumeration may slightly overshoot
    }

    #[test]
    fn property_c_p3() {
        let cfg = SearchConfig::new(3, Property::C);
        let rep = verify_property_c(&cfg).unwrap();
        assert!(rep.verified, "Property C at p=3: {:?}", rep.counterexamples);
        assert!(!rep.extremal_classes.is_empty());
        for c in &rep.extremal_classes {
            assert_eq!(c.distinct_elements, 3);
            assert_eq!(c.max_multiplicity, 2);
        }
    }

    #[test]
    fn property_b_p3() {
        let cfg = SearchConfig::new(3, Property::B);
        let rep = verify_property_b(&cfg).unwrap();
        assert!(rep.verified);
        // zero-sum free sequences of length 4 over (Z/3Z)² exist
        assert!(!rep.extremal_classes.is_empty());
    }

    #[test]
    fn config_digest_stable() {
        let cfg = SearchConfig::new(3, Property::D);
        assert_eq!(cfg.digest(), cfg.digest());
        let mut cfg2 = cfg.clone();
        cfg2.seed = 1;
        assert_ne!(cfg.digest(), cfg2.digest());
    }
}
