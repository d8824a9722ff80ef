//! The pruned branch-and-bound enumerator behind the property checks.
//!
//! Sequences of a target length are enumerated as multiplicity vectors over
//! the group elements in index order, multiplicities tried in descending
//! order. Subtrees are cut by four sound rules:
//!
//! * zero prune — the partial sequence already contains a forbidden
//!   zero-sum; exact-length layers only grow under extension, so the whole
//!   subtree is dead (for extremal purposes) or satisfied (for existence
//!   verdicts).
//! * feasibility — the remaining elements cannot absorb the remaining
//!   length under the multiplicity cap.
//! * symmetry — no completion of the current prefix can be the
//!   lexicographically-greatest representative of its affine orbit.
//! * triple domination — the decided prefix contains x−y, x, x+y with the
//!   center at a smaller index than both mirrors; collapsing the triple
//!   onto the center yields a lexicographically-greater node at the same
//!   depth whose subsequence sums are dominated, so any survivor below this
//!   node has a survivor below that earlier node. Used only where this
//!   preserves the verdict (existence searches, and class enumeration at
//!   p ≤ 3 where extremal classes are progression-free).
//!
//! Execution is either task-split (the tree is partitioned at a fixed depth
//! into independent prefix tasks; a worker pool runs them; reports merge in
//! task order, so output is independent of scheduling) or sequential with
//! checkpoint support.

use std::collections::BTreeSet;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::field::{Dim, GroupElem, PrimeField};
use crate::search::canonical::{AffineGroup, GroupKind};
use crate::search::checkpoint::{save_checkpoint, Checkpoint, CHECKPOINT_VERSION};
use crate::search::packed::{PackedSigma, TransTable};
use crate::SearchError;

/// Which zero-sum pattern kills a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroRule {
    /// 0 ∈ Σ^k for the single exact length k (Kemnitz, Property D).
    ExactLength(u32),
    /// 0 ∈ Σ^k for any 1 ≤ k ≤ bound (Property C: bound = p; Property B:
    /// bound = target length).
    AnyLengthUpTo(u32),
}

impl ZeroRule {
    #[inline(always)]
    fn fires(&self, t: &PackedSigma) -> bool {
        match *self {
            ZeroRule::ExactLength(k) => t.zero_in_layer(k),
            ZeroRule::AnyLengthUpTo(hi) => t.zero_in_any_layer(hi),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngineParams {
    pub field: PrimeField,
    pub dim: Dim,
    pub target_len: u32,
    pub cap: u32,
    pub kmax: u32,
    pub zero_rule: ZeroRule,
    pub group_kind: GroupKind,
    pub symmetry_reduction: bool,
    pub triple_pruning: bool,
    pub node_budget: Option<u64>,
    pub split_depth: usize,
    pub workers: usize,
    pub checkpoint_path: Option<PathBuf>,
    pub checkpoint_interval: u64,
    pub config_digest: String,
}

#[derive(Debug, Clone, Default)]
pub struct EngineOutcome {
    pub nodes: u64,
    pub leaves: u64,
    pub truncated: bool,
    /// Survivor multiplicity vectors: canonical representatives when
    /// symmetry reduction is on, raw survivors otherwise.
    pub survivors: Vec<Vec<u32>>,
}

struct Dfs<'a> {
    pr: &'a EngineParams,
    tt: &'a TransTable,
    group: &'a AffineGroup,
    /// Permutations used for prefix pruning (translations beyond p=3).
    prefix_perms: &'a [Vec<u16>],
    /// 2·e_i − e_j index table for the triple rule.
    mirror: &'a [Vec<u16>],
    n_elems: usize,
    budget: Option<u64>,
    m: Vec<u32>,
    nodes: u64,
    leaves: u64,
    truncated: bool,
    survivors: BTreeSet<Vec<u32>>,
    checkpoint_due: u64,
}

enum Flow {
    Continue,
    Abort,
}

impl<'a> Dfs<'a> {
    fn new(
        pr: &'a EngineParams,
        tt: &'a TransTable,
        group: &'a AffineGroup,
        prefix_perms: &'a [Vec<u16>],
        mirror: &'a [Vec<u16>],
        budget: Option<u64>,
    ) -> Self {
        let n_elems = pr.dim.group_size(pr.field.p());
        Dfs {
            pr,
            tt,
            group,
            prefix_perms,
            mirror,
            n_elems,
            budget,
            m: vec![0; n_elems],
            nodes: 0,
            leaves: 0,
            truncated: false,
            survivors: BTreeSet::new(),
            checkpoint_due: pr.checkpoint_interval,
        }
    }

    /// True iff the decided prefix (up to and including `idx`, which was
    /// just set to ≥ 1) contains a triple x−y, x, x+y whose center index is
    /// smaller than both mirror indices.
    fn triple_reducible(&self, idx: usize) -> bool {
        // only triples involving e_idx are new; the center must sit at a
        // smaller index than both mirrors, so e_idx is always a mirror and
        // the other mirror is 2·center − e_idx
        for x in 0..idx {
            if self.m[x] == 0 {
                continue;
            }
            let other = self.mirror[x][idx] as usize;
            if other > x && other < idx && self.m[other] > 0 {
                return true;
            }
        }
        false
    }

    fn handle_leaf(&mut self) {
        self.leaves += 1;
        if self.pr.symmetry_reduction {
            if self.group.is_canonical(&self.m) {
                self.survivors.insert(self.m.clone());
            }
        } else {
            self.survivors.insert(self.group.canonical_vector(&self.m));
        }
    }

    fn write_checkpoint(&self, path_to_next: &[u32], done: bool) -> Result<(), SearchError> {
        if let Some(p) = &self.pr.checkpoint_path {
            let cp = Checkpoint {
                version: CHECKPOINT_VERSION,
                config_digest: self.pr.config_digest.clone(),
                path: path_to_next.to_vec(),
                done,
                nodes: self.nodes,
                leaves: self.leaves,
                survivors: self.survivors.iter().cloned().collect(),
            };
            save_checkpoint(p, &cp)?;
        }
        Ok(())
    }

    /// Process the node reached by assigning multiplicity `mi` at `idx`.
    fn process(
        &mut self,
        idx: usize,
        mi: u32,
        total: u32,
        table: &PackedSigma,
        zero_pruned: bool,
    ) -> Result<Flow, SearchError> {
        if let Some(b) = self.budget {
            if self.nodes >= b {
                self.truncated = true;
                let mut path = self.m[..idx].to_vec();
                path.push(mi);
                self.write_checkpoint(&path, false)?;
                return Ok(Flow::Abort);
            }
        }
        self.nodes += 1;
        if self.pr.checkpoint_interval > 0 {
            self.checkpoint_due -= 1;
            if self.checkpoint_due == 0 {
                self.checkpoint_due = self.pr.checkpoint_interval;
                let mut path = self.m[..idx].to_vec();
                path.push(mi);
                self.write_checkpoint(&path, false)?;
            }
        }

        if zero_pruned {
            return Ok(Flow::Continue);
        }
        self.m[idx] = mi;
        if mi > 0 && self.pr.triple_pruning && self.triple_reducible(idx) {
            return Ok(Flow::Continue);
        }
        if self.pr.symmetry_reduction
            && self
                .group
                .prefix_prunable(&self.m, idx + 1, self.prefix_perms)
        {
            return Ok(Flow::Continue);
        }
        if total == self.pr.target_len {
            self.handle_leaf();
            return Ok(Flow::Continue);
        }
        if idx + 1 == self.n_elems {
            return Ok(Flow::Continue);
        }
        let slots = (self.n_elems - idx - 1) as u64 * self.pr.cap as u64;
        if slots < (self.pr.target_len - total) as u64 {
            return Ok(Flow::Continue);
        }
        self.descend(idx + 1, total, table, None)
    }

    /// Explore level `idx` given the table of the decided prefix.
    ///
    /// `resume`: when fast-forwarding to a checkpointed position, the
    /// remaining path. Interior path nodes were already processed and are
    /// re-entered without counting; the final path node is processed
    /// normally.
    fn descend(
        &mut self,
        idx: usize,
        total: u32,
        table: &PackedSigma,
        resume: Option<&[u32]>,
    ) -> Result<Flow, SearchError> {
        let hi = self.pr.cap.min(self.pr.target_len - total);
        // tables[j] = prefix + j copies of e_idx; stop early once the zero
        // rule fires (it stays fired for every higher multiplicity).
        let mut tables = [PackedSigma::empty(); 8];
        debug_assert!(hi < 8);
        tables[0] = *table;
        let mut fired_at = hi + 1;
        for j in 1..=hi {
            tables[j as usize] = tables[j as usize - 1];
            tables[j as usize].add_one(self.tt, idx);
            if self.pr.zero_rule.fires(&tables[j as usize]) {
                fired_at = j;
                break;
            }
        }

        let start = match resume {
            Some(path) => path[idx],
            None => hi,
        };
        for mi in (0..=start).rev() {
            if let Some(path) = resume {
                if mi == path[idx] && path.len() > idx + 1 {
                    // interior checkpoint-path node: re-enter without counting
                    self.m[idx] = mi;
                    if let Flow::Abort =
                        self.descend(idx + 1, total + mi, &tables[mi as usize], Some(path))?
                    {
                        return Ok(Flow::Abort);
                    }
                    self.m[idx] = 0;
                    continue;
                }
            }
            let zero_pruned = mi >= fired_at;
            if let Flow::Abort =
                self.process(idx, mi, total + mi, &tables[mi as usize], zero_pruned)?
            {
                return Ok(Flow::Abort);
            }
            self.m[idx] = 0;
        }
        Ok(Flow::Continue)
    }
}

fn mirror_table(field: &PrimeField, dim: Dim) -> Vec<Vec<u16>> {
    let n = dim.group_size(field.p());
    (0..n)
        .map(|x| {
            let ex = GroupElem::from_index(field, x);
            (0..n)
                .map(|e| {
                    let ee = GroupElem::from_index(field, e);
                    ex.scale(field, 2).sub(field, &ee).index(field.p()) as u16
                })
                .collect()
        })
        .collect()
}

/// Run the engine in task-split mode (the default): the tree is cut at
/// `split_depth`, surviving prefixes become independent tasks, and any node
/// budget is divided statically across tasks so the outcome does not depend
/// on the worker count or scheduling.
pub fn run_split(pr: &EngineParams) -> Result<EngineOutcome, SearchError> {
    let group = AffineGroup::new(&pr.field, pr.dim, pr.group_kind)?;
    let tt = TransTable::new(&pr.field, pr.dim, pr.kmax);
    let mirror = mirror_table(&pr.field, pr.dim);
    let prefix_perms: &[Vec<u16>] = if pr.field.p() <= 3 {
        &group.perms
    } else {
        &group.cheap_perms
    };

    // enumerate surviving prefixes at split_depth with a depth-limited DFS
    let split = pr.split_depth.min(pr.dim.group_size(pr.field.p()));
    let mut prefix_dfs = Dfs::new(pr, &tt, &group, prefix_perms, &mirror, None);
    let mut tasks: Vec<(Vec<u32>, PackedSigma, u32)> = Vec::new();
    collect_prefixes(&mut prefix_dfs, 0, 0, &PackedSigma::empty(), split, &mut tasks)?;
    let prefix_nodes = prefix_dfs.nodes;
    let mut outcome = EngineOutcome {
        nodes: prefix_nodes,
        leaves: prefix_dfs.leaves,
        truncated: false,
        survivors: Vec::new(),
    };
    let mut survivors: BTreeSet<Vec<u32>> = prefix_dfs.survivors;

    // static budget split across tasks
    let shares: Vec<Option<u64>> = match pr.node_budget {
        None => vec![None; tasks.len()],
        Some(b) => {
            let b = b.saturating_sub(prefix_nodes);
            let n = tasks.len() as u64;
            (0..tasks.len())
                .map(|i| {
                    let base = if n == 0 { 0 } else { b / n };
                    let extra = if (i as u64) < b % n.max(1) { 1 } else { 0 };
                    Some(base + extra)
                })
                .collect()
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(pr.workers.max(1))
        .build()
        .map_err(|e| SearchError::Internal(e.to_string()))?;
    let results: Vec<Result<(u64, u64, bool, BTreeSet<Vec<u32>>), SearchError>> =
        pool.install(|| {
            tasks
                .par_iter()
                .zip(shares.par_iter())
                .map(|((prefix, table, total), share)| {
                    // tasks always satisfy prefix.len() < n_elems and
                    // total < target (complete prefixes were handled as
                    // leaves during collection)
                    let mut dfs = Dfs::new(pr, &tt, &group, prefix_perms, &mirror, *share);
                    dfs.m[..prefix.len()].copy_from_slice(prefix);
                    dfs.descend(prefix.len(), *total, table, None)?;
                    Ok((dfs.nodes, dfs.leaves, dfs.truncated, dfs.survivors))
                })
                .collect()
        });

    for r in results {
        let (nodes, leaves, truncated, survs) = r?;
        outcome.nodes += nodes;
        outcome.leaves += leaves;
        outcome.truncated |= truncated;
        survivors.extend(survs);
    }
    outcome.survivors = survivors.into_iter().collect();
    Ok(outcome)
}

/// Depth-limited DFS used to cut the tree into prefix tasks. Prefixes that
/// reach the target length early are handled as leaves right here.
fn collect_prefixes(
    dfs: &mut Dfs<'_>,
    idx: usize,
    total: u32,
    table: &PackedSigma,
    split: usize,
    out: &mut Vec<(Vec<u32>, PackedSigma, u32)>,
) -> Result<(), SearchError> {
    let pr = dfs.pr;
    let hi = pr.cap.min(pr.target_len - total);
    let mut tables = [PackedSigma::empty(); 8];
    tables[0] = *table;
    let mut fired_at = hi + 1;
    for j in 1..=hi {
        tables[j as usize] = tables[j as usize - 1];
        tables[j as usize].add_one(dfs.tt, idx);
        if pr.zero_rule.fires(&tables[j as usize]) {
            fired_at = j;
            break;
        }
    }
    for mi in (0..=hi).rev() {
        dfs.nodes += 1;
        let total2 = total + mi;
        if mi >= fired_at {
            continue;
        }
        dfs.m[idx] = mi;
        let descend_further = if mi > 0 && pr.triple_pruning && dfs.triple_reducible(idx) {
            false
        } else if pr.symmetry_reduction
            && dfs.group.prefix_prunable(&dfs.m, idx + 1, dfs.prefix_perms)
        {
            false
        } else if total2 == pr.target_len {
            dfs.handle_leaf();
            false
        } else if idx + 1 == dfs.n_elems {
            false
        } else {
            let slots = (dfs.n_elems - idx - 1) as u64 * pr.cap as u64;
            slots >= (pr.target_len - total2) as u64
        };
        if descend_further {
            if idx + 1 >= split {
                out.push((dfs.m[..=idx].to_vec(), tables[mi as usize], total2));
            } else {
                collect_prefixes(dfs, idx + 1, total2, &tables[mi as usize], split, out)?;
            }
        }
        dfs.m[idx] = 0;
    }
    Ok(())
}

/// Run sequentially with optional checkpoint/resume support. Traversal and
/// counting are identical to an uninterrupted sequential run.
pub fn run_sequential(
    pr: &EngineParams,
    resume: Option<&Checkpoint>,
) -> Result<EngineOutcome, SearchError> {
    let group = AffineGroup::new(&pr.field, pr.dim, pr.group_kind)?;
    let tt = TransTable::new(&pr.field, pr.dim, pr.kmax);
    let mirror = mirror_table(&pr.field, pr.dim);
    let prefix_perms: &[Vec<u16>] = if pr.field.p() <= 3 {
        &group.perms
    } else {
        &group.cheap_perms
    };
    let mut dfs = Dfs::new(pr, &tt, &group, prefix_perms, &mirror, pr.node_budget);
    let resume_path: Option<Vec<u32>> = match resume {
        Some(cp) if cp.done => {
            return Ok(EngineOutcome {
                nodes: cp.nodes,
                leaves: cp.leaves,
                truncated: false,
                survivors: cp.survivors.clone(),
            });
        }
        Some(cp) => {
            dfs.nodes = cp.nodes;
            dfs.leaves = cp.leaves;
            dfs.survivors = cp.survivors.iter().cloned().collect();
            Some(cp.path.clone())
        }
        None => None,
    };
    let root = PackedSigma::empty();
    if pr.target_len == 0 {
        dfs.handle_leaf();
    } else {
        dfs.descend(0, 0, &root, resume_path.as_deref())?;
    }
    if !dfs.truncated {
        dfs.write_checkpoint(&[], true)?;
    }
    Ok(EngineOutcome {
        nodes: dfs.nodes,
        leaves: dfs.leaves,
        truncated: dfs.truncated,
        survivors: dfs.survivors.into_iter().collect(),
    })
}
