//! Command implementations behind the `zerosum` binary: argument types,
//! JSON assembly, and exit-code mapping. The binary itself only parses
//! argv and forwards here.
//!
//! Exit codes: 0 verified/computed, 1 counterexample or violation found,
//! 2 usage/parse error, 3 budget truncation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::field::GroupElem;
use crate::io::{read_sequence_file, with_manifest};
use crate::lattice::{parse_rational, LatticePoint, Rational};
use crate::relax::{
    best_interior_lattice_point, contains, dreplace_move, is_admissible, proposition_dreal_check,
    sigma_polygon, AdmissibilityThresholds, RatPoint,
};
use crate::search::{
    check_multiplicity_dichotomy, default_workers, enumerate_extremal_d_resumable, load_checkpoint,
    verify_egz, verify_kemnitz_resumable, verify_property_b, verify_property_c, Property,
    SearchConfig, SearchReport,
};
use crate::sigma::representable_targets;
use crate::{fourier, FourierError, PrimeField};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TRUNCATED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "zerosum",
    about = "Zero-sum sequence toolkit: exact subsequence-sum DP, extremal search, convex relaxation, character-sum probes",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact-length subsequence sums of a sequence file
    Sigma(SigmaArgs),
    /// Verify a zero-sum property (egz, kemnitz, b, c, d, dichotomy)
    Verify(VerifyArgs),
    /// Convex relaxation over Z²: polygon, containment, interior points
    Relax(RelaxArgs),
    /// Character-sum probes: representation counts and tail ratios
    Fourier(FourierArgs),
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    /// Sequence file (modular header: `p=<prime> d=<1|2>`)
    #[arg(long)]
    pub file: PathBuf,
    /// Subsequence length k
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Property: egz | kemnitz | b | c | d | dichotomy
    pub property: String,
    #[arg(long)]
    pub p: u32,
    /// Node budget; exceeding it truncates with exit code 3
    #[arg(long)]
    pub budget: Option<u64>,
    /// Checkpoint file (forces single-threaded traversal)
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Resume from the checkpoint file
    #[arg(long, default_value_t = false)]
    pub resume: bool,
    /// Write a checkpoint every N nodes
    #[arg(long, default_value_t = 0)]
    pub checkpoint_interval: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Disable affine symmetry reduction
    #[arg(long, default_value_t = false)]
    pub no_symmetry: bool,
    /// Enable triple-collapse pruning
    #[arg(long, default_value_t = false)]
    pub triple_pruning: bool,
    /// Randomized trials for EGZ beyond the exhaustive limit
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Largest p verified exhaustively for EGZ
    #[arg(long, default_value_t = 5)]
    pub exhaustive_limit: u32,
    /// Worker threads (default: ZEROSUM_WORKERS or available cores)
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RelaxArgs {
    /// polygon | contains | best-point | dreplace | check | prop
    pub subcommand: String,
    /// Lattice sequence file (header `Z`)
    #[arg(long)]
    pub file: PathBuf,
    /// Total weight c (rational), default 1
    #[arg(long, default_value = "1")]
    pub c: String,
    /// Query point "x,y" (rationals) for `contains`
    #[arg(long)]
    pub point: Option<String>,
    /// Triangle "x1,y1;x2,y2;x3,y3" for `dreplace`
    #[arg(long)]
    pub triangle: Option<String>,
    /// Shift target "x,y" (integers) for `dreplace`
    #[arg(long)]
    pub target: Option<String>,
    /// Require total mass exactly equal to the threshold
    #[arg(long, default_value_t = false)]
    pub exact_mass: bool,
    /// Move budget for the minimization inside `prop`
    #[arg(long, default_value_t = 2000)]
    pub move_budget: usize,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    /// repcount | tail
    pub subcommand: String,
    #[arg(long)]
    pub p: u32,
    /// Points "(x1,y1);(x2,y2);..." for repcount
    #[arg(long)]
    pub points: Option<String>,
    /// Coefficient bound N; default chosen as ⌊min(p/C(n,2), δp/(n−1))⌋
    #[arg(long)]
    pub n_bound: Option<u32>,
    /// (s,t) point for `tail`
    #[arg(long)]
    pub st: Option<String>,
    /// δ parameter used when N is derived
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// point count n used when N is derived for `tail`
    #[arg(long, default_value_t = 4)]
    pub n_points: u32,
}

/// A command outcome: JSON plus the process exit code.
pub struct CmdOutput {
    pub json: serde_json::Value,
    pub exit: i32,
}

fn usage_error(msg: impl Into<String>) -> CmdOutput {
    CmdOutput {
        json: json!({"error": msg.into()}),
        exit: EXIT_USAGE,
    }
}

pub fn run(cli: Cli) -> CmdOutput {
    match cli.command {
        Command::Sigma(args) => cmd_sigma(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Relax(args) => cmd_relax(&args),
        Command::Fourier(args) => cmd_fourier(&args),
    }
}

/// `sigma --file f --k k`: the representable targets of exact length k and
/// the zero-sum verdict.
pub fn cmd_sigma(args: &SigmaArgs) -> CmdOutput {
    let started = chrono::Utc::now();
    let seq = match read_sequence_file(&args.file) {
        Ok(f) => match f.expect_modular(&args.file.display().to_string()) {
            Ok(s) => s,
            Err(e) => return usage_error(e.to_string()),
        },
        Err(e) => return usage_error(e.to_string()),
    };
    if (args.k as u64) > seq.len() {
        return usage_error(format!(
            "k = {} exceeds sequence length {}",
            args.k,
            seq.len()
        ));
    }
    let targets = match representable_targets(&seq, args.k) {
        Ok(t) => t,
        Err(e) => return usage_error(e.to_string()),
    };
    let has_zero = targets.iter().any(GroupElem::is_zero);
    let result = json!({
        "p": seq.field().p(),
        "d": seq.dim().coords(),
        "k": args.k,
        "length": seq.len(),
        "targets": targets.iter().map(|e| json!([e.x(), e.y()])).collect::<Vec<_>>(),
        "has_zero_sum": has_zero,
    });
    CmdOutput {
        json: with_manifest("sigma", None, started, result),
        exit: EXIT_OK,
    }
}

fn search_config(args: &VerifyArgs, property: Property) -> SearchConfig {
    let mut cfg = SearchConfig::new(args.p, property);
    cfg.symmetry_reduction = !args.no_symmetry;
    cfg.triple_pruning = args.triple_pruning;
    cfg.node_budget = args.budget;
    cfg.seed = args.seed;
    cfg.egz_trials = args.trials;
    cfg.egz_exhaustive_limit = args.exhaustive_limit;
    cfg.checkpoint_path = args.checkpoint.clone();
    cfg.checkpoint_interval = args.checkpoint_interval;
    cfg.workers = args.workers.unwrap_or_else(default_workers);
    cfg
}

fn report_exit(report: &SearchReport) -> i32 {
    if !report.counterexamples.is_empty() {
        EXIT_COUNTEREXAMPLE
    } else if report.truncated {
        EXIT_TRUNCATED
    } else {
        EXIT_OK
    }
}

/// `verify <property> --p P [--budget N --checkpoint F --resume ...]`.
pub fn cmd_verify(args: &VerifyArgs) -> CmdOutput {
    let started = chrono::Utc::now();
    if PrimeField::new(args.p).is_err() {
        return usage_error(format!("{} is not prime", args.p));
    }
    let is_dichotomy = args.property.eq_ignore_ascii_case("dichotomy");
    let property = if is_dichotomy {
        Property::D
    } else {
        match Property::parse(&args.property) {
            Ok(p) => p,
            Err(e) => return usage_error(e.to_string()),
        }
    };
    let cfg = search_config(args, property);

    let resume_cp = if args.resume {
        let Some(path) = &args.checkpoint else {
            return usage_error("--resume requires --checkpoint <file>");
        };
        match load_checkpoint(path, &cfg.digest()) {
            Ok(cp) => Some(cp),
            Err(e) => return usage_error(e.to_string()),
        }
    } else {
        None
    };

    let outcome = if is_dichotomy {
        check_multiplicity_dichotomy(&cfg)
    } else {
        match property {
            Property::Egz => verify_egz(&cfg),
            Property::Kemnitz => verify_kemnitz_resumable(&cfg, resume_cp.as_ref()),
            Property::D => enumerate_extremal_d_resumable(&cfg, resume_cp.as_ref()),
            Property::C => verify_property_c(&cfg),
            Property::B => verify_property_b(&cfg),
        }
    };
    match outcome {
        Ok(report) => {
            let exit = report_exit(&report);
            let result = serde_json::to_value(&report).expect("report serializes");
            CmdOutput {
                json: with_manifest("verify", Some(args.seed), started, result),
                exit,
            }
        }
        Err(e) => usage_error(e.to_string()),
    }
}

fn parse_rat_point(s: &str) -> Result<RatPoint, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"x,y\", got {s:?}"))?;
    let x = parse_rational(x).map_err(|e| e.to_string())?;
    let y = parse_rational(y).map_err(|e| e.to_string())?;
    Ok(RatPoint::new(x, y))
}

fn parse_lattice_point(s: &str) -> Result<LatticePoint, String> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"x,y\", got {s:?}"))?;
    let x: i64 = x.trim().parse().map_err(|_| format!("bad integer {x:?}"))?;
    let y: i64 = y.trim().parse().map_err(|_| format!("bad integer {y:?}"))?;
    Ok(LatticePoint::new(x, y))
}

/// `relax <polygon|contains|best-point|dreplace|check|prop> --file f ...`.
pub fn cmd_relax(args: &RelaxArgs) -> CmdOutput {
    let started = chrono::Utc::now();
    let seq = match read_sequence_file(&args.file) {
        Ok(f) => match f.expect_lattice(&args.file.display().to_string()) {
            Ok(s) => s,
            Err(e) => return usage_error(e.to_string()),
        },
        Err(e) => return usage_error(e.to_string()),
    };
    let c: Rational = match parse_rational(&args.c) {
        Ok(c) => c,
        Err(e) => return usage_error(e.to_string()),
    };
    let th = AdmissibilityThresholds {
        exact_mass: args.exact_mass,
        ..Default::default()
    };

    let (result, exit) = match args.subcommand.as_str() {
        "polygon" => match sigma_polygon(&seq, &c) {
            Ok(poly) => (
                json!({
                    "kind": poly.kind(),
                    "vertices": poly.vertices.iter()
                        .map(|v| json!([v.x.to_string(), v.y.to_string()]))
                        .collect::<Vec<_>>(),
                    "c": c.to_string(),
                }),
                EXIT_OK,
            ),
            Err(e) => return usage_error(e.to_string()),
        },
        "contains" => {
            let Some(ps) = &args.point else {
                return usage_error("contains requires --point \"x,y\"");
            };
            let q = match parse_rat_point(ps) {
                Ok(q) => q,
                Err(e) => return usage_error(e),
            };
            match contains(&seq, &q, &c) {
                Ok(inside) => (
                    json!({
                        "point": [q.x.to_string(), q.y.to_string()],
                        "c": c.to_string(),
                        "contains": inside,
                    }),
                    EXIT_OK,
                ),
                Err(e) => return usage_error(e.to_string()),
            }
        }
        "best-point" => match best_interior_lattice_point(&seq) {
            Ok(best) => (
                json!({ "best_interior_point": best }),
                EXIT_OK,
            ),
            Err(e) => return usage_error(e.to_string()),
        },
        "dreplace" => {
            let Some(tri) = &args.triangle else {
                return usage_error("dreplace requires --triangle \"x1,y1;x2,y2;x3,y3\"");
            };
            let Some(tgt) = &args.target else {
                return usage_error("dreplace requires --target \"x,y\"");
            };
            let pts: Result<Vec<LatticePoint>, String> =
                tri.split(';').map(parse_lattice_point).collect();
            let pts = match pts {
                Ok(p) if p.len() == 3 => p,
                Ok(_) => return usage_error("triangle needs exactly three vertices"),
                Err(e) => return usage_error(e),
            };
            let v = match parse_lattice_point(tgt) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            match dreplace_move(&seq, &pts[0], &pts[1], &pts[2], &v) {
                Ok(mv) => (
                    json!({
                        "shifted": mv.shifted.to_string(),
                        "barycentric": mv.barycentric.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                        "side_exclusion_mattered": mv.side_exclusion_mattered,
                        "result": mv.result.entries().iter()
                            .map(|(p, mu)| json!([p.x, p.y, mu.to_string()]))
                            .collect::<Vec<_>>(),
                    }),
                    EXIT_OK,
                ),
                Err(e) => return usage_error(e.to_string()),
            }
        }
        "check" => {
            let rep = is_admissible(&seq, &th);
            let exit = if rep.admissible { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
            (serde_json::to_value(&rep).expect("serializes"), exit)
        }
        "prop" => match proposition_dreal_check(&seq, &th, args.move_budget) {
            Ok(verdict) => {
                let exit = if verdict.flagged { EXIT_COUNTEREXAMPLE } else { EXIT_OK };
                (serde_json::to_value(&verdict).expect("serializes"), exit)
            }
            Err(e) => {
                return CmdOutput {
                    json: json!({"error": e.to_string()}),
                    exit: EXIT_COUNTEREXAMPLE,
                }
            }
        },
        other => return usage_error(format!("unknown relax subcommand {other:?}")),
    };
    CmdOutput {
        json: with_manifest("relax", None, started, result),
        exit,
    }
}

fn parse_points_list(field: &PrimeField, s: &str) -> Result<Vec<GroupElem>, String> {
    s.split(';')
        .map(|tok| {
            let p = parse_lattice_point(tok)?;
            Ok(GroupElem::new_2d(field, p.x, p.y))
        })
        .collect()
}

/// `fourier <repcount|tail> --p P ...`.
pub fn cmd_fourier(args: &FourierArgs) -> CmdOutput {
    let started = chrono::Utc::now();
    let field = match PrimeField::new(args.p) {
        Ok(f) => f,
        Err(e) => return usage_error(e.to_string()),
    };
    let (result, exit) = match args.subcommand.as_str() {
        "repcount" => {
            let Some(pts) = &args.points else {
                return usage_error("repcount requires --points \"(x1,y1);(x2,y2);...\"");
            };
            let points = match parse_points_list(&field, pts) {
                Ok(p) => p,
                Err(e) => return usage_error(e),
            };
            let n_bound = args
                .n_bound
                .unwrap_or_else(|| fourier::choose_n(&field, points.len() as u32, args.delta));
            let inst = match fourier::FourierInstance::new(field, points, n_bound) {
                Ok(i) => i,
                Err(e) => return usage_error(e.to_string()),
            };
            match fourier::rep_count_table(&inst) {
                Ok(brute) => {
                    let fvals = fourier::rep_count_fourier_table(&inst);
                    let max_disc = brute
                        .iter()
                        .zip(&fvals)
                        .map(|(b, f)| (*b as f64 - f).abs())
                        .fold(0.0f64, f64::max);
                    (
                        json!({
                            "p": args.p,
                            "n_bound": n_bound,
                            "counts": brute,
                            "fourier": fvals,
                            "max_abs_discrepancy": max_disc,
                        }),
                        EXIT_OK,
                    )
                }
                Err(e @ FourierError::BudgetExceeded(_, _)) => {
                    return CmdOutput {
                        json: json!({"error": e.to_string()}),
                        exit: EXIT_TRUNCATED,
                    }
                }
                Err(e) => return usage_error(e.to_string()),
            }
        }
        "tail" => {
            let Some(st) = &args.st else {
                return usage_error("tail requires --st \"(s,t)\"");
            };
            let stp = match parse_lattice_point(st) {
                Ok(p) => p,
                Err(e) => return usage_error(e),
            };
            let st_elem = GroupElem::new_2d(&field, stp.x, stp.y);
            let n_bound = args
                .n_bound
                .unwrap_or_else(|| fourier::choose_n(&field, args.n_points, args.delta));
            match fourier::tail_bound_report(&field, &st_elem, n_bound) {
                Ok(rep) => (serde_json::to_value(&rep).expect("serializes"), EXIT_OK),
                Err(e) => return usage_error(e.to_string()),
            }
        }
        other => return usage_error(format!("unknown fourier subcommand {other:?}")),
    };
    CmdOutput {
        json: with_manifest("fourier", None, started, result),
        exit,
    }
}
