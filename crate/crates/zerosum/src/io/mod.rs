//! Text file formats and run manifests.
//!
//! Sequence files are line-oriented and human-diffable. The header names
//! the carrier: `p=5 d=2` for modular sequences, `Z d=2` for lattice
//! sequences with rational multiplicities. Each following line is
//! whitespace-separated coordinates and a multiplicity; `#` starts a
//! comment. Lattice multiplicities accept exact rationals (`num/den`);
//! no binary floats anywhere.
//!
//! Every CLI command emits a `RunManifest` next to its result: command
//! echo, seed, timestamps, and a SHA-256 digest of the canonical result
//! JSON. Identical (command, config, seed) must reproduce the digest.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::Signed;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::field::{Dim, GroupElem, PrimeField};
use crate::lattice::{parse_rational, LatticePoint};
use crate::relax::RealSequence;
use crate::seq::Sequence;
use crate::IoError;

/// A parsed sequence file: modular or lattice carrier.
#[derive(Debug, Clone)]
pub enum SequenceFile {
    Modular(Sequence),
    Lattice(RealSequence),
}

impl SequenceFile {
    pub fn expect_modular(self, file: &str) -> Result<Sequence, IoError> {
        match self {
            SequenceFile::Modular(s) => Ok(s),
            SequenceFile::Lattice(_) => Err(IoError::Parse {
                file: file.to_string(),
                line: 1,
                msg: "expected a modular sequence (header p=<prime>), found a lattice file"
                    .to_string(),
            }),
        }
    }

    pub fn expect_lattice(self, file: &str) -> Result<RealSequence, IoError> {
        match self {
            SequenceFile::Lattice(s) => Ok(s),
            SequenceFile::Modular(_) => Err(IoError::Parse {
                file: file.to_string(),
                line: 1,
                msg: "expected a lattice sequence (header Z), found a modular file".to_string(),
            }),
        }
    }
}

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Parse sequence file text. `name` is used in error messages only.
pub fn parse_sequence_text(text: &str, name: &str) -> Result<SequenceFile, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(name, 1, "empty file: missing header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();

    let mut modulus: Option<u32> = None;
    let mut dim = Dim::Two;
    for tok in &tokens {
        if let Some(v) = tok.strip_prefix("p=") {
            let p: u32 = v
                .parse()
                .map_err(|_| parse_err(name, hline, format!("bad modulus {v:?}")))?;
            modulus = Some(p);
        } else if *tok == "Z" || *tok == "z" {
            modulus = None;
        } else if let Some(v) = tok.strip_prefix("d=") {
            dim = match v {
                "1" => Dim::One,
                "2" => Dim::Two,
                _ => return Err(parse_err(name, hline, format!("dimension must be 1 or 2, got {v}"))),
            };
        } else {
            return Err(parse_err(name, hline, format!("unexpected header token {tok:?}")));
        }
    }
    let is_lattice = !tokens.iter().any(|t| t.starts_with("p="));

    if is_lattice {
        if dim == Dim::One {
            return Err(parse_err(name, hline, "lattice sequences are two-dimensional"));
        }
        let mut entries = Vec::new();
        for (ln, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(parse_err(name, ln, "expected: x y multiplicity"));
            }
            let x: i64 = parts[0]
                .parse()
                .map_err(|_| parse_err(name, ln, format!("bad coordinate {:?}", parts[0])))?;
            let y: i64 = parts[1]
                .parse()
                .map_err(|_| parse_err(name, ln, format!("bad coordinate {:?}", parts[1])))?;
            let mu = parse_rational(parts[2])
                .map_err(|e| parse_err(name, ln, e.to_string()))?;
            if !mu.is_positive() {
                return Err(parse_err(name, ln, "multiplicity must be positive"));
            }
            entries.push((LatticePoint::new(x, y), mu));
        }
        let seq = RealSequence::new(entries)
            .map_err(|e| parse_err(name, hline, e.to_string()))?;
        return Ok(SequenceFile::Lattice(seq));
    }

    let p = modulus.expect("checked above");
    let field = PrimeField::new(p).map_err(|e| parse_err(name, hline, e.to_string()))?;
    let mut seq = Sequence::new(field, dim);
    let want = dim.coords() + 1;
    for (ln, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != want {
            return Err(parse_err(
                name,
                ln,
                format!("expected {} fields (coords then multiplicity)", want),
            ));
        }
        let mut coords = [0i64; 2];
        for (slot, raw) in coords.iter_mut().zip(&parts[..want - 1]) {
            *slot = raw
                .parse()
                .map_err(|_| parse_err(name, ln, format!("bad coordinate {raw:?}")))?;
        }
        let m: i64 = parts[want - 1]
            .parse()
            .map_err(|_| parse_err(name, ln, format!("bad multiplicity {:?}", parts[want - 1])))?;
        if m <= 0 {
            return Err(parse_err(name, ln, "multiplicity must be positive"));
        }
        let elem = match dim {
            Dim::One => GroupElem::new_1d(&field, coords[0]),
            Dim::Two => GroupElem::new_2d(&field, coords[0], coords[1]),
        };
        seq.push(elem, m as u32);
    }
    Ok(SequenceFile::Modular(seq))
}


pub fn read_sequence_file(path: &Path) -> Result<SequenceFile, IoError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| IoError::File(name.clone(), e.to_string()))?;
    parse_sequence_text(&text, &name)
}

/// Render a modular sequence in file format.
pub fn serialize_sequence(seq: &Sequence) -> String {
    let mut out = String::new();
    let d = match seq.dim() {
        Dim::One => 1,
        Dim::Two => 2,
    };
    writeln!(out, "p={} d={}", seq.field().p(), d).unwrap();
    for (e, m) in seq.iter() {
        match seq.dim() {
            Dim::One => writeln!(out, "{} {}", e.x(), m).unwrap(),
            Dim::Two => writeln!(out, "{} {} {}", e.x(), e.y(), m).unwrap(),
        }
    }
    out
}

/// Render a lattice sequence in file format.
pub fn serialize_real_sequence(seq: &RealSequence) -> String {
    let mut out = String::new();
    writeln!(out, "Z d=2").unwrap();
    for (p, mu) in seq.entries() {
        writeln!(out, "{} {} {}", p.x, p.y, mu).unwrap();
    }
    out
}

/// Manifest attached to every command's JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub artifact_version: String,
    pub seed: Option<u64>,
    pub started_utc: String,
    pub wall_ms: u64,
    /// SHA-256 of the canonical serialization of the result object.
    pub result_digest: String,
}

/// Digest of a JSON value's canonical bytes (serde_json orders map keys).
pub fn digest_json(value: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(value).expect("JSON serializes");
    let mut h = Sha256::new();
    h.update(&bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Keys whose values are volatile run metadata, stripped before digesting
/// or comparing runs.
pub const VOLATILE_KEYS: &[&str] = &["wall_ms", "started_utc"];

/// Recursively null out volatile keys (wall time, timestamps) so digests
/// and byte comparisons see only reproducible content.
pub fn strip_volatile(value: &serde_json::Value) -> serde_json::Value {
    match value {
        serde_json::Value::Object(map) => {
            let mut out = serde_json::Map::new();
            for (k, v) in map {
                if VOLATILE_KEYS.contains(&k.as_str()) {
                    out.insert(k.clone(), serde_json::Value::Null);
                } else {
                    out.insert(k.clone(), strip_volatile(v));
                }
            }
            serde_json::Value::Object(out)
        }
        serde_json::Value::Array(items) => {
            serde_json::Value::Array(items.iter().map(strip_volatile).collect())
        }
        other => other.clone(),
    }
}

/// Wrap a result value with its manifest.
pub fn with_manifest(
    command: &str,
    seed: Option<u64>,
    started: chrono::DateTime<chrono::Utc>,
    result: serde_json::Value,
) -> serde_json::Value {
    let digest = digest_json(&strip_volatile(&result));
    let manifest = RunManifest {
        command: command.to_string(),
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        started_utc: started.to_rfc3339(),
        wall_ms: (chrono::Utc::now() - started).num_milliseconds().max(0) as u64,
        result_digest: digest,
    };
    serde_json::json!({
        "result": result,
        "manifest": manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    #[test]
    fn parse_modular_two_dim() {
        let text = "# extremal sequence\np=3 d=2\n0 0 2\n0 1 2\n1 0 2\n1 1 2\n";
        let SequenceFile::Modular(seq) = parse_sequence_text(text, "t").unwrap() else {
            panic!("expected modular");
        };
        assert_eq!(seq.len(), 8);
        assert_eq!(seq.field().p(), 3);
        assert_eq!(seq.dim(), Dim::Two);
    }

    #[test]
    fn parse_modular_one_dim() {
        let text = "p=5 d=1\n0 2\n1 2\n2 2\n3 2\n";
        let SequenceFile::Modular(seq) = parse_sequence_text(text, "t").unwrap() else {
            panic!("expected modular");
        };
        assert_eq!(seq.len(), 8);
        assert_eq!(seq.dim(), Dim::One);
    }

    #[test]
    fn parse_lattice_rationals() {
        let text = "Z d=2\n0 0 1/2\n1 0 1/2\n-2 3 399/100\n";
        let SequenceFile::Lattice(seq) = parse_sequence_text(text, "t").unwrap() else {
            panic!("expected lattice");
        };
        assert_eq!(seq.multiplicity(&LatticePoint::new(-2, 3)), rat(399, 100));
    }

    #[test]
    fn zero_multiplicity_rejected_with_line_number() {
        let text = "p=5 d=2\n0 0 1\n1 1 0\n";
        let err = parse_sequence_text(text, "input.seq").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("input.seq:3"), "{msg}");
        assert!(msg.contains("positive"), "{msg}");
    }

    #[test]
    fn bad_header_rejected() {
        assert!(parse_sequence_text("q=5\n", "t").is_err());
        assert!(parse_sequence_text("p=4 d=2\n", "t").is_err());
        assert!(parse_sequence_text("p=5 d=3\n", "t").is_err());
        assert!(parse_sequence_text("", "t").is_err());
    }

    #[test]
    fn round_trip_modular() {
        let f = PrimeField::new(7).unwrap();
        let seq = Sequence::from_pairs(f, &[(0, 0, 2), (3, 4, 1), (6, 6, 5)]);
        let text = serialize_sequence(&seq);
        let SequenceFile::Modular(back) = parse_sequence_text(&text, "t").unwrap() else {
            panic!();
        };
        assert_eq!(back, seq);
    }

    #[test]
    fn round_trip_lattice() {
        let seq =
            RealSequence::from_quads(&[(0, 0, 1, 2), (-3, 7, 22, 7), (5, -5, 3, 1)]).unwrap();
        let text = serialize_real_sequence(&seq);
        let SequenceFile::Lattice(back) = parse_sequence_text(&text, "t").unwrap() else {
            panic!();
        };
        assert_eq!(back, seq);
    }

    #[test]
    fn volatile_stripping_and_digest() {
        let a = serde_json::json!({"x": 1, "wall_ms": 55, "inner": {"started_utc": "now", "y": 2}});
        let b = serde_json::json!({"x": 1, "wall_ms": 99, "inner": {"started_utc": "later", "y": 2}});
        assert_eq!(digest_json(&strip_volatile(&a)), digest_json(&strip_volatile(&b)));
        let c = serde_json::json!({"x": 2, "wall_ms": 55, "inner": {"started_utc": "now", "y": 2}});
        assert_ne!(digest_json(&strip_volatile(&a)), digest_json(&strip_volatile(&c)));
    }
}
