//! Versioned, atomically-written search checkpoints.
//!
//! A checkpoint captures the DFS position (the path of branch choices for
//! the next unprocessed node) together with all counters and survivors
//! collected so far. Resuming from it reproduces the uninterrupted run's
//! report exactly, wall-clock aside.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::SearchError;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    /// Digest of the originating configuration; refuses to resume a
    /// mismatched run.
    pub config_digest: String,
    /// Branch-multiplicity path of the next node to process. Empty path +
    /// done=true means the search finished.
    pub path: Vec<u32>,
    pub done: bool,
    pub nodes: u64,
    pub leaves: u64,
    /// Survivor multiplicity vectors collected so far.
    pub survivors: Vec<Vec<u32>>,
}

pub fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<(), SearchError> {
    let tmp = tmp_path(path);
    let body = serde_json::to_string_pretty(cp).expect("checkpoint serializes");
    fs::write(&tmp, body).map_err(|e| SearchError::CheckpointIo(e.to_string()))?;
    fs::rename(&tmp, path).map_err(|e| SearchError::CheckpointIo(e.to_string()))?;
    Ok(())
}

pub fn load_checkpoint(path: &Path, expect_digest: &str) -> Result<Checkpoint, SearchError> {
    let body = fs::read_to_string(path).map_err(|e| SearchError::CheckpointIo(e.to_string()))?;
    let cp: Checkpoint =
        serde_json::from_str(&body).map_err(|e| SearchError::CheckpointIo(e.to_string()))?;
    if cp.version != CHECKPOINT_VERSION {
        return Err(SearchError::CheckpointVersion {
            found: cp.version,
            expected: CHECKPOINT_VERSION,
        });
    }
    if cp.config_digest != expect_digest {
        return Err(SearchError::CheckpointMismatch);
    }
    Ok(cp)
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".tmp");
    PathBuf::from(p)
}
