//! On-disk memo of Perron–Frobenius data, keyed by a digest of the matrix.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use ttcur_core::spectral::{pf_eigendata, PfData, PfSolver};
use ttcur_core::{Matrix, Result};

use crate::output::write_atomic;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "TTCUR_CACHE";

#[derive(Serialize, Deserialize)]
struct Entry {
    lambda: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    residual: f64,
}

/// Power iteration behind an optional directory cache. Unreadable or
/// corrupt entries are recomputed and overwritten.
#[derive(Clone, Debug, Default)]
pub struct CachedSolver {
    dir: Option<PathBuf>,
}

impl CachedSolver {
    pub fn new(dir: Option<PathBuf>) -> CachedSolver {
        CachedSolver { dir }
    }

    pub fn from_env() -> CachedSolver {
        CachedSolver::new(
            std::env::var_os(CACHE_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        )
    }

    pub fn key(m: &Matrix, tol: f64) -> String {
        let mut h = Sha256::new();
        h.update(b"pf-v1");
        h.update((m.size() as u64).to_le_bytes());
        for row in m.rows() {
            for x in row {
                h.update(x.to_le_bytes());
            }
        }
        h.update(tol.to_bits().to_le_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, m: &Matrix, tol: f64) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", Self::key(m, tol))))
    }
}

impl PfSolver for CachedSolver {
    fn solve(&self, m: &Matrix, tol: f64) -> Result<PfData> {
        let path = self.path(m, tol);
        if let Some(p) = &path {
            let hit = std::fs::read_to_string(p)
                .ok()
                .and_then(|s| serde_json::from_str::<Entry>(&s).ok());
            if let Some(e) = hit.filter(|e| e.left.len() == m.size() && e.right.len() == m.size()) {
                return Ok(PfData {
                    lambda: e.lambda,
                    left: e.left,
                    right: e.right,
                    residual: e.residual,
                });
            }
        }
        let pf = pf_eigendata(m, tol)?;
        if let Some(p) = &path {
            let e = Entry {
                lambda: pf.lambda,
                left: pf.left.clone(),
                right: pf.right.clone(),
                residual: pf.residual,
            };
            // a failed cache write only costs a recomputation later
            let _ = std::fs::create_dir_all(p.parent().unwrap())
                .and_then(|_| write_atomic(p, serde_json::to_string(&e).unwrap().as_bytes()));
        }
        Ok(pf)
    }
}
