//! Conjecture sweeps over (type, level, check) cells with an on-disk manifest.

use crate::checks::{self, CheckOutcome};
use anyhow::{bail, Context, Result};
use kacfusion_core::{affine_data, AffineType, FiniteWeight};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    #[serde(rename = "type")]
    pub atype: String,
    pub level: i64,
    pub check: String,
    pub version: String,
}

impl CellKey {
    fn id(&self) -> String {
        format!("{}|{}|{}|{}", self.atype, self.level, self.check, self.version)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CellResult {
    #[serde(flatten)]
    pub key: CellKey,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<serde_json::Value>,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub version: &'static str,
    pub cells: Vec<CellResult>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

pub struct SweepConfig {
    pub types: Vec<AffineType>,
    pub levels: Vec<i64>,
    pub checks: Vec<String>,
    pub beta: Option<FiniteWeight>,
    pub manifest: Option<PathBuf>,
    pub max_cells: usize,
}

fn load_manifest(path: &Path) -> Result<BTreeMap<String, CellResult>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let bytes = std::fs::read(path).with_context(|| format!("reading manifest {}", path.display()))?;
    serde_json::from_slice(&bytes).with_context(|| format!("manifest {} is not valid JSON", path.display()))
}

fn store_manifest(path: &Path, m: &BTreeMap<String, CellResult>) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_vec_pretty(m)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn run_cell(key: &CellKey, beta: Option<&FiniteWeight>) -> CellResult {
    let outcome = key
        .atype
        .parse::<AffineType>()
        .and_then(affine_data)
        .map_err(anyhow::Error::from)
        .and_then(|d| checks::run(&key.check, &d, key.level, beta));
    match outcome {
        Ok(CheckOutcome { pass, report }) => CellResult { key: key.clone(), pass, error: None, report: Some(report) },
        Err(e) => CellResult { key: key.clone(), pass: false, error: Some(e.to_string()), report: None },
    }
}

/// Returns the report and the number of cells taken from the manifest.
pub fn sweep(cfg: &SweepConfig) -> Result<(SweepReport, usize)> {
    let keys: Vec<CellKey> = cfg
        .types
        .iter()
        .flat_map(|t| {
            cfg.levels.iter().flat_map(move |&level| {
                cfg.checks.iter().map(move |c| CellKey { atype: t.to_string(), level, check: c.clone(), version: VERSION.into() })
            })
        })
        .collect();
    if keys.len() > cfg.max_cells {
        bail!("--max-cells: sweep has {} cells, cap is {}", keys.len(), cfg.max_cells);
    }
    let manifest = Mutex::new(match &cfg.manifest {
        Some(p) => load_manifest(p)?,
        None => BTreeMap::new(),
    });
    let reused = {
        let m = manifest.lock().unwrap();
        keys.iter().filter(|k| m.contains_key(&k.id())).count()
    };
    let cells: Vec<CellResult> = keys
        .par_iter()
        .map(|key| {
            if let Some(done) = manifest.lock().unwrap().get(&key.id()) {
                return Ok(done.clone());
            }
            let res = run_cell(key, cfg.beta.as_ref());
            if let Some(p) = &cfg.manifest {
                let mut m = manifest.lock().unwrap();
                m.insert(key.id(), res.clone());
                store_manifest(p, &m)?;
            }
            Ok(res)
        })
        .collect::<Result<_>>()?;
    let passed = cells.iter().filter(|c| c.pass).count();
    let errored = cells.iter().filter(|c| c.error.is_some()).count();
    let total = cells.len();
    Ok((SweepReport { version: VERSION, total, passed, failed: total - passed - errored, errored, cells }, reused))
}
