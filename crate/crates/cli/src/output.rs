use anyhow::{Context, Result};
use kacfusion_core::serial::{canonical_json, round12};
use kacfusion_core::{ComplexMatrix, FiniteWeight};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn write_bytes(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("--out: cannot write {}", p.display())),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes)?;
            Ok(s.flush()?)
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut s = canonical_json(value)?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// One row per nonzero structure constant.
pub fn tensor_csv(basis: &[FiniteWeight], entries: &[(usize, usize, usize, i64)]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["lambda", "mu", "nu", "N"])?;
    for &(i, j, k, n) in entries {
        w.write_record([basis[i].to_string(), basis[j].to_string(), basis[k].to_string(), n.to_string()])?;
    }
    Ok(w.into_inner()?)
}

/// One row per nonzero matrix entry.
pub fn matrices_csv(named: &[(&str, &ComplexMatrix)]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["matrix", "row", "col", "re", "im"])?;
    for (name, m) in named {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let (re, im) = (round12(m[(i, j)].re), round12(m[(i, j)].im));
                if re != 0.0 || im != 0.0 {
                    w.write_record([name.to_string(), i.to_string(), j.to_string(), re.to_string(), im.to_string()])?;
                }
            }
        }
    }
    Ok(w.into_inner()?)
}
