#![allow(dead_code)]

use kacfusion_core::{affine_data, AffineAlgebraData, FiniteWeight};
use serde::Deserialize;
use std::path::PathBuf;

pub fn data(s: &str) -> AffineAlgebraData {
    affine_data(s.parse().unwrap()).unwrap()
}

/// Printed left-multiplication matrices in the printed basis order.
#[derive(Debug, Deserialize)]
pub struct PrintedExample {
    #[serde(rename = "type")]
    pub atype: String,
    pub level: i64,
    pub basis: Vec<Vec<i64>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<Vec<i64>>>,
}

pub fn fixture(name: &str) -> PrintedExample {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Left matrices of the computed algebra, reindexed into the printed basis.
pub fn printed_order(alg: &kacfusion_core::FusionAlgebra, basis: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let perm: Vec<usize> =
        basis.iter().map(|w| alg.basis.index_of(&FiniteWeight::from_ints(w)).expect("printed weight in basis")).collect();
    perm.iter()
        .map(|&i| {
            let m = alg.left_matrix(i);
            perm.iter().map(|&r| perm.iter().map(|&c| m[r][c]).collect()).collect()
        })
        .collect()
}

/// Untwisted types of rank at most 3.
pub const SMALL_UNTWISTED: [&str; 8] = ["A1~1", "A2~1", "A3~1", "B2~1", "B3~1", "C2~1", "C3~1", "G2~1"];
