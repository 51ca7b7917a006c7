//! Named property suites runnable on a single (type, level) cell.

use anyhow::{bail, Result};
use kacfusion_core::fusion::{check_grading, fusion_verlinde, s_matrix, verlinde_algebra};
use kacfusion_core::modular::{cor58_check, modular_action, pairing_closed_form, pairing_matrix, unitarity_analogue, validate_beta};
use kacfusion_core::quotient::{hong_quotient, projected_verlinde_deviation, two_thirds_check};
use kacfusion_core::twisted::{sign_twist_check, twisted_verlinde};
use kacfusion_core::{AffineAlgebraData, ComplexMatrix, FiniteWeight, FusionAlgebra};
use serde::Serialize;
use serde_json::{json, Value};

pub const CHECKS: [&str; 11] = [
    "grading",
    "associativity",
    "verlinde",
    "sign_twist",
    "two_thirds",
    "homomorphism",
    "projected_verlinde",
    "relations",
    "cor58",
    "unitarity",
    "pairing",
];

const TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, serde::Deserialize, PartialEq)]
pub struct CheckOutcome {
    pub pass: bool,
    pub report: Value,
}

impl CheckOutcome {
    fn new(pass: bool, report: Value) -> Self {
        CheckOutcome { pass, report }
    }
}

pub fn validate_names(names: &[String]) -> Result<()> {
    for n in names {
        if !CHECKS.contains(&n.as_str()) {
            bail!("--checks: unknown check {n:?}, expected one of {}", CHECKS.join(","));
        }
    }
    Ok(())
}

fn algebra(data: &AffineAlgebraData, k: i64) -> Result<FusionAlgebra> {
    Ok(if data.is_untwisted() { verlinde_algebra(data, k)? } else { twisted_verlinde(data, k)?.algebra })
}

pub fn run(name: &str, data: &AffineAlgebraData, k: i64, beta: Option<&FiniteWeight>) -> Result<CheckOutcome> {
    Ok(match name {
        "grading" => {
            let r = check_grading(&algebra(data, k)?);
            let blocks: Vec<Value> = r.blocks.iter().map(|(class, n)| json!({ "class": class, "size": n })).collect();
            CheckOutcome::new(r.holds, json!({ "holds": r.holds, "violations": r.violations, "blocks": blocks }))
        }
        "associativity" => {
            let v = algebra(data, k)?.associativity_violations();
            CheckOutcome::new(v.is_empty(), json!({ "violations": v.len(), "first": v.first() }))
        }
        "verlinde" => {
            if !data.is_untwisted() {
                bail!("verlinde: {} is twisted", data.atype);
            }
            let kw = verlinde_algebra(data, k)?;
            let num = fusion_verlinde(&s_matrix(data, k)?)?;
            CheckOutcome::new(kw.same_tensor(&num), json!({ "max_residue": num.max_residue }))
        }
        "sign_twist" => {
            if !data.is_a2l_twisted() {
                bail!("sign_twist: needs A_2l^(2), got {}", data.atype);
            }
            let r = sign_twist_check(&twisted_verlinde(data, k)?.algebra);
            CheckOutcome::new(r.conjecture_holds, serde_json::to_value(r)?)
        }
        "two_thirds" => {
            let r = two_thirds_check(&hong_quotient(data, k)?);
            CheckOutcome::new(r.violations.is_empty(), serde_json::to_value(r)?)
        }
        "homomorphism" => {
            let v = hong_quotient(data, k)?.homomorphism_violations();
            CheckOutcome::new(v.is_empty(), json!({ "violations": v.len(), "first": v.first() }))
        }
        "projected_verlinde" => {
            let dev = projected_verlinde_deviation(&hong_quotient(data, k)?)?;
            CheckOutcome::new(dev < TOL, json!({ "max_deviation": dev }))
        }
        "relations" => {
            let m = modular_action(data, k)?;
            let conj = m.relations_residuals.contains_key("(u12 u21)^3 = c*C");
            let pass = m.relations_residuals.iter().all(|(n, r)| (conj && n.ends_with("c*I")) || *r < TOL);
            CheckOutcome::new(pass, json!({ "residuals": m.relations_residuals, "scalars": m.scalars }))
        }
        "cor58" => {
            let dev = cor58_check(data, k)?;
            CheckOutcome::new(dev < TOL, json!({ "max_deviation": dev }))
        }
        "unitarity" => {
            let dev = unitarity_analogue(data, k)?;
            CheckOutcome::new(dev < TOL, json!({ "max_deviation": dev }))
        }
        "pairing" => pairing(data, k, beta)?,
        other => bail!("unknown check {other:?}"),
    })
}

fn pairing(data: &AffineAlgebraData, k: i64, beta: Option<&FiniteWeight>) -> Result<CheckOutcome> {
    let r = data.atype.r;
    let zero = FiniteWeight::zero(data.rank);
    let beta = beta.unwrap_or(&zero);
    if beta.labels.len() != data.rank {
        bail!("--beta: expected {} labels, got {}", data.rank, beta.labels.len());
    }
    validate_beta(data, k, r, beta)?;
    let defining = pairing_matrix(data, k, r)?;
    let basis = kacfusion_core::enum_weights(data, k, kacfusion_core::WeightVariant::Pk)?;
    let n = basis.len();
    let mut closed = ComplexMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            closed[(a, b)] = pairing_closed_form(data, k, r, basis.finite(a), basis.finite(b), beta)?;
        }
    }
    let (v, res) = defining.fit_scalar(&closed);
    let rel = res / defining.max_abs().max(f64::MIN_POSITIVE);
    Ok(CheckOutcome::new(rel < TOL, json!({ "r": r, "beta": beta, "v": [v.re, v.im], "residual": rel })))
}
