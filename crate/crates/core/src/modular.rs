//! Modular anomaly, `S`/`T` and `Γ_1(r)` actions on character spaces.

use crate::cartan::{AffineAlgebraData, MLattice};
use crate::matrix::C64;
use crate::rational::{qi, to_f64, Q};
use crate::types::{FiniteWeight, LevelWeight};
use num_integer::Integer;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnomalyValue {
    pub weight: LevelWeight,
    #[serde(serialize_with = "ser_q")]
    pub m: Q,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `m_λ = |λ̄+ρ̄|²/2(k+h^∨) − |ρ̄|²/2h^∨`.
pub fn anomaly_value(data: &AffineAlgebraData, finite: &FiniteWeight, k: i64) -> Q {
    let rho = data.rho();
    let lr = finite + &rho;
    data.norm2(&lr) / qi(2 * (k + data.h_dual)) - data.norm2(&rho) / qi(2 * data.h_dual)
}

pub fn anomaly(data: &AffineAlgebraData, lambda: &LevelWeight) -> AnomalyValue {
    AnomalyValue { weight: lambda.clone(), m: anomaly_value(data, &lambda.finite, lambda.level) }
}

/// `e^{2πi x}` with the integer part of `x` removed exactly.
pub fn phase(x: Q) -> C64 {
    let n = *x.numer();
    let d = *x.denom();
    let frac = Q::new(n.mod_floor(&d), d);
    C64::from_polar(1.0, 2.0 * PI * to_f64(&frac))
}

use crate::chars::char_eval;
use crate::error::{Error, Result};
use crate::fusion::{s_matrix_arc, SMatrixResult};
use crate::lattice::{dual_basis, intersect, scale};
use crate::matrix::ComplexMatrix;
use crate::rational::{qmat_mul, QMat};
use crate::twisted::TauMap;
use crate::weights::{enum_weights_arc, WeightBasis, WeightVariant};
use crate::weyl::signed_orbit;
use std::collections::BTreeMap;
use std::sync::Arc;

/// `s` in `(u_12 u_21^r)^s = 1`.
pub fn relation_exponent(r: u32) -> u32 {
    match r {
        1 => 3,
        2 => 4,
        _ => 6,
    }
}

/// How the characters of a type sit inside a space with a Kac-Peterson S-matrix.
struct CharacterSpace {
    /// Characters of the type itself.
    basis: WeightBasis,
    /// S-matrix of the ambient space (own, or of the transpose at the shifted level).
    ambient: SMatrixResult,
    /// Ambient index of each character.
    embedded: Vec<usize>,
    /// `e^{2πi m_λ}` from the type's own anomaly.
    t_own: Vec<C64>,
}

fn character_space(data: &AffineAlgebraData, k: i64) -> Result<CharacterSpace> {
    if k < 1 {
        return Err(Error::LevelNonPositive(k));
    }
    let own = Arc::new(data.clone());
    if data.is_untwisted() || data.is_a2l_twisted() {
        let ambient = s_matrix_arc(own, k)?;
        let n = ambient.basis.len();
        let t_own = (0..n).map(|i| ambient.t[(i, i)]).collect();
        return Ok(CharacterSpace { basis: ambient.basis.clone(), embedded: (0..n).collect(), ambient, t_own });
    }
    let tau = TauMap::new(data)?;
    let ambient = s_matrix_arc(tau.target.clone(), k + tau.shift)?;
    let basis = enum_weights_arc(own, k, WeightVariant::PupperK)?;
    let embedded = basis
        .weights
        .iter()
        .map(|w| {
            let img = tau.bullet_tau(w)?;
            ambient.basis.index_of(&img.finite).ok_or_else(|| Error::WeightNotInBasis(img.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let t_own = basis.weights.iter().map(|w| phase(anomaly_value(data, &w.finite, k))).collect();
    Ok(CharacterSpace { basis, ambient, embedded, t_own })
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularAction {
    #[serde(skip)]
    pub basis: WeightBasis,
    pub r: u32,
    #[serde(rename = "S")]
    pub s: ComplexMatrix,
    #[serde(rename = "T")]
    pub t: ComplexMatrix,
    #[serde(rename = "U21r")]
    pub u21r: ComplexMatrix,
    pub relations_residuals: BTreeMap<String, f64>,
    /// Fitted scalars as `[re, im]`.
    pub scalars: BTreeMap<String, [f64; 2]>,
}

/// Relative residual of `m` against the nearest multiple of `target`.
fn projective(m: &ComplexMatrix, target: &ComplexMatrix) -> (C64, f64) {
    let (c, res) = m.fit_scalar(target);
    (c, res / c.norm().max(f64::MIN_POSITIVE))
}

/// `S`, `T`, `u_21^r` on the character space of `data` at level `k`, with relation residuals.
///
/// For types with `r > a_0` the S-matrix is the transpose's; `S` and `T` are reported
/// on the ambient space, `u_21^r` is restricted to the embedded characters.
pub fn modular_action(data: &AffineAlgebraData, k: i64) -> Result<ModularAction> {
    let cs = character_space(data, k)?;
    let r = data.atype.r;
    let s = cs.ambient.s.clone();
    let t = cs.ambient.t.clone();
    let sbar = s.conj();
    let full = &(&s * &t.diag_inverse().pow(r)) * &sbar;
    let e = &cs.embedded;
    let u21r = full.submatrix(e, e);
    let u12 = ComplexMatrix::diagonal(&cs.t_own).diag_inverse();

    let mut residuals = BTreeMap::new();
    let mut scalars = BTreeMap::new();
    let n = s.rows();
    let ident = ComplexMatrix::identity(n);
    residuals.insert("S_symmetric".into(), s.max_abs_diff(&s.transpose()));
    residuals.insert("S_unitary".into(), (&s * &s.adjoint()).max_abs_diff(&ident));
    residuals.insert("T_unitary".into(), (0..n).map(|i| (t[(i, i)].norm() - 1.0).abs()).fold(0.0, f64::max));

    let outside: Vec<usize> = (0..n).filter(|i| !e.contains(i)).collect();
    let leak = if outside.is_empty() { 0.0 } else { full.submatrix(&outside, e).max_abs() };
    residuals.insert("u21r_invariant_subspace".into(), leak);

    let sexp = relation_exponent(r);
    let word = (&u12 * &u21r).pow(sexp);
    let (c, res) = projective(&word, &ComplexMatrix::identity(e.len()));
    residuals.insert(format!("(u12 u21^{r})^{sexp} = c*I"), res);
    scalars.insert(format!("(u12 u21^{r})^{sexp}"), [c.re, c.im]);

    if r == 1 {
        let conj = &s * &s;
        let (c, res) = projective(&word, &conj);
        residuals.insert("(u12 u21)^3 = c*C".into(), res);
        scalars.insert("(u12 u21)^3 vs C".into(), [c.re, c.im]);
        let tst = &(&t * &s) * &t;
        let (_, res) = projective(&full, &tst);
        residuals.insert("S T^-1 S^-1 = T S T".into(), res);
        let (_, res) = projective(&s, &(&(&u12 * &full) * &u12));
        residuals.insert("S = u12 u21 u12".into(), res);
    }
    Ok(ModularAction { basis: cs.basis, r, s, t, u21r, relations_residuals: residuals, scalars })
}

/// `X[λ][ν] = χ̊_λ(e^{−2πi(ν+ρ)/K})` over the ambient basis.
fn character_table(data: &AffineAlgebraData, basis: &WeightBasis, big_k: i64) -> Result<ComplexMatrix> {
    let rho = data.rho();
    let n = basis.len();
    let mut x = ComplexMatrix::zeros(n, n);
    for nu in 0..n {
        let xi = basis.finite(nu) + &rho;
        for lam in 0..n {
            x[(lam, nu)] = char_eval(data, basis.finite(lam), &xi, big_k)?;
        }
    }
    Ok(x)
}

/// `u_21^r` from the double sum of characters at torus points, scaled so the first
/// nonzero entry of the vacuum row is 1.
pub fn u21_action(data: &AffineAlgebraData, k: i64) -> Result<ComplexMatrix> {
    u21_action_r(data, k, data.atype.r)
}

pub fn u21_action_r(data: &AffineAlgebraData, k: i64, r: u32) -> Result<ComplexMatrix> {
    let cs = character_space(data, k)?;
    let amb = &cs.ambient;
    let adata = &amb.basis.data;
    let big_k = amb.basis.level + adata.h_dual;
    let x = character_table(adata, &amb.basis, big_k)?;
    let z = amb.basis.index_of(&FiniteWeight::zero(adata.rank)).unwrap();
    let n = amb.basis.len();
    let e = &cs.embedded;
    let weights: Vec<C64> = (0..n).map(|mu| amb.t[(mu, mu)].inv().powu(r) * amb.s[(z, mu)] * amb.s[(z, mu)]).collect();
    let mut m = ComplexMatrix::zeros(e.len(), e.len());
    for (a, &lam) in e.iter().enumerate() {
        for (b, &nu) in e.iter().enumerate() {
            m[(a, b)] = (0..n).map(|mu| weights[mu] * x[(lam, mu)] * x[(nu, mu)].conj()).sum();
        }
    }
    let v = (0..m.cols()).map(|j| m[(0, j)]).find(|z| z.norm() > 1e-9).unwrap_or(C64::new(1.0, 0.0));
    Ok(m.scale(v.inv()))
}

/// `max |LHS − RHS|` of the character identity relating `u_21` to `S`.
pub fn cor58_check(data: &AffineAlgebraData, k: i64) -> Result<f64> {
    let (lhs, rhs) = cor58_sides(data, k)?;
    Ok(lhs.max_abs_diff(&rhs))
}

fn cor58_sides(data: &AffineAlgebraData, k: i64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !data.is_untwisted() {
        return Err(Error::Unsupported(format!("{} is twisted", data.atype)));
    }
    let s = s_matrix_arc(Arc::new(data.clone()), k)?;
    let n = s.basis.len();
    let x = character_table(data, &s.basis, k + data.h_dual)?;
    let z = s.basis.index_of(&FiniteWeight::zero(data.rank)).unwrap();
    let tv: Vec<C64> = (0..n).map(|i| s.t[(i, i)]).collect();
    let lhs = ComplexMatrix::from_fn(n, n, |l, m| {
        (0..n).map(|nu| tv[nu].inv() * s.s[(z, nu)] * s.s[(z, nu)] * x[(l, nu)] * x[(m, nu)].conj()).sum()
    });
    let rhs = ComplexMatrix::from_fn(n, n, |l, m| tv[l] * tv[m] * s.s[(z, m)] * x[(l, m)]);
    Ok((lhs, rhs))
}

/// `max |Σ_ν S_{0ν}² χ̊_λ χ̊_μ^* − δ_{λμ}|`.
pub fn unitarity_analogue(data: &AffineAlgebraData, k: i64) -> Result<f64> {
    let s = s_matrix_arc(Arc::new(data.clone()), k)?;
    let n = s.basis.len();
    let x = character_table(&s.basis.data, &s.basis, k + s.basis.data.h_dual)?;
    let z = s.basis.index_of(&FiniteWeight::zero(s.basis.data.rank)).unwrap();
    let m = ComplexMatrix::from_fn(n, n, |l, mu| (0..n).map(|nu| s.s[(z, nu)] * s.s[(z, nu)] * x[(l, nu)] * x[(mu, nu)].conj()).sum());
    Ok(m.max_abs_diff(&ComplexMatrix::identity(n)))
}

/// Values of `⟨χ̊_λ, χ̊_μ⟩_r` for all characters, from the defining sum.
pub fn pairing_matrix(data: &AffineAlgebraData, k: i64, r: u32) -> Result<ComplexMatrix> {
    let cs = character_space(data, k)?;
    let amb = &cs.ambient;
    let adata = &amb.basis.data;
    let x = character_table(adata, &amb.basis, amb.basis.level + adata.h_dual)?;
    let z = amb.basis.index_of(&FiniteWeight::zero(adata.rank)).unwrap();
    let n = amb.basis.len();
    let w: Vec<C64> = (0..n).map(|nu| amb.t[(nu, nu)].inv().powu(r) * amb.s[(z, nu)] * amb.s[(z, nu)]).collect();
    let e = &cs.embedded;
    Ok(ComplexMatrix::from_fn(e.len(), e.len(), |a, b| (0..n).map(|nu| w[nu] * x[(e[a], nu)] * x[(e[b], nu)].conj()).sum()))
}

pub fn pairing_r(data: &AffineAlgebraData, k: i64, r: u32, lambda: &LevelWeight, mu: &LevelWeight) -> Result<C64> {
    let cs = character_space(data, k)?;
    let find = |w: &LevelWeight| cs.basis.index_of(&w.finite).ok_or_else(|| Error::WeightNotInBasis(w.to_string()));
    let (a, b) = (find(lambda)?, find(mu)?);
    Ok(pairing_matrix(data, k, r)?[(a, b)])
}

fn require_coroot(data: &AffineAlgebraData) -> Result<()> {
    if data.m_lattice != MLattice::CoRootImage {
        return Err(Error::Unsupported(format!("{}: closed form needs M = ν(Q̊^∨)", data.atype)));
    }
    Ok(())
}

/// Closed-form value without the scalar `v`: the phase times the partial Weyl sum
/// over `w` with `μ̄+ρ̄−w(λ̄+ρ̄)−β ∈ rM*`; zero when `μ+ρ−β` leaves the open alcove.
pub fn pairing_closed_form(
    data: &AffineAlgebraData,
    k: i64,
    r: u32,
    lambda: &FiniteWeight,
    mu: &FiniteWeight,
    beta: &FiniteWeight,
) -> Result<C64> {
    require_coroot(data)?;
    let big_k = k + data.h_dual;
    let rho = data.rho();
    let lr = lambda + &rho;
    let mr = mu + &rho;
    let shifted = &mr - beta;
    let inside = shifted.is_regular_dominant()
        && crate::weyl::fold_affine(data, big_k, crate::weyl::TranslationLattice::coroot_image(), &shifted)
            .map(|s| !s.null && s.sign == 1 && s.weight == shifted)
            .unwrap_or(false);
    if !inside {
        return Ok(C64::new(0.0, 0.0));
    }
    let li = lr.to_ints().ok_or_else(|| Error::NotIntegral(lambda.to_string()))?;
    let rk = Q::from_integer(r as i64 * big_k);
    let pre = (data.norm2(&mr) + data.norm2(&lr) - data.norm2(beta)) / (rk * 2);
    let mut sum = C64::new(0.0, 0.0);
    for (w, eps) in signed_orbit(data, &li) {
        let wv = FiniteWeight::from_ints(&w);
        let diff = &(&mr - &wv) - beta;
        if !diff.labels.iter().all(|x| (x / Q::from_integer(r as i64)).is_integer()) {
            continue;
        }
        let z = phase(-data.form(&mr, &wv) / rk);
        sum += z * eps as f64;
    }
    Ok(phase(pre) * sum)
}

/// Row basis of `M*` in Dynkin labels: rows `x` with `x·G·m_j = δ_ij`.
pub fn m_dual_basis(data: &AffineAlgebraData) -> QMat {
    let gm = qmat_mul(&data.m_basis, &data.gram);
    dual_basis(&gm)
}

/// Checks `K r |α|² ≡ 2(α, β) mod 2` on generators of `(1/r)M ∩ (1/K)M*`.
pub fn validate_beta(data: &AffineAlgebraData, k: i64, r: u32, beta: &FiniteWeight) -> Result<()> {
    let big_k = k + data.h_dual;
    let m = &data.m_basis;
    let md = m_dual_basis(data);
    let gens = intersect(&scale(m, Q::new(1, r as i64)), &scale(&md, Q::new(1, big_k)));
    for g in gens {
        let a = FiniteWeight::new(g);
        let v = Q::from_integer(big_k * r as i64) * data.norm2(&a) - data.form(&a, beta) * 2;
        if !(v / 2).is_integer() {
            return Err(Error::InvalidBeta(format!("fails on generator {a}")));
        }
    }
    Ok(())
}

/// Fitted ratio between the type's own `T` and the ambient `T` on embedded characters.
pub fn t_compatibility(data: &AffineAlgebraData, k: i64) -> Result<(C64, f64)> {
    let cs = character_space(data, k)?;
    let own = ComplexMatrix::diagonal(&cs.t_own);
    let amb = cs.ambient.t.submatrix(&cs.embedded, &cs.embedded);
    Ok(own.fit_scalar(&amb))
}
