//! Twisted Verlinde algebras: the maps τ and •τ, the transpose construction,
//! and the `A_{2ℓ}^(2)` family.

use crate::cartan::{affine_data, transpose, AffineAlgebraData, AffineType, Family};
use crate::error::{Error, Result};
use crate::fusion::{cross_check, kw_algebra, s_matrix_arc, verlinde_algebra_arc, FusionAlgebra, Provenance};
use crate::matrix::ComplexMatrix;
use crate::rational::{q, qi, Q};
use crate::types::{FiniteWeight, LevelWeight};
use crate::weights::{enum_weights_arc, grading_group, WeightBasis, WeightVariant};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// `τ(Λ_i) = (a_i^∨/a_i)Λ_i^t` from a twisted type with `r > a_0` to its transpose.
#[derive(Debug, Clone)]
pub struct TauMap {
    pub source: Arc<AffineAlgebraData>,
    pub target: Arc<AffineAlgebraData>,
    /// `a_i^∨/a_i` for `i = 0..=ℓ`.
    pub scale: Vec<Q>,
    /// `h^∨ − h`.
    pub shift: i64,
}

impl TauMap {
    pub fn new(source: &AffineAlgebraData) -> Result<Self> {
        if source.is_untwisted() {
            return Err(Error::UntwistedType(source.atype.to_string()));
        }
        if source.is_a2l_twisted() {
            return Err(Error::Unsupported(format!("{} is its own transpose", source.atype)));
        }
        let scale = source.labels.iter().zip(&source.dual_labels).map(|(&a, &av)| q(av, a)).collect();
        Ok(TauMap { source: Arc::new(source.clone()), target: Arc::new(transpose(source)), scale, shift: source.h_dual - source.h })
    }

    pub fn tau(&self, w: &FiniteWeight) -> FiniteWeight {
        FiniteWeight::new(w.labels.iter().zip(&self.scale[1..]).map(|(x, s)| x * s).collect())
    }

    /// `τ(λ+ρ) − ρ^t` at level `k + h^∨ − h`.
    pub fn bullet_tau(&self, lambda: &LevelWeight) -> Result<LevelWeight> {
        if !lambda.finite.is_dominant() {
            return Err(Error::NotDominant(lambda.finite.to_string()));
        }
        let rho = self.source.rho();
        let img = &self.tau(&(&lambda.finite + &rho)) - &self.target.rho();
        Ok(LevelWeight::new(img, lambda.level + self.shift))
    }
}

/// A twisted fusion algebra with the embedded image of the source characters.
#[derive(Debug, Clone)]
pub struct TwistedAlgebra {
    pub source: Arc<AffineAlgebraData>,
    pub level: i64,
    /// Characters `P^{k+}` of the source type.
    pub source_basis: WeightBasis,
    pub algebra: FusionAlgebra,
    /// Algebra basis index of each source character, in `source_basis` order.
    pub embedded: Vec<usize>,
}

impl Serialize for TwistedAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut v = serde_json::to_value(&self.algebra).map_err(serde::ser::Error::custom)?;
        let m = v.as_object_mut().unwrap();
        m.insert("source_type".into(), self.source.atype.to_string().into());
        m.insert("source_level".into(), self.level.into());
        m.insert("embedded_basis".into(), serde_json::to_value(&self.embedded).unwrap());
        m.insert("source_basis".into(), serde_json::to_value(&self.source_basis.weights).unwrap());
        v.serialize(s)
    }
}

pub fn twisted_verlinde(data: &AffineAlgebraData, k: i64) -> Result<TwistedAlgebra> {
    if data.is_untwisted() {
        return Err(Error::UntwistedType(data.atype.to_string()));
    }
    if k < 1 {
        return Err(Error::LevelNonPositive(k));
    }
    let source = Arc::new(data.clone());
    if data.is_a2l_twisted() {
        let mut algebra = kw_algebra(source.clone(), k, Provenance::A2evenQuotient)?;
        let s = s_matrix_arc(source.clone(), k)?;
        algebra.max_residue = Some(cross_check(&algebra, &s)?);
        let embedded = (0..algebra.dim()).collect();
        return Ok(TwistedAlgebra { source, level: k, source_basis: algebra.basis.clone(), algebra, embedded });
    }
    let tau = TauMap::new(data)?;
    let mut algebra = verlinde_algebra_arc(tau.target.clone(), k + tau.shift)?;
    algebra.provenance = Provenance::TransposeShift;
    let source_basis = enum_weights_arc(source.clone(), k, WeightVariant::PupperK)?;
    let embedded = source_basis
        .weights
        .iter()
        .map(|w| {
            let img = tau.bullet_tau(w)?;
            algebra.basis.index_of(&img.finite).ok_or_else(|| Error::WeightNotInBasis(img.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TwistedAlgebra { source, level: k, source_basis, algebra, embedded })
}

/// Closed-form product `χ_{aΛ}·χ_{bΛ}` for `A_2^(2)` at level `2n`.
pub fn a2_even_product(n: i64, a: i64, b: i64) -> Result<BTreeMap<i64, i64>> {
    if n < 1 || !(0..=n).contains(&a) || !(0..=n).contains(&b) {
        return Err(Error::OutOfRange(format!("n={n}, a={a}, b={b}")));
    }
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    let mid = (n + b - a).div_euclid(2);
    let mut out = BTreeMap::new();
    for i in 0..=b.min(mid) {
        *out.entry(a - b + 2 * i).or_insert(0) += 1;
    }
    for i in (mid + 1)..=b {
        *out.entry(2 * n + 1 + b - 2 * i - a).or_insert(0) -= 1;
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignTwistReport {
    pub conjecture_holds: bool,
    /// False at odd level, where only nonnegativity is checked.
    pub applicable: bool,
    pub checked: usize,
    pub counterexamples: Vec<(usize, usize, usize, i64)>,
}

/// Checks `sign N_{λμ}^ν = (−1)^{[λ]+[μ]+[ν]}` on every nonzero constant.
pub fn sign_twist_check(alg: &FusionAlgebra) -> SignTwistReport {
    let data = &alg.basis.data;
    let g = grading_group(data);
    let even = alg.basis.level % 2 == 0;
    let class = |i: usize| -> i64 { g.class_map(alg.basis.finite(i)).map(|c| c.iter().sum()).unwrap_or(0) };
    let mut counterexamples = vec![];
    let mut checked = 0;
    for (i, j, k, n) in alg.entries() {
        if i > j {
            continue;
        }
        checked += 1;
        let expected = if even && (class(i) + class(j) + class(k)) % 2 == 1 { -1 } else { 1 };
        if n.signum() != expected {
            counterexamples.push((i, j, k, n));
        }
    }
    SignTwistReport { conjecture_holds: counterexamples.is_empty(), applicable: even, checked, counterexamples }
}

pub fn a2l_type(l: usize) -> AffineType {
    AffineType::new(Family::A, 2 * l as u32, 2)
}

#[derive(Debug, Clone, Serialize)]
pub struct OddLevelMatch {
    /// `S_A[i][j] ≈ S_C[π(i)][π(j)]`.
    pub permutation: Vec<usize>,
    pub max_deviation: f64,
}

/// Finds `π` with `a[i][j] ≈ b[π(i)][π(j)]` by column matching with backtracking.
pub fn match_permutation(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Option<Vec<usize>> {
    let n = a.rows();
    if n != b.rows() {
        return None;
    }
    fn rec(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let j = perm.len();
        if j == a.rows() {
            return true;
        }
        for c in 0..a.rows() {
            if used[c] {
                continue;
            }
            let fits = (0..j).all(|i| (a[(i, j)] - b[(perm[i], c)]).norm() < tol && (a[(j, i)] - b[(c, perm[i])]).norm() < tol)
                && (a[(j, j)] - b[(c, c)]).norm() < tol;
            if fits {
                used[c] = true;
                perm.push(c);
                if rec(a, b, tol, perm, used) {
                    return true;
                }
                perm.pop();
                used[c] = false;
            }
        }
        false
    }
    let mut perm = vec![];
    let mut used = vec![false; n];
    rec(a, b, tol, &mut perm, &mut used).then_some(perm)
}

/// S-matrix of `A_{2ℓ}^(2)` at level `2k'+1` against `C_ℓ^(1)` at level `k'`.
pub fn odd_level_c_match(l: usize, kp: i64) -> Result<OddLevelMatch> {
    let a = affine_data(a2l_type(l))?;
    let c = affine_data(AffineType::untwisted(if l == 1 { Family::A } else { Family::C }, l as u32))?;
    let sa = s_matrix_arc(Arc::new(a), 2 * kp + 1)?;
    let sc = s_matrix_arc(Arc::new(c), kp)?;
    let perm =
        match_permutation(&sa.s, &sc.s, 1e-8).ok_or_else(|| Error::Unsupported(format!("no matching permutation for l={l}, k'={kp}")))?;
    let n = perm.len();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((sa.s[(i, j)] - sc.s[(perm[i], perm[j])]).norm());
        }
    }
    Ok(OddLevelMatch { permutation: perm, max_deviation: dev })
}

/// Isometry defect `max |(u,v) − (τu,τv)^t|` over the given pairs.
pub fn tau_isometry_defect(map: &TauMap, pairs: &[(FiniteWeight, FiniteWeight)]) -> Q {
    pairs
        .iter()
        .map(|(u, v)| {
            let d = map.source.form(u, v) - map.target.form(&map.tau(u), &map.tau(v));
            if d < qi(0) {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap_or(qi(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(s: &str) -> AffineAlgebraData {
        affine_data(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn two_level_instance() {
        let p = a2_even_product(2, 2, 2).unwrap();
        assert_eq!(p, [(0, 1), (1, -1), (2, 1)].into());
        assert_eq!(a2_even_product(3, 0, 0).unwrap(), [(0, 1)].into());
        assert!(a2_even_product(2, 3, 0).is_err());
    }

    #[test]
    fn a22_level4() {
        let t = twisted_verlinde(&data("A2~2"), 4).unwrap();
        assert_eq!(t.algebra.provenance, Provenance::A2evenQuotient);
        assert_eq!(t.algebra.n(2, 2, 0), 1);
        assert_eq!(t.algebra.n(2, 2, 2), 1);
        assert_eq!(t.algebra.n(2, 2, 1), -1);
    }

    #[test]
    fn vacuum_image() {
        let tau = TauMap::new(&data("A5~2")).unwrap();
        let img = tau.bullet_tau(&LevelWeight::new(FiniteWeight::zero(3), 1)).unwrap();
        assert_eq!(img, LevelWeight::new(FiniteWeight::from_ints(&[0, 0, 1]), 2));
    }

    #[test]
    fn untwisted_rejected() {
        assert!(matches!(twisted_verlinde(&data("A2~1"), 1), Err(Error::UntwistedType(_))));
        assert!(matches!(TauMap::new(&data("B3~1")), Err(Error::UntwistedType(_))));
    }

    #[test]
    fn odd_level_matches_c() {
        let r = odd_level_c_match(1, 2).unwrap();
        assert!(r.max_deviation < 1e-9);
    }
}
