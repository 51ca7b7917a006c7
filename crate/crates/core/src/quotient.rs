//! Quotients of Verlinde algebras by the primed affine Weyl group `W̊ ⋉ (k+h)Q̊`.

use crate::cartan::{transpose, AffineAlgebraData, MLattice};
use crate::error::{Error, Result};
use crate::fusion::{s_matrix_arc, verlinde_algebra_arc, FusionAlgebra, Product};
use crate::matrix::C64;
use crate::types::{FiniteWeight, LevelWeight, SignedWeight};
use crate::weights::{enum_weights_arc, grading_group, WeightBasis, WeightVariant};
use crate::weyl::{fold_affine, TranslationLattice};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    pub source: FusionAlgebra,
    pub basis: WeightBasis,
    products: BTreeMap<(usize, usize), Product>,
    /// Source index to `(target index, sign)`, `None` on a wall.
    pub projection: Vec<Option<(usize, i8)>>,
    pub identity: usize,
}

impl QuotientAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, i64)] {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.products.get(&key).map_or(&[], |v| v.as_slice())
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> i64 {
        self.product(i, j).iter().find(|(t, _)| *t == k).map_or(0, |(_, c)| *c)
    }

    /// `(L′_i)_{ν,μ} = c_{iμ}^ν`.
    pub fn left_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.dim();
        let mut m = vec![vec![0; n]; n];
        for mu in 0..n {
            for &(nu, c) in self.product(i, mu) {
                m[nu][mu] = c;
            }
        }
        m
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, i64)> {
        let n = self.dim();
        let mut out = vec![];
        for i in 0..n {
            for j in 0..n {
                for &(k, c) in self.product(i, j) {
                    out.push((i, j, k, c));
                }
            }
        }
        out
    }

    fn project(&self, v: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (&t, &c) in v {
            if let Some((u, s)) = self.projection[t] {
                *out.entry(u).or_insert(0) += s as i64 * c;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Source pairs where projecting the product differs from multiplying projections.
    pub fn homomorphism_violations(&self) -> Vec<(usize, usize)> {
        let n = self.source.dim();
        let mut bad = vec![];
        for i in 0..n {
            for j in i..n {
                let prod: BTreeMap<usize, i64> = self.source.product(i, j).iter().copied().collect();
                let lhs = self.project(&prod);
                let mut rhs = BTreeMap::new();
                if let (Some((a, sa)), Some((b, sb))) = (self.projection[i], self.projection[j]) {
                    for &(t, c) in self.product(a, b) {
                        *rhs.entry(t).or_insert(0) += (sa * sb) as i64 * c;
                    }
                }
                rhs.retain(|_, c| *c != 0);
                if lhs != rhs {
                    bad.push((i, j));
                }
            }
        }
        bad
    }
}

impl Serialize for QuotientAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            #[serde(rename = "type")]
            atype: String,
            level: i64,
            basis: &'a [LevelWeight],
            #[serde(rename = "N")]
            n: Vec<[i64; 4]>,
            identity: usize,
            source_basis: &'a [LevelWeight],
            source_level: i64,
            projection: Vec<Option<[i64; 2]>>,
        }
        J {
            atype: self.basis.data.atype.to_string(),
            level: self.basis.level,
            basis: &self.basis.weights,
            n: self.entries().into_iter().map(|(i, j, k, c)| [i as i64, j as i64, k as i64, c]).collect(),
            identity: self.identity,
            source_basis: &self.source.basis.weights,
            source_level: self.source.basis.level,
            projection: self.projection.iter().map(|p| p.map(|(t, s)| [t as i64, s as i64])).collect(),
        }
        .serialize(s)
    }
}

/// `F′_k`: fold `λ̄+ρ̄` into the primed alcove at `m = k+h`.
pub fn f_k_prime(data: &AffineAlgebraData, k: i64, lambda: &FiniteWeight) -> Result<SignedWeight> {
    if !data.has_two_root_lengths() {
        return Err(Error::SingleRootLength(data.atype.to_string()));
    }
    if !data.is_untwisted() {
        return Err(Error::Unsupported(format!("{} is twisted; pass its transpose", data.atype)));
    }
    if !lambda.is_dominant() || !lambda.is_integral() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    let rho = data.rho();
    let r = fold_affine(data, k + data.h, TranslationLattice { kind: MLattice::RootLattice, multiple: 1 }, &(lambda + &rho))?;
    Ok(if r.null { SignedWeight::null(lambda.clone()) } else { SignedWeight::value(&r.weight - &rho, r.sign) })
}

/// Quotient of `V_{k+h−h^∨}` for an untwisted two-length type, or of the
/// transpose when given a twisted type; `A_{2ℓ}^(2)` gives the identity quotient.
pub fn hong_quotient(data: &AffineAlgebraData, k: i64) -> Result<QuotientAlgebra> {
    if k < 1 {
        return Err(Error::LevelNonPositive(k));
    }
    if data.is_a2l_twisted() {
        let t = crate::twisted::twisted_verlinde(data, k)?;
        let alg = t.algebra;
        let n = alg.dim();
        let products = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| ((i, j), alg.product(i, j).to_vec())).collect();
        return Ok(QuotientAlgebra {
            basis: alg.basis.clone(),
            identity: alg.identity,
            projection: (0..n).map(|i| Some((i, 1))).collect(),
            products,
            source: alg,
        });
    }
    let g = if data.is_untwisted() { Arc::new(data.clone()) } else { Arc::new(transpose(data)) };
    if !g.has_two_root_lengths() {
        return Err(Error::SingleRootLength(g.atype.to_string()));
    }
    let source = verlinde_algebra_arc(g.clone(), k + g.h - g.h_dual)?;
    let basis = enum_weights_arc(g.clone(), k, WeightVariant::PrimedPk)?;
    let projection = source
        .basis
        .weights
        .iter()
        .map(|w| {
            let r = f_k_prime(&g, k, &w.finite)?;
            if r.null {
                return Ok(None);
            }
            let t = basis.index_of(&r.weight).ok_or_else(|| Error::WeightNotInBasis(r.weight.to_string()))?;
            Ok(Some((t, r.sign)))
        })
        .collect::<Result<Vec<_>>>()?;
    let src_index: Vec<usize> = basis
        .weights
        .iter()
        .map(|w| source.basis.index_of(&w.finite).ok_or_else(|| Error::WeightNotInBasis(w.to_string())))
        .collect::<Result<_>>()?;
    let n = basis.len();
    let mut products = BTreeMap::new();
    for a in 0..n {
        for b in a..n {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(t, c) in source.product(src_index[a], src_index[b]) {
                if let Some((u, s)) = projection[t] {
                    *acc.entry(u).or_insert(0) += s as i64 * c;
                }
            }
            products.insert((a, b), acc.into_iter().filter(|(_, c)| *c != 0).collect());
        }
    }
    let identity = basis.index_of(&FiniteWeight::zero(g.rank)).unwrap();
    Ok(QuotientAlgebra { source, basis, products, projection, identity })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoThirdsReport {
    /// False at odd level, where the conjecture makes no claim.
    pub applicable: bool,
    pub violations: Vec<(usize, usize, usize, i64)>,
    pub negatives: Vec<(usize, usize, usize, i64)>,
}

/// Negative constants, and those among them with at least two of `λ̄, μ̄, ν̄` in `Q̊`.
pub fn two_thirds_check(q: &QuotientAlgebra) -> TwoThirdsReport {
    let k = q.basis.level;
    if k % 2 != 0 {
        return TwoThirdsReport { applicable: false, violations: vec![], negatives: vec![] };
    }
    let g = grading_group(&q.basis.data);
    let in_root = |i: usize| g.class_map(q.basis.finite(i)).map(|c| c.iter().all(|x| *x == 0)).unwrap_or(false);
    let mut negatives = vec![];
    let mut violations = vec![];
    for (i, j, l, c) in q.entries() {
        if c < 0 {
            negatives.push((i, j, l, c));
            if [i, j, l].iter().filter(|&&x| in_root(x)).count() >= 2 {
                violations.push((i, j, l, c));
            }
        }
    }
    TwoThirdsReport { applicable: true, violations, negatives }
}

/// Recomputes every `c` by projecting unrounded Verlinde sums of the source; returns the max deviation.
pub fn projected_verlinde_deviation(q: &QuotientAlgebra) -> Result<f64> {
    let s = s_matrix_arc(q.source.basis.data.clone(), q.source.basis.level)?;
    let n = s.s.rows();
    let z = q.source.identity;
    let src: Vec<usize> = q.basis.weights.iter().map(|w| q.source.basis.index_of(&w.finite).unwrap()).collect();
    let mut dev: f64 = 0.0;
    for a in 0..q.dim() {
        for b in a..q.dim() {
            let (i, j) = (src[a], src[b]);
            let mut acc = vec![C64::new(0.0, 0.0); q.dim()];
            for (t, p) in q.projection.iter().enumerate() {
                let Some((u, sg)) = p else { continue };
                let val: C64 = (0..n).map(|f| s.s[(i, f)] * s.s[(j, f)] * s.s[(t, f)].conj() / s.s[(z, f)]).sum();
                acc[*u] += val * *sg as f64;
            }
            for (u, v) in acc.iter().enumerate() {
                dev = dev.max((v - C64::new(q.c(a, b, u) as f64, 0.0)).norm());
            }
        }
    }
    Ok(dev)
}
