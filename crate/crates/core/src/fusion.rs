//! Untwisted Verlinde algebras: Kac-Walton fusion rules, the Kac-Peterson S-matrix,
//! and the Verlinde formula.

use crate::cartan::{AffineAlgebraData, MLattice};
use crate::chars::{alternating_sum, tensor_int, PhaseTable};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::rational::{det, qi, qmat_mul, to_f64, transpose, Q};
use crate::types::{FiniteWeight, LevelWeight};
use crate::weights::{enum_weights_arc, grading_group, WeightBasis, WeightVariant};
use crate::weyl::{fold_int, signed_orbit, Wall};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    KacWalton,
    VerlindeNumeric,
    TransposeShift,
    A2evenQuotient,
}

/// Product of basis elements as `(target index, coefficient)` pairs.
pub type Product = Vec<(usize, i64)>;

#[derive(Debug, Clone)]
pub struct FusionAlgebra {
    pub basis: WeightBasis,
    /// Keyed by `(i, j)` with `i ≤ j`.
    products: BTreeMap<(usize, usize), Product>,
    pub identity: usize,
    pub provenance: Provenance,
    /// Largest `|N − round(N)|` seen by a numeric Verlinde evaluation, if any ran.
    pub max_residue: Option<f64>,
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

impl FusionAlgebra {
    pub fn from_products(basis: WeightBasis, products: BTreeMap<(usize, usize), Product>, provenance: Provenance) -> Self {
        let identity = basis.index_of(&FiniteWeight::zero(basis.data.rank)).expect("basis must contain the vacuum");
        FusionAlgebra { basis, products, identity, provenance, max_residue: None }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, i64)] {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.products.get(&key).map_or(&[], |v| v.as_slice())
    }

    /// `N_{ij}^k`.
    pub fn n(&self, i: usize, j: usize, k: usize) -> i64 {
        self.product(i, j).iter().find(|(t, _)| *t == k).map_or(0, |(_, c)| *c)
    }

    /// `(L_i)_{ν,μ} = N_{iμ}^ν`.
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

    /// Every nonzero `(i, j, k, N)` over ordered pairs.
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

    pub fn same_tensor(&self, other: &FusionAlgebra) -> bool {
        self.dim() == other.dim() && self.products == other.products
    }

    /// Triples `(i, j, l)` where `(x_i x_j) x_l ≠ x_i (x_j x_l)`.
    pub fn associativity_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mul = |a: &BTreeMap<usize, i64>, l: usize| -> BTreeMap<usize, i64> {
            let mut out = BTreeMap::new();
            for (&s, &c) in a {
                for &(t, d) in self.product(s, l) {
                    *out.entry(t).or_insert(0) += c * d;
                }
            }
            out.retain(|_, v| *v != 0);
            out
        };
        let mut bad = vec![];
        for i in 0..n {
            for j in 0..n {
                let ij: BTreeMap<usize, i64> = self.product(i, j).iter().copied().collect();
                for l in 0..n {
                    let left = mul(&ij, l);
                    let jl: BTreeMap<usize, i64> = self.product(j, l).iter().copied().collect();
                    let right = mul(&jl, i);
                    if left != right {
                        bad.push((i, j, l));
                    }
                }
            }
        }
        bad
    }

    pub fn is_nonnegative(&self) -> bool {
        self.products.values().flatten().all(|(_, c)| *c >= 0)
    }
}

#[derive(Serialize)]
struct AlgebraJson<'a> {
    #[serde(rename = "type")]
    atype: String,
    level: i64,
    basis: &'a [LevelWeight],
    #[serde(rename = "N")]
    n: Vec<[i64; 4]>,
    identity: usize,
    provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_residue: Option<f64>,
}

impl Serialize for FusionAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraJson {
            atype: self.basis.data.atype.to_string(),
            level: self.basis.level,
            basis: &self.basis.weights,
            n: self.entries().into_iter().map(|(i, j, k, c)| [i as i64, j as i64, k as i64, c]).collect(),
            identity: self.identity,
            provenance: self.provenance,
            max_residue: self.max_residue.map(crate::serial::round12),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone)]
pub struct SMatrixResult {
    pub basis: WeightBasis,
    pub s: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Serialize for SMatrixResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            basis: &'a [LevelWeight],
            #[serde(rename = "S")]
            s: &'a ComplexMatrix,
            #[serde(rename = "T")]
            t: &'a ComplexMatrix,
        }
        J { basis: &self.basis.weights, s: &self.s, t: &self.t }.serialize(s)
    }
}

fn require_coroot_geometry(data: &AffineAlgebraData) -> Result<()> {
    if data.m_lattice != MLattice::CoRootImage {
        return Err(Error::Unsupported(format!("{} needs the transpose construction", data.atype)));
    }
    Ok(())
}

/// `|M*/KM| = K^ℓ·det(Gram_M)`.
pub fn lattice_quotient_order(data: &AffineAlgebraData, big_k: i64) -> Q {
    let gm = qmat_mul(&qmat_mul(&data.m_basis, &data.gram), &transpose(&data.m_basis));
    det(&gm) * qi(big_k).pow(data.rank as i32)
}

pub fn s_matrix(data: &AffineAlgebraData, k: i64) -> Result<SMatrixResult> {
    s_matrix_arc(Arc::new(data.clone()), k)
}

pub(crate) fn s_matrix_arc(data: Arc<AffineAlgebraData>, k: i64) -> Result<SMatrixResult> {
    require_coroot_geometry(&data)?;
    let basis = enum_weights_arc(data.clone(), k, WeightVariant::Pk)?;
    let big_k = k + data.h_dual;
    let n = basis.len();
    let table = PhaseTable::new(data.form_denominator() * big_k);
    let shifted: Vec<Vec<i64>> = basis.weights.iter().map(|w| w.finite.to_ints().unwrap().iter().map(|x| x + 1).collect()).collect();
    let orbits: Vec<Vec<(Vec<i64>, i8)>> = shifted.par_iter().map(|v| signed_orbit(&data, v)).collect();
    let rows: Vec<Vec<i64>> = shifted.iter().map(|v| data.form_row(v)).collect();
    let npos = data.positive_roots.len();
    let ipow = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][npos % 4];
    let pref = ipow / to_f64(&lattice_quotient_order(&data, big_k)).sqrt();
    let entries: Vec<(usize, usize, C64)> =
        pair_list(n).into_par_iter().map(|(i, j)| (i, j, pref * alternating_sum(&orbits[j], &rows[i], &table))).collect();
    let mut s = ComplexMatrix::zeros(n, n);
    for (i, j, z) in entries {
        s[(i, j)] = z;
        s[(j, i)] = z;
    }
    let t =
        ComplexMatrix::diagonal(&basis.weights.iter().map(|w| crate::modular::phase(t_exponent(&data, &w.finite, k))).collect::<Vec<_>>());
    Ok(SMatrixResult { basis, s, t })
}

/// Exponent of the diagonal `T` entry: `m_λ`, plus `[λ]/2` for `A_{2ℓ}^(2)` at even level,
/// where the characters of the nontrivial `P̊/Q̊` class carry half-integral powers of `q`.
pub(crate) fn t_exponent(data: &AffineAlgebraData, finite: &FiniteWeight, k: i64) -> Q {
    let m = crate::modular::anomaly_value(data, finite, k);
    if !(data.is_a2l_twisted() && k % 2 == 0) {
        return m;
    }
    let class: i64 = grading_group(data).class_map(finite).map_or(0, |c| c.iter().sum());
    m + Q::new(class, 2)
}

/// Kac-Walton product of two basis weights as index/coefficient pairs.
pub(crate) fn kw_product(data: &AffineAlgebraData, wall: &Wall, big_k: i64, basis: &WeightBasis, a: &[i64], b: &[i64]) -> Product {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for (nu, c) in tensor_int(data, a, b) {
        let v: Vec<i64> = nu.iter().map(|x| x + 1).collect();
        if let Some((sign, u)) = fold_int(data, wall, big_k, v) {
            let w: Vec<i64> = u.iter().map(|x| x - 1).collect();
            let idx = basis.index_of(&FiniteWeight::from_ints(&w)).expect("folded weight must be in the alcove basis");
            *acc.entry(idx).or_insert(0) += sign as i64 * c;
        }
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

pub fn fusion_kw(data: &AffineAlgebraData, k: i64, lambda: &LevelWeight, mu: &LevelWeight) -> Result<BTreeMap<FiniteWeight, i64>> {
    require_coroot_geometry(data)?;
    let data = Arc::new(data.clone());
    let basis = enum_weights_arc(data.clone(), k, WeightVariant::Pk)?;
    let find = |w: &LevelWeight| {
        if w.level != k {
            return Err(Error::WeightNotInBasis(w.to_string()));
        }
        basis.index_of(&w.finite).ok_or_else(|| Error::WeightNotInBasis(w.to_string()))
    };
    let (i, j) = (find(lambda)?, find(mu)?);
    let wall = Wall::new(&data, MLattice::CoRootImage);
    let a = basis.finite(i).to_ints().unwrap();
    let b = basis.finite(j).to_ints().unwrap();
    Ok(kw_product(&data, &wall, k + data.h_dual, &basis, &a, &b).into_iter().map(|(t, c)| (basis.finite(t).clone(), c)).collect())
}

/// Every product by Kac-Walton, in parallel over pairs.
pub(crate) fn kw_algebra(data: Arc<AffineAlgebraData>, k: i64, provenance: Provenance) -> Result<FusionAlgebra> {
    require_coroot_geometry(&data)?;
    let basis = enum_weights_arc(data.clone(), k, WeightVariant::Pk)?;
    let wall = Wall::new(&data, MLattice::CoRootImage);
    let big_k = k + data.h_dual;
    let ints: Vec<Vec<i64>> = basis.weights.iter().map(|w| w.finite.to_ints().unwrap()).collect();
    let pairs = pair_list(basis.len());
    let prods: Vec<Product> = pairs.par_iter().map(|&(i, j)| kw_product(&data, &wall, big_k, &basis, &ints[i], &ints[j])).collect();
    let products = pairs.into_iter().zip(prods).collect();
    Ok(FusionAlgebra::from_products(basis, products, provenance))
}

/// Numeric `N_{ij}^k` for all `k`, with the largest rounding residue.
fn verlinde_pair(s: &ComplexMatrix, inv0: &[C64], i: usize, j: usize) -> (Vec<i64>, f64, Vec<f64>) {
    let n = s.rows();
    let w: Vec<C64> = (0..n).map(|f| s[(i, f)] * s[(j, f)] * inv0[f]).collect();
    let mut out = vec![0; n];
    let mut raw = vec![0.0; n];
    let mut res: f64 = 0.0;
    for (k, o) in out.iter_mut().enumerate() {
        let z: C64 = (0..n).map(|f| w[f] * s[(k, f)].conj()).sum();
        let r = z.re.round();
        res = res.max((z - C64::new(r, 0.0)).norm());
        *o = r as i64;
        raw[k] = z.re;
    }
    (out, res, raw)
}

fn inverse_vacuum_row(s: &SMatrixResult) -> Vec<C64> {
    let z = s.basis.index_of(&FiniteWeight::zero(s.basis.data.rank)).unwrap();
    (0..s.s.rows()).map(|f| s.s[(z, f)].inv()).collect()
}

pub fn fusion_verlinde(s: &SMatrixResult) -> Result<FusionAlgebra> {
    let inv0 = inverse_vacuum_row(s);
    let pairs = pair_list(s.basis.len());
    let vals: Vec<(Vec<i64>, f64, Vec<f64>)> = pairs.par_iter().map(|&(i, j)| verlinde_pair(&s.s, &inv0, i, j)).collect();
    let mut products = BTreeMap::new();
    let mut max_res: f64 = 0.0;
    for (&(i, j), (row, res, raw)) in pairs.iter().zip(vals) {
        if res > 1e-6 {
            let k = (0..row.len()).max_by(|&a, &b| (raw[a] - raw[a].round()).abs().total_cmp(&(raw[b] - raw[b].round()).abs())).unwrap();
            return Err(Error::NearHalfInteger { i, j, k, value: raw[k] });
        }
        max_res = max_res.max(res);
        products.insert((i, j), row.into_iter().enumerate().filter(|(_, c)| *c != 0).collect());
    }
    let mut alg = FusionAlgebra::from_products(s.basis.clone(), products, Provenance::VerlindeNumeric);
    alg.max_residue = Some(max_res);
    Ok(alg)
}

/// Above this many Weyl-sum terms the numeric cross-check is skipped.
const CROSS_CHECK_BUDGET: u64 = 50_000_000;

/// Compares every tenth pair against the Verlinde formula; returns the max residue.
pub(crate) fn cross_check(alg: &FusionAlgebra, s: &SMatrixResult) -> Result<f64> {
    let inv0 = inverse_vacuum_row(s);
    let pairs: Vec<(usize, usize)> = pair_list(alg.dim()).into_iter().step_by(10).collect();
    let checked: Vec<(usize, usize, Vec<i64>, f64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (row, res, _) = verlinde_pair(&s.s, &inv0, i, j);
            (i, j, row, res)
        })
        .collect();
    let mut max_res: f64 = 0.0;
    for (i, j, row, res) in checked {
        for (k, &num) in row.iter().enumerate() {
            let exact = alg.n(i, j, k);
            if exact != num || res > 1e-6 {
                return Err(Error::VerlindeMismatch { i, j, k, exact, numeric: num });
            }
        }
        max_res = max_res.max(res);
    }
    Ok(max_res)
}

pub fn verlinde_algebra(data: &AffineAlgebraData, k: i64) -> Result<FusionAlgebra> {
    verlinde_algebra_arc(Arc::new(data.clone()), k)
}

pub(crate) fn verlinde_algebra_arc(data: Arc<AffineAlgebraData>, k: i64) -> Result<FusionAlgebra> {
    if !data.is_untwisted() {
        return Err(Error::Unsupported(format!("{} is twisted; use twisted_verlinde", data.atype)));
    }
    let mut alg = kw_algebra(data.clone(), k, Provenance::KacWalton)?;
    let cost = crate::weyl::weyl_group_order(&data) * (alg.dim() as u64).pow(2);
    if cost <= CROSS_CHECK_BUDGET {
        let s = s_matrix_arc(data, k)?;
        alg.max_residue = Some(cross_check(&alg, &s)?);
    }
    Ok(alg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradingReport {
    pub holds: bool,
    pub violations: Vec<(usize, usize, usize)>,
    /// Number of basis weights in each class.
    pub blocks: BTreeMap<Vec<i64>, usize>,
}

pub fn check_grading(alg: &FusionAlgebra) -> GradingReport {
    let g = grading_group(&alg.basis.data);
    let classes: Vec<Vec<i64>> = alg.basis.weights.iter().map(|w| g.class_map(&w.finite).expect("integral basis")).collect();
    let mut blocks = BTreeMap::new();
    for c in &classes {
        *blocks.entry(c.clone()).or_insert(0) += 1;
    }
    let mut violations = vec![];
    for (i, j, k, _) in alg.entries() {
        if i <= j && g.add(&classes[i], &classes[j]) != classes[k] {
            violations.push((i, j, k));
        }
    }
    GradingReport { holds: violations.is_empty(), violations, blocks }
}

/// Column of `S` at the vacuum.
pub fn vacuum_column(s: &SMatrixResult) -> Vec<C64> {
    let z = s.basis.index_of(&FiniteWeight::zero(s.basis.data.rank)).unwrap();
    (0..s.s.rows()).map(|i| s.s[(i, z)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::affine_data;

    fn data(s: &str) -> AffineAlgebraData {
        affine_data(s.parse().unwrap()).unwrap()
    }

    fn lw(v: &[i64], k: i64) -> LevelWeight {
        LevelWeight::new(FiniteWeight::from_ints(v), k)
    }

    #[test]
    fn a1_level1_s() {
        let s = s_matrix(&data("A1~1"), 1).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((s.s[(0, 0)] - C64::new(r, 0.0)).norm() < 1e-12);
        assert!((s.s[(1, 1)] + C64::new(r, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn a2_adjoint_square() {
        let d = data("A2~1");
        let p = fusion_kw(&d, 2, &lw(&[1, 1], 2), &lw(&[1, 1], 2)).unwrap();
        let expect: BTreeMap<_, _> = [(FiniteWeight::zero(2), 1), (FiniteWeight::from_ints(&[1, 1]), 1)].into();
        assert_eq!(p, expect);
    }

    #[test]
    fn b3_spinor_square() {
        let d = data("B3~1");
        let p = fusion_kw(&d, 2, &lw(&[0, 0, 1], 2), &lw(&[0, 0, 1], 2)).unwrap();
        let expect: BTreeMap<_, _> = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 2]].iter().map(|w| (FiniteWeight::from_ints(w), 1)).collect();
        assert_eq!(p, expect);
    }

    #[test]
    fn weight_outside_basis() {
        let d = data("A2~1");
        assert!(matches!(fusion_kw(&d, 1, &lw(&[2, 0], 1), &lw(&[0, 0], 1)), Err(Error::WeightNotInBasis(_))));
    }

    #[test]
    fn a1_level1_verlinde() {
        let alg = fusion_verlinde(&s_matrix(&data("A1~1"), 1).unwrap()).unwrap();
        assert_eq!(alg.n(1, 1, 0), 1);
        assert_eq!(alg.n(1, 1, 1), 0);
    }

    #[test]
    fn grading_blocks() {
        let r = check_grading(&verlinde_algebra(&data("A2~1"), 2).unwrap());
        assert!(r.holds);
        assert_eq!(r.blocks.values().copied().collect::<Vec<_>>(), vec![2, 2, 2]);
        let r = check_grading(&verlinde_algebra(&data("B3~1"), 2).unwrap());
        assert!(r.holds);
        assert_eq!(r.blocks.values().copied().collect::<Vec<_>>(), vec![5, 2]);
        let r = check_grading(&verlinde_algebra(&data("E8~1"), 1).unwrap());
        assert!(r.holds && r.blocks.len() == 1);
    }

    #[test]
    fn identity_left_matrix() {
        let alg = verlinde_algebra(&data("G2~1"), 2).unwrap();
        let l = alg.left_matrix(alg.identity);
        for (i, row) in l.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, (i == j) as i64);
            }
        }
    }
}
