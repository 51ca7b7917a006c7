//! Level-k weight sets and the grading group `P̊/Q̊`.

use crate::cartan::{AffineAlgebraData, MLattice};
use crate::error::{Error, Result};
use crate::lattice::smith;
use crate::rational::{q, qi, Q};
use crate::types::{FiniteWeight, LevelWeight};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightVariant {
    /// `P_k`: `(λ, α) ∈ Z` for `α ∈ M`.
    Pk,
    /// `P^k`: integral Dynkin labels.
    PupperK,
    /// Primed weights: integral with `⟨λ, θ_s^∨⟩ ≤ k`.
    PrimedPk,
}

#[derive(Debug, Clone)]
pub struct WeightBasis {
    pub data: Arc<AffineAlgebraData>,
    pub level: i64,
    pub variant: WeightVariant,
    pub weights: Vec<LevelWeight>,
    index: HashMap<FiniteWeight, usize>,
}

impl WeightBasis {
    pub fn new(data: Arc<AffineAlgebraData>, level: i64, variant: WeightVariant, weights: Vec<LevelWeight>) -> Self {
        let index = weights.iter().enumerate().map(|(i, w)| (w.finite.clone(), i)).collect();
        WeightBasis { data, level, variant, weights, index }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn index_of(&self, w: &FiniteWeight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn finite(&self, i: usize) -> &FiniteWeight {
        &self.weights[i].finite
    }

    pub fn finite_weights(&self) -> Vec<FiniteWeight> {
        self.weights.iter().map(|w| w.finite.clone()).collect()
    }
}

fn enumerate(rank: usize, steps: &[Q], costs: &[Q], budget: Q, ok: &dyn Fn(&[Q]) -> bool) -> Vec<FiniteWeight> {
    fn rec(i: usize, cur: &mut Vec<Q>, left: Q, steps: &[Q], costs: &[Q], ok: &dyn Fn(&[Q]) -> bool, out: &mut Vec<FiniteWeight>) {
        if i == cur.len() {
            if ok(cur) {
                out.push(FiniteWeight::new(cur.clone()));
            }
            return;
        }
        let mut x = Q::zero();
        while x * costs[i] <= left {
            cur[i] = x;
            rec(i + 1, cur, left - x * costs[i], steps, costs, ok, out);
            x += steps[i];
        }
        cur[i] = Q::zero();
    }
    let mut out = vec![];
    rec(0, &mut vec![Q::zero(); rank], budget, steps, costs, ok, &mut out);
    out.sort();
    out
}

pub fn enum_weights(data: &AffineAlgebraData, k: i64, variant: WeightVariant) -> Result<WeightBasis> {
    enum_weights_arc(Arc::new(data.clone()), k, variant)
}

pub fn enum_weights_arc(data: Arc<AffineAlgebraData>, k: i64, variant: WeightVariant) -> Result<WeightBasis> {
    if k < 1 {
        return Err(Error::LevelNonPositive(k));
    }
    let l = data.rank;
    let dual: Vec<Q> = data.dual_labels[1..].iter().map(|&a| qi(a)).collect();
    let finite = match variant {
        WeightVariant::Pk => {
            let steps: Vec<Q> = (1..=l)
                .map(|i| match data.m_lattice {
                    MLattice::CoRootImage => qi(1),
                    MLattice::RootLattice => q(data.labels[i], data.dual_labels[i]),
                })
                .collect();
            enumerate(l, &steps, &dual, qi(k), &|_| true)
        }
        WeightVariant::PupperK => enumerate(l, &vec![qi(1); l], &dual, qi(k), &|_| true),
        WeightVariant::PrimedPk => {
            let ts: Vec<Q> = data.theta_short_root().coroot.iter().map(|&c| qi(c)).collect();
            enumerate(l, &vec![qi(1); l], &ts, qi(k), &|_| true)
        }
    };
    let weights = finite.into_iter().map(|f| LevelWeight::new(f, k)).collect();
    Ok(WeightBasis::new(data, k, variant, weights))
}

/// `P̊/Q̊` with a class map normalized so cyclic groups send the first generating `Λ̄_j` to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingGroup {
    pub invariant_factors: Vec<i64>,
    rows: Vec<Vec<i64>>,
}

impl GradingGroup {
    pub fn order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn class_of_ints(&self, v: &[i64]) -> Vec<i64> {
        self.rows.iter().zip(&self.invariant_factors).map(|(r, d)| r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>().mod_floor(d)).collect()
    }

    pub fn class_map(&self, w: &FiniteWeight) -> Result<Vec<i64>> {
        let v = w.to_ints().ok_or_else(|| Error::NonIntegralWeight(w.to_string()))?;
        Ok(self.class_of_ints(&v))
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).zip(&self.invariant_factors).map(|((x, y), d)| (x + y).mod_floor(d)).collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.invariant_factors.len()]
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.mod_floor(&m))
}

pub fn grading_group(data: &AffineAlgebraData) -> GradingGroup {
    let snf = smith(&data.finite_cartan);
    let mut factors = vec![];
    let mut rows = vec![];
    for (row, d) in snf.u.iter().zip(&snf.diag) {
        if *d > 1 {
            factors.push(*d);
            rows.push(row.clone());
        }
    }
    if factors.len() == 1 {
        let d = factors[0];
        let gen = (0..data.rank).find_map(|j| mod_inverse(rows[0][j].mod_floor(&d), d));
        if let Some(inv) = gen {
            rows[0] = rows[0].iter().map(|x| (x * inv).mod_floor(&d)).collect();
        }
    }
    GradingGroup { invariant_factors: factors, rows }
}

/// For `A_{2ℓ}^(2)` the finite parts at levels `2n` and `2n+1` coincide.
pub fn lemma43_check(l: usize, n: i64) -> Result<bool> {
    a2l_levels_agree(l, 2 * n, 2 * n + 1)
}

pub fn a2l_levels_agree(l: usize, k1: i64, k2: i64) -> Result<bool> {
    let d = crate::cartan::affine_data(crate::cartan::AffineType::new(crate::cartan::Family::A, 2 * l as u32, 2))?;
    let a = enum_weights(&d, k1, WeightVariant::Pk)?.finite_weights();
    let b = enum_weights(&d, k2, WeightVariant::Pk)?.finite_weights();
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::affine_data;

    fn data(s: &str) -> AffineAlgebraData {
        affine_data(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn a2_level2_has_six() {
        let b = enum_weights(&data("A2~1"), 2, WeightVariant::Pk).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.finite(0), &FiniteWeight::zero(2));
    }

    #[test]
    fn a22_even_level() {
        let d = data("A2~2");
        for n in 1..=6 {
            let b = enum_weights(&d, 2 * n, WeightVariant::Pk).unwrap();
            let expect: Vec<FiniteWeight> = (0..=n).map(|m| FiniteWeight::from_ints(&[m])).collect();
            assert_eq!(b.finite_weights(), expect);
        }
    }

    #[test]
    fn a1_level1() {
        let b = enum_weights(&data("A1~1"), 1, WeightVariant::Pk).unwrap();
        assert_eq!(b.finite_weights(), vec![FiniteWeight::from_ints(&[0]), FiniteWeight::from_ints(&[1])]);
        assert!(matches!(enum_weights(&data("A1~1"), 0, WeightVariant::Pk), Err(Error::LevelNonPositive(0))));
    }

    #[test]
    fn twisted_pk_has_rational_labels() {
        let b = enum_weights(&data("A5~2"), 1, WeightVariant::Pk).unwrap();
        let half = FiniteWeight::new(vec![qi(0), qi(0), q(1, 2)]);
        assert_eq!(b.finite_weights(), vec![FiniteWeight::zero(3), half, FiniteWeight::fundamental(3, 1)]);
        let upper = enum_weights(&data("A5~2"), 1, WeightVariant::PupperK).unwrap();
        assert_eq!(upper.finite_weights(), vec![FiniteWeight::zero(3), FiniteWeight::fundamental(3, 1)]);
    }

    #[test]
    fn grading_groups() {
        let g = grading_group(&data("A2~1"));
        assert_eq!(g.invariant_factors, vec![3]);
        assert_eq!(g.class_map(&FiniteWeight::fundamental(2, 1)).unwrap(), vec![1]);
        let g = grading_group(&data("B3~1"));
        assert_eq!(g.invariant_factors, vec![2]);
        assert_eq!(g.class_map(&FiniteWeight::fundamental(3, 3)).unwrap(), vec![1]);
        assert_eq!(g.class_map(&FiniteWeight::fundamental(3, 1)).unwrap(), vec![0]);
        assert!(grading_group(&data("E8~1")).is_trivial());
        assert_eq!(grading_group(&data("D4~1")).invariant_factors, vec![2, 2]);
        let g = grading_group(&data("A2~1"));
        assert!(matches!(g.class_map(&FiniteWeight::new(vec![q(1, 2), qi(0)])), Err(Error::NonIntegralWeight(_))));
    }

    #[test]
    fn lemma43_examples() {
        assert!(lemma43_check(1, 1).unwrap());
        assert!(lemma43_check(2, 3).unwrap());
        assert!(!a2l_levels_agree(1, 2, 4).unwrap());
    }
}
