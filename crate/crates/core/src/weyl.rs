//! Finite Weyl group action, dominance reduction and affine folding.

use crate::cartan::{AffineAlgebraData, MLattice};
use crate::error::{Error, Result};
use crate::rational::{lcm_denoms, Q};
use crate::types::{FiniteWeight, SignedWeight};
use std::collections::HashMap;

/// `s_i`, `i` 1-based.
pub fn reflect(data: &AffineAlgebraData, i: usize, w: &FiniteWeight) -> FiniteWeight {
    let c = w.labels[i - 1];
    let mut out = w.clone();
    for j in 0..data.rank {
        out.labels[j] -= c * Q::from_integer(data.finite_cartan[j][i - 1]);
    }
    out
}

pub(crate) fn reflect_int(data: &AffineAlgebraData, i: usize, v: &mut [i64]) {
    let c = v[i - 1];
    if c == 0 {
        return;
    }
    for (j, x) in v.iter_mut().enumerate() {
        *x -= c * data.finite_cartan[j][i - 1];
    }
}

pub(crate) struct Reduction {
    pub sign: i8,
    pub length: usize,
    pub wall: bool,
}

/// Reflect at the most negative label until dominant.
pub(crate) fn dominate(data: &AffineAlgebraData, v: &mut [i64], stop_on_wall: bool) -> Reduction {
    let mut length = 0;
    loop {
        let mut best: Option<usize> = None;
        for (j, &x) in v.iter().enumerate() {
            if x == 0 && stop_on_wall {
                return Reduction { sign: if length % 2 == 0 { 1 } else { -1 }, length, wall: true };
            }
            if x < 0 && best.is_none_or(|b| x < v[b]) {
                best = Some(j);
            }
        }
        match best {
            Some(j) => {
                reflect_int(data, j + 1, v);
                length += 1;
            }
            None => return Reduction { sign: if length % 2 == 0 { 1 } else { -1 }, length, wall: false },
        }
    }
}

fn scaled_ints(w: &FiniteWeight) -> (Vec<i64>, i64) {
    let d = lcm_denoms(&w.labels);
    (w.labels.iter().map(|x| (x * d).to_integer()).collect(), d)
}

fn unscale(v: &[i64], d: i64) -> FiniteWeight {
    FiniteWeight::new(v.iter().map(|&x| Q::new(x, d)).collect())
}

/// Signed dominant representative and the length of the reducing word.
pub fn to_dominant(data: &AffineAlgebraData, w: &FiniteWeight) -> (SignedWeight, usize) {
    let (mut v, d) = scaled_ints(w);
    let r = dominate(data, &mut v, true);
    let weight = unscale(&v, d);
    let sw = if r.wall { SignedWeight::null(weight) } else { SignedWeight::value(weight, r.sign) };
    (sw, r.length)
}

/// Dominant weight in the orbit, ignoring stabilizers.
pub fn dominant_representative(data: &AffineAlgebraData, w: &FiniteWeight) -> FiniteWeight {
    let (mut v, d) = scaled_ints(w);
    dominate(data, &mut v, false);
    unscale(&v, d)
}

/// Translation lattice `c·L` with `L` one of `ν(Q̊^∨)` or `Q̊`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslationLattice {
    pub kind: MLattice,
    pub multiple: i64,
}

impl TranslationLattice {
    pub fn coroot_image() -> Self {
        TranslationLattice { kind: MLattice::CoRootImage, multiple: 1 }
    }

    pub fn root_lattice() -> Self {
        TranslationLattice { kind: MLattice::RootLattice, multiple: 1 }
    }
}

/// The affine wall `f(v) = m`, `f(v) = scale·⟨v, ψ^∨⟩`.
pub(crate) struct Wall {
    psi: Vec<i64>,
    coroot: Vec<i64>,
    scale_num: i64,
    scale_den: i64,
}

impl Wall {
    pub fn new(data: &AffineAlgebraData, kind: MLattice) -> Self {
        match kind {
            MLattice::CoRootImage => {
                let t = data.theta_root();
                let s = t.norm / 2;
                Wall { psi: t.labels.clone(), coroot: t.coroot.clone(), scale_num: *s.numer(), scale_den: *s.denom() }
            }
            MLattice::RootLattice => {
                let t = data.theta_short_root();
                Wall { psi: t.labels.clone(), coroot: t.coroot.clone(), scale_num: 1, scale_den: 1 }
            }
        }
    }

    pub fn pair(&self, v: &[i64]) -> i64 {
        self.coroot.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Sign of `f(v) − m`.
    pub fn compare(&self, v: &[i64], m: i64) -> std::cmp::Ordering {
        (self.pair(v) * self.scale_num).cmp(&(m * self.scale_den))
    }

    /// Affine reflection `v ↦ s_ψ(v) + m·ψ/scale`.
    pub fn reflect(&self, v: &mut [i64], m: i64) {
        let num = self.pair(v) * self.scale_num - m * self.scale_den;
        for (x, p) in v.iter_mut().zip(&self.psi) {
            let t = num * p;
            debug_assert_eq!(t % self.scale_num, 0);
            *x -= t / self.scale_num;
        }
    }
}

/// Integer core of [`fold_affine`]; `None` on a wall.
pub(crate) fn fold_int(data: &AffineAlgebraData, wall: &Wall, m: i64, mut v: Vec<i64>) -> Option<(i8, Vec<i64>)> {
    let mut sign = 1i8;
    loop {
        let r = dominate(data, &mut v, true);
        if r.wall {
            return None;
        }
        sign *= r.sign;
        match wall.compare(&v, m) {
            std::cmp::Ordering::Less => return Some((sign, v)),
            std::cmp::Ordering::Equal => return None,
            std::cmp::Ordering::Greater => {
                wall.reflect(&mut v, m);
                sign = -sign;
            }
        }
    }
}

/// Brings `v` into the open fundamental alcove of `W̊ ⋉ m·L`.
pub fn fold_affine(data: &AffineAlgebraData, m: i64, lattice: TranslationLattice, v: &FiniteWeight) -> Result<SignedWeight> {
    if lattice.multiple <= 0 || m <= 0 {
        return Err(Error::InvalidLattice(format!("m = {m}, multiple = {}", lattice.multiple)));
    }
    let wall = Wall::new(data, lattice.kind);
    let (vi, d) = scaled_ints(v);
    Ok(match fold_int(data, &wall, m * lattice.multiple * d, vi) {
        Some((s, out)) => SignedWeight::value(unscale(&out, d), s),
        None => SignedWeight::null(v.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize)]
pub struct AlcoveWord {
    pub indices: Vec<usize>,
}

impl AlcoveWord {
    pub fn sign(&self) -> i8 {
        if self.indices.iter().sum::<usize>() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Reduction of `v = λ̄+ρ̄` by the words `w_i = s_{i−1}⋯s_1s_0` for `A_{2ℓ}^(2)`.
#[allow(non_snake_case)]
pub fn alcove_reduce_wI(data: &AffineAlgebraData, k: i64, v: &FiniteWeight) -> Result<(SignedWeight, AlcoveWord)> {
    if !data.is_a2l_twisted() {
        return Err(Error::Unsupported(format!("alcove reduction needs A_2l^(2) data, got {}", data.atype)));
    }
    if k < 1 {
        return Err(Error::LevelNonPositive(k));
    }
    let Some(mut cur) = v.to_ints() else {
        return Err(Error::NotIntegral(v.to_string()));
    };
    if cur.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(v.to_string()));
    }
    if cur.contains(&0) {
        return Err(Error::NotRegular(v.to_string()));
    }
    let big = k + data.h_dual;
    let wall = Wall::new(data, MLattice::CoRootImage);
    if wall.compare(&cur, 2 * big).is_ge() {
        return Err(Error::OutOfRange(format!("(v,θ) ≥ 2(k+h^∨) for {v}")));
    }
    let mut word = AlcoveWord::default();
    loop {
        match wall.compare(&cur, big) {
            std::cmp::Ordering::Less => break,
            std::cmp::Ordering::Equal => return Err(Error::NotRegular(v.to_string())),
            std::cmp::Ordering::Greater => {}
        }
        let mut cand = cur.clone();
        wall.reflect(&mut cand, big);
        let mut chosen = None;
        for i in 1..=data.rank {
            if i > 1 {
                reflect_int(data, i - 1, &mut cand);
            }
            if cand.contains(&0) {
                return Err(Error::NotRegular(v.to_string()));
            }
            if cand.iter().all(|&x| x > 0) {
                chosen = Some(i);
                break;
            }
        }
        let Some(i) = chosen else {
            return Err(Error::OutOfRange(format!("no dominant w_i image for {v}")));
        };
        word.indices.push(i);
        cur = cand;
        if word.len() as i64 > big {
            return Err(Error::OutOfRange(format!("word longer than k+h^∨ for {v}")));
        }
    }
    let sign = word.sign();
    Ok((SignedWeight::value(FiniteWeight::from_ints(&cur), sign), word))
}

/// Orbit of a regular integral weight with `ε(w)` attached to each image.
pub fn signed_orbit(data: &AffineAlgebraData, v: &[i64]) -> Vec<(Vec<i64>, i8)> {
    let mut seen: HashMap<Vec<i64>, i8> = HashMap::new();
    seen.insert(v.to_vec(), 1);
    let mut frontier = vec![v.to_vec()];
    let mut out = vec![(v.to_vec(), 1i8)];
    while let Some(u) = frontier.pop() {
        let s = seen[&u];
        for i in 1..=data.rank {
            if u[i - 1] == 0 {
                continue;
            }
            let mut w = u.clone();
            reflect_int(data, i, &mut w);
            if !seen.contains_key(&w) {
                seen.insert(w.clone(), -s);
                out.push((w.clone(), -s));
                frontier.push(w);
            }
        }
    }
    out
}

/// Distinct images of an integral weight.
pub fn orbit(data: &AffineAlgebraData, v: &[i64]) -> Vec<Vec<i64>> {
    let mut seen: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    seen.insert(v.to_vec());
    let mut frontier = vec![v.to_vec()];
    while let Some(u) = frontier.pop() {
        for i in 1..=data.rank {
            if u[i - 1] == 0 {
                continue;
            }
            let mut w = u.clone();
            reflect_int(data, i, &mut w);
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort();
    out
}

/// `|W̊|` as the product of the degrees, read off the height distribution of positive roots.
pub fn weyl_group_order(data: &AffineAlgebraData) -> u64 {
    let mut by_height: Vec<usize> = vec![];
    for r in &data.positive_roots {
        let h = r.height() as usize;
        if by_height.len() < h {
            by_height.resize(h, 0);
        }
        by_height[h - 1] += 1;
    }
    (1..=data.rank).map(|i| by_height.iter().filter(|&&c| c >= i).count() as u64 + 1).product()
}
