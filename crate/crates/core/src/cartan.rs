//! Static data of affine Kac-Moody algebras `X_N^(r)`.
//!
//! Cartan matrices follow Kac: `a_ij = ⟨α_i^∨, α_j⟩`, node 0 is the affine node.
//! Weights are Dynkin labels over the fundamental weights of the finite part.

use crate::error::{Error, Result};
use crate::rational::{det, inverse, is_positive_definite, kernel, q, qi, qmat_from_int, qmat_mul, QMat, Q};
use crate::types::FiniteWeight;
use num_traits::{One, Zero};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use crate::types::LevelWeight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineType {
    pub family: Family,
    pub n: u32,
    pub r: u32,
}

impl AffineType {
    pub fn new(family: Family, n: u32, r: u32) -> Self {
        AffineType { family, n, r }
    }

    pub fn untwisted(family: Family, n: u32) -> Self {
        AffineType { family, n, r: 1 }
    }

    /// `A_{2ℓ}^(2)`, the one twisted family with `r = a_0`.
    pub fn is_a2l_twisted(&self) -> bool {
        self.family == Family::A && self.r == 2 && self.n.is_multiple_of(2)
    }

    /// Rank of the finite part, or `None` when the triple is not in the tables.
    pub fn finite_rank(&self) -> Option<usize> {
        use Family::*;
        let n = self.n as usize;
        match (self.family, self.r) {
            (A, 1) if n >= 1 => Some(n),
            (B, 1) if n >= 2 => Some(n),
            (C, 1) if n >= 1 => Some(n),
            (D, 1) if n >= 4 => Some(n),
            (E, 1) if (6..=8).contains(&n) => Some(n),
            (F, 1) if n == 4 => Some(4),
            (G, 1) if n == 2 => Some(2),
            (A, 2) if n >= 2 && n.is_multiple_of(2) => Some(n / 2),
            (A, 2) if n >= 3 => Some(n.div_ceil(2)),
            (D, 2) if n >= 3 => Some(n - 1),
            (E, 2) if n == 6 => Some(4),
            (D, 3) if n == 4 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}~{}", self.family.letter(), self.n, self.r)
    }
}

impl FromStr for AffineType {
    type Err = Error;

    /// `"A2~1"`, `"A5~2"`, `"D4~3"`; a missing suffix means `~1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad type string {s:?}"));
        let mut chars = s.chars();
        let family = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let (n, r) = match rest.split_once('~') {
            Some((n, r)) => (n, r),
            None => (rest, "1"),
        };
        let n: u32 = n.parse().map_err(|_| bad())?;
        let r: u32 = r.parse().map_err(|_| bad())?;
        let t = AffineType { family, n, r };
        t.finite_rank().ok_or_else(|| Error::UnknownType(t.to_string()))?;
        Ok(t)
    }
}

/// Translation lattice `M` of the affine Weyl group `W̊ ⋉ M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum MLattice {
    CoRootImage,
    RootLattice,
}

/// A positive root of the finite part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Coordinates over simple roots.
    pub coeffs: Vec<i64>,
    /// Dynkin labels.
    pub labels: Vec<i64>,
    /// Coordinates of `β^∨` over simple coroots, so `⟨λ, β^∨⟩ = Σ coroot_i λ_i`.
    pub coroot: Vec<i64>,
    pub norm: Q,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn pair(&self, v: &[i64]) -> i64 {
        self.coroot.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone)]
pub struct AffineAlgebraData {
    pub atype: AffineType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub finite_cartan: Vec<Vec<i64>>,
    pub labels: Vec<i64>,
    pub dual_labels: Vec<i64>,
    pub h: i64,
    pub h_dual: i64,
    pub theta: FiniteWeight,
    pub theta_short: Option<FiniteWeight>,
    pub gram: QMat,
    pub m_lattice: MLattice,
    /// Rows are Dynkin labels of a basis of `M`.
    pub m_basis: QMat,
    /// `(α_i, α_i)` for `i = 0..=ℓ`.
    pub root_norms: Vec<Q>,
    pub positive_roots: Vec<Root>,
    /// Node order reversed relative to the tabulated diagram (transpose of `A_{2ℓ}^(2)`).
    pub reversed: bool,
    form_int: Vec<Vec<i64>>,
    form_denom: i64,
}

impl PartialEq for AffineAlgebraData {
    fn eq(&self, o: &Self) -> bool {
        self.atype == o.atype && self.cartan == o.cartan && self.reversed == o.reversed
    }
}

impl Eq for AffineAlgebraData {}

fn edges_to_cartan(nodes: usize, edges: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; nodes]; nodes];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    // (long, short, ratio); ratio 1 for a simple bond
    for &(i, j, m) in edges {
        a[i][j] = -1;
        a[j][i] = -m;
    }
    a
}

fn chain(from: usize, to: usize) -> Vec<(usize, usize, i64)> {
    (from..to).map(|i| (i, i + 1, 1)).collect()
}

fn untwisted_cartan(family: Family, l: usize) -> Vec<Vec<i64>> {
    use Family::*;
    match family {
        A if l == 1 => vec![vec![2, -2], vec![-2, 2]],
        A => {
            let mut e = chain(0, l);
            e.push((l, 0, 1));
            edges_to_cartan(l + 1, &e)
        }
        B => {
            let mut e = vec![(0, 2, 1)];
            e.extend(chain(1, l - 1));
            e.push((l - 1, l, 2));
            if l == 2 {
                e = vec![(0, 2, 2), (1, 2, 2)];
            }
            edges_to_cartan(l + 1, &e)
        }
        C if l == 1 => untwisted_cartan(A, 1),
        C => {
            let mut e = vec![(0, 1, 2)];
            e.extend(chain(1, l - 1));
            e.push((l, l - 1, 2));
            edges_to_cartan(l + 1, &e)
        }
        D => {
            let mut e = vec![(0, 2, 1)];
            e.extend(chain(1, l - 1));
            e.push((l - 2, l, 1));
            edges_to_cartan(l + 1, &e)
        }
        E if l == 6 => edges_to_cartan(7, &[(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (3, 6, 1), (6, 0, 1)]),
        E if l == 7 => {
            let mut e = chain(0, 6);
            e.push((3, 7, 1));
            edges_to_cartan(8, &e)
        }
        E => {
            let mut e = chain(1, 7);
            e.push((7, 0, 1));
            e.push((3, 8, 1));
            edges_to_cartan(9, &e)
        }
        F => edges_to_cartan(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 2), (3, 4, 1)]),
        G => edges_to_cartan(3, &[(0, 1, 1), (1, 2, 3)]),
    }
}

fn a2l_twisted_cartan(l: usize) -> Vec<Vec<i64>> {
    if l == 1 {
        return vec![vec![2, -4], vec![-1, 2]];
    }
    let mut e = vec![(1, 0, 2)];
    e.extend(chain(1, l - 1));
    e.push((l, l - 1, 2));
    edges_to_cartan(l + 1, &e)
}

/// Twisted partner under transposition, for the types with `r > a_0`.
fn transpose_partner(t: AffineType) -> AffineType {
    use Family::*;
    let l = t.finite_rank().unwrap() as u32;
    match (t.family, t.r) {
        (B, 1) => AffineType::new(A, 2 * l - 1, 2),
        (C, 1) if l >= 2 => AffineType::new(D, l + 1, 2),
        (F, 1) => AffineType::new(E, 6, 2),
        (G, 1) => AffineType::new(D, 4, 3),
        (A, 2) if t.n % 2 == 1 => AffineType::untwisted(B, l),
        (D, 2) => AffineType::untwisted(C, l),
        (E, 2) => AffineType::untwisted(F, 4),
        (D, 3) => AffineType::untwisted(G, 2),
        _ => t,
    }
}

/// Builds the full data for a tabulated type.
pub fn affine_data(atype: AffineType) -> Result<AffineAlgebraData> {
    let l = atype.finite_rank().ok_or_else(|| Error::UnknownType(atype.to_string()))?;
    let cartan = if atype.r == 1 {
        untwisted_cartan(atype.family, l)
    } else if atype.is_a2l_twisted() {
        a2l_twisted_cartan(l)
    } else {
        let p = transpose_partner(atype);
        crate::rational::transpose(&untwisted_cartan(p.family, l))
    };
    Ok(from_cartan(atype, cartan, false))
}

/// Data of the algebra with Cartan matrix `A^t`.
pub fn transpose(data: &AffineAlgebraData) -> AffineAlgebraData {
    let at = crate::rational::transpose(&data.cartan);
    if data.atype.is_a2l_twisted() {
        // A^t with its nodes read in reverse order is A again
        let n = at.len();
        let rev: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| at[n - 1 - i][n - 1 - j]).collect()).collect();
        debug_assert_eq!(rev, data.cartan);
        return from_cartan(data.atype, rev, !data.reversed);
    }
    let t = transpose_partner(data.atype);
    let out = from_cartan(t, at, false);
    debug_assert_eq!(out.cartan, affine_data(t).unwrap().cartan);
    out
}

pub fn weight_gram(data: &AffineAlgebraData) -> QMat {
    data.gram.clone()
}

fn positive_roots(fc: &[Vec<i64>], norms: &[Q]) -> Vec<Root> {
    let l = fc.len();
    let mut roots: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| (i == j) as i64).collect()).collect();
    let mut seen: HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        for i in 0..l {
            let pairing: i64 = (0..l).map(|j| fc[i][j] * beta[j]).sum();
            let mut p = 0;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if seen.contains(&down) {
                    p += 1;
                } else {
                    break;
                }
            }
            if p - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if seen.insert(up.clone()) {
                    roots.push(up);
                }
            }
        }
        idx += 1;
    }
    roots.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
    roots
        .into_iter()
        .map(|c| {
            let labels: Vec<i64> = (0..l).map(|j| (0..l).map(|i| fc[j][i] * c[i]).sum()).collect();
            let mut norm = Q::zero();
            for i in 0..l {
                for j in 0..l {
                    norm += Q::from_integer(c[i] * c[j]) * norms[i] / 2 * Q::from_integer(fc[i][j]);
                }
            }
            let coroot = (0..l)
                .map(|j| {
                    let x = Q::from_integer(c[j]) * norms[j] / norm;
                    assert!(x.is_integer());
                    x.to_integer()
                })
                .collect();
            Root { coeffs: c, labels, coroot, norm }
        })
        .collect()
}

fn from_cartan(atype: AffineType, cartan: Vec<Vec<i64>>, reversed: bool) -> AffineAlgebraData {
    let n = cartan.len();
    let l = n - 1;
    let aq = qmat_from_int(&cartan);
    let ker = kernel(&aq);
    assert_eq!(ker.len(), 1, "{atype}: affine Cartan matrix must have corank 1");
    let labels = ker[0].clone();
    let dual = kernel(&qmat_from_int(&crate::rational::transpose(&cartan)));
    let dual_labels = dual[0].clone();
    assert!(labels.iter().chain(&dual_labels).all(|&x| x > 0));
    assert_eq!(dual_labels[0], 1);
    let finite_cartan: Vec<Vec<i64>> = cartan[1..].iter().map(|r| r[1..].to_vec()).collect();

    // (α_i, α_j) = a_i^∨ / a_i · a_ij
    let norms: Vec<Q> = (0..n).map(|i| q(2 * dual_labels[i], labels[i])).collect();
    let b: QMat = (1..n).map(|i| (1..n).map(|j| q(dual_labels[i], labels[i]) * qi(cartan[i][j])).collect()).collect();
    assert_eq!(b, crate::rational::transpose(&b), "{atype}: form must be symmetric");
    let d: QMat = (0..l).map(|i| (0..l).map(|j| if i == j { norms[i + 1] / 2 } else { Q::zero() }).collect()).collect();
    let gram = qmat_mul(&qmat_mul(&d, &inverse(&b).unwrap()), &d);
    assert!(is_positive_definite(&gram));

    let roots = positive_roots(&finite_cartan, &norms[1..]);
    let theta_coeffs = labels[1..].to_vec();
    let theta_root = roots.iter().find(|r| r.coeffs == theta_coeffs).expect("θ must be a root");
    let theta = FiniteWeight::from_ints(&theta_root.labels);
    let min_norm = roots.iter().map(|r| r.norm).min().unwrap();
    let max_norm = roots.iter().map(|r| r.norm).max().unwrap();
    let theta_short = (min_norm != max_norm).then(|| {
        let s = roots.iter().filter(|r| r.norm == min_norm).max_by_key(|r| r.height()).unwrap();
        FiniteWeight::from_ints(&s.labels)
    });

    let m_lattice = if atype.r as i64 == labels[0] { MLattice::CoRootImage } else { MLattice::RootLattice };
    let m_basis: QMat = (1..n)
        .map(|i| {
            let s = match m_lattice {
                MLattice::CoRootImage => q(labels[i], dual_labels[i]),
                MLattice::RootLattice => Q::one(),
            };
            (1..n).map(|j| s * qi(cartan[j][i])).collect()
        })
        .collect();

    let form_denom = crate::rational::lcm_denoms(gram.iter().flatten());
    let form_int = gram.iter().map(|r| r.iter().map(|x| (x * form_denom).to_integer()).collect()).collect();

    let data = AffineAlgebraData {
        atype,
        rank: l,
        h: labels.iter().sum(),
        h_dual: dual_labels.iter().sum(),
        cartan,
        finite_cartan,
        labels,
        dual_labels,
        theta,
        theta_short,
        gram,
        m_lattice,
        m_basis,
        root_norms: norms,
        positive_roots: roots,
        reversed,
        form_int,
        form_denom,
    };
    debug_assert!(data.check_invariants().is_ok());
    data
}

impl AffineAlgebraData {
    pub fn is_untwisted(&self) -> bool {
        self.atype.r == 1
    }

    pub fn is_a2l_twisted(&self) -> bool {
        self.atype.is_a2l_twisted()
    }

    /// Twisted with `r > a_0`: the types handled through the transpose.
    pub fn is_transposed_twisted(&self) -> bool {
        self.atype.r > 1 && !self.is_a2l_twisted()
    }

    pub fn has_two_root_lengths(&self) -> bool {
        self.theta_short.is_some()
    }

    /// Labels of the simple root `α_i`, `i` 1-based (column `i` of `Å`).
    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        (0..self.rank).map(|j| self.finite_cartan[j][i - 1]).collect()
    }

    /// `(u, v)` on integral label vectors, scaled by [`Self::form_denominator`].
    pub fn form_scaled(&self, u: &[i64], v: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ui) in u.iter().enumerate() {
            if *ui == 0 {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                s += ui * self.form_int[i][j] * vj;
            }
        }
        s
    }

    pub fn form_denominator(&self) -> i64 {
        self.form_denom
    }

    /// `G·v` scaled by the form denominator, for repeated pairings against `v`.
    pub fn form_row(&self, v: &[i64]) -> Vec<i64> {
        self.form_int.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn form(&self, u: &FiniteWeight, v: &FiniteWeight) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += u.labels[i] * self.gram[i][j] * v.labels[j];
            }
        }
        s
    }

    pub fn norm2(&self, u: &FiniteWeight) -> Q {
        self.form(u, u)
    }

    pub fn theta_root(&self) -> &Root {
        let c = &self.labels[1..];
        self.positive_roots.iter().find(|r| r.coeffs == c).unwrap()
    }

    /// Highest short root, or `θ` when there is one root length.
    pub fn theta_short_root(&self) -> &Root {
        let min = self.positive_roots.iter().map(|r| r.norm).min().unwrap();
        self.positive_roots.iter().filter(|r| r.norm == min).max_by_key(|r| r.height()).unwrap()
    }

    /// `ν(θ^∨) = 2θ/|θ|²` in Dynkin labels.
    pub fn nu_theta_coroot(&self) -> FiniteWeight {
        let t = self.theta_root();
        self.theta.scale(qi(2) / t.norm)
    }

    /// Level `Σ_{i≥1} a_i^∨ λ_i` contributed by a finite part.
    pub fn finite_level(&self, w: &FiniteWeight) -> Q {
        w.labels.iter().zip(&self.dual_labels[1..]).map(|(x, &a)| x * qi(a)).sum()
    }

    pub fn rho(&self) -> FiniteWeight {
        FiniteWeight::rho(self.rank)
    }

    /// `|det Å|`, the order of `P̊/Q̊`.
    pub fn index_of_root_lattice(&self) -> i64 {
        det(&qmat_from_int(&self.finite_cartan)).to_integer().abs()
    }

    pub fn weyl_order(&self) -> u64 {
        crate::weyl::weyl_group_order(self)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Unsupported(format!("{}: {m}", self.atype)));
        if self.h != self.labels.iter().sum::<i64>() || self.h_dual != self.dual_labels.iter().sum::<i64>() {
            return fail("Coxeter numbers");
        }
        if self.is_untwisted() && self.labels[0] != 1 {
            return fail("a_0 must be 1 for untwisted types");
        }
        for row in &self.cartan {
            if row.iter().zip(&self.labels).map(|(a, b)| a * b).sum::<i64>() != 0 {
                return fail("labels are not in the kernel");
            }
        }
        let g = &self.gram;
        if *g != crate::rational::transpose(g) || !is_positive_definite(g) {
            return fail("gram must be symmetric positive definite");
        }
        let expect = if self.atype.r as i64 == self.labels[0] { MLattice::CoRootImage } else { MLattice::RootLattice };
        if expect != self.m_lattice {
            return fail("M lattice descriptor");
        }
        Ok(())
    }
}
