//! Integer normal forms and rational lattice operations.

use crate::rational::{inverse, lcm_denoms, qi, transpose, QMat, Q};
use num_integer::Integer;

/// Smith normal form data: `u * a * v = diag`, only `u` is kept.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Vec<Vec<i64>>,
    pub diag: Vec<i64>,
}

pub fn smith(a: &[Vec<i64>]) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut a: Vec<Vec<i64>> = a.to_vec();
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();

    let row_axpy = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, f: i64| {
        for j in 0..a[0].len() {
            a[dst][j] -= f * a[src][j];
        }
        for j in 0..u[0].len() {
            u[dst][j] -= f * u[src][j];
        }
    };

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                let mut diag: Vec<i64> = (0..m.min(n)).map(|i| a[i][i]).collect();
                for d in diag.iter_mut() {
                    *d = d.abs();
                }
                return Snf { u, diag };
            };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..m {
                let f = a[i][t] / a[t][t];
                row_axpy(&mut a, &mut u, i, t, f);
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let f = a[t][j] / a[t][t];
                for row in a.iter_mut() {
                    row[j] -= f * row[t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let p = a[t][t];
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => row_axpy(&mut a, &mut u, t, i, -1),
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diag = (0..m.min(n)).map(|i| a[i][i]).collect();
    Snf { u, diag }
}

/// Row-echelon basis of the integer lattice spanned by `gens`.
pub fn hermite_basis(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if gens.is_empty() {
        return vec![];
    }
    let n = gens[0].len();
    let mut rows: Vec<Vec<i128>> = gens.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut piv = 0;
    for c in 0..n {
        loop {
            let nz: Vec<usize> = (piv..rows.len()).filter(|&r| rows[r][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    rows.swap(piv, r);
                    if rows[piv][c] < 0 {
                        rows[piv].iter_mut().for_each(|x| *x = -*x);
                    }
                    piv += 1;
                }
                break;
            }
            let r0 = *nz.iter().min_by_key(|&&r| rows[r][c].abs()).unwrap();
            for &r in &nz {
                if r != r0 {
                    let f = Integer::div_floor(&rows[r][c], &rows[r0][c]);
                    for j in 0..n {
                        let t = rows[r0][j] * f;
                        rows[r][j] -= t;
                    }
                }
            }
        }
        if piv == rows.len() {
            break;
        }
    }
    rows.truncate(piv);
    rows.into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
}

/// Basis of the lattice generated by rational row vectors.
pub fn rational_basis(gens: &[Vec<Q>]) -> QMat {
    let d = lcm_denoms(gens.iter().flatten());
    let ints: Vec<Vec<i64>> = gens.iter().map(|r| r.iter().map(|x| (x * d).to_integer()).collect()).collect();
    hermite_basis(&ints).into_iter().map(|r| r.into_iter().map(|x| Q::new(x, d)).collect()).collect()
}

/// Dual basis with respect to the coordinate dot product.
pub fn dual_basis(b: &QMat) -> QMat {
    transpose(&inverse(b).expect("lattice basis must be nonsingular"))
}

/// Intersection of two full-rank lattices given by row bases.
pub fn intersect(a: &QMat, b: &QMat) -> QMat {
    let mut gens = dual_basis(a);
    gens.extend(dual_basis(b));
    dual_basis(&rational_basis(&gens))
}

pub fn scale(b: &QMat, s: Q) -> QMat {
    b.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn identity(n: usize) -> QMat {
    (0..n).map(|i| (0..n).map(|j| qi((i == j) as i64)).collect()).collect()
}
