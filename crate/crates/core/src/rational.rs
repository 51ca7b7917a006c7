//! Exact rational helpers: the scalar type and small dense matrix routines.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Canonical fraction string: `"3"`, `"-1/2"`.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Result<Q, String> {
    s.trim().parse::<Q>().map_err(|e| format!("bad rational {s:?}: {e}"))
}

pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> i64 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

pub type QMat = Vec<Vec<Q>>;

pub fn qmat_from_int(a: &[Vec<i64>]) -> QMat {
    a.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

pub fn qmat_vec(a: &QMat, v: &[Q]) -> Vec<Q> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot(u: &[Q], v: &[Q]) -> Q {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination determinant.
pub fn det(a: &QMat) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c] / m[c][c];
            for j in c..n {
                let t = m[c][j] * f;
                m[r][j] -= t;
            }
        }
    }
    d
}

pub fn inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m: QMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c];
        for x in m[c].iter_mut() {
            *x /= piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                for j in 0..2 * n {
                    let t = m[c][j] * f;
                    m[r][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right kernel of `a`, each vector scaled to primitive integers.
pub fn kernel(a: &QMat) -> Vec<Vec<i64>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut m = a.clone();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c];
        for x in m[r].iter_mut() {
            *x /= piv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let t = m[r][j] * f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f];
            }
            primitive(&v)
        })
        .collect()
}

/// Scale a rational vector to coprime integers, first nonzero entry positive.
pub fn primitive(v: &[Q]) -> Vec<i64> {
    let l = lcm_denoms(v);
    let ints: Vec<i64> = v.iter().map(|x| (x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |g, x| g.gcd(x));
    let sign = ints.iter().find(|x| **x != 0).map_or(1, |x| x.signum());
    ints.iter().map(|x| sign * x / g.max(1)).collect()
}

/// Leading principal minors all positive.
pub fn is_positive_definite(a: &QMat) -> bool {
    (1..=a.len()).all(|k| {
        let sub: QMat = a[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(&sub).is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let a = qmat_from_int(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(det(&a), qi(3));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![q(2, 3), q(1, 3)], vec![q(1, 3), q(2, 3)]]);
    }

    #[test]
    fn kernel_of_affine_a2() {
        let a = qmat_from_int(&[vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
        assert_eq!(kernel(&a), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn fraction_roundtrip() {
        for s in ["0", "-3", "5/7", "-1/2"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
    }
}
