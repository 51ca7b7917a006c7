//! Weight multiplicities, tensor product decomposition, and character values at torus points.

use crate::cartan::AffineAlgebraData;
use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::rational::lcm_denoms;
use crate::types::FiniteWeight;
use crate::weyl::{dominate, orbit, signed_orbit};
use num_rational::Ratio;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::f64::consts::PI;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub highest: FiniteWeight,
    pub mults: BTreeMap<FiniteWeight, u64>,
}

impl WeightSystem {
    pub fn dim(&self) -> u64 {
        self.mults.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    pub terms: BTreeMap<FiniteWeight, u64>,
}

impl Decomposition {
    pub fn mult(&self, w: &FiniteWeight) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }
}

type IntSystem = Arc<Vec<(Vec<i64>, u64)>>;
type CacheKey = (Vec<Vec<i64>>, Vec<i64>);

fn cache() -> &'static Mutex<HashMap<CacheKey, IntSystem>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, IntSystem>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn dominant_checked(w: &FiniteWeight) -> Result<Vec<i64>> {
    let v = w.to_ints().ok_or_else(|| Error::NotIntegral(w.to_string()))?;
    if v.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(w.to_string()));
    }
    Ok(v)
}

/// Dominant weights of `V(λ)` with multiplicities (Freudenthal).
fn dominant_mults(data: &AffineAlgebraData, lambda: &[i64]) -> Vec<(Vec<i64>, u64)> {
    let mut dom: Vec<Vec<i64>> = vec![lambda.to_vec()];
    let mut seen: HashSet<Vec<i64>> = dom.iter().cloned().collect();
    let mut i = 0;
    while i < dom.len() {
        let mu = dom[i].clone();
        for a in &data.positive_roots {
            let nu: Vec<i64> = mu.iter().zip(&a.labels).map(|(x, y)| x - y).collect();
            if nu.iter().all(|&x| x >= 0) && seen.insert(nu.clone()) {
                dom.push(nu);
            }
        }
        i += 1;
    }
    // depth below λ in simple-root steps orders the recursion
    let rho = vec![1i64; data.rank];
    let lr: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
    let depth = |mu: &[i64]| -> i64 {
        let diff: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
        data.form_scaled(&diff, &rho)
    };
    dom.sort_by_key(|m| (depth(m), m.clone()));
    let norm_lr = data.form_scaled(&lr, &lr);
    let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
    for mu in &dom {
        if mu.as_slice() == lambda {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mr: Vec<i64> = mu.iter().map(|x| x + 1).collect();
        let lhs = norm_lr - data.form_scaled(&mr, &mr);
        let mut rhs: i64 = 0;
        for a in &data.positive_roots {
            let mut v = mu.clone();
            loop {
                for (x, y) in v.iter_mut().zip(&a.labels) {
                    *x += y;
                }
                let mut d = v.clone();
                dominate(data, &mut d, false);
                let Some(&m) = mult.get(&d) else { break };
                rhs += m as i64 * data.form_scaled(&v, &a.labels);
            }
        }
        let m = 2 * rhs / lhs;
        debug_assert_eq!(2 * rhs % lhs, 0);
        mult.insert(mu.clone(), m as u64);
    }
    dom.into_iter()
        .map(|d| {
            let m = mult[&d];
            (d, m)
        })
        .filter(|(_, m)| *m > 0)
        .collect()
}

pub(crate) fn weight_system_int(data: &AffineAlgebraData, lambda: &[i64]) -> IntSystem {
    let key = (data.finite_cartan.clone(), lambda.to_vec());
    if let Some(ws) = cache().lock().unwrap().get(&key) {
        return ws.clone();
    }
    let mut all = vec![];
    for (d, m) in dominant_mults(data, lambda) {
        for w in orbit(data, &d) {
            all.push((w, m));
        }
    }
    all.sort();
    let ws = Arc::new(all);
    cache().lock().unwrap().insert(key, ws.clone());
    ws
}

pub fn weight_system(data: &AffineAlgebraData, lambda: &FiniteWeight) -> Result<WeightSystem> {
    let v = dominant_checked(lambda)?;
    let ws = weight_system_int(data, &v);
    Ok(WeightSystem { highest: lambda.clone(), mults: ws.iter().map(|(w, m)| (FiniteWeight::from_ints(w), *m)).collect() })
}

pub fn weyl_dimension(data: &AffineAlgebraData, lambda: &FiniteWeight) -> Result<u64> {
    let v = dominant_checked(lambda)?;
    Ok(weyl_dimension_int(data, &v))
}

pub(crate) fn weyl_dimension_int(data: &AffineAlgebraData, v: &[i64]) -> u64 {
    let mut r = Ratio::<i128>::from_integer(1);
    for a in &data.positive_roots {
        let top: i64 = a.coroot.iter().zip(v).map(|(c, x)| c * (x + 1)).sum();
        let bot: i64 = a.coroot.iter().sum();
        r *= Ratio::new(top as i128, bot as i128);
    }
    assert!(r.is_integer());
    r.to_integer() as u64
}

/// Racah-Speiser over the weights of the smaller factor.
pub(crate) fn tensor_int(data: &AffineAlgebraData, lambda: &[i64], mu: &[i64]) -> BTreeMap<Vec<i64>, i64> {
    let (big, small) = if weyl_dimension_int(data, lambda) >= weyl_dimension_int(data, mu) { (lambda, mu) } else { (mu, lambda) };
    let ws = weight_system_int(data, small);
    let mut out: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let mut v = vec![0; data.rank];
    for (phi, m) in ws.iter() {
        for j in 0..data.rank {
            v[j] = big[j] + phi[j] + 1;
        }
        let r = dominate(data, &mut v, true);
        if r.wall {
            continue;
        }
        let nu: Vec<i64> = v.iter().map(|x| x - 1).collect();
        *out.entry(nu).or_insert(0) += r.sign as i64 * *m as i64;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn tensor_decompose(data: &AffineAlgebraData, lambda: &FiniteWeight, mu: &FiniteWeight) -> Result<Decomposition> {
    let a = dominant_checked(lambda)?;
    let b = dominant_checked(mu)?;
    let mut terms = BTreeMap::new();
    for (nu, c) in tensor_int(data, &a, &b) {
        assert!(c > 0, "Racah-Speiser produced a negative multiplicity");
        terms.insert(FiniteWeight::from_ints(&nu), c as u64);
    }
    Ok(Decomposition { terms })
}

/// `e^{−2πi j/n}` for `j = 0..n`.
pub(crate) struct PhaseTable {
    modulus: i64,
    table: Vec<C64>,
}

impl PhaseTable {
    pub fn new(modulus: i64) -> Self {
        let table = (0..modulus).map(|j| C64::from_polar(1.0, -2.0 * PI * j as f64 / modulus as f64)).collect();
        PhaseTable { modulus, table }
    }

    pub fn at(&self, j: i128) -> C64 {
        self.table[j.rem_euclid(self.modulus as i128) as usize]
    }
}

/// `Σ ε(w) e^{−2πi (w x, ξ)/m}` where `ξ_scaled = G·ξ` times `modulus/m`.
pub(crate) fn alternating_sum(orbit: &[(Vec<i64>, i8)], xi_row: &[i64], table: &PhaseTable) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for (u, e) in orbit {
        let p: i128 = u.iter().zip(xi_row).map(|(a, b)| *a as i128 * *b as i128).sum();
        let z = table.at(p);
        if *e > 0 {
            s += z;
        } else {
            s -= z;
        }
    }
    s
}

fn scaled_row(data: &AffineAlgebraData, xi: &FiniteWeight, m: i64) -> (Vec<i64>, i64) {
    let d = lcm_denoms(&xi.labels);
    let xi_int: Vec<i64> = xi.labels.iter().map(|x| (x * d).to_integer()).collect();
    (data.form_row(&xi_int), data.form_denominator() * d * m)
}

/// Numerator and denominator of the Weyl character formula at `e^{−2πi ξ/m}`.
pub fn char_eval_parts(data: &AffineAlgebraData, lambda: &FiniteWeight, xi: &FiniteWeight, m: i64) -> Result<(C64, C64)> {
    let v = dominant_checked(lambda)?;
    let (row, modulus) = scaled_row(data, xi, m);
    let table = PhaseTable::new(modulus);
    let lr: Vec<i64> = v.iter().map(|x| x + 1).collect();
    let num = alternating_sum(&signed_orbit(data, &lr), &row, &table);
    let den = alternating_sum(&signed_orbit(data, &vec![1; data.rank]), &row, &table);
    Ok((num, den))
}

pub fn char_eval(data: &AffineAlgebraData, lambda: &FiniteWeight, xi: &FiniteWeight, m: i64) -> Result<C64> {
    let (num, den) = char_eval_parts(data, lambda, xi, m)?;
    if den.norm() < 1e-12 {
        return Err(Error::SingularPoint(den.norm()));
    }
    Ok(num / den)
}

/// `Σ_μ mult(μ) e^{−2πi (μ, ξ)/m}`, the character as a weight sum.
pub fn char_eval_weights(data: &AffineAlgebraData, lambda: &FiniteWeight, xi: &FiniteWeight, m: i64) -> Result<C64> {
    let v = dominant_checked(lambda)?;
    let (row, modulus) = scaled_row(data, xi, m);
    let table = PhaseTable::new(modulus);
    let mut s = C64::new(0.0, 0.0);
    for (mu, c) in weight_system_int(data, &v).iter() {
        let p: i128 = mu.iter().zip(&row).map(|(a, b)| *a as i128 * *b as i128).sum();
        s += table.at(p) * *c as f64;
    }
    Ok(s)
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CacheEntry {
    cartan: Vec<Vec<i64>>,
    highest: Vec<i64>,
    weights: Vec<(Vec<i64>, u64)>,
}

/// Writes the memoized weight systems to `dir/weight_systems.json`.
pub fn save_cache(dir: &Path) -> std::io::Result<()> {
    let entries: Vec<CacheEntry> = {
        let c = cache().lock().unwrap();
        let mut v: Vec<CacheEntry> = c
            .iter()
            .map(|((cartan, hw), ws)| CacheEntry { cartan: cartan.clone(), highest: hw.clone(), weights: ws.as_ref().clone() })
            .collect();
        v.sort_by(|a, b| (&a.cartan, &a.highest).cmp(&(&b.cartan, &b.highest)));
        v
    };
    std::fs::create_dir_all(dir)?;
    let s = serde_json::to_string(&entries).map_err(std::io::Error::other)?;
    std::fs::write(dir.join("weight_systems.json"), s)
}

/// Loads a cache written by [`save_cache`]; a missing file is not an error.
pub fn load_cache(dir: &Path) -> std::io::Result<usize> {
    let path = dir.join("weight_systems.json");
    if !path.exists() {
        return Ok(0);
    }
    let entries: Vec<CacheEntry> = serde_json::from_slice(&std::fs::read(path)?).map_err(std::io::Error::other)?;
    let n = entries.len();
    let mut c = cache().lock().unwrap();
    for e in entries {
        c.entry((e.cartan, e.highest)).or_insert_with(|| Arc::new(e.weights));
    }
    Ok(n)
}
