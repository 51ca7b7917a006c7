//! Weight types shared by every module.

use crate::rational::{fmt_q, parse_q, qi, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Dynkin labels `⟨λ, α_i^∨⟩` of a weight of the underlying simple algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteWeight {
    pub labels: Vec<Q>,
}

impl FiniteWeight {
    pub fn new(labels: Vec<Q>) -> Self {
        FiniteWeight { labels }
    }

    pub fn from_ints(labels: &[i64]) -> Self {
        FiniteWeight { labels: labels.iter().map(|&x| qi(x)).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        FiniteWeight { labels: vec![Q::zero(); rank] }
    }

    /// All-ones labels.
    pub fn rho(rank: usize) -> Self {
        Self::from_ints(&vec![1; rank])
    }

    /// The fundamental weight `Λ̄_i`, `i` 1-based.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Self::from_ints(&v)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn is_integral(&self) -> bool {
        self.labels.iter().all(|x| x.is_integer())
    }

    pub fn is_dominant(&self) -> bool {
        self.labels.iter().all(|x| !x.is_negative())
    }

    pub fn is_regular_dominant(&self) -> bool {
        self.labels.iter().all(|x| x.is_positive())
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.is_integral().then(|| self.labels.iter().map(|x| x.to_integer()).collect())
    }

    pub fn scale(&self, c: Q) -> Self {
        FiniteWeight { labels: self.labels.iter().map(|x| x * c).collect() }
    }

    fn label_sum(&self) -> Q {
        self.labels.iter().sum()
    }
}

/// Graded lexicographic: label sum first, then labels left to right.
impl Ord for FiniteWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label_sum().cmp(&other.label_sum()).then_with(|| self.labels.cmp(&other.labels))
    }
}

impl PartialOrd for FiniteWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &FiniteWeight {
    type Output = FiniteWeight;
    fn add(self, o: &FiniteWeight) -> FiniteWeight {
        FiniteWeight { labels: self.labels.iter().zip(&o.labels).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FiniteWeight {
    type Output = FiniteWeight;
    fn sub(self, o: &FiniteWeight) -> FiniteWeight {
        FiniteWeight { labels: self.labels.iter().zip(&o.labels).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FiniteWeight {
    type Output = FiniteWeight;
    fn neg(self) -> FiniteWeight {
        FiniteWeight { labels: self.labels.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for FiniteWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `k·Λ_0 + λ̄` modulo `Cδ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelWeight {
    pub finite: FiniteWeight,
    pub level: i64,
}

impl LevelWeight {
    pub fn new(finite: FiniteWeight, level: i64) -> Self {
        LevelWeight { finite, level }
    }
}

impl fmt::Display for LevelWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.finite, self.level)
    }
}

#[derive(Serialize, Deserialize)]
struct LabelsRepr {
    labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    level: Option<i64>,
}

fn parse_labels<E: serde::de::Error>(v: &[String]) -> Result<Vec<Q>, E> {
    v.iter().map(|s| parse_q(s).map_err(E::custom)).collect()
}

impl Serialize for FiniteWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LabelsRepr { labels: self.labels.iter().map(fmt_q).collect(), level: None }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LabelsRepr::deserialize(d)?;
        Ok(FiniteWeight { labels: parse_labels(&r.labels)? })
    }
}

impl Serialize for LevelWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LabelsRepr { labels: self.finite.labels.iter().map(fmt_q).collect(), level: Some(self.level) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LevelWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LabelsRepr::deserialize(d)?;
        let level = r.level.ok_or_else(|| serde::de::Error::missing_field("level"))?;
        Ok(LevelWeight { finite: FiniteWeight { labels: parse_labels(&r.labels)? }, level })
    }
}

/// A weight with the sign of the Weyl element that produced it, or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedWeight {
    pub weight: FiniteWeight,
    pub sign: i8,
    pub null: bool,
}

impl SignedWeight {
    pub fn value(weight: FiniteWeight, sign: i8) -> Self {
        SignedWeight { weight, sign, null: false }
    }

    pub fn null(weight: FiniteWeight) -> Self {
        SignedWeight { weight, sign: 1, null: true }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn json_roundtrip() {
        let w = LevelWeight::new(FiniteWeight::new(vec![q(1, 2), qi(3)]), 4);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"labels":["1/2","3"],"level":4}"#);
        assert_eq!(serde_json::from_str::<LevelWeight>(&s).unwrap(), w);
    }

    #[test]
    fn graded_lex() {
        let mut v = [
            FiniteWeight::from_ints(&[2, 0]),
            FiniteWeight::from_ints(&[0, 1]),
            FiniteWeight::from_ints(&[1, 1]),
            FiniteWeight::from_ints(&[0, 0]),
        ];
        v.sort();
        assert_eq!(v[0], FiniteWeight::from_ints(&[0, 0]));
        assert_eq!(v[1], FiniteWeight::from_ints(&[0, 1]));
        assert_eq!(v[2], FiniteWeight::from_ints(&[1, 1]));
    }
}
