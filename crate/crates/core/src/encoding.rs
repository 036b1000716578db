//! Permutation genotype and the dimension-adaptation rules used when an
//! individual moves between task spaces of different sizes.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordering of the city ids `1..=dimension`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates that `order` is a bijection on `1..=order.len()`.
    pub fn new(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::InvalidPermutation {
                dimension: 0,
                reason: "empty".into(),
            });
        }
        let mut seen = vec![false; n];
        for &v in &order {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation {
                    dimension: n,
                    reason: format!("value {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation {
                    dimension: n,
                    reason: format!("value {v} repeated"),
                });
            }
        }
        Ok(Permutation(order))
    }

    /// Trusted constructor for operator outputs that preserve bijectivity.
    pub(crate) fn from_vec_unchecked(order: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(order.clone()).is_ok());
        Permutation(order)
    }

    pub fn identity(dimension: usize) -> Self {
        Permutation((1..=dimension as u32).collect())
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn is_valid(&self) -> bool {
        Permutation::new(self.0.clone()).is_ok()
    }

    /// Keeps only the values `1..=target_dim`, in their original relative order.
    pub fn project(&self, target_dim: usize) -> Result<Permutation> {
        if target_dim == 0 || target_dim > self.dimension() {
            return Err(Error::ProjectionOutOfRange {
                target: target_dim,
                source_dim: self.dimension(),
            });
        }
        let limit = target_dim as u32;
        let order: Vec<u32> = self.0.iter().copied().filter(|&v| v <= limit).collect();
        Ok(Permutation(order))
    }

    /// Grows `self` to the dimension of `replaced`.
    ///
    /// Every value larger than `self.dimension()` stays at the position it
    /// holds in `replaced`; the free positions receive `self`'s values in
    /// order.
    pub fn inflate(&self, replaced: &Permutation) -> Result<Permutation> {
        let small = self.dimension();
        if small > replaced.dimension() {
            return Err(Error::DimensionMismatch {
                expected: replaced.dimension(),
                actual: small,
            });
        }
        let limit = small as u32;
        let mut fill = self.0.iter();
        let order = replaced
            .0
            .iter()
            .map(|&v| {
                if v > limit {
                    v
                } else {
                    *fill.next().expect("free slots equal source dimension")
                }
            })
            .collect();
        Ok(Permutation(order))
    }

    pub fn reversed(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn rotated(&self, k: usize) -> Permutation {
        let mut v = self.0.clone();
        let n = v.len();
        v.rotate_left(k % n);
        Permutation(v)
    }
}

/// Uniform random permutation of `1..=dim` (Fisher–Yates).
pub fn random_permutation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Permutation {
    assert!(dim >= 1, "permutation dimension must be positive");
    let mut order: Vec<u32> = (1..=dim as u32).collect();
    order.shuffle(rng);
    Permutation(order)
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// Comma-separated 1-based ids, e.g. `3,1,2`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPermutation {
                        dimension: 0,
                        reason: format!("bad token `{t}`"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(order)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
