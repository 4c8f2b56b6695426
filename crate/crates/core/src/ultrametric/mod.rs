//! Dissimilarity maps on `m` leaves, ultrametrics, equidistant trees and a
//! hit-and-run sampler on the space of ultrametrics.
//!
//! Maps are pair vectors of length `m(m-1)/2` in lexicographic pair order
//! `(0,1), (0,2), …, (0,m-1), (1,2), …`.

mod cluster;
mod har;
mod tree;

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};

pub use cluster::upgma;
pub use har::{har_ultrametric, TreeHarParams, UltrametricChain};
pub use tree::{
    rooted_binary_topologies, topology_histogram, topology_of, tree_from_ultrametric,
    EquidistantTree, TreeNode, TreeTopology, DEFAULT_TIE_TOL,
};

/// Number of leaf pairs.
pub const fn pair_count(m: usize) -> usize {
    m * (m.saturating_sub(1)) / 2
}

/// Position of the pair `{i, j}` (`i != j`) in the pair vector.
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < m && i != j);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// Leaf count for a pair vector of length `len`, if there is one.
pub fn leaves_for_len(len: usize) -> Option<usize> {
    let mut m = 3;
    while pair_count(m) < len {
        m += 1;
    }
    (pair_count(m) == len).then_some(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMap {
    m: usize,
    values: Vec<f64>,
}

impl DissimilarityMap {
    /// Values must be finite and positive.
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self> {
        if m < 3 {
            return Err(domain("a dissimilarity map needs at least three leaves"));
        }
        if values.len() != pair_count(m) {
            return Err(Error::Dimension {
                expected: pair_count(m),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(domain("dissimilarities must be finite and positive"));
        }
        Ok(DissimilarityMap { m, values })
    }

    /// Infers `m` from the vector length.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let m = leaves_for_len(values.len())
            .ok_or_else(|| domain("length is not a pair count m(m-1)/2"))?;
        Self::new(m, values)
    }

    pub fn leaves(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[pair_index(self.m, i, j)]
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_ultrametric(&self, tol: f64) -> bool {
        is_ultrametric(self, tol)
    }
}

/// Three-point condition: in every triple the maximum is attained at least
/// twice, up to `tol`.
pub fn is_ultrametric(d: &DissimilarityMap, tol: f64) -> bool {
    ultrametric_values(d.m, &d.values, tol)
}

pub(crate) fn ultrametric_values(m: usize, v: &[f64], tol: f64) -> bool {
    for i in 0..m {
        for j in i + 1..m {
            let dij = v[pair_index(m, i, j)];
            for k in j + 1..m {
                let dik = v[pair_index(m, i, k)];
                let djk = v[pair_index(m, j, k)];
                let mut t = [dij, dik, djk];
                t.sort_by(f64::total_cmp);
                if t[2] - t[1] > tol {
                    return false;
                }
            }
        }
    }
    true
}

/// A dissimilarity map known to satisfy the three-point condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Ultrametric(DissimilarityMap);

impl Ultrametric {
    pub fn new(map: DissimilarityMap, tol: f64) -> Result<Self> {
        if !map.is_ultrametric(tol) {
            return Err(Error::NotUltrametric { tol });
        }
        Ok(Ultrametric(map))
    }

    pub(crate) fn new_unchecked(m: usize, values: Vec<f64>) -> Self {
        Ultrametric(DissimilarityMap { m, values })
    }

    pub fn as_map(&self) -> &DissimilarityMap {
        &self.0
    }

    pub fn into_map(self) -> DissimilarityMap {
        self.0
    }

    pub fn leaves(&self) -> usize {
        self.0.m
    }

    pub fn values(&self) -> &[f64] {
        &self.0.values
    }
}
