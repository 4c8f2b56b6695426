//! Agglomerative clustering on a dense distance matrix.
//!
//! Each step merges the closest pair of active clusters; ties go to the
//! lexicographically smallest pair of cluster ids, where a cluster's id is
//! its smallest leaf. Each row caches its nearest later neighbour, so a merge
//! usually costs `O(m)` and a full run `O(m²)`.

use alloc::vec::Vec;

use super::{pair_index, DissimilarityMap, Ultrametric};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Linkage {
    /// Size-weighted average (UPGMA).
    Average,
    Single,
}

/// One merge: clusters `a < b` joined at distance `dist`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Merge {
    pub a: usize,
    pub b: usize,
    pub dist: f64,
}

pub(crate) fn agglomerate(m: usize, values: &[f64], linkage: Linkage) -> Vec<Merge> {
    let mut d = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let x = values[pair_index(m, i, j)];
            d[i * m + j] = x;
            d[j * m + i] = x;
        }
    }
    let mut active = alloc::vec![true; m];
    let mut size = alloc::vec![1usize; m];
    let mut floor = alloc::vec![f64::NEG_INFINITY; m];
    let mut nn: Vec<(f64, usize)> = (0..m).map(|i| nearest(&d, &active, m, i)).collect();
    let mut merges = Vec::with_capacity(m.saturating_sub(1));

    for _ in 1..m {
        let mut a = usize::MAX;
        for i in 0..m {
            if active[i] && nn[i].1 != usize::MAX && (a == usize::MAX || nn[i].0 < nn[a].0) {
                a = i;
            }
        }
        let b = nn[a].1;
        let dist = nn[a].0.max(floor[a]).max(floor[b]);
        merges.push(Merge { a, b, dist });

        let (na, nb) = (size[a] as f64, size[b] as f64);
        for k in 0..m {
            if !active[k] || k == a || k == b {
                continue;
            }
            let (x, y) = (d[a * m + k], d[b * m + k]);
            let z = match linkage {
                _ if x == y => x,
                Linkage::Average => (na * x + nb * y) / (na + nb),
                Linkage::Single => x.min(y),
            };
            d[a * m + k] = z;
            d[k * m + a] = z;
        }
        active[b] = false;
        size[a] += size[b];
        floor[a] = dist;

        for i in 0..m {
            if !active[i] {
                continue;
            }
            if i == a || nn[i].1 == a || nn[i].1 == b {
                nn[i] = nearest(&d, &active, m, i);
            } else if i < a && (d[i * m + a], a) < nn[i] {
                nn[i] = (d[i * m + a], a);
            }
        }
    }
    merges
}

/// Closest active `j > i`, smallest `j` on ties.
fn nearest(d: &[f64], active: &[bool], m: usize, i: usize) -> (f64, usize) {
    let mut best = (f64::INFINITY, usize::MAX);
    for j in i + 1..m {
        if active[j] && (best.1 == usize::MAX || d[i * m + j] < best.0) {
            best = (d[i * m + j], j);
        }
    }
    best
}

/// Pair vector whose entry `{p, q}` is the distance at which `p` and `q`
/// first share a cluster.
pub(crate) fn cophenetic(m: usize, merges: &[Merge]) -> Vec<f64> {
    let mut members: Vec<Vec<usize>> = (0..m).map(|i| alloc::vec![i]).collect();
    let mut out = alloc::vec![0.0; super::pair_count(m)];
    for mg in merges {
        let bs = core::mem::take(&mut members[mg.b]);
        for &p in &members[mg.a] {
            for &q in &bs {
                out[pair_index(m, p, q)] = mg.dist;
            }
        }
        members[mg.a].extend(bs);
    }
    out
}

pub(crate) fn upgma_values(m: usize, values: &[f64]) -> Vec<f64> {
    cophenetic(m, &agglomerate(m, values, Linkage::Average))
}

/// Average-linkage clustering, returned as the cophenetic ultrametric.
pub fn upgma(map: &DissimilarityMap) -> Result<Ultrametric> {
    let m = map.leaves();
    Ok(Ultrametric::new_unchecked(m, upgma_values(m, map.values())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn three_leaf_example() {
        let u = upgma(&DissimilarityMap::from_values(vec![2.0, 4.0, 6.0]).unwrap()).unwrap();
        assert_eq!(u.values(), &[2.0, 5.0, 5.0]);
    }

    #[test]
    fn ultrametric_is_a_fixed_point() {
        let v = vec![4.0, 4.0, 4.0, 4.0, 2.0, 2.0, 2.0, 1.6, 1.6, 0.6];
        let u = upgma(&DissimilarityMap::from_values(v.clone()).unwrap()).unwrap();
        assert_eq!(u.values(), &v[..]);
    }

    #[test]
    fn ties_take_the_smallest_pair() {
        // d(0,1) = d(0,2) = 1: merging {0,1} first gives d({0,1},2) = 2.
        let u = upgma(&DissimilarityMap::from_values(vec![1.0, 1.0, 3.0]).unwrap()).unwrap();
        assert_eq!(u.values(), &[1.0, 2.0, 2.0]);
    }

    #[test]
    fn single_linkage_merges() {
        let merges = agglomerate(3, &[2.0, 4.0, 6.0], Linkage::Single);
        assert_eq!((merges[0].a, merges[0].b, merges[0].dist), (0, 1, 2.0));
        assert_eq!((merges[1].a, merges[1].b, merges[1].dist), (0, 2, 4.0));
    }
}
