//! Two-sample chi-square on 2D histograms and one-sample KS against a uniform.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{CliError, Result};

/// Bins whose smaller expected count falls below this are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2D {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub bins: usize,
}

impl Grid2D {
    /// Counts per cell, row-major in `x`. Points outside the grid land in the
    /// nearest edge cell.
    pub fn histogram(&self, pts: impl IntoIterator<Item = (f64, f64)>) -> Vec<u64> {
        let k = self.bins;
        let cell = |v: f64, (lo, hi): (f64, f64)| {
            let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
            ((t * k as f64).floor().max(0.0) as usize).min(k - 1)
        };
        let mut h = vec![0u64; k * k];
        for (a, b) in pts {
            h[cell(a, self.x) * k + cell(b, self.y)] += 1;
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Cells left after dropping empty ones and pooling sparse ones.
    pub bins_used: usize,
}

/// Homogeneity test for two histograms over the same cells.
pub fn chi_square_counts(a: &[u64], b: &[u64]) -> Result<ChiSquare> {
    assert_eq!(a.len(), b.len(), "histograms must share cells");
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(CliError::Degenerate("empty sample".into()));
    }
    let n = (na + nb) as f64;
    let small = na.min(nb) as f64;
    let sparse = |t: u64| small * t as f64 / n < MIN_EXPECTED;

    let mut groups: Vec<(u64, u64)> = Vec::new();
    let mut pool = (0u64, 0u64);
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        if sparse(x + y) {
            pool = (pool.0 + x, pool.1 + y);
        } else {
            groups.push((x, y));
        }
    }
    if pool.0 + pool.1 > 0 {
        if sparse(pool.0 + pool.1) && !groups.is_empty() {
            let k = (0..groups.len())
                .min_by_key(|&k| groups[k].0 + groups[k].1)
                .unwrap();
            groups[k] = (groups[k].0 + pool.0, groups[k].1 + pool.1);
        } else {
            groups.push(pool);
        }
    }
    if groups.len() < 2 {
        return Err(CliError::Degenerate(format!(
            "{} usable bin(s)",
            groups.len()
        )));
    }

    let (fa, fb) = (na as f64 / n, nb as f64 / n);
    let statistic: f64 = groups
        .iter()
        .map(|&(x, y)| {
            let t = (x + y) as f64;
            let (ea, eb) = (fa * t, fb * t);
            (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb
        })
        .sum();
    let dof = groups.len() - 1;
    let p_value = ChiSquared::new(dof as f64)
        .expect("positive dof")
        .sf(statistic);
    Ok(ChiSquare {
        statistic,
        dof,
        p_value,
        bins_used: groups.len(),
    })
}

/// Bins both samples on `grid` and runs [`chi_square_counts`].
pub fn chi_square_two_sample(
    a: &[(f64, f64)],
    b: &[(f64, f64)],
    grid: &Grid2D,
) -> Result<ChiSquare> {
    chi_square_counts(
        &grid.histogram(a.iter().copied()),
        &grid.histogram(b.iter().copied()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ks {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// One-sample Kolmogorov-Smirnov test against `Uniform[lo, hi]`, with the
/// asymptotic p-value.
pub fn ks_uniform(values: &[f64], lo: f64, hi: f64) -> Result<Ks> {
    if values.is_empty() {
        return Err(CliError::Degenerate("no values".into()));
    }
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(CliError::Degenerate("empty support".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in v.iter().enumerate() {
        let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    let sn = n.sqrt();
    let p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
    Ok(Ks {
        statistic: d,
        p_value,
        n: v.len(),
    })
}

/// `P(K > t)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 1.18 {
        // Jacobi-theta form of the CDF, fast for small t.
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * t * t)).exp();
        let series: f64 = (0..6).map(|k| y.powi((2 * k + 1) * (2 * k + 1))).sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / t * series).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        for k in 1..=100 {
            let term = (-2.0 * (k * k) as f64 * t * t).exp();
            s += if k % 2 == 1 { term } else { -term };
            if term < 1e-16 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Coordinate pairs `(i, j)`, `1 <= i < j < e`, of the canonical form.
pub fn marginal_pairs(e: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..e {
        for j in i + 1..e {
            out.push((i, j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalChiSquare {
    /// 1-based coordinates of the marginal.
    pub coords: (usize, usize),
    #[serde(flatten)]
    pub test: ChiSquare,
}

/// Chi-square on every 2D coordinate marginal, gridded over `lo..hi`.
pub fn marginal_chi_squares(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    lo: &[f64],
    hi: &[f64],
    bins: usize,
) -> Result<Vec<MarginalChiSquare>> {
    let e = lo.len();
    marginal_pairs(e)
        .into_iter()
        .map(|(i, j)| {
            let grid = Grid2D {
                x: (lo[i], hi[i]),
                y: (lo[j], hi[j]),
                bins,
            };
            let proj = |s: &[Vec<f64>]| s.iter().map(|p| (p[i], p[j])).collect::<Vec<_>>();
            let test = chi_square_two_sample(&proj(a), &proj(b), &grid)?;
            Ok(MarginalChiSquare {
                coords: (i + 1, j + 1),
                test,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub seconds_per_sample: f64,
    pub seconds_per_inner_step: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub sample_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_count: Option<usize>,
    pub bins: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chi_square: Vec<MarginalChiSquare>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<Ks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance_rate: Option<f64>,
    pub rejected: u64,
    pub inner_steps: u64,
    pub timing: Timing,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_histograms_give_zero() {
        let h = vec![10, 20, 30, 40];
        let r = chi_square_counts(&h, &h).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.dof, 3);
    }

    #[test]
    fn textbook_contingency_table() {
        // 2 x 3 table with hand-computed expected counts.
        let a = [20, 30, 50];
        let b = [30, 30, 40];
        let r = chi_square_counts(&a, &b).unwrap();
        let expect = 2.0 * (25.0f64 / 25.0) + 0.0 + 2.0 * (25.0 / 45.0);
        assert!((r.statistic - expect).abs() < 1e-12);
        assert_eq!(r.dof, 2);
        assert!((r.p_value - (-expect / 2.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn sparse_cells_are_pooled() {
        let a = [100, 2, 1, 0, 100];
        let b = [100, 1, 2, 0, 100];
        let r = chi_square_counts(&a, &b).unwrap();
        assert_eq!(r.bins_used, 2);
    }

    #[test]
    fn one_usable_bin_is_degenerate() {
        assert!(matches!(
            chi_square_counts(&[10, 0], &[10, 0]),
            Err(CliError::Degenerate(_))
        ));
    }

    #[test]
    fn ks_against_exact_quantiles() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let r = ks_uniform(&v, 0.0, 1.0).unwrap();
        assert!((r.statistic - 0.0005).abs() < 1e-12);
        assert!(r.p_value > 0.999);
        let shifted: Vec<f64> = v.iter().map(|x| x * 0.5).collect();
        assert!(ks_uniform(&shifted, 0.0, 1.0).unwrap().p_value < 1e-10);
        assert!(ks_uniform(&[], 0.0, 1.0).is_err());
        assert_eq!(ks_uniform(&[0.25; 10], 0.25, 1.0).unwrap().statistic, 1.0);
    }

    #[test]
    fn kolmogorov_tail_values() {
        // Standard critical values of the limiting distribution.
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_sf(1.6276) - 0.01).abs() < 1e-4);
        assert!((kolmogorov_sf(1.0) - 0.2700).abs() < 1e-4);
        assert!((kolmogorov_sf(0.5) - 0.9639).abs() < 1e-4);
    }

    #[test]
    fn grid_binning() {
        let g = Grid2D {
            x: (0.0, 1.0),
            y: (0.0, 2.0),
            bins: 2,
        };
        let h = g.histogram([(0.1, 0.1), (0.9, 1.9), (1.0, 2.0), (-5.0, 0.5)]);
        assert_eq!(h, vec![2, 0, 0, 2]);
    }
}
