//! Tropical line segments `Γ(u, v) = { ℓ ⊙ u ⊕ v : ℓ ∈ [min(v-u), max(v-u)] }`.
//!
//! The parameter `ℓ` is an arc length: `d_tr(v, x(ℓ)) = ℓ - min(v - u)`, so a
//! uniform `ℓ` gives the uniform law on the segment.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::point::{diff_range, TropicalPoint};
use crate::EQ_TOL;

#[derive(Debug, Clone)]
pub struct TropicalSegment {
    u: TropicalPoint,
    v: TropicalPoint,
    lo: f64,
    hi: f64,
}

impl TropicalSegment {
    pub fn new(u: TropicalPoint, v: TropicalPoint) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::Dimension {
                expected: u.dim(),
                found: v.dim(),
            });
        }
        let (lo, hi) = diff_range(v.as_slice(), u.as_slice());
        Ok(TropicalSegment { u, v, lo, hi })
    }

    pub fn u(&self) -> &TropicalPoint {
        &self.u
    }

    pub fn v(&self) -> &TropicalPoint {
        &self.v
    }

    /// Admissible range of `ℓ`.
    pub fn ell_range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Tropical length, equal to `d_tr(u, v)`.
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() <= EQ_TOL
    }

    pub fn point_at(&self, ell: f64) -> Result<TropicalPoint> {
        if !(ell >= self.lo && ell <= self.hi) {
            return Err(Error::Range {
                value: ell,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(self.point_at_unchecked(ell))
    }

    pub(crate) fn point_at_unchecked(&self, ell: f64) -> TropicalPoint {
        TropicalPoint::from_raw_unchecked(max_plus_point(self.u.as_slice(), self.v.as_slice(), ell))
    }

    /// Ordered from `v` to `u`; consecutive entries differ on one fixed
    /// coordinate block.
    pub fn breakpoints(&self) -> Vec<TropicalPoint> {
        let mut ells: Vec<f64> = self
            .v
            .as_slice()
            .iter()
            .zip(self.u.as_slice())
            .map(|(a, b)| a - b)
            .collect();
        ells.sort_by(f64::total_cmp);
        ells.dedup_by(|a, b| (*a - *b).abs() <= EQ_TOL);
        let last = ells.len() - 1;
        ells.iter()
            .enumerate()
            .map(|(k, &ell)| match k {
                0 => self.v.clone(),
                k if k == last => self.u.clone(),
                _ => self.point_at_unchecked(ell),
            })
            .collect()
    }

    /// Uniform draw with respect to tropical arc length.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TropicalPoint {
        self.point_at_unchecked(draw_ell(self.lo, self.hi, rng))
    }
}

/// `max(ℓ + u, v)` on raw vectors, without canonicalization.
pub fn max_plus_point(u: &[f64], v: &[f64], ell: f64) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| (ell + a).max(*b)).collect()
}

pub(crate) fn draw_ell<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    let t: f64 = rng.random();
    (lo + t * (hi - lo)).min(hi)
}

pub fn segment_breakpoints(u: &TropicalPoint, v: &TropicalPoint) -> Result<Vec<TropicalPoint>> {
    Ok(TropicalSegment::new(u.clone(), v.clone())?.breakpoints())
}

/// `ℓ ⊙ u ⊕ v`, canonicalized. `ℓ` is read against the representatives
/// given, so raw vectors and canonical points give different ranges.
pub fn segment_point_at<U: AsRef<[f64]> + ?Sized, V: AsRef<[f64]> + ?Sized>(
    u: &U,
    v: &V,
    ell: f64,
) -> Result<TropicalPoint> {
    let (u, v) = (u.as_ref(), v.as_ref());
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            found: v.len(),
        });
    }
    TropicalPoint::new(u)?;
    TropicalPoint::new(v)?;
    let (lo, hi) = diff_range(v, u);
    if !(ell >= lo && ell <= hi) {
        return Err(Error::Range { value: ell, lo, hi });
    }
    Ok(TropicalPoint::from_raw_unchecked(max_plus_point(u, v, ell)))
}

pub fn sample_segment<R: Rng + ?Sized>(
    u: &TropicalPoint,
    v: &TropicalPoint,
    rng: &mut R,
) -> Result<TropicalPoint> {
    Ok(TropicalSegment::new(u.clone(), v.clone())?.sample(rng))
}
