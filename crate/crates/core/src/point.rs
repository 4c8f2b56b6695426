//! Points of the tropical projective torus and the max-plus operations on them.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use crate::error::{domain, Error, Result};

/// A point of `R^e / R·1`, kept in canonical form (`coords[0] == 0`).
#[derive(Clone, PartialEq)]
pub struct TropicalPoint {
    coords: Vec<f64>,
}

impl TropicalPoint {
    /// Canonicalizes `raw`. Needs `e >= 2` finite coordinates.
    pub fn new(raw: &[f64]) -> Result<Self> {
        canonicalize(raw)
    }

    /// Takes ownership of `raw` and shifts it in place.
    pub fn from_vec(mut raw: Vec<f64>) -> Result<Self> {
        check_raw(&raw)?;
        shift_to_canonical(&mut raw);
        Ok(TropicalPoint { coords: raw })
    }

    /// Caller guarantees finiteness and `e >= 2`; the vector is still shifted.
    pub(crate) fn from_raw_unchecked(mut raw: Vec<f64>) -> Self {
        shift_to_canonical(&mut raw);
        TropicalPoint { coords: raw }
    }

    pub fn zero(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: dim,
            });
        }
        Ok(TropicalPoint {
            coords: alloc::vec![0.0; dim],
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    /// Tropical distance to `other`. Panics if the dimensions differ.
    pub fn distance_to(&self, other: &TropicalPoint) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        raw_dist(&self.coords, &other.coords)
    }

    /// Coordinatewise comparison of canonical forms.
    pub fn approx_eq(&self, other: &TropicalPoint, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl AsRef<[f64]> for TropicalPoint {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

impl Index<usize> for TropicalPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl fmt::Debug for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("TropicalPoint").field(&self.coords).finish()
    }
}

impl fmt::Display for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn check_raw(raw: &[f64]) -> Result<()> {
    if raw.len() < 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: raw.len(),
        });
    }
    if raw.iter().any(|c| !c.is_finite()) {
        return Err(domain("coordinates must be finite"));
    }
    Ok(())
}

fn shift_to_canonical(v: &mut [f64]) {
    let c = v[0];
    for x in v.iter_mut() {
        *x -= c;
    }
    v[0] = 0.0;
}

/// `x - x_1·1`.
pub fn canonicalize(raw: &[f64]) -> Result<TropicalPoint> {
    TropicalPoint::from_vec(raw.to_vec())
}

fn same_dim(a: &TropicalPoint, b: &TropicalPoint) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Tropical sum: coordinatewise max.
pub fn trop_add(a: &TropicalPoint, b: &TropicalPoint) -> Result<TropicalPoint> {
    same_dim(a, b)?;
    let raw = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| x.max(*y))
        .collect();
    Ok(TropicalPoint::from_raw_unchecked(raw))
}

/// `c ⊙ a`. In the torus this is the identity, but `c` must still be finite.
pub fn trop_scale(c: f64, a: &TropicalPoint) -> Result<TropicalPoint> {
    if !c.is_finite() {
        return Err(domain("scalar must be finite"));
    }
    Ok(a.clone())
}

/// `⊕_l λ_l ⊙ v^l`.
pub fn trop_lin_combo(lambdas: &[f64], points: &[TropicalPoint]) -> Result<TropicalPoint> {
    if points.is_empty() {
        return Err(domain("empty point list"));
    }
    if lambdas.len() != points.len() {
        return Err(Error::Dimension {
            expected: points.len(),
            found: lambdas.len(),
        });
    }
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(domain("coefficients must be finite"));
    }
    let e = points[0].dim();
    let mut out = alloc::vec![f64::NEG_INFINITY; e];
    for (l, p) in lambdas.iter().zip(points) {
        same_dim(&points[0], p)?;
        for (o, c) in out.iter_mut().zip(&p.coords) {
            *o = o.max(l + c);
        }
    }
    Ok(TropicalPoint::from_raw_unchecked(out))
}

/// `max(a - b) - min(a - b)`.
pub fn trop_dist(a: &TropicalPoint, b: &TropicalPoint) -> Result<f64> {
    same_dim(a, b)?;
    Ok(raw_dist(&a.coords, &b.coords))
}

/// Tropical distance on raw (not necessarily canonical) vectors of equal length.
pub fn raw_dist(a: &[f64], b: &[f64]) -> f64 {
    let (lo, hi) = diff_range(a, b);
    hi - lo
}

/// `(min(a - b), max(a - b))`.
pub(crate) fn diff_range(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}
