use crate::error::{Error, Result};
use crate::point::TropicalPoint;
use crate::segment::TropicalSegment;

/// Stretches the two end pieces of `Γ(u, v)` by the factor `d`.
///
/// With `b_u`, `b_v` the breakpoints next to `u` and `v` (the opposite
/// endpoint when there is no interior breakpoint), returns
/// `u' = b_u + d (u - b_u)` and `v' = b_v + d (v - b_v)`. The interior
/// breakpoints are unchanged and `Γ(u, v) ⊆ Γ(u', v')`; `d = 1` is the identity.
pub fn extend_segment(
    u: &TropicalPoint,
    v: &TropicalPoint,
    d: f64,
) -> Result<(TropicalPoint, TropicalPoint)> {
    if !(d >= 1.0 && d.is_finite()) {
        return Err(Error::Range {
            value: d,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let seg = TropicalSegment::new(u.clone(), v.clone())?;
    if seg.is_degenerate() {
        return Err(Error::DegenerateSegment);
    }
    Ok(extend_unchecked(&seg, d))
}

pub(crate) fn extend_unchecked(seg: &TropicalSegment, d: f64) -> (TropicalPoint, TropicalPoint) {
    let bps = seg.breakpoints();
    let n = bps.len();
    let stretch = |end: &TropicalPoint, b: &TropicalPoint| {
        let raw = end
            .as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(e, b)| b + d * (e - b))
            .collect();
        TropicalPoint::from_raw_unchecked(raw)
    };
    (stretch(seg.u(), &bps[n - 2]), stretch(seg.v(), &bps[1]))
}
