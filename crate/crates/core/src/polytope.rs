//! Tropical polytopes `tconv(V)`, projections onto them and tropical balls.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::point::{raw_dist, TropicalPoint};

/// Default membership tolerance.
pub const CONTAINS_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct TropicalPolytope {
    vertices: Vec<TropicalPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub point: TropicalPoint,
    /// One coefficient per vertex of the polytope projected onto.
    pub lambdas: Vec<f64>,
    pub distance: f64,
}

/// Coordinate ranges of the vertices. Entry 0 is always `[0, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn contains(&self, x: &TropicalPoint) -> bool {
        x.as_slice()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (lo, hi))| *c >= *lo && *c <= *hi)
    }

    /// Product of the side lengths over coordinates `1..e`.
    pub fn volume(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .skip(1)
            .map(|(l, h)| h - l)
            .product()
    }
}

impl TropicalPolytope {
    pub fn new(vertices: Vec<TropicalPoint>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| domain("polytope needs at least one vertex"))?;
        let e = first.dim();
        if let Some(bad) = vertices.iter().find(|v| v.dim() != e) {
            return Err(Error::Dimension {
                expected: e,
                found: bad.dim(),
            });
        }
        Ok(TropicalPolytope { vertices })
    }

    /// Rows are canonicalized on the way in.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let vs = rows
            .iter()
            .map(|r| TropicalPoint::new(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vs)
    }

    pub fn vertices(&self) -> &[TropicalPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &TropicalPoint {
        &self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    fn check_point(&self, x: &TropicalPoint) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// `π_P(x) = ⊕_l λ_l ⊙ v^l` with `λ_l = min(x - v^l)`.
    pub fn project(&self, x: &TropicalPoint) -> Result<ProjectionResult> {
        self.check_point(x)?;
        Ok(project_onto(self.vertices.iter(), x))
    }

    pub fn contains(&self, x: &TropicalPoint, tol: f64) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.distance_to(x) <= tol)
    }

    /// `d_tr(x, π_P(x))` without building the coefficient vector.
    pub fn distance_to(&self, x: &TropicalPoint) -> f64 {
        raw_dist(
            x.as_slice(),
            &project_raw(self.vertices.iter(), x.as_slice()),
        )
    }

    /// Whether `x_j <= x_k + min_l (v^l_j - v^l_k)` for all `k`; on that
    /// region the projection is the constant point [`Self::region_point`].
    pub fn in_projection_region(&self, j: usize, x: &TropicalPoint) -> Result<bool> {
        self.check_point(x)?;
        let e = self.dim();
        if j >= e {
            return Err(Error::Index { index: j, len: e });
        }
        let xs = x.as_slice();
        Ok((0..e).all(|k| {
            let m = self
                .vertices
                .iter()
                .map(|v| v[j] - v[k])
                .fold(f64::INFINITY, f64::min);
            xs[j] <= xs[k] + m
        }))
    }

    /// `max_l (v^l_i - v^l_j)`, the image of the `j`-th projection region.
    pub fn region_point(&self, j: usize) -> Result<TropicalPoint> {
        let e = self.dim();
        if j >= e {
            return Err(Error::Index { index: j, len: e });
        }
        let raw = (0..e)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i] - v[j])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        Ok(TropicalPoint::from_raw_unchecked(raw))
    }

    /// Projection onto `tconv(V \ {v^i})`.
    pub fn project_excluding(&self, i: usize, x: &TropicalPoint) -> Result<ProjectionResult> {
        self.check_point(x)?;
        let s = self.num_vertices();
        if s < 2 {
            return Err(domain("excluding a vertex needs at least two vertices"));
        }
        if i >= s {
            return Err(Error::Index { index: i, len: s });
        }
        Ok(self.project_excluding_unchecked(i, x))
    }

    pub(crate) fn project_excluding_unchecked(
        &self,
        i: usize,
        x: &TropicalPoint,
    ) -> ProjectionResult {
        project_onto(
            self.vertices
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != i)
                .map(|(_, v)| v),
            x,
        )
    }

    /// Projections onto `tconv(U)` and `tconv(V \ U)`, where `in_u[l]` marks
    /// membership of vertex `l` in `U`.
    pub fn project_subset(
        &self,
        in_u: &[bool],
        x: &TropicalPoint,
    ) -> Result<(ProjectionResult, ProjectionResult)> {
        self.check_point(x)?;
        let s = self.num_vertices();
        if in_u.len() != s {
            return Err(Error::Dimension {
                expected: s,
                found: in_u.len(),
            });
        }
        if in_u.iter().all(|b| *b) || in_u.iter().all(|b| !*b) {
            return Err(domain("subset must be nonempty and proper"));
        }
        Ok(self.project_subset_unchecked(in_u, x))
    }

    pub(crate) fn project_subset_unchecked(
        &self,
        in_u: &[bool],
        x: &TropicalPoint,
    ) -> (ProjectionResult, ProjectionResult) {
        let side = |flag: bool| {
            project_onto(
                self.vertices
                    .iter()
                    .zip(in_u)
                    .filter(|(_, b)| **b == flag)
                    .map(|(v, _)| v),
                x,
            )
        };
        (side(true), side(false))
    }

    pub fn bounding_box(&self) -> BoundingBox {
        let e = self.dim();
        let mut lo = alloc::vec![f64::INFINITY; e];
        let mut hi = alloc::vec![f64::NEG_INFINITY; e];
        for v in &self.vertices {
            for i in 0..e {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        BoundingBox { lo, hi }
    }
}

fn project_onto<'a>(
    vs: impl Iterator<Item = &'a TropicalPoint> + Clone,
    x: &TropicalPoint,
) -> ProjectionResult {
    let xs = x.as_slice();
    let lambdas: Vec<f64> = vs
        .clone()
        .map(|v| {
            xs.iter()
                .zip(v.as_slice())
                .map(|(a, b)| a - b)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut raw = alloc::vec![f64::NEG_INFINITY; xs.len()];
    for (l, v) in lambdas.iter().zip(vs) {
        for (o, c) in raw.iter_mut().zip(v.as_slice()) {
            *o = o.max(l + c);
        }
    }
    let distance = raw_dist(xs, &raw);
    ProjectionResult {
        point: TropicalPoint::from_raw_unchecked(raw),
        lambdas,
        distance,
    }
}

fn project_raw<'a>(vs: impl Iterator<Item = &'a TropicalPoint>, xs: &[f64]) -> Vec<f64> {
    let mut raw = alloc::vec![f64::NEG_INFINITY; xs.len()];
    for v in vs {
        let l = xs
            .iter()
            .zip(v.as_slice())
            .map(|(a, b)| a - b)
            .fold(f64::INFINITY, f64::min);
        for (o, c) in raw.iter_mut().zip(v.as_slice()) {
            *o = o.max(l + c);
        }
    }
    raw
}

/// Closed ball `{ y : d_tr(center, y) <= radius }`.
#[derive(Debug, Clone)]
pub struct TropicalBall {
    center: TropicalPoint,
    radius: f64,
}

impl TropicalBall {
    pub fn new(center: TropicalPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(domain("radius must be positive and finite"));
        }
        Ok(TropicalBall { center, radius })
    }

    pub fn center(&self) -> &TropicalPoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, y: &TropicalPoint) -> Result<bool> {
        if y.dim() != self.center.dim() {
            return Err(Error::Dimension {
                expected: self.center.dim(),
                found: y.dim(),
            });
        }
        Ok(self.center.distance_to(y) <= self.radius)
    }
}

/// Free-function form of [`TropicalBall::contains`].
pub fn ball_contains(ball: &TropicalBall, y: &TropicalPoint) -> Result<bool> {
    ball.contains(y)
}
