use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::chain::{run_chain, ChainOutput};
use super::config::{AnchorMode, ChainConfig, ChainState, ChainStats, RandomStream};
use super::extend::extend_unchecked;
use crate::error::{domain, Error, Result};
use crate::point::TropicalPoint;
use crate::polytope::TropicalPolytope;
use crate::segment::TropicalSegment;

/// A Markov transition producing one emission from `state.current`.
///
/// Implementations must leave `state.current` untouched; the driving
/// [`Chain`](super::Chain) stores the returned point.
pub trait Kernel {
    fn validate(&self, _polytope: &TropicalPolytope) -> Result<()> {
        Ok(())
    }

    fn emit(
        &self,
        polytope: &TropicalPolytope,
        state: &mut ChainState,
        cfg: &ChainConfig,
        stats: &mut ChainStats,
    ) -> Result<TropicalPoint>;
}

/// Hit-and-run kernels over `tconv(V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarKernel {
    /// Segment between two random vertices, then a segment to the anchor.
    VertexPair,
    /// Chain of segments through `nu` distinct random vertices.
    VertexNu(usize),
    /// All vertices in random order, with extended segments and rejection.
    VertexExtended,
    /// Segment from a random vertex through the projection onto the others.
    Extrapolation,
    /// Segment between the projections onto a random split of the vertices.
    ExtrapolationSubset,
}

impl HarKernel {
    pub const NAMES: [&'static str; 5] = [
        "vertex2",
        "vertexnu",
        "vertex-ext",
        "extrapolation",
        "extrapolation-subset",
    ];

    /// Parses a kernel name; `nu` is only read by `vertexnu`.
    pub fn from_name(name: &str, nu: Option<usize>) -> Result<Self> {
        Ok(match name {
            "vertex2" => HarKernel::VertexPair,
            "vertexnu" => HarKernel::VertexNu(nu.ok_or_else(|| domain("vertexnu needs nu"))?),
            "vertex-ext" => HarKernel::VertexExtended,
            "extrapolation" => HarKernel::Extrapolation,
            "extrapolation-subset" => HarKernel::ExtrapolationSubset,
            other => return Err(domain(alloc::format!("unknown kernel `{other}`"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            HarKernel::VertexPair => "vertex2",
            HarKernel::VertexNu(_) => "vertexnu",
            HarKernel::VertexExtended => "vertex-ext",
            HarKernel::Extrapolation => "extrapolation",
            HarKernel::ExtrapolationSubset => "extrapolation-subset",
        }
    }

    /// Whether the proposal is symmetric, as required of a filter base.
    pub fn is_symmetric(&self) -> bool {
        matches!(
            self,
            HarKernel::Extrapolation | HarKernel::ExtrapolationSubset
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        p: &TropicalPolytope,
        x: &TropicalPoint,
        anchor: &TropicalPoint,
        rng: &mut RandomStream,
        cfg: &ChainConfig,
        stats: &mut ChainStats,
        step: u64,
    ) -> Result<TropicalPoint> {
        let vs = p.vertices();
        let s = vs.len();
        let seg = |a: &TropicalPoint, b: &TropicalPoint| {
            TropicalSegment::new(a.clone(), b.clone()).expect("dimensions checked")
        };
        match *self {
            HarKernel::VertexPair => {
                let i = rng.random_range(0..s);
                let mut j = rng.random_range(0..s - 1);
                if j >= i {
                    j += 1;
                }
                let v = seg(&vs[i], &vs[j]).sample(rng);
                Ok(seg(anchor, &v).sample(rng))
            }
            HarKernel::VertexNu(nu) => {
                let mut idx: Vec<usize> = (0..s).collect();
                let (chosen, _) = idx.partial_shuffle(rng, nu);
                let mut v = seg(&vs[chosen[0]], &vs[chosen[1]]).sample(rng);
                for &k in &chosen[2..] {
                    v = seg(&v, &vs[k]).sample(rng);
                }
                Ok(seg(anchor, &v).sample(rng))
            }
            HarKernel::VertexExtended => {
                let mut perm: Vec<usize> = (0..s).collect();
                perm.shuffle(rng);
                let mut v = seg(&vs[perm[0]], &vs[perm[1]]).sample(rng);
                for &k in &perm[2..] {
                    v = extended_draw(p, &seg(&v, &vs[k]), rng, cfg, stats, step)?;
                }
                extended_draw(p, &seg(x, &v), rng, cfg, stats, step)
            }
            HarKernel::Extrapolation => {
                let i = rng.random_range(0..s);
                let w = p.project_excluding_unchecked(i, x).point;
                Ok(seg(&vs[i], &w).sample(rng))
            }
            HarKernel::ExtrapolationSubset => {
                let mut in_u = alloc::vec![false; s];
                loop {
                    for b in in_u.iter_mut() {
                        *b = rng.random();
                    }
                    if in_u.iter().any(|b| *b) && !in_u.iter().all(|b| *b) {
                        break;
                    }
                }
                let (a, b) = p.project_subset_unchecked(&in_u, x);
                Ok(seg(&a.point, &b.point).sample(rng))
            }
        }
    }
}

/// Draws on the extension of `seg` until the draw lands in `p`.
fn extended_draw(
    p: &TropicalPolytope,
    seg: &TropicalSegment,
    rng: &mut RandomStream,
    cfg: &ChainConfig,
    stats: &mut ChainStats,
    step: u64,
) -> Result<TropicalPoint> {
    if seg.is_degenerate() {
        return Ok(seg.v().clone());
    }
    let (u2, v2) = extend_unchecked(seg, cfg.extension_scale);
    let ext = TropicalSegment::new(u2, v2)?;
    let mut rejects = 0u64;
    loop {
        let y = ext.sample(rng);
        if p.distance_to(&y) <= cfg.tol {
            return Ok(y);
        }
        stats.rejected += 1;
        rejects += 1;
        if rejects >= cfg.max_rejects {
            return Err(Error::Mixing { rejects, step });
        }
    }
}

impl Kernel for HarKernel {
    fn validate(&self, p: &TropicalPolytope) -> Result<()> {
        if let HarKernel::VertexNu(nu) = *self {
            let s = p.num_vertices();
            if nu < 2 || nu > s {
                return Err(Error::Range {
                    value: nu as f64,
                    lo: 2.0,
                    hi: s as f64,
                });
            }
        }
        Ok(())
    }

    fn emit(
        &self,
        p: &TropicalPolytope,
        state: &mut ChainState,
        cfg: &ChainConfig,
        stats: &mut ChainStats,
    ) -> Result<TropicalPoint> {
        let start = state.current.clone();
        if p.num_vertices() < 2 {
            return Ok(start);
        }
        let mut x = start.clone();
        for _ in 0..cfg.iterations {
            let anchor = match cfg.anchor {
                AnchorMode::Walking => &x,
                AnchorMode::Fixed => &start,
            };
            let next = self.step(p, &x, anchor, &mut state.rng, cfg, stats, state.step_count)?;
            x = next;
            state.step_count += 1;
            stats.inner_steps += 1;
        }
        Ok(x)
    }
}

pub fn har_vertex_pair(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    run_chain(&HarKernel::VertexPair, p, x0, cfg)
}

pub fn har_vertex_nu(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    nu: usize,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    run_chain(&HarKernel::VertexNu(nu), p, x0, cfg)
}

pub fn har_vertex_extended(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    run_chain(&HarKernel::VertexExtended, p, x0, cfg)
}

pub fn har_extrapolation(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    run_chain(&HarKernel::Extrapolation, p, x0, cfg)
}

pub fn har_extrapolation_subset(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    run_chain(&HarKernel::ExtrapolationSubset, p, x0, cfg)
}
