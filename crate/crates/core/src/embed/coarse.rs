//! Coarse embedding assembled from Gaussian sphere maps, one block per scale.
//!
//! Block `i` uses radius `R = i` and the largest `ε` from a fixed grid for
//! which pairs within distance `i` move at most `δ_i / (i 2^i)`, where `δ_i`
//! is the smallest block distance over pairs at distance `≥ t_i`. The block
//! is then scaled by `i / δ_i` and translated so point 0 goes to zero.

use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{gaussian_dg_map, mazur_map};
use super::{empirical_moduli, EmbeddingMap, ModuliEstimate};
use crate::error::{Error, Result};
use crate::spaces::{lp_norm, FiniteMetricSpace, PointCloud};

pub const DEFAULT_MODULI_BINS: usize = 20;
const EPS_GRID_LEN: usize = 64;
const EPS_MIN: f64 = 1e-4;
const EPS_MAX: f64 = 1.41;

/// Parameters and measured constants of one block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarseBlock {
    pub index: usize,
    pub threshold: f64,
    pub radius: f64,
    pub eps: f64,
    pub bandwidth: f64,
    /// Smallest block distance over pairs at source distance `≥ threshold`.
    pub delta: f64,
    /// Largest block distance over pairs at source distance `≤ radius`.
    pub near_max: f64,
    pub clipped: f64,
}

#[derive(Debug, Clone)]
pub struct CoarseEmbedding {
    pub map: EmbeddingMap,
    pub blocks: Vec<CoarseBlock>,
    pub moduli: ModuliEstimate,
}

impl CoarseEmbedding {
    /// Upper modulus guaranteed by construction at source distance `r`:
    /// blocks below `⌈r⌉` contribute at most `2i/δ_i`, the rest `2^{-i}`.
    pub fn rho2_bound(&self, r: f64) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let i = b.index as f64;
                if i < r.ceil() {
                    2.0 * i / b.delta
                } else {
                    2f64.powi(-(b.index as i32))
                }
            })
            .sum()
    }
}

fn eps_grid() -> Vec<f64> {
    let (lo, hi) = (EPS_MIN.ln(), EPS_MAX.ln());
    (0..EPS_GRID_LEN)
        .map(|k| (lo + (hi - lo) * k as f64 / (EPS_GRID_LEN - 1) as f64).exp())
        .rev()
        .collect()
}

struct BlockFit {
    info: CoarseBlock,
    coords: Vec<Vec<f64>>,
}

fn fit_block(
    space: &FiniteMetricSpace,
    target_p: f64,
    index: usize,
    threshold: f64,
) -> Result<BlockFit> {
    let radius = index as f64;
    let far: Vec<(usize, usize)> = space
        .pairs()
        .filter(|&(u, v)| space.d(u, v) >= threshold)
        .collect();
    if far.is_empty() {
        return Err(Error::Threshold {
            threshold,
            max_distance: space.diameter(),
        });
    }
    let near: Vec<(usize, usize)> = space
        .pairs()
        .filter(|&(u, v)| space.d(u, v) <= radius)
        .collect();
    let allowance = radius * 2f64.powi(index as i32);
    let mut best_ratio: f64 = 0.0;
    for eps in eps_grid() {
        let g = gaussian_dg_map(space, radius, eps)?;
        let coords = g
            .cloud
            .points()
            .iter()
            .map(|z| mazur_map(z, target_p))
            .collect::<Result<Vec<_>>>()?;
        let dist = |u: usize, v: usize| {
            let diff: Vec<f64> = coords[u]
                .iter()
                .zip(&coords[v])
                .map(|(a, b)| a - b)
                .collect();
            lp_norm(&diff, target_p)
        };
        let delta = far
            .iter()
            .map(|&(u, v)| dist(u, v))
            .fold(f64::INFINITY, f64::min);
        let near_max = near.iter().map(|&(u, v)| dist(u, v)).fold(0.0, f64::max);
        if delta <= 0.0 {
            continue;
        }
        best_ratio = best_ratio.max(if near_max > 0.0 {
            delta / near_max
        } else {
            f64::INFINITY
        });
        if near_max <= delta / allowance {
            return Ok(BlockFit {
                info: CoarseBlock {
                    index,
                    threshold,
                    radius,
                    eps,
                    bandwidth: g.t,
                    delta,
                    near_max,
                    clipped: g.clipped,
                },
                coords,
            });
        }
    }
    Err(Error::param(format!(
        "block {index}: threshold {threshold} cannot separate far pairs; best far/near ratio {best_ratio} \
         but {allowance} is required"
    )))
}

/// Direct sum over `i = 1..=m` of `(i/δ_i)(ζ_i(x) − ζ_i(x₀))` in `ℓ_p`, with
/// `m = thresholds.len()`.
pub fn assemble_coarse_embedding(
    space: &FiniteMetricSpace,
    target_p: f64,
    thresholds: &[f64],
) -> Result<CoarseEmbedding> {
    if !(target_p >= 1.0 && target_p.is_finite()) {
        return Err(Error::param(format!(
            "target_p must be a finite number >= 1, got {target_p}"
        )));
    }
    if thresholds.is_empty() {
        return Err(Error::param("need at least one block"));
    }
    if thresholds.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::param("thresholds must be positive"));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("thresholds must be strictly increasing"));
    }
    if space.len() < 2 {
        return Err(Error::param("need at least two points"));
    }
    let fits = thresholds
        .par_iter()
        .enumerate()
        .map(|(k, &t)| fit_block(space, target_p, k + 1, t))
        .collect::<Result<Vec<_>>>()?;

    let points: Vec<Vec<f64>> = (0..space.len())
        .map(|x| {
            fits.iter()
                .flat_map(|f| {
                    let s = f.info.index as f64 / f.info.delta;
                    f.coords[x]
                        .iter()
                        .zip(&f.coords[0])
                        .map(move |(a, b)| s * (a - b))
                })
                .collect()
        })
        .collect();
    let map = EmbeddingMap::new(space.clone(), PointCloud::new(target_p, points)?)?;
    let moduli = empirical_moduli(&map, DEFAULT_MODULI_BINS)?;
    Ok(CoarseEmbedding {
        map,
        blocks: fits.into_iter().map(|f| f.info).collect(),
        moduli,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::spaces::pnorm_metric;

    #[test]
    fn two_points_self_normalize() {
        let space = FiniteMetricSpace::from_matrix(vec![vec![0.0, 5.0], vec![5.0, 0.0]]).unwrap();
        let e = assemble_coarse_embedding(&space, 1.0, &[3.0]).unwrap();
        assert!((e.map.image().distance(0, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_far_pairs() {
        let space = FiniteMetricSpace::from_matrix(vec![vec![0.0, 5.0], vec![5.0, 0.0]]).unwrap();
        assert!(matches!(
            assemble_coarse_embedding(&space, 2.0, &[6.0]),
            Err(Error::Threshold { max_distance, .. }) if max_distance == 5.0
        ));
    }

    #[test]
    fn thresholds_validated() {
        let space = FiniteMetricSpace::from_matrix(vec![vec![0.0, 5.0], vec![5.0, 0.0]]).unwrap();
        assert!(assemble_coarse_embedding(&space, 2.0, &[]).is_err());
        assert!(assemble_coarse_embedding(&space, 2.0, &[3.0, 2.0]).is_err());
        assert!(assemble_coarse_embedding(&space, 0.5, &[3.0]).is_err());
    }

    #[test]
    fn designed_moduli_hold() {
        let mut rng = SplitMix64::new(11);
        let pts: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..3).map(|_| rng.uniform(0.0, 120.0)).collect())
            .collect();
        let space = pnorm_metric(&PointCloud::new(2.0, pts).unwrap()).unwrap();
        let thresholds = [4.0, 24.0, 100.0];
        for p in [1.0, 2.0, 3.0] {
            let e = assemble_coarse_embedding(&space, p, &thresholds).unwrap();
            for (k, &t) in thresholds.iter().enumerate() {
                if let Some(r1) = e.map.rho1_at(t) {
                    assert!(r1 >= (k + 1) as f64 * (1.0 - 1e-9), "p={p} block {k}: {r1}");
                }
            }
            for (d, img) in e.map.pair_distances() {
                assert!(img <= e.rho2_bound(d) * (1.0 + 1e-9), "p={p} d={d}: {img}");
            }
        }
    }
}
