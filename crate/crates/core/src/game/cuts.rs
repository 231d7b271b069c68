use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::spaces::{FiniteMetricSpace, PointCloud};

/// The `2^{n-1} - 1` nontrivial bipartitions of `{0, …, n-1}`.
///
/// A cut is stored as the bitmask of the side not containing vertex `n - 1`;
/// masks run over `1..2^{n-1}`. The induced semimetric is
/// `δ_S(u, v) = 1` iff exactly one of `u, v` lies in `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutSystem {
    n: usize,
}

impl CutSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::Scale(format!(
                "cut masks support 1..=63 points, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        (1usize << (self.n - 1)) - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> {
        1..(1u64 << (self.n - 1))
    }

    #[inline]
    pub fn contains(mask: u64, u: usize) -> bool {
        mask >> u & 1 == 1
    }

    #[inline]
    pub fn separates(mask: u64, u: usize, v: usize) -> bool {
        Self::contains(mask, u) != Self::contains(mask, v)
    }
}

/// Random 1-Lipschitz maps into `ℓ₁` built from cut combinations.
///
/// Each map draws between 1 and 12 random cuts with weights in `(0, 1]`,
/// rescales the weights so the largest ratio `d'(u,v)/d(u,v)` is exactly 1,
/// and emits one coordinate per cut with value `λ_S · [u ∈ S]`.
pub fn cut_sample_maps(
    space: &FiniteMetricSpace,
    count: usize,
    seed: u64,
) -> Result<Vec<PointCloud>> {
    if count == 0 {
        return Err(Error::param("count must be at least 1"));
    }
    let n = space.len();
    if n < 2 {
        return Err(Error::param("cut maps need at least two points"));
    }
    let cuts = CutSystem::new(n)?;
    let total = cuts.len() as u64;
    let mut rng = SplitMix64::new(seed);
    let mut maps = Vec::with_capacity(count);
    for _ in 0..count {
        let r = 1 + rng.below(total.min(12));
        let mut chosen: Vec<(u64, f64)> = (0..r)
            .map(|_| (1 + rng.below(total), rng.next_open_f64()))
            .collect();
        let lip = space
            .pairs()
            .map(|(u, v)| {
                let dp: f64 = chosen
                    .iter()
                    .filter(|(m, _)| CutSystem::separates(*m, u, v))
                    .map(|(_, w)| w)
                    .sum();
                dp / space.d(u, v)
            })
            .fold(0.0, f64::max);
        // a drawn cut always separates some pair, so lip > 0
        chosen.iter_mut().for_each(|(_, w)| *w /= lip);
        let points = (0..n)
            .map(|u| {
                chosen
                    .iter()
                    .map(|&(m, w)| if CutSystem::contains(m, u) { w } else { 0.0 })
                    .collect()
            })
            .collect();
        maps.push(PointCloud::new(1.0, points)?);
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{graph_metric, Graph};

    #[test]
    fn cut_count_and_symmetry() {
        let c = CutSystem::new(5).unwrap();
        assert_eq!(c.len(), 15);
        assert_eq!(c.masks().count(), 15);
        for m in c.masks() {
            let complement = !m & 0b11111;
            for u in 0..5 {
                for v in 0..5 {
                    assert_eq!(
                        CutSystem::separates(m, u, v),
                        CutSystem::separates(complement, u, v)
                    );
                }
            }
        }
    }

    #[test]
    fn two_point_sample_is_isometry() {
        let s = FiniteMetricSpace::from_matrix(vec![vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap();
        for map in cut_sample_maps(&s, 5, 1).unwrap() {
            assert!((map.distance(0, 1) - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_are_exactly_one_lipschitz() {
        let p = graph_metric(&Graph::path(7).unwrap()).unwrap();
        for map in cut_sample_maps(&p, 200, 3).unwrap() {
            let lip = p
                .pairs()
                .map(|(u, v)| map.distance(u, v) / p.d(u, v))
                .fold(0.0, f64::max);
            assert!((lip - 1.0).abs() < 1e-12);
        }
    }
}
