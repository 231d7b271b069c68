//! Dyadic-shell interpolation into an `ℓ_p`-sum of Euclidean blocks.
//!
//! After rescaling so the smallest nonzero norm is 1, shell `S_i` holds the
//! points with `2^{i-1} ≤ ‖a‖ ≤ 2^i`, `Z_i` is the span of all points of norm
//! at most `2^i`, and a point of shell `i` is sent to a convex blend of its
//! coordinates in blocks `i` and `i + 1`.

use serde::Serialize;

use super::EmbeddingMap;
use crate::error::{Error, Result};
use crate::linalg::{dot, gram_schmidt, norm2};
use crate::spaces::{lp_norm, pnorm_metric, PointCloud};

/// Relative slack when deciding whether a norm sits on a dyadic boundary.
const BOUNDARY_SLACK: f64 = 1e-12;
/// Dependence cutoff for the block bases.
const BASIS_TOLERANCE: f64 = 1e-10;
/// Relative slack allowed in the per-case bounds.
const CASE_SLACK: f64 = 1e-9;

/// Shells, block bases and the normalization used by a shell embedding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellDecomposition {
    /// Input norms are divided by this before shells are assigned.
    pub scale: f64,
    /// `shells[i - 1]` lists the points of `S_i`; boundary points appear twice.
    pub shells: Vec<Vec<usize>>,
    /// `bases[i - 1]` is an orthonormal basis of `Z_i`.
    pub bases: Vec<Vec<Vec<f64>>>,
}

impl ShellDecomposition {
    pub fn block_dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Largest shell index in use.
    pub fn top(&self) -> u32 {
        self.shells.len() as u32
    }
}

/// Output of [`shell_embedding`].
#[derive(Debug, Clone)]
pub struct ShellEmbedding {
    map: EmbeddingMap,
    decomposition: ShellDecomposition,
    target_p: f64,
    /// Input points after rescaling.
    scaled: Vec<Vec<f64>>,
    norms: Vec<f64>,
    offsets: Vec<usize>,
}

fn shell_of(norm: f64) -> u32 {
    let mut i = 1u32;
    while norm > 2f64.powi(i as i32) * (1.0 + BOUNDARY_SLACK) {
        i += 1;
    }
    i
}

/// Embed a Euclidean cloud into `(Σ ⊕ Z_i)_{ℓ_p}` through dyadic shells.
pub fn shell_embedding(cloud: &PointCloud, target_p: f64) -> Result<ShellEmbedding> {
    if cloud.p() != 2.0 || cloud.blocks().is_some() {
        return Err(Error::param(
            "shell embedding needs a plain Euclidean cloud",
        ));
    }
    if !(target_p >= 1.0) {
        return Err(Error::param(format!(
            "target_p must be at least 1, got {target_p}"
        )));
    }
    let source = pnorm_metric(cloud)?;
    let raw_norms: Vec<f64> = cloud.points().iter().map(|a| norm2(a)).collect();
    let scale = raw_norms
        .iter()
        .copied()
        .filter(|&r| r > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !scale.is_finite() {
        return Err(Error::param("shell embedding needs a nonzero point"));
    }
    let scaled: Vec<Vec<f64>> = cloud
        .points()
        .iter()
        .map(|a| a.iter().map(|x| x / scale).collect())
        .collect();
    let norms: Vec<f64> = scaled.iter().map(|a| norm2(a)).collect();

    let top = norms
        .iter()
        .filter(|&&r| r > 0.0)
        .map(|&r| shell_of(r))
        .max()
        .expect("a nonzero point exists");
    let mut shells = vec![Vec::new(); top as usize];
    for (idx, &r) in norms.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let i = shell_of(r);
        shells[i as usize - 1].push(idx);
        // the upper edge of S_i is also the lower edge of S_{i+1}
        let edge = 2f64.powi(i as i32);
        if (r - edge).abs() <= BOUNDARY_SLACK * edge && i < top {
            shells[i as usize].push(idx);
        }
    }
    for s in &mut shells {
        s.sort_unstable();
    }

    // one block beyond the last shell's partner so boundary points of the
    // top shell can still be evaluated through the next one
    let block_count = top as usize + 2;
    let bases: Vec<Vec<Vec<f64>>> = (1..=block_count)
        .map(|i| {
            let cap = 2f64.powi(i as i32) * (1.0 + BOUNDARY_SLACK);
            gram_schmidt(
                scaled
                    .iter()
                    .zip(&norms)
                    .filter(|(_, &r)| r > 0.0 && r <= cap)
                    .map(|(a, _)| a.as_slice()),
                BASIS_TOLERANCE,
            )
        })
        .collect();
    let mut offsets = Vec::with_capacity(block_count + 1);
    let mut acc = 0;
    for b in &bases {
        offsets.push(acc);
        acc += b.len();
    }
    offsets.push(acc);

    let decomposition = ShellDecomposition {
        scale,
        shells,
        bases,
    };
    let mut out = ShellEmbedding {
        map: EmbeddingMap::new(source.clone(), cloud.clone())?,
        decomposition,
        target_p,
        scaled,
        norms,
        offsets,
    };
    let points: Vec<Vec<f64>> = (0..out.scaled.len())
        .map(|idx| {
            let y = match out.norms[idx] {
                0.0 => vec![0.0; acc],
                r => out.phi(idx, shell_of(r)),
            };
            y.into_iter().map(|c| c * scale).collect()
        })
        .collect();
    let image = PointCloud::with_blocks(target_p, points, out.decomposition.block_dims())?;
    out.map = EmbeddingMap::new(source, image)?;
    Ok(out)
}

impl ShellEmbedding {
    pub fn map(&self) -> &EmbeddingMap {
        &self.map
    }

    pub fn decomposition(&self) -> &ShellDecomposition {
        &self.decomposition
    }

    pub fn target_p(&self) -> f64 {
        self.target_p
    }

    /// Shell index of a point by the ceiling rule, or `None` for the origin.
    pub fn shell_index(&self, idx: usize) -> Option<u32> {
        let r = self.norms[idx];
        (r > 0.0).then(|| shell_of(r))
    }

    /// Norm of point `idx` in input units.
    pub fn norm(&self, idx: usize) -> f64 {
        self.norms[idx] * self.decomposition.scale
    }

    fn block_coords(&self, idx: usize, block: u32) -> Vec<f64> {
        let a = &self.scaled[idx];
        self.decomposition.bases[block as usize - 1]
            .iter()
            .map(|q| dot(a, q))
            .collect()
    }

    /// The interpolation formula for point `idx` read through shell `i`,
    /// in normalized units.
    fn phi(&self, idx: usize, i: u32) -> Vec<f64> {
        let r = self.norms[idx];
        let lo = 2f64.powi(i as i32 - 1);
        let hi = 2f64.powi(i as i32);
        let c_low = (hi - r) / lo;
        let c_high = (r - lo) / lo;
        let mut y = vec![0.0; *self.offsets.last().expect("nonempty")];
        for (block, c) in [(i, c_low), (i + 1, c_high)] {
            let start = self.offsets[block as usize - 1];
            for (k, e) in self.block_coords(idx, block).into_iter().enumerate() {
                y[start + k] = c * e;
            }
        }
        y
    }

    /// Image of point `idx` computed as if it lay in shell `i`, in input
    /// units. Only meaningful when the point's norm lies in `S_i`.
    pub fn evaluate_in_shell(&self, idx: usize, i: u32) -> Result<Vec<f64>> {
        let r = self.norms[idx];
        let lo = 2f64.powi(i as i32 - 1);
        let hi = 2f64.powi(i as i32);
        let inside = r > 0.0
            && i >= 1
            && r >= lo * (1.0 - BOUNDARY_SLACK)
            && r <= hi * (1.0 + BOUNDARY_SLACK)
            && (i as usize) < self.decomposition.bases.len();
        if !inside {
            return Err(Error::param(format!(
                "point {idx} does not lie in shell {i}"
            )));
        }
        Ok(self
            .phi(idx, i)
            .into_iter()
            .map(|c| c * self.decomposition.scale)
            .collect())
    }

    /// Euclidean norms of each block of a target vector.
    pub fn block_norms(&self, y: &[f64]) -> Vec<f64> {
        self.offsets
            .windows(2)
            .map(|w| norm2(&y[w[0]..w[1]]))
            .collect()
    }

    /// Norm of a target vector.
    pub fn target_norm(&self, y: &[f64]) -> f64 {
        lp_norm(&self.block_norms(y), self.target_p)
    }
}

/// Which relative position two points occupy in the shell structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShellCase {
    /// Same shell.
    One,
    /// Consecutive shells.
    Two,
    /// Shells at least two apart.
    Three,
    /// One of the points is the origin.
    Origin,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCase {
    /// Index of the point with the larger norm.
    pub a: usize,
    pub b: usize,
    pub case: ShellCase,
    pub distance: f64,
    pub image: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseBreakdown {
    pub pairs: Vec<PairCase>,
}

impl CaseBreakdown {
    pub fn all_hold(&self) -> bool {
        self.pairs.iter().all(|p| p.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &PairCase> {
        self.pairs.iter().filter(|p| !p.holds)
    }

    pub fn count(&self, case: ShellCase) -> usize {
        self.pairs.iter().filter(|p| p.case == case).count()
    }
}

/// Tag every pair with its case and check the matching two-sided bound.
pub fn case_breakdown(emb: &ShellEmbedding) -> CaseBreakdown {
    let within =
        |lo: f64, x: f64, hi: f64| x >= lo * (1.0 - CASE_SLACK) && x <= hi * (1.0 + CASE_SLACK);
    let map = emb.map();
    let pairs = map
        .source()
        .pairs()
        .map(|(u, v)| {
            let (a, b) = if emb.norms[u] >= emb.norms[v] {
                (u, v)
            } else {
                (v, u)
            };
            let d = map.source().d(a, b);
            let image = map.image().distance(a, b);
            let (na, nb) = (emb.norm(a), emb.norm(b));
            let (case, holds) = match (emb.shell_index(a), emb.shell_index(b)) {
                (_, None) => (ShellCase::Origin, within(na / 2.0, image, na)),
                (Some(k), Some(i)) if k == i => (ShellCase::One, within(d / 10.0, image, 5.0 * d)),
                (Some(k), Some(i)) if k == i + 1 => {
                    (ShellCase::Two, within(d / 5.0, image, 7.0 * d))
                }
                _ => (
                    ShellCase::Three,
                    within(na / 2.0, image, na + nb) && within(d / 4.0, image, 4.0 * d),
                ),
            };
            PairCase {
                a,
                b,
                case,
                distance: d,
                image,
                holds,
            }
        })
        .collect();
    CaseBreakdown { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: Vec<Vec<f64>>) -> PointCloud {
        PointCloud::new(2.0, points).unwrap()
    }

    #[test]
    fn lower_edge_uses_one_block() {
        let c = cloud(vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 0.0]]);
        let emb = shell_embedding(&c, 1.0).unwrap();
        // ‖(3,0)‖ = 3 sits in S_2 = [2, 4]; the lower edge point (0,2) is
        // a boundary of S_1 and S_2, everything of it lands in block 2
        let y = emb.evaluate_in_shell(1, 2).unwrap();
        let norms = emb.block_norms(&y);
        assert_eq!(norms[0], 0.0);
        assert!((norms[1] - 2.0).abs() < 1e-12);
        assert_eq!(norms[2], 0.0);
    }

    #[test]
    fn boundary_points_agree() {
        let c = cloud(vec![
            vec![1.0, 0.0],
            vec![0.0, 2.0],
            vec![4.0, 4.0],
            vec![0.0, 8.0],
            vec![-5.0, 1.0],
        ]);
        let emb = shell_embedding(&c, 2.0).unwrap();
        for (idx, i) in [(1usize, 1u32), (3, 3)] {
            let via_i = emb.evaluate_in_shell(idx, i).unwrap();
            let via_next = emb.evaluate_in_shell(idx, i + 1).unwrap();
            let gap = via_i
                .iter()
                .zip(&via_next)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(gap <= 1e-12, "point {idx}: {gap}");
            assert_eq!(via_i, emb.map().image().points()[idx]);
        }
        assert!(emb.decomposition().shells[0].contains(&1));
        assert!(emb.decomposition().shells[1].contains(&1));
    }

    #[test]
    fn rejects_bad_parameters() {
        let c = cloud(vec![vec![1.0], vec![2.0]]);
        assert!(matches!(shell_embedding(&c, 0.5), Err(Error::Parameter(_))));
        let l1 = PointCloud::new(1.0, vec![vec![1.0], vec![2.0]]).unwrap();
        assert!(shell_embedding(&l1, 1.0).is_err());
    }

    #[test]
    fn equal_norms_in_one_shell() {
        let c = cloud(vec![
            vec![1.0, 0.0],
            vec![3.0, 0.0],
            vec![0.0, 3.0],
            vec![1.8, 2.4],
        ]);
        let emb = shell_embedding(&c, 1.0).unwrap();
        let br = case_breakdown(&emb);
        assert!(br.all_hold());
        for p in br.pairs.iter().filter(|p| p.a != 0 && p.b != 0) {
            assert_eq!(p.case, ShellCase::One);
            assert!(p.image >= p.distance / 2.0 - 1e-12 && p.image <= p.distance + 1e-12);
        }
    }

    #[test]
    fn distant_shells_and_origin() {
        let c = cloud(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 7.0]]);
        let emb = shell_embedding(&c, 1.0).unwrap();
        let br = case_breakdown(&emb);
        assert!(br.all_hold(), "{:?}", br.violations().collect::<Vec<_>>());
        assert_eq!(br.count(ShellCase::Origin), 2);
        let far = br
            .pairs
            .iter()
            .find(|p| p.case == ShellCase::Three)
            .unwrap();
        assert_eq!((far.a, far.b), (2, 1));
        assert!(far.image >= 3.5);
        assert_eq!(emb.map().image().points()[0].iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn blocks_nest_and_are_orthonormal() {
        let c = cloud(vec![
            vec![1.0, 0.0, 0.0],
            vec![1.0, 3.0, 0.0],
            vec![2.0, 5.0, 9.0],
        ]);
        let emb = shell_embedding(&c, 1.0).unwrap();
        let dims = emb.decomposition().block_dims();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        for basis in &emb.decomposition().bases {
            for (x, q) in basis.iter().enumerate() {
                for (y, r) in basis.iter().enumerate() {
                    let want = if x == y { 1.0 } else { 0.0 };
                    assert!((dot(q, r) - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scale_invariance() {
        let pts = vec![vec![1.0, 2.0], vec![-3.0, 0.5], vec![6.0, 6.0]];
        let a = shell_embedding(&cloud(pts.clone()), 1.0).unwrap();
        let big: Vec<Vec<f64>> = pts
            .iter()
            .map(|v| v.iter().map(|x| x * 8.0).collect())
            .collect();
        let b = shell_embedding(&cloud(big), 1.0).unwrap();
        assert!((a.map().distortion() - b.map().distortion()).abs() < 1e-9);
    }
}
