//! Kernel factorizations into Hilbert space and the Mazur map.

use super::EmbeddingMap;
use crate::error::{Error, Result};
use crate::linalg::{factor_psd, PSD_ACCEPT};
use crate::spaces::{lp_norm, pnorm_metric, FiniteMetricSpace, PointCloud};

/// Deviation from the unit sphere tolerated by [`mazur_map`].
pub const MAZUR_NORM_TOLERANCE: f64 = 1e-6;

fn rows_to_cloud(mut rows: Vec<Vec<f64>>) -> Result<PointCloud> {
    // a rank-zero factor still needs one coordinate
    if rows.first().is_some_and(Vec::is_empty) {
        rows.iter_mut().for_each(|r| r.push(0.0));
    }
    PointCloud::new(2.0, rows)
}

/// Realization of the `√ℓ₁` snowflake of an `ℓ₁` cloud inside `ℓ₂`.
#[derive(Debug, Clone)]
pub struct SchoenbergEmbedding {
    /// Source is the snowflaked metric `√‖x − y‖₁`, so the map is an isometry.
    pub map: EmbeddingMap,
    pub min_eigenvalue: f64,
    /// Largest negative eigenvalue magnitude that was set to zero.
    pub clipped: f64,
    /// Largest `|‖Δ image‖₂² − ‖Δx‖₁|` over pairs.
    pub max_error: f64,
}

/// Classical scaling of `ℓ₁` distances: Euclidean points whose squared
/// distances equal the given `ℓ₁` distances.
pub fn schoenberg_l1_to_l2(cloud: &PointCloud) -> Result<SchoenbergEmbedding> {
    if cloud.p() != 1.0 || cloud.blocks().is_some() {
        return Err(Error::param("schoenberg embedding needs an l1 cloud"));
    }
    if cloud.is_empty() {
        return Err(Error::param("need at least one point"));
    }
    let n = cloud.len();
    let l1 = |i: usize, j: usize| cloud.distance(i, j);
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = l1(i, j);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    let row_mean: Vec<f64> = (0..n)
        .map(|i| d[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64)
        .collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    let gram: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            -0.5 * (d[k] - row_mean[i] - row_mean[j] + grand)
        })
        .collect();
    let factor = factor_psd(&gram, n)?;
    let image = rows_to_cloud(factor.rows)?;
    let source = if n == 1 {
        FiniteMetricSpace::from_matrix(vec![vec![0.0]])?
    } else {
        pnorm_metric(cloud)?.transformed(f64::sqrt)
    };
    let mut max_error: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let e = image.distance(i, j);
            max_error = max_error.max((e * e - d[i * n + j]).abs());
        }
    }
    Ok(SchoenbergEmbedding {
        map: EmbeddingMap::new(source, image)?,
        min_eigenvalue: factor.min_eigenvalue,
        clipped: factor.clipped,
        max_error,
    })
}

/// Unit vectors with `‖ζ(x) − ζ(y)‖² = 2 − 2 exp(−d(x,y)²/t)`.
#[derive(Debug, Clone)]
pub struct GaussianSphereMap {
    pub cloud: PointCloud,
    /// Kernel bandwidth, chosen so pairs at distance `R` land exactly `ε` apart.
    pub t: f64,
    pub min_eigenvalue: f64,
    pub clipped: f64,
}

/// Bandwidth placing pairs at distance `r` exactly `eps` apart.
pub fn gaussian_bandwidth(r: f64, eps: f64) -> f64 {
    r * r / (1.0 / (1.0 - eps * eps / 2.0)).ln()
}

/// Factor the Gaussian kernel of `space` with the bandwidth for `(r, eps)`.
///
/// For sources that are not of negative type the kernel can have small
/// negative eigenvalues; those within tolerance are clipped and reported.
pub fn gaussian_dg_map(space: &FiniteMetricSpace, r: f64, eps: f64) -> Result<GaussianSphereMap> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param(format!("radius must be positive, got {r}")));
    }
    if !(eps > 0.0 && eps < std::f64::consts::SQRT_2) {
        return Err(Error::param(format!(
            "eps must lie in (0, sqrt 2), got {eps}"
        )));
    }
    if space.is_empty() {
        return Err(Error::param("need at least one point"));
    }
    let n = space.len();
    let t = gaussian_bandwidth(r, eps);
    let kernel: Vec<f64> = (0..n * n)
        .map(|k| {
            let d = space.d(k / n, k % n);
            (-d * d / t).exp()
        })
        .collect();
    let factor = factor_psd(&kernel, n)?;
    debug_assert!(factor.min_eigenvalue >= PSD_ACCEPT || factor.clipped > 0.0);
    Ok(GaussianSphereMap {
        cloud: rows_to_cloud(factor.rows)?,
        t,
        min_eigenvalue: factor.min_eigenvalue,
        clipped: factor.clipped,
    })
}

/// `x ↦ sign(x)|x|^{2/p}` coordinatewise, carrying the Euclidean unit
/// sphere onto the `ℓ_p` unit sphere.
pub fn mazur_map(v: &[f64], p: f64) -> Result<Vec<f64>> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param(format!(
            "p must be a finite number >= 1, got {p}"
        )));
    }
    let norm = lp_norm(v, 2.0);
    if (norm - 1.0).abs() > MAZUR_NORM_TOLERANCE {
        return Err(Error::Precondition(format!(
            "input has Euclidean norm {norm}, expected 1"
        )));
    }
    if p == 2.0 {
        return Ok(v.to_vec());
    }
    let e = 2.0 / p;
    Ok(v.iter().map(|x| x.signum() * x.abs().powf(e)).collect())
}
