//! Explicit embeddings and their measured moduli.

mod coarse;
mod kernel;
mod shell;

use serde::{Deserialize, Serialize};

pub use coarse::{assemble_coarse_embedding, CoarseBlock, CoarseEmbedding, DEFAULT_MODULI_BINS};
pub use kernel::{
    gaussian_dg_map, mazur_map, schoenberg_l1_to_l2, GaussianSphereMap, SchoenbergEmbedding,
};
pub use shell::{
    case_breakdown, shell_embedding, CaseBreakdown, PairCase, ShellCase, ShellDecomposition,
    ShellEmbedding,
};

use crate::error::{Error, Result};
use crate::spaces::{FiniteMetricSpace, PointCloud};

/// Agreement required between stored and recomputed Lipschitz data.
pub const LIPSCHITZ_TOLERANCE: f64 = 1e-12;

/// A map from a finite metric space onto an index-aligned point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMap {
    source: FiniteMetricSpace,
    image: PointCloud,
    lip: f64,
    colip: f64,
}

fn lipschitz_pair(source: &FiniteMetricSpace, image: &PointCloud) -> (f64, f64) {
    let mut lip: f64 = 0.0;
    let mut colip: f64 = 0.0;
    for (u, v) in source.pairs() {
        let d = source.d(u, v);
        let e = image.distance(u, v);
        lip = lip.max(e / d);
        colip = colip.max(if e > 0.0 { d / e } else { f64::INFINITY });
    }
    (lip, colip)
}

impl EmbeddingMap {
    pub fn new(source: FiniteMetricSpace, image: PointCloud) -> Result<Self> {
        if source.len() != image.len() {
            return Err(Error::Shape(format!(
                "{} source points but {} images",
                source.len(),
                image.len()
            )));
        }
        let (lip, colip) = lipschitz_pair(&source, &image);
        Ok(Self {
            source,
            image,
            lip,
            colip,
        })
    }

    pub fn source(&self) -> &FiniteMetricSpace {
        &self.source
    }

    pub fn image(&self) -> &PointCloud {
        &self.image
    }

    pub fn lip(&self) -> f64 {
        self.lip
    }

    /// Smallest `c` with `image distance ≥ source distance / c`.
    pub fn colip(&self) -> f64 {
        self.colip
    }

    pub fn distortion(&self) -> f64 {
        self.lip * self.colip
    }

    /// `(source distance, image distance)` over unordered pairs.
    pub fn pair_distances(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.source
            .pairs()
            .map(|(u, v)| (self.source.d(u, v), self.image.distance(u, v)))
    }

    /// Smallest image distance among pairs at source distance `≥ r`.
    pub fn rho1_at(&self, r: f64) -> Option<f64> {
        self.pair_distances()
            .filter(|(d, _)| *d >= r)
            .map(|(_, e)| e)
            .min_by(f64::total_cmp)
    }

    /// Largest image distance among pairs at source distance `≤ r`.
    pub fn rho2_at(&self, r: f64) -> Option<f64> {
        self.pair_distances()
            .filter(|(d, _)| *d <= r)
            .map(|(_, e)| e)
            .max_by(f64::total_cmp)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&EmbeddingJson {
            source: self.source.clone(),
            image: self.image.clone(),
            lip: self.lip,
            colip: self.colip.is_finite().then_some(self.colip),
        })
        .expect("plain data serializes")
    }

    /// Parse and check that the stored constants match the data.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: EmbeddingJson = serde_json::from_str(s).map_err(Error::from_json)?;
        let map = Self::new(raw.source, raw.image).map_err(|e| Error::Format {
            location: "image".into(),
            message: e.to_string(),
        })?;
        let stored_colip = raw.colip.unwrap_or(f64::INFINITY);
        let off = |a: f64, b: f64| {
            if a.is_infinite() || b.is_infinite() {
                a != b
            } else {
                (a - b).abs() > LIPSCHITZ_TOLERANCE * (1.0 + a.abs())
            }
        };
        if off(map.lip, raw.lip) {
            return Err(Error::Format {
                location: "lip".into(),
                message: format!("stored {} but data gives {}", raw.lip, map.lip),
            });
        }
        if off(map.colip, stored_colip) {
            return Err(Error::Format {
                location: "colip".into(),
                message: format!("stored {stored_colip} but data gives {}", map.colip),
            });
        }
        Ok(map)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingJson {
    source: FiniteMetricSpace,
    image: PointCloud,
    lip: f64,
    /// `null` when two distinct points share an image.
    colip: Option<f64>,
}

/// Extremes of the image distance within one source-distance bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Smallest image distance; `None` for an empty bin.
    pub rho1: Option<f64>,
    /// Largest image distance; `None` for an empty bin.
    pub rho2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliEstimate {
    pub bins: Vec<ModuliBin>,
}

impl ModuliEstimate {
    /// Bin `(source, image)` distance pairs into `bin_count` equal-width
    /// bins spanning the observed source distances.
    pub fn from_pairs(pairs: &[(f64, f64)], bin_count: usize) -> Result<Self> {
        if bin_count == 0 {
            return Err(Error::param("bin_count must be at least 1"));
        }
        if pairs.is_empty() {
            return Err(Error::param("moduli need at least one pair"));
        }
        let lo = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo) / bin_count as f64;
        let mut bins: Vec<ModuliBin> = (0..bin_count)
            .map(|j| ModuliBin {
                lo: lo + width * j as f64,
                hi: if j + 1 == bin_count {
                    hi
                } else {
                    lo + width * (j + 1) as f64
                },
                count: 0,
                rho1: None,
                rho2: None,
            })
            .collect();
        for &(d, e) in pairs {
            let j = if width > 0.0 {
                (((d - lo) / width) as usize).min(bin_count - 1)
            } else {
                0
            };
            let b = &mut bins[j];
            b.count += 1;
            b.rho1 = Some(b.rho1.map_or(e, |r| r.min(e)));
            b.rho2 = Some(b.rho2.map_or(e, |r| r.max(e)));
        }
        Ok(Self { bins })
    }

    /// `(bin_lo, inf of image distance over all pairs in this bin or beyond)`
    /// for every nonempty bin; nondecreasing by construction.
    pub fn rho1_staircase(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut running = f64::INFINITY;
        for b in self.bins.iter().rev() {
            if let Some(r) = b.rho1 {
                running = running.min(r);
                out.push((b.lo, running));
            }
        }
        out.reverse();
        out
    }

    /// Columns `bin_lo,bin_hi,count,rho1,rho2`; empty bins print `NA`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count,rho1,rho2\n");
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_else(|| "NA".into());
        for b in &self.bins {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                b.lo,
                b.hi,
                b.count,
                cell(b.rho1),
                cell(b.rho2)
            ));
        }
        out
    }
}

/// Per-bin compression and expansion of a map.
pub fn empirical_moduli(map: &EmbeddingMap, bin_count: usize) -> Result<ModuliEstimate> {
    if map.source().len() < 2 {
        return Err(Error::param("moduli need at least two points"));
    }
    let pairs: Vec<(f64, f64)> = map.pair_distances().collect();
    ModuliEstimate::from_pairs(&pairs, bin_count)
}
