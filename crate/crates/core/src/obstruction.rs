//! Quantitative non-embeddability evidence on expanders.
//!
//! For a connected `k`-regular graph with second adjacency eigenvalue `λ₂`
//! and any map `f` into Euclidean space,
//!
//! ```text
//! mean over ordered pairs (u, v), u = v included, of ||f(u) - f(v)||²
//!     ≤ k / (k - λ₂) · mean over edges of ||f(u) - f(v)||²
//! ```
//!
//! because the pair sum equals `2n Σ ||f(v) - f̄||²` and the edge sum is at
//! least `(k - λ₂) Σ ||f(v) - f̄||²`. A map with Lipschitz constant `L` thus
//! sends some pair at distance `≥ t` to within `√(bound · L² / far_fraction)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander::{CertifiedGraph, RegularGraph};
use crate::game::MeasureCertificate;
use crate::spaces::{FiniteMetricSpace, Graph, PointCloud};

/// Slack allowed on the Poincaré inequality before it is flagged.
pub const POINCARE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoincareReport {
    pub mean_pair_sq: f64,
    pub mean_edge_sq: f64,
    /// `None` when every image point coincides.
    pub ratio: Option<f64>,
    pub bound: f64,
    pub degenerate: bool,
    /// Set when `ratio > bound + 1e-9`, which can only come from a bug.
    pub violation: bool,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Compare pair and edge energies of a Euclidean map of `graph`.
pub fn poincare_ratio(
    graph: &RegularGraph,
    lambda2: f64,
    images: &PointCloud,
) -> Result<PoincareReport> {
    let n = graph.n();
    if images.len() != n {
        return Err(Error::Shape(format!(
            "{} images for {n} vertices",
            images.len()
        )));
    }
    if images.p() != 2.0 || images.blocks().is_some() {
        return Err(Error::param("Poincaré ratio needs a Euclidean image"));
    }
    let k = graph.k() as f64;
    if !(k - lambda2 > 0.0) {
        return Err(Error::param(format!(
            "spectral gap must be positive, got {}",
            k - lambda2
        )));
    }
    if !graph.graph().is_connected() {
        return Err(Error::param("graph must be connected"));
    }
    let pts = images.points();
    let mut pair_sum = 0.0;
    for a in pts {
        for b in pts {
            pair_sum += sq_dist(a, b);
        }
    }
    let edges = graph.graph().edges();
    let edge_sum: f64 = edges.iter().map(|&(u, v)| sq_dist(&pts[u], &pts[v])).sum();
    let mean_pair_sq = pair_sum / (n * n) as f64;
    let mean_edge_sq = edge_sum / edges.len().max(1) as f64;
    let bound = k / (k - lambda2);
    let degenerate = mean_edge_sq == 0.0;
    let ratio = (!degenerate).then(|| mean_pair_sq / mean_edge_sq);
    let violation = ratio.is_some_and(|r| r > bound + POINCARE_TOLERANCE);
    Ok(PoincareReport {
        mean_pair_sq,
        mean_edge_sq,
        ratio,
        bound,
        degenerate,
        violation,
    })
}

/// Cap on the compression modulus at threshold `t` for one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliConstraint {
    pub n: usize,
    pub t: f64,
    /// Fraction of the `n²` ordered pairs (coincident included) at distance `≥ t`.
    pub far_fraction: f64,
    pub bound: f64,
    /// `√(bound · L² / far_fraction)`; `None` when no pair is that far.
    pub rho1_cap: Option<f64>,
}

impl ModuliConstraint {
    pub fn is_vacuous(&self) -> bool {
        self.rho1_cap.is_none()
    }
}

pub fn moduli_cap(
    family: &[CertifiedGraph],
    lipschitz: f64,
    t: f64,
) -> Result<Vec<ModuliConstraint>> {
    if !(lipschitz > 0.0) {
        return Err(Error::param(format!(
            "Lipschitz constant must be positive, got {lipschitz}"
        )));
    }
    family
        .iter()
        .map(|member| {
            let g = &member.graph;
            let gap = member.certificate.gap;
            if !(gap > 0.0) {
                return Err(Error::param(format!(
                    "graph on {} vertices has no spectral gap",
                    g.n()
                )));
            }
            let hops = g.graph().hop_distances()?;
            let n = g.n();
            let far = hops.iter().flatten().filter(|&&h| h as f64 >= t).count();
            let far_fraction = far as f64 / (n * n) as f64;
            let bound = g.k() as f64 / gap;
            let rho1_cap = (far > 0).then(|| (bound * lipschitz * lipschitz / far_fraction).sqrt());
            Ok(ModuliConstraint {
                n,
                t,
                far_fraction,
                bound,
                rho1_cap,
            })
        })
        .collect()
}

/// CSV with columns `n,t,far_fraction,bound,rho1_cap`; vacuous rows carry
/// `vacuous` in the last column.
pub fn moduli_constraints_csv(rows: &[ModuliConstraint]) -> String {
    let mut out = String::from("n,t,far_fraction,bound,rho1_cap\n");
    for r in rows {
        let cap = r
            .rho1_cap
            .map(|c| c.to_string())
            .unwrap_or_else(|| "vacuous".into());
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.t, r.far_fraction, r.bound, cap
        ));
    }
    out
}

/// One member of a candidate weak-containment sequence: a graph and a map of
/// its vertices into a finite target space.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessMember {
    pub graph: Graph,
    pub target: FiniteMetricSpace,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakContainmentReport {
    pub lips: Vec<f64>,
    pub max_fiber_fractions: Vec<f64>,
    pub sup_lip: f64,
    /// False only when the Lipschitz constants increase strictly along a
    /// sequence of at least three members.
    pub bounded_lip: bool,
    /// Fiber fractions are nonincreasing and end strictly below where they
    /// start (a single member must have fraction below 1).
    pub fibers_vanish: bool,
    pub consistent: bool,
}

/// Evaluate the Lipschitz and fiber conditions on a finite witness sequence.
///
/// Lipschitz constants are maxima over edges, which is exact for
/// shortest-path sources.
pub fn check_weak_containment(members: &[WitnessMember]) -> Result<WeakContainmentReport> {
    let mut lips = Vec::with_capacity(members.len());
    let mut fibers = Vec::with_capacity(members.len());
    for (idx, m) in members.iter().enumerate() {
        let n = m.graph.vertex_count();
        if m.map.len() != n {
            return Err(Error::Shape(format!(
                "member {idx}: map has {} entries for {n} vertices",
                m.map.len()
            )));
        }
        if let Some(&bad) = m.map.iter().find(|&&y| y >= m.target.len()) {
            return Err(Error::Shape(format!(
                "member {idx}: image {bad} outside the target"
            )));
        }
        let lip = m
            .graph
            .edges()
            .iter()
            .map(|&(u, v)| m.target.d(m.map[u], m.map[v]))
            .fold(0.0, f64::max);
        let mut counts = vec![0usize; m.target.len()];
        m.map.iter().for_each(|&y| counts[y] += 1);
        let largest = counts.into_iter().max().unwrap_or(0);
        lips.push(lip);
        fibers.push(largest as f64 / n.max(1) as f64);
    }
    let sup_lip = lips.iter().copied().fold(0.0, f64::max);
    let bounded_lip = lips.len() < 3 || !lips.windows(2).all(|w| w[1] > w[0]);
    let fibers_vanish = match fibers.as_slice() {
        [] => true,
        [only] => *only < 1.0,
        all => all.windows(2).all(|w| w[1] <= w[0]) && all[all.len() - 1] < all[0],
    };
    Ok(WeakContainmentReport {
        consistent: bounded_lip && fibers_vanish,
        lips,
        max_fiber_fractions: fibers,
        sup_lip,
        bounded_lip,
        fibers_vanish,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateAverage {
    pub average: f64,
    pub lip: f64,
    /// `average / lip`, or 0 for a constant map.
    pub ratio: f64,
}

/// `μ`-average displacement of an `ℓ₁` map and its Lipschitz-normalized ratio.
pub fn certificate_average(
    images: &PointCloud,
    certificate: &MeasureCertificate,
    source: &FiniteMetricSpace,
) -> Result<CertificateAverage> {
    if images.len() != source.len() {
        return Err(Error::Shape(format!(
            "{} images for {} source points",
            images.len(),
            source.len()
        )));
    }
    if images.p() != 1.0 || images.blocks().is_some() {
        return Err(Error::param("certificate averages need an ℓ₁ image"));
    }
    if let Some(p) = certificate
        .pairs
        .iter()
        .find(|p| p[0] >= source.len() || p[1] >= source.len())
    {
        return Err(Error::Shape(format!(
            "certificate pair {p:?} outside the source"
        )));
    }
    let average = certificate
        .pairs
        .iter()
        .zip(&certificate.mu)
        .map(|(p, w)| w * images.distance(p[0], p[1]))
        .sum();
    let lip = source
        .pairs()
        .map(|(u, v)| images.distance(u, v) / source.d(u, v))
        .fold(0.0, f64::max);
    let ratio = if lip > 0.0 { average / lip } else { 0.0 };
    Ok(CertificateAverage {
        average,
        lip,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::{cheeger_exact, spectral_gap};
    use crate::game::{far_pairs, MeasureCertificate};
    use crate::spaces::graph_metric;

    fn regular(g: Graph) -> RegularGraph {
        RegularGraph::new(g).unwrap()
    }

    #[test]
    fn tetrahedron_is_tight() {
        let k4 = regular(Graph::complete(4).unwrap());
        let s = 1.0 / 2f64.sqrt();
        let tet = PointCloud::new(
            2.0,
            vec![
                vec![s, 0.0, 0.0, 0.0],
                vec![0.0, s, 0.0, 0.0],
                vec![0.0, 0.0, s, 0.0],
                vec![0.0, 0.0, 0.0, s],
            ],
        )
        .unwrap();
        let (l2, _) = spectral_gap(&k4).unwrap();
        let r = poincare_ratio(&k4, l2, &tet).unwrap();
        assert!((r.mean_edge_sq - 1.0).abs() < 1e-12);
        assert!((r.mean_pair_sq - 0.75).abs() < 1e-12);
        assert!((r.ratio.unwrap() - 0.75).abs() < 1e-9);
        assert!((r.bound - 0.75).abs() < 1e-9);
        assert!(!r.violation);
    }

    #[test]
    fn square_is_tight() {
        let c4 = regular(Graph::cycle(4).unwrap());
        let sq = PointCloud::new(
            2.0,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
        )
        .unwrap();
        let r = poincare_ratio(&c4, 0.0, &sq).unwrap();
        assert!((r.mean_pair_sq - 1.0).abs() < 1e-12);
        assert!((r.ratio.unwrap() - 1.0).abs() < 1e-9);
        assert!((r.bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_map_is_degenerate() {
        let c4 = regular(Graph::cycle(4).unwrap());
        let flat = PointCloud::new(2.0, vec![vec![1.0, 2.0]; 4]).unwrap();
        let r = poincare_ratio(&c4, 0.0, &flat).unwrap();
        assert!(r.degenerate && r.ratio.is_none() && !r.violation);
    }

    #[test]
    fn poincare_preconditions() {
        let c4 = regular(Graph::cycle(4).unwrap());
        let l1 = PointCloud::new(1.0, vec![vec![0.0]; 4]).unwrap();
        assert!(poincare_ratio(&c4, 0.0, &l1).is_err());
        let short = PointCloud::new(2.0, vec![vec![0.0]; 3]).unwrap();
        assert!(poincare_ratio(&c4, 0.0, &short).is_err());
        let ok = PointCloud::new(2.0, vec![vec![0.0]; 4]).unwrap();
        assert!(poincare_ratio(&c4, 2.0, &ok).is_err());
    }

    fn certified(g: RegularGraph) -> CertifiedGraph {
        let certificate = cheeger_exact(&g).unwrap();
        CertifiedGraph {
            graph: g,
            certificate,
            seed: 0,
        }
    }

    #[test]
    fn caps_for_small_graphs() {
        let k4 = certified(regular(Graph::complete(4).unwrap()));
        let r = moduli_cap(&[k4], 1.0, 2.0).unwrap();
        assert!(r[0].is_vacuous());
        assert_eq!(r[0].far_fraction, 0.0);

        let c6 = certified(regular(Graph::cycle(6).unwrap()));
        let r = moduli_cap(std::slice::from_ref(&c6), 1.0, 3.0).unwrap();
        assert!((r[0].far_fraction - 1.0 / 6.0).abs() < 1e-15);
        assert!((r[0].bound - 2.0).abs() < 1e-9);
        assert!((r[0].rho1_cap.unwrap() - 12f64.sqrt()).abs() < 1e-9);

        let csv = moduli_constraints_csv(&moduli_cap(&[c6], 1.0, 4.0).unwrap());
        assert!(csv.starts_with("n,t,far_fraction,bound,rho1_cap\n"));
        assert!(csv.trim_end().ends_with("vacuous"));
        assert!(moduli_cap(&[], 0.0, 1.0).is_err());
    }

    #[test]
    fn weak_containment_examples() {
        let point = FiniteMetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        let constant: Vec<WitnessMember> = [4, 6, 8]
            .iter()
            .map(|&n| WitnessMember {
                graph: Graph::cycle(n).unwrap(),
                target: point.clone(),
                map: vec![0; n],
            })
            .collect();
        let r = check_weak_containment(&constant).unwrap();
        assert_eq!(r.lips, vec![0.0, 0.0, 0.0]);
        assert_eq!(r.max_fiber_fractions, vec![1.0, 1.0, 1.0]);
        assert!(!r.fibers_vanish && !r.consistent);

        let identity: Vec<WitnessMember> = [4, 6, 8]
            .iter()
            .map(|&n| {
                let g = Graph::cycle(n).unwrap();
                WitnessMember {
                    target: graph_metric(&g).unwrap(),
                    graph: g,
                    map: (0..n).collect(),
                }
            })
            .collect();
        let r = check_weak_containment(&identity).unwrap();
        assert_eq!(r.lips, vec![1.0, 1.0, 1.0]);
        assert_eq!(r.max_fiber_fractions, vec![0.25, 1.0 / 6.0, 0.125]);
        assert!(r.consistent);

        let pair = FiniteMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let alt = WitnessMember {
            graph: Graph::cycle(4).unwrap(),
            target: pair,
            map: vec![0, 1, 0, 1],
        };
        let r = check_weak_containment(&[alt]).unwrap();
        assert_eq!(r.lips, vec![1.0]);
        assert_eq!(r.max_fiber_fractions, vec![0.5]);
    }

    #[test]
    fn growing_lipschitz_is_flagged() {
        let members: Vec<WitnessMember> = (1..=3)
            .map(|s| {
                let d = s as f64;
                WitnessMember {
                    graph: Graph::path(2).unwrap(),
                    target: FiniteMetricSpace::from_matrix(vec![vec![0.0, d], vec![d, 0.0]])
                        .unwrap(),
                    map: vec![0, 1],
                }
            })
            .collect();
        assert!(!check_weak_containment(&members).unwrap().bounded_lip);
    }

    #[test]
    fn averages() {
        let p = graph_metric(&Graph::path(5).unwrap()).unwrap();
        let far = far_pairs(&p, 4.0);
        let cert = MeasureCertificate {
            threshold: 4.0,
            pairs: far.iter().map(|&(u, v)| [u, v]).collect(),
            mu: vec![1.0],
            value: 4.0,
        };
        let iso = PointCloud::new(1.0, (0..5).map(|i| vec![i as f64]).collect()).unwrap();
        let a = certificate_average(&iso, &cert, &p).unwrap();
        assert_eq!((a.average, a.lip, a.ratio), (4.0, 1.0, 4.0));

        let flat = PointCloud::new(1.0, vec![vec![3.0]; 5]).unwrap();
        let a = certificate_average(&flat, &cert, &p).unwrap();
        assert_eq!((a.average, a.ratio), (0.0, 0.0));

        let l2 = PointCloud::new(2.0, vec![vec![3.0]; 5]).unwrap();
        assert!(certificate_average(&l2, &cert, &p).is_err());
    }
}
