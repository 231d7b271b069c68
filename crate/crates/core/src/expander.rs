//! Regular graphs, Cheeger certificates and certified expander families.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::rng::{derive_seed, SplitMix64};
use crate::spaces::Graph;

/// Largest vertex count accepted by [`cheeger_exact`].
pub const EXACT_CHEEGER_MAX_N: usize = 24;
/// Rejected pairings before [`random_regular_graph`] gives up.
pub const MAX_PAIRING_REJECTIONS: u64 = 1_000_000;
/// Regeneration attempts per size in [`expander_family`].
pub const MAX_FAMILY_ATTEMPTS: u64 = 100;
/// Tolerance for the two-sided Cheeger inequality check.
pub const CHEEGER_TOLERANCE: f64 = 1e-9;
/// Default expansion target for 3-regular families.
pub const DEFAULT_EPSILON: f64 = 0.2;

/// Simple `k`-regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularGraph {
    graph: Graph,
    k: usize,
}

impl RegularGraph {
    pub fn new(graph: Graph) -> Result<Self> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(Error::param("regular graph needs at least one vertex"));
        }
        let k = graph.neighbors(0).len();
        if let Some(v) = (0..n).find(|&v| graph.neighbors(v).len() != k) {
            return Err(Error::param(format!(
                "vertex {v} has degree {}, vertex 0 has degree {k}",
                graph.neighbors(v).len()
            )));
        }
        Ok(Self { graph, k })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(Graph::from_edges(n, edges)?)
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The Petersen graph: outer 5-cycle, spokes, inner pentagram.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).expect("Petersen graph is 3-regular")
    }

    pub fn to_json(&self) -> String {
        self.graph.to_json()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::new(Graph::from_json_str(s)?)
    }
}

/// Sample a simple `k`-regular graph from the pairing model, resampling the
/// whole matching whenever it produces a loop or a repeated edge.
pub fn random_regular_graph(n: usize, k: usize, seed: u64) -> Result<RegularGraph> {
    if !(n * k).is_multiple_of(2) {
        return Err(Error::param(format!(
            "n*k must be even, got n = {n}, k = {k}"
        )));
    }
    if k < 3 {
        return Err(Error::param(format!("degree must be at least 3, got {k}")));
    }
    if k >= n {
        return Err(Error::param(format!("degree {k} must be below n = {n}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut half_edges: Vec<usize> = (0..n * k).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(k); n];
    'sample: for _ in 0..MAX_PAIRING_REJECTIONS {
        half_edges.iter_mut().enumerate().for_each(|(i, h)| *h = i);
        rng.shuffle(&mut half_edges);
        adj.iter_mut().for_each(Vec::clear);
        for pair in half_edges.chunks_exact(2) {
            let (u, v) = (pair[0] / k, pair[1] / k);
            if u == v || adj[u].contains(&v) {
                continue 'sample;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let edges: Vec<(usize, usize)> = adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        return RegularGraph::from_edges(n, &edges);
    }
    Err(Error::ResamplingExhausted {
        attempts: MAX_PAIRING_REJECTIONS,
    })
}

/// Nonnegative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Largest multiple of `1/den` not exceeding `x`.
    pub fn floor_of(x: f64, den: u64) -> Self {
        Self::new((x.max(0.0) * den as f64).floor() as u64, den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Spectral,
}

/// Expansion evidence for one graph.
///
/// With [`Method::Exact`], `h` is the Cheeger constant and `witness` a
/// minimizing set. With [`Method::Spectral`], `h` is the lower bound
/// `(k - λ₂)/2` rounded down to a multiple of 1e-9 and `witness` is the best
/// sweep cut of the second eigenvector, which only illustrates an upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionCertificate {
    pub h_num: u64,
    pub h_den: u64,
    pub witness: Vec<usize>,
    pub lambda2: f64,
    pub gap: f64,
    pub method: Method,
}

impl ExpansionCertificate {
    pub fn h(&self) -> Ratio {
        Ratio::new(self.h_num, self.h_den)
    }

    /// Guaranteed lower bound on the Cheeger constant.
    pub fn h_lower_bound(&self) -> f64 {
        match self.method {
            Method::Exact => self.h().value(),
            Method::Spectral => self.gap / 2.0,
        }
    }

    /// `(k - λ₂)/2 ≤ h ≤ √(2k(k - λ₂))`, checked for exact certificates.
    pub fn satisfies_cheeger_inequality(&self, k: usize) -> bool {
        let h = self.h().value();
        let k = k as f64;
        let lower = (k - self.lambda2) / 2.0;
        let upper = (2.0 * k * (k - self.lambda2)).max(0.0).sqrt();
        lower <= h + CHEEGER_TOLERANCE && h <= upper + CHEEGER_TOLERANCE
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(Error::from_json)
    }
}

/// Exact Cheeger constant by a Gray-code scan of all `2^{n-1}` bipartitions.
///
/// Vertex `n - 1` is kept outside the scanned side; each bipartition is
/// scored by its boundary over the smaller side.
pub fn cheeger_exact(graph: &RegularGraph) -> Result<ExpansionCertificate> {
    let n = graph.n();
    if n > EXACT_CHEEGER_MAX_N {
        return Err(Error::Scale(format!(
            "exact Cheeger scan supports n <= {EXACT_CHEEGER_MAX_N}, got {n}; use the spectral bound"
        )));
    }
    if n < 2 {
        return Err(Error::param("Cheeger constant needs at least two vertices"));
    }
    let (lambda2, gap) = spectral_gap(graph)?;
    let (h, side) = exact_scan(graph.graph());
    let witness = (0..n).filter(|v| side >> v & 1 == 1).collect();
    Ok(ExpansionCertificate {
        h_num: h.num,
        h_den: h.den,
        witness,
        lambda2,
        gap,
        method: Method::Exact,
    })
}

fn exact_scan(graph: &Graph) -> (Ratio, u32) {
    let n = graph.vertex_count();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let adj: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut set: u32 = 0;
    let mut size = 0usize;
    let mut boundary: i64 = 0;
    let mut best = (u64::MAX, 1u64);
    let mut best_side = 0u32;
    for g in 1u64..(1u64 << (n - 1)) {
        let v = g.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let deg = adj[v].count_ones() as i64;
        if set & bit == 0 {
            let inside = (adj[v] & set).count_ones() as i64;
            boundary += deg - 2 * inside;
            set |= bit;
            size += 1;
        } else {
            set &= !bit;
            let inside = (adj[v] & set).count_ones() as i64;
            boundary -= deg - 2 * inside;
            size -= 1;
        }
        let (small, side) = if size <= n - size {
            (size as u64, set)
        } else {
            ((n - size) as u64, full & !set)
        };
        let b = boundary as u64;
        if (b as u128) * (best.1 as u128) < (best.0 as u128) * (small as u128) {
            best = (b, small);
            best_side = side;
        }
    }
    (Ratio::new(best.0, best.1), best_side)
}

fn adjacency_matrix(graph: &Graph) -> Vec<f64> {
    let n = graph.vertex_count();
    let mut a = vec![0.0; n * n];
    for u in 0..n {
        for &v in graph.neighbors(u) {
            a[u * n + v] = 1.0;
        }
    }
    a
}

/// Adjacency eigenvalues in descending order.
pub fn adjacency_spectrum(graph: &Graph) -> Result<Vec<f64>> {
    let n = graph.vertex_count();
    Ok(symmetric_eigen(&adjacency_matrix(graph), n, false)?.values)
}

/// Second-largest adjacency eigenvalue and the gap `k - λ₂`.
pub fn spectral_gap(graph: &RegularGraph) -> Result<(f64, f64)> {
    let g = graph.graph();
    if let Some(to) = g.bfs(0).iter().position(|&d| d == u32::MAX) {
        return Err(Error::Disconnected { from: 0, to });
    }
    let spectrum = adjacency_spectrum(g)?;
    let lambda2 = spectrum.get(1).copied().unwrap_or(graph.k() as f64);
    Ok((lambda2, graph.k() as f64 - lambda2))
}

/// Certificate from the spectral lower bound, with a sweep-cut witness.
pub fn cheeger_spectral(graph: &RegularGraph) -> Result<ExpansionCertificate> {
    let g = graph.graph();
    let n = graph.n();
    if let Some(to) = g.bfs(0).iter().position(|&d| d == u32::MAX) {
        return Err(Error::Disconnected { from: 0, to });
    }
    let eig = symmetric_eigen(&adjacency_matrix(g), n, true)?;
    let lambda2 = eig.values.get(1).copied().unwrap_or(graph.k() as f64);
    let gap = graph.k() as f64 - lambda2;
    let fiedler = &eig.vectors.expect("requested")[1.min(n - 1)];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fiedler[a].total_cmp(&fiedler[b]).then(a.cmp(&b)));
    let mut inside = vec![false; n];
    let mut boundary: i64 = 0;
    let mut best = (f64::INFINITY, 0usize);
    for (count, &v) in order.iter().take(n / 2).enumerate() {
        let into = g.neighbors(v).iter().filter(|&&w| inside[w]).count() as i64;
        boundary += graph.k() as i64 - 2 * into;
        inside[v] = true;
        let ratio = boundary as f64 / (count + 1) as f64;
        if ratio < best.0 {
            best = (ratio, count + 1);
        }
    }
    let mut witness: Vec<usize> = order[..best.1].to_vec();
    witness.sort_unstable();
    let h = Ratio::floor_of(gap / 2.0, 1_000_000_000);
    Ok(ExpansionCertificate {
        h_num: h.num,
        h_den: h.den,
        witness,
        lambda2,
        gap,
        method: Method::Spectral,
    })
}

/// Exact certificate when `n` allows it, spectral otherwise.
pub fn certify(graph: &RegularGraph) -> Result<ExpansionCertificate> {
    if graph.n() <= EXACT_CHEEGER_MAX_N {
        cheeger_exact(graph)
    } else {
        cheeger_spectral(graph)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedGraph {
    pub graph: RegularGraph,
    pub certificate: ExpansionCertificate,
    /// Seed that produced `graph`.
    pub seed: u64,
}

/// One certified graph per size, each with guaranteed `h ≥ epsilon`.
///
/// Attempt `a` for the `j`-th size uses seed
/// `derive_seed(derive_seed(seed, j), a)`.
pub fn expander_family(
    sizes: &[usize],
    k: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<CertifiedGraph>> {
    if !(epsilon > 0.0) {
        return Err(Error::param(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if let Some(&n) = sizes.iter().find(|&&n| !(n * k).is_multiple_of(2)) {
        return Err(Error::param(format!(
            "n*k must be even, got n = {n}, k = {k}"
        )));
    }
    sizes
        .par_iter()
        .enumerate()
        .map(|(j, &n)| {
            let base = derive_seed(seed, j as u64);
            let mut best = 0.0f64;
            for attempt in 0..MAX_FAMILY_ATTEMPTS {
                let s = derive_seed(base, attempt);
                let graph = random_regular_graph(n, k, s)?;
                let certificate = match certify(&graph) {
                    Ok(c) => c,
                    Err(Error::Disconnected { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let bound = certificate.h_lower_bound();
                if bound >= epsilon {
                    return Ok(CertifiedGraph {
                        graph,
                        certificate,
                        seed: s,
                    });
                }
                best = best.max(bound);
            }
            Err(Error::EpsilonInfeasible { n, epsilon, best })
        })
        .collect()
}
