//! Finite metric spaces and the objects that induce them.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::METRIC_TOLERANCE;

/// A single failed metric axiom, with the indices involved.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `dist[i][i] != 0`.
    Diagonal { i: usize, value: f64 },
    /// `dist[i][j] != dist[j][i]`, reported once with `i < j`.
    Asymmetry { i: usize, j: usize },
    /// `dist[i][j] <= 0` (or not finite) for `i != j`.
    NonPositive { i: usize, j: usize, value: f64 },
    /// `dist[i][j] > dist[i][k] + dist[k][j]`.
    Triangle { i: usize, j: usize, via: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { i, value } => write!(f, "dist[{i}][{i}] = {value}, expected 0"),
            Violation::Asymmetry { i, j } => write!(f, "asymmetry at ({i},{j})"),
            Violation::NonPositive { i, j, value } => {
                write!(f, "dist[{i}][{j}] = {value} is not positive")
            }
            Violation::Triangle { i, j, via } => write!(f, "triangle ({i},{j}) via {via}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every metric axiom on a square matrix and list each failure.
pub fn validate_metric(matrix: &[Vec<f64>], tolerance: f64) -> Result<ValidationReport> {
    let n = matrix.len();
    if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Shape(format!(
            "row {row} has {} entries, expected {n}",
            r.len()
        )));
    }
    let mut violations = Vec::new();
    for i in 0..n {
        let d = matrix[i][i];
        if !(d.abs() <= tolerance) {
            violations.push(Violation::Diagonal { i, value: d });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !((matrix[i][j] - matrix[j][i]).abs() <= tolerance) {
                violations.push(Violation::Asymmetry { i, j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let d = matrix[i][j];
            if i != j && !(d > 0.0 && d.is_finite()) {
                violations.push(Violation::NonPositive { i, j, value: d });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if matrix[i][j] > matrix[i][k] + matrix[k][j] + tolerance {
                    violations.push(Violation::Triangle { i, j, via: k });
                }
            }
        }
    }
    Ok(ValidationReport { violations })
}

/// `n` labelled points with a symmetric distance matrix satisfying the
/// metric axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceJson {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    /// Build a validated space. Fails with [`Error::Invariant`] listing the
    /// first violations when the matrix is not a metric within `tolerance`.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>, tolerance: f64) -> Result<Self> {
        if labels.len() != dist.len() {
            return Err(Error::Shape(format!(
                "{} labels for a {}-row matrix",
                labels.len(),
                dist.len()
            )));
        }
        let report = validate_metric(&dist, tolerance)?;
        if !report.is_ok() {
            let shown: Vec<String> = report
                .violations
                .iter()
                .take(5)
                .map(|v| v.to_string())
                .collect();
            return Err(Error::Invariant(format!(
                "{} metric violation(s): {}",
                report.violations.len(),
                shown.join("; ")
            )));
        }
        Ok(Self::from_rows_unchecked(labels, &dist))
    }

    /// Build from rows with numeric labels `0..n`.
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..dist.len()).map(|i| i.to_string()).collect();
        Self::new(labels, dist, METRIC_TOLERANCE)
    }

    fn from_rows_unchecked(labels: Vec<String>, rows: &[Vec<f64>]) -> Self {
        let dist = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { labels, dist }
    }

    pub(crate) fn from_flat_unchecked(labels: Vec<String>, dist: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len() * labels.len(), dist.len());
        Self { labels, dist }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist
            .chunks(self.len().max(1))
            .map(|c| c.to_vec())
            .take(self.len())
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Unordered pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
    }

    /// Multiply every distance by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        Ok(Self {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|d| d * c).collect(),
        })
    }

    /// Apply `g` entrywise, e.g. a square-root snowflake.
    pub fn transformed(&self, g: impl Fn(f64) -> f64) -> Self {
        Self {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|&d| g(d)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpaceJson {
            labels: self.labels.clone(),
            dist: self.rows(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json_str_with_tolerance(s, METRIC_TOLERANCE)
    }

    /// Parse and validate with a caller-chosen metric tolerance.
    pub fn from_json_str_with_tolerance(s: &str, tolerance: f64) -> Result<Self> {
        let raw: SpaceJson = serde_json::from_str(s).map_err(Error::from_json)?;
        let n = raw.labels.len();
        if raw.dist.len() != n {
            return Err(Error::Format {
                location: "dist".into(),
                message: format!("{} rows for {n} labels", raw.dist.len()),
            });
        }
        for (i, row) in raw.dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format {
                    location: format!("dist[{i}]"),
                    message: format!("{} entries, expected {n}", row.len()),
                });
            }
        }
        Self::new(raw.labels, raw.dist, tolerance).map_err(|e| Error::Format {
            location: "dist".into(),
            message: e.to_string(),
        })
    }
}

impl Serialize for FiniteMetricSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceJson {
            labels: self.labels.clone(),
            dist: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMetricSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SpaceJson::deserialize(d)?;
        FiniteMetricSpace::new(raw.labels, raw.dist, METRIC_TOLERANCE)
            .map_err(serde::de::Error::custom)
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Build from an edge list. Rejects loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Format {
                    location: format!("edges[{idx}]"),
                    message: format!("endpoint out of range for n = {n}"),
                });
            }
            if u == v {
                return Err(Error::Format {
                    location: format!("edges[{idx}]"),
                    message: format!("self-loop at {u}"),
                });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Format {
                    location: "edges".into(),
                    message: format!("repeated edge at vertex {v}"),
                });
            }
        }
        Ok(Self { adj })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::param("a cycle needs at least 3 vertices"));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// BFS hop counts from `source`; `u32::MAX` marks unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs hop counts, or the first unreachable pair.
    pub fn hop_distances(&self) -> Result<Vec<Vec<u32>>> {
        let n = self.vertex_count();
        let rows: Vec<Vec<u32>> = (0..n).into_par_iter().map(|s| self.bfs(s)).collect();
        if let Some(to) = rows
            .first()
            .and_then(|r| r.iter().position(|&d| d == u32::MAX))
        {
            return Err(Error::Disconnected { from: 0, to });
        }
        Ok(rows)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs(0).iter().all(|&d| d != u32::MAX)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphJson {
            n: self.vertex_count(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(s).map_err(Error::from_json)?;
        for (idx, e) in raw.edges.iter().enumerate() {
            if e[0] >= e[1] {
                return Err(Error::Format {
                    location: format!("edges[{idx}]"),
                    message: format!("expected u < v, got [{}, {}]", e[0], e[1]),
                });
            }
        }
        let edges: Vec<_> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(raw.n, &edges)
    }
}

/// Shortest-path metric of a connected graph.
pub fn graph_metric(graph: &Graph) -> Result<FiniteMetricSpace> {
    let hops = graph.hop_distances()?;
    let n = graph.vertex_count();
    let dist = hops
        .iter()
        .flat_map(|r| r.iter().map(|&h| h as f64))
        .collect();
    Ok(FiniteMetricSpace::from_flat_unchecked(
        (0..n).map(|i| i.to_string()).collect(),
        dist,
    ))
}

/// Finite set of vectors in `ℝ^m` with an `ℓ_p` norm.
///
/// When `blocks` is set the coordinates are split into consecutive Euclidean
/// blocks of the given sizes and the norm is the `ℓ_p`-sum of the block
/// norms, `(Σ_i ||y_i||_2^p)^{1/p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    p: f64,
    points: Vec<Vec<f64>>,
    blocks: Option<Vec<usize>>,
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("norm exponent must be >= 1, got {p}")))
    }
}

/// `ℓ_p` norm, `p = f64::INFINITY` for the max norm.
pub fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    } else if p.is_infinite() {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    } else {
        v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

impl PointCloud {
    pub fn new(p: f64, points: Vec<Vec<f64>>) -> Result<Self> {
        check_exponent(p)?;
        let m = points.first().map(Vec::len).unwrap_or(1);
        if m == 0 {
            return Err(Error::Shape("points must have dimension >= 1".into()));
        }
        if let Some(i) = points.iter().position(|x| x.len() != m) {
            return Err(Error::Shape(format!(
                "point {i} has dimension {}, expected {m}",
                points[i].len()
            )));
        }
        if let Some(i) = points.iter().position(|x| x.iter().any(|c| !c.is_finite())) {
            return Err(Error::Shape(format!(
                "point {i} has a non-finite coordinate"
            )));
        }
        Ok(Self {
            p,
            points,
            blocks: None,
        })
    }

    /// Cloud whose norm is the `ℓ_p`-sum of Euclidean blocks.
    pub fn with_blocks(p: f64, points: Vec<Vec<f64>>, blocks: Vec<usize>) -> Result<Self> {
        let mut cloud = Self::new(p, points)?;
        let total: usize = blocks.iter().sum();
        if cloud.dim() != total && !cloud.points.is_empty() {
            return Err(Error::Shape(format!(
                "block sizes sum to {total}, points have dimension {}",
                cloud.dim()
            )));
        }
        cloud.blocks = Some(blocks);
        Ok(cloud)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map(Vec::len).unwrap_or(0)
    }

    /// Norm of an arbitrary coordinate vector under this cloud's norm.
    pub fn norm_of(&self, v: &[f64]) -> f64 {
        match &self.blocks {
            None => lp_norm(v, self.p),
            Some(sizes) => {
                let mut start = 0;
                let norms: Vec<f64> = sizes
                    .iter()
                    .map(|&s| {
                        let b = lp_norm(&v[start..start + s], 2.0);
                        start += s;
                        b
                    })
                    .collect();
                lp_norm(&norms, self.p)
            }
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let diff: Vec<f64> = self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| a - b)
            .collect();
        self.norm_of(&diff)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(Error::from_json)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentJson {
    Number(f64),
    Word(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CloudJson {
    p: ExponentJson,
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<usize>>,
}

impl Serialize for PointCloud {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = if self.p.is_infinite() {
            ExponentJson::Word("inf".into())
        } else {
            ExponentJson::Number(self.p)
        };
        CloudJson {
            p,
            points: self.points.clone(),
            blocks: self.blocks.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointCloud {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CloudJson::deserialize(d)?;
        let p = match raw.p {
            ExponentJson::Number(p) => p,
            ExponentJson::Word(w) if w == "inf" => f64::INFINITY,
            ExponentJson::Word(w) => {
                return Err(D::Error::custom(format!(
                    "field p: expected a number or \"inf\", got {w:?}"
                )))
            }
        };
        let built = match raw.blocks {
            Some(b) => PointCloud::with_blocks(p, raw.points, b),
            None => PointCloud::new(p, raw.points),
        };
        built.map_err(|e| D::Error::custom(format!("field points: {e}")))
    }
}

/// Metric induced by the cloud's norm. Coincident points are rejected since
/// they do not form a metric space.
pub fn pnorm_metric(cloud: &PointCloud) -> Result<FiniteMetricSpace> {
    check_exponent(cloud.p)?;
    let n = cloud.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = cloud.distance(i, j);
            if d <= 0.0 {
                return Err(Error::Shape(format!("points {i} and {j} coincide")));
            }
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(FiniteMetricSpace::from_flat_unchecked(
        (0..n).map(|i| i.to_string()).collect(),
        dist,
    ))
}

/// Largest ball cardinality `M(r)` for each radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryProfile {
    pub radii: Vec<f64>,
    pub counts: Vec<usize>,
}

pub fn bounded_geometry_profile(
    space: &FiniteMetricSpace,
    radii: &[f64],
) -> Result<GeometryProfile> {
    if radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::param("radii must be nonnegative"));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("radii must be strictly increasing"));
    }
    let n = space.len();
    let counts = radii
        .iter()
        .map(|&r| {
            (0..n)
                .into_par_iter()
                .map(|x| (0..n).filter(|&y| space.d(x, y) <= r).count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    Ok(GeometryProfile {
        radii: radii.to_vec(),
        counts,
    })
}

/// Glue spaces into one: each keeps its own metric, and a point of block
/// `i` sits at distance `R_i + R_j` from a point of block `j`, where
/// `R_i = diam(block i) + i` with 1-based `i`.
pub fn disjoint_union(spaces: &[FiniteMetricSpace]) -> Result<FiniteMetricSpace> {
    match spaces {
        [] => return Err(Error::param("disjoint union of an empty list")),
        [single] => return Ok(single.clone()),
        _ => {}
    }
    let radius: Vec<f64> = spaces
        .iter()
        .enumerate()
        .map(|(i, s)| s.diameter() + (i + 1) as f64)
        .collect();
    let mut owner = Vec::new();
    let mut labels = Vec::new();
    for (b, s) in spaces.iter().enumerate() {
        for (local, label) in s.labels().iter().enumerate() {
            owner.push((b, local));
            labels.push(format!("{b}:{label}"));
        }
    }
    let n = owner.len();
    let mut dist = vec![0.0; n * n];
    for (x, &(bx, lx)) in owner.iter().enumerate() {
        for (y, &(by, ly)) in owner.iter().enumerate() {
            dist[x * n + y] = if bx == by {
                spaces[bx].d(lx, ly)
            } else {
                radius[bx] + radius[by]
            };
        }
    }
    Ok(FiniteMetricSpace::from_flat_unchecked(labels, dist))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_metric_is_valid() {
        let r = validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]], 0.0).unwrap();
        assert!(r.is_ok());
    }

    #[test]
    fn asymmetry_reported() {
        let r = validate_metric(&[vec![0.0, 1.0], vec![2.0, 0.0]], 0.0).unwrap();
        assert_eq!(r.violations, vec![Violation::Asymmetry { i: 0, j: 1 }]);
    }

    #[test]
    fn triangle_reported() {
        let m = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        let r = validate_metric(&m, 0.0).unwrap();
        assert!(r
            .violations
            .contains(&Violation::Triangle { i: 0, j: 2, via: 1 }));
        assert!(r
            .violations
            .contains(&Violation::Triangle { i: 2, j: 0, via: 1 }));
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn non_square_is_shape_error() {
        assert!(matches!(
            validate_metric(&[vec![0.0, 1.0]], 0.0),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn zero_off_diagonal_reported() {
        let r = validate_metric(&[vec![0.0, 0.0], vec![0.0, 0.0]], 0.0).unwrap();
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn small_graph_metrics() {
        let c4 = graph_metric(&Graph::cycle(4).unwrap()).unwrap();
        assert_eq!(c4.d(0, 2), 2.0);
        assert_eq!(c4.d(0, 1), 1.0);
        let k2 = graph_metric(&Graph::complete(2).unwrap()).unwrap();
        assert_eq!(k2.d(0, 1), 1.0);
        let p3 = graph_metric(&Graph::path(3).unwrap()).unwrap();
        assert_eq!(p3.d(0, 2), 2.0);
    }

    #[test]
    fn disconnected_graph_names_pair() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            graph_metric(&g),
            Err(Error::Disconnected { from: 0, to: 2 })
        );
    }

    #[test]
    fn unit_vectors_in_three_norms() {
        let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let d = |p| {
            pnorm_metric(&PointCloud::new(p, pts.clone()).unwrap())
                .unwrap()
                .d(0, 1)
        };
        assert_eq!(d(1.0), 2.0);
        assert!((d(2.0) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(d(f64::INFINITY), 1.0);
    }

    #[test]
    fn exponent_below_one_rejected() {
        assert!(matches!(
            PointCloud::new(0.5, vec![vec![0.0]]),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn profile_on_c4() {
        let c4 = graph_metric(&Graph::cycle(4).unwrap()).unwrap();
        let prof = bounded_geometry_profile(&c4, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(prof.counts, vec![1, 3, 4]);
        assert!(bounded_geometry_profile(&c4, &[1.0, 1.0]).is_err());
        assert!(bounded_geometry_profile(&c4, &[-1.0]).is_err());
    }

    #[test]
    fn union_of_points_and_edges() {
        let pt = FiniteMetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        let u = disjoint_union(&[pt.clone(), pt.clone()]).unwrap();
        assert_eq!(u.d(0, 1), 3.0);

        let k2 = graph_metric(&Graph::complete(2).unwrap()).unwrap();
        let u = disjoint_union(&[k2.clone(), k2.clone()]).unwrap();
        assert_eq!(u.d(0, 1), 1.0);
        assert_eq!(u.d(2, 3), 1.0);
        assert_eq!(u.d(0, 2), 5.0);
        assert!(validate_metric(&u.rows(), 0.0).unwrap().is_ok());

        assert_eq!(disjoint_union(std::slice::from_ref(&k2)).unwrap(), k2);
        assert!(disjoint_union(&[]).is_err());
    }

    #[test]
    fn json_round_trip_and_diagnostics() {
        let c4 = graph_metric(&Graph::cycle(4).unwrap()).unwrap();
        let back = FiniteMetricSpace::from_json_str(&c4.to_json()).unwrap();
        assert_eq!(back, c4);

        let err = FiniteMetricSpace::from_json_str(r#"{"labels":["a","b"],"dist":[[0,1],[1]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Format { ref location, .. } if location == "dist[1]"));

        let err = FiniteMetricSpace::from_json_str("{\"labels\": [\"a\"],\n \"dist\": oops}")
            .unwrap_err();
        assert!(
            matches!(err, Error::Format { ref location, .. } if location.starts_with("line 2"))
        );

        let g = Graph::from_json_str(r#"{"n":3,"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(Graph::from_json_str(r#"{"n":3,"edges":[[1,0]]}"#).is_err());
        assert!(Graph::from_json_str(r#"{"n":3,"edges":[[0,1]],"extra":1}"#).is_err());

        let c = PointCloud::from_json_str(r#"{"p":"inf","points":[[1,0],[0,1]]}"#).unwrap();
        assert!(c.p().is_infinite());
        assert!(c.to_json().contains("\"inf\""));
        assert!(PointCloud::from_json_str(r#"{"p":"two","points":[[1]]}"#).is_err());
        assert!(PointCloud::from_json_str(r#"{"p":2,"points":[[1],[1,2]]}"#).is_err());
    }

    #[test]
    fn block_norm() {
        let c = PointCloud::with_blocks(1.0, vec![vec![3.0, 4.0, 1.0]], vec![2, 1]).unwrap();
        assert_eq!(c.norm_of(&[3.0, 4.0, 1.0]), 6.0);
    }
}
