//! Fixtures shared by the benchmarks in `benches/`.

use embedlab_core::expander::random_regular_graph;
use embedlab_core::rng::SplitMix64;
use embedlab_core::{PointCloud, RegularGraph};

/// First connected 3-regular sample on `n` vertices, starting from `seed`.
pub fn connected_cubic(n: usize, seed: u64) -> RegularGraph {
    (seed..)
        .map(|s| random_regular_graph(n, 3, s).expect("valid parameters"))
        .find(|g| g.graph().is_connected())
        .expect("connected samples are common")
}

/// `n` points in `ℝ^dim` with Gaussian directions and log-uniform norms in `[1, 2^10]`.
pub fn shell_cloud(n: usize, dim: usize, seed: u64) -> PointCloud {
    let mut rng = SplitMix64::new(seed);
    let points = (0..n)
        .map(|_| {
            let v: Vec<f64> = (0..dim).map(|_| rng.gaussian()).collect();
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r = 2f64.powf(10.0 * rng.next_f64());
            v.into_iter().map(|x| x * r / len).collect()
        })
        .collect();
    PointCloud::new(2.0, points).expect("finite points")
}

/// `n` points uniform in the cube `[0, side]^dim` under the norm `p`.
pub fn cube_cloud(n: usize, dim: usize, side: f64, p: f64, seed: u64) -> PointCloud {
    let mut rng = SplitMix64::new(seed);
    let points = (0..n)
        .map(|_| (0..dim).map(|_| rng.uniform(0.0, side)).collect())
        .collect();
    PointCloud::new(p, points).expect("finite points")
}
