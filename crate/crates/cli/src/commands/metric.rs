//! `metric`: build and inspect finite metric spaces.

use std::path::PathBuf;

use clap::Args;

use embedlab_core::rng::SplitMix64;
use embedlab_core::spaces::{bounded_geometry_profile, disjoint_union, graph_metric, pnorm_metric};
use embedlab_core::{PointCloud, METRIC_TOLERANCE};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::io::{load_cloud, load_graph, load_space, write_text};

#[derive(Debug, Args)]
pub struct MetricArgs {
    /// Graph JSON; distances are hop counts.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Point cloud JSON; distances come from its norm.
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    /// Space JSON files to join with separated blocks, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub union: Option<Vec<PathBuf>>,
    /// Draw this many random points (written as `cloud.json` too).
    #[arg(long)]
    pub sample: Option<usize>,
    /// Dimension of sampled points (default 5).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Norm exponent tagged on sampled points (default 2).
    #[arg(long)]
    pub p: Option<f64>,
    /// Sampled norms are log-uniform on `[1, max_norm]` (default 1024).
    #[arg(long)]
    pub max_norm: Option<f64>,
    /// Radii at which to report the largest ball size, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
}

/// Points with Gaussian directions and log-uniform norms on `[1, max_norm]`.
pub fn sample_cloud(
    n: usize,
    dim: usize,
    p: f64,
    max_norm: f64,
    seed: u64,
) -> embedlab_core::Result<PointCloud> {
    let mut rng = SplitMix64::new(seed);
    let log_max = max_norm.ln();
    let points = (0..n)
        .map(|_| {
            let mut dir: Vec<f64> = (0..dim).map(|_| rng.gaussian()).collect();
            let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r = (log_max * rng.next_f64()).exp();
            dir.iter_mut().for_each(|x| *x *= r / len);
            dir
        })
        .collect();
    PointCloud::new(p, points)
}

/// `--tol` sets the metric validation tolerance for `--union` inputs.
pub fn metric(args: MetricArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&[
        "graph", "cloud", "union", "sample", "dim", "p", "max_norm", "radii",
    ])?;
    let graph: Option<PathBuf> = s.param(args.graph, "graph")?;
    let cloud: Option<PathBuf> = s.param(args.cloud, "cloud")?;
    let union: Option<Vec<PathBuf>> = s.param(args.union, "union")?;
    let sample: Option<usize> = s.param(args.sample, "sample")?;
    let given = [
        graph.is_some(),
        cloud.is_some(),
        union.is_some(),
        sample.is_some(),
    ];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(CliError::Usage(
            "give exactly one of --graph, --cloud, --union, --sample".into(),
        ));
    }
    let space = if let Some(path) = graph {
        graph_metric(&load_graph(&path)?)?
    } else if let Some(path) = cloud {
        pnorm_metric(&load_cloud(&path)?)?
    } else if let Some(paths) = union {
        let tol = s.tol_or(METRIC_TOLERANCE);
        let parts = paths
            .iter()
            .map(|p| load_space(p, tol))
            .collect::<CliResult<Vec<_>>>()?;
        disjoint_union(&parts)?
    } else {
        let n = sample.expect("one input is set");
        let dim = s.param_or(args.dim, "dim", 5)?;
        let p = s.param_or(args.p, "p", 2.0)?;
        let max_norm = s.param_or(args.max_norm, "max_norm", 1024.0)?;
        if n == 0 || dim == 0 || !(max_norm >= 1.0) {
            return Err(CliError::Usage(
                "--sample and --dim must be positive and --max-norm at least 1".into(),
            ));
        }
        let c = sample_cloud(n, dim, p, max_norm, s.seed()?)?;
        write_text(&s.out, "cloud.json", &(c.to_json() + "\n"))?;
        pnorm_metric(&c)?
    };
    write_text(&s.out, "space.json", &(space.to_json() + "\n"))?;
    println!("points = {}  diameter = {}", space.len(), space.diameter());
    if let Some(radii) = s.param(args.radii, "radii")? {
        let profile = bounded_geometry_profile(&space, &radii)?;
        let mut csv = String::from("r,max_ball\n");
        for (r, c) in profile.radii.iter().zip(&profile.counts) {
            csv.push_str(&format!("{r},{c}\n"));
            println!("M({r}) = {c}");
        }
        write_text(&s.out, "profile.csv", &csv)?;
    }
    Ok(())
}
