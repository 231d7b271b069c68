//! `certificate`: the optimal far-pair measure of a space.

use std::path::PathBuf;

use clap::Args;

use embedlab_core::game::{
    cut_sample_maps, far_pairs, minimax_measure_detailed, MINIMAX_TOLERANCE,
};
use embedlab_core::obstruction::certificate_average;
use embedlab_core::spaces::graph_metric;
use embedlab_core::METRIC_TOLERANCE;

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::io::{load_graph, load_space, write_text};

#[derive(Debug, Args)]
pub struct CertificateArgs {
    /// Space JSON (`{"labels", "dist"}`).
    #[arg(long, conflicts_with = "graph")]
    pub space: Option<PathBuf>,
    /// Graph JSON, used through its hop metric.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Pairs at distance at least this are far.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Random 1-Lipschitz cut maps checked against the certificate (default 0).
    #[arg(long)]
    pub samples: Option<usize>,
}

/// `--tol` sets the allowed duality gap and sampling slack (default 1e-7).
pub fn certificate(args: CertificateArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&["space", "graph", "threshold", "samples"])?;
    let space = match (s.param(args.space, "space")?, s.param(args.graph, "graph")?) {
        (Some(p), None) => load_space(&p, METRIC_TOLERANCE)?,
        (None, Some(p)) => graph_metric(&load_graph(&p)?)?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --space, --graph".into(),
            ))
        }
    };
    let threshold: f64 = s.require(args.threshold, "threshold")?;
    let samples = s.param_or(args.samples, "samples", 0)?;
    let tol = s.tol_or(MINIMAX_TOLERANCE);

    let sol = minimax_measure_detailed(&space, threshold)?;
    let cert = &sol.certificate;
    write_text(&s.out, "certificate.json", &(cert.to_json() + "\n"))?;
    println!("points = {}  threshold = {threshold}", space.len());
    println!("far pairs = {}", far_pairs(&space, threshold).len());
    println!("D = {}", cert.value);
    println!("support = {} pair(s)", cert.support().len());
    println!("duality gap = {:e}", sol.duality_gap());
    if sol.duality_gap() > tol {
        return Err(CliError::Check(format!(
            "duality gap {} exceeds {tol}",
            sol.duality_gap()
        )));
    }
    if samples > 0 {
        let maps = cut_sample_maps(&space, samples, s.seed()?)?;
        let mut worst: f64 = 0.0;
        for m in &maps {
            worst = worst.max(certificate_average(m, cert, &space)?.ratio);
        }
        println!("sampled maps = {samples}  max average/Lip = {worst}");
        if worst > cert.value + tol {
            return Err(CliError::Check(format!(
                "a sampled map averages {worst} > D = {}",
                cert.value
            )));
        }
    }
    Ok(())
}
