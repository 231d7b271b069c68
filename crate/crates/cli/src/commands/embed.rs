//! `embed` and `moduli`.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use embedlab_core::embed::{
    assemble_coarse_embedding, case_breakdown, empirical_moduli, schoenberg_l1_to_l2,
    shell_embedding, ShellCase,
};
use embedlab_core::spaces::pnorm_metric;
use embedlab_core::{EmbeddingMap, ModuliEstimate, METRIC_TOLERANCE};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::io::{load_cloud, load_embedding, load_space, to_json, write_text};

/// Relative slack on the designed moduli of a coarse embedding.
const DESIGN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbedKind {
    /// Dyadic shells of a Euclidean cloud into an ℓ_p-sum of blocks.
    Shell,
    /// √ℓ₁ snowflake of an ℓ₁ cloud into ℓ₂.
    Schoenberg,
    /// Gaussian sphere maps stacked over scales.
    Coarse,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long, value_enum)]
    pub kind: Option<EmbedKind>,
    /// Point cloud JSON.
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    /// Space JSON (coarse only).
    #[arg(long, conflicts_with = "cloud")]
    pub space: Option<PathBuf>,
    /// Exponent of the target norm (default 2).
    #[arg(long)]
    pub target_p: Option<f64>,
    /// Increasing block thresholds for the coarse embedding, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Option<Vec<f64>>,
    /// Moduli bins (default 20).
    #[arg(long)]
    pub bins: Option<usize>,
}

fn staircase_csv(est: &ModuliEstimate) -> String {
    let mut out = String::from("bin_lo,rho1\n");
    for (lo, r) in est.rho1_staircase() {
        out.push_str(&format!("{lo},{r}\n"));
    }
    out
}

fn write_moduli(s: &Settings, map: &EmbeddingMap, bins: usize) -> CliResult<ModuliEstimate> {
    let est = empirical_moduli(map, bins)?;
    write_text(&s.out, "moduli.csv", &est.to_csv())?;
    write_text(&s.out, "staircase.csv", &staircase_csv(&est))?;
    Ok(est)
}

fn print_map(map: &EmbeddingMap) {
    println!("points = {}", map.source().len());
    println!(
        "lip = {}  colip = {}  distortion = {}",
        map.lip(),
        map.colip(),
        map.distortion()
    );
}

/// `--tol` sets the allowed Schoenberg reconstruction error (default 1e-9).
pub fn embed(args: EmbedArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&["kind", "cloud", "space", "target_p", "thresholds", "bins"])?;
    let kind: EmbedKind = s.require(args.kind, "kind")?;
    let cloud: Option<PathBuf> = s.param(args.cloud, "cloud")?;
    let space: Option<PathBuf> = s.param(args.space, "space")?;
    let target_p = s.param_or(args.target_p, "target_p", 2.0)?;
    let bins = s.param_or(args.bins, "bins", 20)?;
    let need_cloud = || {
        cloud
            .clone()
            .ok_or_else(|| CliError::Usage("missing --cloud".into()))
    };
    match kind {
        EmbedKind::Shell => {
            let emb = shell_embedding(&load_cloud(&need_cloud()?)?, target_p)?;
            write_text(&s.out, "embedding.json", &(emb.map().to_json() + "\n"))?;
            write_moduli(s, emb.map(), bins)?;
            print_map(emb.map());
            let cases = case_breakdown(&emb);
            for c in [
                ShellCase::One,
                ShellCase::Two,
                ShellCase::Three,
                ShellCase::Origin,
            ] {
                println!("case {c:?}: {} pair(s)", cases.count(c));
            }
            let first = cases.violations().next().cloned();
            if let Some(v) = first {
                return Err(CliError::Check(format!(
                    "{} pair(s) break their case bound, first {v:?}",
                    cases.violations().count()
                )));
            }
        }
        EmbedKind::Schoenberg => {
            let emb = schoenberg_l1_to_l2(&load_cloud(&need_cloud()?)?)?;
            write_text(&s.out, "embedding.json", &(emb.map.to_json() + "\n"))?;
            write_moduli(s, &emb.map, bins)?;
            print_map(&emb.map);
            println!(
                "min eigenvalue = {:e}  clipped = {:e}",
                emb.min_eigenvalue, emb.clipped
            );
            println!("max squared-distance error = {:e}", emb.max_error);
            let tol = s.tol_or(1e-9);
            if emb.max_error > tol {
                return Err(CliError::Check(format!(
                    "reconstruction error {} exceeds {tol}",
                    emb.max_error
                )));
            }
        }
        EmbedKind::Coarse => {
            let source = match (cloud, space) {
                (Some(c), None) => pnorm_metric(&load_cloud(&c)?)?,
                (None, Some(p)) => load_space(&p, METRIC_TOLERANCE)?,
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --cloud, --space".into(),
                    ))
                }
            };
            let thresholds: Vec<f64> = s.require(args.thresholds, "thresholds")?;
            let emb = assemble_coarse_embedding(&source, target_p, &thresholds)?;
            write_text(&s.out, "embedding.json", &(emb.map.to_json() + "\n"))?;
            write_text(&s.out, "blocks.json", &to_json(&emb.blocks))?;
            write_moduli(s, &emb.map, bins)?;
            print_map(&emb.map);
            for b in &emb.blocks {
                let rho1 = emb.map.rho1_at(b.threshold).unwrap_or(f64::INFINITY);
                println!(
                    "block {}: t = {}  eps = {:.3e}  delta = {:.6e}  rho1(t) = {rho1}",
                    b.index, b.threshold, b.eps, b.delta
                );
                if rho1 < b.index as f64 * (1.0 - DESIGN_SLACK) {
                    return Err(CliError::Check(format!(
                        "block {}: rho1(t) = {rho1} below {}",
                        b.index, b.index
                    )));
                }
            }
            let over = emb
                .map
                .pair_distances()
                .find(|&(d, e)| e > emb.rho2_bound(d) * (1.0 + DESIGN_SLACK));
            if let Some((d, e)) = over {
                return Err(CliError::Check(format!(
                    "pair at distance {d} expands to {e}, above the designed bound"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct ModuliArgs {
    /// Embedding JSON written by `embed`.
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    /// Number of bins (default 20).
    #[arg(long)]
    pub bins: Option<usize>,
}

pub fn moduli(args: ModuliArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&["embedding", "bins"])?;
    let path: PathBuf = s.require(args.embedding, "embedding")?;
    let map = load_embedding(&path)?;
    let bins = s.param_or(args.bins, "bins", 20)?;
    let est = write_moduli(s, &map, bins)?;
    print_map(&map);
    let empty = est.bins.iter().filter(|b| b.count == 0).count();
    println!("bins = {bins}  empty = {empty}");
    Ok(())
}
