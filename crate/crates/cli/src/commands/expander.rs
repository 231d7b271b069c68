//! `gen-expander`, `cheeger` and `obstruct`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use embedlab_core::expander::{
    certify, cheeger_exact, cheeger_spectral, expander_family, CertifiedGraph, DEFAULT_EPSILON,
};
use embedlab_core::obstruction::{
    moduli_cap, moduli_constraints_csv, poincare_ratio, POINCARE_TOLERANCE,
};
use embedlab_core::rng::{derive_seed, SplitMix64};
use embedlab_core::PointCloud;

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::io::{load_certificate, load_regular, read_text, to_json, write_text};

/// Index of a generated family, written as `family.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyManifest {
    pub k: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub members: Vec<FamilyEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub n: usize,
    /// Seed of the accepted sample.
    pub seed: u64,
    /// File names relative to the manifest.
    pub graph: String,
    pub certificate: String,
}

#[derive(Debug, Args)]
pub struct GenExpanderArgs {
    /// Graph sizes, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "n")]
    pub sizes: Option<Vec<usize>>,
    /// A single graph size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Degree (default 3).
    #[arg(long)]
    pub k: Option<usize>,
    /// Required lower bound on the Cheeger constant (default 0.2).
    #[arg(long)]
    pub eps: Option<f64>,
}

pub fn gen_expander(args: GenExpanderArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&["sizes", "n", "k", "eps"])?;
    let sizes = match (s.param(args.sizes, "sizes")?, s.param(args.n, "n")?) {
        (Some(v), _) => v,
        (None, Some(n)) => vec![n],
        (None, None) => return Err(CliError::Usage("give --sizes or --n".into())),
    };
    if sizes.iter().collect::<BTreeSet<_>>().len() != sizes.len() {
        return Err(CliError::Usage("sizes must be distinct".into()));
    }
    let k = s.param_or(args.k, "k", 3)?;
    let eps = s.param_or(args.eps, "eps", DEFAULT_EPSILON)?;
    let seed = s.seed()?;
    let family = expander_family(&sizes, k, eps, seed)?;
    let mut members = Vec::with_capacity(family.len());
    for m in &family {
        let n = m.graph.n();
        let graph = format!("graph_{n}.json");
        let certificate = format!("cert_{n}.json");
        write_text(&s.out, &graph, &(m.graph.to_json() + "\n"))?;
        write_text(&s.out, &certificate, &(m.certificate.to_json() + "\n"))?;
        println!(
            "n={n} k={k} h>={} ({:?}) lambda2={} seed={}",
            m.certificate.h_lower_bound(),
            m.certificate.method,
            m.certificate.lambda2,
            m.seed
        );
        members.push(FamilyEntry {
            n,
            seed: m.seed,
            graph,
            certificate,
        });
    }
    let manifest = FamilyManifest {
        k,
        epsilon: eps,
        seed,
        members,
    };
    write_text(&s.out, "family.json", &to_json(&manifest))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheegerMethod {
    /// Exact when small enough, spectral otherwise.
    Auto,
    Exact,
    Spectral,
}

#[derive(Debug, Args)]
pub struct CheegerArgs {
    /// Regular graph JSON (`{"n", "edges"}`).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<CheegerMethod>,
}

pub fn cheeger(args: CheegerArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&["graph", "method"])?;
    let path: PathBuf = s.require(args.graph, "graph")?;
    let graph = load_regular(&path)?;
    let cert = match s.param_or(args.method, "method", CheegerMethod::Auto)? {
        CheegerMethod::Auto => certify(&graph)?,
        CheegerMethod::Exact => cheeger_exact(&graph)?,
        CheegerMethod::Spectral => cheeger_spectral(&graph)?,
    };
    write_text(&s.out, "certificate.json", &(cert.to_json() + "\n"))?;
    let h = cert.h();
    println!("n={} k={}", graph.n(), graph.k());
    println!("h = {}/{} ({:?})", h.num, h.den, cert.method);
    println!("lambda2 = {}  gap = {}", cert.lambda2, cert.gap);
    println!("witness size = {}", cert.witness.len());
    if cert.method == embedlab_core::Method::Exact && !cert.satisfies_cheeger_inequality(graph.k())
    {
        return Err(CliError::Check(
            "exact Cheeger constant violates the two-sided Cheeger inequality".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct ObstructArgs {
    /// Directory written by `gen-expander`.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Lipschitz constant of the maps being constrained (default 1).
    #[arg(long)]
    pub lip: Option<f64>,
    /// Distance threshold for far pairs.
    #[arg(long)]
    pub t: Option<f64>,
    /// Random Gaussian maps per graph for the Poincaré check (default 100).
    #[arg(long)]
    pub maps: Option<usize>,
    /// Target dimension of those maps (default 4).
    #[arg(long)]
    pub dim: Option<usize>,
}

/// Aggregate Poincaré statistics for one family member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoincareSummary {
    pub n: usize,
    pub lambda2: f64,
    pub bound: f64,
    pub maps: usize,
    pub dim: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub violations: usize,
}

pub fn load_family(dir: &std::path::Path) -> CliResult<Vec<CertifiedGraph>> {
    let manifest_path = dir.join("family.json");
    let manifest: FamilyManifest = serde_json::from_str(&read_text(&manifest_path)?)
        .map_err(|e| CliError::in_file(&manifest_path, embedlab_core::Error::from_json(e)))?;
    manifest
        .members
        .iter()
        .map(|m| {
            let graph = load_regular(&dir.join(&m.graph))?;
            let certificate = load_certificate(&dir.join(&m.certificate))?;
            if graph.n() != m.n {
                return Err(CliError::Parse {
                    path: dir.join(&m.graph),
                    message: format!("manifest says {} vertices, file has {}", m.n, graph.n()),
                });
            }
            Ok(CertifiedGraph {
                graph,
                certificate,
                seed: m.seed,
            })
        })
        .collect()
}

/// `--tol` sets the slack allowed above the Poincaré bound.
pub fn obstruct(args: ObstructArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&["family", "lip", "t", "maps", "dim"])?;
    let dir: PathBuf = s.require(args.family, "family")?;
    let lip = s.param_or(args.lip, "lip", 1.0)?;
    let t: f64 = s.require(args.t, "t")?;
    let maps = s.param_or(args.maps, "maps", 100)?;
    let dim = s.param_or(args.dim, "dim", 4)?;
    if maps == 0 || dim == 0 {
        return Err(CliError::Usage("--maps and --dim must be positive".into()));
    }
    let seed = s.seed()?;
    let tol = s.tol_or(POINCARE_TOLERANCE);
    let family = load_family(&dir)?;

    let constraints = moduli_cap(&family, lip, t)?;
    write_text(
        &s.out,
        "constraints.csv",
        &moduli_constraints_csv(&constraints),
    )?;

    let mut summaries = Vec::with_capacity(family.len());
    for (idx, member) in family.iter().enumerate() {
        let mut rng = SplitMix64::new(derive_seed(seed, idx as u64));
        let mut max_ratio: f64 = 0.0;
        let mut total = 0.0;
        let mut violations = 0;
        let mut bound = 0.0;
        for _ in 0..maps {
            let points = (0..member.graph.n())
                .map(|_| (0..dim).map(|_| rng.gaussian()).collect())
                .collect();
            let report = poincare_ratio(
                &member.graph,
                member.certificate.lambda2,
                &PointCloud::new(2.0, points)?,
            )?;
            let ratio = report.ratio.unwrap_or(0.0);
            bound = report.bound;
            max_ratio = max_ratio.max(ratio);
            total += ratio;
            if ratio > report.bound + tol {
                violations += 1;
            }
        }
        summaries.push(PoincareSummary {
            n: member.graph.n(),
            lambda2: member.certificate.lambda2,
            bound,
            maps,
            dim,
            max_ratio,
            mean_ratio: total / maps as f64,
            violations,
        });
    }
    write_text(&s.out, "poincare.json", &to_json(&summaries))?;

    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "n", "bound", "max_ratio", "rho1_cap"
    );
    for (c, p) in constraints.iter().zip(&summaries) {
        let cap = c
            .rho1_cap
            .map(|v| format!("{v:.6}"))
            .unwrap_or_else(|| "vacuous".into());
        println!(
            "{:>6} {:>12.6} {:>12.6} {:>12}",
            c.n, p.bound, p.max_ratio, cap
        );
    }
    let bad: usize = summaries.iter().map(|p| p.violations).sum();
    if bad > 0 {
        return Err(CliError::Check(format!(
            "{bad} map(s) exceed the Poincaré bound"
        )));
    }
    Ok(())
}
