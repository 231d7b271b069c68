//! File helpers that attach paths to every failure.

use std::fs;
use std::path::{Path, PathBuf};

use embedlab_core::expander::ExpansionCertificate;
use embedlab_core::{EmbeddingMap, FiniteMetricSpace, Graph, PointCloud, RegularGraph};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write `contents` to `dir/name`, creating `dir` if needed.
pub fn write_text(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> embedlab_core::Result<T>) -> CliResult<T> {
    let text = read_text(path)?;
    parse(&text).map_err(|e| CliError::in_file(path, e))
}

pub fn load_space(path: &Path, tolerance: f64) -> CliResult<FiniteMetricSpace> {
    load(path, |s| {
        FiniteMetricSpace::from_json_str_with_tolerance(s, tolerance)
    })
}

pub fn load_cloud(path: &Path) -> CliResult<PointCloud> {
    load(path, PointCloud::from_json_str)
}

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    load(path, Graph::from_json_str)
}

pub fn load_regular(path: &Path) -> CliResult<RegularGraph> {
    load(path, RegularGraph::from_json_str)
}

pub fn load_certificate(path: &Path) -> CliResult<ExpansionCertificate> {
    load(path, ExpansionCertificate::from_json_str)
}

pub fn load_embedding(path: &Path) -> CliResult<EmbeddingMap> {
    load(path, EmbeddingMap::from_json_str)
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
