//! `plot`: CSV tables to SVG charts.

use std::path::PathBuf;

use clap::Args;

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::io::{read_text, write_text};
use crate::plot::{parse_table, render_svg};

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// CSV files, comma separated; each becomes `<stem>.svg` in `--out`.
    #[arg(long, value_delimiter = ',')]
    pub input: Option<Vec<PathBuf>>,
    /// Chart title (default: the file stem).
    #[arg(long)]
    pub title: Option<String>,
}

pub fn plot(args: PlotArgs, s: &Settings) -> CliResult<()> {
    s.check_params(&["input", "title"])?;
    let inputs: Vec<PathBuf> = s.require(args.input, "input")?;
    let title: Option<String> = s.param(args.title, "title")?;
    for path in inputs {
        let text = read_text(&path)?;
        let table = parse_table(&text).map_err(|e| CliError::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "plot".into());
        let svg = render_svg(&table, title.as_deref().unwrap_or(&stem));
        let written = write_text(&s.out, &format!("{stem}.svg"), &svg)?;
        println!("{}", written.display());
    }
    Ok(())
}
