use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use multipoint_core::basins::{encode_ppm, BasinImage, BasinStats, STATS_CSV_HEADER};
use multipoint_core::bench::Report;

#[derive(Debug, thiserror::Error)]
#[error("cannot write {path}: {source}")]
pub struct IoError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    fs::write(path, bytes).map_err(|source| IoError {
        path: path.to_path_buf(),
        source,
    })
}

/// Benchmark table as CSV.
pub fn write_csv(report: &Report, path: &Path) -> Result<(), IoError> {
    write(path, report.to_csv().as_bytes())
}

/// Basin image as binary PPM.
pub fn write_ppm(img: &BasinImage, path: &Path) -> Result<(), IoError> {
    write(path, &encode_ppm(img))
}

/// Basin statistics, one row per method.
pub fn write_stats(rows: &[(&str, &BasinStats)], path: &Path) -> Result<(), IoError> {
    write(path, stats_csv(rows).as_bytes())
}

pub fn stats_csv(rows: &[(&str, &BasinStats)]) -> String {
    let mut out = format!("{STATS_CSV_HEADER}\n");
    for (method, stats) in rows {
        out.push_str(&stats.csv_row(method));
        out.push('\n');
    }
    out
}
