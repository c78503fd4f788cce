//! Rayon versions of the table and basin drivers. Output order is fixed by
//! index, so results match the sequential drivers exactly.

use rayon::prelude::*;

use multipoint_core::basins::{classify_pixel, BasinConfig, BasinImage, RootSet};
use multipoint_core::bench::{run_row, Report};
use multipoint_core::methods::MethodId;
use multipoint_core::numeric::Precision;
use multipoint_core::problem::Problem;

pub fn run_table(problem: &Problem, methods: &[MethodId], p: Precision) -> Report {
    Report {
        problem: problem.id,
        precision: p,
        rows: methods.par_iter().map(|&m| run_row(problem, m, p)).collect(),
    }
}

pub fn render_basin(cfg: &BasinConfig) -> BasinImage {
    let roots = RootSet::for_config(cfg);
    let pixels = (0..cfg.pixels())
        .into_par_iter()
        .with_min_len(256)
        .map(|k| classify_pixel(cfg, &roots, k))
        .collect();
    BasinImage::from_pixels(cfg, roots.len(), pixels)
}
