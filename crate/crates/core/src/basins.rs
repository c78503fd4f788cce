//! Basins of attraction on a rectangular grid of the complex plane.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::methods::{Method, MethodId, Outcome};
use crate::numeric::{BigComplex, Complex64, ComplexScalar, Precision, RealScalar, Scalar};
use crate::problem::{CountingOracle, Objective, Problem, ProblemId};

pub const STATS_CSV_HEADER: &str = "method,converged_fraction,mean_iters,root0,root1,root2,root3,black";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            re_min: -3.0,
            re_max: 3.0,
            im_min: -3.0,
            im_max: 3.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BasinConfig {
    pub problem: Problem,
    pub method: Method,
    pub width: usize,
    pub height: usize,
    pub bounds: Bounds,
    pub max_iters: u32,
    pub root_tol: f64,
    /// `|z|` above this counts as divergence.
    pub overflow: f64,
    pub precision: Precision,
}

impl BasinConfig {
    /// 256x256 on `[-3, 3]^2`, 100 iterations, tolerance `1e-3`, double
    /// precision.
    pub fn new(problem: Problem, method: Method) -> BasinConfig {
        BasinConfig {
            problem,
            method,
            width: 256,
            height: 256,
            bounds: Bounds::default(),
            max_iters: 100,
            root_tol: 1e-3,
            overflow: 1e10,
            precision: Precision::DOUBLE,
        }
    }

    pub fn for_ids(problem: ProblemId, method: MethodId) -> BasinConfig {
        BasinConfig::new(Problem::new(problem), Method::new(method))
    }

    /// Centre of pixel `(col, row)`; row 0 is the top (largest imaginary
    /// part).
    pub fn pixel_center(&self, col: usize, row: usize) -> (f64, f64) {
        let b = &self.bounds;
        let dre = (b.re_max - b.re_min) / self.width as f64;
        let dim = (b.im_max - b.im_min) / self.height as f64;
        (
            b.re_min + (col as f64 + 0.5) * dre,
            b.im_max - (row as f64 + 0.5) * dim,
        )
    }

    pub fn pixels(&self) -> usize {
        self.width * self.height
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pixel {
    /// Index into the problem's root list; `None` is black.
    pub root: Option<u8>,
    pub iterations: u32,
}

impl Pixel {
    pub const BLACK: Pixel = Pixel {
        root: None,
        iterations: 0,
    };
}

/// Index of the nearest root within `tol`, lowest index on ties.
fn nearest_root<S: Scalar>(z: &S, roots: &[S], tol: &S::Real) -> Option<u8> {
    let mut best: Option<(usize, S::Real)> = None;
    for (k, r) in roots.iter().enumerate() {
        let d = (z.clone() - r.clone()).modulus();
        if d < *tol && best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            best = Some((k, d));
        }
    }
    best.map(|(k, _)| k as u8)
}

/// Follows the orbit of `z0` until it comes within `root_tol` of a root.
/// Step failures, overflow and exhausted iterations give a black pixel.
pub fn classify_point<S: ComplexScalar>(z0: S, roots: &[S], cfg: &BasinConfig) -> Pixel {
    let p = cfg.precision;
    let tol = S::Real::from_f64(cfg.root_tol, p);
    let overflow = S::Real::from_f64(cfg.overflow, p);
    let mut oracle = CountingOracle::<_, S>::new(&cfg.problem, p);
    let mut z = z0;
    for it in 0..=cfg.max_iters {
        if let Some(k) = nearest_root(&z, roots, &tol) {
            return Pixel {
                root: Some(k),
                iterations: it,
            };
        }
        if it == cfg.max_iters {
            break;
        }
        z = match cfg.method.step(&mut oracle, &z) {
            Ok(Outcome::Next(next)) | Ok(Outcome::AtRoot(next)) => next,
            Err(_) => return Pixel::BLACK,
        };
        if !z.is_finite() || z.modulus() > overflow {
            return Pixel::BLACK;
        }
    }
    Pixel::BLACK
}

/// Precomputed roots in the arithmetic matching the configured precision.
#[derive(Clone, Debug)]
pub enum RootSet {
    Double(Vec<Complex64>),
    Big(Vec<BigComplex>),
}

impl RootSet {
    pub fn for_config(cfg: &BasinConfig) -> RootSet {
        if cfg.precision.is_double() {
            RootSet::Double(cfg.problem.roots(cfg.precision))
        } else {
            RootSet::Big(cfg.problem.roots(cfg.precision))
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RootSet::Double(r) => r.len(),
            RootSet::Big(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Classifies the pixel at flat index `k` (row-major).
pub fn classify_pixel(cfg: &BasinConfig, roots: &RootSet, k: usize) -> Pixel {
    let (re, im) = cfg.pixel_center(k % cfg.width, k / cfg.width);
    match roots {
        RootSet::Double(r) => classify_point(Complex64::new(re, im), r, cfg),
        RootSet::Big(r) => {
            let p = cfg.precision;
            let z = BigComplex::new(RealScalar::from_f64(re, p), RealScalar::from_f64(im, p));
            classify_point(z, r, cfg)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasinImage {
    pub width: usize,
    pub height: usize,
    pub max_iters: u32,
    pub n_roots: usize,
    /// Row-major, top row first.
    pub pixels: Vec<Pixel>,
}

impl BasinImage {
    pub fn from_pixels(cfg: &BasinConfig, n_roots: usize, pixels: Vec<Pixel>) -> BasinImage {
        assert_eq!(pixels.len(), cfg.pixels());
        BasinImage {
            width: cfg.width,
            height: cfg.height,
            max_iters: cfg.max_iters,
            n_roots,
            pixels,
        }
    }

    pub fn pixel(&self, col: usize, row: usize) -> Pixel {
        self.pixels[row * self.width + col]
    }
}

/// Sequential render; pixels are independent, so any partition of the
/// index range gives the same image.
pub fn render_basin(cfg: &BasinConfig) -> BasinImage {
    let roots = RootSet::for_config(cfg);
    let pixels = (0..cfg.pixels())
        .map(|k| classify_pixel(cfg, &roots, k))
        .collect();
    BasinImage::from_pixels(cfg, roots.len(), pixels)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasinStats {
    pub total: usize,
    pub per_root: Vec<usize>,
    pub black: usize,
    /// Mean iteration count over converged pixels; 0 when none converged.
    pub mean_iters: f64,
}

impl BasinStats {
    pub fn converged(&self) -> usize {
        self.total - self.black
    }

    pub fn converged_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.converged() as f64 / self.total as f64
        }
    }

    /// One line of the stats CSV, without a trailing newline.
    pub fn csv_row(&self, method: &str) -> String {
        let mut roots = self.per_root.clone();
        roots.resize(4, 0);
        let roots: Vec<String> = roots.iter().map(|c| format!("{c}")).collect();
        format!(
            "{method},{:.6},{:.4},{},{}",
            self.converged_fraction(),
            self.mean_iters,
            roots.join(","),
            self.black
        )
    }
}

pub fn basin_stats(img: &BasinImage) -> BasinStats {
    let mut per_root = alloc::vec![0usize; img.n_roots];
    let mut black = 0;
    let mut iter_sum: u64 = 0;
    for px in &img.pixels {
        match px.root {
            Some(k) => {
                per_root[k as usize] += 1;
                iter_sum += px.iterations as u64;
            }
            None => black += 1,
        }
    }
    let converged = img.pixels.len() - black;
    BasinStats {
        total: img.pixels.len(),
        per_root,
        black,
        mean_iters: if converged == 0 {
            0.0
        } else {
            iter_sum as f64 / converged as f64
        },
    }
}

/// RGB of a pixel: hue `360 k / n` at full saturation, value
/// `clamp(1 - iterations/max_iters, 0.25, 1)`; black when unconverged.
pub fn pixel_rgb(px: Pixel, n_roots: usize, max_iters: u32) -> [u8; 3] {
    let Some(k) = px.root else {
        return [0, 0, 0];
    };
    let value = if max_iters == 0 {
        1.0
    } else {
        (1.0 - px.iterations as f64 / max_iters as f64).clamp(0.25, 1.0)
    };
    let hue = 6.0 * k as f64 / n_roots.max(1) as f64;
    let sector = libm::floor(hue);
    let frac = hue - sector;
    let (r, g, b) = match sector as u32 % 6 {
        0 => (1.0, frac, 0.0),
        1 => (1.0 - frac, 1.0, 0.0),
        2 => (0.0, 1.0, frac),
        3 => (0.0, 1.0 - frac, 1.0),
        4 => (frac, 0.0, 1.0),
        _ => (1.0, 0.0, 1.0 - frac),
    };
    let byte = |c: f64| libm::round(255.0 * c * value) as u8;
    [byte(r), byte(g), byte(b)]
}

/// Binary PPM (`P6`, maxval 255).
pub fn encode_ppm(img: &BasinImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + 3 * img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    for px in &img.pixels {
        out.extend_from_slice(&pixel_rgb(*px, img.n_roots, img.max_iters));
    }
    out
}
