use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use multipoint_core::basins::{basin_stats, BasinConfig, Bounds};
use multipoint_core::bench::{format_error, table_roster};
use multipoint_core::driver::{iterate, RunPolicy, Trace};
use multipoint_core::methods::{
    builtin_weight_pairs, error_constants, validate_weight_pair, Method, MethodId,
};
use multipoint_core::numeric::{BigComplex, BigReal, ComplexScalar, Precision, RealScalar, Scalar};
use multipoint_core::problem::{Objective, Problem, ProblemId};

use crate::{output, parallel};

#[derive(Debug, Parser)]
#[command(
    name = "multipoint",
    version,
    about = "Multi-point root finders: tables, weights, constants and basins"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate one method on one problem and print the trace
    Solve(SolveArgs),
    /// Run a benchmark table roster at its canonical starting point
    Bench(BenchArgs),
    /// Check the five Taylor conditions of every builtin weight pair
    ValidateWeights(ValidateArgs),
    /// Asymptotic error constants c2, c3, c4, R4, R8 at the problem's root
    Constants(ConstantsArgs),
    /// Render a basin-of-attraction image and its statistics
    Basin(BasinArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value = "t1")]
    pub problem: ProblemId,
    #[arg(long, default_value = "slss")]
    pub method: MethodId,
    /// Starting point; `re,im` for complex problems. Defaults to the problem's canonical start
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, default_value_t = 1800)]
    pub digits: u32,
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Table number, 1 to 4
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub table: u8,
    /// Also write the table as CSV
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1800)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 1800)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value = "t3")]
    pub problem: ProblemId,
    #[arg(long, default_value_t = 1800)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct BasinArgs {
    #[arg(long, default_value = "b1")]
    pub problem: ProblemId,
    #[arg(long, default_value = "slss")]
    pub method: MethodId,
    /// PPM output path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Statistics CSV output path
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Pixels per side
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..=16384))]
    pub grid: u32,
    /// re_min,re_max,im_min,im_max
    #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true, value_parser = parse_bounds)]
    pub bounds: Bounds,
    #[arg(long, default_value_t = 100)]
    pub maxiter: u32,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 16)]
    pub digits: u32,
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [re_min, re_max, im_min, im_max] = v[..] else {
        return Err(format!("expected four comma-separated numbers, got {}", v.len()));
    };
    if !(re_min < re_max && im_min < im_max) {
        return Err("bounds must satisfy re_min < re_max and im_min < im_max".into());
    }
    Ok(Bounds {
        re_min,
        re_max,
        im_min,
        im_max,
    })
}

pub fn run(cli: Cli) -> Result<()> {
    let text = match cli.command {
        Command::Solve(a) => solve(&a)?,
        Command::Bench(a) => bench(&a)?,
        Command::ValidateWeights(a) => validate_weights(&a)?,
        Command::Constants(a) => constants(&a)?,
        Command::Basin(a) => basin(&a)?,
    };
    print!("{text}");
    Ok(())
}

fn precision(digits: u32) -> Result<Precision> {
    Precision::new(digits).map_err(|e| anyhow!("--digits: {e}"))
}

/// `-d.ddd...e±k` with `sig` significant digits.
pub fn sci<R: RealScalar>(r: &R, sig: usize) -> String {
    match r.decimal_digits(sig) {
        None => "0".into(),
        Some((digits, exp)) => {
            let sign = if r.is_negative() { "-" } else { "" };
            let (head, tail) = digits.split_at(1);
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

fn solve(a: &SolveArgs) -> Result<String> {
    let p = precision(a.digits)?;
    let problem = Problem::new(a.problem);
    let method = Method::new(a.method);
    let policy = RunPolicy::<BigReal>::new(a.iters, p);
    let mut out = format!(
        "problem {}: {}\nmethod {} (order {}, {} evaluations per step), {}\n",
        problem.id,
        problem.description,
        method.id,
        method.id.order(),
        method.id.evals(),
        p
    );
    if problem.complex {
        let x0: BigComplex = match &a.x0 {
            None => problem.start(p)?,
            Some(s) => parse_complex(s, p)?,
        };
        let probe = iterate(&problem, &method, x0.clone(), None, &policy);
        let roots: Vec<BigComplex> = problem.roots(p);
        let last = probe.last().clone();
        let root = roots
            .into_iter()
            .min_by(|u, v| {
                let du = (u.clone() - last.clone()).modulus().to_f64();
                let dv = (v.clone() - last.clone()).modulus().to_f64();
                du.total_cmp(&dv)
            })
            .ok_or_else(|| anyhow!("problem has no known roots"))?;
        let trace = iterate(&problem, &method, x0, Some(&root), &policy);
        let _ = writeln!(
            out,
            "nearest root {} + {}i",
            sci(&root.real_part(), 6),
            sci(&root.imag_part(), 6)
        );
        render_trace(&mut out, &trace, |z| {
            format!("{} + {}i", sci(&z.real_part(), 30), sci(&z.imag_part(), 30))
        });
    } else {
        let x0: BigReal = match &a.x0 {
            None => problem.start(p)?,
            Some(s) => BigReal::parse_literal(s, p).map_err(|e| anyhow!("--x0: {e}"))?,
        };
        let root: BigReal = problem
            .real_root(p)
            .ok_or_else(|| anyhow!("problem has no known real root"))?;
        let trace = iterate(&problem, &method, x0, Some(&root), &policy);
        render_trace(&mut out, &trace, |x| sci(x, 30));
    }
    Ok(out)
}

fn parse_complex(s: &str, p: Precision) -> Result<BigComplex> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = BigReal::parse_literal(re.trim(), p).map_err(|e| anyhow!("--x0: {e}"))?;
    let im = BigReal::parse_literal(im.trim(), p).map_err(|e| anyhow!("--x0: {e}"))?;
    Ok(BigComplex::new(re, im))
}

fn render_trace<S: Scalar>(out: &mut String, t: &Trace<S>, show: impl Fn(&S) -> String)
where
    S::Real: RealScalar,
{
    let _ = writeln!(out, "n  x_n  |x_n - x*|");
    for (n, x) in t.iterates.iter().enumerate() {
        let err = t.errors.get(n).map(format_error).unwrap_or_default();
        let _ = writeln!(out, "{n}  {}  {err}", show(x));
    }
    let _ = writeln!(out, "termination: {}", t.termination);
    let rate = |r: Result<f64, _>| match r {
        Ok(v) => format!("{v:.4}"),
        Err(e) => format!("unavailable ({e})"),
    };
    let _ = writeln!(out, "COC  {}", rate(t.coc()));
    let _ = writeln!(out, "ACOC {}", rate(t.acoc()));
    let _ = writeln!(
        out,
        "evaluations: {} (f {}, f' {})",
        t.evals(),
        t.f_evals,
        t.fprime_evals
    );
}

fn bench(a: &BenchArgs) -> Result<String> {
    let p = precision(a.digits)?;
    let roster = table_roster(a.table).ok_or_else(|| anyhow!("no table {}", a.table))?;
    let started = Instant::now();
    let report = parallel::run_table(&Problem::new(roster.problem), &roster.methods, p);
    let mut out = format!("table {}\n{}", a.table, report.to_text());
    let _ = writeln!(out, "elapsed {:.2}s", started.elapsed().as_secs_f64());
    if let Some(path) = &a.out {
        output::write_csv(&report, path)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(out)
}

fn validate_weights(a: &ValidateArgs) -> Result<String> {
    let p = precision(a.digits)?;
    let mut out = String::new();
    let mut failed = Vec::new();
    for pair in builtin_weight_pairs() {
        let report = validate_weight_pair(&pair, p).map_err(|e| anyhow!("{}: {e}", pair.name))?;
        let _ = writeln!(
            out,
            "{}  phi = {}  psi = {}  (tolerance {})",
            pair.name,
            pair.phi,
            pair.psi,
            format_error(&report.tolerance)
        );
        let _ = writeln!(out, "  poles: phi {}; psi {}", pair.phi_poles, pair.psi_poles);
        for c in &report.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  {:<16} residual {:<10} {verdict}",
                c.label,
                format_error(&c.residual)
            );
        }
        if !report.all_passed() {
            failed.push(pair.name.clone());
        }
    }
    if !failed.is_empty() {
        print!("{out}");
        bail!("weight conditions violated by {}", failed.join(", "));
    }
    Ok(out)
}

fn constants(a: &ConstantsArgs) -> Result<String> {
    let p = precision(a.digits)?;
    let problem = Problem::new(a.problem);
    let root: BigReal = match problem.complex {
        true => bail!(
            "problem {} is complex; error constants need a real root",
            problem.id
        ),
        false => problem
            .real_root(p)
            .ok_or_else(|| anyhow!("problem has no known real root"))?,
    };
    let phi_second = BigReal::ratio(-5, 2, p);
    let c = error_constants(&problem, &root, &phi_second)
        .with_context(|| format!("error constants of {}", problem.id))?;
    let mut out = format!(
        "problem {}: {}\nroot {}, {}\n",
        problem.id,
        problem.description,
        sci(&root, 6),
        p
    );
    for (name, v) in [
        ("c2", &c.c2),
        ("c3", &c.c3),
        ("c4", &c.c4),
        ("R4", &c.r4),
        ("R8", &c.r8),
    ] {
        let _ = writeln!(out, "{name}  {}", sci(v, 25));
    }
    Ok(out)
}

fn basin(a: &BasinArgs) -> Result<String> {
    let p = precision(a.digits)?;
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        bail!("--tol must be positive");
    }
    let problem = Problem::new(a.problem);
    if <Problem as Objective>::roots::<BigComplex>(&problem, p).is_empty() {
        bail!("problem {} has no known roots to classify against", problem.id);
    }
    let mut cfg = BasinConfig::new(problem, Method::new(a.method));
    cfg.width = a.grid as usize;
    cfg.height = a.grid as usize;
    cfg.bounds = a.bounds;
    cfg.max_iters = a.maxiter;
    cfg.root_tol = a.tol;
    cfg.precision = p;

    let started = Instant::now();
    let img = parallel::render_basin(&cfg);
    let stats = basin_stats(&img);
    let mut out = format!(
        "basin {} / {}: {}x{}, {} iterations max, tolerance {:e}, {}\n",
        problem.id, a.method, cfg.width, cfg.height, cfg.max_iters, cfg.root_tol, p
    );
    out.push_str(&output::stats_csv(&[(a.method.as_str(), &stats)]));
    let _ = writeln!(out, "elapsed {:.2}s", started.elapsed().as_secs_f64());
    if let Some(path) = &a.out {
        output::write_ppm(&img, path)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    if let Some(path) = &a.stats {
        output::write_stats(&[(a.method.as_str(), &stats)], path)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["multipoint", "basin"]).unwrap();
        let Command::Basin(b) = cli.command else { panic!() };
        assert_eq!((b.grid, b.maxiter, b.digits), (256, 100, 16));
        assert_eq!(b.bounds, Bounds::default());
        assert_eq!(b.tol, 1e-3);

        let cli = Cli::try_parse_from(["multipoint", "solve"]).unwrap();
        let Command::Solve(s) = cli.command else { panic!() };
        assert_eq!((s.digits, s.iters), (1800, 3));
    }

    #[test]
    fn bad_ids_and_bounds_are_usage_errors() {
        for argv in [
            &["multipoint", "solve", "--problem", "t1", "--method", "nosuch"][..],
            &["multipoint", "bench", "--table", "5"],
            &["multipoint", "basin", "--bounds", "-3,3,-3"],
            &["multipoint", "basin", "--bounds", "3,-3,-3,3"],
        ] {
            let err = Cli::try_parse_from(argv).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{argv:?}");
        }
    }

    #[test]
    fn negative_bounds_parse() {
        let cli = Cli::try_parse_from(["multipoint", "basin", "--bounds", "-1,1,-0.5,0.5"]).unwrap();
        let Command::Basin(b) = cli.command else { panic!() };
        assert_eq!(b.bounds.im_min, -0.5);
    }

    #[test]
    fn sci_notation() {
        assert_eq!(sci(&-0.0625f64, 3), "-6.25e-2");
        assert_eq!(sci(&0.0f64, 3), "0");
    }

    #[test]
    fn solve_runs_at_low_precision() {
        let out = solve(&SolveArgs {
            problem: ProblemId::T1,
            method: MethodId::Newton,
            x0: None,
            digits: 60,
            iters: 2,
        })
        .unwrap();
        assert!(out.contains("evaluations: 4 (f 2, f' 2)"), "{out}");

        let out = solve(&SolveArgs {
            problem: ProblemId::B1,
            method: MethodId::Slss,
            x0: Some("2,0.5".into()),
            digits: 40,
            iters: 2,
        })
        .unwrap();
        assert!(out.contains("nearest root"), "{out}");
    }

    #[test]
    fn constants_reject_complex_problem() {
        let err = constants(&ConstantsArgs {
            problem: ProblemId::B1,
            digits: 40,
        })
        .unwrap_err();
        assert!(err.to_string().contains("complex"));
    }
}
