//! Benchmark tables: three iterations of each method from the problem's
//! canonical start, with errors, COC and ACOC.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::driver::{iterate, RunPolicy, Termination};
use crate::methods::{Method, MethodId};
use crate::numeric::{BigReal, Precision, RealScalar, Scalar};
use crate::problem::{Problem, ProblemId};

pub const CSV_HEADER: &str = "method,err1,err2,err3,coc,acoc";

/// Methods compared against each other on one problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roster {
    pub table: u8,
    pub problem: ProblemId,
    pub methods: Vec<MethodId>,
}

/// Rosters of the four benchmark tables. The first two compare the new
/// methods only.
pub fn table_roster(table: u8) -> Option<Roster> {
    let new = [MethodId::Slss, MethodId::M2, MethodId::M3, MethodId::M4];
    let (problem, methods): (ProblemId, Vec<MethodId>) = match table {
        1 => (ProblemId::T1, new.to_vec()),
        2 => (ProblemId::T2, new.to_vec()),
        3 | 4 => {
            let all = new.iter().chain(MethodId::COMPARATORS.iter()).copied().collect();
            (if table == 3 { ProblemId::T3 } else { ProblemId::T4 }, all)
        }
        _ => return None,
    };
    Some(Roster {
        table,
        problem,
        methods,
    })
}

#[derive(Clone, Debug)]
pub struct RowData {
    /// `|x_1 - x*|, |x_2 - x*|, |x_3 - x*|`; zero past an exact hit.
    pub errors: Vec<BigReal>,
    pub coc: Option<f64>,
    pub acoc: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub method: MethodId,
    pub evals: u64,
    pub termination: Termination,
    /// `None` when the run failed before completing its iterations.
    pub data: Option<RowData>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub problem: ProblemId,
    pub precision: Precision,
    pub rows: Vec<Row>,
}

/// Runs `method` for the benchmark iteration count on `problem`.
pub fn run_row(problem: &Problem, method: MethodId, p: Precision) -> Row {
    let policy = RunPolicy::<BigReal>::benchmark(p);
    let x0: BigReal = problem.start(p).expect("builtin start literal parses");
    let root: BigReal = problem.real_root(p).expect("benchmark problems have a real root");
    let trace = iterate(problem, &Method::new(method), x0, Some(&root), &policy);
    let completed = matches!(trace.termination, Termination::MaxIters | Termination::AtRoot);
    let data = completed.then(|| {
        let mut errors: Vec<BigReal> = trace.errors[1..].to_vec();
        errors.resize(policy.max_iters, BigReal::zero(p));
        RowData {
            errors,
            coc: trace.coc().ok(),
            acoc: trace.acoc().ok(),
        }
    });
    Row {
        method,
        evals: trace.evals(),
        termination: trace.termination,
        data,
    }
}

/// Runs every method in order. A failing method is recorded in its row.
pub fn run_table(problem: &Problem, methods: &[MethodId], p: Precision) -> Report {
    Report {
        problem: problem.id,
        precision: p,
        rows: methods.iter().map(|&m| run_row(problem, m, p)).collect(),
    }
}

/// `0.mmme±k` with a three-digit mantissa in `[0.1, 1)`; `"0"` for zero.
pub fn format_error<R: RealScalar>(e: &R) -> String {
    match e.decimal_digits(3) {
        None => String::from("0"),
        Some((digits, exp)) => format!("0.{digits}e{}", exp + 1),
    }
}

fn rate(r: Option<f64>) -> String {
    r.map(|v| format!("{v:.4}")).unwrap_or_default()
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            match &row.data {
                None => {
                    let _ = writeln!(out, "{},FAIL,,,,", row.method);
                }
                Some(d) => {
                    let errs: Vec<String> = d.errors.iter().map(format_error).collect();
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        row.method,
                        errs.join(","),
                        rate(d.coc),
                        rate(d.acoc)
                    );
                }
            }
        }
        out
    }

    /// Aligned plain-text rendering of the table.
    pub fn to_text(&self) -> String {
        let head = ["method", "|x1-x*|", "|x2-x*|", "|x3-x*|", "COC", "ACOC"];
        let mut cells: Vec<Vec<String>> = alloc::vec![head.iter().map(|s| String::from(*s)).collect()];
        for row in &self.rows {
            let mut line = alloc::vec![String::from(row.method.as_str())];
            match &row.data {
                None => {
                    line.push(format!("FAIL ({})", row.termination));
                    line.resize(head.len(), String::new());
                }
                Some(d) => {
                    line.extend(d.errors.iter().map(format_error));
                    line.push(rate(d.coc));
                    line.push(rate(d.acoc));
                }
            }
            cells.push(line);
        }
        let widths: Vec<usize> = (0..head.len())
            .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = format!(
            "problem {} at {} digits\n",
            self.problem,
            self.precision.decimal_digits()
        );
        for line in &cells {
            let padded: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}
