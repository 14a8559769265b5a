use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{brute_force, dp_exact, DEFAULT_BRUTE_CAP};
use crate::fptas::{approximate_traced, Epsilon};
use crate::model::{Instance, Solution};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub solver: String,
    pub epsilon: Option<String>,
    pub lambda: u64,
    pub mu: u64,
    pub runtime_ms: f64,
    /// `lambda_exact / lambda`; `None` when no exact value is known or the
    /// ratio is infinite.
    pub ratio: Option<f64>,
    pub max_list_len: Option<usize>,
    pub list_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub exact_lambda: Option<u64>,
    pub rows: Vec<ReportRow>,
}

#[derive(Clone, Copy)]
enum Job {
    Brute,
    Dp,
    Fptas(Epsilon),
}

struct Outcome {
    solution: Solution,
    runtime_ms: f64,
    trace: Option<(usize, usize)>,
}

fn run(job: Job, inst: &Instance) -> Result<Outcome> {
    let start = Instant::now();
    let (solution, trace) = match job {
        Job::Brute => (brute_force(inst)?, None),
        Job::Dp => (dp_exact(inst)?, None),
        Job::Fptas(eps) => {
            let a = approximate_traced(inst, eps)?;
            (a.solution, Some((a.trace.max_len, a.trace.bound)))
        }
    };
    Ok(Outcome {
        solution,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        trace,
    })
}

/// Runs every applicable exact oracle and the approximation at each epsilon.
/// Exact oracles that exceed their resource limits are left out.
pub fn compare(inst: &Instance, epsilons: &[Epsilon]) -> Result<Report> {
    compare_with(inst, epsilons, false)
}

/// As [`compare`]; with `parallel` each solver runs on its own thread. Values
/// are identical either way, only runtimes differ.
pub fn compare_with(inst: &Instance, epsilons: &[Epsilon], parallel: bool) -> Result<Report> {
    let mut jobs = Vec::with_capacity(epsilons.len() + 2);
    if inst.tree.selectable_count() <= DEFAULT_BRUTE_CAP {
        jobs.push(Job::Brute);
    }
    jobs.push(Job::Dp);
    jobs.extend(epsilons.iter().map(|&e| Job::Fptas(e)));

    let outcomes: Vec<Result<Outcome>> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = jobs.iter().map(|&j| s.spawn(move || run(j, inst))).collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("solver thread panicked".into()))))
                .collect()
        })
    } else {
        jobs.iter().map(|&j| run(j, inst)).collect()
    };

    let mut done = Vec::with_capacity(jobs.len());
    for (job, outcome) in jobs.into_iter().zip(outcomes) {
        match (job, outcome) {
            (Job::Dp, Err(e)) if e.is_resource_limit() => log::warn!("dp skipped: {e}"),
            (_, Err(e)) => return Err(e),
            (job, Ok(o)) => done.push((job, o)),
        }
    }
    if done.is_empty() {
        return Err(Error::InvalidInput(
            "no solver applies: the instance is too large for the exact oracles and no epsilon was given".into(),
        ));
    }

    let exact_lambda = done
        .iter()
        .find(|(j, _)| !matches!(j, Job::Fptas(_)))
        .map(|(_, o)| o.solution.profit());
    let rows = done
        .into_iter()
        .map(|(job, o)| {
            let lambda = o.solution.profit();
            let ratio = exact_lambda.and_then(|opt| match (opt, lambda) {
                (0, 0) => Some(1.0),
                (_, 0) => None,
                (opt, l) => Some(opt as f64 / l as f64),
            });
            let (solver, epsilon) = match job {
                Job::Brute => ("brute", None),
                Job::Dp => ("dp", None),
                Job::Fptas(e) => ("fptas", Some(e.to_string())),
            };
            ReportRow {
                solver: solver.into(),
                epsilon,
                lambda,
                mu: o.solution.matsize(),
                runtime_ms: o.runtime_ms,
                ratio,
                max_list_len: o.trace.map(|t| t.0),
                list_bound: o.trace.map(|t| t.1),
            }
        })
        .collect();
    Ok(Report { exact_lambda, rows })
}

impl Report {
    /// JSON list of row objects.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.rows)?;
        s.push('\n');
        Ok(s)
    }

    /// Fixed-width table, one line per solver run.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{:<6} {:>8} {:>12} {:>12} {:>12} {:>8} {:>9} {:>9}\n",
            "solver", "epsilon", "lambda", "mu", "runtime_ms", "ratio", "max_list", "bound"
        );
        let dash = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<6} {:>8} {:>12} {:>12} {:>12.3} {:>8} {:>9} {:>9}",
                r.solver,
                dash(r.epsilon.clone()),
                r.lambda,
                r.mu,
                r.runtime_ms,
                dash(r.ratio.map(|x| format!("{x:.4}"))),
                dash(r.max_list_len.map(|x| x.to_string())),
                dash(r.list_bound.map(|x| x.to_string())),
            );
        }
        out
    }
}
