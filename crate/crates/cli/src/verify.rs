//! `laglab verify ...`: each run writes its report first and then fails on the first broken
//! assertion.

use crate::{Failure, Format, ReportConfig, RunConfig};
use clap::{Subcommand, ValueEnum};
use laglab_core::asymptotics::{expansion_sweep, nikiforov_sweep};
use laglab_core::degrees::{verify_ak_counterexample, AK_DEFAULT_T_RANGE};
use laglab_core::report::{format_f64, to_json};
use laglab_core::search::{ff_verify, table_csv, SearchMode, SearchOptions, SearchReport};
use serde::Serialize;
use std::fmt::Write;

#[derive(Subcommand)]
pub enum VerifyCommand {
    /// Colex against every candidate family, for m = m_min..=m_max on [t].
    Ff {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        m_min: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Mode::LeftCompressed)]
        mode: Mode,
        /// Tolerance for the colex verdict and for ties.
        #[arg(long, default_value_t = 1e-7)]
        verdict_tol: f64,
        /// Include the per-candidate table in the JSON report.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        run: RunConfig,
    },
    /// The 11-edge 3-graph with P2 = 211 against lex and complement-of-lex graphs.
    Ak {
        #[arg(long, default_value_t = AK_DEFAULT_T_RANGE.0)]
        t_min: usize,
        #[arg(long, default_value_t = AK_DEFAULT_T_RANGE.1)]
        t_max: usize,
        #[command(flatten)]
        run: RunConfig,
    },
    /// lambda(colex(m, r)) <= m x^-r with C(x, r) = m, equality iff x is an integer.
    Nikiforov {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        m_max: u64,
        #[command(flatten)]
        run: RunConfig,
    },
    /// lambda of the clique minus a colex tail of a non-edges against its small-a expansion.
    Expansion {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        a_max: u64,
        #[command(flatten)]
        run: RunConfig,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    LeftCompressed,
    All,
}

#[derive(Serialize)]
struct FfRun {
    r: usize,
    t: usize,
    m_min: usize,
    m_max: usize,
    mode: SearchMode,
    config: ReportConfig,
    passed: bool,
    failures: Vec<String>,
    reports: Vec<SearchReport>,
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    config: ReportConfig,
    #[serde(flatten)]
    report: &'a T,
}

fn finish(passed: bool, failures: &[String]) -> Result<(), Failure> {
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification(failures.first().cloned().unwrap_or_else(|| "unknown failure".into())))
    }
}

fn ff_failures(rep: &SearchReport) -> Vec<String> {
    let mut out = Vec::new();
    if !rep.colex_is_max {
        out.push(format!(
            "m = {}: best {} exceeds colex {}",
            rep.m,
            format_f64(rep.best_value),
            format_f64(rep.colex_value)
        ));
    }
    if !rep.unconverged.is_empty() {
        out.push(format!("m = {}: candidates {:?} did not converge", rep.m, rep.unconverged));
    }
    if let Some(e) = rep.exact_max_error.filter(|&e| e > rep.tol) {
        out.push(format!("m = {}: solver is {} away from Motzkin-Straus", rep.m, format_f64(e)));
    }
    out
}

pub fn run(cmd: VerifyCommand) -> Result<(), Failure> {
    match cmd {
        VerifyCommand::Ff { r, m_min, m_max, t, mode, verdict_tol, table, run } => {
            run.install_threads()?;
            let mode = match mode {
                Mode::LeftCompressed => SearchMode::LeftCompressed,
                Mode::All => SearchMode::AllUpToIso,
            };
            let opts = SearchOptions {
                mode,
                solver: run.solver(),
                tol: verdict_tol,
                table: table || run.format == Format::Csv,
                ..SearchOptions::default()
            };
            let reports = (m_min..=m_max).map(|m| ff_verify(r, m, t, &opts)).collect::<Result<Vec<_>, _>>()?;
            let failures: Vec<String> = reports.iter().flat_map(ff_failures).collect();
            let passed = failures.is_empty();
            let body = match run.format {
                Format::Json => to_json(
                    "verify_ff",
                    &FfRun {
                        r,
                        t,
                        m_min,
                        m_max,
                        mode,
                        config: run.report_config(),
                        passed,
                        failures: failures.clone(),
                        reports,
                    },
                ),
                Format::Csv if m_min == m_max => table_csv(reports[0].table.as_deref().unwrap_or_default()),
                Format::Csv => {
                    let mut s = String::from("m,rank,edges,lambda,kkt_residual\n");
                    for rep in &reports {
                        for line in table_csv(rep.table.as_deref().unwrap_or_default()).lines().skip(1) {
                            let _ = writeln!(s, "{},{line}", rep.m);
                        }
                    }
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for rep in &reports {
                        let _ = writeln!(
                            s,
                            "m={} candidates={} best={} colex={} colex_is_max={}",
                            rep.m,
                            rep.candidates,
                            format_f64(rep.best_value),
                            format_f64(rep.colex_value),
                            rep.colex_is_max
                        );
                    }
                    let _ = writeln!(s, "passed {passed}");
                    s
                }
            };
            run.emit(&body)?;
            finish(passed, &failures)
        }
        VerifyCommand::Ak { t_min, t_max, run } => {
            let rep = verify_ak_counterexample(t_min, t_max)?;
            let body = match run.format {
                Format::Json => to_json("verify_ak", &rep),
                Format::Csv => {
                    let mut s = String::from("t,lex,complement_of_lex\n");
                    for row in &rep.rows {
                        let _ = writeln!(s, "{},{},{}", row.t, row.lex, row.complement_of_lex);
                    }
                    s
                }
                Format::Text => format!(
                    "counterexample {}\nfamily_max {} ({})\npassed {}\n",
                    rep.counterexample, rep.family_max, rep.family_argmax, rep.passed
                ),
            };
            run.emit(&body)?;
            finish(rep.passed, &rep.failures)
        }
        VerifyCommand::Nikiforov { r, m_max, run } => {
            run.install_threads()?;
            let rep = nikiforov_sweep(r, m_max, &run.solver(), run.tol)?;
            let body = match run.format {
                Format::Json => to_json("verify_nikiforov", &Wrapped { config: run.report_config(), report: &rep }),
                Format::Csv => {
                    let mut s = String::from("m,x,bound,lambda,equality\n");
                    for v in &rep.rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            v.m,
                            format_f64(v.x),
                            format_f64(v.bound),
                            format_f64(v.value),
                            v.equality
                        );
                    }
                    s
                }
                Format::Text => format!("equalities {:?}\npassed {}\n", rep.equalities, rep.passed),
            };
            run.emit(&body)?;
            finish(rep.passed, &rep.failures)
        }
        VerifyCommand::Expansion { r, t, a_max, run } => {
            run.install_threads()?;
            let rep = expansion_sweep(t, r, a_max, &run.solver())?;
            let body = match run.format {
                Format::Json => to_json("verify_expansion", &Wrapped { config: run.report_config(), report: &rep }),
                Format::Csv => {
                    let mut s = String::from("a,lambda,expansion,error_scale,ratio\n");
                    for row in &rep.rows {
                        let c = &row.check;
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            c.a,
                            format_f64(c.lambda),
                            format_f64(c.expansion),
                            format_f64(c.error_scale),
                            format_f64(c.ratio)
                        );
                    }
                    s
                }
                Format::Text => {
                    let worst = rep.rows.iter().map(|row| row.check.ratio).fold(0.0, f64::max);
                    format!("max_ratio {}\npassed {}\n", format_f64(worst), rep.passed)
                }
            };
            run.emit(&body)?;
            finish(rep.passed, &rep.failures)
        }
    }
}
