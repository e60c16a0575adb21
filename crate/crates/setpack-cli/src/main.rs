//! Command-line front end for the setpack library.
//!
//! Every subcommand accepts `--format {plain,json,csv}` and `--float`.
//! Rational values are always printed exactly; `--float` adds decimal
//! approximations next to them, never instead of them. JSON objects are
//! emitted with sorted keys so identical runs produce identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use setpack::bounds::bounds_report;
use setpack::greedy::{detect_period, periodic_packing, run_greedy};
use setpack::oracle::{brute_force_periodic, exact_packing_density};
use setpack::survey::{run_survey, verify_minimum_density, SurveyOptions};
use setpack::{FiniteIntSet, Rational};

#[derive(Parser)]
#[command(
    name = "setpack",
    version,
    about = "Exact packing densities of finite integer sets",
    after_help = "Set literals are comma-separated integers, e.g. \"0,1,4,6\"."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Add decimal approximations next to exact rationals.
    #[arg(long, global = true)]
    float: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Difference set, its size, and the diameter.
    Diff {
        /// Set literal, e.g. "0,1,4,6".
        set: String,
    },
    /// Greedy packing: chosen positions, periodic tail, density.
    Greedy {
        set: String,
        /// Positions to scan; defaults to one period past the recurrence.
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Closed-form lower and upper density bounds.
    Bounds { set: String },
    /// Exact packing density with a periodic witness.
    Exact {
        set: String,
        /// Also run the brute-force periodic search up to this period and
        /// report agreement.
        #[arg(long)]
        max_period: Option<u32>,
    },
    /// Sweep all canonical k-element sets with max element up to a cap.
    Survey {
        /// Set cardinality (at least 2).
        k: u32,
        /// Largest element to enumerate.
        #[arg(long)]
        max_elem: i64,
        /// Skip the exact oracle; report bounds and greedy only.
        #[arg(long)]
        greedy_only: bool,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Append finished rows here and resume from it if present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Verify exhaustively that 4-element sets never pack below 1/7.
    ///
    /// Exits 0 on PASS, 1 on FAIL.
    Verify {
        /// Enumeration cap (at least 6, so {0,1,4,6} is in range).
        #[arg(long, default_value_t = 16)]
        max_elem: i64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Append finished rows here and resume from it if present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE by default, turning a downstream `head` into a
    // panic at the next print. Restore the usual die-quietly disposition.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format = cli.format;
    let float = cli.float;
    match cli.command {
        Command::Diff { set } => cmd_diff(&parse_set(&set)?, format),
        Command::Greedy { set, horizon } => {
            cmd_greedy(&parse_set(&set)?, horizon, format, float)
        }
        Command::Bounds { set } => cmd_bounds(&parse_set(&set)?, format, float),
        Command::Exact { set, max_period } => {
            cmd_exact(&parse_set(&set)?, max_period, format, float)
        }
        Command::Survey { k, max_elem, greedy_only, jobs, checkpoint } => {
            let options = SurveyOptions { use_oracle: !greedy_only, jobs, checkpoint };
            cmd_survey(k, max_elem, &options, format, float)
        }
        Command::Verify { max_elem, jobs, checkpoint } => {
            let options = SurveyOptions { use_oracle: true, jobs, checkpoint };
            cmd_verify(max_elem, &options, format, float)
        }
    }
}

fn parse_set(text: &str) -> Result<FiniteIntSet> {
    let (set, had_duplicates) = FiniteIntSet::parse(text)?;
    if had_duplicates {
        eprintln!("warning: duplicate elements removed from input");
    }
    Ok(set)
}

fn approx(r: Rational) -> String {
    format!("{:.9}", r.to_f64())
}

/// `1/4` plainly, `1/4 (0.250000000)` with --float.
fn rational_text(r: Rational, float: bool) -> String {
    if float {
        format!("{r} ({})", approx(r))
    } else {
        r.to_string()
    }
}

fn elements_json(s: &FiniteIntSet) -> Value {
    json!(s.elements())
}

/// Emits a single-record CSV with the given header.
fn one_row_csv(header: &[&str], row: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("csv write");
    w.write_record(row).expect("csv write");
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf-8")
}

fn emit_json(value: &Value) {
    println!("{}", serde_json::to_string(value).expect("json serializes"));
}

fn cmd_diff(s: &FiniteIntSet, format: Format) -> Result<ExitCode> {
    let d = s.diff_set();
    match format {
        Format::Plain => {
            println!("diff = {d} |diff| = {} diam = {}", d.len(), d.diameter());
        }
        Format::Json => emit_json(&json!({
            "S": elements_json(s),
            "diff": d.values(),
            "size": d.len(),
            "diam": d.diameter(),
        })),
        Format::Csv => {
            let diff_literal: Vec<String> = d.values().iter().map(|x| x.to_string()).collect();
            print!(
                "{}",
                one_row_csv(
                    &["set", "diff", "size", "diam"],
                    &[
                        s.literal(),
                        diff_literal.join(","),
                        d.len().to_string(),
                        d.diameter().to_string(),
                    ],
                )
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_greedy(
    s: &FiniteIntSet,
    horizon: Option<u64>,
    format: Format,
    float: bool,
) -> Result<ExitCode> {
    let (a, p) = detect_period(s)?;
    let horizon = horizon.unwrap_or(a + p + s.diameter());
    let trace = run_greedy(s, horizon)?;
    let periodic = periodic_packing(s)?;
    let t_list: Vec<String> = trace.chosen.iter().map(|t| t.to_string()).collect();

    match format {
        Format::Plain => {
            println!("t = {}", t_list.join(", "));
            println!(
                "anchor = {} period = {} pattern = {}",
                periodic.anchor(),
                periodic.period(),
                periodic.pattern_string()
            );
            println!("density = {}", rational_text(periodic.density(), float));
        }
        Format::Json => {
            let mut v = json!({
                "S": elements_json(s),
                "t": trace.chosen,
                "horizon": horizon,
                "anchor": periodic.anchor(),
                "period": periodic.period(),
                "pattern": periodic.pattern_string(),
                "density": periodic.density().to_string(),
            });
            if float {
                v.as_object_mut()
                    .expect("object")
                    .insert("density_float".into(), json!(periodic.density().to_f64()));
            }
            emit_json(&v);
        }
        Format::Csv => {
            let mut header =
                vec!["set", "horizon", "t", "anchor", "period", "pattern", "density"];
            let mut row = vec![
                s.literal(),
                horizon.to_string(),
                t_list.join(","),
                periodic.anchor().to_string(),
                periodic.period().to_string(),
                periodic.pattern_string(),
                periodic.density().to_string(),
            ];
            if float {
                header.push("density_float");
                row.push(approx(periodic.density()));
            }
            print!("{}", one_row_csv(&header, &row));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(s: &FiniteIntSet, format: Format, float: bool) -> Result<ExitCode> {
    let r = bounds_report(s);
    match format {
        Format::Plain => println!(
            "lower = {} upper = {} (initial run n = {}, active = {})",
            rational_text(r.lower, float),
            rational_text(r.upper, float),
            r.initial_run_n,
            r.active_upper
        ),
        Format::Json => {
            let mut v = json!({
                "S": elements_json(s),
                "lower": r.lower.to_string(),
                "upper": r.upper.to_string(),
                "initial_run_n": r.initial_run_n,
                "active_upper": r.active_upper.as_str(),
            });
            if float {
                let obj = v.as_object_mut().expect("object");
                obj.insert("lower_float".into(), json!(r.lower.to_f64()));
                obj.insert("upper_float".into(), json!(r.upper.to_f64()));
            }
            emit_json(&v);
        }
        Format::Csv => {
            let mut header = vec!["set", "lower", "upper", "initial_run_n", "active_upper"];
            let mut row = vec![
                s.literal(),
                r.lower.to_string(),
                r.upper.to_string(),
                r.initial_run_n.to_string(),
                r.active_upper.as_str().to_string(),
            ];
            if float {
                header.extend(["lower_float", "upper_float"]);
                row.push(approx(r.lower));
                row.push(approx(r.upper));
            }
            print!("{}", one_row_csv(&header, &row));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(
    s: &FiniteIntSet,
    max_period: Option<u32>,
    format: Format,
    float: bool,
) -> Result<ExitCode> {
    let r = exact_packing_density(s)?;
    let pattern: String =
        r.witness_pattern.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let brute = match max_period {
        Some(cap) => Some((cap, brute_force_periodic(s, cap)?)),
        None => None,
    };

    match format {
        Format::Plain => {
            println!(
                "{} (period {}, pattern {})",
                rational_text(r.density, float),
                r.witness_period,
                pattern
            );
            if let Some((cap, value)) = brute {
                println!(
                    "brute force (max period {cap}) = {} agree = {}",
                    rational_text(value, float),
                    value == r.density
                );
            }
        }
        Format::Json => {
            let mut v = json!({
                "S": elements_json(s),
                "density": r.density.to_string(),
                "period": r.witness_period,
                "pattern": pattern,
                "states": r.automaton_states,
            });
            let obj = v.as_object_mut().expect("object");
            if float {
                obj.insert("density_float".into(), json!(r.density.to_f64()));
            }
            if let Some((cap, value)) = brute {
                obj.insert("brute_force".into(), json!(value.to_string()));
                obj.insert("brute_period_cap".into(), json!(cap));
                obj.insert("agrees".into(), json!(value == r.density));
            }
            emit_json(&v);
        }
        Format::Csv => {
            let mut header = vec!["set", "density", "period", "pattern", "states"];
            let mut row = vec![
                s.literal(),
                r.density.to_string(),
                r.witness_period.to_string(),
                pattern,
                r.automaton_states.to_string(),
            ];
            if float {
                header.push("density_float");
                row.push(approx(r.density));
            }
            if let Some((cap, value)) = brute {
                header.extend(["brute_force", "brute_period_cap", "agrees"]);
                row.push(value.to_string());
                row.push(cap.to_string());
                row.push((value == r.density).to_string());
            }
            print!("{}", one_row_csv(&header, &row));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_survey(
    k: u32,
    max_elem: i64,
    options: &SurveyOptions,
    format: Format,
    float: bool,
) -> Result<ExitCode> {
    let report = run_survey(k, max_elem, options)?;
    match format {
        Format::Plain => {
            println!("k = {} max_elem = {} rows = {}", report.k, report.max_elem, report.rows.len());
            let set_width = report
                .rows
                .iter()
                .map(|r| r.set.to_string().len())
                .max()
                .unwrap_or(3)
                .max("set".len());
            println!(
                "{:set_width$}  {:>9}  {:>7}  {:>7}  {:>7}  {:>7}  {:>6}",
                "set", "diff_size", "lower", "upper", "greedy", "exact", "period"
            );
            for row in &report.rows {
                println!(
                    "{:set_width$}  {:>9}  {:>7}  {:>7}  {:>7}  {:>7}  {:>6}",
                    row.set.to_string(),
                    row.diff_size,
                    row.lower.to_string(),
                    row.upper.to_string(),
                    row.greedy.to_string(),
                    row.exact.map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
                    row.period
                );
            }
            println!("minimum = {}", rational_text(report.minimum, float));
            let minimizers: Vec<String> =
                report.minimizers.iter().map(|s| s.to_string()).collect();
            println!("minimizers = {}", minimizers.join(", "));
        }
        Format::Json => print!("{}\n", report.to_json(float)),
        Format::Csv => print!("{}", report.to_csv(float)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    max_elem: i64,
    options: &SurveyOptions,
    format: Format,
    float: bool,
) -> Result<ExitCode> {
    let verdict = verify_minimum_density(max_elem, options)?;
    match format {
        Format::Plain => {
            println!("{verdict}");
            println!(
                "checked {} canonical 4-sets with max element <= {}; diff bound ok = {}",
                verdict.sets_checked, verdict.max_elem, verdict.diff_bound_ok
            );
            println!("note: {}", verdict.note);
        }
        Format::Json => {
            let minimizers: Vec<String> =
                verdict.minimizers.iter().map(|s| s.literal()).collect();
            let mut v = json!({
                "pass": verdict.pass,
                "minimum": verdict.minimum.to_string(),
                "minimizers": minimizers,
                "sets_checked": verdict.sets_checked,
                "max_elem": verdict.max_elem,
                "diff_bound_ok": verdict.diff_bound_ok,
                "attained": verdict.attained,
                "note": verdict.note,
            });
            if float {
                v.as_object_mut()
                    .expect("object")
                    .insert("minimum_float".into(), json!(verdict.minimum.to_f64()));
            }
            emit_json(&v);
        }
        Format::Csv => {
            let minimizers: Vec<String> =
                verdict.minimizers.iter().map(|s| s.literal()).collect();
            print!(
                "{}",
                one_row_csv(
                    &["max_elem", "sets_checked", "pass", "minimum", "minimizers", "diff_bound_ok"],
                    &[
                        verdict.max_elem.to_string(),
                        verdict.sets_checked.to_string(),
                        verdict.pass.to_string(),
                        verdict.minimum.to_string(),
                        minimizers.join(" "),
                        verdict.diff_bound_ok.to_string(),
                    ],
                )
            );
        }
    }
    Ok(if verdict.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
