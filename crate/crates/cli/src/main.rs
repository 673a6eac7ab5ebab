mod args;
mod output;
mod verify;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use defect_walk::closed_form::{mu_inf, stationary_measure, StationaryBranch};
use defect_walk::series::{first_return_series, rstar, sqrt1z4_series};
use defect_walk::spectral::residue_norms_origin;
use defect_walk::walk::{evolve, time_average};
use serde_json::{Map, Value};

use args::{Common, Format};
use output::{json_float, Cell, Table};

#[derive(Parser)]
#[command(name = "defect-walk", version, about = "One-defect Hadamard quantum walk: simulation, limit measures and cross-checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution at time N: x,prob_L,prob_R,prob
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        steps: usize,
    },
    /// Cesàro average over n = 0..T−1: x,mu_bar_T
    TimeAverage {
        #[command(flatten)]
        common: Common,
        #[arg(long = "T")]
        t: usize,
        #[arg(long, default_value_t = 10)]
        xmax: usize,
    },
    /// Closed-form time-averaged limit measure: x,mu_inf
    Limit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        xmax: usize,
    },
    /// Simulation against the closed form: x,mu_bar_T,mu_inf,abs_err
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long = "T")]
        t: usize,
        #[arg(long, default_value_t = 10)]
        xmax: usize,
    },
    /// Unit-circle singular points and their residue contributions (JSON)
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Exact series coefficients: n,numerator,denominator
    Series {
        #[arg(long, value_enum)]
        what: SeriesKind,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Stationary measure of the decaying eigenvector: x,mu_stationary
    Stationary {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        branch: BranchArg,
        /// |α|² of the eigenvector at the origin
        #[arg(long, default_value_t = 0.5)]
        alpha_mod2: f64,
        #[arg(long, default_value_t = 10)]
        xmax: usize,
    },
    /// Run the invariant and cross-check suite
    Verify {
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    Rstar,
    Sqrt1z4,
    FirstReturn,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for StationaryBranch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => StationaryBranch::Plus,
            BranchArg::Minus => StationaryBranch::Minus,
        }
    }
}

/// Rendered artifact plus whether it reports a failed verification.
struct Artifact {
    text: String,
    failed: bool,
}

impl Artifact {
    fn ok(text: String) -> Self {
        Self { text, failed: false }
    }
}

fn render(table: &Table, format: Format) -> Artifact {
    Artifact::ok(match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    })
}

fn sites(xmax: usize) -> impl Iterator<Item = i64> {
    let x = xmax as i64;
    -x..=x
}

fn run(command: &Command) -> Result<Artifact> {
    Ok(match command {
        Command::Simulate { common, steps } => {
            let p = common.params()?;
            let state = evolve(&p, *steps);
            let mut t = Table::new(&["x", "prob_L", "prob_R", "prob"]);
            let n = *steps as i64;
            for x in -n..=n {
                let s = state.amplitude(x);
                let (l, r) = (s[0].norm_sqr(), s[1].norm_sqr());
                t.push(vec![Cell::Int(x), Cell::Float(l), Cell::Float(r), Cell::Float(l + r)]);
            }
            render(&t, common.format_or(Format::Csv))
        }
        Command::TimeAverage { common, t, xmax } => {
            let p = common.params()?;
            let m = time_average(&p, *t, *xmax)?;
            let mut tab = Table::new(&["x", "mu_bar_T"]);
            for (x, v) in m.iter() {
                tab.push(vec![Cell::Int(x), Cell::Float(v)]);
            }
            render(&tab, common.format_or(Format::Csv))
        }
        Command::Limit { common, xmax } => {
            let p = common.params()?;
            let mut tab = Table::new(&["x", "mu_inf"]);
            for x in sites(*xmax) {
                tab.push(vec![Cell::Int(x), Cell::Float(mu_inf(x, &p))]);
            }
            render(&tab, common.format_or(Format::Csv))
        }
        Command::Compare { common, t, xmax } => {
            let p = common.params()?;
            let m = time_average(&p, *t, *xmax)?;
            let mut tab = Table::new(&["x", "mu_bar_T", "mu_inf", "abs_err"]);
            let mut worst: f64 = 0.0;
            for (x, sim) in m.iter() {
                let lim = mu_inf(x, &p);
                let err = (sim - lim).abs();
                worst = worst.max(err);
                tab.push(vec![Cell::Int(x), Cell::Float(sim), Cell::Float(lim), Cell::Float(err)]);
            }
            tab.summary.push(("max_abs_err", worst));
            render(&tab, common.format_or(Format::Csv))
        }
        Command::Spectrum { common } => {
            let p = common.params()?;
            let norms = residue_norms_origin(p.phi(), p.alpha(), p.beta())?;
            match common.format_or(Format::Json) {
                Format::Json => {
                    let items: Vec<Value> = norms
                        .iter()
                        .map(|r| {
                            let pt = &r.point;
                            let sign = match pt.sign {
                                defect_walk::spectral::PointSign::Plus => "+",
                                defect_walk::spectral::PointSign::Minus => "-",
                            };
                            let mut o = Map::new();
                            o.insert("branch".into(), Value::from(format!("{}{sign}", pt.case.label())));
                            o.insert("cos_theta".into(), json_float(pt.cos_theta));
                            o.insert("lambda_sq".into(), json_float(pt.lambda_sq));
                            o.insert("residue_norm".into(), json_float(r.norm));
                            o.insert("residue_prefactor".into(), json_float(pt.residue_prefactor));
                            o.insert("sin_theta".into(), json_float(pt.sin_theta));
                            o.insert("theta_s".into(), json_float(pt.theta_s));
                            Value::Object(o)
                        })
                        .collect();
                    let mut s = serde_json::to_string_pretty(&Value::Array(items))?;
                    s.push('\n');
                    Artifact::ok(s)
                }
                Format::Csv => {
                    let mut tab = Table::new(&["theta_s", "lambda_sq", "residue_prefactor", "residue_norm"]);
                    for r in &norms {
                        tab.push(vec![
                            Cell::Float(r.point.theta_s),
                            Cell::Float(r.point.lambda_sq),
                            Cell::Float(r.point.residue_prefactor),
                            Cell::Float(r.norm),
                        ]);
                    }
                    render(&tab, Format::Csv)
                }
            }
        }
        Command::Series { what, order, format, .. } => {
            let coeffs = match what {
                SeriesKind::Rstar => {
                    if *order == 0 {
                        bail!("r* coefficients start at n = 1; --order must be >= 1");
                    }
                    (1..=*order).map(|n| Ok((n, rstar(n)?))).collect::<Result<Vec<_>>>()?
                }
                SeriesKind::Sqrt1z4 => sqrt1z4_series(*order).coeffs().iter().cloned().enumerate().collect(),
                SeriesKind::FirstReturn => {
                    first_return_series(*order).coeffs().iter().cloned().enumerate().collect()
                }
            };
            let mut tab = Table::new(&["n", "numerator", "denominator"]);
            for (n, q) in coeffs {
                tab.push(vec![
                    Cell::Int(n as i64),
                    Cell::Big(q.numer().to_string()),
                    Cell::Big(q.denom().to_string()),
                ]);
            }
            render(&tab, format.unwrap_or(Format::Csv))
        }
        Command::Stationary { common, branch, alpha_mod2, xmax } => {
            let phi = common.phi;
            let mut tab = Table::new(&["x", "mu_stationary"]);
            for x in sites(*xmax) {
                tab.push(vec![
                    Cell::Int(x),
                    Cell::Float(stationary_measure(x, phi, *alpha_mod2, (*branch).into())?),
                ]);
            }
            render(&tab, common.format_or(Format::Csv))
        }
        Command::Verify { .. } => {
            let checks = verify::run_all();
            Artifact {
                text: verify::report(&checks),
                failed: checks.iter().any(|c| !c.pass),
            }
        }
    })
}

fn out_path(command: &Command) -> Option<&std::path::Path> {
    match command {
        Command::Simulate { common, .. }
        | Command::TimeAverage { common, .. }
        | Command::Limit { common, .. }
        | Command::Compare { common, .. }
        | Command::Spectrum { common }
        | Command::Stationary { common, .. } => common.out.as_deref(),
        Command::Series { out, .. } | Command::Verify { out } => out.as_deref(),
    }
}

fn emit(text: &str, path: Option<&std::path::Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let artifact = match run(&cli.command) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&artifact.text, out_path(&cli.command)) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if artifact.failed {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
