//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analytics::{reference_rows, report_csv, report_text, table1_report};
use crate::config::load_config;
use crate::engine::{
    dominant_oscillation, format_sig9, ramp_responses, run_batch, run_scenario, Scenario,
    SimulationResult,
};
use crate::error::{Error, Result};
use crate::plot::{emit_overlay, emit_plot};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

const PLOT_CHANNELS: [&str; 3] = ["f_grid_hz", "p_unit_mw", "n_rpm"];

#[derive(Debug, Parser)]
#[command(
    name = "hydro-inertia",
    version,
    about = "Inertia response of hydro units"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the inertia table of the reference unit as CSV.
    Table1 {
        /// Aligned text instead of CSV.
        #[arg(long)]
        pretty: bool,
    },
    /// Run one scenario and write its result CSV and event log.
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override the integration step [s].
        #[arg(long)]
        dt: Option<f64>,
        /// Also write an SVG plot.
        #[arg(long)]
        plot: bool,
    },
    /// Run one scenario for several K_d values concurrently.
    Sweep {
        /// Comma-separated K_d values [s].
        #[arg(long, value_delimiter = ',', required = true)]
        kd: Vec<f64>,
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Validate a configuration without running it.
    Check { config: PathBuf },
}

/// Runs the CLI and returns the process exit code.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_config_error() {
                EXIT_CONFIG
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    let w = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))
    };
    match command {
        Command::Table1 { pretty } => {
            let lines = table1_report(&reference_rows())?;
            let text = if pretty {
                report_text(&lines)
            } else {
                report_csv(&lines)
            };
            w(out, &text)
        }
        Command::Check { config } => {
            let s = load_config(&config)?;
            w(
                out,
                &format!(
                    "{}: ok ({} events, dt {} s, {} s)\n",
                    config.display(),
                    s.events.len(),
                    s.dt_s,
                    s.duration_s
                ),
            )
        }
        Command::Run {
            config,
            out: dir,
            dt,
            plot,
        } => {
            let mut s = load_config(&config)?;
            if let Some(dt) = dt {
                s = s.with_dt(dt);
                s.validate()?;
            }
            let r = run_scenario(&s)?;
            create_dir(&dir)?;
            let stem = file_stem(&s, &config);
            write_file(&dir.join(format!("{stem}.csv")), &r.to_csv())?;
            write_file(&dir.join(format!("{stem}.events")), &r.events_text())?;
            if plot {
                emit_plot(&r, &PLOT_CHANNELS, &dir.join(format!("{stem}.svg")))?;
            }
            w(out, &summary(&s, &r)?)
        }
        Command::Sweep {
            kd,
            config,
            out: dir,
        } => {
            let base = load_config(&config)?;
            let scenarios: Vec<Scenario> = kd
                .iter()
                .map(|&k| {
                    let mut s = base.with_kd(k);
                    s.name = format!("{}_kd{}", base.name, format_sig9(k));
                    s.validate().map(|_| s)
                })
                .collect::<Result<_>>()?;
            let results: Vec<SimulationResult> =
                run_batch(&scenarios).into_iter().collect::<Result<_>>()?;
            create_dir(&dir)?;
            let stem = file_stem(&base, &config);
            let mut table =
                String::from("kd_s,ramp_start_s,rocof_hz_per_s,mean_dp_mw,peak_dp_mw\n");
            let mut text = String::new();
            for (s, r) in scenarios.iter().zip(&results) {
                write_file(&dir.join(format!("{}.csv", s.name)), &r.to_csv())?;
                let _ = writeln!(text, "== K_d = {} s", format_sig9(s.controller.kd_s));
                text.push_str(&summary(s, r)?);
                let peak = peak_deviation(r);
                let responses = ramp_responses(r, s)?;
                if responses.is_empty() {
                    let _ = writeln!(
                        table,
                        "{},,,,{}",
                        format_sig9(s.controller.kd_s),
                        format_sig9(peak)
                    );
                }
                for rr in responses {
                    let _ = writeln!(
                        table,
                        "{},{},{},{},{}",
                        format_sig9(s.controller.kd_s),
                        format_sig9(rr.start_s),
                        format_sig9(rr.rocof_hz_per_s),
                        format_sig9(rr.mean_dp_mw),
                        format_sig9(peak)
                    );
                }
            }
            write_file(&dir.join(format!("{stem}_sweep.csv")), &table)?;
            let refs: Vec<&SimulationResult> = results.iter().collect();
            emit_overlay(
                &refs,
                &PLOT_CHANNELS,
                &dir.join(format!("{stem}_sweep.svg")),
            )?;
            w(out, &text)
        }
    }
}

fn file_stem(s: &Scenario, config: &Path) -> String {
    if s.name.is_empty() {
        config
            .file_stem()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into())
    } else {
        s.name.clone()
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Largest |P_unit − P_unit(0)| over the run [MW].
fn peak_deviation(r: &SimulationResult) -> f64 {
    let p0 = r.p_unit_mw[0];
    r.p_unit_mw.iter().fold(
        0.0_f64,
        |m, p| if (p - p0).abs() > m.abs() { p - p0 } else { m },
    )
}

fn summary(s: &Scenario, r: &SimulationResult) -> Result<String> {
    let mut text = String::new();
    let _ = writeln!(text, "scenario {} ({} samples)", s.name, r.len());
    for rr in ramp_responses(r, s)? {
        let _ = writeln!(
            text,
            "ramp at {} s, {} Hz/s: mean dP {} MW (baseline {} MW)",
            format_sig9(rr.start_s),
            format_sig9(rr.rocof_hz_per_s),
            format_sig9(rr.mean_dp_mw),
            format_sig9(rr.baseline_mw)
        );
    }
    let _ = writeln!(text, "peak dP {} MW", format_sig9(peak_deviation(r)));
    let end = *r.t_s.last().unwrap();
    let last_event = s.events.iter().map(|e| e.end_s()).fold(0.0, f64::max);
    let a = r.index_at(last_event + 0.5);
    if end - r.t_s[a] >= crate::engine::MIN_SPECTRAL_WINDOW_S {
        if let Some(o) = dominant_oscillation(&r.t_s[a..], &r.p_unit_mw[a..]) {
            let _ = writeln!(
                text,
                "oscillation {} Hz, amplitude {} MW",
                format_sig9(o.frequency_hz),
                format_sig9(o.amplitude)
            );
        }
    }
    let (lo, hi) = r
        .n_rpm
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    let _ = writeln!(
        text,
        "speed range {} to {} rpm",
        format_sig9(lo),
        format_sig9(hi)
    );
    Ok(text)
}
