//! Command-line front end: run presets or configuration files, write the
//! series as CSV with a JSON sidecar, and analyse series for revivals.

mod config;
mod io;
mod presets;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{parse_config, FieldError, Plan, RunConfig, SystemKind, TimeUnit};
pub use io::{parse_csv, read_meta, series_csv, write_atomic, Meta, ReportFile, Table};
pub use presets::{preset, Preset, PRESETS};

use crate::error::{Error, Result};
use crate::revivals::{analyze_column, run_diagnostics, DetectionParams, RevivalReport};
use crate::systems::{propagator, Timescales};

#[derive(Debug, Parser)]
#[command(
    name = "qrevival",
    version,
    about = "Entropic signatures of wave-packet revivals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a packet and write <out>_series.csv, <out>_meta.json and
    /// <out>_report.json.
    Simulate {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect and classify extrema in an existing series.
    Analyze {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        #[command(flatten)]
        detection: DetectionArgs,
        /// Report path; defaults to the series path with `_report.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List presets, or print one as a configuration file.
    Presets {
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Debug, Args)]
struct DetectionArgs {
    #[arg(long)]
    window: Option<usize>,
    /// Minimum prominence as a fraction of the series range.
    #[arg(long)]
    prominence: Option<f64>,
    #[arg(long)]
    smoothing: Option<usize>,
    #[arg(long)]
    qmax: Option<u64>,
    /// Classification tolerance as a fraction of T_rev.
    #[arg(long)]
    tol: Option<f64>,
}

impl DetectionArgs {
    fn apply(&self, base: DetectionParams) -> DetectionParams {
        DetectionParams {
            window: self.window.or(base.window),
            prominence: self.prominence.or(base.prominence),
            smoothing: self.smoothing.or(base.smoothing),
            q_max: self.qmax.unwrap_or(base.q_max),
            tolerance: self.tol.unwrap_or(base.tolerance),
        }
    }
}

/// Files written by [`simulate`].
#[derive(Debug, Clone)]
pub struct Outputs {
    pub series: PathBuf,
    pub meta: PathBuf,
    pub report: PathBuf,
    pub reports: Vec<RevivalReport>,
}

/// Runs a validated configuration and writes its series, sidecar and report.
pub fn simulate(config: &RunConfig, plan: &Plan, prefix: &Path) -> Result<Outputs> {
    let prop = propagator(&plan.system, &plan.packet)?;
    let series = run_diagnostics(prop.as_ref(), &plan.times, &plan.pairs, plan.components)?;
    let meta = Meta::new(config, &series, plan.timescales);
    let reports = series
        .columns()
        .into_iter()
        .map(|(name, values)| {
            analyze_column(
                &name,
                values,
                &series.times,
                &plan.timescales,
                &plan.detection,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let out = Outputs {
        series: io::with_suffix(prefix, "_series.csv"),
        meta: io::with_suffix(prefix, "_meta.json"),
        report: io::with_suffix(prefix, "_report.json"),
        reports,
    };
    write_atomic(&out.series, series_csv(&series).as_bytes())?;
    write_atomic(&out.meta, to_json(&meta).as_bytes())?;
    write_atomic(
        &out.report,
        to_json(&report_file(plan.timescales, &out.reports)).as_bytes(),
    )?;
    Ok(out)
}

/// Re-analyses a written series, checking it against its sidecar.
pub fn analyze_files(
    series: &Path,
    meta: &Path,
    detection: Option<DetectionParams>,
) -> Result<(Meta, Vec<RevivalReport>)> {
    let meta_doc = read_meta(meta)?;
    let table = parse_csv(&io::read_to_string(series)?, &series.display().to_string())?;
    if table.names != meta_doc.columns {
        return Err(Error::Schema {
            path: PathBuf::from(format!("{}:1", series.display())),
            message: format!(
                "header {:?} does not match sidecar columns {:?}",
                table.names, meta_doc.columns
            ),
        });
    }
    if table.columns[0].len() != meta_doc.samples {
        return Err(Error::Schema {
            path: series.to_path_buf(),
            message: format!(
                "{} rows, sidecar declares {}",
                table.columns[0].len(),
                meta_doc.samples
            ),
        });
    }
    let params = detection.unwrap_or_else(|| meta_doc.config.detection());
    let times = &table.columns[0];
    let reports = table.names[1..]
        .iter()
        .zip(&table.columns[1..])
        .map(|(name, values)| analyze_column(name, values, times, &meta_doc.timescales, &params))
        .collect::<Result<Vec<_>>>()?;
    Ok((meta_doc, reports))
}

fn report_file(timescales: Timescales, reports: &[RevivalReport]) -> ReportFile {
    ReportFile {
        version: env!("CARGO_PKG_VERSION").to_string(),
        timescales,
        reports: reports.to_vec(),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serialises");
    s.push('\n');
    s
}

/// One line per column: collapse estimate and classified minima.
pub fn summary(timescales: &Timescales, reports: &[RevivalReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "T_cl = {:.6e}  T_rev = {}  T_coll = {}",
        timescales.classical,
        timescales
            .revival
            .map_or("-".into(), |t| format!("{t:.6e}")),
        timescales
            .collapse
            .map_or("-".into(), |t| format!("{t:.6e}")),
    );
    let _ = writeln!(
        out,
        "{:<16} {:>13} {:>6}  classified minima",
        "column", "collapse", "min"
    );
    for r in reports {
        let collapse = r
            .collapse_estimate
            .map_or("-".into(), |t| format!("{t:.6e}"));
        let fractions: Vec<String> = r
            .minima
            .iter()
            .filter_map(|m| m.fraction.as_ref().map(|f| format!("{f}@{:.4e}", m.time)))
            .collect();
        let _ = writeln!(
            out,
            "{:<16} {:>13} {:>6}  {}",
            r.column,
            collapse,
            r.minima.len(),
            fractions.join(" ")
        );
    }
    out
}

fn default_report_path(series: &Path) -> PathBuf {
    let s = series.to_string_lossy();
    let stem = s
        .strip_suffix("_series.csv")
        .or_else(|| s.strip_suffix(".csv"))
        .unwrap_or(&s);
    PathBuf::from(format!("{stem}_report.json"))
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Simulate {
            config,
            preset: name,
            out,
        } => {
            let (config, plan) = match (config, name) {
                (Some(path), _) => {
                    parse_config(&io::read_to_string(&path)?, &path.display().to_string())?
                }
                (None, Some(name)) => {
                    let p = preset(&name).ok_or_else(|| {
                        Error::Config(format!(
                            "unknown preset `{name}`; run `presets` for the list"
                        ))
                    })?;
                    let config = p.config();
                    let plan = config.plan().map_err(|e| {
                        Error::Config(format!("preset {name}: {}: {}", e.field, e.message))
                    })?;
                    (config, plan)
                }
                (None, None) => {
                    return Err(Error::Config(
                        "either --config or --preset is required".into(),
                    ))
                }
            };
            let outputs = simulate(&config, &plan, &out)?;
            let mut text = summary(&plan.timescales, &outputs.reports);
            for p in [&outputs.series, &outputs.meta, &outputs.report] {
                let _ = writeln!(text, "wrote {}", p.display());
            }
            Ok(text)
        }
        Command::Analyze {
            series,
            meta,
            detection,
            out,
        } => {
            let base = read_meta(&meta)?.config.detection();
            let params = detection.apply(base);
            let (meta_doc, reports) = analyze_files(&series, &meta, Some(params))?;
            let path = out.unwrap_or_else(|| default_report_path(&series));
            write_atomic(
                &path,
                to_json(&report_file(meta_doc.timescales, &reports)).as_bytes(),
            )?;
            let mut text = summary(&meta_doc.timescales, &reports);
            let _ = writeln!(text, "wrote {}", path.display());
            Ok(text)
        }
        Command::Presets { show: Some(name) } => {
            let p =
                preset(&name).ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))?;
            Ok(to_json(&p.config()))
        }
        Command::Presets { show: None } => {
            let mut text = String::new();
            for p in PRESETS {
                let _ = writeln!(text, "{:<16} {}", p.name, p.description);
            }
            Ok(text)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
