//! Command-line front end behind the `hyent` binary.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 input error,
//! 3 inapplicable operation, 4 I/O error.

pub mod figures;
pub mod measure;
pub mod spec;
pub mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::catalog::Payload;
use crate::compression::{classify, compression, Family};
use crate::error::{Error, Result};
use crate::witness::QuditOps;

use measure::{evaluate, Context};
use spec::StateSpec;
use sweep::{run_sweep, Axis, OutputFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::CutoffTooSmall { .. }
        | Error::UnsupportedKet(_)
        | Error::DegenerateNormalization(_) => EXIT_INPUT,
        Error::Inapplicable(_) => EXIT_INAPPLICABLE,
        Error::Io(_) => EXIT_IO,
        Error::InconsistentMoments(_) | Error::NumericInconsistency(_) => EXIT_NUMERIC,
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyent", version, about = "Hybrid qudit-qumode entanglement toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the hybrid-entanglement class, effective dimensions and Gram coefficients.
    Classify { spec: PathBuf },
    /// Evaluate one or more measures on a state.
    Measure {
        spec: PathBuf,
        /// Measure names; `ckw` expands to all tangles.
        #[arg(short, long = "measure", required = true, num_args = 1..)]
        measures: Vec<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Evaluate measures over a parameter grid.
    Sweep {
        spec: PathBuf,
        /// `name=start:stop:count`, `name=v1,v2,…` or `name=`; repeatable.
        #[arg(short, long = "axis", required = true)]
        axes: Vec<String>,
        /// Measure names evaluated at each grid point.
        #[arg(short = 'm', long = "measure", required = true, num_args = 1..)]
        outputs: Vec<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(short = 'o', long)]
        out: PathBuf,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Write the data behind a published figure.
    Reproduce {
        figure: String,
        #[arg(short = 'o', long, default_value = ".")]
        out_dir: PathBuf,
        /// Also run the expensive original-amplitude variants.
        #[arg(long)]
        full: bool,
    },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("hyent: {e}");
            exit_code(&e)
        }
    }
}

fn load_spec(path: &Path) -> Result<StateSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    StateSpec::parse(&text)
}

fn context(spec: &StateSpec) -> Result<Context> {
    Ok(Context {
        cutoff: spec.cutoff()?,
        qudit_ops: spec.qudit_ops(),
    })
}

fn ops_name(ops: QuditOps) -> &'static str {
    match ops {
        QuditOps::Adapted => "adapted",
        QuditOps::Embedded => "embedded",
    }
}

fn cutoff_name(c: Option<usize>) -> String {
    c.map_or_else(|| "auto".to_string(), |n| n.to_string())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn run(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Classify { spec } => cmd_classify(&load_spec(&spec)?, out),
        Command::Measure { spec, measures, format } => cmd_measure(&load_spec(&spec)?, &measures, format, out),
        Command::Sweep {
            spec,
            axes,
            outputs,
            format,
            out: path,
            workers,
        } => {
            let spec = load_spec(&spec)?;
            let axes = axes.iter().map(|a| Axis::parse(a)).collect::<Result<Vec<_>>>()?;
            let started = Instant::now();
            let result = cmd_sweep(&spec, axes, &outputs, workers)?;
            let mut w = create(&path)?;
            result.write(format, &mut w)?;
            w.flush()?;
            eprintln!(
                "hyent: {} points in {:.3} s -> {}",
                result.rows.len(),
                started.elapsed().as_secs_f64(),
                path.display()
            );
            Ok(())
        }
        Command::Reproduce { figure, out_dir, full } => {
            let written = cmd_reproduce(&figure, &out_dir, full)?;
            for f in written {
                writeln!(out, "{}", f.display())?;
            }
            Ok(())
        }
    }
}

pub fn cmd_classify(spec: &StateSpec, out: &mut impl Write) -> Result<()> {
    let state = spec.build()?;
    writeln!(out, "family: {}", state.id)?;
    writeln!(out, "classification: {}", classify(&state))?;
    match &state.payload {
        Payload::Hybrid(h) if *h.family() == Family::Finite => {
            let c = compression(h)?;
            let dims: Vec<String> = c.dims().iter().map(|d| d.to_string()).collect();
            writeln!(out, "effective: {}", dims.join("⊗"))?;
            for (slot, kets, g) in &c.bases {
                writeln!(
                    out,
                    "gram slot {slot}: {} kets, basis size {}",
                    kets.len(),
                    g.basis_size
                )?;
                for (i, k) in kets.iter().enumerate() {
                    let row: Vec<String> = (0..g.a.ncols())
                        .map(|j| {
                            let z = g.a[(i, j)];
                            let sign = if z.im.is_sign_negative() { "-" } else { "+" };
                            format!(
                                "{}{sign}{}i",
                                sweep::format_float(z.re),
                                sweep::format_float(z.im.abs())
                            )
                        })
                        .collect();
                    writeln!(out, "  {k}: [{}]", row.join(", "))?;
                }
            }
        }
        Payload::Pure { dims, .. } => {
            let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
            writeln!(out, "effective: {}", dims.join("⊗"))?;
        }
        Payload::Density(r) => {
            let dims: Vec<String> = r.dims().iter().map(|d| d.to_string()).collect();
            writeln!(out, "effective: {}", dims.join("⊗"))?;
        }
        _ => writeln!(out, "effective: infinite")?,
    }
    Ok(())
}

fn expand_measures(names: &[String]) -> Vec<String> {
    names
        .iter()
        .flat_map(|n| {
            if n == "ckw" {
                ["c2-ab", "c2-ac", "c2-bc", "c2-a-bc", "tau-res"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
            } else {
                vec![n.clone()]
            }
        })
        .collect()
}

pub fn cmd_measure(spec: &StateSpec, names: &[String], format: OutputFormat, out: &mut impl Write) -> Result<()> {
    let state = spec.build()?;
    let ctx = context(spec)?;
    let names = expand_measures(names);
    let values = names
        .iter()
        .map(|n| evaluate(&state, n, &ctx))
        .collect::<Result<Vec<f64>>>()?;
    let meta = vec![
        ("tool".to_string(), format!("hyent {}", env!("CARGO_PKG_VERSION"))),
        ("family".to_string(), state.id.to_string()),
        ("params".to_string(), params_text(&state.params)),
        ("cutoff".to_string(), cutoff_name(ctx.cutoff)),
        ("qudit_ops".to_string(), ops_name(ctx.qudit_ops).to_string()),
        (
            "dependence_tol".to_string(),
            format!("{:e}", crate::compression::DEPENDENCE_TOL),
        ),
        (
            "inconclusive_band".to_string(),
            format!("{:e}", crate::witness::INCONCLUSIVE_BAND),
        ),
    ];
    match format {
        OutputFormat::Csv => {
            for (k, v) in &meta {
                writeln!(out, "# {k}: {v}")?;
            }
            writeln!(out, "measure,value")?;
            for (n, v) in names.iter().zip(&values) {
                writeln!(out, "{n},{}", sweep::format_float(*v))?;
            }
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                metadata: std::collections::BTreeMap<&'a str, &'a str>,
                values: std::collections::BTreeMap<&'a str, Option<f64>>,
            }
            let doc = Doc {
                metadata: meta.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
                values: names
                    .iter()
                    .zip(&values)
                    .map(|(n, v)| (n.as_str(), v.is_finite().then_some(*v)))
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn params_text(params: &[(&str, f64)]) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={}", sweep::format_float(*v)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Grid evaluation for `sweep`. Points whose state degenerates are written
/// as `nan`; inapplicable measures and bad parameters abort the sweep.
pub fn cmd_sweep(
    spec: &StateSpec,
    axes: Vec<Axis>,
    outputs: &[String],
    workers: Option<usize>,
) -> Result<sweep::SweepResult> {
    let ctx = context(spec)?;
    let outputs = expand_measures(outputs);
    for o in &outputs {
        if !measure::MEASURES.contains(&o.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "unknown measure '{o}'; known: {}",
                measure::MEASURES.join(", ")
            )));
        }
    }
    let names: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    let result = run_sweep(axes, outputs.clone(), workers, |p| {
        let overrides: Vec<(String, f64)> = names.iter().cloned().zip(p.iter().copied()).collect();
        let state = match spec.build_with(&overrides) {
            Ok(s) => s,
            Err(Error::DegenerateNormalization(_)) => return Ok(vec![f64::NAN; outputs.len()]),
            Err(e) => return Err(e),
        };
        outputs
            .iter()
            .map(|o| match evaluate(&state, o, &ctx) {
                Err(Error::NumericInconsistency(_)) | Err(Error::DegenerateNormalization(_)) => Ok(f64::NAN),
                other => other,
            })
            .collect()
    })?;
    let fixed: Vec<String> = spec
        .params
        .iter()
        .filter(|(k, _)| !names.contains(k))
        .map(|(k, v)| format!("{k}={}", sweep::format_float(*v)))
        .collect();
    Ok(result
        .with_metadata("tool", format!("hyent {}", env!("CARGO_PKG_VERSION")))
        .with_metadata("family", spec.label())
        .with_metadata("fixed", fixed.join(" "))
        .with_metadata("cutoff", cutoff_name(ctx.cutoff))
        .with_metadata("qudit_ops", ops_name(ctx.qudit_ops))
        .with_metadata("dependence_tol", format!("{:e}", crate::compression::DEPENDENCE_TOL))
        .with_metadata("inconclusive_band", format!("{:e}", crate::witness::INCONCLUSIVE_BAND)))
}

/// Writes every sweep of `figure` and its manifest into `out_dir`.
pub fn cmd_reproduce(figure: &str, out_dir: &Path, full: bool) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let fig = figures::reproduce(figure, full)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", out_dir.display()))))?;
    let mut written = Vec::new();
    for (name, sweep) in &fig.sweeps {
        let path = out_dir.join(name);
        let mut w = create(&path)?;
        sweep
            .clone()
            .with_metadata("tool", format!("hyent {}", env!("CARGO_PKG_VERSION")))
            .with_metadata("figure", fig.id)
            .write_csv(&mut w)?;
        w.flush()?;
        written.push(path);
    }
    let manifest = out_dir.join(format!("{}.manifest.json", fig.id));
    let mut w = create(&manifest)?;
    serde_json::to_writer_pretty(&mut w, &fig.manifest())
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    writeln!(w)?;
    w.flush()?;
    written.push(manifest);
    eprintln!("hyent: {} in {:.3} s", fig.id, started.elapsed().as_secs_f64());
    Ok(written)
}
