//! Grid evaluation and deterministic CSV/JSON output.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// One named axis of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Axis {
            name: name.into(),
            values,
        }
    }

    /// `name=start:stop:count` (inclusive linspace), `name=v1,v2,…` or
    /// `name=` for an empty axis.
    pub fn parse(text: &str) -> Result<Axis> {
        let Some((name, rest)) = text.split_once('=') else {
            return invalid(format!("axis '{text}' is not of the form name=values"));
        };
        let name = name.trim();
        if name.is_empty() {
            return invalid(format!("axis '{text}' has no name"));
        }
        let rest = rest.trim();
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidArgument(format!("'{s}' in axis '{name}' is not a finite number")))
        };
        let values = if rest.is_empty() {
            vec![]
        } else if rest.contains(':') {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return invalid(format!("range '{rest}' must be start:stop:count"));
            }
            let count: usize = parts[2].trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("count '{}' in axis '{name}' is not an integer", parts[2]))
            })?;
            crate::fock::linspace(num(parts[0])?, num(parts[1])?, count)
        } else {
            rest.split(',').map(num).collect::<Result<Vec<_>>>()?
        };
        Ok(Axis::new(name, values))
    }
}

/// Row-major grid over the axes with named output columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub outputs: Vec<String>,
    /// Axis values followed by outputs, one row per grid point.
    pub rows: Vec<Vec<f64>>,
    /// `(key, value)` lines written as the file header.
    pub metadata: Vec<(String, String)>,
}

/// All grid points in row-major order (last axis fastest).
pub fn grid_points(axes: &[Axis]) -> Vec<Vec<f64>> {
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    if axes.is_empty() {
        return vec![vec![]];
    }
    (0..total)
        .map(|mut k| {
            let mut p = vec![0.0; axes.len()];
            for (i, a) in axes.iter().enumerate().rev() {
                let n = a.values.len();
                p[i] = a.values[k % n];
                k /= n;
            }
            p
        })
        .collect()
}

/// Evaluates `f` on every grid point in parallel; rows keep grid order.
/// `workers = None` uses the global pool.
pub fn run_sweep<F>(axes: Vec<Axis>, outputs: Vec<String>, workers: Option<usize>, f: F) -> Result<SweepResult>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let points = grid_points(&axes);
    let eval = || -> Result<Vec<Vec<f64>>> {
        points
            .par_iter()
            .map(|p| {
                let vals = f(p)?;
                let mut row = p.clone();
                row.extend(vals);
                Ok(row)
            })
            .collect()
    };
    let rows = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?
            .install(eval)?,
        None => eval()?,
    };
    Ok(SweepResult {
        axes,
        outputs,
        rows,
        metadata: vec![],
    })
}

/// Twelve significant digits, locale independent.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.11e}")
    }
}

impl SweepResult {
    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.push((key.into(), value.into()));
        self
    }

    pub fn columns(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.name.clone())
            .chain(self.outputs.iter().cloned())
            .collect()
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
        w.write_record(self.columns()).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_float(*v))).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, out: &mut impl Write) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            metadata: std::collections::BTreeMap<&'a str, &'a str>,
            columns: Vec<String>,
            rows: Vec<Vec<Option<f64>>>,
        }
        let doc = Doc {
            metadata: self.metadata.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
            columns: self.columns(),
            rows: self
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|v| format_float(*v).parse::<f64>().ok().filter(|x| x.is_finite()))
                        .collect()
                })
                .collect(),
        };
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write(&self, format: OutputFormat, out: &mut impl Write) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => self.write_json(out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_forms() {
        assert_eq!(Axis::parse("a=0:1:3").unwrap().values, vec![0.0, 0.5, 1.0]);
        assert_eq!(Axis::parse("a=1,2.5").unwrap().values, vec![1.0, 2.5]);
        assert!(Axis::parse("a=").unwrap().values.is_empty());
        assert!(Axis::parse("a=0:1").is_err());
        assert!(Axis::parse("=1").is_err());
        assert!(Axis::parse("a=x").is_err());
    }

    #[test]
    fn row_major_and_empty() {
        let axes = vec![Axis::new("a", vec![1.0, 2.0]), Axis::new("b", vec![10.0, 20.0, 30.0])];
        let pts = grid_points(&axes);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![1.0, 20.0]);
        assert_eq!(pts[3], vec![2.0, 10.0]);
        let empty = run_sweep(vec![Axis::new("a", vec![])], vec!["v".into()], Some(2), |_| {
            Ok(vec![0.0])
        })
        .unwrap();
        let mut buf = Vec::new();
        empty.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,v\n");
    }

    #[test]
    fn worker_count_does_not_change_bytes() {
        let axes = vec![Axis::new("x", crate::fock::linspace(0.0, 1.0, 50))];
        let f = |p: &[f64]| Ok(vec![(p[0] * 7.0).sin()]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        run_sweep(axes.clone(), vec!["y".into()], Some(1), f)
            .unwrap()
            .write_csv(&mut a)
            .unwrap();
        run_sweep(axes, vec!["y".into()], Some(8), f)
            .unwrap()
            .write_csv(&mut b)
            .unwrap();
        assert_eq!(a, b);
    }
}
