//! CSV writers for energy traces, field snapshots and study tables.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::assembly::{EnergyBreakdown, NodalField};
use crate::error::{Error, Result};
use crate::qtensor::order_parameter_2d;
use crate::solver::StepStats;

pub const ENERGY_HEADER: [&str; 12] =
    ["step", "time", "f1", "f2", "f3", "f4", "f5", "f6", "total", "diss_residual", "fp_iters", "update_norm"];

pub const SNAPSHOT_HEADER: [&str; 9] =
    ["node_id", "x", "y", "q1", "q2", "lambda_plus", "dir_x", "dir_y", "boundary_flag"];

pub const CONVERGENCE_HEADER: [&str; 5] =
    ["param", "field_error", "field_order", "energy_error", "energy_order"];

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Io { path: path.into(), source: std::io::Error::other(format!("{other:?}")) },
    }
}

/// Shortest round-trip formatting, so values read back are bit-identical.
pub(crate) fn num(v: f64) -> String {
    format!("{v:e}")
}

pub(crate) fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub struct CsvFile {
    path: PathBuf,
    writer: csv::Writer<File>,
}

impl CsvFile {
    pub fn create(path: impl AsRef<Path>, header: &[&str]) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let mut writer = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
        writer.write_record(header).map_err(|e| csv_err(&path, e))?;
        Ok(Self { path, writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|e| csv_err(&self.path, e))
    }

    pub fn flush(&mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

/// Streams one row per step; step 0 has no solver statistics.
pub struct EnergyCsv(CsvFile);

impl EnergyCsv {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        CsvFile::create(path, &ENERGY_HEADER).map(Self)
    }

    pub fn write(
        &mut self,
        step: usize,
        time: f64,
        e: &EnergyBreakdown,
        stats: Option<&StepStats>,
    ) -> Result<()> {
        let mut rec = vec![step.to_string(), num(time)];
        rec.extend(e.terms().iter().map(|&v| num(v)));
        rec.push(num(e.total));
        rec.push(opt(stats.map(|s| s.dissipation_residual)));
        rec.push(stats.map(|s| s.fp_iters.to_string()).unwrap_or_default());
        rec.push(opt(stats.map(|s| s.last_update_norm)));
        self.0.row(rec)
    }

    pub fn flush(&mut self) -> Result<()> {
        self.0.flush()
    }
}

pub fn write_snapshot(path: impl AsRef<Path>, q: &NodalField) -> Result<()> {
    let mesh = q.mesh();
    let mut f = CsvFile::create(path, &SNAPSHOT_HEADER)?;
    for (i, (x, c)) in mesh.nodes().iter().zip(q.coeffs()).enumerate() {
        let o = order_parameter_2d(&q.value(i));
        f.row([
            i.to_string(),
            num(x[0]),
            num(x[1]),
            num(c[0]),
            num(c[1]),
            num(o.lambda_plus),
            num(o.director[0]),
            num(o.director[1]),
            u8::from(mesh.is_boundary(i)).to_string(),
        ])?;
    }
    f.flush()
}

/// File name of the snapshot at time `t`, e.g. `snapshot_t15.csv`.
pub fn snapshot_name(prefix: &str, t: f64) -> String {
    format!("{prefix}snapshot_t{t}.csv")
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).and_then(|mut f| f.write_all(text.as_bytes())).map_err(|e| Error::io(path, e))
}
