use std::io::Write;

use crate::accel::config::Mode;
use crate::error::Breakdown;
use crate::scalar::Scalar;

/// One row of a run: transformed vector `z_n` against the Kaczmarz reference.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub n: usize,
    /// `||z_n - x||`
    pub err_z: Option<f64>,
    /// AK: `||x_{n+l} - x||`; RK: `||x_{(n+1)(l+1)} - x||` of a plain run from the same start.
    pub err_kacz_ref: Option<f64>,
    pub err_ratio: Option<f64>,
    /// `||z_n - z_{n-1}||`
    pub dz_norm: Option<f64>,
    /// `||z_n - z_{n-1}|| / ||x_m - x_{m-1}||`, `x_m` the newest iterate the transform read.
    pub stop_ratio: Option<f64>,
    pub breakdown: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StopReason {
    MaxIterations,
    /// The stopping signal fired at this index.
    Signal(usize),
    /// Relative residual of `z_n` fell below the configured tolerance.
    Converged(usize),
    /// A breakdown with the `Abort` policy.
    Breakdown(usize),
}

#[derive(Debug, Clone)]
pub struct AccelRun<T> {
    /// `None` for a plain Kaczmarz run exported in the same format.
    pub mode: Option<Mode>,
    pub k: usize,
    pub window_len: usize,
    /// `z_0, z_1, ...`
    pub z: Vec<Vec<T>>,
    /// AK: the Kaczmarz sequence `x_0, x_1, ...`. RK: one window `x_0 .. x_l` per restart.
    pub iterates: Vec<Vec<Vec<T>>>,
    pub records: Vec<RunRecord>,
    pub breakdowns: Vec<(usize, Breakdown)>,
    /// First index where the stopping signal fired, recorded even when the run continued.
    pub signal: Option<usize>,
    pub stop: StopReason,
    /// Sweeps spent by the run itself (the RK reference run is not counted).
    pub sweeps: usize,
}

pub const CSV_HEADER: &str = "n,err_z,err_kacz_ref,err_ratio,dz_norm,stop_ratio,breakdown_flag";

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

impl RunRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            fmt_opt(self.err_z),
            fmt_opt(self.err_kacz_ref),
            fmt_opt(self.err_ratio),
            fmt_opt(self.dz_norm),
            fmt_opt(self.stop_ratio),
            u8::from(self.breakdown)
        )
    }
}

impl<T: Scalar> AccelRun<T> {
    pub fn last_z(&self) -> Option<&[T]> {
        self.z.last().map(Vec::as_slice)
    }

    /// The AK Kaczmarz sequence, or the concatenated RK windows.
    pub fn kaczmarz_sequence(&self) -> impl Iterator<Item = &Vec<T>> {
        self.iterates.iter().flatten()
    }

    pub fn breakdown_count(&self) -> usize {
        self.records.iter().filter(|r| r.breakdown).count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(out, "{}", r.csv_line())?;
        }
        Ok(())
    }
}
