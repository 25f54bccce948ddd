use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::transforms::{TransformKind, MAX_CONDITION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Transform applied alongside an unmodified Kaczmarz sequence.
    Ak,
    /// Kaczmarz restarted from each transformed vector.
    Rk,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ak => "ak",
            Mode::Rk => "rk",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ak" => Ok(Mode::Ak),
            "rk" => Ok(Mode::Rk),
            _ => Err(Error::Config(format!("unknown acceleration mode `{s}`"))),
        }
    }
}

/// What replaces a transformed vector that could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// The previous `z` (AK default); the newest Kaczmarz iterate when there is none yet.
    PreviousZ,
    /// The newest Kaczmarz iterate of the window, `x_{n+l}` in AK, `x_l` in RK (RK default).
    LastIterate,
    /// Stop the run.
    Abort,
}

/// Parameters of the stopping signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    /// Number of previous values the current one is compared with.
    pub window: usize,
    /// AK: signal when the ratio exceeds `growth` times the running minimum.
    pub growth: f64,
    /// RK: `||dz||` must be below `smallness * ||b||` before stagnation counts.
    pub smallness: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            window: 5,
            growth: 10.0,
            smallness: 1e-13,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AccelConfig<T> {
    pub kind: TransformKind<T>,
    pub k: usize,
    pub mode: Mode,
    /// Transformed vectors `z_0 ..= z_max_outer` are computed at most.
    pub max_outer: usize,
    pub stop_rule: StopRule,
    /// End the run at the first stopping signal instead of only recording it.
    pub stop_on_signal: bool,
    /// End the run once `||b - A z_n|| <= residual_tol ||b||`.
    pub residual_tol: Option<f64>,
    pub fallback: Fallback,
    /// RK with the topological kind: take `y` as the residual of each restart vector.
    pub lanczos: bool,
    pub max_condition: f64,
}

impl<T: Scalar> AccelConfig<T> {
    pub fn new(kind: TransformKind<T>, k: usize, mode: Mode) -> Self {
        AccelConfig {
            kind,
            k,
            mode,
            max_outer: 30,
            stop_rule: StopRule::default(),
            stop_on_signal: false,
            residual_tol: None,
            fallback: match mode {
                Mode::Ak => Fallback::PreviousZ,
                Mode::Rk => Fallback::LastIterate,
            },
            lanczos: false,
            max_condition: MAX_CONDITION,
        }
    }

    pub fn with_max_outer(mut self, m: usize) -> Self {
        self.max_outer = m;
        self
    }

    pub fn with_fallback(mut self, f: Fallback) -> Self {
        self.fallback = f;
        self
    }

    pub fn with_lanczos(mut self, on: bool) -> Self {
        self.lanczos = on;
        self
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Self {
        self.residual_tol = Some(tol);
        self
    }

    pub fn with_stop_on_signal(mut self, on: bool) -> Self {
        self.stop_on_signal = on;
        self
    }

    /// `l`: sweeps between the first and the last iterate a transform reads.
    pub fn window_len(&self) -> usize {
        self.kind.window_len(self.k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("transform order k must be >= 1".into()));
        }
        if self.stop_rule.window == 0 {
            return Err(Error::Config("stopping window must be >= 1".into()));
        }
        if self.lanczos && !matches!(self.kind, TransformKind::Topological { .. }) {
            return Err(Error::Config(
                "residual-reset mode needs the topological transformation".into(),
            ));
        }
        if let TransformKind::Mmpe { aux } = &self.kind {
            if aux.len() < self.k {
                return Err(Error::Config(format!(
                    "MMPE of order {} needs {} auxiliary vectors, has {}",
                    self.k,
                    self.k,
                    aux.len()
                )));
            }
        }
        Ok(())
    }
}
