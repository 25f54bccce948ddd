use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use kaczmarz_accel::accel::{fmt_opt, RunRecord, StopReason, CSV_HEADER};
use kaczmarz_accel::kaczmarz::{spectral_diagnostics, SPECTRAL_GUARD};
use kaczmarz_accel::{
    accel_run, build_gallery, plain_run, AccelConfig, AccelRun, Error, NoiseSpec, Result,
    TransformKind,
};

use crate::config::{ExperimentConfig, RunMode};

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    /// `||z - x|| / ||x||` of the last transformed vector.
    pub final_error: Option<f64>,
    /// First index with relative error at most `1e-11`.
    pub iterations_to_1e11: Option<usize>,
    pub breakdown_count: usize,
    pub sweeps: usize,
    pub stop: String,
    pub signal: Option<usize>,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub spectral_radius: f64,
    /// Largest eigenvalue moduli of the sweep matrix, at most ten.
    pub leading_moduli: Vec<f64>,
    pub meany_constant: f64,
    pub condition_number: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
    pub summary: Summary,
    pub spectral: Option<SpectralSummary>,
    /// A breakdown ended the run (`abort` fallback).
    pub aborted: bool,
}

fn stop_label(s: &StopReason) -> String {
    match s {
        StopReason::MaxIterations => "max-iterations".into(),
        StopReason::Signal(n) => format!("signal@{n}"),
        StopReason::Converged(n) => format!("converged@{n}"),
        StopReason::Breakdown(n) => format!("breakdown@{n}"),
    }
}

/// Gallery matrix, row scaling, noise, then the configured solver.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let started = Instant::now();
    let mut system = build_gallery::<f64>(config.matrix, config.size)?;
    if config.precondition {
        system = system.precondition_rows()?;
    }
    if let Some(delta) = config.noise {
        system = system.add_noise(&NoiseSpec::new(delta, config.seed))?;
    }
    let n = system.order();
    let x0 = vec![0.0; n];
    let run: AccelRun<f64> = match config.mode {
        RunMode::Plain => plain_run(&system, &x0, config.max_iter)?,
        RunMode::Accel(mode) => {
            let kind =
                TransformKind::from_tag(config.transform, n, config.k, config.aux_policy()?)?;
            let mut acfg = AccelConfig::new(kind, config.k, mode)
                .with_max_outer(config.max_iter)
                .with_lanczos(config.lanczos)
                .with_stop_on_signal(config.stop_on_signal);
            if let Some(f) = config.fallback {
                acfg = acfg.with_fallback(f);
            }
            accel_run(&system, &x0, &acfg)?
        }
    };
    let xnorm = system
        .solution()
        .map(kaczmarz_accel::scalar::vecops::norm)
        .unwrap_or(1.0);
    let rel = |r: &RunRecord| r.err_z.map(|e| e / xnorm);
    let spectral = if config.spectral && n <= SPECTRAL_GUARD {
        let d = spectral_diagnostics(&system)?;
        Some(SpectralSummary {
            spectral_radius: d.spectral_radius,
            leading_moduli: d.moduli().into_iter().take(10).collect(),
            meany_constant: d.meany_constant,
            condition_number: d.condition_number,
        })
    } else {
        None
    };
    let summary = Summary {
        final_error: run.records.iter().rev().find_map(rel),
        iterations_to_1e11: run
            .records
            .iter()
            .find(|r| rel(r).is_some_and(|e| e <= 1e-11))
            .map(|r| r.n),
        breakdown_count: run.breakdown_count(),
        sweeps: run.sweeps,
        stop: stop_label(&run.stop),
        signal: run.signal,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    Ok(ExperimentResult {
        config: config.clone(),
        aborted: matches!(run.stop, StopReason::Breakdown(_)),
        records: run.records,
        summary,
        spectral,
    })
}

#[derive(Serialize)]
struct JsonRecord {
    n: usize,
    err_z: Option<f64>,
    err_kacz_ref: Option<f64>,
    err_ratio: Option<f64>,
    dz_norm: Option<f64>,
    stop_ratio: Option<f64>,
    breakdown_flag: bool,
}

#[derive(Serialize)]
struct JsonResult<'a> {
    config: serde_json::Map<String, serde_json::Value>,
    records: Vec<JsonRecord>,
    summary: &'a Summary,
    spectral: &'a Option<SpectralSummary>,
}

impl ExperimentResult {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(out, "{}", r.csv_line())?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn to_json(&self) -> String {
        let config = self
            .config
            .pairs()
            .into_iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
            .collect();
        let records = self
            .records
            .iter()
            .map(|r| JsonRecord {
                n: r.n,
                err_z: r.err_z,
                err_kacz_ref: r.err_kacz_ref,
                err_ratio: r.err_ratio,
                dz_norm: r.dz_norm,
                stop_ratio: r.stop_ratio,
                breakdown_flag: r.breakdown,
            })
            .collect();
        serde_json::to_string_pretty(&JsonResult {
            config,
            records,
            summary: &self.summary,
            spectral: &self.spectral,
        })
        .expect("serializable result")
    }

    /// Human-readable lines for the terminal.
    pub fn summary_text(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{} N={} mode={} transform={} k={}\nfinal relative error: {}\niterations to 1e-11: {}\nbreakdowns: {}\nsweeps: {}\nstop: {}\nwall time: {:.3}s\n",
            self.config.matrix,
            self.config.size,
            self.config.mode,
            self.config.transform,
            self.config.k,
            fmt_opt(s.final_error),
            s.iterations_to_1e11.map_or("-".into(), |n| n.to_string()),
            s.breakdown_count,
            s.sweeps,
            s.stop,
            s.wall_time_secs,
        );
        if let Some(sp) = &self.spectral {
            out.push_str(&format!(
                "spectral radius of Q: {:.10}\nleading |eigenvalues|: {:?}\n",
                sp.spectral_radius, sp.leading_moduli
            ));
        }
        out
    }
}

/// Exit status for an error: 2 for configuration problems, 3 for numerical failures, 1 for I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Capability { .. }
        | Error::Dimension { .. }
        | Error::IndexOutOfRange { .. } => 2,
        Error::Breakdown(_) | Error::InsufficientWindow { .. } | Error::Singular(_) => 3,
        Error::Io(_) => 1,
    }
}
