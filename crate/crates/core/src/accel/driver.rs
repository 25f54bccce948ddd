use crate::accel::config::{AccelConfig, Fallback, Mode};
use crate::accel::run::{AccelRun, RunRecord, StopReason};
use crate::accel::stop::fires_at;
use crate::error::{Breakdown, BreakdownSite, Error, Result};
use crate::kaczmarz::sweep::{check_len, iterate, sweep_in_place};
use crate::linalg::LinearSystem;
use crate::scalar::{vecops, Scalar};
use crate::transforms::{
    epsilon_transform, transform_apply_with, EpsilonKind, EpsilonTable, SolvePath, TransformKind,
    TransformWindow,
};

fn epsilon_kind<T: Scalar>(kind: &TransformKind<T>) -> Option<EpsilonKind<T>> {
    match kind {
        TransformKind::VectorEpsilon => Some(EpsilonKind::Vector),
        TransformKind::ScalarEpsilon => Some(EpsilonKind::Scalar),
        _ => None,
    }
}

/// Applies the transform to `window`, turning non-finite output into a breakdown.
fn transform<T: Scalar>(
    kind: &TransformKind<T>,
    window: &[Vec<T>],
    base: usize,
    config: &AccelConfig<T>,
) -> Result<Vec<T>> {
    let out = match epsilon_kind(kind) {
        Some(ek) => epsilon_transform(ek, config.k, window)?,
        None => {
            let w = TransformWindow::new(base, window.to_vec())?;
            transform_apply_with(
                kind,
                &w,
                config.k,
                SolvePath::Normalized,
                config.max_condition,
            )?
        }
    };
    finite_or_breakdown(out)
}

fn finite_or_breakdown<T: Scalar>(v: Vec<T>) -> Result<Vec<T>> {
    if vecops::is_finite(&v) {
        Ok(v)
    } else {
        Err(Breakdown {
            site: BreakdownSite::CoefficientSystem {
                condition: f64::INFINITY,
            },
            denominator: f64::NAN,
        }
        .into())
    }
}

fn err<T: Scalar>(system: &LinearSystem<T>, v: &[T]) -> Option<f64> {
    system.error_norm(v).map(Scalar::to_f64_lossy)
}

fn ratio(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    }
}

/// Bookkeeping shared by both drivers.
struct Recorder<'a, T> {
    system: &'a LinearSystem<T>,
    config: &'a AccelConfig<T>,
    bnorm: f64,
    run: AccelRun<T>,
    series: Vec<f64>,
}

enum Next {
    Continue,
    Stop,
}

impl<'a, T: Scalar> Recorder<'a, T> {
    fn new(system: &'a LinearSystem<T>, config: &'a AccelConfig<T>) -> Self {
        Recorder {
            system,
            config,
            bnorm: vecops::norm(system.rhs()).to_f64_lossy(),
            run: AccelRun {
                mode: Some(config.mode),
                k: config.k,
                window_len: config.window_len(),
                z: Vec::new(),
                iterates: Vec::new(),
                records: Vec::new(),
                breakdowns: Vec::new(),
                signal: None,
                stop: StopReason::MaxIterations,
                sweeps: 0,
            },
            series: Vec::new(),
        }
    }

    /// Resolves a transform outcome into `z_n` using the fallback policy; `None` means abort.
    fn resolve(
        &mut self,
        n: usize,
        outcome: Result<Vec<T>>,
        newest: &[T],
    ) -> Result<Option<(Vec<T>, bool)>> {
        match outcome {
            Ok(z) => Ok(Some((z, false))),
            Err(Error::Breakdown(b)) => {
                self.run.breakdowns.push((n, b));
                let z = match self.config.fallback {
                    Fallback::PreviousZ => self
                        .run
                        .z
                        .last()
                        .cloned()
                        .unwrap_or_else(|| newest.to_vec()),
                    Fallback::LastIterate => newest.to_vec(),
                    Fallback::Abort => {
                        self.run.records.push(RunRecord {
                            n,
                            breakdown: true,
                            ..RunRecord::default()
                        });
                        self.run.stop = StopReason::Breakdown(n);
                        return Ok(None);
                    }
                };
                Ok(Some((z, true)))
            }
            Err(e) => Err(e),
        }
    }

    /// Stores `z_n` and its record; `newest`/`previous` are the last two iterates read.
    fn push(
        &mut self,
        n: usize,
        z: Vec<T>,
        breakdown: bool,
        err_ref: Option<f64>,
        newest: &[T],
        previous: &[T],
    ) -> Next {
        let err_z = err(self.system, &z);
        let dz = self
            .run
            .z
            .last()
            .map(|prev| vecops::dist(prev, &z).to_f64_lossy());
        let dx = vecops::dist(newest, previous).to_f64_lossy();
        let stop_ratio = ratio(dz, Some(dx));
        self.run.records.push(RunRecord {
            n,
            err_z,
            err_kacz_ref: err_ref,
            err_ratio: ratio(err_z, err_ref),
            dz_norm: dz,
            stop_ratio,
            breakdown,
        });
        let residual = match self.config.residual_tol {
            Some(_) => vecops::norm(&self.system.residual(&z)).to_f64_lossy(),
            None => f64::INFINITY,
        };
        self.run.z.push(z);

        if n > 0 {
            let mode = self.config.mode;
            let value = match mode {
                Mode::Ak => stop_ratio,
                Mode::Rk => dz,
            };
            self.series.push(value.unwrap_or(f64::NAN));
            let rule = &self.config.stop_rule;
            let idx = self.series.len() - 1;
            if self.run.signal.is_none()
                && fires_at(mode, &self.series, idx, rule, rule.smallness * self.bnorm)
            {
                self.run.signal = Some(n);
                if self.config.stop_on_signal {
                    self.run.stop = StopReason::Signal(n);
                    return Next::Stop;
                }
            }
        }
        if let Some(tol) = self.config.residual_tol {
            if residual <= tol * self.bnorm {
                self.run.stop = StopReason::Converged(n);
                return Next::Stop;
            }
        }
        Next::Continue
    }
}

/// Accelerated Kaczmarz: `z_n = y_k^{(n)}` over `x_n .. x_{n+l}` of an unmodified Kaczmarz
/// sequence, one new sweep per new `z` after the first `l`.
pub fn ak_run<T: Scalar>(
    system: &LinearSystem<T>,
    x0: &[T],
    config: &AccelConfig<T>,
) -> Result<AccelRun<T>> {
    config.validate()?;
    check_len(system.order(), x0)?;
    if config.mode != Mode::Ak {
        return Err(Error::Config("ak_run needs mode AK".into()));
    }
    let ell = config.window_len();
    let mut rec = Recorder::new(system, config);
    let mut xs: Vec<Vec<T>> = vec![x0.to_vec()];
    let mut table = epsilon_kind(&config.kind).map(|ek| EpsilonTable::new(ek, config.k));
    let mut last_breakdown: Option<Breakdown> = None;
    if let Some(t) = table.as_mut() {
        if let Err(b) = t.extend(x0) {
            last_breakdown = Some(b);
        }
    }
    let mut sweeps = 0;
    for n in 0..=config.max_outer {
        while xs.len() < n + ell + 1 {
            let mut x = xs.last().unwrap().clone();
            sweep_in_place(system, &mut x, None);
            sweeps += 1;
            if let Some(t) = table.as_mut() {
                if let Err(b) = t.extend(&x) {
                    last_breakdown = Some(b);
                }
            }
            xs.push(x);
        }
        let outcome = match table.as_ref() {
            Some(t) => match t.even(config.k) {
                Some(v) => finite_or_breakdown(v.to_vec()),
                None => Err(last_breakdown
                    .clone()
                    .unwrap_or(Breakdown {
                        site: BreakdownSite::EpsilonCell {
                            column: 2 * config.k,
                            row: n,
                        },
                        denominator: 0.0,
                    })
                    .into()),
            },
            None => transform(&config.kind, &xs[n..=n + ell], n, config),
        };
        let newest = &xs[n + ell];
        let Some((z, broke)) = rec.resolve(n, outcome, newest)? else {
            break;
        };
        let err_ref = err(system, newest);
        let previous = &xs[n + ell - 1];
        if let Next::Stop = rec.push(n, z, broke, err_ref, newest, previous) {
            break;
        }
    }
    rec.run.sweeps = sweeps;
    rec.run.iterates = vec![xs];
    Ok(rec.run)
}

/// Restarted Kaczmarz: `l` sweeps from the restart point, `z_n = y_k^{(0)}` of those `l + 1`
/// vectors, restart from `z_n`.
pub fn rk_run<T: Scalar>(
    system: &LinearSystem<T>,
    x0: &[T],
    config: &AccelConfig<T>,
) -> Result<AccelRun<T>> {
    config.validate()?;
    check_len(system.order(), x0)?;
    if config.mode != Mode::Rk {
        return Err(Error::Config("rk_run needs mode RK".into()));
    }
    let ell = config.window_len();
    let mut rec = Recorder::new(system, config);
    let mut reference = PlainReference::new(system, x0);
    let mut windows: Vec<Vec<Vec<T>>> = Vec::new();
    let mut start = x0.to_vec();
    let mut sweeps = 0;
    for n in 0..=config.max_outer {
        let kind = if config.lanczos {
            TransformKind::Topological {
                y: system.residual(&start),
            }
        } else {
            config.kind.clone()
        };
        let mut window = Vec::with_capacity(ell + 1);
        window.push(start.clone());
        for _ in 0..ell {
            let mut x = window.last().unwrap().clone();
            sweep_in_place(system, &mut x, None);
            window.push(x);
        }
        sweeps += ell;
        let outcome = transform(&kind, &window, 0, config);
        let resolved = rec.resolve(n, outcome, &window[ell])?;
        let err_ref = reference.error_at((n + 1) * (ell + 1));
        let next = resolved
            .map(|(z, broke)| rec.push(n, z, broke, err_ref, &window[ell], &window[ell - 1]));
        windows.push(window);
        match next {
            None | Some(Next::Stop) => break,
            Some(Next::Continue) => start = rec.run.z.last().unwrap().clone(),
        }
    }
    rec.run.sweeps = sweeps;
    rec.run.iterates = windows;
    Ok(rec.run)
}

/// Non-restarted Kaczmarz from the RK start vector, advanced on demand; keeps error norms only.
struct PlainReference<'a, T> {
    system: &'a LinearSystem<T>,
    x: Vec<T>,
    errors: Vec<Option<f64>>,
}

impl<'a, T: Scalar> PlainReference<'a, T> {
    fn new(system: &'a LinearSystem<T>, x0: &[T]) -> Self {
        PlainReference {
            system,
            x: x0.to_vec(),
            errors: vec![err(system, x0)],
        }
    }

    fn error_at(&mut self, m: usize) -> Option<f64> {
        while self.errors.len() <= m {
            sweep_in_place(self.system, &mut self.x, None);
            self.errors.push(err(self.system, &self.x));
        }
        self.errors[m]
    }
}

/// Dispatches on `config.mode`.
pub fn accel_run<T: Scalar>(
    system: &LinearSystem<T>,
    x0: &[T],
    config: &AccelConfig<T>,
) -> Result<AccelRun<T>> {
    match config.mode {
        Mode::Ak => ak_run(system, x0, config),
        Mode::Rk => rk_run(system, x0, config),
    }
}

/// Plain Kaczmarz with `max_sweeps` sweeps, in the run format (`z_n = x_n`, ratio 1).
pub fn plain_run<T: Scalar>(
    system: &LinearSystem<T>,
    x0: &[T],
    max_sweeps: usize,
) -> Result<AccelRun<T>> {
    let trace = iterate(system, x0, max_sweeps, T::zero())?;
    let records: Vec<RunRecord> = trace
        .iterates
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let e = err(system, x);
            RunRecord {
                n,
                err_z: e,
                err_kacz_ref: e,
                err_ratio: ratio(e, e),
                dz_norm: (n > 0).then(|| vecops::dist(x, &trace.iterates[n - 1]).to_f64_lossy()),
                stop_ratio: None,
                breakdown: false,
            }
        })
        .collect();
    let stop = if trace.converged {
        StopReason::Converged(trace.sweeps())
    } else {
        StopReason::MaxIterations
    };
    Ok(AccelRun {
        mode: None,
        k: 0,
        window_len: 0,
        z: trace.iterates.clone(),
        sweeps: trace.sweeps(),
        iterates: vec![trace.iterates],
        records,
        breakdowns: Vec::new(),
        signal: None,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kaczmarz::sweeps;
    use crate::linalg::{build_gallery, DenseMatrix, GalleryKind, RowMatrix};
    use crate::transforms::k1_closed_form;

    fn small() -> LinearSystem<f64> {
        build_gallery::<f64>(GalleryKind::Lesp, 12)
            .unwrap()
            .precondition_rows()
            .unwrap()
    }

    #[test]
    fn ak_mpe_k1_matches_closed_form() {
        let s = small();
        let cfg = AccelConfig::new(TransformKind::Mpe, 1, Mode::Ak).with_max_outer(6);
        let run = ak_run(&s, &[0.0; 12], &cfg).unwrap();
        let xs = &run.iterates[0];
        for (n, z) in run.z.iter().enumerate() {
            let y = k1_closed_form(&TransformKind::Mpe, &xs[n], &xs[n + 1], &xs[n + 2]).unwrap();
            assert!(vecops::dist(z, &y) <= 1e-11 * vecops::norm(&y));
        }
    }

    #[test]
    fn ak_leaves_kaczmarz_sequence_untouched() {
        let s = small();
        let cfg = AccelConfig::new(TransformKind::VectorEpsilon, 2, Mode::Ak).with_max_outer(5);
        let run = ak_run(&s, &[0.0; 12], &cfg).unwrap();
        let plain = sweeps(&s, &[0.0; 12], run.sweeps).unwrap();
        assert_eq!(run.iterates[0], plain);
        assert_eq!(run.z.len(), 6);
        assert_eq!(run.sweeps, 5 + 4);
    }

    #[test]
    fn rk_windows_have_l_sweeps() {
        let s = small();
        let cfg = AccelConfig::new(TransformKind::Rre, 2, Mode::Rk).with_max_outer(3);
        let run = rk_run(&s, &[0.0; 12], &cfg).unwrap();
        assert_eq!(run.iterates.len(), 4);
        for (n, w) in run.iterates.iter().enumerate() {
            assert_eq!(w.len(), 4);
            let start = if n == 0 {
                vec![0.0; 12]
            } else {
                run.z[n - 1].clone()
            };
            assert_eq!(w, &sweeps(&s, &start, 3).unwrap());
        }
    }

    #[test]
    fn exact_kernel_terminates_immediately() {
        // For N = 2, Q has rank one, so after one sweep the error is an eigenvector of Q and
        // the sequence lies in the kernel of every order-1 transform.
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        let s = LinearSystem::with_solution(RowMatrix::dense(a).unwrap(), vec![1.0, 2.0]).unwrap();
        let x1 = crate::kaczmarz::sweep(&s, &[0.0, 0.0]).unwrap();
        let cfg = AccelConfig::new(TransformKind::Mpe, 1, Mode::Rk).with_residual_tol(1e-14);
        let run = rk_run(&s, &x1, &cfg).unwrap();
        assert_eq!(run.stop, StopReason::Converged(0));
        assert!(s.error_norm(&run.z[0]).unwrap() <= 1e-14);
    }

    #[test]
    fn abort_policy_stops() {
        let s = small();
        let x = s.solution().unwrap().to_vec();
        let cfg = AccelConfig::new(TransformKind::Topological { y: vec![0.0; 12] }, 1, Mode::Rk)
            .with_fallback(Fallback::Abort);
        let run = rk_run(&s, &vecops::add(&x, &[1.0; 12]), &cfg).unwrap();
        assert_eq!(run.stop, StopReason::Breakdown(0));
        assert_eq!(run.breakdowns.len(), 1);
    }

    #[test]
    fn plain_run_with_zero_sweeps() {
        let s = small();
        let run = plain_run(&s, &[0.0; 12], 0).unwrap();
        assert_eq!(run.records.len(), 1);
    }

    #[test]
    fn wrong_mode_rejected() {
        let s = small();
        let cfg = AccelConfig::new(TransformKind::Mpe, 1, Mode::Rk);
        assert!(matches!(
            ak_run(&s, &[0.0; 12], &cfg),
            Err(Error::Config(_))
        ));
    }
}
