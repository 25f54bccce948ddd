use crate::accel::config::{Mode, StopRule};

/// First index at which the stopping signal fires, if any.
///
/// * AK: `series` holds the ratios `||dz|| / ||dx||`; the signal fires at the first `n` whose
///   value exceeds `growth` times the minimum of the up to `window` values before it.
/// * RK: `series` holds `||dz||`; the signal fires at the first `n >= window` with
///   `series[n] <= smallness` that is no lower than the minimum of the `window` values before it
///   (stagnation or growth). `smallness` is absolute here, `StopRule::smallness * ||b||`.
pub fn stopping_signal(
    mode: Mode,
    series: &[f64],
    rule: &StopRule,
    smallness: f64,
) -> Option<usize> {
    (1..series.len()).find(|&n| fires_at(mode, series, n, rule, smallness))
}

/// Whether the signal fires at index `n`, looking only at `series[..=n]`.
pub fn fires_at(mode: Mode, series: &[f64], n: usize, rule: &StopRule, smallness: f64) -> bool {
    if n == 0 || n >= series.len() {
        return false;
    }
    let lo = n.saturating_sub(rule.window);
    let min_prev = series[lo..n].iter().copied().fold(f64::INFINITY, f64::min);
    let v = series[n];
    match mode {
        Mode::Ak => v > rule.growth * min_prev,
        Mode::Rk => n >= rule.window && v <= smallness && v >= min_prev,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decreasing_never_signals() {
        let s: Vec<f64> = (0..30).map(|n| 0.5f64.powi(n)).collect();
        let rule = StopRule::default();
        assert_eq!(stopping_signal(Mode::Ak, &s, &rule, 1.0), None);
        assert_eq!(stopping_signal(Mode::Rk, &s, &rule, 1.0), None);
    }

    #[test]
    fn stagnation_signals() {
        let rule = StopRule::default();
        let mut s: Vec<f64> = (0..8).map(|n| 10f64.powi(-2 * n)).collect();
        s.extend([1e-14; 5]);
        let idx = stopping_signal(Mode::Rk, &s, &rule, 1e-13).unwrap();
        assert_eq!(idx, 8);
        // Not yet small enough: no signal.
        assert_eq!(stopping_signal(Mode::Rk, &s, &rule, 1e-20), None);
    }

    #[test]
    fn ratio_growth_signals() {
        let rule = StopRule {
            window: 3,
            ..StopRule::default()
        };
        let s = [0.1, 0.01, 0.01, 1.0];
        assert_eq!(stopping_signal(Mode::Ak, &s, &rule, 0.0), Some(3));
        let s = [0.1, 0.01, 0.01, 0.09];
        assert_eq!(stopping_signal(Mode::Ak, &s, &rule, 0.0), None);
    }
}
