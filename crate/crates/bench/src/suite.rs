//! Several transforms on one matrix, merged into one wide table keyed on `n`.

use std::collections::BTreeSet;

use kaczmarz_accel::accel::fmt_opt;
use kaczmarz_accel::{Error, Result};

use crate::config::{ExperimentConfig, RunMode};
use crate::experiment::{run_experiment, ExperimentResult};

const COLUMNS: [&str; 3] = ["err_z", "err_kacz_ref", "breakdown_flag"];

pub fn label(cfg: &ExperimentConfig) -> String {
    match cfg.mode {
        RunMode::Plain => "plain".into(),
        RunMode::Accel(_) => format!("{}_k{}", cfg.transform, cfg.k),
    }
}

/// Runs every configuration and joins their records on `n`.
///
/// All entries must share matrix, size and mode. Missing values are left empty.
pub fn compare_suite(configs: &[ExperimentConfig]) -> Result<String> {
    if let Some(first) = configs.first() {
        for c in &configs[1..] {
            if c.matrix != first.matrix || c.size != first.size || c.mode != first.mode {
                return Err(Error::Config(
                    "suite entries must share matrix, size and mode".into(),
                ));
            }
        }
    }
    let results = configs
        .iter()
        .map(run_experiment)
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(&results))
}

pub fn merge(results: &[ExperimentResult]) -> String {
    let mut out = String::from("n");
    for r in results {
        let l = label(&r.config);
        for c in COLUMNS {
            out.push_str(&format!(",{l}_{c}"));
        }
    }
    out.push('\n');
    let ns: BTreeSet<usize> = results
        .iter()
        .flat_map(|r| r.records.iter().map(|rec| rec.n))
        .collect();
    for n in ns {
        out.push_str(&n.to_string());
        for r in results {
            match r.records.iter().find(|rec| rec.n == n) {
                Some(rec) => out.push_str(&format!(
                    ",{},{},{}",
                    fmt_opt(rec.err_z),
                    fmt_opt(rec.err_kacz_ref),
                    u8::from(rec.breakdown)
                )),
                None => out.push_str(",,,"),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kaczmarz_accel::{GalleryKind, TransformTag};

    fn small(tag: TransformTag, k: usize, max_iter: usize) -> ExperimentConfig {
        ExperimentConfig {
            matrix: GalleryKind::Parter,
            size: 12,
            transform: tag,
            k,
            max_iter,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn empty_suite_is_header_only() {
        assert_eq!(compare_suite(&[]).unwrap(), "n\n");
    }

    #[test]
    fn ragged_runs_leave_gaps() {
        let csv = compare_suite(&[
            small(TransformTag::Mpe, 1, 2),
            small(TransformTag::Rre, 2, 4),
        ])
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "n,mpe_k1_err_z,mpe_k1_err_kacz_ref,mpe_k1_breakdown_flag,rre_k2_err_z,rre_k2_err_kacz_ref,rre_k2_breakdown_flag"
        );
        assert_eq!(lines.len(), 6);
        assert!(lines[5].starts_with("4,,,,"));
        assert!(lines.iter().all(|l| l.split(',').count() == 7));
    }

    #[test]
    fn mixed_matrices_are_rejected() {
        let mut other = small(TransformTag::Mpe, 1, 2);
        other.matrix = GalleryKind::Lesp;
        assert!(matches!(
            compare_suite(&[small(TransformTag::Mpe, 1, 2), other]),
            Err(Error::Config(_))
        ));
    }
}
