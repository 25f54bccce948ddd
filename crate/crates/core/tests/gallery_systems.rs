mod common;

use common::*;
use kaczmarz_accel::kaczmarz::sweeps;
use kaczmarz_accel::linalg::{gallery_matrix, DenseMatrix, StorageKind};
use kaczmarz_accel::{build_gallery, GalleryKind, LinearSystemF32, NoiseSpec, RowMatrix};
use proptest::prelude::*;

/// Entry formulas evaluated independently of the library.
fn reference_entry(kind: GalleryKind, n: usize, i: usize, j: usize) -> f64 {
    let (i1, j1) = (i as i64 + 1, j as i64 + 1);
    match kind {
        GalleryKind::Parter => 1.0 / ((i1 - j1) as f64 + 0.5),
        GalleryKind::Clement => {
            if j1 == i1 + 1 {
                i1 as f64
            } else if i1 == j1 + 1 {
                (n as i64 - j1) as f64
            } else {
                0.0
            }
        }
        GalleryKind::Toeppen => match j1 - i1 {
            -2 | 2 => 1.0,
            -1 => -10.0,
            1 => 10.0,
            _ => 0.0,
        },
        GalleryKind::Lesp => {
            if i1 == j1 {
                -(2.0 * i1 as f64 + 3.0)
            } else if j1 == i1 + 1 {
                j1 as f64
            } else if i1 == j1 + 1 {
                1.0 / i1 as f64
            } else {
                0.0
            }
        }
    }
}

proptest! {
    #[test]
    fn entries_match_reference(n in 2usize..40, kind_ix in 0usize..4) {
        let kind = GalleryKind::ALL[kind_ix];
        let m = gallery_matrix::<f64>(kind, n).unwrap();
        let dense = m.to_dense();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(dense[(i, j)], reference_entry(kind, n, i, j), "({}, {})", i, j);
                prop_assert_eq!(m.get(i, j), dense[(i, j)]);
            }
            prop_assert_eq!(m.row_vector(i), dense.row(i).to_vec());
            let view = m.row(i);
            let x: Vec<f64> = (0..n).map(|j| j as f64 - 1.5).collect();
            prop_assert_eq!(view.dot(&x), dot(dense.row(i), &x));
        }
    }

    #[test]
    fn banded_and_dense_storage_agree(n in 2usize..40, kind_ix in 1usize..4, seed in any::<u64>()) {
        let kind = GalleryKind::ALL[kind_ix];
        let banded = gallery_matrix::<f64>(kind, n).unwrap();
        prop_assert_eq!(banded.storage(), StorageKind::Banded);
        let dense = RowMatrix::dense(banded.to_dense()).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(banded.get(i, j), dense.get(i, j));
            }
        }
        // same products, up to summation order
        let x = uniform_vec(&mut rng(seed), n);
        prop_assert!(dist(&banded.matvec(&x), &dense.matvec(&x)) <= 1e-12 * (1.0 + norm(&dense.matvec(&x))));
        prop_assert!(dist(&banded.matvec_transpose(&x), &dense.matvec_transpose(&x)) <= 1e-12 * (1.0 + norm(&x)) * n as f64);
    }
}

#[test]
fn generated_systems_are_consistent() {
    for kind in GalleryKind::ALL {
        for n in [2, 3, 10, 100, 1000] {
            let sys = build_gallery::<f64>(kind, n).unwrap();
            let r = norm(&sys.residual(sys.solution().unwrap()));
            assert!(r <= 1e-12 * norm(sys.rhs()), "{kind} N={n}: {r}");
        }
    }
    let sys = build_gallery::<f64>(GalleryKind::Lesp, 10000).unwrap();
    assert!(norm(&sys.residual(sys.solution().unwrap())) <= 1e-12 * norm(sys.rhs()));
}

#[test]
fn row_scaling_keeps_the_solution() {
    for (kind, n) in [
        (GalleryKind::Parter, 50),
        (GalleryKind::Toeppen, 50),
        (GalleryKind::Lesp, 50),
        (GalleryKind::Clement, 8),
    ] {
        let sys = build_gallery::<f64>(kind, n).unwrap();
        let pre = sys.precondition_rows().unwrap();
        assert!(pre.row_norms().iter().all(|&r| (r - 1.0).abs() <= 1e-14));
        let direct = |m: &RowMatrix<f64>, b: &[f64]| m.to_dense().solve(b).unwrap();
        let a = direct(sys.matrix(), sys.rhs());
        let b = direct(pre.matrix(), pre.rhs());
        assert!(dist(&a, &b) <= 1e-10 * norm(&a), "{kind}");
    }
}

#[test]
fn noise_has_the_requested_size_on_average() {
    let sys = build_gallery::<f64>(GalleryKind::Parter, 50).unwrap();
    let delta = 1e-3;
    let trials = 400;
    let mean_sq: f64 = (0..trials)
        .map(|seed| {
            let noisy = sys.add_noise(&NoiseSpec::new(delta, seed)).unwrap();
            (dist(noisy.rhs(), sys.rhs()) / (delta * norm(sys.rhs()))).powi(2)
        })
        .sum::<f64>()
        / trials as f64;
    assert!(
        (mean_sq - 1.0).abs() <= 0.05,
        "E||e||^2 / (delta ||b||)^2 = {mean_sq}"
    );
    // the clean solution is retained
    let noisy = sys.add_noise(&NoiseSpec::new(delta, 1)).unwrap();
    assert_eq!(noisy.solution(), sys.solution());
    assert_eq!(
        noisy.rhs(),
        sys.add_noise(&NoiseSpec::new(delta, 1)).unwrap().rhs()
    );
}

#[test]
fn single_precision_core() {
    let sys: LinearSystemF32 = build_gallery::<f32>(GalleryKind::Lesp, 20)
        .unwrap()
        .precondition_rows()
        .unwrap();
    let xs = sweeps(&sys, &[0.0f32; 20], 200).unwrap();
    let err = sys.relative_error(xs.last().unwrap()).unwrap();
    assert!(err < 1e-4, "{err}");
    let _ = DenseMatrix::<f32>::identity(2);
}
