//! Explicit `k = 1` formulas.

use crate::error::{Breakdown, BreakdownSite, Error, Result};
use crate::scalar::{vecops, Scalar};
use crate::transforms::epsilon::BREAKDOWN_TOL;
use crate::transforms::kind::TransformKind;

fn ratio<T: Scalar>(num: T, p: &[T], q: &[T]) -> Result<T> {
    let den = vecops::dot(p, q);
    let scale = vecops::norm(p) * vecops::norm(q);
    if !(den.abs() > T::of(BREAKDOWN_TOL) * scale) || !den.is_finite() {
        return Err(Breakdown {
            site: BreakdownSite::ClosedForm,
            denominator: den.to_f64_lossy(),
        }
        .into());
    }
    Ok(num / den)
}

fn inv<T: Scalar>(u: &[T]) -> Result<Vec<T>> {
    let c = ratio(T::one(), u, u)?;
    Ok(vecops::scale(c, u))
}

/// `y_1^{(n)}` from `x_n, x_{n+1}, x_{n+2}`:
/// * MMPE, topological: `x_n - (y, dx_n) / (y, d2x_n) dx_n`
/// * MPE: `x_n - (dx_n, dx_n) / (dx_n, d2x_n) dx_n`
/// * RRE: `x_n - (d2x_n, dx_n) / (d2x_n, d2x_n) dx_n`
/// * vector epsilon: `x_{n+1} + inv(e_1^{(n+1)} - e_1^{(n)})` with `e_1^{(n)} = inv(dx_n)` and
///   `inv(u) = u / (u, u)`
pub fn k1_closed_form<T: Scalar>(
    kind: &TransformKind<T>,
    x0: &[T],
    x1: &[T],
    x2: &[T],
) -> Result<Vec<T>> {
    let dx0 = vecops::sub(x1, x0);
    let dx1 = vecops::sub(x2, x1);
    let d2x = vecops::sub(&dx1, &dx0);
    let step = |c: T| {
        let mut y = x0.to_vec();
        vecops::axpy(-c, &dx0, &mut y);
        y
    };
    match kind {
        TransformKind::Mmpe { aux } => {
            let y = aux
                .first()
                .ok_or_else(|| Error::Config("MMPE needs an auxiliary vector".into()))?;
            Ok(step(ratio(vecops::dot(y, &dx0), y, &d2x)?))
        }
        TransformKind::Topological { y } => Ok(step(ratio(vecops::dot(y, &dx0), y, &d2x)?)),
        TransformKind::Mpe => Ok(step(ratio(vecops::dot(&dx0, &dx0), &dx0, &d2x)?)),
        TransformKind::Rre => Ok(step(ratio(vecops::dot(&d2x, &dx0), &d2x, &d2x)?)),
        TransformKind::VectorEpsilon => {
            let e0 = inv(&dx0)?;
            let e1 = inv(&dx1)?;
            Ok(vecops::add(x1, &inv(&vecops::sub(&e1, &e0))?))
        }
        TransformKind::ScalarEpsilon => Err(Error::Config(
            "no closed form is defined for the scalar epsilon kind".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> [Vec<f64>; 3] {
        [vec![1.0, 2.0], vec![0.5, 1.0], vec![0.25, 0.5]]
    }

    #[test]
    fn geometric_window_is_solved() {
        let [a, b, c] = window();
        for kind in [
            TransformKind::Mpe,
            TransformKind::Rre,
            TransformKind::VectorEpsilon,
            TransformKind::Topological { y: vec![0.3, -1.0] },
            TransformKind::Mmpe {
                aux: vec![vec![1.0, 1.0]],
            },
        ] {
            let y = k1_closed_form(&kind, &a, &b, &c).unwrap();
            assert!(vecops::norm(&y) <= 1e-15, "{kind:?}: {y:?}");
        }
    }

    #[test]
    fn vector_epsilon_by_hand() {
        // dx_0 = (-1, 0), dx_1 = (0, -1): e_1^{(0)} = (-1, 0), e_1^{(1)} = (0, -1),
        // difference (1, -1), inverse (0.5, -0.5), y = (0, 1) + (0.5, -0.5).
        let y = k1_closed_form(
            &TransformKind::VectorEpsilon,
            &[1.0, 1.0],
            &[0.0, 1.0],
            &[0.0, 0.0],
        )
        .unwrap();
        assert_eq!(y, vec![0.5, 0.5]);
    }

    #[test]
    fn zero_denominator_breaks_down() {
        let r = k1_closed_form(&TransformKind::Mpe, &[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]);
        assert!(matches!(r, Err(Error::Breakdown(_))));
    }
}
