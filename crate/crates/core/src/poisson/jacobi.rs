//! Finite-difference Schouten bracket of coordinate bivectors.

use nalgebra::DMatrix;

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A bivector on an open set of `R^d`, given by its coefficient matrix
/// `π^{ab}` in the coordinate basis.
pub trait CoordBivector: Sync {
    fn real_dim(&self) -> usize;
    fn real_matrix(&self, x: &[f64]) -> DMatrix<f64>;
}

/// Constant coefficients.
#[derive(Debug, Clone)]
pub struct ConstantBivector(pub DMatrix<f64>);

impl CoordBivector for ConstantBivector {
    fn real_dim(&self) -> usize {
        self.0.nrows()
    }

    fn real_matrix(&self, _x: &[f64]) -> DMatrix<f64> {
        self.0.clone()
    }
}

/// `max_{a,b,c} |Σ_d π^{da}∂_dπ^{bc} + π^{db}∂_dπ^{ca} + π^{dc}∂_dπ^{ab}|`.
pub fn jacobi_residual(bivector: &dyn CoordBivector, point: &[f64], fd_step: f64) -> f64 {
    let d = bivector.real_dim();
    assert_eq!(point.len(), d, "point has wrong dimension");
    let pi = bivector.real_matrix(point);
    let derivatives: Vec<DMatrix<f64>> = (0..d)
        .map(|k| {
            let mut plus = point.to_vec();
            let mut minus = point.to_vec();
            plus[k] += fd_step;
            minus[k] -= fd_step;
            (bivector.real_matrix(&plus) - bivector.real_matrix(&minus)) / (2.0 * fd_step)
        })
        .collect();
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut s = 0.0;
                for (k, dk) in derivatives.iter().enumerate() {
                    s += pi[(k, a)] * dk[(b, c)] + pi[(k, b)] * dk[(c, a)] + pi[(k, c)] * dk[(a, b)];
                }
                worst = worst.max(s.abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Linear;

    // π = x ∂y∧∂z + y ∂z∧∂x + z ∂x∧∂y, the Lie-Poisson structure of so(3)
    impl CoordBivector for Linear {
        fn real_dim(&self) -> usize {
            3
        }

        fn real_matrix(&self, p: &[f64]) -> DMatrix<f64> {
            DMatrix::from_row_slice(3, 3, &[0.0, p[2], -p[1], -p[2], 0.0, p[0], p[1], -p[0], 0.0])
        }
    }

    struct Broken;

    // dual to the vector field (−y, x, 1), which has v·curl v = 2
    impl CoordBivector for Broken {
        fn real_dim(&self) -> usize {
            3
        }

        fn real_matrix(&self, p: &[f64]) -> DMatrix<f64> {
            DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -p[0], -1.0, 0.0, -p[1], p[0], p[1], 0.0])
        }
    }

    #[test]
    fn constant_and_lie_poisson_pass() {
        let c = ConstantBivector(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert_eq!(jacobi_residual(&c, &[0.3, 0.1], DEFAULT_FD_STEP), 0.0);
        assert!(jacobi_residual(&Linear, &[0.3, -1.0, 2.0], DEFAULT_FD_STEP) < 1e-10);
    }

    #[test]
    fn non_poisson_is_detected() {
        assert!(jacobi_residual(&Broken, &[0.3, -1.0, 2.0], DEFAULT_FD_STEP) > 0.5);
    }
}
