//! The Evens-Lu bivector.
//!
//! At a representative `u` of `uK` the bivector is the skew map
//! `Ω_u(X) = {Ad(u⁻¹) H Ad(u) X}_{i𝔭}` on `i𝔭`, paired through the trace form:
//! `π([u,X],[u,Y]) = tr(Ω_u(X) Y)`.

pub mod group;
pub mod jacobi;
pub mod local;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lie::{hilbert_transform, proj_u, trace_form};
use crate::linalg::{CMatrix, I};
use crate::symspace::SymmetricSpace;

pub use group::{pi_el_group, pi_lw_group};
pub use jacobi::{jacobi_residual, CoordBivector};
pub use local::{cp1_family, cp2_symplectic, cpn_coeffs, fothlu_w_chart, grassmann_local_pi};

/// Imaginary residue tolerated in `tr(Ω_u(X) Y)`, relative to `max(1, ‖X‖‖Y‖)`.
pub const IMAG_TOL: f64 = 1e-10;

/// `Ω_u(X)` without validating `X`.
pub fn omega_raw(space: &SymmetricSpace, u: &CMatrix, x: &CMatrix) -> CMatrix {
    let ui = u.adjoint();
    space.project_ip(&(&ui * hilbert_transform(&(u * x * &ui)) * u))
}

/// `Ω_u(X)`; `u` is any unitary representative of the coset.
pub fn omega_apply(space: &SymmetricSpace, u: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    space.validate_tangent(x)?;
    Ok(omega_raw(space, u, x))
}

/// `π([u,X],[u,Y]) = tr(Ω_u(X) Y)`.
pub fn pi_eval(space: &SymmetricSpace, u: &CMatrix, x: &CMatrix, y: &CMatrix) -> Result<f64> {
    space.validate_tangent(y)?;
    let value = trace_form(&omega_apply(space, u, x)?, y);
    let scale = (x.norm() * y.norm()).max(1.0);
    if value.im.abs() > IMAG_TOL * scale {
        return Err(Error::InvalidTangent { residual: value.im.abs() });
    }
    Ok(value.re)
}

/// `Ω_u` as a real matrix in the orthonormal basis of `i𝔭`:
/// column `b` holds the coordinates of `Ω_u(e_b)`.
#[derive(Debug, Clone)]
pub struct BivectorOperator {
    pub u: CMatrix,
    pub matrix: DMatrix<f64>,
}

impl BivectorOperator {
    pub fn new(space: &SymmetricSpace, u: &CMatrix) -> Self {
        let basis = space.ip_basis();
        let d = basis.len();
        let mut matrix = DMatrix::zeros(d, d);
        for (b, e) in basis.iter().enumerate() {
            let image = omega_raw(space, u, e);
            for (a, coord) in space.ip_coords(&image).into_iter().enumerate() {
                matrix[(a, b)] = coord;
            }
        }
        Self { u: u.clone(), matrix }
    }

    /// `‖M + Mᵀ‖_max`; the basis Gram matrix is the identity.
    pub fn skew_residual(&self) -> f64 {
        (&self.matrix + self.matrix.transpose()).amax()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.matrix.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.singular_values().iter().filter(|&&s| s > tol).count()
    }
}

/// Leaf dimension at `uK`: numerical rank of `Ω_u`.
pub fn pi_rank(space: &SymmetricSpace, u: &CMatrix, tol: f64) -> usize {
    BivectorOperator::new(space, u).rank(tol)
}

/// Columns `{Ad(u⁻¹) pr_𝔲(i Ad(u) X)}_{i𝔭}` over the basis `X` of `i𝔭`, the
/// tangent directions of the `G₀`-orbit through `uK`.
pub fn orbit_tangent_matrix(space: &SymmetricSpace, u: &CMatrix) -> DMatrix<f64> {
    let basis = space.ip_basis();
    let d = basis.len();
    let ui = u.adjoint();
    let mut out = DMatrix::zeros(d, d);
    for (b, x) in basis.iter().enumerate() {
        let z = (u * x * &ui).map(|v| v * I);
        let image = space.project_ip(&(&ui * proj_u(&z) * u));
        for (a, coord) in space.ip_coords(&image).into_iter().enumerate() {
            out[(a, b)] = coord;
        }
    }
    out
}

/// Orthonormal basis of the column span, rank decided at `tol` relative to the
/// largest singular value.
pub fn column_span(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let cols: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > tol * top.max(1.0)).collect();
    DMatrix::from_fn(m.nrows(), cols.len(), |r, c| u[(r, cols[c])])
}

/// Largest principal angle between two subspaces given by orthonormal bases
/// of equal dimension; `None` when the dimensions differ.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<f64> {
    if a.ncols() != b.ncols() {
        return None;
    }
    if a.ncols() == 0 {
        return Some(0.0);
    }
    let cross = a.transpose() * b;
    let s = cross.svd(false, false).singular_values;
    let smallest = s.iter().fold(f64::INFINITY, |acc, &x| acc.min(x));
    // arcsin of the residual is accurate for tiny angles where arccos is not
    let residual = (b - a * (a.transpose() * b)).norm();
    Some(smallest.min(1.0).acos().min(residual.min(1.0).asin()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs};
    use crate::sample;

    #[test]
    fn omega_at_identity_is_hilbert_on_grassmannian() {
        let space = SymmetricSpace::grassmannian(2, 2);
        for x in space.ip_basis() {
            let o = omega_apply(&space, &identity(4), &x).unwrap();
            assert!(max_abs(&(o - hilbert_transform(&x))) < 1e-15);
        }
    }

    #[test]
    fn operator_is_skew_and_equivariant() {
        let mut rng = sample::rng(11);
        for space in [SymmetricSpace::grassmannian(2, 1), SymmetricSpace::group_case(2)] {
            let u = sample::group_element(&space, &mut rng);
            let op = BivectorOperator::new(&space, &u);
            assert!(op.skew_residual() < 1e-13);
            let k = sample::k_element(&space, &mut rng);
            let x = sample::ip_element(&space, &mut rng);
            let y = sample::ip_element(&space, &mut rng);
            let a = pi_eval(&space, &u, &x, &y).unwrap();
            let ki = k.adjoint();
            let b = pi_eval(&space, &(&u * &k), &(&ki * &x * &k), &(&ki * &y * &k)).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} {b}");
            assert!(pi_eval(&space, &u, &x, &x).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn cp1_origin_is_nondegenerate() {
        let space = SymmetricSpace::projective(1);
        let op = BivectorOperator::new(&space, &identity(2));
        assert!(op.matrix.determinant().abs() > 0.5);
        assert_eq!(op.rank(1e-9), 2);
    }

    #[test]
    fn principal_angle_of_identical_spans() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 1.0, 1.0]);
        let a = column_span(&m, 1e-12);
        assert_eq!(a.ncols(), 2);
        assert!(max_principal_angle(&a, &a).unwrap() < 1e-12);
    }
}
