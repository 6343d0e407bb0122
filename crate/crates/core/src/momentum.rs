//! Momentum map of the `T_w`-action on the leaves of a Birkhoff layer.
//!
//! `μ_X(uK) = tr(½ i θ(log|h|) X)` with `h` from [`leaf_factorize`]. The
//! pairing is the trace form, so `μ` carries the same normalization as the
//! bivector.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::lie::trace_form;
use crate::linalg::{expm_skew_hermitian, CMatrix, I};
use crate::poisson::omega_raw;
use crate::strata::{leaf_factorize, torus_tw};
use crate::symspace::{SymmetricSpace, TangentClass};

/// `μ` evaluated on the basis of `𝔱_w` returned by [`torus_tw`].
#[derive(Debug, Clone)]
pub struct MomentumValue {
    pub w: crate::linalg::SignedPermutation,
    pub basis: Vec<CMatrix>,
    pub values: Vec<f64>,
}

/// `μ_X(uK)`.
pub fn moment_eval(space: &SymmetricSpace, u: &CMatrix, x: &CMatrix, tol: f64) -> Result<f64> {
    let f = leaf_factorize(space, u, tol)?;
    let a = space.theta(&f.log_abs_h).map(|z| z * I * 0.5);
    Ok(trace_form(&a, x).re)
}

/// `μ` on every basis vector of `𝔱_w` for the layer containing `uK`.
pub fn moment_values(space: &SymmetricSpace, u: &CMatrix, tol: f64) -> Result<MomentumValue> {
    let f = leaf_factorize(space, u, tol)?;
    let a = space.theta(&f.log_abs_h).map(|z| z * I * 0.5);
    let basis = torus_tw(&f.w, space);
    let values = basis.iter().map(|x| trace_form(&a, x).re).collect();
    Ok(MomentumValue { w: f.w, basis, values })
}

/// Fundamental vector field of `X ∈ 𝔱_w` at `uK`: `[u, {−Ad(u⁻¹) X}_{i𝔭}]`.
pub fn torus_vector_field(space: &SymmetricSpace, u: &CMatrix, x: &CMatrix) -> TangentClass {
    let ui = u.adjoint();
    let v = space.project_ip(&(-(&ui * x * u)));
    TangentClass { u: u.clone(), x: v }
}

/// Details of the check `π♮(dμ_X) = X̃`.
#[derive(Debug, Clone)]
pub struct HamiltonianCheck {
    /// `dμ_X(e_b)` over the orthonormal basis of `i𝔭`.
    pub differential: Vec<f64>,
    pub pi_sharp: CMatrix,
    pub field: CMatrix,
    pub residual: f64,
}

/// `dμ_X` by central differences along `u exp(±t e_b)`, then
/// `π♮(dμ_X) = Ω_u(−Σ_b dμ_X(e_b) e_b)` compared with [`torus_vector_field`].
pub fn hamiltonian_check(
    space: &SymmetricSpace,
    u: &CMatrix,
    x: &CMatrix,
    tol: f64,
    fd_step: f64,
) -> Result<HamiltonianCheck> {
    let basis = space.ip_basis();
    let mut differential = Vec::with_capacity(basis.len());
    for e in &basis {
        let step = e.scale(fd_step);
        let plus = u * expm_skew_hermitian(&step);
        let minus = u * expm_skew_hermitian(&(-step));
        let d = (moment_eval(space, &plus, x, tol)? - moment_eval(space, &minus, x, tol)?) / (2.0 * fd_step);
        differential.push(d);
    }
    let d = space.ambient_dim();
    let dual = basis
        .iter()
        .zip(&differential)
        .fold(CMatrix::zeros(d, d), |acc, (e, &c)| acc - e.scale(c));
    let pi_sharp = omega_raw(space, u, &dual);
    let field = torus_vector_field(space, u, x).x;
    let residual = (&pi_sharp - &field).norm();
    Ok(HamiltonianCheck { differential, pi_sharp, field, residual })
}

/// `‖π♮(dμ_X) − X̃‖_F`.
pub fn hamiltonian_residual(space: &SymmetricSpace, u: &CMatrix, x: &CMatrix, tol: f64, fd_step: f64) -> Result<f64> {
    Ok(hamiltonian_check(space, u, x, tol, fd_step)?.residual)
}

/// Finite-difference derivative of `μ_X` along the flow of `X̃` itself.
pub fn moment_drift(space: &SymmetricSpace, u: &CMatrix, x: &CMatrix, tol: f64, fd_step: f64) -> Result<f64> {
    let field = torus_vector_field(space, u, x).x;
    let step = field.scale(fd_step);
    let plus = u * expm_skew_hermitian(&step);
    let minus = u * expm_skew_hermitian(&(-step));
    Ok((moment_eval(space, &plus, x, tol)? - moment_eval(space, &minus, x, tol)?) / (2.0 * fd_step))
}

/// Real matrix whose columns are `i𝔭` coordinates of `X̃` for each basis
/// vector of `𝔱_w`.
pub fn torus_field_matrix(space: &SymmetricSpace, u: &CMatrix, basis: &[CMatrix]) -> DMatrix<f64> {
    let d = space.dim_ip();
    let mut out = DMatrix::zeros(d, basis.len());
    for (k, x) in basis.iter().enumerate() {
        let coords = space.ip_coords(&torus_vector_field(space, u, x).x);
        for (a, v) in coords.into_iter().enumerate() {
            out[(a, k)] = v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, ZERO};
    use crate::symspace::{canonical_rep, column};

    fn h_cp1() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[I, ZERO, ZERO, -I])
    }

    #[test]
    fn cp1_closed_form() {
        let space = SymmetricSpace::projective(1);
        for r in [0.0, 0.2, 0.6, 0.85] {
            let z = c(r * 0.6, r * 0.8);
            let u = canonical_rep(&column(&[z]));
            let mu = moment_eval(&space, &u, &h_cp1(), 1e-9).unwrap();
            let expect = ((1.0 + r * r) / (1.0 - r * r)).ln();
            assert!((mu - expect).abs() < 1e-12, "{mu} {expect}");
        }
    }

    #[test]
    fn fixed_point_has_zero_moment_and_field() {
        let space = SymmetricSpace::projective(1);
        assert_eq!(moment_eval(&space, &identity(2), &h_cp1(), 1e-9).unwrap(), 0.0);
        let v = torus_vector_field(&space, &identity(2), &h_cp1());
        assert!(v.x.norm() < 1e-15);
    }

    #[test]
    fn cp1_hamiltonian() {
        let space = SymmetricSpace::projective(1);
        let u = canonical_rep(&column(&[c(0.3, -0.5)]));
        let r = hamiltonian_residual(&space, &u, &h_cp1(), 1e-9, 1e-5).unwrap();
        assert!(r < 1e-6, "{r}");
    }
}
