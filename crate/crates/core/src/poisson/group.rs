//! The group case `K ≅ (K × K)/Δ`: the Lu-Weinstein and Evens-Lu structures
//! on `K` itself, in right trivialization `(k, P) ↔ P k`.

use num_complex::Complex64;

use crate::lie::{hilbert_transform, trace_form};
use crate::linalg::{CMatrix, ONE, ZERO, I};
use crate::poisson::omega_raw;
use crate::symspace::{block_diag, SymmetricSpace};

fn conjugate_hilbert(k: &CMatrix, p: &CMatrix) -> CMatrix {
    let ki = k.adjoint();
    k * hilbert_transform(&(&ki * p * k)) * &ki
}

/// `⟨(Ad(k) H Ad(k⁻¹) − H)(P), Q⟩`.
pub fn pi_lw_group(k: &CMatrix, p: &CMatrix, q: &CMatrix) -> f64 {
    trace_form(&(conjugate_hilbert(k, p) - hilbert_transform(p)), q).re
}

/// `⟨(H + Ad(k) H Ad(k⁻¹))(P), Q⟩`.
pub fn pi_el_group(k: &CMatrix, p: &CMatrix, q: &CMatrix) -> f64 {
    trace_form(&(conjugate_hilbert(k, p) + hilbert_transform(p)), q).re
}

/// The Evens-Lu pairing on `GroupCase(n)` at `(k₁, k₂)`, evaluated on the
/// classes that `ψ` carries to the right-trivialized vectors `P`, `Q` at
/// `k₁ k₂⁻¹`. Agrees with [`pi_el_group`] through `ψ`.
pub fn pi_el_via_symmetric_space(k1: &CMatrix, k2: &CMatrix, p: &CMatrix, q: &CMatrix) -> f64 {
    let space = SymmetricSpace::group_case(k1.nrows());
    let u = block_diag(k1, k2);
    let lift = |m: &CMatrix| {
        let t = k1.adjoint() * m * k1;
        block_diag(&t, &(-&t))
    };
    trace_form(&omega_raw(&space, &u, &lift(p)), &lift(q)).re
}

/// `X = E₊ − E₋`, `Y = i(E₊ + E₋)`, `H = diag(i, −i)`.
pub fn su2_basis() -> [CMatrix; 3] {
    let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]);
    let y = CMatrix::from_row_slice(2, 2, &[ZERO, I, I, ZERO]);
    let h = CMatrix::from_row_slice(2, 2, &[I, ZERO, ZERO, -I]);
    [x, y, h]
}

/// `k = [[a, b], [−b̄, ā]]`.
pub fn su2_element(a: Complex64, b: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, -b.conj(), a.conj()])
}

/// Scale between a pairing `π(A, B)` on the basis of [`su2_basis`] and the
/// coefficient of `A ∧ B` in the displayed `SU(2)` bivectors.
pub const SU2_DISPLAY_SCALE: f64 = -0.5;

/// Coefficients of `(X∧Y, Y∧H, H∧X)` of the Evens-Lu structure at `k`.
pub fn su2_el_coefficients(k: &CMatrix) -> [f64; 3] {
    let [x, y, h] = su2_basis();
    [(&x, &y), (&y, &h), (&h, &x)].map(|(p, q)| SU2_DISPLAY_SCALE * pi_el_group(k, p, q))
}

/// Coefficients of `(X∧Y, Y∧H, H∧X)` of the Lu-Weinstein structure at `k`,
/// with the basis left-translated (`A ↦ k A`, i.e. `Ad(k) A` in right
/// trivialization).
pub fn su2_lw_coefficients(k: &CMatrix) -> [f64; 3] {
    let [x, y, h] = su2_basis();
    let ki = k.adjoint();
    let ad = |m: &CMatrix| k * m * &ki;
    [(&x, &y), (&y, &h), (&h, &x)].map(|(p, q)| SU2_DISPLAY_SCALE * pi_lw_group(k, &ad(p), &ad(q)))
}

/// `(1 + |a|⁴ − |b|⁴, 2 Im(ab), −2 Re(ab))`.
pub fn su2_el_closed_form(a: Complex64, b: Complex64) -> [f64; 3] {
    let ab = a * b;
    [1.0 + a.norm_sqr().powi(2) - b.norm_sqr().powi(2), 2.0 * ab.im, -2.0 * ab.re]
}

/// `(1 − |a|⁴ + |b|⁴, 2 Im(āb), −2 Re(ab̄))`.
pub fn su2_lw_closed_form(a: Complex64, b: Complex64) -> [f64; 3] {
    [
        1.0 - a.norm_sqr().powi(2) + b.norm_sqr().powi(2),
        2.0 * (a.conj() * b).im,
        -2.0 * (a * b.conj()).re,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity};

    #[test]
    fn lw_vanishes_at_identity_and_on_torus() {
        let [x, y, h] = su2_basis();
        for k in [identity(2), su2_element(Complex64::from_polar(1.0, 0.7), ZERO)] {
            for p in [&x, &y, &h] {
                for q in [&x, &y, &h] {
                    assert!(pi_lw_group(&k, p, q).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn el_at_identity() {
        let coeffs = su2_el_coefficients(&identity(2));
        assert!((coeffs[0] - 2.0).abs() < 1e-15);
        assert!(coeffs[1].abs() < 1e-15 && coeffs[2].abs() < 1e-15);
    }

    #[test]
    fn el_vanishes_when_a_is_zero() {
        let k = su2_element(ZERO, c(0.6, 0.8));
        assert!(su2_el_coefficients(&k).iter().all(|v| v.abs() < 1e-15));
    }
}
