//! Birkhoff layers of `X = U/K` through the Cartan embedding.
//!
//! `φ(uK)` satisfies `τ(φ) = φ` for the anti-automorphism `τ(g) = θ(g*)`.
//! On a layer `Σ_w` it factors as `φ = ℓ ŵ h τ(ℓ)` with `ℓ ∈ N⁻`; the diagonal
//! `|h|` feeds the momentum map.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    birkhoff_factor, classify_pivot, identity, max_abs, real_diag, CMatrix, PivotDecision, SignedPermutation, ZERO,
};
use crate::symspace::SymmetricSpace;

/// Largest `m + n` for which sign patterns are enumerated.
pub const ORDER_TWO_GUARD: usize = 12;

/// Threshold for the nullspace defining `𝔱_w`.
pub const TORUS_NULL_TOL: f64 = 1e-10;

/// `φ(uK) = l · ŵ · h · θ(l*)`.
#[derive(Debug, Clone)]
pub struct LeafFactorization {
    pub l: CMatrix,
    pub w: SignedPermutation,
    /// Monomial matrix with the pattern of `w`. On the identity layer of a
    /// Grassmannian this is `Ŵ = I`; on lower layers it carries the unit
    /// phases of the middle factor, so that `h` is positive.
    pub w_hat: CMatrix,
    pub h: CMatrix,
    pub abs_h: CMatrix,
    pub log_abs_h: CMatrix,
}

impl LeafFactorization {
    pub fn reconstruct(&self, space: &SymmetricSpace) -> CMatrix {
        &self.l * &self.w_hat * &self.h * space.tau(&self.l)
    }

    /// `‖θ(Ŵ⁻¹ h Ŵ) − h*‖`, zero when `h ∈ exp(ker{Ad(w)σ|_𝔥 + 1})`.
    pub fn membership_residual(&self, space: &SymmetricSpace) -> f64 {
        let w = self.w.to_matrix();
        let conj = w.transpose() * &self.h * &w;
        max_abs(&(space.theta(&conj) - self.h.adjoint()))
    }

    pub fn log_abs_h_diagonal(&self) -> Vec<f64> {
        self.log_abs_h.diagonal().iter().map(|z| z.re).collect()
    }
}

/// Weyl element of the Birkhoff cell containing `φ(uK)`.
pub fn birkhoff_layer(space: &SymmetricSpace, u: &CMatrix, tol: f64) -> Result<SignedPermutation> {
    Ok(birkhoff_factor(&space.cartan_embed(u), tol)?.w)
}

fn from_middle(l: CMatrix, w: SignedPermutation, w_hat: CMatrix, h: CMatrix) -> LeafFactorization {
    let abs: Vec<f64> = h.diagonal().iter().map(|z| z.norm()).collect();
    let logs: Vec<f64> = abs.iter().map(|x| x.ln()).collect();
    LeafFactorization { l, w, w_hat, h, abs_h: real_diag(&abs), log_abs_h: real_diag(&logs) }
}

/// Factors `φ(uK)` on its Birkhoff layer.
pub fn leaf_factorize(space: &SymmetricSpace, u: &CMatrix, tol: f64) -> Result<LeafFactorization> {
    let phi = space.cartan_embed(u);
    let asym = max_abs(&(space.tau(&phi) - &phi));
    if asym > tol {
        return Err(Error::SymmetryViolation { residual: asym });
    }
    let f = birkhoff_factor(&phi, tol)?;
    if f.w.is_identity() || matches!(space, SymmetricSpace::GroupCase { .. }) {
        let expected = space.tau(&f.l);
        let residual = max_abs(&(&f.u_plus - &expected));
        let scale = (max_abs(&f.l) * max_abs(&f.u_plus)).max(1.0);
        if residual > tol * scale {
            return Err(Error::SymmetryViolation { residual });
        }
        let w_hat = f.w.to_matrix();
        return Ok(from_middle(f.l, f.w, w_hat, f.h));
    }
    let (l, middle, rows) = congruence_eliminate(space, &phi, tol)?;
    let n = phi.nrows();
    let perm: Vec<usize> = {
        let mut p = vec![0; n];
        for (col, &row) in rows.iter().enumerate() {
            p[row] = col;
        }
        p
    };
    let w = SignedPermutation::from_permutation(perm);
    // both eliminations read the same rank pattern; disagreement means a
    // pivot sat close enough to the threshold to be decided differently
    if w != f.w {
        return Err(Error::StratumAmbiguous { step: 0, magnitude: 0.0, tol });
    }
    let mut w_hat = CMatrix::zeros(n, n);
    let mut h = vec![0.0; n];
    for (col, &row) in rows.iter().enumerate() {
        let p = middle[(row, col)];
        h[col] = p.norm();
        w_hat[(row, col)] = p / p.norm();
    }
    Ok(from_middle(l, w, w_hat, real_diag(&h)))
}

fn j_sign(space: &SymmetricSpace, a: usize) -> f64 {
    match *space {
        SymmetricSpace::Grassmannian { m, .. } => {
            if a < m {
                1.0
            } else {
                -1.0
            }
        }
        SymmetricSpace::GroupCase { .. } => unreachable!("group case uses the canonical factorization"),
    }
}

/// `A ← E A τ(E)` with `E = I − f e_i e_sᵀ`, and `ℓ ← ℓ E⁻¹`.
fn congruence_step(space: &SymmetricSpace, a: &mut CMatrix, l: &mut CMatrix, i: usize, s: usize, f: Complex64) {
    let n = a.nrows();
    for col in 0..n {
        let t = a[(s, col)];
        a[(i, col)] -= f * t;
    }
    let g = f.conj() * (j_sign(space, i) * j_sign(space, s));
    for row in 0..n {
        let t = a[(row, s)];
        a[(row, i)] -= g * t;
    }
    for row in 0..n {
        let t = l[(row, i)];
        l[(row, s)] += f * t;
    }
}

fn topmost_pivot(a: &CMatrix, col: usize, used: &[bool], tol: f64) -> Result<usize> {
    for r in (0..a.nrows()).filter(|&r| !used[r]) {
        let mag = a[(r, col)].norm();
        match classify_pivot(mag, tol) {
            PivotDecision::Zero => continue,
            PivotDecision::Ambiguous => return Err(Error::StratumAmbiguous { step: col, magnitude: mag, tol }),
            PivotDecision::NonZero => return Ok(r),
        }
    }
    Err(Error::SingularInput(format!("column {col} has no pivot above tolerance")))
}

/// `τ`-symmetric elimination `φ = ℓ M τ(ℓ)` with `M` monomial. Returns
/// `(ℓ, M, rows)` where `rows[c]` is the row of the nonzero entry of column `c`.
fn congruence_eliminate(space: &SymmetricSpace, phi: &CMatrix, tol: f64) -> Result<(CMatrix, CMatrix, Vec<usize>)> {
    let n = phi.nrows();
    let mut a = phi.clone();
    let mut l = identity(n);
    let mut used = vec![false; n];
    let mut rows = vec![usize::MAX; n];
    for c in 0..n {
        if used[c] {
            continue;
        }
        let r = topmost_pivot(&a, c, &used, tol)?;
        if r == c {
            let p = a[(c, c)];
            used[c] = true;
            rows[c] = c;
            for i in (c + 1)..n {
                if !used[i] && a[(i, c)] != ZERO {
                    let f = a[(i, c)] / p;
                    congruence_step(space, &mut a, &mut l, i, c, f);
                }
            }
            clear_cross(&mut a, c, c);
        } else {
            let p = a[(r, c)];
            for i in (r + 1)..n {
                if !used[i] && a[(i, c)] != ZERO {
                    let f = a[(i, c)] / p;
                    congruence_step(space, &mut a, &mut l, i, r, f);
                }
            }
            clear_cross(&mut a, c, r);
            let q = a[(c, r)];
            for i in (c + 1)..n {
                if used[i] || i == c || a[(i, r)] == ZERO {
                    continue;
                }
                let f = if i == r { a[(r, r)] / (q * 2.0) } else { a[(i, r)] / q };
                congruence_step(space, &mut a, &mut l, i, c, f);
            }
            clear_cross(&mut a, r, c);
            used[c] = true;
            used[r] = true;
            rows[c] = r;
            rows[r] = c;
        }
    }
    Ok((l, a, rows))
}

/// Once column `c` holds a single pivot in row `r`, `τ`-symmetry puts the only
/// entry of row `c` in column `r`; rounding residue elsewhere is dropped.
fn clear_cross(a: &mut CMatrix, c: usize, r: usize) {
    for k in 0..a.nrows() {
        if k != r {
            a[(k, c)] = ZERO;
            a[(c, k)] = ZERO;
        }
    }
}

/// Real basis of `𝔱_w`, the fixed space of `Ad(Ŵ) ∘ θ` on `𝔱`, in reduced
/// row-echelon form over the coroot basis.
pub fn torus_tw(w: &SignedPermutation, space: &SymmetricSpace) -> Vec<CMatrix> {
    let basis = space.torus_basis();
    let d = space.ambient_dim();
    assert_eq!(w.len(), d, "Weyl element has wrong size");
    let wm = w.to_matrix();
    let r = basis.len();
    let k = DMatrix::from_fn(d, r, |row, col| {
        let t = &basis[col];
        let image = &wm * space.theta(t) * wm.transpose() - t;
        image[(row, row)].im
    });
    let svd = k.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut null: Vec<DVector<f64>> = Vec::new();
    for (idx, &s) in svd.singular_values.iter().enumerate() {
        if s <= TORUS_NULL_TOL {
            null.push(v_t.row(idx).transpose());
        }
    }
    for idx in svd.singular_values.len()..r {
        null.push(v_t.row(idx).transpose());
    }
    let rows = rref(null, r);
    rows.iter()
        .map(|coef| {
            basis
                .iter()
                .zip(coef.iter())
                .fold(CMatrix::zeros(d, d), |acc, (b, &t)| acc + b.scale(t))
        })
        .collect()
}

fn rref(vectors: Vec<DVector<f64>>, width: usize) -> Vec<DVector<f64>> {
    let mut rows = vectors;
    let mut lead = 0;
    let mut out_rows = 0;
    while out_rows < rows.len() && lead < width {
        let pivot = (out_rows..rows.len()).max_by(|&a, &b| rows[a][lead].abs().total_cmp(&rows[b][lead].abs()));
        let Some(p) = pivot.filter(|&p| rows[p][lead].abs() > 1e-9) else {
            lead += 1;
            continue;
        };
        rows.swap(out_rows, p);
        let s = rows[out_rows][lead];
        rows[out_rows] /= s;
        for k in 0..rows.len() {
            if k != out_rows {
                let f = rows[k][lead];
                let sub = rows[out_rows].clone() * f;
                rows[k] -= sub;
            }
        }
        out_rows += 1;
        lead += 1;
    }
    rows.truncate(out_rows);
    for row in rows.iter_mut() {
        row.iter_mut().for_each(|x| {
            if x.abs() < 1e-12 {
                *x = 0.0;
            }
        });
    }
    rows
}

/// Diagonal sign matrices `ε` with `ε ∈ φ(U/K)`, i.e. `εJ` conjugate to `J`.
/// The identity comes first.
pub fn order_two_torus_elements(space: &SymmetricSpace) -> Result<Vec<CMatrix>> {
    let SymmetricSpace::Grassmannian { m, n } = *space else {
        return Err(Error::Unsupported("order-two enumeration needs an inner presentation".into()));
    };
    let d = m + n;
    if d > ORDER_TWO_GUARD {
        return Err(Error::DimensionGuard { dim: d, limit: ORDER_TWO_GUARD });
    }
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize != m {
            continue;
        }
        // bit a set means (εJ)_a = +1
        let eps: Vec<f64> = (0..d)
            .map(|a| {
                let ej = if mask & (1 << a) != 0 { 1.0 } else { -1.0 };
                let j = if a < m { 1.0 } else { -1.0 };
                ej * j
            })
            .collect();
        out.push(eps);
    }
    out.sort_by(|a, b| {
        let ka: Vec<bool> = a.iter().map(|x| *x < 0.0).collect();
        let kb: Vec<bool> = b.iter().map(|x| *x < 0.0).collect();
        let ca = ka.iter().filter(|x| **x).count();
        let cb = kb.iter().filter(|x| **x).count();
        ca.cmp(&cb).then(kb.cmp(&ka))
    });
    Ok(out.iter().map(|e| real_diag(e)).collect())
}

/// `‖φ − ŵ‖` for a candidate fixed point `ŵ`.
pub fn fixed_point_residual(space: &SymmetricSpace, u: &CMatrix, w_hat: &CMatrix) -> f64 {
    max_abs(&(space.cartan_embed(u) - w_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, I};
    use crate::symspace::{canonical_rep, column};

    #[test]
    fn identity_point() {
        let space = SymmetricSpace::grassmannian(2, 2);
        let f = leaf_factorize(&space, &identity(4), 1e-9).unwrap();
        assert!(f.w.is_identity());
        assert_eq!(f.l, identity(4));
        assert_eq!(f.h, identity(4));
        assert!(max_abs(&f.log_abs_h) == 0.0);
    }

    #[test]
    fn cp1_hemisphere_pivots() {
        let space = SymmetricSpace::projective(1);
        for z in [c(0.3, 0.4), c(-0.2, 0.1), c(1.5, -0.5)] {
            let u = canonical_rep(&column(&[z]));
            let f = leaf_factorize(&space, &u, 1e-9).unwrap();
            let r2 = z.norm_sqr();
            let d = (1.0 - r2) / (1.0 + r2);
            assert!(f.w.is_identity());
            assert!((f.h[(0, 0)] - c(d, 0.0)).norm() < 1e-14);
            assert!((f.h[(1, 1)] - c(1.0 / d, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn cp1_equator_is_lower_layer() {
        let space = SymmetricSpace::projective(1);
        let u = canonical_rep(&column(&[Complex64::from_polar(1.0, 0.3)]));
        let w = birkhoff_layer(&space, &u, 1e-9).unwrap();
        assert!(!w.is_identity());
        let f = leaf_factorize(&space, &u, 1e-9).unwrap();
        assert!(max_abs(&(f.reconstruct(&space) - space.cartan_embed(&u))) < 1e-12);
        assert!(f.membership_residual(&space) < 1e-12);
    }

    #[test]
    fn torus_for_cp1_identity_layer() {
        let space = SymmetricSpace::projective(1);
        let t = torus_tw(&SignedPermutation::identity(2), &space);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0], CMatrix::from_row_slice(2, 2, &[I, ZERO, ZERO, -I]));
        let t = torus_tw(&SignedPermutation::identity(4), &SymmetricSpace::grassmannian(2, 2));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn order_two_elements() {
        let cp2 = order_two_torus_elements(&SymmetricSpace::projective(2)).unwrap();
        let expect = [[1.0, 1.0, 1.0], [-1.0, -1.0, 1.0], [-1.0, 1.0, -1.0]];
        assert_eq!(cp2.len(), 3);
        for (m, e) in cp2.iter().zip(expect) {
            assert_eq!(*m, real_diag(&e));
        }
        let cp1 = order_two_torus_elements(&SymmetricSpace::projective(1)).unwrap();
        assert_eq!(cp1, vec![identity(2), real_diag(&[-1.0, -1.0])]);
        let big = order_two_torus_elements(&SymmetricSpace::grassmannian(6, 7)).unwrap_err();
        assert!(matches!(big, Error::DimensionGuard { dim: 13, limit: 12 }));
        assert!(order_two_torus_elements(&SymmetricSpace::group_case(2)).is_err());
    }
}
