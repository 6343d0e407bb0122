//! The triangular decomposition `𝔤 = 𝔫₋ + 𝔥 + 𝔫₊` of `sl(n, C)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{iwasawa_factor, require_square, trace, CMatrix, I, ZERO};

/// Traces up to `TRACELESS_TOL · max(1, ‖Z‖)` are treated as rounding and
/// removed; anything larger is rejected.
pub const TRACELESS_TOL: f64 = 1e-10;

/// `(Z₋, Z_𝔥, Z₊)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularParts {
    pub minus: CMatrix,
    pub h: CMatrix,
    pub plus: CMatrix,
}

/// Checked entry points for a fixed `sl(n, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangularContext {
    n: usize,
}

impl TriangularContext {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "sl(n) needs n >= 1");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Validates shape and trace, re-centering a trace that is within rounding.
    pub fn sanitize(&self, z: &CMatrix) -> Result<CMatrix> {
        let n = require_square(z, "Lie algebra element")?;
        if n != self.n {
            return Err(Error::DimensionMismatch(format!("expected {}x{}, got {n}x{n}", self.n, self.n)));
        }
        let tr = trace(z);
        if tr.norm() > TRACELESS_TOL * z.norm().max(1.0) {
            return Err(Error::NotTraceless { trace: tr.norm() });
        }
        let mut out = z.clone();
        let shift = tr / n as f64;
        for k in 0..n {
            out[(k, k)] -= shift;
        }
        Ok(out)
    }

    pub fn tri_project(&self, z: &CMatrix) -> Result<TriangularParts> {
        Ok(tri_project(&self.sanitize(z)?))
    }

    pub fn hilbert_transform(&self, z: &CMatrix) -> Result<CMatrix> {
        Ok(hilbert_transform(&self.sanitize(z)?))
    }

    pub fn proj_u(&self, z: &CMatrix) -> Result<CMatrix> {
        Ok(proj_u(&self.sanitize(z)?))
    }

    pub fn is_lower_nilpotent(z: &CMatrix) -> bool {
        (0..z.nrows()).all(|r| (r..z.ncols()).all(|c| z[(r, c)] == ZERO))
    }
}

/// Splits entries into strictly lower, diagonal and strictly upper parts.
pub fn tri_project(z: &CMatrix) -> TriangularParts {
    let (r, c) = z.shape();
    TriangularParts {
        minus: CMatrix::from_fn(r, c, |i, j| if i > j { z[(i, j)] } else { ZERO }),
        h: CMatrix::from_fn(r, c, |i, j| if i == j { z[(i, j)] } else { ZERO }),
        plus: CMatrix::from_fn(r, c, |i, j| if i < j { z[(i, j)] } else { ZERO }),
    }
}

/// `H(Z) = −i Z₋ + i Z₊`.
pub fn hilbert_transform(z: &CMatrix) -> CMatrix {
    let (r, c) = z.shape();
    CMatrix::from_fn(r, c, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => -I * z[(i, j)],
        std::cmp::Ordering::Less => I * z[(i, j)],
        std::cmp::Ordering::Equal => ZERO,
    })
}

/// The `𝔲`-component of `Z` along `𝔤 = 𝔫₋ + 𝔥_R + 𝔲`: `−(Z₊)* + Z_𝔱 + Z₊`.
pub fn proj_u(z: &CMatrix) -> CMatrix {
    let (r, c) = z.shape();
    CMatrix::from_fn(r, c, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => -z[(j, i)].conj(),
        std::cmp::Ordering::Less => z[(i, j)],
        std::cmp::Ordering::Equal => Complex64::new(0.0, z[(i, j)].im),
    })
}

/// `tr(XY)`.
pub fn trace_form(x: &CMatrix, y: &CMatrix) -> Complex64 {
    assert_eq!(x.shape(), y.shape(), "trace_form needs equal shapes");
    let n = x.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

/// Right dressing action `u · g₀ = 𝐮(u g₀)`.
pub fn dressing_act(u: &CMatrix, g0: &CMatrix, tol: f64) -> Result<CMatrix> {
    Ok(iwasawa_factor(&(u * g0), tol)?.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, max_abs, ONE};

    fn e(n: usize, i: usize, j: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    #[test]
    fn projections_of_elementary_matrices() {
        let parts = tri_project(&e(2, 0, 1));
        assert_eq!(parts.plus, e(2, 0, 1));
        assert_eq!(parts.minus, CMatrix::zeros(2, 2));
        assert_eq!(hilbert_transform(&e(2, 0, 1)), e(2, 0, 1).map(|z| z * I));
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 2.0), c(-1.0, -2.0)]));
        assert_eq!(hilbert_transform(&d), CMatrix::zeros(2, 2));
        assert_eq!(tri_project(&d).h, d);
    }

    #[test]
    fn trace_form_normalization() {
        assert_eq!(trace_form(&e(2, 0, 1), &e(2, 1, 0)), ONE);
    }

    #[test]
    fn proj_u_kills_real_diagonal_and_fixes_skew() {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(-2.0, 0.0)]));
        assert_eq!(proj_u(&d), CMatrix::zeros(2, 2));
        let x = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.0, 0.5),
            (1, 1) => c(0.0, -0.5),
            (0, 1) => c(1.0, 2.0),
            _ => c(-1.0, 2.0),
        });
        assert!(max_abs(&(proj_u(&x) - &x)) < 1e-15);
        assert!(max_abs(&(proj_u(&x.map(|z| z * I)) - hilbert_transform(&x))) < 1e-15);
    }

    #[test]
    fn context_rejects_trace() {
        let ctx = TriangularContext::new(2);
        assert!(matches!(ctx.hilbert_transform(&identity(2)), Err(Error::NotTraceless { .. })));
        let mut z = e(2, 0, 1);
        z[(0, 0)] = c(1e-13, 0.0);
        let h = ctx.tri_project(&z).unwrap().h;
        assert!((h[(0, 0)] + h[(1, 1)]).norm() < 1e-20);
    }

    #[test]
    fn dressing_by_identity() {
        let u = CMatrix::from_fn(2, 2, |i, j| if i == j { ZERO } else if i < j { ONE } else { -ONE });
        assert!(max_abs(&(dressing_act(&u, &identity(2), 1e-9).unwrap() - &u)) < 1e-14);
    }
}
