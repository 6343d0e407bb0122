//! Symmetric-space presentations `(U, K, θ)`.
//!
//! Two families are supported:
//!
//! * `Grassmannian(m, n)`: `U = SU(m+n)`, `K = S(U(m) × U(n))`, `θ = Ad(J)` with
//!   `J = diag(I_m, −I_n)`. Projective space `CPⁿ` is `Grassmannian(1, n)`.
//! * `GroupCase(n)`: `U = SU(n) × SU(n)` with `K` the diagonal and `θ` the
//!   factor swap. Pairs `(k₁, k₂)` are carried internally as block-diagonal
//!   `2n × 2n` matrices so that every formula on `sl(2n, C)` applies verbatim;
//!   [`block_diag`] and [`split_blocks`] convert at the boundary.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::trace_form;
use crate::linalg::{inv_sqrt_hpd, max_abs, trace, CMatrix, I, ONE, ZERO};

/// Residual bound for the invariants of a tangent representative in `i𝔭`.
pub const TANGENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetricSpace {
    Grassmannian { m: usize, n: usize },
    GroupCase { n: usize },
}

impl SymmetricSpace {
    pub fn grassmannian(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "Grassmannian needs m, n >= 1");
        Self::Grassmannian { m, n }
    }

    /// `CPⁿ = Gr(1, n)`.
    pub fn projective(n: usize) -> Self {
        Self::grassmannian(1, n)
    }

    pub fn group_case(n: usize) -> Self {
        assert!(n >= 2, "group case needs n >= 2");
        Self::GroupCase { n }
    }

    /// Size of the matrices carrying elements of `U`.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            Self::Grassmannian { m, n } => m + n,
            Self::GroupCase { n } => 2 * n,
        }
    }

    pub fn dim_u(&self) -> usize {
        match *self {
            Self::Grassmannian { m, n } => (m + n) * (m + n) - 1,
            Self::GroupCase { n } => 2 * (n * n - 1),
        }
    }

    pub fn dim_k(&self) -> usize {
        match *self {
            Self::Grassmannian { m, n } => m * m + n * n - 1,
            Self::GroupCase { n } => n * n - 1,
        }
    }

    pub fn dim_ip(&self) -> usize {
        self.dim_u() - self.dim_k()
    }

    /// Whether `θ` is conjugation by an element of `U`.
    pub fn is_inner(&self) -> bool {
        matches!(self, Self::Grassmannian { .. })
    }

    pub fn label(&self) -> String {
        match *self {
            Self::Grassmannian { m: 1, n } => format!("CP{n}"),
            Self::Grassmannian { m, n } => format!("Gr({m},{n})"),
            Self::GroupCase { n } => format!("SU({n})xSU({n})/diag"),
        }
    }

    fn check_shape(&self, g: &CMatrix) {
        let d = self.ambient_dim();
        assert_eq!(g.shape(), (d, d), "{} expects {d}x{d} matrices", self.label());
    }

    /// `θ(g)`. Also valid on Lie algebra elements.
    pub fn theta(&self, g: &CMatrix) -> CMatrix {
        self.check_shape(g);
        match *self {
            Self::Grassmannian { m, .. } => {
                CMatrix::from_fn(g.nrows(), g.ncols(), |r, c| if (r < m) == (c < m) { g[(r, c)] } else { -g[(r, c)] })
            }
            Self::GroupCase { n } => {
                CMatrix::from_fn(2 * n, 2 * n, |r, c| g[((r + n) % (2 * n), (c + n) % (2 * n))])
            }
        }
    }

    /// `τ(g) = θ(g*)`, an anti-automorphism fixing the Cartan image.
    pub fn tau(&self, g: &CMatrix) -> CMatrix {
        self.theta(&g.adjoint())
    }

    /// Cartan embedding `uK ↦ u θ(u)⁻¹`.
    pub fn cartan_embed(&self, u: &CMatrix) -> CMatrix {
        u * self.theta(&u.adjoint())
    }

    /// Drops entries outside the Lie algebra of the presentation (the
    /// off-diagonal blocks in the group case).
    pub fn restrict(&self, z: &CMatrix) -> CMatrix {
        match *self {
            Self::Grassmannian { .. } => z.clone(),
            Self::GroupCase { n } => {
                CMatrix::from_fn(2 * n, 2 * n, |r, c| if (r < n) == (c < n) { z[(r, c)] } else { ZERO })
            }
        }
    }

    /// Anti-Hermitian, `θ`-fixed component.
    pub fn project_k(&self, z: &CMatrix) -> CMatrix {
        let z = self.restrict(z);
        let a = (&z - z.adjoint()).scale(0.5);
        (&a + self.theta(&a)).scale(0.5)
    }

    /// `{Z}_{i𝔭} = ¼(S − S*)` with `S = Z + θ(Z*)`.
    pub fn project_ip(&self, z: &CMatrix) -> CMatrix {
        let z = self.restrict(z);
        let s = &z + self.theta(&z.adjoint());
        (&s - s.adjoint()).scale(0.25)
    }

    /// Hermitian component, the `i𝔲` summand.
    pub fn project_iu(&self, z: &CMatrix) -> CMatrix {
        let z = self.restrict(z);
        (&z + z.adjoint()).scale(0.5)
    }

    /// Basis of `i𝔭`, orthonormal for `−tr(XY)`.
    pub fn ip_basis(&self) -> Vec<CMatrix> {
        let d = self.ambient_dim();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            Self::Grassmannian { m, n } => {
                let mut out = Vec::with_capacity(2 * m * n);
                for j in 0..n {
                    for k in 0..m {
                        let mut re = CMatrix::zeros(d, d);
                        re[(m + j, k)] = Complex64::from(s);
                        re[(k, m + j)] = Complex64::from(-s);
                        let mut im = CMatrix::zeros(d, d);
                        im[(m + j, k)] = I * s;
                        im[(k, m + j)] = I * s;
                        out.push(re);
                        out.push(im);
                    }
                }
                out
            }
            Self::GroupCase { n } => su_basis(n)
                .into_iter()
                .map(|x| block_diag(&x, &(-&x)).scale(s))
                .collect(),
        }
    }

    /// Real coordinates in [`Self::ip_basis`]: `c_b = −Re tr(X b)`.
    pub fn ip_coords(&self, x: &CMatrix) -> Vec<f64> {
        self.ip_basis().iter().map(|b| -trace_form(x, b).re).collect()
    }

    pub fn from_ip_coords(&self, coords: &[f64]) -> CMatrix {
        let basis = self.ip_basis();
        assert_eq!(coords.len(), basis.len());
        let d = self.ambient_dim();
        basis.iter().zip(coords).fold(CMatrix::zeros(d, d), |acc, (b, &t)| acc + b.scale(t))
    }

    /// Coroot basis `i(E_kk − E_{k+1,k+1})` of the maximal torus algebra `𝔱`.
    pub fn torus_basis(&self) -> Vec<CMatrix> {
        let coroot = |d: usize, k: usize| {
            let mut h = CMatrix::zeros(d, d);
            h[(k, k)] = I;
            h[(k + 1, k + 1)] = -I;
            h
        };
        match *self {
            Self::Grassmannian { .. } => {
                let d = self.ambient_dim();
                (0..d - 1).map(|k| coroot(d, k)).collect()
            }
            Self::GroupCase { n } => {
                let z = CMatrix::zeros(n, n);
                let mut out: Vec<CMatrix> = (0..n - 1).map(|k| block_diag(&coroot(n, k), &z)).collect();
                out.extend((0..n - 1).map(|k| block_diag(&z, &coroot(n, k))));
                out
            }
        }
    }

    /// Largest violation of: anti-Hermitian, traceless, `θ(X) = −X`.
    pub fn tangent_residual(&self, x: &CMatrix) -> f64 {
        let skew = max_abs(&(x + x.adjoint())).max(max_abs(&(x - self.restrict(x))));
        let tr = trace(x).norm();
        let parity = max_abs(&(self.theta(x) + x));
        skew.max(tr).max(parity)
    }

    pub fn validate_tangent(&self, x: &CMatrix) -> Result<()> {
        if x.shape() != (self.ambient_dim(), self.ambient_dim()) {
            return Err(Error::DimensionMismatch(format!(
                "tangent of {} must be {d}x{d}",
                self.label(),
                d = self.ambient_dim()
            )));
        }
        let residual = self.tangent_residual(x);
        if residual > TANGENT_TOL * x.norm().max(1.0) {
            return Err(Error::InvalidTangent { residual });
        }
        Ok(())
    }

    /// `u(Z)` for the graph chart `{(X, ZX)}`, `Z` of size `n × m`.
    pub fn canonical_rep(&self, z: &CMatrix) -> Result<CMatrix> {
        let Self::Grassmannian { m, n } = *self else {
            return Err(Error::Unsupported("graph chart exists only for Grassmannians".into()));
        };
        if z.shape() != (n, m) {
            return Err(Error::DimensionMismatch(format!("chart point must be {n}x{m}, got {:?}", z.shape())));
        }
        Ok(canonical_rep(z))
    }
}

/// `u(Z) = [[A, −A Z*], [Z A, D]]` with `A = (1 + Z*Z)^{-1/2}`, `D = (1 + ZZ*)^{-1/2}`.
pub fn canonical_rep(z: &CMatrix) -> CMatrix {
    let (n, m) = z.shape();
    let zs = z.adjoint();
    let a = inv_sqrt_hpd(&(CMatrix::identity(m, m) + &zs * z)).expect("1 + Z*Z is positive definite");
    let d = inv_sqrt_hpd(&(CMatrix::identity(n, n) + z * &zs)).expect("1 + ZZ* is positive definite");
    let top_right = -(&a * &zs);
    let bottom_left = z * &a;
    let mut u = CMatrix::zeros(m + n, m + n);
    u.view_mut((0, 0), (m, m)).copy_from(&a);
    u.view_mut((0, m), (m, n)).copy_from(&top_right);
    u.view_mut((m, 0), (n, m)).copy_from(&bottom_left);
    u.view_mut((m, m), (n, n)).copy_from(&d);
    u
}

/// Column vector `z ∈ Cⁿ` as the `n × 1` chart point of `CPⁿ`.
pub fn column(z: &[Complex64]) -> CMatrix {
    CMatrix::from_column_slice(z.len(), 1, z)
}

/// `ψ(k₁, k₂) = k₁ k₂⁻¹`.
pub fn group_iso(k1: &CMatrix, k2: &CMatrix) -> CMatrix {
    k1 * k2.adjoint()
}

pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (p, q) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(p + q, p + q);
    out.view_mut((0, 0), (p, p)).copy_from(a);
    out.view_mut((p, p), (q, q)).copy_from(b);
    out
}

/// Inverse of [`block_diag`] for equal block sizes; off-diagonal blocks are dropped.
pub fn split_blocks(g: &CMatrix) -> (CMatrix, CMatrix) {
    let n = g.nrows() / 2;
    (g.view((0, 0), (n, n)).into_owned(), g.view((n, n), (n, n)).into_owned())
}

/// Basis of `su(n)` orthonormal for `−tr(XY)`.
pub fn su_basis(n: usize) -> Vec<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in (j + 1)..n {
            let mut re = CMatrix::zeros(n, n);
            re[(j, k)] = Complex64::from(s);
            re[(k, j)] = Complex64::from(-s);
            let mut im = CMatrix::zeros(n, n);
            im[(j, k)] = I * s;
            im[(k, j)] = I * s;
            out.push(re);
            out.push(im);
        }
    }
    // i·h_k with h_k an orthonormal basis of real traceless diagonals
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut entries = vec![ZERO; n];
        for e in entries.iter_mut().take(k) {
            *e = I / norm;
        }
        entries[k] = -I * (k as f64) / norm;
        out.push(CMatrix::from_diagonal(&DVector::from_vec(entries)));
    }
    out
}

/// A class `[u, X] ∈ U ×_K i𝔭`.
#[derive(Debug, Clone)]
pub struct TangentClass {
    pub u: CMatrix,
    pub x: CMatrix,
}

impl TangentClass {
    pub fn new(space: &SymmetricSpace, u: CMatrix, x: CMatrix) -> Result<Self> {
        space.validate_tangent(&x)?;
        Ok(Self { u, x })
    }

    /// Same class under the representative `u k`: `[u k, Ad(k⁻¹) X]`.
    pub fn translate(&self, k: &CMatrix) -> Self {
        let ki = k.adjoint();
        Self { u: &self.u * k, x: &ki * &self.x * k }
    }
}

/// `J = diag(I_m, −I_n)`.
pub fn grassmann_j(m: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(m + n, m + n, |r, c| if r != c { ZERO } else if r < m { ONE } else { -ONE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, unitarity_residual};

    #[test]
    fn dimensions() {
        let g = SymmetricSpace::grassmannian(2, 3);
        assert_eq!((g.dim_u(), g.dim_k(), g.dim_ip()), (24, 12, 12));
        assert_eq!(g.ip_basis().len(), 12);
        let s = SymmetricSpace::group_case(2);
        assert_eq!((s.dim_u(), s.dim_k(), s.dim_ip()), (6, 3, 3));
        assert_eq!(s.ip_basis().len(), 3);
    }

    #[test]
    fn theta_negates_off_diagonal_blocks() {
        let g = SymmetricSpace::grassmannian(1, 1);
        let x = CMatrix::from_fn(2, 2, |r, col| if r == col { ZERO } else { c(1.0, r as f64) });
        assert_eq!(g.theta(&x), -&x);
        assert_eq!(g.theta(&identity(2)), identity(2));
        let j = grassmann_j(1, 1);
        assert_eq!(g.theta(&x), &j * &x * &j);
    }

    #[test]
    fn ip_basis_is_orthonormal_and_valid() {
        for space in [SymmetricSpace::grassmannian(2, 2), SymmetricSpace::projective(2), SymmetricSpace::group_case(3)] {
            let b = space.ip_basis();
            for (i, x) in b.iter().enumerate() {
                space.validate_tangent(x).unwrap();
                for (j, y) in b.iter().enumerate() {
                    let g = -trace_form(x, y);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((g - Complex64::from(expect)).norm() < 1e-14, "{} {i} {j}", space.label());
                }
            }
            let coords: Vec<f64> = (0..b.len()).map(|k| 0.1 * k as f64 - 0.3).collect();
            let x = space.from_ip_coords(&coords);
            let back = space.ip_coords(&x);
            for (p, q) in coords.iter().zip(&back) {
                assert!((p - q).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn canonical_rep_at_origin_and_unitarity() {
        let space = SymmetricSpace::grassmannian(2, 1);
        let u = space.canonical_rep(&CMatrix::zeros(1, 2)).unwrap();
        assert!(max_abs(&(u - identity(3))) < 1e-15);
        let z = CMatrix::from_row_slice(1, 2, &[c(0.3, -1.2), c(2.0, 0.5)]);
        let u = space.canonical_rep(&z).unwrap();
        assert!(unitarity_residual(&u) < 1e-13);
        assert!((u.determinant() - ONE).norm() < 1e-13);
        assert!(space.canonical_rep(&CMatrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn cp1_cartan_image() {
        let z = c(0.4, -0.7);
        let space = SymmetricSpace::projective(1);
        let phi = space.cartan_embed(&canonical_rep(&column(&[z])));
        let r2 = z.norm_sqr();
        let s = 1.0 / (1.0 + r2);
        let expect = CMatrix::from_row_slice(2, 2, &[
            Complex64::from((1.0 - r2) * s),
            -z.conj() * 2.0 * s,
            z * 2.0 * s,
            Complex64::from((1.0 - r2) * s),
        ]);
        assert!(max_abs(&(phi - expect)) < 1e-15);
    }

    #[test]
    fn group_case_theta_swaps_and_embeds() {
        let space = SymmetricSpace::group_case(2);
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), ZERO, ZERO, c(0.0, -1.0)]);
        let b = identity(2);
        let g = block_diag(&a, &b);
        assert_eq!(space.theta(&g), block_diag(&b, &a));
        let (p, q) = split_blocks(&space.cartan_embed(&g));
        assert_eq!(p, group_iso(&a, &b));
        assert_eq!(q, group_iso(&b, &a));
    }

    #[test]
    fn invalid_tangent_rejected() {
        let space = SymmetricSpace::grassmannian(1, 1);
        let err = space.validate_tangent(&identity(2)).unwrap_err();
        assert!(matches!(err, Error::InvalidTangent { .. }));
    }
}
