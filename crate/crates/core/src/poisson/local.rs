//! Chart formulas for the Grassmannians, projective spaces and `CP¹`.
//!
//! Real chart coordinates are interleaved `(x, y)` pairs: for a Grassmannian
//! chart point `Z` (`n × m`), coordinate `2(j·m + k)` is `Re Z[j,k]` and
//! `2(j·m + k) + 1` is `Im Z[j,k]`. A cotangent representative `V` (`m × n`)
//! is the real covector `δZ ↦ 2 Re tr(V δZ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, I, ZERO};
use crate::poisson::jacobi::CoordBivector;
use crate::poisson::BivectorOperator;
use crate::symspace::{canonical_rep, SymmetricSpace};

/// Default step for the chart differential.
pub const CHART_FD_STEP: f64 = 1e-6;

fn strict_upper(a: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.nrows(), a.ncols(), |r, col| if r < col { a[(r, col)] } else { ZERO })
}

fn plus_ct(a: &CMatrix) -> CMatrix {
    let p = strict_upper(a);
    &p + p.adjoint()
}

/// `L_Z V = V − Z*ZVZZ* + Z*((ZV − V*Z*)₊ + c.t.) − ((Z*V* − VZ)₊ + c.t.) Z*`.
///
/// The last term carries a right factor `Z*`; without it the sum is not
/// defined for `m ≠ n`.
pub fn grassmann_l_z(z: &CMatrix, v: &CMatrix) -> CMatrix {
    let zs = z.adjoint();
    let vs = v.adjoint();
    let t1 = v - &zs * z * v * z * &zs;
    let t2 = &zs * plus_ct(&(z * v - &vs * &zs));
    let t3 = plus_ct(&(&zs * &vs - v * z)) * &zs;
    t1 + t2 - t3
}

/// `π(V, W) = i[tr((L_Z V)* W) − tr((L_Z V) W*)] = 2 Im tr((L_Z V) W*)`.
pub fn grassmann_local_pi(z: &CMatrix, v: &CMatrix, w: &CMatrix) -> f64 {
    let l = grassmann_l_z(z, v);
    let a = (l.adjoint() * w).trace();
    let b = (&l * w.adjoint()).trace();
    (I * (a - b)).re
}

fn chart_shape(z: &CMatrix) -> (usize, usize) {
    z.shape()
}

/// Unit chart direction for real coordinate `k`.
pub fn chart_direction(n: usize, m: usize, k: usize) -> CMatrix {
    let mut d = CMatrix::zeros(n, m);
    d[((k / 2) / m, (k / 2) % m)] = if k % 2 == 0 { c(1.0, 0.0) } else { I };
    d
}

/// Cotangent representative of the coordinate differential `dx_k`.
pub fn coordinate_covector(n: usize, m: usize, k: usize) -> CMatrix {
    let mut v = CMatrix::zeros(m, n);
    v[((k / 2) % m, (k / 2) / m)] = if k % 2 == 0 { c(0.5, 0.0) } else { c(0.0, -0.5) };
    v
}

/// Real bivector matrix `R^{ab} = π(dx_a, dx_b)` of the chart formula.
pub fn grassmann_real_matrix(z: &CMatrix) -> DMatrix<f64> {
    let (n, m) = chart_shape(z);
    let d = 2 * n * m;
    let covectors: Vec<CMatrix> = (0..d).map(|k| coordinate_covector(n, m, k)).collect();
    let ls: Vec<CMatrix> = covectors.iter().map(|v| grassmann_l_z(z, v)).collect();
    DMatrix::from_fn(d, d, |a, b| 2.0 * (&ls[a] * covectors[b].adjoint()).trace().im)
}

/// The equivariant bivector pulled back to the graph chart at `Z`.
#[derive(Debug, Clone)]
pub struct ChartPullback {
    /// Chart differential: column `k` holds the `i𝔭` coordinates of
    /// `{u⁻¹ ∂_k u}_{i𝔭}` at `u = u(Z)`.
    pub differential: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    n: usize,
    m: usize,
}

impl ChartPullback {
    pub fn new(z: &CMatrix, fd_step: f64) -> Self {
        let (n, m) = chart_shape(z);
        let space = SymmetricSpace::grassmannian(m, n);
        let u = canonical_rep(z);
        let ui = u.adjoint();
        let d = 2 * n * m;
        let mut differential = DMatrix::zeros(space.dim_ip(), d);
        for k in 0..d {
            let dz = chart_direction(n, m, k).scale(fd_step);
            let du = (canonical_rep(&(z + &dz)) - canonical_rep(&(z - &dz))).unscale(2.0 * fd_step);
            let coords = space.ip_coords(&space.project_ip(&(&ui * du)));
            for (a, x) in coords.into_iter().enumerate() {
                differential[(a, k)] = x;
            }
        }
        let omega = BivectorOperator::new(&space, &u).matrix;
        Self { differential, omega, n, m }
    }

    fn covector_values(&self, v: &CMatrix) -> nalgebra::DVector<f64> {
        let d = 2 * self.n * self.m;
        nalgebra::DVector::from_fn(d, |k, _| 2.0 * (v * chart_direction(self.n, self.m, k)).trace().re)
    }

    /// `i𝔭` coordinates of the covector `V` transported to `T*_{uK}`.
    fn transport(&self, v: &CMatrix) -> Result<nalgebra::DVector<f64>> {
        let a = self.covector_values(v);
        let dt = self.differential.transpose();
        let xi = dt
            .lu()
            .solve(&a)
            .ok_or_else(|| Error::SingularInput("chart differential is singular".into()))?;
        Ok(-xi)
    }

    /// Equivariant `π` evaluated on chart covectors `V`, `W`.
    pub fn pi(&self, v: &CMatrix, w: &CMatrix) -> Result<f64> {
        let xv = self.transport(v)?;
        let xw = self.transport(w)?;
        Ok(-(xw.transpose() * &self.omega * xv)[(0, 0)])
    }

    /// Chart velocity (real coordinates) of the class `[u(Z), X]`.
    pub fn pushforward(&self, ip_coords: &[f64]) -> Result<Vec<f64>> {
        let rhs = nalgebra::DVector::from_column_slice(ip_coords);
        let sol = self
            .differential
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularInput("chart differential is singular".into()))?;
        Ok(sol.iter().copied().collect())
    }
}

/// `∂_z = ½(∂_x − i∂_y)` and `∂_z̄ = ½(∂_x + i∂_y)` per complex coordinate.
fn vector_frame(n: usize) -> CMatrix {
    let mut t = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        t[(2 * j, j)] = c(0.5, 0.0);
        t[(2 * j + 1, j)] = c(0.0, -0.5);
        t[(2 * j, n + j)] = c(0.5, 0.0);
        t[(2 * j + 1, n + j)] = c(0.0, 0.5);
    }
    t
}

/// Real matrix of a bivector given by its antisymmetric coefficient matrix
/// over `(∂z₁…∂zₙ, ∂z̄₁…∂z̄ₙ)`.
pub fn complex_bivector_to_real(p: &CMatrix) -> DMatrix<f64> {
    let n = p.nrows() / 2;
    let t = vector_frame(n);
    (&t * p * t.transpose()).map(|z| z.re)
}

/// Real matrix of a 2-form given by its antisymmetric coefficient matrix over
/// `(dz₁…dzₙ, dz̄₁…dz̄ₙ)`.
pub fn complex_form_to_real(o: &CMatrix) -> DMatrix<f64> {
    let n = o.nrows() / 2;
    let mut t = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        t[(j, 2 * j)] = c(1.0, 0.0);
        t[(j, 2 * j + 1)] = I;
        t[(n + j, 2 * j)] = c(1.0, 0.0);
        t[(n + j, 2 * j + 1)] = -I;
    }
    (t.transpose() * o * &t).map(|z| z.re)
}

fn add_wedge(p: &mut CMatrix, a: usize, b: usize, coeff: Complex64) {
    p[(a, b)] += coeff;
    p[(b, a)] -= coeff;
}

/// Coefficients of the `CPⁿ` bivector
/// `−i{Σ S_j ∂_j∧∂̄_j + (Σ_{j<k} z_j z_k ∂_j∧∂_k − Σ_{j<k} z_j z̄_k ‖Z‖² ∂_j∧∂̄_k) − c.c.}`.
#[derive(Debug, Clone)]
pub struct CpnCoeffs {
    pub s: Vec<f64>,
    /// Antisymmetric coefficient matrix over `(∂z, ∂z̄)`.
    pub matrix: CMatrix,
}

impl CpnCoeffs {
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Coefficient of `∂_j ∧ ∂̄_k`.
    pub fn mixed(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[(j, self.n() + k)]
    }

    /// Coefficient of `∂_j ∧ ∂_k`.
    pub fn holomorphic(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[(j, k)]
    }

    pub fn real_matrix(&self) -> DMatrix<f64> {
        complex_bivector_to_real(&self.matrix)
    }
}

/// `S_j = 1 + Σ_{k<j}|z_k|² − |z_j|²‖Z‖² − Σ_{k>j}|z_k|²`.
pub fn cpn_s(z: &[Complex64]) -> Vec<f64> {
    let norm2: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    (0..z.len())
        .map(|j| {
            let before: f64 = z[..j].iter().map(|v| v.norm_sqr()).sum();
            let after: f64 = z[j + 1..].iter().map(|v| v.norm_sqr()).sum();
            1.0 + before - z[j].norm_sqr() * norm2 - after
        })
        .collect()
}

pub fn cpn_coeffs(z: &[Complex64]) -> CpnCoeffs {
    let n = z.len();
    let norm2: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    let s = cpn_s(z);
    let mut p = CMatrix::zeros(2 * n, 2 * n);
    let mi = -I;
    for j in 0..n {
        add_wedge(&mut p, j, n + j, mi * s[j]);
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let holo = z[j] * z[k];
            add_wedge(&mut p, j, k, mi * holo);
            add_wedge(&mut p, n + j, n + k, mi * -holo.conj());
            let mixed = -z[j] * z[k].conj() * norm2;
            add_wedge(&mut p, j, n + k, mi * mixed);
            add_wedge(&mut p, n + j, k, mi * -mixed.conj());
        }
    }
    CpnCoeffs { s, matrix: p }
}

/// `p(Z, Z*) = (1 + |z₁|² − |z₂|²)(1 − ‖Z‖²)(1 + ‖Z‖²)`.
pub fn cp2_p(z1: Complex64, z2: Complex64) -> f64 {
    let norm2 = z1.norm_sqr() + z2.norm_sqr();
    (1.0 + z1.norm_sqr() - z2.norm_sqr()) * (1.0 - norm2) * (1.0 + norm2)
}

/// The symplectic form inverse to the `CP²` bivector on the open leaves.
#[derive(Debug, Clone)]
pub struct Cp2Form {
    pub p: f64,
    /// `S₁ = (1 + |z₁|²)(1 − ‖Z‖²)`.
    pub s1: f64,
    /// `S₂ = (1 − |z₂|²)(1 + ‖Z‖²)`.
    pub s2: f64,
    /// Antisymmetric coefficient matrix over `(dz₁, dz₂, dz̄₁, dz̄₂)`.
    pub matrix: CMatrix,
}

impl Cp2Form {
    pub fn real_matrix(&self) -> DMatrix<f64> {
        complex_form_to_real(&self.matrix)
    }
}

/// `ω = (i/p){−S₂ dz₁∧dz̄₁ − S₁ dz₂∧dz̄₂ + (z₁z₂ dz̄₁∧dz̄₂ + z₁z̄₂‖Z‖² dz̄₁∧dz₂) − c.c.}`.
pub fn cp2_symplectic(z1: Complex64, z2: Complex64, tol: f64) -> Result<Cp2Form> {
    let p = cp2_p(z1, z2);
    if p.abs() <= tol {
        return Err(Error::OnDegeneracyLocus { value: p.abs() });
    }
    let norm2 = z1.norm_sqr() + z2.norm_sqr();
    let s1 = (1.0 + z1.norm_sqr()) * (1.0 - norm2);
    let s2 = (1.0 - z2.norm_sqr()) * (1.0 + norm2);
    let mut o = CMatrix::zeros(4, 4);
    add_wedge(&mut o, 0, 2, Complex64::from(-s2));
    add_wedge(&mut o, 1, 3, Complex64::from(-s1));
    let holo = z1 * z2;
    add_wedge(&mut o, 2, 3, holo);
    add_wedge(&mut o, 0, 1, -holo.conj());
    let mixed = z1 * z2.conj() * norm2;
    add_wedge(&mut o, 2, 1, mixed);
    add_wedge(&mut o, 0, 3, -mixed.conj());
    let scale = I / p;
    Ok(Cp2Form { p, s1, s2, matrix: o.map(|v| v * scale) })
}

/// Coefficients of `∂z ∧ ∂z̄` on `CP¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cp1Family {
    /// Evens-Lu: `−i(1 − |z|⁴)`.
    pub pi: Complex64,
    /// Pushforward of the Lu-Weinstein structure: `2i|z|²(1 + |z|²)`.
    pub pi_pl: Complex64,
    /// Kostant-Kirillov-Souriau: `i(1 + |z|²)²`.
    pub pi_kks: Complex64,
}

pub fn cp1_family(z: Complex64) -> Cp1Family {
    let r2 = z.norm_sqr();
    Cp1Family {
        pi: -I * (1.0 - r2 * r2),
        pi_pl: I * (2.0 * r2 * (1.0 + r2)),
        pi_kks: I * (1.0 + r2).powi(2),
    }
}

/// `−2i Im(w)(1 + |w|²)`, the `SO(2)`-basepoint chart of `CP¹`.
pub fn fothlu_w_chart(w: Complex64) -> Complex64 {
    -I * (2.0 * w.im * (1.0 + w.norm_sqr()))
}

/// Real matrix of `c ∂z ∧ ∂z̄` in coordinates `(x, y)`.
pub fn cp1_real_matrix(coeff: Complex64) -> DMatrix<f64> {
    let mut p = CMatrix::zeros(2, 2);
    add_wedge(&mut p, 0, 1, coeff);
    complex_bivector_to_real(&p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cp1Kind {
    EvensLu,
    PoissonLie,
    Kks,
}

/// One member of the `CP¹` family as a coordinate bivector.
#[derive(Debug, Clone, Copy)]
pub struct Cp1Bivector(pub Cp1Kind);

impl CoordBivector for Cp1Bivector {
    fn real_dim(&self) -> usize {
        2
    }

    fn real_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let f = cp1_family(c(x[0], x[1]));
        cp1_real_matrix(match self.0 {
            Cp1Kind::EvensLu => f.pi,
            Cp1Kind::PoissonLie => f.pi_pl,
            Cp1Kind::Kks => f.pi_kks,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CpnBivector {
    pub n: usize,
}

impl CoordBivector for CpnBivector {
    fn real_dim(&self) -> usize {
        2 * self.n
    }

    fn real_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let z: Vec<Complex64> = x.chunks(2).map(|p| c(p[0], p[1])).collect();
        cpn_coeffs(&z).real_matrix()
    }
}

/// The chart formula on `Gr(m, n)`, points are `n × m` matrices.
#[derive(Debug, Clone, Copy)]
pub struct GrassmannBivector {
    pub m: usize,
    pub n: usize,
}

impl GrassmannBivector {
    pub fn point(&self, x: &[f64]) -> CMatrix {
        CMatrix::from_fn(self.n, self.m, |j, k| {
            let idx = 2 * (j * self.m + k);
            c(x[idx], x[idx + 1])
        })
    }
}

impl CoordBivector for GrassmannBivector {
    fn real_dim(&self) -> usize {
        2 * self.m * self.n
    }

    fn real_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        grassmann_real_matrix(&self.point(x))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FothLuBivector;

impl CoordBivector for FothLuBivector {
    fn real_dim(&self) -> usize {
        2
    }

    fn real_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        cp1_real_matrix(fothlu_w_chart(c(x[0], x[1])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cpn_at_origin() {
        let co = cpn_coeffs(&[ZERO; 3]);
        assert_eq!(co.s, vec![1.0; 3]);
        for j in 0..3 {
            assert_eq!(co.mixed(j, j), -I);
            for k in (j + 1)..3 {
                assert_eq!(co.mixed(j, k), ZERO);
                assert_eq!(co.holomorphic(j, k), ZERO);
            }
        }
    }

    #[test]
    fn cpn_reduces_to_cp1() {
        let z = c(0.3, 0.9);
        let co = cpn_coeffs(&[z]);
        assert!((co.mixed(0, 0) - cp1_family(z).pi).norm() < 1e-15);
    }

    #[test]
    fn cp2_factored_forms() {
        let (z1, z2) = (c(0.2, -0.4), c(0.7, 0.1));
        let s = cpn_s(&[z1, z2]);
        let form = cp2_symplectic(z1, z2, 1e-9).unwrap();
        assert!((form.s1 - s[0]).abs() < 1e-15);
        assert!((form.s2 - s[1]).abs() < 1e-15);
    }

    #[test]
    fn cp2_origin_form() {
        let form = cp2_symplectic(ZERO, ZERO, 1e-9).unwrap();
        assert_eq!(form.p, 1.0);
        assert_eq!(form.matrix[(0, 2)], -I);
        assert_eq!(form.matrix[(1, 3)], -I);
        let err = cp2_symplectic(c(1.0, 0.0), ZERO, 1e-9).unwrap_err();
        assert!(matches!(err, Error::OnDegeneracyLocus { .. }));
    }

    #[test]
    fn cp1_family_at_origin() {
        let f = cp1_family(ZERO);
        assert_eq!((f.pi, f.pi_pl, f.pi_kks), (-I, ZERO, I));
        assert_eq!(cp1_family(c(0.6, 0.8)).pi.norm(), 0.0);
    }

    #[test]
    fn fothlu_values() {
        assert_eq!(fothlu_w_chart(c(3.0, 0.0)).norm(), 0.0);
        assert_eq!(fothlu_w_chart(I), c(0.0, -4.0));
        let w = c(0.3, 0.8);
        assert_eq!(fothlu_w_chart(w.conj()), -fothlu_w_chart(w));
    }

    #[test]
    fn cp1_real_matrix_is_half_imaginary_coefficient() {
        let r = cp1_real_matrix(c(0.0, -1.0));
        assert!((r[(0, 1)] - 0.5).abs() < 1e-16);
        assert!((r[(1, 0)] + 0.5).abs() < 1e-16);
    }

    #[test]
    fn local_formula_is_antisymmetric() {
        let z = CMatrix::from_row_slice(2, 2, &[c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1), c(0.2, 0.2)]);
        let v = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5), c(-1.0, 0.2)]);
        let w = CMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, -1.0), c(0.0, 0.5), c(1.0, 1.0)]);
        assert!(grassmann_local_pi(&z, &v, &v).abs() < 1e-14);
        assert!((grassmann_local_pi(&z, &v, &w) + grassmann_local_pi(&z, &w, &v)).abs() < 1e-14);
    }
}
