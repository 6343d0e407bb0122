//! Dense complex matrix kernels.
//!
//! Group elements of `SL(n, C)` and Lie algebra elements of `sl(n, C)` are both
//! carried by [`CMatrix`]. The factorizations here are the two that organize the
//! rest of the crate:
//!
//! * the structural Birkhoff (permuted LDU) factorization `g = l · Ŵ · h · u₊`,
//!   whose Weyl element is read off from the rank pattern of leading blocks;
//! * the Iwasawa factorization `g = l · a · u` with `a` positive diagonal and
//!   `u` special unitary.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major semantics.
pub type CMatrix = DMatrix<Complex64>;

/// Default absolute rank threshold for stratum decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Pivot magnitudes in `(tol, AMBIGUITY_FACTOR * tol]` are neither clearly zero
/// nor clearly nonzero; the elimination refuses to guess.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    let n = entries.len();
    CMatrix::from_fn(n, n, |r, c| if r == c { entries[r] } else { ZERO })
}

pub fn real_diag(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    CMatrix::from_fn(n, n, |r, c| if r == c { Complex64::from(entries[r]) } else { ZERO })
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `‖u·u* − I‖_max`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    max_abs(&(u * u.adjoint() - identity(u.nrows())))
}

/// Anti-Hermitian part `(Z − Z*)/2`.
pub fn skew_part(z: &CMatrix) -> CMatrix {
    (z - z.adjoint()).scale(0.5)
}

/// Hermitian part `(Z + Z*)/2`.
pub fn hermitian_part(z: &CMatrix) -> CMatrix {
    (z + z.adjoint()).scale(0.5)
}

pub(crate) fn require_square(m: &CMatrix, what: &str) -> Result<usize> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square and nonempty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

fn require_unimodular(g: &CMatrix, tol: f64) -> Result<()> {
    let det = g.determinant();
    if det.norm() <= tol {
        return Err(Error::SingularInput(format!("det = {det:e}")));
    }
    if (det - ONE).norm() > tol {
        return Err(Error::NotUnimodular { det: format!("{det}"), tol });
    }
    Ok(())
}

/// A signed permutation matrix of determinant +1 representing a Weyl group
/// element of `SL(n, C)`.
///
/// Row `i` carries its single nonzero entry in column `perm[i]` with value
/// `signs[i]`. Every sign is `+1` except the last row, which carries the sign
/// of the permutation so that the determinant is `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect(), signs: vec![1; n] }
    }

    /// Builds the canonical representative for a row-to-column permutation.
    ///
    /// Panics if `perm` is not a permutation of `0..perm.len()`.
    pub fn from_permutation(perm: Vec<usize>) -> Self {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            assert!(p < n && !seen[p], "not a permutation: {perm:?}");
            seen[p] = true;
        }
        let mut signs = vec![1i8; n];
        if n > 0 {
            signs[n - 1] = permutation_sign(&perm);
        }
        Self { perm, signs }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, (&p, &s)) in self.perm.iter().zip(&self.signs).enumerate() {
            m[(i, p)] = Complex64::from(f64::from(s));
        }
        m
    }
}

impl std::fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, (&p, &s)) in self.perm.iter().zip(&self.signs).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", if s < 0 { "-" } else { "" }, p)?;
        }
        write!(f, "]")
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut visited = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PivotDecision {
    Zero,
    NonZero,
    Ambiguous,
}

pub(crate) fn classify_pivot(magnitude: f64, tol: f64) -> PivotDecision {
    if magnitude <= tol {
        PivotDecision::Zero
    } else if magnitude <= AMBIGUITY_FACTOR * tol {
        PivotDecision::Ambiguous
    } else {
        PivotDecision::NonZero
    }
}

/// Result of `g = l · Ŵ · h · u₊`.
#[derive(Debug, Clone)]
pub struct BirkhoffFactors {
    /// Lower unipotent.
    pub l: CMatrix,
    pub w: SignedPermutation,
    /// Diagonal, determinant one.
    pub h: CMatrix,
    /// Upper unipotent.
    pub u_plus: CMatrix,
}

impl BirkhoffFactors {
    pub fn reconstruct(&self) -> CMatrix {
        &self.l * self.w.to_matrix() * &self.h * &self.u_plus
    }

    /// Diagonal entries of `h`.
    pub fn h_diagonal(&self) -> Vec<Complex64> {
        self.h.diagonal().iter().copied().collect()
    }
}

/// Structural Birkhoff factorization of `g ∈ SL(n, C)`.
///
/// Columns are processed left to right. The pivot of each column is the
/// topmost row not yet used whose Schur-complement entry exceeds `tol`; the
/// pivot row is cleared to the right with upper unipotent column operations
/// and the pivot column is cleared below with lower unipotent row operations.
/// The resulting row-to-column assignment is the Weyl element `w` with
/// `g ∈ N⁻ w H N⁺`. No magnitude pivoting is performed.
pub fn birkhoff_factor(g: &CMatrix, tol: f64) -> Result<BirkhoffFactors> {
    let n = require_square(g, "birkhoff input")?;
    require_unimodular(g, tol)?;

    let mut a = g.clone();
    let mut l = identity(n);
    let mut u_plus = identity(n);
    let mut used = vec![false; n];
    let mut perm = vec![usize::MAX; n];
    let mut pivots = vec![ZERO; n];

    for j in 0..n {
        let mut pivot_row = None;
        for r in (0..n).filter(|&r| !used[r]) {
            let mag = a[(r, j)].norm();
            match classify_pivot(mag, tol) {
                PivotDecision::Zero => continue,
                PivotDecision::Ambiguous => {
                    return Err(Error::StratumAmbiguous { step: j, magnitude: mag, tol })
                }
                PivotDecision::NonZero => {
                    pivot_row = Some(r);
                    break;
                }
            }
        }
        let i = pivot_row.ok_or_else(|| {
            Error::SingularInput(format!("column {j} has no pivot above tolerance"))
        })?;
        used[i] = true;
        perm[i] = j;
        let p = a[(i, j)];
        pivots[i] = p;

        // Clear row i to the right of the pivot; this is the Schur update.
        for col in (j + 1)..n {
            let f = a[(i, col)] / p;
            if f == ZERO {
                continue;
            }
            for r in 0..n {
                let t = a[(r, j)];
                a[(r, col)] -= f * t;
            }
            u_plus[(j, col)] = f;
        }
        // Row i is now p·e_j, so clearing below only touches column j.
        for r in (i + 1)..n {
            if used[r] {
                continue;
            }
            let f = a[(r, j)] / p;
            if f != ZERO {
                l[(r, i)] = f;
            }
            a[(r, j)] = ZERO;
        }
    }

    let w = SignedPermutation::from_permutation(perm);
    let mut h_diag = vec![ZERO; n];
    for i in 0..n {
        let s = f64::from(w.signs()[i]);
        h_diag[w.permutation()[i]] = pivots[i] * s;
    }
    Ok(BirkhoffFactors { l, w, h: diag(&h_diag), u_plus })
}

/// Result of `g = l · a · u`.
#[derive(Debug, Clone)]
pub struct IwasawaFactors {
    /// Lower unipotent.
    pub l: CMatrix,
    /// Positive real diagonal.
    pub a: CMatrix,
    /// Special unitary.
    pub u: CMatrix,
}

impl IwasawaFactors {
    pub fn reconstruct(&self) -> CMatrix {
        &self.l * &self.a * &self.u
    }
}

/// Iwasawa factorization `G ≅ N⁻ × A × U`.
///
/// `g g* = L L*` with `L` lower triangular with positive diagonal; then
/// `a = diag(L)`, `l = L a⁻¹` and `u = L⁻¹ g`.
pub fn iwasawa_factor(g: &CMatrix, tol: f64) -> Result<IwasawaFactors> {
    let n = require_square(g, "iwasawa input")?;
    require_unimodular(g, tol)?;
    let gram = g * g.adjoint();
    let chol = cholesky_lower(&gram).map_err(|e| match e {
        Error::NotPositiveDefinite { index, pivot } => Error::SingularInput(format!(
            "g g* not positive definite (pivot {pivot:e} at {index})"
        )),
        other => other,
    })?;
    let a_diag: Vec<f64> = (0..n).map(|k| chol[(k, k)].re).collect();
    let inv_a: Vec<f64> = a_diag.iter().map(|x| 1.0 / x).collect();
    let l = &chol * real_diag(&inv_a);
    let u = chol
        .solve_lower_triangular(g)
        .ok_or_else(|| Error::SingularInput("triangular solve failed".into()))?;
    Ok(IwasawaFactors { l, a: real_diag(&a_diag), u })
}

/// Lower Cholesky factor with positive real diagonal of a Hermitian positive
/// definite matrix.
pub fn cholesky_lower(p: &CMatrix) -> Result<CMatrix> {
    let n = require_square(p, "cholesky input")?;
    let scale = (0..n).fold(0.0f64, |acc, k| acc.max(p[(k, k)].re.abs()));
    let floor = scale * 1e-14;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = p[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > floor) {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::from(djj);
        for i in (j + 1)..n {
            let mut s = p[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Eigendecomposition `p = V diag(λ) V*` of a Hermitian matrix, eigenvalues
/// ascending.
pub fn hermitian_eigen(p: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = hermitian_part(p);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(p.nrows(), p.ncols(), |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

fn hpd_function(p: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    require_square(p, "hermitian input")?;
    let (values, v) = hermitian_eigen(p);
    let top = values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if let Some((index, &pivot)) =
        values.iter().enumerate().find(|(_, &x)| !(x > top * 1e-15) || x <= 0.0)
    {
        return Err(Error::NotPositiveDefinite { index, pivot });
    }
    let mapped: Vec<f64> = values.into_iter().map(f).collect();
    Ok(&v * real_diag(&mapped) * v.adjoint())
}

/// `p^{-1/2}` for Hermitian positive definite `p`.
pub fn inv_sqrt_hpd(p: &CMatrix) -> Result<CMatrix> {
    hpd_function(p, |x| 1.0 / x.sqrt())
}

/// `p^{1/2}` for Hermitian positive definite `p`.
pub fn sqrt_hpd(p: &CMatrix) -> Result<CMatrix> {
    hpd_function(p, f64::sqrt)
}

/// Polar decomposition `A = pos · unit` with `pos = (A A*)^{1/2}`.
pub fn polar_factor(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    require_square(a, "polar input")?;
    let gram = a * a.adjoint();
    let pos = sqrt_hpd(&gram).map_err(|_| Error::SingularInput("A A* is singular".into()))?;
    let inv = inv_sqrt_hpd(&gram).map_err(|_| Error::SingularInput("A A* is singular".into()))?;
    let unit = inv * a;
    Ok((pos, unit))
}

/// Determinants of the leading `k × k` blocks, `k = 1..=n`.
pub fn principal_minors(g: &CMatrix) -> Vec<Complex64> {
    let n = g.nrows().min(g.ncols());
    (1..=n).map(|k| g.view((0, 0), (k, k)).into_owned().determinant()).collect()
}

/// `exp(A)` for anti-Hermitian `A`, through the eigendecomposition of `iA`.
pub fn expm_skew_hermitian(a: &CMatrix) -> CMatrix {
    let h = a.map(|z| z * I);
    let (values, v) = hermitian_eigen(&h);
    let phases: Vec<Complex64> = values.iter().map(|&x| Complex64::from_polar(1.0, -x)).collect();
    &v * diag(&phases) * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: [[f64; 2]; 2]) -> CMatrix {
        CMatrix::from_fn(2, 2, |r, c| Complex64::from(a[r][c]))
    }

    #[test]
    fn birkhoff_identity() {
        let f = birkhoff_factor(&identity(3), DEFAULT_TOL).unwrap();
        assert!(f.w.is_identity());
        assert_eq!(f.l, identity(3));
        assert_eq!(f.h, identity(3));
        assert_eq!(f.u_plus, identity(3));
    }

    #[test]
    fn birkhoff_transposition_representative() {
        let g = m2([[0.0, 1.0], [-1.0, 0.0]]);
        let f = birkhoff_factor(&g, DEFAULT_TOL).unwrap();
        assert_eq!(f.w.permutation(), &[1, 0]);
        assert_eq!(f.w.signs(), &[1, -1]);
        assert_eq!(f.w.to_matrix(), g);
        assert_eq!(f.l, identity(2));
        assert_eq!(f.h, identity(2));
        assert_eq!(f.u_plus, identity(2));
    }

    #[test]
    fn signed_permutation_has_unit_determinant() {
        for perm in [vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1], vec![2, 1, 0], vec![0, 2, 1]] {
            let w = SignedPermutation::from_permutation(perm);
            let det = w.to_matrix().determinant();
            assert!((det - ONE).norm() < 1e-15, "{w}");
        }
    }

    #[test]
    fn birkhoff_rejects_singular_and_non_unimodular() {
        let z = CMatrix::zeros(2, 2);
        assert!(matches!(birkhoff_factor(&z, DEFAULT_TOL), Err(Error::SingularInput(_))));
        let g = real_diag(&[2.0, 1.0]);
        assert!(matches!(birkhoff_factor(&g, DEFAULT_TOL), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn birkhoff_flags_ambiguous_pivot() {
        let eps = 1e-8;
        // leading entry sits inside the ambiguity band for tol = 1e-9
        let g = CMatrix::from_fn(2, 2, |r, col| match (r, col) {
            (0, 0) => Complex64::from(eps),
            (0, 1) => ONE,
            (1, 0) => -ONE,
            _ => ZERO,
        });
        let err = birkhoff_factor(&g, DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::StratumAmbiguous { step: 0, .. }), "{err:?}");
    }

    #[test]
    fn iwasawa_of_positive_diagonal() {
        let g = real_diag(&[2.0, 0.5]);
        let f = iwasawa_factor(&g, DEFAULT_TOL).unwrap();
        assert!(max_abs(&(&f.l - identity(2))) < 1e-15);
        assert!(max_abs(&(&f.a - &g)) < 1e-15);
        assert!(max_abs(&(&f.u - identity(2))) < 1e-15);
    }

    #[test]
    fn iwasawa_of_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = CMatrix::from_fn(2, 2, |r, col| match (r, col) {
            (0, 0) => c(s, 0.0),
            (0, 1) => c(0.0, s),
            (1, 0) => c(0.0, s),
            _ => c(s, 0.0),
        });
        let f = iwasawa_factor(&g, DEFAULT_TOL).unwrap();
        assert!(max_abs(&(&f.l - identity(2))) < 1e-14);
        assert!(max_abs(&(&f.a - identity(2))) < 1e-14);
        assert!(max_abs(&(&f.u - &g)) < 1e-14);
    }

    #[test]
    fn inv_sqrt_of_diagonal() {
        let s = inv_sqrt_hpd(&real_diag(&[4.0, 1.0])).unwrap();
        assert!(max_abs(&(s - real_diag(&[0.5, 1.0]))) < 1e-15);
        let s = inv_sqrt_hpd(&identity(3)).unwrap();
        assert!(max_abs(&(s - identity(3))) < 1e-15);
    }

    #[test]
    fn inv_sqrt_rejects_indefinite() {
        let err = inv_sqrt_hpd(&real_diag(&[1.0, -1.0])).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
        assert!(cholesky_lower(&real_diag(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn polar_of_diagonal_and_unitary() {
        let a = real_diag(&[3.0, 1.0 / 3.0]);
        let (pos, unit) = polar_factor(&a).unwrap();
        assert!(max_abs(&(pos - &a)) < 1e-14);
        assert!(max_abs(&(unit - identity(2))) < 1e-14);

        let u = m2([[0.0, 1.0], [-1.0, 0.0]]);
        let (pos, unit) = polar_factor(&u).unwrap();
        assert!(max_abs(&(pos - identity(2))) < 1e-14);
        assert!(max_abs(&(unit - u)) < 1e-14);
        assert!(matches!(polar_factor(&CMatrix::zeros(2, 2)), Err(Error::SingularInput(_))));
    }

    #[test]
    fn principal_minors_examples() {
        assert_eq!(principal_minors(&identity(3)), vec![ONE; 3]);
        let m = principal_minors(&m2([[0.0, 1.0], [-1.0, 0.0]]));
        assert_eq!(m, vec![ZERO, ONE]);
    }

    #[test]
    fn exp_of_diagonal_skew() {
        let a = diag(&[c(0.0, 0.3), c(0.0, -0.3)]);
        let e = expm_skew_hermitian(&a);
        assert!((e[(0, 0)] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert!((e[(1, 1)] - Complex64::from_polar(1.0, -0.3)).norm() < 1e-15);
    }
}
