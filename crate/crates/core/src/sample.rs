//! Seeded random samples of group elements, tangent vectors and chart points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{expm_skew_hermitian, principal_minors, CMatrix, ONE};
use crate::symspace::{block_diag, su_basis, SymmetricSpace};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut SampleRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian(rng: &mut SampleRng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

pub fn complex_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Gaussian matrix rescaled to determinant one.
pub fn sl(rng: &mut SampleRng, n: usize) -> CMatrix {
    loop {
        let g = complex_matrix(rng, n, n);
        let det = g.determinant();
        if det.norm() > 1e-6 {
            return g.map(|z| z / det.powf(1.0 / n as f64));
        }
    }
}

/// Haar-distributed unitary rescaled to determinant one.
pub fn su(rng: &mut SampleRng, n: usize) -> CMatrix {
    let qr = complex_matrix(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 0.0 { d / d.norm() } else { ONE }
        } else {
            Complex64::from(0.0)
        }
    });
    let u = q * phases;
    let det = u.determinant();
    u.map(|z| z / det.powf(1.0 / n as f64))
}

/// Traceless anti-Hermitian matrix with Gaussian coordinates.
pub fn su_algebra(rng: &mut SampleRng, n: usize) -> CMatrix {
    su_basis(n)
        .into_iter()
        .fold(CMatrix::zeros(n, n), |acc, b| acc + b.scale(gaussian(rng)))
}

/// A random point of `U`, as carried by the presentation.
pub fn group_element(space: &SymmetricSpace, rng: &mut SampleRng) -> CMatrix {
    match *space {
        SymmetricSpace::Grassmannian { m, n } => su(rng, m + n),
        SymmetricSpace::GroupCase { n } => block_diag(&su(rng, n), &su(rng, n)),
    }
}

/// A random element of `K`, as `exp` of a random element of `𝔨`.
pub fn k_element(space: &SymmetricSpace, rng: &mut SampleRng) -> CMatrix {
    let d = space.ambient_dim();
    let x = space.project_k(&complex_matrix(rng, d, d));
    let tr = x.trace() / d as f64;
    let x = CMatrix::from_fn(d, d, |i, j| if i == j { x[(i, j)] - tr } else { x[(i, j)] });
    expm_skew_hermitian(&x)
}

/// Random element of `i𝔭` with Gaussian coordinates.
pub fn ip_element(space: &SymmetricSpace, rng: &mut SampleRng) -> CMatrix {
    let coords: Vec<f64> = (0..space.dim_ip()).map(|_| gaussian(rng)).collect();
    space.from_ip_coords(&coords)
}

/// Gaussian `n × m` chart point scaled by `scale`.
pub fn chart_point(rng: &mut SampleRng, n: usize, m: usize, scale: f64) -> CMatrix {
    complex_matrix(rng, n, m).scale(scale)
}

/// Random `u` whose Cartan image has every leading minor at least `margin` in modulus.
pub fn top_layer_point(space: &SymmetricSpace, rng: &mut SampleRng, margin: f64) -> CMatrix {
    loop {
        let u = group_element(space, rng);
        let phi = space.cartan_embed(&u);
        if principal_minors(&phi).iter().all(|m| m.norm() >= margin) {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, unitarity_residual};

    #[test]
    fn samples_satisfy_group_constraints() {
        let mut r = rng(7);
        for n in 2..5 {
            let g = sl(&mut r, n);
            assert!((g.determinant() - ONE).norm() < 1e-12);
            let u = su(&mut r, n);
            assert!(unitarity_residual(&u) < 1e-13);
            assert!((u.determinant() - ONE).norm() < 1e-12);
        }
        let space = SymmetricSpace::grassmannian(2, 1);
        let k = k_element(&space, &mut r);
        assert!(unitarity_residual(&k) < 1e-13);
        assert!(max_abs(&(space.theta(&k) - &k)) < 1e-13);
        assert!((k.determinant() - ONE).norm() < 1e-12);
    }

    #[test]
    fn seeding_is_deterministic() {
        assert_eq!(sl(&mut rng(3), 3), sl(&mut rng(3), 3));
    }
}
