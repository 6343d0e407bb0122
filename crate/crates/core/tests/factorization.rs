use bp_core::linalg::{
    birkhoff_factor, c, cholesky_lower, hermitian_eigen, identity, inv_sqrt_hpd, iwasawa_factor, max_abs,
    polar_factor, principal_minors, unitarity_residual, CMatrix, ONE, ZERO,
};
use bp_core::sample;
use num_complex::Complex64;
use proptest::prelude::*;

fn cofactor_det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = ZERO;
    for j in 0..n {
        let minor: Vec<Vec<Complex64>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect()).collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += m[0][j] * cofactor_det(&minor) * sign;
    }
    acc
}

fn is_lower_unipotent(l: &CMatrix) -> bool {
    (0..l.nrows()).all(|i| l[(i, i)] == ONE && ((i + 1)..l.ncols()).all(|j| l[(i, j)] == ZERO))
}

#[test]
fn birkhoff_roundtrip_random_dims() {
    let mut rng = sample::rng(101);
    for trial in 0..1000 {
        let n = 2 + trial % 5;
        let g = sample::sl(&mut rng, n);
        let f = birkhoff_factor(&g, 1e-9).unwrap();
        assert!(f.w.is_identity());
        assert!(is_lower_unipotent(&f.l));
        assert!(is_lower_unipotent(&f.u_plus.transpose()));
        let det_h: Complex64 = f.h_diagonal().iter().product();
        assert!((det_h - ONE).norm() < 1e-9);
        assert!(max_abs(&(f.reconstruct() - &g)) <= 1e-10 * g.norm());
    }
}

#[test]
fn birkhoff_recovers_planted_weyl_element() {
    let mut rng = sample::rng(5);
    for perm in [vec![1, 0, 2], vec![2, 0, 1], vec![0, 2, 1], vec![2, 1, 0], vec![1, 3, 0, 2]] {
        let n = perm.len();
        let w = bp_core::SignedPermutation::from_permutation(perm);
        let mut l = identity(n);
        let mut u = identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = sample::complex_gaussian(&mut rng);
                u[(j, i)] = sample::complex_gaussian(&mut rng);
            }
        }
        let g = l * w.to_matrix() * u;
        let f = birkhoff_factor(&g, 1e-9).unwrap();
        assert_eq!(f.w, w);
        assert!(max_abs(&(f.reconstruct() - &g)) <= 1e-10 * g.norm());
        assert!(is_lower_unipotent(&f.l));
    }
}

#[test]
fn iwasawa_roundtrip_and_uniqueness() {
    let mut rng = sample::rng(202);
    for trial in 0..500 {
        let n = 2 + trial % 4;
        let g = sample::sl(&mut rng, n);
        let f = iwasawa_factor(&g, 1e-9).unwrap();
        assert!(max_abs(&(f.reconstruct() - &g)) <= 1e-11 * g.norm());
        assert!(unitarity_residual(&f.u) < 1e-12);
        assert!((f.u.determinant() - ONE).norm() < 1e-10);
        for k in 0..n {
            assert!(f.a[(k, k)].im == 0.0 && f.a[(k, k)].re > 0.0);
        }
        let again = iwasawa_factor(&f.reconstruct(), 1e-9).unwrap();
        assert!(max_abs(&(&again.l - &f.l)) <= 1e-10);
        assert!(max_abs(&(&again.a - &f.a)) <= 1e-10);
        assert!(max_abs(&(&again.u - &f.u)) <= 1e-10);
    }
}

#[test]
fn iwasawa_of_special_unitary_is_trivial() {
    let mut rng = sample::rng(3);
    for n in 2..6 {
        let u = sample::su(&mut rng, n);
        let f = iwasawa_factor(&u, 1e-9).unwrap();
        assert!(max_abs(&(f.l - identity(n))) < 1e-12);
        assert!(max_abs(&(f.a - identity(n))) < 1e-12);
        assert!(max_abs(&(f.u - &u)) < 1e-12);
    }
}

#[test]
fn inverse_square_root_residual() {
    let mut rng = sample::rng(4);
    for n in 1..7 {
        let q = sample::complex_matrix(&mut rng, n, n);
        let p = &q * q.adjoint() + identity(n).scale(0.1);
        let s = inv_sqrt_hpd(&p).unwrap();
        assert!(max_abs(&(&s - s.adjoint())) < 1e-12);
        assert!(max_abs(&(&s * &p * &s - identity(n))) <= 1e-11);
    }
}

#[test]
fn polar_factor_properties() {
    let mut rng = sample::rng(6);
    for n in 1..6 {
        let a = sample::complex_matrix(&mut rng, n, n);
        let (pos, unit) = polar_factor(&a).unwrap();
        assert!(max_abs(&(&pos * &unit - &a)) <= 1e-11 * a.norm());
        assert!(unitarity_residual(&unit) < 1e-11);
        assert!(max_abs(&(&pos - pos.adjoint())) < 1e-12);
        let (eig, _) = hermitian_eigen(&pos);
        let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        for (x, y) in eig.iter().zip(&sv) {
            assert!((x - y).abs() <= 1e-10, "{x} {y}");
        }
    }
}

#[test]
fn principal_minors_match_cofactor_expansion() {
    let mut rng = sample::rng(8);
    for n in 1..6 {
        let g = sample::complex_matrix(&mut rng, n, n);
        let minors = principal_minors(&g);
        for k in 1..=n {
            let rows: Vec<Vec<Complex64>> = (0..k).map(|i| (0..k).map(|j| g[(i, j)]).collect()).collect();
            let expect = cofactor_det(&rows);
            assert!((minors[k - 1] - expect).norm() <= 1e-12 * expect.norm().max(1.0));
        }
    }
}

#[test]
fn unipotent_minors_are_one() {
    let mut rng = sample::rng(9);
    let mut l = identity(5);
    for i in 0..5 {
        for j in 0..i {
            l[(i, j)] = sample::complex_gaussian(&mut rng);
        }
    }
    for m in principal_minors(&l).into_iter().chain(principal_minors(&l.adjoint())) {
        assert!((m - ONE).norm() <= 1e-12);
    }
}

#[test]
fn cholesky_is_lower_with_positive_diagonal() {
    let p = CMatrix::from_row_slice(2, 2, &[c(4.0, 0.0), c(2.0, 2.0), c(2.0, -2.0), c(6.0, 0.0)]);
    let l = cholesky_lower(&p).unwrap();
    assert_eq!(l[(0, 1)], ZERO);
    assert!(l[(0, 0)].re > 0.0 && l[(1, 1)].re > 0.0);
    assert!(max_abs(&(&l * l.adjoint() - &p)) < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn birkhoff_roundtrip_prop(seed in any::<u64>(), n in 2usize..7) {
        let g = sample::sl(&mut sample::rng(seed), n);
        let f = birkhoff_factor(&g, 1e-9).unwrap();
        prop_assert!(max_abs(&(f.reconstruct() - &g)) <= 1e-10 * g.norm());
    }

    #[test]
    fn iwasawa_roundtrip_prop(seed in any::<u64>(), n in 2usize..7) {
        let g = sample::sl(&mut sample::rng(seed), n);
        let f = iwasawa_factor(&g, 1e-9).unwrap();
        prop_assert!(max_abs(&(f.reconstruct() - &g)) <= 1e-10 * g.norm());
    }
}
