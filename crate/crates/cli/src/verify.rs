//! Verification suites behind `bp verify`.
//!
//! Every suite draws its samples from a stream derived from the seed and a
//! fixed per-check tag, so a suite gives the same numbers alone or inside
//! `all`.

use std::fmt;

use bp_core::linalg::{birkhoff_factor, identity, iwasawa_factor, max_abs, principal_minors};
use bp_core::momentum::{hamiltonian_residual, moment_eval};
use bp_core::poisson::group::{
    pi_lw_group, su2_basis, su2_el_closed_form, su2_el_coefficients, su2_element, su2_lw_closed_form,
    su2_lw_coefficients,
};
use bp_core::poisson::local::{
    cp1_family, cp2_p, grassmann_l_z, grassmann_local_pi, ChartPullback, CHART_FD_STEP,
};
use bp_core::poisson::{
    column_span, jacobi_residual, max_principal_angle, orbit_tangent_matrix, pi_el_group, pi_rank, BivectorOperator,
};
use bp_core::sample::{self, SampleRng};
use bp_core::strata::torus_tw;
use bp_core::symspace::{block_diag, canonical_rep, column, su_basis, SymmetricSpace};
use bp_core::{CMatrix, SignedPermutation};
use clap::ValueEnum;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::preset::Preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Factorization,
    Embedding,
    Bivector,
    LocalVsEquivariant,
    Jacobi,
    LambdaIdentity,
    Degeneracy,
    Momentum,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Factorization,
        Suite::Embedding,
        Suite::Bivector,
        Suite::LocalVsEquivariant,
        Suite::Jacobi,
        Suite::LambdaIdentity,
        Suite::Degeneracy,
        Suite::Momentum,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        write!(f, "{}", v.get_name())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: f64,
    pub fd_step: f64,
    pub preset: Option<Preset>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, tol: bp_core::linalg::DEFAULT_TOL, fd_step: 1e-5, preset: None }
    }
}

impl VerifyConfig {
    fn rng(&self, tag: u64) -> SampleRng {
        sample::rng(self.seed ^ (tag << 40))
    }

    fn presets(&self, defaults: &[&str], accept: impl Fn(&Preset) -> bool) -> Vec<Preset> {
        match self.preset {
            Some(p) if accept(&p) => vec![p],
            Some(_) => Vec::new(),
            None => defaults.iter().map(|s| s.parse().expect("built-in preset")).collect(),
        }
    }
}

/// One measured quantity against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(suite: Suite, name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { suite: suite.to_string(), name: name.into(), value, threshold, pass: value <= threshold }
    }

    /// Count of failing samples, which must be zero.
    pub fn none_failed(suite: Suite, name: impl Into<String>, failures: usize) -> Self {
        Self::le(suite, name, failures as f64, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub config: VerifyConfigSnapshot,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfigSnapshot {
    pub seed: u64,
    pub tol: f64,
    pub fd_step: f64,
    pub preset: Option<String>,
}

impl Report {
    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.to_string(),
            "config": self.config,
            "pass": self.pass(),
            "checks": self.checks,
        })
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> CliResult<Report> {
    let checks: Vec<Check> = match suite {
        Suite::All => Suite::ALL.iter().flat_map(|&s| suite_checks(s, cfg)).collect(),
        s => suite_checks(s, cfg),
    };
    if checks.is_empty() {
        let preset = cfg.preset.map(|p| p.to_string()).unwrap_or_default();
        return Err(CliError::Usage(format!("suite {suite} has no checks for preset {preset}")));
    }
    let config = VerifyConfigSnapshot {
        seed: cfg.seed,
        tol: cfg.tol,
        fd_step: cfg.fd_step,
        preset: cfg.preset.map(|p| p.to_string()),
    };
    Ok(Report { suite, config, checks })
}

fn suite_checks(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    match suite {
        Suite::Factorization => factorization(cfg),
        Suite::Embedding => embedding(cfg),
        Suite::Bivector => [rank(cfg), tangency(cfg), group_case(cfg)].concat(),
        Suite::LocalVsEquivariant => local_vs_equivariant(cfg),
        Suite::Jacobi => jacobi(cfg, &["cp2", "gr:2,2", "cp1", "fothlu"]),
        Suite::LambdaIdentity => lambda_identity(cfg),
        Suite::Degeneracy => degeneracy(cfg),
        Suite::Momentum => momentum(cfg),
        Suite::All => unreachable!("expanded by run"),
    }
}

/// Birkhoff and Iwasawa roundtrips and Iwasawa idempotence on `SL(n, C)`.
pub fn factorization(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Factorization;
    let mut out = Vec::new();
    for (tag, n) in [2usize, 3, 4, 6].into_iter().enumerate() {
        let mut rng = cfg.rng(100 + tag as u64);
        let (mut birkhoff, mut iwasawa, mut idem) = (0.0f64, 0.0f64, 0.0f64);
        let mut failures = 0;
        for _ in 0..250 {
            let g = sample::sl(&mut rng, n);
            let norm = g.norm();
            match (birkhoff_factor(&g, cfg.tol), iwasawa_factor(&g, cfg.tol)) {
                (Ok(b), Ok(f)) => {
                    birkhoff = birkhoff.max(max_abs(&(b.reconstruct() - &g)) / norm);
                    iwasawa = iwasawa.max(max_abs(&(f.reconstruct() - &g)) / norm);
                    match iwasawa_factor(&f.reconstruct(), cfg.tol) {
                        Ok(again) => {
                            let d = max_abs(&(&again.l - &f.l))
                                .max(max_abs(&(&again.a - &f.a)))
                                .max(max_abs(&(&again.u - &f.u)));
                            idem = idem.max(d);
                        }
                        Err(_) => failures += 1,
                    }
                }
                _ => failures += 1,
            }
        }
        out.push(Check::none_failed(s, format!("n{n}_factorization_errors"), failures));
        out.push(Check::le(s, format!("n{n}_birkhoff_relative_residual"), birkhoff, 1e-10));
        out.push(Check::le(s, format!("n{n}_iwasawa_relative_residual"), iwasawa, 1e-10));
        out.push(Check::le(s, format!("n{n}_iwasawa_refactor_drift"), idem, 1e-10));
    }
    out
}

/// `φ* = θ(φ)` and `φ φ* = 1` on random points.
pub fn embedding(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Embedding;
    let mut out = Vec::new();
    let presets = cfg.presets(&["cp1", "cp2", "cpn:3", "gr:2,2", "gr:2,3", "group:su2"], |p| p.space().is_some());
    for (tag, preset) in presets.into_iter().enumerate() {
        let space = preset.space().expect("filtered");
        let mut rng = cfg.rng(200 + tag as u64);
        let (mut sym, mut unit) = (0.0f64, 0.0f64);
        let d = space.ambient_dim();
        for _ in 0..1000 {
            let u = sample::group_element(&space, &mut rng);
            let phi = space.cartan_embed(&u);
            sym = sym.max((phi.adjoint() - space.theta(&phi)).norm());
            unit = unit.max((&phi * phi.adjoint() - identity(d)).norm());
        }
        out.push(Check::le(s, format!("{preset}_symmetry"), sym, 1e-10));
        out.push(Check::le(s, format!("{preset}_unitarity"), unit, 1e-10));
    }
    out
}

/// Chart point `t·Z` at which the leading entry of `φ(u(tZ)K)` vanishes, found
/// by bisection on `t`.
pub fn first_minor_root(space: &SymmetricSpace, z: &CMatrix) -> CMatrix {
    let f = |t: f64| space.cartan_embed(&canonical_rep(&z.scale(t)))[(0, 0)].re;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    z.scale(0.5 * (lo + hi))
}

fn unit_phase(rng: &mut SampleRng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Rank `dim i𝔭` on the top layer and rank drops on the degeneracy loci.
pub fn rank(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Bivector;
    let mut out = Vec::new();
    let presets = cfg.presets(&["cp1", "cp2", "gr:2,2"], |p| matches!(p, Preset::Grassmannian { .. } | Preset::GroupSu2 | Preset::Su2));
    for (tag, preset) in presets.iter().enumerate() {
        let space = preset.space().expect("filtered");
        let mut rng = cfg.rng(300 + tag as u64);
        let misses = (0..100)
            .filter(|_| pi_rank(&space, &sample::top_layer_point(&space, &mut rng, 1e-3), cfg.tol) != space.dim_ip())
            .count();
        out.push(Check::none_failed(s, format!("{preset}_top_layer_rank_misses"), misses));
    }
    let wants = |name: &str| cfg.preset.is_none_or(|p| p == name.parse().expect("built-in preset"));
    if wants("cp1") {
        let mut rng = cfg.rng(310);
        let space = SymmetricSpace::projective(1);
        let full = (0..20)
            .filter(|_| pi_rank(&space, &canonical_rep(&column(&[unit_phase(&mut rng)])), cfg.tol) == space.dim_ip())
            .count();
        out.push(Check::none_failed(s, "cp1_equator_full_rank", full));
    }
    if wants("cp2") {
        let mut rng = cfg.rng(311);
        let space = SymmetricSpace::projective(2);
        let (mut sphere, mut hyperboloid) = (0, 0);
        for _ in 0..20 {
            let t: f64 = rng.gen_range(0.05..1.5);
            let (r1, r2) = (t.cos(), t.sin());
            let z = [unit_phase(&mut rng) * r1, unit_phase(&mut rng) * r2];
            sphere += usize::from(pi_rank(&space, &canonical_rep(&column(&z)), cfg.tol) == 4);
            let r1: f64 = rng.gen_range(0.0..2.0f64);
            let z = [unit_phase(&mut rng) * r1, unit_phase(&mut rng) * (1.0 + r1 * r1).sqrt()];
            hyperboloid += usize::from(pi_rank(&space, &canonical_rep(&column(&z)), cfg.tol) == 4);
        }
        out.push(Check::none_failed(s, "cp2_unit_sphere_full_rank", sphere));
        out.push(Check::none_failed(s, "cp2_hyperboloid_full_rank", hyperboloid));
    }
    if wants("gr:2,2") {
        let mut rng = cfg.rng(312);
        let space = SymmetricSpace::grassmannian(2, 2);
        let full = (0..20)
            .filter(|_| {
                let z = first_minor_root(&space, &sample::chart_point(&mut rng, 2, 2, 1.0));
                pi_rank(&space, &canonical_rep(&z), cfg.tol) == space.dim_ip()
            })
            .count();
        out.push(Check::none_failed(s, "gr:2,2_first_minor_locus_full_rank", full));
    }
    if wants("su2") || wants("group:su2") {
        let mut rng = cfg.rng(313);
        let space = SymmetricSpace::group_case(2);
        let basis = su_basis(2);
        let (mut worst, mut full) = (0.0f64, 0);
        for _ in 0..20 {
            let k = su2_element(Complex64::new(0.0, 0.0), unit_phase(&mut rng));
            for p in &basis {
                for q in &basis {
                    worst = worst.max(pi_el_group(&k, p, q).abs());
                }
            }
            full += usize::from(pi_rank(&space, &block_diag(&k, &identity(2)), cfg.tol) != 0);
        }
        out.push(Check::le(s, "su2_el_at_a_zero", worst, 1e-14));
        out.push(Check::none_failed(s, "group:su2_a_zero_nonzero_rank", full));
    }
    out
}

/// Image of `π♮` against the tangent space of the `G₀`-orbit.
pub fn tangency(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Bivector;
    let mut out = Vec::new();
    let presets = cfg.presets(&["cp1", "cp2", "gr:2,2", "group:su2"], |p| p.space().is_some());
    for (tag, preset) in presets.iter().enumerate() {
        let space = preset.space().expect("filtered");
        let mut rng = cfg.rng(400 + tag as u64);
        let (mut angle, mut mismatched) = (0.0f64, 0);
        for _ in 0..100 {
            let u = sample::group_element(&space, &mut rng);
            let a = column_span(&BivectorOperator::new(&space, &u).matrix, cfg.tol);
            let b = column_span(&orbit_tangent_matrix(&space, &u), cfg.tol);
            match max_principal_angle(&a, &b) {
                Some(t) => angle = angle.max(t),
                None => mismatched += 1,
            }
        }
        out.push(Check::none_failed(s, format!("{preset}_leaf_rank_mismatches"), mismatched));
        out.push(Check::le(s, format!("{preset}_leaf_principal_angle"), angle, 1e-8));
    }
    out
}

/// Displayed `SU(2)` coefficients of the Evens-Lu and Lu-Weinstein structures.
pub fn group_case(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Bivector;
    if cfg.preset.is_some_and(|p| !matches!(p, Preset::Su2 | Preset::GroupSu2)) {
        return Vec::new();
    }
    let mut rng = cfg.rng(500);
    let (mut el, mut lw, mut torus) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let v: Vec<f64> = (0..4).map(|_| sample::gaussian(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (a, b) = (Complex64::new(v[0], v[1]) / norm, Complex64::new(v[2], v[3]) / norm);
        let k = su2_element(a, b);
        for (x, y) in su2_el_coefficients(&k).iter().zip(su2_el_closed_form(a, b)) {
            el = el.max((x - y).abs());
        }
        for (x, y) in su2_lw_coefficients(&k).iter().zip(su2_lw_closed_form(a, b)) {
            lw = lw.max((x - y).abs());
        }
    }
    let basis = su2_basis();
    for _ in 0..20 {
        let k = su2_element(unit_phase(&mut rng), Complex64::new(0.0, 0.0));
        for p in &basis {
            for q in &basis {
                torus = torus.max(pi_lw_group(&k, p, q).abs());
            }
        }
    }
    vec![
        Check::le(s, "su2_el_coefficients", el, 1e-12),
        Check::le(s, "su2_lw_coefficients", lw, 1e-12),
        Check::le(s, "su2_lw_on_diagonal_torus", torus, 1e-12),
    ]
}

/// Chart formula against the pulled-back equivariant bivector, with one
/// calibration constant fixed at a reference point.
pub fn local_vs_equivariant(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::LocalVsEquivariant;
    let mut out = Vec::new();
    let presets = cfg.presets(&["cp1", "gr:1,2", "gr:2,2"], |p| matches!(p, Preset::Grassmannian { .. }));
    for (tag, preset) in presets.iter().enumerate() {
        let Preset::Grassmannian { m, n } = *preset else { unreachable!() };
        let mut rng = cfg.rng(600 + tag as u64);
        let z0 = sample::chart_point(&mut rng, n, m, 0.5);
        let v0 = sample::complex_matrix(&mut rng, m, n);
        let w0 = sample::complex_matrix(&mut rng, m, n);
        let reference = ChartPullback::new(&z0, CHART_FD_STEP).pi(&v0, &w0);
        let calibration = match reference {
            Ok(b) => grassmann_local_pi(&z0, &v0, &w0) / b,
            Err(_) => f64::NAN,
        };
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let z = sample::chart_point(&mut rng, n, m, 0.7);
            let v = sample::complex_matrix(&mut rng, m, n);
            let w = sample::complex_matrix(&mut rng, m, n);
            let local = grassmann_local_pi(&z, &v, &w);
            let err = match ChartPullback::new(&z, CHART_FD_STEP).pi(&v, &w) {
                Ok(pulled) => (local - calibration * pulled).abs() / (grassmann_l_z(&z, &v).norm() * w.norm()),
                Err(_) => f64::INFINITY,
            };
            worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
        }
        out.push(Check::le(s, format!("{preset}_calibration_offset"), (calibration - 1.0).abs(), 1e-6));
        out.push(Check::le(s, format!("{preset}_relative_disagreement"), worst, 1e-8));
    }
    out
}

/// Finite-difference Schouten bracket of chart bivectors.
pub fn jacobi(cfg: &VerifyConfig, defaults: &[&str]) -> Vec<Check> {
    let s = Suite::Jacobi;
    let mut out = Vec::new();
    for (tag, preset) in cfg.presets(defaults, |p| p.coord_bivector().is_ok()).iter().enumerate() {
        let bivector = preset.coord_bivector().expect("filtered");
        let mut rng = cfg.rng(700 + tag as u64);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let x: Vec<f64> = (0..bivector.real_dim()).map(|_| 0.5 * sample::gaussian(&mut rng)).collect();
            worst = worst.max(jacobi_residual(bivector.as_ref(), &x, cfg.fd_step));
        }
        out.push(Check::le(s, format!("{preset}_jacobi_residual"), worst, 1e-5));
    }
    out
}

/// `π = π_PL − π_KKS` on `CP¹`, numerically and as an integer identity.
pub fn lambda_identity(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::LambdaIdentity;
    let mut rng = cfg.rng(800);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = sample::complex_gaussian(&mut rng) * std::f64::consts::FRAC_1_SQRT_2;
        let f = cp1_family(z);
        worst = worst.max((f.pi - (f.pi_pl - f.pi_kks)).norm());
    }
    // at z = (a + ib)/q, times q⁴: −(q⁴ − r⁴) = 2r(q² + r) − (q² + r)², r = a² + b²
    let mut mismatches = 0;
    for _ in 0..100 {
        let a: i128 = rng.gen_range(-1000..=1000);
        let b: i128 = rng.gen_range(-1000..=1000);
        let q: i128 = rng.gen_range(1..=1000);
        let (r, q2) = (a * a + b * b, q * q);
        let lhs = -(q2 * q2 - r * r);
        let rhs = 2 * r * (q2 + r) - (q2 + r) * (q2 + r);
        mismatches += usize::from(lhs != rhs);
    }
    vec![
        Check::le(s, "cp1_lambda_residual", worst, 1e-14),
        Check::none_failed(s, "cp1_lambda_rational_mismatches", mismatches),
    ]
}

/// Product of the leading minors of `φ` on `CP²` against `p/(1 + ‖Z‖²)³`.
pub fn degeneracy(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Degeneracy;
    if cfg.preset.is_some_and(|p| p != Preset::Grassmannian { m: 1, n: 2 }) {
        return Vec::new();
    }
    let space = SymmetricSpace::projective(2);
    let mut rng = cfg.rng(900);
    let (mut worst, mut imag) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let (z1, z2) = (sample::complex_gaussian(&mut rng), sample::complex_gaussian(&mut rng));
        let phi = space.cartan_embed(&canonical_rep(&column(&[z1, z2])));
        let product: Complex64 = principal_minors(&phi).iter().product();
        let expect = cp2_p(z1, z2) / (1.0 + z1.norm_sqr() + z2.norm_sqr()).powi(3);
        worst = worst.max((product.re - expect).abs() / expect.abs());
        imag = imag.max(product.im.abs());
    }
    vec![
        Check::le(s, "cp2_minor_product_relative_error", worst, 1e-10),
        Check::le(s, "cp2_minor_product_imaginary_part", imag, 1e-12),
    ]
}

/// `π♮(dμ_X) = X̃` on top layers and the `CP¹` closed form.
pub fn momentum(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Momentum;
    let mut out = Vec::new();
    let presets = cfg.presets(&["cp1", "cp2", "gr:2,2"], |p| p.space().is_some());
    for (tag, preset) in presets.iter().enumerate() {
        let space = preset.space().expect("filtered");
        let mut rng = cfg.rng(1000 + tag as u64);
        let torus = torus_tw(&SignedPermutation::identity(space.ambient_dim()), &space);
        let mut worst = 0.0f64;
        let cp1 = *preset == Preset::Grassmannian { m: 1, n: 1 };
        for _ in 0..50 {
            let u = if cp1 {
                let z = unit_phase(&mut rng) * 0.9 * rng.gen::<f64>();
                canonical_rep(&column(&[z]))
            } else {
                sample::top_layer_point(&space, &mut rng, 1e-2)
            };
            for x in &torus {
                let r = hamiltonian_residual(&space, &u, x, cfg.tol, cfg.fd_step).unwrap_or(f64::INFINITY);
                worst = worst.max(r);
            }
        }
        let threshold = if cp1 { 1e-5 } else { 1e-4 };
        out.push(Check::le(s, format!("{preset}_hamiltonian_residual"), worst, threshold));
        let fixed = moment_eval(&space, &identity(space.ambient_dim()), &torus[0], cfg.tol)
            .map(f64::abs)
            .unwrap_or(f64::INFINITY);
        out.push(Check::le(s, format!("{preset}_fixed_point_moment"), fixed, 1e-15));
        if cp1 {
            let h = &torus[0];
            // torus_tw is normalized; rescale to diag(i, −i)
            let scale = Complex64::new(0.0, 1.0) / h[(0, 0)];
            let h = h.map(|v| v * scale);
            let mut err = 0.0f64;
            for _ in 0..50 {
                let r = 0.95 * rng.gen::<f64>();
                let z = unit_phase(&mut rng) * r;
                let mu = moment_eval(&space, &canonical_rep(&column(&[z])), &h, cfg.tol).unwrap_or(f64::INFINITY);
                err = err.max((mu - ((1.0 + r * r) / (1.0 - r * r)).ln()).abs());
            }
            out.push(Check::le(s, "cp1_moment_closed_form", err, 1e-10));
        }
    }
    out
}
