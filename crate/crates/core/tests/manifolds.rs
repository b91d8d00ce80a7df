use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rfw::error::Error;
use rfw::manifold::{geodesic, Ambient, Manifold};
use rfw::manifolds::{Euclidean, Hyperboloid, Spd, Sphere};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn e(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

// ---------- fixed examples ----------

#[test]
fn sphere_inner_of_unit_tangent() {
    let s = Sphere::new(3).unwrap();
    assert_eq!(s.inner(&e(3, 0), &e(3, 1), &e(3, 1)), 1.0);
    assert_eq!(s.inner(&e(3, 0), &DVector::zeros(3), &e(3, 1)), 0.0);
}

#[test]
fn spd_inner_at_identity_is_frobenius() {
    let m = Spd::new(3).unwrap();
    let mut u = DMatrix::zeros(3, 3);
    u[(0, 1)] = 1.0 / 2f64.sqrt();
    u[(1, 0)] = 1.0 / 2f64.sqrt();
    assert_abs_diff_eq!(m.inner(&m.identity(), &u, &u), 1.0, epsilon = 1e-15);
}

#[test]
fn sphere_exp_examples() {
    let s = Sphere::new(3).unwrap();
    assert_eq!(s.exp(&e(3, 0), &DVector::zeros(3)).unwrap(), e(3, 0));
    let y = s.exp(&e(3, 0), &(e(3, 1) * FRAC_PI_2)).unwrap();
    assert_abs_diff_eq!(y, e(3, 1), epsilon = 1e-15);
}

#[test]
fn sphere_exp_beyond_pi_is_a_domain_error() {
    let s = Sphere::new(3).unwrap();
    assert!(matches!(s.exp(&e(3, 0), &(e(3, 1) * 3.2)), Err(Error::Domain(_))));
}

#[test]
fn euclidean_maps_are_affine() {
    let m = Euclidean::new(3).unwrap();
    let x = DVector::from_vec(vec![1.0, -2.0, 0.5]);
    let v = DVector::from_vec(vec![0.25, 4.0, -1.0]);
    assert_eq!(m.exp(&x, &v).unwrap(), &x + &v);
    assert_eq!(m.log(&x, &(&x + &v)).unwrap(), v);
    assert_eq!(m.transport(&x, &(&x + &v), &v).unwrap(), v);
}

#[test]
fn log_examples() {
    let s = Sphere::new(3).unwrap();
    assert_eq!(s.log(&e(3, 0), &e(3, 0)).unwrap(), DVector::zeros(3));
    assert_abs_diff_eq!(s.log(&e(3, 0), &e(3, 1)).unwrap(), e(3, 1) * FRAC_PI_2, epsilon = 1e-15);

    let m = Spd::new(3).unwrap();
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 2.0, 7.0]));
    let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5f64.ln(), 2f64.ln(), 7f64.ln()]));
    assert_abs_diff_eq!(m.log(&m.identity(), &d).unwrap(), expected, epsilon = 1e-13);
}

#[test]
fn sphere_log_rejects_antipodes() {
    let s = Sphere::new(3).unwrap();
    assert!(matches!(s.log(&e(3, 0), &(-e(3, 0))), Err(Error::Domain(_))));
    assert!(matches!(s.transport(&e(3, 0), &(-e(3, 0)), &e(3, 1)), Err(Error::Domain(_))));
}

#[test]
fn distance_examples() {
    let s = Sphere::new(3).unwrap();
    assert_abs_diff_eq!(s.dist(&e(3, 0), &e(3, 1)), FRAC_PI_2, epsilon = 1e-15);
    assert_abs_diff_eq!(s.dist(&e(3, 0), &(-e(3, 0))), PI, epsilon = 1e-15);
    assert_eq!(s.dist(&e(3, 2), &e(3, 2)), 0.0);

    let m = Spd::new(2).unwrap();
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1f64.exp(), 1.0]));
    assert_abs_diff_eq!(m.dist(&m.identity(), &d), 1.0, epsilon = 1e-14);

    let h = Hyperboloid::new(2).unwrap();
    let y = DVector::from_vec(vec![1f64.cosh(), 1f64.sinh(), 0.0]);
    assert_abs_diff_eq!(h.dist(&h.apex(), &y), 1.0, epsilon = 1e-14);
}

#[test]
fn spd_distance_between_scalar_matrices() {
    // √(Σ log² λᵢ) with every λᵢ = c.
    for (n, c) in [(2usize, 3.0f64), (4, 0.2), (5, 10.0)] {
        let m = Spd::new(n).unwrap();
        let y = m.identity() * c;
        assert_abs_diff_eq!(m.dist(&m.identity(), &y), (n as f64).sqrt() * c.ln().abs(), epsilon = 1e-12);
    }
}

/// Eigenvalues of `X⁻¹Y` through the Cholesky factor of `X`.
fn generalized_log_eigs(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let l = x.clone().cholesky().unwrap().l();
    let li = l.clone().try_inverse().unwrap();
    let c = &li * y * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    c.symmetric_eigenvalues().iter().map(|v| v.ln().powi(2)).sum::<f64>().sqrt()
}

#[test]
fn spd_distance_matches_generalized_eigenvalues() {
    let m = Spd::new(4).unwrap();
    let mut r = rng(11);
    for _ in 0..50 {
        let x = m.random_point(&mut r);
        let y = m.random_point(&mut r);
        let oracle = generalized_log_eigs(&x, &y);
        assert_abs_diff_eq!(m.dist(&x, &y), oracle, epsilon = 1e-9 * oracle.max(1.0));
    }
}

#[test]
fn sphere_distance_forms_agree() {
    let s = Sphere::new(5).unwrap();
    let mut r = rng(3);
    for _ in 0..200 {
        let x = s.random_point(&mut r);
        let y = s.random_point(&mut r);
        let chord = 2.0 * ((&y - &x).norm() / 2.0).asin();
        let arccos = x.dot(&y).clamp(-1.0, 1.0).acos();
        assert_abs_diff_eq!(s.dist(&x, &y), chord, epsilon = 1e-12);
        assert_abs_diff_eq!(s.dist(&x, &y), arccos, epsilon = 1e-7);
    }
}

#[test]
fn transport_examples() {
    let s = Sphere::new(3).unwrap();
    let (x, y) = (e(3, 0), e(3, 1));
    let u = e(3, 2) * 0.7;
    assert_eq!(s.transport(&x, &x, &u).unwrap(), u);
    // The velocity e₂ of the great circle e₁ → e₂ arrives as −e₁.
    let moved = s.transport(&x, &y, &(e(3, 1) * FRAC_PI_2)).unwrap();
    assert_abs_diff_eq!(moved, -e(3, 0) * FRAC_PI_2, epsilon = 1e-15);
    // The normal direction e₃ is left alone.
    assert_abs_diff_eq!(s.transport(&x, &y, &u).unwrap(), u, epsilon = 1e-15);
}

#[test]
fn geodesic_examples() {
    let s = Sphere::new(3).unwrap();
    let (x, y) = (e(3, 0), e(3, 1));
    assert_eq!(geodesic(&s, &x, &y, 0.0).unwrap(), x);
    assert_eq!(geodesic(&s, &x, &y, 1.0).unwrap(), y);
    let mid = geodesic(&s, &x, &y, 0.5).unwrap();
    assert_abs_diff_eq!(mid, (&x + &y) / 2f64.sqrt(), epsilon = 1e-15);
}

#[test]
fn project_tangent_examples() {
    let s = Sphere::new(3).unwrap();
    let x = e(3, 0);
    assert_eq!(s.project_tangent(&x, &x), DVector::zeros(3));
    assert_eq!(s.project_tangent(&x, &(&x + e(3, 1))), e(3, 1));
    let a = DVector::from_vec(vec![0.3, -1.0, 2.0]);
    let expected = (DMatrix::identity(3, 3) - &x * x.transpose()) * &a;
    assert_eq!(s.project_tangent(&x, &a), expected);
}

#[test]
fn dimension_below_two_is_rejected() {
    assert!(matches!(Sphere::new(1), Err(Error::Config(_))));
    assert!(matches!(Spd::new(1), Err(Error::Config(_))));
    assert!(matches!(Hyperboloid::new(0), Err(Error::Config(_))));
    assert!(matches!(Euclidean::new(1), Err(Error::Config(_))));
}

#[test]
fn curvature_info_of_builtin_manifolds() {
    let s = Sphere::new(3).unwrap().curvature();
    assert_eq!((s.kappa_min, s.kappa_max, s.nabla_r_bound, s.k()), (1.0, 1.0, 0.0, 1.0));
    let h = Hyperboloid::new(3).unwrap().curvature();
    assert_eq!((h.kappa_min, h.kappa_max, h.k()), (-1.0, -1.0, 1.0));
    let p = Spd::new(3).unwrap().curvature();
    assert_eq!(p.kappa_max, 0.0);
    assert!(p.kappa_min < 0.0);
    assert_eq!(Euclidean::new(3).unwrap().curvature().k(), 0.0);
}

#[test]
fn random_points_are_reproducible() {
    let s = Sphere::new(6).unwrap();
    let a = s.random_point(&mut rng(5));
    let b = s.random_point(&mut rng(5));
    assert_eq!(a.as_slice(), b.as_slice());
    let m = Spd::new(3).unwrap();
    assert_eq!(m.random_point(&mut rng(9)), m.random_point(&mut rng(9)));
}

#[test]
fn sphere_samples_have_zero_mean() {
    // Each coordinate of a uniform point on 𝕊ⁿ⁻¹ has variance 1/n.
    let n = 4;
    let s = Sphere::new(n).unwrap();
    let mut r = rng(21);
    let k = 10_000;
    let mut mean = DVector::zeros(n);
    for _ in 0..k {
        mean += s.random_point(&mut r);
    }
    mean /= k as f64;
    let sigma = (1.0 / (n as f64 * k as f64)).sqrt();
    for i in 0..n {
        assert!(mean[i].abs() < 3.0 * sigma, "coordinate {i}: {}", mean[i]);
    }
}

// ---------- property suite ----------

fn check_kernel<M: Manifold>(m: &M, seed: u64, scale: f64) {
    let mut r = rng(seed);
    let x = m.random_point(&mut r);
    let y0 = m.random_point(&mut r);
    assert!(m.embedding_residual(&x) <= 1e-10, "embedding residual {}", m.embedding_residual(&x));

    // Roundtrip with ‖v‖ ≤ 0.9 · injectivity radius.
    let u = m.random_tangent(&x, &mut r);
    assert!(m.tangent_residual(&x, &u) <= 1e-12 * m.norm(&x, &u).max(1.0));
    let cap = (0.9 * m.injectivity_radius()).min(scale);
    let un = m.norm(&x, &u);
    let v = u.scaled(cap * rand::Rng::random::<f64>(&mut r) / un);
    let back = m.log(&x, &m.exp(&x, &v).unwrap()).unwrap();
    assert!(m.norm(&x, &back.minus(&v)) <= 1e-8, "roundtrip error {}", m.norm(&x, &back.minus(&v)));

    // Keep pairs inside a comfortable range on the sphere.
    let y = if m.injectivity_radius().is_finite() && m.dist(&x, &y0) > 2.8 { x.clone() } else { y0 };
    let lxy = m.log(&x, &y).unwrap();
    assert!((m.dist(&x, &y) - m.norm(&x, &lxy)).abs() <= 1e-10);

    // Transport isometry.
    let a = m.random_tangent(&x, &mut r);
    let b = m.random_tangent(&x, &mut r);
    let ta = m.transport(&x, &y, &a).unwrap();
    let tb = m.transport(&x, &y, &b).unwrap();
    let before = m.inner(&x, &a, &b);
    let after = m.inner(&y, &ta, &tb);
    assert!((before - after).abs() <= 1e-9 * before.abs().max(1.0), "{before} vs {after}");
    assert!(m.tangent_residual(&y, &ta) <= 1e-9 * m.norm(&y, &ta).max(1.0));

    // Geodesic speed.
    let d = m.dist(&x, &y);
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let g = geodesic(m, &x, &y, t).unwrap();
        assert!((m.dist(&x, &g) - t * d).abs() <= 1e-9 * d.max(1.0), "t = {t}");
    }

    // Triangle inequality.
    let z = m.random_point(&mut r);
    assert!(m.dist(&x, &z) <= m.dist(&x, &y) + m.dist(&y, &z) + 1e-9);

    // Projection is idempotent.
    let p = m.project_tangent(&x, &y);
    assert!(m.project_tangent(&x, &p).minus(&p).ambient_norm() <= 1e-9 * p.ambient_norm().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_kernel(seed in any::<u64>(), n in 2usize..8) {
        check_kernel(&Sphere::new(n).unwrap(), seed, f64::INFINITY);
    }

    #[test]
    fn euclidean_kernel(seed in any::<u64>(), n in 2usize..8) {
        check_kernel(&Euclidean::new(n).unwrap(), seed, 10.0);
    }

    #[test]
    fn hyperboloid_kernel(seed in any::<u64>(), n in 2usize..6) {
        check_kernel(&Hyperboloid::new(n).unwrap(), seed, 3.0);
    }

    #[test]
    fn spd_kernel(seed in any::<u64>(), n in 2usize..5) {
        check_kernel(&Spd::new(n).unwrap(), seed, 3.0);
    }

    #[test]
    fn sphere_transport_is_inverted_by_the_reverse_transport(seed in any::<u64>()) {
        let s = Sphere::new(4).unwrap();
        let mut r = rng(seed);
        let x = s.random_point(&mut r);
        let y = s.exp(&x, &(s.random_tangent(&x, &mut r).normalize() * 2.0)).unwrap();
        let u = s.random_tangent(&x, &mut r);
        let there = s.transport(&x, &y, &u).unwrap();
        let back = s.transport(&y, &x, &there).unwrap();
        prop_assert!((back - u).norm() <= 1e-10);
    }
}

// ---------- Hadamard inequalities ----------

/// `‖log_x z − log_x γ(t)‖ − ‖log_{γ(t)} z‖`; non-positive on Hadamard manifolds.
fn cosine_law_excess<M: Manifold>(m: &M, x: &M::Point, y: &M::Point, z: &M::Point, t: f64) -> f64 {
    let g = geodesic(m, x, y, t).unwrap();
    let lhs = m.norm(x, &m.log(x, z).unwrap().minus(&m.log(x, &g).unwrap()));
    lhs - m.norm(&g, &m.log(&g, z).unwrap())
}

/// Non-positive-curvature inequality for `d(p, γ(t))²`; non-negative on Hadamard manifolds.
fn npc_margin<M: Manifold>(m: &M, p: &M::Point, x: &M::Point, y: &M::Point, t: f64) -> f64 {
    let g = geodesic(m, x, y, t).unwrap();
    let rhs = (1.0 - t) * m.dist(p, x).powi(2) + t * m.dist(p, y).powi(2) - t * (1.0 - t) * m.dist(x, y).powi(2);
    rhs - m.dist(p, &g).powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hadamard_inequalities_on_spd(seed in any::<u64>(), t in 0.0f64..=1.0) {
        let m = Spd::new(3).unwrap();
        let mut r = rng(seed);
        let (x, y, z) = (m.random_point(&mut r), m.random_point(&mut r), m.random_point(&mut r));
        prop_assert!(cosine_law_excess(&m, &x, &y, &z, t) <= 1e-9);
        prop_assert!(npc_margin(&m, &z, &x, &y, t) >= -1e-9);
    }

    #[test]
    fn hadamard_inequalities_on_hyperboloid(seed in any::<u64>(), t in 0.0f64..=1.0) {
        let m = Hyperboloid::new(3).unwrap();
        let mut r = rng(seed);
        let (x, y, z) = (m.random_point(&mut r), m.random_point(&mut r), m.random_point(&mut r));
        prop_assert!(cosine_law_excess(&m, &x, &y, &z, t) <= 1e-9);
        prop_assert!(npc_margin(&m, &z, &x, &y, t) >= -1e-9);
    }
}

#[test]
fn cosine_law_violation_rate_on_the_sphere_is_recorded() {
    // Positive curvature reverses the comparison; the rate is reported, not asserted.
    let s = Sphere::new(3).unwrap();
    let mut r = rng(77);
    let mut violations = 0;
    let n = 1000;
    for _ in 0..n {
        let x = s.random_point(&mut r);
        let y = s.exp(&x, &(s.random_tangent(&x, &mut r).normalize() * 1.2)).unwrap();
        let z = s.exp(&x, &(s.random_tangent(&x, &mut r).normalize() * 1.2)).unwrap();
        if cosine_law_excess(&s, &x, &y, &z, 0.5) > 1e-9 {
            violations += 1;
        }
    }
    println!("sphere cosine-law violations: {violations}/{n}");
    assert!(violations > 0);
}
