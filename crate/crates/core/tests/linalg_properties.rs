use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use targetkit::linalg::{
    bordered_matrix, orthogonal_projector, polar_orthonormal_factor, pseudoinverse, schur_congruence,
    svd_partitioned, SchurVariant,
};
use targetkit::sampling::{gaussian_matrix, random_unitary, seeded, uniform, SeededRng};
use targetkit::scalar::Scalar;
use targetkit::TolerancePolicy;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// `m × n` with rank `k` drawn as a product of Gaussian factors.
fn low_rank<T: Scalar>(rng: &mut SeededRng, m: usize, n: usize, k: usize) -> DMatrix<T> {
    gaussian_matrix::<T>(rng, m, k) * gaussian_matrix::<T>(rng, k, n)
}

fn penrose<T: Scalar>(x: &DMatrix<T>) {
    let t = tol();
    let p = pseudoinverse(x, &t).unwrap();
    let (nx, np) = (x.norm().max(1e-300), p.norm().max(1e-300));
    let xp = x * &p;
    let px = &p * x;
    assert!((&xp * x - x).norm() <= t.residual_tol * nx);
    assert!((&px * &p - &p).norm() <= t.residual_tol * np);
    assert!((&xp - xp.adjoint()).norm() <= t.residual_tol * xp.norm().max(1.0));
    assert!((&px - px.adjoint()).norm() <= t.residual_tol * px.norm().max(1.0));
    let proj = orthogonal_projector(&x.adjoint(), &t).unwrap();
    assert!((&px - proj).norm() <= t.residual_tol * px.norm().max(1.0));
}

fn svd_invariants<T: Scalar>(x: &DMatrix<T>) {
    let t = tol();
    let Ok(f) = svd_partitioned(x, &t) else {
        assert!(x.norm() == 0.0);
        return;
    };
    let (m, n) = x.shape();
    assert!((f.reconstruct() - x).norm() <= t.residual_tol * x.norm());
    assert!((f.v.adjoint() * &f.v - DMatrix::<T>::identity(m, m)).norm() <= 1e-12);
    assert!((f.w.adjoint() * &f.w - DMatrix::<T>::identity(n, n)).norm() <= 1e-12);
    assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
}

fn polar_invariants<T: Scalar>(x: &DMatrix<T>) {
    let t = tol();
    let p = polar_orthonormal_factor(x, &t).unwrap();
    let n = x.ncols();
    assert!((p.u1.adjoint() * &p.u1 - DMatrix::<T>::identity(n, n)).norm() <= 1e-12);
    assert!((x - &p.u1 * &p.q).norm() <= t.residual_tol * x.norm());
    assert!((&p.q - p.q.adjoint()).norm() <= 1e-12 * p.q.norm().max(1.0));
}

fn draw(seed: u64, wide: bool) -> (usize, usize, usize, SeededRng) {
    let mut rng = seeded(seed);
    let m = 1 + (uniform(&mut rng, 0.0, 8.0) as usize).min(7);
    let n = 1 + (uniform(&mut rng, 0.0, 8.0) as usize).min(7);
    let (m, n) = if wide { (m, n) } else { (m.max(n), m.min(n)) };
    let k = (uniform(&mut rng, 0.0, (m.min(n) + 1) as f64) as usize).min(m.min(n));
    (m, n, k, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn penrose_identities(seed in any::<u64>(), complex in any::<bool>()) {
        let (m, n, k, mut rng) = draw(seed, true);
        if complex {
            let x = low_rank::<Complex64>(&mut rng, m, n, k);
            penrose(&x);
            svd_invariants(&x);
        } else {
            let x = low_rank::<f64>(&mut rng, m, n, k);
            penrose(&x);
            svd_invariants(&x);
        }
    }

    #[test]
    fn polar_factorization(seed in any::<u64>(), complex in any::<bool>()) {
        let (m, n, k, mut rng) = draw(seed, false);
        if complex {
            polar_invariants(&low_rank::<Complex64>(&mut rng, m, n, k.max(1)));
        } else {
            polar_invariants(&low_rank::<f64>(&mut rng, m, n, k.max(1)));
        }
    }
}

/// Random `(H, L, λ)` suited to `variant`.
fn schur_triple(variant: SchurVariant, seed: u64) -> (DMatrix<Complex64>, DMatrix<Complex64>, f64) {
    let mut rng = seeded(seed);
    let r = 1 + (uniform(&mut rng, 0.0, 5.0) as usize);
    let k = 1 + (uniform(&mut rng, 0.0, 4.0) as usize);
    let q = random_unitary::<Complex64>(&mut rng, r);
    let mut d: Vec<Complex64> = (0..r).map(|_| Complex64::new(uniform(&mut rng, -2.0, 2.0), 0.0)).collect();
    for v in d.iter_mut() {
        if v.re.abs() < 0.2 {
            v.re += 0.5f64.copysign(v.re);
        }
    }
    if variant == SchurVariant::EliminateHeadPseudo && r > 1 {
        d[0] = Complex64::new(0.0, 0.0);
    }
    let h = &q * DMatrix::from_diagonal(&DVector::from_vec(d)) * q.adjoint();
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let l = match variant {
        SchurVariant::EliminateHeadPseudo => gaussian_matrix::<Complex64>(&mut rng, k, r) * &h,
        _ => gaussian_matrix::<Complex64>(&mut rng, k, r),
    };
    let lambda = match variant {
        SchurVariant::EliminateCorner => uniform(&mut rng, 0.5, 3.0).copysign(uniform(&mut rng, -1.0, 1.0)),
        _ => uniform(&mut rng, -3.0, 3.0),
    };
    (h, l, lambda)
}

#[test]
fn schur_congruence_residuals() {
    let t = tol();
    for variant in [SchurVariant::EliminateCorner, SchurVariant::EliminateHead, SchurVariant::EliminateHeadPseudo] {
        for seed in 0..100 {
            let (h, l, lambda) = schur_triple(variant, seed);
            let c = schur_congruence(&h, &l, lambda, variant, &t).unwrap();
            assert!(c.residual <= 1e-10, "{variant:?} seed {seed}: {:e}", c.residual);
            let b = bordered_matrix(&h, &l, lambda);
            let back = c.factor.adjoint() * &b * &c.factor;
            assert!((back - &c.reduced).norm() <= 1e-10 * b.norm().max(1.0));
            let det = c.factor.clone().determinant();
            assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            let s = &c.factor;
            assert!((0..s.nrows()).all(|i| (s[(i, i)] - Complex64::new(1.0, 0.0)).norm() == 0.0));
        }
    }
}
