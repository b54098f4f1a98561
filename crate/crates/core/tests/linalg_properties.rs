use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermo_core::{
    ad, diag_c, expm, expm_real, is_column_stochastic, kron, partial_trace_wrt, stack, unit,
    unstack, CMat, Complex64, ProbVector, RMat, Superoperator,
};

fn rand_c(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CMat {
    CMat::from_fn(n, m, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn rand_herm(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let a = rand_c(rng, n, n);
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

fn trace(m: &CMat) -> Complex64 {
    m.trace()
}

#[test]
fn partial_trace_defining_identity_on_matrix_unit_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for m in 1..=3 {
            for _ in 0..5 {
                let b = rand_c(&mut rng, n * m, n * m);
                let x = rand_c(&mut rng, m, m);
                let out = partial_trace_wrt(&x, &b).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        let a = unit(n, i, j);
                        let lhs = trace(&(&a * &out));
                        let rhs = trace(&(kron(&a, &x) * &b));
                        assert!((lhs - rhs).norm() < 1e-12, "n={n} m={m}");
                    }
                }
            }
        }
    }
}

#[test]
fn partial_trace_is_bilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (n, m) = (2, 3);
    let b1 = rand_c(&mut rng, n * m, n * m);
    let b2 = rand_c(&mut rng, n * m, n * m);
    let x1 = rand_c(&mut rng, m, m);
    let x2 = rand_c(&mut rng, m, m);
    let s = Complex64::new(0.3, -1.2);
    let lhs = partial_trace_wrt(&(&x1 + &x2 * s), &b1).unwrap();
    let rhs = partial_trace_wrt(&x1, &b1).unwrap() + partial_trace_wrt(&x2, &b1).unwrap() * s;
    assert!((lhs - rhs).norm() < 1e-12);
    let lhs = partial_trace_wrt(&x1, &(&b1 + &b2 * s)).unwrap();
    let rhs = partial_trace_wrt(&x1, &b1).unwrap() + partial_trace_wrt(&x1, &b2).unwrap() * s;
    assert!((lhs - rhs).norm() < 1e-12);
}

#[test]
fn ad_spectrum_is_pairwise_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 2..=4 {
        let h = rand_herm(&mut rng, n);
        let ev = nalgebra::SymmetricEigen::new(h.clone()).eigenvalues;
        let mut want: Vec<f64> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                want.push(ev[i] - ev[j]);
            }
        }
        // ad(H) is Hermitian on the stacked space, so its spectrum is real
        let got = nalgebra::SymmetricEigen::new(ad(&h).unwrap().matrix().clone()).eigenvalues;
        let mut got: Vec<f64> = got.iter().cloned().collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in want.iter().zip(&got) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn superoperator_application_matches_direct_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let a = rand_c(&mut rng, n, n);
        let b = rand_c(&mut rng, n, n);
        let x = rand_c(&mut rng, n, n);
        let s = Superoperator::left_right(&a, &b);
        assert!((s.apply(&x) - &a * &x * &b).norm() < 1e-12);
        assert_eq!(unstack(&stack(&x), n), x);
    }
}

fn taylor_exp(m: &CMat) -> CMat {
    // scaling and squaring around a long Taylor series, used only as an oracle
    let norm = m.norm();
    let s = (norm.log2().ceil().max(0.0) as i32) + 4;
    let a = m * Complex64::new(0.5f64.powi(s), 0.0);
    let n = m.nrows();
    let mut term = CMat::identity(n, n);
    let mut sum = term.clone();
    for k in 1..40 {
        term = &term * &a * Complex64::new(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

#[test]
fn expm_on_normal_matrices_up_to_norm_100() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for trial in 0..40 {
        let n = rng.random_range(2..=5);
        // U diag(λ) U† with complex λ
        let h = rand_herm(&mut rng, n);
        let u = expm(&(h * Complex64::new(0.0, 1.0))).unwrap();
        let target = [1.0, 10.0, 100.0][trial % 3];
        let lam: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let scale = target / lam.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut dm = CMat::zeros(n, n);
        let mut de = CMat::zeros(n, n);
        for i in 0..n {
            dm[(i, i)] = lam[i] * scale;
            de[(i, i)] = (lam[i] * scale).exp();
        }
        let m = &u * dm * u.adjoint();
        let want = &u * de * u.adjoint();
        let got = expm(&m).unwrap();
        let rel = (&got - &want).norm() / want.norm();
        assert!(rel < 1e-12, "trial {trial}: rel {rel:e}");
    }
}

#[test]
fn expm_general_matches_series_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..30 {
        let n = rng.random_range(2..=6);
        let m = rand_c(&mut rng, n, n) * Complex64::new(2.0, 0.0);
        let got = expm(&m).unwrap();
        let want = taylor_exp(&m);
        assert!((&got - &want).norm() / want.norm() < 1e-11);
    }
    let d = diag_c(&[0.0, 1.0]);
    assert!((expm(&d).unwrap()[(1, 1)].re - std::f64::consts::E).abs() < 1e-14);
}

fn random_rate_matrix(rng: &mut ChaCha8Rng, n: usize) -> RMat {
    // -B: nonnegative off-diagonals, zero column sums
    let mut q = RMat::from_fn(n, n, |i, j| if i == j { 0.0 } else { rng.random_range(0.0..2.0) });
    for j in 0..n {
        let s: f64 = q.column(j).sum();
        q[(j, j)] = -s;
    }
    q
}

#[test]
fn rate_matrix_flows_are_column_stochastic() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let q = random_rate_matrix(&mut rng, n);
        for &t in &[0.0, 0.01, 0.5, 3.0, 40.0] {
            let e = expm_real(&(&q * t)).unwrap();
            assert!(is_column_stochastic(&e, 1e-12), "t = {t}");
        }
    }
}

proptest! {
    #[test]
    fn stochastic_maps_keep_the_simplex(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = RMat::from_fn(n, n, |_, _| rng.random_range(0.0..1.0));
        for mut c in a.column_iter_mut() {
            let s = c.sum();
            c /= s;
        }
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let x = ProbVector::normalized(raw).unwrap();
        let y = &a * nalgebra::DVector::from_column_slice(x.entries());
        prop_assert!(ProbVector::new(y.iter().cloned().collect()).is_ok());
    }
}
