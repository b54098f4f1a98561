use gksl_thermal::{dissipator, ladder_ops};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermo_core::{expm_real, GibbsVector, Permutation, RMat};
use thermomaj::is_d_majorised;
use toymodel::*;

fn simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| -rng.random_range(1e-12f64..1.0).ln()).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn theta_ratio(theta: f64) -> f64 {
    theta.tan().powi(2)
}

#[test]
fn qutrit_rate_matrix_entries() {
    for k in 1..=9 {
        let a = k as f64 / 10.0;
        let g = ToyGenerator::ladder(a, 3).unwrap();
        let s = 2.0 / (1.0 + a);
        let want = [[-a, 1.0, 0.0], [a, -1.0 - a, 1.0], [0.0, a, -1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((-g.b()[(i, j)] - s * want[i][j]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn ladder_generator_agrees_with_dissipator_block() {
    for n in 3..=5 {
        let a = 0.35;
        let g = ToyGenerator::ladder(a, n).unwrap();
        let d = GibbsVector::geometric(a, n).unwrap();
        let (p, m) = ladder_ops(&d, n).unwrap();
        let blk = dissipator(&[p, m]).unwrap().population_block();
        for i in 0..n {
            for j in 0..n {
                assert!((blk[(i, j)].re - g.b()[(i, j)]).abs() < 1e-14);
            }
            assert!((g.fixed_point()[i] - d.entries()[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn relaxation_reaches_the_fixed_point() {
    let g = ToyGenerator::ladder(theta_ratio(std::f64::consts::PI / 6.0), 3).unwrap();
    let x0 = [0.9, 0.07, 0.03];
    let tr = simulate(&x0, &g, &Schedule::relax(3, 50.0), &SimOptions::default()).unwrap();
    assert!(dist(tr.last(), g.fixed_point()) < 1e-6);
    assert!((tr.times.last().unwrap() - 50.0).abs() < 1e-9);
    for x in &tr.states {
        thermo_core::ProbVector::new(x.clone()).unwrap();
    }
}

#[test]
fn figure_configuration_bound() {
    let a = theta_ratio(std::f64::consts::PI / 5.0);
    let g = ToyGenerator::ladder(a, 3).unwrap();
    let d = g.fixed_point();
    for (v, w) in d.iter().zip([0.55, 0.29, 0.16]) {
        assert!((v - w).abs() < 0.01, "{d:?}");
    }
    let z = ordered_past_cone_z(&[0.55, 0.40, 0.05], d).unwrap();
    for (v, w) in z.iter().zip([0.65, 0.30, 0.05]) {
        assert!((v - w).abs() < 0.01, "{z:?}");
    }
    assert!(vectorfield_inward_check(&z, &g, 1e-12).unwrap().inward);
}

#[test]
fn trajectories_stay_inside_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for &a in &[0.25, 0.3, 0.5] {
        let g = ToyGenerator::ladder(a, 3).unwrap();
        for _ in 0..3 {
            let x0 = simplex_point(&mut rng, 3);
            let bound = reach_bound(&x0, &g).unwrap();
            assert!(bound.z.iter().all(|&v| v > 0.0));
            let worst =
                containment_sweep(&x0, &g, 1000, rng.random(), 0.01, |x| bound.slack(x)).unwrap();
            assert!(worst >= -1e-9, "a = {a}, slack {worst}");
        }
    }
}

#[test]
fn bound_vector_field_points_inward() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for &a in &[0.25, 0.5, 1.0] {
        let g = ToyGenerator::ladder(a, 3).unwrap();
        assert!(vectorfield_inward_check(g.fixed_point(), &g, 1e-12).unwrap().inward);
        for _ in 0..20 {
            let z = ordered_past_cone_z(&simplex_point(&mut rng, 3), g.fixed_point()).unwrap();
            let rep = vectorfield_inward_check(&z, &g, 1e-12).unwrap();
            assert!(rep.inward, "a = {a}, z = {z:?}, worst = {}", rep.worst);
        }
    }
}

#[test]
fn pure_flow_is_d_majorised() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 3..=4 {
        let g = ToyGenerator::ladder(0.4, n).unwrap();
        for _ in 0..20 {
            let x0 = simplex_point(&mut rng, n);
            for t in [0.05, 0.3, 1.0, 4.0] {
                let xt = final_state(&x0, &Schedule::relax(n, t), &mut FlowCache::new(&g)).unwrap();
                assert!(is_d_majorised(&xt, &x0, g.fixed_point(), 1e-9).unwrap().holds);
            }
        }
    }
}

#[test]
fn permutations_intertwine_d_majorisation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let d = GibbsVector::geometric(0.4, 3).unwrap().entries().to_vec();
    for _ in 0..500 {
        let x0 = simplex_point(&mut rng, 3);
        let x = simplex_point(&mut rng, 3);
        let pi = &Permutation::all(3)[rng.random_range(0..6)];
        let lhs = is_d_majorised(&x, &x0, &d, 1e-9).unwrap().holds;
        let rhs = is_d_majorised(&pi.apply(&x), &pi.apply(&x0), &pi.apply(&d), 1e-9).unwrap().holds;
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn starts_below_d_stay_in_its_polytope() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = ToyGenerator::ladder(0.3, 3).unwrap();
    let bound = ReachBound::new(g.fixed_point().to_vec());
    let mut tried = 0;
    while tried < 5 {
        let x0 = simplex_point(&mut rng, 3);
        if !bound.contains(&x0, 0.0) {
            continue;
        }
        tried += 1;
        let worst = containment_sweep(&x0, &g, 500, 100 * tried, 0.01, |x| bound.slack(x)).unwrap();
        assert!(worst >= -1e-9);
    }
}

#[test]
fn reachability_is_permutation_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let g = ToyGenerator::ladder(0.5, 3).unwrap();
    let x0 = simplex_point(&mut rng, 3);
    for (k, pi) in Permutation::all(3).iter().enumerate() {
        let px0 = pi.apply(&x0);
        for i in 0..50u64 {
            let mut r = ChaCha8Rng::seed_from_u64(1000 * k as u64 + i);
            let mut s = random_schedule(&mut r, 3);
            let a = final_state(&x0, &s, &mut FlowCache::new(&g)).unwrap();
            s.steps[0].perm = s.steps[0].perm.compose(&pi.inverse());
            let b = final_state(&px0, &s, &mut FlowCache::new(&g)).unwrap();
            assert!(dist(&a, &b) < 1e-12);
        }
    }
}

#[test]
fn chattering_follows_the_averaged_generator() {
    let g = ToyGenerator::ladder(0.3, 3).unwrap();
    let perms = Permutation::all(3);
    let mut avg = RMat::zeros(3, 3);
    for p in &perms {
        avg += p.conjugate(g.b());
    }
    avg /= 6.0;
    let x0 = vec![0.8, 0.15, 0.05];
    let total = 1.0;
    let err = |h: f64| {
        let cycles = (total / (6.0 * h)).round() as usize;
        let s = chattering_schedule(3, h, cycles).unwrap();
        let got = final_state(&x0, &s, &mut FlowCache::new(&g)).unwrap();
        let e = expm_real(&(&avg * -total)).unwrap();
        let want: Vec<f64> = (0..3).map(|i| (0..3).map(|j| e[(i, j)] * x0[j]).sum()).collect();
        dist(&got, &want)
    };
    let (e1, e2) = (err(1.0 / 60.0), err(1.0 / 120.0));
    assert!(e2 < 1e-4 && e1 / e2 > 3.5, "{e1} {e2}");
}

#[test]
fn fixed_point_and_centroid_are_reachable() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = ToyGenerator::ladder(0.3, 3).unwrap();
    let centroid = vec![1.0 / 3.0; 3];
    for _ in 0..10 {
        let x0 = simplex_point(&mut rng, 3);
        let to_d = final_state(&x0, &Schedule::relax(3, 50.0), &mut FlowCache::new(&g)).unwrap();
        assert!(dist(&to_d, g.fixed_point()) < 1e-6);
        let r = greedy_steer(&x0, &g, &centroid, 1e-7, 50.0, 2.0).unwrap();
        assert!(r.distance < 1e-6, "distance {} at t = {}", r.distance, r.time);
        let replay = final_state(&x0, &r.schedule(3).unwrap(), &mut FlowCache::new(&g)).unwrap();
        assert!(dist(&replay, &centroid) < 1e-6);
    }
}

/// Near zero temperature almost every target is reachable; greedy steering is a
/// soft check of that limit, not a proof.
#[test]
fn low_temperature_steering_covers_the_simplex() {
    let g = ToyGenerator::ladder(0.01, 3).unwrap();
    let x0 = [0.2, 0.3, 0.5];
    let mut misses = 0;
    let mut total = 0;
    for i in 1..8 {
        for j in 1..(8 - i) {
            let t = [i as f64 / 8.0, j as f64 / 8.0, (8 - i - j) as f64 / 8.0];
            let r = greedy_steer(&x0, &g, &t, 0.05, 200.0, 4.0).unwrap();
            total += 1;
            if r.distance > 0.05 {
                misses += 1;
            }
        }
    }
    assert!(misses == 0, "{misses} of {total} grid targets missed");
}
