use qutrit_reach::embed::{embed, unembed};
use qutrit_reach::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermo_core::Permutation;
use toymodel::{containment_sweep, ToyGenerator};

const CENTROID: [f64; 3] = [1.0 / 3.0; 3];

fn gen(a: f64) -> ToyGenerator {
    ToyGenerator::ladder(a, 3).unwrap()
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn simplex_point(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let v: Vec<f64> = (0..3).map(|_| -rng.random_range(1e-12f64..1.0).ln()).collect();
    let s: f64 = v.iter().sum();
    [v[0] / s, v[1] / s, v[2] / s]
}

fn permute2(p: &Permutation, q: [f64; 2]) -> [f64; 2] {
    embed(&p.apply(&unembed(q)))
}

/// Left ray by brute force: the ray with every other ray clockwise of it.
fn left_ray_oracle(x: &[f64; 3], g: &ToyGenerator) -> [f64; 2] {
    let rays: Vec<[f64; 2]> = Permutation::all(3)
        .iter()
        .map(|s| embed(&s.apply(&g.velocity(&s.inverse().apply(x)))))
        .filter(|r| r[0].hypot(r[1]) > 1e-12)
        .collect();
    *rays
        .iter()
        .find(|r| rays.iter().all(|q| r[0] * q[1] - r[1] * q[0] <= 1e-14))
        .expect("pointed cone")
}

#[test]
fn parabolic_endpoints_and_kernel_formula() {
    let sb = stab_boundary(0.25).unwrap();
    assert_eq!(sb.case, ConicCase::Parabolic);
    let d = [16.0 / 21.0, 4.0 / 21.0, 1.0 / 21.0];
    let td = [d[0], d[2], d[1]];
    let arc = sb.arcs.iter().find(|a| a.b == 0.25 && a.rotation == [0, 1, 2]).unwrap();
    let ends = [arc.start, arc.end];
    assert!(ends.iter().any(|&e| dist2(e, embed(&d)) < 1e-4));
    assert!(ends.iter().any(|&e| dist2(e, embed(&td)) < 1e-4));
    assert!((embed(&d)[0] + 0.10102).abs() < 1e-4 && (embed(&d)[1] - 0.52497).abs() < 1e-4);
    for k in 0..=40 {
        let l = -1.0 / 7.0 + k as f64 * (2.0 / 7.0) / 40.0;
        let p = kernel_intersection_point(0.25, l).unwrap();
        let want = [
            (4.0 + 28.0 * l * l) / 6.0,
            (-14.0 * l * l - 3.0 * l + 1.0) / 6.0,
            (-14.0 * l * l + 3.0 * l + 1.0) / 6.0,
        ];
        for i in 0..3 {
            assert!((p[i] - want[i]).abs() < 1e-12);
        }
        let curve = [l / 2f64.sqrt(), (1.0 + 14.0 * l * l) / 6f64.sqrt()];
        assert!(dist2(embed(&p), curve) < 1e-9);
    }
}

#[test]
fn kernel_point_lies_on_the_conic() {
    for a in [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 2.0, 5.0] {
        let sb = stab_boundary(a).unwrap();
        let arc = sb
            .arcs
            .iter()
            .find(|c| (c.b - a).abs() < 1e-15 && c.rotation == [0, 1, 2])
            .unwrap();
        let m = arc.lambda_max.abs();
        for k in 0..=20 {
            let l = -m + 2.0 * m * k as f64 / 20.0;
            let p = kernel_intersection_point(a, l).unwrap();
            assert!(dist2(embed(&p), arc.point(l)) < 1e-9, "a = {a}, λ = {l}");
        }
        assert!(kernel_intersection_point(a, 1.5 * m).is_err());
    }
}

#[test]
fn boundary_points_carry_half_plane_cones() {
    for a in [0.2, 0.25, 0.3, 0.5] {
        let g = gen(a);
        let sb = stab_boundary(a).unwrap();
        for x in sb.sample_points(25) {
            let c = derv_cone(&x, &g).unwrap();
            if c.zero_ray {
                continue;
            }
            assert!((c.max_gap - std::f64::consts::PI).abs() < 1e-4, "a = {a}, x = {x:?}");
            // just inside and just outside along the ray to the centroid
            let step = |t: f64| [0, 1, 2].map(|i| x[i] + t * (CENTROID[i] - x[i]));
            assert!(is_stabilisable(&step(1e-5), &g).unwrap().holds(), "a = {a}, x = {x:?}");
            assert!(!is_stabilisable(&step(-1e-5), &g).unwrap().holds(), "a = {a}, x = {x:?}");
        }
    }
}

#[test]
fn grid_certificates_agree_with_conics() {
    let res = 400;
    for a in [0.2, 0.3, 0.5] {
        let g = gen(a);
        let poly = stab_boundary(a).unwrap().polygon(400);
        let cells = stab_grid(&g, res).unwrap();
        let cell = 1.0 / res as f64 * 1.5;
        let mut bad = 0;
        for (x, lp) in &cells {
            let p = embed(x);
            if poly.contains_strict(p) != *lp {
                bad += 1;
                assert!(poly.boundary_distance(p) < cell, "a = {a}, far disagreement at {x:?}");
            }
        }
        let agree = 1.0 - bad as f64 / cells.len() as f64;
        assert!(agree >= 0.995, "a = {a}: {agree}");
    }
}

#[test]
fn permutations_of_d_are_stabilisable_and_unital_case_collapses() {
    for a in [0.2, 0.3, 0.5] {
        let g = gen(a);
        for p in Permutation::all(3) {
            let pd = p.apply(g.fixed_point());
            match is_stabilisable(&pd, &g).unwrap() {
                Stabilisability::Stabilisable { weights } => {
                    let k = Permutation::all(3).iter().position(|q| *q == p).unwrap();
                    assert!(weights[k] > 1.0 - 1e-9, "{weights:?}");
                }
                other => panic!("{other:?}"),
            }
        }
    }
    let g = gen(1.0);
    assert!(stab_boundary(1.0).unwrap().is_degenerate());
    assert!(is_stabilisable(&CENTROID, &g).unwrap().holds());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = simplex_point(&mut rng);
        assert!(!is_stabilisable(&x, &g).unwrap().holds(), "{x:?}");
    }
}

#[test]
fn separating_functional_certifies_non_stabilisable_points() {
    let g = gen(0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut seen = 0;
    for _ in 0..300 {
        let x = simplex_point(&mut rng);
        if let Stabilisability::NotStabilisable { alpha, margin } = is_stabilisable(&x, &g).unwrap() {
            seen += 1;
            assert!(margin < 0.0);
            for s in Permutation::all(3) {
                let r = s.apply(&g.velocity(&s.inverse().apply(&x)));
                assert!(alpha.iter().zip(&r).map(|(a, v)| a * v).sum::<f64>() < 0.0);
            }
        }
    }
    assert!(seen > 50);
}

#[test]
fn stabilisable_set_and_class_of_d_are_symmetric() {
    for a in [0.2, 0.3, 0.5] {
        let stab = stab_boundary(a).unwrap().polygon(200);
        let class = DClass::new(&gen(a)).unwrap();
        let bd = class.boundary().unwrap();
        assert!(bd.is_simple(), "a = {a}");
        for p in Permutation::all(3) {
            for poly in [&stab, &bd] {
                let worst = poly
                    .vertices
                    .iter()
                    .map(|&q| poly.boundary_distance(permute2(&p, q)))
                    .fold(0.0, f64::max);
                assert!(worst < 1e-8, "a = {a}, {p:?}: {worst}");
            }
        }
    }
}

#[test]
fn extremal_fields_match_brute_force_angles() {
    let g = gen(0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 200 {
        let x = simplex_point(&mut rng);
        let Ok(f) = extremal_field(&x, &g, Side::Left) else {
            continue;
        };
        let want = left_ray_oracle(&x, &g);
        let ang = |v: [f64; 2]| v[1].atan2(v[0]);
        assert!((ang(f.embedded) - ang(want)).abs() < 1e-6);
        checked += 1;
    }
}

#[test]
fn extremals_from_d_terminate_inside_its_polytope() {
    for k in 1..=19 {
        let a = 0.05 * k as f64;
        let g = gen(a);
        let d = g.fixed_point();
        let mut ds = d.to_vec();
        ds.sort_by(|p, q| q.partial_cmp(p).unwrap());
        for side in [Side::Left, Side::Right] {
            let c = integrate_extremal(d, &g, side).unwrap();
            assert!(c.duration() < 1e3);
            assert!(matches!(c.termination, Termination::Wall { .. }), "a = {a}");
            for (i, p) in c.points.iter().enumerate() {
                let mut xs = p.to_vec();
                xs.sort_by(|p, q| q.partial_cmp(p).unwrap());
                let margin = (ds[0] - xs[0]).min(ds[0] + ds[1] - xs[0] - xs[1]);
                assert!(margin >= -1e-8, "a = {a}, {side:?}: {margin}");
                if i > 0 && i + 1 < c.points.len() {
                    let v = extremal_field(p, &g, side).unwrap();
                    assert!(v.velocity.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-8);
                }
            }
        }
    }
}

#[test]
fn left_and_right_fields_mirror_across_the_axis() {
    let g = gen(0.4);
    for t in [0.05, 0.1, 0.2, 0.3] {
        let x = [1.0 - 2.0 * t, t, t];
        if !derv_cone(&x, &g).unwrap().pointed {
            continue;
        }
        let l = extremal_field(&x, &g, Side::Left).unwrap().embedded;
        let r = extremal_field(&x, &g, Side::Right).unwrap().embedded;
        assert!((l[0] + r[0]).abs() < 1e-14 && (l[1] - r[1]).abs() < 1e-14);
    }
}

/// Side of `q` relative to the polyline, measured on segments whose interior
/// holds the projection of `q`; positive means counterclockwise (left).
fn side_of(poly: &[[f64; 2]], q: [f64; 2]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for w in poly.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ab = [b[0] - a[0], b[1] - a[1]];
        let l2 = ab[0] * ab[0] + ab[1] * ab[1];
        if l2 == 0.0 {
            continue;
        }
        let aq = [q[0] - a[0], q[1] - a[1]];
        let t = (aq[0] * ab[0] + aq[1] * ab[1]) / l2;
        if !(0.0..=1.0).contains(&t) {
            continue;
        }
        let cr = (ab[0] * aq[1] - ab[1] * aq[0]) / l2.sqrt();
        if best.is_none_or(|(d, _)| cr.abs() < d) {
            best = Some((cr.abs(), cr));
        }
    }
    best.map(|b| b.1)
}

#[test]
fn right_solutions_do_not_cross_left_curves() {
    let g = gen(0.3);
    let left = integrate_extremal(g.fixed_point(), &g, Side::Left).unwrap();
    let lpath = left.embedded();
    let n = left.points.len();
    for k in [n / 5, n / 3, n / 2, 2 * n / 3] {
        let r = integrate_extremal(&left.points[k], &g, Side::Right).unwrap();
        for q in r.embedded().iter().skip(1) {
            if let Some(s) = side_of(&lpath, *q) {
                assert!(s <= 1e-9, "start {k}: {s}");
            }
        }
    }
}

#[test]
fn trajectories_stay_in_the_reachable_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for a in [0.3, 0.5] {
        let g = gen(a);
        let class = DClass::new(&g).unwrap();
        let mut starts = vec![g.fixed_point().to_vec(), vec![0.9, 0.07, 0.03], vec![0.05, 0.05, 0.9]];
        starts.push(simplex_point(&mut rng).to_vec());
        for x0 in starts {
            let region = reachable_set_in(&x0, &g, class.clone()).unwrap();
            assert!(region.contains(&x0, 1e-9));
            assert!(region.contains(&CENTROID, 0.0));
            assert!(region.contains(g.fixed_point(), 1e-9));
            let worst =
                containment_sweep(&x0, &g, 300, rng.random(), 0.02, |x| region.signed_distance(x))
                    .unwrap();
            assert!(worst >= -1e-6, "a = {a}, x0 = {x0:?}: {worst}");
        }
    }
}

#[test]
fn class_of_d_holds_the_stabilisable_set() {
    for a in [0.3, 0.5] {
        let g = gen(a);
        let class = DClass::new(&g).unwrap();
        for x in stab_boundary(a).unwrap().sample_points(30) {
            assert!(class.contains(&x, 1e-7), "a = {a}, {x:?}");
        }
        let region = reachable_set(&CENTROID, &g).unwrap();
        assert!(region.in_class_of_d());
    }
}

#[test]
fn reachability_order_facts() {
    let g = gen(0.5);
    let d = g.fixed_point().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let x = simplex_point(&mut rng);
        // d is reached from everywhere
        let o = reach_order(&d, &x, &g).unwrap();
        assert!(matches!(o, ReachOrder::YReachesX | ReachOrder::Equivalent), "{x:?}: {o:?}");
    }
    // two stabilisable points
    let p = [0.4, 0.3, 0.3];
    let q = [0.3, 0.36, 0.34];
    assert!(is_stabilisable(&p, &g).unwrap().holds() && is_stabilisable(&q, &g).unwrap().holds());
    assert_eq!(reach_order(&p, &q, &g).unwrap(), ReachOrder::Equivalent);
    // along one extremal curve from a point outside [d]
    let x = [0.9, 0.07, 0.03];
    let c = integrate_extremal(&x, &g, Side::Left).unwrap();
    let y = c.points[c.points.len() / 4];
    assert_eq!(reach_order(&x, &y, &g).unwrap(), ReachOrder::XReachesY);
    assert_eq!(reach_order(&y, &x, &g).unwrap(), ReachOrder::YReachesX);
}

#[test]
fn no_two_point_classes_outside_class_of_d() {
    let g = gen(0.3);
    let class = DClass::new(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut outside = Vec::new();
    while outside.len() < 12 {
        let x = simplex_point(&mut rng);
        if !class.contains(&x, 1e-3) {
            outside.push(reachable_set_in(&x, &g, class.clone()).unwrap());
        }
    }
    for i in 0..outside.len() {
        for j in i + 1..outside.len() {
            let (a, b) = (&outside[i], &outside[j]);
            let both = a.contains(&b.x0, 1e-7) && b.contains(&a.x0, 1e-7);
            let same = a.x0.iter().zip(&b.x0).all(|(p, q)| (p - q).abs() < 1e-9);
            assert!(!both || same, "{:?} ~ {:?}", a.x0, b.x0);
        }
    }
}
