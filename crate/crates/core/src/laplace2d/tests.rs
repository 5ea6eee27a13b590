use super::*;
use crate::ballspec::{lambda1_ball, lambda2_ball, BallSpec};
use crate::convexbody::{polygonal_ball, random_body, rectangle, RandomBodyParams};
use crate::spaceform::{Curvature, Isometry};
use core::f64::consts::PI;

fn square(h: f64) -> ConvexBody {
    rectangle(h, h).unwrap()
}

#[test]
fn mesh_contract() {
    let sq = square(1.0);
    let m = triangulate(&sq, 0.1).unwrap();
    assert!(m.max_edge() <= 0.1 + 1e-15);
    for (v, &b) in m.vertices.iter().zip(&m.boundary_mask) {
        if b {
            let d = (0.5 - v[0].abs()).min(0.5 - v[1].abs());
            assert!(d.abs() < 1e-14, "{v:?}");
        } else {
            assert!(v[0].abs() < 0.5 && v[1].abs() < 0.5);
        }
    }
    assert!((m.chart_area() - 1.0).abs() < 1e-12);
    assert_eq!(triangulate(&sq, 0.1).unwrap(), m);
    let fine = triangulate(&sq, 0.05).unwrap();
    let ratio = fine.triangles.len() as f64 / m.triangles.len() as f64;
    assert!((3.0..=6.0).contains(&ratio), "{ratio}");
    assert!(matches!(triangulate(&sq, 2.0), Err(Error::Mesh(_))));
}

#[test]
fn curved_boundaries_stay_on_geodesics() {
    for delta in [Curvature::HYPERBOLIC, Curvature::SPHERICAL] {
        let b = random_body(delta, 3, RandomBodyParams::default()).unwrap();
        let h = 0.05;
        let m = triangulate(&b, h).unwrap();
        assert!(m.max_edge() <= h);
        for (v, &bd) in m.vertices.iter().zip(&m.boundary_mask) {
            let s = to_straight(delta, *v).unwrap();
            let margin = crate::convexbody::polygon::inner_margin(&b.vertices, s);
            if bd {
                assert!(margin.abs() < 1e-12, "{delta} {margin}");
            } else {
                assert!(margin > 0.0);
            }
        }
    }
}

#[test]
fn mass_matrix_flat_and_weighted() {
    let m = triangulate(&square(1.0), 0.2).unwrap();
    let (a, mm) = full_matrices(&m).unwrap();
    let ones = vec![1.0; m.vertices.len()];
    assert!(a.mul_vec(&ones).iter().all(|x| x.abs() < 1e-12));
    for (t, tri) in m.triangles.iter().enumerate() {
        let ar = m.triangle_area(t);
        let p = tri.map(|i| m.vertices[i]);
        let e = element_mass(ChartKind::Plane, p);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { ar / 6.0 } else { ar / 12.0 };
                assert!((e[i][j] - want).abs() < 1e-16);
            }
        }
    }
    let total: f64 = mm.row_sums().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    for i in 0..a.n {
        for (j, x) in a.row(i) {
            assert!((x - a.get(j, i)).abs() < 1e-12);
        }
    }

    // Poincaré disk of chart radius 0.5 is the hyperbolic ball of radius 2 artanh 0.5
    let r = 2.0 * 0.5f64.atanh();
    let ball = polygonal_ball(Curvature::HYPERBOLIC, r, 512).unwrap();
    let mesh = triangulate(&ball, 0.02).unwrap();
    let sys = assemble(&mesh).unwrap();
    let want = crate::spaceform::ball_volume(Curvature::HYPERBOLIC, 2, r).unwrap();
    assert!((sys.volume() / want - 1.0).abs() < 1e-3, "{} {want}", sys.volume());
}

#[test]
fn rectangle_spectrum() {
    let b = rectangle(2.0, 1.0).unwrap();
    let st = convergence_study(&b, &[0.1, 0.05, 0.025], 2).unwrap();
    let exact = [PI * PI * 1.25, PI * PI * 2.0];
    for k in 0..2 {
        let raw = st.result.lambdas[k];
        let ext = st.result.lambda(k);
        assert!((ext / exact[k] - 1.0).abs() < 0.01);
        assert!((ext - exact[k]).abs() < (raw - exact[k]).abs(), "{k} {ext} {raw}");
        assert!(st.result.error(k) >= (ext - exact[k]).abs());
    }
    assert!(st.result.residuals.iter().all(|r| *r < 1e-8));
}

#[test]
fn disk_matches_shooting() {
    let t = std::time::Instant::now();
    let disk = polygonal_ball(Curvature::FLAT, 1.0, 256).unwrap();
    let st = convergence_study(&disk, &[0.12, 0.06, 0.03], 2).unwrap();
    let spec = BallSpec::new(Curvature::FLAT, 2, 1.0).unwrap();
    let (l1, l2) = (lambda1_ball(spec).unwrap(), lambda2_ball(spec).unwrap());
    let e = st.result.extrapolated.as_ref().unwrap();
    assert!(t.elapsed().as_secs() < 60);
    assert!((st.result.lambda(0) / l1 - 1.0).abs() < 0.005);
    assert!((st.result.lambda(1) / l2 - 1.0).abs() < 0.01);
    for p in &e.orders {
        assert!((1.5..=2.5).contains(p), "{p}");
    }
    assert!(st.levels.iter().all(|l| l.vertices <= 20_000));
}

#[test]
fn too_few_levels() {
    assert!(matches!(convergence_study(&square(1.0), &[0.1], 2), Err(Error::TooFewLevels(1))));
}

#[test]
fn spherical_cap_near_hemisphere() {
    let r = PI / 2.0 - 0.01;
    let cap = polygonal_ball(Curvature::SPHERICAL, r, 256).unwrap();
    let st = convergence_study(&cap, &[0.1, 0.05, 0.025], 1).unwrap();
    let want = lambda1_ball(BallSpec::new(Curvature::SPHERICAL, 2, r).unwrap()).unwrap();
    assert!((st.result.lambda(0) / want - 1.0).abs() < 0.02, "{} {want}", st.result.lambda(0));
}

#[test]
fn eigenvector_properties() {
    let b = random_body(Curvature::HYPERBOLIC, 11, RandomBodyParams::default()).unwrap();
    let mesh = triangulate(&b, 0.05).unwrap();
    let sys = assemble(&mesh).unwrap();
    let res = solve_lowest(&sys, 2).unwrap();
    let u = &res.vectors[0];
    let max = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(u.iter().all(|&x| x > -1e-10 * max));
    let rq = sys.energy(u) / sys.mass_norm2(u);
    assert!((rq / res.lambdas[0] - 1.0).abs() < 1e-9);
    assert!(res.lambdas[1] > res.lambdas[0]);
    assert!(res.residuals.iter().all(|r| *r < 1e-8));
    let cross = {
        let x = sys.restrict(&res.vectors[0]);
        let y = sys.restrict(&res.vectors[1]);
        sys.mass.mul_vec(&x).iter().zip(&y).map(|(a, b)| a * b).sum::<f64>()
    };
    assert!(cross.abs() < 1e-9);
}

#[test]
fn dense_and_lanczos_agree() {
    let b = rectangle(2.0, 1.0).unwrap();
    let mesh = triangulate(&b, 0.09).unwrap();
    let sys = assemble(&mesh).unwrap();
    assert!(sys.dim() >= DENSE_THRESHOLD);
    let sparse = solve_lowest(&sys, 2).unwrap();
    let (vals, _) = generalized_eigen(&sys.stiffness.to_dense(), &sys.mass.to_dense()).unwrap();
    for k in 0..2 {
        assert!((sparse.lambdas[k] / vals[k] - 1.0).abs() < 1e-10);
    }
}

#[test]
fn hyperbolic_motion_invariance() {
    let b = random_body(Curvature::HYPERBOLIC, 5, RandomBodyParams { nv: 10, r_min: 0.4, r_max: 0.8 }).unwrap();
    let g = Isometry::translation(Curvature::HYPERBOLIC, 0.35).compose(&Isometry::rotation(Curvature::HYPERBOLIC, 0.7));
    let moved = b.transformed(&g).unwrap();
    let hs = [0.1, 0.05, 0.025];
    let s0 = convergence_study(&b, &hs, 2).unwrap();
    let s1 = convergence_study(&moved, &hs, 2).unwrap();
    for k in 0..2 {
        let tol = 2.0 * s0.result.tolerance(k).max(s1.result.tolerance(k));
        assert!((s0.result.lambda(k) - s1.result.lambda(k)).abs() <= tol, "{k}");
    }
}

#[test]
fn inclusion_monotonicity() {
    for delta in [Curvature::HYPERBOLIC, Curvature::FLAT, Curvature::SPHERICAL] {
        let big = polygonal_ball(delta, 1.0, 64).unwrap();
        let small = random_body(delta, 2, RandomBodyParams { nv: 8, r_min: 0.5, r_max: 0.95 }).unwrap();
        assert!(small.vertices.iter().all(|&v| big.contains(v)));
        let l =
            |b: &ConvexBody| solve_lowest(&assemble(&triangulate(b, 0.05).unwrap()).unwrap(), 1).unwrap().lambdas[0];
        assert!(l(&small) > l(&big));
    }
}

#[test]
fn gradients() {
    let m = triangulate(&square(1.0), 0.2).unwrap();
    let c = vec![3.0; m.vertices.len()];
    assert!(gradient_field(&m, &c).iter().all(|g| g.norm2 == 0.0));
    let x: Vec<f64> = m.vertices.iter().map(|v| v[0]).collect();
    for g in gradient_field(&m, &x) {
        assert!((g.grad[0] - 1.0).abs() < 1e-12 && g.grad[1].abs() < 1e-12);
    }
    // metric norm divides by the conformal factor
    let hb = polygonal_ball(Curvature::HYPERBOLIC, 1.0, 64).unwrap();
    let hm = triangulate(&hb, 0.1).unwrap();
    let x: Vec<f64> = hm.vertices.iter().map(|v| v[0]).collect();
    for g in gradient_field(&hm, &x) {
        let phi = conformal_weight(ChartKind::PoincareDisk, g.centroid);
        assert!((g.norm2 * phi - 1.0).abs() < 1e-10);
    }
}

#[test]
fn difference_regions() {
    let outer = rectangle(4.0, 1.0).unwrap();
    let hole = crate::convexbody::ball_polygon(Curvature::FLAT, [1.0, 0.0], 1.5, 64).unwrap();
    let r = Region::Difference(outer.clone(), hole.clone());
    let m = triangulate_region(&r, 0.05).unwrap();
    // everything left of the ball cap: area of rectangle minus the clipped disk
    let clipped = crate::convexbody::intersect_bodies(&outer, &hole).unwrap().unwrap();
    assert!((m.chart_area() - (4.0 - clipped.area())).abs() < 1e-9);
    // an interior hole gives an annulus
    let small = crate::convexbody::ball_polygon(Curvature::FLAT, [0.0, 0.0], 0.2, 32).unwrap();
    let ann = triangulate_region(&Region::Difference(outer.clone(), small.clone()), 0.05).unwrap();
    assert!((ann.chart_area() - (4.0 - small.area())).abs() < 1e-9);
    let whole = crate::convexbody::ball_polygon(Curvature::FLAT, [0.0, 0.0], 5.0, 32).unwrap();
    assert!(Region::Difference(outer, whole).is_empty());
}
