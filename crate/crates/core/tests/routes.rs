use spaceform_core::ballspec::{lambda1_ball, lambda2_ball, BallSpec};
use spaceform_core::convexbody::{polygonal_ball, rectangle};
use spaceform_core::spaceform::Curvature;
use spaceform_core::stability::{rectangle_eigenvalue, verify_faber_krahn, verify_gen_ppw, SolvedBody};

// The finite element solver on a fine polygonal ball against the radial
// shooting solver on the exact ball.
#[test]
fn mesh_and_shooting_agree_on_balls() {
    for (d, r) in [(-1, 1.0), (0, 1.0), (1, 0.8)] {
        let delta = Curvature::new(d).unwrap();
        let spec = BallSpec::new(delta, 2, r).unwrap();
        let exact = [lambda1_ball(spec).unwrap(), lambda2_ball(spec).unwrap()];
        let s = SolvedBody::solve(&polygonal_ball(delta, r, 256).unwrap()).unwrap();
        for (k, e) in exact.iter().enumerate() {
            let rel = (s.lambda(k) - e).abs() / e;
            assert!(rel < 2e-3, "δ={d} λ{}: {} vs {e}", k + 1, s.lambda(k));
        }
    }
}

#[test]
fn rectangle_against_closed_form() {
    let s = SolvedBody::solve(&rectangle(2.0, 1.0).unwrap()).unwrap();
    let l1 = rectangle_eigenvalue(2.0, 1.0, 1, 1);
    let l2 = rectangle_eigenvalue(2.0, 1.0, 2, 1);
    assert!((s.lambda(0) - l1).abs() <= s.tolerance(0).max(1e-4 * l1), "{} vs {l1}", s.lambda(0));
    assert!((s.lambda(1) - l2).abs() <= s.tolerance(1).max(1e-4 * l2), "{} vs {l2}", s.lambda(1));
    assert!(verify_faber_krahn(&s).unwrap().pass);
    assert!(verify_gen_ppw(&s).unwrap().pass);
}
