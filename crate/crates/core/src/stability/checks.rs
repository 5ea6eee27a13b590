use core::f64::consts::PI;

use crate::ballspec::{lambda1_ball, lambda1_star, lambda2_ball, lambda2_star, BallSpec};
use crate::convexbody::{ball_polygon, body_metric, intersect_bodies, support_of, DEFAULT_GRID};
use crate::error::Error;
use crate::laplace2d::{convergence_study_region, gradient_field, Region};
use crate::prelude::*;
use crate::spaceform::{ambient_distance, ball_radius, conformal_weight, s_delta, Curvature, ModelPoint};
use crate::Result;

use super::center::{center_of_mass, RadialWeight, RampWeight};
use super::{SolvedBody, VerificationReport};

/// Dimension of every body handled here.
const N: f64 = 2.0;
/// Vertices of the polygons standing in for geodesic balls.
pub const BALL_POLYGON_VERTICES: usize = 256;
/// Relative accuracy of the shooting solver entering tolerances.
const SHOOTING_TOL: f64 = 1e-9;

/// Faber–Krahn: `λ₁*(Vol Ω) ≤ λ₁(Ω)`.
pub fn verify_faber_krahn(s: &SolvedBody) -> Result<VerificationReport> {
    let v = s.volume();
    let star = lambda1_star(s.delta(), 2, v)?;
    let tol = s.tolerance(0) + SHOOTING_TOL * star;
    let r = VerificationReport::new("faber_krahn", star, s.lambda(0), tol)
        .with("volume", v)
        .with("mass_volume", s.system().volume())
        .with("ball_radius", ball_radius(s.delta(), 2, v)?);
    Ok(s.annotate(r))
}

/// Payne–Pólya–Weinberger: `λ₂/λ₁(Ω) ≤ λ₂*/λ₁*(Vol Ω)`; fails in `H²`.
pub fn verify_ppw(s: &SolvedBody) -> Result<VerificationReport> {
    if s.delta() == Curvature::HYPERBOLIC {
        return Err(Error::NotApplicable(
            "the ratio inequality λ₂/λ₁ ≤ λ₂*/λ₁* is false in hyperbolic space; use the matched-λ₁ form".into(),
        ));
    }
    let v = s.volume();
    let ball = BallSpec::new(s.delta(), 2, ball_radius(s.delta(), 2, v)?)?;
    let (l1b, l2b) = (lambda1_ball(ball)?, lambda2_ball(ball)?);
    let (l1, l2) = (s.lambda(0), s.lambda(1));
    let lhs = l2 / l1;
    let rhs = l2b / l1b;
    let tol = lhs * (s.tolerance(0) / l1 + s.tolerance(1) / l2) + 2.0 * SHOOTING_TOL * rhs;
    let r = VerificationReport::new("ppw", lhs, rhs, tol)
        .with("volume", v)
        .with("ball_lambda1", l1b)
        .with("ball_lambda2", l2b);
    Ok(s.annotate(r))
}

/// Generalized PPW: `λ₂(Ω) ≤ λ₂*(λ₁(Ω))`, the second eigenvalue of the ball
/// with the same first eigenvalue.
pub fn verify_gen_ppw(s: &SolvedBody) -> Result<VerificationReport> {
    let (l1, l2) = (s.lambda(0), s.lambda(1));
    let inf = s.delta().spectral_infimum(2);
    if !(l1 > inf) {
        return Err(Error::BelowSpectralInfimum { lambda: l1, infimum: inf });
    }
    let rhs = lambda2_star(s.delta(), 2, l1)?;
    // sensitivity of λ₂* to the error in λ₁
    let t1 = s.tolerance(0);
    let tau = t1.max(1e-6 * l1).min(0.5 * (l1 - inf));
    let slope = (lambda2_star(s.delta(), 2, l1 + tau)? - lambda2_star(s.delta(), 2, l1 - tau)?) / (2.0 * tau);
    let tol = s.tolerance(1) + slope.abs() * t1 + SHOOTING_TOL * rhs;
    let r = VerificationReport::new("gen_ppw", l2, rhs, tol).with("dlambda2_star", slope);
    Ok(s.annotate(r))
}

/// `π / (2√(λ₁ + n − 1))`, the in-radius lower bound.
pub fn inradius_bound(lambda1: f64) -> f64 {
    PI / (2.0 * (lambda1 + N - 1.0).sqrt())
}

/// In-radius bound `Inrad(Ω) ≥ π/(2√(λ₁(Ω)+1))`.
pub fn verify_inradius(s: &SolvedBody) -> Result<VerificationReport> {
    let l1 = s.lambda(0);
    let lhs = inradius_bound(l1);
    let rhs = s.body.inradius();
    let tol = lhs / (2.0 * (l1 + N - 1.0)) * s.tolerance(0) + 1e-9 * rhs;
    Ok(s.annotate(VerificationReport::new("inradius", lhs, rhs, tol)))
}

/// Li–Yau gradient bound `|∇u|² ≤ Λ(sup u² − u²)` for the ground state, with
/// `Λ = λ₁` (δ ∈ {0, 1}) or `λ₁ + 1` (δ = −1), checked at triangle
/// centroids.
///
/// The vertex maximum underestimates `sup u`. Near its maximum `u` is
/// concave with chart Hessian trace `λ₁φu`, so the true supremum within the
/// star of the discrete maximizer exceeds it by at most `λ₁φ sup ρ²/2`, `ρ`
/// the longest edge of that star. Each centroid is checked against the
/// upper end of that interval; the change of the ratio across the interval
/// enters the tolerance. The reported left side is the ratio at the centroid
/// with the smallest margin.
pub fn verify_li_yau(s: &SolvedBody) -> Result<VerificationReport> {
    let l1 = s.lambda(0);
    let big = if s.delta() == Curvature::HYPERBOLIC { l1 + N - 1.0 } else { l1 };
    let u = s.ground_state();
    let mesh = &s.system().mesh;
    let (imax, sup) = u.iter().enumerate().fold((0, 0.0f64), |m, (i, &x)| if x > m.1 { (i, x) } else { m });
    let mut rho = 0.0f64;
    for t in mesh.triangles.iter().filter(|t| t.contains(&imax)) {
        for k in 0..3 {
            let (a, b) = (mesh.vertices[t[k]], mesh.vertices[t[(k + 1) % 3]]);
            rho = rho.max((a[0] - b[0]).hypot(a[1] - b[1]));
        }
    }
    let phi = conformal_weight(mesh.chart, mesh.vertices[imax]);
    let sup_hi = sup * (1.0 + 0.5 * l1 * phi * rho * rho);
    let t_eig = s.tolerance(0) / l1;
    let grads = gradient_field(mesh, u);
    let mut best: Option<(f64, f64, f64, f64)> = None;
    let mut worst = 0.0f64;
    let mut excluded = 0usize;
    for t in &grads {
        let room = big * (sup * sup - t.value * t.value);
        if room <= 0.0 {
            excluded += 1;
            continue;
        }
        let q = t.norm2 / room;
        let q_lo = t.norm2 / (big * (sup_hi * sup_hi - t.value * t.value));
        worst = worst.max(q);
        let margin = 1.0 + t_eig - q_lo;
        if best.is_none_or(|b| margin < b.0) {
            best = Some((margin, q, q_lo, t.value / sup));
        }
    }
    let (_, q, q_lo, at) = best.unwrap_or((0.0, 0.0, 0.0, 0.0));
    let r = VerificationReport::new("li_yau", q, 1.0, t_eig + (q - q_lo))
        .with("lambda_used", big)
        .with("sup", sup)
        .with("sup_upper", sup_hi)
        .with("max_ratio", worst)
        .with("value_fraction", at)
        .with("excluded", excluded)
        .with("centroids", grads.len());
    Ok(s.annotate(r))
}

fn ratio_over_s(delta: Curvature, g: &dyn RadialWeight, d: f64) -> f64 {
    if d < 1e-12 {
        g.derivative(0.0)
    } else {
        g.value(d) / s_delta(delta, d)
    }
}

/// Spectral gap bound `λ₂ − λ₁ ≤ ∫b u₁² / ∫g² u₁²` with `g(s) = min(s/R, 1)`,
/// `b = g'² + (n−1) g²/s_δ²`, about the center of mass of `u₁²` for this `g`.
/// Integrals use edge-midpoint quadrature; the gap to lumped vertex masses
/// enters the tolerance.
pub fn verify_gap_bound(s: &SolvedBody, big_r: f64) -> Result<VerificationReport> {
    if !(big_r > 0.0) {
        return Err(Error::InvalidInput(format!("R must be positive, got {big_r}")));
    }
    let delta = s.delta();
    let g = RampWeight(big_r);
    let sys = s.system();
    let u = s.ground_state();
    let cm = center_of_mass(sys, u, &g, s.body.chart)?;
    let x = cm.point.ambient();
    let mesh = &sys.mesh;
    let b_of = |d: f64| {
        let q = ratio_over_s(delta, &g, d);
        g.derivative(d).powi(2) + (N - 1.0) * q * q
    };
    let amb: Vec<[f64; 3]> = mesh.vertices.iter().map(|&c| mesh.chart.to_ambient(c)).collect();
    let (mut nb_l, mut dg_l) = (0.0, 0.0);
    for (i, a) in amb.iter().enumerate() {
        let d = ambient_distance(delta, x, *a);
        let w = sys.vertex_mass[i] * u[i] * u[i];
        nb_l += w * b_of(d);
        dg_l += w * g.value(d).powi(2);
    }
    let (mut nb, mut dg) = (0.0, 0.0);
    for (k, t) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(k).abs();
        for e in 0..3 {
            let (i, j) = (t[e], t[(e + 1) % 3]);
            let c =
                [0.5 * (mesh.vertices[i][0] + mesh.vertices[j][0]), 0.5 * (mesh.vertices[i][1] + mesh.vertices[j][1])];
            let um = 0.5 * (u[i] + u[j]);
            let w = area / 3.0 * conformal_weight(mesh.chart, c) * um * um;
            let d = ambient_distance(delta, x, mesh.chart.to_ambient(c));
            nb += w * b_of(d);
            dg += w * g.value(d).powi(2);
        }
    }
    let lhs = s.lambda(1) - s.lambda(0);
    let rhs = nb / dg;
    let rhs_lumped = nb_l / dg_l;
    let tol = s.tolerance(0) + s.tolerance(1) + (rhs - rhs_lumped).abs();
    let r = VerificationReport::new("gap_bound", lhs, rhs, tol)
        .with("R", big_r)
        .with("center_x", cm.point.coords[0])
        .with("center_y", cm.point.coords[1])
        .with("center_residual", cm.residual)
        .with("rhs_lumped", rhs_lumped)
        .flag_vacuous(10.0);
    Ok(s.annotate(r))
}

/// λ₁ of a region with its error estimate, halving the mesh sizes when the
/// region is too thin for the coarsest mesh.
fn region_lambda1(region: &Region, h_list: &[f64]) -> Result<(f64, f64)> {
    let mut h: Vec<f64> = h_list.to_vec();
    for _ in 0..4 {
        match convergence_study_region(region, &h, 1) {
            Ok(st) => return Ok((st.result.lambda(0), st.result.tolerance(0))),
            Err(Error::Mesh(_)) => h.iter_mut().for_each(|x| *x *= 0.5),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Mesh("region too thin to mesh".into()))
}

/// λ₁ of `Ω ∩ B(center, r)`, `∞` when empty. The ball is an inscribed
/// polygon, so the value can only be overestimated.
fn lambda1_in_ball(s: &SolvedBody, center: [f64; 2], r: f64) -> Result<(f64, f64, &'static str)> {
    let body = &s.body;
    let c = body.chart.to_ambient(center);
    let inside = body.ambient_vertices().iter().all(|&v| ambient_distance(body.delta, c, v) <= r);
    if inside {
        return Ok((s.lambda(0), s.tolerance(0), "whole"));
    }
    let ball = ball_polygon(body.delta, center, r, BALL_POLYGON_VERTICES)?;
    match intersect_bodies(body, &ball)? {
        None => Ok((f64::INFINITY, 0.0, "empty")),
        Some(piece) => {
            let (l, t) = region_lambda1(&Region::Body(piece), &s.h_list)?;
            Ok((l, t, "meshed"))
        }
    }
}

/// Radius of the regular `m`-gon circumscribed about the circle of radius `r`.
pub fn circumscribed_radius(delta: Curvature, r: f64, m: usize) -> Result<f64> {
    let k = (PI / m as f64).cos();
    let out = match delta.delta() {
        -1 => {
            let t = r.tanh() / k;
            if t >= 1.0 {
                return Err(Error::Domain(format!("no circumscribed {m}-gon about radius {r}")));
            }
            t.atanh()
        }
        0 => r / k,
        _ => {
            let t = (r.tan() / k).atan();
            if !(r < 0.5 * PI) {
                return Err(Error::Domain(format!("radius {r} too large for a circumscribed polygon")));
            }
            t
        }
    };
    Ok(out)
}

/// λ₁ of `Ω ∖ B(center, r)`, `∞` when empty. The ball is a circumscribed
/// polygon, so the value can only be overestimated.
fn lambda1_outside_ball(s: &SolvedBody, center: [f64; 2], r: f64) -> Result<(f64, f64, &'static str)> {
    let body = &s.body;
    let rho = circumscribed_radius(body.delta, r, BALL_POLYGON_VERTICES)?;
    let hole = ball_polygon(body.delta, center, rho, BALL_POLYGON_VERTICES)?;
    let region = Region::Difference(body.clone(), hole.clone());
    if region.is_empty() {
        return Ok((f64::INFINITY, 0.0, "empty"));
    }
    if intersect_bodies(body, &hole)?.is_none() {
        return Ok((s.lambda(0), s.tolerance(0), "whole"));
    }
    let (l, t) = region_lambda1(&region, &s.h_list)?;
    Ok((l, t, "meshed"))
}

/// Concentration of the ground state in `H²`. The first report checks
/// `(λ₂−λ₁−(n−1)/sinh²R) ∫_{Ω∖B} u² ≤ (n/R²) ∫_{Ω∩B} u²` about the center of
/// mass for `g = min(s/R, 1)`. When `R > 2√((n−1)/(λ₂−λ₁))` two more
/// reports check `λ₁(Ω) ≤ λ₁(Ω∩B) ≤ bound`; otherwise the first report is
/// flagged partial.
pub fn verify_concentration(s: &SolvedBody, big_r: f64) -> Result<Vec<VerificationReport>> {
    if s.delta() != Curvature::HYPERBOLIC {
        return Err(Error::NotApplicable("the concentration estimate is stated in hyperbolic space".into()));
    }
    if !(big_r > 0.0) {
        return Err(Error::InvalidInput(format!("R must be positive, got {big_r}")));
    }
    let (l1, l2) = (s.lambda(0), s.lambda(1));
    let gap = l2 - l1;
    if !(gap > 0.0) {
        return Err(Error::InvalidInput(format!("no spectral gap: λ₂ − λ₁ = {gap}")));
    }
    let delta = s.delta();
    let sys = s.system();
    let u = s.ground_state();
    let g = RampWeight(big_r);
    let cm = center_of_mass(sys, u, &g, s.body.chart)?;
    let x = cm.point.ambient();
    let mesh = &sys.mesh;
    // geodesic length of the longest mesh edge bounds the width of the band
    // around the sphere where vertex masses may fall on the wrong side
    let phi_max = mesh.vertices.iter().map(|&c| conformal_weight(mesh.chart, c)).fold(0.0, f64::max);
    let band_width = mesh.max_edge() * phi_max.sqrt();
    let (mut inner, mut outer, mut band) = (0.0, 0.0, 0.0);
    for (i, &c) in mesh.vertices.iter().enumerate() {
        let d = ambient_distance(delta, x, mesh.chart.to_ambient(c));
        let w = sys.vertex_mass[i] * u[i] * u[i];
        if d <= big_r {
            inner += w
        } else {
            outer += w
        }
        if (d - big_r).abs() < band_width {
            band += w;
        }
    }
    let coef = gap - (N - 1.0) / big_r.sinh().powi(2);
    let lhs = coef * outer;
    let rhs = N / (big_r * big_r) * inner;
    let tol = (coef.abs() + N / (big_r * big_r)) * band + (s.tolerance(0) + s.tolerance(1)) * outer;
    let threshold = 2.0 * ((N - 1.0) / gap).sqrt();
    let mut first = VerificationReport::new("concentration", lhs, rhs, tol)
        .with("R", big_r)
        .with("mass_inside", inner)
        .with("mass_outside", outer)
        .with("band_mass", band)
        .with("center_x", cm.point.coords[0])
        .with("center_y", cm.point.coords[1])
        .with("second_threshold", threshold);
    first = s.annotate(first);
    if !(gap * big_r * big_r > 4.0 * (N - 1.0)) {
        first.set("partial", true);
        return Ok(vec![first]);
    }
    first.set("partial", false);
    let (lb, tb, how) = lambda1_in_ball(s, cm.point.coords, big_r)?;
    let q = 4.0 * N / (gap * big_r * big_r + 4.0);
    let bound = (1.0 + 1.0 / (big_r * big_r)) / (1.0 - q) * (l1 + q);
    // sensitivity of the bound to λ₁ and λ₂
    let eps = 1e-7 * l1;
    let bound_at = |a: f64, b: f64| {
        let q = 4.0 * N / ((b - a) * big_r * big_r + 4.0);
        (1.0 + 1.0 / (big_r * big_r)) / (1.0 - q) * (a + q)
    };
    let d1 = (bound_at(l1 + eps, l2) - bound_at(l1 - eps, l2)) / (2.0 * eps);
    let d2 = (bound_at(l1, l2 + eps) - bound_at(l1, l2 - eps)) / (2.0 * eps);
    let tb_bound = d1.abs() * s.tolerance(0) + d2.abs() * s.tolerance(1);
    let upper = VerificationReport::new("concentration_ball_upper", lb, bound, tb + tb_bound)
        .with("R", big_r)
        .with("piece", how);
    let lower = VerificationReport::new("concentration_ball_lower", l1, lb, tb + s.tolerance(0))
        .with("R", big_r)
        .with("piece", how);
    Ok(vec![first, s.annotate(upper), s.annotate(lower)])
}

/// `Λ_δ(s, t)` bounding `|ln(λ_k(Ω₁)/λ_k(Ω₂))|` for bodies in `B(x₀, t)` at
/// distance `s`.
pub fn lambda_bound(delta: Curvature, s: f64, t: f64) -> f64 {
    let k = delta.as_f64() * (N - 1.0);
    let e2 = (2.0 * s).exp();
    (e2 * (e2 * s_delta(delta, t / e2) / s_delta(delta, t)).powf(k)).ln()
}

/// `Λ′_δ(s, t)` bounding `|ln(Vol Ω₁/Vol Ω₂)|`.
pub fn volume_bound(delta: Curvature, s: f64, t: f64) -> f64 {
    if delta == Curvature::HYPERBOLIC {
        let em = (-s).exp();
        ((N * s).exp() * (em * t.sinh() / (em * t).sinh()).powf(N - 1.0)).ln()
    } else {
        N * s
    }
}

/// Continuity of `λ_k` (`k ∈ {1, 2}`) and of the volume in the log-ratio
/// metric. Both bodies need the same base point and must lie in the ball
/// of radius `R` about it.
pub fn verify_continuity(a: &SolvedBody, b: &SolvedBody, big_r: f64, k: usize) -> Result<Vec<VerificationReport>> {
    if !(k == 1 || k == 2) {
        return Err(Error::InvalidInput(format!("k must be 1 or 2, got {k}")));
    }
    if a.delta() != b.delta() {
        return Err(Error::GridMismatch(format!("curvatures {} and {}", a.delta(), b.delta())));
    }
    for s in [a, b] {
        let m = s.body.max_radius();
        if m > big_r * (1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!(
                "body reaches distance {m} from the base point, beyond R = {big_r}"
            )));
        }
    }
    let d = body_metric(&support_of(&a.body, DEFAULT_GRID)?, &support_of(&b.body, DEFAULT_GRID)?)?;
    let delta = a.delta();
    let (la, lb) = (a.lambda(k - 1), b.lambda(k - 1));
    let lhs = (la / lb).ln().abs();
    let rhs = lambda_bound(delta, d, big_r);
    let tol = a.tolerance(k - 1) / la + b.tolerance(k - 1) / lb;
    let eig = VerificationReport::new(&format!("continuity_lambda{k}"), lhs, rhs, tol)
        .with("d", d)
        .with("R", big_r)
        .with("equality_gap", (lhs - rhs).abs() / rhs.abs().max(1e-300))
        .with("body_a", format!("{:016x}", a.body.fingerprint()))
        .with("body_b", format!("{:016x}", b.body.fingerprint()));
    let (va, vb) = (a.volume(), b.volume());
    let lhs_v = (va / vb).ln().abs();
    let rhs_v = volume_bound(delta, d, big_r);
    let vol = VerificationReport::new("continuity_volume", lhs_v, rhs_v, 1e-9 * lhs_v.max(1e-6))
        .with("d", d)
        .with("R", big_r)
        .with("equality_gap", (lhs_v - rhs_v).abs() / rhs_v.abs().max(1e-300));
    Ok(vec![eig, vol])
}

/// Splitting lemma: `min[λ₁(Ω∩B(y₀,R)), λ₁(Ω∖B(y₀,γR))] ≤
/// (1−R^{−α})^{−2} [λ₁(Ω) + 8/((1−γ)² R^{2(1−α)})]`, with `λ₁(∅) = ∞`.
/// `y0` is given in the body's chart. A piece too thin to mesh is reported
/// as unresolved and left out of the minimum.
pub fn verify_splitting(
    s: &SolvedBody,
    y0: [f64; 2],
    big_r: f64,
    alpha: f64,
    gamma: f64,
) -> Result<VerificationReport> {
    if !(big_r >= 1.0) {
        return Err(Error::InvalidInput(format!("R must be at least 1, got {big_r}")));
    }
    if !(alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidInput(format!("α and γ must lie in (0, 1), got {alpha}, {gamma}")));
    }
    ModelPoint::new(s.body.chart, y0)?;
    // a piece too thin to mesh stays unresolved: the other piece alone
    // bounds the minimum from above
    let unresolved = |r: Result<(f64, f64, &'static str)>| match r {
        Err(Error::Mesh(_)) => Ok((f64::INFINITY, 0.0, "unresolved")),
        other => other,
    };
    let (l_in, t_in, how_in) = unresolved(lambda1_in_ball(s, y0, big_r))?;
    let (l_out, t_out, how_out) = unresolved(lambda1_outside_ball(s, y0, gamma * big_r))?;
    if how_in == "unresolved" && how_out == "unresolved" {
        return Err(Error::Mesh("neither piece of the split can be meshed".into()));
    }
    let lhs = l_in.min(l_out);
    let t_lhs = if l_in <= l_out { t_in } else { t_out };
    let damp = (1.0 - big_r.powf(-alpha)).powi(-2);
    let rhs = damp * (s.lambda(0) + 8.0 / ((1.0 - gamma).powi(2) * big_r.powf(2.0 * (1.0 - alpha))));
    let tol = t_lhs + if damp.is_finite() { damp * s.tolerance(0) } else { 0.0 };
    let r = VerificationReport::new("splitting", lhs, rhs, tol)
        .with("R", big_r)
        .with("alpha", alpha)
        .with("gamma", gamma)
        .with("lambda1_inside", l_in)
        .with("lambda1_outside", l_out)
        .with("inside_piece", how_in)
        .with("outside_piece", how_out)
        .flag_vacuous(10.0);
    Ok(s.annotate(r))
}

/// Constants of the hyperbolic compactness lemma for volume `V₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactnessConstants {
    pub r: f64,
    pub c: f64,
    pub big_r: f64,
    /// `λ₁*(V₀)`.
    pub lambda_v0: f64,
    /// `λ₁*(V₀ − Vol B(r/2))`.
    pub lambda_reduced: f64,
}

/// `r = π/√(2λ₁*(V₀)+n−1)`, `C = min[2λ₁*(V₀), (λ₁*(V₀)+λ₁*(V₀−Vol B(r/2)))/2]`
/// and the smallest `R` with `(1−R^{−1/2})^{−2}[C + 32/R] ≤ λ₁*(V₀−Vol B(r/2))`,
/// in `H²`.
pub fn compactness_constants(v0: f64) -> Result<CompactnessConstants> {
    let h = Curvature::HYPERBOLIC;
    if !(v0 > 0.0 && v0.is_finite()) {
        return Err(Error::InvalidInput(format!("volume must be positive, got {v0}")));
    }
    let lambda_v0 = lambda1_star(h, 2, v0)?;
    let r = PI / (2.0 * lambda_v0 + N - 1.0).sqrt();
    let vb = crate::spaceform::ball_volume(h, 2, 0.5 * r)?;
    if !(v0 > vb) {
        return Err(Error::InvalidInput(format!("V₀ = {v0} does not exceed Vol B(r/2) = {vb}")));
    }
    let lambda_reduced = lambda1_star(h, 2, v0 - vb)?;
    let c = (2.0 * lambda_v0).min(0.5 * (lambda_v0 + lambda_reduced));
    let alpha = 0.5;
    let f = |x: f64| (1.0 - x.powf(-alpha)).powi(-2) * (c + 32.0 / x.powf(2.0 * (1.0 - alpha))) - lambda_reduced;
    let mut hi = 2.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoConvergence("no admissible R".into()));
        }
    }
    let big_r = crate::numeric::roots::bisect(f, 1.0 + 1e-12, hi, 1e-12 * hi, 400)?;
    Ok(CompactnessConstants { r, c, big_r, lambda_v0, lambda_reduced })
}

/// Dirichlet eigenvalue `π²(p²/a² + q²/b²)` of the `a × b` rectangle.
pub fn rectangle_eigenvalue(a: f64, b: f64, p: u32, q: u32) -> f64 {
    PI * PI * ((p * p) as f64 / (a * a) + (q * q) as f64 / (b * b))
}

/// `(λ₂−λ₁) diam^{2/3} / (1+λ₁)` of the `a × b` rectangle.
pub fn rectangle_diameter_ratio(a: f64, b: f64) -> f64 {
    let l1 = rectangle_eigenvalue(a, b, 1, 1);
    let l2 = rectangle_eigenvalue(a, b, 2, 1).min(rectangle_eigenvalue(a, b, 1, 2));
    (l2 - l1) * (a * a + b * b).sqrt().powf(2.0 / 3.0) / (1.0 + l1)
}

/// The slicing chain on an `a × b` rectangle (`a ≥ b`, `a ≥ 4`) with the
/// analytic spectrum: `λ₂ ≤ λ₁/(1−(a/2)^{−2/3})² + 2π²/(a/2)^{2/3}`.
pub fn rectangle_chain(a: f64, b: f64) -> Result<VerificationReport> {
    if !(b > 0.0 && a >= b) {
        return Err(Error::InvalidInput(format!("need a ≥ b > 0, got {a} × {b}")));
    }
    if !(a >= 4.0) {
        return Err(Error::InvalidInput(format!("the chain needs a ≥ 4, got {a}")));
    }
    let l1 = rectangle_eigenvalue(a, b, 1, 1);
    let l2 = rectangle_eigenvalue(a, b, 2, 1);
    let k = (0.5 * a).powf(-2.0 / 3.0);
    let rhs = l1 / (1.0 - k).powi(2) + 2.0 * PI * PI * k;
    let slice = PI * PI / (b * b);
    let r = VerificationReport::new("rectangle_chain", l2, rhs, 1e-12 * rhs)
        .with("a", a)
        .with("b", b)
        .with("lambda1", l1)
        .with("lambda2", l2)
        .with("gap", l2 - l1)
        .with("gap_closed_form", 3.0 * PI * PI / (a * a))
        .with("slice_lambda", slice)
        .with("slice_below_lambda1", slice <= l1)
        .with("volume_bound", a * b <= a * 4.0 * b)
        .with("lambda1_bound", l1 <= 2.0 * slice)
        .with("diameter_ratio", rectangle_diameter_ratio(a, b));
    Ok(r)
}
