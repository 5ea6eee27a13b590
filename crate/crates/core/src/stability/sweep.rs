use crate::ballspec::{lambda1_ball, lambda1_star, lambda2_ball, lambda2_star, BallSpec};
use crate::convexbody::{
    ball_polygon, body_metric, hausdorff_distance, perturbed_ball, support_of, BallPerturbation, DEFAULT_GRID,
};
use crate::prelude::*;
use crate::spaceform::{ball_radius, Curvature};
use crate::Result;

use super::center::{center_of_mass, UnitWeight};
use super::checks::BALL_POLYGON_VERTICES;
use super::{SolvedBody, VerificationReport};

/// One member of a perturbed-ball family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub eps: f64,
    /// Hausdorff distance to the same-volume ball about the center of mass.
    pub d_hausdorff: f64,
    /// Log-ratio distance to that ball, both based at the center of mass.
    pub d_metric: f64,
    /// `λ₁(Ω) − λ₁*(V)`.
    pub lambda1_excess: f64,
    /// `λ₂*(λ₁(Ω)) − λ₂(Ω)`.
    pub lambda2_deficit: f64,
    /// `λ₂*/λ₁*(V) − λ₂/λ₁(Ω)`; computed for every δ but only meaningful
    /// for δ ∈ {0, 1}.
    pub ppw_deficit: f64,
    pub lambda1_tol: f64,
    pub lambda2_tol: f64,
    pub ppw_tol: f64,
}

/// Family parameters of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepFamily {
    pub delta: Curvature,
    pub radius: f64,
    pub mode: BallPerturbation,
    /// Polygon vertices of each member.
    pub m: usize,
}

/// Solves one member of the family.
pub fn sweep_point(family: &SweepFamily, eps: f64) -> Result<SweepPoint> {
    let delta = family.delta;
    let body = perturbed_ball(delta, family.radius, eps, family.mode, family.m)?;
    let s = SolvedBody::solve(&body)?;
    let (l1, l2) = (s.lambda(0), s.lambda(1));
    let (t1, t2) = (s.tolerance(0), s.tolerance(1));
    let v = s.volume();

    let cm = center_of_mass(s.system(), s.ground_state(), &UnitWeight, body.chart)?;
    let rv = ball_radius(delta, 2, v)?;
    let ball = ball_polygon(delta, cm.point.coords, rv, BALL_POLYGON_VERTICES.max(family.m))?;
    let d_hausdorff = hausdorff_distance(&body, &ball)?;
    let rebased = body.with_base(cm.point.coords)?;
    let d_metric = body_metric(&support_of(&rebased, DEFAULT_GRID)?, &support_of(&ball, DEFAULT_GRID)?)?;

    let star1 = lambda1_star(delta, 2, v)?;
    let ballspec = BallSpec::new(delta, 2, rv)?;
    let ball_ratio = lambda2_ball(ballspec)? / lambda1_ball(ballspec)?;
    let l2_star = lambda2_star(delta, 2, l1)?;
    let ratio = l2 / l1;
    Ok(SweepPoint {
        eps,
        d_hausdorff,
        d_metric,
        lambda1_excess: l1 - star1,
        lambda2_deficit: l2_star - l2,
        ppw_deficit: ball_ratio - ratio,
        lambda1_tol: t1,
        // λ₂* inherits the λ₁ error with slope about λ₂/λ₁
        lambda2_tol: t2 + ratio * t1,
        ppw_tol: ratio * (t1 / l1 + t2 / l2),
    })
}

/// Sweeps the family over `eps_grid`; points come back in grid order.
pub fn stability_sweep(family: &SweepFamily, eps_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    eps_grid.iter().map(|&e| sweep_point(family, e)).collect()
}

/// Trend checks of a sweep: each tracked quantity vanishes at the first
/// point (which must be `eps = 0`) and is nondecreasing along the grid up to
/// the tolerances of neighbouring points. The PPW deficit is skipped for
/// δ = −1.
pub fn check_sweep(delta: Curvature, points: &[SweepPoint]) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let mut series: Vec<(&str, Vec<(f64, f64)>)> = vec![
        ("lambda1_excess", points.iter().map(|p| (p.lambda1_excess, p.lambda1_tol)).collect()),
        ("lambda2_deficit", points.iter().map(|p| (p.lambda2_deficit, p.lambda2_tol)).collect()),
    ];
    if delta != Curvature::HYPERBOLIC {
        series.push(("ppw_deficit", points.iter().map(|p| (p.ppw_deficit, p.ppw_tol)).collect()));
    }
    for (name, s) in series {
        if let Some(&(v0, t0)) = s.first() {
            let zero = points.first().map(|p| p.eps == 0.0).unwrap_or(false);
            out.push(
                VerificationReport::with_slack(&format!("sweep_{name}_at_zero"), v0.abs(), 0.0, -v0.abs(), t0)
                    .with("eps0", points[0].eps)
                    .with("grid_starts_at_zero", zero),
            );
        }
        // worst decrease between neighbours, measured against their tolerances
        let mut worst = f64::INFINITY;
        let mut worst_tol = 0.0;
        let mut strict = true;
        for w in s.windows(2) {
            let (a, ta) = w[0];
            let (b, tb) = w[1];
            let tol = ta + tb;
            if b - a + tol < worst + worst_tol || worst == f64::INFINITY {
                worst = b - a;
                worst_tol = tol;
            }
            strict &= b > a + tol;
        }
        if worst.is_finite() {
            out.push(
                VerificationReport::with_slack(&format!("sweep_{name}_monotone"), 0.0, worst, worst, worst_tol)
                    .with("strictly_increasing", strict)
                    .with("points", s.len()),
            );
        }
    }
    out
}
