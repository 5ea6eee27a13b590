//! Test-family generators: polygonal balls, random bodies, perturbed balls.

use super::{polygon, ConvexBody, HEMISPHERE_MARGIN};
use crate::prelude::*;
use crate::spaceform::Curvature;
use crate::{Error, Result};
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straight-chart point at distance `rho` from the chart origin in the
/// direction `theta`.
pub fn radial_point(delta: Curvature, rho: f64, theta: f64) -> [f64; 2] {
    let t = match delta.delta() {
        -1 => rho.tanh(),
        0 => rho,
        _ => rho.tan(),
    };
    let (s, c) = theta.sin_cos();
    [t * c, t * s]
}

fn check_radius(delta: Curvature, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    if delta == Curvature::SPHERICAL && r >= PI / 2.0 - HEMISPHERE_MARGIN {
        return Err(Error::InvalidInput(format!("spherical radius {r} leaves the hemisphere")));
    }
    Ok(())
}

/// Regular `m`-gon inscribed in the geodesic circle of radius `r` about the
/// chart origin.
pub fn polygonal_ball(delta: Curvature, r: f64, m: usize) -> Result<ConvexBody> {
    check_radius(delta, r)?;
    let v = (0..m).map(|k| radial_point(delta, r, 2.0 * PI * k as f64 / m as f64)).collect();
    ConvexBody::new(delta, delta.straight_chart(), v, [0.0, 0.0])
}

/// Euclidean `a × b` rectangle centered at the origin.
pub fn rectangle(a: f64, b: f64) -> Result<ConvexBody> {
    let (x, y) = (0.5 * a, 0.5 * b);
    ConvexBody::new(
        Curvature::FLAT,
        crate::spaceform::ChartKind::Plane,
        vec![[-x, -y], [x, -y], [x, y], [-x, y]],
        [0.0, 0.0],
    )
}

/// Parameters of [`random_body`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomBodyParams {
    /// Number of random boundary points before taking the hull.
    pub nv: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for RandomBodyParams {
    fn default() -> Self {
        Self { nv: 12, r_min: 0.5, r_max: 1.0 }
    }
}

/// Convex hull of `nv` random points at distances in `[r_min, r_max]` from
/// the chart origin. Deterministic per seed.
pub fn random_body(delta: Curvature, seed: u64, p: RandomBodyParams) -> Result<ConvexBody> {
    if !(p.r_min > 0.0 && p.r_min <= p.r_max) {
        return Err(Error::InvalidInput(format!("need 0 < r_min ≤ r_max, got {} and {}", p.r_min, p.r_max)));
    }
    check_radius(delta, p.r_max)?;
    if p.nv < 3 {
        return Err(Error::InvalidInput("need at least 3 points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let pts: Vec<[f64; 2]> = (0..p.nv)
            .map(|_| {
                let th = rng.gen::<f64>() * 2.0 * PI;
                let rho = p.r_min + (p.r_max - p.r_min) * rng.gen::<f64>();
                radial_point(delta, rho, th)
            })
            .collect();
        let mut hull = polygon::convex_hull(&pts);
        polygon::drop_flat_vertices(&mut hull, 1e-10);
        if hull.len() < 3 {
            continue;
        }
        if let Ok(b) = ConvexBody::new(delta, delta.straight_chart(), hull, [0.0, 0.0]) {
            if polygon::inner_margin(&b.vertices, b.base) > 1e-3 * p.r_min {
                return Ok(b);
            }
        }
    }
    Err(Error::Degenerate(format!("no valid random body after 64 attempts (seed {seed})")))
}

/// Perturbation families of a geodesic ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallPerturbation {
    /// Tangent-plane ellipse with semi-axes `r(1+ε)` and `r/(1+ε)` mapped by
    /// the exponential map.
    Ellipse,
    /// `ρ(θ) = r(1 + ε((1+cos θ)/2)²)`.
    OneBump,
}

impl BallPerturbation {
    pub fn name(self) -> &'static str {
        match self {
            BallPerturbation::Ellipse => "ellipse",
            BallPerturbation::OneBump => "one-bump",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "ellipse" => Some(BallPerturbation::Ellipse),
            "one-bump" | "bump" => Some(BallPerturbation::OneBump),
            _ => None,
        }
    }
}

/// A ball of radius `r` perturbed by `eps`, polygonalized with `m` vertices.
pub fn perturbed_ball(delta: Curvature, r: f64, eps: f64, mode: BallPerturbation, m: usize) -> Result<ConvexBody> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidInput(format!("eps must be non-negative, got {eps}")));
    }
    check_radius(delta, r)?;
    let rho = |th: f64| match mode {
        BallPerturbation::Ellipse => {
            let (a, b) = (r * (1.0 + eps), r / (1.0 + eps));
            let (s, c) = th.sin_cos();
            a * b / ((b * c).powi(2) + (a * s).powi(2)).sqrt()
        }
        BallPerturbation::OneBump => {
            let w = 0.5 * (1.0 + th.cos());
            r * (1.0 + eps * w * w)
        }
    };
    let mut v = Vec::with_capacity(m);
    for k in 0..m {
        let th = 2.0 * PI * k as f64 / m as f64;
        let q = rho(th);
        check_radius(delta, q).map_err(|_| Error::ConvexityLost(format!("perturbation reaches radius {q}")))?;
        v.push(radial_point(delta, q, th));
    }
    if !polygon::is_strictly_convex_ccw(&v, 1e-15) {
        return Err(Error::ConvexityLost(format!("{} perturbation with eps = {eps} is not convex", mode.name())));
    }
    ConvexBody::new(delta, delta.straight_chart(), v, [0.0, 0.0]).map_err(|e| Error::ConvexityLost(format!("{e}")))
}
