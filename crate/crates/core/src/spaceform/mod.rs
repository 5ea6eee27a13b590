//! Geometry kernel for the three space forms.
//!
//! Points are handled in planar coordinate charts; every chart map goes
//! through an ambient model (hyperboloid in Minkowski space for δ = −1, the
//! affine plane `{x₀ = 1}` for δ = 0, the unit sphere for δ = 1), so all
//! conversions, geodesics and isometries have closed forms.

mod chart;
mod isometry;

pub use chart::conformal_weight;
pub(crate) use chart::{ambient_distance, ambient_exp, ambient_log, inner};
pub use chart::{
    chart_convert, conformal_factor, dilation, exp_map, geodesic_distance, log_map, unit_frame, ChartKind, ModelPoint,
    TangentVec,
};
pub use isometry::Isometry;

use crate::numeric::quad::gauss_legendre;
use crate::prelude::*;
use crate::{Error, Result};
use core::f64::consts::PI;

/// Sign of the sectional curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Curvature(i8);

impl Curvature {
    pub const HYPERBOLIC: Self = Self(-1);
    pub const FLAT: Self = Self(0);
    pub const SPHERICAL: Self = Self(1);

    pub fn new(delta: i32) -> Result<Self> {
        match delta {
            -1 | 0 | 1 => Ok(Self(delta as i8)),
            d => Err(Error::InvalidCurvature(d)),
        }
    }

    pub fn delta(self) -> i32 {
        self.0 as i32
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `sinh t`, `t` or `sin t`.
    pub fn s(self, t: f64) -> f64 {
        s_delta(self, t)
    }

    /// Derivative of [`Curvature::s`].
    pub fn c(self, t: f64) -> f64 {
        c_delta(self, t)
    }

    /// The straight-geodesic chart used for bodies.
    pub fn straight_chart(self) -> ChartKind {
        match self.0 {
            -1 => ChartKind::KleinDisk,
            0 => ChartKind::Plane,
            _ => ChartKind::Gnomonic,
        }
    }

    /// The conformal chart used for finite elements.
    pub fn conformal_chart(self) -> ChartKind {
        match self.0 {
            -1 => ChartKind::PoincareDisk,
            0 => ChartKind::Plane,
            _ => ChartKind::Stereographic,
        }
    }

    /// Bottom of the spectrum of the whole space form, `(n−1)²/4` for δ = −1.
    pub fn spectral_infimum(self, n: usize) -> f64 {
        if self.0 == -1 {
            let m = n as f64 - 1.0;
            0.25 * m * m
        } else {
            0.0
        }
    }
}

impl core::fmt::Display for Curvature {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn s_delta(delta: Curvature, t: f64) -> f64 {
    match delta.0 {
        -1 => t.sinh(),
        0 => t,
        _ => t.sin(),
    }
}

pub fn c_delta(delta: Curvature, t: f64) -> f64 {
    match delta.0 {
        -1 => t.cosh(),
        0 => 1.0,
        _ => t.cos(),
    }
}

fn gamma_half(k: usize) -> f64 {
    // Γ(k/2) for k ≥ 1
    let (mut g, mut x) = if k % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = k as f64 / 2.0;
    while x < target - 1e-9 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Area of the unit sphere `S^{n−1}`.
pub fn unit_sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

/// Volume of a geodesic ball of radius `r` in the n-dimensional space form.
pub fn ball_volume(delta: Curvature, n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be a finite non-negative number, got {r}")));
    }
    if delta == Curvature::SPHERICAL && r > PI {
        return Err(Error::Domain(format!("spherical radius {r} exceeds π")));
    }
    if n == 2 {
        return Ok(match delta.0 {
            -1 => 2.0 * PI * (r.cosh() - 1.0),
            0 => PI * r * r,
            _ => 2.0 * PI * (1.0 - r.cos()),
        });
    }
    if delta == Curvature::FLAT {
        return Ok(unit_sphere_area(n) * r.powi(n as i32) / n as f64);
    }
    let p = n as i32 - 1;
    let panels = 32 + (r * 8.0) as usize;
    Ok(unit_sphere_area(n) * gauss_legendre(|t| s_delta(delta, t).powi(p), 0.0, r, panels))
}

/// Total volume of the space form, finite only for the sphere.
pub fn total_volume(delta: Curvature, n: usize) -> f64 {
    if delta == Curvature::SPHERICAL {
        unit_sphere_area(n + 1)
    } else {
        f64::INFINITY
    }
}

/// Radius of the geodesic ball of volume `v`.
pub fn ball_radius(delta: Curvature, n: usize, v: f64) -> Result<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("volume must be positive and finite, got {v}")));
    }
    if v >= total_volume(delta, n) {
        return Err(Error::Domain(format!("volume {v} exceeds the volume of the sphere")));
    }
    if n == 2 {
        return Ok(match delta.0 {
            -1 => (1.0 + v / (2.0 * PI)).acosh(),
            0 => (v / PI).sqrt(),
            _ => (1.0 - v / (2.0 * PI)).acos(),
        });
    }
    let mut hi = if delta == Curvature::SPHERICAL { PI } else { 1.0 };
    if delta != Curvature::SPHERICAL {
        while ball_volume(delta, n, hi)? < v {
            hi *= 2.0;
        }
    }
    crate::numeric::roots::brent(|r| ball_volume(delta, n, r).unwrap_or(f64::INFINITY) - v, 0.0, hi, 1e-15, 200)
}
