//! Weighted centers of mass on the space forms.
//!
//! The root of `F(x) = Σ w_i g(d(x,y_i)) log_x(y_i)/d(x,y_i)` is the critical
//! point of `Φ(x) = Σ w_i G(d(x,y_i))` with `G' = g`; `Φ` is geodesically
//! convex for nondecreasing `g`, so a damped Riemannian Newton iteration
//! finds it.

use crate::error::Error;
use crate::laplace2d::AssembledSystem;
use crate::prelude::*;
use crate::spaceform::{
    ambient_distance, ambient_exp, ambient_log, c_delta, inner, s_delta, unit_frame, ChartKind, Curvature, ModelPoint,
};
use crate::Result;

/// Data points closer than this to `x` count as sitting at `x`.
const ATOM_RADIUS: f64 = 1e-9;

/// Radial weight `g` with its primitive `G` and derivative.
pub trait RadialWeight {
    fn value(&self, s: f64) -> f64;
    fn primitive(&self, s: f64) -> f64;
    fn derivative(&self, s: f64) -> f64;
    /// `sup g` over `[0, s_max]`.
    fn sup(&self, s_max: f64) -> f64 {
        self.value(s_max)
    }
}

/// `g ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitWeight;

impl RadialWeight for UnitWeight {
    fn value(&self, _: f64) -> f64 {
        1.0
    }
    fn primitive(&self, s: f64) -> f64 {
        s
    }
    fn derivative(&self, _: f64) -> f64 {
        0.0
    }
}

/// `g(s) = s`; the root of `F` is then the Riemannian barycenter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearWeight;

impl RadialWeight for LinearWeight {
    fn value(&self, s: f64) -> f64 {
        s
    }
    fn primitive(&self, s: f64) -> f64 {
        0.5 * s * s
    }
    fn derivative(&self, _: f64) -> f64 {
        1.0
    }
}

/// `g(s) = min(s/R, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampWeight(pub f64);

impl RadialWeight for RampWeight {
    fn value(&self, s: f64) -> f64 {
        (s / self.0).min(1.0)
    }
    fn primitive(&self, s: f64) -> f64 {
        if s <= self.0 {
            0.5 * s * s / self.0
        } else {
            s - 0.5 * self.0
        }
    }
    fn derivative(&self, s: f64) -> f64 {
        if s < self.0 {
            1.0 / self.0
        } else {
            0.0
        }
    }
    fn sup(&self, s_max: f64) -> f64 {
        self.value(s_max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterOfMass {
    pub point: ModelPoint,
    /// `‖F(x)‖` at the returned point.
    pub residual: f64,
    /// Convergence threshold on `‖F‖`.
    pub threshold: f64,
    pub iterations: usize,
}

/// Weighted point cloud in the ambient model.
struct Cloud<'a> {
    delta: Curvature,
    points: &'a [[f64; 3]],
    weights: &'a [f64],
}

impl Cloud<'_> {
    fn potential(&self, x: [f64; 3], g: &dyn RadialWeight) -> f64 {
        self.points.iter().zip(self.weights).map(|(&y, &w)| w * g.primitive(ambient_distance(self.delta, x, y))).sum()
    }

    fn nearest(&self, x: [f64; 3]) -> Option<([f64; 3], f64)> {
        self.points.iter().map(|&y| (y, ambient_distance(self.delta, x, y))).min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// The data point closest to `x`, if its potential does not exceed `phi`.
    fn nearest_better(&self, x: [f64; 3], phi: f64, g: &dyn RadialWeight) -> Option<[f64; 3]> {
        let (y, d) = self.nearest(x)?;
        (d > 0.0 && self.potential(y, g) <= phi).then_some(y)
    }

    /// `‖F‖` at `x` net of the mass sitting there.
    fn residual(&self, x: [f64; 3], chart: ChartKind, g: &dyn RadialWeight) -> Result<f64> {
        let (f, _, atom) = self.field(x, frame_of(x, chart)?, g)?;
        Ok((f[0].hypot(f[1]) - atom * g.value(0.0)).max(0.0))
    }

    /// `F(x)` over the points away from `x`, the Riemannian Hessian of `Φ`
    /// in the frame `(e₁, e₂)`, and the mass sitting at `x` itself.
    fn field(
        &self,
        x: [f64; 3],
        e: ([f64; 3], [f64; 3]),
        g: &dyn RadialWeight,
    ) -> Result<([f64; 2], [[f64; 2]; 2], f64)> {
        let mut f = [0.0; 2];
        let mut h = [[0.0; 2]; 2];
        let mut atom = 0.0;
        for (&y, &w) in self.points.iter().zip(self.weights) {
            if w == 0.0 {
                continue;
            }
            let d = ambient_distance(self.delta, x, y);
            if d < ATOM_RADIUS {
                // Φ is smooth here only when g(0) = 0
                atom += w;
                let k = w * g.derivative(0.0);
                h[0][0] += k;
                h[1][1] += k;
                continue;
            }
            let v = ambient_log(self.delta, x, y)?;
            let t = [inner(self.delta, v, e.0) / d, inner(self.delta, v, e.1) / d];
            let gd = g.value(d);
            f[0] += w * gd * t[0];
            f[1] += w * gd * t[1];
            let radial = w * g.derivative(d);
            let tangential = w * gd * c_delta(self.delta, d) / s_delta(self.delta, d);
            for i in 0..2 {
                for j in 0..2 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    h[i][j] += radial * t[i] * t[j] + tangential * (id - t[i] * t[j]);
                }
            }
        }
        Ok((f, h, atom))
    }
}

fn frame_of(x: [f64; 3], chart: ChartKind) -> Result<([f64; 3], [f64; 3])> {
    Ok(unit_frame(&ModelPoint::from_ambient(chart, x)?))
}

/// Root of `F` for a weighted point cloud given in `chart`.
pub fn center_of_mass_points(
    chart: ChartKind,
    points: &[[f64; 2]],
    weights: &[f64],
    g: &dyn RadialWeight,
) -> Result<CenterOfMass> {
    if points.len() != weights.len() || points.is_empty() {
        return Err(Error::InvalidInput(format!("{} points with {} weights", points.len(), weights.len())));
    }
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidInput("weights must be non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidInput("weights vanish".into()));
    }
    let delta = chart.delta();
    let amb: Vec<[f64; 3]> = points.iter().map(|&c| chart.to_ambient(c)).collect();
    let cloud = Cloud { delta, points: &amb, weights };

    // start from the normalized weighted ambient mean
    let mut m = [0.0; 3];
    for (a, &w) in amb.iter().zip(weights) {
        for k in 0..3 {
            m[k] += w * a[k] / total;
        }
    }
    let mut x = match delta.delta() {
        0 => [1.0, m[1], m[2]],
        _ => {
            let n = (delta.as_f64() * inner(delta, m, m)).abs().sqrt();
            [m[0] / n, m[1] / n, m[2] / n]
        }
    };
    let diam = amb.iter().map(|&a| ambient_distance(delta, x, a)).fold(0.0, f64::max) * 2.0;
    let threshold = 1e-8 * g.sup(diam.max(1e-300)) * total;

    let mut phi = cloud.potential(x, g);
    for it in 0..200 {
        let e = frame_of(x, chart)?;
        let (f, h, atom) = cloud.field(x, e, g)?;
        // at a data point F is set-valued: any vector within atom·g(0) of
        // the remaining sum is attained
        let fnorm = (f[0].hypot(f[1]) - atom * g.value(0.0)).max(0.0);
        if fnorm <= threshold {
            return Ok(CenterOfMass {
                point: ModelPoint::from_ambient(chart, x)?,
                residual: fnorm,
                threshold,
                iterations: it,
            });
        }
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let mut step = if det > 0.0 && h[0][0] > 0.0 {
            [(h[1][1] * f[0] - h[0][1] * f[1]) / det, (h[0][0] * f[1] - h[1][0] * f[0]) / det]
        } else {
            let s = 1.0 / total.max(1e-300);
            [f[0] * s, f[1] * s]
        };
        // a step that reaches a data point may be chasing a root sitting on
        // it, which Newton only approaches linearly
        let reach = step[0].hypot(step[1]);
        if let Some((y, d)) = cloud.nearest(x) {
            if d > 0.0 && d <= 2.0 * reach {
                let r = cloud.residual(y, chart, g)?;
                if r <= threshold {
                    return Ok(CenterOfMass {
                        point: ModelPoint::from_ambient(chart, y)?,
                        residual: r,
                        threshold,
                        iterations: it + 1,
                    });
                }
            }
        }
        let mut accepted = false;
        for _ in 0..60 {
            let v = [0, 1, 2].map(|k| step[0] * e.0[k] + step[1] * e.1[k]);
            let y = ambient_exp(delta, x, v);
            let py = cloud.potential(y, g);
            // near the root the decrease of Φ drops below its rounding; a
            // step is then judged by the residual instead
            let flat = py - phi <= 64.0 * f64::EPSILON * phi.abs();
            if py <= phi || (flat && cloud.residual(y, chart, g)? < fnorm) {
                x = y;
                phi = py;
                accepted = true;
                break;
            }
            step = [0.5 * step[0], 0.5 * step[1]];
        }
        if !accepted {
            if let Some(y) = cloud.nearest_better(x, phi, g) {
                x = y;
                phi = cloud.potential(y, g);
                continue;
            }
            return Err(Error::NoConvergence(format!(
                "center of mass stalled with residual {fnorm:.3e} (threshold {threshold:.3e})"
            )));
        }
    }
    let r = cloud.residual(x, chart, g)?;
    Err(Error::NoConvergence(format!(
        "center of mass: residual {r:.3e} after 200 iterations (threshold {threshold:.3e})"
    )))
}

/// Center of mass of `u²` on the mesh of `sys` with lumped vertex masses.
/// The point is returned in `chart`.
pub fn center_of_mass(
    sys: &AssembledSystem,
    u: &[f64],
    g: &dyn RadialWeight,
    chart: ChartKind,
) -> Result<CenterOfMass> {
    if u.len() != sys.vertex_mass.len() {
        return Err(Error::InvalidInput(format!("{} values for {} vertices", u.len(), sys.vertex_mass.len())));
    }
    let w: Vec<f64> = u.iter().zip(&sys.vertex_mass).map(|(x, m)| x * x * m).collect();
    let c = center_of_mass_points(sys.mesh.chart, &sys.mesh.vertices, &w, g)?;
    let p = ModelPoint::from_ambient(chart, c.point.ambient())?;
    Ok(CenterOfMass { point: p, ..c })
}
