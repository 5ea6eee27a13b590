//! Convex bodies of the space forms as geodesic polygons.
//!
//! A body is stored in the straight-geodesic chart of its geometry (plane,
//! Klein disk, gnomonic), where geodesic convexity is ordinary convexity of
//! the coordinate polygon. Support functions are sampled on a uniform grid
//! of directions in an orthonormal frame at the base point.

mod generate;
pub mod polygon;

pub use generate::{
    perturbed_ball, polygonal_ball, radial_point, random_body, rectangle, BallPerturbation, RandomBodyParams,
};

use crate::numeric::optim::nelder_mead_max;
use crate::prelude::*;
use crate::spaceform::{
    ambient_distance, ambient_exp, ambient_log, inner, unit_frame, ChartKind, Curvature, Isometry, ModelPoint,
};
use crate::{Error, Result};
use core::f64::consts::PI;

/// Default number of support directions.
pub const DEFAULT_GRID: usize = 256;
/// Distance kept from the hemisphere boundary on the sphere.
pub const HEMISPHERE_MARGIN: f64 = 1e-3;

/// A geodesically convex polygon with an interior base point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    pub delta: Curvature,
    pub chart: ChartKind,
    /// Counter-clockwise vertices in chart coordinates.
    pub vertices: Vec<[f64; 2]>,
    pub base: [f64; 2],
}

impl ConvexBody {
    /// Builds and validates a body.
    pub fn new(delta: Curvature, chart: ChartKind, vertices: Vec<[f64; 2]>, base: [f64; 2]) -> Result<Self> {
        let b = Self { delta, chart, vertices, base };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.chart.delta() != self.delta {
            return Err(Error::ChartCurvatureMismatch { chart: self.chart.name(), delta: self.delta.delta() });
        }
        if !self.chart.is_straight() {
            return Err(Error::InvalidBody(format!("chart {} does not have straight geodesics", self.chart.name())));
        }
        if self.vertices.len() < 3 {
            return Err(Error::InvalidBody(format!("need at least 3 vertices, got {}", self.vertices.len())));
        }
        for v in &self.vertices {
            if !self.chart.contains(*v) {
                return Err(Error::OutOfChart(v[0], v[1]));
            }
        }
        if !polygon::is_strictly_convex_ccw(&self.vertices, 1e-14) {
            return Err(Error::InvalidBody("vertices are not strictly convex in counter-clockwise order".into()));
        }
        let margin = polygon::inner_margin(&self.vertices, self.base);
        let size = self.vertices.iter().map(|v| (v[0] - self.base[0]).hypot(v[1] - self.base[1])).fold(0.0, f64::max);
        if !(margin > 1e-12 * size) {
            return Err(Error::InvalidBody("base point is not strictly interior".into()));
        }
        if self.delta == Curvature::SPHERICAL {
            let rmax = self.max_radius();
            if !(rmax < PI / 2.0 - HEMISPHERE_MARGIN) {
                return Err(Error::InvalidBody(format!(
                    "spherical body reaches distance {rmax} from its base, beyond π/2 − {HEMISPHERE_MARGIN}"
                )));
            }
        }
        Ok(())
    }

    pub fn base_point(&self) -> ModelPoint {
        ModelPoint { chart: self.chart, coords: self.base }
    }

    pub fn vertex_points(&self) -> Vec<ModelPoint> {
        self.vertices.iter().map(|&c| ModelPoint { chart: self.chart, coords: c }).collect()
    }

    pub(crate) fn ambient_vertices(&self) -> Vec<[f64; 3]> {
        self.vertices.iter().map(|&c| self.chart.to_ambient(c)).collect()
    }

    /// Largest distance from the base to the boundary (attained at a vertex).
    pub fn max_radius(&self) -> f64 {
        let b = self.chart.to_ambient(self.base);
        self.ambient_vertices().iter().map(|&v| ambient_distance(self.delta, b, v)).fold(0.0, f64::max)
    }

    /// Exact area: shoelace for δ = 0, Gauss–Bonnet from the interior angles
    /// otherwise.
    pub fn area(&self) -> f64 {
        if self.delta == Curvature::FLAT {
            return polygon::signed_area(&self.vertices);
        }
        let m = self.vertices.len();
        let angles: f64 = self.interior_angles().iter().sum();
        let flat = (m as f64 - 2.0) * PI;
        if self.delta == Curvature::HYPERBOLIC {
            flat - angles
        } else {
            angles - flat
        }
    }

    /// Interior angles measured in the space-form metric.
    pub fn interior_angles(&self) -> Vec<f64> {
        let m = self.vertices.len();
        let amb = self.ambient_vertices();
        (0..m)
            .map(|i| {
                let v = amb[i];
                let p = ModelPoint { chart: self.chart, coords: self.vertices[i] };
                let (e1, e2) = unit_frame(&p);
                let u = ambient_log(self.delta, v, amb[(i + 1) % m]).unwrap_or([0.0; 3]);
                let w = ambient_log(self.delta, v, amb[(i + m - 1) % m]).unwrap_or([0.0; 3]);
                let (ux, uy) = (inner(self.delta, u, e1), inner(self.delta, u, e2));
                let (wx, wy) = (inner(self.delta, w, e1), inner(self.delta, w, e2));
                (ux * wy - uy * wx).atan2(ux * wx + uy * wy)
            })
            .collect()
    }

    /// Image under an isometry, kept in the same chart.
    pub fn transformed(&self, g: &Isometry) -> Result<Self> {
        let map =
            |c: [f64; 2]| -> Result<[f64; 2]> { self.chart.from_ambient(g.apply_ambient(self.chart.to_ambient(c))) };
        let vertices = self.vertices.iter().map(|&c| map(c)).collect::<Result<Vec<_>>>()?;
        Self::new(self.delta, self.chart, vertices, map(self.base)?)
    }

    /// Same polygon with a different base point.
    pub fn with_base(&self, base: [f64; 2]) -> Result<Self> {
        Self::new(self.delta, self.chart, self.vertices.clone(), base)
    }

    /// Stable 64-bit fingerprint of the exact coordinates (FNV-1a).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: f64| {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.delta.as_f64());
        eat(self.base[0]);
        eat(self.base[1]);
        for v in &self.vertices {
            eat(v[0]);
            eat(v[1]);
        }
        h
    }

    /// Chart direction of the unit tangent vector at angle `theta` of the
    /// base frame.
    fn chart_direction(&self, theta: f64) -> [f64; 2] {
        let bp = self.base_point();
        let (e1, e2) = unit_frame(&bp);
        let (s, c) = theta.sin_cos();
        let v = [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]];
        self.chart.pull_back(bp.ambient(), v)
    }

    /// Boundary point hit by the geodesic ray at angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> Result<[f64; 2]> {
        let d = self.chart_direction(theta);
        let s = polygon::ray_exit(&self.vertices, self.base, d)
            .ok_or_else(|| Error::InvalidBody("base point is not interior".into()))?;
        Ok([self.base[0] + s * d[0], self.base[1] + s * d[1]])
    }

    /// Signed distance from chart point `c` to the geodesic line through
    /// edge `i`, positive on the interior side.
    fn edge_signed_distance(&self, normals: &[[f64; 3]], c: [f64; 2]) -> f64 {
        match self.delta.delta() {
            0 => normals.iter().map(|n| n[0] + n[1] * c[0] + n[2] * c[1]).fold(f64::INFINITY, f64::min),
            d => {
                if !self.chart.contains(c) {
                    return -1e300;
                }
                let x = self.chart.to_ambient(c);
                normals
                    .iter()
                    .map(|n| {
                        let t = inner(self.delta, x, *n);
                        if d == -1 {
                            t.asinh()
                        } else {
                            t.clamp(-1.0, 1.0).asin()
                        }
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Unit normals of the edge lines, oriented towards the interior. For
    /// δ = 0 the entry is `(offset, nx, ny)` of the affine distance.
    fn edge_normals(&self) -> Vec<[f64; 3]> {
        let m = self.vertices.len();
        let amb = self.ambient_vertices();
        (0..m)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % m]);
                if self.delta == Curvature::FLAT {
                    let e = [b[0] - a[0], b[1] - a[1]];
                    let l = e[0].hypot(e[1]);
                    let n = [-e[1] / l, e[0] / l];
                    [-(n[0] * a[0] + n[1] * a[1]), n[0], n[1]]
                } else {
                    geodesic_normal(self.delta, amb[i], amb[(i + 1) % m], self.chart.to_ambient(self.base))
                }
            })
            .collect()
    }

    /// In-radius: largest geodesic ball inside the closed body.
    pub fn inradius(&self) -> f64 {
        self.inradius_center().1
    }

    /// In-ball center (chart coordinates) and radius.
    pub fn inradius_center(&self) -> ([f64; 2], f64) {
        let normals = self.edge_normals();
        let f = |c: [f64; 2]| self.edge_signed_distance(&normals, c);
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let g = 40;
        let mut cands: Vec<([f64; 2], f64)> = Vec::new();
        for i in 0..=g {
            for j in 0..=g {
                let c = [lo[0] + (hi[0] - lo[0]) * i as f64 / g as f64, lo[1] + (hi[1] - lo[1]) * j as f64 / g as f64];
                if polygon::contains(&self.vertices, c) {
                    cands.push((c, f(c)));
                }
            }
        }
        cands.push((self.base, f(self.base)));
        cands.sort_by(|a, b| b.1.total_cmp(&a.1));
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let mut best = cands[0];
        for &(c, _) in cands.iter().take(6) {
            let mut x = c;
            let mut step = span / g as f64;
            for _ in 0..4 {
                let (y, v) = nelder_mead_max(f, x, step, 1e-14 * span.max(1e-300), 4000);
                if v > best.1 {
                    best = (y, v);
                }
                x = y;
                step *= 0.1;
            }
        }
        (best.0, best.1.max(0.0))
    }

    /// Whether a chart point lies in the closed body.
    pub fn contains(&self, c: [f64; 2]) -> bool {
        polygon::contains(&self.vertices, c)
    }
}

/// Unit normal of the plane through the origin containing the geodesic
/// `a b`, with `⟨interior, n⟩ > 0`.
fn geodesic_normal(delta: Curvature, a: [f64; 3], b: [f64; 3], interior: [f64; 3]) -> [f64; 3] {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let n = if delta == Curvature::HYPERBOLIC { [-c[0], c[1], c[2]] } else { c };
    let nn = inner(delta, n, n).sqrt();
    let s = if inner(delta, interior, n) < 0.0 { -1.0 / nn } else { 1.0 / nn };
    [n[0] * s, n[1] * s, n[2] * s]
}

/// Distance from `x` to the geodesic segment `[p, q]` (ambient points).
pub(crate) fn segment_distance(delta: Curvature, x: [f64; 3], p: [f64; 3], q: [f64; 3]) -> f64 {
    if delta == Curvature::FLAT {
        let e = [q[1] - p[1], q[2] - p[2]];
        let w = [x[1] - p[1], x[2] - p[2]];
        let l2 = e[0] * e[0] + e[1] * e[1];
        let t = if l2 > 0.0 { ((w[0] * e[0] + w[1] * e[1]) / l2).clamp(0.0, 1.0) } else { 0.0 };
        return (w[0] - t * e[0]).hypot(w[1] - t * e[1]);
    }
    let ends = ambient_distance(delta, x, p).min(ambient_distance(delta, x, q));
    let c = [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]];
    let n = if delta == Curvature::HYPERBOLIC { [-c[0], c[1], c[2]] } else { c };
    let nn = inner(delta, n, n);
    if !(nn > 0.0) {
        return ends;
    }
    let n = [n[0] / nn.sqrt(), n[1] / nn.sqrt(), n[2] / nn.sqrt()];
    let xn = inner(delta, x, n);
    let f = [x[0] - xn * n[0], x[1] - xn * n[1], x[2] - xn * n[2]];
    // f = αp + βq with α, β ≥ 0 exactly when the foot lies on the segment
    let (pp, pq, qq) = (inner(delta, p, p), inner(delta, p, q), inner(delta, q, q));
    let (fp, fq) = (inner(delta, f, p), inner(delta, f, q));
    let det = pp * qq - pq * pq;
    let alpha = (fp * qq - fq * pq) / det;
    let beta = (pp * fq - pq * fp) / det;
    if alpha >= 0.0 && beta >= 0.0 {
        if delta == Curvature::HYPERBOLIC {
            xn.abs().asinh()
        } else {
            xn.abs().min(1.0).asin()
        }
    } else {
        ends
    }
}

/// Sampled support function `ρ(θ_j)`, `θ_j = 2πj/m`, at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    pub delta: Curvature,
    pub base: ModelPoint,
    pub rho: Vec<f64>,
}

impl SupportFunction {
    pub fn m(&self) -> usize {
        self.rho.len()
    }

    pub fn angles(&self) -> Vec<f64> {
        let m = self.rho.len();
        (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
    }

    pub fn min(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.rho.iter().copied().fold(0.0, f64::max)
    }

    /// Largest discrete Lipschitz quotient `|ρ_{j+1} − ρ_j| / Δθ`.
    pub fn max_lipschitz_quotient(&self) -> f64 {
        let m = self.rho.len();
        let dt = 2.0 * PI / m as f64;
        (0..m).map(|j| (self.rho[(j + 1) % m] - self.rho[j]).abs() / dt).fold(0.0, f64::max)
    }

    /// Boundary points `exp_{x₀}(ρ_j v_j)` in the base chart.
    pub fn reconstruct(&self) -> Result<Vec<[f64; 2]>> {
        let (e1, e2) = unit_frame(&self.base);
        let a = self.base.ambient();
        self.angles()
            .iter()
            .zip(&self.rho)
            .map(|(&t, &r)| {
                let (s, c) = t.sin_cos();
                let v = [r * (c * e1[0] + s * e2[0]), r * (c * e1[1] + s * e2[1]), r * (c * e1[2] + s * e2[2])];
                self.base.chart.from_ambient(ambient_exp(self.delta, a, v))
            })
            .collect()
    }
}

/// Lipschitz constant of `ρ_Ω` for `B(x₀, r) ⊂ Ω ⊂ B(x₀, R)`.
///
/// Difference quotients of a Lipschitz function never exceed its constant,
/// so discrete checks only need an allowance for rounding.
pub fn lipschitz_bound(delta: Curvature, r: f64, big_r: f64) -> f64 {
    if delta == Curvature::SPHERICAL {
        return 1.0 / r.tan();
    }
    let sr = delta.s(big_r);
    let q = sr / delta.s(r);
    sr * (q * q - 1.0).max(0.0).sqrt()
}

/// Samples the support function on `m` uniform directions.
pub fn support_of(body: &ConvexBody, m: usize) -> Result<SupportFunction> {
    if m < 16 {
        return Err(Error::InvalidInput(format!("support grid needs at least 16 directions, got {m}")));
    }
    if !(polygon::inner_margin(&body.vertices, body.base) > 0.0) {
        return Err(Error::InvalidBody("base point is not interior".into()));
    }
    let b = body.chart.to_ambient(body.base);
    let rho = (0..m)
        .map(|j| {
            let p = body.boundary_point(2.0 * PI * j as f64 / m as f64)?;
            Ok(ambient_distance(body.delta, b, body.chart.to_ambient(p)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SupportFunction { delta: body.delta, base: body.base_point(), rho })
}

/// `‖ln(ρ_a/ρ_b)‖_∞` on a shared grid.
pub fn body_metric(a: &SupportFunction, b: &SupportFunction) -> Result<f64> {
    if a.delta != b.delta {
        return Err(Error::GridMismatch(format!("curvatures {} and {}", a.delta, b.delta)));
    }
    if a.rho.len() != b.rho.len() {
        return Err(Error::GridMismatch(format!("grid sizes {} and {}", a.rho.len(), b.rho.len())));
    }
    let pa = a.base;
    let pb = b.base;
    if pa.chart != pb.chart
        || (pa.coords[0] - pb.coords[0]).abs() > 1e-12
        || (pa.coords[1] - pb.coords[1]).abs() > 1e-12
    {
        return Err(Error::GridMismatch("support functions use different base points".into()));
    }
    Ok(a.rho.iter().zip(&b.rho).map(|(x, y)| (x / y).ln().abs()).fold(0.0, f64::max))
}

/// Hausdorff distance with its sampling error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffEstimate {
    pub value: f64,
    /// Half the largest boundary sample spacing; `d(·, B)` is 1-Lipschitz.
    pub grid_error: f64,
}

fn boundary_samples(body: &ConvexBody, spacing: f64) -> (Vec<[f64; 3]>, f64) {
    let amb = body.ambient_vertices();
    let m = amb.len();
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let (a, b) = (body.vertices[i], body.vertices[(i + 1) % m]);
        let len = ambient_distance(body.delta, amb[i], amb[(i + 1) % m]);
        let k = ((len / spacing).ceil() as usize).max(1);
        let mut prev = amb[i];
        out.push(amb[i]);
        for j in 1..k {
            let t = j as f64 / k as f64;
            let c = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let p = body.chart.to_ambient(c);
            worst = worst.max(ambient_distance(body.delta, prev, p));
            prev = p;
            out.push(p);
        }
        worst = worst.max(ambient_distance(body.delta, prev, amb[(i + 1) % m]));
    }
    (out, worst)
}

fn distance_to_body(body: &ConvexBody, amb: &[[f64; 3]], x: [f64; 3]) -> f64 {
    if let Ok(c) = body.chart.from_ambient(x) {
        if body.contains(c) {
            return 0.0;
        }
    }
    let m = amb.len();
    (0..m).map(|i| segment_distance(body.delta, x, amb[i], amb[(i + 1) % m])).fold(f64::INFINITY, f64::min)
}

/// Two-sided Hausdorff distance with boundary samples no farther apart than
/// `spacing` (geodesic length).
pub fn hausdorff_with(a: &ConvexBody, b: &ConvexBody, spacing: f64) -> Result<HausdorffEstimate> {
    if a.delta != b.delta || a.chart != b.chart {
        return Err(Error::ChartMismatch(a.chart.name(), b.chart.name()));
    }
    let (sa, ea) = boundary_samples(a, spacing);
    let (sb, eb) = boundary_samples(b, spacing);
    let aa = a.ambient_vertices();
    let bb = b.ambient_vertices();
    let one = sa.iter().map(|&x| distance_to_body(b, &bb, x)).fold(0.0, f64::max);
    let two = sb.iter().map(|&x| distance_to_body(a, &aa, x)).fold(0.0, f64::max);
    Ok(HausdorffEstimate { value: one.max(two), grid_error: 0.5 * ea.max(eb) })
}

/// Hausdorff distance sampled at the resolution of the default support grid.
pub fn hausdorff_distance(a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
    let r = a.max_radius().max(b.max_radius());
    hausdorff_with(a, b, (2.0 * PI * r / DEFAULT_GRID as f64).max(1e-9) * 0.25).map(|h| h.value)
}

/// Geodesic in-radius.
pub fn inradius(body: &ConvexBody) -> f64 {
    body.inradius()
}

/// Image of the body under the dilation `H_λ` about its base point, using
/// the default support grid for curved geometries.
pub fn dilate_body(body: &ConvexBody, lambda: f64) -> Result<ConvexBody> {
    dilate_body_with(body, lambda, DEFAULT_GRID)
}

/// Dilation image. For δ = 0 vertices scale exactly. Otherwise the images of
/// the vertices and of the boundary points on the `m` support directions are
/// joined by geodesics, so the support function on that grid scales exactly.
///
/// In the hyperbolic plane `H_λ` bends geodesic edges towards the base point,
/// so the image of a polygon that is not a ball about its base is generally
/// not convex; that case is reported as [`Error::ConvexityLost`].
pub fn dilate_body_with(body: &ConvexBody, lambda: f64, m: usize) -> Result<ConvexBody> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("dilation factor must lie in (0, 1], got {lambda}")));
    }
    if lambda == 1.0 {
        return Ok(body.clone());
    }
    let x0 = body.base;
    if body.delta == Curvature::FLAT {
        let v =
            body.vertices.iter().map(|p| [x0[0] + lambda * (p[0] - x0[0]), x0[1] + lambda * (p[1] - x0[1])]).collect();
        return ConvexBody::new(body.delta, body.chart, v, x0);
    }
    let mut out = dilated_samples(body, lambda, m)?;
    polygon::drop_flat_vertices(&mut out, 1e-15);
    if !polygon::is_strictly_convex_ccw(&out, 1e-15) {
        return Err(Error::ConvexityLost(format!("dilation by {lambda} produced a non-convex polygon")));
    }
    ConvexBody::new(body.delta, body.chart, out, x0)
}

/// Convex hull of the dilated boundary samples. Its support function is at
/// least `λρ` on the grid, with equality wherever the dilated sample is a
/// hull vertex.
pub fn dilate_body_hull(body: &ConvexBody, lambda: f64, m: usize) -> Result<ConvexBody> {
    if body.delta == Curvature::FLAT || lambda == 1.0 {
        return dilate_body_with(body, lambda, m);
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("dilation factor must lie in (0, 1], got {lambda}")));
    }
    let mut hull = polygon::convex_hull(&dilated_samples(body, lambda, m)?);
    polygon::drop_flat_vertices(&mut hull, 1e-15);
    ConvexBody::new(body.delta, body.chart, hull, body.base)
}

/// Dilated vertices and grid boundary points, ordered by angle at the base.
fn dilated_samples(body: &ConvexBody, lambda: f64, m: usize) -> Result<Vec<[f64; 2]>> {
    let base = body.base_point();
    let (e1, e2) = unit_frame(&base);
    let a0 = base.ambient();
    let angle_of = |c: [f64; 2]| -> f64 {
        let v = ambient_log(body.delta, a0, body.chart.to_ambient(c)).unwrap_or([0.0; 3]);
        let t = inner(body.delta, v, e2).atan2(inner(body.delta, v, e1));
        if t < 0.0 {
            t + 2.0 * PI
        } else {
            t
        }
    };
    let mut pts: Vec<(f64, [f64; 2])> = body.vertices.iter().map(|&v| (angle_of(v), v)).collect();
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        pts.push((t, body.boundary_point(t)?));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for (_, c) in pts {
        let p = crate::spaceform::dilation(&base, lambda, &ModelPoint { chart: body.chart, coords: c })?;
        if let Some(last) = out.last() {
            if (last[0] - p.coords[0]).hypot(last[1] - p.coords[1]) < 1e-13 {
                continue;
            }
        }
        out.push(p.coords);
    }
    if out.len() > 1 && (out[0][0] - out[out.len() - 1][0]).hypot(out[0][1] - out[out.len() - 1][1]) < 1e-13 {
        out.pop();
    }
    Ok(out)
}

/// Intersection of two bodies given in the same chart; `None` when it has no
/// interior.
pub fn intersect_bodies(a: &ConvexBody, b: &ConvexBody) -> Result<Option<ConvexBody>> {
    if a.chart != b.chart {
        return Err(Error::ChartMismatch(a.chart.name(), b.chart.name()));
    }
    let mut v = polygon::clip_convex(&a.vertices, &b.vertices);
    if v.is_empty() {
        return Ok(None);
    }
    polygon::drop_flat_vertices(&mut v, 1e-13);
    if !polygon::is_strictly_convex_ccw(&v, 1e-14) {
        return Ok(None);
    }
    let base = if polygon::inner_margin(&v, a.base) > 0.0 {
        a.base
    } else {
        let k = v.len() as f64;
        let c = v.iter().fold([0.0, 0.0], |s, p| [s[0] + p[0], s[1] + p[1]]);
        [c[0] / k, c[1] / k]
    };
    ConvexBody::new(a.delta, a.chart, v, base).map(Some)
}

/// Regular `m`-gon inscribed in the geodesic circle of radius `r` about an
/// arbitrary center, in the straight chart of `delta`.
pub fn ball_polygon(delta: Curvature, center: [f64; 2], r: f64, m: usize) -> Result<ConvexBody> {
    if !(r > 0.0) || m < 3 {
        return Err(Error::InvalidInput(format!("ball polygon needs r > 0 and m ≥ 3, got {r}, {m}")));
    }
    let chart = delta.straight_chart();
    let c = ModelPoint::new(chart, center)?;
    let (e1, e2) = unit_frame(&c);
    let a0 = c.ambient();
    if delta == Curvature::SPHERICAL && a0[0].clamp(-1.0, 1.0).acos() + r >= 0.5 * PI {
        return Err(Error::Domain(format!("a cap of radius {r} about {center:?} leaves the chart hemisphere")));
    }
    let mut v = Vec::with_capacity(m);
    for k in 0..m {
        let (s, co) = (2.0 * PI * k as f64 / m as f64).sin_cos();
        let t = [r * (co * e1[0] + s * e2[0]), r * (co * e1[1] + s * e2[1]), r * (co * e1[2] + s * e2[2])];
        v.push(chart.from_ambient(ambient_exp(delta, a0, t))?);
    }
    ConvexBody::new(delta, chart, v, center)
}
