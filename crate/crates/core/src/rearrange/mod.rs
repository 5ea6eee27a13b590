//! Discrete Schwarz symmetrization.
//!
//! Two measures are available. Lumped vertex masses `∫ φ ψ_i` turn a vertex
//! function into a step function on a finite measure space, where
//! rearrangements and the Hardy–Littlewood integrals are exact. The exact
//! superlevel measure of the P1 interpolant is used where derivatives of the
//! profile matter (Pólya–Szegő): lumped bin masses fluctuate from level to
//! level and that noise inflates the radial energy.
//!
//! Radial profiles are rebuilt from the distribution function on a uniform
//! grid of levels and interpolated linearly in the radius.

use crate::ballspec::lambda1_star;
use crate::laplace2d::{AssembledSystem, TriMesh};
use crate::numeric::quad::gauss_legendre;
use crate::prelude::*;
use crate::spaceform::{ball_radius, ball_volume, conformal_weight, unit_sphere_area, ChartKind, Curvature};
use crate::stability::VerificationReport;
use crate::{Error, Result};
#[cfg(test)]
use core::f64::consts::PI;

/// Smallest accepted number of levels.
pub const MIN_LEVELS: usize = 32;

/// `μ(s) = vol{u > s}` at uniformly spaced levels `s_j = j·max/L`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFn {
    /// Increasing levels in `[0, max)`.
    pub levels: Vec<f64>,
    /// Nonincreasing measures at the levels.
    pub measures: Vec<f64>,
    /// Total mass of the domain.
    pub volume: f64,
    pub max: f64,
    /// `vol{u ≥ max}`, nonzero only for plateaus at the maximum.
    pub top: f64,
}

impl DistributionFn {
    /// Largest mass between two consecutive levels (including the top bin).
    pub fn max_bin_mass(&self) -> f64 {
        let mut m = self.measures.last().copied().unwrap_or(0.0);
        for w in self.measures.windows(2) {
            m = m.max(w[0] - w[1]);
        }
        m
    }
}

/// Vertex values with their masses, sorted by decreasing value; ties keep
/// vertex order.
fn sorted_steps(u: &[f64], masses: &[f64]) -> Vec<(f64, f64)> {
    let mut s: Vec<(f64, f64)> = u.iter().copied().zip(masses.iter().copied()).collect();
    s.sort_by(|a, b| b.0.total_cmp(&a.0));
    s
}

/// `vol{u > s}` for a vertex function with the given masses.
pub fn measure_above(u: &[f64], masses: &[f64], s: f64) -> f64 {
    u.iter().zip(masses).filter(|(x, _)| **x > s).map(|(_, m)| m).sum()
}

/// Distribution function of `u` with the lumped masses of `sys`.
pub fn distribution_function(u: &[f64], sys: &AssembledSystem, levels: usize) -> Result<DistributionFn> {
    distribution_with_masses(u, &sys.vertex_mass, levels)
}

pub fn distribution_with_masses(u: &[f64], masses: &[f64], levels: usize) -> Result<DistributionFn> {
    if levels < MIN_LEVELS {
        return Err(Error::InvalidInput(format!("need at least {MIN_LEVELS} levels, got {levels}")));
    }
    if u.len() != masses.len() {
        return Err(Error::InvalidInput(format!("{} values for {} masses", u.len(), masses.len())));
    }
    let steps = sorted_steps(u, masses);
    let max = steps.first().map(|s| s.0).unwrap_or(0.0).max(0.0);
    let mut cum = Vec::with_capacity(steps.len());
    let mut acc = 0.0;
    for s in &steps {
        acc += s.1;
        cum.push(acc);
    }
    let above = |s: f64| {
        let k = steps.partition_point(|x| x.0 > s);
        if k == 0 {
            0.0
        } else {
            cum[k - 1]
        }
    };
    let levels: Vec<f64> = (0..levels).map(|j| max * j as f64 / levels as f64).collect();
    let measures = levels.iter().map(|&s| above(s)).collect();
    let k = steps.partition_point(|x| x.0 >= max);
    let top = if k == 0 { 0.0 } else { cum[k - 1] };
    Ok(DistributionFn { levels, measures, volume: acc, max, top })
}

/// Weighted area of `{u > s}` inside one triangle, with the conformal
/// weight taken at the centroid of the clipped piece.
fn superlevel_piece(chart: ChartKind, p: [[f64; 2]; 3], u: [f64; 3], s: f64) -> f64 {
    let mut poly: Vec<[f64; 2]> = Vec::with_capacity(4);
    for k in 0..3 {
        let (a, b) = (k, (k + 1) % 3);
        if u[a] > s {
            poly.push(p[a]);
        }
        if (u[a] > s) != (u[b] > s) {
            let t = (s - u[a]) / (u[b] - u[a]);
            poly.push([p[a][0] + t * (p[b][0] - p[a][0]), p[a][1] + t * (p[b][1] - p[a][1])]);
        }
    }
    weighted_area(chart, &poly)
}

fn weighted_area(chart: ChartKind, poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let c = p[0] * q[1] - q[0] * p[1];
        a += c;
        cx += (p[0] + q[0]) * c;
        cy += (p[1] + q[1]) * c;
    }
    if a.abs() < 1e-300 {
        return 0.0;
    }
    let c = [cx / (3.0 * a), cy / (3.0 * a)];
    0.5 * a.abs() * conformal_weight(chart, c)
}

fn plateau_radius(delta: Curvature, v: f64) -> Result<f64> {
    if v > 0.0 {
        ball_radius(delta, 2, v)
    } else {
        Ok(0.0)
    }
}

/// Distribution function of the P1 interpolant of `u`: exact superlevel
/// areas per triangle, weighted by `φ` at the centroid of each piece.
pub fn p1_distribution_function(u: &[f64], mesh: &TriMesh, levels: usize) -> Result<DistributionFn> {
    if levels < MIN_LEVELS {
        return Err(Error::InvalidInput(format!("need at least {MIN_LEVELS} levels, got {levels}")));
    }
    if u.len() != mesh.vertices.len() {
        return Err(Error::InvalidInput(format!("{} values for {} vertices", u.len(), mesh.vertices.len())));
    }
    let max = u.iter().fold(0.0f64, |m, x| m.max(*x));
    let lv: Vec<f64> = (0..levels).map(|j| max * j as f64 / levels as f64).collect();
    let mut below = vec![0.0; levels + 1];
    let mut measures = vec![0.0; levels];
    let (mut volume, mut top) = (0.0, 0.0);
    for t in &mesh.triangles {
        let p = t.map(|i| mesh.vertices[i]);
        let v = t.map(|i| u[i]);
        let w = weighted_area(mesh.chart, &p);
        volume += w;
        let (lo, hi) = (v[0].min(v[1]).min(v[2]), v[0].max(v[1]).max(v[2]));
        if lo >= max {
            top += w;
        }
        // levels strictly below the minimum see the whole triangle
        let first = lv.partition_point(|&s| s < lo);
        below[first] += w;
        for (j, &s) in lv.iter().enumerate().skip(first) {
            if s >= hi {
                break;
            }
            measures[j] += superlevel_piece(mesh.chart, p, v, s);
        }
    }
    let mut acc = 0.0;
    for j in (0..levels).rev() {
        acc += below[j + 1];
        measures[j] += acc;
    }
    Ok(DistributionFn { levels: lv, measures, volume, max, top })
}

/// Radial function on `[0, r*]` in dimension two, linear between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub delta: Curvature,
    pub n: usize,
    /// Increasing radii, starting at 0.
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// `true` for `f*`, `false` for `f_*`.
    pub decreasing: bool,
    /// Radius of the ball with the volume of the domain.
    pub r_star: f64,
}

impl RadialProfile {
    /// Builds a profile from samples, merging repeated radii.
    pub fn from_samples(delta: Curvature, radii: &[f64], values: &[f64], decreasing: bool, r_star: f64) -> Self {
        let mut r: Vec<f64> = Vec::with_capacity(radii.len());
        let mut v: Vec<f64> = Vec::with_capacity(values.len());
        for (&t, &x) in radii.iter().zip(values) {
            if let Some(&last) = r.last() {
                if !(t > last) {
                    continue;
                }
            }
            r.push(t);
            v.push(x);
        }
        Self { delta, n: 2, radii: r, values: v, decreasing, r_star }
    }

    pub fn value(&self, t: f64) -> f64 {
        let k = self.radii.partition_point(|&r| r <= t);
        if k == 0 {
            return self.values[0];
        }
        if k == self.radii.len() {
            return self.values[k - 1];
        }
        let (a, b) = (self.radii[k - 1], self.radii[k]);
        let w = (t - a) / (b - a);
        self.values[k - 1] * (1.0 - w) + self.values[k] * w
    }

    fn vol(&self, t: f64) -> f64 {
        ball_volume(self.delta, self.n, t.max(0.0)).unwrap_or(f64::NAN)
    }

    /// `∫ f² dvol` over the ball of radius `r*`.
    pub fn l2_norm2(&self) -> f64 {
        let sig = unit_sphere_area(self.n);
        let mut acc = 0.0;
        for k in 0..self.radii.len() - 1 {
            let (a, b) = (self.radii[k], self.radii[k + 1]);
            acc += gauss_legendre(
                |t| {
                    let v = self.value(t);
                    v * v * sig * self.delta.s(t).powi(self.n as i32 - 1)
                },
                a,
                b,
                1,
            );
        }
        let (last, v) = (self.radii[self.radii.len() - 1], self.values[self.values.len() - 1]);
        if self.r_star > last {
            acc += v * v * (self.vol(self.r_star) - self.vol(last));
        }
        acc
    }

    /// `∫ |f′|² dvol`.
    pub fn dirichlet_energy(&self) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.radii.len() - 1 {
            let (a, b) = (self.radii[k], self.radii[k + 1]);
            let slope = (self.values[k + 1] - self.values[k]) / (b - a);
            acc += slope * slope * (self.vol(b) - self.vol(a));
        }
        acc
    }

    /// `vol{f > s}` over the ball of radius `r*`.
    pub fn distribution(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        let nseg = self.radii.len();
        for k in 0..nseg {
            let a = self.radii[k];
            let (b, vb) =
                if k + 1 < nseg { (self.radii[k + 1], self.values[k + 1]) } else { (self.r_star, self.values[k]) };
            if !(b > a) {
                continue;
            }
            let va = self.values[k];
            let (lo, hi) = if va > s && vb > s {
                (a, b)
            } else if va <= s && vb <= s {
                continue;
            } else {
                let t = a + (s - va) / (vb - va) * (b - a);
                if va > s {
                    (a, t)
                } else {
                    (t, b)
                }
            };
            acc += self.vol(hi) - self.vol(lo);
        }
        acc
    }
}

/// Nonincreasing rearrangement `f*` onto the ball with the domain's volume.
pub fn decreasing_rearrangement(dist: &DistributionFn, delta: Curvature) -> Result<RadialProfile> {
    let r_star = ball_radius(delta, 2, dist.volume)?;
    let mut radii = vec![0.0, plateau_radius(delta, dist.top)?];
    let mut values = vec![dist.max, dist.max];
    for j in (0..dist.levels.len()).rev() {
        radii.push(ball_radius(delta, 2, dist.measures[j])?);
        values.push(dist.levels[j]);
    }
    radii.push(r_star);
    values.push(0.0);
    Ok(RadialProfile::from_samples(delta, &radii, &values, true, r_star))
}

/// Nondecreasing rearrangement `f_*`, built from `r ↦ vol(Ω) − V(r)`.
pub fn increasing_rearrangement(dist: &DistributionFn, delta: Curvature, total_volume: f64) -> Result<RadialProfile> {
    if !total_volume.is_finite() {
        return Err(Error::NotApplicable("the increasing rearrangement needs a finite volume".into()));
    }
    if total_volume < dist.measures.first().copied().unwrap_or(0.0) * (1.0 - 1e-12) {
        return Err(Error::InvalidInput(format!("volume {total_volume} is below the support measure")));
    }
    let r_star = ball_radius(delta, 2, total_volume)?;
    let mut radii = vec![0.0];
    let mut values = vec![0.0];
    for j in 0..dist.levels.len() {
        radii.push(plateau_radius(delta, (total_volume - dist.measures[j]).max(0.0))?);
        values.push(dist.levels[j]);
    }
    radii.push(plateau_radius(delta, (total_volume - dist.top).max(0.0))?);
    values.push(dist.max);
    radii.push(r_star);
    values.push(dist.max);
    Ok(RadialProfile::from_samples(delta, &radii, &values, false, r_star))
}

/// `∫₀^T a(V) b(V) dV` for two step functions given as `(value, mass)` runs.
fn step_product(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a.first().map(|x| x.1).unwrap_or(0.0), b.first().map(|x| x.1).unwrap_or(0.0));
    let mut acc = 0.0;
    while i < a.len() && j < b.len() {
        let w = ra.min(rb);
        acc += a[i].0 * b[j].0 * w;
        ra -= w;
        rb -= w;
        if ra <= 0.0 {
            i += 1;
            ra = a.get(i).map(|x| x.1).unwrap_or(0.0);
        }
        if rb <= 0.0 {
            j += 1;
            rb = b.get(j).map(|x| x.1).unwrap_or(0.0);
        }
    }
    acc
}

/// Hardy–Littlewood: `∫ f_* g* ≤ ∫ f g ≤ ∫ f* g*`. The report compares the
/// middle term with the upper bound and stores the smaller of both margins
/// as slack; the lower bound is in the context.
pub fn check_hardy_littlewood(f: &[f64], g: &[f64], sys: &AssembledSystem) -> Result<VerificationReport> {
    hardy_littlewood_with_masses(f, g, &sys.vertex_mass)
}

pub fn hardy_littlewood_with_masses(f: &[f64], g: &[f64], masses: &[f64]) -> Result<VerificationReport> {
    if f.len() != masses.len() || g.len() != masses.len() {
        return Err(Error::InvalidInput("functions and masses differ in length".into()));
    }
    if f.iter().chain(g).any(|x| *x < 0.0) {
        return Err(Error::InvalidInput("Hardy–Littlewood needs nonnegative functions".into()));
    }
    let fs = sorted_steps(f, masses);
    let gs = sorted_steps(g, masses);
    let mut fr = fs.clone();
    fr.reverse();
    let upper = step_product(&fs, &gs);
    let lower = step_product(&fr, &gs);
    let middle: f64 = f.iter().zip(g).zip(masses).map(|((a, b), m)| a * b * m).sum();
    let tol = 1e-12 * upper.abs().max(1e-300) * (masses.len() as f64).sqrt();
    let slack = (upper - middle).min(middle - lower);
    Ok(VerificationReport::with_slack("hardy_littlewood", middle, upper, slack, tol)
        .with("lower", lower)
        .with("middle", middle)
        .with("upper", upper))
}

/// Equimeasurability of `u*`: largest gap between the profile's
/// distribution and `μ_u`, tested at the levels and the bin midpoints,
/// against the largest bin mass.
pub fn check_equimeasurability(
    u: &[f64],
    sys: &AssembledSystem,
    delta: Curvature,
    levels: usize,
) -> Result<VerificationReport> {
    let dist = distribution_function(u, sys, levels)?;
    let prof = decreasing_rearrangement(&dist, delta)?;
    let mut worst = 0.0f64;
    let step = dist.max / levels as f64;
    for j in 0..levels {
        for s in [dist.levels[j], dist.levels[j] + 0.5 * step] {
            let a = measure_above(u, &sys.vertex_mass, s);
            worst = worst.max((prof.distribution(s) - a).abs());
        }
    }
    let bin = dist.max_bin_mass();
    Ok(VerificationReport::new("equimeasurability", worst, bin, 1e-12 * dist.volume).with("levels", levels))
}

/// `‖u*‖₂` against the finite element mass norm of `u`, relative gap ≤ 1%.
pub fn check_l2_isometry(
    u: &[f64],
    sys: &AssembledSystem,
    delta: Curvature,
    levels: usize,
) -> Result<VerificationReport> {
    let dist = distribution_function(u, sys, levels)?;
    let prof = decreasing_rearrangement(&dist, delta)?;
    let a = prof.l2_norm2();
    let b = sys.mass_norm2(u);
    let rel = (a - b).abs() / b;
    Ok(VerificationReport::new("l2_isometry", rel, 0.01, 1e-12)
        .with("rearranged", a)
        .with("original", b)
        .with("levels", levels))
}

/// Pólya–Szegő: radial Dirichlet energy of `u*` (from the P1 distribution
/// function) against `uᵀAu`. The tolerance adds the change of the radial
/// energy when the level count is halved to `rel_tol` times the energy. The
/// context replays the Faber–Krahn chain `λ₁ ≥ R(u*) ≥ λ₁*(V)`.
pub fn check_polya_szego(
    u: &[f64],
    sys: &AssembledSystem,
    delta: Curvature,
    levels: usize,
    rel_tol: f64,
) -> Result<VerificationReport> {
    let radial = |l: usize| -> Result<(f64, f64)> {
        let dist = p1_distribution_function(u, &sys.mesh, l)?;
        let prof = decreasing_rearrangement(&dist, delta)?;
        Ok((prof.dirichlet_energy(), prof.l2_norm2()))
    };
    let (e_star, n_star) = radial(levels)?;
    let (e_half, _) = radial((levels / 2).max(MIN_LEVELS))?;
    let e = sys.energy(u);
    let tol = (e_star - e_half).abs() + rel_tol * e;
    let vol = sys.volume();
    let mut rep = VerificationReport::new("polya_szego", e_star, e, tol)
        .with("levels", levels)
        .with("rayleigh", e / sys.mass_norm2(u))
        .with("rayleigh_star", e_star / n_star);
    if let Ok(l) = lambda1_star(delta, 2, vol) {
        rep.set("lambda1_star", l);
    }
    rep.set("volume", vol);
    Ok(rep)
}
