//! Dirichlet spectra of geodesic balls by radial shooting.
//!
//! Separating variables on `B(r)` in the n-dimensional space form gives
//!
//! ```text
//! u″ + (n−1)(c_δ/s_δ) u′ + (λ − ℓ(ℓ+n−2)/s_δ²) u = 0,   u(r) = 0.
//! ```
//!
//! With `w = s_δ^{(n−1)/2} u` this becomes `w″ + (λ + δ(n−1)²/4 − A/s_δ²) w = 0`
//! where `A = (ℓ + (n−2)/2)² − 1/4`. The solver integrates the scaled Prüfer
//! angle of `w` from a Frobenius start near the origin and locates the
//! eigenvalue where the angle at `r` reaches `kπ`, which is monotone in λ.

use crate::numeric::ode::{integrate, integrate_dense, OdeTolerance};
use crate::numeric::roots::brent;
use crate::prelude::*;
use crate::spaceform::{ball_radius, ball_volume, s_delta, Curvature};
use crate::{Error, Result};
use core::f64::consts::PI;

/// A geodesic ball `B(r)` of the n-dimensional space form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub delta: Curvature,
    pub n: usize,
    pub r: f64,
}

impl BallSpec {
    pub fn new(delta: Curvature, n: usize, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be positive and finite, got {r}")));
        }
        if delta == Curvature::SPHERICAL && r >= PI {
            return Err(Error::Domain(format!("spherical radius {r} must be below π")));
        }
        Ok(Self { delta, n, r })
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.delta, self.n, self.r).unwrap_or(f64::NAN)
    }
}

/// Tolerances of the shooting solver.
#[derive(Debug, Clone, Copy)]
pub struct ShootingOptions {
    /// Relative tolerance on the eigenvalue.
    pub lambda_rtol: f64,
    /// Relative tolerance of the ODE integrator.
    pub ode_rtol: f64,
    /// Frobenius start as a fraction of the radius.
    pub start_fraction: f64,
    pub max_iter: usize,
    /// Number of profile samples on `[0, r]`.
    pub profile_points: usize,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self { lambda_rtol: 1e-9, ode_rtol: 1e-10, start_fraction: 1e-3, max_iter: 200, profile_points: 201 }
    }
}

/// One separated eigenpair of a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigen {
    pub spec: BallSpec,
    pub ell: usize,
    pub k: usize,
    pub lambda: f64,
    /// `(t, u(t))` on a uniform grid of `[0, r]`, scaled to max |u| = 1 and
    /// positive near the origin.
    pub profile: Vec<(f64, f64)>,
}

impl RadialEigen {
    /// Interior sign changes of the sampled profile.
    pub fn interior_zeros(&self) -> usize {
        let vals: Vec<f64> =
            self.profile[1..self.profile.len() - 1].iter().map(|p| p.1).filter(|v| v.abs() > 1e-9).collect();
        vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    }
}

struct Problem {
    delta: Curvature,
    a: f64,
    shift: f64,
    mu: f64,
    m: f64,
}

impl Problem {
    fn new(delta: Curvature, n: usize, ell: usize) -> Self {
        let nu = ell as f64 + (n as f64 - 2.0) / 2.0;
        let m = (n as f64 - 1.0) / 2.0;
        Self { delta, a: nu * nu - 0.25, shift: delta.as_f64() * m * m, mu: nu + 0.5, m }
    }

    fn q(&self, e: f64, t: f64) -> f64 {
        let s = s_delta(self.delta, t);
        e - self.a / (s * s)
    }

    /// Frobenius series `w = t^μ(1 + a t² + b t⁴)` and its derivative.
    fn frobenius(&self, e: f64, t: f64) -> (f64, f64) {
        let d = self.delta.as_f64();
        let ep = e - self.a * d / 3.0;
        let c1 = -ep / (4.0 * self.mu + 2.0);
        let c2 = (self.a * d * d / 15.0 - ep * c1) / (8.0 * self.mu + 12.0);
        let mu = self.mu;
        let t2 = t * t;
        let poly = 1.0 + c1 * t2 + c2 * t2 * t2;
        let dpoly = 2.0 * c1 * t + 4.0 * c2 * t2 * t;
        let tm = t.powf(mu);
        (tm * poly, tm * (mu / t * poly + dpoly))
    }
}

fn prufer_scale(lambda: f64, r: f64) -> f64 {
    lambda.abs().max(1.0 / (r * r)).sqrt()
}

/// Prüfer angle at `r` for a given λ.
fn angle_at(p: &Problem, lambda: f64, r: f64, opts: &ShootingOptions) -> Result<f64> {
    let e = lambda + p.shift;
    let sc = prufer_scale(lambda, r);
    let t0 = r * opts.start_fraction;
    let (w, dw) = p.frobenius(e, t0);
    let th0 = (sc * w).atan2(dw);
    let tol = OdeTolerance { rtol: opts.ode_rtol, atol: opts.ode_rtol * 1e-2, max_steps: 1_000_000 };
    let y = integrate(
        |t, y: &[f64; 1]| {
            let (s, c) = y[0].sin_cos();
            [sc * c * c + p.q(e, t) / sc * s * s]
        },
        t0,
        [th0],
        r,
        t0,
        tol,
    )?;
    Ok(y[0])
}

/// Lower bound below every ball eigenvalue with this `(ℓ, k)`.
fn lambda_floor(delta: Curvature, n: usize) -> f64 {
    delta.spectral_infimum(n)
}

/// The `k`-th eigenvalue (k ≥ 1) of angular mode `ℓ` on the ball.
pub fn radial_eigenvalue(spec: BallSpec, ell: usize, k: usize) -> Result<RadialEigen> {
    radial_eigenvalue_with(spec, ell, k, &ShootingOptions::default())
}

pub fn radial_eigenvalue_with(spec: BallSpec, ell: usize, k: usize, opts: &ShootingOptions) -> Result<RadialEigen> {
    let lambda = radial_lambda(spec, ell, k, opts)?;
    let profile = radial_profile(spec, ell, lambda, opts)?;
    Ok(RadialEigen { spec, ell, k, lambda, profile })
}

fn radial_lambda(spec: BallSpec, ell: usize, k: usize, opts: &ShootingOptions) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("radial index k starts at 1".into()));
    }
    let spec = BallSpec::new(spec.delta, spec.n, spec.r)?;
    let p = Problem::new(spec.delta, spec.n, ell);
    let r = spec.r;
    let target = k as f64 * PI;
    let f = |lam: f64| angle_at(&p, lam, r, opts).map(|a| a - target);
    let lo = lambda_floor(spec.delta, spec.n);
    let flo = f(lo)?;
    if flo >= 0.0 {
        return Err(Error::NoConvergence(format!("no sign change at the spectral floor {lo}")));
    }
    let mut step = ((k as f64 + 0.5 * ell as f64) * PI / r).powi(2);
    let mut hi = lo + step;
    let mut bracket_lo = lo;
    let mut iters = 0;
    while f(hi)? <= 0.0 {
        bracket_lo = hi;
        step *= 2.0;
        hi = lo + step;
        iters += 1;
        if iters > 80 {
            return Err(Error::NoConvergence("could not bracket the eigenvalue".into()));
        }
    }
    let mut err = None;
    let g = |lam: f64| match f(lam) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            f64::NAN
        }
    };
    let xtol = opts.lambda_rtol * 1e-3 * hi;
    let lam = brent(g, bracket_lo, hi, xtol, opts.max_iter)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(lam)
}

fn radial_profile(spec: BallSpec, ell: usize, lambda: f64, opts: &ShootingOptions) -> Result<Vec<(f64, f64)>> {
    let p = Problem::new(spec.delta, spec.n, ell);
    let r = spec.r;
    let e = lambda + p.shift;
    let sc = prufer_scale(lambda, r);
    let t0 = r * opts.start_fraction;
    let (w0, dw0) = p.frobenius(e, t0);
    let th0 = (sc * w0).atan2(dw0);
    let lr0 = (sc * w0).hypot(dw0).ln();
    let npts = opts.profile_points.max(3);
    let ts: Vec<f64> = (0..npts).map(|i| r * i as f64 / (npts - 1) as f64).collect();
    let later: Vec<f64> = ts.iter().copied().filter(|&t| t > t0).collect();
    let tol = OdeTolerance { rtol: opts.ode_rtol, atol: opts.ode_rtol * 1e-2, max_steps: 1_000_000 };
    let states = integrate_dense(
        |t, y: &[f64; 2]| {
            let (s, c) = y[0].sin_cos();
            let q = p.q(e, t);
            [sc * c * c + q / sc * s * s, (sc - q / sc) * s * c]
        },
        t0,
        [th0, lr0],
        &later,
        tol,
    )?;
    let u_of = |t: f64, w: f64| w / s_delta(spec.delta, t).powf(p.m);
    let mut vals = Vec::with_capacity(npts);
    let mut it = states.iter();
    for &t in &ts {
        let u = if t == 0.0 {
            if ell == 0 {
                // w/s^m → t^μ/t^m = 1 at the origin when ℓ = 0
                1.0
            } else {
                0.0
            }
        } else if t <= t0 {
            u_of(t, p.frobenius(e, t).0)
        } else {
            let y = it.next().unwrap();
            u_of(t, y[1].exp() * y[0].sin() / sc)
        };
        vals.push((t, u));
    }
    if let Some(last) = vals.last_mut() {
        last.1 = 0.0;
    }
    let scale = vals.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let sign = vals.iter().map(|v| v.1).find(|v| v.abs() > 1e-12 * scale).unwrap_or(1.0).signum();
    for v in vals.iter_mut() {
        v.1 *= sign / scale;
    }
    Ok(vals)
}

/// First Dirichlet eigenvalue of the ball.
pub fn lambda1_ball(spec: BallSpec) -> Result<f64> {
    radial_lambda(spec, 0, 1, &ShootingOptions::default())
}

/// Second Dirichlet eigenvalue and the `(ℓ, k)` mode realizing it.
pub fn lambda2_mode(spec: BallSpec) -> Result<(f64, usize, usize)> {
    let opts = ShootingOptions::default();
    let a = radial_lambda(spec, 1, 1, &opts)?;
    let b = radial_lambda(spec, 0, 2, &opts)?;
    Ok(if a <= b { (a, 1, 1) } else { (b, 0, 2) })
}

pub fn lambda2_ball(spec: BallSpec) -> Result<f64> {
    lambda2_mode(spec).map(|m| m.0)
}

/// First eigenvalue of the geodesic ball of volume `v0`.
pub fn lambda1_star(delta: Curvature, n: usize, v0: f64) -> Result<f64> {
    let r = ball_radius(delta, n, v0)?;
    lambda1_ball(BallSpec::new(delta, n, r)?)
}

/// Radius of the geodesic ball whose first eigenvalue is `lambda`.
pub fn radius_from_lambda1(delta: Curvature, n: usize, lambda: f64) -> Result<f64> {
    let inf = delta.spectral_infimum(n);
    if !(lambda > inf) || !lambda.is_finite() {
        return Err(Error::BelowSpectralInfimum { lambda, infimum: inf });
    }
    let l1 = |r: f64| lambda1_ball(BallSpec::new(delta, n, r)?);
    if delta == Curvature::FLAT {
        let unit = l1(1.0)?;
        return Ok((unit / lambda).sqrt());
    }
    // λ₁(B_r) is decreasing in r; Euclidean guess first
    let guess = (5.783_185_962_946_784 / lambda).sqrt();
    let cap = if delta == Curvature::SPHERICAL { PI * (1.0 - 1e-9) } else { 700.0 };
    let mut lo = guess.min(cap) * 0.5;
    while l1(lo)? < lambda {
        lo *= 0.5;
        if lo < 1e-12 {
            return Err(Error::NoConvergence("radius bracket collapsed".into()));
        }
    }
    let mut hi = (lo * 2.0).min(cap);
    while l1(hi)? > lambda {
        if hi >= cap {
            return Err(Error::NoConvergence(format!("no ball radius below {cap} reaches λ = {lambda}")));
        }
        lo = hi;
        hi = (hi * 2.0).min(cap);
    }
    let mut err = None;
    let r = brent(
        |r| match l1(r) {
            Ok(v) => v - lambda,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-12 * hi,
        200,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

/// Second eigenvalue of the ball whose first eigenvalue is `lambda`.
pub fn lambda2_star(delta: Curvature, n: usize, lambda: f64) -> Result<f64> {
    let r = radius_from_lambda1(delta, n, lambda)?;
    lambda2_ball(BallSpec::new(delta, n, r)?)
}

/// One row of a ratio curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub r: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub ratio: f64,
}

/// `λ₂/λ₁` of balls along a radius grid, with monotonicity flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCurve {
    pub delta: Curvature,
    pub n: usize,
    pub rows: Vec<RatioRow>,
    pub strictly_increasing: bool,
    pub strictly_decreasing: bool,
    pub lambda1_decreasing: bool,
}

pub fn ratio_curve(delta: Curvature, n: usize, r_grid: &[f64]) -> Result<RatioCurve> {
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let spec = BallSpec::new(delta, n, r)?;
        let l1 = lambda1_ball(spec)?;
        let l2 = lambda2_ball(spec)?;
        rows.push(RatioRow { r, lambda1: l1, lambda2: l2, ratio: l2 / l1 });
    }
    let pairs = || rows.windows(2);
    Ok(RatioCurve {
        delta,
        n,
        strictly_increasing: pairs().all(|w| w[1].ratio > w[0].ratio),
        strictly_decreasing: pairs().all(|w| w[1].ratio < w[0].ratio),
        lambda1_decreasing: pairs().all(|w| w[1].lambda1 < w[0].lambda1),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: J_ν by its power series, zero by bisection.
    fn bessel_j(nu: u32, x: f64) -> f64 {
        let mut term = (0.5 * x).powi(nu as i32) / (1..=nu).map(|k| k as f64).product::<f64>();
        let mut sum = term;
        for k in 1..80 {
            term *= -(0.25 * x * x) / (k as f64 * (k + nu) as f64);
            sum += term;
        }
        sum
    }

    fn bessel_zero(nu: u32, lo: f64, hi: f64) -> f64 {
        crate::numeric::roots::bisect(|x| bessel_j(nu, x), lo, hi, 1e-15, 200).unwrap()
    }

    #[test]
    fn euclidean_disk_matches_bessel_zeros() {
        let j01 = bessel_zero(0, 2.0, 3.0);
        let j11 = bessel_zero(1, 3.0, 4.5);
        let spec = BallSpec::new(Curvature::FLAT, 2, 1.0).unwrap();
        let l1 = radial_eigenvalue(spec, 0, 1).unwrap();
        let l2 = radial_eigenvalue(spec, 1, 1).unwrap();
        assert!((l1.lambda / (j01 * j01) - 1.0).abs() < 1e-8, "{}", l1.lambda);
        assert!((l2.lambda / (j11 * j11) - 1.0).abs() < 1e-8, "{}", l2.lambda);
        assert!((l1.lambda - 5.783186).abs() < 1e-6);
        assert!((l2.lambda - 14.681971).abs() < 1e-6);
        assert_eq!(l1.interior_zeros(), 0);
        let l02 = radial_eigenvalue(spec, 0, 2).unwrap();
        assert_eq!(l02.interior_zeros(), 1);
        let j02 = bessel_zero(0, 5.0, 6.0);
        assert!((l02.lambda / (j02 * j02) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn profile_matches_bessel_function() {
        let j01 = bessel_zero(0, 2.0, 3.0);
        let spec = BallSpec::new(Curvature::FLAT, 2, 1.0).unwrap();
        let e = radial_eigenvalue(spec, 0, 1).unwrap();
        for &(t, u) in &e.profile {
            assert!((u - bessel_j(0, j01 * t)).abs() < 1e-7, "t={t} u={u}");
        }
    }

    #[test]
    fn hemisphere_first_eigenvalue_is_two() {
        let spec = BallSpec::new(Curvature::SPHERICAL, 2, PI / 2.0).unwrap();
        let l = lambda1_ball(spec).unwrap();
        assert!((l - 2.0).abs() < 1e-6, "{l}");
    }

    #[test]
    fn three_ball_closed_form() {
        // n = 3, ℓ = 0: u = sin(√λ t)/t, so λ₁ = (π/r)²; the hyperbolic
        // analogue has λ₁ = 1 + (π/r)²
        let e = lambda1_ball(BallSpec::new(Curvature::FLAT, 3, 2.0).unwrap()).unwrap();
        assert!((e - PI * PI / 4.0).abs() < 1e-8);
        let h = lambda1_ball(BallSpec::new(Curvature::HYPERBOLIC, 3, 2.0).unwrap()).unwrap();
        assert!((h - 1.0 - PI * PI / 4.0).abs() < 1e-8);
        let s = lambda1_ball(BallSpec::new(Curvature::SPHERICAL, 3, 1.0).unwrap()).unwrap();
        assert!((s - (PI * PI - 1.0)).abs() < 1e-7);
    }

    #[test]
    fn euclidean_scaling_and_ratio() {
        let a = BallSpec::new(Curvature::FLAT, 2, 0.7).unwrap();
        let b = BallSpec::new(Curvature::FLAT, 2, 1.4).unwrap();
        let la = lambda1_ball(a).unwrap();
        let lb = lambda1_ball(b).unwrap();
        assert!((la / lb - 4.0).abs() < 1e-8);
        let ratio = lambda2_ball(a).unwrap() / la;
        assert!((ratio - 2.538_734).abs() < 1e-6);
    }

    #[test]
    fn hyperbolic_threshold_and_decay() {
        let mut prev = f64::INFINITY;
        for r in 1..=8 {
            let l = lambda1_ball(BallSpec::new(Curvature::HYPERBOLIC, 2, r as f64).unwrap()).unwrap();
            assert!(l > 0.25);
            assert!(l - 0.25 < prev);
            prev = l - 0.25;
        }
    }

    #[test]
    fn interlacing_of_candidate_modes() {
        for delta in [Curvature::HYPERBOLIC, Curvature::FLAT, Curvature::SPHERICAL] {
            for r in [0.3, 1.0, 1.5] {
                let s = BallSpec::new(delta, 2, r).unwrap();
                let a = radial_lambda(s, 0, 1, &ShootingOptions::default()).unwrap();
                let b = radial_lambda(s, 1, 1, &ShootingOptions::default()).unwrap();
                let c = radial_lambda(s, 0, 2, &ShootingOptions::default()).unwrap();
                assert!(a < b && b < c);
            }
        }
    }

    #[test]
    fn inverse_maps() {
        let j01sq = lambda1_ball(BallSpec::new(Curvature::FLAT, 2, 1.0).unwrap()).unwrap();
        assert!((radius_from_lambda1(Curvature::FLAT, 2, j01sq).unwrap() - 1.0).abs() < 1e-9);
        assert!((radius_from_lambda1(Curvature::FLAT, 2, 4.0 * j01sq).unwrap() - 0.5).abs() < 1e-9);
        assert!(matches!(radius_from_lambda1(Curvature::HYPERBOLIC, 2, 0.25), Err(Error::BelowSpectralInfimum { .. })));
        for delta in [Curvature::HYPERBOLIC, Curvature::SPHERICAL] {
            let l = lambda1_ball(BallSpec::new(delta, 2, 1.3).unwrap()).unwrap();
            let r = radius_from_lambda1(delta, 2, l).unwrap();
            assert!((r - 1.3).abs() < 1e-8, "{r}");
        }
        assert!((lambda1_star(Curvature::FLAT, 2, PI).unwrap() - j01sq).abs() < 1e-8);
        assert!((lambda1_star(Curvature::FLAT, 2, 4.0 * PI).unwrap() - j01sq / 4.0).abs() < 1e-8);
        assert!((lambda1_star(Curvature::SPHERICAL, 2, 2.0 * PI).unwrap() - 2.0).abs() < 1e-6);
        assert!(lambda1_star(Curvature::SPHERICAL, 2, 5.0 * PI).is_err());
        let l2 = lambda2_star(Curvature::FLAT, 2, j01sq).unwrap();
        assert!((l2 - 14.681971).abs() < 1e-5);
        let l2b = lambda2_star(Curvature::FLAT, 2, 4.0 * j01sq).unwrap();
        assert!((l2b / l2 - 4.0).abs() < 1e-8);
    }

    #[test]
    fn hyperbolic_small_ratio_below_euclidean() {
        let l2 = lambda2_star(Curvature::HYPERBOLIC, 2, 100.0).unwrap();
        assert!(l2 / 100.0 < 2.53872);
    }

    #[test]
    fn ratio_curves_are_monotone() {
        let s: Vec<f64> = (1..=10).map(|i| PI / 2.0 * i as f64 / 10.0).collect();
        let c = ratio_curve(Curvature::SPHERICAL, 2, &s).unwrap();
        assert!(c.strictly_increasing && c.lambda1_decreasing);
        let h: Vec<f64> = (0..10).map(|i| 0.25 + 0.6 * i as f64).collect();
        let c = ratio_curve(Curvature::HYPERBOLIC, 2, &h).unwrap();
        assert!(c.strictly_decreasing && c.lambda1_decreasing);
        let e = ratio_curve(Curvature::FLAT, 2, &[0.5, 1.0, 3.0]).unwrap();
        for row in &e.rows {
            assert!((row.ratio - 2.538_734).abs() < 1e-6);
        }
    }
}
