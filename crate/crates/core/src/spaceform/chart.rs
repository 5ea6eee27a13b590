use super::Curvature;
use crate::prelude::*;
use crate::{Error, Result};

/// Planar coordinate charts of the three space forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartKind {
    /// Identity chart of the Euclidean plane.
    Plane,
    /// Conformal ball model of H².
    PoincareDisk,
    /// Projective ball model of H²; geodesics are straight chords.
    KleinDisk,
    /// Stereographic projection of S² from the south pole; conformal.
    Stereographic,
    /// Central projection of the northern hemisphere; geodesics are lines.
    Gnomonic,
}

impl ChartKind {
    pub fn delta(self) -> Curvature {
        match self {
            ChartKind::Plane => Curvature::FLAT,
            ChartKind::PoincareDisk | ChartKind::KleinDisk => Curvature::HYPERBOLIC,
            ChartKind::Stereographic | ChartKind::Gnomonic => Curvature::SPHERICAL,
        }
    }

    pub fn is_conformal(self) -> bool {
        matches!(self, ChartKind::Plane | ChartKind::PoincareDisk | ChartKind::Stereographic)
    }

    pub fn is_straight(self) -> bool {
        matches!(self, ChartKind::Plane | ChartKind::KleinDisk | ChartKind::Gnomonic)
    }

    pub fn name(self) -> &'static str {
        match self {
            ChartKind::Plane => "plane",
            ChartKind::PoincareDisk => "poincare-disk",
            ChartKind::KleinDisk => "klein-disk",
            ChartKind::Stereographic => "stereographic",
            ChartKind::Gnomonic => "gnomonic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "plane" => ChartKind::Plane,
            "poincare-disk" => ChartKind::PoincareDisk,
            "klein-disk" => ChartKind::KleinDisk,
            "stereographic" => ChartKind::Stereographic,
            "gnomonic" => ChartKind::Gnomonic,
            _ => return None,
        })
    }

    /// Offset `a` in `c = X / (a + x₀)`.
    fn offset(self) -> f64 {
        match self {
            ChartKind::PoincareDisk | ChartKind::Stereographic => 1.0,
            _ => 0.0,
        }
    }

    pub fn contains(self, c: [f64; 2]) -> bool {
        let r2 = c[0] * c[0] + c[1] * c[1];
        c[0].is_finite()
            && c[1].is_finite()
            && match self {
                ChartKind::PoincareDisk | ChartKind::KleinDisk => r2 < 1.0,
                _ => true,
            }
    }

    /// Ambient point of chart coordinates: hyperboloid `(x₀, x₁, x₂)`,
    /// sphere `(z, x, y)` centered on the north pole, or `(1, x, y)`.
    pub fn to_ambient(self, c: [f64; 2]) -> [f64; 3] {
        let r2 = c[0] * c[0] + c[1] * c[1];
        match self {
            ChartKind::Plane => [1.0, c[0], c[1]],
            ChartKind::PoincareDisk => {
                let w = 1.0 - r2;
                [(1.0 + r2) / w, 2.0 * c[0] / w, 2.0 * c[1] / w]
            }
            ChartKind::KleinDisk => {
                let s = 1.0 / (1.0 - r2).sqrt();
                [s, c[0] * s, c[1] * s]
            }
            ChartKind::Stereographic => {
                let w = 1.0 + r2;
                [(1.0 - r2) / w, 2.0 * c[0] / w, 2.0 * c[1] / w]
            }
            ChartKind::Gnomonic => {
                let s = 1.0 / (1.0 + r2).sqrt();
                [s, c[0] * s, c[1] * s]
            }
        }
    }

    /// Chart coordinates of an ambient point.
    pub fn from_ambient(self, a: [f64; 3]) -> Result<[f64; 2]> {
        let den = self.offset() + a[0];
        let c = match self {
            ChartKind::Plane => [a[1], a[2]],
            ChartKind::Gnomonic | ChartKind::Stereographic if !(den > 1e-300) => {
                return Err(Error::OutOfChart(a[1], a[2]));
            }
            _ => [a[1] / den, a[2] / den],
        };
        if self.contains(c) {
            Ok(c)
        } else {
            Err(Error::OutOfChart(c[0], c[1]))
        }
    }

    /// Pushes a chart velocity `dc` at `c` forward to the ambient model.
    pub fn push_forward(self, c: [f64; 2], dc: [f64; 2]) -> [f64; 3] {
        let r2 = c[0] * c[0] + c[1] * c[1];
        let cd = c[0] * dc[0] + c[1] * dc[1];
        match self {
            ChartKind::Plane => [0.0, dc[0], dc[1]],
            ChartKind::PoincareDisk => {
                let w = 1.0 - r2;
                let k = 4.0 * cd / (w * w);
                [k, 2.0 * dc[0] / w + c[0] * k, 2.0 * dc[1] / w + c[1] * k]
            }
            ChartKind::KleinDisk => {
                let w = 1.0 - r2;
                let s = 1.0 / w.sqrt();
                let k = cd * s / w;
                [k, dc[0] * s + c[0] * k, dc[1] * s + c[1] * k]
            }
            ChartKind::Stereographic => {
                let w = 1.0 + r2;
                let k = 4.0 * cd / (w * w);
                [-k, 2.0 * dc[0] / w - c[0] * k, 2.0 * dc[1] / w - c[1] * k]
            }
            ChartKind::Gnomonic => {
                let w = 1.0 + r2;
                let s = 1.0 / w.sqrt();
                let k = cd * s / w;
                [-k, dc[0] * s - c[0] * k, dc[1] * s - c[1] * k]
            }
        }
    }

    /// Pulls an ambient tangent vector `v` at ambient point `a` back to chart
    /// components.
    pub fn pull_back(self, a: [f64; 3], v: [f64; 3]) -> [f64; 2] {
        if self == ChartKind::Plane {
            return [v[1], v[2]];
        }
        let den = self.offset() + a[0];
        let d2 = den * den;
        [v[1] / den - a[1] * v[0] / d2, v[2] / den - a[2] * v[0] / d2]
    }
}

/// Ambient bilinear form: Minkowski for δ = −1, Euclidean on the spatial
/// part for δ = 0, Euclidean for δ = 1.
pub(crate) fn inner(delta: Curvature, a: [f64; 3], b: [f64; 3]) -> f64 {
    match delta.delta() {
        -1 => -a[0] * b[0] + a[1] * b[1] + a[2] * b[2],
        0 => a[1] * b[1] + a[2] * b[2],
        _ => a[0] * b[0] + a[1] * b[1] + a[2] * b[2],
    }
}

/// A point of a space form in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub chart: ChartKind,
    pub coords: [f64; 2],
}

impl ModelPoint {
    pub fn new(chart: ChartKind, coords: [f64; 2]) -> Result<Self> {
        if !chart.contains(coords) {
            return Err(Error::OutOfChart(coords[0], coords[1]));
        }
        Ok(Self { chart, coords })
    }

    pub fn origin(chart: ChartKind) -> Self {
        Self { chart, coords: [0.0, 0.0] }
    }

    pub fn delta(&self) -> Curvature {
        self.chart.delta()
    }

    pub fn ambient(&self) -> [f64; 3] {
        self.chart.to_ambient(self.coords)
    }

    pub fn from_ambient(chart: ChartKind, a: [f64; 3]) -> Result<Self> {
        Ok(Self { chart, coords: chart.from_ambient(a)? })
    }
}

/// A tangent vector at `base`, with components in the chart frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVec {
    pub base: ModelPoint,
    pub components: [f64; 2],
}

impl TangentVec {
    pub fn new(base: ModelPoint, components: [f64; 2]) -> Result<Self> {
        if !(components[0].is_finite() && components[1].is_finite()) {
            return Err(Error::Domain("tangent components must be finite".into()));
        }
        Ok(Self { base, components })
    }

    pub fn ambient(&self) -> [f64; 3] {
        self.base.chart.push_forward(self.base.coords, self.components)
    }

    /// Length in the space-form metric.
    pub fn norm(&self) -> f64 {
        let v = self.ambient();
        inner(self.base.delta(), v, v).max(0.0).sqrt()
    }

    pub fn from_ambient(base: ModelPoint, v: [f64; 3]) -> Self {
        let a = base.ambient();
        Self { base, components: base.chart.pull_back(a, v) }
    }
}

fn same_chart(p: &ModelPoint, q: &ModelPoint) -> Result<()> {
    if p.chart != q.chart {
        return Err(Error::ChartMismatch(p.chart.name(), q.chart.name()));
    }
    Ok(())
}

/// Distance between two ambient points of the same model.
pub(crate) fn ambient_distance(delta: Curvature, a: [f64; 3], b: [f64; 3]) -> f64 {
    match delta.delta() {
        -1 => {
            let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
            // Minkowski chord length is 2 sinh(d/2)
            let chord2 = inner(delta, d, d).max(0.0);
            2.0 * (0.5 * chord2.sqrt()).asinh()
        }
        0 => (a[1] - b[1]).hypot(a[2] - b[2]),
        _ => {
            let cx = a[1] * b[2] - a[2] * b[1];
            let cy = a[2] * b[0] - a[0] * b[2];
            let cz = a[0] * b[1] - a[1] * b[0];
            let cross = (cx * cx + cy * cy + cz * cz).sqrt();
            cross.atan2(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
        }
    }
}

/// Geodesic distance; both points must be in the same chart.
pub fn geodesic_distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    same_chart(p, q)?;
    Ok(match p.chart {
        ChartKind::Plane => (p.coords[0] - q.coords[0]).hypot(p.coords[1] - q.coords[1]),
        ChartKind::PoincareDisk => {
            let (a, b) = (p.coords, q.coords);
            let num = (a[0] - b[0]).hypot(a[1] - b[1]);
            let wa = 1.0 - a[0] * a[0] - a[1] * a[1];
            let wb = 1.0 - b[0] * b[0] - b[1] * b[1];
            2.0 * (num / (wa * wb).sqrt()).asinh()
        }
        _ => ambient_distance(p.delta(), p.ambient(), q.ambient()),
    })
}

/// Ambient exponential map at `a` of the ambient tangent vector `v`.
pub(crate) fn ambient_exp(delta: Curvature, a: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    let t = inner(delta, v, v).max(0.0).sqrt();
    if delta == Curvature::FLAT {
        return [1.0, a[1] + v[1], a[2] + v[2]];
    }
    if t == 0.0 {
        return a;
    }
    let (c, s) = if delta == Curvature::HYPERBOLIC { (t.cosh(), t.sinh()) } else { (t.cos(), t.sin()) };
    let k = s / t;
    [c * a[0] + k * v[0], c * a[1] + k * v[1], c * a[2] + k * v[2]]
}

/// Ambient logarithm at `a` of `b`.
pub(crate) fn ambient_log(delta: Curvature, a: [f64; 3], b: [f64; 3]) -> Result<[f64; 3]> {
    if delta == Curvature::FLAT {
        return Ok([0.0, b[1] - a[1], b[2] - a[2]]);
    }
    let ab = inner(delta, a, b);
    // component of b orthogonal to a: b − ⟨a,b⟩a (sphere), b + ⟨a,b⟩a (hyperboloid)
    let k = if delta == Curvature::HYPERBOLIC { ab } else { -ab };
    let u = [b[0] + k * a[0], b[1] + k * a[1], b[2] + k * a[2]];
    let un = inner(delta, u, u).max(0.0).sqrt();
    let d = ambient_distance(delta, a, b);
    if delta == Curvature::SPHERICAL && d > core::f64::consts::PI - 1e-9 {
        return Err(Error::Antipodal);
    }
    if un == 0.0 || d == 0.0 {
        return Ok([0.0; 3]);
    }
    let s = d / un;
    Ok([u[0] * s, u[1] * s, u[2] * s])
}

/// `exp_x(v)` for a tangent vector based at `x`, expressed in `x`'s chart.
pub fn exp_map(v: &TangentVec) -> Result<ModelPoint> {
    let x = v.base;
    let delta = x.delta();
    if delta == Curvature::SPHERICAL && v.norm() >= core::f64::consts::PI {
        return Err(Error::Domain(format!("tangent length {} must be below π on the sphere", v.norm())));
    }
    ModelPoint::from_ambient(x.chart, ambient_exp(delta, x.ambient(), v.ambient()))
}

/// `log_x(y)`, the initial velocity of the unit-time geodesic from x to y.
pub fn log_map(x: &ModelPoint, y: &ModelPoint) -> Result<TangentVec> {
    same_chart(x, y)?;
    let v = ambient_log(x.delta(), x.ambient(), y.ambient())?;
    Ok(TangentVec::from_ambient(*x, v))
}

/// Converts a point between charts of the same geometry.
pub fn chart_convert(p: &ModelPoint, target: ChartKind) -> Result<ModelPoint> {
    if p.chart == target {
        return Ok(*p);
    }
    if p.delta() != target.delta() {
        return Err(Error::ChartCurvatureMismatch { chart: target.name(), delta: p.delta().delta() });
    }
    ModelPoint::from_ambient(target, p.ambient())
}

/// Metric weight `φ` with `ds² = φ |dx|²` in a conformal chart.
pub fn conformal_factor(p: &ModelPoint) -> Result<f64> {
    let r2 = p.coords[0] * p.coords[0] + p.coords[1] * p.coords[1];
    match p.chart {
        ChartKind::Plane => Ok(1.0),
        ChartKind::PoincareDisk => {
            let s = 2.0 / (1.0 - r2);
            Ok(s * s)
        }
        ChartKind::Stereographic => {
            let s = 2.0 / (1.0 + r2);
            Ok(s * s)
        }
        k => Err(Error::NotConformal(k.name())),
    }
}

/// Conformal factor directly from chart coordinates.
pub fn conformal_weight(chart: ChartKind, c: [f64; 2]) -> f64 {
    let r2 = c[0] * c[0] + c[1] * c[1];
    match chart {
        ChartKind::PoincareDisk => {
            let s = 2.0 / (1.0 - r2);
            s * s
        }
        ChartKind::Stereographic => {
            let s = 2.0 / (1.0 + r2);
            s * s
        }
        _ => 1.0,
    }
}

/// Radial dilation `H_λ` about `x0`: `exp_{x0}(t v) ↦ exp_{x0}(λ t v)`.
pub fn dilation(x0: &ModelPoint, lambda: f64, p: &ModelPoint) -> Result<ModelPoint> {
    same_chart(x0, p)?;
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("dilation factor must lie in (0, 1], got {lambda}")));
    }
    if lambda == 1.0 {
        return Ok(*p);
    }
    let delta = x0.delta();
    if delta == Curvature::FLAT {
        let c = [
            x0.coords[0] + lambda * (p.coords[0] - x0.coords[0]),
            x0.coords[1] + lambda * (p.coords[1] - x0.coords[1]),
        ];
        return ModelPoint::new(p.chart, c);
    }
    let a = x0.ambient();
    let v = ambient_log(delta, a, p.ambient())?;
    let w = [lambda * v[0], lambda * v[1], lambda * v[2]];
    ModelPoint::from_ambient(x0.chart, ambient_exp(delta, a, w))
}

/// Orthonormal ambient frame `(e₁, e₂)` of the tangent plane at `x`,
/// obtained by Gram–Schmidt on the chart axes.
pub fn unit_frame(x: &ModelPoint) -> ([f64; 3], [f64; 3]) {
    let delta = x.delta();
    let u = x.chart.push_forward(x.coords, [1.0, 0.0]);
    let v = x.chart.push_forward(x.coords, [0.0, 1.0]);
    let un = inner(delta, u, u).sqrt();
    let e1 = [u[0] / un, u[1] / un, u[2] / un];
    let p = inner(delta, v, e1);
    let w = [v[0] - p * e1[0], v[1] - p * e1[1], v[2] - p * e1[2]];
    let wn = inner(delta, w, w).sqrt();
    (e1, [w[0] / wn, w[1] / wn, w[2] / wn])
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [ChartKind; 5] = [
        ChartKind::Plane,
        ChartKind::PoincareDisk,
        ChartKind::KleinDisk,
        ChartKind::Stereographic,
        ChartKind::Gnomonic,
    ];

    fn pt(chart: ChartKind, x: f64, y: f64) -> ModelPoint {
        ModelPoint::new(chart, [x, y]).unwrap()
    }

    #[test]
    fn distance_examples() {
        let d = geodesic_distance(&pt(ChartKind::Plane, 0.0, 0.0), &pt(ChartKind::Plane, 3.0, 4.0)).unwrap();
        assert!((d - 5.0).abs() < 1e-15);
        let a = pt(ChartKind::PoincareDisk, 0.0, 0.0);
        let b = pt(ChartKind::PoincareDisk, 0.5f64.tanh(), 0.0);
        assert!((geodesic_distance(&a, &b).unwrap() - 1.0).abs() < 1e-14);
        let ka = chart_convert(&a, ChartKind::KleinDisk).unwrap();
        let kb = chart_convert(&b, ChartKind::KleinDisk).unwrap();
        assert!((geodesic_distance(&ka, &kb).unwrap() - 1.0).abs() < 1e-14);
        assert!(geodesic_distance(&a, &ka).is_err());
    }

    #[test]
    fn klein_poincare_conversion() {
        let k = 0.6;
        let p = chart_convert(&pt(ChartKind::KleinDisk, k, 0.0), ChartKind::PoincareDisk).unwrap();
        assert!((p.coords[0] - k / (1.0 + (1.0 - k * k).sqrt())).abs() < 1e-15);
        let o = chart_convert(&pt(ChartKind::KleinDisk, 0.0, 0.0), ChartKind::PoincareDisk).unwrap();
        assert_eq!(o.coords, [0.0, 0.0]);
        assert!(chart_convert(&o, ChartKind::Gnomonic).is_err());
    }

    #[test]
    fn conversion_round_trips() {
        let pairs = [(ChartKind::KleinDisk, ChartKind::PoincareDisk), (ChartKind::Gnomonic, ChartKind::Stereographic)];
        for (a, b) in pairs {
            for &(x, y) in &[(0.1, -0.3), (0.5, 0.4), (-0.7, 0.2)] {
                let p = pt(a, x, y);
                let q = chart_convert(&chart_convert(&p, b).unwrap(), a).unwrap();
                assert!((q.coords[0] - x).abs() < 1e-14 && (q.coords[1] - y).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exp_examples() {
        let x = ModelPoint::origin(ChartKind::PoincareDisk);
        let v = TangentVec::new(x, [0.5, 0.0]).unwrap(); // φ = 4 at origin, so |v| = 1
        assert!((v.norm() - 1.0).abs() < 1e-15);
        let y = exp_map(&v).unwrap();
        assert!((y.coords[0] - 0.5f64.tanh()).abs() < 1e-15);
        let z = log_map(&x, &x).unwrap();
        assert_eq!(z.components, [0.0, 0.0]);
    }

    #[test]
    fn exp_log_round_trip_all_charts() {
        for chart in ALL {
            let x = pt(chart, 0.2, -0.1);
            for k in 0..24 {
                let th = k as f64 * 0.26;
                let (e1, e2) = unit_frame(&x);
                let len = 0.1 + 0.12 * k as f64;
                let v = [
                    len * (th.cos() * e1[0] + th.sin() * e2[0]),
                    len * (th.cos() * e1[1] + th.sin() * e2[1]),
                    len * (th.cos() * e1[2] + th.sin() * e2[2]),
                ];
                let tv = TangentVec::from_ambient(x, v);
                assert!((tv.norm() - len).abs() < 1e-12);
                let y = match exp_map(&tv) {
                    Ok(y) => y,
                    Err(_) => continue, // left the chart (Poincaré/Klein never do; gnomonic can)
                };
                let d = geodesic_distance(&x, &y).unwrap();
                assert!((d - len).abs() < 1e-10, "{chart:?} {d} {len}");
                let back = log_map(&x, &y).unwrap();
                let diff = (back.components[0] - tv.components[0]).hypot(back.components[1] - tv.components[1]);
                assert!(diff < 1e-10 * (1.0 + len), "{chart:?} {diff}");
            }
        }
    }

    #[test]
    fn conformal_factor_examples() {
        assert_eq!(conformal_factor(&pt(ChartKind::Plane, 3.0, 1.0)).unwrap(), 1.0);
        assert_eq!(conformal_factor(&pt(ChartKind::PoincareDisk, 0.0, 0.0)).unwrap(), 4.0);
        assert!((conformal_factor(&pt(ChartKind::Stereographic, 0.6, 0.8)).unwrap() - 1.0).abs() < 1e-15);
        assert!(conformal_factor(&pt(ChartKind::KleinDisk, 0.0, 0.0)).is_err());
    }

    #[test]
    fn conformal_factor_matches_push_forward() {
        for chart in [ChartKind::PoincareDisk, ChartKind::Stereographic] {
            let x = pt(chart, 0.3, 0.45);
            let phi = conformal_factor(&x).unwrap();
            let v = TangentVec::new(x, [0.7, -0.2]).unwrap();
            let flat2 = 0.49 + 0.04;
            assert!((v.norm() * v.norm() - phi * flat2).abs() < 1e-12);
        }
    }

    #[test]
    fn dilation_examples() {
        let x0 = ModelPoint::origin(ChartKind::Plane);
        let p = pt(ChartKind::Plane, 2.0, -4.0);
        assert_eq!(dilation(&x0, 1.0, &p).unwrap(), p);
        assert_eq!(dilation(&x0, 0.25, &p).unwrap().coords, [0.5, -1.0]);

        let x0 = pt(ChartKind::KleinDisk, 0.1, 0.2);
        let (e1, _) = unit_frame(&x0);
        let p = exp_map(&TangentVec::from_ambient(x0, [2.0 * e1[0], 2.0 * e1[1], 2.0 * e1[2]])).unwrap();
        assert!((geodesic_distance(&x0, &p).unwrap() - 2.0).abs() < 1e-12);
        let q = dilation(&x0, 0.5, &p).unwrap();
        assert!((geodesic_distance(&x0, &q).unwrap() - 1.0).abs() < 1e-12);
        assert!((geodesic_distance(&q, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn antipodal_log_rejected() {
        let n = ModelPoint::origin(ChartKind::Stereographic);
        let a = [-1.0, 0.0, 0.0];
        assert!(ambient_log(Curvature::SPHERICAL, n.ambient(), a).is_err());
    }
}
