use super::chart::ModelPoint;
use super::Curvature;
use crate::Result;

/// An isometry acting linearly on the ambient model: a Lorentz
/// transformation (δ = −1), a rigid motion written affinely on `(1, x, y)`
/// (δ = 0), or a rotation of R³ (δ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub delta: Curvature,
    pub m: [[f64; 3]; 3],
}

impl Isometry {
    pub fn identity(delta: Curvature) -> Self {
        Self { delta, m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Rotation by `theta` about the chart origin.
    pub fn rotation(delta: Curvature, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { delta, m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]] }
    }

    /// Translation by geodesic length `t` along the first chart axis through
    /// the origin.
    pub fn translation(delta: Curvature, t: f64) -> Self {
        let m = match delta.delta() {
            -1 => {
                let (c, s) = (t.cosh(), t.sinh());
                [[c, s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
            }
            0 => [[1.0, 0.0, 0.0], [t, 1.0, 0.0], [0.0, 0.0, 1.0]],
            _ => {
                let (s, c) = t.sin_cos();
                [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
            }
        };
        Self { delta, m }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Self { delta: self.delta, m }
    }

    pub fn apply_ambient(&self, a: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.m[i][0] * a[0] + self.m[i][1] * a[1] + self.m[i][2] * a[2];
        }
        out
    }

    /// Image of `p`, expressed in the same chart.
    pub fn apply(&self, p: &ModelPoint) -> Result<ModelPoint> {
        ModelPoint::from_ambient(p.chart, self.apply_ambient(p.ambient()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::chart::{geodesic_distance, ChartKind};
    use super::*;

    #[test]
    fn isometries_preserve_distance() {
        let cases = [
            (Curvature::HYPERBOLIC, ChartKind::PoincareDisk),
            (Curvature::HYPERBOLIC, ChartKind::KleinDisk),
            (Curvature::FLAT, ChartKind::Plane),
            (Curvature::SPHERICAL, ChartKind::Stereographic),
            (Curvature::SPHERICAL, ChartKind::Gnomonic),
        ];
        for (delta, chart) in cases {
            let g = Isometry::translation(delta, 0.4).compose(&Isometry::rotation(delta, 1.1));
            let p = ModelPoint::new(chart, [0.1, 0.3]).unwrap();
            let q = ModelPoint::new(chart, [-0.2, 0.05]).unwrap();
            let d0 = geodesic_distance(&p, &q).unwrap();
            let d1 = geodesic_distance(&g.apply(&p).unwrap(), &g.apply(&q).unwrap()).unwrap();
            assert!((d0 - d1).abs() < 1e-12, "{chart:?}");
        }
    }

    #[test]
    fn translation_moves_origin_by_t() {
        for delta in [Curvature::HYPERBOLIC, Curvature::FLAT, Curvature::SPHERICAL] {
            let chart = delta.conformal_chart();
            let o = ModelPoint::origin(chart);
            let p = Isometry::translation(delta, 0.7).apply(&o).unwrap();
            assert!((geodesic_distance(&o, &p).unwrap() - 0.7).abs() < 1e-14);
        }
    }
}
