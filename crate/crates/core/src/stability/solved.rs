use crate::convexbody::{dilate_body, ConvexBody};
use crate::laplace2d::{
    convergence_study, convergence_study_from, to_conformal, triangulate, AssembledSystem, ConvergenceStudy,
    EigenResult,
};
use crate::prelude::*;
use crate::spaceform::{conformal_weight, Curvature};
use crate::Result;

use super::VerificationReport;

/// A body with its two lowest Dirichlet eigenpairs and their error estimates.
#[derive(Debug, Clone)]
pub struct SolvedBody {
    pub body: ConvexBody,
    pub h_list: Vec<f64>,
    pub study: ConvergenceStudy,
}

/// Three nested mesh sizes adapted to the body: the coarsest is a fifth of
/// the in-radius, or `√(area/150)` for thin bodies, in chart units.
pub fn default_h_list(body: &ConvexBody) -> Result<Vec<f64>> {
    let (c, r) = body.inradius_center();
    let cc = to_conformal(body.delta, c)?;
    let scale = 1.0 / conformal_weight(body.delta.conformal_chart(), cc).sqrt();
    let h0 = (0.2 * r).max((body.area() / 150.0).sqrt()) * scale;
    Ok(vec![h0, h0 / 2.0, h0 / 4.0])
}

impl SolvedBody {
    /// Solves on [`default_h_list`].
    pub fn solve(body: &ConvexBody) -> Result<Self> {
        let h = default_h_list(body)?;
        Self::with_h(body, &h)
    }

    pub fn with_h(body: &ConvexBody, h_list: &[f64]) -> Result<Self> {
        let study = convergence_study(body, h_list, 2)?;
        Ok(Self { body: body.clone(), h_list: h_list.to_vec(), study })
    }

    /// Solves the dilate `H_λ(Ω)` about the base point. In the flat plane the
    /// coarse mesh is carried along by the similarity, so both studies see
    /// congruent meshes and `λ_k` scales exactly by `λ⁻²`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        let body = dilate_body(&self.body, lambda)?;
        let h: Vec<f64> = self.h_list.iter().map(|x| x * lambda).collect();
        let nested = self.h_list.windows(2).all(|w| (w[0] / w[1] - 2.0).abs() < 1e-9);
        if self.delta() != Curvature::FLAT || !nested {
            return Self::with_h(&body, &h);
        }
        let coarse = triangulate(&self.body, self.h_list[0])?.dilated_flat(self.body.base, lambda)?;
        let study = convergence_study_from(coarse, h.len(), 2)?;
        Ok(Self { body, h_list: h, study })
    }

    pub fn delta(&self) -> Curvature {
        self.body.delta
    }

    /// Extrapolated `λ_{k+1}`.
    pub fn lambda(&self, k: usize) -> f64 {
        self.study.result.lambda(k)
    }

    pub fn tolerance(&self, k: usize) -> f64 {
        self.study.result.tolerance(k)
    }

    pub fn result(&self) -> &EigenResult {
        &self.study.result
    }

    pub fn system(&self) -> &AssembledSystem {
        &self.study.system
    }

    /// First eigenfunction on the finest mesh, positive, `∫u² = 1`.
    pub fn ground_state(&self) -> &[f64] {
        &self.study.result.vectors[0]
    }

    /// Exact area of the geodesic polygon.
    pub fn volume(&self) -> f64 {
        self.body.area()
    }

    /// Adds the body fingerprint, mesh sizes and eigenvalue estimates.
    pub fn annotate(&self, r: VerificationReport) -> VerificationReport {
        let ex = self.study.result.extrapolated.as_ref();
        let mut r = r
            .with("body", format!("{:016x}", self.body.fingerprint()))
            .with("delta", self.delta().delta())
            .with("h", self.study.result.h)
            .with("vertices", self.study.system.mesh.vertices.len())
            .with("lambda1", self.lambda(0))
            .with("lambda2", self.lambda(1))
            .with("lambda1_error", self.study.result.error(0))
            .with("lambda2_error", self.study.result.error(1));
        if let Some(e) = ex {
            r.set("order1", e.orders[0]);
            r.set("order2", e.orders[1]);
            r.set("monotone", e.monotone);
        }
        r
    }
}
