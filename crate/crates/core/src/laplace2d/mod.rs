//! Dirichlet Laplace–Beltrami eigenvalues of 2-D domains with P1 finite
//! elements in a conformal chart.
//!
//! In dimension two the Dirichlet energy is conformally invariant, so the
//! stiffness matrix is the flat one and only the mass matrix carries the
//! conformal weight `φ`.

mod mesh;

pub use mesh::{geodesic_midpoint, to_conformal, to_straight};
pub use mesh::{refine_uniform, triangulate, triangulate_region, Region, TriMesh};

use crate::convexbody::ConvexBody;
use crate::numeric::dense::{generalized_eigen, DenseMatrix};
use crate::numeric::lanczos::smallest_eigenpairs;
use crate::numeric::roots::brent;
use crate::numeric::sparse::CsrMatrix;
use crate::prelude::*;
use crate::spaceform::{conformal_weight, ChartKind};
use crate::{Error, Result};

/// Problems with fewer unknowns are solved densely.
pub const DENSE_THRESHOLD: usize = 400;
/// Lanczos convergence target for `‖A x − λ M x‖ / (λ ‖M x‖)`.
pub const LANCZOS_TOL: f64 = 1e-11;

/// Stiffness and mass matrices restricted to the interior vertices.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// Mesh vertex of each unknown.
    pub dofs: Vec<usize>,
    /// Unknown of each mesh vertex, `None` on the boundary.
    pub dof_of: Vec<Option<usize>>,
    /// Lumped masses `∫ φ ψ_i` of all vertices.
    pub vertex_mass: Vec<f64>,
    pub mesh: TriMesh,
}

impl AssembledSystem {
    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    /// Weighted area of the mesh.
    pub fn volume(&self) -> f64 {
        self.vertex_mass.iter().sum()
    }

    /// Interior values of a vertex function.
    pub fn restrict(&self, u: &[f64]) -> Vec<f64> {
        self.dofs.iter().map(|&v| u[v]).collect()
    }

    /// Vertex function from interior values, zero on the boundary.
    pub fn extend(&self, x: &[f64]) -> Vec<f64> {
        let mut u = vec![0.0; self.mesh.vertices.len()];
        for (&v, &xi) in self.dofs.iter().zip(x) {
            u[v] = xi;
        }
        u
    }

    /// Dirichlet energy `∫|∇u|²` of a vertex function vanishing on the boundary.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let x = self.restrict(u);
        dot(&x, &self.stiffness.mul_vec(&x))
    }

    /// `∫ u²` of a vertex function vanishing on the boundary.
    pub fn mass_norm2(&self, u: &[f64]) -> f64 {
        let x = self.restrict(u);
        dot(&x, &self.mass.mul_vec(&x))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Flat P1 stiffness of one triangle.
pub fn element_stiffness(p: [[f64; 2]; 3]) -> Result<[[f64; 3]; 3]> {
    let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
    if !(area2 > 2e-14) {
        return Err(Error::Mesh(format!("degenerate triangle with area {:e}", 0.5 * area2)));
    }
    let b = [0, 1, 2].map(|i| p[(i + 1) % 3][1] - p[(i + 2) % 3][1]);
    let c = [0, 1, 2].map(|i| p[(i + 2) % 3][0] - p[(i + 1) % 3][0]);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (2.0 * area2);
        }
    }
    Ok(k)
}

/// Weighted P1 mass of one triangle: edge-midpoint quadrature of
/// `φ ψ_i ψ_j`, exact when `φ` is constant.
pub fn element_mass(chart: ChartKind, p: [[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]));
    // w[k] is the weight at the midpoint of the edge opposite vertex k
    let w = [0, 1, 2].map(|k| {
        let (a, b) = (p[(k + 1) % 3], p[(k + 2) % 3]);
        conformal_weight(chart, [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])])
    });
    let s = area / 12.0;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = if i == j { s * (w[(i + 1) % 3] + w[(i + 2) % 3]) } else { s * w[3 - i - j] };
        }
    }
    m
}

/// Stiffness and mass over all vertices, before boundary elimination.
pub fn full_matrices(mesh: &TriMesh) -> Result<(CsrMatrix, CsrMatrix)> {
    let n = mesh.vertices.len();
    let mut ka = Vec::with_capacity(9 * mesh.triangles.len());
    let mut ma = Vec::with_capacity(9 * mesh.triangles.len());
    for t in &mesh.triangles {
        let p = t.map(|i| mesh.vertices[i]);
        let k = element_stiffness(p)?;
        let m = element_mass(mesh.chart, p);
        for i in 0..3 {
            for j in 0..3 {
                ka.push((t[i], t[j], k[i][j]));
                ma.push((t[i], t[j], m[i][j]));
            }
        }
    }
    Ok((CsrMatrix::from_triplets(n, ka), CsrMatrix::from_triplets(n, ma)))
}

/// Assembles the Dirichlet system on the interior vertices.
pub fn assemble(mesh: &TriMesh) -> Result<AssembledSystem> {
    let (a, m) = full_matrices(mesh)?;
    let vertex_mass = m.row_sums();
    let mut dof_of = vec![None; mesh.vertices.len()];
    let mut dofs = Vec::new();
    for (v, &b) in mesh.boundary_mask.iter().enumerate() {
        if !b {
            dof_of[v] = Some(dofs.len());
            dofs.push(v);
        }
    }
    let restrict = |full: &CsrMatrix| {
        let mut trip = Vec::new();
        for (i, &v) in dofs.iter().enumerate() {
            for (w, x) in full.row(v) {
                if let Some(j) = dof_of[w] {
                    trip.push((i, j, x));
                }
            }
        }
        CsrMatrix::from_triplets(dofs.len(), trip)
    };
    let stiffness = restrict(&a);
    let mass = restrict(&m);
    Ok(AssembledSystem { stiffness, mass, dofs, dof_of, vertex_mass, mesh: mesh.clone() })
}

/// Richardson-extrapolated eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub lambdas: Vec<f64>,
    /// `|extrapolated − finest|`, used as the numerical tolerance.
    pub errors: Vec<f64>,
    /// Fitted convergence orders in the mesh size.
    pub orders: Vec<f64>,
    /// Whether every eigenvalue sequence converged monotonically.
    pub monotone: bool,
}

/// Lowest eigenpairs of a discrete Dirichlet problem.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambdas: Vec<f64>,
    /// Vertex values, zero on the boundary, `M`-orthonormal.
    pub vectors: Vec<Vec<f64>>,
    /// `‖A v − λ M v‖ / ‖M v‖`.
    pub residuals: Vec<f64>,
    pub h: f64,
    pub extrapolated: Option<Extrapolation>,
}

impl EigenResult {
    /// Best available estimate of `λ_{k+1}` (extrapolated when present).
    pub fn lambda(&self, k: usize) -> f64 {
        match &self.extrapolated {
            Some(e) => e.lambdas[k],
            None => self.lambdas[k],
        }
    }

    /// Error estimate of [`EigenResult::lambda`]; zero without extrapolation.
    pub fn error(&self, k: usize) -> f64 {
        self.extrapolated.as_ref().map(|e| e.errors[k]).unwrap_or(0.0)
    }

    /// Verifier tolerance `max(error estimate, 1e−6 λ)`.
    pub fn tolerance(&self, k: usize) -> f64 {
        self.error(k).max(1e-6 * self.lambda(k).abs())
    }
}

/// The `k` smallest eigenpairs of `A v = λ M v`.
pub fn solve_lowest(sys: &AssembledSystem, k: usize) -> Result<EigenResult> {
    let n = sys.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("cannot compute {k} eigenpairs with {n} unknowns")));
    }
    let (values, mut vectors): (Vec<f64>, Vec<Vec<f64>>) = if n < DENSE_THRESHOLD {
        let a = sys.stiffness.to_dense();
        let m = sys.mass.to_dense();
        let (vals, vecs) = generalized_eigen(&a, &m)?;
        let cols = (0..k).map(|j| column(&vecs, j)).collect();
        (vals[..k].to_vec(), cols)
    } else {
        let p = smallest_eigenpairs(&sys.stiffness, &sys.mass, k, LANCZOS_TOL)?;
        (p.values, p.vectors)
    };
    for (j, v) in vectors.iter_mut().enumerate() {
        let flip = if j == 0 {
            v.iter().sum::<f64>() < 0.0
        } else {
            let i = (0..v.len()).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap_or(0);
            v[i] < 0.0
        };
        if flip {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let residuals = values
        .iter()
        .zip(&vectors)
        .map(|(&l, v)| {
            let av = sys.stiffness.mul_vec(v);
            let mv = sys.mass.mul_vec(v);
            let r: f64 = av.iter().zip(&mv).map(|(a, m)| (a - l * m) * (a - l * m)).sum();
            r.sqrt() / dot(&mv, &mv).sqrt()
        })
        .collect();
    Ok(EigenResult {
        lambdas: values,
        vectors: vectors.iter().map(|v| sys.extend(v)).collect(),
        residuals,
        h: sys.mesh.h,
        extrapolated: None,
    })
}

fn column(a: &DenseMatrix, j: usize) -> Vec<f64> {
    (0..a.n).map(|i| a.get(i, j)).collect()
}

/// One mesh level of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceLevel {
    pub h: f64,
    pub vertices: usize,
    pub unknowns: usize,
    pub lambdas: Vec<f64>,
}

/// Eigenvalues on a sequence of meshes with their Richardson extrapolation.
#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub levels: Vec<ConvergenceLevel>,
    /// Finest-level solution with `extrapolated` filled in.
    pub result: EigenResult,
    /// Finest-level system.
    pub system: AssembledSystem,
}

/// Solves on every mesh size of `h_list` (at least three, decreasing) and
/// extrapolates the `k` lowest eigenvalues. Where a mesh size is half the
/// previous one the previous mesh is refined uniformly, so halving
/// sequences give nested meshes.
pub fn convergence_study(body: &ConvexBody, h_list: &[f64], k: usize) -> Result<ConvergenceStudy> {
    convergence_study_region(&Region::Body(body.clone()), h_list, k)
}

/// [`convergence_study`] on a general region.
pub fn convergence_study_region(region: &Region, h_list: &[f64], k: usize) -> Result<ConvergenceStudy> {
    if h_list.len() < 3 {
        return Err(Error::TooFewLevels(h_list.len()));
    }
    if h_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput(format!("mesh sizes must strictly decrease: {h_list:?}")));
    }
    let mut levels = Vec::with_capacity(h_list.len());
    let mut last: Option<(AssembledSystem, EigenResult)> = None;
    for (i, &h) in h_list.iter().enumerate() {
        let mesh = match &last {
            Some((sys, _)) if (h_list[i - 1] / h - 2.0).abs() < 1e-9 => refine_uniform(&sys.mesh)?,
            _ => triangulate_region(region, h)?,
        };
        let sys = assemble(&mesh)?;
        let res = solve_lowest(&sys, k)?;
        levels.push(ConvergenceLevel {
            h,
            vertices: mesh.vertices.len(),
            unknowns: sys.dim(),
            lambdas: res.lambdas.clone(),
        });
        last = Some((sys, res));
    }
    let (system, mut result) = last.expect("at least three levels");
    result.extrapolated = Some(extrapolate(&levels));
    Ok(ConvergenceStudy { levels, result, system })
}

/// Study on `levels` nested uniform refinements of a given coarse mesh.
pub fn convergence_study_from(coarse: TriMesh, levels: usize, k: usize) -> Result<ConvergenceStudy> {
    if levels < 3 {
        return Err(Error::TooFewLevels(levels));
    }
    let mut out = Vec::with_capacity(levels);
    let mut mesh = coarse;
    let mut last = None;
    for i in 0..levels {
        if i > 0 {
            mesh = refine_uniform(&mesh)?;
        }
        let sys = assemble(&mesh)?;
        let res = solve_lowest(&sys, k)?;
        out.push(ConvergenceLevel {
            h: mesh.h,
            vertices: mesh.vertices.len(),
            unknowns: sys.dim(),
            lambdas: res.lambdas.clone(),
        });
        last = Some((sys, res));
    }
    let (system, mut result) = last.expect("at least three levels");
    result.extrapolated = Some(extrapolate(&out));
    Ok(ConvergenceStudy { levels: out, result, system })
}

/// Richardson extrapolation on the three finest levels with a fitted order.
pub fn extrapolate(levels: &[ConvergenceLevel]) -> Extrapolation {
    let l = &levels[levels.len() - 3..];
    let hs = [0, 1, 2].map(|i| l[i].h);
    let k = l[2].lambdas.len();
    let mut out = Extrapolation { lambdas: vec![], errors: vec![], orders: vec![], monotone: true };
    for j in 0..k {
        let ys = [0, 1, 2].map(|i| l[i].lambdas[j]);
        let (lam, p, mono) = richardson(hs, ys);
        out.lambdas.push(lam);
        out.errors.push((lam - ys[2]).abs());
        out.orders.push(p);
        out.monotone &= mono;
    }
    out
}

/// Fits `y = y∞ + C h^p` through three points. Falls back to `p = 2` on the
/// two finest points when the differences change sign or no order in
/// `[0.25, 8]` fits.
pub fn richardson(h: [f64; 3], y: [f64; 3]) -> (f64, f64, bool) {
    let (d1, d2) = (y[0] - y[1], y[1] - y[2]);
    let two_level = |p: f64| y[2] - d2 * h[2].powf(p) / (h[1].powf(p) - h[2].powf(p));
    if !(d1 * d2 > 0.0) {
        return (two_level(2.0), 2.0, false);
    }
    let q = d1 / d2;
    let g = |p: f64| (h[0].powf(p) - h[1].powf(p)) / (h[1].powf(p) - h[2].powf(p)) - q;
    let (lo, hi) = (0.25, 8.0);
    if g(lo) * g(hi) > 0.0 {
        return (two_level(2.0), 2.0, true);
    }
    match brent(g, lo, hi, 1e-12, 200) {
        Ok(p) => (two_level(p), p, true),
        Err(_) => (two_level(2.0), 2.0, true),
    }
}

/// Piecewise-constant gradient of a P1 function on one triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGradient {
    pub centroid: [f64; 2],
    /// Function value at the centroid.
    pub value: f64,
    /// Chart gradient.
    pub grad: [f64; 2],
    /// `|∇f|²_g = φ⁻¹ |∇f|²` at the centroid.
    pub norm2: f64,
}

/// Gradients of the vertex function `u` on every triangle.
pub fn gradient_field(mesh: &TriMesh, u: &[f64]) -> Vec<TriangleGradient> {
    mesh.triangles
        .iter()
        .map(|t| {
            let [p0, p1, p2] = t.map(|i| mesh.vertices[i]);
            let [u0, u1, u2] = t.map(|i| u[i]);
            let a2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]);
            let g = [
                ((u1 - u0) * (p2[1] - p0[1]) - (u2 - u0) * (p1[1] - p0[1])) / a2,
                ((u2 - u0) * (p1[0] - p0[0]) - (u1 - u0) * (p2[0] - p0[0])) / a2,
            ];
            let c = [(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0];
            TriangleGradient {
                centroid: c,
                value: (u0 + u1 + u2) / 3.0,
                grad: g,
                norm2: (g[0] * g[0] + g[1] * g[1]) / conformal_weight(mesh.chart, c),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests;
