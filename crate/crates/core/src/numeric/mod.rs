//! Small self-contained numerical kernels shared by the solvers.

pub mod dense;
pub mod lanczos;
pub mod ode;
pub mod optim;
pub mod quad;
pub mod roots;
pub mod sparse;

/// Relative closeness with an absolute floor of `tol` around zero.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= tol * scale
}
