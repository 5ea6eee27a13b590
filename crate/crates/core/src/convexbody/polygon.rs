//! Planar polygon predicates in straight-geodesic chart coordinates.

use crate::prelude::*;

#[inline]
pub fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Signed area (positive for counter-clockwise order).
pub fn signed_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        * 0.5
}

fn scale(v: &[[f64; 2]]) -> f64 {
    v.iter().fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs())).max(1e-300)
}

/// Every turn strictly to the left, relative to the squared coordinate scale.
pub fn is_strictly_convex_ccw(v: &[[f64; 2]], rel_tol: f64) -> bool {
    let n = v.len();
    if n < 3 {
        return false;
    }
    let s = scale(v);
    let tol = rel_tol * s * s;
    let mut total_turn = 0.0;
    for i in 0..n {
        let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
        if cross(a, b, c) <= tol {
            return false;
        }
        let d1 = [b[0] - a[0], b[1] - a[1]];
        let d2 = [c[0] - b[0], c[1] - b[1]];
        total_turn += (d1[0] * d2[1] - d1[1] * d2[0]).atan2(d1[0] * d2[0] + d1[1] * d2[1]);
    }
    // a single winding
    (total_turn - 2.0 * core::f64::consts::PI).abs() < 1e-6
}

/// Minimum over edges of the (Euclidean) distance from `p` to the edge line,
/// positive inside a counter-clockwise convex polygon.
pub fn inner_margin(v: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            cross(a, b, p) / (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn contains(v: &[[f64; 2]], p: [f64; 2]) -> bool {
    inner_margin(v, p) >= 0.0
}

/// Andrew's monotone chain; counter-clockwise, collinear points removed.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Drops vertices whose turn is below `rel_tol` times the squared scale.
pub fn drop_flat_vertices(v: &mut Vec<[f64; 2]>, rel_tol: f64) {
    let s = scale(v);
    let tol = rel_tol * s * s;
    loop {
        let n = v.len();
        if n <= 3 {
            return;
        }
        let flat = (0..n).find(|&i| cross(v[(i + n - 1) % n], v[i], v[(i + 1) % n]).abs() <= tol);
        match flat {
            Some(i) => {
                v.remove(i);
            }
            None => return,
        }
    }
}

/// Parameter `s > 0` where the ray `o + s d` leaves a convex polygon that
/// contains `o`.
pub fn ray_exit(v: &[[f64; 2]], o: [f64; 2], d: [f64; 2]) -> Option<f64> {
    let n = v.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let den = d[0] * e[1] - d[1] * e[0];
        if den.abs() < 1e-300 {
            continue;
        }
        let w = [a[0] - o[0], a[1] - o[1]];
        let s = (w[0] * e[1] - w[1] * e[0]) / den;
        let u = (w[0] * d[1] - w[1] * d[0]) / den;
        if s > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
            best = Some(match best {
                Some(b) => b.min(s),
                None => s,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0]];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!(signed_area(&h) > 0.0);
        assert!(is_strictly_convex_ccw(&h, 1e-12));
    }

    #[test]
    fn ray_exit_square() {
        let sq = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let s = ray_exit(&sq, [0.0, 0.0], [1.0, 1.0]).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        assert!((inner_margin(&sq, [0.5, 0.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reflex_polygon_is_not_convex() {
        let v = [[0.0, 0.0], [2.0, 0.0], [1.0, 0.2], [2.0, 2.0], [0.0, 2.0]];
        assert!(!is_strictly_convex_ccw(&v, 1e-12));
    }
}

/// Intersection of two counter-clockwise convex polygons (Sutherland–Hodgman).
/// Returns an empty vector when the intersection has no interior.
pub fn clip_convex(subject: &[[f64; 2]], clip: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[i], clip[(i + 1) % n]);
        let input = core::mem::take(&mut out);
        let m = input.len();
        for j in 0..m {
            let p = input[j];
            let q = input[(j + 1) % m];
            let (sp, sq) = (cross(a, b, p), cross(a, b, q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    let s = scale(subject).max(scale(clip));
    out.dedup_by(|x, y| (x[0] - y[0]).hypot(x[1] - y[1]) <= 1e-14 * s);
    while out.len() > 1 && {
        let (f, l) = (out[0], out[out.len() - 1]);
        (f[0] - l[0]).hypot(f[1] - l[1]) <= 1e-14 * s
    } {
        out.pop();
    }
    if out.len() < 3 || signed_area(&out) <= 1e-14 * s * s {
        return Vec::new();
    }
    out
}
