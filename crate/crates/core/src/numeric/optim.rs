//! Derivative-free local maximization in the plane.

/// Nelder–Mead maximization of `f` from `x0` with initial simplex size
/// `step`. Stops when the simplex diameter drops below `xtol`.
pub fn nelder_mead_max<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    x0: [f64; 2],
    step: f64,
    xtol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut s = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut v = [f(s[0]), f(s[1]), f(s[2])];
    for _ in 0..max_iter {
        // order best (largest) first
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
        s = [s[idx[0]], s[idx[1]], s[idx[2]]];
        v = [v[idx[0]], v[idx[1]], v[idx[2]]];
        let diam = dist(s[0], s[1]).max(dist(s[0], s[2]));
        if diam < xtol {
            break;
        }
        let c = [(s[0][0] + s[1][0]) * 0.5, (s[0][1] + s[1][1]) * 0.5];
        let lerp = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = lerp(-1.0);
        let fr = f(xr);
        if fr > v[0] {
            let xe = lerp(-2.0);
            let fe = f(xe);
            if fe > fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr > v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let (xc, fc) = if fr > v[2] {
                let x = lerp(-0.5);
                (x, f(x))
            } else {
                let x = lerp(0.5);
                (x, f(x))
            };
            if fc > v[2].max(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = [(s[0][0] + s[i][0]) * 0.5, (s[0][1] + s[i][1]) * 0.5];
                    v[i] = f(s[i]);
                }
            }
        }
    }
    let best = (0..3).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    (s[best], v[best])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
