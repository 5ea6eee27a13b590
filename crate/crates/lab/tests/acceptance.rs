//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use spaceform_core::ballspec::{lambda1_ball, lambda2_ball, ratio_curve, BallSpec};
use spaceform_core::convexbody::{polygonal_ball, rectangle};
use spaceform_core::laplace2d::{assemble, convergence_study, to_conformal, triangulate};
use spaceform_core::rearrange::{decreasing_rearrangement, distribution_function};
use spaceform_core::spaceform::{geodesic_distance, ChartKind, Curvature, Isometry, ModelPoint};
use spaceform_core::stability::*;
use spaceform_core::Error;
use spaceform_lab::corpus::random_corpus;
use spaceform_lab::suite::{dilate_solved, run_verifier, VerifyOptions};

const CORPUS_SIZE: usize = 100;
const SEED: u64 = 0;

type Outcome = Result<String, String>;

struct Corpus {
    solved: Vec<(Curvature, Vec<SolvedBody>)>,
}

impl Corpus {
    fn build() -> Result<Self, String> {
        let mut solved = Vec::new();
        for d in [-1, 0, 1] {
            let delta = Curvature::new(d).unwrap();
            let bodies = random_corpus(delta, CORPUS_SIZE, SEED).map_err(|e| e.to_string())?;
            let s: Result<Vec<SolvedBody>, Error> = bodies.par_iter().map(SolvedBody::solve).collect();
            solved.push((delta, s.map_err(|e| format!("corpus solve failed for δ={d}: {e}"))?));
        }
        Ok(Self { solved })
    }

    fn of(&self, d: i32) -> &[SolvedBody] {
        &self.solved.iter().find(|(c, _)| c.delta() == d).unwrap().1
    }

    fn all(&self) -> impl Iterator<Item = &SolvedBody> {
        self.solved.iter().flat_map(|(_, v)| v.iter())
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Runs a verifier on every body; returns (reports, failures as text).
fn corpus_reports(
    bodies: &[&SolvedBody],
    name: &str,
    opts: &VerifyOptions,
) -> Result<(usize, Vec<String>, f64), String> {
    let mut count = 0;
    let mut failed = Vec::new();
    let mut min_slack = f64::INFINITY;
    for s in bodies {
        for r in run_verifier(name, s, opts).map_err(|e| format!("{name}: {e}"))? {
            count += 1;
            min_slack = min_slack.min((r.slack + r.tolerance) / r.rhs.abs().max(1e-300));
            if !r.pass {
                failed.push(format!(
                    "{} on δ={} body {:016x}: lhs {} rhs {} tol {}",
                    r.name,
                    s.delta().delta(),
                    s.body.fingerprint(),
                    r.lhs,
                    r.rhs,
                    r.tolerance
                ));
            }
        }
    }
    Ok((count, failed, min_slack))
}

fn summarize(name: &str, (count, failed, min_rel): (usize, Vec<String>, f64)) -> Outcome {
    if failed.is_empty() {
        Ok(format!("{name}: {count} reports pass, min relative margin {min_rel:.3e}"))
    } else {
        Err(format!("{name}: {} of {count} fail; first: {}", failed.len(), failed[0]))
    }
}

// Bessel function of the first kind by its power series, as an oracle
// independent of the shooting solver.
fn bessel_j(n: u32, x: f64) -> f64 {
    let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..80 {
        term *= -(0.25 * x * x) / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn bessel_zero(n: u32, mut a: f64, mut b: f64) -> f64 {
    let fa = bessel_j(n, a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (bessel_j(n, m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn j01() -> f64 {
    bessel_zero(0, 2.0, 3.0)
}

fn j11() -> f64 {
    bessel_zero(1, 3.5, 4.0)
}

fn c1_ball_oracle() -> Outcome {
    let t = Instant::now();
    let spec = BallSpec::new(Curvature::FLAT, 2, 1.0).map_err(err)?;
    let l1 = lambda1_ball(spec).map_err(err)?;
    let l2 = lambda2_ball(spec).map_err(err)?;
    let el = t.elapsed().as_secs_f64();
    let (o1, o2) = (j01().powi(2), j11().powi(2));
    let (e1, e2) = ((l1 - o1).abs() / o1, (l2 - o2).abs() / o2);
    ensure(e1 <= 1e-8 && e2 <= 1e-8, || format!("relative errors {e1:.2e}, {e2:.2e} exceed 1e-8"))?;
    ensure(el < 1.0, || format!("shooting took {el:.2} s"))?;
    Ok(format!("λ₁ = {l1:.10} (rel {e1:.1e}), λ₂ = {l2:.10} (rel {e2:.1e}), {el:.3} s"))
}

fn c2_fem_convergence() -> Outcome {
    let t = Instant::now();
    let disk = polygonal_ball(Curvature::FLAT, 1.0, 256).map_err(err)?;
    let study = convergence_study(&disk, &[0.12, 0.06, 0.03], 2).map_err(err)?;
    let el = t.elapsed().as_secs_f64();
    let spec = BallSpec::new(Curvature::FLAT, 2, 1.0).map_err(err)?;
    let (s1, s2) = (lambda1_ball(spec).map_err(err)?, lambda2_ball(spec).map_err(err)?);
    let ex = study.result.extrapolated.as_ref().ok_or("no extrapolation")?;
    let (e1, e2) = ((ex.lambdas[0] - s1).abs() / s1, (ex.lambdas[1] - s2).abs() / s2);
    let verts = study.levels.iter().map(|l| l.vertices).max().unwrap_or(0);
    ensure(e1 <= 0.005, || format!("λ₁ off by {:.3}%", 100.0 * e1))?;
    ensure(e2 <= 0.01, || format!("λ₂ off by {:.3}%", 100.0 * e2))?;
    ensure(ex.orders.iter().all(|p| (1.5..=2.5).contains(p)), || format!("orders {:?}", ex.orders))?;
    ensure(verts <= 20_000, || format!("{verts} vertices"))?;
    ensure(el < 60.0, || format!("{el:.1} s"))?;
    Ok(format!(
        "λ₁ {:.5} ({:.3}%), λ₂ {:.4} ({:.3}%), orders {:.2}/{:.2}, {verts} vertices, {el:.1} s",
        ex.lambdas[0],
        100.0 * e1,
        ex.lambdas[1],
        100.0 * e2,
        ex.orders[0],
        ex.orders[1]
    ))
}

fn c3_hemisphere() -> Outcome {
    let l = lambda1_ball(BallSpec::new(Curvature::SPHERICAL, 2, PI / 2.0).map_err(err)?).map_err(err)?;
    ensure((l - 2.0).abs() <= 1e-6, || format!("λ₁ = {l}"))?;
    Ok(format!("λ₁(hemisphere) = {l:.10}"))
}

fn c4_hyperbolic_threshold() -> Outcome {
    let mut excess = Vec::new();
    for r in 1..=8 {
        let l = lambda1_ball(BallSpec::new(Curvature::HYPERBOLIC, 2, r as f64).map_err(err)?).map_err(err)?;
        excess.push(l - 0.25);
    }
    ensure(excess.iter().all(|e| *e > 0.0), || format!("excess {excess:?}"))?;
    ensure(excess.windows(2).all(|w| w[1] < w[0]), || format!("excess not decreasing: {excess:?}"))?;
    Ok(format!("λ₁ − 1/4 from {:.4} (r=1) down to {:.3e} (r=8)", excess[0], excess[7]))
}

fn c5_monotonicity() -> Outcome {
    let t = Instant::now();
    let s_grid: Vec<f64> = (1..=40).map(|i| 0.5 * PI * i as f64 / 40.0).collect();
    let h_grid: Vec<f64> = (0..40).map(|i| 0.25 + (6.0 - 0.25) * i as f64 / 39.0).collect();
    let s = ratio_curve(Curvature::SPHERICAL, 2, &s_grid).map_err(err)?;
    let h = ratio_curve(Curvature::HYPERBOLIC, 2, &h_grid).map_err(err)?;
    let el = t.elapsed().as_secs_f64();
    ensure(s.strictly_increasing, || "S² ratio not strictly increasing".into())?;
    ensure(h.strictly_decreasing, || "H² ratio not strictly decreasing".into())?;
    ensure(el < 30.0, || format!("{el:.1} s"))?;
    Ok(format!(
        "S² {:.4} → {:.4} increasing, H² {:.4} → {:.4} decreasing, {el:.1} s",
        s.rows[0].ratio, s.rows[39].ratio, h.rows[0].ratio, h.rows[39].ratio
    ))
}

fn c6_faber_krahn(c: &Corpus) -> Outcome {
    let opts = VerifyOptions::default();
    let all: Vec<&SolvedBody> = c.all().collect();
    let line = summarize("corpus", corpus_reports(&all, "faber_krahn", &opts)?)?;
    let sq = SolvedBody::with_h(&rectangle(1.0, 1.0).map_err(err)?, &[0.08, 0.04, 0.02]).map_err(err)?;
    let r = verify_faber_krahn(&sq).map_err(err)?;
    let expect = 2.0 * PI * PI - PI * j01().powi(2);
    let rel = (r.slack - expect).abs() / expect;
    ensure(r.pass && rel <= 0.02, || format!("square slack {} vs {expect} ({:.2}%)", r.slack, 100.0 * rel))?;
    Ok(format!("{line}; square slack {:.4} vs {expect:.4}", r.slack))
}

fn c7_ppw(c: &Corpus) -> Outcome {
    let opts = VerifyOptions::default();
    let bodies: Vec<&SolvedBody> = c.of(0).iter().chain(c.of(1)).collect();
    let line = summarize("δ∈{0,1}", corpus_reports(&bodies, "ppw", &opts)?)?;
    let ball = SolvedBody::solve(&polygonal_ball(Curvature::FLAT, 1.0, 256).map_err(err)?).map_err(err)?;
    let r = verify_ppw(&ball).map_err(err)?;
    ensure(r.slack.abs() <= r.tolerance, || format!("ball ratio gap {} > tol {}", r.slack, r.tolerance))?;
    let rejected = matches!(verify_ppw(&c.of(-1)[0]), Err(Error::NotApplicable(_)));
    ensure(rejected, || "δ=−1 body was not rejected".into())?;
    Ok(format!("{line}; disk |gap| {:.2e} ≤ tol {:.2e}; δ=−1 rejected", r.slack.abs(), r.tolerance))
}

fn c8_gen_ppw(c: &Corpus) -> Outcome {
    let opts = VerifyOptions::default();
    let all: Vec<&SolvedBody> = c.all().collect();
    let line = summarize("corpus", corpus_reports(&all, "gen_ppw", &opts)?)?;
    let ball = SolvedBody::solve(&polygonal_ball(Curvature::HYPERBOLIC, 1.0, 256).map_err(err)?).map_err(err)?;
    let r = verify_gen_ppw(&ball).map_err(err)?;
    ensure(r.slack.abs() <= r.tolerance, || format!("H² ball gap {} > tol {}", r.slack, r.tolerance))?;
    Ok(format!("{line}; H² ball |gap| {:.2e} ≤ tol {:.2e}", r.slack.abs(), r.tolerance))
}

fn c9_continuity(c: &Corpus) -> Outcome {
    let mut pairs = 0;
    let mut worst_eq = 0.0f64;
    let mut hulls = 0;
    for d in [-1, 0, 1] {
        for (i, a) in c.of(d).iter().take(20).enumerate() {
            let lambda = 0.6 + 0.35 * i as f64 / 19.0;
            let b = if d == -1 && i % 2 == 0 {
                // exact dilates of geodesic balls
                let r = 0.5 + 0.05 * i as f64;
                let big =
                    SolvedBody::solve(&polygonal_ball(Curvature::HYPERBOLIC, r, 128).map_err(err)?).map_err(err)?;
                let small = SolvedBody::solve(&polygonal_ball(Curvature::HYPERBOLIC, lambda * r, 128).map_err(err)?)
                    .map_err(err)?;
                check_pair(&big, &small, d, &mut worst_eq)?;
                pairs += 1;
                continue;
            } else {
                dilate_solved(a, lambda).map_err(err)?
            };
            if d == -1 {
                hulls += 1;
            }
            check_pair(a, &b, d, &mut worst_eq)?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs pass (δ=−1: 10 ball pairs, {hulls} hull dilates); δ=0 max equality gap {worst_eq:.2e}"))
}

fn check_pair(a: &SolvedBody, b: &SolvedBody, d: i32, worst_eq: &mut f64) -> Result<(), String> {
    let big_r = a.body.max_radius().max(b.body.max_radius()) * (1.0 + 1e-9);
    for k in [1, 2] {
        for r in verify_continuity(a, b, big_r, k).map_err(err)? {
            ensure(r.pass, || format!("δ={d}: {} fails: lhs {} rhs {} tol {}", r.name, r.lhs, r.rhs, r.tolerance))?;
            if d == 0 {
                let gap = r.num("equality_gap").unwrap_or(f64::NAN);
                *worst_eq = worst_eq.max(gap);
                ensure(gap <= 1e-6, || format!("δ=0 {} equality gap {gap:.2e}", r.name))?;
            }
        }
    }
    Ok(())
}

/// `f* = f` for a radial decreasing `f` on a ball, up to the level spacing
/// plus the variation of `f` over one mesh edge.
fn radial_idempotence(delta: Curvature, r: f64) -> Result<f64, String> {
    let ball = polygonal_ball(delta, r, 256).map_err(err)?;
    let sys = assemble(&triangulate(&ball, r / 40.0).map_err(err)?).map_err(err)?;
    let chart = sys.mesh.chart;
    let o = ModelPoint::origin(chart);
    let f = |t: f64| (0.5 * PI * t / r).cos().max(0.0);
    let vals: Result<Vec<f64>, Error> =
        sys.mesh.vertices.iter().map(|&v| Ok(f(geodesic_distance(&o, &ModelPoint::new(chart, v)?)?))).collect();
    let vals = vals.map_err(err)?;
    let levels = 128;
    let prof =
        decreasing_rearrangement(&distribution_function(&vals, &sys, levels).map_err(err)?, delta).map_err(err)?;
    let h = sys.mesh.max_edge() * to_max_scale(delta, r);
    let tol = 1.0 / levels as f64 + 0.5 * PI / r * h;
    let mut worst = 0.0f64;
    for k in 0..100 {
        let t = prof.r_star * k as f64 / 100.0;
        worst = worst.max((prof.value(t) - f(t)).abs());
    }
    ensure(worst <= tol, || format!("δ={}: |f* − f| = {worst:.3e} > {tol:.3e}", delta.delta()))?;
    Ok(worst / tol)
}

/// Largest metric length of a unit chart vector on the mesh of a ball.
fn to_max_scale(delta: Curvature, r: f64) -> f64 {
    let edge = spaceform_core::convexbody::radial_point(delta, r, 0.0);
    let c = to_conformal(delta, edge).unwrap_or([0.0, 0.0]);
    let w0 = spaceform_core::spaceform::conformal_weight(delta.conformal_chart(), [0.0, 0.0]);
    let w1 = spaceform_core::spaceform::conformal_weight(delta.conformal_chart(), c);
    w0.max(w1).sqrt()
}

fn c10_rearrangement(c: &Corpus) -> Outcome {
    let opts = VerifyOptions::default();
    let all: Vec<&SolvedBody> = c.all().collect();
    let line = summarize("corpus", corpus_reports(&all, "rearrangement", &opts)?)?;
    let mut fr = Vec::new();
    for (d, r) in [(-1, 1.5), (0, 1.0), (1, 1.2)] {
        fr.push(radial_idempotence(Curvature::new(d).unwrap(), r)?);
    }
    Ok(format!("{line}; radial idempotence error/tolerance {:.2}, {:.2}, {:.2}", fr[0], fr[1], fr[2]))
}

fn c11_inradius_li_yau(c: &Corpus) -> Outcome {
    let opts = VerifyOptions::default();
    let all: Vec<&SolvedBody> = c.all().collect();
    let a = summarize("inradius", corpus_reports(&all, "inradius", &opts)?)?;
    let b = summarize("li_yau", corpus_reports(&all, "li_yau", &opts)?)?;
    let rect = rectangle(2.0, 1.0).map_err(err)?;
    let lhs = inradius_bound(rectangle_eigenvalue(2.0, 1.0, 1, 1));
    let rin = rect.inradius();
    ensure((rin - 0.5).abs() < 1e-12, || format!("2×1 in-radius {rin}"))?;
    ensure((lhs - 0.4301).abs() < 5e-5 && lhs <= rin, || format!("2×1 bound {lhs}"))?;
    Ok(format!("{a}; {b}; 2×1: {rin} ≥ {lhs:.4}"))
}

fn symmetric_cloud(chart: ChartKind, base: &[[f64; 2]], w: &[f64], k: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    let delta = chart.delta();
    let (mut p, mut ww) = (Vec::new(), Vec::new());
    for j in 0..k {
        let g = Isometry::rotation(delta, 2.0 * PI * j as f64 / k as f64);
        for (q, &x) in base.iter().zip(w) {
            p.push(g.apply(&ModelPoint::new(chart, *q).unwrap()).unwrap().coords);
            ww.push(x);
        }
    }
    (p, ww)
}

fn c12_gap_machinery(c: &Corpus) -> Outcome {
    let opts = VerifyOptions::default();
    let hyp: Vec<&SolvedBody> = c.of(-1).iter().collect();
    let a = summarize("gap_bound", corpus_reports(&hyp, "gap_bound", &opts)?)?;
    let b = summarize("concentration", corpus_reports(&hyp, "concentration", &opts)?)?;
    let mut worst_sym = 0.0f64;
    let mut worst_eq = 0.0f64;
    for d in [-1, 0, 1] {
        let s = &c.of(d)[0];
        let mesh = &s.system().mesh;
        let chart = mesh.chart;
        let u = s.ground_state();
        let pts: Vec<[f64; 2]> = mesh.vertices.iter().step_by(7).copied().collect();
        let w: Vec<f64> = u.iter().zip(&s.system().vertex_mass).step_by(7).map(|(u, m)| u * u * m).collect();
        let delta = chart.delta();
        let g = Isometry::translation(delta, 0.3).compose(&Isometry::rotation(delta, 0.4));
        for wt in [&UnitWeight as &dyn RadialWeight, &RampWeight(2.0)] {
            // symmetry: a five-fold symmetric cloud moved by g has center g(0)
            let (sp, sw) = symmetric_cloud(chart, &pts, &w, 5);
            let moved: Vec<[f64; 2]> =
                sp.iter().map(|q| g.apply(&ModelPoint::new(chart, *q).unwrap()).unwrap().coords).collect();
            let m = center_of_mass_points(chart, &moved, &sw, wt).map_err(err)?;
            let target = g.apply(&ModelPoint::origin(chart)).map_err(err)?;
            worst_sym = worst_sym.max(geodesic_distance(&m.point, &target).map_err(err)?);
            // equivariance on the ground-state cloud
            let x = center_of_mass_points(chart, &pts, &w, wt).map_err(err)?;
            let gp: Vec<[f64; 2]> =
                pts.iter().map(|q| g.apply(&ModelPoint::new(chart, *q).unwrap()).unwrap().coords).collect();
            let y = center_of_mass_points(chart, &gp, &w, wt).map_err(err)?;
            worst_eq = worst_eq.max(geodesic_distance(&g.apply(&x.point).map_err(err)?, &y.point).map_err(err)?);
        }
    }
    ensure(worst_sym <= 1e-6, || format!("symmetry error {worst_sym:.2e}"))?;
    ensure(worst_eq <= 1e-6, || format!("equivariance error {worst_eq:.2e}"))?;
    Ok(format!("{a}; {b}; center symmetry {worst_sym:.1e}, equivariance {worst_eq:.1e}"))
}

fn c13_splitting(c: &Corpus) -> Outcome {
    let long = SolvedBody::solve(&rectangle(6.0, 1.0).map_err(err)?).map_err(err)?;
    let wide = SolvedBody::solve(&rectangle(4.0, 1.5).map_err(err)?).map_err(err)?;
    let mut configs: Vec<(&SolvedBody, [f64; 2], f64, f64, f64)> = vec![
        (&long, [0.0, 0.0], 10.0, 0.5, 0.5),
        (&long, [20.0, 0.0], 1.5, 0.5, 0.5),
        (&long, [0.0, 0.0], 1.0, 0.5, 0.5),
        (&long, [-3.0, 0.0], 3.0, 0.5, 0.5),
        (&long, [-3.0, 0.0], 3.0, 0.5, 0.999),
        (&long, [-3.0, 0.0], 2.0, 0.3, 0.5),
        (&long, [3.0, 0.0], 2.5, 0.7, 0.6),
        (&long, [-1.5, 0.0], 1.5, 0.5, 0.4),
        (&long, [1.0, 0.3], 4.0, 0.5, 0.7),
        (&long, [0.0, 0.0], 2.0, 0.5, 0.5),
        (&wide, [-2.0, 0.0], 2.0, 0.5, 0.5),
        (&wide, [2.0, 0.75], 1.5, 0.4, 0.5),
        (&wide, [0.0, 0.0], 1.2, 0.5, 0.3),
        (&wide, [0.0, 0.0], 8.0, 0.5, 0.5),
    ];
    for d in [-1, 1] {
        for s in c.of(d).iter().take(3) {
            // a cap of radius 1.2 about a vertex may leave the hemisphere of the chart
            let y0 = if d == 1 { s.body.base } else { s.body.vertices[0] };
            configs.push((s, y0, 1.2, 0.5, 0.5));
        }
    }
    let mut empty = 0;
    let mut vacuous = 0;
    let mut unresolved = 0;
    for (s, y0, r, a, g) in &configs {
        let rep = verify_splitting(s, *y0, *r, *a, *g).map_err(|e| format!("y0 {y0:?} R {r}: {e}"))?;
        ensure(rep.pass, || format!("y0 {y0:?} R {r}: lhs {} rhs {} tol {}", rep.lhs, rep.rhs, rep.tolerance))?;
        let piece = |k: &str, v: &str| matches!(rep.context.get(k), Some(ContextValue::Text(t)) if t == v);
        empty += usize::from(piece("inside_piece", "empty") || piece("outside_piece", "empty"));
        unresolved += usize::from(piece("inside_piece", "unresolved") || piece("outside_piece", "unresolved"));
        vacuous += usize::from(rep.flag("vacuous") == Some(true));
    }
    ensure(configs.len() == 20, || format!("{} configurations", configs.len()))?;
    ensure(empty >= 2 && vacuous >= 1, || format!("edge cases missing: {empty} empty, {vacuous} vacuous"))?;
    Ok(format!(
        "{} configurations pass ({empty} with an empty piece, {unresolved} with an unmeshable sliver, {vacuous} vacuous)",
        configs.len()
    ))
}

fn c14_rectangle_chain() -> Outcome {
    let mut trend = Vec::new();
    for a in [4.0, 8.0, 16.0, 32.0] {
        let r = rectangle_chain(a, 1.0).map_err(err)?;
        ensure(r.pass, || format!("a = {a}: {r:?}"))?;
        let gap = r.num("gap").ok_or("no gap in context")?;
        let exact = 3.0 * PI * PI / (a * a);
        ensure((gap - exact).abs() <= 1e-12 * exact, || format!("a = {a}: gap {gap} vs {exact}"))?;
        trend.push(format!("{a}:{:.4}", rectangle_diameter_ratio(a, 1.0)));
    }
    Ok(format!("a ∈ {{4,8,16,32}} pass, gap = 3π²/a²; diameter trend {}", trend.join(" ")))
}

fn c15_sweeps() -> Outcome {
    let t = Instant::now();
    let eps: Vec<f64> = (0..7).map(|i| 0.05 * i as f64).collect();
    let mut lines = Vec::new();
    for d in [-1, 0, 1] {
        let delta = Curvature::new(d).unwrap();
        // on S² the exp-mapped ellipse of radius 1 stops being convex before eps = 0.3
        let radius = if d == 1 { 0.8 } else { 1.0 };
        let fam = SweepFamily { delta, radius, mode: spaceform_core::convexbody::BallPerturbation::Ellipse, m: 128 };
        let pts: Result<Vec<SweepPoint>, Error> = eps.par_iter().map(|&e| sweep_point(&fam, e)).collect();
        let pts = pts.map_err(err)?;
        let reps = check_sweep(delta, &pts);
        let expected = if d == -1 { 4 } else { 6 };
        ensure(reps.len() == expected, || format!("δ={d}: {} trend reports", reps.len()))?;
        for r in &reps {
            ensure(r.pass, || format!("δ={d}: {} fails: slack {} tol {}", r.name, r.slack, r.tolerance))?;
        }
        let last = pts.last().unwrap();
        lines.push(format!(
            "δ={d}: λ₁ excess {:.3}, λ₂ deficit {:.3}{} at eps 0.3",
            last.lambda1_excess,
            last.lambda2_deficit,
            if d == -1 { String::new() } else { format!(", PPW deficit {:.4}", last.ppw_deficit) }
        ));
    }
    Ok(format!("{}; {:.0} s", lines.join("; "), t.elapsed().as_secs_f64()))
}

fn run(id: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let el = t.elapsed().as_secs_f64();
    let (tag, detail) = match &out {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("[{tag}] {id:>2} {title} ({el:.1} s): {detail}");
    out.is_ok()
}

fn main() {
    let t = Instant::now();
    let mut ok = Vec::new();
    ok.push(run(1, "ball spectrum oracle", c1_ball_oracle));
    ok.push(run(2, "FEM convergence", c2_fem_convergence));
    ok.push(run(3, "hemisphere identity", c3_hemisphere));
    ok.push(run(4, "hyperbolic threshold", c4_hyperbolic_threshold));
    ok.push(run(5, "ratio monotonicity", c5_monotonicity));
    let tc = Instant::now();
    let corpus = Corpus::build();
    println!("       corpus: {CORPUS_SIZE} bodies × 3 geometries solved in {:.1} s", tc.elapsed().as_secs_f64());
    let with_corpus = |id: usize, title: &str, f: fn(&Corpus) -> Outcome| match &corpus {
        Ok(c) => run(id, title, || f(c)),
        Err(e) => run(id, title, || Err(e.clone())),
    };
    ok.push(with_corpus(6, "Faber–Krahn suite", c6_faber_krahn));
    ok.push(with_corpus(7, "PPW suite", c7_ppw));
    ok.push(with_corpus(8, "generalized PPW suite", c8_gen_ppw));
    ok.push(with_corpus(9, "continuity bounds", c9_continuity));
    ok.push(with_corpus(10, "rearrangement", c10_rearrangement));
    ok.push(with_corpus(11, "in-radius and Li–Yau", c11_inradius_li_yau));
    ok.push(with_corpus(12, "gap machinery", c12_gap_machinery));
    ok.push(with_corpus(13, "splitting lemma", c13_splitting));
    ok.push(run(14, "rectangle chain", c14_rectangle_chain));
    ok.push(run(15, "stability sweeps", c15_sweeps));
    let passed = ok.iter().filter(|x| **x).count();
    println!("acceptance: {passed}/{} criteria pass in {:.0} s", ok.len(), t.elapsed().as_secs_f64());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
