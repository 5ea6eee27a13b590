//! The `spaceform` command.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};
use spaceform_core::ballspec::ratio_curve;
use spaceform_core::convexbody::ConvexBody;
use spaceform_core::rearrange::{decreasing_rearrangement, distribution_function, increasing_rearrangement};
use spaceform_core::spaceform::Curvature;
use spaceform_core::stability::{check_sweep, sweep_point, SolvedBody, SweepFamily, SweepPoint};

use crate::config::{Command, FileConfig, Format, Mode, RunConfig};
use crate::corpus::{random_corpus, shipped_corpus};
use crate::io::{self, read_body};
use crate::suite::{resolve_names, run_verifier, verify_many, BodyOutcome};
use crate::LabError;

#[derive(Debug, Parser)]
#[command(name = "spaceform", version, about = "Dirichlet spectra of convex domains in space forms")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Curvature: -1, 0 or 1.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<i32>,
    /// Dimension of the balls in `ball`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Body file (JSON).
    #[arg(long)]
    pub body: Option<PathBuf>,
    /// Mesh sizes, e.g. 0.08,0.04,0.02.
    #[arg(long)]
    pub h: Option<String>,
    /// Verifier name, a comma list, or `all`.
    #[arg(long)]
    pub name: Option<String>,
    /// Ball radii, start:stop:step or a comma list.
    #[arg(long)]
    pub r: Option<String>,
    /// Perturbation sizes, start:stop:step or a comma list.
    #[arg(long)]
    pub eps: Option<String>,
    /// Radius of the perturbed-ball family.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Polygon vertices per sweep body.
    #[arg(long)]
    pub m: Option<usize>,
    /// Verify this many random bodies per geometry instead of the shipped corpus.
    #[arg(long)]
    pub random: Option<usize>,
    /// R of the gap, concentration and splitting checks.
    #[arg(long = "big-r")]
    pub big_r: Option<f64>,
    /// Levels of the rearrangement checks.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    fn flags(&self) -> FileConfig {
        FileConfig {
            delta: self.delta,
            n: self.n,
            body: self.body.clone(),
            h: self.h.clone(),
            name: self.name.clone(),
            r: self.r.clone(),
            eps: self.eps.clone(),
            radius: self.radius,
            mode: self.mode,
            m: self.m,
            random: self.random,
            big_r: self.big_r,
            levels: self.levels,
            seed: self.seed,
            out: self.out.clone(),
            format: self.format,
        }
    }

    pub fn into_config(self) -> Result<RunConfig, LabError> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        RunConfig::resolve(self.command, self.flags().or(file))
    }
}

/// Parses arguments, runs, and returns the exit status: 0 when every
/// requested check passes, 1 on a failed check, 2 on bad input.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.into_config().and_then(|c| run(&c)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a resolved configuration; `Ok(false)` when a check failed.
pub fn run(cfg: &RunConfig) -> Result<bool, LabError> {
    match cfg.command {
        Command::Ball => ball(cfg),
        Command::Solve => solve(cfg),
        Command::Verify => verify(cfg),
        Command::Sweep => sweep(cfg),
        Command::Rearrange => rearrange(cfg),
    }
}

fn curvature(cfg: &RunConfig) -> Result<Curvature, LabError> {
    Ok(Curvature::new(cfg.delta.unwrap_or(0))?)
}

fn body(cfg: &RunConfig) -> Result<ConvexBody, LabError> {
    let p = cfg.body.as_ref().ok_or_else(|| LabError::Config("--body is required".into()))?;
    read_body(p)
}

fn solved(cfg: &RunConfig, b: &ConvexBody) -> Result<SolvedBody, LabError> {
    Ok(match &cfg.h_list {
        Some(h) => SolvedBody::with_h(b, h)?,
        None => SolvedBody::solve(b)?,
    })
}

fn emit(cfg: &RunConfig, f: impl FnOnce(&mut dyn Write) -> Result<(), LabError>) -> Result<(), LabError> {
    match &cfg.out {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| LabError::io(p, e))?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| LabError::io(p, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            f(&mut w)
        }
    }
}

fn ball(cfg: &RunConfig) -> Result<bool, LabError> {
    let curve = ratio_curve(curvature(cfg)?, cfg.n, &cfg.r_grid)?;
    eprintln!(
        "ratio strictly increasing: {}, strictly decreasing: {}",
        curve.strictly_increasing, curve.strictly_decreasing
    );
    emit(cfg, |w| match cfg.format {
        Format::Csv => io::write_ratio_csv(w, &curve),
        Format::Json => io::write_json(w, &io::ratio_json(&curve)),
    })?;
    Ok(true)
}

fn solve(cfg: &RunConfig) -> Result<bool, LabError> {
    let b = body(cfg)?;
    let s = solved(cfg, &b)?;
    let v = json!({ "body": io::body_json(&b), "study": io::study_json(&s.study) });
    emit(cfg, |w| io::write_json(w, &v))?;
    Ok(true)
}

fn verify_targets(cfg: &RunConfig) -> Result<Vec<(String, ConvexBody)>, LabError> {
    if let Some(p) = &cfg.body {
        let label = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(vec![(label, read_body(p)?)]);
    }
    let wanted = |d: i32| cfg.delta.is_none_or(|x| x == d);
    if let Some(count) = cfg.random {
        let mut out = Vec::new();
        for d in [-1, 0, 1].into_iter().filter(|d| wanted(*d)) {
            for (i, b) in random_corpus(Curvature::new(d)?, count, cfg.seed)?.into_iter().enumerate() {
                out.push((format!("random/{d}/{i}"), b));
            }
        }
        return Ok(out);
    }
    Ok(shipped_corpus()?.into_iter().filter(|(_, b)| wanted(b.delta.delta())).collect())
}

fn outcome_json(o: &BodyOutcome) -> Value {
    json!({
        "body": o.label,
        "pass": o.pass(),
        "reports": o.reports.iter().map(io::report_json).collect::<Vec<_>>(),
        "errors": o.errors.iter().map(|(n, m)| json!({ "verifier": n, "message": m })).collect::<Vec<_>>(),
    })
}

fn verify(cfg: &RunConfig) -> Result<bool, LabError> {
    let names = resolve_names(&cfg.name)?;
    let targets = verify_targets(cfg)?;
    let outcomes = verify_many(&targets, cfg.h_list.as_deref(), &names, &cfg.verify);
    let pass = outcomes.iter().all(|o| o.pass());
    for o in &outcomes {
        let failed: Vec<&str> = o.reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
        let status = if o.pass() { "pass" } else { "FAIL" };
        eprintln!("{status} {} ({} reports)", o.label, o.reports.len());
        for f in failed {
            eprintln!("  failed: {f}");
        }
        for (n, m) in &o.errors {
            eprintln!("  error in {n}: {m}");
        }
    }
    emit(cfg, |w| match cfg.format {
        Format::Json => {
            io::write_json(w, &json!({ "pass": pass, "bodies": outcomes.iter().map(outcome_json).collect::<Vec<_>>() }))
        }
        Format::Csv => {
            let rows: Vec<_> =
                outcomes.iter().flat_map(|o| o.reports.iter().map(move |r| (o.label.as_str(), r))).collect();
            io::write_reports_csv(w, &rows)
        }
    })?;
    Ok(pass)
}

fn sweep(cfg: &RunConfig) -> Result<bool, LabError> {
    let family = SweepFamily { delta: curvature(cfg)?, radius: cfg.radius, mode: cfg.mode.into(), m: cfg.m };
    let points: Vec<SweepPoint> =
        cfg.eps_grid.par_iter().map(|&e| sweep_point(&family, e)).collect::<Result<_, _>>()?;
    let reports = check_sweep(family.delta, &points);
    for r in &reports {
        eprintln!("{} {}", if r.pass { "pass" } else { "FAIL" }, r.name);
    }
    emit(cfg, |w| match cfg.format {
        Format::Csv => io::write_sweep_csv(w, &points),
        Format::Json => io::write_json(
            w,
            &json!({
                "points": points.iter().map(|p| json!({
                    "eps": p.eps,
                    "d_hausdorff": p.d_hausdorff,
                    "d_metric": p.d_metric,
                    "lambda1_excess": p.lambda1_excess,
                    "lambda2_deficit": p.lambda2_deficit,
                    "ppw_deficit": p.ppw_deficit,
                })).collect::<Vec<_>>(),
                "reports": reports.iter().map(io::report_json).collect::<Vec<_>>(),
            }),
        ),
    })?;
    Ok(reports.iter().all(|r| r.pass))
}

fn rearrange(cfg: &RunConfig) -> Result<bool, LabError> {
    let b = body(cfg)?;
    let s = solved(cfg, &b)?;
    let levels = cfg.verify.levels;
    let dist = distribution_function(s.ground_state(), s.system(), levels)?;
    let down = decreasing_rearrangement(&dist, s.delta())?;
    let up = increasing_rearrangement(&dist, s.delta(), s.system().volume())?;
    let reports = run_verifier("rearrangement", &s, &cfg.verify)?;
    let pass = reports.iter().all(|r| r.pass);
    let v = json!({
        "body": io::body_json(&b),
        "decreasing": io::profile_json(&down),
        "increasing": io::profile_json(&up),
        "reports": reports.iter().map(io::report_json).collect::<Vec<_>>(),
    });
    emit(cfg, |w| io::write_json(w, &v))?;
    Ok(pass)
}
