//! Named verifiers over solved bodies.

use rayon::prelude::*;
use spaceform_core::convexbody::{dilate_body_hull, ConvexBody, DEFAULT_GRID};
use spaceform_core::rearrange::{
    check_equimeasurability, check_hardy_littlewood, check_l2_isometry, check_polya_szego,
};
use spaceform_core::stability::{
    verify_concentration, verify_continuity, verify_faber_krahn, verify_gap_bound, verify_gen_ppw, verify_inradius,
    verify_li_yau, verify_ppw, verify_splitting, SolvedBody, VerificationReport,
};
use spaceform_core::Error;

use crate::LabError;

/// Every verifier name accepted by `verify --name`.
pub const VERIFIERS: &[&str] = &[
    "faber_krahn",
    "ppw",
    "gen_ppw",
    "inradius",
    "li_yau",
    "gap_bound",
    "concentration",
    "continuity",
    "splitting",
    "rearrangement",
];

/// Knobs shared by the verifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// `R` of the gap bound, concentration and splitting checks.
    pub big_r: f64,
    /// Dilation factor of the continuity comparison body.
    pub dilation: f64,
    /// Level count of the rearrangement checks.
    pub levels: usize,
    /// Relative slack allowed in Pólya–Szegő.
    pub polya_rel_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { big_r: 2.0, dilation: 0.8, levels: 64, polya_rel_tol: 1e-3 }
    }
}

/// Expands `all` and rejects unknown names.
pub fn resolve_names(name: &str) -> Result<Vec<&'static str>, LabError> {
    if name == "all" {
        return Ok(VERIFIERS.to_vec());
    }
    let mut out = Vec::new();
    for part in name.split(',') {
        match VERIFIERS.iter().find(|v| **v == part.trim()) {
            Some(v) => out.push(*v),
            None => {
                return Err(LabError::Config(format!(
                    "unknown verifier {part:?}; expected one of {} or all",
                    VERIFIERS.join(", ")
                )))
            }
        }
    }
    Ok(out)
}

/// Runs one verifier. Checks that do not apply to the body's geometry give
/// an empty list.
pub fn run_verifier(name: &str, s: &SolvedBody, opts: &VerifyOptions) -> Result<Vec<VerificationReport>, Error> {
    let one = |r: Result<VerificationReport, Error>| r.map(|r| vec![r]);
    let out = match name {
        "faber_krahn" => one(verify_faber_krahn(s)),
        "ppw" => one(verify_ppw(s)),
        "gen_ppw" => one(verify_gen_ppw(s)),
        "inradius" => one(verify_inradius(s)),
        "li_yau" => one(verify_li_yau(s)),
        "gap_bound" => one(verify_gap_bound(s, opts.big_r)),
        "concentration" => verify_concentration(s, opts.big_r),
        "continuity" => continuity(s, opts),
        "splitting" => one(verify_splitting(s, s.body.base, opts.big_r.max(1.0), 0.5, 0.5)),
        "rearrangement" => rearrangement(s, opts),
        _ => return Err(Error::InvalidInput(format!("unknown verifier {name:?}"))),
    };
    match out {
        Err(Error::NotApplicable(_)) => Ok(vec![]),
        other => other,
    }
}

/// Dilate of the body about its base point. Where the exact image is not
/// convex (hyperbolic polygons) the hull of the dilated support samples is
/// used instead.
pub fn dilate_solved(s: &SolvedBody, lambda: f64) -> Result<SolvedBody, Error> {
    match s.dilated(lambda) {
        Err(Error::ConvexityLost(_)) => {
            let hull = dilate_body_hull(&s.body, lambda, DEFAULT_GRID)?;
            let h: Vec<f64> = s.h_list.iter().map(|x| x * lambda).collect();
            SolvedBody::with_h(&hull, &h)
        }
        other => other,
    }
}

fn continuity(s: &SolvedBody, opts: &VerifyOptions) -> Result<Vec<VerificationReport>, Error> {
    let b = dilate_solved(s, opts.dilation)?;
    let big_r = s.body.max_radius().max(b.body.max_radius()) * (1.0 + 1e-9);
    let mut out = verify_continuity(s, &b, big_r, 1)?;
    out.extend(verify_continuity(s, &b, big_r, 2)?.into_iter().take(1));
    Ok(out)
}

fn rearrangement(s: &SolvedBody, opts: &VerifyOptions) -> Result<Vec<VerificationReport>, Error> {
    let sys = s.system();
    let delta = s.delta();
    let u = s.ground_state();
    let v: Vec<f64> = s.result().vectors[1].iter().map(|x| x.abs()).collect();
    let reports = vec![
        check_equimeasurability(u, sys, delta, opts.levels)?,
        check_l2_isometry(u, sys, delta, opts.levels)?,
        check_polya_szego(u, sys, delta, opts.levels, opts.polya_rel_tol)?,
        check_hardy_littlewood(u, &v, sys)?,
    ];
    Ok(reports.into_iter().map(|r| s.annotate(r)).collect())
}

/// Result of running the verifiers on one body.
#[derive(Debug, Clone)]
pub struct BodyOutcome {
    pub label: String,
    pub reports: Vec<VerificationReport>,
    /// Verifiers that raised an error, with the message.
    pub errors: Vec<(String, String)>,
}

impl BodyOutcome {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.reports.iter().all(|r| r.pass)
    }
}

/// Solves a body and runs the named verifiers on it.
pub fn verify_body(
    label: &str,
    body: &ConvexBody,
    h: Option<&[f64]>,
    names: &[&str],
    opts: &VerifyOptions,
) -> BodyOutcome {
    let solved = match h {
        Some(h) => SolvedBody::with_h(body, h),
        None => SolvedBody::solve(body),
    };
    let mut out = BodyOutcome { label: label.into(), reports: vec![], errors: vec![] };
    let s = match solved {
        Ok(s) => s,
        Err(e) => {
            out.errors.push(("solve".into(), e.to_string()));
            return out;
        }
    };
    for name in names {
        match run_verifier(name, &s, opts) {
            Ok(r) => out.reports.extend(r),
            Err(e) => out.errors.push((name.to_string(), e.to_string())),
        }
    }
    out
}

/// [`verify_body`] over many bodies in parallel; results keep input order.
pub fn verify_many(
    bodies: &[(String, ConvexBody)],
    h: Option<&[f64]>,
    names: &[&str],
    opts: &VerifyOptions,
) -> Vec<BodyOutcome> {
    bodies.par_iter().map(|(label, b)| verify_body(label, b, h, names, opts)).collect()
}
