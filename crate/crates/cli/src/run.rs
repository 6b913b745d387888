//! Command implementations. Each returns a `Report` plus the exit code;
//! errors carry their own codes (2 parse, 3 empty, 4 cap, 5 verification).

use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde_json::{json, Value};

use scg_core::dominance::{self, Orientation, PointedContext};
use scg_core::mip;
use scg_core::rat::{self, Int, Rational};
use scg_core::ratpoly::{lp, Limits, Polyhedron, Rel, UnimodularMap};
use scg_core::scg::{self, Cut, CutCertificate, Strengthened};
use scg_core::transforms;
use scg_core::Error as CoreError;

use crate::output::{self, Report};
use crate::parse::{self, LoadError, Problem, ProblemSet};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

/// A finished command: what to print and how to exit.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

#[derive(Debug)]
pub enum CliError {
    Load(LoadError),
    Usage(String),
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Load(LoadError::Parse(_)) => EXIT_PARSE,
            CliError::Load(LoadError::Build(e)) | CliError::Core(e) => core_exit(e),
            CliError::Usage(_) => EXIT_PARSE,
        }
    }
}

fn core_exit(e: &CoreError) -> i32 {
    match e {
        CoreError::DimensionCap { .. } | CoreError::BoxTooLarge { .. } => EXIT_CAP,
        CoreError::EmptySet => EXIT_EMPTY,
        CoreError::VerificationFailed(_)
        | CoreError::NotValid { .. }
        | CoreError::NotSupporting { .. }
        | CoreError::NotInHull => EXIT_VERIFY,
        _ => EXIT_OTHER,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Load(e) => write!(f, "{e}"),
            CliError::Usage(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Load(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

/// Strengthens one inequality αx ≤ β with β the exact maximum over P.
pub fn strengthen(file: &Path, alpha_arg: &str, limits: &Limits) -> Result<Outcome, CliError> {
    let problem = parse::parse_problem(file, limits)?;
    let alpha = parse::parse_int_list(alpha_arg).map_err(CliError::Usage)?;
    let cert = match &problem.set {
        ProblemSet::Pure(s) => {
            if alpha.len() != problem.p.dim() {
                return Err(CliError::Usage(format!(
                    "--alpha needs {} entries",
                    problem.p.dim()
                )));
            }
            scg::scg_cut(&problem.p, s, &alpha, false, limits)?
        }
        ProblemSet::Mixed(s) => {
            if alpha.len() != s.n_int() {
                return Err(CliError::Usage(format!(
                    "--alpha needs {} entries, one per integer coordinate",
                    s.n_int()
                )));
            }
            if problem.p.is_empty() {
                scg::empty_cut_certificate(&problem.p)?
            } else {
                let mut obj = rat::int_to_rat_vec(&alpha);
                obj.extend(std::iter::repeat(Rational::zero()).take(s.n_cont()));
                match lp::maximize(&problem.p, &obj)? {
                    lp::LpResult::Optimal(o) => {
                        let strengthened = mip::floor_mixed(s, &alpha, &o.value, limits)?;
                        let mut padded = alpha.clone();
                        padded.extend(std::iter::repeat(Int::zero()).take(s.n_cont()));
                        CutCertificate {
                            cut: Cut {
                                alpha: padded,
                                beta: o.value,
                                strengthened,
                            },
                            lambda: o.dual,
                        }
                    }
                    lp::LpResult::Unbounded(_) => return Err(CoreError::Unbounded.into()),
                    lp::LpResult::Infeasible(_) => scg::empty_cut_certificate(&problem.p)?,
                }
            }
        }
    };
    Ok(strengthen_outcome(&cert))
}

fn strengthen_outcome(cert: &CutCertificate) -> Outcome {
    let classical = rat::floor_int(&cert.cut.beta);
    let mut text = String::new();
    text.push_str(&format!("beta = {}\n", output::rat_str(&cert.cut.beta)));
    text.push_str(&format!("classical_floor = {classical}\n"));
    let mut obj = json!({
        "beta": output::rat_str(&cert.cut.beta),
        "classical_floor": classical.to_string(),
        "lambda": output::json_rat_vec(&cert.lambda),
    });
    let map = obj.as_object_mut().expect("object");
    let exit;
    match &cert.cut.strengthened {
        Strengthened::Finite { value, witness } => {
            text.push_str(&format!("beta_strengthened = {value}\n"));
            text.push_str(&format!("witness = {}\n", output::int_tuple(witness)));
            map.insert("beta_strengthened".into(), Value::String(value.to_string()));
            map.insert("witness".into(), output::json_int_vec(witness));
            exit = EXIT_OK;
        }
        Strengthened::EmptySide => {
            text.push_str("beta_strengthened = empty_side\n");
            text.push_str("cut = 0x <= -1\n");
            map.insert("beta_strengthened".into(), Value::String("empty_side".into()));
            exit = EXIT_EMPTY;
        }
    }
    text.push_str(&format!("lambda = {}\n", output::rat_tuple(&cert.lambda)));
    Outcome {
        report: Report { text, json: obj },
        exit,
    }
}

/// One pure closure round with a bounded worker count. Certificates are
/// merged in family order, so the result is identical for any count.
fn closure_parallel(
    p: &Polyhedron,
    s: &scg_core::sets::SSpec,
    k: u32,
    threads: usize,
    limits: &Limits,
) -> Result<scg::ClosureResult, CliError> {
    if threads <= 1 || p.is_empty() {
        return Ok(scg::bounded_closure(p, s, k, false, limits)?);
    }
    let family = scg::alpha_enumeration(p.dim(), k);
    let workers = threads.min(family.len().max(1));
    let results: Vec<scg_core::Result<Option<CutCertificate>>> = std::thread::scope(|scope| {
        let family = &family;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let limits = *limits;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut i = w;
                    while i < family.len() {
                        out.push((i, one_cut(p, s, &family[i], &limits)));
                        i += workers;
                    }
                    out
                })
            })
            .collect();
        let mut merged: Vec<(usize, scg_core::Result<Option<CutCertificate>>)> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("closure worker panicked"))
            .collect();
        merged.sort_by_key(|(i, _)| *i);
        merged.into_iter().map(|(_, r)| r).collect()
    });
    let mut certificates = Vec::new();
    for r in results {
        if let Some(cert) = r? {
            certificates.push(cert);
        }
    }
    Ok(scg::assemble_closure(p, certificates)?)
}

/// The certificate for one normal, or None when the normal is unbounded
/// over P and contributes no cut.
fn one_cut(
    p: &Polyhedron,
    s: &scg_core::sets::SSpec,
    alpha: &[Int],
    limits: &Limits,
) -> scg_core::Result<Option<CutCertificate>> {
    let obj = rat::int_to_rat_vec(alpha);
    match lp::maximize(p, &obj)? {
        lp::LpResult::Optimal(o) => {
            let strengthened = scg::floor_s(s, alpha, &o.value, limits)?;
            Ok(Some(CutCertificate {
                cut: Cut {
                    alpha: alpha.to_vec(),
                    beta: o.value,
                    strengthened,
                },
                lambda: o.dual,
            }))
        }
        lp::LpResult::Unbounded(_) => Ok(None),
        lp::LpResult::Infeasible(_) => Err(CoreError::Internal(
            "nonempty polyhedron reported infeasible".into(),
        )),
    }
}

/// Runs `rounds` closure rounds and prints the final H-rep plus every
/// certificate, per round.
pub fn closure(
    file: &Path,
    k: u32,
    rounds: u32,
    threads: usize,
    limits: &Limits,
) -> Result<Outcome, CliError> {
    let problem = parse::parse_problem(file, limits)?;
    let mut current = problem.p.clone();
    let mut all_rounds: Vec<Vec<CutCertificate>> = Vec::new();
    for _ in 0..rounds.max(1) {
        let (next, certs) = match &problem.set {
            ProblemSet::Pure(s) => {
                let res = closure_parallel(&current, s, k, threads, limits)?;
                (res.polyhedron, res.certificates)
            }
            ProblemSet::Mixed(s) => {
                let res = mip::mixed_closure_round(&current, s, k, false, limits)?;
                (res.polyhedron, res.certificates)
            }
        };
        all_rounds.push(certs);
        let empty = next.is_empty();
        current = next;
        if empty {
            break;
        }
    }

    let any_empty_side = all_rounds
        .iter()
        .flatten()
        .any(|c| c.cut.strengthened == Strengthened::EmptySide);
    let exit = if current.is_empty() || any_empty_side {
        EXIT_EMPTY
    } else {
        EXIT_OK
    };

    let mut text = String::new();
    let mut rounds_json = Vec::new();
    for (idx, certs) in all_rounds.iter().enumerate() {
        text.push_str(&format!("round {}\n", idx + 1));
        for cert in certs {
            text.push_str(&output::certificate_line(cert));
            text.push('\n');
        }
        rounds_json.push(json!({
            "round": idx + 1,
            "certificates": certs.iter().map(output::json_certificate).collect::<Vec<_>>(),
        }));
    }
    text.push_str("closure\n");
    for line in output::hrep_lines(&current) {
        text.push_str(&line);
        text.push('\n');
    }
    let obj = json!({
        "rounds": rounds_json,
        "closure": output::json_hrep(&current),
        "empty": current.is_empty(),
    });
    Ok(Outcome {
        report: Report { text, json: obj },
        exit,
    })
}

/// Builds the covering/packing context a dominance run needs from the
/// problem file: one-orientation integral rows plus the set's rays.
fn pointed_context(problem: &Problem) -> Result<(PointedContext, scg_core::sets::SSpec), CliError> {
    let s = match &problem.set {
        ProblemSet::Pure(s) => s.clone(),
        ProblemSet::Mixed(_) => {
            return Err(CliError::Usage(
                "dominate needs a pure integer set, not a mixed one".into(),
            ))
        }
    };
    if !s.is_pointed() {
        return Err(CliError::Usage(
            "dominate needs a pointed set: split the lineality first".into(),
        ));
    }
    let rows = problem.p.rows();
    if rows.is_empty() {
        return Err(CliError::Usage("dominate needs at least one row".into()));
    }
    let orientation = match rows[0].rel {
        Rel::Ge => Orientation::Covering,
        Rel::Le => Orientation::Packing,
        Rel::Eq => {
            return Err(CliError::Usage(
                "dominate needs inequality rows, all >= or all <=".into(),
            ))
        }
    };
    let mut a = Vec::with_capacity(rows.len());
    let mut b = Vec::with_capacity(rows.len());
    for row in rows {
        if row.rel != rows[0].rel {
            return Err(CliError::Usage(
                "dominate needs rows of one orientation, all >= or all <=".into(),
            ));
        }
        if !row.coeffs.iter().all(rat::is_integral) || !rat::is_integral(&row.rhs) {
            return Err(CliError::Usage("dominate needs integral rows".into()));
        }
        a.push(row.coeffs.iter().map(|c| c.to_integer()).collect::<Vec<Int>>());
        b.push(row.rhs.to_integer());
    }
    let rays = s.generators().rays.to_vec();
    let n = problem.p.dim();
    let n1 = if rays.is_empty() {
        n
    } else {
        n - scg_core::mat::hnf(&rays).rank
    };
    let ctx = PointedContext::new(a, b, n1, rays, orientation)?;
    Ok((ctx, s))
}

/// Reduces a multiplier to one whose cut has intercepts at most M*.
pub fn dominate(file: &Path, lambda_arg: &str, limits: &Limits) -> Result<Outcome, CliError> {
    let problem = parse::parse_problem(file, limits)?;
    let (ctx, s) = pointed_context(&problem)?;
    let lambda = parse::parse_multiplier_list(lambda_arg).map_err(CliError::Usage)?;
    if lambda.len() != ctx.m() {
        return Err(CliError::Usage(format!(
            "--lambda needs {} entries, one per row",
            ctx.m()
        )));
    }
    let consts = dominance::constants(&ctx);
    let (mu, traces) = dominance::reduce_to_bounded(&lambda, &ctx, &s, limits)?;
    let alpha = ctx.alpha(&mu)?;
    let beta = ctx.beta(&mu);

    let orientation = match ctx.orientation() {
        Orientation::Covering => "covering",
        Orientation::Packing => "packing",
    };
    let mut text = String::new();
    text.push_str(&format!("orientation = {orientation}\n"));
    text.push_str(&format!("B = {}\n", consts.b_max));
    text.push_str(&format!("D = {}\n", consts.d));
    text.push_str(&format!("M_list = {}\n", output::int_tuple(&consts.m_list)));
    text.push_str(&format!("M = {}\n", consts.m_big));
    text.push_str(&format!("M_star = {}\n", consts.m_star));
    text.push_str(&format!("steps = {}\n", traces.len()));
    for (i, tr) in traces.iter().enumerate() {
        text.push_str(&format!("step {}: {}\n", i + 1, tr.render()));
    }
    text.push_str(&format!("final_lambda = {}\n", output::rat_tuple(&mu)));
    text.push_str(&format!("final_alpha = {}\n", output::int_tuple(&alpha)));
    text.push_str(&format!("final_beta = {}\n", output::rat_str(&beta)));

    let obj = json!({
        "orientation": orientation,
        "b_max": consts.b_max.to_string(),
        "d": consts.d.to_string(),
        "m_list": output::json_int_vec(&consts.m_list),
        "m": consts.m_big.to_string(),
        "m_star": consts.m_star.to_string(),
        "steps": traces.iter().map(|t| t.render()).collect::<Vec<_>>(),
        "final_lambda": output::json_rat_vec(&mu),
        "final_alpha": output::json_int_vec(&alpha),
        "final_beta": output::rat_str(&beta),
    });
    Ok(Outcome {
        report: Report { text, json: obj },
        exit: EXIT_OK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Normalize,
    Split,
}

fn map_lines(tau: &UnimodularMap) -> (String, Value) {
    let rows: Vec<String> = tau
        .matrix()
        .iter()
        .map(|row| output::int_tuple(row))
        .collect();
    let text = format!(
        "u = ({})\nv = {}\n",
        rows.join(", "),
        output::int_tuple(tau.shift())
    );
    let json = json!({
        "u": tau.matrix().iter().map(|row| output::json_int_vec(row)).collect::<Vec<_>>(),
        "v": output::json_int_vec(tau.shift()),
    });
    (text, json)
}

/// Applies a structure-revealing unimodular map and prints it with the
/// transformed problem.
pub fn transform(file: &Path, kind: TransformKind, limits: &Limits) -> Result<Outcome, CliError> {
    let problem = parse::parse_problem(file, limits)?;
    let s = match &problem.set {
        ProblemSet::Pure(s) => s.clone(),
        ProblemSet::Mixed(_) => {
            return Err(CliError::Usage(
                "transform needs a pure integer set, not a mixed one".into(),
            ))
        }
    };
    let (tau, mapped_problem, extra_text, extra_json) = match kind {
        TransformKind::Normalize => {
            let (tau, mapped) = transforms::normalize_pointed(&s, limits)?;
            let p2 = tau.apply_poly(&problem.p)?;
            (
                tau,
                Problem {
                    p: p2,
                    set: ProblemSet::Pure(mapped),
                },
                String::new(),
                json!({}),
            )
        }
        TransformKind::Split => {
            let split = transforms::lineality_split(&problem.p, &s, limits)?;
            let extra = format!(
                "n_pointed = {}\nn_free = {}\n",
                split.n_pointed, split.n_free
            );
            let extra_json = json!({
                "n_pointed": split.n_pointed,
                "n_free": split.n_free,
            });
            (
                split.tau,
                Problem {
                    p: split.q,
                    set: ProblemSet::Pure(split.t_pointed),
                },
                extra,
                extra_json,
            )
        }
    };
    let (map_text, map_json) = map_lines(&tau);
    let body = parse::write_problem(&mapped_problem);
    let text = format!("{map_text}{extra_text}\n{body}");
    let mut obj = json!({ "problem": body });
    let map = obj.as_object_mut().expect("object");
    for (k, v) in map_json.as_object().expect("object") {
        map.insert(k.clone(), v.clone());
    }
    for (k, v) in extra_json.as_object().expect("object") {
        map.insert(k.clone(), v.clone());
    }
    Ok(Outcome {
        report: Report { text, json: obj },
        exit: EXIT_OK,
    })
}

/// Runs one seeded property suite and reports pass/fail counts.
pub fn run_verify(
    suite: &str,
    trials: u64,
    seed: u64,
    threads: usize,
    limits: &Limits,
) -> Result<Outcome, CliError> {
    let report = verify::run_suite(suite, trials, seed, threads, limits).map_err(CliError::Usage)?;
    let mut text = String::new();
    text.push_str(&format!("suite = {}\n", report.suite));
    text.push_str(&format!("trials = {}\n", report.trials));
    text.push_str(&format!("passed = {}\n", report.passed));
    text.push_str(&format!("failed = {}\n", report.failures.len()));
    for (trial, msg) in &report.failures {
        text.push_str(&format!("trial {trial}: {msg}\n"));
    }
    let obj = json!({
        "suite": report.suite,
        "trials": report.trials,
        "passed": report.passed,
        "failed": report.failures.len(),
        "failures": report
            .failures
            .iter()
            .map(|(t, m)| json!({ "trial": t, "message": m }))
            .collect::<Vec<_>>(),
    });
    let exit = if report.all_passed() { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome {
        report: Report { text, json: obj },
        exit,
    })
}
