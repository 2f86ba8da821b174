//! End-to-end refinement: hypothesis check, minor selection, reduction
//! to one variable, Newton refinement and verification.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result, Stage, StageExt};
use crate::ideal::{elkik_ideal, gamma, BoundValue, ElkikIdeal};
use crate::poly::Polynomial;
use crate::series::{ideal_order, Evaluator, OrderValue, SeriesVector, TruncatedSeries};
use crate::weierstrass::{prepare, regularize, w_divide};

use super::one_var::{build_one_var_system, reconstruct, solve_one_var, solve_univariate, OneVarSummary};
use super::selection::{select_minor, MinorSelection};
use super::tougeron::{tougeron_refine, CertificateStatus, RefinementCertificate};
use super::SolveConfig;

/// What the pipeline measured and chose on the way.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineInfo {
    pub m: u64,
    pub d: u64,
    pub h_order: u32,
    pub s: u32,
    pub input_residual_order: OrderValue,
    pub gamma: BoundValue,
    pub gamma_met: bool,
    pub selection: MinorSelection,
    pub r: u32,
    /// True when the point was refined directly (unit `δ²(z̄)` or an
    /// already exact point).
    pub direct: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_change: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_var: Option<OneVarSummary>,
}

/// Equations, unknowns and their Elkik ideal, shared by many runs.
pub struct Problem {
    pub fs: Vec<Polynomial>,
    pub unknowns: Vec<String>,
    pub elkik: ElkikIdeal,
    /// Degree bound `d ≥ 2`.
    pub d: u64,
}

impl Problem {
    pub fn new(fs: &[Polynomial], unknowns: &[&str]) -> Result<Problem> {
        if fs.is_empty() || unknowns.is_empty() {
            return Err(Error::Dimension("need at least one equation and one unknown".into()));
        }
        let elkik = elkik_ideal(fs, unknowns).stage(Stage::Hypothesis)?;
        let d = fs.iter().filter_map(|f| f.degree().finite()).max().unwrap_or(0).max(2) as u64;
        Ok(Problem {
            fs: fs.to_vec(),
            unknowns: unknowns.iter().map(|s| s.to_string()).collect(),
            elkik,
            d,
        })
    }

    pub fn unknown_refs(&self) -> Vec<&str> {
        self.unknowns.iter().map(String::as_str).collect()
    }

    /// `ord H(z̄)`, `s` and `ord f(z̄)` at precision `n`.
    pub fn measure(&self, zbar: &SeriesVector, n: u32) -> Result<Measurements> {
        let refs = self.unknown_refs();
        let z = zbar.lift(n);
        let h = ideal_order(&self.elkik.generators, &z, &refs)?;
        let residual = ideal_order(&self.fs, &z, &refs)?;
        Ok(Measurements { h_order: h, residual })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Measurements {
    pub h_order: OrderValue,
    pub residual: OrderValue,
}

pub(crate) fn gamma_met(g: &BoundValue, residual: OrderValue) -> bool {
    match g {
        BoundValue::Exact(g) => BigUint::from(residual.lower_bound()) >= *g,
        BoundValue::TooLarge => false,
    }
}

/// Refines `zbar` to a solution of `fs` within `m^c`, certified modulo
/// `m^N` (`N` from the configuration, else the precision of `zbar`).
pub fn approximate_solve(fs: &[Polynomial], unknowns: &[&str], zbar: &SeriesVector, cfg: &SolveConfig) -> Result<RefinementCertificate> {
    let problem = Problem::new(fs, unknowns)?;
    solve_problem(&problem, zbar, cfg)
}

pub fn solve_problem(problem: &Problem, zbar: &SeriesVector, cfg: &SolveConfig) -> Result<RefinementCertificate> {
    let ns = zbar.ring().nvars();
    if ns == 0 || ns > 2 {
        return Err(Error::Dimension("points live over k[[x]] or k[[x,y]]".into()));
    }
    if zbar.len() != problem.unknowns.len() {
        return Err(Error::Dimension(format!(
            "{} unknowns for a point with {} entries",
            problem.unknowns.len(),
            zbar.len()
        )));
    }
    let c = cfg.target_order;
    if c == 0 {
        return Err(Error::Config("the target order c must be at least 1".into()));
    }
    let n = cfg.precision.unwrap_or(zbar.precision());
    let meas = problem.measure(zbar, n).stage(Stage::Hypothesis)?;
    let OrderValue::Finite(ho) = meas.h_order else {
        return Err(Error::HypothesisViolated {
            message: format!("H(z̄) vanishes modulo m^{n}; the point meets the singular locus to precision"),
            measured_order: None,
        }
        .at(Stage::Hypothesis));
    };
    let s = ho + 1;
    let m = problem.unknowns.len() as u64;
    let g = BoundValue::of(gamma(m, problem.d, s as u64, c as u64, &cfg.a_fn)).stage(Stage::Hypothesis)?;
    let met = gamma_met(&g, meas.residual);
    let insufficient = || {
        format!(
            "insufficient residual order: ord f(z̄) = {} below γ(m,d,s,c) = {g} (m = {m}, d = {}, s = {s}, c = {c})",
            meas.residual, problem.d
        )
    };
    if cfg.enforce_gamma && !met {
        return Err(Error::HypothesisViolated { message: insufficient(), measured_order: meas.residual.finite() }
            .at(Stage::Hypothesis));
    }
    let info = PipelineInfo {
        m,
        d: problem.d,
        h_order: ho,
        s,
        input_residual_order: meas.residual,
        gamma: g.clone(),
        gamma_met: met,
        selection: select_minor(&problem.elkik, &problem.unknown_refs(), &zbar.lift(n), s)
            .stage(Stage::MinorSelection)?,
        r: 0,
        direct: false,
        linear_change: None,
        one_var: None,
    };
    match run(problem, zbar, cfg, n, info) {
        Err(e) if !met && !matches!(e.root(), Error::Capacity(_) | Error::Parse { .. } | Error::Config(_)) => {
            Err(Error::HypothesisViolated { message: format!("{}; {e}", insufficient()), measured_order: meas.residual.finite() })
        }
        other => other,
    }
}

fn run(problem: &Problem, zbar: &SeriesVector, cfg: &SolveConfig, n: u32, mut info: PipelineInfo) -> Result<RefinementCertificate> {
    let refs = problem.unknown_refs();
    let fs = &problem.fs;
    let c = cfg.target_order;
    let s = info.s;
    let sel = info.selection.clone();
    let w = sel.delta_order;
    let r = sel.r();
    info.r = r;
    let nt = n + s;
    let fe: Vec<Polynomial> = sel.rows.iter().map(|&i| fs[i].clone()).collect();
    let solved = !ideal_order(&fe, &zbar.lift(nt), &refs)?.is_finite();
    let sring = zbar.ring().clone();

    let cert = if r == 0 || solved {
        info.direct = true;
        tougeron_refine(fs, &refs, &sel.rows, &sel.cols, zbar, c, nt).stage(Stage::Refinement)?
    } else if sring.nvars() == 1 {
        let wp = nt + 2 * r + c + 2 * s + 4;
        let sol = solve_univariate(fs, &refs, &zbar.lift(wp), c, cfg.strategy, cfg.jets).stage(Stage::OneVariableSolve)?;
        tougeron_refine(fs, &refs, &sel.rows, &sel.cols, &sol, c, nt).stage(Stage::Refinement)?
    } else {
        let wb = nt + 2 * r + c + 2 * s + 4;
        let zb = zbar.lift(wb);
        let d2 = &sel.delta * &sel.delta;
        let u = Evaluator::new(d2.ring(), &zb, &refs)?.eval(&d2)?;
        let (change, u2) = regularize(&u, cfg.seed).stage(Stage::Regularization)?;
        let (xv, yv) = (sring.vars()[0].clone(), sring.vars()[1].clone());
        let fs2: Vec<Polynomial> =
            fs.iter().map(|f| change.apply_polynomial(f, &xv, &yv)).collect::<Result<_>>().stage(Stage::Regularization)?;
        let delta2 = change.apply_polynomial(&sel.delta, &xv, &yv).stage(Stage::Regularization)?;
        if !change.is_identity() {
            info.linear_change = Some(change.to_string());
        }
        let (_unit, dist) = prepare(&u2, wb).stage(Stage::Preparation)?;
        let mut quotients = Vec::with_capacity(zb.len());
        let mut rems = Vec::with_capacity(zb.len());
        for z in zb.entries() {
            let (q, rem) = w_divide(&change.apply_series(z), &dist, wb).stage(Stage::Division)?;
            quotients.push(q);
            rems.push(rem);
        }
        let sys = build_one_var_system(&fs2, &refs, &sel.rows, &delta2, &dist, &rems, problem.d as u32)
            .stage(Stage::OneVariableSystem)?;
        let summary = sys.summary().stage(Stage::OneVariableSystem)?;
        if let Some((label, o)) = summary.residual_orders.iter().find(|(l, o)| l.starts_with('G') && o.is_finite()) {
            return Err(Error::Precision(format!("{label} does not vanish at the prepared point (order {o})"))
                .at(Stage::OneVariableSystem));
        }
        info.one_var = Some(summary);
        let sol = solve_one_var(&sys, c + 2 * s, cfg.strategy, cfg.jets).stage(Stage::OneVariableSolve)?;
        let zz = reconstruct(&sys, &sol, &quotients, &sring).stage(Stage::Reconstruction)?;
        let mut cert = tougeron_refine(&fs2, &refs, &sel.rows, &sel.cols, &zz, c, nt).stage(Stage::Refinement)?;
        let back = change.inverse();
        let entries: Vec<TruncatedSeries> = cert.refined.entries().iter().map(|z| back.apply_series(z)).collect();
        cert.refined = SeriesVector::new(entries)?;
        cert
    };
    if !cert.is_certified() {
        return Err(Error::Unsupported(format!(
            "Newton refinement stalled with residual orders {:?}",
            cert.trace.iter().map(|o| o.to_string()).collect::<Vec<_>>()
        ))
        .at(Stage::Refinement));
    }
    verify(problem, zbar, cert, n, w, info).stage(Stage::Verification)
}

/// Re-checks the refined point independently of the refinement state.
fn verify(
    problem: &Problem,
    zbar: &SeriesVector,
    cert: RefinementCertificate,
    n: u32,
    w: u32,
    info: PipelineInfo,
) -> Result<RefinementCertificate> {
    let refs = problem.unknown_refs();
    let c = cert.target_order;
    let zt = cert.refined.truncate(n);
    let mut ev = Evaluator::new(problem.fs[0].ring(), &zt, &refs)?;
    for (i, f) in problem.fs.iter().enumerate() {
        let o = ev.eval(f)?.order();
        if o.is_finite() {
            return Err(Error::Precision(format!("equation {} has order {o} at the refined point, not ≥ {n}", i + 1)));
        }
    }
    let k_after = ev.eval(&info.selection.k_e)?.order();
    if k_after != OrderValue::Finite(info.selection.k_order) {
        return Err(Error::Precision(format!(
            "ord k_E changed from {} to {k_after} under refinement",
            info.selection.k_order
        )));
    }
    let z0 = zbar.lift(n);
    let distance_orders: Vec<OrderValue> = zt.entries().iter().zip(z0.entries()).map(|(a, b)| (a - b).order()).collect();
    if let Some((j, o)) = distance_orders.iter().enumerate().find(|(_, o)| o.lower_bound() < c) {
        return Err(Error::Unsupported(format!("coordinate {} moved at order {o}, below c = {c}", j + 1)));
    }
    Ok(RefinementCertificate {
        status: CertificateStatus::CertifiedToPrecision,
        precision: n,
        target_order: c,
        refined: zt,
        residual_order: OrderValue::AtLeast(n),
        distance_orders,
        trace: cert.trace,
        delta_order: w,
        in_delta_ideal: cert.in_delta_ideal,
        pipeline: Some(info),
    })
}
