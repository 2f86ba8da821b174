//! Artin-function probes: many refinements against the bounds that
//! promise them.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ideal::{gamma, implication_bound, isolated_singularity_bound, BoundValue};
use crate::poly::Polynomial;
use crate::series::{OrderValue, SeriesVector};

use super::pipeline::{gamma_met, solve_problem, Problem};
use super::SolveConfig;

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    pub solve: SolveConfig,
    /// Constants of the Łojasiewicz inequalities, reported verbatim.
    pub k1: BigRational,
    pub k2: BigRational,
    pub k3: BigRational,
    /// Integer `K'` in the bound `d^(K'^(m·ord H))·(c+1)`.
    pub k_prime: u64,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        let one = BigRational::from_integer(BigInt::from(1));
        ProbeConfig {
            solve: SolveConfig::default(),
            k1: one.clone(),
            k2: one.clone(),
            k3: one,
            k_prime: 2,
            threads: None,
        }
    }
}

fn rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    /// Index of the point in the family.
    pub index: usize,
    pub target_order: u32,
    pub residual_order: OrderValue,
    pub h_order: OrderValue,
    pub s: Option<u32>,
    pub gamma: Option<BoundValue>,
    pub gamma_met: bool,
    /// `d^(K'^(m·ord H))·(c+1)`.
    pub implication_bound: Option<BoundValue>,
    pub implication_met: bool,
    pub success: bool,
    pub achieved_distance: Option<OrderValue>,
    /// Exponent form of the first inequality: `ord f(z̄)` against
    /// `(D + 1)·d^(K'^(m·ord H))` with `D` the achieved distance.
    pub inequality_lhs: u32,
    pub inequality_rhs: Option<BoundValue>,
    pub inequality_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// A bound was met and yet no certificate reached the target order.
    pub defect: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub m: u64,
    pub d: u64,
    #[serde(serialize_with = "rational")]
    pub k1: BigRational,
    #[serde(serialize_with = "rational")]
    pub k2: BigRational,
    #[serde(serialize_with = "rational")]
    pub k3: BigRational,
    pub k_prime: u64,
    pub a_fn: String,
    pub rows: Vec<ProbeRow>,
}

impl ProbeReport {
    pub fn defects(&self) -> impl Iterator<Item = &ProbeRow> {
        self.rows.iter().filter(|r| r.defect)
    }
}

fn at_least(g: &Option<BoundValue>, v: u32) -> bool {
    matches!(g, Some(BoundValue::Exact(b)) if BigUint::from(v) >= *b)
}

fn probe_row(problem: &Problem, zbar: &SeriesVector, index: usize, c: u32, cfg: &ProbeConfig) -> ProbeRow {
    let m = problem.unknowns.len() as u64;
    let d = problem.d;
    let n = cfg.solve.precision.unwrap_or(zbar.precision());
    let mut row = ProbeRow {
        index,
        target_order: c,
        residual_order: OrderValue::AtLeast(0),
        h_order: OrderValue::AtLeast(0),
        s: None,
        gamma: None,
        gamma_met: false,
        implication_bound: None,
        implication_met: false,
        success: false,
        achieved_distance: None,
        inequality_lhs: 0,
        inequality_rhs: None,
        inequality_holds: None,
        error: None,
        defect: false,
    };
    let meas = match problem.measure(zbar, n) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.residual_order = meas.residual;
    row.h_order = meas.h_order;
    row.inequality_lhs = meas.residual.lower_bound();
    if let OrderValue::Finite(h) = meas.h_order {
        let s = h + 1;
        row.s = Some(s);
        row.gamma = BoundValue::of(gamma(m, d, s as u64, c as u64, &cfg.solve.a_fn)).ok();
        row.gamma_met = row.gamma.as_ref().is_some_and(|g| gamma_met(g, meas.residual));
        row.implication_bound = BoundValue::of(implication_bound(d, m, h as u64, c as u64, cfg.k_prime)).ok();
        row.implication_met = at_least(&row.implication_bound, meas.residual.lower_bound());
    }
    let mut solve = cfg.solve.clone();
    solve.target_order = c;
    match solve_problem(problem, zbar, &solve) {
        Ok(cert) => {
            let dist = cert.min_distance();
            row.success = dist.lower_bound() >= c;
            row.achieved_distance = Some(dist);
            if let (OrderValue::Finite(h), OrderValue::Finite(dd)) = (meas.h_order, dist) {
                // D + 1 plays the role of c + 1 in the bound
                row.inequality_rhs = BoundValue::of(implication_bound(d, m, h as u64, dd as u64, cfg.k_prime)).ok();
                row.inequality_holds = match &row.inequality_rhs {
                    Some(BoundValue::Exact(b)) => Some(BigUint::from(row.inequality_lhs) <= *b),
                    Some(BoundValue::TooLarge) => Some(true),
                    None => None,
                };
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row.defect = (row.gamma_met || row.implication_met) && !row.success;
    row
}

/// Runs the solver on every point of `family` against every target order,
/// one row per pair, rows in parallel.
pub fn artin_probe(
    fs: &[Polynomial],
    unknowns: &[&str],
    family: &[SeriesVector],
    targets: &[u32],
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    if cfg.k_prime < 2 {
        return Err(Error::Config("the constant K' must be at least 2".into()));
    }
    let problem = Problem::new(fs, unknowns)?;
    let jobs: Vec<(usize, &SeriesVector, u32)> = family
        .iter()
        .enumerate()
        .flat_map(|(i, z)| targets.iter().map(move |&c| (i, z, c)))
        .collect();
    let slots: Vec<Mutex<Option<ProbeRow>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = cfg
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, z, c)) = jobs.get(k) else { break };
                let row = probe_row(&problem, z, i, c, cfg);
                *slots[k].lock().unwrap() = Some(row);
            });
        }
    });
    let rows = slots.into_iter().map(|s| s.into_inner().unwrap().expect("every job ran")).collect();
    Ok(ProbeReport {
        m: problem.unknowns.len() as u64,
        d: problem.d,
        k1: cfg.k1.clone(),
        k2: cfg.k2.clone(),
        k3: cfg.k3.clone(),
        k_prime: cfg.k_prime,
        a_fn: cfg.solve.a_fn.to_string(),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthPoint {
    pub c: u64,
    pub bits: u64,
    pub ln_ln: f64,
}

/// Fit of `ln ln B(c)` against `c` for the isolated-singularity bound.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthAudit {
    pub d: u64,
    pub m: u64,
    pub k: u64,
    pub k1: u64,
    pub points: Vec<GrowthPoint>,
    pub slope: f64,
    /// `m·k·ln K1`, the limit slope once `ln(c+1)` is negligible.
    pub expected_slope: f64,
    pub r_squared: f64,
    pub monotone: bool,
}

impl GrowthAudit {
    pub fn passes(&self) -> bool {
        self.monotone && self.r_squared >= 0.99 && self.slope > 0.0
    }
}

/// Natural logarithm of a positive big integer.
pub(crate) fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().expect("fits").max(1) as f64).ln();
    }
    let top = (v >> (bits - 64)).to_u64().expect("fits") as f64;
    top.ln() + (bits - 64) as f64 * std::f64::consts::LN_2
}

/// Evaluates the isolated-singularity bound at `c = 1..=c_max` and fits a
/// line through `ln ln B(c)`.
pub fn isolated_growth_audit(d: u64, m: u64, k: u64, k1: u64, c_max: u64) -> Result<GrowthAudit> {
    if k1 < 2 || d < 2 || c_max < 2 {
        return Err(Error::Config("the growth audit needs d, K1 ≥ 2 and at least two orders".into()));
    }
    let mut values = Vec::new();
    let mut points = Vec::new();
    for c in 1..=c_max {
        let b = isolated_singularity_bound(d, m, k, c, k1)?;
        points.push(GrowthPoint { c, bits: b.bits(), ln_ln: ln_big(&b).ln() });
        values.push(b);
    }
    let monotone = values.windows(2).all(|w| w[1] > w[0]);
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.c as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.ln_ln).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.c as f64 - mx) * (p.ln_ln - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.c as f64 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.ln_ln - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(GrowthAudit {
        d,
        m,
        k,
        k1,
        points,
        slope,
        expected_slope: (m * k) as f64 * (k1 as f64).ln(),
        r_squared,
        monotone,
    })
}
