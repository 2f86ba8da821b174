use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use artin_approx::ideal::{bound_calculators, elkik_ideal, AFn};
use artin_approx::solver::{approximate_solve, artin_probe, tougeron_refine, ProbeConfig, ProbeReport, RefinementCertificate, SolveConfig, Strategy};
use artin_approx::weierstrass::{parse_distinguished, prepare, w_divide, DistinguishedPolynomial};
use artin_approx::{Error, Ideal, MonomialOrder, Polynomial, Result, Ring, TruncatedSeries};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::problem::ProblemFile;
use crate::report::{ErrorInfo, RunReport, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Elkik,
    Colon,
    Groebner,
    Prepare,
    Divide,
    Refine,
    Solve,
    Bounds,
    Probe,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Elkik,
        Command::Colon,
        Command::Groebner,
        Command::Prepare,
        Command::Divide,
        Command::Refine,
        Command::Solve,
        Command::Bounds,
        Command::Probe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Elkik => "elkik",
            Command::Colon => "colon",
            Command::Groebner => "groebner",
            Command::Prepare => "prepare",
            Command::Divide => "divide",
            Command::Refine => "refine",
            Command::Solve => "solve",
            Command::Bounds => "bounds",
            Command::Probe => "probe",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Command-line values that replace the file's.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub target_order: Option<u32>,
    pub strategy: Option<Strategy>,
    pub seed: Option<u64>,
    pub enforce_gamma: bool,
}

impl Overrides {
    fn apply(&self, f: &mut ProblemFile) {
        if let Some(v) = self.precision {
            f.set("precision", v.to_string());
        }
        if let Some(v) = self.target_order {
            f.set("target_order", v.to_string());
        }
        if let Some(v) = self.strategy {
            f.set("strategy", v.to_string());
        }
        if let Some(v) = self.seed {
            f.set("seed", v.to_string());
        }
        if self.enforce_gamma {
            f.set("enforce_gamma", "true".into());
        }
    }
}

struct Outcome {
    status: Status,
    outputs: Value,
    text: String,
}

/// Runs `cmd` on the problem file text `src`.
pub fn run(cmd: Command, src: &str, ov: &Overrides) -> RunReport {
    let start = Instant::now();
    let mut inputs = Default::default();
    let result = ProblemFile::parse(src).and_then(|mut f| {
        ov.apply(&mut f);
        inputs = f.echo();
        dispatch(cmd, &f)
    });
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match result {
        Ok(o) => RunReport {
            command: cmd.name().into(),
            status: o.status,
            exit_code: o.status.exit_code(),
            inputs,
            outputs: o.outputs,
            error: None,
            elapsed_ms,
            text: o.text,
        },
        Err(e) => {
            let status = Status::of_error(&e);
            RunReport {
                command: cmd.name().into(),
                status,
                exit_code: status.exit_code(),
                inputs,
                outputs: Value::Null,
                error: Some(ErrorInfo::of(&e)),
                elapsed_ms,
                text: format!("error: {e}\n"),
            }
        }
    }
}

fn dispatch(cmd: Command, f: &ProblemFile) -> Result<Outcome> {
    match cmd {
        Command::Elkik => elkik(f),
        Command::Colon => colon(f),
        Command::Groebner => groebner(f),
        Command::Prepare => cmd_prepare(f),
        Command::Divide => divide(f),
        Command::Refine => refine(f),
        Command::Solve => solve(f),
        Command::Bounds => bounds(f),
        Command::Probe => probe(f),
    }
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn list(text: &mut String, title: &str, items: &[String]) {
    let _ = writeln!(text, "{title} ({}):", items.len());
    for s in items {
        let _ = writeln!(text, "  {s}");
    }
}

fn ideal_of(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Ideal> {
    Ideal::new(ring, gens)
}

/// The ideal `I` of an elkik file: `modulo` when given, else the equations.
pub(crate) fn modulus(f: &ProblemFile, ring: &Arc<Ring>) -> Result<Ideal> {
    let gens = if f.has("modulo") { f.polynomials(ring, "modulo")? } else { f.equations(ring)? };
    ideal_of(ring, gens)
}

/// Differentiation variables: the unknowns, else every variable.
pub(crate) fn diff_vars(f: &ProblemFile, ring: &Arc<Ring>) -> Result<Vec<String>> {
    let u = f.unknowns()?;
    Ok(if u.is_empty() { ring.vars().to_vec() } else { u })
}

/// Verdicts against `H + I`: equality with `compare + I` and, for each
/// `member`, ideal and radical membership.
pub(crate) fn verdicts(f: &ProblemFile, ring: &Arc<Ring>, h: &Ideal, i: &Ideal) -> Result<Value> {
    let hi = h.sum(i)?;
    let mut out = serde_json::Map::new();
    if f.has("compare") {
        let c = ideal_of(ring, f.polynomials(ring, "compare")?)?.sum(i)?;
        out.insert("equal_to_compare".into(), json!(hi.equals(&c)?));
    }
    let mut members = Vec::new();
    for p in f.polynomials(ring, "member")? {
        members.push(json!({
            "polynomial": p.to_string(),
            "in_ideal": hi.contains(&p)?,
            "in_radical": hi.radical_member(&p)?,
        }));
    }
    if !members.is_empty() {
        out.insert("members".into(), Value::Array(members));
    }
    Ok(Value::Object(out))
}

fn elkik(f: &ProblemFile) -> Result<Outcome> {
    let ring = f.equation_ring()?;
    let fs = f.equations(&ring)?;
    let vars = diff_vars(f, &ring)?;
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let h = elkik_ideal(&fs, &refs)?;
    let i = modulus(f, &ring)?;
    let gens = strings(&h.generators);
    let v = verdicts(f, &ring, &h.ideal(), &i)?;
    let mut text = String::new();
    list(&mut text, "Elkik ideal generators", &gens);
    if let Some(e) = v.get("equal_to_compare") {
        let _ = writeln!(text, "H + I = compare + I: {}", yes(e));
    }
    if let Some(ms) = v.get("members").and_then(Value::as_array) {
        for m in ms {
            let _ = writeln!(
                text,
                "{}: in H + I: {}, in rad(H + I): {}",
                m["polynomial"].as_str().unwrap_or(""),
                yes(&m["in_ideal"]),
                yes(&m["in_radical"])
            );
        }
    }
    Ok(Outcome {
        status: Status::Ok,
        outputs: json!({
            "differentiation_vars": vars,
            "generators": gens,
            "components": h.summary_json(),
            "modulo": strings(i.generators()),
            "verdicts": v,
        }),
        text,
    })
}

fn yes(v: &Value) -> &'static str {
    if v.as_bool() == Some(true) {
        "yes"
    } else {
        "no"
    }
}

fn colon(f: &ProblemFile) -> Result<Outcome> {
    let ring = f.equation_ring()?;
    let j = ideal_of(&ring, f.polynomials(&ring, "ideal")?)?;
    let i = ideal_of(&ring, f.polynomials(&ring, "by")?)?;
    let q = j.colon(&i)?;
    let gens = strings(q.generators());
    let mut text = String::new();
    list(&mut text, "colon ideal generators", &gens);
    Ok(Outcome { status: Status::Ok, outputs: json!({ "generators": gens, "unit": q.is_unit() }), text })
}

pub(crate) fn order(f: &ProblemFile) -> Result<MonomialOrder> {
    Ok(f.parsed::<MonomialOrder>("order")?.unwrap_or_default())
}

fn groebner(f: &ProblemFile) -> Result<Outcome> {
    let ring = f.equation_ring()?;
    let ord = order(f)?;
    let i = Ideal::with_order(&ring, f.polynomials(&ring, "ideal")?, ord)?;
    let basis = strings(i.basis());
    let mut text = String::new();
    list(&mut text, "reduced Groebner basis", &basis);
    Ok(Outcome { status: Status::Ok, outputs: json!({ "order": format!("{ord:?}"), "basis": basis }), text })
}

fn one_series(f: &ProblemFile, ring: &Arc<Ring>, key: &str) -> Result<TruncatedSeries> {
    let e = f.require(key)?;
    f.series(ring, &e.value, e.line, e.column)
}

fn bivariate(f: &ProblemFile) -> Result<Arc<Ring>> {
    let r = f.series_ring()?;
    if r.nvars() != 2 {
        return Err(Error::parse(0, 0, "preparation and division need two series variables"));
    }
    Ok(r)
}

fn distinguished_json(a: &DistinguishedPolynomial) -> Value {
    json!({ "r": a.r(), "display": a.to_string(), "coefficients": a.coeffs() })
}

fn cmd_prepare(f: &ProblemFile) -> Result<Outcome> {
    let ring = bivariate(f)?;
    let u = one_series(f, &ring, "series")?;
    let n = f.parsed::<u32>("precision")?.unwrap_or(u.precision());
    let (unit, a) = prepare(&u, n)?;
    let text = format!("y-order r = {}\nunit: {unit}\ndistinguished: {a}\n", a.r());
    Ok(Outcome {
        status: Status::Ok,
        outputs: json!({
            "precision": n,
            "unit": unit,
            "unit_display": unit.to_string(),
            "distinguished": distinguished_json(&a),
        }),
        text,
    })
}

fn divisor(f: &ProblemFile, ring: &Arc<Ring>, n: u32) -> Result<DistinguishedPolynomial> {
    match (f.scalar("distinguished")?, f.scalar("divisor")?) {
        (Some(e), None) => parse_distinguished(ring, &e.value).map_err(|err| match err {
            Error::Parse { column, message, .. } => Error::parse(e.line, e.column + column - 1, message),
            err => err,
        }),
        (None, Some(e)) => Ok(prepare(&f.series(ring, &e.value, e.line, e.column)?, n)?.1),
        _ => Err(Error::parse(0, 0, "give exactly one of `divisor` and `distinguished`")),
    }
}

fn divide(f: &ProblemFile) -> Result<Outcome> {
    let ring = bivariate(f)?;
    let g = one_series(f, &ring, "series")?;
    let n = f.parsed::<u32>("precision")?.unwrap_or(g.precision());
    let a = divisor(f, &ring, n)?;
    let (q, rem) = w_divide(&g, &a, n)?;
    let mut text = format!("divisor: {a}\nquotient: {q}\n");
    for (i, c) in rem.iter().enumerate() {
        let _ = writeln!(text, "remainder y^{i}: {c}");
    }
    Ok(Outcome {
        status: Status::Ok,
        outputs: json!({
            "precision": n,
            "divisor": distinguished_json(&a),
            "quotient": q,
            "quotient_display": q.to_string(),
            "remainder": rem,
        }),
        text,
    })
}

pub(crate) fn target(f: &ProblemFile) -> Result<u32> {
    Ok(f.parsed::<u32>("target_order")?.unwrap_or(1))
}

fn certificate_text(cert: &RefinementCertificate, unknowns: &[String]) -> String {
    let mut text = String::new();
    let state = match cert.status {
        artin_approx::solver::CertificateStatus::CertifiedToPrecision => "certified",
        artin_approx::solver::CertificateStatus::Stalled => "stalled",
        artin_approx::solver::CertificateStatus::HypothesisViolated => "hypothesis violated",
    };
    let _ = writeln!(text, "status: {state} modulo m^{}", cert.precision);
    let _ = writeln!(text, "target order c = {}, iterations: {}", cert.target_order, cert.iterations());
    let d: Vec<String> = cert.distance_orders.iter().map(|o| o.to_string()).collect();
    let _ = writeln!(text, "distance orders: [{}]", d.join(", "));
    let _ = writeln!(text, "refined point:");
    for (u, z) in unknowns.iter().zip(cert.refined.entries()) {
        let _ = writeln!(text, "  {u} = {z}");
    }
    if let Some(p) = &cert.pipeline {
        let _ = writeln!(
            text,
            "ord H(z) = {}, s = {}, gamma = {} ({}), r = {}",
            p.h_order,
            p.s,
            p.gamma,
            if p.gamma_met { "met" } else { "not met" },
            p.r
        );
    }
    text
}

fn certificate_status(cert: &RefinementCertificate) -> Status {
    match cert.status {
        artin_approx::solver::CertificateStatus::CertifiedToPrecision => Status::Certified,
        artin_approx::solver::CertificateStatus::Stalled => Status::Stalled,
        artin_approx::solver::CertificateStatus::HypothesisViolated => Status::HypothesisViolated,
    }
}

fn refine(f: &ProblemFile) -> Result<Outcome> {
    let ring = f.equation_ring()?;
    let sring = f.series_ring()?;
    let fs = f.equations(&ring)?;
    let unknowns = f.unknowns()?;
    let refs: Vec<&str> = unknowns.iter().map(String::as_str).collect();
    let zbar = f.point(&sring)?;
    let rows = f.indices("rows")?.unwrap_or_else(|| (0..fs.len()).collect());
    let cols = f.indices("cols")?.unwrap_or_else(|| (0..unknowns.len()).collect());
    if let Some(&i) = rows.iter().find(|&&i| i >= fs.len()) {
        return Err(Error::parse(0, 0, format!("row {} beyond the {} equations", i + 1, fs.len())));
    }
    if let Some(&j) = cols.iter().find(|&&j| j >= unknowns.len()) {
        return Err(Error::parse(0, 0, format!("column {} beyond the {} unknowns", j + 1, unknowns.len())));
    }
    let n = f.parsed::<u32>("precision")?.unwrap_or(zbar.precision());
    let cert = tougeron_refine(&fs, &refs, &rows, &cols, &zbar, target(f)?, n)?;
    Ok(Outcome { status: certificate_status(&cert), text: certificate_text(&cert, &unknowns), outputs: json!({ "certificate": cert }) })
}

pub(crate) fn solve_config(f: &ProblemFile) -> Result<SolveConfig> {
    let d = SolveConfig::default();
    Ok(SolveConfig {
        precision: f.parsed("precision")?,
        target_order: target(f)?,
        a_fn: f.parsed::<AFn>("a_fn")?.unwrap_or(d.a_fn),
        strategy: f.parsed::<Strategy>("strategy")?.unwrap_or(d.strategy),
        seed: f.parsed("seed")?.unwrap_or(d.seed),
        jets: d.jets,
        enforce_gamma: f.parsed("enforce_gamma")?.unwrap_or(false),
    })
}

fn solve(f: &ProblemFile) -> Result<Outcome> {
    let ring = f.equation_ring()?;
    let sring = f.series_ring()?;
    let fs = f.equations(&ring)?;
    let unknowns = f.unknowns()?;
    let refs: Vec<&str> = unknowns.iter().map(String::as_str).collect();
    let zbar = f.point(&sring)?;
    let cfg = solve_config(f)?;
    let cert = approximate_solve(&fs, &refs, &zbar, &cfg)?;
    Ok(Outcome { status: certificate_status(&cert), text: certificate_text(&cert, &unknowns), outputs: json!({ "certificate": cert }) })
}

fn required<T: std::str::FromStr>(f: &ProblemFile, key: &str) -> Result<T> {
    f.parsed(key)?.ok_or_else(|| Error::parse(0, 0, format!("missing key `{key}`")))
}

fn bounds(f: &ProblemFile) -> Result<Outcome> {
    let m: u64 = required(f, "m")?;
    let d: u64 = required(f, "d")?;
    let n: u64 = f.parsed("n")?.unwrap_or(1);
    let s: u64 = f.parsed("s")?.unwrap_or(1);
    let c: u64 = f.parsed("target_order")?.unwrap_or(1);
    let a = f.parsed::<AFn>("a_fn")?.unwrap_or_default();
    let k: u64 = f.parsed("k_base")?.unwrap_or(2);
    let b = bound_calculators(m, d, n, s, c, &a, k)?;
    let mut text = format!("m = {m}, d = {d}, n = {n}, s = {s}, c = {c}, a = {a}, K = {k}\n");
    for (name, v) in [
        ("colon degree bound", &b.colon_degree_bound),
        ("Elkik degree bound", &b.elkik_degree_bound),
        ("power exponent", &b.power_exponent),
        ("gamma", &b.gamma),
        ("beta estimate", &b.beta_estimate),
        ("doubly exponential bound", &b.doubly_exponential_bound),
    ] {
        let _ = writeln!(text, "{name:<26}{v}");
    }
    Ok(Outcome { status: Status::Ok, outputs: json!({ "bounds": b }), text })
}

pub(crate) fn probe_config(f: &ProblemFile) -> Result<ProbeConfig> {
    let d = ProbeConfig::default();
    Ok(ProbeConfig {
        solve: solve_config(f)?,
        k1: f.parsed::<BigRational>("K1")?.unwrap_or(d.k1),
        k2: f.parsed::<BigRational>("K2")?.unwrap_or(d.k2),
        k3: f.parsed::<BigRational>("K3")?.unwrap_or(d.k3),
        k_prime: f.parsed("K_prime")?.unwrap_or(d.k_prime),
        threads: f.parsed("threads")?,
    })
}

pub(crate) fn probe_report(f: &ProblemFile) -> Result<(ProbeReport, Vec<u32>)> {
    let ring = f.equation_ring()?;
    let sring = f.series_ring()?;
    let fs = f.equations(&ring)?;
    let unknowns = f.unknowns()?;
    let refs: Vec<&str> = unknowns.iter().map(String::as_str).collect();
    let family = f.family(&sring)?;
    let mut targets = f.numbers("targets")?;
    if targets.is_empty() {
        targets.push(target(f)?);
    }
    let cfg = probe_config(f)?;
    Ok((artin_probe(&fs, &refs, &family, &targets, &cfg)?, targets))
}

fn probe(f: &ProblemFile) -> Result<Outcome> {
    let (rep, _) = probe_report(f)?;
    let mut text = format!(
        "m = {}, d = {}, a = {}, K1 = {}, K2 = {}, K3 = {}, K' = {}\n",
        rep.m, rep.d, rep.a_fn, rep.k1, rep.k2, rep.k3, rep.k_prime
    );
    let _ = writeln!(text, "{:>5} {:>3} {:>8} {:>6} {:>10} {:>5} {:>8} {:>7}", "point", "c", "ord f", "ord H", "gamma", "met", "success", "defect");
    for r in &rep.rows {
        let g = r.gamma.as_ref().map_or("-".into(), |g| g.to_string());
        let _ = writeln!(
            text,
            "{:>5} {:>3} {:>8} {:>6} {:>10} {:>5} {:>8} {:>7}",
            r.index + 1,
            r.target_order,
            r.residual_order.to_string(),
            r.h_order.to_string(),
            g,
            if r.gamma_met { "yes" } else { "no" },
            if r.success { "yes" } else { "no" },
            if r.defect { "yes" } else { "no" }
        );
    }
    let defects = rep.defects().count();
    let _ = writeln!(text, "defects: {defects}");
    let status = if defects == 0 { Status::Ok } else { Status::Defects };
    Ok(Outcome { status, outputs: json!({ "probe": rep }), text })
}
