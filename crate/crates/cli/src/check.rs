//! Re-validation of a machine-readable report against its echoed inputs.

use std::sync::Arc;

use artin_approx::ideal::{bound_calculators, elkik_ideal, AFn};
use artin_approx::poly::parse_polynomial;
use artin_approx::series::evaluate;
use artin_approx::weierstrass::{recompose, DistinguishedPolynomial, x_ring};
use artin_approx::{Ideal, OrderValue, Polynomial, Ring, SeriesVector, TruncatedSeries};
use serde_json::Value;

use crate::commands::{self, Command};
use crate::problem::ProblemFile;
use crate::report::{RunReport, Status};

type Check = std::result::Result<(), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Parses a report and re-derives its claims from the echoed inputs.
pub fn check_report(text: &str) -> Check {
    let rep: RunReport = serde_json::from_str(text).map_err(|e| format!("not a report: {e}"))?;
    let cmd = Command::from_name(&rep.command).ok_or_else(|| format!("unknown command `{}`", rep.command))?;
    ensure(rep.exit_code == rep.status.exit_code(), "exit code disagrees with the status")?;
    if let Some(e) = &rep.error {
        ensure(rep.outputs.is_null(), "a failed run carries outputs")?;
        ensure(!e.message.is_empty(), "empty error message")?;
        return Ok(());
    }
    let f = ProblemFile::from_echo(&rep.inputs).map_err(err)?;
    let out = &rep.outputs;
    match cmd {
        Command::Elkik => elkik(&f, out),
        Command::Colon => colon(&f, out),
        Command::Groebner => groebner(&f, out),
        Command::Prepare => prepared(&f, out),
        Command::Divide => divided(&f, out),
        Command::Refine | Command::Solve => certificate(&f, out, rep.status),
        Command::Bounds => bounds(&f, out),
        Command::Probe => probe(&f, out),
    }
}

fn polys(ring: &Arc<Ring>, v: &Value) -> std::result::Result<Vec<Polynomial>, String> {
    v.as_array()
        .ok_or("expected a list of polynomials")?
        .iter()
        .map(|p| parse_polynomial(ring, p.as_str().ok_or("polynomials are strings")?).map_err(err))
        .collect()
}

fn elkik(f: &ProblemFile, out: &Value) -> Check {
    let ring = f.equation_ring().map_err(err)?;
    let fs = f.equations(&ring).map_err(err)?;
    let vars = commands::diff_vars(f, &ring).map_err(err)?;
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let gens = polys(&ring, &out["generators"])?;
    let fresh = elkik_ideal(&fs, &refs).map_err(err)?;
    let reported = Ideal::new(&ring, gens).map_err(err)?;
    ensure(reported.equals(&fresh.ideal()).map_err(err)?, "generators do not span the Elkik ideal")?;
    let i = commands::modulus(f, &ring).map_err(err)?;
    let v = commands::verdicts(f, &ring, &reported, &i).map_err(err)?;
    ensure(v == out["verdicts"], "verdicts differ on recomputation")
}

fn colon(f: &ProblemFile, out: &Value) -> Check {
    let ring = f.equation_ring().map_err(err)?;
    let j = Ideal::new(&ring, f.polynomials(&ring, "ideal").map_err(err)?).map_err(err)?;
    let i = f.polynomials(&ring, "by").map_err(err)?;
    let gens = polys(&ring, &out["generators"])?;
    for g in &gens {
        for q in &i {
            ensure(j.contains(&(g * q)).map_err(err)?, format!("{g} does not multiply the divisor into the ideal"))?;
        }
    }
    let full = j.colon(&Ideal::new(&ring, i).map_err(err)?).map_err(err)?;
    ensure(full.equals(&Ideal::new(&ring, gens).map_err(err)?).map_err(err)?, "colon ideal differs on recomputation")
}

fn groebner(f: &ProblemFile, out: &Value) -> Check {
    let ring = f.equation_ring().map_err(err)?;
    let ord = commands::order(f).map_err(err)?;
    let input = Ideal::with_order(&ring, f.polynomials(&ring, "ideal").map_err(err)?, ord).map_err(err)?;
    let basis = polys(&ring, &out["basis"])?;
    let again = Ideal::with_order(&ring, basis.clone(), ord).map_err(err)?;
    ensure(again.basis() == basis.as_slice(), "basis is not reduced")?;
    ensure(again.equals(&input).map_err(err)?, "basis spans a different ideal")
}

fn series(ring: &Arc<Ring>, v: &Value) -> std::result::Result<TruncatedSeries, String> {
    TruncatedSeries::from_json(ring, v).map_err(err)
}

fn distinguished(ring: &Arc<Ring>, v: &Value) -> std::result::Result<DistinguishedPolynomial, String> {
    let xr = x_ring(ring).map_err(err)?;
    let coeffs = v["coefficients"]
        .as_array()
        .ok_or("missing coefficients")?
        .iter()
        .map(|c| series(&xr, c))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let a = DistinguishedPolynomial::new(ring, coeffs).map_err(err)?;
    ensure(v["r"].as_u64() == Some(a.r() as u64), "degree r disagrees with the coefficients")?;
    Ok(a)
}

fn input_series(f: &ProblemFile, ring: &Arc<Ring>, key: &str) -> std::result::Result<TruncatedSeries, String> {
    let e = f.require(key).map_err(err)?;
    f.series(ring, &e.value, e.line, e.column).map_err(err)
}

fn agree(a: &TruncatedSeries, b: &TruncatedSeries) -> bool {
    let p = a.precision().min(b.precision());
    a.truncate(p) == b.truncate(p)
}

fn prepared(f: &ProblemFile, out: &Value) -> Check {
    let ring = f.series_ring().map_err(err)?;
    let u = input_series(f, &ring, "series")?;
    let unit = series(&ring, &out["unit"])?;
    let a = distinguished(&ring, &out["distinguished"])?;
    ensure(unit.order() == OrderValue::Finite(0), "unit is not a unit")?;
    ensure(agree(&unit.mul_tight(&a.to_series()), &u), "unit times distinguished polynomial differs from the input")
}

fn divided(f: &ProblemFile, out: &Value) -> Check {
    let ring = f.series_ring().map_err(err)?;
    let g = input_series(f, &ring, "series")?;
    let a = distinguished(&ring, &out["divisor"])?;
    let q = series(&ring, &out["quotient"])?;
    let xr = x_ring(&ring).map_err(err)?;
    let rem = out["remainder"]
        .as_array()
        .ok_or("missing remainder")?
        .iter()
        .map(|c| series(&xr, c))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    ensure(rem.len() == a.r(), "remainder has the wrong number of coefficients")?;
    ensure(agree(&recompose(&a, &q, &rem), &g), "quotient and remainder do not recompose the dividend")
}

fn certificate(f: &ProblemFile, out: &Value, status: Status) -> Check {
    let cert = &out["certificate"];
    let ring = f.equation_ring().map_err(err)?;
    let sring = f.series_ring().map_err(err)?;
    let fs = f.equations(&ring).map_err(err)?;
    let unknowns = f.unknowns().map_err(err)?;
    let refs: Vec<&str> = unknowns.iter().map(String::as_str).collect();
    let zbar = f.point(&sring).map_err(err)?;
    let z = SeriesVector::from_json(&sring, &cert["refined"]).map_err(err)?;
    let n = cert["precision"].as_u64().ok_or("missing precision")? as u32;
    let c = cert["target_order"].as_u64().ok_or("missing target order")? as u32;
    ensure(z.len() == unknowns.len(), "refined point has the wrong length")?;
    if status != Status::Certified {
        return Ok(());
    }
    let zt = z.lift(n).truncate(n);
    let rows: Vec<usize> = match f.indices("rows").map_err(err)? {
        Some(r) => r,
        None => (0..fs.len()).collect(),
    };
    for i in rows {
        let v = evaluate(&fs[i], &zt, &refs).map_err(err)?;
        ensure(!v.order().is_finite(), format!("equation {} does not vanish modulo m^{n}", i + 1))?;
    }
    let reported = cert["distance_orders"].as_array().ok_or("missing distance orders")?;
    ensure(reported.len() == z.len(), "one distance order per coordinate")?;
    let z0 = zbar.lift(n).truncate(n);
    for (j, (a, b)) in zt.entries().iter().zip(z0.entries()).enumerate() {
        let o = (a - b).order();
        ensure(o.lower_bound() >= c, format!("coordinate {} moved at order {o} < c = {c}", j + 1))?;
        let consistent = match (&reported[j], o) {
            (Value::Number(k), OrderValue::Finite(v)) => k.as_u64() == Some(v as u64),
            (Value::String(_), OrderValue::AtLeast(_)) => true,
            (Value::Number(k), OrderValue::AtLeast(p)) => k.as_u64().is_some_and(|k| k >= p as u64),
            _ => false,
        };
        ensure(consistent, format!("distance order of coordinate {} misreported", j + 1))?;
    }
    Ok(())
}

fn bounds(f: &ProblemFile, out: &Value) -> Check {
    let get = |k: &str, d: Option<u64>| -> std::result::Result<u64, String> {
        f.parsed::<u64>(k).map_err(err)?.or(d).ok_or_else(|| format!("missing `{k}`"))
    };
    let a = f.parsed::<AFn>("a_fn").map_err(err)?.unwrap_or_default();
    let b = bound_calculators(
        get("m", None)?,
        get("d", None)?,
        get("n", Some(1))?,
        get("s", Some(1))?,
        get("target_order", Some(1))?,
        &a,
        get("k_base", Some(2))?,
    )
    .map_err(err)?;
    ensure(serde_json::to_value(b).map_err(err)? == out["bounds"], "bound table differs on recomputation")
}

fn probe(f: &ProblemFile, out: &Value) -> Check {
    let (rep, targets) = commands::probe_report(f).map_err(err)?;
    let rows = out["probe"]["rows"].as_array().ok_or("missing rows")?;
    ensure(rows.len() % targets.len() == 0, "row count is not a multiple of the targets")?;
    ensure(serde_json::to_value(rep).map_err(err)? == out["probe"], "probe table differs on recomputation")
}
