//! Executes a validated job and assembles the JSON report.

use coadjoint::conventions;
use coadjoint::homotopy::{consistency_vs_known, pi1_lower_bound};
use coadjoint::json::{complex_to_json, sig15};
use coadjoint::quantops::{
    apply_uea, apply_uea_exact, harish_chandra_eval_exact, off_scalar_residual, QComplex, UeaElement,
};
use coadjoint::rootdata::{is_regular, q_invariant, root_pairing, WeightJson};
use coadjoint::transport::{action_integral_with, kappa_report};
use coadjoint::verify::run_suite;
use coadjoint::Error;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::config::{Command, Job, UsageError};

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailure => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub status: Status,
    pub body: Value,
}

const DEFAULT_SCALAR_TOL: f64 = 1e-10;

fn is_verification(e: &Error) -> bool {
    matches!(
        e,
        Error::ConsistencyFailure(_) | Error::PrecisionWarning { .. } | Error::CapError { .. } | Error::NotCentral(_)
    )
}

fn exact(q: &QComplex) -> Value {
    json!([q.re.to_string(), q.im.to_string()])
}

/// Runs the job. Library errors caused by the input map to usage errors;
/// failed numerical cross-checks produce a report with a failing status.
pub fn run(job: &Job) -> Result<Report, UsageError> {
    let result = match job.command {
        Command::Roots => roots(job),
        Command::QInvariant => q_inv(job),
        Command::Kappa => kappa(job),
        Command::Action => action(job),
        Command::Charinf => charinf(job),
        Command::Pi1Bound => pi1(job),
        Command::Check => Ok(check(job)),
    };
    let (status, result) = match result {
        Ok(r) => r,
        Err(e) if is_verification(&e) => (Status::VerificationFailure, json!({ "error": e.to_string() })),
        Err(e) => return Err(UsageError::new(job.command.name(), e.to_string())),
    };
    let mut body = Map::new();
    body.insert("command".into(), json!(job.command.name()));
    body.insert("conventions".into(), conventions::to_json());
    body.insert("seed".into(), json!(job.seed));
    if let Some(w) = &job.weight {
        body.insert("weight".into(), serde_json::to_value(WeightJson::from(w)).expect("weight serializes"));
    }
    if let Some(rf) = &job.realform {
        body.insert("realform".into(), serde_json::to_value(rf.name()).expect("realform serializes"));
    }
    body.insert(
        "status".into(),
        json!(match status {
            Status::Ok => "ok",
            Status::VerificationFailure => "verification_failure",
        }),
    );
    body.insert("result".into(), result);
    Ok(Report { status, body: Value::Object(body) })
}

type Outcome = coadjoint::Result<(Status, Value)>;

fn roots(job: &Job) -> Outcome {
    let rs = job.system.as_ref().expect("resolved");
    let roots: Vec<Value> = rs
        .positive_roots()
        .iter()
        .map(|r| {
            let w = rs.root_weight(r);
            json!({
                "label": rs.root_label(r),
                "simple_coords": r.simple_coords,
                "weight_coords": w.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut out = json!({
        "type": rs.kind().to_string(),
        "rank": rs.rank(),
        "cartan_matrix": rs.cartan_matrix(),
        "positive_roots": roots,
        "rho": WeightJson::from(rs.rho()),
    });
    if let Some(phi) = &job.weight {
        let shifted = phi.add(rs.rho())?;
        let pairings: Vec<String> = rs
            .positive_roots()
            .iter()
            .map(|r| root_pairing(rs, &shifted, r).map(|p| p.to_string()))
            .collect::<Result<_, _>>()?;
        out["phi_plus_rho_pairings"] = json!(pairings);
        out["regular"] = json!(is_regular(rs, phi)?);
    }
    Ok((Status::Ok, out))
}

fn q_inv(job: &Job) -> Outcome {
    let rs = job.system.as_ref().expect("resolved");
    let phi = job.weight.as_ref().expect("resolved");
    let rf = job.realform.as_ref().expect("resolved");
    let q = q_invariant(rs, phi, rf)?;
    let compact_roots: Vec<String> = rs
        .positive_roots()
        .iter()
        .zip(rf.compact_flags())
        .filter(|(_, c)| **c)
        .map(|(r, _)| rs.root_label(r))
        .collect();
    Ok((Status::Ok, json!({ "q": q, "compact_roots": compact_roots })))
}

fn kappa(job: &Job) -> Outcome {
    let phi = job.weight.as_ref().expect("resolved");
    let spec = job.loop_spec.as_ref().expect("resolved");
    let r = kappa_report(phi, spec, job.steps, &job.transport_tolerances())?;
    let mut t = r.transport.to_json();
    t["kappa"] = complex_to_json(r.kappa);
    t["kappa_from_ode"] = complex_to_json(r.from_ode);
    t["kappa_from_character"] = complex_to_json(r.from_character);
    t["residual"] = json!(sig15(r.residual));
    t["cap"] = json!(spec.cap.name());
    Ok((Status::Ok, t))
}

fn action(job: &Job) -> Outcome {
    let phi = job.weight.as_ref().expect("resolved");
    let spec = job.loop_spec.as_ref().expect("resolved");
    let r = action_integral_with(phi, spec, job.steps, &job.transport_tolerances())?;
    let mut t = r.to_json();
    let e = Complex64::from_polar(1.0, r.action().unwrap_or(f64::NAN));
    t["exp_i_action"] = complex_to_json(e);
    t["cap"] = json!(spec.cap.name());
    Ok((Status::Ok, t))
}

fn charinf(job: &Job) -> Outcome {
    let phi = job.weight.as_ref().expect("resolved");
    let j: UeaElement = match &job.uea {
        Some(s) => s.parse()?,
        None => UeaElement::casimir(),
    };
    let tol = job.tolerances.get("scalar").copied().unwrap_or(DEFAULT_SCALAR_TOL);
    let hc = harish_chandra_eval_exact(phi, &j)?;
    let m = apply_uea_exact(phi, &j)?;
    let d = m.dim();
    let zero = QComplex::new(BigRational::zero(), BigRational::zero());
    let mut exact_scalar = true;
    for r in 0..d {
        for c in 0..d {
            exact_scalar &= m.get(r, c) == if r == c { &hc } else { &zero };
        }
    }
    let (scalar, off) = off_scalar_residual(&apply_uea(phi, &j)?);
    let hc_f = coadjoint::quantops::harish_chandra_eval(phi, &j)?;
    let mismatch = (scalar - hc_f).norm();
    let ok = exact_scalar && off <= tol && mismatch <= tol;
    let status = if ok { Status::Ok } else { Status::VerificationFailure };
    Ok((
        status,
        json!({
            "element": j.to_string(),
            "harish_chandra_value": exact(&hc),
            "operator_scalar": complex_to_json(scalar),
            "off_scalar_residual": sig15(off),
            "mismatch": sig15(mismatch),
            "exact_match": exact_scalar,
            "tolerance": sig15(tol),
        }),
    ))
}

fn pi1(job: &Job) -> Outcome {
    let phi = job.weight.as_ref().expect("resolved");
    let rf = job.realform.as_ref().expect("resolved");
    let n = phi.rank() + 1;
    let b = pi1_lower_bound(n, phi, rf)?;
    let mut out = b.to_json();
    let cmp = consistency_vs_known(n, phi)?;
    out["known"] = cmp.to_json();
    let status = if cmp.consistent { Status::Ok } else { Status::VerificationFailure };
    Ok((status, out))
}

fn check(job: &Job) -> (Status, Value) {
    let outcomes = run_suite(job.seed, &job.check_overrides());
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let status = if failed == 0 { Status::Ok } else { Status::VerificationFailure };
    (
        status,
        json!({
            "checks": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
            "passed": outcomes.len() - failed,
            "failed": failed,
        }),
    )
}

/// Renders the report as sorted `key = value` lines.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => {
            out.push_str(prefix);
            out.push_str(" = ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::JobConfig;

    fn report(text: &str) -> Report {
        run(&JobConfig::parse(text, "cfg").unwrap().resolve().unwrap()).unwrap()
    }

    #[test]
    fn every_report_has_conventions_and_status() {
        for text in [
            r#"{"command": "roots", "group": {"type": "A", "rank": 3}}"#,
            r#"{"command": "q-invariant", "weight": [0, 0]}"#,
            r#"{"command": "pi1-bound", "weight": [1, 2]}"#,
            r#"{"command": "charinf", "weight": [0]}"#,
        ] {
            let r = report(text);
            assert_eq!(r.status, Status::Ok);
            assert_eq!(r.body["status"], "ok");
            assert_eq!(r.body["conventions"], conventions::to_json());
        }
    }

    #[test]
    fn singular_weight_is_a_usage_error() {
        let job = JobConfig::parse(r#"{"command": "q-invariant", "weight": [-1]}"#, "cfg").unwrap().resolve().unwrap();
        assert_eq!(run(&job).unwrap_err().location, "q-invariant");
    }

    #[test]
    fn text_rendering_flattens_nested_objects() {
        let v = json!({"a": {"b": [1, 2], "c": [{"d": true}]}, "e": "x"});
        assert_eq!(to_text(&v), "a.b = [1,2]\na.c[0].d = true\ne = \"x\"\n");
    }
}
