//! One handler per subcommand; each serializes a library result unchanged.

use std::path::Path;

use coact::clifford::{Algebra, CliffordElement};
use coact::comodule::{
    canonical_coaction, coaction_from_tuple, coinvariants, verify_comodule_algebra, verify_tuple, Coaction,
    CoactionJson, CoactionTuple, TupleJson,
};
use coact::hopf::{verify_duality_iso, verify_hopf};
use coact::inner::{
    check_inner_tuple, enumerate_coactions, split_even, tuple_to_coaction, Branch, EnumerateOptions, InnerTuple,
    InnerTupleJson,
};
use coact::quadratic::{
    bialgebra_admissible, build_q, classify_structure, delta, diagonalize, is_semisimple, normalized_pseudoscalar,
    pseudoscalar, quotient_semisimple, radical, Quotient,
};
use coact::report::Report;
use serde_json::{json, Value};

use crate::config::{load_config, parse_field, read_json};
use crate::error::CliError;
use crate::{Cli, Command};

pub struct Outcome {
    pub value: Value,
    /// Whether the property the command reports on holds.
    pub ok: bool,
}

fn ok(value: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { value, ok: true })
}

fn report(r: &Report) -> Result<Outcome, CliError> {
    Ok(Outcome {
        value: serde_json::to_value(r).expect("serializable"),
        ok: r.passed,
    })
}

fn elements(v: &[CliffordElement]) -> Value {
    json!(v.iter().map(|e| e.to_json_map()).collect::<Vec<_>>())
}

fn algebra(cli: &Cli) -> Result<Algebra, CliError> {
    let path = cli
        .algebra
        .as_deref()
        .ok_or_else(|| CliError::Usage("this command needs --algebra <CONFIG>".into()))?;
    load_config(path)
}

fn coaction_file(alg: &Algebra, path: &Path) -> Result<Coaction, CliError> {
    let json: CoactionJson = read_json(path)?;
    Ok(Coaction::from_json(alg, &json)?)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::VerifyHopf { n, field } => return report(&verify_hopf(&parse_field(field)?, *n)?),
        Command::VerifyDuality { n, field } => return report(&verify_duality_iso(&parse_field(field)?, *n)?),
        _ => {}
    }
    let a = algebra(cli)?;
    match &cli.command {
        Command::Info => ok(json!({
            "field": a.field().descriptor(),
            "n": a.n(),
            "dim": a.dim(),
            "orthogonal": a.is_orthogonal(),
            "basis": (0..a.dim()).map(|i| a.label(i)).collect::<Vec<_>>(),
        })),
        Command::Semisimple => {
            let det = build_q(&a).det();
            let semisimple = is_semisimple(&a);
            Ok(Outcome {
                value: json!({ "det_q": det.to_string(), "semisimple": semisimple }),
                ok: semisimple,
            })
        }
        Command::Radical => {
            let rad = radical(&a);
            let q = quotient_semisimple(&a)?;
            let quotient_semisimple = match &q.quotient {
                Quotient::GroundField => true,
                Quotient::Clifford(b) => is_semisimple(b),
            };
            ok(json!({
                "dim": rad.len(),
                "basis": elements(&rad),
                "quotient_dim": q.quotient_dim(),
                "quotient_semisimple": quotient_semisimple,
            }))
        }
        Command::Diagonalize => {
            let q = build_q(&a);
            let c = diagonalize(&q);
            ok(json!({
                "q": q.matrix().to_strings(),
                "p": c.p.to_strings(),
                "d": c.diagonal().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }))
        }
        Command::Center => {
            let z = a.center();
            ok(json!({ "dim": z.len(), "basis": elements(&z) }))
        }
        Command::Trace { element } => match element {
            Some(text) => {
                let map = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad element: {e}")))?;
                let e = CliffordElement::from_json_map(&a, &map)?;
                ok(json!({ "element": e.to_json_map(), "trace": a.regular_trace(&e).to_string() }))
            }
            None => {
                let traces: serde_json::Map<String, Value> = (0..a.dim())
                    .map(|i| {
                        let t = a.regular_trace(&CliffordElement::basis(&a, i));
                        (a.label(i), json!(t.to_string()))
                    })
                    .collect();
                ok(json!({ "traces": traces }))
            }
        },
        Command::Bialgebra => {
            let adm = bialgebra_admissible(&a);
            Ok(Outcome {
                ok: adm.admissible,
                value: serde_json::to_value(&adm).expect("serializable"),
            })
        }
        Command::Classify => ok(serde_json::to_value(classify_structure(&a)).expect("serializable")),
        Command::Pseudoscalar => {
            let z = pseudoscalar(&a);
            let zn = normalized_pseudoscalar(&a);
            ok(json!({
                "z": z.to_json_map(),
                "z_squared": (&z * &z).to_json_map(),
                "normalized": zn.to_json_map(),
                "delta": delta(&a).to_string(),
            }))
        }
        Command::CanonicalCoaction => ok(serde_json::to_value(canonical_coaction(&a)?.to_json()).expect("serializable")),
        Command::VerifyCoaction { file } => report(&verify_comodule_algebra(&coaction_file(&a, file)?)),
        Command::CoactionFromInner { file } => {
            let json: InnerTupleJson = read_json(file)?;
            let t = InnerTuple::from_json(&a, &json)?;
            let r = check_inner_tuple(&t)?;
            if !r.passed {
                return report(&r);
            }
            ok(serde_json::to_value(tuple_to_coaction(&t)?.to_json()).expect("serializable"))
        }
        Command::CoactionFromTuple { file } => {
            let json: TupleJson = read_json(file)?;
            let t = CoactionTuple::from_json(&a, &json)?;
            let r = verify_tuple(&t);
            if !r.passed {
                return report(&r);
            }
            ok(serde_json::to_value(coaction_from_tuple(&t)?.to_json()).expect("serializable"))
        }
        Command::Coinvariants { file } => {
            let z = coinvariants(&coaction_file(&a, file)?)?;
            ok(json!({ "dim": z.len(), "basis": elements(&z) }))
        }
        Command::SplitEven => {
            let s = split_even(&a)?;
            ok(json!({
                "delta": s.delta.to_string(),
                "sqrt_delta": s.sqrt_delta.to_string(),
                "z": s.z.to_json_map(),
                "t1": s.t1.to_json_map(),
                "t2": s.t2.to_json_map(),
                "checks": s.verify(),
            }))
        }
        Command::Enumerate { twisted, untwisted, max_candidates } => {
            let branch = match (twisted, untwisted) {
                (true, _) => Branch::Twisted,
                (_, true) => Branch::Untwisted,
                _ => Branch::All,
            };
            let opts = EnumerateOptions { branch, max_candidates: *max_candidates, ..Default::default() };
            let classes = enumerate_coactions(&a, &opts)?;
            ok(json!({
                "count": classes.len(),
                "classes": classes.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            }))
        }
        Command::VerifyHopf { .. } | Command::VerifyDuality { .. } => unreachable!("handled above"),
    }
}
