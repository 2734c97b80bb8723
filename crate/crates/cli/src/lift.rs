//! `lift`: lifts, projections and embeddings of one function.

use crate::args::{Format, LiftArgs, LiftKind, RunConfig};
use crate::emit::{error_value, Emitter, Record};
use crate::{Exit, Fatal, Outcome};
use serde_json::{json, Value};
use std::io::Write;
use xorbounds::{comm, lifting, Error, FunctionSpec, Result};

const COLUMNS: &[&str] = &["kind", "fn", "result", "arity", "error"];

fn kind_name(k: LiftKind) -> &'static str {
    match k {
        LiftKind::Kp => "kp",
        LiftKind::Xor => "xor",
        LiftKind::Symm => "symm",
        LiftKind::Extend => "extend",
        LiftKind::Liftsym => "liftsym",
        LiftKind::Thr => "thr",
        LiftKind::Embed => "embed",
    }
}

fn eval(kind: LiftKind, spec: &FunctionSpec) -> Result<Value> {
    let pred = || {
        spec.predicate()
            .or_else(|| spec.build().ok().and_then(|f| f.symmetric_predicate()))
            .ok_or_else(|| Error::invalid("needs a symmetric function"))
    };
    let ltf = || match spec {
        FunctionSpec::Ltf(l) => Ok(l.clone()),
        FunctionSpec::Uthr { l, k } => comm::universal_threshold(*l, *k),
        _ => Err(Error::invalid("needs an `ltf:` or `uthr:` spec")),
    };
    Ok(match kind {
        LiftKind::Kp => {
            let g = lifting::kp_lift(&spec.build()?)?;
            json!({"result": g.spec_string(), "arity": g.arity()})
        }
        LiftKind::Xor => {
            let g = comm::xor_lift_function(&spec.build()?)?;
            json!({"result": g.spec_string(), "arity": g.arity()})
        }
        LiftKind::Symm => {
            let (small, list, witness) = lifting::symm_lift_decompose(&pred()?)?;
            json!({
                "result": format!("pred:{}", small.to_plus_minus()),
                "arity": small.arity(),
                "projection": list,
                "witness": witness,
            })
        }
        LiftKind::Extend => {
            let big = lifting::lifsym_extend(&pred()?)?;
            json!({"result": format!("pred:{}", big.to_plus_minus()), "arity": big.arity()})
        }
        LiftKind::Liftsym => {
            let r = lifting::liftsym_witness(&pred()?)?;
            let best = r.best;
            json!({"result": best, "arity": r.arity, "family": r})
        }
        LiftKind::Thr => {
            let (g, list, witness) = lifting::thr_lift(&ltf()?)?;
            json!({
                "result": g.spec_string(),
                "arity": g.arity(),
                "projection": list,
                "witness": witness,
            })
        }
        LiftKind::Embed => {
            let e = comm::embed_ltf(&ltf()?)?;
            json!({
                "result": format!("uthr:{},{}", e.l, e.k),
                "arity": e.l * e.k,
                "embedding": e,
            })
        }
    })
}

pub fn run(cfg: &RunConfig, a: &LiftArgs, out: &mut dyn Write) -> Outcome {
    let spec = FunctionSpec::parse(&a.function).map_err(|e| Fatal::usage(format!("{:?}: {e}", a.function)))?;
    let mut emitter = Emitter::new(cfg.format_or(Format::Json), out, COLUMNS);
    let mut rec = Record::new();
    rec.insert("kind".into(), Value::String(kind_name(a.kind).into()));
    rec.insert("fn".into(), Value::String(a.function.clone()));
    let code = match eval(a.kind, &spec) {
        Ok(Value::Object(map)) => {
            rec.extend(map);
            Exit::Ok
        }
        Ok(v) => {
            rec.insert("result".into(), v);
            Exit::Ok
        }
        Err(e) => {
            rec.insert("error".into(), error_value(&e));
            Exit::of_error(&e)
        }
    };
    emitter.emit(&rec)?;
    emitter.finish()?;
    Ok(code)
}
