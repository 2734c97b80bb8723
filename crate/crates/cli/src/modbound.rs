//! `modbound`: closed-form bounds for MOD functions at any arity.

use crate::args::{Format, ModboundArgs, RunConfig};
use crate::emit::{error_value, Emitter, Record};
use crate::measure::parse_drop;
use crate::{Exit, Fatal, Outcome};
use serde_json::{json, Value};
use std::io::Write;
use xorbounds::modfn::{self, ModSpec};
use xorbounds::Result;

pub const BOUNDS: &[&str] = &["upp", "circuit", "odd", "chain", "forster", "sufficient", "claim", "simple"];

const COLUMNS: &[&str] = &["fn", "item", "value", "exact", "vacuous", "slack", "error"];

fn eval(item: &str, spec: &ModSpec, a: &ModboundArgs) -> Result<Value> {
    Ok(match item {
        "upp" => modfn::upp_bound_report(spec)?.to_json(),
        "circuit" => modfn::circuit_size_bound(spec, a.cost)?.to_json(),
        "odd" => modfn::odd_m_signrank_bound(spec.m, spec.n)?.to_json(),
        "chain" => {
            let c = modfn::reduction_chain_at(spec.m, &spec.residues, a.verify_arity)?;
            json!({
                "chain": c,
                "total_arity_loss": c.total_arity_loss(),
                "halvings": c.halvings(),
            })
        }
        "forster" => modfn::forster_xor_bound(&modfn::mod_function(spec)?)?.to_json(),
        "sufficient" => {
            let policy = parse_drop(&a.drop).map_err(xorbounds::Error::invalid)?;
            modfn::sufficient_bound(&modfn::mod_function(spec)?, &policy)?.to_json()
        }
        "claim" => serde_json::to_value(modfn::claim_bound_audit(spec)?).expect("audit json"),
        "simple" => {
            let (simple, kind) = modfn::is_simple(spec);
            json!({"value": simple, "simplicity": kind})
        }
        other => return Err(xorbounds::Error::invalid(format!("unknown bound {other:?}"))),
    })
}

pub fn run(cfg: &RunConfig, a: &ModboundArgs, out: &mut dyn Write) -> Outcome {
    for b in &a.bound {
        if !BOUNDS.contains(&b.as_str()) {
            return Err(Fatal::usage(format!("unknown bound {b:?}; one of {}", BOUNDS.join(", "))));
        }
    }
    let specs = a
        .functions
        .iter()
        .map(|s| ModSpec::parse(s).map(|m| (s.clone(), m)).map_err(|e| Fatal::usage(format!("{s:?}: {e}"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut emitter = Emitter::new(cfg.format_or(Format::Json), out, COLUMNS);
    let mut code = Exit::Ok;
    for (label, spec) in &specs {
        for item in &a.bound {
            let mut rec = Record::new();
            rec.insert("fn".into(), Value::String(label.clone()));
            rec.insert("item".into(), Value::String(item.clone()));
            match eval(item, spec, a) {
                Ok(Value::Object(map)) => rec.extend(map),
                Ok(v) => {
                    rec.insert("value".into(), v);
                }
                Err(e) => {
                    code = code.worst(Exit::of_error(&e));
                    rec.insert("error".into(), error_value(&e));
                }
            }
            emitter.emit(&rec)?;
        }
    }
    emitter.finish()?;
    Ok(code)
}
