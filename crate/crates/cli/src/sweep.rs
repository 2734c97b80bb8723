//! `sweep`: one row per grid point, CSV by default.

use crate::args::{parse_list, Format, Grid, RunConfig, SweepArgs};
use crate::emit::{cell, par_emit, Emitter, Record};
use crate::measure::{eval_measure, Options, Subject, MEASURES};
use crate::{Exit, Fatal, Outcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::collections::BTreeSet;
use std::io::Write;
use xorbounds::modfn::{self, ModSpec};
use xorbounds::rational::parse_rational;
use xorbounds::{BooleanFunction, Error, SymmetricPredicate};

/// Largest number of rows a sweep may produce.
pub const MAX_SWEEP_ROWS: usize = 1 << 20;

fn too_large(rows: usize) -> Fatal {
    Fatal::from(Error::capacity("sweep rows", rows, MAX_SWEEP_ROWS))
}

/// Copies a report into a row: the value fields when `column` is empty,
/// otherwise the value alone under `column`.
fn report_cells(rec: &mut Record, v: Result<Value, Error>, column: &str) -> Exit {
    match v {
        Ok(Value::Object(map)) if column.is_empty() => {
            for k in ["value", "exact", "vacuous", "slack"] {
                if let Some(x) = map.get(k) {
                    rec.insert(k.into(), x.clone());
                }
            }
            Exit::Ok
        }
        Ok(Value::Object(map)) => {
            rec.insert(column.into(), Value::String(cell(map.get("value"))));
            Exit::Ok
        }
        Ok(other) => {
            rec.insert(if column.is_empty() { "value" } else { column }.into(), other);
            Exit::Ok
        }
        Err(e) => {
            let col = if column.is_empty() { "error" } else { column };
            rec.insert(col.into(), Value::String(format!("error: {e}")));
            Exit::of_error(&e)
        }
    }
}

pub fn run(cfg: &RunConfig, a: &SweepArgs, out: &mut dyn Write) -> Outcome {
    let ms = parse_list(&a.m).map_err(Fatal::usage)?;
    let ns = parse_list(&a.n).map_err(Fatal::usage)?;
    let format = cfg.format_or(Format::Csv);
    let mut code = Exit::Ok;
    match a.grid {
        Grid::Oddm => {
            let rows = ms.len() * ns.len();
            if rows > MAX_SWEEP_ROWS {
                return Err(too_large(rows));
            }
            let points: Vec<(u32, u32)> = ms.iter().flat_map(|&m| ns.iter().map(move |&n| (m, n))).collect();
            let mut em = Emitter::new(format, out, &["m", "n", "value", "exact", "vacuous", "slack", "error"]);
            par_emit(
                &points,
                |&(m, n)| {
                    let mut rec = crate::record! {"m" => m, "n" => n};
                    let c = report_cells(&mut rec, modfn::odd_m_signrank_bound(m, n).map(|r| r.to_json()), "");
                    rec.insert("_exit".into(), Value::from(c as i32));
                    vec![rec]
                },
                |recs| emit_all(&mut em, recs, &mut code),
            )?;
            em.finish()?;
        }
        Grid::Upp => {
            let mut points = Vec::new();
            for &m in &ms {
                if !(3..=16).contains(&m) {
                    return Err(Fatal::usage("upp sweep needs moduli in [3, 16]"));
                }
                for bits in 1u32..(1 << m) - 1 {
                    let set: BTreeSet<u32> = (0..m).filter(|r| bits >> r & 1 == 1).collect();
                    if modfn::is_simple_set(m, &set) {
                        continue;
                    }
                    for &n in &ns {
                        points.push((m, set.clone(), n));
                    }
                }
                if points.len() > MAX_SWEEP_ROWS {
                    return Err(too_large(points.len()));
                }
            }
            let mut em = Emitter::new(format, out, &["m", "residues", "n", "value", "exact", "vacuous", "slack", "error"]);
            par_emit(
                &points,
                |(m, set, n)| {
                    let residues: Vec<String> = set.iter().map(|r| r.to_string()).collect();
                    let mut rec = crate::record! {"m" => m, "residues" => residues.join(" "), "n" => n};
                    let r = ModSpec::new(*m, set.iter().copied(), *n)
                        .and_then(|s| modfn::upp_bound_report(&s))
                        .map(|r| r.to_json());
                    let c = report_cells(&mut rec, r, "");
                    rec.insert("_exit".into(), Value::from(c as i32));
                    vec![rec]
                },
                |recs| emit_all(&mut em, recs, &mut code),
            )?;
            em.finish()?;
        }
        Grid::Symmetric | Grid::Random => {
            if a.measures.is_empty() {
                return Err(Fatal::usage("give --measures"));
            }
            for m in &a.measures {
                if !MEASURES.contains(&m.as_str()) {
                    return Err(Fatal::usage(format!("unknown measure {m:?}")));
                }
            }
            let eps = parse_rational(&a.eps).map_err(|e| Fatal::usage(format!("--eps: {e}")))?;
            let opts = Options {
                eps,
                ..Options::default()
            };
            let cap = cfg.arity_cap();
            let mut subjects: Vec<Subject> = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for &n in &ns {
                if n == 0 || n > cap {
                    return Err(Fatal::from(Error::capacity("sweep arity", n as usize, cap as usize)));
                }
                if a.grid == Grid::Symmetric {
                    let count = 1u64 << (n + 1);
                    if subjects.len() as u64 + count > MAX_SWEEP_ROWS as u64 {
                        return Err(too_large(subjects.len() + count as usize));
                    }
                    for code in 0..count {
                        let d = SymmetricPredicate::from_code(n, code)?;
                        let label = format!("pred:{}", d.to_plus_minus());
                        subjects.push(Subject::from_function(label, d.to_function()?));
                    }
                } else {
                    if subjects.len() + a.count > MAX_SWEEP_ROWS {
                        return Err(too_large(subjects.len() + a.count));
                    }
                    for _ in 0..a.count {
                        let signs: Vec<i8> = (0..1u32 << n).map(|_| if rng.gen() { -1 } else { 1 }).collect();
                        let f = BooleanFunction::from_signs(&signs)?;
                        subjects.push(Subject::from_function(f.spec_string(), f));
                    }
                }
            }
            let mut cols = vec!["fn".to_string(), "n".to_string()];
            cols.extend(a.measures.iter().cloned());
            let mut em = Emitter::with_columns(format, out, cols);
            par_emit(
                &subjects,
                |s| {
                    let mut rec = crate::record! {"fn" => s.label, "n" => s.f.arity()};
                    let mut worst = Exit::Ok;
                    for m in &a.measures {
                        worst = worst.worst(report_cells(&mut rec, eval_measure(m, s, &opts), m));
                    }
                    rec.insert("_exit".into(), Value::from(worst as i32));
                    vec![rec]
                },
                |recs| emit_all(&mut em, recs, &mut code),
            )?;
            em.finish()?;
        }
    }
    Ok(code)
}

fn emit_all(em: &mut Emitter<'_>, recs: Vec<Record>, code: &mut Exit) -> std::io::Result<()> {
    for mut r in recs {
        let c = r.remove("_exit").and_then(|v| v.as_i64()).unwrap_or(0);
        *code = code.worst(crate::measure::exit_from_i64(c));
        em.emit(&r)?;
    }
    Ok(())
}
