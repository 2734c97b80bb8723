//! `measure`: one report per (function, selector).

use crate::args::{Format, MeasureArgs, MethodArg, RunConfig};
use crate::emit::{error_value, par_emit, Emitter, Record};
use crate::{Exit, Fatal, Outcome};
use serde_json::Value;
use std::io::Write;
use std::time::Instant;
use xorbounds::comm;
use xorbounds::matrix::{spectral_norm_xor, xor_compose};
use xorbounds::measures::{self, MeasureReport, Method};
use xorbounds::modfn::{self, DropPolicy, ModSpec};
use xorbounds::rational::{int, parse_rational, Rational};
use xorbounds::{BooleanFunction, Error, FunctionSpec, Result, SymmetricPredicate};

/// Measures in the order `--all` reports them.
pub const MEASURES: &[&str] = &[
    "margin",
    "wt",
    "approx-weight",
    "sign-degree",
    "approx-degree",
    "eps-d",
    "wt-deg",
    "smc",
    "oddeven",
    "gamma",
    "r",
    "spectral-norm",
    "disc",
];

pub const BOUNDS: &[&str] = &["forster", "sufficient", "pm", "pp", "bpp", "upp", "odd", "circuit"];

pub const COLUMNS: &[&str] = &["fn", "item", "value", "exact", "vacuous", "error"];

/// Options shared by every selector.
#[derive(Clone, Debug)]
pub struct Options {
    pub eps: Rational,
    pub degree: Option<u32>,
    pub method: Method,
    pub cost: Option<u64>,
    pub drop: DropPolicy,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            eps: xorbounds::rational::rat(1, 3),
            degree: None,
            method: Method::Auto,
            cost: None,
            drop: DropPolicy::Greedy,
        }
    }
}

pub fn parse_drop(s: &str) -> std::result::Result<DropPolicy, String> {
    if s.eq_ignore_ascii_case("greedy") {
        return Ok(DropPolicy::Greedy);
    }
    let masks = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u32>().map_err(|_| format!("bad mask {p:?} in --drop")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(DropPolicy::Explicit(masks))
}

/// A function parsed once with everything the selectors need.
pub struct Subject {
    pub label: String,
    pub spec: FunctionSpec,
    pub f: BooleanFunction,
    pub pred: Option<SymmetricPredicate>,
}

impl Subject {
    pub fn parse(label: &str) -> Result<Self> {
        let spec = FunctionSpec::parse(label)?;
        let f = spec.build()?;
        let pred = f.symmetric_predicate();
        Ok(Subject {
            label: label.to_string(),
            spec,
            f,
            pred,
        })
    }

    pub fn from_function(label: String, f: BooleanFunction) -> Self {
        let pred = f.symmetric_predicate();
        let spec = FunctionSpec::Table {
            n: f.arity(),
            bits: f.words().to_vec(),
        };
        Subject { label, spec, f, pred }
    }

    fn target(&self, method: Method) -> measures::Target<'_> {
        match (&self.pred, method) {
            (Some(p), Method::Auto | Method::Symmetric) => measures::Target::Predicate(p),
            _ => measures::Target::Function(&self.f),
        }
    }

    fn predicate(&self) -> Result<&SymmetricPredicate> {
        self.pred.as_ref().ok_or_else(|| Error::invalid("function is not symmetric"))
    }

    fn mod_spec(&self) -> Result<ModSpec> {
        match self.spec.mod_parameters() {
            Some((m, a, n)) => ModSpec::new(m, a, n),
            None => Err(Error::invalid("not a MOD-type function (mod, cq or parity)")),
        }
    }
}

fn scalar(name: &str, s: &Subject, params: Vec<(String, String)>, v: Option<Rational>) -> Value {
    MeasureReport::scalar(name, s.f.arity(), params, v).to_json()
}

fn p(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

pub fn eval_measure(name: &str, s: &Subject, o: &Options) -> Result<Value> {
    let t = s.target(o.method);
    let m = o.method;
    let eps_s = xorbounds::rational::format_rational(&o.eps);
    Ok(match name {
        "margin" => measures::margin_with(t, m)?.to_json(),
        "wt" => measures::threshold_weight_with(t, m)?.to_json(),
        "approx-weight" => measures::approx_weight_with(t, &o.eps, m)?.to_json(),
        "wt-deg" => {
            let d = o.degree.ok_or_else(|| Error::invalid("wt-deg needs --degree"))?;
            measures::degree_bounded_threshold_weight_with(t, d, m)?.to_json()
        }
        "sign-degree" => {
            let d = measures::sign_degree_with(t, m)?;
            scalar(name, s, vec![], Some(int(d as i64)))
        }
        "approx-degree" => {
            let d = measures::approx_degree_with(t, &o.eps, m)?;
            scalar(name, s, vec![p("eps", &eps_s)], Some(int(d as i64)))
        }
        "eps-d" => {
            let d = o.degree.ok_or_else(|| Error::invalid("eps-d needs --degree"))?;
            let e = measures::epsilon_d_with(t, d, m)?;
            scalar(name, s, vec![p("d", d)], Some(e))
        }
        "smc" => {
            let v = measures::signed_monomial_complexity(&s.f)?;
            scalar(name, s, vec![], Some(int(v as i64)))
        }
        "oddeven" => {
            let v = measures::odd_even_degree(s.predicate()?);
            scalar(name, s, vec![], Some(int(v as i64)))
        }
        "gamma" => {
            let v = measures::gamma_value(s.predicate()?);
            scalar(name, s, vec![], v.map(|g| int(g as i64)))
        }
        "r" => match measures::r_value(s.predicate()?) {
            Some(r) => scalar(name, s, vec![p("r0", r.r0), p("r1", r.r1)], Some(int(r.r as i64))),
            None => scalar(name, s, vec![], None),
        },
        "spectral-norm" => scalar(name, s, vec![p("of", "f∘XOR")], Some(spectral_norm_xor(&s.f))),
        "disc" => {
            let (d, _) = comm::disc_exact(&xor_compose(&s.f)?)?;
            scalar(name, s, vec![p("of", "f∘XOR")], Some(d))
        }
        other => return Err(Error::invalid(format!("unknown measure {other:?}"))),
    })
}

pub fn eval_bound(name: &str, s: &Subject, o: &Options) -> Result<Value> {
    Ok(match name {
        "forster" => modfn::forster_xor_bound(&s.f)?.to_json(),
        "sufficient" => modfn::sufficient_bound(&s.f, &o.drop)?.to_json(),
        "pm" => comm::pm_disc_bound(&s.f)?.to_json(),
        "pp" => comm::pp_from_disc(&comm::pm_disc_bound(&s.f)?)?.to_json(),
        "bpp" => comm::bpp_lower_bound(s.target(o.method))?.to_json(),
        "upp" => modfn::upp_bound_report(&s.mod_spec()?)?.to_json(),
        "odd" => {
            let ms = s.mod_spec()?;
            modfn::odd_m_signrank_bound(ms.m, ms.n)?.to_json()
        }
        "circuit" => {
            let c = o.cost.ok_or_else(|| Error::invalid("circuit needs --cost"))?;
            modfn::circuit_size_bound(&s.mod_spec()?, c)?.to_json()
        }
        other => return Err(Error::invalid(format!("unknown bound {other:?}"))),
    })
}

/// Measures `--all` computes for this function: symmetric-only ones are
/// dropped for non-symmetric functions, degree-indexed ones without
/// `--degree`, and enumeration-based ones past their arity caps.
pub fn all_measures(s: &Subject, o: &Options) -> Vec<&'static str> {
    let n = s.f.arity();
    MEASURES
        .iter()
        .copied()
        .filter(|m| s.pred.is_some() || !matches!(*m, "oddeven" | "gamma" | "r"))
        .filter(|m| o.degree.is_some() || !matches!(*m, "eps-d" | "wt-deg"))
        .filter(|m| *m != "smc" || n <= measures::MAX_MONOMIAL_ARITY)
        .filter(|m| *m != "disc" || (1usize << n) <= comm::MAX_RECT_SIDE)
        .collect()
}

/// The record for one selector, with timing when asked.
pub fn item_record(s: &Subject, item: &str, is_bound: bool, o: &Options, timing: bool) -> (Record, Exit) {
    let start = Instant::now();
    let result = if is_bound {
        eval_bound(item, s, o)
    } else {
        eval_measure(item, s, o)
    };
    let mut rec = Record::new();
    rec.insert("fn".into(), Value::String(s.label.clone()));
    rec.insert("item".into(), Value::String(item.to_string()));
    match result {
        Ok(Value::Object(map)) => {
            let vacuous = map.get("vacuous").cloned();
            for (k, v) in map {
                rec.insert(k, v);
            }
            if let Some(v) = vacuous {
                rec.insert("vacuous".into(), v);
            }
            if timing {
                rec.insert("wall_time_ms".into(), Value::from(start.elapsed().as_millis() as u64));
            }
            (rec, Exit::Ok)
        }
        Ok(other) => {
            rec.insert("value".into(), other);
            (rec, Exit::Ok)
        }
        Err(e) => {
            let code = Exit::of_error(&e);
            rec.insert("error".into(), error_value(&e));
            (rec, code)
        }
    }
}

pub fn options_from(a: &MeasureArgs) -> std::result::Result<Options, Fatal> {
    let eps = parse_rational(&a.eps).map_err(|e| Fatal::usage(format!("--eps: {e}")))?;
    let drop = parse_drop(&a.drop).map_err(Fatal::usage)?;
    let method = match a.method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Full => Method::Full,
        MethodArg::Symmetric => Method::Symmetric,
    };
    Ok(Options {
        eps,
        degree: a.degree,
        method,
        cost: a.cost,
        drop,
    })
}

pub fn run(cfg: &RunConfig, a: &MeasureArgs, out: &mut dyn Write) -> Outcome {
    let opts = options_from(a)?;
    for m in &a.measure {
        if !MEASURES.contains(&m.as_str()) {
            return Err(Fatal::usage(format!("unknown measure {m:?}; one of {}", MEASURES.join(", "))));
        }
    }
    for b in &a.bound {
        if !BOUNDS.contains(&b.as_str()) {
            return Err(Fatal::usage(format!("unknown bound {b:?}; one of {}", BOUNDS.join(", "))));
        }
    }
    if !a.all && a.measure.is_empty() && a.bound.is_empty() {
        return Err(Fatal::usage("nothing to compute: give --all, --measure or --bound"));
    }
    // Parse everything first so a typo fails before any work is done.
    let mut subjects = Vec::new();
    for label in &a.functions {
        let spec = FunctionSpec::parse(label).map_err(|e| Fatal::usage(format!("{label:?}: {e}")))?;
        subjects.push((label.clone(), spec));
    }
    let mut emitter = Emitter::new(cfg.format_or(Format::Json), out, COLUMNS);
    let mut code = Exit::Ok;
    let cap = cfg.arity_cap();
    for (label, spec) in subjects {
        let subject = match spec.build() {
            Ok(f) if f.arity() <= cap => Subject {
                label: label.clone(),
                pred: f.symmetric_predicate(),
                spec,
                f,
            },
            Ok(f) => {
                let e = Error::capacity("arity (--max-n)", f.arity() as usize, cap as usize);
                emitter.emit(&error_record(&label, &e))?;
                code = code.worst(Exit::Capacity);
                continue;
            }
            Err(e) => {
                emitter.emit(&error_record(&label, &e))?;
                code = code.worst(Exit::of_error(&e));
                continue;
            }
        };
        let mut items: Vec<(String, bool)> = Vec::new();
        if a.all {
            items.extend(all_measures(&subject, &opts).into_iter().map(|m| (m.to_string(), false)));
        }
        for m in &a.measure {
            if !items.iter().any(|(n, b)| n == m && !b) {
                items.push((m.clone(), false));
            }
        }
        items.extend(a.bound.iter().map(|b| (b.clone(), true)));
        par_emit(
            &items,
            |(item, is_bound)| {
                let (rec, c) = item_record(&subject, item, *is_bound, &opts, cfg.timing);
                let mut rec = rec;
                rec.insert("_exit".into(), Value::from(c as i32));
                vec![rec]
            },
            |recs| {
                for mut r in recs {
                    let c = r.remove("_exit").and_then(|v| v.as_i64()).unwrap_or(0);
                    code = code.worst(exit_from_i64(c));
                    emitter.emit(&r)?;
                }
                Ok(())
            },
        )?;
    }
    emitter.finish()?;
    Ok(code)
}

pub fn exit_from_i64(c: i64) -> Exit {
    match c {
        1 => Exit::CheckFailed,
        2 => Exit::Usage,
        3 => Exit::Capacity,
        _ => Exit::Ok,
    }
}

pub fn error_record(label: &str, e: &Error) -> Record {
    let mut rec = Record::new();
    rec.insert("fn".into(), Value::String(label.to_string()));
    rec.insert("error".into(), error_value(e));
    rec
}
