//! Verification suites behind `verify`.
//!
//! Each suite recomputes the quantities a theorem relates and checks the
//! relation exactly, with an independent computation wherever a cheap one
//! exists (naive transforms, direct enumeration, recomputed correlations).
//! Suites emit one [`Check`] per instance or per aggregated block and a
//! closing [`Summary`].
//!
//! | suite | instances (defaults) |
//! |---|---|
//! | `sandwich` | all f at n ≤ 2, 100 random f at n = 3 |
//! | `duality` | all f at n ≤ 3 and 100 at n = 4 (full LP); all predicates n ≤ 8 and 25 per n up to 16 (level LP) |
//! | `fourier` | all f at n ≤ 4, 1000 random f at n ≤ 12 |
//! | `bruck` | cq:n, n ≤ 16 |
//! | `modclaim` | m ∈ {3,5,7,9}, 20 sets per m, n ≤ 20 |
//! | `forster` | cq:n for even n ≤ 16; mod:3,{0};n for 8 ≤ n ≤ 16; f′ agreement at n ≤ 12 |
//! | `lifts` | every predicate on 4n ≤ 16 bits; 100 random LTFs at n ≤ 4 |
//! | `ppupper` | every predicate at even n ≤ 8 |
//! | `chains` | every non-simple A for m ≤ 12, checked at arity 12 |
//! | `bpp` | every predicate at n ≤ 12 |
//! | `obstruction` | mod:4,{0};n at even n ≤ 16 |

use crate::args::{Format, RunConfig, VerifyArgs};
use crate::emit::{Emitter, Record};
use crate::{Exit, Fatal, Outcome};
use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;
use std::collections::BTreeSet;
use std::io::{self, Write};
use xorbounds::comm;
use xorbounds::fourier::FourierTable;
use xorbounds::lifting::{self, monomial_project};
use xorbounds::matrix::{spectral_norm_xor, xor_compose};
use xorbounds::measures::{self, Method, Target};
use xorbounds::modfn::{self, BaseTag, DropPolicy, ModSpec, StepKind};
use xorbounds::rational::{format_rational, int, pow2, rat, to_f64, Rational};
use xorbounds::symmetric::binomial;
use xorbounds::{BooleanFunction, Error, Ltf, SymmetricPredicate};

pub const SUITES: &[&str] = &[
    "sandwich",
    "duality",
    "fourier",
    "bruck",
    "modclaim",
    "forster",
    "lifts",
    "ppupper",
    "chains",
    "bpp",
    "obstruction",
];

/// Absolute tolerance for floating-point comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    /// Restrict to one arity where the suite is indexed by arity.
    pub n: Option<u32>,
    pub max_n: Option<u32>,
    pub max_m: Option<u32>,
    pub samples: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub check: String,
    pub pass: bool,
    pub inputs: Vec<(String, String)>,
    pub values: Vec<(String, String)>,
}

impl Check {
    fn new(suite: &'static str, check: &str, pass: bool) -> Self {
        Check {
            suite,
            check: check.to_string(),
            pass,
            inputs: Vec::new(),
            values: Vec::new(),
        }
    }

    fn input(mut self, k: &str, v: impl ToString) -> Self {
        self.inputs.push((k.to_string(), v.to_string()));
        self
    }

    fn value(mut self, k: &str, v: impl ToString) -> Self {
        self.values.push((k.to_string(), v.to_string()));
        self
    }

    fn failed_with(suite: &'static str, check: &str, e: &Error) -> Self {
        Check::new(suite, check, false).value("error", e)
    }

    pub fn to_record(&self) -> Record {
        let map = |v: &[(String, String)]| {
            Value::Object(v.iter().map(|(k, x)| (k.clone(), Value::String(x.clone()))).collect())
        };
        crate::record! {
            "suite" => self.suite,
            "check" => self.check,
            "pass" => self.pass,
            "inputs" => map(&self.inputs),
            "values" => map(&self.values),
        }
    }

    /// One-line description for logs.
    pub fn describe(&self) -> String {
        let kv = |v: &[(String, String)]| v.iter().map(|(k, x)| format!("{k}={x}")).collect::<Vec<_>>().join(" ");
        format!("{} [{}] -> {}", self.check, kv(&self.inputs), kv(&self.values))
    }
}

#[derive(Clone, Debug)]
pub struct Summary {
    pub suite: &'static str,
    pub checks: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Summary {
    pub fn pass(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }

    pub fn to_record(&self) -> Record {
        crate::record! {
            "suite" => self.suite,
            "summary" => true,
            "pass" => self.pass(),
            "checks" => self.checks,
            "failed" => self.failed,
        }
    }
}

struct Collector<'a> {
    summary: Summary,
    sink: &'a mut dyn FnMut(&Check) -> io::Result<()>,
}

impl Collector<'_> {
    fn push(&mut self, c: Check) -> io::Result<()> {
        self.summary.checks += 1;
        if !c.pass {
            self.summary.failed += 1;
            if self.summary.first_failure.is_none() {
                self.summary.first_failure = Some(c.describe());
            }
        }
        (self.sink)(&c)
    }

    /// Runs `f` over `items` in parallel, pushing checks in input order.
    fn par<T: Sync>(&mut self, items: &[T], f: impl Fn(&T) -> Vec<Check> + Sync) -> io::Result<()> {
        for chunk in items.chunks(256) {
            let out: Vec<Vec<Check>> = chunk.par_iter().map(&f).collect();
            for c in out.into_iter().flatten() {
                self.push(c)?;
            }
        }
        Ok(())
    }
}

type SuiteResult = Result<(), Fatal>;

/// Runs one suite by name, sending each check to `sink`.
pub fn run_suite(name: &str, p: &SuiteParams, sink: &mut dyn FnMut(&Check) -> io::Result<()>) -> Result<Summary, Fatal> {
    let suite: &'static str = SUITES
        .iter()
        .copied()
        .find(|s| *s == name)
        .ok_or_else(|| Fatal::usage(format!("unknown suite {name:?}; one of {}, all", SUITES.join(", "))))?;
    let mut c = Collector {
        summary: Summary {
            suite,
            checks: 0,
            failed: 0,
            first_failure: None,
        },
        sink,
    };
    match suite {
        "sandwich" => sandwich(p, &mut c)?,
        "duality" => duality(p, &mut c)?,
        "fourier" => fourier(p, &mut c)?,
        "bruck" => bruck(p, &mut c)?,
        "modclaim" => modclaim(p, &mut c)?,
        "forster" => forster(p, &mut c)?,
        "lifts" => lifts(p, &mut c)?,
        "ppupper" => ppupper(p, &mut c)?,
        "chains" => chains(p, &mut c)?,
        "bpp" => bpp(p, &mut c)?,
        "obstruction" => obstruction(p, &mut c)?,
        _ => unreachable!(),
    }
    Ok(c.summary)
}

pub fn run(cfg: &RunConfig, a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let params = SuiteParams {
        n: a.n,
        max_n: cfg.max_n,
        max_m: a.max_m,
        samples: a.samples,
        seed: cfg.seed,
    };
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![a.suite.as_str()]
    };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        return Err(Fatal::usage(format!("unknown suite {bad:?}; one of {}, all", SUITES.join(", "))));
    }
    let mut em = Emitter::new(
        cfg.format_or(Format::Json),
        out,
        &["suite", "check", "pass", "inputs", "values", "summary", "checks", "failed"],
    );
    let mut code = Exit::Ok;
    for name in names {
        let summary = run_suite(name, &params, &mut |c: &Check| {
            if a.quiet && c.pass {
                Ok(())
            } else {
                em.emit(&c.to_record())
            }
        })?;
        em.emit(&summary.to_record())?;
        if !summary.pass() {
            code = code.worst(Exit::CheckFailed);
        }
    }
    em.finish()?;
    Ok(code)
}

fn cap(what: &'static str, got: u32, limit: u32) -> SuiteResult {
    if got > limit {
        Err(Error::capacity(what, got as usize, limit as usize).into())
    } else {
        Ok(())
    }
}

/// Arities a suite visits: `--n` alone, or `lo..=min(max_n, default_hi)`.
fn arities(p: &SuiteParams, lo: u32, default_hi: u32, limit: u32, what: &'static str) -> Result<Vec<u32>, Fatal> {
    match p.n {
        Some(n) => {
            cap(what, n, limit)?;
            Ok(vec![n])
        }
        None => {
            let hi = p.max_n.unwrap_or(default_hi);
            cap(what, hi, limit)?;
            Ok((lo..=hi).collect())
        }
    }
}

fn random_function(n: u32, rng: &mut ChaCha8Rng) -> BooleanFunction {
    let signs: Vec<i8> = (0..1u32 << n).map(|_| if rng.gen() { -1 } else { 1 }).collect();
    BooleanFunction::from_signs(&signs).expect("arity within range")
}

fn every_function(n: u32) -> Vec<BooleanFunction> {
    let size = 1u32 << n;
    (0..1u64 << size)
        .map(|code| BooleanFunction::from_bits(n, |x| code >> x & 1 == 1).expect("small arity"))
        .collect()
}

fn every_predicate(n: u32) -> Vec<SymmetricPredicate> {
    (0..1u64 << (n + 1))
        .map(|c| SymmetricPredicate::from_code(n, c).expect("small arity"))
        .collect()
}

fn pred_label(d: &SymmetricPredicate) -> String {
    format!("pred:{}", d.to_plus_minus())
}

// ---------------------------------------------------------------------------

fn sandwich(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "sandwich";
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for n in arities(p, 1, 3, comm::MAX_SANDWICH_ARITY, "sandwich arity")? {
        let fs = if n <= 2 {
            every_function(n)
        } else {
            (0..p.samples.unwrap_or(100)).map(|_| random_function(n, &mut rng)).collect()
        };
        c.par(&fs, |f| {
            vec![match comm::sandwich_check(f) {
                Ok(v) => {
                    let ok = v.disc <= v.margin && v.margin <= int(4) * &v.disc;
                    Check::new(S, "disc(f∘XOR) ≤ m(f) ≤ 4·disc(f∘XOR)", v.pass && ok)
                        .input("fn", f.spec_string())
                        .value("margin", format_rational(&v.margin))
                        .value("disc", format_rational(&v.disc))
                }
                Err(e) => Check::failed_with(S, "sandwich", &e).input("fn", f.spec_string()),
            }]
        })?;
    }
    Ok(())
}

fn duality_full(f: &BooleanFunction) -> xorbounds::Result<Check> {
    const S: &str = "duality";
    let third = rat(1, 3);
    let m = measures::margin_with(f, Method::Full)?;
    let w = measures::threshold_weight_with(f, Method::Full)?;
    let a = measures::approx_weight_with(f, &third, Method::Full)?;
    let certified = m.verify(f)? && w.verify(f)? && a.verify(f)?;
    let (mv, wv) = (m.value.clone().unwrap_or_default(), w.value.clone().unwrap_or_default());
    let product = &mv * &wv == int(1);
    Ok(Check::new(S, "primal = dual; m(f)·wt(f) = 1", certified && product)
        .input("fn", f.spec_string())
        .input("lp", "full")
        .value("margin", format_rational(&mv))
        .value("wt", format_rational(&wv))
        .value("wt_1/3", a.value.as_ref().map(format_rational).unwrap_or_default()))
}

fn duality_levels(d: &SymmetricPredicate) -> xorbounds::Result<Check> {
    const S: &str = "duality";
    let third = rat(1, 3);
    let t = Target::Predicate(d);
    let m = measures::margin_with(t, Method::Symmetric)?;
    let w = measures::threshold_weight_with(t, Method::Symmetric)?;
    let a = measures::approx_weight_with(t, &third, Method::Symmetric)?;
    let certified = m.verify_target(t)? && w.verify_target(t)? && a.verify_target(t)?;
    let (mv, wv) = (m.value.clone().unwrap_or_default(), w.value.clone().unwrap_or_default());
    let product = &mv * &wv == int(1);
    Ok(Check::new(S, "primal = dual; m(f)·wt(f) = 1", certified && product)
        .input("fn", pred_label(d))
        .input("lp", "levels")
        .value("margin", format_rational(&mv))
        .value("wt", format_rational(&wv))
        .value("wt_1/3", a.value.as_ref().map(format_rational).unwrap_or_default()))
}

fn duality(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "duality";
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let full_hi = p.max_n.unwrap_or(4).min(4);
    let sym_hi = p.max_n.unwrap_or(16).min(16);
    let (full_ns, sym_ns): (Vec<u32>, Vec<u32>) = match p.n {
        Some(n) => (if n <= 4 { vec![n] } else { vec![] }, vec![n]),
        None => ((1..=full_hi).collect(), (1..=sym_hi).collect()),
    };
    for n in full_ns {
        let fs = if n <= 3 {
            every_function(n)
        } else {
            (0..p.samples.unwrap_or(100)).map(|_| random_function(n, &mut rng)).collect()
        };
        c.par(&fs, |f| vec![duality_full(f).unwrap_or_else(|e| Check::failed_with(S, "full LP", &e).input("fn", f.spec_string()))])?;
    }
    for n in sym_ns {
        cap("symmetric duality arity", n, 24)?;
        let ds = if n <= 8 {
            every_predicate(n)
        } else {
            (0..p.samples.map_or(25, |s| s.min(1 << (n + 1))))
                .map(|_| SymmetricPredicate::from_code(n, rng.gen_range(0..1u64 << (n + 1))).expect("arity"))
                .collect()
        };
        c.par(&ds, |d| vec![duality_levels(d).unwrap_or_else(|e| Check::failed_with(S, "level LP", &e).input("fn", pred_label(d)))])?;
    }
    Ok(())
}

fn naive_scaled(f: &BooleanFunction) -> Vec<i64> {
    let size = f.size() as u32;
    (0..size)
        .map(|s| (0..size).map(|x| f.value(x) as i64 * if (x & s).count_ones() % 2 == 0 { 1 } else { -1 }).sum())
        .collect()
}

struct FourierBlock {
    naive_mismatch: usize,
    parseval_fail: usize,
    worst_svd_gap: f64,
}

fn fourier_one(f: &BooleanFunction, with_svd: bool) -> FourierBlock {
    let t = FourierTable::of(f);
    let n = f.arity();
    let naive_mismatch = usize::from(naive_scaled(f) != t.scaled());
    let parseval: i128 = t.scaled().iter().map(|&v| (v as i128) * (v as i128)).sum();
    let parseval_fail = usize::from(parseval != 1i128 << (2 * n));
    let mut worst_svd_gap = 0.0;
    if with_svd {
        let m = xor_compose(f).expect("small arity");
        let rows = m.to_f64_rows();
        let size = rows.len();
        let dm = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
        let top = dm.singular_values().iter().cloned().fold(0.0f64, f64::max);
        worst_svd_gap = (top - to_f64(&spectral_norm_xor(f))).abs();
    }
    FourierBlock {
        naive_mismatch,
        parseval_fail,
        worst_svd_gap,
    }
}

fn fourier(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "fourier";
    let hi = p.max_n.unwrap_or(12);
    cap("fourier arity", hi, 16)?;
    let mut blocks: Vec<(u32, &str, Vec<BooleanFunction>)> = Vec::new();
    for n in 1..=hi.min(4) {
        if p.n.is_none_or(|k| k == n) {
            blocks.push((n, "exhaustive", every_function(n)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let samples = p.samples.unwrap_or(1000);
    let mut random: Vec<Vec<BooleanFunction>> = vec![Vec::new(); hi as usize + 1];
    for i in 0..samples {
        let n = match p.n {
            Some(n) => n,
            None => 1 + (i as u32 % hi),
        };
        cap("fourier arity", n, 16)?;
        random[n as usize].push(random_function(n, &mut rng));
    }
    for (n, fs) in random.into_iter().enumerate() {
        if !fs.is_empty() {
            blocks.push((n as u32, "random", fs));
        }
    }
    for (n, kind, fs) in blocks {
        let with_svd = n <= 4;
        let results: Vec<FourierBlock> = fs.par_iter().map(|f| fourier_one(f, with_svd)).collect();
        let count = results.len();
        let naive: usize = results.iter().map(|r| r.naive_mismatch).sum();
        let parseval: usize = results.iter().map(|r| r.parseval_fail).sum();
        let gap = results.iter().map(|r| r.worst_svd_gap).fold(0.0, f64::max);
        c.push(
            Check::new(S, "FWHT = naive transform", naive == 0)
                .input("n", n)
                .input("functions", format!("{count} {kind}"))
                .value("mismatches", naive),
        )?;
        c.push(
            Check::new(S, "Σ scaled² = 4^n", parseval == 0)
                .input("n", n)
                .input("functions", format!("{count} {kind}"))
                .value("failures", parseval),
        )?;
        if with_svd {
            c.push(
                Check::new(S, "||M_f∘XOR|| = max|scaled| (SVD)", gap <= FLOAT_TOLERANCE)
                    .input("n", n)
                    .input("functions", format!("{count} {kind}"))
                    .value("max_gap", format!("{gap:e}")),
            )?;
        }
    }
    Ok(())
}

fn bruck(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    let ns = arities(p, 1, 16, 20, "bruck arity")?;
    c.par(&ns, |&n| {
        let f = modfn::mod_function(&ModSpec::new(4, [0, 1], n).expect("valid")).expect("arity");
        let t = FourierTable::of(&f);
        let even = 1i64 << (n / 2);
        let odd = 1i64 << n.div_ceil(2);
        let values: BTreeSet<i64> = t.scaled().iter().map(|v| v.abs()).collect();
        let pass = if n % 2 == 0 {
            values.len() == 1 && values.contains(&even)
        } else {
            values.iter().all(|&v| v == 0 || v == odd)
        };
        let shown: Vec<String> = values.iter().map(|&v| format_rational(&(int(v) * pow2(-(n as i64))))).collect();
        let expect = if n % 2 == 0 {
            format!("2^-{}", n / 2)
        } else {
            format!("0 or 2^-{}", (n - 1) / 2)
        };
        vec![Check::new("bruck", "|CQ^(S)| values", pass)
            .input("n", n)
            .value("abs values", shown.join(" "))
            .value("expected", expect)]
    })?;
    Ok(())
}

fn sample_sets(m: u32, count: usize, rng: &mut ChaCha8Rng) -> Vec<BTreeSet<u32>> {
    let total = (1u64 << m) - 2;
    let to_set = |b: u64| (0..m).filter(|r| b >> r & 1 == 1).collect::<BTreeSet<u32>>();
    if total as usize <= count {
        return (1..=total).map(to_set).collect();
    }
    let mut chosen = BTreeSet::new();
    while chosen.len() < count {
        chosen.insert(rng.gen_range(1..=total));
    }
    chosen.into_iter().map(to_set).collect()
}

fn set_label(a: &BTreeSet<u32>) -> String {
    let v: Vec<String> = a.iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn modclaim(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "modclaim";
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let hi = p.max_n.unwrap_or(20);
    cap("audit arity", hi, modfn::MAX_AUDIT_ARITY)?;
    let ns: Vec<u32> = match p.n {
        Some(n) => vec![n],
        None => (1..=hi).collect(),
    };
    let mut cases = Vec::new();
    for m in [3u32, 5, 7, 9].into_iter().filter(|&m| m <= p.max_m.unwrap_or(9)) {
        for a in sample_sets(m, p.samples.unwrap_or(20), &mut rng) {
            cases.push((m, a));
        }
    }
    c.par(&cases, |(m, a)| {
        let mut worst = (f64::INFINITY, 0u32);
        let mut audit_ok = true;
        let mut closed_gap = 0.0f64;
        let mut err = None;
        for &n in &ns {
            let spec = ModSpec::new(*m, a.iter().copied(), n).expect("valid");
            match modfn::claim_bound_audit(&spec) {
                Ok(r) => {
                    audit_ok &= r.pass;
                    let s = r.slack_empty.min(r.slack_nonempty);
                    if s < worst.0 {
                        worst = (s, n);
                    }
                }
                Err(e) => err = Some(e),
            }
            if n <= 14 {
                match modfn::exact_level_coefficients(&spec) {
                    Ok(exact) => {
                        for s in 0..=n {
                            match modfn::mod_fourier_closed_form(&spec, s) {
                                Ok(z) => {
                                    closed_gap = closed_gap.max((z.re - to_f64(&exact[s as usize])).abs()).max(z.im.abs())
                                }
                                Err(e) => err = Some(e),
                            }
                        }
                    }
                    Err(e) => err = Some(e),
                }
            }
        }
        let label = format!("mod:{m},{}", set_label(a));
        if let Some(e) = err {
            return vec![Check::failed_with(S, "coefficient bounds", &e).input("fn", label)];
        }
        vec![
            Check::new(S, "both coefficient bounds hold", audit_ok)
                .input("fn", &label)
                .input("n", format!("{}..{}", ns[0], ns[ns.len() - 1]))
                .value("least slack", format!("{:e}", worst.0))
                .value("at n", worst.1),
            Check::new(S, "closed form = FWHT", closed_gap <= FLOAT_TOLERANCE)
                .input("fn", &label)
                .input("n", format!("{}..{}", ns[0], ns.iter().copied().filter(|&n| n <= 14).max().unwrap_or(0)))
                .value("max gap", format!("{closed_gap:e}")),
        ]
    })?;
    Ok(())
}

/// Independent pointwise check that f − Σ_{S∈𝒮} f̂(S)χ_S has the sign of f
/// with magnitude at least δ.
fn dropped_agrees(f: &BooleanFunction, set: &[u32], delta: &Rational) -> bool {
    let t = FourierTable::of(f);
    (0..f.size() as u32).all(|x| {
        let mut v = int(f.value(x) as i64);
        for &s in set {
            let chi = if (x & s).count_ones() % 2 == 0 { 1 } else { -1 };
            v -= t.coefficient(s) * int(chi);
        }
        !v.is_zero() && v.is_negative() == (f.value(x) < 0) && v.abs() >= *delta
    })
}

fn forster(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "forster";
    let hi = p.max_n.unwrap_or(16);
    cap("forster arity", hi, modfn::MAX_SUFFICIENT_ARITY)?;
    let evens: Vec<u32> = (2..=hi).step_by(2).collect();
    c.par(&evens, |&n| {
        let f = modfn::mod_function(&ModSpec::new(4, [0, 1], n).expect("valid")).expect("arity");
        vec![match modfn::forster_xor_bound(&f) {
            Ok(r) => {
                let expect = pow2(n as i64 / 2);
                Check::new(S, "forster(cq:n) = 2^(n/2)", r.exact.as_ref() == Some(&expect))
                    .input("fn", format!("cq:{n}"))
                    .value("exact", r.exact.as_ref().map(format_rational).unwrap_or_default())
            }
            Err(e) => Check::failed_with(S, "forster(cq:n)", &e).input("n", n),
        }]
    })?;
    let ns: Vec<u32> = (8..=hi).collect();
    c.par(&ns, |&n| {
        let f = modfn::mod_function(&ModSpec::new(3, [0], n).expect("valid")).expect("arity");
        let run = || -> xorbounds::Result<Vec<Check>> {
            let none = modfn::sufficient_bound(&f, &DropPolicy::Explicit(vec![]))?;
            let empty = modfn::sufficient_bound(&f, &DropPolicy::Explicit(vec![0]))?;
            let forster = modfn::forster_xor_bound(&f)?;
            let (a, b) = (none.exact.clone().unwrap_or_default(), empty.exact.clone().unwrap_or_default());
            Ok(vec![
                Check::new(S, "sufficient with 𝒮=∅ = forster", none.exact == forster.exact)
                    .input("fn", format!("mod:3,{{0}};{n}"))
                    .value("ratio", format_rational(&a)),
                Check::new(S, "𝒮={∅} ratio > 𝒮=∅ ratio", b > a)
                    .input("fn", format!("mod:3,{{0}};{n}"))
                    .value("𝒮=∅", format!("{:.6}", to_f64(&a)))
                    .value("𝒮={∅}", format!("{:.6}", to_f64(&b))),
            ])
        };
        run().unwrap_or_else(|e| vec![Check::failed_with(S, "dropping f^(∅)", &e).input("n", n)])
    })?;
    // f′ sign agreement on MOD functions and random functions.
    let agree_hi = hi.min(modfn::MAX_AGREEMENT_ARITY);
    let mut fs: Vec<(String, BooleanFunction)> = Vec::new();
    for n in 1..=agree_hi {
        for (m, a) in [(3u32, vec![0u32]), (5, vec![1, 2]), (4, vec![0, 1]), (6, vec![0, 3])] {
            let spec = ModSpec::new(m, a, n).expect("valid");
            fs.push((spec.label(), modfn::mod_function(&spec).expect("arity")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for i in 0..p.samples.unwrap_or(50) {
        let n = 1 + (i as u32 % agree_hi.min(8));
        let f = random_function(n, &mut rng);
        fs.push((f.spec_string(), f));
    }
    c.par(&fs, |(label, f)| {
        let mut out = Vec::new();
        for (name, policy) in [("greedy", DropPolicy::Greedy), ("{∅}", DropPolicy::Explicit(vec![0]))] {
            match modfn::sufficient_witness(f, &policy) {
                Ok(w) => out.push(
                    Check::new(S, "f′ sign-agrees with f", w.agreement_checked && dropped_agrees(f, &w.set, &w.delta))
                        .input("fn", label)
                        .input("𝒮", name)
                        .value("|𝒮|", w.set.len())
                        .value("δ", format_rational(&w.delta)),
                ),
                // δ ≤ 0: the construction does not apply.
                Err(Error::Invalid(_)) => {}
                Err(e) => out.push(Check::failed_with(S, "f′ sign agreement", &e).input("fn", label)),
            }
        }
        out
    })?;
    Ok(())
}

fn monotone_under_projection(src: &BooleanFunction, image: &BooleanFunction) -> xorbounds::Result<Option<Check>> {
    if src.arity() > measures::MAX_FULL_WEIGHT_ARITY || image.arity() > measures::MAX_FULL_WEIGHT_ARITY {
        return Ok(None);
    }
    let third = rat(1, 3);
    let val = |r: measures::MeasureReport| r.value.unwrap_or_default();
    let (ms, mi) = (val(measures::margin_with(src, Method::Full)?), val(measures::margin_with(image, Method::Full)?));
    let (ws, wi) = (
        val(measures::threshold_weight_with(src, Method::Full)?),
        val(measures::threshold_weight_with(image, Method::Full)?),
    );
    let (as_, ai) = (
        val(measures::approx_weight_with(src, &third, Method::Full)?),
        val(measures::approx_weight_with(image, &third, Method::Full)?),
    );
    let mut pass = ms <= mi && wi <= ws && ai <= as_;
    let mut check = Check::new("lifts", "projection does not increase complexity", true)
        .input("source", src.spec_string())
        .input("image", image.spec_string())
        .value("margin", format!("{} ≤ {}", format_rational(&ms), format_rational(&mi)))
        .value("wt", format!("{} ≥ {}", format_rational(&ws), format_rational(&wi)))
        .value("wt_1/3", format!("{} ≥ {}", format_rational(&as_), format_rational(&ai)));
    if src.arity() <= measures::MAX_MONOMIAL_ARITY && image.arity() <= measures::MAX_MONOMIAL_ARITY {
        let (ss, si) = (measures::signed_monomial_complexity(src)?, measures::signed_monomial_complexity(image)?);
        pass &= si <= ss;
        check = check.value("smc", format!("{ss} ≥ {si}"));
    }
    check.pass = pass;
    Ok(Some(check))
}

fn lifts(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "lifts";
    let hi = p.max_n.unwrap_or(16);
    cap("source arity", hi, 16)?;
    let ns: Vec<u32> = match p.n {
        Some(n) => vec![n],
        None => (1..=hi / 4).collect(),
    };
    let mut instances: Vec<(BooleanFunction, BooleanFunction)> = Vec::new();
    for &n in &ns {
        cap("source arity", 4 * n, 16)?;
        let codes: Vec<u64> = (0..1u64 << (4 * n + 1)).collect();
        let results: Vec<(bool, Option<String>)> = codes
            .par_iter()
            .map(|&code| {
                let big = SymmetricPredicate::from_code(4 * n, code).expect("arity");
                match lifting::symm_lift_decompose(&big) {
                    Ok((small, _, w)) => {
                        let ok = w.pointwise_checked
                            && w.inputs_checked == 1u64 << (3 * n)
                            && (0..=n).all(|b| small.at(b) == big.at(2 * b + n));
                        (ok, (!ok).then(|| pred_label(&big)))
                    }
                    Err(e) => (false, Some(format!("{}: {e}", pred_label(&big)))),
                }
            })
            .collect();
        let failed: Vec<String> = results.iter().filter_map(|(_, l)| l.clone()).collect();
        c.push(
            Check::new(S, "F projects onto f^op pointwise", failed.is_empty())
                .input("source arity", 4 * n)
                .input("predicates", codes.len())
                .value("failures", failed.len())
                .value("first failure", failed.first().cloned().unwrap_or_default()),
        )?;
        if n == 1 {
            for &code in &codes {
                let big = SymmetricPredicate::from_code(4, code).expect("arity");
                let (small, _, _) = lifting::symm_lift_decompose(&big)?;
                instances.push((big.to_function()?, lifting::kp_lift(&small.to_function()?)?));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let offsets = [rat(-1, 2), rat(1, 2), rat(3, 2)];
    let ltfs: Vec<Ltf> = (0..p.samples.unwrap_or(100))
        .map(|i| {
            let n = 1 + i as u32 % 4;
            let w = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
            Ltf::new(w, offsets[rng.gen_range(0..3)].clone())
        })
        .collect();
    let thr: Vec<(Check, Option<(BooleanFunction, BooleanFunction)>)> = ltfs
        .par_iter()
        .map(|f| {
            let run = || -> xorbounds::Result<(Check, BooleanFunction, BooleanFunction)> {
                let (g, list, w) = lifting::thr_lift(f)?;
                let gf = g.to_function()?;
                let image = monomial_project(&gf, &list)?;
                let ok = w.pointwise_checked && image == lifting::kp_lift(&f.to_function()?)?;
                Ok((
                    Check::new(S, "threshold lift projects onto f^op", ok)
                        .input("fn", f.spec_string())
                        .value("lifted", g.spec_string()),
                    gf,
                    image,
                ))
            };
            match run() {
                Ok((c, g, image)) => (c, Some((g, image))),
                Err(e) => (Check::failed_with(S, "threshold lift", &e).input("fn", f.spec_string()), None),
            }
        })
        .collect();
    for (check, inst) in thr {
        c.push(check)?;
        if let Some(i) = inst {
            instances.push(i);
        }
    }
    c.par(&instances, |(src, image)| match monotone_under_projection(src, image) {
        Ok(Some(check)) => vec![check],
        Ok(None) => vec![],
        Err(e) => vec![Check::failed_with(S, "projection monotonicity", &e).input("source", src.spec_string())],
    })?;
    Ok(())
}

fn ppupper(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "ppupper";
    let hi = p.max_n.unwrap_or(8);
    let ns: Vec<u32> = match p.n {
        Some(n) => vec![n],
        None => (2..=hi).step_by(2).collect(),
    };
    for n in ns {
        cap("predicate arity", n, 12)?;
        if n % 2 == 1 {
            return Err(Fatal::usage("ppupper needs even n"));
        }
        let ds = every_predicate(n);
        let fails: Vec<String> = ds
            .par_iter()
            .filter_map(|d| {
                let ok = measures::pp_upper_poly(d).and_then(|poly| {
                    Ok(poly.is_integral() && poly.sign_represents(&d.to_function()?)? && poly.weight() <= measures::pp_weight_bound(d))
                });
                match ok {
                    Ok(true) => None,
                    Ok(false) => Some(pred_label(d)),
                    Err(e) => Some(format!("{}: {e}", pred_label(d))),
                }
            })
            .collect();
        c.push(
            Check::new(S, "p sign-represents f with wt(p) ≤ 4(2n)^k", fails.is_empty())
                .input("n", n)
                .input("predicates", ds.len())
                .value("failures", fails.len())
                .value("first failure", fails.first().cloned().unwrap_or_default()),
        )?;
    }
    Ok(())
}

fn shifted_product(m: u32, a: &BTreeSet<u32>, i: u32, n: u32) -> xorbounds::Result<BooleanFunction> {
    let f = modfn::mod_function(&ModSpec::new(m, a.iter().copied(), n)?)?;
    let g = modfn::mod_function(&ModSpec::new(m, a.iter().map(|r| (r + i) % m), n)?)?;
    f.product(&g)
}

fn chain_check(m: u32, a: &BTreeSet<u32>, arity: u32) -> xorbounds::Result<Check> {
    let chain = modfn::reduction_chain_at(m, a, arity)?;
    let mut ok = true;
    let (mut cm, mut ca) = (m, a.clone());
    for s in &chain.steps {
        ok &= s.from_m == cm && s.from == ca && s.verified_at == Some(arity);
        ok &= !modfn::is_simple_set(s.to_m, &s.to);
        let target = modfn::mod_function(&ModSpec::new(s.to_m, s.to.iter().copied(), arity)?)?;
        let source = match s.kind {
            StepKind::ShiftXor => shifted_product(s.from_m, &s.from, s.shift, arity)?,
            StepKind::Rewrite => modfn::mod_function(&ModSpec::new(s.from_m, s.from.iter().copied(), arity)?)?,
        };
        ok &= source == target;
        cm = s.to_m;
        ca = s.to.clone();
    }
    ok &= chain.base_m == cm && chain.base_residues == ca;
    ok &= match chain.base {
        BaseTag::OddModulus => cm % 2 == 1,
        BaseTag::Modulus4 | BaseTag::CqTranslate => cm == 4,
    };
    Ok(Check::new("chains", "chain steps hold; base is odd, mod 4 or CQ translate", ok)
        .input("fn", format!("mod:{m},{}", set_label(a)))
        .value("chain", serde_json::to_string(&chain).expect("chain json")))
}

fn chains(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "chains";
    let hi = p.max_m.unwrap_or(12);
    cap("chain modulus", hi, 16)?;
    let arity = modfn::DEFAULT_CHAIN_ARITY;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for m in 3..=hi {
        let all: Vec<BTreeSet<u32>> = (1u64..(1 << m) - 1)
            .map(|b| (0..m).filter(|r| b >> r & 1 == 1).collect::<BTreeSet<u32>>())
            .filter(|a| !modfn::is_simple_set(m, a))
            .collect();
        // Exhaustive up to m = 12; beyond that a sample of 200 per modulus.
        let sets = if m <= 12 {
            all
        } else {
            let mut picked = BTreeSet::new();
            while picked.len() < 200.min(all.len()) {
                picked.insert(rng.gen_range(0..all.len()));
            }
            picked.into_iter().map(|i| all[i].clone()).collect()
        };
        c.par(&sets, |a| {
            vec![chain_check(m, a, arity)
                .unwrap_or_else(|e| Check::failed_with(S, "chain", &e).input("fn", format!("mod:{m},{}", set_label(a))))]
        })?;
    }
    // Explicit values of the modulus-4 base cases.
    for n in [20u32, 40, 100] {
        let cq = modfn::upp_bound_report(&ModSpec::new(4, [0, 1], n)?)?;
        c.push(
            Check::new(S, "U(CQ∘XOR) report has the n/2 form", cq.value == n as f64 / 2.0)
                .input("fn", format!("cq:{n}"))
                .value("value", cq.value),
        )?;
        for r in 0..4u32 {
            let rep = modfn::upp_bound_report(&ModSpec::new(4, [r], n)?)?;
            let expect = (n as f64 - 12.0) / 4.0;
            c.push(
                Check::new(S, "size-1 A report has the (n−12)/4 form", rep.value == expect)
                    .input("fn", format!("mod:4,{{{r}}};{n}"))
                    .value("value", rep.value),
            )?;
        }
    }
    Ok(())
}

/// sums[s][w] = Σ_{|x| = w} χ_{[s]}(x), by enumerating every input.
fn level_character_sums(n: u32) -> Vec<Vec<i64>> {
    let mut sums = vec![vec![0i64; n as usize + 1]; n as usize + 1];
    for x in 0..1u32 << n {
        let w = x.count_ones() as usize;
        for (s, row) in sums.iter_mut().enumerate() {
            let prefix = x & ((1u32 << s) - 1);
            row[w] += if prefix.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    sums
}

/// Σ_w D(w)·μ(w), max_S |Σ_x ν(x)χ_S(x)| and Σ|μ| for a level measure μ
/// spread uniformly over each level, computed without the library's design
/// matrices or Krawtchouk values.
fn level_witness_values(d: &SymmetricPredicate, mu: &[Rational], sums: &[Vec<i64>]) -> (Rational, Rational, Rational) {
    let n = d.arity();
    let corr: Rational = (0..=n).map(|w| int(d.at(w) as i64) * &mu[w as usize]).sum();
    let mass: Rational = mu.iter().map(|v| v.abs()).sum();
    let mut top = Rational::zero();
    for row in sums {
        let v: Rational = (0..=n)
            .map(|w| &mu[w as usize] * int(row[w as usize]) / int(binomial(n, w) as i64))
            .sum();
        if v.abs() > top {
            top = v.abs();
        }
    }
    (corr, top, mass)
}

fn bpp(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    const S: &str = "bpp";
    let ns = arities(p, 1, 12, comm::MAX_BPP_SYMMETRIC_ARITY, "symmetric BPP arity")?;
    for n in ns {
        let ds = every_predicate(n);
        let sums = level_character_sums(n);
        c.par(&ds, |d| {
            vec![match comm::bpp_witness(d) {
                Ok(w) => {
                    let (corr, lifted, mass) = level_witness_values(d, &w.mu, &sums);
                    let third = rat(1, 3);
                    let limit = int(3) / &w.w_prime;
                    let ok = w.levels
                        && corr == w.corr
                        && lifted == w.lifted_disc
                        && mass == int(1)
                        && corr >= third
                        && lifted <= limit;
                    Check::new(S, "corr ≥ 1/3 and 2^n·||(gν)^||∞ ≤ 3/w′", ok)
                        .input("fn", pred_label(d))
                        .value("w'", format_rational(&w.w_prime))
                        .value("corr", format_rational(&corr))
                        .value("lifted", format_rational(&lifted))
                        .value("3/w'", format_rational(&limit))
                }
                Err(e) => Check::failed_with(S, "dual witness", &e).input("fn", pred_label(d)),
            }]
        })?;
    }
    Ok(())
}

fn obstruction(p: &SuiteParams, c: &mut Collector<'_>) -> SuiteResult {
    let hi = p.max_n.unwrap_or(16);
    cap("obstruction arity", hi, 20)?;
    let ns: Vec<u32> = match p.n {
        Some(n) => vec![n],
        None => (2..=hi).step_by(2).collect(),
    };
    c.par(&ns, |&n| {
        let f = modfn::mod_function(&ModSpec::new(4, [0], n).expect("valid")).expect("arity");
        let t = FourierTable::of(&f);
        let full = (1u32 << n) - 1;
        let sum = int(t.get(0).abs() + t.get(full).abs()) * pow2(-(n as i64));
        vec![Check::new("obstruction", "|f^(∅)| + |f^([n])| = 1", sum == int(1))
            .input("fn", format!("mod:4,{{0}};{n}"))
            .value("sum", format_rational(&sum))]
    })?;
    Ok(())
}
