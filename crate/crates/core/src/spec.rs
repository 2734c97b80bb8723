//! The function-spec mini-language.
//!
//! ```text
//! tt:<hex>;<n>            raw table, bit i of the hex number is f at index i
//! pred:<+/-...>           symmetric predicate D(0..n)
//! parity:<n>  maj:<n>  cq:<n>
//! mod:<m>,{<r1,r2,...>};<n>
//! uthr:<l>,<k>
//! ltf:<w1,...,wn>;<w0>    sgn(w0 + Σ w_i x_i) over ±1 inputs
//! const:<+|->;<n>
//! -<spec>                 negation
//! ```
//! Keywords are case-insensitive.

use crate::boolean::{BooleanFunction, Ltf, SymmetricPredicate, MAX_ARITY};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    Table { n: u32, bits: Vec<u64> },
    Predicate(SymmetricPredicate),
    Parity(u32),
    Majority(u32),
    Cq(u32),
    Mod { m: u32, residues: Vec<u32>, n: u32 },
    Uthr { l: u32, k: u32 },
    Ltf(Ltf),
    Const { value: i8, n: u32 },
    Neg(Box<FunctionSpec>),
}

fn parse_u32(s: &str, pos: usize, what: &str) -> Result<u32> {
    s.trim()
        .parse::<u32>()
        .map_err(|_| Error::parse(pos, format!("expected {what}, found {s:?}")))
}

fn split_semicolon<'a>(body: &'a str, pos: usize, what: &str) -> Result<(&'a str, &'a str, usize)> {
    match body.rfind(';') {
        Some(i) => Ok((&body[..i], &body[i + 1..], pos + i + 1)),
        None => Err(Error::parse(pos + body.len(), format!("missing ';<n>' in {what}"))),
    }
}

impl FunctionSpec {
    pub fn parse(input: &str) -> Result<Self> {
        Self::parse_at(input.trim(), 0)
    }

    fn parse_at(s: &str, base: usize) -> Result<Self> {
        if let Some(rest) = s.strip_prefix('-') {
            return Ok(FunctionSpec::Neg(Box::new(Self::parse_at(rest, base + 1)?)));
        }
        let colon = s
            .find(':')
            .ok_or_else(|| Error::parse(base, "expected '<keyword>:'"))?;
        let kw = s[..colon].to_ascii_lowercase();
        let body = &s[colon + 1..];
        let bpos = base + colon + 1;
        let spec = match kw.as_str() {
            "tt" => {
                let (hex, n, npos) = split_semicolon(body, bpos, "tt")?;
                let n = parse_u32(n, npos, "arity")?;
                check_arity(n, npos)?;
                let hex = hex.trim();
                let hex = hex
                    .strip_prefix("0x")
                    .or_else(|| hex.strip_prefix("0X"))
                    .unwrap_or(hex);
                if hex.is_empty() {
                    return Err(Error::parse(bpos, "empty hex table"));
                }
                let size = 1u64 << n;
                let mut bits = vec![0u64; ((size + 63) / 64) as usize];
                for (d, ch) in hex.chars().rev().enumerate() {
                    let v = ch.to_digit(16).ok_or_else(|| {
                        Error::parse(bpos + hex.len() - 1 - d, format!("bad hex digit {ch:?}"))
                    })? as u64;
                    for b in 0..4u64 {
                        if v >> b & 1 == 1 {
                            let idx = d as u64 * 4 + b;
                            if idx >= size {
                                return Err(Error::parse(
                                    bpos,
                                    format!("table has bits beyond 2^{n} entries"),
                                ));
                            }
                            bits[(idx / 64) as usize] |= 1 << (idx % 64);
                        }
                    }
                }
                FunctionSpec::Table { n, bits }
            }
            "pred" => FunctionSpec::Predicate(
                SymmetricPredicate::parse(body.trim()).map_err(|e| shift(e, bpos))?,
            ),
            "parity" => FunctionSpec::Parity(arity_body(body, bpos)?),
            "maj" => {
                let n = arity_body(body, bpos)?;
                if n % 2 == 0 {
                    return Err(Error::parse(bpos, "maj needs odd arity"));
                }
                FunctionSpec::Majority(n)
            }
            "cq" => FunctionSpec::Cq(arity_body(body, bpos)?),
            "mod" => {
                let (head, n, npos) = split_semicolon(body, bpos, "mod")?;
                let n = parse_u32(n, npos, "arity")?;
                check_arity(n, npos)?;
                let comma = head
                    .find(',')
                    .ok_or_else(|| Error::parse(bpos, "expected 'mod:<m>,{...}'"))?;
                let m = parse_u32(&head[..comma], bpos, "modulus")?;
                if m < 2 {
                    return Err(Error::parse(bpos, "modulus must be at least 2"));
                }
                let set = head[comma + 1..].trim();
                let spos = bpos + comma + 1;
                let inner = set
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| Error::parse(spos, "residues must be written {r1,r2,...}"))?;
                let mut residues = Vec::new();
                for part in inner.split(',').filter(|p| !p.trim().is_empty()) {
                    let r = parse_u32(part, spos, "residue")?;
                    if r >= m {
                        return Err(Error::parse(spos, format!("residue {r} ≥ modulus {m}")));
                    }
                    residues.push(r);
                }
                residues.sort_unstable();
                residues.dedup();
                FunctionSpec::Mod { m, residues, n }
            }
            "uthr" => {
                let (l, k) = body
                    .split_once(',')
                    .ok_or_else(|| Error::parse(bpos, "expected 'uthr:<l>,<k>'"))?;
                let l = parse_u32(l, bpos, "l")?;
                let k = parse_u32(k, bpos, "k")?;
                if l == 0 || k == 0 || (l as u64) * (k as u64) > MAX_ARITY as u64 {
                    return Err(Error::parse(bpos, "uthr needs 1 ≤ l·k ≤ 24"));
                }
                FunctionSpec::Uthr { l, k }
            }
            "ltf" => {
                let (ws, w0) = match body.rfind(';') {
                    Some(i) => (&body[..i], Some(&body[i + 1..])),
                    None => (body, None),
                };
                let mut weights = Vec::new();
                for part in ws.split(',') {
                    weights.push(parse_rational(part).map_err(|e| shift(e, bpos))?);
                }
                if weights.is_empty() || weights.len() > MAX_ARITY as usize {
                    return Err(Error::parse(bpos, "ltf arity outside [1, 24]"));
                }
                let offset = match w0 {
                    Some(t) => parse_rational(t).map_err(|e| shift(e, bpos))?,
                    None => Rational::zero(),
                };
                FunctionSpec::Ltf(Ltf::new(weights, offset))
            }
            "const" => {
                let (v, n, npos) = split_semicolon(body, bpos, "const")?;
                let value = match v.trim() {
                    "+" | "+1" | "1" => 1,
                    "-" | "-1" => -1,
                    other => return Err(Error::parse(bpos, format!("bad constant {other:?}"))),
                };
                let n = parse_u32(n, npos, "arity")?;
                check_arity(n, npos)?;
                FunctionSpec::Const { value, n }
            }
            other => return Err(Error::parse(base, format!("unknown keyword {other:?}"))),
        };
        Ok(spec)
    }

    pub fn build(&self) -> Result<BooleanFunction> {
        match self {
            FunctionSpec::Table { n, bits } => {
                let words = if *n >= 6 {
                    bits.clone()
                } else {
                    vec![bits[0]]
                };
                BooleanFunction::from_words(*n, words)
            }
            FunctionSpec::Predicate(d) => d.to_function(),
            FunctionSpec::Parity(n) => BooleanFunction::parity(*n),
            FunctionSpec::Majority(n) => BooleanFunction::majority(*n),
            FunctionSpec::Cq(n) => BooleanFunction::from_bits(*n, |x| x.count_ones() % 4 < 2),
            FunctionSpec::Mod { m, residues, n } => {
                let mut accept = vec![false; *m as usize];
                for &r in residues {
                    accept[r as usize] = true;
                }
                BooleanFunction::from_bits(*n, |x| accept[(x.count_ones() % m) as usize])
            }
            FunctionSpec::Uthr { l, k } => Ltf::universal(*l, *k)?.to_function(),
            FunctionSpec::Ltf(l) => l.to_function(),
            FunctionSpec::Const { value, n } => BooleanFunction::constant(*n, *value),
            FunctionSpec::Neg(inner) => Ok(inner.build()?.negate()),
        }
    }

    /// The predicate for families known to be symmetric.
    pub fn predicate(&self) -> Option<SymmetricPredicate> {
        match self {
            FunctionSpec::Predicate(d) => Some(d.clone()),
            FunctionSpec::Parity(n) => SymmetricPredicate::parity(*n).ok(),
            FunctionSpec::Majority(n) => {
                SymmetricPredicate::from_fn(*n, |w| if w > n / 2 { -1 } else { 1 }).ok()
            }
            FunctionSpec::Cq(n) => {
                SymmetricPredicate::from_fn(*n, |w| if w % 4 < 2 { -1 } else { 1 }).ok()
            }
            FunctionSpec::Mod { m, residues, n } => SymmetricPredicate::from_fn(*n, |w| {
                if residues.contains(&(w % m)) {
                    -1
                } else {
                    1
                }
            })
            .ok(),
            FunctionSpec::Const { value, n } => SymmetricPredicate::constant(*n, *value).ok(),
            FunctionSpec::Neg(inner) => inner.predicate().map(|d| d.negate()),
            _ => None,
        }
    }

    /// (m, A, n) for mod-type specs (`cq:n` is mod 4 with A = {0,1}).
    pub fn mod_parameters(&self) -> Option<(u32, Vec<u32>, u32)> {
        match self {
            FunctionSpec::Mod { m, residues, n } => Some((*m, residues.clone(), *n)),
            FunctionSpec::Cq(n) => Some((4, vec![0, 1], *n)),
            FunctionSpec::Parity(n) => Some((2, vec![1], *n)),
            _ => None,
        }
    }
}

fn arity_body(body: &str, pos: usize) -> Result<u32> {
    let n = parse_u32(body, pos, "arity")?;
    check_arity(n, pos)?;
    Ok(n)
}

fn check_arity(n: u32, pos: usize) -> Result<()> {
    if n == 0 || n > MAX_ARITY {
        Err(Error::parse(pos, format!("arity {n} outside [1, {MAX_ARITY}]")))
    } else {
        Ok(())
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

pub fn build_function(spec: &str) -> Result<BooleanFunction> {
    FunctionSpec::parse(spec)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_families() {
        assert_eq!(build_function("parity:2").unwrap().signs(), vec![1, -1, -1, 1]);
        assert_eq!(build_function("tt:6;2").unwrap(), build_function("parity:2").unwrap());
        assert_eq!(build_function("PARITY:2").unwrap(), build_function("parity:2").unwrap());
        let cq = build_function("cq:2").unwrap();
        assert_eq!(cq.signs(), vec![-1, -1, -1, 1]);
        assert_eq!(build_function("mod:4,{0,1};5").unwrap(), build_function("cq:5").unwrap());
        assert_eq!(build_function("mod:2,{1};4").unwrap(), build_function("parity:4").unwrap());
        assert_eq!(build_function("-parity:3").unwrap(), build_function("parity:3").unwrap().negate());
        assert_eq!(build_function("maj:3").unwrap(), build_function("pred:++--").unwrap());
        assert_eq!(build_function("const:-;3").unwrap().count_negative(), 8);
    }

    #[test]
    fn round_trip_hex() {
        let f = build_function("mod:3,{0};7").unwrap();
        assert_eq!(build_function(&f.spec_string()).unwrap(), f);
        let g = build_function("maj:1").unwrap();
        assert_eq!(build_function(&g.spec_string()).unwrap(), g);
    }

    #[test]
    fn errors_carry_positions() {
        match build_function("mod:3,{0,5};4") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(build_function("maj:4"), Err(Error::Parse { .. })));
        assert!(matches!(build_function("parity:25"), Err(Error::Parse { .. })));
        assert!(matches!(build_function("foo:3"), Err(Error::Parse { pos: 0, .. })));
        assert!(build_function("tt:1f;2").is_err());
    }

    #[test]
    fn ltf_and_uthr() {
        let f = build_function("ltf:1,1,1;0").unwrap();
        assert_eq!(f, build_function("maj:3").unwrap());
        let u = build_function("uthr:1,1").unwrap();
        assert_eq!(u, build_function("tt:2;1").unwrap());
        assert!(build_function("ltf:1,-1;0").is_err());
    }
}
