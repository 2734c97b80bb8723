//! Line-oriented text form of a [`LinearProgram`].
//!
//! ```text
//! # comment
//! max 1 1/2 0
//! row 1 1 0 <= 4
//! row 0 1 -1 = 0
//! bound 2 -inf 3
//! ```
//!
//! The objective line fixes the number of variables. Variables default to
//! `[0, inf)`; `bound j lower upper` (0-based `j`) overrides that.

use super::{Bound, LinearProgram, Relation, Sense};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

pub fn to_text(lp: &LinearProgram) -> String {
    let mut out = String::new();
    let join = |v: &[Rational]| {
        v.iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let sense = match lp.sense {
        Sense::Min => "min",
        Sense::Max => "max",
    };
    out.push_str(&format!("{sense} {}\n", join(&lp.objective)));
    for c in &lp.constraints {
        out.push_str(&format!(
            "row {} {} {}\n",
            join(&c.coeffs),
            c.rel.symbol(),
            format_rational(&c.rhs)
        ));
    }
    let side = |b: &Option<Rational>, inf: &str| match b {
        Some(v) => format_rational(v),
        None => inf.to_string(),
    };
    for (j, b) in lp.bounds.iter().enumerate() {
        if *b != Bound::nonneg() {
            out.push_str(&format!(
                "bound {j} {} {}\n",
                side(&b.lower, "-inf"),
                side(&b.upper, "inf")
            ));
        }
    }
    out
}

/// Tokens of one line with their byte offsets in the whole text.
fn tokens(line: &str, base: usize) -> Vec<(usize, &str)> {
    let mut v = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                v.push((base + s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        v.push((base + s, &line[s..]));
    }
    v
}

fn num(pos: usize, t: &str) -> Result<Rational> {
    parse_rational(t).map_err(|_| Error::parse(pos, format!("expected a rational, found {t:?}")))
}

fn side(pos: usize, t: &str, inf: &str) -> Result<Option<Rational>> {
    if t == inf {
        Ok(None)
    } else {
        num(pos, t).map(Some)
    }
}

/// Parses the format written by [`to_text`]. Error positions are byte
/// offsets into `text`.
pub fn from_text(text: &str) -> Result<LinearProgram> {
    let mut lp: Option<LinearProgram> = None;
    let mut offset = 0usize;
    for raw in text.split_inclusive('\n') {
        let base = offset;
        offset += raw.len();
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line, base);
        let Some(&(kpos, key)) = toks.first() else {
            continue;
        };
        match key {
            "max" | "min" => {
                if lp.is_some() {
                    return Err(Error::parse(kpos, "second objective line"));
                }
                let sense = if key == "max" { Sense::Max } else { Sense::Min };
                let c = toks[1..]
                    .iter()
                    .map(|&(p, t)| num(p, t))
                    .collect::<Result<Vec<_>>>()?;
                let mut prog = LinearProgram::new(sense, c.len());
                prog.objective = c;
                lp = Some(prog);
            }
            "row" => {
                let prog = lp
                    .as_mut()
                    .ok_or_else(|| Error::parse(kpos, "row before objective"))?;
                let n = prog.num_vars();
                if toks.len() != n + 3 {
                    return Err(Error::parse(
                        kpos,
                        format!("row needs {n} coefficients, a relation and a bound"),
                    ));
                }
                let coeffs = toks[1..=n]
                    .iter()
                    .map(|&(p, t)| num(p, t))
                    .collect::<Result<Vec<_>>>()?;
                let (rp, rt) = toks[n + 1];
                let rel = match rt {
                    "<=" => Relation::Le,
                    ">=" => Relation::Ge,
                    "=" | "==" => Relation::Eq,
                    _ => return Err(Error::parse(rp, format!("unknown relation {rt:?}"))),
                };
                let (bp, bt) = toks[n + 2];
                prog.add_constraint(coeffs, rel, num(bp, bt)?);
            }
            "bound" => {
                let prog = lp
                    .as_mut()
                    .ok_or_else(|| Error::parse(kpos, "bound before objective"))?;
                if toks.len() != 4 {
                    return Err(Error::parse(kpos, "bound needs an index and two limits"));
                }
                let (jp, jt) = toks[1];
                let j: usize = jt
                    .parse()
                    .map_err(|_| Error::parse(jp, format!("bad variable index {jt:?}")))?;
                if j >= prog.num_vars() {
                    return Err(Error::parse(jp, format!("variable {j} out of range")));
                }
                let lower = side(toks[2].0, toks[2].1, "-inf")?;
                let upper = side(toks[3].0, toks[3].1, "inf")?;
                prog.set_bound(j, Bound { lower, upper });
            }
            _ => return Err(Error::parse(kpos, format!("unknown directive {key:?}"))),
        }
    }
    lp.ok_or_else(|| Error::parse(text.len(), "missing objective line"))
}
