use super::design::{Design, Method, Target};
use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational, RatJson};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Coordinates a witness is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Polynomial indexed by monomial mask; measure indexed by input.
    Monomial,
    /// Polynomial indexed by monomial size (same coefficient on every
    /// monomial of that size); measure indexed by Hamming weight (total
    /// mass of the class, spread uniformly).
    Level,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialWitness {
    pub basis: Basis,
    pub terms: Vec<(u32, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionWitness {
    pub basis: Basis,
    pub values: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureReport {
    pub measure: String,
    pub n: u32,
    pub params: Vec<(String, String)>,
    /// `None` when the program is infeasible or the measure undefined.
    pub value: Option<Rational>,
    pub primal: Option<PolynomialWitness>,
    pub dual: Option<DistributionWitness>,
    pub notes: Vec<String>,
    pub wall_time_ms: Option<u64>,
}

fn basis_of(d: &Design) -> Basis {
    if d.levels {
        Basis::Level
    } else {
        Basis::Monomial
    }
}

impl MeasureReport {
    pub(crate) fn new(measure: &str, d: &Design, params: Vec<(String, String)>) -> Self {
        MeasureReport {
            measure: measure.to_string(),
            n: d.n,
            params,
            value: None,
            primal: None,
            dual: None,
            notes: Vec::new(),
            wall_time_ms: None,
        }
    }

    /// A report carrying only an exact value.
    pub fn scalar(measure: &str, n: u32, params: Vec<(String, String)>, value: Option<Rational>) -> Self {
        MeasureReport {
            measure: measure.to_string(),
            n,
            params,
            value,
            primal: None,
            dual: None,
            notes: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub(crate) fn with_value(mut self, v: Rational) -> Self {
        self.value = Some(v);
        self
    }

    pub(crate) fn with_primal(mut self, d: &Design, c: &[Rational]) -> Self {
        let terms = d
            .vars
            .iter()
            .zip(c)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&m, v)| (m, v.clone()))
            .collect();
        self.primal = Some(PolynomialWitness {
            basis: basis_of(d),
            terms,
        });
        self
    }

    pub(crate) fn with_dual(mut self, d: &Design, values: Vec<Rational>) -> Self {
        self.dual = Some(DistributionWitness {
            basis: basis_of(d),
            values,
        });
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.notes.push(note.to_string());
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_json(&self) -> Value {
        let params: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let value = match &self.value {
            Some(v) => serde_json::to_value(RatJson::from(v)).expect("rational json"),
            None => Value::Null,
        };
        let primal = self.primal.as_ref().map(|p| {
            json!({
                "basis": p.basis,
                "terms": p.terms.iter().map(|(i, c)| json!({"index": i, "value": format_rational(c)})).collect::<Vec<_>>(),
            })
        });
        let dual = self.dual.as_ref().map(|p| {
            json!({
                "basis": p.basis,
                "values": p.values.iter().map(format_rational).collect::<Vec<_>>(),
            })
        });
        json!({
            "measure": self.measure,
            "n": self.n,
            "params": params,
            "value": value,
            "certificate": {"primal": primal, "dual": dual},
            "notes": self.notes,
            "wall_time_ms": self.wall_time_ms,
        })
    }

    /// Re-checks the certificates against `f` and confirms they pin down
    /// the reported value exactly. Scalar reports verify trivially.
    pub fn verify(&self, f: &BooleanFunction) -> Result<bool> {
        self.verify_target(Target::Function(f))
    }

    pub fn verify_target(&self, t: Target<'_>) -> Result<bool> {
        if t.arity() != self.n {
            return Err(Error::Dimension("report and function arities differ".into()));
        }
        let (Some(value), Some(p), Some(q)) = (&self.value, &self.primal, &self.dual) else {
            return Ok(self.primal.is_none() && self.dual.is_none());
        };
        if p.basis != q.basis {
            return Ok(false);
        }
        let method = match p.basis {
            Basis::Monomial => Method::Full,
            Basis::Level => Method::Symmetric,
        };
        let degree = match self.param("d") {
            Some(s) => Some(s.parse::<u32>().map_err(|_| Error::invalid("degree parameter"))?),
            None => None,
        };
        let d = Design::build(t, degree, method, crate::boolean::MAX_ARITY)?;
        let Some(c) = dense(&d, &p.terms) else {
            return Ok(false);
        };
        if q.values.len() != d.points() {
            return Ok(false);
        }
        let vals = d.eval(&c);
        let wt = d.poly_weight(&c);
        let psi = &q.values;
        Ok(match self.measure.as_str() {
            "margin" => {
                let agree = vals
                    .iter()
                    .zip(&d.target)
                    .map(|(v, t)| v * t)
                    .min()
                    .unwrap_or_else(Rational::zero);
                let total: Rational = psi.iter().sum();
                wt <= Rational::one()
                    && agree >= *value
                    && psi.iter().all(|m| !m.is_negative())
                    && total.is_one()
                    && d.max_abs_correlation(&d.times_target(psi)) <= *value
            }
            "threshold_weight" | "degree_bounded_threshold_weight" => {
                let ok_primal = vals.iter().zip(&d.target).all(|(v, t)| v * t >= Rational::one());
                let total: Rational = psi.iter().sum();
                ok_primal
                    && wt == *value
                    && psi.iter().all(|m| !m.is_negative())
                    && d.max_abs_correlation(&d.times_target(psi)) <= Rational::one()
                    && total == *value
            }
            "approx_weight" => {
                let eps = match self.param("eps") {
                    Some(s) => parse_rational(s)?,
                    None => return Ok(false),
                };
                let ok_primal = vals.iter().zip(&d.target).all(|(v, t)| (v - t).abs() <= eps);
                let gain: Rational = psi
                    .iter()
                    .zip(&d.target)
                    .map(|(a, t)| a * t - &eps * a.abs())
                    .sum();
                ok_primal
                    && wt == *value
                    && d.max_abs_correlation(psi) <= Rational::one()
                    && gain == *value
            }
            _ => false,
        })
    }
}

fn dense(d: &Design, terms: &[(u32, Rational)]) -> Option<Vec<Rational>> {
    let mut c = vec![Rational::zero(); d.num_vars()];
    for (idx, v) in terms {
        let j = d.vars.iter().position(|m| m == idx)?;
        c[j] = v.clone();
    }
    Some(c)
}
