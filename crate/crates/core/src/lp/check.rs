//! Independent verification of an [`LpSolution`] against its program.

use super::{dot, LinearProgram, LpSolution, Relation, Sense, Status};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    PrimalRow,
    PrimalBound,
    DualLength,
    DualSign,
    ReducedCost,
    ObjectiveMismatch,
    MissingCertificate,
    FarkasSign,
    FarkasReducedCost,
    FarkasNotPositive,
    RayRow,
    RayBound,
    RayNotImproving,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub violation: Option<Violation>,
    pub detail: String,
}

impl Verdict {
    fn ok(detail: impl Into<String>) -> Self {
        Verdict {
            pass: true,
            violation: None,
            detail: detail.into(),
        }
    }

    fn fail(v: Violation, detail: impl Into<String>) -> Self {
        Verdict {
            pass: false,
            violation: Some(v),
            detail: detail.into(),
        }
    }
}

/// Sign multiplier turning a dual of `lp` into the minimization convention.
fn flip(lp: &LinearProgram) -> Rational {
    match lp.sense {
        Sense::Min => Rational::from_integer(1.into()),
        Sense::Max => Rational::from_integer((-1).into()),
    }
}

fn row_sign_ok(rel: Relation, y: &Rational) -> bool {
    match rel {
        Relation::Ge => !y.is_negative(),
        Relation::Le => !y.is_positive(),
        Relation::Eq => true,
    }
}

/// `d = c − Aᵀy` with `c` and `y` already in the minimization convention.
fn reduced_costs(lp: &LinearProgram, c: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut d = c.to_vec();
    for (row, yi) in lp.constraints.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (dj, a) in d.iter_mut().zip(&row.coeffs) {
            if !a.is_zero() {
                *dj -= a * yi;
            }
        }
    }
    d
}

/// `bᵀy + Σ d_j·bound_j`, or the index of a variable whose reduced cost
/// points at an infinite bound.
fn dual_value(
    lp: &LinearProgram,
    y: &[Rational],
    d: &[Rational],
) -> std::result::Result<Rational, usize> {
    let mut v = Rational::zero();
    for (row, yi) in lp.constraints.iter().zip(y) {
        if !yi.is_zero() {
            v += &row.rhs * yi;
        }
    }
    for (j, dj) in d.iter().enumerate() {
        if dj.is_zero() {
            continue;
        }
        let b = if dj.is_positive() {
            &lp.bounds[j].lower
        } else {
            &lp.bounds[j].upper
        };
        match b {
            Some(b) => v += b * dj,
            None => return Err(j),
        }
    }
    Ok(v)
}

/// Checks primal feasibility, dual feasibility and equal objectives for an
/// optimal solution, the Farkas certificate for an infeasible one, and the
/// ray for an unbounded one.
pub fn check_duality(lp: &LinearProgram, sol: &LpSolution) -> Result<Verdict> {
    lp.validate()?;
    match sol.status {
        Status::Optimal => Ok(check_optimal(lp, sol)),
        Status::Infeasible => match &sol.farkas {
            Some(y) => check_farkas(lp, y),
            None => Ok(Verdict::fail(Violation::MissingCertificate, "no Farkas vector")),
        },
        Status::Unbounded => match &sol.ray {
            Some(r) => {
                if let Some(v) = primal_violation(lp, &sol.primal) {
                    return Ok(v);
                }
                check_ray(lp, r)
            }
            None => Ok(Verdict::fail(Violation::MissingCertificate, "no ray")),
        },
    }
}

fn primal_violation(lp: &LinearProgram, x: &[Rational]) -> Option<Verdict> {
    if x.len() != lp.num_vars() {
        return Some(Verdict::fail(Violation::PrimalBound, "primal length mismatch"));
    }
    for (i, row) in lp.constraints.iter().enumerate() {
        let lhs = dot(&row.coeffs, x);
        if !row.rel.holds(&lhs, &row.rhs) {
            return Some(Verdict::fail(
                Violation::PrimalRow,
                format!(
                    "row {i}: {} {} {} fails",
                    format_rational(&lhs),
                    row.rel.symbol(),
                    format_rational(&row.rhs)
                ),
            ));
        }
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if !b.contains(&x[j]) {
            return Some(Verdict::fail(
                Violation::PrimalBound,
                format!("variable {j} out of bounds"),
            ));
        }
    }
    None
}

fn check_optimal(lp: &LinearProgram, sol: &LpSolution) -> Verdict {
    let x = &sol.primal;
    if let Some(v) = primal_violation(lp, x) {
        return v;
    }
    if sol.dual.len() != lp.constraints.len() {
        return Verdict::fail(Violation::DualLength, "dual length mismatch");
    }
    let f = flip(lp);
    let y: Vec<Rational> = sol.dual.iter().map(|v| v * &f).collect();
    for (i, (row, yi)) in lp.constraints.iter().zip(&y).enumerate() {
        if !row_sign_ok(row.rel, yi) {
            return Verdict::fail(Violation::DualSign, format!("dual {i} has the wrong sign"));
        }
    }
    let c: Vec<Rational> = lp.objective.iter().map(|v| v * &f).collect();
    let d = reduced_costs(lp, &c, &y);
    let dv = match dual_value(lp, &y, &d) {
        Ok(v) => v,
        Err(j) => {
            return Verdict::fail(
                Violation::ReducedCost,
                format!("reduced cost of variable {j} needs a missing bound"),
            )
        }
    };
    let primal = lp.objective_value(x);
    let dual = &dv * &f;
    if primal != dual || primal != sol.objective {
        return Verdict::fail(
            Violation::ObjectiveMismatch,
            format!(
                "primal {} dual {} reported {}",
                format_rational(&primal),
                format_rational(&dual),
                format_rational(&sol.objective)
            ),
        );
    }
    Verdict::ok(format!("optimal {}", format_rational(&primal)))
}

fn check_farkas(lp: &LinearProgram, y: &[Rational]) -> Result<Verdict> {
    if let Some(j) = lp.bounds.iter().position(|b| match (&b.lower, &b.upper) {
        (Some(l), Some(u)) => l > u,
        _ => false,
    }) {
        return Ok(Verdict::ok(format!("variable {j} has an empty range")));
    }
    if y.len() != lp.constraints.len() {
        return Err(Error::Dimension("Farkas vector length".into()));
    }
    for (i, (row, yi)) in lp.constraints.iter().zip(y).enumerate() {
        if !row_sign_ok(row.rel, yi) {
            return Ok(Verdict::fail(
                Violation::FarkasSign,
                format!("multiplier {i} has the wrong sign"),
            ));
        }
    }
    let zero = vec![Rational::zero(); lp.num_vars()];
    let d = reduced_costs(lp, &zero, y);
    match dual_value(lp, y, &d) {
        Err(j) => Ok(Verdict::fail(
            Violation::FarkasReducedCost,
            format!("combination is unbounded through variable {j}"),
        )),
        Ok(v) if v.is_positive() => Ok(Verdict::ok(format!(
            "certificate value {}",
            format_rational(&v)
        ))),
        Ok(v) => Ok(Verdict::fail(
            Violation::FarkasNotPositive,
            format!("certificate value {} is not positive", format_rational(&v)),
        )),
    }
}

fn check_ray(lp: &LinearProgram, r: &[Rational]) -> Result<Verdict> {
    if r.len() != lp.num_vars() {
        return Err(Error::Dimension("ray length".into()));
    }
    let zero = Rational::zero();
    for (i, row) in lp.constraints.iter().enumerate() {
        let lhs = dot(&row.coeffs, r);
        if !row.rel.holds(&lhs, &zero) {
            return Ok(Verdict::fail(Violation::RayRow, format!("ray leaves row {i}")));
        }
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        let bad = (b.lower.is_some() && r[j].is_negative()) || (b.upper.is_some() && r[j].is_positive());
        if bad {
            return Ok(Verdict::fail(Violation::RayBound, format!("ray leaves bound {j}")));
        }
    }
    let gain = lp.objective_value(r) * flip(lp);
    if !gain.is_negative() {
        return Ok(Verdict::fail(Violation::RayNotImproving, "ray does not improve"));
    }
    Ok(Verdict::ok("improving ray"))
}
