//! Exact linear programming with primal, dual and infeasibility certificates.
//!
//! Dual values follow one convention for both senses. With reduced costs
//! `d = c − Aᵀy` the dual objective is `bᵀy + Σ_j d_j·(bound picked by the
//! sign of d_j)`. For a minimization, `y_i ≥ 0` on `≥` rows and `y_i ≤ 0` on
//! `≤` rows, `d_j > 0` needs a finite lower bound and `d_j < 0` a finite
//! upper bound. For a maximization every one of those signs flips.
//!
//! A Farkas certificate for an infeasible program is stated in the
//! minimization convention with `c = 0`: it obeys the same sign rules and
//! has a strictly positive dual objective.

mod check;
pub(crate) mod engine;
mod text;

pub use check::{check_duality, Verdict, Violation};
pub use text::{from_text, to_text};

use crate::error::{Error, Result};
use crate::rational::Rational;
use engine::{Engine, Outcome};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_CAPACITY: usize = 200_000;
static CAPACITY: AtomicUsize = AtomicUsize::new(DEFAULT_CAPACITY);

/// Largest allowed `constraints × variables` for [`solve`].
pub fn capacity() -> usize {
    CAPACITY.load(Ordering::Relaxed)
}

pub fn set_capacity(entries: usize) {
    CAPACITY.store(entries, Ordering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(&self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bound {
    pub fn nonneg() -> Self {
        Bound {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Bound {
            lower: None,
            upper: None,
        }
    }

    pub fn between(l: Rational, u: Rational) -> Self {
        Bound {
            lower: Some(l),
            upper: Some(u),
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| v >= l) && self.upper.as_ref().is_none_or(|u| v <= u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LinearProgram {
    /// `nvars` variables, all `≥ 0`, zero objective.
    pub fn new(sense: Sense, nvars: usize) -> Self {
        LinearProgram {
            sense,
            objective: vec![Rational::zero(); nvars],
            constraints: Vec::new(),
            bounds: vec![Bound::nonneg(); nvars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_objective(&mut self, j: usize, c: Rational) {
        self.objective[j] = c;
    }

    pub fn set_bound(&mut self, j: usize, b: Bound) {
        self.bounds[j] = b;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars(), "row length");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Adds a row given as (variable, coefficient) pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, Rational)], rel: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.num_vars()];
        for (j, c) in terms {
            coeffs[*j] += c;
        }
        self.add_constraint(coeffs, rel, rhs);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Dimension(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.constraints.len().max(1) * self.num_vars().max(1)
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

pub(crate) fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (c, v) in a.iter().zip(x) {
        if !c.is_zero() && !v.is_zero() {
            s += c * v;
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: Status,
    /// Optimal point, or a feasible point when unbounded.
    pub primal: Vec<Rational>,
    /// Row duals (empty unless optimal).
    pub dual: Vec<Rational>,
    pub objective: Rational,
    pub farkas: Option<Vec<Rational>>,
    /// Improving direction when unbounded.
    pub ray: Option<Vec<Rational>>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

/// How an original variable is expressed through standard-form columns.
enum VarMap {
    /// x = l + col
    Shift(usize, Rational),
    /// x = u − col
    Mirror(usize, Rational),
    /// x = pos − neg
    Split(usize, usize),
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with_capacity(lp, capacity())
}

pub fn solve_with_capacity(lp: &LinearProgram, cap: usize) -> Result<LpSolution> {
    lp.validate()?;
    crate::error::check_cap("LP constraint entries", lp.size(), cap)?;
    let n = lp.num_vars();
    let sign = match lp.sense {
        Sense::Min => Rational::one(),
        Sense::Max => -Rational::one(),
    };

    // Structural columns.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), u) => {
                maps.push(VarMap::Shift(ncols, l.clone()));
                if let Some(u) = u {
                    bound_rows.push((ncols, u - l));
                }
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Mirror(ncols, u.clone()));
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split(ncols, ncols + 1));
                ncols += 2;
            }
        }
    }
    let n_struct = ncols;
    let m_orig = lp.constraints.len();
    let m = m_orig + bound_rows.len();

    let mut cols: Vec<engine::Column> = vec![Vec::new(); n_struct];
    let mut costs = vec![Rational::zero(); n_struct];
    let mut rhs = vec![Rational::zero(); m];
    let mut row_sign = vec![Rational::one(); m];

    for (j, map) in maps.iter().enumerate() {
        let c = &lp.objective[j] * &sign;
        match map {
            VarMap::Shift(k, _) => costs[*k] = c,
            VarMap::Mirror(k, _) => costs[*k] = -c,
            VarMap::Split(p, q) => {
                costs[*q] = -&c;
                costs[*p] = c;
            }
        }
    }

    let mut slack_of_row: Vec<Option<(Rational, bool)>> = vec![None; m];
    for (i, row) in lp.constraints.iter().enumerate() {
        let mut b = row.rhs.clone();
        for (j, a) in row.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                VarMap::Shift(_, l) => b -= a * l,
                VarMap::Mirror(_, u) => b -= a * u,
                VarMap::Split(..) => {}
            }
        }
        let s = if b.is_negative() {
            -Rational::one()
        } else {
            Rational::one()
        };
        rhs[i] = &b * &s;
        row_sign[i] = s.clone();
        for (j, a) in row.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = a * &s;
            match &maps[j] {
                VarMap::Shift(k, _) => cols[*k].push((i, v)),
                VarMap::Mirror(k, _) => cols[*k].push((i, -v)),
                VarMap::Split(p, q) => {
                    cols[*q].push((i, -&v));
                    cols[*p].push((i, v));
                }
            }
        }
        slack_of_row[i] = match row.rel {
            Relation::Le => Some((s.clone(), false)),
            Relation::Ge => Some((-s.clone(), false)),
            Relation::Eq => None,
        };
    }
    for (t, (k, width)) in bound_rows.iter().enumerate() {
        let i = m_orig + t;
        let s = if width.is_negative() {
            -Rational::one()
        } else {
            Rational::one()
        };
        rhs[i] = width * &s;
        row_sign[i] = s.clone();
        cols[*k].push((i, s.clone()));
        slack_of_row[i] = Some((s, true));
    }

    let mut eng = Engine::new(rhs);
    for (col, c) in cols.into_iter().zip(costs) {
        eng.add_column(col, c);
    }
    let mut unit = vec![None; m];
    for (i, slack) in slack_of_row.iter().enumerate() {
        if let Some((coef, _)) = slack {
            let j = eng.add_column(vec![(i, coef.clone())], Rational::zero());
            if coef.is_one() {
                unit[i] = Some(j);
            }
        }
    }
    eng.start(&unit);
    let outcome = eng.optimize();
    let pivots = eng.pivots;

    let recover = |vals: &[Rational], with_shift: bool| -> Vec<Rational> {
        maps.iter()
            .map(|mp| match mp {
                VarMap::Shift(k, l) => {
                    if with_shift {
                        l + &vals[*k]
                    } else {
                        vals[*k].clone()
                    }
                }
                VarMap::Mirror(k, u) => {
                    if with_shift {
                        u - &vals[*k]
                    } else {
                        -&vals[*k]
                    }
                }
                VarMap::Split(p, q) => &vals[*p] - &vals[*q],
            })
            .collect()
    };

    Ok(match outcome {
        Outcome::Optimal => {
            let x = recover(&eng.values(), true);
            let ys = eng.duals();
            let dual: Vec<Rational> = (0..m_orig)
                .map(|i| &ys[i] * &row_sign[i] * &sign)
                .collect();
            let objective = lp.objective_value(&x);
            LpSolution {
                status: Status::Optimal,
                primal: x,
                dual,
                objective,
                farkas: None,
                ray: None,
                pivots,
            }
        }
        Outcome::Infeasible(y) => {
            let farkas = (0..m_orig).map(|i| &y[i] * &row_sign[i]).collect();
            LpSolution {
                status: Status::Infeasible,
                primal: Vec::new(),
                dual: Vec::new(),
                objective: Rational::zero(),
                farkas: Some(farkas),
                ray: None,
                pivots,
            }
        }
        Outcome::Unbounded(d) => {
            let ray = recover(&d, false);
            LpSolution {
                status: Status::Unbounded,
                primal: recover(&eng.values(), true),
                dual: Vec::new(),
                objective: Rational::zero(),
                farkas: None,
                ray: Some(ray),
                pivots,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn one_variable_max() {
        let mut lp = LinearProgram::new(Sense::Max, 1);
        lp.set_objective(0, int(1));
        lp.add_constraint(vec![int(1)], Relation::Le, int(3));
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.objective, int(3));
        assert!(check_duality(&lp, &s).unwrap().pass);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(Sense::Max, 1);
        lp.set_objective(0, int(1));
        lp.add_constraint(vec![int(1)], Relation::Ge, int(1));
        lp.add_constraint(vec![int(1)], Relation::Le, int(0));
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, Status::Infeasible);
        assert!(check_duality(&lp, &s).unwrap().pass);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(Sense::Max, 2);
        lp.set_objective(0, int(1));
        lp.set_bound(1, Bound::free());
        lp.add_constraint(vec![int(1), int(-1)], Relation::Le, int(2));
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, Status::Unbounded);
        assert!(check_duality(&lp, &s).unwrap().pass);
    }

    #[test]
    fn mixed_bounds_and_equalities() {
        // min x - 2y + z, x + y + z = 4, -1 ≤ y ≤ 3, z ≤ 5 (free below), x ≥ 1
        let mut lp = LinearProgram::new(Sense::Min, 3);
        lp.objective = vec![int(1), int(-2), int(1)];
        lp.set_bound(0, Bound { lower: Some(int(1)), upper: None });
        lp.set_bound(1, Bound::between(int(-1), int(3)));
        lp.set_bound(2, Bound { lower: None, upper: Some(int(5)) });
        lp.add_constraint(vec![int(1), int(1), int(1)], Relation::Eq, int(4));
        lp.add_constraint(vec![int(1), int(0), int(-1)], Relation::Ge, rat(-7, 2));
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, Status::Optimal);
        let v = check_duality(&lp, &s).unwrap();
        assert!(v.pass, "{v:?}");
    }
}
