//! Degrees, weights and margins of Boolean functions.
//!
//! LP-based measures come with certificates in [`MeasureReport`]: a primal
//! polynomial and a dual signed measure on inputs. [`MeasureReport::verify`]
//! re-checks both against the function without trusting the solver.

mod combinatorial;
pub(crate) mod design;
mod report;

pub use combinatorial::{
    gamma_value, odd_even_degree, pp_upper_levels, pp_upper_poly, pp_weight_bound, r_value, RValue,
    MAX_PP_EXPANSION_ARITY,
};
pub use design::{Method, Target};
pub use report::{Basis, DistributionWitness, MeasureReport, PolynomialWitness};

use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::fourier::FourierTable;
use crate::lp::{self, Bound, LinearProgram, Relation, Sense, Status};
use crate::rational::{format_rational, int, Rational};
use design::Design;
use num_traits::{One, Signed, Zero};

/// Largest arity for LPs with one variable per monomial of any degree.
pub const MAX_FULL_WEIGHT_ARITY: u32 = 6;
/// Largest arity for degree-restricted LPs.
pub const MAX_DEGREE_ARITY: u32 = 12;
/// Largest arity for support enumeration.
pub const MAX_MONOMIAL_ARITY: u32 = 4;

const NOTE_CLOSED: &str = "infimum attained at closed constraint";
const NOTE_RELAXED: &str = "rational relaxation of the integer-weight optimum; a lower bound on it";

/// Σ_v t_p A_pv α_v ≥ 1 with α free. Feasible iff some polynomial on the
/// design's monomials sign-represents the target.
pub(crate) fn sign_rep_program(d: &Design) -> LinearProgram {
    let v = d.num_vars();
    let mut lp = LinearProgram::new(Sense::Min, v);
    for j in 0..v {
        lp.set_bound(j, Bound::free());
    }
    for (row, t) in d.a.iter().zip(&d.target) {
        lp.add_constraint(row.iter().map(|a| a * t).collect(), Relation::Ge, int(1));
    }
    lp
}

/// Columns α′ (0..V), α″ (V..2V), then extra columns; the split row
/// Σ t A (α′ − α″) for one design row.
fn split_row(d: &Design, p: usize, extra: usize, scale: &Rational) -> Vec<Rational> {
    let v = d.num_vars();
    let mut r = vec![Rational::zero(); 2 * v + extra];
    for j in 0..v {
        let a = &d.a[p][j] * scale;
        r[v + j] = -&a;
        r[j] = a;
    }
    r
}

fn split_coeffs(d: &Design, x: &[Rational]) -> Vec<Rational> {
    let v = d.num_vars();
    (0..v).map(|j| &x[j] - &x[v + j]).collect()
}

/// min Σ ω(α′+α″) s.t. t·p ≥ 1 on every row.
pub(crate) fn threshold_weight_program(d: &Design) -> LinearProgram {
    let v = d.num_vars();
    let mut lp = LinearProgram::new(Sense::Min, 2 * v);
    for j in 0..v {
        lp.objective[j] = d.weight[j].clone();
        lp.objective[v + j] = d.weight[j].clone();
    }
    for p in 0..d.points() {
        let t = d.target[p].clone();
        lp.add_constraint(split_row(d, p, 0, &t), Relation::Ge, int(1));
    }
    lp
}

/// max Δ s.t. t·p ≥ Δ on every row and wt(p) ≤ 1. Δ is the last column.
pub(crate) fn margin_program(d: &Design) -> LinearProgram {
    let v = d.num_vars();
    let mut lp = LinearProgram::new(Sense::Max, 2 * v + 1);
    lp.objective[2 * v] = int(1);
    lp.set_bound(2 * v, Bound::free());
    for p in 0..d.points() {
        let t = d.target[p].clone();
        let mut r = split_row(d, p, 1, &t);
        r[2 * v] = int(-1);
        lp.add_constraint(r, Relation::Ge, Rational::zero());
    }
    let mut w = vec![Rational::zero(); 2 * v + 1];
    for j in 0..v {
        w[j] = d.weight[j].clone();
        w[v + j] = d.weight[j].clone();
    }
    lp.add_constraint(w, Relation::Le, int(1));
    lp
}

/// min ε s.t. |p − t| ≤ ε on every row. ε is the last column.
pub(crate) fn uniform_error_program(d: &Design) -> LinearProgram {
    let v = d.num_vars();
    let mut lp = LinearProgram::new(Sense::Min, v + 1);
    for j in 0..v {
        lp.set_bound(j, Bound::free());
    }
    lp.objective[v] = int(1);
    for (row, t) in d.a.iter().zip(&d.target) {
        let mut up = row.clone();
        up.push(int(1));
        lp.add_constraint(up, Relation::Ge, t.clone());
        let mut down = row.clone();
        down.push(int(-1));
        lp.add_constraint(down, Relation::Le, t.clone());
    }
    lp
}

/// min Σ ω(α′+α″) s.t. |p − t| ≤ ε. Rows alternate lower, upper.
pub(crate) fn approx_weight_program(d: &Design, eps: &Rational) -> LinearProgram {
    let v = d.num_vars();
    let mut lp = LinearProgram::new(Sense::Min, 2 * v);
    for j in 0..v {
        lp.objective[j] = d.weight[j].clone();
        lp.objective[v + j] = d.weight[j].clone();
    }
    let one = Rational::one();
    for p in 0..d.points() {
        let r = split_row(d, p, 0, &one);
        lp.add_constraint(r.clone(), Relation::Ge, &d.target[p] - eps);
        lp.add_constraint(r, Relation::Le, &d.target[p] + eps);
    }
    lp
}

fn solve_checked(lp: &LinearProgram) -> Result<lp::LpSolution> {
    let sol = lp::solve(lp)?;
    let v = lp::check_duality(lp, &sol)?;
    if !v.pass {
        return Err(Error::Defect(format!("LP certificate rejected: {}", v.detail)));
    }
    Ok(sol)
}

fn sign_representable(d: &Design) -> Result<bool> {
    Ok(solve_checked(&sign_rep_program(d))?.status == Status::Optimal)
}

/// A degree that surely suffices: deg f, or the number of sign changes of
/// the predicate.
fn degree_upper_bound(t: Target<'_>, d: &Design) -> u32 {
    if d.levels {
        let p = t.predicate().expect("level design of a symmetric target");
        let v = p.values();
        return v.windows(2).filter(|w| w[0] != w[1]).count() as u32;
    }
    match t {
        Target::Function(f) => {
            let ft = FourierTable::of(f);
            (0..f.size() as u32)
                .filter(|&m| ft.get(m) != 0)
                .map(|m| m.count_ones())
                .max()
                .unwrap_or(0)
        }
        Target::Predicate(p) => p.arity(),
    }
}

/// Least d such that a degree-d polynomial sign-represents f.
pub fn sign_degree(f: &BooleanFunction) -> Result<u32> {
    sign_degree_with(f, Method::Auto)
}

pub fn sign_degree_with<'a>(t: impl Into<Target<'a>>, method: Method) -> Result<u32> {
    let t = t.into();
    let n = t.arity();
    let top = Design::build(t, Some(n), method, MAX_DEGREE_ARITY)?;
    let upper = degree_upper_bound(t, &top);
    for deg in 0..upper {
        let d = Design::build(t, Some(deg), method, MAX_DEGREE_ARITY)?;
        if sign_representable(&d)? {
            return Ok(deg);
        }
    }
    Ok(upper)
}

fn eps_of(d: &Design) -> Result<Rational> {
    let sol = solve_checked(&uniform_error_program(d))?;
    Ok(sol.objective)
}

/// min over degree-≤d polynomials p of max_x |p(x) − f(x)|.
pub fn epsilon_d(f: &BooleanFunction, d: u32) -> Result<Rational> {
    epsilon_d_with(f, d, Method::Auto)
}

pub fn epsilon_d_with<'a>(t: impl Into<Target<'a>>, d: u32, method: Method) -> Result<Rational> {
    let t = t.into();
    if d > t.arity() {
        return Err(Error::invalid(format!("degree {d} exceeds arity {}", t.arity())));
    }
    if d == t.arity() {
        return Ok(Rational::zero());
    }
    eps_of(&Design::build(t, Some(d), method, MAX_DEGREE_ARITY)?)
}

fn check_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(Error::invalid(format!(
            "error {} must lie strictly between 0 and 1",
            format_rational(eps)
        )));
    }
    Ok(())
}

/// Least d with `epsilon_d(f, d) ≤ ε`.
pub fn approx_degree(f: &BooleanFunction, eps: &Rational) -> Result<u32> {
    approx_degree_with(f, eps, Method::Auto)
}

pub fn approx_degree_with<'a>(t: impl Into<Target<'a>>, eps: &Rational, method: Method) -> Result<u32> {
    let t = t.into();
    check_eps(eps)?;
    let n = t.arity();
    let top = Design::build(t, Some(n), method, MAX_DEGREE_ARITY)?;
    let upper = if top.levels { n } else { degree_upper_bound(t, &top) };
    for d in 0..upper {
        if epsilon_d_with(t, d, method)? <= *eps {
            return Ok(d);
        }
    }
    Ok(upper)
}

fn params(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// m(f) = max over wt(p) ≤ 1 of min_x p(x) f(x).
pub fn margin(f: &BooleanFunction) -> Result<MeasureReport> {
    margin_with(f, Method::Auto)
}

pub fn margin_with<'a>(t: impl Into<Target<'a>>, method: Method) -> Result<MeasureReport> {
    let d = Design::build(t.into(), None, method, MAX_FULL_WEIGHT_ARITY)?;
    let lp = margin_program(&d);
    let sol = solve_checked(&lp)?;
    let np = d.points();
    let mu: Vec<Rational> = sol.dual[..np].iter().map(|y| -y).collect();
    let c = split_coeffs(&d, &sol.primal);
    Ok(MeasureReport::new("margin", &d, params(&[]))
        .with_value(sol.objective)
        .with_primal(&d, &c)
        .with_dual(&d, mu))
}

/// wt_±(f): least weight of p with p(x) f(x) ≥ 1 everywhere.
pub fn threshold_weight(f: &BooleanFunction) -> Result<MeasureReport> {
    threshold_weight_with(f, Method::Auto)
}

pub fn threshold_weight_with<'a>(t: impl Into<Target<'a>>, method: Method) -> Result<MeasureReport> {
    let d = Design::build(t.into(), None, method, MAX_FULL_WEIGHT_ARITY)?;
    weight_report("threshold_weight", &d, params(&[]))
}

fn weight_report(name: &str, d: &Design, ps: Vec<(String, String)>) -> Result<MeasureReport> {
    let sol = solve_checked(&threshold_weight_program(d))?;
    let rep = MeasureReport::new(name, d, ps);
    if sol.status == Status::Infeasible {
        return Ok(rep.with_note("infeasible: degree is below the sign degree"));
    }
    let c = split_coeffs(d, &sol.primal);
    Ok(rep
        .with_value(sol.objective)
        .with_primal(d, &c)
        .with_dual(d, sol.dual))
}

/// Least weight of a degree-≤deg polynomial with p(x) f(x) ≥ 1, over
/// rational coefficients. `value` is `None` when no such polynomial exists.
pub fn degree_bounded_threshold_weight(f: &BooleanFunction, deg: u32) -> Result<MeasureReport> {
    degree_bounded_threshold_weight_with(f, deg, Method::Auto)
}

pub fn degree_bounded_threshold_weight_with<'a>(
    t: impl Into<Target<'a>>,
    deg: u32,
    method: Method,
) -> Result<MeasureReport> {
    let t = t.into();
    let limit = if deg >= t.arity() {
        MAX_FULL_WEIGHT_ARITY
    } else {
        MAX_DEGREE_ARITY
    };
    let d = Design::build(t, Some(deg), method, limit)?;
    Ok(weight_report(
        "degree_bounded_threshold_weight",
        &d,
        params(&[("d", deg.to_string())]),
    )?
    .with_note(NOTE_RELAXED))
}

/// wt_ε(f): least weight of p with |p(x) − f(x)| ≤ ε everywhere.
pub fn approx_weight(f: &BooleanFunction, eps: &Rational) -> Result<MeasureReport> {
    approx_weight_with(f, eps, Method::Auto)
}

pub fn approx_weight_with<'a>(t: impl Into<Target<'a>>, eps: &Rational, method: Method) -> Result<MeasureReport> {
    check_eps(eps)?;
    let d = Design::build(t.into(), None, method, MAX_FULL_WEIGHT_ARITY)?;
    let sol = solve_checked(&approx_weight_program(&d, eps))?;
    let psi: Vec<Rational> = sol.dual.chunks(2).map(|y| &y[0] + &y[1]).collect();
    let c = split_coeffs(&d, &sol.primal);
    Ok(
        MeasureReport::new("approx_weight", &d, params(&[("eps", format_rational(eps))]))
            .with_value(sol.objective)
            .with_primal(&d, &c)
            .with_dual(&d, psi)
            .with_note(NOTE_CLOSED),
    )
}

/// mon_±(f): fewest monomials in a sign-representing polynomial.
pub fn signed_monomial_complexity(f: &BooleanFunction) -> Result<u32> {
    let n = f.arity();
    crate::error::check_cap("arity for support enumeration", n as usize, MAX_MONOMIAL_ARITY as usize)?;
    let ft = FourierTable::of(f);
    let nonzero = ft.scaled().iter().filter(|&&c| c != 0).count() as u32;
    let total = 1u32 << n;
    for size in 1..nonzero {
        let mut found = false;
        for_each_subset(total, size, |support| {
            let d = Design::full_with_support(f, support.to_vec());
            match sign_representable(&d) {
                Ok(true) => {
                    found = true;
                    false
                }
                Ok(false) => true,
                Err(_) => true,
            }
        });
        if found {
            return Ok(size);
        }
    }
    Ok(nonzero)
}

/// Calls `visit` on every `size`-subset of 0..total in lexicographic order
/// until it returns false.
fn for_each_subset(total: u32, size: u32, mut visit: impl FnMut(&[u32]) -> bool) {
    let k = size as usize;
    let mut idx: Vec<u32> = (0..size).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < total - (k - i) as u32 {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::SymmetricPredicate;
    use crate::rational::rat;

    fn maj3() -> BooleanFunction {
        BooleanFunction::majority(3).unwrap()
    }

    #[test]
    fn subsets_enumerated() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[5], vec![2, 3]);
    }

    #[test]
    fn degrees_of_small_functions() {
        assert_eq!(sign_degree(&BooleanFunction::parity(4).unwrap()).unwrap(), 4);
        assert_eq!(sign_degree(&maj3()).unwrap(), 1);
        assert_eq!(sign_degree(&BooleanFunction::constant(3, 1).unwrap()).unwrap(), 0);
        assert_eq!(approx_degree(&maj3(), &rat(2, 3)).unwrap(), 1);
        assert_eq!(approx_degree(&BooleanFunction::parity(3).unwrap(), &rat(1, 3)).unwrap(), 3);
        assert_eq!(epsilon_d(&BooleanFunction::parity(2).unwrap(), 1).unwrap(), int(1));
    }

    #[test]
    fn margin_and_weight_are_reciprocal() {
        let f = maj3();
        let m = margin(&f).unwrap();
        let w = threshold_weight(&f).unwrap();
        assert_eq!(m.value.clone().unwrap() * w.value.clone().unwrap(), int(1));
        assert!(m.verify(&f).unwrap());
        assert!(w.verify(&f).unwrap());
        let mf = margin_with(&f, Method::Full).unwrap();
        assert_eq!(mf.value, m.value);
        assert!(mf.verify(&f).unwrap());
    }

    #[test]
    fn approx_weight_of_constant() {
        let f = BooleanFunction::constant(2, 1).unwrap();
        let r = approx_weight(&f, &rat(1, 2)).unwrap();
        assert_eq!(r.value, Some(rat(1, 2)));
        assert!(r.verify(&f).unwrap());
    }

    #[test]
    fn degree_bounded_weight_of_parity() {
        let f = BooleanFunction::parity(3).unwrap();
        assert_eq!(degree_bounded_threshold_weight(&f, 3).unwrap().value, Some(int(1)));
        assert_eq!(degree_bounded_threshold_weight(&f, 2).unwrap().value, None);
    }

    #[test]
    fn monomial_complexity() {
        assert_eq!(signed_monomial_complexity(&BooleanFunction::parity(2).unwrap()).unwrap(), 1);
        assert_eq!(signed_monomial_complexity(&maj3()).unwrap(), 3);
        assert_eq!(signed_monomial_complexity(&BooleanFunction::constant(3, -1).unwrap()).unwrap(), 1);
    }

    #[test]
    fn symmetric_only_on_symmetric_inputs() {
        let f = BooleanFunction::character(3, 0b001).unwrap();
        assert!(margin_with(&f, Method::Symmetric).is_err());
        let p = SymmetricPredicate::parity(20).unwrap();
        assert_eq!(margin_with(&p, Method::Auto).unwrap().value, Some(int(1)));
    }
}
