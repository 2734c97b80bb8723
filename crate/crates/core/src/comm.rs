//! Discrepancy of small communication matrices, lifted-distribution bounds,
//! pattern-matrix composition, the generalized-discrepancy and BPP bounds,
//! and embeddings of threshold functions into the universal threshold.

use crate::boolean::{BooleanFunction, Ltf};
use crate::error::{check_cap, Error, Result};
use crate::fourier::fwht_generic;
use crate::lifting::{MonomialList, SignedMonomial};
use crate::lp::engine::{Column, Engine, Outcome};
use crate::matrix::{xor_compose, CommMatrix};
use crate::measures::design::{Design, Method, Target};
use crate::measures::{self, MAX_FULL_WEIGHT_ARITY};
use crate::lp::{self, Bound, LinearProgram, Relation, Sense, Status};
use crate::rational::{format_rational, int, log2_abs, pow2, rat, to_f64, Rational};
use crate::report::{BoundKind, BoundReport, Direction};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Largest side of a matrix whose rectangles are enumerated.
pub const MAX_RECT_SIDE: usize = 8;
pub const MAX_LIFTED_ARITY: u32 = 12;
pub const MAX_SANDWICH_ARITY: u32 = 3;
pub const MAX_PATTERN_ARITY: u32 = 5;
pub const MAX_PM_BOUND_ARITY: u32 = 10;
pub const MAX_BPP_FULL_ARITY: u32 = 4;
pub const MAX_BPP_SYMMETRIC_ARITY: u32 = 16;
/// Pointwise checks of embeddings run up to this source arity.
pub const MAX_EMBED_CHECK_ARITY: u32 = 16;

/// Non-negative rational masses on the cells of a matrix, summing to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    mass: Vec<Rational>,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} masses for a {rows}×{cols} matrix",
                mass.len()
            )));
        }
        if let Some(i) = mass.iter().position(|m| m.is_negative()) {
            return Err(Error::invalid(format!("negative mass at cell {i}")));
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "masses sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(JointDistribution { rows, cols, mass })
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        let m = rat(1, (rows * cols) as i64);
        JointDistribution {
            rows,
            cols,
            mass: vec![m; rows * cols],
        }
    }

    pub fn point(rows: usize, cols: usize, r: usize, c: usize) -> Result<Self> {
        if r >= rows || c >= cols {
            return Err(Error::invalid(format!("cell ({r}, {c}) outside {rows}×{cols}")));
        }
        let mut mass = vec![Rational::zero(); rows * cols];
        mass[r * cols + c] = Rational::one();
        Ok(JointDistribution { rows, cols, mass })
    }

    /// μ^⊕(x, y) = μ(x ⊕ y) / 2^n for a distribution μ on n-bit inputs.
    pub fn lifted(mu: &[Rational]) -> Result<Self> {
        check_distribution(mu)?;
        let size = mu.len();
        let scale = rat(1, size as i64);
        let mut mass = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                mass.push(&mu[x ^ y] * &scale);
            }
        }
        Ok(JointDistribution {
            rows: size,
            cols: size,
            mass,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.mass[r * self.cols + c]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }
}

/// Checks that `mu` is a distribution over 2^n points.
fn check_distribution(mu: &[Rational]) -> Result<u32> {
    if !mu.len().is_power_of_two() {
        return Err(Error::Dimension(format!(
            "distribution of length {} is not over 2^n inputs",
            mu.len()
        )));
    }
    if mu.iter().any(|m| m.is_negative()) {
        return Err(Error::invalid("distribution has a negative mass"));
    }
    let total: Rational = mu.iter().sum();
    if !total.is_one() {
        return Err(Error::invalid(format!(
            "distribution sums to {}, not 1",
            format_rational(&total)
        )));
    }
    Ok(mu.len().trailing_zeros())
}

fn check_rect_cap(m: &CommMatrix) -> Result<()> {
    check_cap("matrix rows for rectangle enumeration", m.rows(), MAX_RECT_SIDE)?;
    check_cap("matrix columns for rectangle enumeration", m.cols(), MAX_RECT_SIDE)
}

/// A rectangle given by row and column bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Rectangle {
    pub rows: u32,
    pub cols: u32,
}

/// For each row set S, the best column sets for a positive and a negative
/// total of M·λ, with the totals.
fn for_each_row_set(
    m: &CommMatrix,
    weight: &[Rational],
    mut visit: impl FnMut(Rectangle, &Rational, Rectangle, &Rational),
) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut sums = vec![Rational::zero(); cols];
    for s in 1u32..1 << rows {
        for (c, v) in sums.iter_mut().enumerate() {
            *v = Rational::zero();
            for r in (0..rows).filter(|r| s >> r & 1 == 1) {
                let w = &weight[r * cols + c];
                if w.is_zero() {
                    continue;
                }
                if m.neg(r, c) {
                    *v -= w;
                } else {
                    *v += w;
                }
            }
        }
        let (mut pos, mut neg) = (Rational::zero(), Rational::zero());
        let (mut tp, mut tn) = (0u32, 0u32);
        for (c, v) in sums.iter().enumerate() {
            if v.is_positive() {
                pos += v;
                tp |= 1 << c;
            } else if v.is_negative() {
                neg -= v;
                tn |= 1 << c;
            }
        }
        visit(
            Rectangle { rows: s, cols: tp },
            &pos,
            Rectangle { rows: s, cols: tn },
            &neg,
        );
    }
}

/// disc_λ(M) = max over rectangles R of |Σ_R M λ|, with a maximizing
/// rectangle.
pub fn disc_under_with_rectangle(m: &CommMatrix, lambda: &JointDistribution) -> Result<(Rational, Rectangle)> {
    check_rect_cap(m)?;
    if lambda.rows != m.rows() || lambda.cols != m.cols() {
        return Err(Error::Dimension(format!(
            "distribution is {}×{}, matrix is {}×{}",
            lambda.rows,
            lambda.cols,
            m.rows(),
            m.cols()
        )));
    }
    let mut best = Rational::zero();
    let mut arg = Rectangle { rows: 0, cols: 0 };
    for_each_row_set(m, &lambda.mass, |rp, pos, rn, neg| {
        if *pos > best {
            best = pos.clone();
            arg = rp;
        }
        if *neg > best {
            best = neg.clone();
            arg = rn;
        }
    });
    Ok((best, arg))
}

pub fn disc_under(m: &CommMatrix, lambda: &JointDistribution) -> Result<Rational> {
    Ok(disc_under_with_rectangle(m, lambda)?.0)
}

/// Columns priced in per round of column generation.
const COLUMNS_PER_ROUND: usize = 16;

/// Cell classes of a matrix invariant under (x, y) ↦ (x ⊕ a, y ⊕ a): the
/// class of (x, y) is x ⊕ y. `None` when M is not of that form.
fn xor_orbits(m: &CommMatrix) -> Option<Vec<usize>> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows != cols || !rows.is_power_of_two() {
        return None;
    }
    for x in 0..rows {
        for y in 0..cols {
            if m.neg(x, y) != m.neg(x ^ y, 0) {
                return None;
            }
        }
    }
    Some((0..rows * cols).map(|c| (c / cols) ^ (c % cols)).collect())
}

/// disc(M) = min_λ disc_λ(M), with an optimal λ.
///
/// Solved as max z over mixtures w of signed rectangles with
/// z ≤ Σ_R w_R s_R M[c] 1[c ∈ R] at every cell, whose dual is the
/// minimization over λ. Rectangles enter by column generation; pricing is
/// exhaustive over row sets.
///
/// When M is invariant under XOR translation, averaging any λ over the
/// translations does not raise disc_λ, so λ is restricted to the form
/// μ(x ⊕ y)/2^n and the cell constraints are averaged over each orbit.
pub fn disc_exact(m: &CommMatrix) -> Result<(Rational, JointDistribution)> {
    check_rect_cap(m)?;
    let (rows, cols) = (m.rows(), m.cols());
    let cells = rows * cols;
    let class: Vec<usize> = xor_orbits(m).unwrap_or_else(|| (0..cells).collect());
    let classes = class.iter().max().map_or(0, |k| k + 1);
    let mut size = vec![0i64; classes];
    for &k in &class {
        size[k] += 1;
    }
    let sum_row = classes;
    let mut engine = Engine::new(
        (0..=classes)
            .map(|i| if i == sum_row { int(1) } else { int(0) })
            .collect(),
    );
    let all: Column = (0..classes).map(|k| (k, int(1))).collect();
    let none: Column = (0..classes).map(|k| (k, int(-1))).collect();
    engine.add_column(all, int(-1));
    engine.add_column(none, int(1));
    let mut unit = vec![None; classes + 1];
    for (k, u) in unit.iter_mut().enumerate().take(classes) {
        *u = Some(engine.add_column(vec![(k, int(1))], int(0)));
    }
    let rect_column = |r: Rectangle, sign: i64| -> Column {
        let mut acc = vec![0i64; classes];
        for i in (0..rows).filter(|i| r.rows >> i & 1 == 1) {
            for j in (0..cols).filter(|j| r.cols >> j & 1 == 1) {
                acc[class[i * cols + j]] += if m.neg(i, j) { -sign } else { sign };
            }
        }
        let mut col: Column = acc
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(k, &a)| (k, rat(-a, size[k])))
            .collect();
        col.push((sum_row, int(1)));
        col
    };
    let full = Rectangle {
        rows: (1u32 << rows) - 1,
        cols: (1u32 << cols) - 1,
    };
    engine.add_column(rect_column(full, 1), int(0));
    engine.add_column(rect_column(full, -1), int(0));
    engine.start(&unit);
    let mut seen = std::collections::HashSet::new();
    seen.insert((full, 1));
    seen.insert((full, -1));
    loop {
        match engine.optimize() {
            Outcome::Optimal => {}
            _ => return Err(Error::Defect("discrepancy master problem not optimal".into())),
        }
        let y = engine.duals();
        let lambda: Vec<Rational> = class.iter().map(|&k| -&y[k] / int(size[k])).collect();
        let t = -&y[sum_row];
        let mut found: Vec<(Rational, Rectangle, i64)> = Vec::new();
        for_each_row_set(m, &lambda, |rp, pos, rn, neg| {
            if *pos > t && !seen.contains(&(rp, 1)) {
                found.push((pos.clone(), rp, 1));
            }
            if *neg > t && !seen.contains(&(rn, -1)) {
                found.push((neg.clone(), rn, -1));
            }
        });
        if found.is_empty() {
            let dist = JointDistribution::new(rows, cols, lambda)
                .map_err(|e| Error::Defect(format!("discrepancy dual is not a distribution: {e}")))?;
            let check = disc_under(m, &dist)?;
            if check != t {
                return Err(Error::Defect(format!(
                    "discrepancy certificate gives {} but the program gives {}",
                    format_rational(&check),
                    format_rational(&t)
                )));
            }
            return Ok((t, dist));
        }
        found.sort_by(|a, b| b.0.cmp(&a.0));
        for (_, r, s) in found.into_iter().take(COLUMNS_PER_ROUND) {
            seen.insert((r, s));
            engine.add_column(rect_column(r, s), int(0));
        }
    }
}

/// 2^n·||(fμ)^||_∞ = max_S |Σ_x f(x) μ(x) χ_S(x)|, an upper bound on the
/// discrepancy of f∘XOR under μ^⊕.
pub fn disc_lifted_bound(f: &BooleanFunction, mu: &[Rational]) -> Result<Rational> {
    let n = f.arity();
    check_cap("arity for the lifted bound", n as usize, MAX_LIFTED_ARITY as usize)?;
    if mu.len() != f.size() {
        return Err(Error::Dimension(format!(
            "distribution of length {} for a function of arity {n}",
            mu.len()
        )));
    }
    check_distribution(mu)?;
    let mut a: Vec<Rational> = (0..f.size())
        .map(|x| if f.bit(x as u32) { -&mu[x] } else { mu[x].clone() })
        .collect();
    fwht_generic(&mut a);
    Ok(a.into_iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero))
}

/// f∘XOR as a function of 2n variables: x in the low bits, y in the high.
pub fn xor_lift_function(f: &BooleanFunction) -> Result<BooleanFunction> {
    let n = f.arity();
    let mask = (1u32 << n) - 1;
    BooleanFunction::from_bits(2 * n, |v| f.bit((v & mask) ^ (v >> n)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichVerdict {
    pub pass: bool,
    #[serde(with = "crate::rational::as_string")]
    pub margin: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub disc: Rational,
    /// m(f∘XOR), when requested.
    pub margin_xor: Option<String>,
    /// Inequalities that failed.
    pub failed: Vec<String>,
}

/// Checks disc(f∘XOR) ≤ m(f) ≤ 4·disc(f∘XOR) exactly.
pub fn sandwich_check(f: &BooleanFunction) -> Result<SandwichVerdict> {
    sandwich_check_with(f, false)
}

/// As `sandwich_check`, optionally also placing m(f∘XOR) in the chain
/// m(f) ≤ m(f∘XOR) ≤ 4·disc(f∘XOR).
pub fn sandwich_check_with(f: &BooleanFunction, include_xor_margin: bool) -> Result<SandwichVerdict> {
    check_cap("arity for the sandwich check", f.arity() as usize, MAX_SANDWICH_ARITY as usize)?;
    let m = measures::margin_with(f, Method::Full)?
        .value
        .ok_or_else(|| Error::Defect("margin program returned no value".into()))?;
    let (disc, _) = disc_exact(&xor_compose(f)?)?;
    let four_disc = int(4) * &disc;
    let mut failed = Vec::new();
    if disc > m {
        failed.push("disc(f∘XOR) ≤ m(f)".to_string());
    }
    if m > four_disc {
        failed.push("m(f) ≤ 4·disc(f∘XOR)".to_string());
    }
    let mut margin_xor = None;
    if include_xor_margin && 2 * f.arity() <= MAX_FULL_WEIGHT_ARITY {
        let mx = measures::margin_with(&xor_lift_function(f)?, Method::Full)?
            .value
            .ok_or_else(|| Error::Defect("margin program returned no value".into()))?;
        if m > mx {
            failed.push("m(f) ≤ m(f∘XOR)".to_string());
        }
        if mx > four_disc {
            failed.push("m(f∘XOR) ≤ 4·disc(f∘XOR)".to_string());
        }
        margin_xor = Some(format_rational(&mx));
    }
    Ok(SandwichVerdict {
        pass: failed.is_empty(),
        margin: m,
        disc,
        margin_xor,
        failed,
    })
}

/// f∘PM: Alice holds (x_{i,1}, x_{i,2}) in row bits i and n+i, Bob holds
/// (z_i, w_i) in column bits i and n+i; the i-th input of f is
/// x_{i, z_i} ⊕ w_i.
pub fn pattern_compose(f: &BooleanFunction) -> Result<CommMatrix> {
    let n = f.arity();
    check_cap("arity for pattern composition", n as usize, MAX_PATTERN_ARITY as usize)?;
    let side = 1usize << (2 * n);
    let mask = (1usize << n) - 1;
    Ok(CommMatrix::from_fn(side, side, |r, c| {
        let (x1, x2) = (r & mask, r >> n);
        let (z, w) = (c & mask, c >> n);
        let u = ((x1 & !z) | (x2 & z)) ^ w;
        f.bit(u as u32)
    }))
}

/// The pattern-matrix bound
/// disc(f∘PM) ≤ min_{1≤d≤n} max{(n/W(f,d−1))^{1/2}, 2^{−d/2}},
/// with W(f, d−1) = ∞ when no degree-(d−1) polynomial sign-represents f.
pub fn pm_disc_bound(f: &BooleanFunction) -> Result<BoundReport> {
    let n = f.arity();
    check_cap("arity for the pattern-matrix bound", n as usize, MAX_PM_BOUND_ARITY as usize)?;
    let nr = int(n as i64);
    let mut best: Option<(Rational, u32, Option<Rational>)> = None;
    for d in 1..=n {
        let w = measures::degree_bounded_threshold_weight(f, d - 1)?.value;
        let tail = pow2(-(d as i64));
        let head = w.as_ref().map(|w| &nr / w).unwrap_or_else(Rational::zero);
        let sq = if head > tail { head } else { tail };
        if best.as_ref().is_none_or(|b| sq < b.0) {
            best = Some((sq, d, w));
        }
    }
    let (sq, d, w) = best.expect("n ≥ 1");
    let value = to_f64(&sq).sqrt();
    let w_text = w.as_ref().map(format_rational).unwrap_or_else(|| "infinite".into());
    Ok(BoundReport::new(BoundKind::Disc, Direction::Upper, value)
        .with_exact(sq, "square of the bound")
        .vacuous(value >= 1.0)
        .step(
            "pattern-matrix discrepancy bound",
            "disc(f∘PM) ≤ min_d max{(n/W(f,d−1))^{1/2}, 2^{−d/2}}",
            &[
                ("n", n.to_string()),
                ("d", d.to_string()),
                ("W(f,d-1)", w_text),
            ],
        )
        .note("W is the rational relaxation of the integer-weight optimum, so the bound is valid and may be loose")
        .note("W(f,d−1) is taken as infinite when degree d−1 cannot sign-represent f"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XorAndVerdict {
    pub pass: bool,
    #[serde(with = "crate::rational::as_string")]
    pub disc_xor: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub disc_pattern: Rational,
}

/// Checks disc(f∘PM)² ≤ 4n·disc(f∘XOR), the limit of
/// disc(f∘XOR) < δ ⟹ disc(f∘PM) ≤ √(4δn) as δ decreases to disc(f∘XOR).
pub fn xorand_check(f: &BooleanFunction) -> Result<XorAndVerdict> {
    if f.arity() != 1 {
        return Err(Error::capacity("arity for the XOR/pattern comparison", f.arity() as usize, 1));
    }
    let (dx, _) = disc_exact(&xor_compose(f)?)?;
    let (dp, _) = disc_exact(&pattern_compose(f)?)?;
    let pass = &dp * &dp <= int(4 * f.arity() as i64) * &dx;
    Ok(XorAndVerdict {
        pass,
        disc_xor: dx,
        disc_pattern: dp,
    })
}

/// corr_ν(F, G) = Σ ν F G.
pub fn correlation(f: &CommMatrix, g: &CommMatrix, nu: &JointDistribution) -> Result<Rational> {
    if f.rows() != g.rows() || f.cols() != g.cols() || nu.rows != f.rows() || nu.cols != f.cols() {
        return Err(Error::Dimension("matrices and distribution differ in shape".into()));
    }
    let mut s = Rational::zero();
    for r in 0..f.rows() {
        for c in 0..f.cols() {
            let m = nu.get(r, c);
            if f.neg(r, c) == g.neg(r, c) {
                s += m;
            } else {
                s -= m;
            }
        }
    }
    Ok(s)
}

/// R_ε(F) ≥ log2((δ − 1 + 2ε)/disc_ν(G)) from the correlation δ and any
/// upper bound on disc_ν(G).
pub fn gen_disc_from_parts(delta: &Rational, disc_upper: &Rational, eps: &Rational) -> Result<BoundReport> {
    if !disc_upper.is_positive() {
        return Err(Error::invalid("discrepancy bound must be positive"));
    }
    let gap = delta - int(1) + int(2) * eps;
    let inputs = [
        ("delta", format_rational(delta)),
        ("disc", format_rational(disc_upper)),
        ("eps", format_rational(eps)),
    ];
    let rep = if gap.is_positive() {
        let arg = &gap / disc_upper;
        let v = log2_abs(&arg);
        BoundReport::new(BoundKind::Bpp, Direction::Lower, v)
            .with_exact(arg, "argument of log2")
            .vacuous(v <= 0.0)
    } else {
        BoundReport::new(BoundKind::Bpp, Direction::Lower, f64::NEG_INFINITY)
            .vacuous(true)
            .note("δ − 1 + 2ε ≤ 0")
    };
    Ok(rep.step(
        "generalized discrepancy method",
        "R_ε(F) ≥ log2((δ − 1 + 2ε)/disc_ν(G))",
        &inputs,
    ))
}

/// The generalized-discrepancy bound with disc_ν(G) computed exactly.
pub fn gen_disc_lower_bound(
    f: &CommMatrix,
    g: &CommMatrix,
    nu: &JointDistribution,
    eps: &Rational,
) -> Result<BoundReport> {
    let delta = correlation(f, g, nu)?;
    let disc = disc_under(g, nu)?;
    if disc.is_zero() {
        return Err(Error::invalid("disc_ν(G) is zero"));
    }
    gen_disc_from_parts(&delta, &disc, eps)
}

/// Dual witness of the bounded-weight approximation program.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BppWitness {
    #[serde(with = "crate::rational::as_string")]
    pub w_prime: Rational,
    /// Least error at weight w′.
    #[serde(with = "crate::rational::as_string")]
    pub error: Rational,
    /// μ′ = g·ν per design row (inputs, or Hamming weights for symmetric f).
    #[serde(with = "crate::rational::vec_as_string")]
    pub mu: Vec<Rational>,
    pub levels: bool,
    /// corr_ν(f, g) = Σ f μ′.
    #[serde(with = "crate::rational::as_string")]
    pub corr: Rational,
    /// 2^n·||(gν)^||_∞.
    #[serde(with = "crate::rational::as_string")]
    pub lifted_disc: Rational,
    pub report: BoundReport,
}

/// R_{7/15}(f∘XOR) ≥ log2 wt_{1/3}(f) − 4, with the dual witness checked.
pub fn bpp_lower_bound<'a>(t: impl Into<Target<'a>>) -> Result<BoundReport> {
    Ok(bpp_witness(t)?.report)
}

pub fn bpp_witness<'a>(t: impl Into<Target<'a>>) -> Result<BppWitness> {
    let t = t.into();
    let n = t.arity();
    let third = rat(1, 3);
    let d = Design::build(t, None, Method::Auto, MAX_BPP_FULL_ARITY)?;
    if d.levels {
        check_cap("arity for the symmetric BPP bound", n as usize, MAX_BPP_SYMMETRIC_ARITY as usize)?;
    }
    let w_prime = measures::approx_weight_with(t, &third, Method::Auto)?
        .value
        .ok_or_else(|| Error::Defect("approximate weight program returned no value".into()))?;

    // min ε s.t. |p − f| ≤ ε, Σ ω(α′ + α″) ≤ w′; ε is the last column.
    let v = d.num_vars();
    let mut prog = LinearProgram::new(Sense::Min, 2 * v + 1);
    prog.objective[2 * v] = int(1);
    prog.set_bound(2 * v, Bound::free());
    for p in 0..d.points() {
        let mut row: Vec<Rational> = d.a[p].clone();
        row.extend(d.a[p].iter().map(|x| -x));
        let mut up = row.clone();
        up.push(int(1));
        prog.add_constraint(up, Relation::Ge, d.target[p].clone());
        row.push(int(-1));
        prog.add_constraint(row, Relation::Le, d.target[p].clone());
    }
    let mut wrow: Vec<Rational> = d.weight.clone();
    wrow.extend(d.weight.iter().cloned());
    wrow.push(int(0));
    prog.add_constraint(wrow, Relation::Le, w_prime.clone());
    let sol = lp::solve(&prog)?;
    let verdict = lp::check_duality(&prog, &sol)?;
    if sol.status != Status::Optimal || !verdict.pass {
        return Err(Error::Defect(format!(
            "bounded-weight program: {:?}, {}",
            sol.status, verdict.detail
        )));
    }
    let mu: Vec<Rational> = (0..d.points())
        .map(|p| &sol.dual[2 * p] + &sol.dual[2 * p + 1])
        .collect();
    let total: Rational = mu.iter().map(|m| m.abs()).sum();
    if total.is_zero() {
        return Err(Error::Defect("degenerate dual: Σ|μ| = 0".into()));
    }
    let mu: Vec<Rational> = mu.into_iter().map(|m| m / &total).collect();
    let corr: Rational = d.times_target(&mu).into_iter().sum();
    let lifted = d.max_abs_correlation(&mu);
    let three_over = int(3) / &w_prime;
    if corr < third {
        return Err(Error::Defect(format!(
            "witness correlation {} is below 1/3",
            format_rational(&corr)
        )));
    }
    if lifted > three_over {
        return Err(Error::Defect(format!(
            "witness lifted discrepancy {} exceeds 3/w′ = {}",
            format_rational(&lifted),
            format_rational(&three_over)
        )));
    }
    let value = log2_abs(&w_prime) - 4.0;
    let refined = gen_disc_from_parts(&corr, &lifted, &rat(7, 15))?;
    let mut report = BoundReport::new(BoundKind::Bpp, Direction::Lower, value)
        .with_exact(&w_prime / int(16), "2^value")
        .vacuous(value <= 0.0)
        .step(
            "approximate weight",
            "w′ = wt_{1/3}(f)",
            &[("w'", format_rational(&w_prime)), ("n", n.to_string())],
        )
        .step(
            "bounded-weight approximation duality",
            "max Σ f μ − Δw′ subject to Σ|μ| ≤ 1, |Σ μ χ_S| ≤ Δ",
            &[("error", format_rational(&sol.objective))],
        )
        .step(
            "lifted discrepancy of a dual witness",
            "disc_{ν⊕}(g∘XOR) ≤ 2^n·||(gν)^||_∞ ≤ 3/w′",
            &[
                ("corr", format_rational(&corr)),
                ("lifted", format_rational(&lifted)),
                ("3/w'", format_rational(&three_over)),
            ],
        )
        .step(
            "generalized discrepancy method",
            "R_{7/15}(f∘XOR) ≥ log2((1/3 − 1 + 14/15)/(3/w′)) ≥ log2 w′ − 4",
            &[("witness bound", format!("{:.6}", refined.value))],
        );
    report.notes.push(format!(
        "the witness itself gives R_{{7/15}}(f∘XOR) ≥ {:.6}",
        refined.value
    ));
    report.notes.push("the form c·log(wt_{1/3}(f)) − O(1) is asymptotic; the value above is the explicit form".into());
    Ok(BppWitness {
        w_prime,
        error: sol.objective,
        levels: d.levels,
        mu,
        corr,
        lifted_disc: lifted,
        report,
    })
}

/// PP(F) = Θ(log 1/disc(F)) turns a discrepancy upper bound into a PP
/// lower bound up to constants.
pub fn pp_from_disc(disc: &BoundReport) -> Result<BoundReport> {
    if disc.kind != BoundKind::Disc || disc.direction != Direction::Upper {
        return Err(Error::invalid("expects a discrepancy upper bound"));
    }
    let value = -disc.value.log2();
    let mut rep = BoundReport::new(BoundKind::Pp, Direction::Lower, value)
        .vacuous(disc.vacuous || value <= 0.0)
        .slack(disc.slack + 1);
    rep.provenance = disc.provenance.clone();
    Ok(rep
        .step(
            "PP-discrepancy equivalence",
            "PP(F) = Θ(log2(1/disc(F)))",
            &[("disc", format!("{}", disc.value))],
        )
        .note("value is log2(1/disc) with the constant of the equivalence left unfixed"))
}

/// U_{l,k} = sgn(Σ_{i=1}^k Σ_{j=1}^l 2^i x_{i,j} + 1/2).
pub fn universal_threshold(l: u32, k: u32) -> Result<Ltf> {
    Ltf::universal(l, k)
}

/// U_{l,k}∘XOR as a communication matrix.
pub fn ghr_matrix(l: u32, k: u32) -> Result<CommMatrix> {
    xor_compose(&universal_threshold(l, k)?.to_function()?)
}

/// An LTF placed inside U_{l,k}: slot s of U receives `list.monomials[s]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Embedding {
    pub l: u32,
    pub k: u32,
    pub list: MonomialList,
    /// Sum of the slots fixed to constants, Σ ±2^i.
    pub constant: i64,
    pub pointwise_checked: bool,
}

/// Places sgn(w·x + w0) inside U_{l,k}: 2|w_t| is expanded over the powers
/// 2^1..2^k, each power used by x_t gets a slot holding ±x_t, and the
/// remaining slots are constants whose total C makes
/// sgn(2(w·x) + C + 1/2) = sgn(w·x + w0) on every input.
pub fn embed_ltf(ltf: &Ltf) -> Result<Embedding> {
    let n = ltf.arity();
    let mut w = Vec::with_capacity(n as usize);
    for (i, r) in ltf.weights.iter().enumerate() {
        if !r.is_integer() {
            return Err(Error::invalid(format!("weight {i} is not an integer")));
        }
        let v = r.to_integer().to_i64().filter(|v| v.unsigned_abs() <= 1 << 24).ok_or_else(|| {
            Error::invalid(format!("weight {i} exceeds 2^24 in magnitude"))
        })?;
        w.push(v);
    }
    if let Some(x) = ltf.find_tie()? {
        return Err(Error::invalid(format!("affine sum is zero at input index {x}")));
    }
    let floor = ltf.offset.floor().to_integer();
    let floor = floor
        .to_i64()
        .filter(|v| v.unsigned_abs() <= 1 << 40)
        .ok_or_else(|| Error::invalid("offset too large"))?;
    let targets: Vec<i64> = if ltf.offset.is_integer() {
        vec![2 * floor, 2 * floor - 2]
    } else {
        vec![2 * floor]
    };

    // uses[i] lists the variables occupying a slot at power 2^i.
    let mut uses: Vec<Vec<SignedMonomial>> = vec![Vec::new(); 2];
    for (t, &wt) in w.iter().enumerate() {
        let a = wt.unsigned_abs();
        for b in 0..64 - a.leading_zeros() {
            if a >> b & 1 == 1 {
                let i = b as usize + 1;
                if uses.len() <= i {
                    uses.resize(i + 1, Vec::new());
                }
                uses[i].push(SignedMonomial {
                    mask: 1 << t,
                    neg: wt < 0,
                });
            }
        }
    }
    let k_min = (uses.len() - 1).max(1) as u32;
    let l_min = uses.iter().map(|u| u.len()).max().unwrap_or(0).max(1) as u32;
    let mut shapes: Vec<(u32, u32)> = Vec::new();
    for l in l_min..l_min + 64 {
        for k in k_min..k_min + 48 {
            if (l * k) as usize <= MAX_EMBED_SLOTS {
                shapes.push((l, k));
            }
        }
    }
    shapes.sort_by_key(|&(l, k)| (l * k, l));
    for (l, k) in shapes {
        let free: Vec<i64> = (1..=k as usize)
            .map(|i| l as i64 - uses.get(i).map_or(0, |u| u.len()) as i64)
            .collect();
        for &target in &targets {
            if let Some(excess) = constant_split(&free, target) {
                let emb = build_embedding(ltf, l, k, &uses, &free, &excess, target)?;
                return Ok(emb);
            }
        }
    }
    Err(Error::capacity("universal threshold slots", MAX_EMBED_SLOTS + 1, MAX_EMBED_SLOTS))
}

/// Most slots an embedding may use.
pub const MAX_EMBED_SLOTS: usize = 1024;

/// Chooses e_i ∈ {−free_i, −free_i + 2, …, free_i} with Σ 2^i e_i = target
/// (i counted from 1).
fn constant_split(free: &[i64], target: i64) -> Option<Vec<i64>> {
    let k = free.len();
    // reach[i] = Σ_{i' ≤ i} 2^{i'} free_{i'}, the largest reachable magnitude.
    let mut reach = vec![0i128; k + 1];
    for i in 0..k {
        reach[i + 1] = reach[i] + ((free[i] as i128) << (i + 1));
    }
    let mut e = vec![0i64; k];
    fn go(i: usize, rest: i128, free: &[i64], reach: &[i128], e: &mut [i64]) -> bool {
        if i == 0 {
            return rest == 0;
        }
        if rest.abs() > reach[i] {
            return false;
        }
        let p = 1i128 << i;
        let f = free[i - 1];
        let mut ei = -f;
        while ei <= f {
            e[i - 1] = ei;
            if go(i - 1, rest - p * ei as i128, free, reach, e) {
                return true;
            }
            ei += 2;
        }
        false
    }
    go(k, target as i128, free, &reach, &mut e).then_some(e)
}

fn build_embedding(
    ltf: &Ltf,
    l: u32,
    k: u32,
    uses: &[Vec<SignedMonomial>],
    free: &[i64],
    excess: &[i64],
    constant: i64,
) -> Result<Embedding> {
    let n = ltf.arity();
    let mut slots = Vec::with_capacity((l * k) as usize);
    for i in 1..=k as usize {
        slots.extend(uses.get(i).into_iter().flatten().copied());
        let plus = (free[i - 1] + excess[i - 1]) / 2;
        let minus = free[i - 1] - plus;
        slots.extend((0..plus).map(|_| SignedMonomial { mask: 0, neg: false }));
        slots.extend((0..minus).map(|_| SignedMonomial { mask: 0, neg: true }));
    }
    let list = MonomialList {
        m: n,
        monomials: slots,
    };
    let checked = n <= MAX_EMBED_CHECK_ARITY;
    if checked {
        for x in 0..1u32 << n {
            // 2·(Σ 2^i y_slot) + 1 has the sign of the U sum.
            let mut s: i128 = 1;
            for (idx, b) in list.monomials.iter().enumerate() {
                let p = 2i128 << (idx / l as usize + 1);
                s += if b.is_negative_at(x) { -p } else { p };
            }
            let src = ltf.sum_at(x);
            if (s > 0) != src.is_positive() {
                return Err(Error::Defect(format!("embedding disagrees with the source at input {x}")));
            }
        }
    }
    Ok(Embedding {
        l,
        k,
        list,
        constant,
        pointwise_checked: checked,
    })
}

/// Evaluates U_{l,k} on the slot values produced by `emb` at input x.
pub fn embedded_value(emb: &Embedding, x: u32) -> i8 {
    let mut s = rat(1, 2);
    for (idx, b) in emb.list.monomials.iter().enumerate() {
        let p = pow2(idx as i64 / emb.l as i64 + 1);
        if b.is_negative_at(x) {
            s -= p;
        } else {
            s += p;
        }
    }
    if s.is_positive() {
        1
    } else {
        -1
    }
}
