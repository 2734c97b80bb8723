//! The selector lift f^op and its embeddings as monomial projections of
//! symmetric and threshold functions.
//!
//! Lifted inputs are ordered x (bits 0..n), y (bits n..2n), z (bits
//! 2n..3n). z_i = −1 selects x_i, z_i = +1 selects y_i.

use crate::boolean::{BooleanFunction, Ltf, SymmetricPredicate, MAX_ARITY};
use crate::error::{check_cap, Error, Result};
use crate::measures::{odd_even_degree, sign_degree_with, Method};
use crate::rational::{int, pow2, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Largest base arity for [`kp_lift`].
pub const MAX_LIFT_ARITY: u32 = 8;

/// f^op(x, y, z) = f(u) with u_i = x_i when z_i = −1 and y_i otherwise.
pub fn kp_lift(f: &BooleanFunction) -> Result<BooleanFunction> {
    let n = f.arity();
    check_cap("arity for the selector lift", n as usize, MAX_LIFT_ARITY as usize)?;
    let full = (1u32 << n) - 1;
    BooleanFunction::from_bits(3 * n, |v| {
        let x = v & full;
        let y = (v >> n) & full;
        let z = (v >> (2 * n)) & full;
        f.bit((x & z) | (y & !z & full))
    })
}

/// Probability over uniform z that every variable of `mask` is selected.
/// `mask` ranges over the 2n selectable variables (x block, then y block).
pub fn relevance_probability(mask: u32, n: u32) -> Result<Rational> {
    if n > 15 || mask >> (2 * n) != 0 {
        return Err(Error::invalid("mask outside the 2n selectable variables"));
    }
    let full = (1u32 << n) - 1;
    let xs = mask & full;
    let ys = (mask >> n) & full;
    if xs & ys != 0 {
        return Ok(Rational::zero());
    }
    Ok(pow2(-((xs | ys).count_ones() as i64)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedMonomial {
    pub mask: u32,
    pub neg: bool,
}

impl SignedMonomial {
    pub fn var(i: u32) -> Self {
        SignedMonomial {
            mask: 1 << i,
            neg: false,
        }
    }

    /// True when the monomial evaluates to −1 at input `x`.
    pub fn is_negative_at(&self, x: u32) -> bool {
        ((x & self.mask).count_ones() % 2 == 1) != self.neg
    }
}

/// Monomials M_1..M_n over m variables; substituting them into an n-ary
/// function gives its projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialList {
    pub m: u32,
    pub monomials: Vec<SignedMonomial>,
}

impl MonomialList {
    pub fn new(m: u32, monomials: Vec<SignedMonomial>) -> Result<Self> {
        if m > MAX_ARITY {
            return Err(Error::capacity("projection arity", m as usize, MAX_ARITY as usize));
        }
        if let Some(b) = monomials.iter().find(|b| m < 32 && b.mask >> m != 0) {
            return Err(Error::invalid(format!("mask {:#x} uses variables beyond {m}", b.mask)));
        }
        Ok(MonomialList { m, monomials })
    }

    pub fn identity(n: u32) -> Self {
        MonomialList {
            m: n,
            monomials: (0..n).map(SignedMonomial::var).collect(),
        }
    }

    /// Image of input `x` (over m variables) as an input of the source.
    pub fn image(&self, x: u32) -> u32 {
        self.monomials
            .iter()
            .enumerate()
            .fold(0, |acc, (i, b)| if b.is_negative_at(x) { acc | 1 << i } else { acc })
    }
}

/// g(x) = f(M_1(x), …, M_n(x)).
pub fn monomial_project(f: &BooleanFunction, list: &MonomialList) -> Result<BooleanFunction> {
    if list.monomials.len() != f.arity() as usize {
        return Err(Error::Dimension(format!(
            "{} monomials for a function of arity {}",
            list.monomials.len(),
            f.arity()
        )));
    }
    let list = MonomialList::new(list.m, list.monomials.clone())?;
    if let Some(d) = f.symmetric_predicate() {
        return BooleanFunction::from_bits(list.m, |x| {
            let w = list.monomials.iter().filter(|b| b.is_negative_at(x)).count();
            d.at(w as u32) < 0
        });
    }
    BooleanFunction::from_bits(list.m, |x| f.bit(list.image(x)))
}

/// Record of a pointwise-checked projection identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftWitness {
    pub base: String,
    pub base_arity: u32,
    pub source_arity: u32,
    pub lifted_arity: u32,
    pub pointwise_checked: bool,
    pub inputs_checked: u64,
}

/// Largest lifted arity for which identities are checked on every input.
pub const MAX_CHECK_ARITY: u32 = 18;

fn check_identity(lhs: &BooleanFunction, rhs: &BooleanFunction) -> Result<u64> {
    if lhs != rhs {
        let x = (0..lhs.size() as u32).find(|&x| lhs.bit(x) != rhs.bit(x)).unwrap_or(0);
        return Err(Error::Defect(format!("projection identity fails at input {x}")));
    }
    Ok(lhs.size() as u64)
}

/// The monomials u_i → −x_i z_i and v_i → y_i z_i (with x_i, y_i kept)
/// that turn a 4n-ary function into one over (x, y, z). `negate_u` picks
/// the sign of the u block.
fn selector_monomials(n: u32, negate_u: bool) -> MonomialList {
    let mut v: Vec<SignedMonomial> = (0..2 * n).map(SignedMonomial::var).collect();
    for i in 0..n {
        v.push(SignedMonomial {
            mask: 1 << i | 1 << (2 * n + i),
            neg: negate_u,
        });
    }
    for i in 0..n {
        v.push(SignedMonomial {
            mask: 1 << (n + i) | 1 << (2 * n + i),
            neg: false,
        });
    }
    MonomialList {
        m: 3 * n,
        monomials: v,
    }
}

/// Splits F on 4n variables into f on n with D_f(b) = D_F(2b + n) and the
/// monomials realising f^op as a projection of F. The identity is checked
/// on every input.
pub fn symm_lift_decompose(
    big: &SymmetricPredicate,
) -> Result<(SymmetricPredicate, MonomialList, LiftWitness)> {
    let a = big.arity();
    if a % 4 != 0 || a == 0 {
        return Err(Error::invalid(format!("arity {a} is not a positive multiple of 4")));
    }
    let n = a / 4;
    check_cap("lifted arity for pointwise checks", (3 * n) as usize, MAX_CHECK_ARITY as usize)?;
    let small = SymmetricPredicate::from_fn(n, |b| big.at(2 * b + n))?;
    let list = selector_monomials(n, true);
    let lhs = monomial_project(&big.to_function()?, &list)?;
    let rhs = kp_lift(&small.to_function()?)?;
    let checked = check_identity(&lhs, &rhs)?;
    let witness = LiftWitness {
        base: small.to_string(),
        base_arity: n,
        source_arity: a,
        lifted_arity: 3 * n,
        pointwise_checked: true,
        inputs_checked: checked,
    };
    Ok((small, list, witness))
}

/// F on 4n variables with D_F(2b + n) = D_f(b) and +1 on other weights.
pub fn lifsym_extend(small: &SymmetricPredicate) -> Result<SymmetricPredicate> {
    let n = small.arity();
    check_cap("base arity for the symmetric extension", n as usize, 6)?;
    SymmetricPredicate::from_fn(4 * n, |w| {
        if w >= n && (w - n) % 2 == 0 && (w - n) / 2 <= n {
            small.at((w - n) / 2)
        } else {
            1
        }
    })
}

/// f′(x, y, u, v) = sgn(Σ w_i(x_i + y_i − u_i + v_i) + 2w_0), with the
/// projection u_i → x_i z_i, v_i → y_i z_i giving f^op. Ties are rejected,
/// and the identity is checked pointwise when 3n ≤ 12.
pub fn thr_lift(f: &Ltf) -> Result<(Ltf, MonomialList, LiftWitness)> {
    let n = f.arity();
    check_cap("base arity for the threshold lift", n as usize, (MAX_ARITY / 4) as usize)?;
    if let Some(x) = f.find_tie()? {
        return Err(Error::invalid(format!("base LTF has a zero sum at input {x}")));
    }
    let mut w = Vec::with_capacity(4 * n as usize);
    w.extend(f.weights.iter().cloned());
    w.extend(f.weights.iter().cloned());
    w.extend(f.weights.iter().map(|v| -v));
    w.extend(f.weights.iter().cloned());
    let lifted = Ltf::new(w, &f.offset * int(2));
    if let Some(x) = lifted.find_tie()? {
        return Err(Error::invalid(format!("lifted LTF has a zero sum at input {x}")));
    }
    let list = selector_monomials(n, false);
    let (checked, count) = if 3 * n <= 12 {
        let lhs = monomial_project(&lifted.to_function()?, &list)?;
        let rhs = kp_lift(&f.to_function()?)?;
        (true, check_identity(&lhs, &rhs)?)
    } else {
        (false, 0)
    };
    let witness = LiftWitness {
        base: f.spec_string(),
        base_arity: n,
        source_arity: 4 * n,
        lifted_arity: 3 * n,
        pointwise_checked: checked,
        inputs_checked: count,
    };
    Ok((lifted, list, witness))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Members read D_F(2b + a).
    Low,
    /// Members read D_F(N − 2b − a).
    High,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub index: u32,
    pub arity: u32,
    pub predicate: String,
    pub sign_degree: u32,
    pub sign_changes: u32,
    /// The member's lift is a projection of a restriction of F (needs
    /// 4·arity ≤ the arity F has after the parity fix).
    pub projection: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub arity: u32,
    pub odd_even_degree: u32,
    /// ⌊deg_oe / 4⌋.
    pub j: u32,
    pub orientation: Orientation,
    pub low_window_jumps: u32,
    pub high_window_jumps: u32,
    /// Variable fixed to make the chosen jumps sit at even positions,
    /// as (1-based variable, value).
    pub restriction: Option<(u32, i8)>,
    pub members: Vec<FamilyMember>,
    pub best: Option<u32>,
    pub total_sign_degree: u32,
    /// ⌊j/2⌋ / ⌈log_3(2n/j)⌉, the share some member must reach.
    pub guaranteed: Option<f64>,
}

fn jump_positions(values: &[i8]) -> Vec<usize> {
    (0..values.len().saturating_sub(2))
        .filter(|&i| values[i] != values[i + 2])
        .collect()
}

/// The family f_i with D_{f_i}(b) = D_F(2b + a_i) for the hardness
/// argument on mon_±(F), with sign degrees from the LP.
pub fn liftsym_witness(big: &SymmetricPredicate) -> Result<FamilyReport> {
    let total = big.arity();
    check_cap("arity for the family witness", total as usize, MAX_ARITY as usize)?;
    if total % 4 != 0 || total == 0 {
        return Err(Error::invalid(format!("arity {total} is not a positive multiple of 4")));
    }
    let n = total / 4;
    let k = odd_even_degree(big);
    let j = k / 4;
    let jumps = jump_positions(big.values());
    let low = jumps.iter().filter(|&&i| i + 2 <= 3 * n as usize).count() as u32;
    let high = jumps.iter().filter(|&&i| i >= n as usize).count() as u32;
    let orientation = if low >= high { Orientation::Low } else { Orientation::High };
    let mut report = FamilyReport {
        arity: total,
        odd_even_degree: k,
        j,
        orientation,
        low_window_jumps: low,
        high_window_jumps: high,
        restriction: None,
        members: Vec::new(),
        best: None,
        total_sign_degree: 0,
        guaranteed: None,
    };
    if k == 0 {
        return Ok(report);
    }
    // G reads F from the chosen end.
    let mut g: Vec<i8> = match orientation {
        Orientation::Low => big.values().to_vec(),
        Orientation::High => big.values().iter().rev().cloned().collect(),
    };
    let gj = jump_positions(&g);
    let even = gj.iter().filter(|&&i| i % 2 == 0).count();
    if even * 2 < gj.len() {
        // Fixing one variable shifts every weight by one. In the reversed
        // view a −1 there is a +1 in F.
        g.remove(0);
        let val = match orientation {
            Orientation::Low => -1,
            Orientation::High => 1,
        };
        report.restriction = Some((1, val));
    }
    let np = (g.len() - 1) as u32;
    let mut i = 1u32;
    loop {
        let a = 2 * (np / (2 * 3u32.pow(i)));
        if a < 2 {
            break;
        }
        let d = SymmetricPredicate::from_fn(a, |b| g[(2 * b + a) as usize])?;
        let sd = sign_degree_with(&d, Method::Symmetric)?;
        let changes = d.values().windows(2).filter(|w| w[0] != w[1]).count() as u32;
        if sd != changes {
            return Err(Error::Defect(format!(
                "sign degree {sd} of member {i} differs from its {changes} sign changes"
            )));
        }
        report.members.push(FamilyMember {
            index: i,
            arity: a,
            predicate: d.to_string(),
            sign_degree: sd,
            sign_changes: changes,
            projection: 4 * a <= np,
        });
        i += 1;
    }
    report.total_sign_degree = report.members.iter().map(|m| m.sign_degree).sum();
    report.best = report
        .members
        .iter()
        .max_by_key(|m| (m.sign_degree, std::cmp::Reverse(m.index)))
        .map(|m| m.index);
    if j > 0 {
        let steps = ((2.0 * n as f64 / j as f64).ln() / 3f64.ln()).ceil().max(1.0);
        report.guaranteed = Some((j / 2) as f64 / steps);
    }
    Ok(report)
}
