//! Measures read directly off a symmetric predicate, and the integer
//! polynomial witnessing the PP upper bound.

use crate::boolean::SymmetricPredicate;
use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;
use crate::rational::{int, pow2, Rational};
use crate::symmetric::{binomial, krawtchouk};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// Positions i ≤ n−2 with D(i) ≠ D(i+2).
fn jumps(d: &SymmetricPredicate) -> Vec<u32> {
    let v = d.values();
    (0..v.len().saturating_sub(2))
        .filter(|&i| v[i] != v[i + 2])
        .map(|i| i as u32)
        .collect()
}

/// Number of i ∈ {0, …, n−2} with D(i) ≠ D(i+2).
pub fn odd_even_degree(d: &SymmetricPredicate) -> u32 {
    jumps(d).len() as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RValue {
    pub r0: u32,
    pub r1: u32,
    pub r: u32,
}

/// Least r0, r1 ≤ n/2 with D(i) = D(i+2) for every i in [r0, n − r1).
/// `None` when no such pair exists, which happens for odd n when
/// D(⌊n/2⌋) ≠ D(⌊n/2⌋ + 2).
pub fn r_value(d: &SymmetricPredicate) -> Option<RValue> {
    let n = d.arity();
    let (mut r0, mut r1) = (0u32, 0u32);
    for v in jumps(d) {
        // A jump at v is excluded from the window when v < r0 or v ≥ n − r1.
        if 2 * (v + 1) <= n {
            r0 = r0.max(v + 1);
        } else if 2 * (n - v) <= n {
            r1 = r1.max(n - v);
        } else {
            return None;
        }
    }
    Some(RValue { r0, r1, r: r0.max(r1) })
}

/// min |2k − n + 1| over k with D(k) ≠ D(k+1); `None` for constants.
pub fn gamma_value(d: &SymmetricPredicate) -> Option<u32> {
    let v = d.values();
    let n = d.arity() as i64;
    (0..v.len().saturating_sub(1))
        .filter(|&k| v[k] != v[k + 1])
        .map(|k| (2 * k as i64 - n + 1).unsigned_abs() as u32)
        .min()
}

/// Value at Hamming weight w of the integer polynomial
/// `(1 + χ)·p_even + (1 − χ)·p_odd`, where each factor is
/// `Σ_j x_j − n + 2i + 1`, negative exactly when w > i.
fn pp_value(d: &SymmetricPredicate, w: u32) -> BigInt {
    let n = d.arity() as i64;
    let j = jumps(d);
    let sum_x = n - 2 * w as i64;
    let part = |parity: u32| -> BigInt {
        let mut acc = BigInt::from(d.at(parity.min(d.arity())));
        for &i in j.iter().filter(|&&i| i % 2 == parity) {
            acc *= BigInt::from(sum_x - n + 2 * i as i64 + 1);
        }
        acc
    };
    if w % 2 == 0 {
        part(0) * 2
    } else {
        part(1) * 2
    }
}

/// Level coefficients c_k (coefficient of each χ_S with |S| = k) of the
/// PP upper-bound polynomial. Requires even n.
pub fn pp_upper_levels(d: &SymmetricPredicate) -> Result<Vec<Rational>> {
    let n = d.arity();
    if n % 2 == 1 {
        return Err(Error::invalid("the PP upper-bound polynomial needs even arity"));
    }
    let vals: Vec<BigInt> = (0..=n).map(|w| pp_value(d, w)).collect();
    let scale = pow2(-(n as i64));
    Ok((0..=n)
        .map(|k| {
            let mut s = BigInt::zero();
            for (w, v) in vals.iter().enumerate() {
                s += v * BigInt::from(binomial(n, w as u32) * krawtchouk(n, k, w as u32));
            }
            Rational::from_integer(s) / Rational::from_integer(BigInt::from(binomial(n, k))) * &scale
        })
        .collect())
}

/// Largest arity for which the polynomial is expanded monomial by monomial.
pub const MAX_PP_EXPANSION_ARITY: u32 = 16;

/// Integer polynomial sign-representing the predicate's function with
/// weight at most 4(2n)^k, k the odd-even degree.
pub fn pp_upper_poly(d: &SymmetricPredicate) -> Result<SparsePolynomial> {
    let n = d.arity();
    crate::error::check_cap("arity for polynomial expansion", n as usize, MAX_PP_EXPANSION_ARITY as usize)?;
    let levels = pp_upper_levels(d)?;
    let mut p = SparsePolynomial::zero(n);
    for m in 0..1u32 << n {
        let c = &levels[m.count_ones() as usize];
        if !c.is_zero() {
            p.add_term(m, c.clone());
        }
    }
    Ok(p)
}

/// 4(2n)^k.
pub fn pp_weight_bound(d: &SymmetricPredicate) -> Rational {
    let n = d.arity() as i64;
    let k = odd_even_degree(d);
    int(4) * num_traits::pow(int(2 * n), k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn pred(s: &str) -> SymmetricPredicate {
        SymmetricPredicate::parse(s).unwrap()
    }

    #[test]
    fn odd_even_counts() {
        assert_eq!(odd_even_degree(&SymmetricPredicate::parity(7).unwrap()), 0);
        assert_eq!(odd_even_degree(&pred("--++-")), 3);
        assert_eq!(odd_even_degree(&pred("-++-++-++")), 5);
    }

    #[test]
    fn r_values() {
        assert_eq!(r_value(&SymmetricPredicate::parity(6).unwrap()), Some(RValue { r0: 0, r1: 0, r: 0 }));
        assert_eq!(r_value(&pred("++++++-")), Some(RValue { r0: 0, r1: 2, r: 2 }));
        assert_eq!(r_value(&pred("-------")), Some(RValue { r0: 0, r1: 0, r: 0 }));
        // n = 5, jump at 2 = ⌊n/2⌋
        assert_eq!(r_value(&pred("++-+++")), None);
    }

    #[test]
    fn gammas() {
        assert_eq!(gamma_value(&SymmetricPredicate::parity(4).unwrap()), Some(1));
        assert_eq!(gamma_value(&pred("-++++++")), Some(5));
        assert_eq!(gamma_value(&pred("-++-++-++-")), Some(2));
        assert_eq!(gamma_value(&pred("+++")), None);
    }

    #[test]
    fn pp_polynomial_small_cases() {
        let p = pp_upper_poly(&SymmetricPredicate::parity(2).unwrap()).unwrap();
        assert_eq!(p.terms().collect::<Vec<_>>(), vec![(0b11, &int(2))]);
        let c = pp_upper_poly(&pred("+++++")).unwrap();
        assert_eq!(c.terms().collect::<Vec<_>>(), vec![(0, &int(2))]);
        let d = pred("--++-");
        let q = pp_upper_poly(&d).unwrap();
        assert!(q.is_integral());
        assert!(q.sign_represents(&d.to_function().unwrap()).unwrap());
        assert!(q.weight() <= pp_weight_bound(&d));
        assert!(q.weight() <= int(4 * 64));
        assert!(Rational::one() <= q.weight());
    }
}
