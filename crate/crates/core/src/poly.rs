//! Sparse multilinear polynomials over ±1 variables.

use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::fourier::FourierTable;
use crate::rational::{parse_rational, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `Σ_S c_S χ_S` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePolynomial {
    n: u32,
    coeffs: BTreeMap<u32, Rational>,
}

impl SparsePolynomial {
    pub fn zero(n: u32) -> Self {
        SparsePolynomial {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: u32, c: Rational) -> Self {
        Self::monomial(n, 0, c)
    }

    pub fn monomial(n: u32, mask: u32, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(mask, c);
        p
    }

    /// The linear form Σ_j x_j over all n variables.
    pub fn variable_sum(n: u32) -> Self {
        let mut p = Self::zero(n);
        for j in 0..n {
            p.add_term(1 << j, Rational::one());
        }
        p
    }

    pub fn from_terms(n: u32, terms: impl IntoIterator<Item = (u32, Rational)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (mask, c) in terms {
            if n < 32 && mask >> n != 0 {
                return Err(Error::invalid(format!("mask {mask} exceeds arity {n}")));
            }
            p.add_term(mask, c);
        }
        Ok(p)
    }

    /// The exact multilinear expansion of a ±1 function.
    pub fn expansion(f: &BooleanFunction) -> Self {
        let t = FourierTable::of(f);
        Self::from_fourier(&t)
    }

    pub fn from_fourier(t: &FourierTable) -> Self {
        let mut p = Self::zero(t.arity());
        for (s, &c) in t.scaled().iter().enumerate() {
            if c != 0 {
                p.coeffs.insert(s as u32, t.coefficient(s as u32));
            }
        }
        p
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, mask: u32) -> Rational {
        self.coeffs.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, mask: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(mask).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// wt(p) = Σ |c_S|.
    pub fn weight(&self) -> Rational {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: u32) -> Rational {
        let mut s = Rational::zero();
        for (&m, c) in &self.coeffs {
            if (m & x).count_ones() % 2 == 0 {
                s += c;
            } else {
                s -= c;
            }
        }
        s
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::Dimension(format!(
                "polynomial arities {} and {}",
                self.n, other.n
            )))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut p = self.clone();
        for (&m, c) in &other.coeffs {
            p.add_term(m, c.clone());
        }
        Ok(p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product with x_i² → 1, i.e. monomials multiply by XOR of masks.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                *acc.entry(a ^ b).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(SparsePolynomial {
            n: self.n,
            coeffs: acc,
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        SparsePolynomial {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(&m, c)| (m, c * k)).collect(),
        }
    }

    /// min_x p(x) f(x); positive iff p sign-represents f.
    pub fn min_agreement(&self, f: &BooleanFunction) -> Result<Rational> {
        if f.arity() != self.n {
            return Err(Error::Dimension("polynomial and function arities".into()));
        }
        let vals = self.values_all()?;
        Ok((0..f.size())
            .map(|x| if f.bit(x as u32) { -&vals[x] } else { vals[x].clone() })
            .min()
            .unwrap())
    }

    pub fn sign_represents(&self, f: &BooleanFunction) -> Result<bool> {
        Ok(self.min_agreement(f)?.is_positive())
    }

    /// max_x |p(x) − f(x)|.
    pub fn max_error(&self, f: &BooleanFunction) -> Result<Rational> {
        if f.arity() != self.n {
            return Err(Error::Dimension("polynomial and function arities".into()));
        }
        let vals = self.values_all()?;
        Ok((0..f.size())
            .map(|x| (&vals[x] - Rational::from_integer(f.value(x as u32).into())).abs())
            .max()
            .unwrap())
    }

    /// p evaluated on every input via one transform.
    pub fn values_all(&self) -> Result<Vec<Rational>> {
        if self.n > crate::boolean::MAX_ARITY {
            return Err(Error::capacity("polynomial arity", self.n as usize, 24));
        }
        let mut a = vec![Rational::zero(); 1usize << self.n];
        for (&m, c) in &self.coeffs {
            a[m as usize] = c.clone();
        }
        crate::fourier::fwht_generic(&mut a);
        Ok(a)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            n: self.n,
            terms: self
                .coeffs
                .iter()
                .map(|(&mask, c)| TermJson {
                    mask,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolynomialJson) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &j.terms {
            terms.push((t.mask, parse_rational(&format!("{}/{}", t.num, t.den))?));
        }
        Self::from_terms(j.n, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub mask: u32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: u32,
    pub terms: Vec<TermJson>,
}

pub enum PolyOp {
    Add,
    Multiply,
    Scale(Rational),
}

/// Folds `op` over the operands (scale applies to the first operand only).
pub fn poly_arith(op: PolyOp, operands: &[SparsePolynomial]) -> Result<SparsePolynomial> {
    let first = operands
        .first()
        .ok_or_else(|| Error::invalid("no operands"))?;
    match op {
        PolyOp::Scale(k) => {
            if operands.len() != 1 {
                return Err(Error::invalid("scale takes one operand"));
            }
            Ok(first.scale(&k))
        }
        PolyOp::Add => operands[1..].iter().try_fold(first.clone(), |a, b| a.add(b)),
        PolyOp::Multiply => operands[1..].iter().try_fold(first.clone(), |a, b| a.mul(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x(n: u32, i: u32) -> SparsePolynomial {
        SparsePolynomial::monomial(n, 1 << i, int(1))
    }

    #[test]
    fn square_reduces() {
        let p = x(2, 0).mul(&x(2, 0)).unwrap();
        assert_eq!(p, SparsePolynomial::constant(2, int(1)));
    }

    #[test]
    fn difference_of_squares_vanishes() {
        let a = x(2, 0).add(&x(2, 1)).unwrap();
        let b = x(2, 0).sub(&x(2, 1)).unwrap();
        assert!(a.mul(&b).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let f = BooleanFunction::majority(3).unwrap();
        let p = SparsePolynomial::expansion(&f);
        assert_eq!(p.weight(), int(2));
        let j = p.to_json();
        assert_eq!(SparsePolynomial::from_json(&j).unwrap(), p);
        assert!(p.sign_represents(&f).unwrap());
        assert!(p.max_error(&f).unwrap().is_zero());
    }
}
