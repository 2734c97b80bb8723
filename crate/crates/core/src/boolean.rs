//! Truth tables of ±1-valued functions and symmetric predicates.
//!
//! Inputs are indexed little-endian: variable `j` (1-based) is bit `j-1` of
//! the index. A stored bit 0 means the value +1 and a bit 1 means −1, so the
//! index bit of a variable is also its {0,1} value and `(-1)^bit` its ±1
//! value.

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use num_traits::Zero;
use std::fmt;

pub const MAX_ARITY: u32 = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: u32,
    words: Vec<u64>,
}

fn words_for(n: u32) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

fn check_arity(n: u32) -> Result<()> {
    if n == 0 || n > MAX_ARITY {
        Err(Error::invalid(format!(
            "arity {n} outside [1, {MAX_ARITY}]"
        )))
    } else {
        Ok(())
    }
}

impl BooleanFunction {
    /// Builds from a predicate on input indices; `neg(x)` true means f(x) = −1.
    pub fn from_bits(n: u32, neg: impl Fn(u32) -> bool) -> Result<Self> {
        check_arity(n)?;
        let size = 1u64 << n;
        let mut words = vec![0u64; words_for(n)];
        for x in 0..size {
            if neg(x as u32) {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(BooleanFunction { n, words })
    }

    /// Builds from ±1 values listed by input index.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let len = signs.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::invalid("table length must be 2^n with n ≥ 1"));
        }
        if let Some(v) = signs.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::invalid(format!("table entry {v} is not ±1")));
        }
        let n = len.trailing_zeros();
        Self::from_bits(n, |x| signs[x as usize] < 0)
    }

    /// Builds from packed words; bits past 2^n must be zero.
    pub fn from_words(n: u32, words: Vec<u64>) -> Result<Self> {
        check_arity(n)?;
        if words.len() != words_for(n) {
            return Err(Error::invalid("word count does not match arity"));
        }
        if n < 6 && words[0] >> (1u64 << n) != 0 {
            return Err(Error::invalid("bits set past the end of the table"));
        }
        Ok(BooleanFunction { n, words })
    }

    pub fn constant(n: u32, value: i8) -> Result<Self> {
        Self::from_bits(n, |_| value < 0)
    }

    pub fn parity(n: u32) -> Result<Self> {
        Self::from_bits(n, |x| x.count_ones() % 2 == 1)
    }

    /// `χ_S` for the variable set given by `mask`.
    pub fn character(n: u32, mask: u32) -> Result<Self> {
        Self::from_bits(n, |x| (x & mask).count_ones() % 2 == 1)
    }

    /// sgn(Σ x_i) in ±1 terms: −1 when more than half the inputs are −1.
    pub fn majority(n: u32) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::invalid("majority needs odd arity"));
        }
        Self::from_bits(n, |x| x.count_ones() > n / 2)
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        1usize << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// True when f(x) = −1.
    #[inline]
    pub fn bit(&self, x: u32) -> bool {
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn value(&self, x: u32) -> i8 {
        if self.bit(x) {
            -1
        } else {
            1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.size() as u32).map(|x| self.value(x)).collect()
    }

    pub fn count_negative(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn negate(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if self.n < 6 {
            words[0] &= (1u64 << (1u64 << self.n)) - 1;
        }
        BooleanFunction { n: self.n, words }
    }

    /// Pointwise product, i.e. XOR in the {0,1} view.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "arities {} and {}",
                self.n, other.n
            )));
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BooleanFunction { n: self.n, words })
    }

    pub fn is_constant(&self) -> bool {
        let c = self.count_negative();
        c == 0 || c == self.size() as u64
    }

    /// The predicate D with f(x) = D(|x|), if f is symmetric.
    pub fn symmetric_predicate(&self) -> Option<SymmetricPredicate> {
        let mut vals: Vec<Option<i8>> = vec![None; self.n as usize + 1];
        for x in 0..self.size() as u32 {
            let w = x.count_ones() as usize;
            let v = self.value(x);
            match vals[w] {
                None => vals[w] = Some(v),
                Some(u) if u != v => return None,
                _ => {}
            }
        }
        Some(SymmetricPredicate {
            values: vals.into_iter().map(|v| v.unwrap()).collect(),
        })
    }

    /// Fixes the listed variables (1-based index, ±1 value). The remaining
    /// variables keep their relative order.
    pub fn restrict(&self, assignment: &[(u32, i8)]) -> Result<Self> {
        let mut fixed_mask = 0u32;
        let mut fixed_bits = 0u32;
        for &(var, val) in assignment {
            if var == 0 || var > self.n {
                return Err(Error::invalid(format!(
                    "variable {var} outside 1..={}",
                    self.n
                )));
            }
            if val != 1 && val != -1 {
                return Err(Error::invalid(format!("value {val} is not ±1")));
            }
            let b = 1u32 << (var - 1);
            if fixed_mask & b != 0 {
                return Err(Error::invalid(format!("variable {var} assigned twice")));
            }
            fixed_mask |= b;
            if val < 0 {
                fixed_bits |= b;
            }
        }
        if assignment.is_empty() {
            return Ok(self.clone());
        }
        let free: Vec<u32> = (0..self.n).filter(|i| fixed_mask >> i & 1 == 0).collect();
        let k = free.len() as u32;
        if k == 0 {
            return Err(Error::invalid("restriction leaves no free variables"));
        }
        Self::from_bits(k, |y| {
            let mut x = fixed_bits;
            for (j, &pos) in free.iter().enumerate() {
                if y >> j & 1 == 1 {
                    x |= 1 << pos;
                }
            }
            self.bit(x)
        })
    }

    /// Hex form used by `tt:<hex>;<n>`: table bit i is bit i of the number.
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        let digits = std::cmp::max(1, self.size() / 4);
        for d in (0..digits).rev() {
            let bit0 = (d * 4) as u32;
            let mut v = 0;
            for b in 0..4 {
                let x = bit0 + b;
                if (x as usize) < self.size() && self.bit(x) {
                    v |= 1 << b;
                }
            }
            s.push(std::char::from_digit(v, 16).unwrap());
        }
        s
    }

    pub fn spec_string(&self) -> String {
        format!("tt:{};{}", self.to_hex(), self.n)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({})", self.spec_string())
    }
}

/// D(0..=n): the value of a symmetric function on each Hamming weight.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymmetricPredicate {
    values: Vec<i8>,
}

impl SymmetricPredicate {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("predicate needs n+1 ≥ 2 values"));
        }
        if values.len() - 1 > MAX_ARITY as usize {
            return Err(Error::capacity(
                "predicate arity",
                values.len() - 1,
                MAX_ARITY as usize,
            ));
        }
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::invalid("predicate values must be ±1"));
        }
        Ok(SymmetricPredicate { values })
    }

    /// Parses a string of `+` and `-`, one character per weight.
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '+' => v.push(1),
                '-' | '−' => v.push(-1),
                _ => return Err(Error::parse(i, format!("unexpected {c:?} in predicate"))),
            }
        }
        Self::new(v)
    }

    /// Predicate number `code` in the enumeration of all 2^(n+1) predicates:
    /// bit w set means D(w) = −1.
    pub fn from_code(n: u32, code: u64) -> Result<Self> {
        Self::new(
            (0..=n)
                .map(|w| if code >> w & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn from_fn(n: u32, d: impl Fn(u32) -> i8) -> Result<Self> {
        Self::new((0..=n).map(d).collect())
    }

    pub fn constant(n: u32, v: i8) -> Result<Self> {
        Self::from_fn(n, |_| v)
    }

    pub fn parity(n: u32) -> Result<Self> {
        Self::from_fn(n, |w| if w % 2 == 0 { 1 } else { -1 })
    }

    pub fn arity(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    #[inline]
    pub fn at(&self, w: u32) -> i8 {
        self.values[w as usize]
    }

    pub fn negate(&self) -> Self {
        SymmetricPredicate {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// D'(w) = D(n − w), the predicate after negating every input.
    pub fn reverse(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        SymmetricPredicate { values }
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    pub fn is_alternating(&self) -> bool {
        self.values.windows(2).all(|w| w[0] != w[1])
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        let n = self.arity();
        BooleanFunction::from_bits(n, |x| self.values[x.count_ones() as usize] < 0)
    }

    pub fn to_plus_minus(&self) -> String {
        self.values
            .iter()
            .map(|&v| if v > 0 { '+' } else { '-' })
            .collect()
    }
}

impl fmt::Display for SymmetricPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pred:{}", self.to_plus_minus())
    }
}

pub fn from_predicate(d: &SymmetricPredicate) -> Result<BooleanFunction> {
    d.to_function()
}

/// sgn(w0 + Σ w_i x_i) over ±1 inputs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ltf {
    pub weights: Vec<Rational>,
    pub offset: Rational,
}

impl Ltf {
    pub fn new(weights: Vec<Rational>, offset: Rational) -> Self {
        Ltf { weights, offset }
    }

    pub fn arity(&self) -> u32 {
        self.weights.len() as u32
    }

    pub fn sum_at(&self, x: u32) -> Rational {
        let mut s = self.offset.clone();
        for (i, w) in self.weights.iter().enumerate() {
            if x >> i & 1 == 1 {
                s -= w;
            } else {
                s += w;
            }
        }
        s
    }

    /// Weights and offset scaled by a common denominator, if they fit.
    fn integer_form(&self) -> Option<(Vec<i128>, i128)> {
        let mut den = num_bigint::BigInt::from(1);
        for r in self.weights.iter().chain(std::iter::once(&self.offset)) {
            den = num_integer::Integer::lcm(&den, r.denom());
        }
        let scale = |r: &Rational| -> Option<i128> {
            let v = r.numer() * (&den / r.denom());
            let v = num_traits::ToPrimitive::to_i128(&v)?;
            (v.abs() < 1i128 << 90).then_some(v)
        };
        let w = self.weights.iter().map(scale).collect::<Option<Vec<_>>>()?;
        Some((w, scale(&self.offset)?))
    }

    /// Calls `visit(x, sign of the affine sum)` for every input in order.
    fn for_each_sign(&self, mut visit: impl FnMut(u32, std::cmp::Ordering)) {
        let n = self.arity();
        match self.integer_form() {
            Some((w, w0)) => {
                // Running sum; moving from x−1 to x clears the trailing ones
                // and sets the next bit.
                let mut s = w0 + w.iter().sum::<i128>();
                visit(0, s.cmp(&0));
                for x in 1..1u32 << n {
                    let t = x.trailing_zeros() as usize;
                    for wi in &w[..t] {
                        s += 2 * wi;
                    }
                    s -= 2 * w[t];
                    visit(x, s.cmp(&0));
                }
            }
            None => {
                for x in 0..1u32 << n {
                    let v = self.sum_at(x);
                    visit(x, v.cmp(&Rational::zero()));
                }
            }
        }
    }

    fn check_arity(&self) -> Result<()> {
        let n = self.arity();
        if n == 0 || n > MAX_ARITY {
            return Err(Error::invalid(format!("LTF arity {n} outside [1, {MAX_ARITY}]")));
        }
        Ok(())
    }

    /// First input whose affine sum is zero, if any.
    pub fn find_tie(&self) -> Result<Option<u32>> {
        self.check_arity()?;
        let mut tie = None;
        self.for_each_sign(|x, o| {
            if tie.is_none() && o == std::cmp::Ordering::Equal {
                tie = Some(x);
            }
        });
        Ok(tie)
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        self.check_arity()?;
        let n = self.arity();
        let mut words = vec![0u64; ((1usize << n) + 63) / 64];
        let mut tie = None;
        self.for_each_sign(|x, o| match o {
            std::cmp::Ordering::Less => words[x as usize / 64] |= 1 << (x % 64),
            std::cmp::Ordering::Equal => {
                if tie.is_none() {
                    tie = Some(x)
                }
            }
            std::cmp::Ordering::Greater => {}
        });
        if let Some(x) = tie {
            return Err(Error::invalid(format!(
                "affine sum is zero at input index {x}"
            )));
        }
        BooleanFunction::from_words(n, words)
    }

    pub fn spec_string(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(short_rational).collect();
        format!("ltf:{};{}", ws.join(","), short_rational(&self.offset))
    }
}

fn short_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_two_table() {
        let f = BooleanFunction::parity(2).unwrap();
        assert_eq!(f.signs(), vec![1, -1, -1, 1]);
        assert_eq!(f.to_hex(), "6");
    }

    #[test]
    fn predicate_expansion() {
        let d = SymmetricPredicate::parse("+-").unwrap();
        assert_eq!(d.to_function().unwrap().signs(), vec![1, -1]);
        let d = SymmetricPredicate::parse("+-+").unwrap();
        let f = d.to_function().unwrap();
        for x in 0..4u32 {
            assert_eq!(f.value(x) < 0, x.count_ones() == 1);
        }
        assert_eq!(f.symmetric_predicate().unwrap(), d);
    }

    #[test]
    fn restrict_parity() {
        let f = BooleanFunction::parity(2).unwrap();
        let g = f.restrict(&[(2, -1)]).unwrap();
        assert_eq!(g.signs(), vec![-1, 1]);
        assert_eq!(f.restrict(&[]).unwrap(), f);
        assert!(f.restrict(&[(1, 1), (1, -1)]).is_err());
        assert!(f.restrict(&[(3, 1)]).is_err());
    }

    #[test]
    fn negate_keeps_padding_clear() {
        let f = BooleanFunction::parity(3).unwrap().negate();
        assert_eq!(f.words()[0] >> 8, 0);
        assert_eq!(f.count_negative(), 4);
    }

    #[test]
    fn ltf_ties() {
        let l = Ltf::new(vec![crate::rational::int(1), crate::rational::int(-1)], Rational::zero());
        assert!(l.to_function().is_err());
        let l = Ltf::new(vec![crate::rational::int(1)], Rational::zero());
        assert_eq!(l.to_function().unwrap().signs(), vec![1, -1]);
    }
}

impl Ltf {
    /// U_{l,k} = sgn(Σ_{i=1}^k Σ_{j=1}^l 2^i x_{i,j} + 1/2); variables are
    /// grouped by power, the l copies of 2^1 first.
    pub fn universal(l: u32, k: u32) -> Result<Self> {
        if l == 0 || k == 0 {
            return Err(Error::invalid("universal threshold needs l, k ≥ 1"));
        }
        let vars = (l as usize) * (k as usize);
        crate::error::check_cap("universal threshold variables", vars, MAX_ARITY as usize)?;
        let mut weights = Vec::with_capacity(vars);
        for i in 1..=k {
            for _ in 0..l {
                weights.push(crate::rational::pow2(i as i64));
            }
        }
        Ok(Ltf::new(weights, crate::rational::rat(1, 2)))
    }
}
