//! Walsh–Hadamard analysis.
//!
//! `scaled(S) = Σ_x f(x) χ_S(x) = 2^n f̂(S)` where `χ_S(x) = (−1)^{|x ∧ S|}`.

use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::rational::{pow2, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::ops::{AddAssign, SubAssign};

/// In-place unnormalized transform: `a[S] ← Σ_x a[x] (−1)^{|x ∧ S|}`.
/// Applying it twice multiplies by the length.
pub fn fwht_i64(a: &mut [i64]) {
    let len = a.len();
    assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in a.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (p, q) = (*u, *v);
                *u = p + q;
                *v = p - q;
            }
        }
        h *= 2;
    }
}

/// The same transform over any additive type (rationals, big integers).
pub fn fwht_generic<T>(a: &mut [T])
where
    T: Clone + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
{
    let len = a.len();
    assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in a.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let p = u.clone();
                *u += &*v;
                let mut d = p;
                d -= &*v;
                *v = d;
            }
        }
        h *= 2;
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FourierTable {
    n: u32,
    scaled: Vec<i64>,
}

impl FourierTable {
    pub fn of(f: &BooleanFunction) -> Self {
        let mut a: Vec<i64> = (0..f.size() as u32).map(|x| f.value(x) as i64).collect();
        fwht_i64(&mut a);
        FourierTable {
            n: f.arity(),
            scaled: a,
        }
    }

    /// Wraps arbitrary integer coefficients `c_S = 2^n ĝ(S)` of a real function g.
    pub fn from_scaled(n: u32, scaled: Vec<i64>) -> Result<Self> {
        if scaled.len() != 1usize << n {
            return Err(Error::Dimension(format!(
                "{} coefficients for arity {n}",
                scaled.len()
            )));
        }
        Ok(FourierTable { n, scaled })
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    pub fn scaled(&self) -> &[i64] {
        &self.scaled
    }

    pub fn get(&self, mask: u32) -> i64 {
        self.scaled[mask as usize]
    }

    /// f̂(S) as an exact rational.
    pub fn coefficient(&self, mask: u32) -> Rational {
        Rational::from_integer(BigInt::from(self.scaled[mask as usize])) * pow2(-(self.n as i64))
    }

    pub fn max_abs(&self) -> i64 {
        self.scaled.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn sum_of_squares(&self) -> BigInt {
        self.scaled
            .iter()
            .map(|&c| BigInt::from(c) * BigInt::from(c))
            .sum()
    }

    /// Σ_S |f̂(S)|.
    pub fn l1(&self) -> Rational {
        let s: i128 = self.scaled.iter().map(|c| c.unsigned_abs() as i128).sum();
        Rational::from_integer(BigInt::from(s)) * pow2(-(self.n as i64))
    }

    /// `2^n g(x) = Σ_S c_S χ_S(x)` for every x.
    pub fn values_scaled(&self) -> Vec<i64> {
        let mut a = self.scaled.clone();
        fwht_i64(&mut a);
        a
    }

    /// Reconstructs a ±1 function; fails if the table is not one.
    pub fn inverse(&self) -> Result<BooleanFunction> {
        let vals = self.values_scaled();
        let full = 1i64 << self.n;
        if let Some(v) = vals.iter().find(|&&v| v != full && v != -full) {
            return Err(Error::invalid(format!(
                "coefficients do not describe a ±1 function (2^n g = {v})"
            )));
        }
        BooleanFunction::from_bits(self.n, |x| vals[x as usize] < 0)
    }

    /// Support masks sorted by |c_S| descending, ties by smaller mask.
    pub fn by_magnitude(&self) -> Vec<u32> {
        let mut idx: Vec<u32> = (0..self.scaled.len() as u32).collect();
        idx.sort_by(|&a, &b| {
            self.scaled[b as usize]
                .abs()
                .cmp(&self.scaled[a as usize].abs())
                .then(a.cmp(&b))
        });
        idx
    }
}

pub fn fourier(f: &BooleanFunction) -> FourierTable {
    FourierTable::of(f)
}

/// `Σ_x w(x) χ_S(x)` for every S, exactly. Used for distribution witnesses.
pub fn correlations(weights: &[Rational]) -> Vec<Rational> {
    let mut a = weights.to_vec();
    fwht_generic(&mut a);
    a
}

/// max_S |Σ_x w(x) χ_S(x)|.
pub fn max_abs_correlation(weights: &[Rational]) -> Rational {
    correlations(weights)
        .into_iter()
        .map(|c| c.abs())
        .fold(Rational::zero(), |m, c| if c > m { c } else { m })
}
