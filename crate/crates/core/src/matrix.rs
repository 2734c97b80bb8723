//! Two-party communication matrices with ±1 entries.

use crate::boolean::BooleanFunction;
use crate::error::{check_cap, Error, Result};
use crate::fourier::FourierTable;
use crate::rational::Rational;
use num_bigint::BigInt;

pub const MAX_XOR_ARITY: u32 = 12;

/// Row-major bit-packed sign matrix; bit 1 means −1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CommMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u64>,
}

impl CommMatrix {
    pub fn from_fn(rows: usize, cols: usize, neg: impl Fn(usize, usize) -> bool) -> Self {
        let mut bits = vec![0u64; (rows * cols).div_ceil(64)];
        for r in 0..rows {
            for c in 0..cols {
                if neg(r, c) {
                    let k = r * cols + c;
                    bits[k >> 6] |= 1 << (k & 63);
                }
            }
        }
        CommMatrix { rows, cols, bits }
    }

    pub fn from_signs(rows: usize, cols: usize, signs: &[i8]) -> Result<Self> {
        if signs.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}×{cols} matrix",
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("matrix entries must be ±1"));
        }
        Ok(Self::from_fn(rows, cols, |r, c| signs[r * cols + c] < 0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn neg(&self, r: usize, c: usize) -> bool {
        let k = r * self.cols + c;
        (self.bits[k >> 6] >> (k & 63)) & 1 == 1
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i8 {
        if self.neg(r, c) {
            -1
        } else {
            1
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.neg(r, c) == self.neg(c, r)))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) as f64).collect())
            .collect()
    }
}

/// M[x][y] = f(x ⊕ y).
pub fn xor_compose(f: &BooleanFunction) -> Result<CommMatrix> {
    check_cap("XOR matrix arity", f.arity() as usize, MAX_XOR_ARITY as usize)?;
    let size = f.size();
    Ok(CommMatrix::from_fn(size, size, |x, y| {
        f.bit((x ^ y) as u32)
    }))
}

/// ||M_{f∘XOR}|| = max_S |scaled(S)| (the matrix is diagonalized by characters).
pub fn spectral_norm_xor(f: &BooleanFunction) -> Rational {
    Rational::from_integer(BigInt::from(FourierTable::of(f).max_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_one() {
        let m = xor_compose(&BooleanFunction::parity(1).unwrap()).unwrap();
        assert_eq!(
            (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| m.get(r, c)).collect::<Vec<_>>(),
            vec![1, -1, -1, 1]
        );
        assert!(m.is_symmetric());
    }

    #[test]
    fn parity_norm() {
        for n in 1..6 {
            let f = BooleanFunction::parity(n).unwrap();
            assert_eq!(spectral_norm_xor(&f), Rational::from_integer((1i64 << n).into()));
        }
    }
}
