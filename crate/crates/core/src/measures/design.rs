//! The matrix behind every polynomial LP: rows are inputs (or Hamming
//! weight classes of a symmetric function), columns are monomials (or
//! levels of equal-size monomials).

use crate::boolean::{BooleanFunction, SymmetricPredicate};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::symmetric::{binomial, krawtchouk};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Which formulation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Level formulation when the function is symmetric, full otherwise.
    #[default]
    Auto,
    /// One variable per monomial, one row per input.
    Full,
    /// One variable per monomial size, one row per Hamming weight.
    Symmetric,
}

/// A function given either by its table or by a symmetric predicate.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Function(&'a BooleanFunction),
    Predicate(&'a SymmetricPredicate),
}

impl<'a> From<&'a BooleanFunction> for Target<'a> {
    fn from(f: &'a BooleanFunction) -> Self {
        Target::Function(f)
    }
}

impl<'a> From<&'a SymmetricPredicate> for Target<'a> {
    fn from(d: &'a SymmetricPredicate) -> Self {
        Target::Predicate(d)
    }
}

impl Target<'_> {
    pub fn arity(&self) -> u32 {
        match self {
            Target::Function(f) => f.arity(),
            Target::Predicate(d) => d.arity(),
        }
    }

    pub fn predicate(&self) -> Option<SymmetricPredicate> {
        match self {
            Target::Function(f) => f.symmetric_predicate(),
            Target::Predicate(d) => Some((*d).clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Design {
    pub n: u32,
    pub levels: bool,
    /// Monomial masks, or monomial sizes when `levels`.
    pub vars: Vec<u32>,
    /// a[p][v]: χ_S(x), or K_k(w) when `levels`.
    pub a: Vec<Vec<Rational>>,
    /// f at each row, as ±1.
    pub target: Vec<Rational>,
    /// Number of monomials a column stands for.
    pub weight: Vec<Rational>,
}

impl Design {
    /// `degree` limits monomial size; `full_limit` bounds the arity of the
    /// full formulation.
    pub fn build(t: Target<'_>, degree: Option<u32>, method: Method, full_limit: u32) -> Result<Self> {
        let n = t.arity();
        let d = degree.unwrap_or(n).min(n);
        let sym = match method {
            Method::Full => None,
            Method::Symmetric => Some(t.predicate().ok_or_else(|| {
                Error::invalid("symmetric formulation needs a symmetric function")
            })?),
            Method::Auto => t.predicate(),
        };
        if let Some(p) = sym {
            return Ok(Self::levels(&p, d));
        }
        if n > full_limit {
            return Err(Error::capacity("arity for the full formulation", n as usize, full_limit as usize));
        }
        let owned;
        let f = match t {
            Target::Function(f) => f,
            Target::Predicate(p) => {
                owned = p.to_function()?;
                &owned
            }
        };
        Ok(Self::full(f, d))
    }

    pub fn full(f: &BooleanFunction, degree: u32) -> Self {
        let n = f.arity();
        let vars: Vec<u32> = (0..1u32 << n)
            .filter(|m| m.count_ones() <= degree)
            .collect();
        Self::full_with_support(f, vars)
    }

    pub fn full_with_support(f: &BooleanFunction, vars: Vec<u32>) -> Self {
        let n = f.arity();
        let one = int(1);
        let minus = int(-1);
        let a = (0..1u32 << n)
            .map(|x| {
                vars.iter()
                    .map(|&s| {
                        if (x & s).count_ones() % 2 == 0 {
                            one.clone()
                        } else {
                            minus.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let target = (0..1u32 << n).map(|x| int(f.value(x) as i64)).collect();
        let weight = vec![one; vars.len()];
        Design {
            n,
            levels: false,
            vars,
            a,
            target,
            weight,
        }
    }

    pub fn levels(p: &SymmetricPredicate, degree: u32) -> Self {
        let n = p.arity();
        let vars: Vec<u32> = (0..=degree.min(n)).collect();
        let a = (0..=n)
            .map(|w| {
                vars.iter()
                    .map(|&k| Rational::from_integer(BigInt::from(krawtchouk(n, k, w))))
                    .collect()
            })
            .collect();
        let target = (0..=n).map(|w| int(p.at(w) as i64)).collect();
        let weight = vars
            .iter()
            .map(|&k| Rational::from_integer(BigInt::from(binomial(n, k))))
            .collect();
        Design {
            n,
            levels: true,
            vars,
            a,
            target,
            weight,
        }
    }

    pub fn points(&self) -> usize {
        self.a.len()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// (Σ_v A_pv c_v) at every row.
    pub fn eval(&self, c: &[Rational]) -> Vec<Rational> {
        self.a
            .iter()
            .map(|row| crate::lp::dot(row, c))
            .collect()
    }

    /// Σ_v ω_v |c_v|, the weight of the polynomial.
    pub fn poly_weight(&self, c: &[Rational]) -> Rational {
        c.iter()
            .zip(&self.weight)
            .map(|(v, w)| v.abs() * w)
            .sum()
    }

    /// Correlation of a signed measure on rows with one monomial of each
    /// column: (Σ_p ψ_p A_pv) / ω_v.
    pub fn correlations(&self, psi: &[Rational]) -> Vec<Rational> {
        (0..self.num_vars())
            .map(|v| {
                let mut s = Rational::zero();
                for (p, row) in self.a.iter().enumerate() {
                    if !psi[p].is_zero() {
                        s += &psi[p] * &row[v];
                    }
                }
                s / &self.weight[v]
            })
            .collect()
    }

    pub fn max_abs_correlation(&self, psi: &[Rational]) -> Rational {
        self.correlations(psi)
            .into_iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// ψ_p · t_p.
    pub fn times_target(&self, psi: &[Rational]) -> Vec<Rational> {
        psi.iter().zip(&self.target).map(|(a, t)| a * t).collect()
    }
}
