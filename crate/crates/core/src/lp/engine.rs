//! Revised simplex over exact rationals on `min cᵀx, Ax = b, x ≥ 0, b ≥ 0`.
//!
//! The basis inverse is kept explicitly. Pricing is Dantzig's rule until a
//! run of degenerate pivots is seen, after which Bland's rule is used for
//! the rest of the solve, which rules out cycling.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

const DEGENERATE_RUN: usize = 48;

pub(crate) type Column = Vec<(usize, Rational)>;

pub(crate) enum Outcome {
    Optimal,
    /// Phase-one duals: yᵀA ≤ 0 on every column and yᵀb > 0.
    Infeasible(Vec<Rational>),
    /// Ray over columns: A·d = 0, d ≥ 0, cᵀd < 0.
    Unbounded(Vec<Rational>),
}

pub(crate) struct Engine {
    m: usize,
    cols: Vec<Column>,
    cost: Vec<Rational>,
    artificial: Vec<bool>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    row_of: Vec<Option<usize>>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    phase_one_done: bool,
    bland: bool,
    degenerate: usize,
    pub pivots: usize,
}

fn mul_entry(a: &Rational, v: &Rational) -> Rational {
    if v.is_one() {
        a.clone()
    } else if (-v).is_one() {
        -a
    } else {
        a * v
    }
}

impl Engine {
    /// `b` must be non-negative.
    pub fn new(b: Vec<Rational>) -> Self {
        debug_assert!(b.iter().all(|v| !v.is_negative()));
        Engine {
            m: b.len(),
            cols: Vec::new(),
            cost: Vec::new(),
            artificial: Vec::new(),
            b,
            basis: Vec::new(),
            row_of: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            phase_one_done: false,
            bland: false,
            degenerate: 0,
            pivots: 0,
        }
    }

    pub fn add_column(&mut self, col: Column, cost: Rational) -> usize {
        self.cols.push(col);
        self.cost.push(cost);
        self.artificial.push(false);
        self.row_of.push(None);
        self.cols.len() - 1
    }

    /// Installs the starting basis. `unit[i]` may name a column equal to e_i;
    /// other rows get an artificial column.
    pub fn start(&mut self, unit: &[Option<usize>]) {
        assert_eq!(unit.len(), self.m);
        self.basis = Vec::with_capacity(self.m);
        for (i, u) in unit.iter().enumerate() {
            let j = match u {
                Some(j) => *j,
                None => {
                    let j = self.add_column(vec![(i, Rational::one())], Rational::zero());
                    self.artificial[j] = true;
                    j
                }
            };
            self.row_of[j] = Some(i);
            self.basis.push(j);
        }
        self.binv = (0..self.m)
            .map(|i| {
                let mut row = vec![Rational::zero(); self.m];
                row[i] = Rational::one();
                row
            })
            .collect();
        self.xb = self.b.clone();
        self.phase_one_done = !self.artificial.iter().any(|&a| a);
    }

    fn phase_cost(&self, j: usize, phase_one: bool) -> Rational {
        if phase_one {
            if self.artificial[j] {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            self.cost[j].clone()
        }
    }

    fn duals_for(&self, phase_one: bool) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.m];
        for r in 0..self.m {
            let c = self.phase_cost(self.basis[r], phase_one);
            if c.is_zero() {
                continue;
            }
            for (yc, bv) in y.iter_mut().zip(&self.binv[r]) {
                if !bv.is_zero() {
                    *yc += &c * bv;
                }
            }
        }
        y
    }

    pub fn duals(&self) -> Vec<Rational> {
        self.duals_for(false)
    }

    fn ftran(&self, j: usize) -> Vec<Rational> {
        let col = &self.cols[j];
        (0..self.m)
            .map(|r| {
                let row = &self.binv[r];
                let mut s = Rational::zero();
                for (i, v) in col {
                    let a = &row[*i];
                    if !a.is_zero() {
                        s += mul_entry(a, v);
                    }
                }
                s
            })
            .collect()
    }

    fn reduced_cost(&self, j: usize, y: &[Rational], phase_one: bool) -> Rational {
        let mut d = self.phase_cost(j, phase_one);
        for (i, v) in &self.cols[j] {
            if !y[*i].is_zero() {
                d -= mul_entry(&y[*i], v);
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize, alpha: &[Rational]) {
        let inv = alpha[r].recip();
        let nz: Vec<usize> = (0..self.m).filter(|&c| !self.binv[r][c].is_zero()).collect();
        for &c in &nz {
            self.binv[r][c] *= &inv;
        }
        self.xb[r] *= &inv;
        let pivot_row: Vec<(usize, Rational)> =
            nz.iter().map(|&c| (c, self.binv[r][c].clone())).collect();
        let xr = self.xb[r].clone();
        for (i, f) in alpha.iter().enumerate() {
            if i == r || f.is_zero() {
                continue;
            }
            let row = &mut self.binv[i];
            for (c, v) in &pivot_row {
                row[*c] -= f * v;
            }
            if !xr.is_zero() {
                self.xb[i] -= f * &xr;
            }
        }
        let old = self.basis[r];
        self.row_of[old] = None;
        self.row_of[j] = Some(r);
        self.basis[r] = j;
        self.pivots += 1;
    }

    /// Runs simplex iterations for the given phase.
    fn run(&mut self, phase_one: bool) -> Option<(usize, Vec<Rational>)> {
        loop {
            let y = self.duals_for(phase_one);
            let mut enter: Option<usize> = None;
            let mut best = Rational::zero();
            for j in 0..self.cols.len() {
                if self.row_of[j].is_some() || (!phase_one && self.artificial[j]) {
                    continue;
                }
                let d = self.reduced_cost(j, &y, phase_one);
                if d.is_negative() {
                    if self.bland {
                        enter = Some(j);
                        break;
                    }
                    if enter.is_none() || d < best {
                        best = d;
                        enter = Some(j);
                    }
                }
            }
            let j = match enter {
                Some(j) => j,
                None => return None,
            };
            let alpha = self.ftran(j);
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.m {
                let a = &alpha[r];
                if a.is_zero() {
                    continue;
                }
                let ratio = if !phase_one && self.artificial[self.basis[r]] {
                    Rational::zero()
                } else if a.is_positive() {
                    &self.xb[r] / a
                } else {
                    continue;
                };
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => {
                        ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (r, ratio) = match leave {
                Some(l) => l,
                None => return Some((j, alpha)),
            };
            if ratio.is_zero() {
                self.degenerate += 1;
                if self.degenerate > DEGENERATE_RUN {
                    self.bland = true;
                }
            } else {
                self.degenerate = 0;
            }
            self.pivot(r, j, &alpha);
        }
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if !self.artificial[self.basis[r]] {
                continue;
            }
            let row = self.binv[r].clone();
            let candidate = (0..self.cols.len()).find(|&j| {
                !self.artificial[j]
                    && self.row_of[j].is_none()
                    && self.cols[j]
                        .iter()
                        .any(|(i, _)| !row[*i].is_zero())
                    && {
                        let mut s = Rational::zero();
                        for (i, v) in &self.cols[j] {
                            s += mul_entry(&row[*i], v);
                        }
                        !s.is_zero()
                    }
            });
            if let Some(j) = candidate {
                let alpha = self.ftran(j);
                self.pivot(r, j, &alpha);
            }
        }
    }

    fn ray(&self, j: usize, alpha: &[Rational]) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.cols.len()];
        d[j] = Rational::one();
        for r in 0..self.m {
            if !alpha[r].is_zero() {
                d[self.basis[r]] = -&alpha[r];
            }
        }
        d
    }

    pub fn optimize(&mut self) -> Outcome {
        if !self.phase_one_done {
            self.bland = false;
            self.degenerate = 0;
            let _ = self.run(true);
            let infeas: Rational = (0..self.m)
                .filter(|&r| self.artificial[self.basis[r]])
                .map(|r| self.xb[r].clone())
                .sum();
            if infeas.is_positive() {
                return Outcome::Infeasible(self.duals_for(true));
            }
            self.drive_out_artificials();
            self.phase_one_done = true;
        }
        self.bland = false;
        self.degenerate = 0;
        match self.run(false) {
            None => Outcome::Optimal,
            Some((j, alpha)) => Outcome::Unbounded(self.ray(j, &alpha)),
        }
    }

    /// Values of every column at the current basis.
    pub fn values(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cols.len()];
        for r in 0..self.m {
            x[self.basis[r]] = self.xb[r].clone();
        }
        x
    }

}
