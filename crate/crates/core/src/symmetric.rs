//! Level sums used by symmetrized programs.
//!
//! For |x| = w (number of −1 entries) and a fixed level k,
//! `Σ_{|S|=k} χ_S(x) = K_k(w) = Σ_j (−1)^j C(w,j) C(n−w,k−j)` (Krawtchouk).

use num_bigint::BigInt;

pub fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

pub fn binomial_big(n: u32, k: u32) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// K_k(w) for arity n.
pub fn krawtchouk(n: u32, k: u32, w: u32) -> i128 {
    let mut s = 0i128;
    for j in 0..=k.min(w) {
        let t = binomial(w, j) * binomial(n - w, k - j);
        if j % 2 == 0 {
            s += t
        } else {
            s -= t
        }
    }
    s
}

/// table[k][w] = K_k(w), 0 ≤ k, w ≤ n.
pub fn krawtchouk_table(n: u32) -> Vec<Vec<i128>> {
    (0..=n)
        .map(|k| (0..=n).map(|w| krawtchouk(n, k, w)).collect())
        .collect()
}
