//! Exact Bernoulli numbers and polynomials (`B_1 = -1/2`).

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::linalg::{rat_int, Rat};

fn table() -> &'static RwLock<Vec<Rat>> {
    static T: OnceLock<RwLock<Vec<Rat>>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(vec![Rat::one()]))
}

/// `B_n` from `sum_{j<=n} C(n+1, j) B_j = 0`.
pub fn bernoulli_number(n: usize) -> Rat {
    if let Some(b) = table().read().expect("bernoulli table poisoned").get(n) {
        return b.clone();
    }
    let mut t = table().write().expect("bernoulli table poisoned");
    while t.len() <= n {
        let m = t.len();
        let b = if m > 1 && m % 2 == 1 {
            Rat::zero()
        } else {
            let s: Rat = (0..m)
                .map(|j| &t[j] * Rat::from_integer(binomial(BigInt::from(m + 1), BigInt::from(j))))
                .sum();
            -s / rat_int(m as i64 + 1)
        };
        t.push(b);
    }
    t[n].clone()
}

/// `B_k(x) = sum_j C(k,j) B_j x^(k-j)`, with `coeffs[i]` the coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliPoly {
    pub k: usize,
    pub coeffs: Vec<Rat>,
}

impl BernoulliPoly {
    pub fn new(k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        for j in 0..=k {
            coeffs[k - j] = bernoulli_number(j) * Rat::from_integer(binomial(BigInt::from(k), BigInt::from(j)));
        }
        BernoulliPoly { k, coeffs }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }
}

/// `B_k(x)`.
pub fn bernoulli_poly(k: usize, x: &Rat) -> Rat {
    BernoulliPoly::new(k).eval(x)
}
