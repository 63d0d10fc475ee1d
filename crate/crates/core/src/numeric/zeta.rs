//! Hurwitz zeta, polylogarithms at roots of unity and convergent colored
//! double zeta values
//! `ζ(r,s; z1,z2) = sum_{0<m<n} z1^m z2^n / (m^r n^s)` with `z1 = ζ_N^a`,
//! `z2 = ζ_N^b`.
//!
//! Double values are a partial double sum up to a cutoff `M` plus tails
//! `T_{w,q}(M) = sum_{n>M} w^n n^-q` expanded asymptotically in `1/M`:
//! for `w != 1` through `Li_{-j}(w)` (exact, via Bernoulli polynomials),
//! for `w = 1` by Euler–Maclaurin.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use super::bernoulli::{bernoulli_number, BernoulliPoly};
use super::fixed::{inv_pow, ln_fixed, pi_fixed, rat_to_fixed, roots_of_unity, MpComplex, GUARD_BITS};
use crate::error::{Error, Result};
use crate::linalg::{rat, rat_int, Rat};

/// Fractional bits used internally for a requested precision.
pub fn working_bits(prec_bits: u32) -> u32 {
    prec_bits + GUARD_BITS
}

fn ulp(f: u32) -> f64 {
    2f64.powi(-(f as i32))
}

fn rising(q: u32, len: u32) -> BigInt {
    (0..len).fold(BigInt::one(), |acc, i| acc * (q + i))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn mul_big(z: &MpComplex, x: &BigInt) -> MpComplex {
    let xf = x.bits() as i32;
    MpComplex {
        re: &z.re * x,
        im: &z.im * x,
        frac_bits: z.frac_bits,
        err: z.err * 2f64.powi(xf),
    }
}

/// Sums an asymptotic series term by term until the terms drop below one
/// unit in the last place; fails if the terms start growing first.
fn sum_asymptotic(
    f: u32,
    what: &str,
    mut term: impl FnMut(u32) -> MpComplex,
) -> Result<MpComplex> {
    let mut acc = MpComplex::zero(f);
    let mut min_bits = u64::MAX;
    let mut small = 0;
    for j in 0..(8 * f + 64) {
        let t = term(j);
        let bits = t.mantissa_bits();
        acc = acc.add(&t);
        if bits <= 1 {
            small += 1;
            if small >= 2 {
                return Ok(acc.add_err(2.0 * ulp(f)));
            }
            continue;
        }
        small = 0;
        if bits < min_bits {
            min_bits = bits;
        } else if bits > min_bits + 24 {
            return Err(Error::NoConvergence(what.to_string()));
        }
    }
    Err(Error::NoConvergence(what.to_string()))
}

/// `ζ(s, x) = sum_{n>=0} (n+x)^-s` for `s >= 2`, `0 < x <= 1`.
pub fn hurwitz_zeta(s: u32, x: &Rat, prec_bits: u32) -> Result<MpComplex> {
    hurwitz_fixed(s, x, working_bits(prec_bits))
}

fn hurwitz_fixed(s: u32, x: &Rat, f: u32) -> Result<MpComplex> {
    if s < 2 {
        return Err(Error::Divergent(format!("Hurwitz zeta at s = {s}")));
    }
    if !x.is_positive() || *x > rat_int(1) {
        return Err(Error::Parse(format!("Hurwitz parameter {x} outside (0,1]")));
    }
    let m = (f / 4 + 32) as u64;
    let (p, q) = (x.numer().clone(), x.denom().clone());
    let qs = num_traits::pow(q.clone(), s as usize) << f;
    let mut head = BigInt::zero();
    for n in 0..m {
        let base = &q * n + &p;
        head += super::fixed::div_round(&qs, &num_traits::pow(base, s as usize));
    }
    let y = Rat::from_integer(BigInt::from(m)) + x;
    let y_inv = Rat::one() / &y;
    let pow = |e: u32| -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc *= &y_inv;
        }
        acc
    };
    let lead = pow(s - 1) / rat_int(s as i64 - 1) + pow(s) / rat_int(2);
    let mut acc = MpComplex::from_real(head, f, m as f64 * ulp(f)).add(&MpComplex::from_rat(&lead, f));
    let mut y_pow = pow(s + 1);
    let y_inv2 = &y_inv * &y_inv;
    let tail = sum_asymptotic(f, "Hurwitz Euler–Maclaurin tail", |j| {
        let k = j + 1;
        let c = bernoulli_number(2 * k as usize) / Rat::from_integer(factorial(2 * k))
            * Rat::from_integer(rising(s, 2 * k - 1))
            * &y_pow;
        y_pow *= &y_inv2;
        MpComplex::from_rat(&c, f)
    })?;
    acc = acc.add(&tail);
    Ok(acc)
}

/// Per-level data shared by all evaluations at one working precision.
struct Engine {
    n: u32,
    f: u32,
    m: u64,
    roots: Arc<Vec<MpComplex>>,
    /// `Li_{-j}(ζ^a) / M^j` for `a != 0`, extended on demand.
    scaled_neg_li: Mutex<HashMap<u32, Vec<MpComplex>>>,
    /// `sum_j C(-q,j) Li_{-j}(ζ^a) M^-j`, keyed by `(a, q)`.
    s_hat: Mutex<HashMap<(u32, u32), MpComplex>>,
    /// Euler–Maclaurin factor `E(q)` with `T_{1,q}(M) = M^(1-q) E(q)`.
    em: Mutex<HashMap<u32, MpComplex>>,
}

type EngineCache = RwLock<HashMap<(u32, u32), Arc<Engine>>>;

fn engine(n: u32, f: u32) -> Arc<Engine> {
    static CACHE: OnceLock<EngineCache> = OnceLock::new();
    let c = CACHE.get_or_init(Default::default);
    if let Some(e) = c.read().expect("engine cache poisoned").get(&(n, f)) {
        return e.clone();
    }
    let e = Arc::new(Engine {
        n,
        f,
        m: (f as u64 * n as u64) / 4 + 32,
        roots: roots_of_unity(n, f),
        scaled_neg_li: Mutex::new(HashMap::new()),
        s_hat: Mutex::new(HashMap::new()),
        em: Mutex::new(HashMap::new()),
    });
    c.write().expect("engine cache poisoned").entry((n, f)).or_insert(e).clone()
}

impl Engine {
    fn root(&self, e: u64) -> &MpComplex {
        &self.roots[(e % self.n as u64) as usize]
    }

    fn big_m(&self) -> BigInt {
        BigInt::from(self.m)
    }

    /// `Li_{-j}(ζ^a) / M^j = -N^j / ((j+1) M^j) sum_{i=1}^N ζ^{ai} B_{j+1}(i/N)`.
    fn scaled_li(&self, a: u32, j: u32) -> MpComplex {
        let mut cache = self.scaled_neg_li.lock().expect("engine poisoned");
        let v = cache.entry(a).or_default();
        while v.len() <= j as usize {
            let jj = v.len() as u32;
            let b = BernoulliPoly::new(jj as usize + 1);
            let scale = -Rat::new(
                num_traits::pow(BigInt::from(self.n), jj as usize),
                BigInt::from(jj + 1) * num_traits::pow(self.big_m(), jj as usize),
            );
            let mut acc = MpComplex::zero(self.f);
            for i in 1..=self.n {
                let c = b.eval(&rat(i as i64, self.n as i64)) * &scale;
                let cf = rat_to_fixed(&c, self.f);
                acc = acc.add(&self.root(a as u64 * i as u64).mul_real_fixed(&cf));
            }
            v.push(acc);
        }
        v[j as usize].clone()
    }

    fn s_hat(&self, a: u32, q: u32) -> Result<MpComplex> {
        if let Some(v) = self.s_hat.lock().expect("engine poisoned").get(&(a, q)) {
            return Ok(v.clone());
        }
        let v = sum_asymptotic(self.f, "tail expansion at a root of unity", |j| {
            let c = binomial(BigInt::from(q + j - 1), BigInt::from(j));
            let t = mul_big(&self.scaled_li(a, j), &c);
            if j % 2 == 1 {
                t.neg()
            } else {
                t
            }
        })?;
        self.s_hat.lock().expect("engine poisoned").insert((a, q), v.clone());
        Ok(v)
    }

    /// `E(q) = 1/(q-1) - 1/(2M) + sum_k B_2k/(2k)! (q)_{2k-1} M^-2k`.
    fn em(&self, q: u32) -> Result<MpComplex> {
        if let Some(v) = self.em.lock().expect("engine poisoned").get(&q) {
            return Ok(v.clone());
        }
        let m = Rat::from_integer(self.big_m());
        let lead = rat(1, q as i64 - 1) - Rat::one() / (rat_int(2) * &m);
        let m2 = &m * &m;
        let mut mp = Rat::one() / &m2;
        let tail = sum_asymptotic(self.f, "Euler–Maclaurin tail", |j| {
            let k = j + 1;
            let c = bernoulli_number(2 * k as usize) / Rat::from_integer(factorial(2 * k))
                * Rat::from_integer(rising(q, 2 * k - 1))
                * &mp;
            mp /= &m2;
            MpComplex::from_rat(&c, self.f)
        })?;
        let v = MpComplex::from_rat(&lead, self.f).add(&tail);
        self.em.lock().expect("engine poisoned").insert(q, v.clone());
        Ok(v)
    }

    /// `M^shift T_{ζ^a, q}(M)` split as `prefactor * series`, returning
    /// `(ζ^{aM} M^-q` or `M^(1-q)`, series value`)`.
    fn tail_parts(&self, a: u32, q: u32) -> Result<(MpComplex, MpComplex)> {
        let f = self.f;
        if a == 0 {
            if q < 2 {
                return Err(Error::Divergent("harmonic tail".into()));
            }
            let pre = MpComplex::from_real(inv_pow(&self.big_m(), q - 1, f), f, ulp(f));
            Ok((pre, self.em(q)?))
        } else {
            let pre = self.root(a as u64 * self.m).mul_real_fixed(&inv_pow(&self.big_m(), q, f));
            Ok((pre, self.s_hat(a, q)?))
        }
    }

    /// `T_{ζ^a, q}(M)`.
    fn tail(&self, a: u32, q: u32) -> Result<MpComplex> {
        let (pre, ser) = self.tail_parts(a, q)?;
        Ok(pre.mul(&ser))
    }

    fn double_zeta(&self, r: u32, s: u32, a: u32, b: u32) -> Result<MpComplex> {
        let (n, f, m) = (self.n, self.f, self.m);
        let w = (a + b) % n;
        // partial double sum and H(M) = sum_{m<=M} z1^m m^-r
        let mut h = MpComplex::zero(f);
        let mut head = MpComplex::zero(f);
        for k in 1..=m {
            let kk = BigInt::from(k);
            if !h.re.is_zero() || !h.im.is_zero() {
                let outer = self.root(b as u64 * k).mul_real_fixed(&inv_pow(&kk, s, f));
                head = head.add(&outer.mul(&h));
            }
            h = h.add(&self.root(a as u64 * k).mul_real_fixed(&inv_pow(&kk, r, f)));
        }
        let cross = h.mul(&self.tail(b, s)?);
        // D = sum_{M<m<n} z1^m z2^n m^-r n^-s
        let d = if b != 0 {
            let (pre, _) = self.tail_parts(w, r + s)?;
            let ser = sum_asymptotic(f, "double tail", |k| {
                let c = binomial(BigInt::from(s + k - 1), BigInt::from(k));
                let l = mul_big(&self.scaled_li(b, k), &c);
                let l = if k % 2 == 1 { l.neg() } else { l };
                let g = if w == 0 { self.em(r + s + k) } else { self.s_hat(w, r + s + k) };
                match g {
                    Ok(g) => l.mul(&g),
                    Err(_) => MpComplex::zero(f).with_err(f64::INFINITY),
                }
            })?;
            pre.mul(&ser)
        } else {
            // T_{1,s}(m) = sum_j γ_j m^(1-s-j) with γ_0 = 1/(s-1), γ_1 = -1/2,
            // γ_2k = B_2k/(2k)! (s)_{2k-1}
            let e0 = r + s - 1;
            let (pre, _) = self.tail_parts(a, e0)?;
            let big_m = Rat::from_integer(self.big_m());
            let ser = sum_asymptotic(f, "double tail", |j| {
                let gamma = match j {
                    0 => rat(1, s as i64 - 1),
                    1 => rat(-1, 2),
                    j if j % 2 == 1 => return MpComplex::zero(f),
                    j => {
                        bernoulli_number(j as usize) / Rat::from_integer(factorial(j))
                            * Rat::from_integer(rising(s, j - 1))
                    }
                };
                let mut c = gamma;
                for _ in 0..j {
                    c /= &big_m;
                }
                let g = if a == 0 { self.em(e0 + j) } else { self.s_hat(a, e0 + j) };
                match g {
                    Ok(g) => g.mul_rat(&c),
                    Err(_) => MpComplex::zero(f).with_err(f64::INFINITY),
                }
            })?;
            pre.mul(&ser)
        };
        let v = head.add(&cross).add(&d);
        if !v.err.is_finite() {
            return Err(Error::NoConvergence(format!("ζ({r},{s};{a},{b}) at level {n}")));
        }
        Ok(v)
    }

    /// `Li_k(ζ^a)` by partial sum plus tail; an independent route used
    /// to cross-check [`polylog_root`].
    fn polylog_by_tail(&self, k: u32, a: u32) -> Result<MpComplex> {
        let f = self.f;
        let mut acc = MpComplex::zero(f);
        for j in 1..=self.m {
            acc = acc.add(&self.root(a as u64 * j).mul_real_fixed(&inv_pow(&BigInt::from(j), k, f)));
        }
        Ok(acc.add(&self.tail(a, k)?))
    }
}

fn check_level(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidLevel)
    } else {
        Ok(())
    }
}

/// `Li_k(ζ_N^a)` for `(k, a mod N) != (1, 0)`.
pub fn polylog_root(k: u32, n: u32, a: i64, prec_bits: u32) -> Result<MpComplex> {
    polylog_fixed(k, n, a, working_bits(prec_bits))
}

pub(crate) fn polylog_fixed(k: u32, n: u32, a: i64, f: u32) -> Result<MpComplex> {
    check_level(n)?;
    let a = a.rem_euclid(n as i64) as u32;
    if k == 0 || (k == 1 && a == 0) {
        return Err(Error::Divergent(format!("Li_{k}(1)")));
    }
    let roots = roots_of_unity(n, f);
    if k == 1 {
        // -log(1 - e^{iθ}) = -ln|1 - e^{iθ}| + i(π - θ)/2
        let two_minus = (BigInt::from(2) << f) - (&roots[a as usize].re << 1u32);
        let re = -(ln_fixed(&two_minus, f) >> 1u32);
        let pi = pi_fixed(f);
        let theta = super::fixed::div_round(&(&pi * 2 * a), &BigInt::from(n));
        let im = (pi - theta) >> 1u32;
        return Ok(MpComplex::from_fixed(re, im, f, 8.0 * ulp(f)));
    }
    let mut acc = MpComplex::zero(f);
    for j in 1..=n {
        let h = hurwitz_fixed(k, &rat(j as i64, n as i64), f)?;
        acc = acc.add(&roots[(a as u64 * j as u64 % n as u64) as usize].mul(&h));
    }
    let nk = num_traits::pow(BigInt::from(n), k as usize);
    Ok(acc.mul_rat(&Rat::new(BigInt::one(), nk)))
}

/// [`polylog_root`] through a partial sum and tail expansion instead of
/// Hurwitz zeta values.
pub fn polylog_root_by_tail(k: u32, n: u32, a: i64, prec_bits: u32) -> Result<MpComplex> {
    check_level(n)?;
    let a = a.rem_euclid(n as i64) as u32;
    if k == 0 || (k == 1 && a == 0) {
        return Err(Error::Divergent(format!("Li_{k}(1)")));
    }
    engine(n, working_bits(prec_bits)).polylog_by_tail(k, a)
}

/// `ζ(r,s; ζ_N^a, ζ_N^b)` for convergent indices `(s, b mod N) != (1, 0)`.
pub fn colored_double_zeta(r: u32, s: u32, a: i64, b: i64, n: u32, prec_bits: u32) -> Result<MpComplex> {
    double_zeta_fixed(r, s, a, b, n, working_bits(prec_bits))
}

pub(crate) fn double_zeta_fixed(r: u32, s: u32, a: i64, b: i64, n: u32, f: u32) -> Result<MpComplex> {
    check_level(n)?;
    if r == 0 || s == 0 {
        return Err(Error::InvalidSymbol(format!("ζ({r},{s}) needs positive exponents")));
    }
    let a = a.rem_euclid(n as i64) as u32;
    let b = b.rem_euclid(n as i64) as u32;
    if s == 1 && b == 0 {
        return Err(Error::Divergent(format!("ζ({r},1;ζ^{a},1)")));
    }
    engine(n, f).double_zeta(r, s, a, b)
}
