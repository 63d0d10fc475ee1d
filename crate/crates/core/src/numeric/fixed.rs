//! Fixed-point complex numbers: `re` and `im` are integers scaled by
//! `2^frac_bits`, with an absolute error estimate carried alongside.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Rat;

/// Extra bits carried internally beyond the requested precision.
pub const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: BigInt,
    pub im: BigInt,
    pub frac_bits: u32,
    /// Absolute error bound (heuristic: rounding counts plus truncation).
    pub err: f64,
}

fn ulp(f: u32) -> f64 {
    2f64.powi(-(f as i32))
}

/// `round(x / 2^k)`.
pub fn round_shift(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    (x + (BigInt::one() << (k - 1))) >> k
}

/// `round(a / b)` for `b != 0`.
pub fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b): (BigInt, BigInt) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    let num: BigInt = a * 2 + &b;
    num.div_floor(&(b * 2))
}

/// `round(x * 2^f)` for rational `x`.
pub fn rat_to_fixed(x: &Rat, f: u32) -> BigInt {
    div_round(&(x.numer() << f), x.denom())
}

/// `round(2^f / n^e)`.
pub fn inv_pow(n: &BigInt, e: u32, f: u32) -> BigInt {
    div_round(&(BigInt::one() << f), &num_traits::pow(n.clone(), e as usize))
}

fn big_to_f64(x: &BigInt, f: u32) -> f64 {
    // Scale down first so huge mantissas do not overflow.
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0) as u32;
    let head = (x >> shift).to_f64().unwrap_or(0.0);
    head * 2f64.powi(shift as i32 - f as i32)
}

impl MpComplex {
    pub fn zero(f: u32) -> Self {
        MpComplex { re: BigInt::zero(), im: BigInt::zero(), frac_bits: f, err: 0.0 }
    }

    pub fn from_fixed(re: BigInt, im: BigInt, f: u32, err: f64) -> Self {
        MpComplex { re, im, frac_bits: f, err }
    }

    pub fn from_rat(x: &Rat, f: u32) -> Self {
        MpComplex { re: rat_to_fixed(x, f), im: BigInt::zero(), frac_bits: f, err: ulp(f) }
    }

    pub fn from_real(re: BigInt, f: u32, err: f64) -> Self {
        MpComplex { re, im: BigInt::zero(), frac_bits: f, err }
    }

    pub fn one(f: u32) -> Self {
        MpComplex::from_real(BigInt::one() << f, f, 0.0)
    }

    pub fn i(f: u32) -> Self {
        MpComplex { re: BigInt::zero(), im: BigInt::one() << f, frac_bits: f, err: 0.0 }
    }

    fn check(&self, o: &MpComplex) {
        assert_eq!(self.frac_bits, o.frac_bits, "mixing fixed-point precisions");
    }

    pub fn add(&self, o: &MpComplex) -> MpComplex {
        self.check(o);
        MpComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            frac_bits: self.frac_bits,
            err: self.err + o.err,
        }
    }

    pub fn sub(&self, o: &MpComplex) -> MpComplex {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MpComplex {
        MpComplex { re: -&self.re, im: -&self.im, ..self.clone() }
    }

    pub fn conj(&self) -> MpComplex {
        MpComplex { im: -&self.im, ..self.clone() }
    }

    pub fn mul(&self, o: &MpComplex) -> MpComplex {
        self.check(o);
        let f = self.frac_bits;
        let re = round_shift(&(&self.re * &o.re - &self.im * &o.im), f);
        let im = round_shift(&(&self.re * &o.im + &self.im * &o.re), f);
        let err = self.abs() * o.err + o.abs() * self.err + self.err * o.err + 2.0 * ulp(f);
        MpComplex { re, im, frac_bits: f, err }
    }

    /// Multiplication by a real fixed-point number `x * 2^-f` known exactly.
    pub fn mul_real_fixed(&self, x: &BigInt) -> MpComplex {
        let f = self.frac_bits;
        let xf = big_to_f64(x, f).abs();
        MpComplex {
            re: round_shift(&(&self.re * x), f),
            im: round_shift(&(&self.im * x), f),
            frac_bits: f,
            err: self.err * xf + ulp(f),
        }
    }

    pub fn mul_rat(&self, x: &Rat) -> MpComplex {
        let xf = x.numer().to_f64().unwrap_or(f64::INFINITY) / x.denom().to_f64().unwrap_or(1.0);
        MpComplex {
            re: div_round(&(&self.re * x.numer()), x.denom()),
            im: div_round(&(&self.im * x.numer()), x.denom()),
            frac_bits: self.frac_bits,
            err: self.err * xf.abs() + ulp(self.frac_bits),
        }
    }

    pub fn mul_int(&self, x: i64) -> MpComplex {
        MpComplex {
            re: &self.re * x,
            im: &self.im * x,
            frac_bits: self.frac_bits,
            err: self.err * (x as f64).abs(),
        }
    }

    /// Multiplication by `i^e`.
    pub fn mul_i_pow(&self, e: u32) -> MpComplex {
        match e % 4 {
            0 => self.clone(),
            1 => MpComplex { re: -&self.im, im: self.re.clone(), ..self.clone() },
            2 => self.neg(),
            _ => MpComplex { re: self.im.clone(), im: -&self.re, ..self.clone() },
        }
    }

    /// Division by a nonzero complex number.
    pub fn div(&self, o: &MpComplex) -> MpComplex {
        self.check(o);
        let f = self.frac_bits;
        let den = &o.re * &o.re + &o.im * &o.im;
        let re_num = (&self.re * &o.re + &self.im * &o.im) << f;
        let im_num = (&self.im * &o.re - &self.re * &o.im) << f;
        let oa = o.abs();
        let q = MpComplex { re: div_round(&re_num, &den), im: div_round(&im_num, &den), frac_bits: f, err: 0.0 };
        let err = (self.err + q.abs() * o.err) / oa + 2.0 * ulp(f);
        MpComplex { err, ..q }
    }

    pub fn with_err(mut self, err: f64) -> MpComplex {
        self.err = err;
        self
    }

    pub fn add_err(mut self, err: f64) -> MpComplex {
        self.err += err;
        self
    }

    pub fn re_f64(&self) -> f64 {
        big_to_f64(&self.re, self.frac_bits)
    }

    pub fn im_f64(&self) -> f64 {
        big_to_f64(&self.im, self.frac_bits)
    }

    pub fn abs(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }

    /// Upper bound on `log2 |z|`, `-inf` for an exact zero.
    pub fn log2_abs(&self) -> f64 {
        let bits = self.re.bits().max(self.im.bits()) as f64;
        if bits == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.abs().log2()
    }

    /// Number of bits in the larger mantissa.
    pub fn mantissa_bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }

    pub fn re_rat(&self) -> Rat {
        Rat::new(self.re.clone(), BigInt::one() << self.frac_bits)
    }

    pub fn im_rat(&self) -> Rat {
        Rat::new(self.im.clone(), BigInt::one() << self.frac_bits)
    }

    /// Changes the number of fractional bits (rounding when reducing).
    pub fn rescale(&self, f: u32) -> MpComplex {
        let (re, im) = if f >= self.frac_bits {
            let d = f - self.frac_bits;
            (&self.re << d, &self.im << d)
        } else {
            let d = self.frac_bits - f;
            (round_shift(&self.re, d), round_shift(&self.im, d))
        };
        MpComplex { re, im, frac_bits: f, err: self.err + ulp(f) }
    }

    /// Decimal rendering with `digits` digits after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let part = |x: &BigInt| -> String {
            let scale = num_traits::pow(BigInt::from(10), digits);
            let v = div_round(&(x * &scale), &(BigInt::one() << self.frac_bits));
            let neg = v.sign() == Sign::Minus;
            let s = v.abs().to_string();
            let s = format!("{s:0>width$}", width = digits + 1);
            let (int, frac) = s.split_at(s.len() - digits);
            format!("{}{int}.{frac}", if neg { "-" } else { "" })
        };
        let im = part(&self.im);
        if im.starts_with('-') {
            format!("{} - {}i", part(&self.re), &im[1..])
        } else {
            format!("{} + {im}i", part(&self.re))
        }
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

type ConstCache = RwLock<HashMap<u32, Arc<BigInt>>>;

fn cached(cache: &'static OnceLock<ConstCache>, f: u32, compute: fn(u32) -> BigInt) -> BigInt {
    let c = cache.get_or_init(Default::default);
    if let Some(v) = c.read().expect("constant cache poisoned").get(&f) {
        return (**v).clone();
    }
    let v = compute(f);
    c.write().expect("constant cache poisoned").insert(f, Arc::new(v.clone()));
    v
}

/// `atan(1/x) * 2^f`.
fn atan_inv(x: u32, f: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << f) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `π * 2^f`, rounded.
pub fn pi_fixed(f: u32) -> BigInt {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, f, |f| {
        let g = f + 32;
        round_shift(&(atan_inv(5, g) * 16 - atan_inv(239, g) * 4), 32)
    })
}

/// `atanh(t)` for a fixed-point `|t| < 1/2` at `f` bits.
fn atanh_fixed(t: &BigInt, f: u32) -> BigInt {
    let t2 = round_shift(&(t * t), f);
    let mut power = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        sum += &power / (2 * k + 1);
        power = round_shift(&(&power * &t2), f);
        k += 1;
    }
    sum
}

/// `ln 2 * 2^f`, rounded.
pub fn ln2_fixed(f: u32) -> BigInt {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, f, |f| {
        let g = f + 32;
        let third = (BigInt::one() << g) / 3;
        round_shift(&(atanh_fixed(&third, g) * 2), 32)
    })
}

/// `ln x` for a positive fixed-point `x` at `f` bits.
pub fn ln_fixed(x: &BigInt, f: u32) -> BigInt {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    let g = f + 32;
    let xg = x << 32u32;
    // x = 2^e * y with y in [1, 2)
    let e = xg.bits() as i64 - 1 - g as i64;
    let y = if e >= 0 { &xg >> (e as u32) } else { &xg << ((-e) as u32) };
    let one = BigInt::one() << g;
    let t = div_round(&((&y - &one) << g), &(&y + &one));
    let ln_y = atanh_fixed(&t, g) * 2;
    round_shift(&(ln_y + ln2_fixed(g) * e), 32)
}

/// `(cos θ, sin θ)` at `f` bits for a fixed-point `|θ| <= π`.
fn cos_sin(theta: &BigInt, f: u32) -> (BigInt, BigInt) {
    let g = f + 32;
    let th = theta << 32u32;
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term = BigInt::one() << g; // θ^n / n!
    let mut n = 0u32;
    while !term.is_zero() {
        match n % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        n += 1;
        term = round_shift(&(&term * &th), g) / n;
    }
    (round_shift(&cos, 32), round_shift(&sin, 32))
}

type RootKey = (u32, u32);
type RootCache = RwLock<HashMap<RootKey, Arc<Vec<MpComplex>>>>;

/// `e^{2πij/N}` for `j = 0..N` at `f` bits.
pub fn roots_of_unity(n: u32, f: u32) -> Arc<Vec<MpComplex>> {
    static CACHE: OnceLock<RootCache> = OnceLock::new();
    let c = CACHE.get_or_init(Default::default);
    if let Some(v) = c.read().expect("root cache poisoned").get(&(n, f)) {
        return v.clone();
    }
    let pi = pi_fixed(f + 8);
    let roots: Vec<MpComplex> = (0..n)
        .map(|j| {
            // exact values at the quarter points
            if 4 * j % n == 0 {
                let (re, im) = match 4 * j / n {
                    0 => (1, 0),
                    1 => (0, 1),
                    2 => (-1, 0),
                    _ => (0, -1),
                };
                return MpComplex::from_fixed(BigInt::from(re) << f, BigInt::from(im) << f, f, 0.0);
            }
            let jj = if 2 * j <= n { j as i64 } else { j as i64 - n as i64 };
            let theta = div_round(&(&pi * 2 * jj), &BigInt::from(n));
            let (c, s) = cos_sin(&theta, f + 8);
            MpComplex::from_fixed(round_shift(&c, 8), round_shift(&s, 8), f, ulp(f))
        })
        .collect();
    let roots = Arc::new(roots);
    c.write().expect("root cache poisoned").insert((n, f), roots.clone());
    roots
}

/// `(2πi)^k` at `f` bits.
pub fn two_pi_i_pow(k: u32, f: u32) -> MpComplex {
    let two_pi = MpComplex::from_real(pi_fixed(f + 16) * 2, f + 16, 0.0);
    let mut acc = MpComplex::one(f + 16);
    for _ in 0..k {
        acc = acc.mul(&two_pi);
    }
    acc.mul_i_pow(k).rescale(f).with_err((k as f64 + 1.0) * ulp(f))
}
