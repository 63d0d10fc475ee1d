//! Regularized values, the realization map `Φ` on formal symbols, and
//! numeric checks of Euler's identity, double shuffle and generated
//! relations.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::bernoulli::bernoulli_poly;
use super::fixed::{two_pi_i_pow, MpComplex};
use super::zeta::{double_zeta_fixed, polylog_fixed, working_bits};
use crate::error::{Error, Result};
use crate::formal::{DzvSymbol, FormalSpace, FormalVector, GeneratorKind, PevCertifier, PevSource};
use crate::linalg::{rat, rat_to_string, rational_reconstruct, Rat};
use crate::relations::Relation;
use crate::sl2::Coset;

/// `c0 + c1·T`, with `T` the regularized value of `ζ(1;1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegValue {
    pub c0: MpComplex,
    pub c1: MpComplex,
}

fn exactly_zero(z: &MpComplex) -> bool {
    z.re.is_zero() && z.im.is_zero() && z.err == 0.0
}

impl RegValue {
    pub fn zero(f: u32) -> Self {
        RegValue { c0: MpComplex::zero(f), c1: MpComplex::zero(f) }
    }

    pub fn constant(c0: MpComplex) -> Self {
        let f = c0.frac_bits;
        RegValue { c0, c1: MpComplex::zero(f) }
    }

    /// The bare variable `T`.
    pub fn t(f: u32) -> Self {
        RegValue { c0: MpComplex::zero(f), c1: MpComplex::one(f) }
    }

    pub fn add(&self, o: &RegValue) -> RegValue {
        RegValue { c0: self.c0.add(&o.c0), c1: self.c1.add(&o.c1) }
    }

    pub fn mul_rat(&self, x: &Rat) -> RegValue {
        RegValue { c0: self.c0.mul_rat(x), c1: self.c1.mul_rat(x) }
    }

    /// Product, refusing to produce a `T^2` term.
    pub fn mul(&self, o: &RegValue) -> Result<RegValue> {
        if !exactly_zero(&self.c1) && !exactly_zero(&o.c1) {
            return Err(Error::TDegreeOverflow("product of two divergent factors".into()));
        }
        Ok(RegValue {
            c0: self.c0.mul(&o.c0),
            c1: self.c0.mul(&o.c1).add(&self.c1.mul(&o.c0)),
        })
    }

    /// Value at `T = 0`.
    pub fn at_zero(&self) -> &MpComplex {
        &self.c0
    }
}

/// `ζ(r,1; ζ^a, 1) = T·Li_r(ζ^a) - ζ(1,r; 1,ζ^a) - Li_{r+1}(ζ^a)`.
pub fn reg_double_zeta(r: u32, a: i64, n: u32, prec_bits: u32) -> Result<RegValue> {
    reg_double_fixed(r, a, n, working_bits(prec_bits))
}

fn reg_double_fixed(r: u32, a: i64, n: u32, f: u32) -> Result<RegValue> {
    if n == 0 {
        return Err(Error::InvalidLevel);
    }
    if r == 1 && a.rem_euclid(n as i64) == 0 {
        return Err(Error::Divergent("ζ(1,1;1,1) has no regularization of degree 1".into()));
    }
    let lr = polylog_fixed(r, n, a, f)?;
    let c0 = double_zeta_fixed(1, r, 0, a, n, f)?.add(&polylog_fixed(r + 1, n, a, f)?).neg();
    Ok(RegValue { c0, c1: lr })
}

fn single_fixed(k: u32, c: u32, n: u32, f: u32) -> Result<RegValue> {
    if k == 1 && c == 0 {
        Ok(RegValue::t(f))
    } else {
        Ok(RegValue::constant(polylog_fixed(k, n, c as i64, f)?))
    }
}

type SymbolCache = RwLock<BTreeMap<(u32, u32, DzvSymbol), RegValue>>;

fn symbol_cache() -> &'static SymbolCache {
    static C: OnceLock<SymbolCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// `Φ` of a single symbol at `f` fractional bits.
fn symbol_value(sym: &DzvSymbol, n: u32, f: u32) -> Result<RegValue> {
    let key = (n, f, *sym);
    if let Some(v) = symbol_cache().read().expect("symbol cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = match *sym {
        DzvSymbol::Z2 { r, s, a, b } => {
            if s == 1 && b == 0 {
                reg_double_fixed(r, a as i64, n, f)?
            } else {
                RegValue::constant(double_zeta_fixed(r, s, a as i64, b as i64, n, f)?)
            }
        }
        DzvSymbol::P2 { r, s, a, b } => single_fixed(r, a, n, f)?
            .mul(&single_fixed(s, b, n, f)?)
            .map_err(|_| Error::TDegreeOverflow(sym.to_string()))?,
        DzvSymbol::Z1 { k, c } => single_fixed(k, c, n, f)?,
    };
    symbol_cache().write().expect("symbol cache poisoned").insert(key, v.clone());
    Ok(v)
}

/// `Φ(v)` at `f` fractional bits; symbols are evaluated in parallel and
/// summed in symbol order.
fn phi_fixed(v: &FormalVector, f: u32) -> Result<RegValue> {
    if (v.k, v.n) == (2, 1) {
        return Err(Error::ExcludedWeightLevel { k: 2, n: 1 });
    }
    let terms: Vec<(&DzvSymbol, &Rat)> = v.coeffs.iter().collect();
    let values = terms
        .par_iter()
        .map(|(s, _)| symbol_value(s, v.n, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(terms
        .iter()
        .zip(values)
        .fold(RegValue::zero(f), |acc, ((_, c), val)| acc.add(&val.mul_rat(c))))
}

/// The realization map: linear extension of regularized values.
pub fn phi(v: &FormalVector, prec_bits: u32) -> Result<RegValue> {
    phi_fixed(v, working_bits(prec_bits))
}

/// `-B_k(c/N)/k!` for `0 <= c < N`.
pub fn euler_coefficient(k: u32, c: u32, n: u32) -> Rat {
    let fact: BigInt = (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    -bernoulli_poly(k as usize, &rat(c as i64, n as i64)) / Rat::from_integer(fact)
}

/// `|Li_k(ζ^a) + (-1)^k Li_k(ζ^-a) + B_k(a/N)/k! (2πi)^k|`.
pub fn verify_euler(k: u32, n: u32, a: i64, prec_bits: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidLevel);
    }
    let f = working_bits(prec_bits);
    let c = a.rem_euclid(n as i64) as u32;
    if k == 0 || (k == 1 && c == 0) {
        return Err(Error::Divergent(format!("Li_{k}(1)")));
    }
    let mut lhs = polylog_fixed(k, n, a, f)?;
    let mirror = polylog_fixed(k, n, -a, f)?;
    lhs = if k % 2 == 0 { lhs.add(&mirror) } else { lhs.sub(&mirror) };
    let rhs = two_pi_i_pow(k, f).mul_rat(&euler_coefficient(k, c, n));
    Ok(lhs.sub(&rhs).abs())
}

/// Exact `Φ(g)/(2πi)^k` for a `P^ev` generator: a product of Euler
/// coefficients, with the divergent factor `(r,a) = (1,0)` giving 0.
pub fn pev_target(src: PevSource, n: u32) -> Rat {
    let factor = |r: u32, a: u32| if r == 1 && a == 0 { Rat::zero() } else { euler_coefficient(r, a, n) };
    match src {
        PevSource::Product { r, s, a, b } => factor(r, a) * factor(s, b),
        PevSource::Single { k, c } => euler_coefficient(k, c, n),
    }
}

/// Exact `Φ(v)/(2πi)^k` predicted by a certificate over `certifier`.
pub fn predicted_rational(certifier: &PevCertifier, cert: &crate::formal::Certificate) -> Rat {
    let n = certifier.space().level();
    cert.terms
        .iter()
        .map(|t| match (t.kind, certifier.source(t.index)) {
            (GeneratorKind::Pev, Some(src)) => &t.coeff * pev_target(src, n),
            _ => Rat::zero(),
        })
        .sum()
}

/// Result of dividing a value by `(2πi)^k` and reconstructing a rational.
#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    /// `|c1|` of the regularized value.
    pub t_residual: f64,
    pub value: String,
    pub quotient: String,
    /// `|Im(value/(2πi)^k)|`, must vanish before the real part is used.
    pub imag_residual: f64,
    #[serde(serialize_with = "ser_opt_rat")]
    pub rational: Option<Rat>,
    #[serde(serialize_with = "ser_rat")]
    pub predicted: Rat,
    /// `|value/(2πi)^k - rational|`, or against the prediction if
    /// reconstruction failed.
    pub residual: f64,
}

impl Reconstruction {
    pub fn matches_prediction(&self) -> bool {
        self.rational.as_ref() == Some(&self.predicted)
    }
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(x))
}

fn ser_opt_rat<S: serde::Serializer>(x: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&rat_to_string(x)),
        None => s.serialize_none(),
    }
}

fn reconstruct(v: &RegValue, k: u32, predicted: Rat, max_den: &BigInt, prec_bits: u32) -> Reconstruction {
    let f = v.c0.frac_bits;
    let q = v.c0.div(&two_pi_i_pow(k, f));
    let tol = Rat::new(BigInt::one(), BigInt::one() << prec_bits.saturating_sub(32));
    let rational = rational_reconstruct(&q.re_rat(), max_den, &tol);
    let target = rational.clone().unwrap_or_else(|| predicted.clone());
    let residual = MpComplex::from_rat(&target, f).sub(&q.rescale(f)).re_f64().abs();
    Reconstruction {
        t_residual: v.c1.abs(),
        value: v.c0.to_decimal(30),
        quotient: q.to_decimal(30),
        imag_residual: q.im_f64().abs(),
        rational,
        predicted,
        residual,
    }
}

/// Numeric check of one generated relation.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub source_index: usize,
    /// The full relation `3λ(Q^+) + λ(Q^-) + λ^S(Q)`.
    pub full: Reconstruction,
    /// Its `(odd,odd)` part `3λ(Q^+)`.
    pub odd: Reconstruction,
}

impl RelationCheck {
    /// The thresholds used for acceptance: `T` cancels to `2^-(prec-32)`,
    /// both quotients are real and reconstruct to the predicted rational
    /// within `residual_tol`.
    pub fn passed(&self, prec_bits: u32, residual_tol: f64) -> bool {
        let t_tol = 2f64.powi(-(prec_bits as i32 - 32));
        [&self.full, &self.odd].iter().all(|r| {
            r.t_residual < t_tol
                && r.imag_residual < residual_tol
                && r.residual < residual_tol
                && r.matches_prediction()
        })
    }
}

pub fn verify_relation(rel: &Relation, prec_bits: u32, max_den: &BigInt) -> Result<RelationCheck> {
    let certifier = PevCertifier::new(rel.vector.k, rel.vector.n)?;
    verify_relation_with(&certifier, rel, prec_bits, max_den)
}

pub fn verify_relation_with(
    certifier: &PevCertifier,
    rel: &Relation,
    prec_bits: u32,
    max_den: &BigInt,
) -> Result<RelationCheck> {
    let k = rel.vector.k;
    let predict = |c: &Option<crate::formal::Certificate>| -> Result<Rat> {
        let c = c.as_ref().ok_or_else(|| Error::CertificationFailed("relation without certificate".into()))?;
        Ok(predicted_rational(certifier, c))
    };
    let full = phi(&rel.vector, prec_bits)?;
    let odd = phi(&rel.odd_part, prec_bits)?;
    Ok(RelationCheck {
        source_index: rel.source_index,
        full: reconstruct(&full, k, predict(&rel.certificate)?, max_den, prec_bits),
        odd: reconstruct(&odd, k, predict(&rel.odd_certificate)?, max_den, prec_bits),
    })
}

/// Numeric values of both double shuffle expansions of `P^{r,s}_{a,b}`.
#[derive(Clone, Debug)]
pub struct DshCheck {
    pub product: RegValue,
    pub stuffle: RegValue,
    pub shuffle: RegValue,
}

impl DshCheck {
    /// Largest deviation over both components of both relations.
    pub fn max_residual(&self) -> f64 {
        [&self.stuffle, &self.shuffle]
            .iter()
            .flat_map(|v| [v.c0.abs(), v.c1.abs()])
            .fold(0.0, f64::max)
    }
}

pub fn dsh_check(r: u32, s: u32, a: i64, b: i64, n: u32, prec_bits: u32) -> Result<DshCheck> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidSymbol(format!("P^{{{r},{s}}} needs positive exponents")));
    }
    let fs = FormalSpace::new(r + s, n)?;
    Coset::new(n, a, b)?;
    let (a, b) = (a.rem_euclid(n as i64) as u32, b.rem_euclid(n as i64) as u32);
    let product = FormalVector::from_terms(n, r + s, [(Rat::one(), DzvSymbol::P2 { r, s, a, b })]);
    Ok(DshCheck {
        product: phi(&product, prec_bits)?,
        stuffle: phi(&fs.stuffle_vector(r, s, a, b), prec_bits)?,
        shuffle: phi(&fs.shuffle_vector(r, s, a, b), prec_bits)?,
    })
}

/// Largest `|Φ|` component over all double shuffle relation vectors of
/// weight `k` and level `N`.
pub fn dsh_vectors_residual(k: u32, n: u32, prec_bits: u32) -> Result<f64> {
    let fs = FormalSpace::new(k, n)?;
    let mut worst: f64 = 0.0;
    for v in fs.dsh_relation_vectors() {
        let x = phi(&v, prec_bits)?;
        worst = worst.max(x.c0.abs()).max(x.c1.abs());
    }
    Ok(worst)
}

/// `Φ(g)/(2πi)^k` for every `P^ev` generator, reconstructed and compared
/// with its exact Euler target.
pub fn pev_generator_checks(k: u32, n: u32, prec_bits: u32, max_den: &BigInt) -> Result<Vec<(PevSource, Reconstruction)>> {
    let fs = FormalSpace::new(k, n)?;
    fs.pev_generators_with_source()
        .into_iter()
        .map(|(src, v)| {
            let x = phi(&v, prec_bits)?;
            Ok((src, reconstruct(&x, k, pev_target(src, n), max_den, prec_bits)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::zeta::{colored_double_zeta, polylog_root};

    const P: u32 = 192;
    const TOL: f64 = 1e-50;

    #[test]
    fn reg_value_products() {
        let f = working_bits(P);
        let t = RegValue::t(f);
        assert!(matches!(t.mul(&t), Err(Error::TDegreeOverflow(_))));
        let two = RegValue::constant(MpComplex::from_rat(&rat(2, 1), f));
        let p = t.mul(&two).unwrap();
        assert_eq!(p.c1.re_rat(), rat(2, 1));
        assert!(p.c0.abs() == 0.0);
    }

    #[test]
    fn regularized_double_zeta_level_one() {
        // ζ*(2,1) = T ζ(2) - 2ζ(3)
        let v = reg_double_zeta(2, 0, 1, P).unwrap();
        let z2 = polylog_root(2, 1, 0, P).unwrap();
        let z3 = polylog_root(3, 1, 0, P).unwrap();
        assert!(v.c1.sub(&z2).abs() < TOL);
        assert!(v.c0.add(&z3.mul_int(2)).abs() < TOL);
        assert!(reg_double_zeta(1, 0, 1, P).is_err());
        assert!(reg_double_zeta(1, 2, 4, P).is_ok());
    }

    #[test]
    fn phi_examples() {
        let v = FormalVector::from_terms(1, 3, [(rat(1, 1), DzvSymbol::Z2 { r: 1, s: 2, a: 0, b: 0 })]);
        let x = phi(&v, P).unwrap();
        assert!(x.c0.sub(&polylog_root(3, 1, 0, P).unwrap()).abs() < TOL);
        assert!(x.c1.abs() == 0.0);
        let bad = FormalVector::from_terms(1, 2, [(rat(1, 1), DzvSymbol::Z1 { k: 2, c: 0 })]);
        assert!(phi(&bad, P).is_err());
    }

    #[test]
    fn euler_identity_small() {
        assert_eq!(euler_coefficient(2, 0, 1), rat(-1, 12));
        for (k, n, a) in [(2, 1, 0), (3, 4, 1), (1, 3, 2), (4, 6, 5)] {
            assert!(verify_euler(k, n, a, P).unwrap() < TOL, "({k},{n},{a})");
        }
        assert!(verify_euler(1, 3, 0, P).is_err());
    }

    #[test]
    fn dsh_numeric_level_two_and_three() {
        for (r, s, a, b, n) in [(1, 2, 0, 1, 2), (2, 1, 1, 0, 3), (1, 1, 1, 2, 3), (2, 2, 1, 1, 2), (1, 3, 0, 0, 1)] {
            let c = dsh_check(r, s, a, b, n, P).unwrap();
            assert!(c.max_residual() < TOL, "({r},{s},{a},{b},{n}): {}", c.max_residual());
        }
    }

    #[test]
    fn dsh_vectors_vanish_small_grid() {
        for (k, n) in [(3, 1), (3, 2), (4, 2), (3, 3)] {
            assert!(dsh_vectors_residual(k, n, P).unwrap() < TOL, "({k},{n})");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let x = colored_double_zeta(2, 1, 1, 2, 5, P).unwrap();
        let y = colored_double_zeta(2, 1, -1, -2, 5, P).unwrap();
        assert!(x.sub(&y.conj()).abs() < TOL);
    }
}
