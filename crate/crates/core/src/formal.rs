//! The formal double zeta space: symbols `Z^{r,s}_{a,b}`, `P^{r,s}_{a,b}`,
//! `Z^k_c`, the stuffle/shuffle relation vectors, the even subspace `P^ev`
//! and the maps `λ, λ^S, λ^P` out of barred equivariant vectors.
//!
//! Nothing is ever taken modulo the relations. Statements of the form
//! "`x` lies in `P^ev` inside `D`" are decided in the free space on the
//! symbols against the span of relation vectors and `P^ev` generators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::equivariant::{delta_support, factorial, Ambient, EquivariantVector};
use crate::error::{Error, Result};
use crate::linalg::{rat_from_str, rat_int, rat_to_string, Rat, SpanningSet, Subspace};
use crate::period::{space_v, space_v_minus_sym};
use crate::sl2::{enumerate_cosets, Coset, Flavor};

/// A generator of the free space. Indices `a, b, c` are residues mod `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DzvSymbol {
    Z2 { r: u32, s: u32, a: u32, b: u32 },
    P2 { r: u32, s: u32, a: u32, b: u32 },
    Z1 { k: u32, c: u32 },
}

impl DzvSymbol {
    pub fn weight(&self) -> u32 {
        match *self {
            DzvSymbol::Z2 { r, s, .. } | DzvSymbol::P2 { r, s, .. } => r + s,
            DzvSymbol::Z1 { k, .. } => k,
        }
    }

    pub fn to_latex(&self) -> String {
        match *self {
            DzvSymbol::Z2 { r, s, a, b } => format!("Z_{{{a},{b}}}^{{{r},{s}}}"),
            DzvSymbol::P2 { r, s, a, b } => format!("P_{{{a},{b}}}^{{{r},{s}}}"),
            DzvSymbol::Z1 { k, c } => format!("Z_{{{c}}}^{{{k}}}"),
        }
    }
}

impl fmt::Display for DzvSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DzvSymbol::Z2 { r, s, a, b } => write!(f, "Z({r},{s};{a},{b})"),
            DzvSymbol::P2 { r, s, a, b } => write!(f, "P({r},{s};{a},{b})"),
            DzvSymbol::Z1 { k, c } => write!(f, "Z({k};{c})"),
        }
    }
}

/// `x mod n` in `[0, n)`.
pub fn residue(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

fn z2(r: u32, s: u32, a: i64, b: i64, n: u32) -> DzvSymbol {
    DzvSymbol::Z2 { r, s, a: residue(a, n), b: residue(b, n) }
}

fn p2(r: u32, s: u32, a: i64, b: i64, n: u32) -> DzvSymbol {
    DzvSymbol::P2 { r, s, a: residue(a, n), b: residue(b, n) }
}

fn z1(k: u32, c: i64, n: u32) -> DzvSymbol {
    DzvSymbol::Z1 { k, c: residue(c, n) }
}

fn sign(e: u32) -> Rat {
    if e % 2 == 0 {
        rat_int(1)
    } else {
        rat_int(-1)
    }
}

/// Sparse rational combination of symbols of a fixed weight and level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalVector {
    pub n: u32,
    pub k: u32,
    pub coeffs: BTreeMap<DzvSymbol, Rat>,
}

impl FormalVector {
    pub fn zero(n: u32, k: u32) -> Self {
        FormalVector { n, k, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(n: u32, k: u32, terms: impl IntoIterator<Item = (Rat, DzvSymbol)>) -> Self {
        let mut v = FormalVector::zero(n, k);
        for (c, s) in terms {
            v.add_term(c, s);
        }
        v
    }

    pub fn add_term(&mut self, c: Rat, s: DzvSymbol) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(s).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&s);
        }
    }

    pub fn coeff(&self, s: &DzvSymbol) -> Rat {
        self.coeffs.get(s).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &FormalVector) -> FormalVector {
        let mut out = self.clone();
        for (s, c) in &o.coeffs {
            out.add_term(c.clone(), *s);
        }
        out
    }

    pub fn scale(&self, x: &Rat) -> FormalVector {
        FormalVector::from_terms(self.n, self.k, self.coeffs.iter().map(|(s, c)| (c * x, *s)))
    }

    pub fn sub(&self, o: &FormalVector) -> FormalVector {
        self.add(&o.scale(&rat_int(-1)))
    }

    /// Keeps only the terms whose symbol satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&DzvSymbol) -> bool) -> FormalVector {
        FormalVector {
            coeffs: self.coeffs.iter().filter(|(s, _)| keep(s)).map(|(s, c)| (*s, c.clone())).collect(),
            ..*self
        }
    }

    pub fn z2_part(&self) -> FormalVector {
        self.filter(|s| matches!(s, DzvSymbol::Z2 { .. }))
    }

    /// Scales to coprime integer coefficients with the first nonzero
    /// coefficient (in symbol order) positive.
    pub fn normalized(&self) -> FormalVector {
        self.scale(&self.normalizing_factor())
    }

    /// The factor used by [`FormalVector::normalized`].
    pub fn normalizing_factor(&self) -> Rat {
        let Some(first) = self.coeffs.values().next() else {
            return Rat::one();
        };
        let den = self.coeffs.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .coeffs
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * &den / c.denom())));
        let f = Rat::new(den, num);
        if first.is_negative() {
            -f
        } else {
            f
        }
    }

    pub fn to_latex(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (s, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                if abs.is_integer() {
                    out.push_str(&abs.numer().to_string());
                } else {
                    out.push_str(&format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom()));
                }
                out.push(' ');
            }
            out.push_str(&s.to_latex());
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(flatten)]
    symbol: DzvSymbol,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct FormalVectorJson {
    #[serde(rename = "N")]
    n: u32,
    k: u32,
    terms: Vec<TermJson>,
}

impl Serialize for FormalVector {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        FormalVectorJson {
            n: self.n,
            k: self.k,
            terms: self
                .coeffs
                .iter()
                .map(|(s, c)| TermJson { symbol: *s, coeff: rat_to_string(c) })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FormalVector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = FormalVectorJson::deserialize(de)?;
        let mut v = FormalVector::zero(j.n, j.k);
        for t in j.terms {
            let c = rat_from_str(&t.coeff).map_err(serde::de::Error::custom)?;
            v.add_term(c, t.symbol);
        }
        Ok(v)
    }
}

/// The symbol basis of the free space for weight `k` and level `N`.
#[derive(Clone, Debug)]
pub struct FormalSpace {
    k: u32,
    n: u32,
    symbols: Vec<DzvSymbol>,
    index: HashMap<DzvSymbol, usize>,
}

impl FormalSpace {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLevel);
        }
        if k < 2 || (k, n) == (2, 1) {
            return Err(Error::ExcludedWeightLevel { k, n });
        }
        let cosets = enumerate_cosets(n)?;
        let mut symbols = Vec::new();
        for double in [true, false] {
            for r in 1..k {
                for c in &cosets {
                    let (s, a, b) = (k - r, c.c, c.d);
                    symbols.push(if double {
                        DzvSymbol::Z2 { r, s, a, b }
                    } else {
                        DzvSymbol::P2 { r, s, a, b }
                    });
                }
            }
        }
        symbols.extend((0..n).map(|c| DzvSymbol::Z1 { k, c }));
        let index = symbols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Ok(FormalSpace { k, n, symbols, index })
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn symbols(&self) -> &[DzvSymbol] {
        &self.symbols
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn position(&self, s: &DzvSymbol) -> Result<usize> {
        self.index
            .get(s)
            .copied()
            .ok_or_else(|| Error::InvalidSymbol(format!("{s} at weight {}, level {}", self.k, self.n)))
    }

    pub fn to_dense(&self, v: &FormalVector) -> Result<Vec<Rat>> {
        if v.n != self.n || v.k != self.k {
            return Err(Error::ShapeMismatch);
        }
        let mut out = vec![Rat::zero(); self.dim()];
        for (s, c) in &v.coeffs {
            out[self.position(s)?] = c.clone();
        }
        Ok(out)
    }

    pub fn from_dense(&self, v: &[Rat]) -> FormalVector {
        FormalVector::from_terms(
            self.n,
            self.k,
            v.iter().zip(&self.symbols).map(|(c, s)| (c.clone(), *s)),
        )
    }

    fn cosets(&self) -> Vec<Coset> {
        enumerate_cosets(self.n).expect("level checked on construction")
    }

    /// Stuffle expansion `P - Z(r,s;a,b) - Z(s,r;b,a) - Z(r+s;a+b)`.
    pub fn stuffle_vector(&self, r: u32, s: u32, a: u32, b: u32) -> FormalVector {
        let (n, ai, bi) = (self.n, a as i64, b as i64);
        FormalVector::from_terms(
            n,
            self.k,
            [
                (rat_int(1), p2(r, s, ai, bi, n)),
                (rat_int(-1), z2(r, s, ai, bi, n)),
                (rat_int(-1), z2(s, r, bi, ai, n)),
                (rat_int(-1), z1(r + s, ai + bi, n)),
            ],
        )
    }

    /// Shuffle expansion of `P^{r,s}_{a,b}` subtracted from it.
    pub fn shuffle_vector(&self, r: u32, s: u32, a: u32, b: u32) -> FormalVector {
        let (n, ai, bi) = (self.n, a as i64, b as i64);
        let mut v = FormalVector::from_terms(n, self.k, [(rat_int(1), p2(r, s, ai, bi, n))]);
        for j in 0..r {
            let c = binomial(BigInt::from(s - 1 + j), BigInt::from(j));
            v.add_term(-Rat::from_integer(c), z2(r - j, s + j, ai - bi, bi, n));
        }
        for j in 0..s {
            let c = binomial(BigInt::from(r - 1 + j), BigInt::from(j));
            v.add_term(-Rat::from_integer(c), z2(s - j, r + j, bi - ai, ai, n));
        }
        v
    }

    /// For each `(r,s,a,b)`: the stuffle vector followed by the shuffle vector.
    pub fn dsh_relation_vectors(&self) -> Vec<FormalVector> {
        let mut out = Vec::new();
        for r in 1..self.k {
            for c in self.cosets() {
                out.push(self.stuffle_vector(r, self.k - r, c.c, c.d));
                out.push(self.shuffle_vector(r, self.k - r, c.c, c.d));
            }
        }
        out
    }

    /// Generators of `P^ev`; zero vectors are skipped.
    pub fn pev_generators(&self) -> Vec<FormalVector> {
        self.pev_generators_with_source().into_iter().map(|(_, v)| v).collect()
    }

    /// `P^ev` generators (zero ones dropped) together with the indices
    /// that define them.
    pub fn pev_generators_with_source(&self) -> Vec<(PevSource, FormalVector)> {
        let (n, k) = (self.n, self.k);
        let mut out = Vec::new();
        for r in 1..k {
            let s = k - r;
            for c in self.cosets() {
                let (a, b) = (c.c as u32, c.d as u32);
                let v = self.product_generator(r, s, a, b);
                if !v.is_zero() {
                    out.push((PevSource::Product { r, s, a, b }, v));
                }
            }
        }
        for c in 0..n {
            let v = self.single_generator(c);
            if !v.is_zero() {
                out.push((PevSource::Single { k, c }, v));
            }
        }
        out
    }

    /// `P(r,s;a,b) + (-1)^r P(r,s;-a,b) + (-1)^s P(r,s;a,-b) + (-1)^(r+s) P(r,s;-a,-b)`.
    pub fn product_generator(&self, r: u32, s: u32, a: u32, b: u32) -> FormalVector {
        let (n, a, b) = (self.n, a as i64, b as i64);
        FormalVector::from_terms(
            n,
            self.k,
            [
                (rat_int(1), p2(r, s, a, b, n)),
                (sign(r), p2(r, s, -a, b, n)),
                (sign(s), p2(r, s, a, -b, n)),
                (sign(r + s), p2(r, s, -a, -b, n)),
            ],
        )
    }

    /// `Z(k;c) + (-1)^k Z(k;-c)`.
    pub fn single_generator(&self, c: u32) -> FormalVector {
        let (n, k) = (self.n, self.k);
        FormalVector::from_terms(n, k, [(rat_int(1), z1(k, c as i64, n)), (sign(k), z1(k, -(c as i64), n))])
    }

    /// Checks the `(odd,odd)` symmetry
    /// `c(r,s,a,b) = (-1)^(r+1) c(r,s,-a,b) = (-1)^(s+1) c(r,s,a,-b)`
    /// on a `Z2`-supported vector.
    pub fn oddodd_check(&self, v: &FormalVector) -> Result<bool> {
        if v.coeffs.keys().any(|s| !matches!(s, DzvSymbol::Z2 { .. })) {
            return Err(Error::InvalidSymbol("odd-odd test needs a Z2-supported vector".into()));
        }
        let n = self.n;
        for sym in &self.symbols {
            let DzvSymbol::Z2 { r, s, a, b } = *sym else { continue };
            let (ai, bi) = (a as i64, b as i64);
            let c = v.coeff(sym);
            if c != sign(r + 1) * v.coeff(&z2(r, s, -ai, bi, n))
                || c != sign(s + 1) * v.coeff(&z2(r, s, ai, -bi, n))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis of all `Z2`-supported vectors with the odd-odd symmetry.
    pub fn oddodd_subspace(&self) -> Result<Subspace> {
        let n = self.n;
        let mut constraints = Vec::new();
        let mut row = |x: DzvSymbol, y: DzvSymbol, sgn: Rat| -> Result<()> {
            let mut v = vec![Rat::zero(); self.dim()];
            v[self.position(&x)?] += rat_int(1);
            v[self.position(&y)?] -= sgn;
            constraints.push(v);
            Ok(())
        };
        for sym in &self.symbols {
            match *sym {
                DzvSymbol::Z2 { r, s, a, b } => {
                    let (ai, bi) = (a as i64, b as i64);
                    row(*sym, z2(r, s, -ai, bi, n), sign(r + 1))?;
                    row(*sym, z2(r, s, ai, -bi, n), sign(s + 1))?;
                }
                _ => row(*sym, *sym, rat_int(0))?,
            }
        }
        Ok(Subspace::span(self.dim(), constraints)?.annihilator())
    }
}

/// Which of the three `λ` maps to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaVariant {
    Plain,
    S,
    P,
}

/// `λ^•(P) = sum_C λ^•_C(P(CS))` with `λ_C(X^r Y^s) = r! s! Z^{r+1,s+1}_{a,b}`,
/// `λ^S_C(X^r Y^s) = r! s! Z^{r+s+2}_{a+b}` and
/// `λ^P_C(X^r Y^s) = r! s! P^{r+1,s+1}_{a,b}` for `C = C_{a,b}`.
pub fn lambda_flat(amb: &Ambient, p: &[Rat], variant: LambdaVariant) -> FormalVector {
    let (n, w) = (amb.level(), amb.weight());
    let k = w + 2;
    let mut out = FormalVector::zero(n, k);
    for c in amb.cosets() {
        let (a, b) = (c.c as i64, c.d as i64);
        let support = delta_support(n, a, b).expect("coset is in A(N)");
        for r in 0..=w {
            let x = &p[amb.index(&support, r)];
            if x.is_zero() {
                continue;
            }
            let s = w - r;
            let coef = x * Rat::from_integer(factorial(r) * factorial(s));
            let sym = match variant {
                LambdaVariant::Plain => z2(r + 1, s + 1, a, b, n),
                LambdaVariant::S => z1(k, a + b, n),
                LambdaVariant::P => p2(r + 1, s + 1, a, b, n),
            };
            out.add_term(coef, sym);
        }
    }
    out
}

/// [`lambda_flat`] on a barred vector.
pub fn lambda(p: &EquivariantVector, variant: LambdaVariant) -> Result<FormalVector> {
    if p.flavor != Flavor::Barred {
        return Err(Error::NotInSpace("λ is defined on the barred space".into()));
    }
    Ok(lambda_flat(&p.ambient(), &p.values, variant))
}

/// Result of comparing the operator form of the stuffle/shuffle relations
/// with the explicit relation vectors.
#[derive(Clone, Debug, Serialize)]
pub struct DshOperatorReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub k: u32,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl DshOperatorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every `δ`-vector `Q`: `λ^P(Q) - λ(Q|_{1+εS}) - λ^S(Q)` equals the
/// stuffle vector and `λ^P(Q) - λ(Q|_{(1+εS)T})` equals the shuffle vector.
pub fn dsh_as_operators_check(k: u32, n: u32) -> Result<DshOperatorReport> {
    let fs = FormalSpace::new(k, n)?;
    let w = k - 2;
    let amb = Ambient::new(n, w, Flavor::Barred)?;
    let op1 = amb.op("1+εS");
    let op2 = amb.op("(1+εS)T");
    let span = Subspace::span(
        fs.dim(),
        fs.dsh_relation_vectors().iter().map(|v| fs.to_dense(v)).collect::<Result<_>>()?,
    )?;
    let mut report = DshOperatorReport { n, k, checked: 0, failures: Vec::new() };
    for c in amb.cosets() {
        for r in 0..=w {
            let q = amb.delta_vector(r, w - r, c.c as i64, c.d as i64)?;
            let lp = lambda_flat(&amb, &q.values, LambdaVariant::P);
            let ls = lambda_flat(&amb, &q.values, LambdaVariant::S);
            let st = lp.sub(&lambda_flat(&amb, &op1.apply(&q.values), LambdaVariant::Plain)).sub(&ls);
            let sh = lp.sub(&lambda_flat(&amb, &op2.apply(&q.values), LambdaVariant::Plain));
            let (rr, ss) = (r + 1, w - r + 1);
            let label = format!("Q^{{{r},{}}}_{{{},{}}}", w - r, c.c, c.d);
            if st != fs.stuffle_vector(rr, ss, c.c, c.d) {
                report.failures.push(format!("stuffle mismatch at {label}"));
            }
            if sh != fs.shuffle_vector(rr, ss, c.c, c.d) {
                report.failures.push(format!("shuffle mismatch at {label}"));
            }
            for v in [&st, &sh] {
                if !span.contains(&fs.to_dense(v)?)? {
                    report.failures.push(format!("{label}: not in the relation span"));
                }
            }
            report.checked += 1;
        }
    }
    Ok(report)
}

/// Which family a spanning vector of `D`-membership comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Stuffle,
    Shuffle,
    Pev,
}

/// Indices defining a `P^ev` generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PevSource {
    Product { r: u32, s: u32, a: u32, b: u32 },
    Single { k: u32, c: u32 },
}

/// One nonzero entry of a membership certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateTerm {
    pub index: usize,
    pub kind: GeneratorKind,
    #[serde(serialize_with = "ser_rat")]
    pub coeff: Rat,
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(x))
}

/// Coordinates of a vector over the relation vectors and `P^ev` generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub terms: Vec<CertificateTerm>,
}

/// Decides membership in `P^ev` (as a subspace of `D`) with certificates.
/// The elimination is done once on construction; queries are read-only.
#[derive(Clone, Debug)]
pub struct PevCertifier {
    space: FormalSpace,
    generators: Vec<(GeneratorKind, FormalVector)>,
    sources: Vec<Option<PevSource>>,
    spanning: SpanningSet,
}

impl PevCertifier {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        let space = FormalSpace::new(k, n)?;
        let mut generators = Vec::new();
        for (i, v) in space.dsh_relation_vectors().into_iter().enumerate() {
            let kind = if i % 2 == 0 { GeneratorKind::Stuffle } else { GeneratorKind::Shuffle };
            generators.push((kind, v));
        }
        let mut sources = vec![None; generators.len()];
        for (src, v) in space.pev_generators_with_source() {
            generators.push((GeneratorKind::Pev, v));
            sources.push(Some(src));
        }
        let dense = generators.iter().map(|(_, v)| space.to_dense(v)).collect::<Result<Vec<_>>>()?;
        let spanning = SpanningSet::new(space.dim(), &dense)?;
        Ok(PevCertifier { space, generators, sources, spanning })
    }

    pub fn space(&self) -> &FormalSpace {
        &self.space
    }

    pub fn generators(&self) -> &[(GeneratorKind, FormalVector)] {
        &self.generators
    }

    /// Defining indices of generator `i`; `None` for relation vectors.
    pub fn source(&self, i: usize) -> Option<PevSource> {
        self.sources[i]
    }

    /// `span(dsh ∪ P^ev)` in the free space.
    pub fn span(&self) -> &Subspace {
        self.spanning.span()
    }

    pub fn certify(&self, v: &FormalVector) -> Result<Option<Certificate>> {
        let dense = self.space.to_dense(v)?;
        let Some(coords) = self.spanning.certificate(&dense)? else {
            return Ok(None);
        };
        let terms = coords
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(index, coeff)| CertificateTerm { index, kind: self.generators[index].0, coeff })
            .collect();
        Ok(Some(Certificate { terms }))
    }

    /// Recombines a certificate; must reproduce the certified vector.
    pub fn replay(&self, cert: &Certificate) -> FormalVector {
        let mut out = FormalVector::zero(self.space.n, self.space.k);
        for t in &cert.terms {
            out = out.add(&self.generators[t.index].1.scale(&t.coeff));
        }
        out
    }
}

/// Membership of `v` in `P^ev` inside `D`, with certificate.
pub fn in_pev(v: &FormalVector) -> Result<Option<Certificate>> {
    PevCertifier::new(v.k, v.n)?.certify(v)
}

/// Checks `P^ev = λ(V̄^{-,sym}) + λ^S(V̄)` modulo the relation vectors.
pub fn pev_span_identity_check(k: u32, n: u32) -> Result<bool> {
    let fs = FormalSpace::new(k, n)?;
    let w = k - 2;
    let amb = Ambient::new(n, w, Flavor::Barred)?;
    let dense = |vs: Vec<FormalVector>| vs.iter().map(|v| fs.to_dense(v)).collect::<Result<Vec<_>>>();
    let dsh = dense(fs.dsh_relation_vectors())?;
    let mut lhs = dense(fs.pev_generators())?;
    lhs.extend(dsh.iter().cloned());
    let mut rhs: Vec<Vec<Rat>> = Vec::new();
    for b in space_v_minus_sym(n, w)?.basis_vecs() {
        rhs.push(fs.to_dense(&lambda_flat(&amb, &b, LambdaVariant::Plain))?);
    }
    for b in space_v(n, w, Flavor::Barred)?.basis_vecs() {
        rhs.push(fs.to_dense(&lambda_flat(&amb, &b, LambdaVariant::S))?);
    }
    rhs.extend(dsh);
    Ok(Subspace::span(fs.dim(), lhs)? == Subspace::span(fs.dim(), rhs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_index_sizes() {
        let s = FormalSpace::new(3, 1).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(
            s.symbols()[..2],
            [DzvSymbol::Z2 { r: 1, s: 2, a: 0, b: 0 }, DzvSymbol::Z2 { r: 2, s: 1, a: 0, b: 0 }]
        );
        assert_eq!(FormalSpace::new(2, 2).unwrap().dim(), 8);
        assert!(matches!(FormalSpace::new(2, 1), Err(Error::ExcludedWeightLevel { .. })));
    }

    #[test]
    fn relation_vector_examples() {
        let s = FormalSpace::new(4, 1).unwrap();
        let z = |r, s| DzvSymbol::Z2 { r, s, a: 0, b: 0 };
        let p = DzvSymbol::P2 { r: 2, s: 2, a: 0, b: 0 };
        let st = s.stuffle_vector(2, 2, 0, 0);
        let expect = FormalVector::from_terms(
            1,
            4,
            [(rat_int(1), p), (rat_int(-2), z(2, 2)), (rat_int(-1), DzvSymbol::Z1 { k: 4, c: 0 })],
        );
        assert_eq!(st, expect);
        let sh = s.shuffle_vector(2, 2, 0, 0);
        let expect =
            FormalVector::from_terms(1, 4, [(rat_int(1), p), (rat_int(-2), z(2, 2)), (rat_int(-4), z(1, 3))]);
        assert_eq!(sh, expect);
    }

    #[test]
    fn stuffle_minus_shuffle_has_no_product_symbol() {
        let s = FormalSpace::new(5, 3).unwrap();
        for r in 1..5 {
            for c in enumerate_cosets(3).unwrap() {
                let d = s.stuffle_vector(r, 5 - r, c.c, c.d).sub(&s.shuffle_vector(r, 5 - r, c.c, c.d));
                assert!(d.coeffs.keys().all(|x| !matches!(x, DzvSymbol::P2 { .. })));
            }
        }
    }

    #[test]
    fn pev_generator_examples() {
        let s = FormalSpace::new(4, 1).unwrap();
        let g = s.pev_generators();
        assert_eq!(g[0].coeffs.values().next().unwrap(), &rat_int(4));
        // k even: Z1 generator is 2 Z(4;0); k odd: it vanishes
        assert_eq!(g.last().unwrap().coeff(&DzvSymbol::Z1 { k: 4, c: 0 }), rat_int(2));
        let odd = FormalSpace::new(5, 1).unwrap().pev_generators();
        assert!(odd.iter().all(|v| !v.coeffs.keys().any(|x| matches!(x, DzvSymbol::Z1 { .. }))));
    }

    #[test]
    fn in_pev_examples() {
        let cert = PevCertifier::new(12, 1).unwrap();
        assert!(cert.certify(&FormalVector::zero(1, 12)).unwrap().unwrap().terms.is_empty());
        for (_, g) in cert.generators() {
            let c = cert.certify(g).unwrap().unwrap();
            assert_eq!(&cert.replay(&c), g);
        }
        let single = FormalVector::from_terms(1, 12, [(rat_int(1), DzvSymbol::Z2 { r: 9, s: 3, a: 0, b: 0 })]);
        assert!(cert.certify(&single).unwrap().is_none());
    }

    #[test]
    fn oddodd_examples() {
        let s = FormalSpace::new(6, 1).unwrap();
        let v = FormalVector::from_terms(1, 6, [(rat_int(1), DzvSymbol::Z2 { r: 3, s: 3, a: 0, b: 0 })]);
        assert!(s.oddodd_check(&v).unwrap());
        let v = FormalVector::from_terms(1, 6, [(rat_int(1), DzvSymbol::Z2 { r: 2, s: 4, a: 0, b: 0 })]);
        assert!(!s.oddodd_check(&v).unwrap());
        let odd = s.oddodd_subspace().unwrap();
        assert_eq!(odd.dim(), 3);
    }

    #[test]
    fn latex_and_json() {
        let v = FormalVector::from_terms(
            5,
            5,
            [
                (rat_int(3), DzvSymbol::Z2 { r: 2, s: 3, a: 1, b: 4 }),
                (Rat::new((-1).into(), 2.into()), DzvSymbol::Z1 { k: 5, c: 0 }),
            ],
        );
        assert_eq!(v.to_latex(), "3 Z_{1,4}^{2,3} - \\frac{1}{2} Z_{0}^{5}");
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(
            j,
            r#"{"N":5,"k":5,"terms":[{"kind":"Z2","r":2,"s":3,"a":1,"b":4,"coeff":"3/1"},{"kind":"Z1","k":5,"c":0,"coeff":"-1/2"}]}"#
        );
        let back: FormalVector = serde_json::from_str(&j).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn normalization() {
        let v = FormalVector::from_terms(
            1,
            4,
            [
                (Rat::new((-2).into(), 3.into()), DzvSymbol::Z2 { r: 1, s: 3, a: 0, b: 0 }),
                (Rat::new(4.into(), 9.into()), DzvSymbol::Z2 { r: 2, s: 2, a: 0, b: 0 }),
            ],
        );
        let n = v.normalized();
        assert_eq!(n.coeff(&DzvSymbol::Z2 { r: 1, s: 3, a: 0, b: 0 }), rat_int(3));
        assert_eq!(n.coeff(&DzvSymbol::Z2 { r: 2, s: 2, a: 0, b: 0 }), rat_int(-2));
    }

    #[test]
    fn operator_form_small() {
        for (k, n) in [(4, 1), (3, 3), (5, 4)] {
            let rep = dsh_as_operators_check(k, n).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn pev_identity_small() {
        assert!(pev_span_identity_check(12, 1).unwrap());
        assert!(pev_span_identity_check(5, 3).unwrap());
    }
}
