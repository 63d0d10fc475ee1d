//! Integer 2x2 matrices, group-ring operators and the coset space
//! `Gamma_1(N) \ SL(2,Z)`.
//!
//! Cosets are identified with bottom rows `(c,d) mod N` with
//! `gcd(c,d,N) = 1`. Right multiplication by `g` acts on the bottom row as a
//! row vector times `g`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rat_int, Rat};

/// Element of `GL(2,Z)`, stored as `(a b; c d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GL2Elt {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

/// The named generators `ε, J, S, U, T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Eps,
    J,
    S,
    U,
    T,
}

impl Generator {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ε" | "e" | "eps" | "epsilon" => Ok(Generator::Eps),
            "J" => Ok(Generator::J),
            "S" => Ok(Generator::S),
            "U" => Ok(Generator::U),
            "T" => Ok(Generator::T),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }

    pub fn matrix(self) -> GL2Elt {
        match self {
            Generator::Eps => GL2Elt::new(-1, 0, 0, 1),
            Generator::J => GL2Elt::new(-1, 0, 0, -1),
            Generator::S => GL2Elt::new(0, -1, 1, 0),
            Generator::U => GL2Elt::new(1, -1, 1, 0),
            Generator::T => GL2Elt::new(1, 1, 0, 1),
        }
    }
}

/// Matrix of a named generator.
pub fn generator(name: &str) -> Result<GL2Elt> {
    Ok(Generator::parse(name)?.matrix())
}

impl GL2Elt {
    /// Panics if the determinant is not `±1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_big(a.into(), b.into(), c.into(), d.into())
            .expect("integer matrix with determinant ±1")
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let g = GL2Elt { a, b, c, d };
        let det = g.det();
        if det != 1 && det != -1 {
            return Err(Error::Parse(format!("matrix {g} has determinant {det}")));
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        GL2Elt::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> i64 {
        (&self.a * &self.d - &self.b * &self.c)
            .to_i64()
            .expect("determinant fits in i64")
    }

    pub fn mul(&self, o: &GL2Elt) -> GL2Elt {
        GL2Elt {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Adjugate divided by the determinant; stays integral since det = ±1.
    pub fn inv(&self) -> GL2Elt {
        let det = BigInt::from(self.det());
        GL2Elt {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        }
    }

    pub fn pow(&self, e: i64) -> GL2Elt {
        let base = if e < 0 { self.inv() } else { self.clone() };
        (0..e.unsigned_abs()).fold(GL2Elt::identity(), |acc, _| acc.mul(&base))
    }

    pub fn transpose(&self) -> GL2Elt {
        GL2Elt {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for GL2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

/// Expands a word such as `"US^{-1}"`, `"SU^2S"` or `"εT^-3"` into a matrix.
pub fn expand_word(word: &str) -> Result<GL2Elt> {
    let g = GroupRingElt::parse(word)?;
    match g.terms.len() {
        1 => {
            let (m, c) = g.terms.into_iter().next().expect("one term");
            if c.is_one() {
                Ok(m)
            } else {
                Err(Error::WordParse {
                    word: word.into(),
                    reason: "word carries a coefficient".into(),
                })
            }
        }
        _ => Err(Error::WordParse {
            word: word.into(),
            reason: "not a single group element".into(),
        }),
    }
}

/// Finite formal combination of `GL(2,Z)` elements with rational
/// coefficients. Terms with equal matrices are merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupRingElt {
    terms: BTreeMap<GL2Elt, Rat>,
}

impl GroupRingElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_elt(GL2Elt::identity())
    }

    pub fn from_elt(g: GL2Elt) -> Self {
        Self::from_terms([(Rat::one(), g)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rat, GL2Elt)>) -> Self {
        let mut out = GroupRingElt::zero();
        for (c, g) in terms {
            out.add_term(c, g);
        }
        out
    }

    fn add_term(&mut self, c: Rat, g: GL2Elt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &GL2Elt)> {
        self.terms.iter().map(|(g, c)| (c, g))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &GroupRingElt) -> GroupRingElt {
        let mut out = self.clone();
        for (g, c) in &o.terms {
            out.add_term(c.clone(), g.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> GroupRingElt {
        GroupRingElt::from_terms(self.terms.iter().map(|(g, c)| (c * s, g.clone())))
    }

    pub fn sub(&self, o: &GroupRingElt) -> GroupRingElt {
        self.add(&o.scale(&rat_int(-1)))
    }

    /// Product in the group ring; `P|_{xy} = (P|_x)|_y` for the right action.
    pub fn mul(&self, o: &GroupRingElt) -> GroupRingElt {
        let mut out = GroupRingElt::zero();
        for (g, c) in &self.terms {
            for (h, e) in &o.terms {
                out.add_term(c * e, g.mul(h));
            }
        }
        out
    }

    /// Parses expressions such as `"1+SU^2S-SU"`, `"(1+εS)(1-T)"`,
    /// `"3U(1+ε)"` or `"US^{-1}"`.
    pub fn parse(src: &str) -> Result<GroupRingElt> {
        let mut p = ExprParser {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl From<GL2Elt> for GroupRingElt {
    fn from(g: GL2Elt) -> Self {
        GroupRingElt::from_elt(g)
    }
}

struct ExprParser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::WordParse {
            word: self.src.to_string(),
            reason: format!("{reason} at position {}", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<GroupRingElt> {
        let mut sign = 1;
        if let Some(c @ ('+' | '-')) = self.peek() {
            sign = if c == '-' { -1 } else { 1 };
            self.pos += 1;
        }
        let mut acc = self.product()?.scale(&rat_int(sign));
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.product()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .expect("digits")
        })
    }

    fn product(&mut self) -> Result<GroupRingElt> {
        let mut acc = GroupRingElt::one();
        let mut any = false;
        if let Some(n) = self.integer() {
            acc = acc.scale(&rat_int(n));
            any = true;
        }
        loop {
            match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if self.peek() != Some(')') {
                        return Err(self.err("expected `)`"));
                    }
                    self.pos += 1;
                    let e = self.exponent()?;
                    if e < 0 {
                        return Err(self.err("negative power of a sum"));
                    }
                    for _ in 0..e {
                        acc = acc.mul(&inner);
                    }
                }
                Some(c) if c.is_alphabetic() => {
                    let name = self.generator_name()?;
                    let g = Generator::parse(&name).map_err(|_| self.err("unknown generator"))?;
                    let e = self.exponent()?;
                    acc = acc.mul(&GroupRingElt::from_elt(g.matrix().pow(e)));
                }
                _ => break,
            }
            any = true;
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        Ok(acc)
    }

    fn generator_name(&mut self) -> Result<String> {
        let c = self.peek().ok_or_else(|| self.err("expected generator"))?;
        // "eps" is accepted as a multi-letter spelling of ε.
        let rest: String = self.chars[self.pos..].iter().take(3).collect();
        if rest == "eps" {
            self.pos += 3;
            return Ok("eps".into());
        }
        self.pos += 1;
        Ok(c.to_string())
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let braced = self.peek() == Some('{');
        if braced {
            self.pos += 1;
        }
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let n = self.integer().ok_or_else(|| self.err("expected exponent"))?;
        if braced {
            if self.peek() != Some('}') {
                return Err(self.err("expected `}`"));
            }
            self.pos += 1;
        }
        Ok(if neg { -n } else { n })
    }
}

/// Which `ε`-action an equivariant space carries. The barred action differs
/// from the standard one by an extra `J` on the coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Standard,
    Barred,
}

impl Flavor {
    pub fn dual(self) -> Flavor {
        match self {
            Flavor::Standard => Flavor::Barred,
            Flavor::Barred => Flavor::Standard,
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" | "std" => Ok(Flavor::Standard),
            "barred" | "bar" => Ok(Flavor::Barred),
            other => Err(Error::Parse(format!("unknown flavor `{other}`"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Standard => "standard",
            Flavor::Barred => "barred",
        })
    }
}

/// A right coset `Gamma_1(N) g`, represented by the bottom row of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coset {
    #[serde(rename = "N")]
    pub n: u32,
    pub c: u32,
    pub d: u32,
}

fn reduce(x: &BigInt, n: u32) -> u32 {
    x.mod_floor(&BigInt::from(n))
        .to_u32()
        .expect("residue below N")
}

impl Coset {
    /// Canonicalizes `(c,d)` mod `N` and checks `gcd(c,d,N) = 1`.
    pub fn new(n: u32, c: i64, d: i64) -> Result<Coset> {
        if n == 0 {
            return Err(Error::InvalidLevel);
        }
        let cr = c.rem_euclid(n as i64) as u32;
        let dr = d.rem_euclid(n as i64) as u32;
        if n > 1 && cr.gcd(&dr).gcd(&n) != 1 {
            return Err(Error::NotInCosetSpace { n, c, d });
        }
        Ok(Coset { n, c: cr, d: dr })
    }

    /// `(c,d) * g` reduced mod `N`.
    fn row_times(&self, g: &GL2Elt, sign: i64) -> Coset {
        let (c, d) = (BigInt::from(self.c), BigInt::from(self.d));
        let s = BigInt::from(sign);
        let nc = (&c * &g.a + &d * &g.c) * &s;
        let nd = (&c * &g.b + &d * &g.d) * &s;
        Coset {
            n: self.n,
            c: reduce(&nc, self.n),
            d: reduce(&nd, self.n),
        }
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.c, self.d)
    }
}

/// All of `A(N)` in lexicographic order; this order is the global coordinate
/// convention for equivariant vectors.
pub fn enumerate_cosets(n: u32) -> Result<Vec<Coset>> {
    if n == 0 {
        return Err(Error::InvalidLevel);
    }
    if n == 1 {
        return Ok(vec![Coset { n: 1, c: 0, d: 0 }]);
    }
    let mut out = Vec::new();
    for c in 0..n {
        for d in 0..n {
            if c.gcd(&d).gcd(&n) == 1 {
                out.push(Coset { n, c, d });
            }
        }
    }
    Ok(out)
}

/// Right multiplication `C g` for `det g = +1`.
pub fn coset_mul(coset: &Coset, g: &GL2Elt) -> Result<Coset> {
    let det = g.det();
    if det != 1 {
        return Err(Error::NotSpecialLinear(det));
    }
    Ok(coset.row_times(g, 1))
}

/// The coset `εCε` (standard) or `JεCε` (barred).
pub fn coset_eps(coset: &Coset, flavor: Flavor) -> Coset {
    let (c, d) = (coset.c as i64, coset.d as i64);
    let (c, d) = match flavor {
        Flavor::Standard => (-c, d),
        Flavor::Barred => (c, -d),
    };
    Coset::new(coset.n, c, d).expect("ε preserves A(N)")
}

/// The coset at which `P|_g` reads `P` when evaluated at `C`:
/// `C g^{-1}` for `det g = +1`, twisted by `ε` (and `J` when barred) when
/// `det g = -1`. Only the bottom row matters, and the left `ε` never changes
/// it, so this is `(c,d) g^{-1}` up to the barred sign.
pub fn coset_pullback(coset: &Coset, g: &GL2Elt, flavor: Flavor) -> Coset {
    let sign = if g.det() == -1 && flavor == Flavor::Barred {
        -1
    } else {
        1
    };
    coset.row_times(&g.inv(), sign)
}

/// `A(N)` together with a position lookup.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    n: u32,
    cosets: Vec<Coset>,
    index: Vec<usize>,
}

impl CosetSpace {
    pub fn new(n: u32) -> Result<Self> {
        let cosets = enumerate_cosets(n)?;
        let mut index = vec![usize::MAX; (n as usize) * (n as usize)];
        for (i, c) in cosets.iter().enumerate() {
            index[(c.c * n + c.d) as usize] = i;
        }
        Ok(CosetSpace { n, cosets, index })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn position(&self, c: &Coset) -> usize {
        let i = self.index[(c.c * self.n + c.d) as usize];
        debug_assert!(i != usize::MAX);
        i
    }
}

/// `|A(N)|` from the product formula, used as a cross-check.
pub fn coset_count_formula(n: u32) -> usize {
    if n <= 2 {
        return [0, 1, 3][n as usize];
    }
    let mut count = (n as u64) * (n as u64);
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            count = count / (p as u64 * p as u64) * (p as u64 * p as u64 - 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    count as usize
}
