//! Homogeneous polynomials, vector-valued functions on `A(N)` and the
//! right action of `GL(2,Z)` on both.
//!
//! A vector `P` is stored flat: coordinate `pos(C)*(w+1) + r` holds the
//! coefficient of `X^r Y^(w-r)` in `P(C)`. For `det g = +1` the action is
//! `P|_g(C) = P(C g^-1)|_g`; `ε` moves the coset through [`coset_eps`].

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{rat_int, rat_to_string, Rat};
use crate::sl2::{coset_pullback, Coset, CosetSpace, Flavor, GL2Elt, GroupRingElt};

/// `sum_r coeffs[r] X^r Y^(w-r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    pub w: u32,
    pub coeffs: Vec<Rat>,
}

impl HomogPoly {
    pub fn zero(w: u32) -> Self {
        HomogPoly {
            w,
            coeffs: vec![Rat::zero(); w as usize + 1],
        }
    }

    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a homogeneous polynomial needs w+1 coefficients");
        HomogPoly {
            w: coeffs.len() as u32 - 1,
            coeffs,
        }
    }

    /// `c X^r Y^(w-r)`.
    pub fn monomial(w: u32, r: u32, c: Rat) -> Self {
        let mut p = HomogPoly::zero(w);
        p.coeffs[r as usize] = c;
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        HomogPoly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Matrix `M` with `(P|_g)_i = sum_r M[i][r] p_r`, i.e. the substitution
/// `X -> aX+bY, Y -> cX+dY` on the monomial basis.
pub fn act_matrix(w: u32, g: &GL2Elt) -> Vec<Vec<BigInt>> {
    let n = w as usize + 1;
    // powers of the linear forms, indexed by X-degree
    let pow = |x: &BigInt, y: &BigInt| -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::one()]];
        for e in 1..n {
            let prev = &out[e - 1];
            let mut next = vec![BigInt::zero(); e + 1];
            for (i, p) in prev.iter().enumerate() {
                next[i] += p * y;
                next[i + 1] += p * x;
            }
            out.push(next);
        }
        out
    };
    let first = pow(&g.a, &g.b);
    let second = pow(&g.c, &g.d);
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..n {
        let (f, s) = (&first[r], &second[w as usize - r]);
        for (i, x) in f.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in s.iter().enumerate() {
                m[i + j][r] += x * y;
            }
        }
    }
    m
}

/// `P(aX+bY, cX+dY)`.
pub fn act_poly(p: &HomogPoly, g: &GL2Elt) -> HomogPoly {
    let m = act_matrix(p.w, g);
    HomogPoly {
        w: p.w,
        coeffs: apply_int_matrix(&m, &p.coeffs),
    }
}

fn apply_int_matrix(m: &[Vec<BigInt>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| {
            let mut acc = Rat::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += y * Rat::from_integer(x.clone());
                }
            }
            acc
        })
        .collect()
}

/// `sum_r (-1)^(w-r) C(w,r)^-1 a_r b_(w-r)`, invariant under `SL(2,Z)`.
pub fn pairing_v(p: &HomogPoly, q: &HomogPoly) -> Result<Rat> {
    if p.w != q.w {
        return Err(Error::DegreeMismatch(p.w, q.w));
    }
    let w = p.w as usize;
    let mut acc = Rat::zero();
    for r in 0..=w {
        let (a, b) = (&p.coeffs[r], &q.coeffs[w - r]);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let term = a * b / Rat::from_integer(binomial(BigInt::from(w), BigInt::from(r)));
        if (w - r) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// The ambient space `Ṽ_w` of maps `A(N) -> V_w` with a chosen `ε`-action.
#[derive(Clone, Debug)]
pub struct Ambient {
    w: u32,
    flavor: Flavor,
    space: CosetSpace,
}

/// A group-ring element compiled against an [`Ambient`]: per term, the
/// source coset of each target coset and the polynomial substitution matrix.
#[derive(Clone, Debug)]
pub struct Operator {
    terms: Vec<(Rat, Vec<usize>, Vec<Vec<BigInt>>)>,
    dim: usize,
    block: usize,
}

impl Operator {
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim, "operator applied to a vector of the wrong length");
        let b = self.block;
        let mut out = vec![Rat::zero(); self.dim];
        for (coef, src, m) in &self.terms {
            for (target, &source) in src.iter().enumerate() {
                let block = &v[source * b..(source + 1) * b];
                if block.iter().all(Zero::is_zero) {
                    continue;
                }
                let img = apply_int_matrix(m, block);
                for (o, x) in out[target * b..(target + 1) * b].iter_mut().zip(img) {
                    if !x.is_zero() {
                        *o += coef * x;
                    }
                }
            }
        }
        out
    }
}

impl Ambient {
    pub fn new(n: u32, w: u32, flavor: Flavor) -> Result<Self> {
        Ok(Ambient {
            w,
            flavor,
            space: CosetSpace::new(n)?,
        })
    }

    pub fn level(&self) -> u32 {
        self.space.level()
    }

    pub fn weight(&self) -> u32 {
        self.w
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn cosets(&self) -> &[Coset] {
        self.space.cosets()
    }

    pub fn coset_space(&self) -> &CosetSpace {
        &self.space
    }

    pub fn block(&self) -> usize {
        self.w as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.space.len() * self.block()
    }

    pub fn index(&self, c: &Coset, r: u32) -> usize {
        self.space.position(c) * self.block() + r as usize
    }

    /// Same coset space and weight, other `ε`-action.
    pub fn with_flavor(&self, flavor: Flavor) -> Ambient {
        Ambient {
            flavor,
            ..self.clone()
        }
    }

    pub fn compile(&self, op: &GroupRingElt) -> Operator {
        let terms = op
            .terms()
            .map(|(c, g)| {
                let src = self
                    .cosets()
                    .iter()
                    .map(|cos| self.space.position(&coset_pullback(cos, g, self.flavor)))
                    .collect();
                (c.clone(), src, act_matrix(self.w, g))
            })
            .collect();
        Operator {
            terms,
            dim: self.dim(),
            block: self.block(),
        }
    }

    /// Compiles a group-ring expression; panics on malformed literals, so
    /// only use this with fixed expressions.
    pub fn op(&self, expr: &str) -> Operator {
        let g = GroupRingElt::parse(expr)
            .unwrap_or_else(|e| panic!("malformed operator literal `{expr}`: {e}"));
        self.compile(&g)
    }

    pub fn zero_vector(&self) -> EquivariantVector {
        EquivariantVector {
            n: self.level(),
            w: self.w,
            flavor: self.flavor,
            values: vec![Rat::zero(); self.dim()],
        }
    }

    pub fn vector(&self, values: Vec<Rat>) -> Result<EquivariantVector> {
        if values.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: values.len(),
            });
        }
        Ok(EquivariantVector {
            n: self.level(),
            w: self.w,
            flavor: self.flavor,
            values,
        })
    }

    /// `Q^{r,s}_{a,b}`: supported on `C_{a,b} S` with value `X^r Y^s / (r! s!)`.
    pub fn delta_vector(&self, r: u32, s: u32, a: i64, b: i64) -> Result<EquivariantVector> {
        if r + s != self.w {
            return Err(Error::DegreeMismatch(r + s, self.w));
        }
        let c = delta_support(self.level(), a, b)?;
        let mut v = self.zero_vector();
        v.values[self.index(&c, r)] = Rat::new(BigInt::one(), factorial(r) * factorial(s));
        Ok(v)
    }
}

/// The coset `C_{a,b} S`, i.e. bottom row `(b, -a)`.
pub fn delta_support(n: u32, a: i64, b: i64) -> Result<Coset> {
    let c = Coset::new(n, a, b)?;
    Ok(Coset::new(n, c.d as i64, -(c.c as i64)).expect("S preserves A(N)"))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// A map `A(N) -> V_w` tagged with its `ε`-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantVector {
    pub n: u32,
    pub w: u32,
    pub flavor: Flavor,
    /// Flattened coordinates, see the module docs.
    pub values: Vec<Rat>,
}

impl EquivariantVector {
    pub fn ambient(&self) -> Ambient {
        Ambient::new(self.n, self.w, self.flavor).expect("vector built from a valid level")
    }

    pub fn at(&self, space: &CosetSpace, c: &Coset) -> HomogPoly {
        let b = self.w as usize + 1;
        let i = space.position(c) * b;
        HomogPoly {
            w: self.w,
            coeffs: self.values[i..i + b].to_vec(),
        }
    }

    pub fn act(&self, g: &GroupRingElt) -> EquivariantVector {
        let op = self.ambient().compile(g);
        EquivariantVector {
            values: op.apply(&self.values),
            ..self.clone()
        }
    }

    pub fn act_elt(&self, g: &GL2Elt) -> EquivariantVector {
        self.act(&GroupRingElt::from_elt(g.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check_shape(&self, o: &EquivariantVector) -> Result<()> {
        if self.n != o.n || self.w != o.w {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &EquivariantVector) -> Result<EquivariantVector> {
        self.check_shape(o)?;
        if self.flavor != o.flavor {
            return Err(Error::ShapeMismatch);
        }
        Ok(EquivariantVector {
            values: self.values.iter().zip(&o.values).map(|(x, y)| x + y).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Rat) -> EquivariantVector {
        EquivariantVector {
            values: self.values.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }
}

/// `⟨⟨P,Q⟩⟩ = |A(N)|^-1 sum_C ⟨P(C),Q(C)⟩` for `P` standard, `Q` barred.
pub fn pairing_gamma(p: &EquivariantVector, q: &EquivariantVector) -> Result<Rat> {
    p.check_shape(q)?;
    if p.flavor != Flavor::Standard || q.flavor != Flavor::Barred {
        return Err(Error::ShapeMismatch);
    }
    let b = p.w as usize + 1;
    let count = p.values.len() / b;
    let mut acc = Rat::zero();
    for i in 0..count {
        let pp = HomogPoly::new(p.values[i * b..(i + 1) * b].to_vec());
        let qq = HomogPoly::new(q.values[i * b..(i + 1) * b].to_vec());
        acc += pairing_v(&pp, &qq)?;
    }
    Ok(acc / rat_int(count as i64))
}

impl Serialize for EquivariantVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        struct Values<'a>(&'a EquivariantVector);
        impl Serialize for Values<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let v = self.0;
                let space = CosetSpace::new(v.n).map_err(serde::ser::Error::custom)?;
                let b = v.w as usize + 1;
                let mut map = ser.serialize_map(Some(space.len()))?;
                for (i, c) in space.cosets().iter().enumerate() {
                    let coeffs: Vec<String> =
                        v.values[i * b..(i + 1) * b].iter().map(rat_to_string).collect();
                    map.serialize_entry(&c.to_string(), &coeffs)?;
                }
                map.end()
            }
        }
        let mut st = ser.serialize_struct("EquivariantVector", 4)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("w", &self.w)?;
        st.serialize_field("flavor", &self.flavor)?;
        st.serialize_field("values", &Values(self))?;
        st.end()
    }
}
