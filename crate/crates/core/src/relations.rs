//! Relations among colored double zeta values produced from the period
//! polynomials in `W̄^+`.
//!
//! For `P` in `W̄^+` put `Q = P|_U` and `Q^± = Q|_{1±ε}/2`. Then
//! `3λ(Q^+) + λ(Q^-) + λ^S(Q)` lies in `P^ev` inside the formal space, and
//! `λ(Q^+) = sum q_od Z^{r,s}_{a,b}` is the odd-odd part of the relation.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::equivariant::{act_poly, factorial, Ambient, HomogPoly};
use crate::error::{Error, Result};
use crate::formal::{
    lambda_flat, Certificate, DzvSymbol, FormalVector, LambdaVariant, PevCertifier,
};
use crate::linalg::{rat_int, rat_to_string, Rat, Subspace};
use crate::period::{space_w, Sign};
use crate::sl2::{generator, Coset, Flavor};

/// Key `(r, s, a, b)` with `r, s >= 1` the exponents of `Z^{r,s}_{a,b}`.
pub type QKey = (u32, u32, u32, u32);

/// The coefficients `q`, `q_od`, `q_ev` attached to one period polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCoefficients {
    pub n: u32,
    pub k: u32,
    pub q: BTreeMap<QKey, Rat>,
    pub q_od: BTreeMap<QKey, Rat>,
    pub q_ev: BTreeMap<QKey, Rat>,
}

impl QCoefficients {
    fn get(map: &BTreeMap<QKey, Rat>, r: u32, s: u32, a: i64, b: i64, n: u32) -> Rat {
        let key = (r, s, a.rem_euclid(n as i64) as u32, b.rem_euclid(n as i64) as u32);
        map.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    /// `q_od(r,s,a,b) = (-1)^(r+1) q_od(r,s,-a,b) = (-1)^(s+1) q_od(r,s,a,-b)`.
    pub fn odd_symmetry_holds(&self) -> bool {
        let n = self.n;
        self.q_od.iter().all(|(&(r, s, a, b), c)| {
            let (a, b) = (a as i64, b as i64);
            *c == sgn(r + 1) * Self::get(&self.q_od, r, s, -a, b, n)
                && *c == sgn(s + 1) * Self::get(&self.q_od, r, s, a, -b, n)
        })
    }

    /// `q_ev(r,s,a,b) = (-1)^r q_ev(r,s,-a,b) = (-1)^s q_ev(r,s,a,-b) = q_ev(s,r,b,a)`.
    pub fn even_symmetry_holds(&self) -> bool {
        let n = self.n;
        self.q_ev.iter().all(|(&(r, s, a, b), c)| {
            let (a, b) = (a as i64, b as i64);
            *c == sgn(r) * Self::get(&self.q_ev, r, s, -a, b, n)
                && *c == sgn(s) * Self::get(&self.q_ev, r, s, a, -b, n)
                && *c == Self::get(&self.q_ev, s, r, b, a, n)
        })
    }

    pub fn split_is_consistent(&self) -> bool {
        self.q.iter().all(|(key, c)| {
            let od = self.q_od.get(key).cloned().unwrap_or_else(Rat::zero);
            let ev = self.q_ev.get(key).cloned().unwrap_or_else(Rat::zero);
            *c == od + ev
        })
    }

    /// `sum q_od(r,s,a,b) Z^{r,s}_{a,b}`.
    pub fn odd_vector(&self) -> FormalVector {
        FormalVector::from_terms(
            self.n,
            self.k,
            self.q_od.iter().map(|(&(r, s, a, b), c)| (c.clone(), DzvSymbol::Z2 { r, s, a, b })),
        )
    }
}

impl Serialize for QCoefficients {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            r: u32,
            s: u32,
            a: u32,
            b: u32,
            q: String,
            q_od: String,
            q_ev: String,
        }
        let mut seq = ser.serialize_seq(Some(self.q.len()))?;
        for (&(r, s, a, b), q) in &self.q {
            let od = self.q_od.get(&(r, s, a, b)).cloned().unwrap_or_else(Rat::zero);
            let ev = self.q_ev.get(&(r, s, a, b)).cloned().unwrap_or_else(Rat::zero);
            seq.serialize_element(&Row {
                r,
                s,
                a,
                b,
                q: rat_to_string(q),
                q_od: rat_to_string(&od),
                q_ev: rat_to_string(&ev),
            })?;
        }
        seq.end()
    }
}

fn sgn(e: u32) -> Rat {
    if e % 2 == 0 {
        rat_int(1)
    } else {
        rat_int(-1)
    }
}

/// Coordinates of a barred vector in the `δ`-vector basis:
/// `v = sum c(r+1,s+1,a,b) Q^{r,s}_{a,b}`.
fn delta_coordinates(amb: &Ambient, v: &[Rat]) -> BTreeMap<QKey, Rat> {
    let w = amb.weight();
    let mut out = BTreeMap::new();
    for c in amb.cosets() {
        let support = crate::equivariant::delta_support(amb.level(), c.c as i64, c.d as i64)
            .expect("coset is in A(N)");
        for r in 0..=w {
            let x = &v[amb.index(&support, r)];
            let s = w - r;
            let val = x * Rat::from_integer(factorial(r) * factorial(s));
            out.insert((r + 1, s + 1, c.c, c.d), val);
        }
    }
    out
}

fn barred_plus(n: u32, k: u32) -> Result<(Ambient, Subspace)> {
    if k < 2 {
        return Err(Error::ExcludedWeightLevel { k, n });
    }
    let w = k - 2;
    Ok((Ambient::new(n, w, Flavor::Barred)?, space_w(n, w, Flavor::Barred, Sign::Plus)?))
}

/// `q` by substitution: `P(C_{a,-a+b})(X-Y, X) = sum q^{r+1,s+1}_{a,b} X^r Y^s / (r! s!)`.
pub fn coefficients_by_substitution(amb: &Ambient, p: &[Rat]) -> BTreeMap<QKey, Rat> {
    let (n, w) = (amb.level(), amb.weight());
    let u = generator("U").expect("U is a generator");
    let mut out = BTreeMap::new();
    for c in amb.cosets() {
        let src = Coset::new(n, c.c as i64, c.d as i64 - c.c as i64).expect("shear preserves A(N)");
        let i = amb.index(&src, 0);
        let poly = act_poly(&HomogPoly::new(p[i..i + w as usize + 1].to_vec()), &u);
        for r in 0..=w {
            let s = w - r;
            let val = &poly.coeffs[r as usize] * Rat::from_integer(factorial(r) * factorial(s));
            out.insert((r + 1, s + 1, c.c, c.d), val);
        }
    }
    out
}

/// `q`, `q_od`, `q_ev` for `P` in `W̄^+` of weight `k - 2`.
pub fn coefficients_from_polynomial(n: u32, k: u32, p: &[Rat]) -> Result<QCoefficients> {
    let (amb, wp) = barred_plus(n, k)?;
    if !wp.contains(p)? {
        return Err(Error::NotInSpace("W̄^+".into()));
    }
    let q_vec = amb.op("U").apply(p);
    let q = delta_coordinates(&amb, &q_vec);
    if q != coefficients_by_substitution(&amb, p) {
        return Err(Error::Inconsistent(
            "δ-coordinates of P|_U disagree with the substitution P(C_{a,b-a})(X-Y,X)".into(),
        ));
    }
    let (plus, minus) = split_even_odd(&amb, &q_vec);
    Ok(QCoefficients {
        n,
        k,
        q,
        q_od: delta_coordinates(&amb, &plus),
        q_ev: delta_coordinates(&amb, &minus),
    })
}

/// `(Q^+, Q^-) = (Q|_{1+ε}/2, Q|_{1-ε}/2)` for the barred action.
pub fn split_even_odd(amb: &Ambient, q: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let half = Rat::new(1.into(), 2.into());
    let plus = amb.op("1+ε").apply(q).into_iter().map(|x| x * &half).collect();
    let minus = amb.op("1-ε").apply(q).into_iter().map(|x| x * &half).collect();
    (plus, minus)
}

/// One certified relation. `odd_part`, `even_part` and `single_part` are
/// `3λ(Q^+)`, `λ(Q^-)` and `λ^S(Q)`, all multiplied by the same
/// normalizing factor as `vector`.
#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub source_index: usize,
    pub q: QCoefficients,
    #[serde(serialize_with = "ser_rat")]
    pub scale: Rat,
    pub vector: FormalVector,
    pub odd_part: FormalVector,
    pub even_part: FormalVector,
    pub single_part: FormalVector,
    pub certificate: Option<Certificate>,
    pub odd_certificate: Option<Certificate>,
    pub latex: String,
}

fn ser_rat<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(x))
}

/// All relations of weight `k` and level `N`, one per basis vector of
/// `W̄^+_{k-2}`, each certified in `P^ev`.
pub fn generate_relations(n: u32, k: u32) -> Result<Vec<Relation>> {
    let certifier = PevCertifier::new(k, n)?;
    generate_relations_with(&certifier)
}

pub fn generate_relations_with(certifier: &PevCertifier) -> Result<Vec<Relation>> {
    let (k, n) = (certifier.space().weight(), certifier.space().level());
    let (amb, wp) = barred_plus(n, k)?;
    let u = amb.op("U");
    let es_minus_1 = amb.op("εS-1");
    let mut out = Vec::new();
    let mut odd_rows = Vec::new();
    for (idx, p) in wp.basis_vecs().iter().enumerate() {
        let q = u.apply(p);
        if es_minus_1.apply(&q) != *p {
            return Err(Error::Inconsistent(format!("Q|_(εS-1) != P for basis vector {idx}")));
        }
        let (plus, minus) = split_even_odd(&amb, &q);
        if es_minus_1.apply(&minus).iter().any(|x| !x.is_zero()) {
            return Err(Error::Inconsistent(format!("Q^- not fixed by εS for basis vector {idx}")));
        }
        let qc = coefficients_from_polynomial(n, k, p)?;
        let odd = lambda_flat(&amb, &plus, LambdaVariant::Plain).scale(&rat_int(3));
        let even = lambda_flat(&amb, &minus, LambdaVariant::Plain);
        let single = lambda_flat(&amb, &q, LambdaVariant::S);
        let raw = odd.add(&even).add(&single);
        if raw.coeffs.keys().any(|s| matches!(s, DzvSymbol::P2 { .. })) {
            return Err(Error::Inconsistent("relation vector has product symbols".into()));
        }
        let scale = raw.normalizing_factor();
        let vector = raw.scale(&scale);
        let odd_part = odd.scale(&scale);
        let certificate = certifier.certify(&vector)?;
        let Some(cert) = &certificate else {
            return Err(Error::CertificationFailed(format!(
                "relation from basis vector {idx} at (N,k)=({n},{k}) is not in P^ev"
            )));
        };
        if certifier.replay(cert) != vector {
            return Err(Error::Inconsistent("certificate does not reproduce the relation".into()));
        }
        let odd_certificate = certifier.certify(&odd_part)?;
        if odd_certificate.is_none() {
            return Err(Error::CertificationFailed(format!(
                "odd-odd part from basis vector {idx} at (N,k)=({n},{k}) is not in P^ev"
            )));
        }
        odd_rows.push(certifier.space().to_dense(&qc.odd_vector())?);
        out.push(Relation {
            source_index: idx,
            latex: format!("{} \\in \\mathcal{{P}}^{{ev}}_{{{k},{n}}}", vector.to_latex()),
            q: qc,
            scale: scale.clone(),
            vector,
            odd_part,
            even_part: even.scale(&scale),
            single_part: single.scale(&scale),
            certificate,
            odd_certificate,
        });
    }
    let rank = Subspace::span(certifier.space().dim(), odd_rows)?.dim();
    if rank != wp.dim() {
        return Err(Error::Inconsistent(format!(
            "q_od has rank {rank}, expected {} (P -> Q^+ not injective)",
            wp.dim()
        )));
    }
    Ok(out)
}

/// Outcome of the converse comparison.
#[derive(Clone, Debug, Serialize)]
pub struct ConverseReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub k: u32,
    pub dim_w_bar_plus: usize,
    pub dim_oddodd_in_pev: usize,
    pub dim_generated: usize,
    pub spaces_equal: bool,
}

impl ConverseReport {
    pub fn passed(&self) -> bool {
        self.spaces_equal
            && self.dim_oddodd_in_pev == self.dim_w_bar_plus
            && self.dim_generated == self.dim_w_bar_plus
    }
}

/// Compares the odd-odd symmetric `Z2` vectors inside `span(dsh ∪ P^ev)`
/// with the span of the generated odd-odd parts.
pub fn converse_rank_check(n: u32, k: u32) -> Result<ConverseReport> {
    let certifier = PevCertifier::new(k, n)?;
    let relations = generate_relations_with(&certifier)?;
    converse_rank_check_with(&certifier, &relations)
}

pub fn converse_rank_check_with(
    certifier: &PevCertifier,
    relations: &[Relation],
) -> Result<ConverseReport> {
    let fs = certifier.space();
    let (k, n) = (fs.weight(), fs.level());
    let (_, wp) = barred_plus(n, k)?;
    let inside = fs.oddodd_subspace()?.intersect(certifier.span())?;
    let generated = Subspace::span(
        fs.dim(),
        relations.iter().map(|r| fs.to_dense(&r.q.odd_vector())).collect::<Result<_>>()?,
    )?;
    Ok(ConverseReport {
        n,
        k,
        dim_w_bar_plus: wp.dim(),
        dim_oddodd_in_pev: inside.dim(),
        dim_generated: generated.dim(),
        spaces_equal: inside == generated,
    })
}
