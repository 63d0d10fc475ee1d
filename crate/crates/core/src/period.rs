//! Period-polynomial spaces `V`, `W`, `C` for `Gamma_1(N)` and the maps
//! `δ`, `δ*`, `f_A`, `ι` between them.
//!
//! Every space is a [`Subspace`] of the flattened ambient space of
//! [`Ambient`], obtained as a chain of exact kernels.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::equivariant::{Ambient, Operator};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Rat, Subspace};
use crate::sl2::Flavor;

/// Which `ε`-eigenspace to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
    Both,
}

impl Sign {
    fn eps_kernel_op(self) -> Option<&'static str> {
        match self {
            Sign::Plus => Some("ε-1"),
            Sign::Minus => Some("ε+1"),
            Sign::Both => None,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            "both" | "+-" | "±" => Ok(Sign::Both),
            other => Err(Error::Parse(format!("unknown sign `{other}`"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Both => "both",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    V,
    W,
    WRelaxed,
    C,
}

/// A fully specified space; the cache key for [`space`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceRequest {
    #[serde(rename = "N")]
    pub n: u32,
    pub w: u32,
    pub flavor: Flavor,
    pub which: Which,
    pub sign: Sign,
}

type Cache = RwLock<HashMap<SpaceRequest, Subspace>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Computes (or fetches) the requested space.
pub fn space(req: SpaceRequest) -> Result<Subspace> {
    if let Some(s) = cache().read().expect("space cache poisoned").get(&req) {
        return Ok(s.clone());
    }
    let amb = Ambient::new(req.n, req.w, req.flavor)?;
    let s = match req.which {
        Which::V => kernels(&amb, eps_eigenspace(&amb, req.sign)?, &["J-1"])?,
        Which::W => kernels(
            &amb,
            space(SpaceRequest { which: Which::V, ..req })?,
            &["1+S", "1+U+U^2"],
        )?,
        Which::WRelaxed => kernels(
            &amb,
            space(SpaceRequest { which: Which::V, ..req })?,
            &["1+S", "(1+U+U^2)(1-S)"],
        )?,
        Which::C => compute_c(&amb, req.sign)?,
    };
    cache()
        .write()
        .expect("space cache poisoned")
        .insert(req, s.clone());
    Ok(s)
}

fn eps_eigenspace(amb: &Ambient, sign: Sign) -> Result<Subspace> {
    let full = Subspace::full(amb.dim());
    match sign.eps_kernel_op() {
        Some(op) => kernels(amb, full, &[op]),
        None => Ok(full),
    }
}

/// Successive kernels of the given operators inside `start`.
pub fn kernels(amb: &Ambient, start: Subspace, ops: &[&str]) -> Result<Subspace> {
    ops.iter().try_fold(start, |s, op| {
        let op = amb.op(op);
        s.kernel_of(|v| op.apply(v))
    })
}

fn compute_c(amb: &Ambient, sign: Sign) -> Result<Subspace> {
    let v = space_v(amb.level(), amb.weight(), amb.flavor())?;
    let t_inv = kernels(amb, v, &["T-1"])?;
    let one_minus_s = amb.op("1-S");
    let image = t_inv.image(amb.dim(), |x| one_minus_s.apply(x))?;
    image.intersect(&eps_eigenspace(amb, sign)?)
}

/// `V = {P : P|_J = P}`.
pub fn space_v(n: u32, w: u32, flavor: Flavor) -> Result<Subspace> {
    space_v_signed(n, w, flavor, Sign::Both)
}

/// `V^±`, the `ε`-eigenspaces of `V`.
pub fn space_v_signed(n: u32, w: u32, flavor: Flavor, sign: Sign) -> Result<Subspace> {
    space(SpaceRequest {
        n,
        w,
        flavor,
        which: Which::V,
        sign,
    })
}

/// `W^± = {P in V^± : P|_{1+S} = P|_{1+U+U^2} = 0}`.
pub fn space_w(n: u32, w: u32, flavor: Flavor, sign: Sign) -> Result<Subspace> {
    space(SpaceRequest {
        n,
        w,
        flavor,
        which: Which::W,
        sign,
    })
}

/// Like [`space_w`] with the weaker condition `P|_{(1+U+U^2)(1-S)} = 0`.
pub fn space_w_relaxed(n: u32, w: u32, flavor: Flavor, sign: Sign) -> Result<Subspace> {
    space(SpaceRequest {
        n,
        w,
        flavor,
        which: Which::WRelaxed,
        sign,
    })
}

/// `C^± = {P|_{1-S} : P in V, P|_T = P}`, cut to the `ε`-eigenspace.
pub fn space_c(n: u32, w: u32, flavor: Flavor, sign: Sign) -> Result<Subspace> {
    space(SpaceRequest {
        n,
        w,
        flavor,
        which: Which::C,
        sign,
    })
}

/// `V̄^{-,sym} = {u in V̄^- : u|_{εS} = u}` (barred action).
pub fn space_v_minus_sym(n: u32, w: u32) -> Result<Subspace> {
    let amb = Ambient::new(n, w, Flavor::Barred)?;
    let vm = space_v_signed(n, w, Flavor::Barred, Sign::Minus)?;
    kernels(&amb, vm, &["εS-1"])
}

fn check_member(s: &Subspace, v: &[Rat], what: &str) -> Result<()> {
    if s.contains(v)? {
        Ok(())
    } else {
        Err(Error::NotInSpace(what.to_string()))
    }
}

/// `δ(P) = P|_{1+SU^2S-SU} mod V̄^-` on the barred space `V̄`. The
/// quotient by `V̄^-` is identified with `V̄^+` through `(1+ε)/2`, so the
/// composite operator is `(1+SU^2S-SU)(1+ε)/2`.
pub fn delta_operator(n: u32, w: u32) -> Result<Operator> {
    let amb = Ambient::new(n, w, Flavor::Barred)?;
    Ok(amb.op("(1+SU^2S-SU)(1+ε)"))
}

/// Rows are `δ(b_i)` for the canonical basis `b_i` of `V̄`, in ambient
/// coordinates of the `V̄^+` representative.
pub fn delta_map(n: u32, w: u32) -> Result<QMatrix> {
    let op = delta_operator(n, w)?;
    let v = space_v(n, w, Flavor::Barred)?;
    let half = Rat::new(1.into(), 2.into());
    let rows = v
        .basis_vecs()
        .iter()
        .map(|b| op.apply(b).into_iter().map(|x| x * &half).collect())
        .collect();
    QMatrix::from_rows(v.ambient_dim(), rows)
}

/// Kernel of `δ` on all of `V̄`.
pub fn delta_kernel_full(n: u32, w: u32) -> Result<Subspace> {
    let op = delta_operator(n, w)?;
    space_v(n, w, Flavor::Barred)?.kernel_of(|v| op.apply(v))
}

/// Kernel of `δ` restricted to `V̄^+`; its dimension equals `dim W^+`.
pub fn delta_kernel(n: u32, w: u32) -> Result<Subspace> {
    let op = delta_operator(n, w)?;
    space_v_signed(n, w, Flavor::Barred, Sign::Plus)?.kernel_of(|v| op.apply(v))
}

/// The vectors `P|_{1+εS}` for `P` in a basis of `V̄^-` and
/// `P|_{(1+εS)(1-T)}` for `P` in a basis of `V̄`; all of them lie in
/// `ker δ`.
pub fn delta_kernel_generators(n: u32, w: u32) -> Result<Vec<Vec<Rat>>> {
    let amb = Ambient::new(n, w, Flavor::Barred)?;
    let sym = amb.op("1+εS");
    let sym_t = amb.op("(1+εS)(1-T)");
    let mut out: Vec<Vec<Rat>> = space_v_signed(n, w, Flavor::Barred, Sign::Minus)?
        .basis_vecs()
        .iter()
        .map(|p| sym.apply(p))
        .collect();
    out.extend(space_v(n, w, Flavor::Barred)?.basis_vecs().iter().map(|p| sym_t.apply(p)));
    Ok(out)
}

/// `δ*(P) = P|_{1+SUS-U^2S}` for `P in V^+` (standard action).
pub fn delta_star(n: u32, w: u32, p: &[Rat]) -> Result<Vec<Rat>> {
    check_member(&space_v_signed(n, w, Flavor::Standard, Sign::Plus)?, p, "V^+")?;
    let amb = Ambient::new(n, w, Flavor::Standard)?;
    Ok(amb.op("1+SUS-U^2S").apply(p))
}

/// `ker δ*` inside `V^+`.
pub fn delta_star_kernel(n: u32, w: u32) -> Result<Subspace> {
    let amb = Ambient::new(n, w, Flavor::Standard)?;
    let vp = space_v_signed(n, w, Flavor::Standard, Sign::Plus)?;
    kernels(&amb, vp, &["1+SUS-U^2S"])
}

/// `{P in V^+ : δ*(P) in V^-}`, i.e. `δ*(P)|_{1+ε} = 0`.
pub fn delta_star_preimage_minus(n: u32, w: u32) -> Result<Subspace> {
    let amb = Ambient::new(n, w, Flavor::Standard)?;
    let vp = space_v_signed(n, w, Flavor::Standard, Sign::Plus)?;
    kernels(&amb, vp, &["(1+SUS-U^2S)(1+ε)"])
}

/// `ker f_A` with `f_A(P) = P|_{1+U-U^2S} mod A^-` on `A^+`, where `A` is
/// `V` with the given action.
pub fn f_kernel(n: u32, w: u32, flavor: Flavor) -> Result<Subspace> {
    let amb = Ambient::new(n, w, flavor)?;
    let vp = space_v_signed(n, w, flavor, Sign::Plus)?;
    kernels(&amb, vp, &["(1+U-U^2S)(1+ε)"])
}

/// `f_A(P)` as its `A^+` representative `P|_{(1+U-U^2S)(1+ε)}/2`.
pub fn f_map(n: u32, w: u32, flavor: Flavor, p: &[Rat]) -> Result<Vec<Rat>> {
    check_member(&space_v_signed(n, w, flavor, Sign::Plus)?, p, "A^+")?;
    let amb = Ambient::new(n, w, flavor)?;
    let half = Rat::new(1.into(), 2.into());
    Ok(amb
        .op("(1+U-U^2S)(1+ε)")
        .apply(p)
        .into_iter()
        .map(|x| x * &half)
        .collect())
}

/// `ι(P) = P|_{U(1+ε)}`.
pub fn iota(n: u32, w: u32, flavor: Flavor, p: &[Rat]) -> Result<Vec<Rat>> {
    let amb = Ambient::new(n, w, flavor)?;
    Ok(amb.op("U(1+ε)").apply(p))
}

/// Rank of `ι` on `W^+`; equal to `dim W^+` exactly when `ι` is injective there.
pub fn iota_rank(n: u32, w: u32, flavor: Flavor) -> Result<usize> {
    let wp = space_w(n, w, flavor, Sign::Plus)?;
    let amb = Ambient::new(n, w, flavor)?;
    let op = amb.op("U(1+ε)");
    Ok(wp.image(amb.dim(), |v| op.apply(v))?.dim())
}

/// Classical dimensions `dim S_k(Gamma_1(N))` for a handful of safe cases.
pub fn classical_cusp_dim(n: u32, k: u32) -> Option<usize> {
    match (n, k) {
        (1, 12) | (1, 16) | (11, 2) => Some(1),
        (1, 10) => Some(0),
        (n, 2) if (1..=10).contains(&n) => Some(0),
        _ => None,
    }
}

/// Dimensions entering `S_{w+2} ≅ (W^±/C^±) ⊗ C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EichlerShimuraReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub w: u32,
    pub dim_w_plus: usize,
    pub dim_w_minus: usize,
    pub dim_c_plus: usize,
    pub dim_c_minus: usize,
    pub dim_s: usize,
    pub classical: Option<usize>,
}

pub fn eichler_shimura_report(n: u32, w: u32) -> Result<EichlerShimuraReport> {
    let f = Flavor::Standard;
    let wp = space_w(n, w, f, Sign::Plus)?;
    let wm = space_w(n, w, f, Sign::Minus)?;
    let cp = space_c(n, w, f, Sign::Plus)?;
    let cm = space_c(n, w, f, Sign::Minus)?;
    for (c, ws, name) in [(&cp, &wp, "C^+"), (&cm, &wm, "C^-")] {
        if !c.is_subspace_of(ws)? {
            return Err(Error::Inconsistent(format!("{name} not contained in W for N={n}, w={w}")));
        }
    }
    let plus = wp.dim() - cp.dim();
    let minus = wm.dim() - cm.dim();
    if plus != minus {
        return Err(Error::Inconsistent(format!(
            "dim W^+ - dim C^+ = {plus} but dim W^- - dim C^- = {minus} for N={n}, w={w}"
        )));
    }
    Ok(EichlerShimuraReport {
        n,
        w,
        dim_w_plus: wp.dim(),
        dim_w_minus: wm.dim(),
        dim_c_plus: cp.dim(),
        dim_c_minus: cm.dim(),
        dim_s: plus,
        classical: classical_cusp_dim(n, w + 2),
    })
}
