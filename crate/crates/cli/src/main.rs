use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cdz_core::equivariant::Ambient;
use cdz_core::numeric::eval::{dsh_check, verify_relation_with, DshCheck};
use cdz_core::numeric::verify_euler;
use cdz_core::formal::PevCertifier;
use cdz_core::period::{self, Sign, SpaceRequest, Which};
use cdz_core::relations::generate_relations_with;
use cdz_core::sl2::{enumerate_cosets, Flavor};

mod render;

/// Bumped whenever a JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Residual threshold for reconstructed rationals in `verify`.
const RECON_RESIDUAL: f64 = 1e-25;

#[derive(Parser, Debug)]
#[command(name = "cdz", version, about = "Period polynomial relations among colored double zeta values")]
struct Cli {
    /// Directory for cached exact results; safe to delete at any time.
    #[arg(long, global = true, env = "CDZ_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the cosets A(N) = Gamma_1(N)\SL_2(Z).
    Cosets {
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Basis of one of the equivariant period spaces.
    PeriodBasis {
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        wk: WeightArgs,
        #[arg(long, value_enum, default_value_t = FlavorArg::Standard)]
        flavor: FlavorArg,
        #[arg(long, value_enum, default_value_t = SignArg::Plus, allow_hyphen_values = true)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = SpaceArg::W)]
        space: SpaceArg,
        #[command(flatten)]
        out: Output,
    },
    /// Generate and certify the relations of weight k and level N.
    Relations {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Print the relations in LaTeX.
        #[arg(long)]
        latex: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate every generated relation numerically and reconstruct rationals.
    Verify {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 192)]
        prec_bits: u32,
        /// Largest denominator accepted by rational reconstruction (`1e9` style allowed).
        #[arg(long, default_value = "1e9", value_parser = parse_max_den)]
        max_den: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Dimensions of W, C and the inferred cusp form space.
    Dims {
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        wk: WeightArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Numeric check of both double shuffle relations for P^{r,s}_{a,b}.
    DshCheck {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, default_value_t = 192)]
        prec_bits: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Numeric check of Li_k(z) + (-1)^k Li_k(1/z) = -B_k(a/N)/k! (2 pi i)^k.
    EulerCheck {
        #[arg(long)]
        k: u32,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value_t = 192)]
        prec_bits: u32,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    /// Emit JSON, to stdout or to the given file.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WeightArgs {
    /// Polynomial degree w.
    #[arg(long)]
    w: Option<u32>,
    /// Weight k = w + 2.
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Standard,
    Barred,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    #[value(alias = "+")]
    Plus,
    #[value(alias = "-")]
    Minus,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    V,
    W,
    WRelaxed,
    C,
}

fn parse_max_den(s: &str) -> std::result::Result<u64, String> {
    let bad = || format!("`{s}` is not a positive integer or 1eN");
    let v = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let m: u64 = m.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad)?
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v == 0 {
        return Err(bad());
    }
    Ok(v)
}

fn usage_error(msg: String) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn check_level(n: u32) {
    if n == 0 {
        usage_error("--N must be at least 1".into());
    }
}

fn check_weight_level(k: u32, n: u32) {
    check_level(n);
    if k < 2 {
        usage_error(format!("--k must be at least 2, got {k}"));
    }
    if (k, n) == (2, 1) {
        usage_error("(k,N) = (2,1) is excluded".into());
    }
}

impl WeightArgs {
    fn degree(&self) -> u32 {
        match (self.w, self.k) {
            (Some(w), None) => w,
            (None, Some(k)) if k >= 2 => k - 2,
            (None, Some(k)) => usage_error(format!("--k must be at least 2, got {k}")),
            (Some(w), Some(k)) if k == w + 2 => w,
            (Some(w), Some(k)) => usage_error(format!("inconsistent --w {w} and --k {k}: need k = w + 2")),
            (None, None) => usage_error("one of --w or --k is required".into()),
        }
    }
}

/// On-disk cache of exact JSON documents.
struct Cache(Option<PathBuf>);

impl Cache {
    fn get_or_compute(&self, key: &str, f: impl FnOnce() -> Result<Value>) -> Result<Value> {
        let Some(dir) = &self.0 else { return f() };
        let path = dir.join(format!("{key}.v{SCHEMA_VERSION}.json"));
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(v) = serde_json::from_str(&text) {
                return Ok(v);
            }
        }
        let v = f()?;
        // a failed cache write only costs time later
        let _ = write_atomic(dir, &path, &to_json(&v));
        Ok(v)
    }
}

fn write_atomic(dir: &Path, path: &Path, text: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn header(command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m
}

fn cmd_cosets(n: u32) -> Result<Value> {
    let cosets = enumerate_cosets(n)?;
    let mut doc = header("cosets");
    doc.insert("N".into(), json!(n));
    doc.insert("count".into(), json!(cosets.len()));
    doc.insert("cosets".into(), json!(cosets.iter().map(|c| [c.c, c.d]).collect::<Vec<_>>()));
    Ok(Value::Object(doc))
}

fn cmd_period_basis(n: u32, w: u32, flavor: Flavor, sign: Sign, which: Which) -> Result<Value> {
    let s = period::space(SpaceRequest { n, w, flavor, which, sign })?;
    let amb = Ambient::new(n, w, flavor)?;
    let basis = s
        .basis_vecs()
        .into_iter()
        .map(|v| amb.vector(v).map(|v| serde_json::to_value(v).expect("vector serializes")))
        .collect::<cdz_core::Result<Vec<_>>>()?;
    let mut doc = header("period-basis");
    doc.insert("request".into(), serde_json::to_value(SpaceRequest { n, w, flavor, which, sign })?);
    doc.insert("dim".into(), json!(basis.len()));
    doc.insert("basis".into(), Value::Array(basis));
    Ok(Value::Object(doc))
}

fn cmd_relations(n: u32, k: u32) -> Result<Value> {
    let certifier = PevCertifier::new(k, n)?;
    let rels = generate_relations_with(&certifier)?;
    let mut doc = header("relations");
    doc.insert("N".into(), json!(n));
    doc.insert("k".into(), json!(k));
    doc.insert("count".into(), json!(rels.len()));
    doc.insert("relations".into(), serde_json::to_value(&rels)?);
    Ok(Value::Object(doc))
}

fn cmd_dims(n: u32, w: u32) -> Result<Value> {
    let rep = period::eichler_shimura_report(n, w)?;
    let mut doc = header("dims");
    if let Value::Object(m) = serde_json::to_value(&rep)? {
        doc.extend(m);
    }
    doc.insert("dim_delta_kernel_plus".into(), json!(period::delta_kernel(n, w)?.dim()));
    Ok(Value::Object(doc))
}

/// Returns the document and whether every threshold passed.
fn cmd_verify(n: u32, k: u32, prec_bits: u32, max_den: u64) -> Result<(Value, bool)> {
    let certifier = PevCertifier::new(k, n)?;
    let rels = generate_relations_with(&certifier)?;
    let md = max_den.into();
    let mut all = true;
    let mut checks = Vec::new();
    for rel in &rels {
        let c = verify_relation_with(&certifier, rel, prec_bits, &md)?;
        let ok = c.passed(prec_bits, RECON_RESIDUAL);
        all &= ok;
        let mut v = serde_json::to_value(&c)?;
        v["passed"] = json!(ok);
        checks.push(v);
    }
    let mut doc = header("verify");
    doc.insert("N".into(), json!(n));
    doc.insert("k".into(), json!(k));
    doc.insert("prec_bits".into(), json!(prec_bits));
    doc.insert("max_den".into(), json!(max_den.to_string()));
    doc.insert("residual_threshold".into(), json!(RECON_RESIDUAL));
    doc.insert("relations".into(), Value::Array(checks));
    doc.insert("passed".into(), json!(all));
    Ok((Value::Object(doc), all))
}

fn reg_json(v: &cdz_core::numeric::RegValue) -> Value {
    json!({ "c0": v.c0.to_decimal(30), "c1": v.c1.to_decimal(30) })
}

fn cmd_dsh_check(r: u32, s: u32, a: i64, b: i64, n: u32, prec_bits: u32) -> Result<(Value, bool)> {
    let c: DshCheck = dsh_check(r, s, a, b, n, prec_bits)?;
    let tol = 2f64.powi(-(prec_bits as i32 - 16));
    let res = c.max_residual();
    let ok = res < tol;
    let mut doc = header("dsh-check");
    for (key, val) in [("r", json!(r)), ("s", json!(s)), ("a", json!(a)), ("b", json!(b)), ("N", json!(n))] {
        doc.insert(key.into(), val);
    }
    doc.insert("prec_bits".into(), json!(prec_bits));
    doc.insert("product".into(), reg_json(&c.product));
    doc.insert("stuffle_residual".into(), reg_json(&c.stuffle));
    doc.insert("shuffle_residual".into(), reg_json(&c.shuffle));
    doc.insert("max_residual".into(), json!(res));
    doc.insert("threshold".into(), json!(tol));
    doc.insert("passed".into(), json!(ok));
    Ok((Value::Object(doc), ok))
}

fn cmd_euler_check(k: u32, n: u32, a: i64, prec_bits: u32) -> Result<(Value, bool)> {
    let res = verify_euler(k, n, a, prec_bits)?;
    let tol = 2f64.powi(-(prec_bits as i32 - 8));
    let ok = res < tol;
    let mut doc = header("euler-check");
    for (key, val) in [("k", json!(k)), ("N", json!(n)), ("a", json!(a))] {
        doc.insert(key.into(), val);
    }
    doc.insert("prec_bits".into(), json!(prec_bits));
    doc.insert("residual".into(), json!(res));
    doc.insert("threshold".into(), json!(tol));
    doc.insert("passed".into(), json!(ok));
    Ok((Value::Object(doc), ok))
}

fn emit(doc: &Value, out: &Output, text: impl FnOnce(&Value) -> String) -> Result<()> {
    match out.json.as_deref() {
        Some(p) if p == Path::new("-") => print!("{}", to_json(doc)),
        Some(p) => {
            fs::write(p, to_json(doc)).with_context(|| format!("writing {}", p.display()))?;
            print!("{}", text(doc));
        }
        None => print!("{}", text(doc)),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let cache = Cache(cli.cache_dir);
    match cli.command {
        Cmd::Cosets { n, out } => {
            check_level(n);
            let doc = cmd_cosets(n)?;
            emit(&doc, &out, render::cosets)?;
            Ok(true)
        }
        Cmd::PeriodBasis { n, wk, flavor, sign, space, out } => {
            check_level(n);
            let w = wk.degree();
            let flavor = match flavor {
                FlavorArg::Standard => Flavor::Standard,
                FlavorArg::Barred => Flavor::Barred,
            };
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
                SignArg::Both => Sign::Both,
            };
            let which = match space {
                SpaceArg::V => Which::V,
                SpaceArg::W => Which::W,
                SpaceArg::WRelaxed => Which::WRelaxed,
                SpaceArg::C => Which::C,
            };
            let key = format!("period-basis-N{n}-w{w}-{flavor:?}-{sign:?}-{which:?}");
            let doc = cache.get_or_compute(&key, || cmd_period_basis(n, w, flavor, sign, which))?;
            emit(&doc, &out, render::period_basis)?;
            Ok(true)
        }
        Cmd::Relations { n, k, latex, out } => {
            check_weight_level(k, n);
            let doc = cache.get_or_compute(&format!("relations-N{n}-k{k}"), || cmd_relations(n, k))?;
            emit(&doc, &out, |d| if latex { render::relations_latex(d) } else { render::relations(d) })?;
            Ok(true)
        }
        Cmd::Verify { n, k, prec_bits, max_den, out } => {
            check_weight_level(k, n);
            if prec_bits < 64 {
                usage_error(format!("--prec-bits must be at least 64, got {prec_bits}"));
            }
            let (doc, ok) = cmd_verify(n, k, prec_bits, max_den)?;
            emit(&doc, &out, render::verify)?;
            Ok(ok)
        }
        Cmd::Dims { n, wk, out } => {
            let w = wk.degree();
            check_weight_level(w + 2, n);
            let doc = cache.get_or_compute(&format!("dims-N{n}-w{w}"), || cmd_dims(n, w))?;
            emit(&doc, &out, render::dims)?;
            Ok(true)
        }
        Cmd::DshCheck { r, s, a, b, n, prec_bits, out } => {
            check_weight_level(r + s, n);
            if r == 0 || s == 0 {
                usage_error("--r and --s must be positive".into());
            }
            if (r, s, a.rem_euclid(n as i64), b.rem_euclid(n as i64)) == (1, 1, 0, 0) {
                usage_error("P^{1,1}_{0,0} is a product of two divergent factors".into());
            }
            let (doc, ok) = cmd_dsh_check(r, s, a, b, n, prec_bits)?;
            emit(&doc, &out, render::check)?;
            Ok(ok)
        }
        Cmd::EulerCheck { k, n, a, prec_bits, out } => {
            check_level(n);
            if k == 0 || (k == 1 && a.rem_euclid(n as i64) == 0) {
                usage_error(format!("Li_{k} diverges at a = {a} mod {n}"));
            }
            let (doc, ok) = cmd_euler_check(k, n, a, prec_bits)?;
            emit(&doc, &out, render::check)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
