//! Plain-text renderings of the JSON documents.

use std::fmt::Write;

use serde_json::Value;

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn cosets(d: &Value) -> String {
    let mut out = format!("A({}) has {} cosets\n", d["N"], d["count"]);
    out.push_str("  c  d\n");
    for row in d["cosets"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "{:>3}{:>3}", s(&row[0]), s(&row[1]));
    }
    out
}

pub fn period_basis(d: &Value) -> String {
    let req = &d["request"];
    let mut out = format!(
        "{} for N={}, w={}, flavor={}, sign={}: dim {}\n",
        s(&req["which"]),
        req["N"],
        req["w"],
        s(&req["flavor"]),
        s(&req["sign"]),
        d["dim"]
    );
    for (i, v) in d["basis"].as_array().into_iter().flatten().enumerate() {
        let _ = writeln!(out, "[{i}]");
        for (coset, coeffs) in v["values"].as_object().into_iter().flatten() {
            let cs: Vec<String> = coeffs.as_array().into_iter().flatten().map(s).collect();
            let _ = writeln!(out, "  ({coset}): {}", cs.join(" "));
        }
    }
    out
}

pub fn relations(d: &Value) -> String {
    let mut out = format!("{} relations for N={}, k={}\n", d["count"], d["N"], d["k"]);
    for r in d["relations"].as_array().into_iter().flatten() {
        let terms = r["vector"]["terms"].as_array().map_or(0, Vec::len);
        let certified = !r["certificate"].is_null() && !r["odd_certificate"].is_null();
        let _ = writeln!(
            out,
            "  basis vector {}: {} terms, scale {}, certified {}",
            r["source_index"],
            terms,
            s(&r["scale"]),
            certified
        );
    }
    out
}

pub fn relations_latex(d: &Value) -> String {
    let mut out = String::new();
    for r in d["relations"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "{}", s(&r["latex"]));
    }
    out
}

pub fn verify(d: &Value) -> String {
    let mut out = format!(
        "N={}, k={}, {} bits, max_den {}\n",
        d["N"],
        d["k"],
        d["prec_bits"],
        s(&d["max_den"])
    );
    for r in d["relations"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  basis vector {}: {}", r["source_index"], pass(&r["passed"]));
        for part in ["full", "odd"] {
            let p = &r[part];
            let _ = writeln!(
                out,
                "    {part:<4} rational {} (predicted {}), residual {}, |T| {}, |Im| {}",
                s(&p["rational"]),
                s(&p["predicted"]),
                s(&p["residual"]),
                s(&p["t_residual"]),
                s(&p["imag_residual"])
            );
        }
    }
    let _ = writeln!(out, "{}", pass(&d["passed"]));
    out
}

pub fn dims(d: &Value) -> String {
    format!(
        "N={}, w={}: dim W+ {}, dim W- {}, dim C+ {}, dim C- {}, dim S_{} = {} (table: {})\n",
        d["N"],
        d["w"],
        d["dim_w_plus"],
        d["dim_w_minus"],
        d["dim_c_plus"],
        d["dim_c_minus"],
        d["w"].as_u64().unwrap_or(0) + 2,
        d["dim_s"],
        s(&d["classical"])
    )
}

pub fn check(d: &Value) -> String {
    let res = s(d.get("max_residual").unwrap_or(&d["residual"]));
    format!("{}: residual {} (threshold {}) {}\n", s(&d["command"]), res, s(&d["threshold"]), pass(&d["passed"]))
}

fn pass(v: &Value) -> &'static str {
    if v.as_bool() == Some(true) {
        "PASS"
    } else {
        "FAIL"
    }
}
