//! wasm-bindgen entry points for the static demo in `www/`.
//!
//! Every function takes plain strings and numbers and returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use shiftlab::criteria::{
    avg_expansive, avg_pos_expansive, expansive_basis_diagnostic, pow2_grid, unif_expansive, unif_pos_expansive,
    HorizonConfig, Side, Verdict,
};
use shiftlab::shifts::ShiftOperator;
use shiftlab::synthesis::{build_blocks, left_norms};

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn operator(direction: &str, weights: &str, space: &str) -> Result<ShiftOperator, String> {
    let e = |e: shiftlab::Error| e.to_string();
    ShiftOperator::new(direction.parse().map_err(e)?, weights.parse().map_err(e)?, space.parse().map_err(e)?).map_err(e)
}

fn log2_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn orbit_norms_json(direction: &str, weights: &str, space: &str, base: i64, n_lo: i64, n_hi: i64, k: u32) -> Result<Value, String> {
    if n_hi < n_lo || n_hi - n_lo > 20_000 {
        return Err("step range must be nonempty and at most 20000 long".into());
    }
    let op = operator(direction, weights, space)?;
    let mut pts = Vec::new();
    for n in n_lo..=n_hi {
        match op.basis_orbit_log(base, n, k) {
            Ok(m) => pts.push(json!([n, log2_or_null(m.log2())])),
            Err(_) => pts.push(json!([n, Value::Null])),
        }
    }
    Ok(json!({ "operator": op.describe(), "base": base, "k": k, "points": pts }))
}

/// `[[n, log2 ‖T^n e_base‖_k], ...]`; steps outside the tabulated domain give `null`.
#[wasm_bindgen]
pub fn orbit_norms(direction: &str, weights: &str, space: &str, base: i64, n_lo: i64, n_hi: i64, k: u32) -> Result<String, JsValue> {
    orbit_norms_json(direction, weights, space, base, n_lo, n_hi, k).map(|v| v.to_string()).map_err(js_err)
}

pub fn synthesis_profile_json(blocks: u32) -> Result<Value, String> {
    if !(1..=4).contains(&blocks) {
        return Err("the demo builds 1 to 4 blocks".into());
    }
    let (layout, w) = build_blocks(blocks).map_err(|e| e.to_string())?;
    let norms = left_norms(&w, w.left.len());
    // thin long profiles for plotting, always keeping the plateau values
    let stride = (norms.len() / 4000).max(1);
    let pts: Vec<Value> = norms
        .iter()
        .enumerate()
        .filter(|(i, _)| i % stride == 0 || i + 1 == norms.len())
        .map(|(i, x)| json!([i + 1, x.to_log().log2()]))
        .collect();
    let layout: Vec<Value> = layout
        .blocks
        .iter()
        .map(|b| json!({ "j": b.j, "k": b.k, "i": b.i, "r": b.r, "s": b.s, "t": b.t, "n": b.n, "alpha": b.alpha.to_string() }))
        .collect();
    Ok(json!({ "layout": layout, "points": pts, "stride": stride }))
}

/// Block layout and `log2 ‖B_w^n e_{-1}‖` for `n = 1..t_J`.
#[wasm_bindgen]
pub fn synthesis_profile(blocks: u32) -> Result<String, JsValue> {
    synthesis_profile_json(blocks).map(|v| v.to_string()).map_err(js_err)
}

fn summary(v: &Verdict) -> Value {
    json!({
        "criterion": v.criterion,
        "kind": v.kind.to_string(),
        "property": v.property,
        "k": v.k,
        "l": v.l,
        "branch": v.branch.map(|b| b.to_string()),
        "upe": v.upe,
        "notes": v.notes,
    })
}

pub fn check_criteria_json(direction: &str, weights: &str, space: &str, n_max: u64, w: i64, grid_top: u32) -> Result<Value, String> {
    let op = operator(direction, weights, space)?;
    let cfg = HorizonConfig { n_max: n_max.clamp(1, 5000), w: w.clamp(1, 500), m_grid: pow2_grid(grid_top.clamp(1, 40)), ..HorizonConfig::default() };
    let mut out = Vec::new();
    let mut push = |r: shiftlab::Result<Verdict>| match r {
        Ok(v) => out.push(summary(&v)),
        Err(e) => out.push(json!({ "error": e.to_string() })),
    };
    if op.is_bilateral() {
        push(avg_expansive(&op, &cfg));
        push(unif_expansive(&op, &cfg).map(|(_, v)| v));
    } else {
        push(avg_pos_expansive(&op, Side::Op, &cfg));
    }
    push(unif_pos_expansive(&op, &cfg));
    push(expansive_basis_diagnostic(&op, &cfg));
    Ok(json!({ "operator": op.describe(), "verdicts": out }))
}

/// AE, UE (or APE on `N`), UPE and the basis diagnostic under a small horizon.
#[wasm_bindgen]
pub fn check_criteria(direction: &str, weights: &str, space: &str, n_max: u64, w: i64, grid_top: u32) -> Result<String, JsValue> {
    check_criteria_json(direction, weights, space, n_max, w, grid_top).map(|v| v.to_string()).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_points() {
        let v = orbit_norms_json("backward", "constant:2", "c0_Z", 0, -2, 3, 1).unwrap();
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[5], json!([3, 3.0]));
        assert!(orbit_norms_json("backward", "constant:2", "c0_Z", 0, 3, 2, 1).is_err());
    }

    #[test]
    fn profile_layout() {
        let v = synthesis_profile_json(2).unwrap();
        assert_eq!(v["layout"][1]["k"], 6);
        assert_eq!(v["points"][0], json!([1, 1.0]));
        assert!(synthesis_profile_json(9).is_err());
    }

    #[test]
    fn criteria_summary() {
        let v = check_criteria_json("backward", "constant:2", "lp_Z:2", 400, 50, 20).unwrap();
        assert_eq!(v["verdicts"][0]["kind"], "CertifiedUnbounded");
        assert_eq!(v["verdicts"][1]["property"], "a");
        assert!(check_criteria_json("sideways", "constant:2", "c0_Z", 10, 10, 4).is_err());
    }
}
