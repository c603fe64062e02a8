//! Browser bindings. Every export takes and returns JSON text so the page needs no glue types.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qmatroid::descriptor::{code_from_json, qmatroid_from_json};
use qmatroid::projectivization::{gamma, proj_size};
use qmatroid::qmatroid::DEFAULT_EXTENSION_CAP;
use qmatroid::Error;

/// Subcode enumeration limit for the page; large codes fail fast instead of freezing the tab.
pub const PAGE_SUBCODE_BUDGET: u128 = 200_000;

fn parse(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))
}

fn describe(e: Error) -> String {
    format!("{}: {e}", e.code())
}

/// Whitney function, characteristic and Tutte polynomials, and the minimal extension degree.
pub fn invariants(descriptor: &str) -> Result<String, String> {
    let m = qmatroid_from_json(&parse(descriptor)?).map_err(describe)?;
    let w = m.whitney().map_err(describe)?;
    let min_m = w.min_extension_degree(DEFAULT_EXTENSION_CAP).ok();
    Ok(json!({
        "q": m.q(),
        "n": m.n(),
        "k": m.k(),
        "whitney": w.poly().pretty(),
        "char_poly": w.char_poly().map_err(describe)?.pretty(),
        "tutte": w.tutte().map_err(describe)?.pretty(),
        "min_m": min_m,
    })
    .to_string())
}

/// Higher weight enumerators of two codes side by side.
pub fn compare_codes(a: &str, b: &str) -> Result<String, String> {
    let mut out = Vec::new();
    for text in [a, b] {
        let code = code_from_json(&parse(text)?).map_err(describe)?;
        let w = code.qmatroid().and_then(|m| m.whitney()).map_err(describe)?;
        let dist = code.higher_distributions(code.k(), PAGE_SUBCODE_BUDGET).map_err(describe)?;
        let enums: Vec<String> = dist.enumerators().iter().map(|p| p.pretty()).collect();
        out.push((w.poly(), enums));
    }
    Ok(json!({
        "whitney": [out[0].0.pretty(), out[1].0.pretty()],
        "same_whitney": out[0].0 == out[1].0,
        "enumerators": [out[0].1, out[1].1],
        "same_enumerators": out[0].1 == out[1].1,
    })
    .to_string())
}

/// γ_i^r(n) for all r ≤ n and i ≤ ⟨n⟩_q, as rows indexed by r.
pub fn gamma_table(q: u32, n: usize) -> Result<String, String> {
    if !qmatroid::gf::is_prime(q) || n > 4 {
        return Err("q must be prime and n at most 4".into());
    }
    let points: usize = proj_size(n, q).try_into().map_err(|_| "too many points".to_string())?;
    let rows: Vec<Vec<String>> =
        (0..=n).map(|r| (0..=points).map(|i| gamma(i, r, n, q).to_string()).collect()).collect();
    Ok(json!({ "q": q, "n": n, "points": points, "rows": rows }).to_string())
}

#[wasm_bindgen(js_name = invariants)]
pub fn invariants_js(descriptor: &str) -> Result<String, JsValue> {
    invariants(descriptor).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = compareCodes)]
pub fn compare_codes_js(a: &str, b: &str) -> Result<String, JsValue> {
    compare_codes(a, b).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = gammaTable)]
pub fn gamma_table_js(q: u32, n: usize) -> Result<String, JsValue> {
    gamma_table(q, n).map_err(|e| JsValue::from_str(&e))
}
