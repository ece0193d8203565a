//! Browser bindings: group lookup, twist tables and normal forms.
//!
//! Each export wraps a plain function so the logic can be tested natively.
//! Exports take `i32` so JavaScript passes plain numbers, not BigInts.

use wasm_bindgen::prelude::*;

use real_chrom::grading::{Bidegree, Monomial};
use real_chrom::rings::{group_at_mode, normal_form, Mode, TheoryId, TheoryKind};
use real_chrom::table::{group_table, render, Format};

/// `n < 0` means no height (BPR).
fn theory(kind: &str, n: i32) -> Result<TheoryId, String> {
    let kind: TheoryKind = kind.parse()?;
    let n = u32::try_from(n).ok();
    TheoryId::new(kind, n).map_err(|e| e.to_string())
}

pub fn group_text(kind: &str, n: i32, k: i64, l: i64, mode: &str) -> Result<String, String> {
    let mode: Mode = mode.parse()?;
    Ok(group_at_mode(theory(kind, n)?, Bidegree::new(k, l), mode).to_string())
}

pub fn twist_json(kind: &str, n: i32, l: i64, kmin: i64, kmax: i64) -> Result<String, String> {
    if kmax - kmin > 400 {
        return Err("at most 400 dimensions at a time".into());
    }
    let rows = group_table(theory(kind, n)?, Mode::Theorem, (kmin, kmax), (l, l));
    render(&rows, Format::Json).map_err(|e| e.to_string())
}

pub fn normal_form_text(kind: &str, n: i32, monomial: &str) -> Result<String, String> {
    let m: Monomial = monomial.parse().map_err(|e: real_chrom::grading::ParseError| e.to_string())?;
    let r = normal_form(&m, theory(kind, n)?).map_err(|e| e.to_string())?;
    Ok(match (r.coefficient_valuation, r.basis) {
        (Some(0), Some(b)) => b.to_string(),
        (Some(1), Some(b)) => format!("2 * {b}"),
        (Some(v), Some(b)) => format!("2^{v} * {b}"),
        _ => "0".to_string(),
    })
}

#[wasm_bindgen]
pub fn group(kind: &str, n: i32, k: i32, l: i32, mode: &str) -> Result<String, JsError> {
    group_text(kind, n, k.into(), l.into(), mode).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn twist(kind: &str, n: i32, l: i32, kmin: i32, kmax: i32) -> Result<String, JsError> {
    twist_json(kind, n, l.into(), kmin.into(), kmax.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn reduce(kind: &str, n: i32, monomial: &str) -> Result<String, JsError> {
    normal_form_text(kind, n, monomial).map_err(|e| JsError::new(&e))
}
