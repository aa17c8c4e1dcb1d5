//! Browser bindings. Every entry point takes plain strings and numbers and
//! returns a JSON string: `{"ok": true, "result": ...}` or
//! `{"ok": false, "error": ..., "exit_code": ...}`.

use a4lift::char2::Gf2nField;
use a4lift::cli::{classify_record, deform_record, pipeline_certificate, CliError, GlobalOptions, PipelineConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn options(field_degree: u32, series_precision: i64, padic_precision: u32, ram_index: u32, mu: &str) -> GlobalOptions {
    GlobalOptions {
        field_degree,
        residue_degree: None,
        series_precision,
        padic_precision,
        ram_index,
        mu: (!mu.trim().is_empty()).then(|| mu.to_string()),
        json: true,
    }
}

fn reply(r: Result<Value, CliError>) -> String {
    match r {
        Ok(v) => json!({"ok": true, "result": v}).to_string(),
        Err(e) => json!({"ok": false, "error": e.message, "exit_code": e.kind.exit_code()}).to_string(),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

/// Standard form, break, class dimension and Galois group of a representative.
#[wasm_bindgen]
pub fn classify(representative: &str, field_degree: u32) -> String {
    reply(
        Gf2nField::get(field_degree)
            .map_err(CliError::from)
            .and_then(|k| classify_record(representative, k))
            .map(|r| to_value(&r)),
    )
}

/// Deformation audit for a class of break > 6.
#[wasm_bindgen]
pub fn deform(representative: &str, field_degree: u32, series_precision: i64, mu: &str) -> String {
    let o = options(field_degree, series_precision, 8, 10, mu);
    reply(
        PipelineConfig::from_options(&o, field_degree)
            .and_then(|cfg| deform_record(representative, &cfg))
            .map(|r| to_value(&r)),
    )
}

/// Full chain certificate: deformations down to break 1 or 5, then the lift.
#[wasm_bindgen]
pub fn pipeline(
    representative: &str,
    field_degree: u32,
    series_precision: i64,
    padic_precision: u32,
    ram_index: u32,
    mu: &str,
) -> String {
    let o = options(field_degree, series_precision, padic_precision, ram_index, mu);
    reply(PipelineConfig::from_options(&o, field_degree).map(|cfg| {
        let (cert, kind) = pipeline_certificate(representative, &cfg);
        let mut v = to_value(&cert);
        v["exit_code"] = json!(kind.map_or(0, |k| k.exit_code()));
        v
    }))
}
