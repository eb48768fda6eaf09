//! Browser demo: the Γ9 table on MO(2), state-space classification, and
//! Bell / Jauch-Piron verdicts. Each export returns a JSON string; the
//! plain functions in [`demo`] do the work and are what the tests call.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gamma9_table(r1: &str, r2: &str, u1: &str, u2: &str) -> Result<String, JsValue> {
    js(demo::gamma9_table(r1, r2, u1, u2))
}

#[wasm_bindgen]
pub fn classify_lattice(lattice: &str) -> Result<String, JsValue> {
    js(demo::classify_lattice(lattice))
}

#[wasm_bindgen]
pub fn check_property(lattice: &str, property: &str) -> Result<String, JsValue> {
    js(demo::check_property(lattice, property))
}

#[wasm_bindgen]
pub fn preset_lattice(name: &str) -> Result<String, JsValue> {
    js(demo::preset_lattice(name))
}
