//! Browser bindings: one action, a span probe, and an action table.
//! Each takes the module spec as JSON text and returns a JSON string.

use serde_json::{json, Value};
use supermod::analysis::{default_specialization, span_probe, ProbeSpecialization, Window};
use supermod::dmodule::DModuleSpec;
use supermod::functor::{action_table, g_act, GModuleHandle};
use supermod::lie::{Generator, LieVector, Sector};
use supermod::report::sorted;
use supermod::{Result, Scalar};
use wasm_bindgen::prelude::*;

fn handle(module: &str, b: &str, sector: &str) -> Result<GModuleHandle> {
    let spec = DModuleSpec::parse(module)?;
    let b: Scalar = b.parse()?;
    Ok(GModuleHandle::new(spec, b).in_sector(sector.parse::<Sector>()?))
}

pub fn act_json(module: &str, b: &str, sector: &str, generator: &str, vector: &str) -> Result<String> {
    let h = handle(module, b, sector)?;
    let g: Generator = generator.parse()?;
    let v = h.spec.parse_vector(vector)?;
    let image = g_act(&h, &LieVector::generator(h.sector, g)?, &v)?;
    Ok(image.to_json(&h.spec).to_string())
}

pub fn probe_json(module: &str, b: &str, seed: &str, window: &str) -> Result<String> {
    let h = handle(module, b, "0")?;
    let seed = h.spec.parse_vector(seed)?;
    let w = Window::parse(window)?;
    let a = default_specialization(&h);
    Ok(span_probe(&h, &seed, &w, &ProbeSpecialization::Fixed(a))?.to_json().to_string())
}

pub fn table_json(module: &str, b: &str, window: i64, tokens: usize) -> Result<String> {
    let h = handle(module, b, "0")?;
    Window::new(window, tokens, 1)?;
    let rows: Vec<Value> = action_table(&h, window, tokens)?
        .into_iter()
        .map(|(g, t, v)| json!({"generator": g.to_string(), "token": t.render(&h.spec), "image": v.to_json(&h.spec)}))
        .collect();
    Ok(sorted(json!({"module": h.describe(), "table": rows})).to_string())
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn act(module: &str, b: &str, sector: &str, generator: &str, vector: &str) -> std::result::Result<String, JsValue> {
    js(act_json(module, b, sector, generator, vector))
}

#[wasm_bindgen]
pub fn probe(module: &str, b: &str, seed: &str, window: &str) -> std::result::Result<String, JsValue> {
    js(probe_json(module, b, seed, window))
}

#[wasm_bindgen(js_name = actionTable)]
pub fn action_table_js(module: &str, b: &str, window: i32, tokens: u32) -> std::result::Result<String, JsValue> {
    js(table_json(module, b, window as i64, tokens as usize))
}
