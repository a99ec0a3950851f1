//! Browser bindings: cone decompositions, the geometric-series check for `f₀`,
//! and nested sum evaluation. Every entry point returns a JSON string.

use mdz::{
    f0_product, f0_sum, fundamental_domain, mdzv_eval, Cone, EvalParams, ExponentMatrix, FieldElement, MdzvSpec, QuadField,
    SectorPoint, TailKind,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_POINTS_HEIGHT: u32 = 40;
const MAX_BOUND: u64 = 3000;

/// `d = 1` selects ℚ.
fn field(d: i32) -> Result<QuadField, String> {
    if d == 1 {
        Ok(QuadField::rationals())
    } else {
        QuadField::quadratic(d.into()).map_err(|e| e.to_string())
    }
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Plane coordinates: `σ₁` for imaginary fields, `(σ₁, σ₂)` for real ones.
fn plot_point(k: QuadField, a: FieldElement) -> [f64; 2] {
    let e = k.embeddings(a);
    if k.is_imaginary() {
        [e[0].re, e[0].im]
    } else if k.is_rational() {
        [e[0].re, 0.0]
    } else {
        [e[0].re, e[1].re]
    }
}

pub fn decomposition_json(d: i32, height: u32) -> Result<String, String> {
    let k = field(d)?;
    let dec = fundamental_domain(k).map_err(|e| e.to_string())?;
    let height = height.clamp(1, MAX_POINTS_HEIGHT);
    let cones: Vec<Value> = dec
        .cones
        .iter()
        .zip(&dec.signs)
        .map(|(c, &sign)| {
            let points: Vec<[f64; 2]> =
                c.enumerate_points(height.into()).filter_map(|p| p.ok()).map(|(a, _)| plot_point(k, a)).collect();
            let gens: Vec<[i64; 2]> = c.generators().iter().map(|g| [g.x, g.y]).collect();
            let rays: Vec<[f64; 2]> = c.generators().iter().map(|&g| plot_point(k, g)).collect();
            json!({ "generators": gens, "rays": rays, "sign": sign, "points": points })
        })
        .collect();
    let out = json!({
        "field": k.to_string(),
        "discriminant": k.discriminant(),
        "axes": if k.is_imaginary() { ["Re σ₁", "Im σ₁"] } else { ["σ₁", "σ₂"] },
        "cones": cones,
    });
    Ok(out.to_string())
}

fn parse_cones(k: QuadField, text: &str) -> Result<Vec<Cone>, String> {
    let raw: Vec<Vec<[i64; 2]>> = serde_json::from_str(text).map_err(|e| format!("cones: {e}"))?;
    raw.into_iter()
        .map(|gens| Cone::new(k, gens.into_iter().map(|[x, y]| FieldElement::new(x, y)).collect()).map_err(|e| e.to_string()))
        .collect()
}

/// `gens` is a JSON list of `[x, y]`; `t` holds `(re, im)` per embedding.
pub fn f0_json(d: i32, gens: &str, t: &[f64], bound: u32) -> Result<String, String> {
    let k = field(d)?;
    let cone = parse_cones(k, &format!("[{gens}]"))?.remove(0);
    if t.len() != 2 * k.degree() {
        return Err(format!("expected {} numbers for t", 2 * k.degree()));
    }
    let t = SectorPoint::new(t.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
    let params = EvalParams::with_bound(u64::from(bound).clamp(1, MAX_BOUND));
    let sum = f0_sum(&cone, &t, &params).map_err(|e| e.to_string())?;
    let product = f0_product(&cone, &t).map_err(|e| e.to_string())?;
    let out = json!({
        "sum": pair(sum.value),
        "product": pair(product),
        "difference": (sum.value - product).norm(),
        "tail_bound": sum.tail_bound,
        "terms": sum.terms_used,
    });
    Ok(out.to_string())
}

/// `cones` is a JSON list of generator lists; `exponents` has one row per embedding.
pub fn evaluate_json(d: i32, cones: &str, exponents: &str, bound: u32) -> Result<String, String> {
    let k = field(d)?;
    let cones = parse_cones(k, cones)?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(exponents).map_err(|e| format!("exponents: {e}"))?;
    let exps = ExponentMatrix::from_real_rows(&rows).map_err(|e| e.to_string())?;
    let params = EvalParams::with_bound(u64::from(bound).clamp(1, MAX_BOUND));
    let spec = MdzvSpec::new(k, cones, exps).map_err(|e| e.to_string())?.with_params(params);
    let r = mdzv_eval(&spec).map_err(|e| e.to_string())?;
    let out = json!({
        "value": pair(r.value),
        "tail_bound": r.tail_bound.is_finite().then_some(r.tail_bound),
        "tail_kind": match r.tail_kind {
            TailKind::Rigorous => "rigorous",
            TailKind::Extrapolated => "extrapolated",
            TailKind::Quadrature => "quadrature",
            TailKind::Unbounded => "unbounded",
        },
        "terms": r.terms_used,
        "converged": r.converged,
    });
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn decompose(d: i32, height: u32) -> Result<String, JsError> {
    decomposition_json(d, height).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn f0_check(d: i32, gens: &str, t: &[f64], bound: u32) -> Result<String, JsError> {
    f0_json(d, gens, t, bound).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn evaluate(d: i32, cones: &str, exponents: &str, bound: u32) -> Result<String, JsError> {
    evaluate_json(d, cones, exponents, bound).map_err(|e| JsError::new(&e))
}
