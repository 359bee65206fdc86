//! Browser bindings for the demo page. Every export returns a JSON string;
//! the plain functions underneath are what the native tests exercise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semialg::decomp::{a_component, bruhat, cartan_kak, iwasawa_kau};
use semialg::kostant::{kostant_chars, kostant_member, random_rotation, ChamberPoint};
use semialg::parse::{parse_matrix, parse_tower};
use semialg::rootsys::{format_root, RootSystem, RootType};
use semialg::{Matrix, PuiseuxScalar, Scalar, TowerScalar, Truncation};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = rootSystem)]
pub fn root_system_js(kind: &str) -> Result<String, JsValue> {
    to_js(root_system(kind))
}

#[wasm_bindgen(js_name = kostantRegion)]
pub fn kostant_region_js(b: &str, samples: u32, seed: u64) -> Result<String, JsValue> {
    to_js(kostant_region(b, samples as usize, seed))
}

#[wasm_bindgen(js_name = decompose)]
pub fn decompose_js(kind: &str, field: &str, matrix: &str) -> Result<String, JsValue> {
    to_js(decompose(kind, field, matrix))
}

/// Roots in planar coordinates plus the cone data of a rank-2 system.
pub fn root_system(kind: &str) -> Result<Value, String> {
    let t: RootType = kind.parse().map_err(|e: semialg::Error| e.to_string())?;
    let sys = RootSystem::build(t).map_err(|e| e.to_string())?;
    if sys.rank != 2 {
        return Err(format!("{t} has rank {}, only rank 2 can be drawn", sys.rank));
    }
    let roots: Vec<Value> = sys
        .roots
        .iter()
        .map(|r| {
            json!({
                "label": format_root(r),
                "xy": sys.euclidean(r),
                "positive": sys.positive_roots.contains(r),
                "simple": sys.simple_roots.contains(r),
            })
        })
        .collect();
    let cone = sys.cone_data();
    let gamma: Vec<Value> = cone
        .gamma
        .iter()
        .map(|g| json!({"label": format_root(g), "xy": sys.euclidean(g)}))
        .collect();
    let eta = sys.eta_plus();
    let coeffs: Vec<String> = sys.eta_plus_expansion().iter().map(|c| c.to_string()).collect();
    Ok(json!({
        "type": t.to_string(),
        "gram": sys.gram,
        "weyl_order": sys.weyl().order(),
        "roots": roots,
        "gamma": gamma,
        "eta_plus": {"label": format_root(&eta), "xy": sys.euclidean(&eta), "gamma_coefficients": coeffs},
    }))
}

/// Coordinates of a trace-zero vector of `R³` in the plane `x + y + z = 0`.
fn plane(l: &[f64]) -> [f64; 2] {
    [
        (l[0] - l[1]) / 2f64.sqrt(),
        (l[0] + l[1] - 2.0 * l[2]) / 6f64.sqrt(),
    ]
}

fn log_diag(d: &[TowerScalar]) -> Vec<f64> {
    d.iter().map(|x| x.to_f64().ln()).collect()
}

/// The hexagon `W · log b` and sampled points `log a(k b)` for `b` in the
/// SL₃ chamber, given as its diagonal (`"4, 2, 1/8"`).
pub fn kostant_region(b: &str, samples: usize, seed: u64) -> Result<Value, String> {
    let d: Vec<TowerScalar> = b
        .split(',')
        .map(|s| parse_tower(s).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if d.len() != 3 {
        return Err(format!("expected 3 diagonal entries, got {}", d.len()));
    }
    let b = ChamberPoint::project(&Matrix::diag(&d)).map_err(|e| e.to_string())?;
    let lb = log_diag(&b.diagonal());
    let mut hull: Vec<[f64; 2]> = [[0, 1, 2], [1, 0, 2], [1, 2, 0], [2, 1, 0], [2, 0, 1], [0, 2, 1]]
        .iter()
        .map(|p| plane(&p.map(|i| lb[i])))
        .collect();
    hull.sort_by(|u, v| u[1].atan2(u[0]).total_cmp(&v[1].atan2(v[0])));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(samples);
    let mut violations = 0;
    for _ in 0..samples {
        let k: Matrix<TowerScalar> = random_rotation(3, &mut rng);
        let a = a_component(&k.mul(b.matrix()), &()).map_err(|e| e.to_string())?;
        let chamber = ChamberPoint::project(&a).map_err(|e| e.to_string())?;
        let member = kostant_member(&chamber, &b).map_err(|e| e.to_string())?;
        violations += !member as usize;
        points.push(json!({"xy": plane(&log_diag(&a.diagonal())), "member": member}));
    }
    Ok(json!({
        "b": b.diagonal().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "characters": kostant_chars(3).map_err(|e| e.to_string())?,
        "hull": hull,
        "samples": points,
        "violations": violations,
    }))
}

fn factors<S: Scalar>(parts: &[(&str, &Matrix<S>)], approx: bool) -> Value {
    let mut out = serde_json::Map::new();
    for (name, m) in parts {
        let mut block = json!({"exact": m.to_strings()});
        if approx {
            let f: Vec<Vec<f64>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_f64()).collect()).collect();
            block["approx"] = json!(f);
        }
        out.insert(name.to_string(), block);
    }
    Value::Object(out)
}

fn decompose_in<S: semialg::decomp::SpectralField + semialg::parse::ParseScalar>(
    kind: &str,
    text: &str,
    prec: &S::Precision,
    approx: bool,
) -> Result<Value, String> {
    let g: Matrix<S> = parse_matrix(text, prec).map_err(|e| e.to_string())?;
    let e = |e: semialg::Error| e.to_string();
    Ok(match kind {
        "iwasawa" => {
            let r = iwasawa_kau(&g, prec).map_err(e)?;
            factors(&[("k", &r.k), ("a", &r.a), ("u", &r.u)], approx)
        }
        "cartan" => {
            let r = cartan_kak(&g, prec).map_err(e)?;
            factors(&[("k1", &r.k1), ("a", &r.a), ("k2", &r.k2)], approx)
        }
        "bruhat" => {
            let r = bruhat(&g, prec).map_err(e)?;
            factors(&[("b1", &r.b1), ("w", &r.w), ("b2", &r.b2)], approx)
        }
        other => return Err(format!("unknown decomposition '{other}'")),
    })
}

/// Iwasawa, Cartan or Bruhat factors of a matrix typed in the CLI grammar.
pub fn decompose(kind: &str, field: &str, matrix: &str) -> Result<Value, String> {
    let factors = match field {
        "tower" => decompose_in::<TowerScalar>(kind, matrix, &(), true)?,
        "puiseux" => decompose_in::<PuiseuxScalar>(kind, matrix, &Truncation::default(), false)?,
        other => return Err(format!("unknown field '{other}'")),
    };
    Ok(json!({"kind": kind, "field": field, "factors": factors}))
}
