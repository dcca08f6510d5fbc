//! Browser demo: facility location on plane points, the lower-bound gap
//! curve and a set cover algorithm comparison. Every entry point takes and
//! returns JSON strings.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use wasm_bindgen::prelude::*;

use unicover::facility::{solve_fl, split_clients, FlInstance};
use unicover::verify::{brute_universal, lb_instance, random, ratio_report, search_space, Algorithm, Case, Problem};

/// Brute-force optima are only attempted below this many mappings.
const DEMO_BRUTE_CAP: f64 = 200_000.0;

#[derive(Deserialize)]
struct Client {
    x: f64,
    y: f64,
    p: f64,
}

#[derive(Deserialize)]
struct Facility {
    x: f64,
    y: f64,
    open_cost: f64,
}

#[derive(Deserialize)]
struct Points {
    clients: Vec<Client>,
    facilities: Vec<Facility>,
}

#[derive(Serialize)]
struct FacilityResult {
    assignment: Vec<usize>,
    open: Vec<usize>,
    big: Vec<usize>,
    cost: f64,
    lp_value: f64,
    brute_cost: Option<f64>,
}

pub fn facility_on_points(points_json: &str) -> Result<String, String> {
    let pts: Points = serde_json::from_str(points_json).map_err(|e| e.to_string())?;
    if pts.clients.is_empty() {
        return Err("place at least one client".into());
    }
    let dist = pts.clients.iter().map(|c| pts.facilities.iter().map(|f| (c.x - f.x).hypot(c.y - f.y)).collect()).collect();
    let probs = pts.clients.iter().map(|c| c.p).collect();
    let open_cost = pts.facilities.iter().map(|f| f.open_cost).collect();
    let inst = FlInstance::new(probs, open_cost, dist, true).map_err(|e| e.to_string())?;
    let (mapping, frac) = solve_fl(&inst).map_err(|e| e.to_string())?;
    let cost = mapping.expected_cost(&inst).map_err(|e| e.to_string())?;
    let mut open = mapping.assignment.clone();
    open.sort_unstable();
    open.dedup();
    let problem = Problem::Facility(inst.clone());
    let brute_cost = if search_space(&problem) <= DEMO_BRUTE_CAP {
        let d = inst.distribution().map_err(|e| e.to_string())?;
        Some(brute_universal(&problem, &d).map_err(|e| e.to_string())?.1)
    } else {
        None
    };
    let result = FacilityResult { assignment: mapping.assignment, open, big: split_clients(&frac).0, cost, lp_value: frac.value, brute_cost };
    Ok(serde_json::to_string(&result).expect("result serializes"))
}

pub fn lower_bound_curve(big_m: f64, max_n: usize) -> Result<String, String> {
    let mut rows = Vec::new();
    let mut n = 4;
    while n <= max_n.max(4) {
        let lb = lb_instance(n, big_m).map_err(|e| e.to_string())?;
        rows.push(json!({
            "n": n,
            "singleton_cost": lb.singleton_cost,
            "big_cost": lb.big_cost,
            "single_branch_ratio": lb.single_branch_ratio().map_err(|e| e.to_string())?,
            "whole_branch_ratio": lb.whole_branch_ratio().map_err(|e| e.to_string())?,
        }));
        n *= 2;
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

pub fn set_cover_comparison(n: usize, m: usize, scenarios: usize, seed: u32) -> Result<String, String> {
    if !(1..=10).contains(&n) || !(1..=10).contains(&m) {
        return Err("keep n and m between 1 and 10".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let inst = random::set_cover(&mut rng, n, m, 1).map_err(|e| e.to_string())?;
    let dist = random::scenarios(&mut rng, n, scenarios).map_err(|e| e.to_string())?;
    let sets: Vec<_> = inst.sets().iter().map(|s| json!({"id": s.id, "cost": s.cost, "elements": s.elements.to_vec()})).collect();
    let problem = Problem::Cover { inst: inst.clone(), conn: None };
    let brute = search_space(&problem) <= DEMO_BRUTE_CAP;
    let cases = [Case::Cover { name: "random".into(), inst, dist, conn: None }];
    let report = ratio_report(&cases, &[Algorithm::LpRound, Algorithm::Greedy, Algorithm::FreqRound], seed as u64, brute);
    Ok(json!({"sets": sets, "rows": report.rows}).to_string())
}

#[wasm_bindgen(js_name = facilityOnPoints)]
pub fn facility_on_points_js(points_json: &str) -> Result<String, JsValue> {
    facility_on_points(points_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = lowerBoundCurve)]
pub fn lower_bound_curve_js(big_m: f64, max_n: usize) -> Result<String, JsValue> {
    lower_bound_curve(big_m, max_n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = setCoverComparison)]
pub fn set_cover_comparison_js(n: usize, m: usize, scenarios: usize, seed: u32) -> Result<String, JsValue> {
    set_cover_comparison(n, m, scenarios, seed).map_err(|e| JsValue::from_str(&e))
}
