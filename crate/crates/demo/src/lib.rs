//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; failures come back as `{"error": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use skewcorner::constructions::{petrov_construction, PrimitiveStrategy};
use skewcorner::grid_sets::{skew_corner_violation, GridSet, Point};
use skewcorner::search::{max_skew_grid_exact, Budget, Witness};
use skewcorner::textio::{load, Certificate};

/// Largest side accepted by `search_grid`.
pub const MAX_SEARCH_N: u32 = 12;

fn grid_points(s: &GridSet) -> Value {
    s.points().map(|(x, y)| json!([x, y])).collect()
}

fn respond(r: skewcorner::Result<Value>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

/// Checks a grid set given in the `grid n` text format.
pub fn check_grid_json(text: &str) -> Value {
    let s = match load(text) {
        Ok(Certificate::Grid(s)) => s,
        Ok(other) => return json!({ "error": format!("expected a grid set, found `{}`", other.kind()) }),
        Err(e) => return json!({ "error": e.to_string() }),
    };
    let violation = skew_corner_violation(&s).map(|v| {
        let pts: Vec<Value> = v
            .points
            .iter()
            .filter_map(|p| match *p {
                Point::Grid(x, y) => Some(json!([x, y])),
                Point::Tri(..) => None,
            })
            .collect();
        json!({ "text": v.to_string(), "points": pts })
    });
    json!({
        "n": s.n(),
        "size": s.len(),
        "free": violation.is_none(),
        "violation": violation,
        "points": grid_points(&s),
    })
}

/// Exact maximum skew corner-free subset of `[n]^2` within a node budget.
pub fn search_grid_json(n: u32, max_nodes: u32) -> skewcorner::Result<Value> {
    if !(1..=MAX_SEARCH_N).contains(&n) {
        return Err(skewcorner::Error::Precondition(format!("n must lie in 1..={MAX_SEARCH_N}")));
    }
    let budget = Budget::new(u64::from(max_nodes), f64::INFINITY, 1)?;
    let r = max_skew_grid_exact(n, &budget)?;
    let points = match &r.witness {
        Witness::Grid(s) => grid_points(s),
        _ => Value::Null,
    };
    Ok(json!({
        "n": n,
        "value": r.best_value,
        "status": format!("{:?}", r.status),
        "nodes": r.nodes,
        "points": points,
    }))
}

/// Petrov's skew corner-free set in `[n]^2`; points are included only
/// when n is small enough to draw.
pub fn petrov_json(n: u32) -> skewcorner::Result<Value> {
    let s = petrov_construction(n, PrimitiveStrategy::BestOf)?;
    Ok(json!({
        "n": n,
        "size": s.len(),
        "ratio": s.len() as f64 / f64::from(n),
        "points": if n <= 200 { grid_points(&s) } else { Value::Null },
    }))
}

#[wasm_bindgen]
pub fn check_grid(text: &str) -> String {
    check_grid_json(text).to_string()
}

#[wasm_bindgen]
pub fn search_grid(n: u32, max_nodes: u32) -> String {
    respond(search_grid_json(n, max_nodes))
}

#[wasm_bindgen]
pub fn petrov(n: u32) -> String {
    respond(petrov_json(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_reports_violation() {
        let v = check_grid_json("grid 2\n1 1\n1 2\n2 1\n");
        assert_eq!(v["free"], false);
        assert_eq!(v["violation"]["points"].as_array().unwrap().len(), 3);
        assert_eq!(check_grid_json("grid 3\n1 1\n1 3\n")["free"], true);
        assert!(check_grid_json("grid 3\n1 x\n")["error"].as_str().unwrap().contains("line 2"));
    }

    #[test]
    fn search_and_petrov() {
        let v = search_grid_json(6, 1_000_000).unwrap();
        assert_eq!(v["status"], "Optimal");
        assert_eq!(v["points"].as_array().unwrap().len() as u64, v["value"].as_u64().unwrap());
        assert!(search_grid_json(40, 10).is_err());
        assert_eq!(search_grid_json(10, 5).unwrap()["status"], "TimedOut");
        let p = petrov_json(100).unwrap();
        assert!(p["size"].as_u64().unwrap() > 100);
    }
}
