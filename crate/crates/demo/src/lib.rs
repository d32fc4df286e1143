//! Browser bindings. Every export takes plain strings and numbers and returns
//! a JSON string; failures come back as `{"error": "..."}`.

use glasner_core::cayley::SemigroupPresentation;
use glasner_core::experiments::trial_rng;
use glasner_core::io::point_json;
use glasner_core::sampling::{random_rational_set, Denominators, RationalSetSpec};
use glasner_core::search::{
    find_group_dilation, find_scalar_dilation, Dilator, SearchBudget, SearchOutcome,
};
use glasner_core::walk::{
    decay_profile, uniform_plateau, MonteCarloConfig, WalkMeasure, WalkMethod,
};
use glasner_core::{IntMatrix, TorusPoint, TorusPointSet};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub const MAX_SCALAR_BUDGET: u64 = 20_000;
pub const MAX_RADIUS: usize = 10;
pub const MAX_WALK_STEPS: usize = 200;

fn fraction(t: &str) -> Result<(i64, i64), String> {
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n = n
        .trim()
        .parse::<i64>()
        .map_err(|_| format!("bad numerator in {t:?}"))?;
    let d = d
        .trim()
        .parse::<i64>()
        .map_err(|_| format!("bad denominator in {t:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {t:?}"));
    }
    Ok((n, d))
}

/// One point per line, coordinates separated by commas or spaces.
pub fn parse_points(text: &str, dim: usize) -> Result<TorusPointSet, String> {
    let mut pts = Vec::new();
    for (i, line) in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
    {
        let coords = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(fraction)
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != dim {
            return Err(format!(
                "line {}: expected {dim} coordinates, found {}",
                i + 1,
                coords.len()
            ));
        }
        pts.push(TorusPoint::from_fractions(&coords).map_err(|e| e.to_string())?);
    }
    TorusPointSet::new_dedup(dim, pts).map_err(|e| e.to_string())
}

/// `k` rational points clustered in a box of side `width`, one per line.
pub fn random_cluster_text(dim: usize, k: usize, width: f64, seed: u64) -> Result<String, String> {
    let spec = RationalSetSpec {
        dim,
        k,
        width,
        denominators: Denominators::Prime(1000, 100_000),
        distinct_coordinates: false,
    };
    let y = random_rational_set(&mut trial_rng(seed, 0), &spec).map_err(|e| e.to_string())?;
    Ok(y.points()
        .iter()
        .map(|p| {
            p.as_exact()
                .expect("exact")
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect::<Vec<_>>()
        .join("\n"))
}

fn image(y: &TorusPointSet, g: &IntMatrix) -> Vec<Vec<f64>> {
    y.points()
        .iter()
        .map(|p| p.apply(g).expect("dimensions match").to_f64())
        .collect()
}

fn outcome_json(y: &TorusPointSet, o: &SearchOutcome, g: Option<IntMatrix>) -> Value {
    json!({
        "found": o.found,
        "dilator": o.dilator,
        "scanned": o.scanned,
        "eps": o.eps,
        "stop": o.stop,
        "resolution": o.verdict.as_ref().map(|v| v.resolution),
        "points": y.to_f64_rows(),
        "image": g.map(|g| image(y, &g)),
    })
}

pub fn scalar_search_json(points: &str, eps: f64, n_max: u64) -> Result<Value, String> {
    let y = parse_points(points, 1)?;
    let budget = SearchBudget {
        n_max: n_max.clamp(1, MAX_SCALAR_BUDGET),
        ..SearchBudget::default()
    };
    let o = find_scalar_dilation(&y, eps, &budget).map_err(|e| e.to_string())?;
    let g = match &o.dilator {
        Some(Dilator::Scalar { n }) => Some(IntMatrix::from_i64(&[vec![*n as i64]])),
        _ => None,
    };
    Ok(outcome_json(&y, &o, g))
}

pub fn group_search_json(points: &str, eps: f64, radius: usize) -> Result<Value, String> {
    let y = parse_points(points, 2)?;
    let s = SemigroupPresentation::sl2_elementary();
    let budget = SearchBudget {
        ball_radius: radius.min(MAX_RADIUS),
        ..SearchBudget::default()
    };
    let o = find_group_dilation(&y, &s, eps, &budget).map_err(|e| e.to_string())?;
    let g = match &o.dilator {
        Some(Dilator::Matrix { word, .. }) => Some(
            word.iter()
                .fold(IntMatrix::identity(2), |acc, &i| &acc * &s.generators()[i]),
        ),
        _ => None,
    };
    Ok(outcome_json(&y, &o, g))
}

pub fn walk_decay_json(x: &str, n_max: usize) -> Result<Value, String> {
    let coords = x
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(fraction)
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != 2 {
        return Err("the walk lives on the 2-torus: give two coordinates".into());
    }
    let x = TorusPoint::from_fractions(&coords).map_err(|e| e.to_string())?;
    let mu = WalkMeasure::uniform(
        SemigroupPresentation::sl2_elementary()
            .generators()
            .to_vec(),
    )
    .map_err(|e| e.to_string())?;
    let mc = MonteCarloConfig {
        samples: 1,
        seed: 0,
    };
    let p = decay_profile(
        &mu,
        &x,
        &[1, 0],
        n_max.clamp(1, MAX_WALK_STEPS),
        WalkMethod::ExactTree,
        mc,
    )
    .map_err(|e| e.to_string())?;
    Ok(json!({
        "q": p.q,
        "moduli": p.rows.iter().map(|r| r.modulus).collect::<Vec<_>>(),
        "plateau": p.plateau(),
        "uniform_plateau": uniform_plateau(p.q, 2),
        "start": point_json(&x),
    }))
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Smallest `n ≤ n_max` with `nY` ε-dense in the circle.
#[wasm_bindgen]
pub fn scalar_search(points: &str, eps: f64, n_max: u32) -> String {
    respond(scalar_search_json(points, eps, n_max.into()))
}

/// First word over the SL2 elementary generators, by BFS, with `gY` ε-dense.
#[wasm_bindgen]
pub fn group_search(points: &str, eps: f64, radius: u32) -> String {
    respond(group_search_json(points, eps, radius as usize))
}

/// `|Fourier coefficient|` at frequency `(1, 0)` of the elementary walk from `x`.
#[wasm_bindgen]
pub fn walk_decay(x: &str, n_max: u32) -> String {
    respond(walk_decay_json(x, n_max as usize))
}

#[wasm_bindgen]
pub fn random_cluster(dim: u32, k: u32, width: f64, seed: u32) -> String {
    match random_cluster_text(dim as usize, k as usize, width, seed.into()) {
        Ok(t) => t,
        Err(e) => json!({ "error": e }).to_string(),
    }
}
