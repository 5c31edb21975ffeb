//! Browser bindings for three operations: planar hulls, the double-cone swap,
//! and round-trip decoding of a small metric space. Inputs and outputs are
//! JSON strings with rationals written as `"p/q"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use simplexforge::codec::{
    cycle_depth, decode_all, default_neighborhood, detect_structure, standard_phi, DetectMode, PhiParams,
    ROUNDTRIP_GUARD,
};
use simplexforge::cone::{double_cone_swap, iterated_cone, swap_parameters};
use simplexforge::geometry::{extreme_points, RationalPoint, VPolytope};
use simplexforge::metric::{validate_metric, FiniteMetricSpace};
use simplexforge::rational::parse_list;
use simplexforge::sext::Enumeration;
use simplexforge::Rational;
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct HullOut {
    extreme: Vec<usize>,
    points: Vec<[Rational; 2]>,
}

/// Extreme points of planar points in the unit square, as input indices in
/// counter-clockwise order.
pub fn hull_json(points: &str) -> Out {
    let raw: Vec<[Rational; 2]> = serde_json::from_str(points).map_err(err)?;
    if raw.is_empty() {
        return Err("no points".into());
    }
    let pts = raw
        .iter()
        .map(|p| RationalPoint::new(p.to_vec()))
        .collect::<simplexforge::Result<Vec<_>>>()
        .map_err(err)?;
    let poly = VPolytope::from_points(pts).map_err(err)?;
    let ext = extreme_points(&poly);
    let mut extreme: Vec<usize> = ext.labels().iter().filter_map(|l| poly.index_of(l)).collect();
    // Sort by angle around the centroid, exactly, for drawing.
    let n = Rational::from_integer(extreme.len() as i64);
    let cx: Rational = extreme.iter().map(|&i| raw[i][0].clone()).sum::<Rational>() / n.clone();
    let cy: Rational = extreme.iter().map(|&i| raw[i][1].clone()).sum::<Rational>() / n;
    let half = |i: usize| raw[i][1] < cy || (raw[i][1] == cy && raw[i][0] < cx);
    extreme.sort_by(|&a, &b| {
        half(a).cmp(&half(b)).then_with(|| {
            let cross = (&raw[a][0] - &cx) * (&raw[b][1] - &cy) - (&raw[a][1] - &cy) * (&raw[b][0] - &cx);
            Rational::zero().cmp(&cross)
        })
    });
    serde_json::to_string(&HullOut { extreme, points: raw }).map_err(err)
}

#[derive(Serialize)]
struct SwapOut {
    gamma: Rational,
    delta: Rational,
    point: Vec<Rational>,
    image: Vec<Rational>,
    back: Vec<Rational>,
}

/// Swaps the two apexes of a double cone over `[0, 1]` with apexes over `s1`
/// and `s2`, at the point with cone parameters `(alpha, beta)` over base `x`.
pub fn swap_json(alpha: &str, beta: &str, s1: &str, s2: &str, x: &str) -> Out {
    let v = parse_list(&[alpha, beta, s1, s2, x]).map_err(err)?;
    let [alpha, beta, s1, s2, x] = <[Rational; 5]>::try_from(v).expect("five values");
    let pt = |c: Vec<Rational>| RationalPoint::new(c).map_err(err);
    let seg = VPolytope::from_points(vec![pt(vec![Rational::zero()])?, pt(vec![Rational::one()])?]).map_err(err)?;
    let c12 = iterated_cone(
        &seg,
        &[
            (pt(vec![s1.clone()])?, "c1".into()),
            (pt(vec![s2.clone()])?, "c2".into()),
        ],
    )
    .map_err(err)?;
    let one = Rational::one();
    // (1 − β)((1 − α)x + α·c(s1)) + β·c'(s2), coordinates (base, c1, c2).
    let nb = &one - &beta;
    let point = vec![
        &nb * &(&(&one - &alpha) * &x + &alpha * &s1) + &beta * &s2,
        &nb * &alpha,
        beta.clone(),
    ];
    let p = pt(point.clone())?;
    let image = double_cone_swap(&c12, &p).map_err(err)?;
    let c21 = simplexforge::cone::swap_cone(&c12).map_err(err)?;
    let back = double_cone_swap(&c21, &image).map_err(err)?;
    let (gamma, delta) = swap_parameters(&alpha, &beta);
    serde_json::to_string(&SwapOut {
        gamma,
        delta,
        point,
        image: image.into_coords(),
        back: back.into_coords(),
    })
    .map_err(err)
}

#[derive(Deserialize)]
struct SpaceIn {
    labels: Vec<String>,
    d: Vec<Vec<Rational>>,
}

#[derive(Serialize)]
struct Row {
    depth: usize,
    pairs: Vec<PairOut>,
}

#[derive(Serialize)]
struct PairOut {
    pair: [String; 2],
    interval: simplexforge::codec::Interval,
    true_d: Rational,
    contains: bool,
}

#[derive(Serialize)]
struct DecodeOut {
    full_depth: usize,
    rows: Vec<Row>,
}

/// Strict-mode decoding of every pair at each depth from 1 to `max_depth`
/// (capped at one full cycle of the widths 1/2, 1/4, 1/8).
pub fn decode_json(space: &str, max_depth: usize) -> Out {
    let raw: SpaceIn = serde_json::from_str(space).map_err(err)?;
    let x = Arc::new(validate_metric(raw.labels, raw.d, true).map_err(err)?);
    if x.len() > ROUNDTRIP_GUARD {
        return Err(format!("at most {ROUNDTRIP_GUARD} points"));
    }
    decode_rows(&x, max_depth)
}

fn decode_rows(x: &Arc<FiniteMetricSpace>, max_depth: usize) -> Out {
    let d = Enumeration::full(x);
    let widths = vec![Rational::new(1, 2), Rational::new(1, 4), Rational::new(1, 8)];
    let full = cycle_depth(x, &d, &widths).map_err(err)?;
    let mut rows = Vec::new();
    for depth in 1..=max_depth.min(full) {
        let phi = standard_phi(x, &d, None, &PhiParams::new(widths.clone(), depth)).map_err(err)?;
        let s = detect_structure(&phi, DetectMode::Strict).map_err(err)?;
        let nb = default_neighborhood(&phi, &s).map_err(err)?;
        let pairs = decode_all(&phi, &s, &nb)
            .map_err(err)?
            .into_iter()
            .map(|e| PairOut {
                pair: e.pair,
                interval: e.interval,
                true_d: e.true_d,
                contains: e.contains,
            })
            .collect();
        rows.push(Row { depth, pairs });
    }
    serde_json::to_string(&DecodeOut { full_depth: full, rows }).map_err(err)
}

#[wasm_bindgen]
pub fn hull(points: &str) -> Result<String, JsValue> {
    hull_json(points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn swap(alpha: &str, beta: &str, s1: &str, s2: &str, x: &str) -> Result<String, JsValue> {
    swap_json(alpha, beta, s1, s2, x).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decode(space: &str, max_depth: usize) -> Result<String, JsValue> {
    decode_json(space, max_depth).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn hull_drops_interior_points() {
        let out: Value =
            serde_json::from_str(&hull_json(r#"[["0","0"],["1","0"],["1/2","1/4"],["1","1"],["0","1"]]"#).unwrap())
                .unwrap();
        assert_eq!(out["extreme"], serde_json::json!([3, 4, 0, 1]));
    }

    #[test]
    fn swap_matches_closed_form() {
        let out: Value = serde_json::from_str(&swap_json("1/2", "1/2", "1/4", "3/4", "0").unwrap()).unwrap();
        assert_eq!(out["gamma"], "1/4");
        assert_eq!(out["delta"], "2/3");
        assert_eq!(out["image"], serde_json::json!(["7/16", "1/2", "1/4"]));
        assert_eq!(out["back"], out["point"]);
    }

    #[test]
    fn decode_narrows_to_the_distance() {
        let space = r#"{"labels":["a","b"],"d":[["0","1/2"],["1/2","0"]]}"#;
        let out: Value = serde_json::from_str(&decode_json(space, 99).unwrap()).unwrap();
        let rows = out["rows"].as_array().unwrap();
        assert_eq!(rows.len(), out["full_depth"].as_u64().unwrap() as usize);
        let last = &rows.last().unwrap()["pairs"][0];
        assert_eq!(last["contains"], true);
        assert!(decode_json(r#"{"labels":["a","b"],"d":[["0","2"],["2","0"]]}"#, 3).is_err());
    }
}
