//! Browser bindings: points in the affine chart `z = 1` of the plane, analyzed
//! over GF(31991). Every export takes and returns JSON strings.

use serde::{Deserialize, Serialize};
use subset_syzygy::liaison::{base_locus_gcd, degree_matrix, DegreeMatrix};
use subset_syzygy::search::{self, CaseLabel, SubsetChain, SubsetRecord};
use subset_syzygy::{graded_betti, BettiTable, FieldSpec, HilbertTable, PointSet};
use wasm_bindgen::prelude::*;

/// Largest point set the page will analyze.
pub const MAX_POINTS: usize = 40;

/// Subsets enumerated at most, before giving up.
pub const ENUMERATION_BUDGET: u128 = 20_000;

#[derive(Deserialize)]
struct Click {
    x: i64,
    y: i64,
}

#[derive(Serialize)]
pub struct Analysis {
    pub hilbert: HilbertTable,
    pub betti: BettiTable,
    pub diagram: String,
    pub label: CaseLabel,
    pub degree_matrix: DegreeMatrix,
    /// Degree of the common factor of `I(X)_l`.
    pub gcd_degree: Option<usize>,
}

#[derive(Serialize)]
pub struct Enumeration {
    pub records: Vec<SubsetRecord>,
    /// Subsets whose multiplication ranks equal the prediction.
    pub winners: usize,
}

/// Parses `[{"x": 3, "y": -1}, ...]` into points `[x : y : 1]`.
pub fn parse_points(json: &str) -> Result<PointSet, String> {
    let clicks: Vec<Click> = serde_json::from_str(json).map_err(|e| e.to_string())?;
    if clicks.is_empty() {
        return Err("place at least one point".into());
    }
    if clicks.len() > MAX_POINTS {
        return Err(format!("at most {MAX_POINTS} points"));
    }
    let coords: Vec<Vec<i64>> = clicks.iter().map(|c| vec![c.x, c.y, 1]).collect();
    PointSet::new(FieldSpec::default(), 2, &coords).map_err(|e| e.to_string())
}

pub fn analysis(x: &PointSet) -> Result<Analysis, String> {
    let label = search::classify_case(x).map_err(|e| e.to_string())?;
    let hilbert = x.hilbert();
    let betti = graded_betti(x);
    let gcd_degree = if hilbert.ideal_dim(2, label.l) > 0 {
        Some(
            base_locus_gcd(x, label.l)
                .map_err(|e| e.to_string())?
                .gcd_degree,
        )
    } else {
        None
    };
    Ok(Analysis {
        degree_matrix: degree_matrix(&betti).map_err(|e| e.to_string())?,
        diagram: betti.diagram(),
        hilbert,
        betti,
        label,
        gcd_degree,
    })
}

pub fn chain(x: &PointSet, m: usize) -> Result<SubsetChain, String> {
    search::find_subset(x, m).map_err(|e| e.to_string())
}

pub fn enumeration(x: &PointSet, m: usize) -> Result<Enumeration, String> {
    let records = search::enumerate_subsets(x, m, ENUMERATION_BUDGET).map_err(|e| e.to_string())?;
    let winners = records
        .iter()
        .filter(|r| r.achieves_prediction == Some(true))
        .count();
    Ok(Enumeration { records, winners })
}

fn respond<T: Serialize>(result: Result<T, String>) -> Result<String, JsValue> {
    result
        .map(|v| serde_json::to_string(&v).expect("serializable"))
        .map_err(|e| JsValue::from_str(&e))
}

/// Hilbert function, Betti table, case label and degree matrix.
#[wasm_bindgen]
pub fn analyze(points_json: &str) -> Result<String, JsValue> {
    respond(parse_points(points_json).and_then(|x| analysis(&x)))
}

/// Removal chain down to `m` points realizing the predicted ranks.
#[wasm_bindgen]
pub fn find_subset(points_json: &str, m: usize) -> Result<String, JsValue> {
    respond(parse_points(points_json).and_then(|x| chain(&x, m)))
}

/// Every `m`-subset with its multiplication ranks.
#[wasm_bindgen]
pub fn enumerate(points_json: &str, m: usize) -> Result<String, JsValue> {
    respond(parse_points(points_json).and_then(|x| enumeration(&x, m)))
}
