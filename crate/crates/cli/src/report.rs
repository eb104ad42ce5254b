//! JSON shapes shared by the subcommands. Rationals are strings, floats are
//! rounded to 12 significant digits.

use mpgraph::signability::MatrixClassification;
use mpgraph::RatMatrix;
use serde_json::{json, Value};

pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn matrix_json(m: &RatMatrix) -> Value {
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn classification_json(c: &MatrixClassification) -> Value {
    json!({
        "class": c.report.class.name(),
        "det": c.det.to_string(),
        "rank": c.rank,
        "invertible": c.invertible,
        "integral": c.integral,
        "positive_signature": c.report.positive,
        "negative_signature": c.report.negative,
        "pinv": matrix_json(&c.pinv),
    })
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}
