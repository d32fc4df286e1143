//! JSON and CSV formats.
//!
//! - point set: `{dim, mode, points}` with `[num, den]` per coordinate in
//!   exact mode and a number per coordinate in float mode;
//! - integer matrix: array of rows, entries as JSON integers or decimal strings;
//! - polynomial matrix: `{dim, degree, coeffs: [matrix per degree]}`;
//! - presentation: `{dim, generators: [matrix], assume_unipotent}`;
//! - walk measure: `{support: [matrix], weights: [[num, den]]}`, weights optional (uniform).
//!
//! Every structured output carries a `schema` field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cayley::SemigroupPresentation;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::polymat::IntPolyMatrix;
use crate::search::SearchOutcome;
use crate::torus::{DensityVerdict, Mode, TorusPoint, TorusPointSet};
use crate::walk::{DecayProfile, WalkMeasure};

pub const POINT_SET_SCHEMA: &str = "glasner-lab/point-set/v1";
pub const VERDICT_SCHEMA: &str = "glasner-lab/verdict/v1";
pub const OUTCOME_SCHEMA: &str = "glasner-lab/outcome/v1";
pub const DECAY_CSV_SCHEMA: &str = "glasner-lab/decay-csv/v1";

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(parse_err(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("{s:?} is not an integer"))),
        other => Err(parse_err(format!("expected integer, found {other}"))),
    }
}

/// Small integers as JSON numbers, large ones as strings.
pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => json!(x.to_string()),
    }
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| parse_err(format!("expected [num, den], found {v}")))?;
    let den = parse_int(&pair[1])?;
    if den.is_zero() {
        return Err(parse_err("zero denominator"));
    }
    Ok(BigRational::new(parse_int(&pair[0])?, den))
}

fn rational_json(x: &BigRational) -> Value {
    json!([int_json(x.numer()), int_json(x.denom())])
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| parse_err(format!("missing field {name:?}")))
}

fn usize_field(v: &Value, name: &str) -> Result<usize> {
    field(v, name)?
        .as_u64()
        .and_then(|x| x.to_usize())
        .ok_or_else(|| parse_err(format!("{name:?} must be a nonnegative integer")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub fn point_set_from_json(v: &Value) -> Result<TorusPointSet> {
    let dim = usize_field(v, "dim")?;
    let mode = match field(v, "mode")?.as_str() {
        Some("exact") => Mode::Exact,
        Some("float") => Mode::Float,
        _ => return Err(parse_err("mode must be \"exact\" or \"float\"")),
    };
    let pts = array(field(v, "points")?, "points")?
        .iter()
        .map(|p| {
            let coords = array(p, "point")?;
            if coords.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: coords.len(),
                });
            }
            match mode {
                Mode::Exact => Ok(TorusPoint::exact(
                    coords.iter().map(parse_rational).collect::<Result<_>>()?,
                )),
                Mode::Float => TorusPoint::float(
                    coords
                        .iter()
                        .map(|c| {
                            c.as_f64()
                                .ok_or_else(|| parse_err(format!("{c} is not a number")))
                        })
                        .collect::<Result<_>>()?,
                ),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    TorusPointSet::new(dim, pts)
}

pub fn point_json(p: &TorusPoint) -> Value {
    match p {
        TorusPoint::Exact(c) => Value::Array(c.iter().map(rational_json).collect()),
        TorusPoint::Float(c) => json!(c),
    }
}

pub fn point_set_to_json(y: &TorusPointSet) -> Value {
    json!({
        "schema": POINT_SET_SCHEMA,
        "dim": y.dim(),
        "mode": match y.mode() { Mode::Exact => "exact", Mode::Float => "float" },
        "points": y.points().iter().map(point_json).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let rows = array(v, "matrix")?
        .iter()
        .map(|r| {
            array(r, "matrix row")?
                .iter()
                .map(parse_int)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(parse_err("empty matrix"));
    }
    IntMatrix::from_rows(rows)
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int_json).collect()))
            .collect(),
    )
}

pub fn poly_matrix_from_json(v: &Value) -> Result<IntPolyMatrix> {
    let dim = usize_field(v, "dim")?;
    let coeffs = array(field(v, "coeffs")?, "coeffs")?
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    if coeffs.iter().any(|c| c.rows() != dim || c.cols() != dim) {
        return Err(parse_err(format!(
            "coefficient matrices must be {dim}x{dim}"
        )));
    }
    if let Some(deg) = v.get("degree").and_then(Value::as_u64) {
        if deg as usize + 1 != coeffs.len() {
            return Err(parse_err(format!(
                "degree {deg} does not match {} coefficient matrices",
                coeffs.len()
            )));
        }
    }
    IntPolyMatrix::new(coeffs)
}

pub fn poly_matrix_to_json(a: &IntPolyMatrix) -> Value {
    json!({
        "dim": a.dim(),
        "degree": a.degree(),
        "coeffs": a.coeffs().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// With `assume_unipotent`, every generator must pass the exact unipotency test.
pub fn presentation_from_json(v: &Value) -> Result<SemigroupPresentation> {
    let dim = usize_field(v, "dim")?;
    let gens = array(field(v, "generators")?, "generators")?
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    let s = SemigroupPresentation::new(dim, gens)?;
    if v.get("assume_unipotent")
        .and_then(Value::as_bool)
        .unwrap_or(false)
        && !s.all_unipotent()
    {
        return Err(Error::NotUnipotent);
    }
    Ok(s)
}

pub fn presentation_to_json(s: &SemigroupPresentation) -> Value {
    json!({
        "dim": s.dim(),
        "generators": s.generators().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "assume_unipotent": s.all_unipotent(),
    })
}

pub fn measure_from_json(v: &Value) -> Result<WalkMeasure> {
    let support = array(field(v, "support")?, "support")?
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    match v.get("weights") {
        None | Some(Value::Null) => WalkMeasure::uniform(support),
        Some(w) => WalkMeasure::new(
            support,
            array(w, "weights")?
                .iter()
                .map(parse_rational)
                .collect::<Result<_>>()?,
        ),
    }
}

pub fn verdict_to_json(v: &DensityVerdict) -> Value {
    json!({
        "schema": VERDICT_SCHEMA,
        "status": v.status,
        "witness": v.witness.as_ref().map(point_json),
        "resolution": v.resolution,
        "refinements": v.refinements,
    })
}

pub fn outcome_to_json(o: &SearchOutcome, seed: Option<u64>) -> Value {
    json!({
        "schema": OUTCOME_SCHEMA,
        "found": o.found,
        "dilator": o.dilator,
        "scanned": o.scanned,
        "eps": o.eps,
        "seed": seed,
        "verdict_resolution": o.verdict.as_ref().map(|v| v.resolution),
        "stop": o.stop,
    })
}

/// Columns `n,modulus,se`, preceded by a `# schema` comment line.
pub fn decay_csv(p: &DecayProfile) -> String {
    let mut out = format!(
        "# {DECAY_CSV_SCHEMA} q={} method={:?} seed={}\nn,modulus,se\n",
        p.q, p.method, p.seed
    );
    for r in &p.rows {
        out.push_str(&format!("{},{:.17e},{:.17e}\n", r.n, r.modulus, r.se));
    }
    out
}

/// Generic CSV from a header and rows of display values.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}
