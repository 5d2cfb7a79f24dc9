//! JSON encoding of rings, elements, matrices and instances.
//!
//! Integers inside the 53-bit safe range are plain numbers and decimal strings
//! otherwise. Rationals with a nontrivial denominator are `"p/q"` strings.
//! Polynomials are `{"vars": k, "terms": [[exponents, coefficient], ...]}` or
//! a bare integer constant. Encoding is canonical, so decode-then-encode is
//! idempotent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::matrix::{SquareMatrix, FIELD_SIZE_LIMIT};
use crate::ring::{RingDescriptor, RingElement, RingKind, SparsePoly, Value};
use crate::search::SemilocalInstance;

const SAFE_INTEGER: i64 = (1 << 53) - 1;

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// Parses JSON text, reporting syntax errors with their position.
pub fn parse_text(text: &str) -> Result<Json> {
    serde_json::from_str(text).map_err(|e| Error::MalformedJson {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Reads `--input`: inline JSON when it starts with `{` or `[`, else a file path.
pub fn read_input(arg: &str) -> Result<Json> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return parse_text(arg);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::InvalidParameters(format!("cannot read input file {arg:?}: {e}")))?;
    parse_text(&text)
}

fn object<'a>(j: &'a Json, what: &str, allowed: &[&str]) -> Result<&'a Map<String, Json>> {
    let obj = j
        .as_object()
        .ok_or_else(|| schema(format!("{what} must be an object")))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(format!("unexpected key {k:?} in {what}")));
    }
    Ok(obj)
}

fn field<'a>(obj: &'a Map<String, Json>, key: &str, what: &str) -> Result<&'a Json> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{what} is missing key {key:?}")))
}

fn array<'a>(j: &'a Json, what: &str) -> Result<&'a Vec<Json>> {
    j.as_array()
        .ok_or_else(|| schema(format!("{what} must be an array")))
}

fn small_uint(j: &Json, what: &str) -> Result<u64> {
    j.as_u64()
        .ok_or_else(|| schema(format!("{what} must be a nonnegative integer")))
}

pub fn integer_to_json(x: &BigInt) -> Json {
    match x.to_i64() {
        Some(v) if v.abs() <= SAFE_INTEGER => json!(v),
        _ => Json::String(x.to_string()),
    }
}

pub fn integer_from_json(j: &Json, what: &str) -> Result<BigInt> {
    match j {
        Json::Number(n) => {
            if let Some(v) = n.as_i64() {
                Ok(BigInt::from(v))
            } else if let Some(v) = n.as_u64() {
                Ok(BigInt::from(v))
            } else {
                Err(schema(format!("{what}: {n} is not an integer")))
            }
        }
        Json::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| schema(format!("{what}: {s:?} is not an integer"))),
        _ => Err(schema(format!("{what} must be an integer"))),
    }
}

fn rational_from_json(j: &Json, what: &str) -> Result<BigRational> {
    if let Json::String(s) = j {
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| schema(format!("{what}: bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| schema(format!("{what}: bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(schema(format!("{what}: zero denominator in {s:?}")));
            }
            return Ok(BigRational::new(p, q));
        }
    }
    Ok(BigRational::from_integer(integer_from_json(j, what)?))
}

pub fn ring_to_json(ring: &RingDescriptor) -> Json {
    match ring.kind() {
        RingKind::Integers => json!({"kind": "integers"}),
        RingKind::Rationals => json!({"kind": "rationals"}),
        RingKind::PrimeField(p) => json!({"kind": "prime_field", "p": p}),
        RingKind::ModRing(n) => json!({"kind": "mod", "N": n}),
        RingKind::Product(cs) => {
            json!({"kind": "product", "components": cs.iter().map(ring_to_json).collect::<Vec<_>>()})
        }
        RingKind::PolyOverZ(k) => json!({"kind": "poly_z", "vars": k}),
    }
}

pub fn ring_from_json(j: &Json) -> Result<RingDescriptor> {
    let kind = j
        .get("kind")
        .and_then(Json::as_str)
        .ok_or_else(|| schema("ring must be an object with a string \"kind\""))?;
    match kind {
        "integers" => {
            object(j, "ring", &["kind"])?;
            Ok(RingDescriptor::integers())
        }
        "rationals" => {
            object(j, "ring", &["kind"])?;
            Ok(RingDescriptor::rationals())
        }
        "prime_field" => {
            let o = object(j, "ring", &["kind", "p"])?;
            RingDescriptor::prime_field(small_uint(field(o, "p", "prime_field ring")?, "p")?)
        }
        "mod" => {
            let o = object(j, "ring", &["kind", "N"])?;
            RingDescriptor::mod_ring(small_uint(field(o, "N", "mod ring")?, "N")?)
        }
        "product" => {
            let o = object(j, "ring", &["kind", "components"])?;
            let cs = array(field(o, "components", "product ring")?, "components")?
                .iter()
                .map(ring_from_json)
                .collect::<Result<Vec<_>>>()?;
            RingDescriptor::product(cs)
        }
        "poly_z" => {
            let o = object(j, "ring", &["kind", "vars"])?;
            let vars = small_uint(field(o, "vars", "poly_z ring")?, "vars")?;
            Ok(RingDescriptor::poly_over_z(vars as usize))
        }
        other => Err(schema(format!("unknown ring kind {other:?}"))),
    }
}

pub fn poly_to_json(p: &SparsePoly) -> Json {
    let terms: Vec<Json> = p.terms().map(|(e, c)| json!([e, integer_to_json(c)])).collect();
    json!({"vars": p.vars(), "terms": terms})
}

pub fn poly_from_json(j: &Json, vars: Option<usize>) -> Result<SparsePoly> {
    if !j.is_object() {
        let c = integer_from_json(j, "polynomial constant")?;
        let vars = vars.ok_or_else(|| schema("a constant polynomial needs a ring with known variables"))?;
        return Ok(SparsePoly::constant(vars, c));
    }
    let o = object(j, "polynomial", &["vars", "terms"])?;
    let declared = o.get("vars").map(|v| small_uint(v, "vars")).transpose()?;
    let vars = match (declared, vars) {
        (Some(d), Some(v)) if d as usize != v => {
            return Err(schema(format!("polynomial has {d} variables, ring has {v}")))
        }
        (Some(d), _) => d as usize,
        (None, Some(v)) => v,
        (None, None) => return Err(schema("polynomial is missing key \"vars\"")),
    };
    let mut terms = Vec::new();
    for t in array(field(o, "terms", "polynomial")?, "terms")? {
        let pair = array(t, "term")?;
        if pair.len() != 2 {
            return Err(schema("each term is [exponents, coefficient]"));
        }
        let exps = array(&pair[0], "exponents")?
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| schema("exponents must be small nonnegative integers"))
            })
            .collect::<Result<Vec<u32>>>()?;
        terms.push((exps, integer_from_json(&pair[1], "coefficient")?));
    }
    SparsePoly::from_terms(vars, terms)
}

pub fn value_to_json(ring: &RingDescriptor, v: &Value) -> Json {
    match v {
        Value::Int(x) => integer_to_json(x),
        Value::Rat(q) => {
            if q.denom().is_one() {
                integer_to_json(q.numer())
            } else {
                Json::String(format!("{}/{}", q.numer(), q.denom()))
            }
        }
        Value::Residue(r) => json!(r),
        Value::Tuple(vs) => {
            let cs = ring.components().expect("tuple payload in product ring");
            Json::Array(cs.iter().zip(vs).map(|(c, x)| value_to_json(c, x)).collect())
        }
        Value::Poly(p) => poly_to_json(p),
    }
}

/// Decodes an element of `ring`, reducing integers into residue rings.
pub fn value_from_json(ring: &RingDescriptor, j: &Json) -> Result<Value> {
    match ring.kind() {
        RingKind::Integers => Ok(Value::Int(integer_from_json(j, "Z entry")?)),
        RingKind::Rationals => Ok(Value::Rat(rational_from_json(j, "Q entry")?)),
        RingKind::PrimeField(_) | RingKind::ModRing(_) => {
            Ok(ring.from_integer(&integer_from_json(j, "residue entry")?))
        }
        RingKind::Product(cs) => {
            let parts = array(j, "product entry")?;
            if parts.len() != cs.len() {
                return Err(Error::ArityMismatch {
                    expected: cs.len(),
                    got: parts.len(),
                });
            }
            Ok(Value::Tuple(
                cs.iter()
                    .zip(parts)
                    .map(|(c, x)| value_from_json(c, x))
                    .collect::<Result<_>>()?,
            ))
        }
        RingKind::PolyOverZ(k) => Ok(Value::Poly(poly_from_json(j, Some(*k))?)),
    }
}

pub fn element_to_json(e: &RingElement) -> Json {
    value_to_json(e.ring(), e.value())
}

pub fn matrix_to_json(a: &SquareMatrix) -> Json {
    let n = a.n();
    Json::Array(
        (0..n)
            .map(|i| Json::Array((0..n).map(|j| value_to_json(a.ring(), a.value(i, j))).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(ring: &RingDescriptor, n: usize, j: &Json) -> Result<SquareMatrix> {
    let rows = array(j, "matrix")?;
    if rows.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "expected {n} rows, got {}",
            rows.len()
        )));
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let row = array(row, "matrix row")?;
        if row.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n} entries per row, got {}",
                row.len()
            )));
        }
        for x in row {
            entries.push(value_from_json(ring, x)?);
        }
    }
    SquareMatrix::from_values(ring, n, entries)
}

/// A validated matrices document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFamily {
    pub ring: RingDescriptor,
    pub n: usize,
    pub matrices: Vec<SquareMatrix>,
}

impl MatrixFamily {
    pub fn from_matrices(matrices: Vec<SquareMatrix>) -> Result<Self> {
        let (ring, n) = crate::matrix::family_shape(&matrices)?;
        Ok(MatrixFamily { ring, n, matrices })
    }

    pub fn to_json(&self) -> Json {
        json!({
            "ring": ring_to_json(&self.ring),
            "n": self.n,
            "matrices": self.matrices.iter().map(matrix_to_json).collect::<Vec<_>>(),
        })
    }
}

/// Decodes `{"ring", "n", "matrices"}` plus any `extra` keys the caller handles.
pub fn matrices_from_json(j: &Json, extra: &[&str]) -> Result<MatrixFamily> {
    let mut allowed = vec!["ring", "n", "matrices"];
    allowed.extend_from_slice(extra);
    let o = object(j, "matrices document", &allowed)?;
    let ring = ring_from_json(field(o, "ring", "matrices document")?)?;
    let n = small_uint(field(o, "n", "matrices document")?, "n")? as usize;
    if n == 0 || n > FIELD_SIZE_LIMIT {
        return Err(schema(format!("n must be in 1..={FIELD_SIZE_LIMIT}, got {n}")));
    }
    let matrices = array(field(o, "matrices", "matrices document")?, "matrices")?
        .iter()
        .map(|m| matrix_from_json(&ring, n, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixFamily { ring, n, matrices })
}

/// Loads a matrices document from a path or inline JSON.
pub fn load_matrices(arg: &str) -> Result<MatrixFamily> {
    matrices_from_json(&read_input(arg)?, &[])
}

pub fn instance_to_json(inst: &SemilocalInstance) -> Json {
    json!({
        "ring": ring_to_json(inst.ring()),
        "elements": inst.elements().iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

pub fn instance_from_json(j: &Json) -> Result<SemilocalInstance> {
    let o = object(j, "instance document", &["ring", "elements"])?;
    let ring = ring_from_json(field(o, "ring", "instance document")?)?;
    let elements = array(field(o, "elements", "instance document")?, "elements")?
        .iter()
        .map(|e| ring.element(value_from_json(&ring, e)?))
        .collect::<Result<Vec<_>>>()?;
    SemilocalInstance::new(&ring, elements)
}

/// Decodes `{"ring", "poly", "vectors"}` for the homogeneous-form identity.
pub fn homogeneous_from_json(j: &Json) -> Result<(RingDescriptor, SparsePoly, Vec<Vec<RingElement>>)> {
    let o = object(j, "homogeneous document", &["ring", "poly", "vectors"])?;
    let ring = ring_from_json(field(o, "ring", "homogeneous document")?)?;
    let poly = poly_from_json(field(o, "poly", "homogeneous document")?, None)?;
    let vectors = array(field(o, "vectors", "homogeneous document")?, "vectors")?
        .iter()
        .map(|v| {
            array(v, "vector")?
                .iter()
                .map(|x| ring.element(value_from_json(&ring, x)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ring, poly, vectors))
}
