//! On-disk formats. One JSON schema serves plain algebras and Hopf algebras
//! (the coalgebra keys are simply omitted for the former), and a small
//! module format carries action matrices. Scalars use the field's string
//! syntax, and serialization is canonical: parse -> serialize is the
//! identity on canonical files.

use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, AlgebraRef, SparseVec};
use crate::field::{FieldDescriptor, FieldElement};
use crate::hopf::{CoproductTable, HopfAlgebra, HopfRef};
use crate::linalg::Matrix;
use crate::module::{Module, ModuleRef};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// A parsed input file: a Hopf algebra when the coalgebra keys are present,
/// otherwise a plain algebra.
#[derive(Debug, Clone)]
pub enum LoadedInput {
    Hopf(HopfRef),
    Plain(AlgebraRef),
}

impl LoadedInput {
    pub fn algebra(&self) -> &AlgebraRef {
        match self {
            LoadedInput::Hopf(h) => h.algebra(),
            LoadedInput::Plain(a) => a,
        }
    }

    pub fn hopf(&self) -> Option<&HopfRef> {
        match self {
            LoadedInput::Hopf(h) => Some(h),
            LoadedInput::Plain(_) => None,
        }
    }
}

fn schema_err(msg: impl Into<String>) -> JsonError {
    JsonError::Schema(msg.into())
}

pub fn parse_field(v: &Value) -> Result<FieldDescriptor, JsonError> {
    let obj = v.as_object().ok_or_else(|| schema_err("field must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema_err("field.kind must be a string"))?;
    match kind {
        "rationals" => Ok(FieldDescriptor::rationals()),
        "prime" => {
            let p = obj
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema_err("field.p must be a positive integer"))?;
            Ok(FieldDescriptor::prime(p)?)
        }
        "cyclotomic" => {
            let n = obj
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema_err("field.n must be a positive integer"))?;
            Ok(FieldDescriptor::cyclotomic(n as u32)?)
        }
        other => Err(schema_err(format!("unknown field kind {other:?}"))),
    }
}

pub fn field_to_json(f: FieldDescriptor) -> Value {
    match f {
        FieldDescriptor::Rationals => json!({"kind": "rationals"}),
        FieldDescriptor::PrimeField(p) => json!({"kind": "prime", "p": p}),
        FieldDescriptor::Cyclotomic(n) => json!({"kind": "cyclotomic", "n": n}),
    }
}

fn parse_scalar(f: FieldDescriptor, v: &Value) -> Result<FieldElement, JsonError> {
    let s = v
        .as_str()
        .ok_or_else(|| schema_err(format!("scalar must be a string, got {v}")))?;
    Ok(f.parse(s)?)
}

fn parse_scalar_vec(f: FieldDescriptor, v: &Value, what: &str) -> Result<Vec<FieldElement>, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err(format!("{what} must be an array")))?;
    arr.iter().map(|x| parse_scalar(f, x)).collect()
}

fn parse_matrix(f: FieldDescriptor, v: &Value, what: &str) -> Result<Matrix, JsonError> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema_err(format!("{what} must be an array of rows")))?;
    let mut data = Vec::with_capacity(rows.len());
    for r in rows {
        data.push(parse_scalar_vec(f, r, what)?);
    }
    let cols = data.first().map_or(0, |r| r.len());
    if data.iter().any(|r| r.len() != cols) {
        return Err(schema_err(format!("{what} has ragged rows")));
    }
    Ok(Matrix::from_rows(f, data))
}

/// Parse the canonical algebra / Hopf schema from a JSON string.
pub fn parse_input(text: &str) -> Result<LoadedInput, JsonError> {
    let v: Value = serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| schema_err("top level must be an object"))?;
    let field = parse_field(obj.get("field").ok_or_else(|| schema_err("missing field"))?)?;
    let basis = obj
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("basis must be an array of labels"))?;
    let labels: Vec<String> = basis
        .iter()
        .map(|l| {
            l.as_str()
                .map(str::to_string)
                .ok_or_else(|| schema_err("basis labels must be strings"))
        })
        .collect::<Result<_, _>>()?;
    let dim = labels.len();
    let unit = parse_scalar_vec(field, obj.get("unit").ok_or_else(|| schema_err("missing unit"))?, "unit")?;
    if unit.len() != dim {
        return Err(schema_err("unit length does not match basis"));
    }
    let mult_v = obj
        .get("mult")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("mult must be an array"))?;
    if mult_v.len() != dim {
        return Err(schema_err("mult must have one row per basis element"));
    }
    let mut mult: Vec<Vec<SparseVec>> = Vec::with_capacity(dim);
    for row in mult_v {
        let row = row
            .as_array()
            .ok_or_else(|| schema_err("mult rows must be arrays"))?;
        if row.len() != dim {
            return Err(schema_err("mult rows must have one entry per basis element"));
        }
        let mut out_row = Vec::with_capacity(dim);
        for entry in row {
            let terms = entry
                .as_array()
                .ok_or_else(|| schema_err("mult entries must be arrays of [coef, k] pairs"))?;
            let mut sv: SparseVec = Vec::with_capacity(terms.len());
            for t in terms {
                let pair = t
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| schema_err("mult terms must be [coef, k] pairs"))?;
                let coef = parse_scalar(field, &pair[0])?;
                let k = pair[1]
                    .as_u64()
                    .ok_or_else(|| schema_err("basis index must be an integer"))?
                    as usize;
                if k >= dim {
                    return Err(schema_err(format!("basis index {k} out of range")));
                }
                sv.push((k, coef));
            }
            out_row.push(sv);
        }
        mult.push(out_row);
    }
    let algebra = Algebra::new(field, labels, unit, mult)?;

    let has_coalgebra = obj.contains_key("coproduct");
    if !has_coalgebra {
        return Ok(LoadedInput::Plain(algebra));
    }
    let cop_v = obj
        .get("coproduct")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("coproduct must be an array"))?;
    if cop_v.len() != dim {
        return Err(schema_err("coproduct must have one entry per basis element"));
    }
    let mut coproduct: CoproductTable = Vec::with_capacity(dim);
    for entry in cop_v {
        let terms = entry
            .as_array()
            .ok_or_else(|| schema_err("coproduct entries must be arrays"))?;
        let mut list = Vec::with_capacity(terms.len());
        for t in terms {
            let trip = t
                .as_array()
                .filter(|p| p.len() == 3)
                .ok_or_else(|| schema_err("coproduct terms must be [coef, j, k] triples"))?;
            let coef = parse_scalar(field, &trip[0])?;
            let j = trip[1]
                .as_u64()
                .ok_or_else(|| schema_err("coproduct index must be an integer"))? as usize;
            let k = trip[2]
                .as_u64()
                .ok_or_else(|| schema_err("coproduct index must be an integer"))? as usize;
            if j >= dim || k >= dim {
                return Err(schema_err("coproduct index out of range"));
            }
            list.push((coef, j, k));
        }
        coproduct.push(list);
    }
    let counit = parse_scalar_vec(
        field,
        obj.get("counit").ok_or_else(|| schema_err("missing counit"))?,
        "counit",
    )?;
    if counit.len() != dim {
        return Err(schema_err("counit length does not match basis"));
    }
    let antipode = parse_matrix(
        field,
        obj.get("antipode").ok_or_else(|| schema_err("missing antipode"))?,
        "antipode",
    )?;
    if antipode.rows() != dim || antipode.cols() != dim {
        return Err(schema_err("antipode must be a dim x dim matrix"));
    }
    Ok(LoadedInput::Hopf(HopfAlgebra::new(algebra, coproduct, counit, antipode)))
}

fn scalar_str(x: &FieldElement) -> Value {
    Value::String(x.to_string())
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let mut obj = Map::new();
    obj.insert("field".into(), field_to_json(a.field()));
    obj.insert(
        "basis".into(),
        Value::Array(a.labels().iter().map(|l| Value::String(l.clone())).collect()),
    );
    obj.insert(
        "unit".into(),
        Value::Array(a.unit().iter().map(scalar_str).collect()),
    );
    let mult: Vec<Value> = (0..a.dim())
        .map(|i| {
            Value::Array(
                (0..a.dim())
                    .map(|j| {
                        Value::Array(
                            a.basis_product(i, j)
                                .iter()
                                .map(|(k, c)| Value::Array(vec![scalar_str(c), json!(k)]))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    obj.insert("mult".into(), Value::Array(mult));
    Value::Object(obj)
}

pub fn hopf_to_json(h: &HopfAlgebra) -> Value {
    let mut v = algebra_to_json(h.algebra());
    let obj = v.as_object_mut().unwrap();
    let cop: Vec<Value> = (0..h.dim())
        .map(|i| {
            Value::Array(
                h.coproduct_terms(i)
                    .iter()
                    .map(|(c, j, k)| Value::Array(vec![scalar_str(c), json!(j), json!(k)]))
                    .collect(),
            )
        })
        .collect();
    obj.insert("coproduct".into(), Value::Array(cop));
    obj.insert(
        "counit".into(),
        Value::Array(h.counit().iter().map(scalar_str).collect()),
    );
    let rows: Vec<Value> = (0..h.dim())
        .map(|r| {
            Value::Array(
                (0..h.dim())
                    .map(|c| scalar_str(h.antipode().at(r, c)))
                    .collect(),
            )
        })
        .collect();
    obj.insert("antipode".into(), Value::Array(rows));
    v
}

/// Canonical text form: pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Module schema: {"dim": m, "action": [one matrix per algebra basis
/// element]}.
pub fn parse_module(a: &AlgebraRef, text: &str) -> Result<ModuleRef, JsonError> {
    let v: Value = serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| schema_err("top level must be an object"))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema_err("dim must be an integer"))? as usize;
    let action_v = obj
        .get("action")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("action must be an array of matrices"))?;
    if action_v.len() != a.dim() {
        return Err(schema_err("action must have one matrix per algebra basis element"));
    }
    let mut action = Vec::with_capacity(action_v.len());
    for (i, m) in action_v.iter().enumerate() {
        let mat = parse_matrix(a.field(), m, &format!("action[{i}]"))?;
        if mat.rows() != dim || mat.cols() != dim {
            return Err(schema_err(format!("action[{i}] must be {dim} x {dim}")));
        }
        action.push(mat);
    }
    Module::new(a.clone(), action).map_err(|e| schema_err(e.to_string()))
}

pub fn module_to_json(m: &Module) -> Value {
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(m.dim()));
    let action: Vec<Value> = (0..m.algebra().dim())
        .map(|i| {
            Value::Array(
                (0..m.dim())
                    .map(|r| {
                        Value::Array(
                            (0..m.dim())
                                .map(|c| scalar_str(m.action(i).at(r, c)))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    obj.insert("action".into(), Value::Array(action));
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cyclic_group_algebra, dual_numbers, sweedler};
    use crate::field::FieldDescriptor;

    #[test]
    fn hopf_round_trip_is_canonical() {
        let h = sweedler(FieldDescriptor::rationals()).unwrap();
        let text = to_canonical_string(&hopf_to_json(&h));
        let parsed = parse_input(&text).unwrap();
        let h2 = parsed.hopf().expect("hopf input");
        assert!(h2.validate().is_valid());
        let text2 = to_canonical_string(&hopf_to_json(h2));
        assert_eq!(text, text2, "round trip must be byte identical");
    }

    #[test]
    fn plain_algebra_round_trip() {
        let a = dual_numbers(FieldDescriptor::rationals());
        let text = to_canonical_string(&algebra_to_json(&a));
        let parsed = parse_input(&text).unwrap();
        assert!(parsed.hopf().is_none());
        assert_eq!(**parsed.algebra(), *a);
        let text2 = to_canonical_string(&algebra_to_json(parsed.algebra()));
        assert_eq!(text, text2);
    }

    #[test]
    fn module_round_trip() {
        let h = cyclic_group_algebra(2, FieldDescriptor::prime(2).unwrap());
        let k = h.trivial_module();
        let text = to_canonical_string(&module_to_json(&k));
        let m = parse_module(h.algebra(), &text).unwrap();
        assert_eq!(*m, *k);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(matches!(parse_input("{"), Err(JsonError::Syntax(_))));
        assert!(matches!(parse_input("{}"), Err(JsonError::Schema(_))));
        let bad = r#"{"field": {"kind": "prime", "p": 6}, "basis": [], "unit": [], "mult": []}"#;
        assert!(matches!(parse_input(bad), Err(JsonError::Field(_))));
    }

    #[test]
    fn cyclotomic_scalars_round_trip_in_schema() {
        let h = crate::builders::taft(3, FieldDescriptor::cyclotomic(3).unwrap()).unwrap();
        let text = to_canonical_string(&hopf_to_json(&h));
        let parsed = parse_input(&text).unwrap();
        let h2 = parsed.hopf().unwrap();
        assert_eq!(*h2.algebra().as_ref(), *h.algebra().as_ref());
        assert_eq!(h2.antipode(), h.antipode());
    }
}
