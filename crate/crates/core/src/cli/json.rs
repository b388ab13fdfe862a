use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::scalar::Scalar;
use crate::{BigRational, Rational};

fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

pub fn big_rational(r: &BigRational) -> Value {
    json!({
        "num": int(r.numer()),
        "den": int(r.denom()),
        "decimal": Scalar::to_f64(r),
    })
}

pub fn rational(r: &Rational) -> Value {
    json!({
        "num": r.numer(),
        "den": r.denom(),
        "decimal": Scalar::to_f64(r),
    })
}

/// Wraps a report object with the schema version.
pub fn document(fields: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(1));
    if let Value::Object(rest) = fields {
        map.extend(rest);
    }
    Value::Object(map)
}

pub fn one_based(users: &[usize]) -> Vec<usize> {
    users.iter().map(|u| u + 1).collect()
}
