//! Exact values as JSON: rationals as "p/q" strings, Gaussian rationals with a
//! nonzero imaginary part as {"re","im"}.

use grpd_conv::linalg::{LinearMap, SparseVec};
use grpd_conv::scalar::{format_rational, Gq, GqRepr, Rational};
use serde_json::{json, Value};

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rationals(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

pub fn scalar(z: &Gq) -> Value {
    if z.is_real() {
        rational(&z.re)
    } else {
        serde_json::to_value(GqRepr::from(z)).expect("scalar")
    }
}

/// `[[index, value], …]` over the nonzero entries.
pub fn sparse(v: &SparseVec) -> Value {
    Value::Array(v.iter().map(|(i, x)| json!([i, scalar(x)])).collect())
}

pub fn matrix(m: &LinearMap) -> Value {
    Value::Array(
        m.to_dense_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(scalar).collect()))
            .collect(),
    )
}
