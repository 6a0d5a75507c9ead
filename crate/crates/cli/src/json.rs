//! JSON encoding of sums and reports.

use gauss_sums_core::{CyclotomicInteger, SumReport};
use serde_json::{json, Map, Value};

/// An integer as a JSON number when it fits in 64 bits, otherwise as a
/// decimal string.
pub fn integer<T>(v: &T) -> Value
where
    T: ToString,
    for<'a> i64: TryFrom<&'a T>,
{
    match i64::try_from(v) {
        Ok(small) => Value::from(small),
        Err(_) => Value::String(v.to_string()),
    }
}

pub fn cyclotomic(v: &CyclotomicInteger) -> Value {
    json!({
        "m": v.order(),
        "coeffs": v.coeffs().iter().map(integer).collect::<Vec<_>>(),
        "abs": v.abs_embed(),
    })
}

pub fn report(r: &SumReport) -> Value {
    let mut obj = Map::new();
    obj.insert("check".into(), r.check.as_str().into());
    obj.insert("case".into(), r.case.as_str().into());
    obj.insert("n".into(), r.n.into());
    obj.insert("p".into(), r.p.into());
    obj.insert("e".into(), r.e.into());
    obj.insert("q".into(), r.q.into());
    obj.insert("chi_index".into(), r.chi_index.into());
    obj.insert("lambda_twist".into(), r.lambda_twist.into());
    obj.insert("rank".into(), r.rank.into());
    obj.insert("matrix".into(), json!(r.matrix.rows()));
    obj.insert("closed_form".into(), cyclotomic(&r.closed_form));
    obj.insert(
        "oracle".into(),
        r.oracle.as_ref().map_or(Value::Null, cyclotomic),
    );
    obj.insert("verified".into(), r.verified().into());
    Value::Object(obj)
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
