//! JSON report assembly.

use coverlab::cochains::{Cochain1, CochainSpace};
use coverlab::complex::{Simplex, SimplicialComplex};
use coverlab::Rational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub struct Report {
  fields: Map<String, Value>,
}

impl Report {
  pub fn new() -> Self {
    Self { fields: Map::new() }
  }

  pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
    self.fields.insert(key.to_string(), value.into());
    self
  }

  /// Writes `<key>_num` and `<key>_den`.
  pub fn rational(&mut self, key: &str, r: &Rational) -> &mut Self {
    self.fields.insert(format!("{key}_num"), big(r.numer()));
    self.fields.insert(format!("{key}_den"), big(r.denom()));
    self
  }

  pub fn into_value(self) -> Value {
    Value::Object(self.fields)
  }
}

/// Integers that fit go out as JSON numbers, larger ones as decimal strings.
fn big(n: &num_bigint::BigInt) -> Value {
  match n.to_i64() {
    Some(v) => json!(v),
    None => json!(n.to_string()),
  }
}

pub fn rational_value(r: &Rational) -> Value {
  json!({ "num": big(r.numer()), "den": big(r.denom()) })
}

pub fn simplex_labels(x: &SimplicialComplex, s: &Simplex) -> Value {
  Value::Array(s.vertices().iter().map(|&v| json!(x.label(v))).collect())
}

/// Non-identity edge values as `[u, v, "images"]`.
pub fn cochain_value(space: &CochainSpace, phi: &Cochain1) -> Value {
  let x = space.complex();
  let g = space.group();
  let entries = x
    .edges()
    .iter()
    .enumerate()
    .filter(|(e, _)| !phi.value(*e).is_identity())
    .map(|(e, edge)| {
      let [u, v] = [edge.vertices()[0], edge.vertices()[1]];
      json!([x.label(u), x.label(v), g.permutation(phi.value(e)).to_string()])
    })
    .collect();
  Value::Array(entries)
}
