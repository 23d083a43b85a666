//! JSON encodings for values, carriers, functions and relations.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::finrel::{FinFn, FinRel, FinSet, Value};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum ValueRepr {
    Atom(String),
    Set(Vec<Value>),
    Multiset(Vec<Value>),
    Pair((Value, Value)),
    Bip(BipRepr),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BipRepr {
    set: Vec<Value>,
    a: Value,
    b: Value,
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Value::Atom(a) => ValueRepr::Atom(a.to_string()),
            Value::Set(c) => ValueRepr::Set(c.to_vec()),
            Value::Multiset(c) => ValueRepr::Multiset(c.to_vec()),
            Value::Pair(p) => ValueRepr::Pair((p.0.clone(), p.1.clone())),
            Value::Bip(b) => ValueRepr::Bip(BipRepr {
                set: b.set.to_vec(),
                a: b.first.clone(),
                b: b.second.clone(),
            }),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Value, D::Error> {
        Ok(match ValueRepr::deserialize(d)? {
            ValueRepr::Atom(a) => Value::atom(a),
            ValueRepr::Set(c) => Value::set(c),
            ValueRepr::Multiset(c) => Value::multiset(c),
            ValueRepr::Pair((a, b)) => Value::pair(a, b),
            ValueRepr::Bip(b) => Value::bip(b.set, b.a, b.b).map_err(D::Error::custom)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FinSetRepr {
    name: String,
    elements: Vec<Value>,
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FinSetRepr {
            name: self.name().to_string(),
            elements: self.elements().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<FinSet, D::Error> {
        let r = FinSetRepr::deserialize(d)?;
        let n = r.elements.len();
        let set = FinSet::new(&r.name, r.elements);
        if set.len() != n {
            return Err(D::Error::custom(format!("carrier {} lists an element twice", r.name)));
        }
        Ok(set)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FinFnRepr {
    dom: FinSet,
    cod: FinSet,
    map: Vec<(Value, Value)>,
}

impl Serialize for FinFn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FinFnRepr {
            dom: self.dom().clone(),
            cod: self.cod().clone(),
            map: self.pairs().map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<FinFn, D::Error> {
        let r = FinFnRepr::deserialize(d)?;
        FinFn::from_pairs(&r.dom, &r.cod, &r.map).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FinRelRepr {
    dom: FinSet,
    cod: FinSet,
    pairs: Vec<(Value, Value)>,
}

impl Serialize for FinRel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FinRelRepr {
            dom: self.dom().clone(),
            cod: self.cod().clone(),
            pairs: self.pairs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinRel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<FinRel, D::Error> {
        let r = FinRelRepr::deserialize(d)?;
        FinRel::new(&r.dom, &r.cod, r.pairs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_encoding_matches_schema() {
        let v = Value::pair(Value::atom("a"), Value::set([Value::atom("b")]));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"pair":[{"atom":"a"},{"set":[{"atom":"b"}]}]}"#);
        let b = Value::bip([Value::atom("x"), Value::atom("y")], Value::atom("y"), Value::atom("x")).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(
            s,
            r#"{"bip":{"set":[{"atom":"x"},{"atom":"y"}],"a":{"atom":"y"},"b":{"atom":"x"}}}"#
        );
        assert_eq!(serde_json::from_str::<Value>(&s).unwrap(), b);
    }

    #[test]
    fn invalid_bip_rejected() {
        let s = r#"{"bip":{"set":[{"atom":"x"}],"a":{"atom":"x"},"b":{"atom":"z"}}}"#;
        assert!(serde_json::from_str::<Value>(s).is_err());
    }

    #[test]
    fn function_and_relation_round_trip() {
        let x = FinSet::standard(2);
        let y = FinSet::atoms("Y", &["a"]);
        let f = FinFn::constant(&x, &y, &Value::atom("a")).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains(r#""map":[[{"atom":"0"},{"atom":"a"}]"#));
        assert_eq!(serde_json::from_str::<FinFn>(&s).unwrap(), f);
        let r = FinRel::graph(&f);
        let back: FinRel = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn partial_function_rejected() {
        let s = r#"{"dom":{"name":"X","elements":[{"atom":"0"},{"atom":"1"}]},
                   "cod":{"name":"Y","elements":[{"atom":"a"}]},
                   "map":[[{"atom":"0"},{"atom":"a"}]]}"#;
        assert!(serde_json::from_str::<FinFn>(s).is_err());
    }
}
