//! JSON wire formats for transform specifications.
//!
//! The accepted shapes are
//! `{"catalog":{"name":..,"params":{..}}}`,
//! `{"measure":{"atoms":[..],"densities":[..]}}`, and
//! `{"series":{"coeffs":[..]}}`.

use crate::error::{Error, Result};
use crate::measure::MeasureSpec;
use crate::transform::{catalog_get, PsiFunction, PsiSource};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PsiWire {
    #[serde(rename = "catalog")]
    Catalog {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    #[serde(rename = "measure")]
    Measure(MeasureSpec),
    #[serde(rename = "series")]
    Series { coeffs: Vec<f64> },
}

pub fn psi_from_wire(wire: PsiWire) -> Result<PsiFunction> {
    match wire {
        PsiWire::Catalog { name, params } => catalog_get(&name, &params),
        PsiWire::Measure(m) => PsiFunction::from_measure(m),
        PsiWire::Series { coeffs } => PsiFunction::from_series(coeffs),
    }
}

pub fn psi_to_wire(p: &PsiFunction) -> PsiWire {
    match p.source() {
        PsiSource::Catalog(c) => PsiWire::Catalog {
            name: c.name().to_string(),
            params: c.params(),
        },
        PsiSource::Measure(m) => PsiWire::Measure(m.clone()),
        PsiSource::Series(c) => PsiWire::Series { coeffs: c.clone() },
    }
}

pub fn psi_from_json_str(text: &str) -> Result<PsiFunction> {
    let wire: PsiWire =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("psi JSON: {e}")))?;
    psi_from_wire(wire)
}

/// Serde adapter for possibly-infinite reals: finite values serialize as
/// numbers, infinities as the strings "inf" / "-inf" (plain JSON has no
/// infinity literal and serde_json would emit null).
pub mod ext_real {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else if *v < 0.0 {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("nan")
        }
    }

    struct ExtVisitor;

    impl Visitor<'_> for ExtVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a number or \"inf\"/\"-inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("unexpected extended real `{other}`"))),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(ExtVisitor)
    }
}

/// Same adapter for maps of named estimates.
pub mod ext_real_map {
    use serde::de::Deserializer;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Serializer};
    use std::collections::BTreeMap;

    #[derive(serde::Serialize, serde::Deserialize)]
    #[serde(untagged)]
    enum Ext {
        Num(f64),
        Tag(String),
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            if v.is_finite() {
                map.serialize_entry(k, v)?;
            } else if *v > 0.0 {
                map.serialize_entry(k, "inf")?;
            } else if *v < 0.0 {
                map.serialize_entry(k, "-inf")?;
            } else {
                map.serialize_entry(k, "nan")?;
            }
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let raw: BTreeMap<String, Ext> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let val = match v {
                    Ext::Num(x) => x,
                    Ext::Tag(t) => match t.as_str() {
                        "inf" => f64::INFINITY,
                        "-inf" => f64::NEG_INFINITY,
                        "nan" => f64::NAN,
                        other => {
                            return Err(serde::de::Error::custom(format!(
                                "unexpected extended real `{other}`"
                            )))
                        }
                    },
                };
                Ok((k, val))
            })
            .collect()
    }
}
