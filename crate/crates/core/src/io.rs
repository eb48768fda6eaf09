//! JSON file formats.
//!
//! * Lattice: `{"elements": [..], "leq" | "covers": [[x, y], ..],
//!   "comp": {"a": "a'", ..}, "bot": "0", "top": "1"}`.
//! * Map: `{"lattice": "<file>", "values": {"a|b": "1/3", ..}}` with every
//!   ordered pair present. The `lattice` field is informational.
//! * State: `{"a": "1/2", ..}` with every element present.
//!
//! Rationals are `"p/q"` strings. Unknown keys and duplicate entries are
//! rejected.

use std::collections::HashSet;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bimaps::{BiMap, BiMapError};
use crate::lattice::{limits_from_env, validate_oml, Limits, Oml, OmlError, OrderSpec, RawLattice};
use crate::rat::Rat;
use crate::states::StateFn;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("lattice file must give exactly one of \"leq\" and \"covers\"")]
    OrderSpec,
    #[error(transparent)]
    Lattice(#[from] OmlError),
    #[error("key {0:?} is not an element or an element pair of the lattice")]
    UnknownKey(String),
    #[error("no value for {0:?}")]
    Missing(String),
    #[error("value {value:?} for {key:?} is not a rational")]
    BadValue { key: String, value: String },
    #[error(transparent)]
    Map(#[from] BiMapError),
}

/// JSON object read as an ordered list of string entries; duplicate keys
/// are an error.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Entries(pub Vec<(String, String)>);

impl Serialize for Entries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Entries, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with string values")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    if !seen.insert(k.clone()) {
                        return Err(serde::de::Error::custom(format!("duplicate key {k:?}")));
                    }
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<(String, String)>>,
    pub comp: Entries,
    pub bot: String,
    pub top: String,
}

impl LatticeFile {
    pub fn to_raw(&self) -> Result<RawLattice, IoError> {
        let order = match (&self.leq, &self.covers) {
            (Some(l), None) => OrderSpec::Leq(l.clone()),
            (None, Some(c)) => OrderSpec::Covers(c.clone()),
            _ => return Err(IoError::OrderSpec),
        };
        Ok(RawLattice {
            elements: self.elements.clone(),
            order,
            comp: self.comp.0.clone(),
            bot: self.bot.clone(),
            top: self.top.clone(),
        })
    }

    /// The file form of `l`, with the order given by covering pairs.
    pub fn from_oml(l: &Oml) -> LatticeFile {
        let name = |e| l.name(e).to_string();
        LatticeFile {
            elements: l.names().to_vec(),
            leq: None,
            covers: Some(l.covers().into_iter().map(|(a, b)| (name(a), name(b))).collect()),
            comp: Entries(l.elements().map(|a| (name(a), name(l.ocomp(a)))).collect()),
            bot: name(l.bot()),
            top: name(l.top()),
        }
    }
}

fn json_err(e: serde_json::Error) -> IoError {
    IoError::Json(e.to_string())
}

pub fn parse_lattice_with(text: &str, limits: Limits) -> Result<Oml, IoError> {
    let file: LatticeFile = serde_json::from_str(text).map_err(json_err)?;
    Ok(validate_oml(&file.to_raw()?, limits)?)
}

/// Parse and validate, with the element bound taken from
/// `OMLPROB_MAX_ELEMENTS`.
pub fn parse_lattice(text: &str) -> Result<Oml, IoError> {
    parse_lattice_with(text, limits_from_env())
}

pub fn lattice_to_json(l: &Oml) -> String {
    serde_json::to_string_pretty(&LatticeFile::from_oml(l)).expect("plain data serializes")
}

fn parse_rat(key: &str, value: &str) -> Result<Rat, IoError> {
    value.parse().map_err(|_| IoError::BadValue { key: key.to_string(), value: value.to_string() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    pub values: Entries,
}

pub fn parse_map<'l>(l: &'l Oml, text: &str) -> Result<BiMap<'l>, IoError> {
    let file: MapFile = serde_json::from_str(text).map_err(json_err)?;
    map_from_entries(l, &file.values)
}

pub fn map_from_entries<'l>(l: &'l Oml, entries: &Entries) -> Result<BiMap<'l>, IoError> {
    let n = l.len();
    let mut values: Vec<Option<Rat>> = vec![None; n * n];
    for (k, v) in &entries.0 {
        let (a, b) = k
            .split_once('|')
            .and_then(|(a, b)| Some((l.elem(a)?, l.elem(b)?)))
            .ok_or_else(|| IoError::UnknownKey(k.clone()))?;
        values[a.index() * n + b.index()] = Some(parse_rat(k, v)?);
    }
    let mut out = Vec::with_capacity(n * n);
    for (i, v) in values.into_iter().enumerate() {
        let key = || format!("{}|{}", l.names()[i / n], l.names()[i % n]);
        out.push(v.ok_or_else(|| IoError::Missing(key()))?);
    }
    Ok(BiMap::new(l, out)?)
}

pub fn map_entries(m: &BiMap) -> Entries {
    let l = m.lattice();
    let mut out = Vec::with_capacity(l.len() * l.len());
    for a in l.elements() {
        for b in l.elements() {
            out.push((format!("{}|{}", l.name(a), l.name(b)), m.get(a, b).to_string()));
        }
    }
    Entries(out)
}

pub fn map_to_json(m: &BiMap, lattice_path: Option<&str>) -> String {
    let file = MapFile { lattice: lattice_path.map(str::to_string), values: map_entries(m) };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn parse_state(l: &Oml, text: &str) -> Result<StateFn, IoError> {
    let entries: Entries = serde_json::from_str(text).map_err(json_err)?;
    let mut values: Vec<Option<Rat>> = vec![None; l.len()];
    for (k, v) in &entries.0 {
        let x = l.elem(k).ok_or_else(|| IoError::UnknownKey(k.clone()))?;
        values[x.index()] = Some(parse_rat(k, v)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| IoError::Missing(l.names()[i].clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StateFn::new(l, values))
}

pub fn state_entries(l: &Oml, s: &StateFn) -> Entries {
    Entries(l.elements().map(|x| (l.name(x).to_string(), s.get(x).to_string())).collect())
}

pub fn state_to_json(l: &Oml, s: &StateFn) -> String {
    serde_json::to_string_pretty(&state_entries(l, s)).expect("plain data serializes")
}
