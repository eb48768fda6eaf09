//! Bivariate maps `L × L → [0, 1]`: the s-, j-, d- and G-map axiom systems,
//! Γ-family classification, derived constructions and identity checks.

mod checks;
mod derive;
mod family;
mod identities;
mod systems;

use std::fmt;

use serde::Serialize;

use crate::lattice::{Elem, Oml};
use crate::rat::Rat;

pub use checks::{check_d_map, check_g_map, check_j_map, check_map, check_s_map};
pub use derive::{
    build_table3_family, complement_map, derive_d_from_s, derive_j_from_s, derive_pure_projection_from_s,
    induced_state_from_gamma9, induced_state_from_smap, Table3Error, Table3Params,
};
pub use family::{classify_family, Connective, Corners, FamilyTag, Gamma, InvalidCorners};
pub use identities::{
    is_pure_projection, semantic_check_on_compatible, verify_gamma9_identities, verify_lemma_komp,
    verify_smap_properties, IdentityFailure, IdentityReport, Purity, SemanticsError,
};
pub use systems::{dmap_system, gmap_system, jmap_system, map_system, pair_var, smap_system};

/// A complete table of values on `L × L`, stored row-major (`values[a * n + b]`).
#[derive(Clone, PartialEq, Eq)]
pub struct BiMap<'l> {
    lattice: &'l Oml,
    values: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BiMapError {
    #[error("expected {expected} values, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("value {value} at ({a}, {b}) lies outside [0, 1]")]
    OutOfRange { a: String, b: String, value: Rat },
}

impl<'l> BiMap<'l> {
    pub fn new(lattice: &'l Oml, values: Vec<Rat>) -> Result<BiMap<'l>, BiMapError> {
        let n = lattice.len();
        if values.len() != n * n {
            return Err(BiMapError::WrongSize { expected: n * n, got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.in_unit_interval()) {
            return Err(BiMapError::OutOfRange {
                a: lattice.names()[i / n].clone(),
                b: lattice.names()[i % n].clone(),
                value: values[i].clone(),
            });
        }
        Ok(BiMap { lattice, values })
    }

    pub fn from_fn(lattice: &'l Oml, f: impl Fn(Elem, Elem) -> Rat) -> Result<BiMap<'l>, BiMapError> {
        let mut values = Vec::with_capacity(lattice.len() * lattice.len());
        for a in lattice.elements() {
            for b in lattice.elements() {
                values.push(f(a, b));
            }
        }
        BiMap::new(lattice, values)
    }

    pub fn constant(lattice: &'l Oml, v: Rat) -> Result<BiMap<'l>, BiMapError> {
        BiMap::new(lattice, vec![v; lattice.len() * lattice.len()])
    }

    pub fn lattice(&self) -> &'l Oml {
        self.lattice
    }

    pub fn get(&self, a: Elem, b: Elem) -> &Rat {
        &self.values[a.index() * self.lattice.len() + b.index()]
    }

    /// Value at a pair given by element names. Panics on unknown names.
    pub fn at(&self, a: &str, b: &str) -> &Rat {
        self.get(self.lattice.e(a), self.lattice.e(b))
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Copy with one entry replaced; the new value must stay in `[0, 1]`.
    pub fn with_value(&self, a: Elem, b: Elem, v: Rat) -> Result<BiMap<'l>, BiMapError> {
        let mut values = self.values.clone();
        values[a.index() * self.lattice.len() + b.index()] = v;
        BiMap::new(self.lattice, values)
    }

    pub fn corners(&self) -> [Rat; 4] {
        let (z, o) = (self.lattice.bot(), self.lattice.top());
        [self.get(z, z).clone(), self.get(z, o).clone(), self.get(o, z).clone(), self.get(o, o).clone()]
    }
}

impl fmt::Debug for BiMap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.lattice;
        let mut m = f.debug_map();
        for a in l.elements() {
            for b in l.elements() {
                m.entry(&format_args!("{}|{}", l.name(a), l.name(b)), self.get(a, b));
            }
        }
        m.finish()
    }
}

/// The four axiom systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MapSystem {
    #[serde(rename = "s-map")]
    S,
    #[serde(rename = "j-map")]
    J,
    #[serde(rename = "d-map")]
    D,
    #[serde(rename = "G-map")]
    G,
}

impl fmt::Display for MapSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapSystem::S => "s-map",
            MapSystem::J => "j-map",
            MapSystem::D => "d-map",
            MapSystem::G => "G-map",
        })
    }
}

impl std::str::FromStr for MapSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "s" | "s-map" => Ok(MapSystem::S),
            "j" | "j-map" => Ok(MapSystem::J),
            "d" | "d-map" => Ok(MapSystem::D),
            "g" | "G" | "g-map" | "G-map" => Ok(MapSystem::G),
            _ => Err(format!("unknown map system {s:?} (expected s, j, d or g)")),
        }
    }
}

/// First failed axiom instance: the identity `lhs = rhs` (or, for G1 and
/// the range axioms, `lhs` must be `rhs`) does not hold at `elements`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub elements: Vec<String>,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) fails at ({}): {} != {}", self.axiom, self.elements.join(", "), self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub system: MapSystem,
    pub ok: bool,
    pub first_violation: Option<Violation>,
}

impl AxiomReport {
    fn from(system: MapSystem, v: Option<Violation>) -> AxiomReport {
        AxiomReport { system, ok: v.is_none(), first_violation: v }
    }
}
