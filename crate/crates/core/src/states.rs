//! States (finitely additive probability measures) on an OML and the state
//! polytope.

use std::fmt;

use serde::Serialize;

use crate::feasibility::{self, FeasError, LinSystem, PolyInfo, PolyStatus};
use crate::lattice::{Elem, Oml};
use crate::rat::Rat;

/// A total map from lattice elements to rationals, indexed by element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateFn {
    values: Vec<Rat>,
}

impl StateFn {
    /// Wrap a value table; the table must have one entry per element.
    pub fn new(l: &Oml, values: Vec<Rat>) -> StateFn {
        assert_eq!(values.len(), l.len(), "state table size");
        StateFn { values }
    }

    pub fn from_fn(l: &Oml, f: impl Fn(Elem) -> Rat) -> StateFn {
        StateFn { values: l.elements().map(f).collect() }
    }

    pub fn get(&self, x: Elem) -> &Rat {
        &self.values[x.index()]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, lambda: &Rat, other: &StateFn) -> StateFn {
        let mu = Rat::one() - lambda;
        StateFn { values: self.values.iter().zip(&other.values).map(|(x, y)| lambda * x + &mu * y).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateViolation {
    #[error("m({elem}) = {value} lies outside [0, 1]")]
    OutOfRange { elem: String, value: Rat },
    #[error("m(1) = {0}, expected 1")]
    NotNormalized(Rat),
    #[error("{a} ⊥ {b} but m({a} v {b}) = {lhs} != m({a}) + m({b}) = {rhs}")]
    AdditivityFailure { a: String, b: String, lhs: Rat, rhs: Rat },
}

/// Check range, normalization and additivity on every orthogonal pair.
pub fn validate_state(l: &Oml, s: &StateFn) -> Result<(), StateViolation> {
    assert_eq!(s.values.len(), l.len());
    for x in l.elements() {
        if !s.get(x).in_unit_interval() {
            return Err(StateViolation::OutOfRange { elem: l.name(x).to_string(), value: s.get(x).clone() });
        }
    }
    if !s.get(l.top()).is_one() {
        return Err(StateViolation::NotNormalized(s.get(l.top()).clone()));
    }
    for (a, b) in l.orthogonal_pairs() {
        let lhs = s.get(l.join(a, b)).clone();
        let rhs = s.get(a) + s.get(b);
        if lhs != rhs {
            return Err(StateViolation::AdditivityFailure {
                a: l.name(a).to_string(),
                b: l.name(b).to_string(),
                lhs,
                rhs,
            });
        }
    }
    Ok(())
}

/// One variable `m(x)` per element: `m(1) = 1`, `m(0) = 0`, additivity for
/// every ordered orthogonal pair, and `0 <= m(x) <= 1`.
pub fn state_system(l: &Oml) -> LinSystem {
    let mut sys = LinSystem::new(l.elements().map(|x| format!("m({})", l.name(x))).collect());
    let v = |x: Elem| x.index();
    sys.add_eq([(v(l.top()), Rat::one())], Rat::one());
    sys.add_eq([(v(l.bot()), Rat::one())], Rat::zero());
    for (a, b) in l.orthogonal_pairs() {
        sys.add_eq([(v(l.join(a, b)), Rat::one()), (v(a), Rat::int(-1)), (v(b), Rat::int(-1))], Rat::zero());
    }
    for x in l.elements() {
        sys.add_bounds(v(x), Rat::zero(), Rat::one());
    }
    sys
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateTag {
    Stateless,
    UniqueState,
    QuantumLogic,
}

impl fmt::Display for StateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateTag::Stateless => "stateless",
            StateTag::UniqueState => "unique-state",
            StateTag::QuantumLogic => "quantum-logic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateClass {
    pub tag: StateTag,
    pub polytope: PolyInfo,
}

impl StateClass {
    pub fn witness(&self, l: &Oml) -> Option<StateFn> {
        self.polytope.witness.clone().map(|v| StateFn::new(l, v))
    }
}

/// No state, exactly one, or infinitely many (positive-dimensional state
/// polytope).
pub fn classify_states(l: &Oml) -> StateClass {
    let polytope = feasibility::solve(&state_system(l));
    let tag = match polytope.status {
        PolyStatus::Empty => StateTag::Stateless,
        PolyStatus::Point => StateTag::UniqueState,
        PolyStatus::PositiveDimensional => StateTag::QuantumLogic,
    };
    StateClass { tag, polytope }
}

/// Extreme states, in lexicographic order of their value tables.
pub fn state_vertices(l: &Oml, cap: usize) -> Result<Vec<StateFn>, FeasError> {
    let vs = feasibility::enumerate_vertices(&state_system(l), cap)?;
    Ok(vs.into_iter().map(|v| StateFn::new(l, v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{boolean_algebra, mo};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    /// State on MO(2) from (m(a), m(b)).
    fn mo2_state(l: &Oml, ma: Rat, mb: Rat) -> StateFn {
        StateFn::from_fn(l, |x| match l.name(x) {
            "0" => Rat::zero(),
            "1" => Rat::one(),
            "a" => ma.clone(),
            "a'" => Rat::one() - &ma,
            "b" => mb.clone(),
            "b'" => Rat::one() - &mb,
            _ => unreachable!(),
        })
    }

    #[test]
    fn table_column_state_is_valid() {
        let l = mo(2).unwrap();
        assert_eq!(validate_state(&l, &mo2_state(&l, q(1, 3), q(1, 2))), Ok(()));
    }

    #[test]
    fn constant_one_fails_additivity() {
        for l in [mo(2).unwrap(), boolean_algebra(2).unwrap()] {
            let s = StateFn::from_fn(&l, |x| if x == l.bot() { Rat::zero() } else { Rat::one() });
            assert!(matches!(validate_state(&l, &s), Err(StateViolation::AdditivityFailure { .. })));
        }
    }

    #[test]
    fn other_violations() {
        let l = mo(2).unwrap();
        let mut s = mo2_state(&l, q(1, 3), q(1, 2));
        s.values[l.e("a").index()] = q(3, 2);
        assert!(matches!(validate_state(&l, &s), Err(StateViolation::OutOfRange { .. })));
        let s = StateFn::from_fn(&l, |_| Rat::zero());
        assert_eq!(validate_state(&l, &s), Err(StateViolation::NotNormalized(Rat::zero())));
    }

    #[test]
    fn boolean_atom_weights() {
        let l = boolean_algebra(2).unwrap();
        let w = |x: Elem| match l.name(x) {
            "0" => Rat::zero(),
            "{1}" => q(1, 3),
            "{2}" => q(2, 3),
            _ => Rat::one(),
        };
        assert_eq!(validate_state(&l, &StateFn::from_fn(&l, w)), Ok(()));
        // solutions are exactly (m{1}, m{2}) with sum 1: a segment
        let info = feasibility::solve(&state_system(&l));
        assert_eq!(info.dim, 1);
    }

    #[test]
    fn classification_dimensions() {
        let c = classify_states(&mo(2).unwrap());
        assert_eq!((c.tag, c.polytope.dim), (StateTag::QuantumLogic, 2));
        let c = classify_states(&boolean_algebra(3).unwrap());
        assert_eq!((c.tag, c.polytope.dim), (StateTag::QuantumLogic, 2));
        assert_eq!(classify_states(&mo(3).unwrap()).polytope.dim, 3);
        let l = mo(2).unwrap();
        assert_eq!(validate_state(&l, &c_witness(&l)), Ok(()));
    }

    fn c_witness(l: &Oml) -> StateFn {
        classify_states(l).witness(l).unwrap()
    }

    #[test]
    fn two_element_lattice_has_a_unique_state() {
        let c = classify_states(&boolean_algebra(1).unwrap());
        assert_eq!((c.tag, c.polytope.dim), (StateTag::UniqueState, 0));
    }

    #[test]
    fn mo2_vertices_are_zero_one_assignments() {
        let l = mo(2).unwrap();
        let vs = state_vertices(&l, 100).unwrap();
        assert_eq!(vs.len(), 4);
        for v in &vs {
            assert_eq!(validate_state(&l, v), Ok(()));
            assert!(v.values().iter().all(|x| x.is_zero() || x.is_one()));
        }
    }

    proptest! {
        #[test]
        fn mixtures_and_complements(a in 0i64..=12, b in 0i64..=12, c in 0i64..=12, d in 0i64..=12, lam in 0i64..=12) {
            let l = mo(2).unwrap();
            let s = mo2_state(&l, q(a, 12), q(b, 12));
            let t = mo2_state(&l, q(c, 12), q(d, 12));
            let m = s.mix(&q(lam, 12), &t);
            prop_assert_eq!(validate_state(&l, &m), Ok(()));
            for x in l.elements() {
                prop_assert_eq!(m.get(x) + m.get(l.ocomp(x)), Rat::one());
            }
        }
    }
}
