//! The sixteen Γ-families, indexed by the corner values
//! `(G(0,0), G(0,1), G(1,0), G(1,1))`.

use std::fmt;

use serde::Serialize;

use crate::rat::Rat;

use super::BiMap;

/// Corner values in the order `(G(0,0), G(0,1), G(1,0), G(1,1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corners(pub [bool; 4]);

impl Corners {
    pub fn from_bits(bits: [u8; 4]) -> Corners {
        Corners(bits.map(|b| b != 0))
    }

    pub fn bits(self) -> [u8; 4] {
        self.0.map(u8::from)
    }

    pub fn complement(self) -> Corners {
        Corners(self.0.map(|b| !b))
    }

    pub fn values(self) -> [Rat; 4] {
        self.0.map(|b| if b { Rat::one() } else { Rat::zero() })
    }

    /// All sixteen patterns in lexicographic order.
    pub fn all() -> impl Iterator<Item = Corners> {
        (0u8..16).map(|m| Corners([m & 8 != 0, m & 4 != 0, m & 2 != 0, m & 1 != 0]))
    }
}

impl fmt::Display for Corners {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.bits();
        write!(f, "({a},{b},{c},{d})")
    }
}

impl Serialize for Corners {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.bits().serialize(s)
    }
}

/// Family index `1..=16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Gamma(u8);

// indexed by Γ number - 1
const TABLE: [[u8; 4]; 16] = [
    [0, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 1, 1, 1],
    [0, 1, 1, 0],
    [1, 1, 1, 0],
    [1, 0, 0, 0],
    [1, 0, 0, 1],
    [1, 1, 1, 1],
    [0, 0, 1, 1],
    [0, 1, 0, 1],
    [1, 1, 0, 0],
    [1, 0, 1, 0],
    // no tabulated semantics; lexicographic order of the leftovers
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [1, 0, 1, 1],
    [1, 1, 0, 1],
];

impl Gamma {
    pub fn new(index: u8) -> Option<Gamma> {
        (1..=16).contains(&index).then_some(Gamma(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn from_corners(c: Corners) -> Gamma {
        let bits = c.bits();
        let i = TABLE.iter().position(|t| *t == bits).expect("every pattern is tabulated");
        Gamma(i as u8 + 1)
    }

    pub fn corners(self) -> Corners {
        Corners::from_bits(TABLE[self.0 as usize - 1])
    }

    /// The family of `1 - G` for `G` in this family.
    pub fn complement(self) -> Gamma {
        Gamma::from_corners(self.corners().complement())
    }

    /// Connective whose probability a map of this family gives on
    /// compatible pairs, when one is known.
    pub fn connective(self) -> Option<Connective> {
        use Connective::*;
        Some(match self.0 {
            1 => Falsum,
            2 => And,
            3 => Or,
            4 => Xor,
            5 => Nand,
            6 => Nor,
            7 => Iff,
            8 => Verum,
            9 => First,
            10 => Second,
            11 => NotFirst,
            12 => NotSecond,
            _ => return None,
        })
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ{}", self.0)
    }
}

/// Logical connectives of two propositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Connective {
    Falsum,
    /// `a ∧ b`
    And,
    /// `a ∨ b`
    Or,
    /// `(a ⇔ b)' = (a ∧ b') ∨ (a' ∧ b)`
    Xor,
    /// `a' ∨ b'`
    Nand,
    /// `a' ∧ b'`
    Nor,
    /// `a ⇔ b = (a ∧ b) ∨ (a' ∧ b')`
    Iff,
    Verum,
    First,
    Second,
    NotFirst,
    NotSecond,
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::Falsum => "0",
            Connective::And => "a ∧ b",
            Connective::Or => "a ∨ b",
            Connective::Xor => "(a ⇔ b)'",
            Connective::Nand => "a' ∨ b'",
            Connective::Nor => "a' ∧ b'",
            Connective::Iff => "a ⇔ b",
            Connective::Verum => "1",
            Connective::First => "a",
            Connective::Second => "b",
            Connective::NotFirst => "a'",
            Connective::NotSecond => "b'",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyTag {
    pub corners: Corners,
    pub gamma: Gamma,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("corner values {0:?} are not all in {{0, 1}}")]
pub struct InvalidCorners(pub [Rat; 4]);

/// Read the four corners and look up the family.
pub fn classify_family(g: &BiMap) -> Result<FamilyTag, InvalidCorners> {
    let vals = g.corners();
    if vals.iter().any(|v| !v.is_zero() && !v.is_one()) {
        return Err(InvalidCorners(vals));
    }
    let corners = Corners(vals.each_ref().map(Rat::is_one));
    Ok(FamilyTag { corners, gamma: Gamma::from_corners(corners) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u8) -> Gamma {
        Gamma::new(i).unwrap()
    }

    #[test]
    fn tabulated_corners() {
        assert_eq!(Gamma::from_corners(Corners::from_bits([0, 0, 0, 1])), g(2));
        assert_eq!(Gamma::from_corners(Corners::from_bits([0, 0, 1, 1])), g(9));
        assert_eq!(Gamma::from_corners(Corners::from_bits([1, 1, 1, 1])), g(8));
        for i in 1..=8 {
            let [_, b, c, _] = g(i).corners().0;
            assert_eq!(b, c, "Γ{i} has G(0,1) = G(1,0)");
        }
        for i in 9..=16 {
            let [_, b, c, _] = g(i).corners().0;
            assert_ne!(b, c);
        }
    }

    #[test]
    fn bijection_and_leftover_order() {
        let mut seen: Vec<Gamma> = Corners::all().map(Gamma::from_corners).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 16);
        let leftovers: Vec<Corners> = (13..=16).map(|i| g(i).corners()).collect();
        let mut sorted = leftovers.clone();
        sorted.sort();
        assert_eq!(leftovers, sorted);
        for c in Corners::all() {
            assert_eq!(Gamma::from_corners(c).corners(), c);
        }
    }

    #[test]
    fn complement_pairs() {
        for (x, y) in [(9, 11), (10, 12), (2, 5), (3, 6), (1, 8), (4, 7)] {
            assert_eq!(g(x).complement(), g(y));
            assert_eq!(g(y).complement(), g(x));
        }
        for i in 1..=16 {
            assert_eq!(g(i).complement().complement(), g(i));
        }
    }

    #[test]
    fn semantics_only_for_twelve() {
        assert!((1..=12).all(|i| g(i).connective().is_some()));
        assert!((13..=16).all(|i| g(i).connective().is_none()));
        assert_eq!(Gamma::new(0), None);
        assert_eq!(Gamma::new(17), None);
    }
}
