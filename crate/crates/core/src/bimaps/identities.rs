//! Exhaustive checks of identities that valid maps are known to satisfy.

use serde::Serialize;

use crate::lattice::{Elem, Oml};
use crate::rat::Rat;
use crate::states::{validate_state, StateFn, StateViolation};

use super::{check_g_map, classify_family, BiMap, Connective, Gamma, Violation};

/// Instances checked and the first failure, if any. `IdentityFailure` uses
/// the same shape as an axiom violation: for inequalities the failing
/// relation is `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checked: usize,
    pub failure: Option<IdentityFailure>,
}

pub type IdentityFailure = Violation;

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

struct Tally<'a> {
    l: &'a Oml,
    checked: usize,
    failure: Option<Violation>,
}

impl<'a> Tally<'a> {
    fn new(l: &'a Oml) -> Tally<'a> {
        Tally { l, checked: 0, failure: None }
    }

    fn record(&mut self, name: &'static str, at: &[Elem], holds: bool, lhs: Rat, rhs: Rat) {
        self.checked += 1;
        if !holds && self.failure.is_none() {
            let elements = at.iter().map(|&x| self.l.name(x).to_string()).collect();
            self.failure = Some(Violation { axiom: name, elements, lhs, rhs });
        }
    }

    fn eq(&mut self, name: &'static str, at: &[Elem], lhs: Rat, rhs: Rat) {
        let holds = lhs == rhs;
        self.record(name, at, holds, lhs, rhs);
    }

    fn le(&mut self, name: &'static str, at: &[Elem], lhs: Rat, rhs: Rat) {
        let holds = lhs <= rhs;
        self.record(name, at, holds, lhs, rhs);
    }

    fn done(self) -> IdentityReport {
        IdentityReport { checked: self.checked, failure: self.failure }
    }
}

/// For every compatible pair:
/// `G(a,b) = G(a∧b, a∧b) + G(a∧b', 0) + G(0, a'∧b) - 2 G(0,0)`.
pub fn verify_lemma_komp(g: &BiMap) -> IdentityReport {
    let l = g.lattice();
    let z = l.bot();
    let mut t = Tally::new(l);
    for (a, b) in l.compatible_pairs() {
        let ab = l.meet(a, b);
        let abc = l.meet(a, l.ocomp(b));
        let acb = l.meet(l.ocomp(a), b);
        let rhs = g.get(ab, ab) + g.get(abc, z) + g.get(z, acb) - Rat::int(2) * g.get(z, z);
        t.eq("compatible-decomposition", &[a, b], g.get(a, b).clone(), rhs);
    }
    t.done()
}

/// The four Γ9 identities, for every element, pair, and orthogonal
/// partition of unity:
/// 1. `G(1,a) = 1`, `G(0,a) = 0`;
/// 2. `G(a,0) = G(a,a) = G(a,1)`;
/// 3. `G(a,0) = (G(a,b) + G(a,b')) / 2`;
/// 4. `G(a,0) = (1/n) Σ G(a,b_i)` for every partition `b_1, ..., b_n`.
pub fn verify_gamma9_identities(g: &BiMap) -> IdentityReport {
    let l = g.lattice();
    let (z, o) = (l.bot(), l.top());
    let mut t = Tally::new(l);
    for a in l.elements() {
        t.eq("gamma9-1", &[o, a], g.get(o, a).clone(), Rat::one());
        t.eq("gamma9-1", &[z, a], g.get(z, a).clone(), Rat::zero());
    }
    for a in l.elements() {
        t.eq("gamma9-2", &[a, a], g.get(a, z).clone(), g.get(a, a).clone());
        t.eq("gamma9-2", &[a, o], g.get(a, z).clone(), g.get(a, o).clone());
    }
    for a in l.elements() {
        for b in l.elements() {
            let avg = (g.get(a, b) + g.get(a, l.ocomp(b))) * Rat::half();
            t.eq("gamma9-3", &[a, b], g.get(a, z).clone(), avg);
        }
    }
    let partitions = l.orthogonal_partitions_of_unity();
    for a in l.elements() {
        for part in &partitions {
            let n = Rat::int(part.len() as i64);
            let sum: Rat = part.iter().map(|&b| g.get(a, b).clone()).sum();
            let mut at = vec![a];
            at.extend(part);
            t.eq("gamma9-4", &at, g.get(a, z).clone(), sum / n);
        }
    }
    t.done()
}

/// The five listed s-map properties, plus `m_p(a) = p(1,a) = p(a,1)`:
/// 1. `a ↔ b ⇒ p(a,b) = p(a∧b, a∧b) = p(b,a)`;
/// 2. `a <= b ⇒ p(a,b) = p(a,a)`;
/// 3. `a <= b ⇒ p(a,c) <= p(b,c)` and `p(c,a) <= p(c,b)`;
/// 4. `p(a,b) <= min(p(a,a), p(b,b))`;
/// 5. `m_p(a) = p(a,a)` is a state.
pub fn verify_smap_properties(p: &BiMap) -> IdentityReport {
    let l = p.lattice();
    let o = l.top();
    let mut t = Tally::new(l);
    for a in l.elements() {
        for b in l.elements() {
            if l.is_compatible(a, b) {
                let ab = l.meet(a, b);
                t.eq("smap-1", &[a, b], p.get(a, b).clone(), p.get(ab, ab).clone());
                t.eq("smap-1", &[a, b], p.get(a, b).clone(), p.get(b, a).clone());
            }
            if l.leq(a, b) {
                t.eq("smap-2", &[a, b], p.get(a, b).clone(), p.get(a, a).clone());
                for c in l.elements() {
                    t.le("smap-3", &[a, b, c], p.get(a, c).clone(), p.get(b, c).clone());
                    t.le("smap-3", &[a, b, c], p.get(c, a).clone(), p.get(c, b).clone());
                }
            }
            t.le("smap-4", &[a, b], p.get(a, b).clone(), p.get(a, a).clone().min(p.get(b, b).clone()));
        }
    }
    let m = StateFn::from_fn(l, |a| p.get(a, a).clone());
    let state_ok = validate_state(l, &m).is_ok();
    t.record("smap-5", &[], state_ok, Rat::int(i64::from(state_ok)), Rat::one());
    for a in l.elements() {
        t.eq("smap-5", &[o, a], p.get(o, a).clone(), p.get(a, a).clone());
        t.eq("smap-5", &[a, o], p.get(a, o).clone(), p.get(a, a).clone());
    }
    t.done()
}

/// Purity verdict: `witness` is the first pair (row-major) with
/// `G(a,b) != G(a,0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Purity {
    pub pure: bool,
    pub witness: Option<(Elem, Elem)>,
}

/// `G(a,b) = G(a,0)` for all pairs.
pub fn is_pure_projection(g: &BiMap) -> Purity {
    let l = g.lattice();
    let z = l.bot();
    for a in l.elements() {
        for b in l.elements() {
            if g.get(a, b) != g.get(a, z) {
                return Purity { pure: false, witness: Some((a, b)) };
            }
        }
    }
    Purity { pure: true, witness: None }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("not a G-map: {0}")]
    NotAGMap(Violation),
    #[error("{0} has no connective semantics")]
    UnsupportedFamily(Gamma),
    #[error("the induced map is not a state: {0}")]
    InducedNotState(StateViolation),
}

/// The state a map of family `gamma` induces, read off its diagonal or
/// margins.
fn induced_state(g: &BiMap, gamma: Gamma) -> Option<StateFn> {
    let l = g.lattice();
    let z = l.bot();
    let one = Rat::one();
    let f: Box<dyn Fn(Elem) -> Rat> = match gamma.index() {
        1 | 8 => return None,
        2 => Box::new(|x| g.get(x, x).clone()),
        3 | 4 | 9 => Box::new(|x| g.get(x, z).clone()),
        5 => Box::new(|x| &one - g.get(x, x)),
        6 | 7 | 11 => Box::new(|x| &one - g.get(x, z)),
        10 => Box::new(|x| g.get(z, x).clone()),
        12 => Box::new(|x| &one - g.get(z, x)),
        _ => return None,
    };
    Some(StateFn::from_fn(l, f))
}

fn connective_value(l: &Oml, m: Option<&StateFn>, c: Connective, a: Elem, b: Elem) -> Rat {
    let (ac, bc) = (l.ocomp(a), l.ocomp(b));
    let m = |x: Elem| m.expect("state-based connective").get(x).clone();
    match c {
        Connective::Falsum => Rat::zero(),
        Connective::Verum => Rat::one(),
        Connective::And => m(l.meet(a, b)),
        Connective::Or => m(l.join(a, b)),
        Connective::Xor => m(l.join(l.meet(a, bc), l.meet(ac, b))),
        Connective::Nand => m(l.join(ac, bc)),
        Connective::Nor => m(l.meet(ac, bc)),
        Connective::Iff => m(l.join(l.meet(a, b), l.meet(ac, bc))),
        Connective::First => m(a),
        Connective::Second => m(b),
        Connective::NotFirst => m(ac),
        Connective::NotSecond => m(bc),
    }
}

/// On every compatible pair, `G(a,b)` equals the induced-state probability
/// of the family's connective.
pub fn semantic_check_on_compatible(g: &BiMap) -> Result<IdentityReport, SemanticsError> {
    let l = g.lattice();
    if let Some(v) = check_g_map(g).first_violation {
        return Err(SemanticsError::NotAGMap(v));
    }
    let gamma = classify_family(g).expect("corners checked").gamma;
    let conn = gamma.connective().ok_or(SemanticsError::UnsupportedFamily(gamma))?;
    let m = induced_state(g, gamma);
    if let Some(m) = &m {
        validate_state(l, m).map_err(SemanticsError::InducedNotState)?;
    }
    let mut t = Tally::new(l);
    for (a, b) in l.compatible_pairs() {
        let want = connective_value(l, m.as_ref(), conn, a, b);
        t.eq("connective", &[a, b], g.get(a, b).clone(), want);
    }
    Ok(t.done())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimaps::{build_table3_family, derive_pure_projection_from_s, Table3Params};
    use crate::lattice::{boolean_algebra, mo};

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn table3(l: &Oml) -> BiMap<'_> {
        build_table3_family(l, &Table3Params::new(q(1, 3), q(2, 3), q(0, 1), q(1, 1))).unwrap()
    }

    #[test]
    fn table3_identities_and_purity() {
        let l = mo(2).unwrap();
        let g = table3(&l);
        assert!(verify_lemma_komp(&g).ok());
        assert!(verify_gamma9_identities(&g).ok());
        let p = is_pure_projection(&g);
        assert_eq!(p, Purity { pure: false, witness: Some((l.e("a"), l.e("b"))) });
        let r = semantic_check_on_compatible(&g).unwrap();
        assert!(r.ok() && r.checked > 0);
    }

    #[test]
    fn komp_on_diagonal_is_trivial() {
        // (x, x) is always compatible and the identity collapses
        let l = mo(2).unwrap();
        let g = table3(&l);
        let r = verify_lemma_komp(&g);
        assert!(r.checked >= l.len());
    }

    #[test]
    fn broken_gamma9_identity_reported() {
        let l = mo(2).unwrap();
        let g = table3(&l).with_value(l.e("a"), l.e("a"), q(1, 5)).unwrap();
        let f = verify_gamma9_identities(&g).failure.unwrap();
        assert_eq!((f.axiom, f.elements), ("gamma9-2", vec!["a".to_string(), "a".to_string()]));
    }

    #[test]
    fn smap_semantics_on_boolean() {
        let l = boolean_algebra(2).unwrap();
        let m = |x: Elem| match l.name(x) {
            "0" => q(0, 1),
            "{1}" => q(1, 4),
            "{2}" => q(3, 4),
            _ => q(1, 1),
        };
        let p = BiMap::from_fn(&l, |x, y| m(l.meet(x, y))).unwrap();
        assert!(verify_smap_properties(&p).ok());
        assert!(semantic_check_on_compatible(&p).unwrap().ok());
        let gp = derive_pure_projection_from_s(&p);
        assert!(is_pure_projection(&gp).pure);
        assert!(verify_gamma9_identities(&gp).ok());
    }

    #[test]
    fn constant_maps() {
        let l = mo(2).unwrap();
        let one = BiMap::constant(&l, Rat::one()).unwrap();
        assert!(semantic_check_on_compatible(&one).unwrap().ok());
        let zero = BiMap::constant(&l, Rat::zero()).unwrap();
        assert!(semantic_check_on_compatible(&zero).unwrap().ok());
        let half = BiMap::constant(&l, Rat::half()).unwrap();
        assert!(matches!(semantic_check_on_compatible(&half), Err(SemanticsError::NotAGMap(_))));
    }
}
