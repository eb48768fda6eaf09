//! Instance-level verdicts for Bell-type inequalities, the Jauch–Piron
//! property, and the pseudometric behaviour of `d_p`.
//!
//! Every question is an exact LP: the left side of an inequality is
//! maximized over the state polytope or the s-map polytope. A verdict is
//! `implied` when every instance's maximum respects the bound (each with an
//! LP duality certificate) and `violated` otherwise; the witness is the
//! instance with the largest excess, first in lexicographic element order.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bimaps::{derive_d_from_s, pair_var, smap_system, BiMap, Violation};
use crate::feasibility::{Certificate, Constraint, FeasError, LpResult, PreparedSystem};
use crate::lattice::{Elem, Oml};
use crate::rat::Rat;
use crate::states::state_system;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Bell1State,
    Bell1Smap,
    Bell2State,
    Bell2Smap,
    JauchPironState,
    JauchPironSmap,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Bell1State,
        Property::Bell1Smap,
        Property::Bell2State,
        Property::Bell2Smap,
        Property::JauchPironState,
        Property::JauchPironSmap,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::Bell1State => "bell1-state",
            Property::Bell1Smap => "bell1-smap",
            Property::Bell2State => "bell2-state",
            Property::Bell2Smap => "bell2-smap",
            Property::JauchPironState => "jauch-piron-state",
            Property::JauchPironSmap => "jauch-piron-smap",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Property, String> {
        Property::ALL.into_iter().find(|p| p.id() == s).ok_or_else(|| format!("unknown property {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Implied,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Implied => "implied",
            Verdict::Violated => "violated",
        })
    }
}

/// Variable assignment keyed by element (`"a"`) or ordered pair (`"a|b"`),
/// in lattice order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(pub Vec<(String, Rat)>);

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

/// A concrete state or s-map violating one instance of the property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<String>,
    pub claim: String,
    /// The quantity the claim bounds, evaluated at the witness.
    pub value: Rat,
    pub assignment: Assignment,
    /// The raw variable vector (element- or pair-indexed).
    #[serde(skip)]
    pub point: Vec<Rat>,
}

/// One examined instance. `max` is the exact maximum of the claim's left
/// side (`None` when its premises are unsatisfiable).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceCertificate {
    pub elements: Vec<String>,
    pub claim: String,
    /// The claim is `objective <= bound`.
    pub bound: Rat,
    pub max: Option<Rat>,
    #[serde(skip)]
    pub certificate: Option<Certificate>,
    /// The system the maximum was taken over, with premises appended.
    #[serde(skip)]
    pub system: Option<crate::feasibility::LinSystem>,
    #[serde(skip)]
    pub objective: Vec<(usize, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub scope: String,
    pub verdict: Verdict,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<InstanceCertificate>,
    /// For `bell2-smap` with the pseudometric restriction: the verdict over
    /// all s-maps, reported next to the restricted one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unrestricted: Option<Box<PropertyVerdict>>,
}

impl PropertyVerdict {
    pub fn is_implied(&self) -> bool {
        self.verdict == Verdict::Implied
    }
}

#[derive(Clone, Copy)]
enum Vars {
    State,
    Smap,
}

fn assignment(l: &Oml, vars: Vars, x: &[Rat]) -> Assignment {
    Assignment(match vars {
        Vars::State => l.elements().map(|e| (l.name(e).to_string(), x[e.index()].clone())).collect(),
        Vars::Smap => {
            let mut out = Vec::with_capacity(x.len());
            for a in l.elements() {
                for b in l.elements() {
                    out.push((format!("{}|{}", l.name(a), l.name(b)), x[pair_var(l, a, b)].clone()));
                }
            }
            out
        }
    })
}

/// Accumulates instances; keeps the most severe violation, first found on
/// ties.
struct Search<'a> {
    l: &'a Oml,
    vars: Vars,
    property: Property,
    scope: String,
    instances: usize,
    best: Option<(Rat, Witness)>,
    certs: Vec<InstanceCertificate>,
}

impl<'a> Search<'a> {
    fn new(l: &'a Oml, vars: Vars, property: Property, scope: &str) -> Search<'a> {
        Search { l, vars, property, scope: scope.to_string(), instances: 0, best: None, certs: Vec::new() }
    }

    /// Maximize `objective` over `sys`; the claim is `objective <= bound`.
    /// `natural` maps the objective value to the quantity reported.
    fn probe(
        &mut self,
        at: &[Elem],
        claim: String,
        sys: &PreparedSystem,
        objective: Vec<(usize, Rat)>,
        bound: &Rat,
        natural: impl Fn(&Rat) -> Rat,
    ) {
        self.instances += 1;
        let elements: Vec<String> = at.iter().map(|&e| self.l.name(e).to_string()).collect();
        match sys.maximize(&objective) {
            LpResult::Unbounded => unreachable!("all variables are boxed"),
            LpResult::Infeasible => self.certs.push(InstanceCertificate {
                elements,
                claim,
                bound: bound.clone(),
                max: None,
                certificate: None,
                system: None,
                objective,
            }),
            LpResult::Optimal(opt) => {
                let excess = &opt.value - bound;
                if excess.is_positive() && self.best.as_ref().is_none_or(|(e, _)| &excess > e) {
                    let w = Witness {
                        elements: elements.clone(),
                        claim: claim.clone(),
                        value: natural(&opt.value),
                        assignment: assignment(self.l, self.vars, &opt.point),
                        point: opt.point.clone(),
                    };
                    self.best = Some((excess, w));
                }
                self.certs.push(InstanceCertificate {
                    elements,
                    claim,
                    bound: bound.clone(),
                    max: Some(opt.value),
                    certificate: Some(opt.certificate),
                    system: Some(sys.system().clone()),
                    objective,
                });
            }
        }
    }

    fn finish(self) -> PropertyVerdict {
        let (verdict, witness, certificates) = match self.best {
            Some((_, w)) => (Verdict::Violated, Some(w), Vec::new()),
            None => (Verdict::Implied, None, self.certs),
        };
        PropertyVerdict {
            property: self.property,
            scope: self.scope,
            verdict,
            instances: self.instances,
            witness,
            certificates,
            unrestricted: None,
        }
    }
}

fn one(i: usize) -> (usize, Rat) {
    (i, Rat::one())
}

fn minus(i: usize) -> (usize, Rat) {
    (i, Rat::int(-1))
}

/// `(a, b)` with `a <= b` in element order.
fn unordered_pairs(l: &Oml) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for a in l.elements() {
        for b in l.elements().filter(|b| *b >= a) {
            out.push((a, b));
        }
    }
    out
}

fn ordered_pairs(l: &Oml) -> Vec<(Elem, Elem)> {
    l.elements().flat_map(|a| l.elements().map(move |b| (a, b))).collect()
}

/// `m(a) + m(b) - m(a∧b) <= 1` for every state and pair.
pub fn bell1_state(l: &Oml) -> PropertyVerdict {
    let sys = PreparedSystem::new(&state_system(l));
    let mut s = Search::new(l, Vars::State, Property::Bell1State, "states");
    for (a, b) in unordered_pairs(l) {
        let (na, nb) = (l.name(a), l.name(b));
        let obj = vec![one(a.index()), one(b.index()), minus(l.meet(a, b).index())];
        let claim = format!("m({na}) + m({nb}) - m({na} ∧ {nb}) <= 1");
        s.probe(&[a, b], claim, &sys, obj, &Rat::one(), Rat::clone);
    }
    s.finish()
}

fn smap_bell1(l: &Oml, sys: &PreparedSystem, s: &mut Search) {
    for (a, b) in ordered_pairs(l) {
        let (na, nb) = (l.name(a), l.name(b));
        let obj = vec![one(pair_var(l, a, a)), one(pair_var(l, b, b)), minus(pair_var(l, a, b))];
        let claim = format!("p({na}|{na}) + p({nb}|{nb}) - p({na}|{nb}) <= 1");
        s.probe(&[a, b], claim, sys, obj, &Rat::one(), Rat::clone);
    }
}

/// `p(a,a) + p(b,b) - p(a,b) <= 1` for every s-map and ordered pair.
pub fn bell1_smap(l: &Oml) -> PropertyVerdict {
    let sys = PreparedSystem::new(&smap_system(l));
    let mut s = Search::new(l, Vars::Smap, Property::Bell1Smap, "s-maps");
    smap_bell1(l, &sys, &mut s);
    s.finish()
}

/// `m(a) + m(b) + m(c) - m(a∧b) - m(a∧c) - m(c∧b) <= 1` for every state
/// and triple `a <= b <= c` (element order).
pub fn bell2_state(l: &Oml) -> PropertyVerdict {
    let sys = PreparedSystem::new(&state_system(l));
    let mut s = Search::new(l, Vars::State, Property::Bell2State, "states");
    for a in l.elements() {
        for b in l.elements().filter(|b| *b >= a) {
            for c in l.elements().filter(|c| *c >= b) {
                let (na, nb, nc) = (l.name(a), l.name(b), l.name(c));
                let obj = vec![
                    one(a.index()),
                    one(b.index()),
                    one(c.index()),
                    minus(l.meet(a, b).index()),
                    minus(l.meet(a, c).index()),
                    minus(l.meet(c, b).index()),
                ];
                let claim =
                    format!("m({na}) + m({nb}) + m({nc}) - m({na} ∧ {nb}) - m({na} ∧ {nc}) - m({nc} ∧ {nb}) <= 1");
                s.probe(&[a, b, c], claim, &sys, obj, &Rat::one(), Rat::clone);
            }
        }
    }
    s.finish()
}

/// Linear constraints making `d_p(x,y) = p(x,y') + p(x',y)` a pseudometric:
/// symmetry on every pair and the triangle inequality on every triple.
/// `d_p(x,x) = 0` already follows from (s2).
pub fn pseudometric_constraints(l: &Oml) -> (Vec<Constraint>, Vec<Constraint>) {
    let d =
        |x: Elem, y: Elem| -> [(usize, Rat); 2] { [one(pair_var(l, x, l.ocomp(y))), one(pair_var(l, l.ocomp(x), y))] };
    let neg = |t: [(usize, Rat); 2]| t.map(|(i, c)| (i, -c));
    let mut eqs = Vec::new();
    for (x, y) in unordered_pairs(l) {
        let c = Constraint::new(d(x, y).into_iter().chain(neg(d(y, x))), Rat::zero());
        if !c.terms.is_empty() {
            eqs.push(c);
        }
    }
    let mut ineqs = Vec::new();
    for x in l.elements() {
        for y in l.elements() {
            for z in l.elements() {
                // d(x,y) - d(x,z) - d(z,y) <= 0
                let c = Constraint::new(d(x, y).into_iter().chain(neg(d(x, z))).chain(neg(d(z, y))), Rat::zero());
                if !c.terms.is_empty() {
                    ineqs.push(c);
                }
            }
        }
    }
    (eqs, ineqs)
}

fn smap_bell2(l: &Oml, sys: &PreparedSystem, s: &mut Search) {
    for a in l.elements() {
        for b in l.elements() {
            for c in l.elements() {
                let (na, nb, nc) = (l.name(a), l.name(b), l.name(c));
                let obj = vec![
                    one(pair_var(l, a, a)),
                    one(pair_var(l, b, b)),
                    one(pair_var(l, c, c)),
                    minus(pair_var(l, a, b)),
                    minus(pair_var(l, a, c)),
                    minus(pair_var(l, c, b)),
                ];
                let claim = format!(
                    "p({na}|{na}) + p({nb}|{nb}) + p({nc}|{nc}) - p({na}|{nb}) - p({na}|{nc}) - p({nc}|{nb}) <= 1"
                );
                s.probe(&[a, b, c], claim, sys, obj, &Rat::one(), Rat::clone);
            }
        }
    }
}

/// `p(a,a) + p(b,b) + p(c,c) - p(a,b) - p(a,c) - p(c,b) <= 1` over ordered
/// triples. With `require_pseudometric` the main verdict ranges over s-maps
/// whose `d_p` is a pseudometric and the unrestricted verdict is attached.
pub fn bell2_smap(l: &Oml, require_pseudometric: bool) -> PropertyVerdict {
    let base = PreparedSystem::new(&smap_system(l));
    let mut s = Search::new(l, Vars::Smap, Property::Bell2Smap, "s-maps");
    smap_bell2(l, &base, &mut s);
    let all = s.finish();
    if !require_pseudometric {
        return all;
    }
    let (eqs, ineqs) = pseudometric_constraints(l);
    let restricted = base.extend(eqs, ineqs);
    let mut s = Search::new(l, Vars::Smap, Property::Bell2Smap, "s-maps whose d_p is a pseudometric");
    smap_bell2(l, &restricted, &mut s);
    let mut v = s.finish();
    v.unrestricted = Some(Box::new(all));
    v
}

fn unit_eq(i: usize) -> Constraint {
    Constraint::new([one(i)], Rat::one())
}

/// `m(a) = m(b) = 1 ⇒ m(a∧b) = 1`, decided by minimizing `m(a∧b)` under
/// the premise.
pub fn jauch_piron_state(l: &Oml) -> PropertyVerdict {
    let base = PreparedSystem::new(&state_system(l));
    let mut s = Search::new(l, Vars::State, Property::JauchPironState, "states");
    for (a, b) in unordered_pairs(l) {
        let (na, nb) = (l.name(a), l.name(b));
        let sys = base.extend(vec![unit_eq(a.index()), unit_eq(b.index())], Vec::new());
        let claim = format!("m({na}) = m({nb}) = 1 => m({na} ∧ {nb}) >= 1");
        let obj = vec![minus(l.meet(a, b).index())];
        s.probe(&[a, b], claim, &sys, obj, &Rat::int(-1), |v| -v);
    }
    s.finish()
}

/// `p(a,a) = p(b,b) = 1 ⇒ p(a,b) = 1` over ordered pairs, plus, for every
/// `a` with `p(a,a) = 1` and every `c`, `p(a,c) = p(c,a) = p(c,c)` (both
/// directions of each identity are maximized).
pub fn jauch_piron_smap(l: &Oml) -> PropertyVerdict {
    let base = PreparedSystem::new(&smap_system(l));
    let mut s = Search::new(l, Vars::Smap, Property::JauchPironSmap, "s-maps");
    for (a, b) in ordered_pairs(l) {
        let (na, nb) = (l.name(a), l.name(b));
        let sys = base.extend(vec![unit_eq(pair_var(l, a, a)), unit_eq(pair_var(l, b, b))], Vec::new());
        let claim = format!("p({na}|{na}) = p({nb}|{nb}) = 1 => p({na}|{nb}) >= 1");
        s.probe(&[a, b], claim, &sys, vec![minus(pair_var(l, a, b))], &Rat::int(-1), |v| -v);
    }
    for a in l.elements() {
        let na = l.name(a);
        let sys = base.extend(vec![unit_eq(pair_var(l, a, a))], Vec::new());
        for c in l.elements() {
            let nc = l.name(c);
            for (x, y, label) in
                [((a, c), (c, c), "p({a}|{c}) - p({c}|{c})"), ((c, a), (c, c), "p({c}|{a}) - p({c}|{c})")]
            {
                let label = label.replace("{a}", na).replace("{c}", nc);
                let (vx, vy) = (pair_var(l, x.0, x.1), pair_var(l, y.0, y.1));
                for (sign, rel) in [(1, "<="), (-1, ">=")] {
                    let claim = format!("p({na}|{na}) = 1 => {label} {rel} 0");
                    let obj = vec![(vx, Rat::int(sign)), (vy, Rat::int(-sign))];
                    s.probe(&[a, c], claim, &sys, obj, &Rat::zero(), move |v| v * Rat::int(sign));
                }
            }
        }
    }
    s.finish()
}

pub fn run_property(l: &Oml, p: Property) -> PropertyVerdict {
    match p {
        Property::Bell1State => bell1_state(l),
        Property::Bell1Smap => bell1_smap(l),
        Property::Bell2State => bell2_state(l),
        Property::Bell2Smap => bell2_smap(l, true),
        Property::JauchPironState => jauch_piron_state(l),
        Property::JauchPironSmap => jauch_piron_smap(l),
    }
}

/// `d(a,a) = 0` for every `a`, then symmetry over pairs `a < b`, then
/// `d(a,b) <= d(a,c) + d(c,b)` over all triples in lexicographic order.
pub fn is_pseudometric(d: &BiMap) -> Result<(), Violation> {
    let l = d.lattice();
    let names = |xs: &[Elem]| xs.iter().map(|&x| l.name(x).to_string()).collect::<Vec<_>>();
    for a in l.elements() {
        if !d.get(a, a).is_zero() {
            return Err(Violation {
                axiom: "zero-diagonal",
                elements: names(&[a]),
                lhs: d.get(a, a).clone(),
                rhs: Rat::zero(),
            });
        }
    }
    for (a, b) in unordered_pairs(l) {
        if d.get(a, b) != d.get(b, a) {
            return Err(Violation {
                axiom: "symmetry",
                elements: names(&[a, b]),
                lhs: d.get(a, b).clone(),
                rhs: d.get(b, a).clone(),
            });
        }
    }
    for a in l.elements() {
        for b in l.elements() {
            for c in l.elements() {
                let rhs = d.get(a, c) + d.get(c, b);
                if d.get(a, b) > &rhs {
                    return Err(Violation {
                        axiom: "triangle",
                        elements: names(&[a, b, c]),
                        lhs: d.get(a, b).clone(),
                        rhs,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Where a sweep found `d_p` failing to be a pseudometric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudometricWitness {
    pub lattice: String,
    pub vertex_index: usize,
    pub smap: Assignment,
    pub d: Assignment,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SweepReport {
    Found {
        witness: PseudometricWitness,
        vertices_checked: usize,
    },
    Exhausted {
        lattices: Vec<String>,
        vertices_checked: usize,
        /// Lattices whose vertex list was cut at the cap.
        truncated: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SweepError {
    #[error("vertex enumeration on {lattice} failed: {source}")]
    Enumeration { lattice: String, source: FeasError },
}

/// Deterministic sweep: lattices in the given order, s-map polytope
/// vertices in lexicographic order (at most `cap` per lattice), then
/// [`is_pseudometric`] on `d_p`.
pub fn search_pseudometric_violation(lattices: &[(String, Oml)], cap: usize) -> Result<SweepReport, SweepError> {
    let mut checked = 0;
    let mut truncated = Vec::new();
    for (label, l) in lattices {
        let vertices = match PreparedSystem::new(&smap_system(l)).enumerate_vertices(cap) {
            Ok(v) => v,
            Err(FeasError::CapExceeded { partial }) => {
                truncated.push(label.clone());
                partial
            }
            Err(source) => return Err(SweepError::Enumeration { lattice: label.clone(), source }),
        };
        for (i, v) in vertices.into_iter().enumerate() {
            checked += 1;
            let p = BiMap::new(l, v).expect("s-map polytope lies in the unit box");
            let d = derive_d_from_s(&p).expect("d_p of an s-map stays in [0, 1]");
            if let Err(violation) = is_pseudometric(&d) {
                let witness = PseudometricWitness {
                    lattice: label.clone(),
                    vertex_index: i,
                    smap: assignment(l, Vars::Smap, p.values()),
                    d: assignment(l, Vars::Smap, d.values()),
                    violation,
                };
                return Ok(SweepReport::Found { witness, vertices_checked: checked });
            }
        }
    }
    Ok(SweepReport::Exhausted {
        lattices: lattices.iter().map(|(n, _)| n.clone()).collect(),
        vertices_checked: checked,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{boolean_algebra, mo};

    #[test]
    fn bell1_on_mo2_and_boolean() {
        let l = mo(2).unwrap();
        let v = bell1_state(&l);
        assert_eq!(v.verdict, Verdict::Violated);
        let w = v.witness.unwrap();
        assert_eq!((w.elements, w.value), (vec!["a".to_string(), "b".to_string()], Rat::int(2)));
        let b = boolean_algebra(3).unwrap();
        assert!(bell1_state(&b).is_implied());
    }

    #[test]
    fn certificates_verify() {
        let l = mo(2).unwrap();
        let v = bell1_smap(&l);
        assert!(v.is_implied());
        assert_eq!(v.certificates.len(), 36);
        for c in &v.certificates {
            let cert = c.certificate.as_ref().unwrap();
            assert!(cert.verify(c.system.as_ref().unwrap(), &c.objective));
            assert!(cert.bound <= c.bound);
        }
    }

    #[test]
    fn jauch_piron() {
        let l = mo(2).unwrap();
        let v = jauch_piron_state(&l);
        assert_eq!(v.verdict, Verdict::Violated);
        let w = v.witness.unwrap();
        assert_eq!(w.value, Rat::zero());
        assert!(jauch_piron_smap(&l).is_implied());
        assert!(jauch_piron_state(&boolean_algebra(2).unwrap()).is_implied());
    }

    #[test]
    fn pseudometric_checks() {
        let l = mo(2).unwrap();
        let d = BiMap::from_fn(&l, |x, y| if x == y { Rat::zero() } else { Rat::one() }).unwrap();
        assert_eq!(is_pseudometric(&d), Ok(()));
        let bad = d.with_value(l.e("a"), l.e("b"), Rat::half()).unwrap();
        assert_eq!(is_pseudometric(&bad).unwrap_err().axiom, "symmetry");
        let sweep = search_pseudometric_violation(&[], 10).unwrap();
        assert!(matches!(sweep, SweepReport::Exhausted { vertices_checked: 0, .. }));
    }

    #[test]
    fn property_ids_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.id().parse::<Property>(), Ok(p));
        }
    }
}
