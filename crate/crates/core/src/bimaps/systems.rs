//! The axiom systems as linear constraints over the `|L|²` table entries.
//!
//! Variable `a * |L| + b` holds the value at `(a, b)`. Every system carries
//! the box `0 <= x <= 1`. Instances that reduce to `0 = 0` are dropped.

use crate::feasibility::LinSystem;
use crate::lattice::{Elem, Oml};
use crate::rat::Rat;

use super::{Corners, MapSystem};

/// Index of the variable for `(a, b)`.
pub fn pair_var(l: &Oml, a: Elem, b: Elem) -> usize {
    a.index() * l.len() + b.index()
}

fn new_system(l: &Oml, letter: &str) -> LinSystem {
    let mut vars = Vec::with_capacity(l.len() * l.len());
    for a in l.elements() {
        for b in l.elements() {
            vars.push(format!("{letter}({}|{})", l.name(a), l.name(b)));
        }
    }
    let mut sys = LinSystem::new(vars);
    for v in 0..l.len() * l.len() {
        sys.add_bounds(v, Rat::zero(), Rat::one());
    }
    sys
}

struct Builder<'a> {
    l: &'a Oml,
    sys: LinSystem,
}

impl Builder<'_> {
    /// `Σ coef · f(x, y) = rhs`.
    fn eq(&mut self, terms: &[(i64, Elem, Elem)], rhs: Rat) {
        let l = self.l;
        let c = crate::feasibility::Constraint::new(
            terms.iter().map(|&(k, x, y)| (pair_var(l, x, y), Rat::int(k))),
            rhs.clone(),
        );
        if c.terms.is_empty() && rhs.is_zero() {
            return;
        }
        self.sys.add_eq(c.terms, c.rhs);
    }

    /// Third-axiom instances: `f(a v b, c) - f(a, c) - f(b, c) + k·f(r(c)) = 0`
    /// and the column form with `col(c)`.
    fn additivity(&mut self, row: impl Fn(Elem) -> Option<(Elem, Elem)>, col: impl Fn(Elem) -> Option<(Elem, Elem)>) {
        let l = self.l;
        for (a, b) in l.orthogonal_pairs() {
            let ab = l.join(a, b);
            for c in l.elements() {
                let mut t = vec![(1, ab, c), (-1, a, c), (-1, b, c)];
                if let Some((x, y)) = row(c) {
                    t.push((1, x, y));
                }
                self.eq(&t, Rat::zero());
                let mut t = vec![(1, c, ab), (-1, c, a), (-1, c, b)];
                if let Some((x, y)) = col(c) {
                    t.push((1, x, y));
                }
                self.eq(&t, Rat::zero());
            }
        }
    }
}

/// (s1)–(s3).
pub fn smap_system(l: &Oml) -> LinSystem {
    let mut bld = Builder { l, sys: new_system(l, "p") };
    let o = l.top();
    bld.eq(&[(1, o, o)], Rat::one());
    for (a, b) in l.orthogonal_pairs() {
        bld.eq(&[(1, a, b)], Rat::zero());
    }
    bld.additivity(|_| None, |_| None);
    bld.sys
}

/// (j1)–(j3).
pub fn jmap_system(l: &Oml) -> LinSystem {
    let mut bld = Builder { l, sys: new_system(l, "q") };
    let (z, o) = (l.bot(), l.top());
    bld.eq(&[(1, z, z)], Rat::zero());
    bld.eq(&[(1, o, o)], Rat::one());
    for (a, b) in l.orthogonal_pairs() {
        bld.eq(&[(1, a, b), (-1, a, a), (-1, b, b)], Rat::zero());
    }
    bld.additivity(|c| Some((c, c)), |c| Some((c, c)));
    bld.sys
}

/// (d1)–(d3).
pub fn dmap_system(l: &Oml) -> LinSystem {
    let mut bld = Builder { l, sys: new_system(l, "d") };
    let (z, o) = (l.bot(), l.top());
    for a in l.elements() {
        bld.eq(&[(1, a, a)], Rat::zero());
    }
    bld.eq(&[(1, o, z)], Rat::one());
    bld.eq(&[(1, z, o)], Rat::one());
    for (a, b) in l.orthogonal_pairs() {
        bld.eq(&[(1, a, b), (-1, a, z), (-1, z, b)], Rat::zero());
    }
    bld.additivity(|c| Some((z, c)), |c| Some((c, z)));
    bld.sys
}

/// (G1) with the corners fixed to `corners`, then (G2)–(G3).
pub fn gmap_system(l: &Oml, corners: Corners) -> LinSystem {
    let mut bld = Builder { l, sys: new_system(l, "G") };
    let (z, o) = (l.bot(), l.top());
    let [c00, c01, c10, c11] = corners.values();
    bld.eq(&[(1, z, z)], c00);
    bld.eq(&[(1, z, o)], c01);
    bld.eq(&[(1, o, z)], c10);
    bld.eq(&[(1, o, o)], c11);
    for (a, b) in l.orthogonal_pairs() {
        bld.eq(&[(1, a, b), (-1, a, z), (-1, z, b), (1, z, z)], Rat::zero());
    }
    bld.additivity(|c| Some((z, c)), |c| Some((c, z)));
    bld.sys
}

/// The system for `system`; G-maps need their corners.
pub fn map_system(l: &Oml, system: MapSystem, corners: Option<Corners>) -> Option<LinSystem> {
    Some(match system {
        MapSystem::S => smap_system(l),
        MapSystem::J => jmap_system(l),
        MapSystem::D => dmap_system(l),
        MapSystem::G => gmap_system(l, corners?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimaps::{check_map, check_s_map, BiMap, Gamma};
    use crate::feasibility::{self, PolyStatus};
    use crate::lattice::{boolean_algebra, mo};

    #[test]
    fn smap_witnesses_recheck() {
        for l in [boolean_algebra(2).unwrap(), mo(2).unwrap()] {
            let info = feasibility::solve(&smap_system(&l));
            assert_eq!(info.status, PolyStatus::PositiveDimensional);
            let p = BiMap::new(&l, info.witness.unwrap()).unwrap();
            assert!(check_s_map(&p).ok);
        }
    }

    #[test]
    fn every_system_vertex_passes_its_checker() {
        let l = mo(2).unwrap();
        for (sys, kind) in [
            (smap_system(&l), MapSystem::S),
            (jmap_system(&l), MapSystem::J),
            (dmap_system(&l), MapSystem::D),
            (gmap_system(&l, Gamma::new(9).unwrap().corners()), MapSystem::G),
        ] {
            let vs = feasibility::enumerate_vertices(&sys, 10_000).unwrap();
            assert!(!vs.is_empty());
            for v in vs {
                let m = BiMap::new(&l, v).unwrap();
                assert!(check_map(kind, &m).ok, "{kind} vertex {m:?}");
            }
        }
    }

    #[test]
    fn variable_names() {
        let l = mo(2).unwrap();
        let s = smap_system(&l);
        assert_eq!(s.vars()[pair_var(&l, l.e("a"), l.e("b"))], "p(a|b)");
        assert!(map_system(&l, MapSystem::G, None).is_none());
    }
}
