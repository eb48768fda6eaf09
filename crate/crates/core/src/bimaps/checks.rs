//! Exhaustive axiom checkers. Each reports the first failing instance in a
//! fixed order: the first axiom, then the second over ordered orthogonal
//! pairs, then the third over (orthogonal pair, c) with the row identity
//! before the column identity.

use crate::lattice::{Elem, Oml};
use crate::rat::Rat;

use super::{AxiomReport, BiMap, MapSystem, Violation};

fn names(l: &Oml, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&x| l.name(x).to_string()).collect()
}

fn eq_or(axiom: &'static str, l: &Oml, at: &[Elem], lhs: Rat, rhs: Rat) -> Result<(), Violation> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Violation { axiom, elements: names(l, at), lhs, rhs })
    }
}

/// Shared skeleton of the third axiom in every system:
/// `f(a v b, c) = f(a, c) + f(b, c) - f(row_corr(c), c)` and the column
/// analogue, where the correction is `0` (s-maps) or a fixed entry.
fn additivity(
    m: &BiMap,
    row_axiom: &'static str,
    col_axiom: &'static str,
    row_corr: impl Fn(Elem) -> Rat,
    col_corr: impl Fn(Elem) -> Rat,
) -> Result<(), Violation> {
    let l = m.lattice();
    for (a, b) in l.orthogonal_pairs() {
        let ab = l.join(a, b);
        for c in l.elements() {
            eq_or(row_axiom, l, &[a, b, c], m.get(ab, c).clone(), m.get(a, c) + m.get(b, c) - row_corr(c))?;
            eq_or(col_axiom, l, &[a, b, c], m.get(c, ab).clone(), m.get(c, a) + m.get(c, b) - col_corr(c))?;
        }
    }
    Ok(())
}

fn s_axioms(p: &BiMap) -> Result<(), Violation> {
    let l = p.lattice();
    let o = l.top();
    eq_or("s1", l, &[o, o], p.get(o, o).clone(), Rat::one())?;
    for (a, b) in l.orthogonal_pairs() {
        eq_or("s2", l, &[a, b], p.get(a, b).clone(), Rat::zero())?;
    }
    additivity(p, "s3-row", "s3-col", |_| Rat::zero(), |_| Rat::zero())
}

fn j_axioms(q: &BiMap) -> Result<(), Violation> {
    let l = q.lattice();
    let (z, o) = (l.bot(), l.top());
    eq_or("j1", l, &[z, z], q.get(z, z).clone(), Rat::zero())?;
    eq_or("j1", l, &[o, o], q.get(o, o).clone(), Rat::one())?;
    for (a, b) in l.orthogonal_pairs() {
        eq_or("j2", l, &[a, b], q.get(a, b).clone(), q.get(a, a) + q.get(b, b))?;
    }
    additivity(q, "j3-row", "j3-col", |c| q.get(c, c).clone(), |c| q.get(c, c).clone())
}

fn d_axioms(d: &BiMap) -> Result<(), Violation> {
    let l = d.lattice();
    let (z, o) = (l.bot(), l.top());
    for a in l.elements() {
        eq_or("d1", l, &[a, a], d.get(a, a).clone(), Rat::zero())?;
    }
    eq_or("d1", l, &[o, z], d.get(o, z).clone(), Rat::one())?;
    eq_or("d1", l, &[z, o], d.get(z, o).clone(), Rat::one())?;
    for (a, b) in l.orthogonal_pairs() {
        eq_or("d2", l, &[a, b], d.get(a, b).clone(), d.get(a, z) + d.get(z, b))?;
    }
    additivity(d, "d3-row", "d3-col", |c| d.get(z, c).clone(), |c| d.get(c, z).clone())
}

fn g_axioms(g: &BiMap) -> Result<(), Violation> {
    let l = g.lattice();
    let (z, o) = (l.bot(), l.top());
    for (x, y) in [(z, z), (z, o), (o, z), (o, o)] {
        let v = g.get(x, y);
        if !v.is_zero() && !v.is_one() {
            // rhs: the nearest admissible corner value
            let near = if v < &Rat::half() { Rat::zero() } else { Rat::one() };
            return Err(Violation { axiom: "G1", elements: names(l, &[x, y]), lhs: v.clone(), rhs: near });
        }
    }
    for (a, b) in l.orthogonal_pairs() {
        eq_or("G2", l, &[a, b], g.get(a, b).clone(), g.get(a, z) + g.get(z, b) - g.get(z, z))?;
    }
    additivity(g, "G3-row", "G3-col", |c| g.get(z, c).clone(), |c| g.get(c, z).clone())
}

/// (s1) `p(1,1) = 1`; (s2) `a ⊥ b ⇒ p(a,b) = 0`; (s3) additivity in each
/// argument over orthogonal pairs.
pub fn check_s_map(p: &BiMap) -> AxiomReport {
    AxiomReport::from(MapSystem::S, s_axioms(p).err())
}

/// (j1) `q(0,0) = 0`, `q(1,1) = 1`; (j2) `a ⊥ b ⇒ q(a,b) = q(a,a) + q(b,b)`;
/// (j3) `q(a v b, c) = q(a,c) + q(b,c) - q(c,c)` and its column form.
pub fn check_j_map(q: &BiMap) -> AxiomReport {
    AxiomReport::from(MapSystem::J, j_axioms(q).err())
}

/// (d1) `d(a,a) = 0`, `d(1,0) = d(0,1) = 1`; (d2) `a ⊥ b ⇒ d(a,b) = d(a,0) + d(0,b)`;
/// (d3) `d(a v b, c) = d(a,c) + d(b,c) - d(0,c)` and `d(c, a v b) = d(c,a) + d(c,b) - d(c,0)`.
pub fn check_d_map(d: &BiMap) -> AxiomReport {
    AxiomReport::from(MapSystem::D, d_axioms(d).err())
}

/// (G1) corners in `{0, 1}`; (G2) `a ⊥ b ⇒ G(a,b) = G(a,0) + G(0,b) - G(0,0)`;
/// (G3) `G(a v b, c) = G(a,c) + G(b,c) - G(0,c)` and
/// `G(c, a v b) = G(c,a) + G(c,b) - G(c,0)`.
pub fn check_g_map(g: &BiMap) -> AxiomReport {
    AxiomReport::from(MapSystem::G, g_axioms(g).err())
}

pub fn check_map(system: MapSystem, m: &BiMap) -> AxiomReport {
    match system {
        MapSystem::S => check_s_map(m),
        MapSystem::J => check_j_map(m),
        MapSystem::D => check_d_map(m),
        MapSystem::G => check_g_map(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{boolean_algebra, mo};

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    /// Uniform atom-weight measure on a Boolean algebra built by
    /// `boolean_algebra`, read from the subset names.
    fn uniform(l: &Oml) -> impl Fn(Elem) -> Rat + '_ {
        let atoms = l.atoms().len() as i64;
        move |x| {
            let nm = l.name(x);
            let k = match nm {
                "0" => 0,
                "1" => atoms,
                _ => nm.trim_matches(|c| c == '{' || c == '}').split(',').count() as i64,
            };
            q(k, atoms)
        }
    }

    #[test]
    fn product_map_on_boolean_is_an_smap() {
        let l = boolean_algebra(2).unwrap();
        let m = uniform(&l);
        let p = BiMap::from_fn(&l, |x, y| m(l.meet(x, y))).unwrap();
        assert!(check_s_map(&p).ok);
        // the literal product m(x)m(y) is not: {1} ⊥ {2} but m({1})m({2}) = 1/4
        let prod = BiMap::from_fn(&l, |x, y| m(x) * m(y)).unwrap();
        let r = check_s_map(&prod);
        assert_eq!(r.first_violation.unwrap().axiom, "s2");
    }

    #[test]
    fn orthogonal_pair_must_vanish() {
        let l = mo(2).unwrap();
        let (a, ac) = (l.e("a"), l.e("a'"));
        let p = BiMap::from_fn(&l, |x, y| if (x, y) == (a, ac) { Rat::half() } else { Rat::zero() }).unwrap();
        let p = p.with_value(l.top(), l.top(), Rat::one()).unwrap();
        let v = check_s_map(&p).first_violation.unwrap();
        assert_eq!(v.axiom, "s2");
        assert_eq!(v.elements, vec!["a", "a'"]);
        assert_eq!((v.lhs, v.rhs), (Rat::half(), Rat::zero()));
    }

    #[test]
    fn jmap_examples() {
        let l = boolean_algebra(2).unwrap();
        let zero = BiMap::constant(&l, Rat::zero()).unwrap();
        assert_eq!(check_j_map(&zero).first_violation.unwrap().axiom, "j1");
        let m = uniform(&l);
        let qm = BiMap::from_fn(&l, |x, y| m(l.join(x, y))).unwrap();
        assert!(check_j_map(&qm).ok);
    }

    #[test]
    fn dmap_examples() {
        let l = boolean_algebra(2).unwrap();
        let m = uniform(&l);
        let sym = |x: Elem, y: Elem| l.join(l.meet(x, l.ocomp(y)), l.meet(l.ocomp(x), y));
        let d = BiMap::from_fn(&l, |x, y| m(sym(x, y))).unwrap();
        assert!(check_d_map(&d).ok);
        let x = l.e("{1}");
        let bad = d.with_value(x, x, q(1, 3)).unwrap();
        let v = check_d_map(&bad).first_violation.unwrap();
        assert_eq!((v.axiom, v.elements), ("d1", vec!["{1}".to_string(), "{1}".to_string()]));
    }

    #[test]
    fn column_identity_failure_is_reported() {
        // G(x, y) = m(x) is a G-map; adding a perturbation that is additive in
        // the first argument but not the second breaks only the column identity.
        let l = mo(2).unwrap();
        let m = |x: Elem| match l.name(x) {
            "0" => Rat::zero(),
            "1" => Rat::one(),
            _ => Rat::half(),
        };
        let g = BiMap::from_fn(&l, |x, _| m(x)).unwrap();
        assert!(check_g_map(&g).ok);
        let (a, ac, b) = (l.e("a"), l.e("a'"), l.e("b"));
        let bad = g.with_value(a, b, q(3, 4)).unwrap().with_value(ac, b, q(1, 4)).unwrap();
        let v = check_g_map(&bad).first_violation.unwrap();
        assert_eq!(v.axiom, "G3-col");
        // re-check the witness by hand
        let [x, y, c] = [l.e(&v.elements[0]), l.e(&v.elements[1]), l.e(&v.elements[2])];
        let z = l.bot();
        let lhs = bad.get(c, l.join(x, y)).clone();
        let rhs = bad.get(c, x) + bad.get(c, y) - bad.get(c, z);
        assert_eq!((lhs, rhs), (v.lhs, v.rhs));
    }

    #[test]
    fn non_binary_corner() {
        let l = mo(2).unwrap();
        let g = BiMap::constant(&l, q(1, 3)).unwrap();
        let v = check_g_map(&g).first_violation.unwrap();
        assert_eq!((v.axiom, v.lhs, v.rhs), ("G1", q(1, 3), Rat::zero()));
    }

    #[test]
    fn constructor_enforces_range_and_size() {
        let l = mo(2).unwrap();
        assert!(matches!(BiMap::new(&l, vec![Rat::zero(); 35]), Err(super::super::BiMapError::WrongSize { .. })));
        assert!(matches!(BiMap::constant(&l, q(-1, 2)), Err(super::super::BiMapError::OutOfRange { .. })));
    }
}
