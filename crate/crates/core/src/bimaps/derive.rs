//! Maps derived from other maps, the parametric Γ9 family on MO(2), and the
//! states induced by s-maps and Γ9 maps.

use crate::lattice::{Elem, Oml};
use crate::rat::Rat;
use crate::states::StateFn;

use super::{BiMap, BiMapError};

/// `1 - G` pointwise.
pub fn complement_map<'l>(g: &BiMap<'l>) -> BiMap<'l> {
    BiMap::new(g.lattice(), g.values().iter().map(|v| Rat::one() - v).collect()).expect("1 - [0,1] stays in [0,1]")
}

/// `q_p(a, b) = m_p(a) + m_p(b) - p(a, b)` with `m_p(a) = p(a, a)`.
pub fn derive_j_from_s<'l>(p: &BiMap<'l>) -> Result<BiMap<'l>, BiMapError> {
    BiMap::from_fn(p.lattice(), |a, b| p.get(a, a) + p.get(b, b) - p.get(a, b))
}

/// `d_p(a, b) = p(a, b') + p(a', b)`.
pub fn derive_d_from_s<'l>(p: &BiMap<'l>) -> Result<BiMap<'l>, BiMapError> {
    let l = p.lattice();
    BiMap::from_fn(l, |a, b| p.get(a, l.ocomp(b)) + p.get(l.ocomp(a), b))
}

/// `G_p(a, b) = p(a, b) + p(a, b') = p(a, a)`; the value is taken from the
/// diagonal.
pub fn derive_pure_projection_from_s<'l>(p: &BiMap<'l>) -> BiMap<'l> {
    BiMap::from_fn(p.lattice(), |a, _| p.get(a, a).clone()).expect("diagonal of a [0,1] table")
}

/// `m_p(a) = p(a, a)`.
pub fn induced_state_from_smap(p: &BiMap) -> StateFn {
    StateFn::from_fn(p.lattice(), |a| p.get(a, a).clone())
}

/// `m_b(a) = G(a, b)`.
pub fn induced_state_from_gamma9(g: &BiMap, b: Elem) -> StateFn {
    StateFn::from_fn(g.lattice(), |a| g.get(a, b).clone())
}

/// Parameters `(r1, r2, u1, u2)` of the Γ9 family on MO(2): `r1 = G(a,b)`,
/// `r2 = G(a,b')`, `u1 = G(b,a)`, `u2 = G(b,a')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table3Params {
    pub r1: Rat,
    pub r2: Rat,
    pub u1: Rat,
    pub u2: Rat,
}

impl Table3Params {
    pub fn new(r1: Rat, r2: Rat, u1: Rat, u2: Rat) -> Table3Params {
        Table3Params { r1, r2, u1, u2 }
    }

    pub fn alpha(&self) -> Rat {
        (&self.r1 + &self.r2) * Rat::half()
    }

    pub fn beta(&self) -> Rat {
        (&self.u1 + &self.u2) * Rat::half()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Table3Error {
    #[error("parameter {name} = {value} lies outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: Rat },
    #[error("the lattice is not MO(2) with elements 0, 1, a, a', b, b': {0}")]
    NotMo2(String),
}

fn check_mo2(l: &Oml) -> Result<[Elem; 4], Table3Error> {
    if l.len() != 6 {
        return Err(Table3Error::NotMo2(format!("{} elements", l.len())));
    }
    let get = |n: &str| l.elem(n).ok_or_else(|| Table3Error::NotMo2(format!("no element {n:?}")));
    let (a, ac, b, bc) = (get("a")?, get("a'")?, get("b")?, get("b'")?);
    if l.ocomp(a) != ac || l.ocomp(b) != bc {
        return Err(Table3Error::NotMo2("a' and b' must be the complements of a and b".into()));
    }
    if l.is_compatible(a, b) {
        return Err(Table3Error::NotMo2("a and b are compatible".into()));
    }
    Ok([a, ac, b, bc])
}

/// The Γ9 map on MO(2) determined by `(r1, r2, u1, u2)`, with
/// `α = (r1 + r2)/2` and `β = (u1 + u2)/2`:
///
/// ```text
///        a     a'    b     b'    0     1
/// a      α     α     r1    r2    α     α
/// a'    1-α   1-α   1-r1  1-r2  1-α   1-α
/// b      u1    u2    β     β     β     β
/// b'    1-u1  1-u2  1-β   1-β   1-β   1-β
/// 0      0     0     0     0     0     0
/// 1      1     1     1     1     1     1
/// ```
pub fn build_table3_family<'l>(l: &'l Oml, params: &Table3Params) -> Result<BiMap<'l>, Table3Error> {
    for (name, value) in [("r1", &params.r1), ("r2", &params.r2), ("u1", &params.u1), ("u2", &params.u2)] {
        if !value.in_unit_interval() {
            return Err(Table3Error::ParamOutOfRange { name, value: value.clone() });
        }
    }
    let [a, ac, b, bc] = check_mo2(l)?;
    let (alpha, beta) = (params.alpha(), params.beta());
    let row_a = |y: Elem| -> Rat {
        if y == b {
            params.r1.clone()
        } else if y == bc {
            params.r2.clone()
        } else {
            alpha.clone()
        }
    };
    let row_b = |y: Elem| -> Rat {
        if y == a {
            params.u1.clone()
        } else if y == ac {
            params.u2.clone()
        } else {
            beta.clone()
        }
    };
    let g = BiMap::from_fn(l, |x, y| {
        if x == a {
            row_a(y)
        } else if x == ac {
            Rat::one() - row_a(y)
        } else if x == b {
            row_b(y)
        } else if x == bc {
            Rat::one() - row_b(y)
        } else if x == l.bot() {
            Rat::zero()
        } else {
            Rat::one()
        }
    })
    .expect("parameters in [0,1] give entries in [0,1]");
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimaps::{check_g_map, classify_family, Gamma};
    use crate::lattice::{boolean_algebra, mo};
    use crate::states::validate_state;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn table3_entries() {
        let l = mo(2).unwrap();
        let g = build_table3_family(&l, &Table3Params::new(q(1, 3), q(2, 3), q(0, 1), q(1, 1))).unwrap();
        assert_eq!(g.at("a", "b"), &q(1, 3));
        assert_eq!(g.at("a", "0"), &q(1, 2));
        assert_eq!(g.at("b", "a"), &q(0, 1));
        assert_eq!(g.at("b", "0"), &q(1, 2));
        assert_eq!(g.at("a'", "b"), &q(2, 3));
        assert!(check_g_map(&g).ok);
        assert_eq!(classify_family(&g).unwrap().gamma, Gamma::new(9).unwrap());
    }

    #[test]
    fn equal_parameters_give_constant_row() {
        let l = mo(2).unwrap();
        let g = build_table3_family(&l, &Table3Params::new(q(2, 5), q(2, 5), q(1, 7), q(3, 7))).unwrap();
        let a = l.e("a");
        assert!(l.elements().all(|y| g.get(a, y) == &q(2, 5)));
    }

    #[test]
    fn table3_errors() {
        let l = mo(2).unwrap();
        let bad = Table3Params::new(q(4, 3), q(0, 1), q(0, 1), q(0, 1));
        assert_eq!(
            build_table3_family(&l, &bad).unwrap_err(),
            Table3Error::ParamOutOfRange { name: "r1", value: q(4, 3) }
        );
        let b3 = boolean_algebra(3).unwrap();
        let ok = Table3Params::new(q(0, 1), q(0, 1), q(0, 1), q(0, 1));
        assert!(matches!(build_table3_family(&b3, &ok), Err(Table3Error::NotMo2(_))));
    }

    #[test]
    fn derived_values_on_an_smap() {
        // p(x, y) = m(x ∧ y) with m({1}) = 1/3, m({2}) = 2/3
        let l = boolean_algebra(2).unwrap();
        let m = |x: Elem| match l.name(x) {
            "0" => q(0, 1),
            "{1}" => q(1, 3),
            "{2}" => q(2, 3),
            _ => q(1, 1),
        };
        let p = BiMap::from_fn(&l, |x, y| m(l.meet(x, y))).unwrap();
        let jq = derive_j_from_s(&p).unwrap();
        let d = derive_d_from_s(&p).unwrap();
        let g = derive_pure_projection_from_s(&p);
        for x in l.elements() {
            assert_eq!(jq.get(x, x), &m(x));
            assert_eq!(d.get(x, x), &q(0, 1));
            for y in l.elements() {
                assert_eq!(jq.get(x, y), &m(l.join(x, y)));
                assert_eq!(g.get(x, y), &m(x));
            }
        }
        assert_eq!(jq.get(l.top(), l.top()), &q(1, 1));
        assert_eq!(d.get(l.top(), l.bot()), &q(1, 1));
        let ms = induced_state_from_smap(&p);
        assert_eq!(validate_state(&l, &ms), Ok(()));
        assert_eq!(complement_map(&complement_map(&g)), g);
    }

    #[test]
    fn gamma9_columns_are_states() {
        let l = mo(2).unwrap();
        let g = build_table3_family(&l, &Table3Params::new(q(1, 3), q(2, 3), q(0, 1), q(1, 1))).unwrap();
        for b in l.elements() {
            assert_eq!(validate_state(&l, &induced_state_from_gamma9(&g, b)), Ok(()));
        }
        let mb = induced_state_from_gamma9(&g, l.e("b"));
        assert_eq!(mb.get(l.e("a")), &q(1, 3));
        let m0 = induced_state_from_gamma9(&g, l.bot());
        assert_eq!(m0.get(l.e("a")), &q(1, 2));
    }
}
