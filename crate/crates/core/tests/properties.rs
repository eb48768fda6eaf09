use omlprob::bimaps::{
    build_table3_family, check_g_map, check_j_map, check_s_map, classify_family, complement_map, derive_j_from_s,
    induced_state_from_gamma9, is_pure_projection, smap_system, BiMap, Gamma, Table3Params,
};
use omlprob::feasibility;
use omlprob::lattice::{boolean_algebra, horizontal_sum, mo, validate_oml, Limits, Oml};
use omlprob::states::{validate_state, StateFn};
use omlprob::Rat;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn unit_rat() -> impl Strategy<Value = Rat> {
    (1i64..=30).prop_flat_map(|d| (0..=d).prop_map(move |n| Rat::new(n, d)))
}

fn lattice() -> impl Strategy<Value = Oml> {
    prop_oneof![
        (1usize..=4).prop_map(|n| boolean_algebra(n).unwrap()),
        (2usize..=5).prop_map(|n| mo(n).unwrap()),
        proptest::collection::vec(2usize..=3, 2..=3)
            .prop_map(|atoms| horizontal_sum(&atoms.iter().map(|&n| boolean_algebra(n).unwrap()).collect::<Vec<_>>())
                .unwrap()),
    ]
}

/// A state on `2^{1..n}` from atom weights (uniform when all are zero).
fn boolean_state(l: &Oml, weights: &[Rat]) -> StateFn {
    let mut weights = weights.to_vec();
    if weights.iter().all(Rat::is_zero) {
        weights.iter_mut().for_each(|w| *w = Rat::one());
    }
    let total: Rat = weights.iter().sum();
    let atoms = l.atoms();
    StateFn::from_fn(l, |x| {
        let mass: Rat = atoms.iter().zip(&weights).filter(|(&t, _)| l.leq(t, x)).map(|(_, w)| w.clone()).sum();
        mass / total.clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_laws(l in lattice()) {
        prop_assert_eq!(validate_oml(&l.to_raw(), Limits { max_elements: 64 }).unwrap(), l.clone());
        for a in l.elements() {
            prop_assert_eq!(l.ocomp(l.ocomp(a)), a);
            for b in l.elements() {
                prop_assert_eq!(l.ocomp(l.join(a, b)), l.meet(l.ocomp(a), l.ocomp(b)));
                prop_assert_eq!(l.is_compatible(a, b), l.is_compatible(b, a));
                if l.is_orthogonal(a, b) {
                    prop_assert!(l.is_compatible(a, b));
                }
            }
        }
        let covered: std::collections::HashSet<_> = l.blocks().into_iter().flatten().collect();
        prop_assert_eq!(covered.len(), l.len());
    }

    #[test]
    fn horizontal_sum_interiors_are_incompatible(parts in proptest::collection::vec(2usize..=3, 2..=3)) {
        let ls: Vec<Oml> = parts.iter().map(|&n| boolean_algebra(n).unwrap()).collect();
        let h = horizontal_sum(&ls).unwrap();
        prop_assert_eq!(h.blocks().len(), parts.len());
        for a in h.elements() {
            for b in h.elements() {
                let part = |x: omlprob::Elem| h.name(x).split('.').next().map(str::to_string);
                let interior = |x| x != h.bot() && x != h.top();
                if interior(a) && interior(b) && part(a) != part(b) {
                    prop_assert!(!h.is_compatible(a, b));
                }
            }
        }
    }

    #[test]
    fn boolean_meet_maps_are_smaps(n in 1usize..=3, w in proptest::collection::vec(unit_rat(), 3)) {
        let l = boolean_algebra(n).unwrap();
        let m = boolean_state(&l, &w[..n]);
        prop_assert_eq!(validate_state(&l, &m), Ok(()));
        let p = BiMap::from_fn(&l, |x, y| m.get(l.meet(x, y)).clone()).unwrap();
        prop_assert!(check_s_map(&p).ok);
        prop_assert!(smap_system(&l).contains(p.values()));
        let jq = derive_j_from_s(&p).unwrap();
        prop_assert!(check_j_map(&jq).ok);
        for x in l.elements() {
            for y in l.elements() {
                prop_assert_eq!(jq.get(x, y), m.get(l.join(x, y)));
            }
        }
    }

    #[test]
    fn table3_family(r1 in unit_rat(), r2 in unit_rat(), u1 in unit_rat(), u2 in unit_rat()) {
        let l = mo(2).unwrap();
        let params = Table3Params::new(r1.clone(), r2.clone(), u1.clone(), u2.clone());
        let g = build_table3_family(&l, &params).unwrap();
        prop_assert!(check_g_map(&g).ok);
        prop_assert_eq!(classify_family(&g).unwrap().gamma, Gamma::new(9).unwrap());
        let h = complement_map(&g);
        prop_assert!(check_g_map(&h).ok);
        prop_assert_eq!(classify_family(&h).unwrap().gamma, Gamma::new(11).unwrap());
        prop_assert_eq!(is_pure_projection(&g).pure, r1 == r2 && u1 == u2);
        for b in l.elements() {
            prop_assert_eq!(validate_state(&l, &induced_state_from_gamma9(&g, b)), Ok(()));
        }
        prop_assert_eq!(g.at("a'", "b"), &(Rat::one() - &r1));
    }

    #[test]
    fn mixtures_of_smap_vertices_agree_with_the_system(
        weights in proptest::collection::vec(0i64..=5, 6),
        entry in 0usize..36,
        up in any::<bool>(),
    ) {
        let l = mo(2).unwrap();
        let sys = smap_system(&l);
        let vs = feasibility::enumerate_vertices(&sys, 100).unwrap();
        let total: i64 = weights.iter().sum::<i64>().max(1);
        let mut x = vec![Rat::zero(); 36];
        for (v, &w) in vs.iter().zip(&weights) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += Rat::new(w, total) * vi;
            }
        }
        if weights.iter().all(|&w| w == 0) {
            x = vs[0].clone();
        }
        prop_assert!(check_s_map(&BiMap::new(&l, x.clone()).unwrap()).ok);
        prop_assert!(sys.contains(&x));
        let delta = if up { q(1, 100) } else { q(-1, 100) };
        x[entry] += delta;
        if x[entry].in_unit_interval() {
            let checker = check_s_map(&BiMap::new(&l, x.clone()).unwrap()).ok;
            prop_assert_eq!(checker, sys.contains(&x));
            prop_assert!(!checker);
        }
    }
}
