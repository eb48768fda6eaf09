//! The built-in lattices used for exhaustive checks.

use crate::lattice::{boolean_algebra, horizontal_sum, mo, Oml};

/// Boolean 2^{1,2,3}, MO(2), MO(3) and the horizontal sum of three
/// four-element Boolean algebras, labelled.
pub fn suite() -> Vec<(String, Oml)> {
    let b4 = boolean_algebra(2).expect("4 elements");
    vec![
        ("boolean-3".to_string(), boolean_algebra(3).expect("8 elements")),
        ("mo-2".to_string(), mo(2).expect("6 elements")),
        ("mo-3".to_string(), mo(3).expect("8 elements")),
        ("hsum-b4-b4-b4".to_string(), horizontal_sum(&[b4.clone(), b4.clone(), b4]).expect("8 elements")),
    ]
}

/// Boolean 2^{1,2}, MO(2), MO(3), in sweep order.
pub fn sweep_suite() -> Vec<(String, Oml)> {
    vec![
        ("boolean-2".to_string(), boolean_algebra(2).expect("4 elements")),
        ("mo-2".to_string(), mo(2).expect("6 elements")),
        ("mo-3".to_string(), mo(3).expect("8 elements")),
    ]
}
