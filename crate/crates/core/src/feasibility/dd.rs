//! Double description method for full-dimensional polytopes.
//!
//! The polytope `{ z : a_i · z <= b_i }` is homogenized to the cone
//! `{ (λ, z) : b_i λ - a_i · z >= 0, λ >= 0 }`. Extreme rays with `λ > 0` are
//! the vertices; a ray with `λ = 0` means the polytope is unbounded.
//! Adjacency uses the combinatorial test on zero sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rat::Rat;

use super::simplex::Row;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum DdError {
    Unbounded,
    Blowup,
}

/// Rays are kept as primitive integer vectors.
#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Vec<u64>,
}

impl Ray {
    fn new(v: Vec<BigInt>, zeros: Vec<u64>) -> Ray {
        Ray { v, zeros }
    }

    fn mark_zero(&mut self, i: usize) {
        set_bit(&mut self.zeros, i);
    }
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

/// Positive multiple of a rational vector with coprime integer entries.
fn integral(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&mut out);
    out
}

fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Vertices of a bounded, full-dimensional polytope in `Q^d`. `ray_limit`
/// caps the intermediate ray count.
pub(crate) fn vertices(d: usize, rows: &[Row], ray_limit: usize) -> Result<Vec<Vec<Rat>>, DdError> {
    // homogeneous constraint vectors (b, -a); index 0 is λ >= 0
    let mut h: Vec<Vec<Rat>> = Vec::with_capacity(rows.len() + 1);
    let mut lam = vec![Rat::zero(); d + 1];
    lam[0] = Rat::one();
    h.push(lam);
    for r in rows {
        let mut v = Vec::with_capacity(d + 1);
        v.push(r.b.clone());
        v.extend(r.a.iter().map(|x| -x));
        h.push(v);
    }
    let hi: Vec<Vec<BigInt>> = h.iter().map(|v| integral(v)).collect();
    let m = h.len();
    let words = m.div_ceil(64);

    // greedy choice of d+1 independent rows
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<Vec<Rat>> = Vec::new();
    for (i, row) in h.iter().enumerate() {
        let mut trial = basis_rows.clone();
        trial.push(row.clone());
        if super::elim::rank(&trial) == trial.len() {
            basis_rows = trial;
            chosen.push(i);
            if chosen.len() == d + 1 {
                break;
            }
        }
    }
    if chosen.len() < d + 1 {
        return Err(DdError::Unbounded);
    }

    // initial rays: columns of the inverse of the chosen rows
    let mut rays: Vec<Ray> = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let e: Vec<Rat> = (0..=d).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        let v = super::elim::solve_dense(&basis_rows, &e).expect("chosen rows are independent");
        let mut zeros = vec![0u64; words];
        for (i, &row) in chosen.iter().enumerate() {
            if i != j {
                set_bit(&mut zeros, row);
            }
        }
        rays.push(Ray::new(integral(&v), zeros));
    }

    let mut processed = vec![false; m];
    for &i in &chosen {
        processed[i] = true;
    }
    for i in 0..m {
        if processed[i] {
            continue;
        }
        processed[i] = true;
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(&hi[i], &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.mark_zero(i);
                }
            }
            continue;
        }
        // for every constraint, the set of rays tight on it
        let rwords = rays.len().div_ceil(64);
        let mut tight = vec![vec![0u64; rwords]; m];
        for (r, ray) in rays.iter().enumerate() {
            for (w, &bits) in ray.zeros.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let j = w * 64 + b.trailing_zeros() as usize;
                    set_bit(&mut tight[j], r);
                    b &= b - 1;
                }
            }
        }
        let mut all = vec![u64::MAX; rwords];
        if !rays.len().is_multiple_of(64) {
            all[rwords - 1] = (1u64 << (rays.len() % 64)) - 1;
        }
        let mut acc = vec![0u64; rwords];
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let count: u32 = rays[p].zeros.iter().zip(&rays[n].zeros).map(|(a, b)| (a & b).count_ones()).sum();
                if (count as usize) + 1 < d {
                    continue;
                }
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[n].zeros).map(|(a, b)| a & b).collect();
                // adjacent iff no third ray is tight on every common constraint
                acc.copy_from_slice(&all);
                for (w, &bits) in common.iter().enumerate() {
                    let mut b = bits;
                    while b != 0 {
                        let j = w * 64 + b.trailing_zeros() as usize;
                        for (a, t) in acc.iter_mut().zip(&tight[j]) {
                            *a &= t;
                        }
                        b &= b - 1;
                    }
                }
                let others: u32 = acc.iter().map(|w| w.count_ones()).sum();
                let dominated = others > 2;
                if dominated {
                    continue;
                }
                let mut v: Vec<BigInt> =
                    rays[n].v.iter().zip(&rays[p].v).map(|(xn, xp)| &vals[p] * xn - &vals[n] * xp).collect();
                primitive(&mut v);
                let mut zeros = common;
                set_bit(&mut zeros, i);
                fresh.push(Ray::new(v, zeros));
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(&vals) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.mark_zero(i);
            }
            next.push(r);
        }
        next.extend(fresh);
        if next.len() > ray_limit {
            return Err(DdError::Blowup);
        }
        rays = next;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        if r.v[0].is_zero() {
            return Err(DdError::Unbounded);
        }
        let den = Rat::from_big(r.v[0].clone());
        out.push(r.v[1..].iter().map(|x| Rat::from_big(x.clone()) / &den).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(a: &[i64], b: i64) -> Row {
        Row { a: a.iter().map(|&x| Rat::int(x)).collect(), b: Rat::int(b) }
    }

    #[test]
    fn cube_has_eight_vertices() {
        let mut rows = Vec::new();
        for i in 0..3 {
            let mut e = [0; 3];
            e[i] = 1;
            rows.push(row(&e, 1));
            e[i] = -1;
            rows.push(row(&e, 0));
        }
        let mut v = vertices(3, &rows, 1000).unwrap();
        v.sort();
        assert_eq!(v.len(), 8);
        assert!(v.iter().all(|z| z.iter().all(|x| x.is_zero() || x.is_one())));
    }

    #[test]
    fn redundant_and_degenerate_constraints() {
        // square pyramid apex over unit square: 5 vertices, apex degenerate (4 facets)
        let rows = vec![
            row(&[0, 0, -1], 0),
            row(&[-2, 0, 1], 0),
            row(&[2, 0, 1], 2),
            row(&[0, -2, 1], 0),
            row(&[0, 2, 1], 2),
            row(&[0, 0, 1], 5), // redundant
        ];
        let v = vertices(3, &rows, 1000).unwrap();
        assert_eq!(v.len(), 5);
        assert!(v.contains(&vec![Rat::half(), Rat::half(), Rat::one()]));
    }

    #[test]
    fn unbounded_detected() {
        let rows = vec![row(&[-1, 0], 0), row(&[0, -1], 0), row(&[0, 1], 1)];
        assert_eq!(vertices(2, &rows, 1000).unwrap_err(), DdError::Unbounded);
        let rows = vec![row(&[0, -1], 0), row(&[0, 1], 1)];
        assert_eq!(vertices(2, &rows, 1000).unwrap_err(), DdError::Unbounded);
    }
}
