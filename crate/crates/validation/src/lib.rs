//! Independent oracles for checking `omlprob` results. They share nothing
//! with the library's solver: plain Gaussian elimination and brute-force
//! basis enumeration.

use omlprob::lattice::{Elem, Oml};
use omlprob::Rat;

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Unique solution of `rows` (each `(coeffs, rhs)`) in `n` unknowns, if
/// the system is consistent and has rank `n`.
pub fn solve_unique(rows: &[(Vec<Rat>, Rat)], n: usize) -> Option<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[n].is_zero()) || pivots.len() < n {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

fn dedup_sorted(mut v: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    v.sort();
    v.dedup();
    v
}

/// Vertices of `{x : eqs, 0 <= x <= 1}`: every way of pinning variables to
/// 0 or 1 that, with the equalities, determines a unique point in the box.
pub fn box_vertices(eqs: &[(Vec<Rat>, Rat)], n: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    let mut choice = vec![0u8; n];
    loop {
        let mut rows = eqs.to_vec();
        for (j, &c) in choice.iter().enumerate() {
            if c > 0 {
                let mut a = vec![Rat::zero(); n];
                a[j] = Rat::one();
                rows.push((a, Rat::int(c as i64 - 1)));
            }
        }
        if let Some(x) = solve_unique(&rows, n) {
            if x.iter().all(Rat::in_unit_interval) {
                out.push(x);
            }
        }
        let mut j = 0;
        while j < n && choice[j] == 2 {
            choice[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
        choice[j] += 1;
    }
    dedup_sorted(out)
}

/// Vertices of `{x : a_i · x <= b_i}` in `n` unknowns: every `n`-subset of
/// the inequalities solved as equalities, kept when feasible.
pub fn ineq_vertices(ineqs: &[(Vec<Rat>, Rat)], n: usize) -> Vec<Vec<Rat>> {
    let feasible = |x: &[Rat]| {
        ineqs.iter().all(|(a, b)| {
            let v: Rat = a.iter().zip(x).map(|(c, y)| c * y).sum();
            &v <= b
        })
    };
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    let m = ineqs.len();
    loop {
        let rows: Vec<_> = idx.iter().map(|&i| ineqs[i].clone()).collect();
        if let Some(x) = solve_unique(&rows, n) {
            if feasible(&x) {
                out.push(x);
            }
        }
        let Some(i) = (0..n).rev().find(|&i| idx[i] < m - n + i) else { break };
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
    dedup_sorted(out)
}

/// Affine dimension of a finite point set, `-1` when empty.
pub fn affine_dim(points: &[Vec<Rat>]) -> i64 {
    let Some(p0) = points.first() else { return -1 };
    let n = p0.len();
    let mut rows: Vec<Vec<Rat>> = points[1..].iter().map(|p| p.iter().zip(p0).map(|(x, y)| x - y).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if !r[col].is_zero() {
                let f = &r[col] / &pivot[col];
                for (x, p) in r.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank as i64
}

/// An s-map on MO(2) is fixed by `m(a)`, `m(b)`, `x = p(a,b)` and
/// `y = p(b,a)`: row/column additivity with the complements gives every
/// other entry.
pub fn mo2_smap(l: &Oml, ma: &Rat, mb: &Rat, x: &Rat, y: &Rat) -> Vec<Rat> {
    let e = |s: &str| l.e(s);
    let (a, ac, b, bc, z, o) = (e("a"), e("a'"), e("b"), e("b'"), e("0"), e("1"));
    let m = |t: Elem| -> Rat {
        if t == a {
            ma.clone()
        } else if t == ac {
            Rat::one() - ma
        } else if t == b {
            mb.clone()
        } else if t == bc {
            Rat::one() - mb
        } else if t == o {
            Rat::one()
        } else {
            Rat::zero()
        }
    };
    let rest = |v: &Rat| Rat::one() - ma - mb + v;
    let mut out = Vec::new();
    for s in l.elements() {
        for t in l.elements() {
            let v = if s == z || t == z || l.is_orthogonal(s, t) {
                Rat::zero()
            } else if s == o || s == t {
                m(t)
            } else if t == o {
                m(s)
            } else if (s, t) == (a, b) {
                x.clone()
            } else if (s, t) == (a, bc) {
                ma - x
            } else if (s, t) == (ac, b) {
                mb - x
            } else if (s, t) == (ac, bc) {
                rest(x)
            } else if (s, t) == (b, a) {
                y.clone()
            } else if (s, t) == (bc, a) {
                ma - y
            } else if (s, t) == (b, ac) {
                mb - y
            } else {
                assert_eq!((s, t), (bc, ac));
                rest(y)
            };
            out.push(v);
        }
    }
    out
}

/// Vertices of the MO(2) s-map polytope from the four-parameter
/// description `max(0, m(a)+m(b)-1) <= x, y <= min(m(a), m(b))`.
pub fn mo2_smap_vertices_oracle(l: &Oml) -> Vec<Vec<Rat>> {
    let r = |v: [i64; 4]| v.map(Rat::int).to_vec();
    let mut ineqs = Vec::new();
    for k in [2, 3] {
        // -v <= 0, ma + mb - v <= 1, v - ma <= 0, v - mb <= 0
        let mut e = [0i64; 4];
        e[k] = -1;
        ineqs.push((r(e), Rat::zero()));
        let mut e = [1, 1, 0, 0];
        e[k] = -1;
        ineqs.push((r(e), Rat::one()));
        let mut e = [-1, 0, 0, 0];
        e[k] = 1;
        ineqs.push((r(e), Rat::zero()));
        let mut e = [0, -1, 0, 0];
        e[k] = 1;
        ineqs.push((r(e), Rat::zero()));
    }
    for k in [0, 1] {
        let mut e = [0i64; 4];
        e[k] = 1;
        ineqs.push((r(e), Rat::one()));
        e[k] = -1;
        ineqs.push((r(e), Rat::zero()));
    }
    let params = ineq_vertices(&ineqs, 4);
    dedup_sorted(params.iter().map(|p| mo2_smap(l, &p[0], &p[1], &p[2], &p[3])).collect())
}

/// Equalities of a system as dense rows.
pub fn dense_eqs(sys: &omlprob::feasibility::LinSystem) -> Vec<(Vec<Rat>, Rat)> {
    sys.eqs()
        .iter()
        .map(|c| {
            let mut a = vec![Rat::zero(); sys.num_vars()];
            for (j, v) in &c.terms {
                a[*j] = v.clone();
            }
            (a, c.rhs.clone())
        })
        .collect()
}
