//! Exact Gaussian elimination helpers.

use std::collections::BTreeMap;

use crate::rat::Rat;

/// `x = offset + lin · t`, with `lin` stored row-per-variable (`n × k`).
#[derive(Debug, Clone)]
pub(crate) struct Affine {
    pub offset: Vec<Rat>,
    pub lin: Vec<Vec<Rat>>,
    pub k: usize,
}

impl Affine {
    pub fn apply(&self, t: &[Rat]) -> Vec<Rat> {
        self.offset
            .iter()
            .zip(&self.lin)
            .map(|(o, row)| {
                let mut v = o.clone();
                for (c, x) in row.iter().zip(t) {
                    if !c.is_zero() {
                        v.add_mul(c, x);
                    }
                }
                v
            })
            .collect()
    }

    /// `self ∘ inner`: first map `z ↦ t` by `inner`, then `t ↦ x` by `self`.
    pub fn compose(&self, inner: &Affine) -> Affine {
        let offset = self.apply(&inner.offset);
        let lin = self
            .lin
            .iter()
            .map(|row| {
                (0..inner.k)
                    .map(|c| {
                        let mut v = Rat::zero();
                        for (a, irow) in row.iter().zip(&inner.lin) {
                            v.add_mul(a, &irow[c]);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Affine { offset, lin, k: inner.k }
    }

    /// Pull a linear form `coeffs · x` back to `(coeffs · lin) · t + coeffs · offset`.
    pub fn pull_back(&self, terms: &[(usize, Rat)]) -> (Vec<Rat>, Rat) {
        let mut a = vec![Rat::zero(); self.k];
        let mut c = Rat::zero();
        for (j, coef) in terms {
            c.add_mul(coef, &self.offset[*j]);
            for (slot, l) in a.iter_mut().zip(&self.lin[*j]) {
                slot.add_mul(coef, l);
            }
        }
        (a, c)
    }

    pub fn pull_back_dense(&self, coeffs: &[Rat]) -> (Vec<Rat>, Rat) {
        let terms: Vec<(usize, Rat)> =
            coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        self.pull_back(&terms)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Elimination {
    pub affine: Affine,
    /// Indices of the input rows that produced a pivot (a maximal
    /// independent subset).
    pub pivot_rows: Vec<usize>,
}

/// Parametrize the solution set of the equality rows over `n` variables.
/// `Err(i)` names the first row that made the system inconsistent.
pub(crate) fn parametrize<'a, I>(n: usize, rows: I) -> Result<Elimination, usize>
where
    I: IntoIterator<Item = (&'a [(usize, Rat)], &'a Rat)>,
{
    // pivot var -> (non-pivot terms, rhs) meaning x_p + Σ terms = rhs
    let mut pivots: BTreeMap<usize, (BTreeMap<usize, Rat>, Rat)> = BTreeMap::new();
    let mut pivot_rows = Vec::new();
    for (idx, (terms, rhs)) in rows.into_iter().enumerate() {
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (j, c) in terms {
            if !c.is_zero() {
                *acc.entry(*j).or_insert_with(Rat::zero) += c;
            }
        }
        let mut r = rhs.clone();
        let hits: Vec<usize> = acc.keys().copied().filter(|j| pivots.contains_key(j)).collect();
        for p in hits {
            let coef = match acc.remove(&p) {
                Some(c) => c,
                None => continue,
            };
            let (prow, prhs) = &pivots[&p];
            r -= &coef * prhs;
            for (j, a) in prow {
                let e = acc.entry(*j).or_insert_with(Rat::zero);
                *e -= &coef * a;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let Some((&p, _)) = acc.iter().next_back() else {
            if !r.is_zero() {
                return Err(idx);
            }
            continue;
        };
        let lead = acc.remove(&p).expect("pivot present");
        let inv = lead.recip();
        for c in acc.values_mut() {
            *c = &*c * &inv;
        }
        let r = r * &inv;
        for (prow, prhs) in pivots.values_mut() {
            if let Some(a) = prow.remove(&p) {
                *prhs -= &a * &r;
                for (j, c) in &acc {
                    let e = prow.entry(*j).or_insert_with(Rat::zero);
                    *e -= &a * c;
                }
                prow.retain(|_, c| !c.is_zero());
            }
        }
        pivots.insert(p, (acc, r));
        pivot_rows.push(idx);
    }

    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains_key(j)).collect();
    let mut col = vec![usize::MAX; n];
    for (c, &j) in free.iter().enumerate() {
        col[j] = c;
    }
    let k = free.len();
    let mut offset = vec![Rat::zero(); n];
    let mut lin = vec![vec![Rat::zero(); k]; n];
    for &j in &free {
        lin[j][col[j]] = Rat::one();
    }
    for (p, (prow, prhs)) in pivots {
        offset[p] = prhs;
        for (j, a) in prow {
            lin[p][col[j]] = -a;
        }
    }
    Ok(Elimination { affine: Affine { offset, lin, k }, pivot_rows })
}

/// Rank of a dense matrix.
pub(crate) fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        let pivot: Vec<Rat> = m[r].iter().map(|x| x * &inv).collect();
        for row in m.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        m[r] = pivot;
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Some solution of `a · x = b` (free variables set to zero), or `None`.
pub(crate) fn solve_dense(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        let pivot: Vec<Rat> = m[r].iter().map(|x| x * &inv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        m[r] = pivot;
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::int(n)
    }

    #[test]
    fn parametrizes_a_plane() {
        // x + y + z = 1, x - y = 0
        let rows = [(vec![(0, r(1)), (1, r(1)), (2, r(1))], r(1)), (vec![(0, r(1)), (1, r(-1))], r(0))];
        let e = parametrize(3, rows.iter().map(|(t, b)| (t.as_slice(), b))).unwrap();
        assert_eq!(e.affine.k, 1);
        assert_eq!(e.pivot_rows, vec![0, 1]);
        for t in [r(0), r(3), Rat::new(-1, 2)] {
            let x = e.affine.apply(&[t]);
            assert_eq!(&x[0] + &x[1] + &x[2], r(1));
            assert_eq!(x[0], x[1]);
        }
    }

    #[test]
    fn detects_inconsistency_and_redundancy() {
        let rows = [(vec![(0, r(1))], r(1)), (vec![(0, r(2))], r(2)), (vec![(0, r(1))], r(0))];
        assert_eq!(parametrize(1, rows.iter().map(|(t, b)| (t.as_slice(), b))).unwrap_err(), 2);
    }

    #[test]
    fn rank_and_solve() {
        let a = vec![vec![r(1), r(2)], vec![r(2), r(4)], vec![r(0), r(1)]];
        assert_eq!(rank(&a), 2);
        let x = solve_dense(&a, &[r(3), r(6), r(1)]).unwrap();
        assert_eq!(x, vec![r(1), r(1)]);
        assert!(solve_dense(&a, &[r(3), r(5), r(1)]).is_none());
    }
}
