//! Two-phase dense-tableau simplex over exact rationals.
//!
//! Works on `{ t : a_i · t <= b_i }` with free variables. Variables that have
//! an explicit lower-bound row are shifted to be non-negative, the rest are
//! split into positive and negative parts. Pivoting uses Dantzig's rule until
//! a run of degenerate pivots, then Bland's rule for the rest of the solve,
//! which guarantees termination.

use crate::rat::Rat;

#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub a: Vec<Rat>,
    pub b: Rat,
}

#[derive(Debug, Clone)]
pub(crate) enum Lp {
    Optimal {
        value: Rat,
        point: Vec<Rat>,
        /// Non-negative multipliers with `Σ duals_i a_i = c` and
        /// `Σ duals_i b_i = value`.
        duals: Vec<Rat>,
    },
    Infeasible,
    Unbounded,
}

const DEGENERATE_RUN_BEFORE_BLAND: usize = 25;

struct Tableau {
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
    bland: bool,
    degenerate_run: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.t[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, e: usize, z: &mut [Rat]) {
        let inv = self.t[r][e].recip();
        if !inv.is_one() {
            for x in self.t[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let prow = self.t[r].clone();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !z[e].is_zero() {
            let f = z[e].clone();
            for &j in &nz {
                z[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = e;
    }

    /// Maximize with reduced-cost row `z` (`z[j] = c_j - c_B B⁻¹ A_j`,
    /// `z[ncols] = -value`).
    fn run(&mut self, z: &mut [Rat], allowed: &[bool]) -> Step {
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || !z[j].is_positive() {
                    continue;
                }
                match entering {
                    None => entering = Some(j),
                    Some(best) if !self.bland && z[j] > z[best] => entering = Some(j),
                    _ => {}
                }
                if self.bland {
                    break;
                }
            }
            let Some(e) = entering else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.t.len() {
                let c = &self.t[r][e];
                if !c.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / c;
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return Step::Unbounded;
            };
            if ratio.is_zero() {
                self.degenerate_run += 1;
                if self.degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(r, e, z);
        }
    }
}

/// Maximize `c · t` over `{ t ∈ Q^k : rows }`.
pub(crate) fn maximize(k: usize, rows: &[Row], c: &[Rat]) -> Lp {
    debug_assert_eq!(c.len(), k);
    let m = rows.len();

    // lower bounds from single-coefficient rows with a negative coefficient
    let mut lower: Vec<Option<(Rat, usize)>> = vec![None; k];
    for (i, row) in rows.iter().enumerate() {
        let mut nz = row.a.iter().enumerate().filter(|(_, x)| !x.is_zero());
        if let (Some((f, coef)), None) = (nz.next(), nz.next()) {
            if coef.is_negative() {
                let l = &row.b / coef;
                if lower[f].as_ref().is_none_or(|(cur, _)| l > *cur) {
                    lower[f] = Some((l, i));
                }
            }
        }
    }

    // column layout: y-columns, slacks, artificials
    let mut pos_col = vec![0; k];
    let mut neg_col: Vec<Option<usize>> = vec![None; k];
    let mut ny = 0;
    for f in 0..k {
        pos_col[f] = ny;
        ny += 1;
        if lower[f].is_none() {
            neg_col[f] = Some(ny);
            ny += 1;
        }
    }
    let slack0 = ny;
    let mut rhs = Vec::with_capacity(m);
    let mut negated = Vec::with_capacity(m);
    for row in rows {
        let mut b = row.b.clone();
        for (f, a) in row.a.iter().enumerate() {
            if let Some((l, _)) = &lower[f] {
                b.add_mul(&-a, l);
            }
        }
        negated.push(b.is_negative());
        rhs.push(b);
    }
    let n_art = negated.iter().filter(|&&x| x).count();
    let ncols = slack0 + m + n_art;
    let mut t = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = slack0 + m;
    for (i, row) in rows.iter().enumerate() {
        let mut tr = vec![Rat::zero(); ncols + 1];
        let sign = if negated[i] { Rat::int(-1) } else { Rat::one() };
        for (f, a) in row.a.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            tr[pos_col[f]] = a * &sign;
            if let Some(nc) = neg_col[f] {
                tr[nc] = -(a * &sign);
            }
        }
        tr[slack0 + i] = sign.clone();
        tr[ncols] = &rhs[i] * &sign;
        if negated[i] {
            tr[art] = Rat::one();
            basis.push(art);
            art += 1;
        } else {
            basis.push(slack0 + i);
        }
        t.push(tr);
    }
    let mut tab = Tableau { t, basis, ncols, bland: false, degenerate_run: 0 };
    let is_art = |j: usize| j >= slack0 + m;

    if n_art > 0 {
        // phase 1: maximize -Σ artificials
        let mut z = vec![Rat::zero(); ncols + 1];
        for zj in &mut z[(slack0 + m)..ncols] {
            *zj = Rat::int(-1);
        }
        for (r, &bv) in tab.basis.iter().enumerate() {
            if is_art(bv) {
                for (zj, x) in z.iter_mut().zip(&tab.t[r]) {
                    *zj += x;
                }
            }
        }
        let allowed = vec![true; ncols];
        if let Step::Unbounded = tab.run(&mut z, &allowed) {
            unreachable!("phase-1 objective is bounded above by zero");
        }
        if !z[ncols].is_zero() {
            return Lp::Infeasible;
        }
        // drive remaining zero-level artificials out of the basis
        for r in 0..m {
            if !is_art(tab.basis[r]) {
                continue;
            }
            if let Some(e) = (0..slack0 + m).find(|&j| !tab.t[r][j].is_zero()) {
                let mut dummy = vec![Rat::zero(); ncols + 1];
                tab.pivot(r, e, &mut dummy);
            }
        }
    }

    // phase 2
    let mut cost = vec![Rat::zero(); ncols];
    for f in 0..k {
        cost[pos_col[f]] = c[f].clone();
        if let Some(nc) = neg_col[f] {
            cost[nc] = -&c[f];
        }
    }
    let mut z = vec![Rat::zero(); ncols + 1];
    z[..ncols].clone_from_slice(&cost);
    for (r, &bv) in tab.basis.iter().enumerate() {
        let cb = &cost[bv];
        if cb.is_zero() {
            continue;
        }
        for (zj, x) in z.iter_mut().zip(&tab.t[r]) {
            zj.add_mul(&-cb, x);
        }
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| !is_art(j)).collect();
    tab.bland = false;
    tab.degenerate_run = 0;
    if let Step::Unbounded = tab.run(&mut z, &allowed) {
        return Lp::Unbounded;
    }

    let mut y = vec![Rat::zero(); ncols];
    for (r, &bv) in tab.basis.iter().enumerate() {
        y[bv] = tab.rhs(r).clone();
    }
    let point: Vec<Rat> = (0..k)
        .map(|f| {
            let mut v = y[pos_col[f]].clone();
            if let Some((l, _)) = &lower[f] {
                v += l;
            }
            if let Some(nc) = neg_col[f] {
                v -= &y[nc];
            }
            v
        })
        .collect();
    let value = crate::rat::dot(c, &point);

    let mut duals: Vec<Rat> = (0..m).map(|i| -&z[slack0 + i]).collect();
    for f in 0..k {
        if let Some((_, i)) = &lower[f] {
            duals[*i] -= &z[pos_col[f]];
        }
    }
    Lp::Optimal { value, point, duals }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(a: &[i64], b: i64) -> Row {
        Row { a: a.iter().map(|&x| Rat::int(x)).collect(), b: Rat::int(b) }
    }

    fn check_duals(rows: &[Row], c: &[Rat], lp: &Lp) {
        let Lp::Optimal { value, duals, .. } = lp else { panic!("not optimal") };
        assert!(duals.iter().all(|d| !d.is_negative()));
        for (j, cj) in c.iter().enumerate() {
            let s: Rat = rows.iter().zip(duals).map(|(r, d)| &r.a[j] * d).sum();
            assert_eq!(&s, cj);
        }
        let bound: Rat = rows.iter().zip(duals).map(|(r, d)| &r.b * d).sum();
        assert_eq!(&bound, value);
    }

    #[test]
    fn box_corner() {
        // max x + 2y on the unit square
        let rows = vec![row(&[1, 0], 1), row(&[0, 1], 1), row(&[-1, 0], 0), row(&[0, -1], 0)];
        let c = [Rat::int(1), Rat::int(2)];
        let lp = maximize(2, &rows, &c);
        match &lp {
            Lp::Optimal { value, point, .. } => {
                assert_eq!(*value, Rat::int(3));
                assert_eq!(point, &vec![Rat::int(1), Rat::int(1)]);
            }
            other => panic!("{other:?}"),
        }
        check_duals(&rows, &c, &lp);
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // x + y >= 2, x <= y <= 5 with both variables free: min x = -3
        let rows = vec![row(&[-1, -1], -2), row(&[1, -1], 0), row(&[0, 1], 5)];
        let c = [Rat::int(-1), Rat::zero()];
        let lp = maximize(2, &rows, &c);
        match &lp {
            Lp::Optimal { value, .. } => assert_eq!(*value, Rat::int(3)),
            other => panic!("{other:?}"),
        }
        check_duals(&rows, &c, &lp);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let rows = vec![row(&[1], 0), row(&[-1], -1)];
        assert!(matches!(maximize(1, &rows, &[Rat::one()]), Lp::Infeasible));
        let rows = vec![row(&[-1], 0)];
        assert!(matches!(maximize(1, &rows, &[Rat::one()]), Lp::Unbounded));
    }

    #[test]
    fn degenerate_cycling_example() {
        // A highly degenerate instance in the style of Beale's cycling example.
        // Optimality is certified by primal feasibility plus matching duals.
        let q = |n, d| Rat::new(n, d);
        let rows = vec![
            Row { a: vec![q(1, 4), q(-8, 1), q(-1, 1), q(9, 1)], b: Rat::zero() },
            Row { a: vec![q(1, 2), q(-12, 1), q(-1, 2), q(3, 1)], b: Rat::zero() },
            Row { a: vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)], b: Rat::one() },
            row(&[-1, 0, 0, 0], 0),
            row(&[0, -1, 0, 0], 0),
            row(&[0, 0, -1, 0], 0),
            row(&[0, 0, 0, -1], 0),
        ];
        let c = vec![q(3, 4), q(-20, 1), q(1, 2), q(-6, 1)];
        let lp = maximize(4, &rows, &c);
        let Lp::Optimal { point, .. } = &lp else { panic!("{lp:?}") };
        for r in &rows {
            assert!(crate::rat::dot(&r.a, point) <= r.b);
        }
        check_duals(&rows, &c, &lp);
    }
}
