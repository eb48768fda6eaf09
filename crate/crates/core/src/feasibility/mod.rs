//! Exact linear feasibility, optimization and vertex enumeration over
//! rationals.
//!
//! Every existence question in the crate (is there a state with ..., does
//! this inequality hold over every s-map, ...) is phrased as a [`LinSystem`]
//! and answered here. Equalities are eliminated symbolically first; what is
//! left is a polyhedron in the free parameters, handled by an exact simplex
//! (optimization, implicit equalities, affine dimension) and by the double
//! description method (vertices).

mod dd;
mod elim;
mod simplex;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::rat::Rat;

use elim::{Affine, Elimination};
use simplex::{Lp, Row};

/// `Σ coeff_j x_j  (= or <=)  rhs`, terms sorted by variable with zero
/// coefficients removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rat)>,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(terms: impl IntoIterator<Item = (usize, Rat)>, rhs: Rat) -> Constraint {
        let mut merged: std::collections::BTreeMap<usize, Rat> = std::collections::BTreeMap::new();
        for (j, c) in terms {
            *merged.entry(j).or_insert_with(Rat::zero) += c;
        }
        Constraint { terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect(), rhs }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut v = Rat::zero();
        for (j, c) in &self.terms {
            v.add_mul(c, &x[*j]);
        }
        v
    }

    pub fn negated(&self) -> Constraint {
        Constraint { terms: self.terms.iter().map(|(j, c)| (*j, -c)).collect(), rhs: -&self.rhs }
    }
}

/// Linear equalities and `<=` inequalities over named rational variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinSystem {
    vars: Vec<String>,
    eqs: Vec<Constraint>,
    ineqs: Vec<Constraint>,
}

impl LinSystem {
    pub fn new(vars: Vec<String>) -> LinSystem {
        LinSystem { vars, eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn eqs(&self) -> &[Constraint] {
        &self.eqs
    }

    pub fn ineqs(&self) -> &[Constraint] {
        &self.ineqs
    }

    pub fn add_eq(&mut self, terms: impl IntoIterator<Item = (usize, Rat)>, rhs: Rat) {
        let c = Constraint::new(terms, rhs);
        self.check(&c);
        self.eqs.push(c);
    }

    pub fn add_le(&mut self, terms: impl IntoIterator<Item = (usize, Rat)>, rhs: Rat) {
        let c = Constraint::new(terms, rhs);
        self.check(&c);
        self.ineqs.push(c);
    }

    pub fn add_ge(&mut self, terms: impl IntoIterator<Item = (usize, Rat)>, rhs: Rat) {
        let c = Constraint::new(terms, rhs).negated();
        self.check(&c);
        self.ineqs.push(c);
    }

    /// `lo <= x_var <= hi`.
    pub fn add_bounds(&mut self, var: usize, lo: Rat, hi: Rat) {
        self.add_le([(var, Rat::one())], hi);
        self.add_ge([(var, Rat::one())], lo);
    }

    fn check(&self, c: &Constraint) {
        assert!(c.terms.iter().all(|(j, _)| *j < self.vars.len()), "constraint references unknown variable");
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.first_violation(x).is_none()
    }

    /// The first constraint `x` violates: `(is_equality, index)`.
    pub fn first_violation(&self, x: &[Rat]) -> Option<(bool, usize)> {
        assert_eq!(x.len(), self.vars.len());
        if let Some(i) = self.eqs.iter().position(|c| c.eval(x) != c.rhs) {
            return Some((true, i));
        }
        self.ineqs.iter().position(|c| c.eval(x) > c.rhs).map(|i| (false, i))
    }

    /// Plain-text dump, one `lhs op rhs` line per constraint.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let line = |s: &mut String, c: &Constraint, op: &str| {
            if c.terms.is_empty() {
                s.push('0');
            }
            for (n, (j, coef)) in c.terms.iter().enumerate() {
                let sign = match (n, coef.is_negative()) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => " + ",
                    (_, true) => " - ",
                };
                let _ = write!(s, "{sign}{} {}", coef.abs(), self.vars[*j]);
            }
            let _ = writeln!(s, " {op} {}", c.rhs);
        };
        for c in &self.eqs {
            line(&mut s, c, "=");
        }
        for c in &self.ineqs {
            line(&mut s, c, "<=");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyStatus {
    Empty,
    Point,
    PositiveDimensional,
}

/// Feasibility and dimension report for a [`LinSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyInfo {
    pub status: PolyStatus,
    /// Affine dimension of the solution set, `-1` when empty.
    pub dim: i64,
    /// A relative-interior solution when nonempty.
    pub witness: Option<Vec<Rat>>,
    pub vertices: Option<Vec<Vec<Rat>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeasError {
    #[error("the feasible set is unbounded")]
    Unbounded,
    #[error("more than {cap} vertices; first {cap} returned", cap = .partial.len())]
    CapExceeded { partial: Vec<Vec<Rat>> },
    #[error("vertex enumeration exceeded {0} intermediate rays")]
    Blowup(usize),
}

/// LP duality certificate for `objective · x <= bound` over a system:
/// `Σ λ_i ineq_i + Σ μ_j eq_j` reproduces the objective exactly, `λ >= 0`,
/// and the same combination of right-hand sides equals `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub bound: Rat,
    pub ineq_multipliers: Vec<Rat>,
    pub eq_multipliers: Vec<Rat>,
}

impl Certificate {
    /// Re-check the certificate against `sys` without any solver.
    pub fn verify(&self, sys: &LinSystem, objective: &[(usize, Rat)]) -> bool {
        if self.ineq_multipliers.len() != sys.ineqs.len() || self.eq_multipliers.len() != sys.eqs.len() {
            return false;
        }
        if self.ineq_multipliers.iter().any(Rat::is_negative) {
            return false;
        }
        let mut combo = vec![Rat::zero(); sys.num_vars()];
        let mut rhs = Rat::zero();
        let pairs = sys.ineqs.iter().zip(&self.ineq_multipliers).chain(sys.eqs.iter().zip(&self.eq_multipliers));
        for (c, m) in pairs {
            if m.is_zero() {
                continue;
            }
            for (j, a) in &c.terms {
                combo[*j].add_mul(m, a);
            }
            rhs.add_mul(m, &c.rhs);
        }
        for (j, a) in objective {
            combo[*j] -= a;
        }
        combo.iter().all(Rat::is_zero) && rhs == self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rat,
    pub point: Vec<Rat>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal(Optimum),
    Infeasible,
    Unbounded,
}

/// Outcome of [`certify_implied`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Implication {
    /// The target holds on every feasible point. `optimum` is `None` when
    /// the system itself is infeasible.
    Implied { optimum: Option<Optimum> },
    /// A feasible point violating the target (the maximizer of its left
    /// side) and the value it attains.
    Counterexample { point: Vec<Rat>, value: Rat },
}

impl Implication {
    pub fn is_implied(&self) -> bool {
        matches!(self, Implication::Implied { .. })
    }
}

#[derive(Debug, Clone, Copy)]
enum RowSrc {
    Ineq(usize),
    Eq(usize),
}

#[derive(Debug, Clone)]
struct Core {
    elim: Elimination,
    rows: Vec<Row>,
    /// Per row: origin and the factor with which the origin was scaled.
    srcs: Vec<(RowSrc, Rat)>,
}

/// A system with its equalities already eliminated, ready for repeated
/// optimization. Extra constraints can be appended cheaply with
/// [`PreparedSystem::extend`].
#[derive(Debug, Clone)]
pub struct PreparedSystem {
    sys: LinSystem,
    n_base_eqs: usize,
    core: Option<Core>,
    analysis: OnceLock<Option<(Vec<usize>, Vec<Rat>)>>,
}

/// Scale so the first nonzero coefficient has magnitude one.
fn normalized(a: Vec<Rat>, b: Rat) -> Option<(Vec<Rat>, Rat, Rat)> {
    let lead = a.iter().find(|x| !x.is_zero())?.abs();
    let inv = lead.recip();
    Some((a.iter().map(|x| x * &inv).collect(), b * &inv, inv))
}

fn push_row(
    rows: &mut Vec<Row>,
    srcs: &mut Vec<(RowSrc, Rat)>,
    seen: &mut HashMap<Vec<Rat>, usize>,
    a: Vec<Rat>,
    b: Rat,
    src: (RowSrc, Rat),
) -> bool {
    match normalized(a, b.clone()) {
        None => !b.is_negative(),
        Some((a, b, inv)) => {
            let src = (src.0, src.1 * inv);
            match seen.get(&a) {
                Some(&i) => {
                    if b < rows[i].b {
                        rows[i].b = b;
                        srcs[i] = src;
                    }
                }
                None => {
                    seen.insert(a.clone(), rows.len());
                    rows.push(Row { a, b });
                    srcs.push(src);
                }
            }
            true
        }
    }
}

impl PreparedSystem {
    pub fn new(sys: &LinSystem) -> PreparedSystem {
        let n = sys.num_vars();
        let core = elim::parametrize(n, sys.eqs.iter().map(|c| (c.terms.as_slice(), &c.rhs))).ok().and_then(|elim| {
            let mut rows = Vec::new();
            let mut srcs = Vec::new();
            let mut seen = HashMap::new();
            for (i, c) in sys.ineqs.iter().enumerate() {
                let (a, off) = elim.affine.pull_back(&c.terms);
                if !push_row(&mut rows, &mut srcs, &mut seen, a, &c.rhs - off, (RowSrc::Ineq(i), Rat::one())) {
                    return None;
                }
            }
            Some(Core { elim, rows, srcs })
        });
        PreparedSystem { sys: sys.clone(), n_base_eqs: sys.eqs.len(), core, analysis: OnceLock::new() }
    }

    pub fn system(&self) -> &LinSystem {
        &self.sys
    }

    /// Same system plus extra constraints. Extra equalities enter the
    /// polyhedron as opposing inequality pairs.
    pub fn extend(&self, eqs: Vec<Constraint>, ineqs: Vec<Constraint>) -> PreparedSystem {
        let mut sys = self.sys.clone();
        let eq0 = sys.eqs.len();
        let in0 = sys.ineqs.len();
        for c in &eqs {
            sys.check(c);
        }
        for c in &ineqs {
            sys.check(c);
        }
        sys.eqs.extend(eqs);
        sys.ineqs.extend(ineqs);
        let core = self.core.clone().and_then(|mut core| {
            let mut seen: HashMap<Vec<Rat>, usize> =
                core.rows.iter().enumerate().map(|(i, r)| (r.a.clone(), i)).collect();
            for (i, c) in sys.eqs.iter().enumerate().skip(eq0) {
                let (a, off) = core.elim.affine.pull_back(&c.terms);
                let b = &c.rhs - off;
                let neg_a: Vec<Rat> = a.iter().map(|x| -x).collect();
                if !push_row(&mut core.rows, &mut core.srcs, &mut seen, a, b.clone(), (RowSrc::Eq(i), Rat::one()))
                    || !push_row(&mut core.rows, &mut core.srcs, &mut seen, neg_a, -b, (RowSrc::Eq(i), Rat::int(-1)))
                {
                    return None;
                }
            }
            for (i, c) in sys.ineqs.iter().enumerate().skip(in0) {
                let (a, off) = core.elim.affine.pull_back(&c.terms);
                if !push_row(&mut core.rows, &mut core.srcs, &mut seen, a, &c.rhs - off, (RowSrc::Ineq(i), Rat::one()))
                {
                    return None;
                }
            }
            Some(core)
        });
        PreparedSystem { sys, n_base_eqs: self.n_base_eqs, core, analysis: OnceLock::new() }
    }

    /// Maximize `objective · x`.
    pub fn maximize(&self, objective: &[(usize, Rat)]) -> LpResult {
        let Some(core) = &self.core else {
            return LpResult::Infeasible;
        };
        let (c, offset) = core.elim.affine.pull_back(objective);
        match simplex::maximize(core.elim.affine.k, &core.rows, &c) {
            Lp::Infeasible => LpResult::Infeasible,
            Lp::Unbounded => LpResult::Unbounded,
            Lp::Optimal { value, point, duals } => {
                let x = core.elim.affine.apply(&point);
                let value = value + &offset;
                let certificate = self.certificate(core, objective, &duals);
                debug_assert_eq!(certificate.bound, value);
                LpResult::Optimal(Optimum { value, point: x, certificate })
            }
        }
    }

    fn certificate(&self, core: &Core, objective: &[(usize, Rat)], duals: &[Rat]) -> Certificate {
        let n = self.sys.num_vars();
        let mut lam = vec![Rat::zero(); self.sys.ineqs.len()];
        let mut mu = vec![Rat::zero(); self.sys.eqs.len()];
        for (d, (src, scale)) in duals.iter().zip(&core.srcs) {
            if d.is_zero() {
                continue;
            }
            match src {
                RowSrc::Ineq(i) => lam[*i].add_mul(d, scale),
                RowSrc::Eq(i) => mu[*i].add_mul(d, scale),
            }
        }
        // residual objective must be a combination of the eliminated equalities
        let mut resid = vec![Rat::zero(); n];
        for (j, a) in objective {
            resid[*j] += a;
        }
        let used = self.sys.ineqs.iter().zip(&lam).chain(self.sys.eqs.iter().zip(&mu));
        for (c, m) in used {
            if m.is_zero() {
                continue;
            }
            for (j, a) in &c.terms {
                resid[*j].add_mul(&-m, a);
            }
        }
        let piv = &core.elim.pivot_rows;
        if resid.iter().any(|x| !x.is_zero()) {
            let mut mat = vec![vec![Rat::zero(); piv.len()]; n];
            for (q, &r) in piv.iter().enumerate() {
                for (j, a) in &self.sys.eqs[r].terms {
                    mat[*j][q] = a.clone();
                }
            }
            let sol = elim::solve_dense(&mat, &resid).expect("objective residual lies in the equality row space");
            for (q, &r) in piv.iter().enumerate() {
                mu[r] += &sol[q];
            }
        }
        debug_assert!(mu.len() >= self.n_base_eqs);
        let mut bound = Rat::zero();
        for (c, m) in self.sys.ineqs.iter().zip(&lam).chain(self.sys.eqs.iter().zip(&mu)) {
            bound.add_mul(m, &c.rhs);
        }
        Certificate { bound, ineq_multipliers: lam, eq_multipliers: mu }
    }

    /// Decide whether `target` (read as `terms · x <= rhs`) holds on the
    /// whole feasible set by maximizing its left side exactly.
    pub fn certify_implied(&self, target: &Constraint) -> Result<Implication, FeasError> {
        match self.maximize(&target.terms) {
            LpResult::Infeasible => Ok(Implication::Implied { optimum: None }),
            LpResult::Unbounded => Err(FeasError::Unbounded),
            LpResult::Optimal(opt) => {
                if opt.value <= target.rhs {
                    Ok(Implication::Implied { optimum: Some(opt) })
                } else {
                    Ok(Implication::Counterexample { value: opt.value, point: opt.point })
                }
            }
        }
    }

    /// Feasibility, implicit equalities and a relative-interior point,
    /// computed once.
    fn analyze(&self) -> Option<&(Vec<usize>, Vec<Rat>)> {
        self.analysis.get_or_init(|| self.compute_analysis()).as_ref()
    }

    fn compute_analysis(&self) -> Option<(Vec<usize>, Vec<Rat>)> {
        let core = self.core.as_ref()?;
        let k = core.elim.affine.k;
        let m = core.rows.len();
        let mut undecided: Vec<usize> = (0..m).collect();
        let mut implicit = Vec::new();
        let mut points: Vec<Vec<Rat>> = Vec::new();
        if m == 0 {
            return Some((implicit, vec![Rat::zero(); k]));
        }
        while !undecided.is_empty() {
            // maximize Σ s_u subject to a_u t + s_u <= b_u, 0 <= s_u <= 1
            let ns = undecided.len();
            let mut slot = vec![usize::MAX; m];
            for (q, &u) in undecided.iter().enumerate() {
                slot[u] = q;
            }
            let mut rows = Vec::with_capacity(m + 2 * ns);
            for (i, r) in core.rows.iter().enumerate() {
                let mut a = r.a.clone();
                a.resize(k + ns, Rat::zero());
                if slot[i] != usize::MAX {
                    a[k + slot[i]] = Rat::one();
                }
                rows.push(Row { a, b: r.b.clone() });
            }
            for q in 0..ns {
                let mut a = vec![Rat::zero(); k + ns];
                a[k + q] = Rat::one();
                rows.push(Row { a: a.clone(), b: Rat::one() });
                a[k + q] = Rat::int(-1);
                rows.push(Row { a, b: Rat::zero() });
            }
            let mut c = vec![Rat::zero(); k + ns];
            for x in &mut c[k..] {
                *x = Rat::one();
            }
            match simplex::maximize(k + ns, &rows, &c) {
                Lp::Infeasible => return None,
                Lp::Unbounded => unreachable!("auxiliary objective is bounded"),
                Lp::Optimal { value, point, .. } => {
                    let t = point[..k].to_vec();
                    if value.is_zero() {
                        implicit.append(&mut undecided);
                    } else {
                        undecided.retain(|&u| crate::rat::dot(&core.rows[u].a, &t) == core.rows[u].b);
                    }
                    points.push(t);
                }
            }
        }
        let count = Rat::int(points.len() as i64);
        let mut avg = vec![Rat::zero(); k];
        for p in &points {
            for (s, x) in avg.iter_mut().zip(p) {
                *s += x;
            }
        }
        let avg = avg.into_iter().map(|s| s / &count).collect();
        implicit.sort_unstable();
        Some((implicit, avg))
    }

    pub fn solve(&self) -> PolyInfo {
        let Some((implicit, t)) = self.analyze() else {
            return PolyInfo { status: PolyStatus::Empty, dim: -1, witness: None, vertices: None };
        };
        let core = self.core.as_ref().expect("feasible");
        let k = core.elim.affine.k;
        let eq_rows: Vec<Vec<Rat>> = implicit.iter().map(|&i| core.rows[i].a.clone()).collect();
        let dim = (k - elim::rank(&eq_rows)) as i64;
        let witness = core.elim.affine.apply(t);
        debug_assert!(self.sys.contains(&witness));
        let status = if dim == 0 { PolyStatus::Point } else { PolyStatus::PositiveDimensional };
        PolyInfo { status, dim, witness: Some(witness), vertices: None }
    }

    /// All vertices of a bounded feasible set, sorted lexicographically.
    pub fn enumerate_vertices(&self, cap: usize) -> Result<Vec<Vec<Rat>>, FeasError> {
        let Some((implicit, _)) = self.analyze() else {
            return Ok(Vec::new());
        };
        let core = self.core.as_ref().expect("feasible");
        let k = core.elim.affine.k;
        let sparse: Vec<(Vec<(usize, Rat)>, Rat)> = implicit
            .iter()
            .map(|&i| {
                let r = &core.rows[i];
                (
                    r.a.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect(),
                    r.b.clone(),
                )
            })
            .collect();
        let hull = elim::parametrize(k, sparse.iter().map(|(t, b)| (t.as_slice(), b)))
            .expect("implicit equalities hold on a nonempty set");
        let inner: &Affine = &hull.affine;
        let full = core.elim.affine.compose(inner);
        let d = inner.k;

        let mut is_implicit = vec![false; core.rows.len()];
        for &i in implicit {
            is_implicit[i] = true;
        }
        let mut rows = Vec::new();
        let mut srcs = Vec::new();
        let mut seen = HashMap::new();
        for (i, r) in core.rows.iter().enumerate() {
            if is_implicit[i] {
                continue;
            }
            let (a, off) = inner.pull_back_dense(&r.a);
            let ok = push_row(&mut rows, &mut srcs, &mut seen, a, &r.b - off, (RowSrc::Ineq(i), Rat::one()));
            debug_assert!(ok);
        }

        let mut out: Vec<Vec<Rat>> = if d == 0 {
            vec![full.offset.clone()]
        } else {
            let limit = cap.saturating_mul(16).max(50_000);
            let zs = dd::vertices(d, &rows, limit).map_err(|e| match e {
                dd::DdError::Unbounded => FeasError::Unbounded,
                dd::DdError::Blowup => FeasError::Blowup(limit),
            })?;
            zs.iter().map(|z| full.apply(z)).collect()
        };
        out.sort();
        out.dedup();
        if out.len() > cap {
            out.truncate(cap);
            return Err(FeasError::CapExceeded { partial: out });
        }
        Ok(out)
    }
}

/// Exact status, affine dimension and a relative-interior witness.
pub fn solve(sys: &LinSystem) -> PolyInfo {
    PreparedSystem::new(sys).solve()
}

/// [`solve`] plus the vertex list (bounded systems only).
pub fn solve_with_vertices(sys: &LinSystem, cap: usize) -> Result<PolyInfo, FeasError> {
    let prepared = PreparedSystem::new(sys);
    let mut info = prepared.solve();
    if info.status != PolyStatus::Empty {
        info.vertices = Some(prepared.enumerate_vertices(cap)?);
    }
    Ok(info)
}

pub fn enumerate_vertices(sys: &LinSystem, cap: usize) -> Result<Vec<Vec<Rat>>, FeasError> {
    PreparedSystem::new(sys).enumerate_vertices(cap)
}

pub fn maximize(sys: &LinSystem, objective: &[(usize, Rat)]) -> LpResult {
    PreparedSystem::new(sys).maximize(objective)
}

pub fn certify_implied(sys: &LinSystem, target: &Constraint) -> Result<Implication, FeasError> {
    PreparedSystem::new(sys).certify_implied(target)
}
