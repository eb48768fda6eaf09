//! Finite orthomodular lattices.
//!
//! An [`Oml`] is built only through [`validate_oml`] (or the generators in this
//! module, which route through it), so every value of the type satisfies the
//! lattice, orthocomplement and orthomodular axioms. Meets, joins and
//! complements are precomputed into dense tables.

use std::collections::HashMap;
use std::fmt;

/// Default bound on lattice size; every check in the crate is exhaustive
/// within it.
pub const DEFAULT_MAX_ELEMENTS: usize = 64;

/// Index of an element inside one particular [`Oml`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Elem(usize);

impl Elem {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_elements: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_elements: DEFAULT_MAX_ELEMENTS }
    }
}

/// How the order of a raw lattice description is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSpec {
    /// Any generating set of `x <= y` pairs (typically the full relation).
    Leq(Vec<(String, String)>),
    /// Covering pairs `x <. y` of the Hasse diagram.
    Covers(Vec<(String, String)>),
}

/// Unvalidated lattice description, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLattice {
    pub elements: Vec<String>,
    pub order: OrderSpec,
    /// Orthocomplement, one `(x, x')` entry per element.
    pub comp: Vec<(String, String)>,
    pub bot: String,
    pub top: String,
}

/// Which orthocomplementation axiom failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementAxiom {
    /// `a'' = a`
    Involution,
    /// `a <= b` implies `b' <= a'`
    Antitone,
    /// `a v a' = 1` and `a ^ a' = 0`
    Complementation,
}

impl fmt::Display for ComplementAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplementAxiom::Involution => "(i) involution",
            ComplementAxiom::Antitone => "(ii) order-reversing",
            ComplementAxiom::Complementation => "(iii) complementation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OmlError {
    #[error("lattice has no elements")]
    Empty,
    #[error("lattice has {size} elements, above the configured bound of {max}")]
    TooLarge { size: usize, max: usize },
    #[error("duplicate element id {0:?}")]
    DuplicateElement(String),
    #[error("unknown element id {0:?}")]
    UnknownElement(String),
    #[error("invalid element id {0:?} (ids must be non-empty and must not contain '|')")]
    InvalidName(String),
    #[error("element {0:?} has no orthocomplement entry")]
    MissingComplement(String),
    #[error("element {0:?} has more than one orthocomplement entry")]
    DuplicateComplement(String),
    #[error("order is not antisymmetric: {a:?} <= {b:?} and {b:?} <= {a:?}")]
    NotAPartialOrder { a: String, b: String },
    #[error("bottom {bot:?} / top {top:?} do not bound element {elem:?}")]
    NotBounded { bot: String, top: String, elem: String },
    #[error("not a lattice: {op} of {a:?} and {b:?} is {reason}")]
    NotALattice { op: &'static str, a: String, b: String, reason: &'static str },
    #[error("orthocomplement axiom {axiom} fails at {a:?}{}", .b.as_ref().map(|b| format!(", {b:?}")).unwrap_or_default())]
    ComplementAxiom { axiom: ComplementAxiom, a: String, b: Option<String> },
    #[error("orthomodular law fails: {a:?} <= {b:?} but {b:?} != {a:?} v ({a:?}' ^ {b:?})")]
    OrthomodularLawFailure { a: String, b: String },
    #[error("horizontal sum part {0} has fewer than 4 elements")]
    PartTooSmall(usize),
}

/// Relationship between two elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairTag {
    Orthogonal,
    Compatible,
    Incompatible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairClass {
    pub tag: PairTag,
    /// `(a ^ b, a ^ b')`, whose join reproduces `a` when the pair is compatible.
    pub witnesses: Option<(Elem, Elem)>,
}

impl PairClass {
    pub fn is_compatible(&self) -> bool {
        self.tag != PairTag::Incompatible
    }
}

/// A validated finite orthomodular lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct Oml {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    comp: Vec<usize>,
    bot: usize,
    top: usize,
}

impl fmt::Debug for Oml {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oml").field("elements", &self.names).finish()
    }
}

impl Oml {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator + Clone {
        (0..self.names.len()).map(Elem)
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied().map(Elem)
    }

    /// Element by name; panics on unknown names. Intended for tests and
    /// fixed constructions.
    pub fn e(&self, name: &str) -> Elem {
        self.elem(name).unwrap_or_else(|| panic!("no element named {name:?}"))
    }

    pub fn elem_at(&self, index: usize) -> Elem {
        assert!(index < self.len());
        Elem(index)
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bot(&self) -> Elem {
        Elem(self.bot)
    }

    pub fn top(&self) -> Elem {
        Elem(self.top)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.0 * self.len() + b.0]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.meet[a.0 * self.len() + b.0])
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.join[a.0 * self.len() + b.0])
    }

    pub fn ocomp(&self, a: Elem) -> Elem {
        Elem(self.comp[a.0])
    }

    /// `a ⊥ b`, i.e. `a <= b'`.
    pub fn is_orthogonal(&self, a: Elem, b: Elem) -> bool {
        self.leq(a, self.ocomp(b))
    }

    /// `a = (a ^ b) v (a ^ b')`.
    pub fn is_compatible(&self, a: Elem, b: Elem) -> bool {
        let x = self.meet(a, b);
        let y = self.meet(a, self.ocomp(b));
        self.join(x, y) == a
    }

    pub fn classify_pair(&self, a: Elem, b: Elem) -> PairClass {
        let witnesses = (self.meet(a, b), self.meet(a, self.ocomp(b)));
        let tag = if self.is_orthogonal(a, b) {
            PairTag::Orthogonal
        } else if self.join(witnesses.0, witnesses.1) == a {
            PairTag::Compatible
        } else {
            PairTag::Incompatible
        };
        PairClass { tag, witnesses: (tag != PairTag::Incompatible).then_some(witnesses) }
    }

    /// All ordered orthogonal pairs `(a, b)`.
    pub fn orthogonal_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.is_orthogonal(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All ordered compatible pairs `(a, b)`.
    pub fn compatible_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.is_compatible(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn atoms(&self) -> Vec<Elem> {
        self.elements().filter(|&x| x != self.bot() && self.covers_pair(self.bot(), x)).collect()
    }

    fn covers_pair(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b) && !self.elements().any(|z| z != a && z != b && self.leq(a, z) && self.leq(z, b))
    }

    /// Covering pairs of the Hasse diagram, in element order.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.covers_pair(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Maximal Boolean subalgebras, each as a sorted element list. Computed
    /// as the maximal cliques of the compatibility relation.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let n = self.len();
        let adj: Vec<Vec<bool>> =
            (0..n).map(|i| (0..n).map(|j| i != j && self.is_compatible(Elem(i), Elem(j))).collect()).collect();
        let mut cliques = Vec::new();
        bron_kerbosch(&adj, Vec::new(), (0..n).collect(), Vec::new(), &mut cliques);
        let mut blocks: Vec<Vec<Elem>> = cliques
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.into_iter().map(Elem).collect()
            })
            .collect();
        blocks.sort();
        blocks
    }

    /// Whether `set` is closed under meet, join and complement, contains the
    /// bounds, and is distributive.
    pub fn is_boolean_subalgebra(&self, set: &[Elem]) -> bool {
        let mut member = vec![false; self.len()];
        for &x in set {
            member[x.0] = true;
        }
        if !member[self.bot] || !member[self.top] {
            return false;
        }
        for &x in set {
            if !member[self.comp[x.0]] {
                return false;
            }
            for &y in set {
                if !member[self.meet(x, y).0] || !member[self.join(x, y).0] {
                    return false;
                }
            }
        }
        set.iter().all(|&x| {
            set.iter().all(|&y| {
                set.iter().all(|&z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    /// Every set of pairwise orthogonal nonzero elements whose join is `1`,
    /// each sorted by element order. Includes the trivial partition `{1}`.
    pub fn orthogonal_partitions_of_unity(&self) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.partitions_from(0, self.bot(), &mut cur, &mut out);
        out
    }

    fn partitions_from(&self, start: usize, acc: Elem, cur: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if acc == self.top() {
            out.push(cur.clone());
            return;
        }
        for i in start..self.len() {
            let x = Elem(i);
            if x == self.bot() || !self.is_orthogonal(x, acc) {
                continue;
            }
            cur.push(x);
            self.partitions_from(i + 1, self.join(acc, x), cur, out);
            cur.pop();
        }
    }

    /// Back to a raw description using the full order relation.
    pub fn to_raw(&self) -> RawLattice {
        let mut leq = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.leq(a, b) {
                    leq.push((self.name(a).to_string(), self.name(b).to_string()));
                }
            }
        }
        RawLattice {
            elements: self.names.clone(),
            order: OrderSpec::Leq(leq),
            comp: self.elements().map(|a| (self.name(a).to_string(), self.name(self.ocomp(a)).to_string())).collect(),
            bot: self.name(self.bot()).to_string(),
            top: self.name(self.top()).to_string(),
        }
    }

    /// Plain-text listing of elements, complements and Hasse covers.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("elements ({}):", self.len()));
        for a in self.elements() {
            s.push_str(&format!(" {}", self.name(a)));
        }
        s.push_str("\ncomplements:");
        for a in self.elements() {
            s.push_str(&format!(" {}->{}", self.name(a), self.name(self.ocomp(a))));
        }
        s.push_str("\ncovers:");
        for (a, b) in self.covers() {
            s.push_str(&format!(" {}<{}", self.name(a), self.name(b)));
        }
        s.push('\n');
        s
    }
}

fn bron_kerbosch(adj: &[Vec<bool>], r: Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot =
        p.iter().chain(&x).copied().max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count()).expect("p or x nonempty");
    let mut p = p;
    let mut x = x;
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let x2 = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Check a raw description against the lattice and orthomodular axioms.
pub fn validate_oml(raw: &RawLattice, limits: Limits) -> Result<Oml, OmlError> {
    let n = raw.elements.len();
    if n == 0 {
        return Err(OmlError::Empty);
    }
    if n > limits.max_elements {
        return Err(OmlError::TooLarge { size: n, max: limits.max_elements });
    }
    let mut index = HashMap::with_capacity(n);
    for (i, name) in raw.elements.iter().enumerate() {
        if name.is_empty() || name.contains('|') {
            return Err(OmlError::InvalidName(name.clone()));
        }
        if index.insert(name.clone(), i).is_some() {
            return Err(OmlError::DuplicateElement(name.clone()));
        }
    }
    let id = |s: &str| index.get(s).copied().ok_or_else(|| OmlError::UnknownElement(s.to_string()));

    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    let pairs = match &raw.order {
        OrderSpec::Leq(p) | OrderSpec::Covers(p) => p,
    };
    for (a, b) in pairs {
        leq[id(a)? * n + id(b)?] = true;
    }
    // reflexive-transitive closure
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    let name = |i: usize| raw.elements[i].clone();
    for i in 0..n {
        for j in (i + 1)..n {
            if leq[i * n + j] && leq[j * n + i] {
                return Err(OmlError::NotAPartialOrder { a: name(i), b: name(j) });
            }
        }
    }

    let bot = id(&raw.bot)?;
    let top = id(&raw.top)?;
    for x in 0..n {
        if !leq[bot * n + x] || !leq[x * n + top] {
            return Err(OmlError::NotBounded { bot: raw.bot.clone(), top: raw.top.clone(), elem: name(x) });
        }
    }

    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let lower: Vec<usize> = (0..n).filter(|&z| leq[z * n + a] && leq[z * n + b]).collect();
            let m = greatest(&lower, &leq, n).ok_or_else(|| OmlError::NotALattice {
                op: "meet",
                a: name(a),
                b: name(b),
                reason: "not unique",
            })?;
            let upper: Vec<usize> = (0..n).filter(|&z| leq[a * n + z] && leq[b * n + z]).collect();
            let j = least(&upper, &leq, n).ok_or_else(|| OmlError::NotALattice {
                op: "join",
                a: name(a),
                b: name(b),
                reason: "not unique",
            })?;
            meet[a * n + b] = m;
            join[a * n + b] = j;
        }
    }

    let mut comp = vec![usize::MAX; n];
    for (a, b) in &raw.comp {
        let (ia, ib) = (id(a)?, id(b)?);
        if comp[ia] != usize::MAX {
            return Err(OmlError::DuplicateComplement(a.clone()));
        }
        comp[ia] = ib;
    }
    if let Some(i) = comp.iter().position(|&c| c == usize::MAX) {
        return Err(OmlError::MissingComplement(name(i)));
    }

    for a in 0..n {
        if comp[comp[a]] != a {
            return Err(OmlError::ComplementAxiom { axiom: ComplementAxiom::Involution, a: name(a), b: None });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if leq[a * n + b] && !leq[comp[b] * n + comp[a]] {
                return Err(OmlError::ComplementAxiom {
                    axiom: ComplementAxiom::Antitone,
                    a: name(a),
                    b: Some(name(b)),
                });
            }
        }
    }
    for a in 0..n {
        if join[a * n + comp[a]] != top || meet[a * n + comp[a]] != bot {
            return Err(OmlError::ComplementAxiom { axiom: ComplementAxiom::Complementation, a: name(a), b: None });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if leq[a * n + b] && join[a * n + meet[comp[a] * n + b]] != b {
                return Err(OmlError::OrthomodularLawFailure { a: name(a), b: name(b) });
            }
        }
    }

    Ok(Oml { names: raw.elements.clone(), index, leq, meet, join, comp, bot, top })
}

fn greatest(set: &[usize], leq: &[bool], n: usize) -> Option<usize> {
    let mut found = set.iter().copied().filter(|&g| set.iter().all(|&z| leq[z * n + g]));
    let g = found.next()?;
    found.next().is_none().then_some(g)
}

fn least(set: &[usize], leq: &[bool], n: usize) -> Option<usize> {
    let mut found = set.iter().copied().filter(|&g| set.iter().all(|&z| leq[g * n + z]));
    let g = found.next()?;
    found.next().is_none().then_some(g)
}

/// Name of the subset `mask` of `{1..n}` in [`boolean_algebra`].
fn subset_name(mask: usize, n: usize) -> String {
    if mask == 0 {
        return "0".into();
    }
    if mask == (1 << n) - 1 {
        return "1".into();
    }
    let parts: Vec<String> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// The power set of `{1..n_atoms}`; elements are named `0`, `1` and `{i,j,..}`.
pub fn boolean_algebra(n_atoms: usize) -> Result<Oml, OmlError> {
    if n_atoms == 0 {
        return Err(OmlError::Empty);
    }
    let limits = limits_from_env();
    let size = 1usize.checked_shl(n_atoms as u32).filter(|&s| s != 0).unwrap_or(usize::MAX);
    if size > limits.max_elements {
        return Err(OmlError::TooLarge { size, max: limits.max_elements });
    }
    let full = size - 1;
    let names: Vec<String> = (0..size).map(|m| subset_name(m, n_atoms)).collect();
    let mut covers = Vec::new();
    for m in 0..size {
        for i in 0..n_atoms {
            if m & (1 << i) == 0 {
                covers.push((names[m].clone(), names[m | (1 << i)].clone()));
            }
        }
    }
    let raw = RawLattice {
        elements: names.clone(),
        order: OrderSpec::Covers(covers),
        comp: (0..size).map(|m| (names[m].clone(), names[full ^ m].clone())).collect(),
        bot: names[0].clone(),
        top: names[full].clone(),
    };
    validate_oml(&raw, limits)
}

fn mo_letter(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{}", i + 1)
    }
}

/// The horizontal sum of `n` four-element Boolean algebras: `0`, `1` and
/// the pairs `a, a'`, `b, b'`, ...
pub fn mo(n: usize) -> Result<Oml, OmlError> {
    if n < 2 {
        return Err(OmlError::PartTooSmall(n));
    }
    let mut elements = vec!["0".to_string(), "1".to_string()];
    let mut covers = Vec::new();
    let mut comp = vec![("0".to_string(), "1".to_string()), ("1".to_string(), "0".to_string())];
    for i in 0..n {
        let x = mo_letter(i);
        let xc = format!("{x}'");
        for e in [&x, &xc] {
            covers.push(("0".to_string(), e.clone()));
            covers.push((e.clone(), "1".to_string()));
        }
        comp.push((x.clone(), xc.clone()));
        comp.push((xc.clone(), x.clone()));
        elements.push(x);
        elements.push(xc);
    }
    let raw = RawLattice { elements, order: OrderSpec::Covers(covers), comp, bot: "0".into(), top: "1".into() };
    validate_oml(&raw, limits_from_env())
}

/// Glue lattices along their bounds, keeping interiors pairwise incomparable.
///
/// Interior names are kept when they are distinct across parts and are
/// otherwise prefixed `p1.`, `p2.`, ...
pub fn horizontal_sum(parts: &[Oml]) -> Result<Oml, OmlError> {
    if parts.is_empty() {
        return Err(OmlError::Empty);
    }
    for (i, p) in parts.iter().enumerate() {
        if p.len() < 4 {
            return Err(OmlError::PartTooSmall(i));
        }
    }
    let interior = |p: &Oml| -> Vec<Elem> { p.elements().filter(|&x| x != p.bot() && x != p.top()).collect() };
    let mut seen = std::collections::HashSet::new();
    let mut clash = false;
    for p in parts {
        for x in interior(p) {
            let nm = p.name(x);
            if nm == "0" || nm == "1" || !seen.insert(nm.to_string()) {
                clash = true;
            }
        }
    }
    let label = |i: usize, nm: &str| if clash { format!("p{}.{}", i + 1, nm) } else { nm.to_string() };

    let mut elements = vec!["0".to_string(), "1".to_string()];
    let mut leq = Vec::new();
    let mut comp = vec![("0".to_string(), "1".to_string()), ("1".to_string(), "0".to_string())];
    for (i, p) in parts.iter().enumerate() {
        let inner = interior(p);
        for &x in &inner {
            let nx = label(i, p.name(x));
            elements.push(nx.clone());
            leq.push(("0".to_string(), nx.clone()));
            leq.push((nx.clone(), "1".to_string()));
            comp.push((nx.clone(), label(i, p.name(p.ocomp(x)))));
            for &y in &inner {
                if x != y && p.leq(x, y) {
                    leq.push((nx.clone(), label(i, p.name(y))));
                }
            }
        }
    }
    let raw = RawLattice { elements, order: OrderSpec::Leq(leq), comp, bot: "0".into(), top: "1".into() };
    validate_oml(&raw, limits_from_env())
}

/// Limits honouring the `OMLPROB_MAX_ELEMENTS` environment variable.
pub fn limits_from_env() -> Limits {
    std::env::var("OMLPROB_MAX_ELEMENTS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .map(|max_elements| Limits { max_elements })
        .unwrap_or_default()
}
