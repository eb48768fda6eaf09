//! Command-line front end for `omlprob`.
//!
//! [`run`] takes the full argument list and returns the exit code together
//! with what would go to stdout and stderr, so the binary and the tests
//! share one code path. Exit codes: 0 success or implied, 1 violation or
//! invalid input found, 2 usage or I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use omlprob::analysis::{
    is_pseudometric, run_property, search_pseudometric_violation, Property, PropertyVerdict, SweepReport,
};
use omlprob::bimaps::{
    build_table3_family, check_map, classify_family, complement_map, derive_d_from_s, derive_j_from_s,
    derive_pure_projection_from_s, induced_state_from_smap, is_pure_projection, semantic_check_on_compatible,
    verify_gamma9_identities, verify_lemma_komp, verify_smap_properties, AxiomReport, BiMap, IdentityReport, MapSystem,
    SemanticsError, Table3Params,
};
use omlprob::feasibility::FeasError;
use omlprob::io::{lattice_to_json, map_to_json, parse_lattice, parse_map, state_entries, state_to_json, IoError};
use omlprob::lattice::{boolean_algebra, horizontal_sum, mo, Oml};
use omlprob::states::{classify_states, state_vertices, StateTag};
use omlprob::suite::sweep_suite;
use omlprob::Rat;

#[derive(Parser, Debug)]
#[command(
    name = "omlprob",
    version,
    about = "Exact checks of states and bivariate maps on finite orthomodular lattices"
)]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a lattice file and list its blocks
    CheckLattice { lattice: PathBuf },
    /// Check a map file against one axiom system
    CheckMap {
        #[arg(long)]
        system: MapSystem,
        lattice: PathBuf,
        map: PathBuf,
    },
    /// Family, connective, purity and semantics of a G-map
    ClassifyMap { lattice: PathBuf, map: PathBuf },
    /// Classify the state space, optionally listing extreme states
    States {
        lattice: PathBuf,
        /// List at most N vertices of the state polytope
        #[arg(long, value_name = "N")]
        vertices: Option<usize>,
    },
    /// Emit a lattice or map file
    Construct {
        #[arg(long)]
        family: Family,
        /// MO(2) lattice file (gamma9)
        #[arg(long)]
        lattice: Option<PathBuf>,
        /// r1,r2,u1,u2 (gamma9)
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Number of atoms (boolean)
        #[arg(long)]
        atoms: Option<usize>,
        /// Number of complementary pairs (mo)
        #[arg(long)]
        n: Option<usize>,
        /// Atom counts of the Boolean parts (hsum)
        #[arg(long, value_delimiter = ',')]
        parts: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a derived map or state from a map file
    Derive {
        kind: DeriveKind,
        lattice: PathBuf,
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an exhaustive identity check on a map file
    Verify { check: VerifyKind, lattice: PathBuf, map: PathBuf },
    /// Decide a Bell or Jauch-Piron property on a lattice
    Property {
        #[arg(value_parser = parse_property)]
        name: Property,
        lattice: PathBuf,
    },
    /// Look for an s-map whose d-map is not a pseudometric
    Search {
        /// Lattice files; the built-in sweep suite when none are given
        lattices: Vec<PathBuf>,
        /// Vertices examined per lattice
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Gamma9,
    Boolean,
    Mo,
    Hsum,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DeriveKind {
    /// q(a,b) = p(a,a) + p(b,b) - p(a,b) from an s-map
    J,
    /// d(a,b) = p(a,a) + p(b,b) - 2 p(a,b) from an s-map
    D,
    /// G(a,b) = p(a,a) from an s-map
    PureProjection,
    /// 1 - G
    Complement,
    /// m(a) = p(a,a) from an s-map
    State,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyKind {
    LemmaKomp,
    Gamma9,
    SmapProperties,
    Semantics,
    Purity,
    Pseudometric,
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// exit 1
    Invalid(String),
    /// exit 2
    Fatal(String),
}

struct Report {
    ok: bool,
    human: String,
    json: Value,
}

impl Report {
    fn new(ok: bool, human: String, json: Value) -> Report {
        Report { ok, human, json }
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(r) => {
            let mut stdout =
                if cli.json { serde_json::to_string_pretty(&r.json).expect("json values serialize") } else { r.human };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Output { code: if r.ok { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(Failure::Invalid(msg)) => Output { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Fatal(msg)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn dispatch(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::CheckLattice { lattice } => check_lattice(&lattice),
        Command::CheckMap { system, lattice, map } => {
            let l = load_lattice(&lattice)?;
            let m = load_map(&l, &map)?;
            Ok(check_map_report(system, &m))
        }
        Command::ClassifyMap { lattice, map } => {
            let l = load_lattice(&lattice)?;
            let m = load_map(&l, &map)?;
            Ok(classify(&m))
        }
        Command::States { lattice, vertices } => states(&load_lattice(&lattice)?, vertices),
        Command::Construct { family, lattice, params, atoms, n, parts, out } => {
            let text = construct(family, lattice.as_deref(), &params, atoms, n, &parts)?;
            emit(text, out.as_deref())
        }
        Command::Derive { kind, lattice, map, out } => {
            let l = load_lattice(&lattice)?;
            let m = load_map(&l, &map)?;
            emit(derive(kind, &m, &lattice)?, out.as_deref())
        }
        Command::Verify { check, lattice, map } => {
            let l = load_lattice(&lattice)?;
            let m = load_map(&l, &map)?;
            Ok(verify(check, &m))
        }
        Command::Property { name, lattice } => Ok(property(&run_property(&load_lattice(&lattice)?, name))),
        Command::Search { lattices, cap } => search(&lattices, cap),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Fatal(format!("cannot read {}: {e}", path.display())))
}

fn file_error(path: &Path, e: IoError) -> Failure {
    let msg = format!("{}: {e}", path.display());
    match e {
        IoError::Lattice(_) | IoError::Map(_) => Failure::Invalid(msg),
        _ => Failure::Fatal(msg),
    }
}

fn load_lattice(path: &Path) -> Result<Oml, Failure> {
    parse_lattice(&read(path)?).map_err(|e| file_error(path, e))
}

fn load_map<'l>(l: &'l Oml, path: &Path) -> Result<BiMap<'l>, Failure> {
    parse_map(l, &read(path)?).map_err(|e| file_error(path, e))
}

fn names(l: &Oml, xs: &[omlprob::Elem]) -> Vec<String> {
    xs.iter().map(|&x| l.name(x).to_string()).collect()
}

fn check_lattice(path: &Path) -> Result<Report, Failure> {
    let l = match parse_lattice(&read(path)?) {
        Ok(l) => l,
        Err(IoError::Lattice(e)) => {
            let human = format!("invalid: {e}");
            return Ok(Report::new(false, human, json!({ "valid": false, "error": e.to_string() })));
        }
        Err(e) => return Err(file_error(path, e)),
    };
    let blocks: Vec<Vec<String>> = l.blocks().iter().map(|b| names(&l, b)).collect();
    let atoms = names(&l, &l.atoms());
    let mut human = format!("valid orthomodular lattice: {} elements, {} blocks\n", l.len(), blocks.len());
    let _ = writeln!(human, "atoms: {}", atoms.join(", "));
    for (i, b) in blocks.iter().enumerate() {
        let _ = writeln!(human, "block {}: {}", i + 1, b.join(", "));
    }
    let json = json!({
        "valid": true,
        "elements": l.names(),
        "atoms": atoms,
        "blocks": blocks,
        "boolean": blocks.len() == 1,
    });
    Ok(Report::new(true, human, json))
}

fn axiom_line(r: &AxiomReport) -> String {
    match &r.first_violation {
        None => format!("{}: ok", r.system),
        Some(v) => format!("{}: fails\n{v}", r.system),
    }
}

fn family_json(m: &BiMap) -> Option<Value> {
    let tag = classify_family(m).ok()?;
    Some(json!({
        "gamma": tag.gamma.index(),
        "corners": tag.corners,
        "connective": tag.gamma.connective().map(|c| c.to_string()),
    }))
}

fn family_line(m: &BiMap) -> Option<String> {
    let tag = classify_family(m).ok()?;
    let conn = tag.gamma.connective().map(|c| format!(", connective {c}")).unwrap_or_default();
    Some(format!("family: {} corners {}{conn}", tag.gamma, tag.corners))
}

fn check_map_report(system: MapSystem, m: &BiMap) -> Report {
    let r = check_map(system, m);
    let mut human = axiom_line(&r);
    let mut json = serde_json::to_value(&r).expect("report serializes");
    if system == MapSystem::G && r.ok {
        human.push('\n');
        human.push_str(&family_line(m).expect("G-map corners are 0/1"));
        json["family"] = family_json(m).expect("G-map corners are 0/1");
    }
    Report::new(r.ok, human, json)
}

fn identity_line(name: &str, r: &IdentityReport) -> String {
    match &r.failure {
        None => format!("{name}: holds ({} instances)", r.checked),
        Some(v) => format!("{name}: fails after {} instances\n{v}", r.checked),
    }
}

fn semantics(m: &BiMap) -> (bool, String, Value) {
    match semantic_check_on_compatible(m) {
        Ok(r) => {
            let json = serde_json::to_value(&r).expect("report serializes");
            (r.ok(), identity_line("semantics", &r), json)
        }
        Err(e @ SemanticsError::UnsupportedFamily(_)) => {
            (false, format!("semantics: {e}"), json!({ "unsupported": e.to_string() }))
        }
        Err(e) => (false, format!("semantics: {e}"), json!({ "error": e.to_string() })),
    }
}

fn purity(m: &BiMap) -> (bool, String, Value) {
    let l = m.lattice();
    let p = is_pure_projection(m);
    let witness = p.witness.map(|(a, b)| vec![l.name(a), l.name(b)]);
    let human = match p.witness {
        None => "pure projection: yes".to_string(),
        Some((a, b)) => format!(
            "pure projection: no, G({}, {}) = {} but G({}, 0) = {}",
            l.name(a),
            l.name(b),
            m.get(a, b),
            l.name(a),
            m.get(a, l.bot())
        ),
    };
    (p.pure, human, json!({ "pure": p.pure, "witness": witness }))
}

fn classify(m: &BiMap) -> Report {
    let g = check_map(MapSystem::G, m);
    if !g.ok {
        let human = format!("not a G-map\n{}", g.first_violation.as_ref().expect("failed report has a violation"));
        return Report::new(false, human, json!({ "g_map": false, "first_violation": g.first_violation }));
    }
    let satisfied: Vec<String> = [MapSystem::S, MapSystem::J, MapSystem::D]
        .into_iter()
        .filter(|&s| check_map(s, m).ok)
        .map(|s| s.to_string())
        .collect();
    let (_, pure_line, pure_json) = purity(m);
    let (_, sem_line, sem_json) = semantics(m);
    let tag = classify_family(m).expect("G-map corners are 0/1");
    let mut human = family_line(m).expect("G-map corners are 0/1");
    let _ = write!(human, "\ncomplement 1 - G: {}", tag.gamma.complement());
    let also = if satisfied.is_empty() { "none".to_string() } else { satisfied.join(", ") };
    let _ = write!(human, "\nalso satisfies: {also}\n{pure_line}\n{sem_line}");
    let json = json!({
        "g_map": true,
        "family": family_json(m),
        "complement_gamma": tag.gamma.complement().index(),
        "satisfies": satisfied,
        "purity": pure_json,
        "semantics": sem_json,
    });
    Report::new(true, human, json)
}

fn assignment_text(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join(", ")
}

fn states(l: &Oml, vertices: Option<usize>) -> Result<Report, Failure> {
    let class = classify_states(l);
    let mut human = match class.tag {
        StateTag::Stateless => "stateless: the lattice admits no state".to_string(),
        StateTag::UniqueState => "unique-state: the lattice admits exactly one state".to_string(),
        StateTag::QuantumLogic => {
            format!("quantum-logic: the state polytope has dimension {}", class.polytope.dim)
        }
    };
    let witness = class.witness(l).map(|s| state_entries(l, &s));
    if let Some(w) = &witness {
        let _ = write!(human, "\ninterior state: {}", assignment_text(&w.0));
    }
    let mut json = json!({
        "classification": class.tag,
        "dimension": class.polytope.dim,
        "witness": witness,
    });
    if let Some(cap) = vertices {
        let (vs, truncated) = match state_vertices(l, cap) {
            Ok(vs) => (vs, false),
            Err(FeasError::CapExceeded { partial }) => {
                (partial.into_iter().map(|v| omlprob::states::StateFn::new(l, v)).collect(), true)
            }
            Err(e) => return Err(Failure::Fatal(e.to_string())),
        };
        let entries: Vec<_> = vs.iter().map(|s| state_entries(l, s)).collect();
        let more = if truncated { format!(" (first {cap}; more exist)") } else { String::new() };
        let _ = write!(human, "\nextreme states: {}{more}", entries.len());
        for (i, e) in entries.iter().enumerate() {
            let _ = write!(human, "\n  [{i}] {}", assignment_text(&e.0));
        }
        json["vertices"] = json!(entries);
        json["truncated"] = json!(truncated);
    }
    Ok(Report::new(true, human, json))
}

fn rat(s: &str) -> Result<Rat, Failure> {
    s.trim().parse().map_err(|_| Failure::Fatal(format!("{s:?} is not a rational number")))
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Fatal(format!("--family {family} requires {flag}")))
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn construct(
    family: Family,
    lattice: Option<&Path>,
    params: &[String],
    atoms: Option<usize>,
    n: Option<usize>,
    parts: &[usize],
) -> Result<String, Failure> {
    match family {
        Family::Gamma9 => {
            let path = need(lattice, "--lattice", "gamma9")?;
            if params.len() != 4 {
                return Err(Failure::Fatal("--params takes four values r1,r2,u1,u2".into()));
            }
            let l = load_lattice(path)?;
            let p = Table3Params::new(rat(&params[0])?, rat(&params[1])?, rat(&params[2])?, rat(&params[3])?);
            let g = build_table3_family(&l, &p).map_err(invalid)?;
            Ok(map_to_json(&g, Some(&path.display().to_string())))
        }
        Family::Boolean => Ok(lattice_to_json(&boolean_algebra(need(atoms, "--atoms", "boolean")?).map_err(invalid)?)),
        Family::Mo => Ok(lattice_to_json(&mo(need(n, "--n", "mo")?).map_err(invalid)?)),
        Family::Hsum => {
            if parts.len() < 2 {
                return Err(Failure::Fatal("--family hsum requires --parts with at least two atom counts".into()));
            }
            let ls = parts.iter().map(|&k| boolean_algebra(k)).collect::<Result<Vec<_>, _>>().map_err(invalid)?;
            Ok(lattice_to_json(&horizontal_sum(&ls).map_err(invalid)?))
        }
    }
}

fn derive(kind: DeriveKind, m: &BiMap, lattice: &Path) -> Result<String, Failure> {
    let l = m.lattice();
    let path = lattice.display().to_string();
    if !matches!(kind, DeriveKind::Complement) {
        if let Some(v) = check_map(MapSystem::S, m).first_violation {
            return Err(Failure::Invalid(format!("input is not an s-map: {v}")));
        }
    }
    let out = match kind {
        DeriveKind::J => derive_j_from_s(m).map_err(invalid)?,
        DeriveKind::D => derive_d_from_s(m).map_err(invalid)?,
        DeriveKind::PureProjection => derive_pure_projection_from_s(m),
        DeriveKind::Complement => complement_map(m),
        DeriveKind::State => return Ok(state_to_json(l, &induced_state_from_smap(m))),
    };
    Ok(map_to_json(&out, Some(&path)))
}

fn emit(text: String, out: Option<&Path>) -> Result<Report, Failure> {
    match out {
        None => {
            let json = serde_json::from_str(&text).expect("emitted files are JSON");
            Ok(Report::new(true, text, json))
        }
        Some(p) => {
            fs::write(p, format!("{text}\n"))
                .map_err(|e| Failure::Fatal(format!("cannot write {}: {e}", p.display())))?;
            let shown = p.display().to_string();
            Ok(Report::new(true, format!("wrote {shown}"), json!({ "wrote": shown })))
        }
    }
}

fn verify(check: VerifyKind, m: &BiMap) -> Report {
    let identity = |name: &str, r: IdentityReport| {
        let mut json = serde_json::to_value(&r).expect("report serializes");
        json["check"] = json!(name);
        Report::new(r.ok(), identity_line(name, &r), json)
    };
    let tagged = |name: &str, (ok, human, mut json): (bool, String, Value)| {
        json["check"] = json!(name);
        Report::new(ok, human, json)
    };
    match check {
        VerifyKind::LemmaKomp => identity("lemma-komp", verify_lemma_komp(m)),
        VerifyKind::Gamma9 => identity("gamma9", verify_gamma9_identities(m)),
        VerifyKind::SmapProperties => identity("smap-properties", verify_smap_properties(m)),
        VerifyKind::Semantics => tagged("semantics", semantics(m)),
        VerifyKind::Purity => tagged("purity", purity(m)),
        VerifyKind::Pseudometric => {
            let r = is_pseudometric(m);
            let human = match &r {
                Ok(()) => "pseudometric: yes".to_string(),
                Err(v) => format!("pseudometric: no\n{v}"),
            };
            let json = json!({ "check": "pseudometric", "ok": r.is_ok(), "violation": r.err() });
            Report::new(json["ok"] == true, human, json)
        }
    }
}

fn verdict_text(v: &PropertyVerdict) -> String {
    let mut s = format!("{} over {}: {} ({} instances)", v.property, v.scope, v.verdict, v.instances);
    if let Some(w) = &v.witness {
        let _ = write!(s, "\nfails at ({}): {} with value {}", w.elements.join(", "), w.claim, w.value);
        for (k, x) in &w.assignment.0 {
            let _ = write!(s, "\n  {k} = {x}");
        }
    }
    s
}

fn property(v: &PropertyVerdict) -> Report {
    let mut human = verdict_text(v);
    if let Some(u) = &v.unrestricted {
        let _ = write!(human, "\nwithout the pseudometric restriction:\n{}", verdict_text(u));
    }
    let json = serde_json::to_value(v).expect("verdict serializes");
    Report::new(v.is_implied(), human, json)
}

fn search(paths: &[PathBuf], cap: usize) -> Result<Report, Failure> {
    let lattices = if paths.is_empty() {
        sweep_suite()
    } else {
        paths.iter().map(|p| Ok((p.display().to_string(), load_lattice(p)?))).collect::<Result<Vec<_>, Failure>>()?
    };
    let report = search_pseudometric_violation(&lattices, cap).map_err(|e| Failure::Fatal(e.to_string()))?;
    let json = serde_json::to_value(&report).expect("report serializes");
    let (ok, human) = match &report {
        SweepReport::Found { witness, vertices_checked } => (
            false,
            format!(
                "found after {vertices_checked} vertices: s-map vertex {} on {} gives d_p with {}",
                witness.vertex_index, witness.lattice, witness.violation
            ),
        ),
        SweepReport::Exhausted { lattices, vertices_checked, truncated } => {
            let mut s = format!("no violation: {vertices_checked} vertices checked on {}", lattices.join(", "));
            if !truncated.is_empty() {
                let _ = write!(s, "\nvertex lists cut at {cap} on {}", truncated.join(", "));
            }
            (true, s)
        }
    };
    Ok(Report::new(ok, human, json))
}
