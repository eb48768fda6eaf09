use serde_json::{json, Value};

use omlprob::analysis::{run_property, Property, PropertyVerdict};
use omlprob::bimaps::{
    build_table3_family, check_g_map, classify_family, complement_map, is_pure_projection,
    semantic_check_on_compatible, verify_gamma9_identities, Table3Params,
};
use omlprob::feasibility::FeasError;
use omlprob::io::{lattice_to_json, parse_lattice, state_entries};
use omlprob::lattice::{mo, Oml};
use omlprob::states::{classify_states, state_vertices, StateFn};
use omlprob::suite::{suite, sweep_suite};
use omlprob::Rat;

const VERTEX_CAP: usize = 32;

fn rat(name: &str, s: &str) -> Result<Rat, String> {
    s.trim().parse().map_err(|_| format!("{name}: {s:?} is not a rational number"))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

/// The Γ9 map on MO(2) for `(r1, r2, u1, u2)`, laid out as a table, with
/// the checks it passes.
pub fn gamma9_table(r1: &str, r2: &str, u1: &str, u2: &str) -> Result<String, String> {
    let params = Table3Params::new(rat("r1", r1)?, rat("r2", r2)?, rat("u1", u1)?, rat("u2", u2)?);
    let l = mo(2).expect("MO(2) is valid");
    let g = build_table3_family(&l, &params).map_err(|e| e.to_string())?;
    let order: Vec<_> = ["a", "a'", "b", "b'", "0", "1"].iter().map(|n| l.e(n)).collect();
    let rows: Vec<Vec<String>> =
        order.iter().map(|&x| order.iter().map(|&y| g.get(x, y).to_string()).collect()).collect();
    let family = classify_family(&g).map_err(|e| e.to_string())?.gamma;
    let complement = classify_family(&complement_map(&g)).map_err(|e| e.to_string())?.gamma;
    let purity = is_pure_projection(&g);
    let identities = verify_gamma9_identities(&g);
    let semantics = semantic_check_on_compatible(&g).map_err(|e| e.to_string())?;
    let induced = StateFn::from_fn(&l, |x| g.get(x, l.bot()).clone());
    let json = json!({
        "order": order.iter().map(|&x| l.name(x)).collect::<Vec<_>>(),
        "rows": rows,
        "alpha": params.alpha(),
        "beta": params.beta(),
        "g_map": check_g_map(&g).ok,
        "family": family.to_string(),
        "complement_family": complement.to_string(),
        "pure_projection": purity.pure,
        "gamma9_identities": { "checked": identities.checked, "ok": identities.ok() },
        "semantics": { "checked": semantics.checked, "ok": semantics.ok() },
        "induced_state": state_entries(&l, &induced),
    });
    Ok(pretty(&json))
}

fn lattice(text: &str) -> Result<Oml, String> {
    parse_lattice(text).map_err(|e| e.to_string())
}

/// Blocks, state-space class and up to 32 extreme states.
pub fn classify_lattice(text: &str) -> Result<String, String> {
    let l = lattice(text)?;
    let class = classify_states(&l);
    let (vertices, truncated) = match state_vertices(&l, VERTEX_CAP) {
        Ok(vs) => (vs, false),
        Err(FeasError::CapExceeded { partial }) => (partial.into_iter().map(|v| StateFn::new(&l, v)).collect(), true),
        Err(e) => return Err(e.to_string()),
    };
    let blocks: Vec<Vec<&str>> = l.blocks().iter().map(|b| b.iter().map(|&x| l.name(x)).collect()).collect();
    let json = json!({
        "elements": l.len(),
        "blocks": blocks,
        "classification": class.tag,
        "dimension": class.polytope.dim,
        "vertices": vertices.iter().map(|s| state_entries(&l, s)).collect::<Vec<_>>(),
        "truncated": truncated,
    });
    Ok(pretty(&json))
}

fn summary(v: &PropertyVerdict) -> Value {
    let mut out = json!({
        "property": v.property,
        "scope": v.scope,
        "verdict": v.verdict,
        "instances": v.instances,
        "certified": v.certificates.len(),
    });
    if let Some(w) = &v.witness {
        out["witness"] = json!(w);
    }
    if let Some(u) = &v.unrestricted {
        out["unrestricted"] = summary(u);
    }
    out
}

/// Verdict for one of the six properties, without the per-instance
/// certificates.
pub fn check_property(text: &str, property: &str) -> Result<String, String> {
    let l = lattice(text)?;
    let p: Property = property.parse()?;
    Ok(pretty(&summary(&run_property(&l, p))))
}

/// Lattice file for a built-in lattice.
pub fn preset_lattice(name: &str) -> Result<String, String> {
    suite()
        .into_iter()
        .chain(sweep_suite())
        .find(|(n, _)| n == name)
        .map(|(_, l)| lattice_to_json(&l))
        .ok_or_else(|| format!("no built-in lattice named {name:?}"))
}
