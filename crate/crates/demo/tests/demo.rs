use omlprob_demo::demo::{check_property, classify_lattice, gamma9_table, preset_lattice};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn gamma9_table_matches_the_family() {
    let v = parse(gamma9_table("1/3", "2/3", "0", "1"));
    assert_eq!(v["family"], "Γ9");
    assert_eq!(v["complement_family"], "Γ11");
    assert_eq!(v["g_map"], true);
    assert_eq!(v["pure_projection"], false);
    assert_eq!(v["gamma9_identities"]["ok"], true);
    assert_eq!(v["semantics"]["ok"], true);
    assert_eq!(v["alpha"], "1/2");
    // row a: alpha, alpha, r1, r2, alpha, alpha
    let row_a: Vec<&str> = v["rows"][0].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(row_a, ["1/2", "1/2", "1/3", "2/3", "1/2", "1/2"]);
    assert_eq!(v["induced_state"]["b'"], "1/2");
}

#[test]
fn equal_parameters_give_a_pure_projection() {
    let v = parse(gamma9_table("1/4", "1/4", "3/5", "3/5"));
    assert_eq!(v["pure_projection"], true);
}

#[test]
fn gamma9_table_rejects_bad_parameters() {
    assert!(gamma9_table("3/2", "0", "0", "0").unwrap_err().contains("r1"));
    assert!(gamma9_table("x", "0", "0", "0").unwrap_err().contains("not a rational"));
}

#[test]
fn presets_classify() {
    let v = parse(classify_lattice(&preset_lattice("mo-2").unwrap()));
    assert_eq!(v["classification"], "quantum-logic");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["truncated"], false);
    let v = parse(classify_lattice(&preset_lattice("boolean-3").unwrap()));
    assert_eq!(v["blocks"].as_array().unwrap().len(), 1);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert!(preset_lattice("mo-9").is_err());
}

#[test]
fn property_checks() {
    let mo2 = preset_lattice("mo-2").unwrap();
    let v = parse(check_property(&mo2, "bell1-state"));
    assert_eq!(v["verdict"], "violated");
    assert_eq!(v["witness"]["elements"], serde_json::json!(["a", "b"]));
    assert_eq!(v["witness"]["value"], "2");
    let v = parse(check_property(&mo2, "bell1-smap"));
    assert_eq!(v["verdict"], "implied");
    assert_eq!(v["certified"], 36);
    let v = parse(check_property(&mo2, "bell2-smap"));
    assert_eq!(v["verdict"], "implied");
    assert_eq!(v["unrestricted"]["verdict"], "violated");
    assert!(check_property(&mo2, "bell3").is_err());
    assert!(check_property("{", "bell1-state").is_err());
}
