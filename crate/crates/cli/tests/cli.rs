use std::fs;
use std::path::Path;
use std::process::Command;

use omlprob::bimaps::{build_table3_family, derive_j_from_s, Table3Params};
use omlprob::io::{parse_lattice, parse_map};
use omlprob::lattice::{boolean_algebra, horizontal_sum, mo};
use omlprob::Rat;
use omlprob_cli::{run, Output};

const D: &str = "tests/data";

fn omlprob(args: &str) -> Output {
    run(std::iter::once("omlprob").chain(args.split_whitespace()))
}

fn data(name: &str) -> String {
    format!("{D}/{name}")
}

/// Compare `--json` output against `tests/golden/<name>.json`. Set
/// `OMLPROB_UPDATE_GOLDEN=1` to rewrite the files.
fn golden(name: &str, args: &str, code: i32) {
    let out = omlprob(&format!("--json {args}"));
    assert_eq!(out.code, code, "{args}: {}", out.stderr);
    let path = Path::new("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("OMLPROB_UPDATE_GOLDEN").is_some() {
        fs::write(&path, &out.stdout).unwrap();
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out.stdout, want, "{name} drifted from its golden file");
}

#[test]
fn golden_outputs() {
    let mo2 = data("mo2.json");
    let t3 = data("table3.json");
    golden("check_lattice_mo2", &format!("check-lattice {mo2}"), 0);
    golden("check_map_table3", &format!("check-map --system g {mo2} {t3}"), 0);
    golden("classify_table3", &format!("classify-map {mo2} {t3}"), 0);
    golden("states_mo2", &format!("states {mo2} --vertices 10"), 0);
    golden("bell1_smap_mo2", &format!("property bell1-smap {mo2}"), 0);
    golden("jauch_piron_state_mo2", &format!("property jauch-piron-state {mo2}"), 1);
    golden("bell2_smap_mo2", &format!("property bell2-smap {mo2}"), 0);
    golden("pseudometric_dmap", &format!("verify pseudometric {mo2} {}", data("dmap_mo2.json")), 1);
    golden("construct_gamma9", &format!("construct --family gamma9 --lattice {mo2} --params 1/3,2/3,0,1"), 0);
    golden("derive_d", &format!("derive d {mo2} {}", data("smap_mo2.json")), 0);
    golden("search_suite", "search", 1);
}

#[test]
fn json_output_is_stable_across_runs() {
    let args = format!("--json property bell2-state {}", data("mo2.json"));
    assert_eq!(omlprob(&args), omlprob(&args));
}

#[test]
fn table3_map_is_a_gamma9_gmap() {
    let out = omlprob(&format!("check-map --system g {} {}", data("mo2.json"), data("table3.json")));
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("family: Γ9"), "{}", out.stdout);
}

#[test]
fn bell1_smap_is_implied_on_mo2() {
    let out = omlprob(&format!("property bell1-smap {}", data("mo2.json")));
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("implied"));
    let out = omlprob(&format!("property bell1-state {}", data("mo2.json")));
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("violated"));
}

#[test]
fn constructed_lattices_round_trip() {
    let cases = [
        ("--family boolean --atoms 3", boolean_algebra(3).unwrap()),
        ("--family mo --n 4", mo(4).unwrap()),
        (
            "--family hsum --parts 2,3",
            horizontal_sum(&[boolean_algebra(2).unwrap(), boolean_algebra(3).unwrap()]).unwrap(),
        ),
    ];
    for (args, want) in cases {
        let out = omlprob(&format!("construct {args}"));
        assert_eq!(out.code, 0, "{}", out.stderr);
        let l = parse_lattice(&out.stdout).unwrap();
        assert_eq!(l, want, "{args}");
        assert_eq!(omlprob::io::lattice_to_json(&l) + "\n", out.stdout);
    }
}

#[test]
fn constructed_maps_round_trip() {
    let l = parse_lattice(&fs::read_to_string(data("mo2.json")).unwrap()).unwrap();
    let out = omlprob(&format!("construct --family gamma9 --lattice {} --params 1/5,1,1/2,0", data("mo2.json")));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let g = parse_map(&l, &out.stdout).unwrap();
    let params = Table3Params::new(Rat::new(1, 5), Rat::one(), Rat::half(), Rat::zero());
    assert_eq!(g, build_table3_family(&l, &params).unwrap());

    let smap = data("smap_mo2.json");
    let out = omlprob(&format!("derive j {} {smap}", data("mo2.json")));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let p = parse_map(&l, &fs::read_to_string(&smap).unwrap()).unwrap();
    assert_eq!(parse_map(&l, &out.stdout).unwrap(), derive_j_from_s(&p).unwrap());
}

#[test]
fn files_written_with_out_reparse() {
    let dir = std::env::temp_dir().join(format!("omlprob-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mo3.json");
    let out = omlprob(&format!("construct --family mo --n 3 --out {}", path.display()));
    assert_eq!(out.code, 0);
    let out = omlprob(&format!("check-lattice {}", path.display()));
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("valid orthomodular lattice: 8 elements, 3 blocks"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let mo2 = data("mo2.json");
    let cases = [
        (format!("check-lattice {}", data("benzene.json")), 1),
        (format!("check-lattice {}", data("malformed.json")), 2),
        (format!("check-lattice {D}/absent.json"), 2),
        (format!("check-map --system g {mo2} {}", data("out_of_range.json")), 1),
        (format!("check-map --system g {mo2} {}", data("missing_pair.json")), 2),
        (format!("check-map --system s {mo2} {}", data("table3.json")), 1),
        (format!("derive j {mo2} {}", data("table3.json")), 1),
        (format!("construct --family gamma9 --lattice {} --params 0,0,0,0", data("b3.json")), 1),
        (format!("construct --family gamma9 --lattice {mo2} --params 0,0,0"), 2),
        (format!("construct --family gamma9 --lattice {mo2} --params 0,x,0,0"), 2),
        ("construct --family mo".to_string(), 2),
        (format!("property bell3 {mo2}"), 2),
        (format!("check-map {mo2} {}", data("table3.json")), 2),
        (format!("check-lattice --frobnicate {mo2}"), 2),
        ("frobnicate".to_string(), 2),
        (String::new(), 2),
        ("--help".to_string(), 0),
    ];
    for (args, code) in cases {
        let out = omlprob(&args);
        assert_eq!(out.code, code, "{args}: {}{}", out.stdout, out.stderr);
        if code == 2 && !args.is_empty() {
            assert!(!out.stderr.is_empty());
        }
    }
}

#[test]
fn usage_text_on_unknown_verb() {
    let out = omlprob("frobnicate");
    assert!(out.stderr.contains("Usage: omlprob"), "{}", out.stderr);
}

#[test]
fn invalid_lattice_report() {
    let out = omlprob(&format!("--json check-lattice {}", data("benzene.json")));
    assert_eq!(out.code, 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["error"].as_str().unwrap().contains("orthomodular"));
}

#[test]
fn search_over_boolean_files_is_exhausted() {
    let out = omlprob(&format!("--json search {}", data("b3.json")));
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["outcome"], "exhausted");
    assert_eq!(v["vertices_checked"], 3);
}

#[test]
fn binary_honors_element_bound() {
    let bin = env!("CARGO_BIN_EXE_omlprob");
    let run = |max: &str| {
        Command::new(bin).args(["check-lattice", &data("b3.json")]).env("OMLPROB_MAX_ELEMENTS", max).output().unwrap()
    };
    let small = run("4");
    assert_eq!(small.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&small.stdout).contains("above the configured bound"));
    let other = Command::new(bin).args(["states", &data("b3.json")]).env("OMLPROB_MAX_ELEMENTS", "4").output().unwrap();
    assert_eq!(other.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&other.stderr).contains("above the configured bound"));
    assert_eq!(run("8").status.code(), Some(0));
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_omlprob");
    let args = ["--json", "states", "tests/data/mo2.json"];
    let out = Command::new(bin).args(args).output().unwrap();
    let lib = run(std::iter::once("omlprob").chain(args));
    assert_eq!(out.status.code(), Some(lib.code));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);
}
