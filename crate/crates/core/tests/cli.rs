use std::path::{Path, PathBuf};
use std::process::Command;

use congrue::cli::run;
use congrue::json::{parse_points, parse_poly, PolyDoc};
use num_bigint::BigInt;
use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run_args(args: &[&str], stdin: &str) -> (i32, String) {
    let mut argv = vec!["congrue".to_string()];
    argv.extend(args.iter().map(|a| {
        let p = fixtures().join(a);
        if p.is_file() {
            p.display().to_string()
        } else {
            a.to_string()
        }
    }));
    let out = run(argv, &mut stdin.as_bytes());
    (out.code, out.stdout)
}

const GOLDEN: &[(&str, &[&str], i32)] = &[
    (
        "poly_check_half_square",
        &["poly", "check", "half_square.json"],
        0,
    ),
    (
        "poly_check_monomial",
        &["poly", "check", "half_square_monomial.json"],
        0,
    ),
    (
        "poly_check_not_integer",
        &["poly", "check", "half_x.json"],
        2,
    ),
    (
        "poly_check_window_false",
        &["poly", "check", "--window", "-10..10", "binom_x_2.json"],
        1,
    ),
    (
        "poly_decompose_values",
        &["poly", "decompose", "values_a5.json"],
        0,
    ),
    (
        "poly_decompose_half_square",
        &["poly", "decompose", "half_square.json"],
        0,
    ),
    ("map_extend", &["map", "extend", "map.json"], 0),
    (
        "map_extend_broken",
        &["map", "extend", "map_broken.json"],
        2,
    ),
    ("crt_conflict", &["crt", "solve", "crt_conflict.txt"], 2),
    ("crt_sun_tzu", &["crt", "solve", "crt_sun_tzu.txt"], 0),
    ("lattice_klein", &["lattice", "analyze", "klein_m3.json"], 0),
    ("lattice_z6", &["lattice", "analyze", "z6.json"], 0),
    ("ultra_chain3", &["ultra", "analyze", "chain3.json"], 0),
    ("ultra_m3", &["ultra", "analyze", "m3_lattice.json"], 0),
    (
        "ultra_asymmetric",
        &["ultra", "analyze", "asymmetric_space.json"],
        1,
    ),
    ("ultra_split", &["ultra", "analyze", "split_space.json"], 0),
    (
        "represent_divisors12",
        &["ultra", "represent", "divisors12.json"],
        0,
    ),
    (
        "represent_m3",
        &["ultra", "represent", "m3_lattice.json"],
        2,
    ),
    (
        "represent_bad_join",
        &["ultra", "represent", "bad_join.json"],
        2,
    ),
];

#[test]
fn golden_outputs_and_exit_codes() {
    for (name, args, code) in GOLDEN {
        let expected =
            std::fs::read_to_string(fixtures().join("golden").join(format!("{name}.out"))).unwrap();
        let (got_code, stdout) = run_args(args, "");
        assert_eq!(got_code, *code, "{name}: exit code");
        assert_eq!(stdout, expected, "{name}: output");
    }
}

#[test]
fn output_is_deterministic() {
    for (_, args, _) in GOLDEN {
        assert_eq!(run_args(args, ""), run_args(args, ""));
    }
}

#[test]
fn stdin_matches_file_input() {
    let text = std::fs::read_to_string(fixtures().join("klein_m3.json")).unwrap();
    assert_eq!(
        run_args(&["lattice", "analyze"], &text),
        run_args(&["lattice", "analyze", "klein_m3.json"], "")
    );
}

#[test]
fn klein_m3_report() {
    let (_, out) = run_args(&["lattice", "analyze", "klein_m3.json"], "");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["distributive"], false);
    assert_eq!(v["arithmetical"], false);
    assert_eq!(v["crc"], false);
}

#[test]
fn decompose_then_eval_reproduces_values_byte_exactly() {
    for file in ["values_a5.json", "map.json"] {
        let input = std::fs::read_to_string(fixtures().join(file)).unwrap();
        let (code, series) = if file == "map.json" {
            run_args(&["map", "extend", file], "")
        } else {
            run_args(&["poly", "decompose", file], "")
        };
        assert_eq!(code, 0);
        let (code, values) = run_args(&["poly", "eval"], &series);
        assert_eq!(code, 0);
        if file == "values_a5.json" {
            assert_eq!(values, input);
        }
        // every input point is reproduced
        let given = parse_points(&serde_json::from_str(&input).unwrap()).unwrap();
        let got = parse_points(&serde_json::from_str(&values).unwrap()).unwrap();
        for (x, v) in given.iter() {
            assert_eq!(got.get(x), Some(v), "{file}: point {x}");
        }
        // and a second round trip is stable
        let (_, again) = run_args(&["poly", "decompose"], &values);
        assert_eq!(again, series);
    }
}

#[test]
fn extended_map_is_certified_and_interpolates() {
    let (_, out) = run_args(&["map", "extend", "map.json"], "");
    let PolyDoc::Pn(s) = parse_poly(&serde_json::from_str(&out).unwrap()).unwrap() else {
        panic!("expected a pn series");
    };
    assert!(s.certified());
    assert_eq!(s.eval_i64(0), BigInt::from(1));
    assert_eq!(s.eval_i64(3), BigInt::from(10));
}

#[test]
fn parse_errors_name_the_field() {
    let cases = [
        (
            &["poly", "check"][..],
            r#"{"basis":"binomial","coeffs":["1","2x"]}"#,
            "coeffs[1]",
        ),
        (&["poly", "check"][..], r#"{"coeffs":[]}"#, "basis"),
        (
            &["map", "extend"][..],
            r#"{"points":{"1":"one"}}"#,
            "points.1",
        ),
        (
            &["poly", "decompose"][..],
            r#"{"points":{"0":"1","1":"2"}}"#,
            "points.-1",
        ),
        (
            &["ultra", "analyze"][..],
            r#"{"lattice":{"order":[]}}"#,
            "lattice.size",
        ),
        (
            &["lattice", "analyze"][..],
            r#"[[[0,1]],[[0],[1],[2]]]"#,
            "[1]",
        ),
    ];
    for (args, input, field) in cases {
        let out = {
            let mut argv = vec!["congrue"];
            argv.extend_from_slice(args);
            run(argv, &mut input.as_bytes())
        };
        assert_eq!(out.code, 2, "{input}");
        assert!(
            out.stderr.contains(&format!("`{field}`")),
            "{input}: {}",
            out.stderr
        );
    }
    let (code, _) = run_args(&["poly", "check"], "not json");
    assert_eq!(code, 2);
}

#[test]
fn binary_uses_the_same_contract() {
    let out = Command::new(env!("CARGO_BIN_EXE_congrue"))
        .args(["crt", "solve"])
        .arg(fixtures().join("crt_conflict.txt"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"unsolvable\":[0,1]}\n"
    );

    let out = Command::new(env!("CARGO_BIN_EXE_congrue"))
        .args(["--verbose", "poly", "check"])
        .arg(fixtures().join("half_square.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"certified\":true}\n"
    );
    assert!(!out.stderr.is_empty());
}
