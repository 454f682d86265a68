use serde_json::Value;
use sl2rep::cli::run;
use sl2rep::localfield::{galois_conjugate, CharacterSpec, ExtKind, QuadExt};

fn cli(args: &[&str]) -> (i32, String, String) {
    run(std::iter::once("sl2rep").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = cli(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn documented_examples() {
    assert!(ok(&["census", "3", "K", "1"]).starts_with("12 (formula (q+1)q^j: 12) PASS\n"));
    assert!(ok(&["restrict", "5", "Cusp(theta:b->order2)", "--char", "0"]).starts_with("length 2; meataxe: 2 PASS\n"));
    assert!(ok(&["whittaker", "3", "2"]).starts_with("exponent 4 (2^r: 4) PASS\n"));
}

#[test]
fn every_subcommand_passes() {
    let chi = {
        let ext = QuadExt::new(3, ExtKind::Unramified, 2).unwrap();
        let c = ext.characters(2).into_iter().find(|c| galois_conjugate(c) != *c).unwrap();
        serde_json::to_string(&CharacterSpec::from_character(&c)).unwrap()
    };
    let runs: Vec<Vec<&str>> = vec![
        vec!["irreps", "3"],
        vec!["irreps", "4", "--char", "5"],
        vec!["restrict", "5", "Princ(0,1)", "--char", "3"],
        vec!["mod-ell", "3", "St(0)", "2"],
        vec!["mod-ell", "2", "Cusp(1)", "3"],
        vec!["packet", r#"{"q":3,"variant":"depth_zero_sc","label":"Cusp(2)"}"#],
        vec!["packet", r#"{"q":5,"variant":"principal_series","eta":{"tame":"1/2"}}"#],
        vec!["x-sigma", &chi],
        vec!["sc-mod-ell", &chi, "2"],
        vec!["census", "2", "I-half", "2"],
        vec!["invariants", "3", "-Cusp(2)", "dK", "1..4"],
        vec!["germ-check", "3", "1..4"],
        vec!["whittaker", "4", "3"],
    ];
    for args in runs {
        let out = ok(&args);
        assert!(!out.contains("FAIL"), "{args:?}\n{out}");
    }
}

#[test]
fn exit_codes() {
    // usage errors
    assert_eq!(cli(&["census", "3", "X", "1"]).0, 2);
    assert_eq!(cli(&["census", "4", "K", "1"]).0, 2);
    assert_eq!(cli(&["irreps", "6"]).0, 2);
    assert_eq!(cli(&["restrict", "3", "Cusp(4)"]).0, 2);
    assert_eq!(cli(&["whittaker", "3", "3"]).0, 2);
    assert_eq!(cli(&["nonsense"]).0, 2);
    assert_eq!(cli(&["x-sigma", "{not json"]).0, 2);
    // resource limits
    assert_eq!(cli(&["whittaker", "9", "2"]).0, 3);
    assert_eq!(cli(&["census", "5", "K", "12"]).0, 3);
    assert_eq!(cli(&["irreps", "128"]).0, 3);
    // the negative control is expected not to stabilize
    let (code, out, _) = cli(&["germ-check", "3", "1..4", "--drop", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("does not stabilize"));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["--format", "json", "irreps", "3", "--char", "2"],
        vec!["--format", "json", "--seed", "99", "restrict", "5", "Cusp(3)"],
        vec!["--format", "json", "germ-check", "3", "1..4"],
    ] {
        assert_eq!(ok(&args), ok(&args));
    }
}

// standalone integers; digits glued to symbols belong to formula names like (q+1)q^j or q^2-1
fn numbers(s: &str) -> Vec<String> {
    let chars: Vec<char> = s.chars().collect();
    let glued = |c: Option<&char>| c.is_some_and(|c| c.is_alphabetic() || "+^_'*".contains(*c));
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let before = if start == 0 { None } else { chars.get(start - 1) };
            let minus_op = start >= 2 && chars[start - 1] == '-' && chars[start - 2].is_alphanumeric();
            if !glued(before) && !minus_op && !glued(chars.get(i)) {
                out.push(chars[start..i].iter().collect());
            }
        } else {
            i += 1;
        }
    }
    out
}

#[test]
fn json_mirrors_text() {
    for args in [
        vec!["census", "3", "K", "2"],
        vec!["irreps", "3"],
        vec!["invariants", "3", "+Cusp(2)", "K", "1..3"],
        vec!["whittaker", "3", "1"],
        vec!["mod-ell", "3", "St(0)", "2"],
    ] {
        let text = ok(&args);
        let mut jargs = vec!["--format", "json"];
        jargs.extend(&args);
        let v: Value = serde_json::from_str(&ok(&jargs)).unwrap();
        assert_eq!(v["pass"], Value::Bool(true));
        let lines = v["lines"].as_array().unwrap();
        let text_lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), text_lines.len(), "{args:?}");
        for (obj, line) in lines.iter().zip(&text_lines) {
            let obj = obj.as_object().unwrap();
            match obj.get("pass") {
                Some(Value::Bool(true)) => assert!(line.ends_with(" PASS")),
                Some(Value::Bool(false)) => assert!(line.ends_with(" FAIL")),
                _ => assert!(!line.ends_with("PASS") && !line.ends_with("FAIL")),
            }
            // every number shown in the text is carried by some JSON field
            let mut carried = Vec::new();
            for val in obj.values() {
                carried.extend(val.to_string().split(|c: char| !c.is_ascii_digit()).map(String::from));
            }
            for n in numbers(line) {
                assert!(carried.contains(&n), "{args:?}: {n} in {line:?} has no JSON field");
            }
        }
    }
}

#[test]
fn csv_matches_golden_tables() {
    let golden: [(&[&str], &str); 7] = [
        (&["census", "2", "I", "3"], include_str!("golden/census_2_I_3.csv")),
        (&["census", "3", "K", "2"], include_str!("golden/census_3_K_2.csv")),
        (&["census", "5", "I-half", "1"], include_str!("golden/census_5_Ihalf_1.csv")),
        (&["invariants", "3", "+Cusp(2)", "K", "1..5"], include_str!("golden/invariants_3_plus_cusp2_K.csv")),
        (&["invariants", "3", "-Cusp(2)", "K", "1..5"], include_str!("golden/invariants_3_minus_cusp2_K.csv")),
        (&["invariants", "5", "+Cusp(3)", "K", "1..4"], include_str!("golden/invariants_5_plus_cusp3_K.csv")),
        (&["invariants", "3", "+Cusp(1)#1", "I", "1..4"], include_str!("golden/invariants_3_cusp1_member1_I.csv")),
    ];
    for (args, expect) in golden {
        let mut a = vec!["--format", "csv"];
        a.extend(args);
        assert_eq!(ok(&a), expect, "{args:?}");
    }
}

#[test]
fn output_file_and_fast_mode() {
    let dir = std::env::temp_dir().join(format!("sl2rep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("irreps.json");
    let (code, out, _) = cli(&["--format", "json", "-o", path.to_str().unwrap(), "irreps", "2"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "irreps");
    std::fs::remove_dir_all(&dir).unwrap();

    let slow = ok(&["restrict", "5", "Cusp(2)"]);
    let fast = ok(&["--fast", "restrict", "5", "Cusp(2)"]);
    assert!(slow.contains("meataxe"));
    assert!(!fast.contains("meataxe"));
}

#[test]
fn json_arguments_from_files() {
    let dir = std::env::temp_dir().join(format!("sl2rep-cli-at-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.json");
    std::fs::write(&path, r#"{"q":3,"variant":"depth_zero_sc","label":"Cusp(2)"}"#).unwrap();
    let arg = format!("@{}", path.display());
    let out = ok(&["packet", &arg]);
    assert!(out.starts_with("size 4"), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}
