mod common;

use std::fs;

use common::{golden, golden_dir, render, CASES};

/// Set `UPDATE_GOLDEN=1` to rewrite the files after an intended change.
#[test]
fn cli_output_matches_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in CASES {
        let got = render(args);
        if update {
            fs::write(golden_dir().join(format!("{name}.txt")), &got).unwrap();
        } else if golden(name).as_deref() != Some(got.as_str()) {
            mismatched.push(format!("{name}:\n{got}"));
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch:\n{}", mismatched.join("\n"));
}

#[test]
fn output_is_deterministic() {
    for (_, args) in CASES.iter().take(12) {
        assert_eq!(render(args), render(args));
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| {
        let out = render(args);
        out.lines().last().unwrap().to_string()
    };
    assert_eq!(code(CASES[0].1), "[exit 1]");
    assert_eq!(code(CASES[2].1), "[exit 0]");
    for (name, args) in CASES {
        let last = code(args);
        if name.starts_with("usage") || name.ends_with("mismatch") || name.ends_with("cyclic") || name.ends_with("parse_error") {
            assert_eq!(last, "[exit 2]", "{name}");
        }
        if name.ends_with("resource_guard") {
            assert_eq!(last, "[exit 3]", "{name}");
        }
    }
}
