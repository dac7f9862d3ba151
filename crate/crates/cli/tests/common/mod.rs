use std::fs;
use std::path::PathBuf;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Documented invocations, by golden-file name. File arguments are
/// relative to the fixture directory.
pub const CASES: &[(&str, &[&str])] = &[
    ("equiv_loop_c2_hybrid_0", &["equiv", "--left", "loop.json", "--right", "c2.json", "--logic", "hybrid", "--depth", "0"]),
    ("equiv_loop_c2_hybrid_1", &["equiv", "--left", "loop.json", "--right", "c2.json", "--logic", "hybrid", "--depth", "1"]),
    ("equiv_path3_self_bf_3", &["equiv", "--left", "path3.json", "--right", "path3.json", "--logic", "bf", "--depth", "3"]),
    ("equiv_stars_bf_2", &["equiv", "--left", "star2.json", "--right", "star3.json", "--logic", "bf", "--depth", "2"]),
    ("equiv_stars_bf_3_trace", &["equiv", "--left", "star2.json", "--right", "star3.json", "--logic", "bf", "--depth", "3", "--trace"]),
    ("equiv_stars_bc_1", &["equiv", "--left", "star2.json", "--right", "star3.json", "--logic", "bc", "--depth", "1"]),
    ("equiv_back_edge_hybrid_3", &["equiv", "--left", "back_edge.json", "--right", "point.json", "--logic", "hybrid", "--depth", "3"]),
    ("equiv_back_edge_temporal_1", &["equiv", "--left", "back_edge.json", "--right", "point.json", "--logic", "hybrid-temporal", "--depth", "1"]),
    ("equiv_path_loop_existential", &["equiv", "--left", "path3.json", "--right", "loop.json", "--logic", "existential-hybrid", "--depth", "3"]),
    ("equiv_loop_path_existential", &["equiv", "--left", "loop.json", "--right", "path3.json", "--logic", "existential-hybrid", "--depth", "1", "--trace"]),
    ("equiv_stars_fo_ef_2", &["equiv", "--left", "star2.json", "--right", "star3.json", "--logic", "fo-ef", "--depth", "2"]),
    ("equiv_loop_c2_gk_1", &["equiv", "--left", "loop.json", "--right", "c2.json", "--logic", "gk", "--depth", "1"]),
    ("equiv_bounded_self", &["equiv", "--left", "bounded.json", "--right", "bounded.json", "--logic", "existential-bf", "--depth", "2"]),
    ("equiv_vocabulary_mismatch", &["equiv", "--left", "loop.json", "--right", "bounded.json", "--logic", "hybrid", "--depth", "1"]),
    ("game_stars_bc_1", &["game", "--left", "star2.json", "--right", "star3.json", "--logic", "bijection", "--depth", "1"]),
    ("game_path3_star2_hybrid_2", &["game", "--left", "path3.json", "--right", "star2.json", "--logic", "hybrid", "--depth", "2"]),
    ("check_loop_hybrid", &["check", "--structure", "loop.json", "--formula", "down x. dia x"]),
    ("check_c2_hybrid", &["check", "--structure", "c2.json", "--formula", "down x. dia x"]),
    ("check_path3_fo", &["check", "--structure", "path3.json", "--fo", "--formula", "exists y (E(c1,y) & exists z E(y,z))"]),
    ("check_parse_error", &["check", "--structure", "loop.json", "--formula", "down . dia"]),
    ("comonad_path3_hybrid_2", &["comonad", "--structure", "path3.json", "--k", "2"]),
    ("comonad_back_edge_temporal_1", &["comonad", "--structure", "back_edge.json", "--kind", "hybrid-temporal", "--k", "1", "--with-i"]),
    ("comonad_resource_guard", &["comonad", "--structure", "path6.json", "--kind", "ef", "--k", "9"]),
    ("depth_path3", &["depth", "--structure", "path3.json"]),
    ("depth_star3", &["depth", "--structure", "star3.json"]),
    ("depth_hidden_p", &["depth", "--structure", "hidden_p.json"]),
    ("depth_bounded", &["depth", "--structure", "bounded.json", "--kind", "bounded"]),
    ("depth_cover_chain", &["depth", "--structure", "path3.json", "--cover", "path3_chain.json", "--k", "2"]),
    ("depth_cover_too_high", &["depth", "--structure", "path3.json", "--cover", "path3_chain.json", "--k", "1"]),
    ("depth_cover_flat", &["depth", "--structure", "path3.json", "--cover", "path3_flat.json"]),
    ("depth_cover_cyclic", &["depth", "--structure", "path3.json", "--cover", "path3_cyclic.json"]),
    ("workspace_path3_1", &["workspace", "--structure", "path3.json", "--q", "1"]),
    ("workspace_path6_1_verify", &["workspace", "--structure", "path6.json", "--q", "1", "--verify"]),
    ("workspace_path6_2_verify", &["workspace", "--structure", "path6.json", "--q", "2", "--verify"]),
    ("workspace_path6_2_sabotage", &["workspace", "--structure", "path6.json", "--q", "2", "--verify", "--sabotage"]),
    ("invariance_unbounded_generated", &["invariance", "--formula", "exists y P(y)", "--notion", "generated:1", "--corpus", "corpus"]),
    ("invariance_bounded_disjoint", &["invariance", "--formula", "exists y (E(c1,y) & P(y))", "--notion", "disjoint", "--corpus", "corpus"]),
    ("invariance_unbounded_disjoint", &["invariance", "--formula", "exists y P(y)", "--notion", "disjoint", "--corpus", "corpus"]),
    ("invariance_bounded_ball", &["invariance", "--formula", "exists y (E(c1,y) & P(y))", "--notion", "ball:1", "--corpus", "corpus"]),
    ("translate_binder", &["translate", "--formula", "down x. dia (p & box down y. @x dia y)"]),
    ("translate_temporal_at_var", &["translate", "--formula", "diainv p", "--at", "x"]),
    ("characteristic_c2_bf_1", &["characteristic", "--structure", "c2.json", "--depth", "1"]),
    ("characteristic_back_edge_temporal_1", &["characteristic", "--structure", "back_edge.json", "--depth", "1", "--logic", "bf-temporal"]),
    ("characteristic_loop_hybrid_1", &["characteristic", "--structure", "loop.json", "--depth", "1", "--logic", "hybrid"]),
    ("characteristic_star2_bc_1", &["characteristic", "--structure", "star2.json", "--depth", "1", "--logic", "bc"]),
    ("usage_unknown_logic", &["equiv", "--left", "loop.json", "--right", "c2.json", "--logic", "modal", "--depth", "1"]),
    ("usage_missing_file", &["check", "--structure", "missing.json", "--formula", "p"]),
];

/// Runs one case from inside the fixture directory, returning the text that
/// the golden file records.
pub fn render(args: &[&str]) -> String {
    let dir = fixtures_dir();
    let argv: Vec<String> = std::iter::once("hybrid".to_string())
        .chain(args.iter().map(|a| {
            let p = dir.join(a);
            if a.ends_with(".json") || *a == "corpus" {
                p.to_string_lossy().into_owned()
            } else {
                a.to_string()
            }
        }))
        .collect();
    let (code, out) = hybrid_cli::run(argv);
    // paths vary between machines; reports only ever name files
    let out = out.replace(&format!("{}/", dir.display()), "");
    format!("$ hybrid {}\n{out}[exit {code}]\n", args.join(" "))
}

pub fn golden(name: &str) -> Option<String> {
    fs::read_to_string(golden_dir().join(format!("{name}.txt"))).ok()
}
