use std::process::Command;

use ultrametric::tree::{LabeledTree, TreeJson};
use ultrametric::tree_metric::reconstruct_space;
use ultrametric::SpaceJson;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ultra(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ultra").chain(args.iter().copied());
    let code = ultrametric_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn tree_dot_has_six_nodes() {
    let (code, out, _) = ultra(&["tree", &fixture("four_point.json"), "--dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph T {"));
    let nodes = out.lines().filter(|l| l.contains("[label=")).count();
    assert_eq!(nodes, 6);
    assert_eq!(out.matches("shape=box").count(), 4);
    assert_eq!(out.matches(" -- ").count(), 5);
    assert!(out.contains("0 [label=\"2/1\"];"));
}

#[test]
fn tree_json_is_stable() {
    let (code, out, _) = ultra(&["tree", &fixture("four_point.json")]);
    assert_eq!(code, 0);
    assert_eq!(
        out.trim_end(),
        r#"{"root":0,"labels":["2/1","0/1","1/1","0/1","0/1","0/1"],"edges":[[0,1],[0,2],[2,3],[2,4],[2,5]],"ball_points":[[0,1,2,3],[0],[1,2,3],[1],[2],[3]]}"#
    );
    let again = ultra(&["tree", &fixture("four_point.json")]).1;
    assert_eq!(out, again);
}

#[test]
fn iso_and_weaksim_verdicts() {
    let (code, out, _) = ultra(&[
        "iso",
        &fixture("four_point.json"),
        &fixture("four_point_permuted.json"),
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("isometric: true"));
    assert!(out.contains("x2 -> x3"));
    let (code, out, _) = ultra(&[
        "iso",
        &fixture("four_point.json"),
        &fixture("two_pairs.json"),
    ]);
    assert_eq!((code, out.trim_end()), (1, "isometric: false"));
    let (code, _, _) = ultra(&[
        "weaksim",
        &fixture("four_point.json"),
        &fixture("two_pairs.json"),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn weaksim_reports_scaling_function() {
    let dir = std::env::temp_dir().join(format!("ultra-weaksim-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bounded = dir.join("bounded.json");
    let (code, out, _) = ultra(&["transform", "--fn", "bound:1", &fixture("four_point.json")]);
    assert_eq!(code, 0);
    std::fs::write(&bounded, out).unwrap();
    let (code, out, _) = ultra(&[
        "weaksim",
        &fixture("four_point.json"),
        bounded.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("weakly similar: true"));
    assert!(out.contains("scaling function: 0/1 -> 0/1, 1/2 -> 1/1, 2/3 -> 2/1"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn roundtrip_random_space() {
    let (code, out, _) = ultra(&["roundtrip", &fixture("random_n20.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("points: 20"));
    assert!(out.trim_end().ends_with("isometric: true"));
}

#[test]
fn check_reports_witnesses() {
    let (code, out, _) = ultra(&["check", &fixture("four_point.json")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("ultrametric: true\n"));
    let (code, out, _) = ultra(&["check", &fixture("not_ultrametric.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("d(a,c) = 2/1 > max(d(a,b) = 1/1, d(b,c) = 3/2)"));
    assert!(out.contains("threshold graph test: false"));
    let (code, _, err) = ultra(&["check", &fixture("asymmetric.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("asymmetric"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(ultra(&["check", "/nonexistent/space.json"]).0, 2);
    assert_eq!(ultra(&["balls", &fixture("not_ultrametric.json")]).0, 2);
    assert_eq!(ultra(&["frobnicate"]).0, 2);
    assert_eq!(
        ultra(&["transform", "--fn", "cube", &fixture("four_point.json")]).0,
        2
    );
    assert_eq!(
        ultra(&[
            "transform",
            "--fn",
            "unbound:2",
            &fixture("four_point.json")
        ])
        .0,
        2
    );
    assert_eq!(ultra(&["bethe", "--prime", "4", "--depth", "1"]).0, 2);
    assert_eq!(
        ultra(&["bethe", "--prime", "3", "--depth", "0", "--sphere"]).0,
        2
    );
    let (code, out, _) = ultra(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("roundtrip"));
}

#[test]
fn dset_and_balls() {
    let (_, out, _) = ultra(&["dset", &fixture("four_point.json")]);
    assert_eq!(out.trim_end(), r#"["0/1","1/1","2/1"]"#);
    let (_, out, _) = ultra(&["balls", &fixture("two_pairs.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["balls"].as_array().unwrap().len(), 7);
    assert_eq!(v["balls"][0]["diameter"], "2/1");
}

#[test]
fn transforms() {
    let (code, out, _) = ultra(&[
        "transform",
        "--fn",
        "threshold:1",
        &fixture("four_point.json"),
    ]);
    assert_eq!(code, 0);
    let x = SpaceJson::parse(&out).unwrap().to_ultrametric().unwrap();
    assert_eq!(x.distance_set().len(), 2);
    let (_, out, _) = ultra(&["transform", "--fn", "quantize", &fixture("four_point.json")]);
    let x = SpaceJson::parse(&out).unwrap().to_ultrametric().unwrap();
    assert!(x.points().all(|a| x
        .points()
        .all(|b| *x.d(a, b) <= ultrametric::rational::ratio(1, 2))));
    let (code, _, _) = ultra(&[
        "transform",
        "--fn",
        "quantize:1/3",
        &fixture("four_point.json"),
    ]);
    assert_eq!(code, 0);
}

#[test]
fn representable_and_posetcheck() {
    let (code, out, _) = ultra(&["representable", &fixture("two_vertex_tree.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("single child"));
    let (code, out, _) = ultra(&["posetcheck", &fixture("diamond_poset.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("unique upper covers: false\n  fails at: s0"));
}

#[test]
fn tree_reconstruct_pipeline() {
    let dir = std::env::temp_dir().join(format!("ultra-reconstruct-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let tree_path = dir.join("tree.json");
    let (_, tree, _) = ultra(&["tree", &fixture("random_n20.json")]);
    std::fs::write(&tree_path, &tree).unwrap();
    let (code, out, _) = ultra(&["representable", tree_path.to_str().unwrap()]);
    assert_eq!((code, out.trim_end()), (0, "representable: true (root 0)"));
    let (code, space, _) = ultra(&["reconstruct", tree_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let space_path = dir.join("space.json");
    std::fs::write(&space_path, &space).unwrap();
    assert_eq!(
        ultra(&[
            "iso",
            &fixture("random_n20.json"),
            space_path.to_str().unwrap()
        ])
        .0,
        0
    );
    let parsed: TreeJson = serde_json::from_str(&tree).unwrap();
    let direct = reconstruct_space(&LabeledTree::try_from(parsed).unwrap()).unwrap();
    assert_eq!(
        SpaceJson::from(direct.space.metric()).to_json() + "\n",
        space
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn padic_and_bethe() {
    let (code, out, _) = ultra(&["padic", "--prime", "3", "--points", &fixture("digits.json")]);
    assert_eq!(code, 0);
    let x = SpaceJson::parse(&out).unwrap().to_ultrametric().unwrap();
    let d: Vec<String> = x
        .distance_set()
        .values()
        .iter()
        .map(ultrametric::rational::format)
        .collect();
    assert_eq!(d, ["0/1", "1/9", "1/3", "1/1"]);
    let (code, out, _) = ultra(&["bethe", "--prime", "2", "--depth", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""labels":["1/1","1/2","1/2","1/4","1/4","1/4","1/4"]"#));
    assert!(out.contains(r#""truncated":true"#));
    let (_, out, _) = ultra(&["bethe", "--prime", "2", "--depth", "2", "--sphere"]);
    assert!(out.contains(r#""labels":["1/2","1/4","1/4","1/8","1/8","1/8","1/8"]"#));
    let (_, out, _) = ultra(&["bethe", "--prime", "5", "--depth", "1", "--sphere", "--dot"]);
    assert_eq!(out.matches(" -- ").count(), 4);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ultra");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(
        status(&[
            "iso",
            &fixture("four_point.json"),
            &fixture("four_point_permuted.json")
        ]),
        Some(0)
    );
    assert_eq!(
        status(&[
            "iso",
            &fixture("four_point.json"),
            &fixture("two_pairs.json")
        ]),
        Some(1)
    );
    assert_eq!(status(&["check", &fixture("asymmetric.json")]), Some(2));
    let out = Command::new(bin)
        .args(["roundtrip", &fixture("random_n20.json")])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("isometric: true"));
}
