use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sbc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbc"))
        .args(args)
        .current_dir(dir)
        .env("SBC_CACHE_DIR", dir.join("cache"))
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const FIGURE: &str = r#"{"n": 2, "start": 0, "layers": [[[0, 1], [0, 2]], [[4, 4], [6, 5]]]}"#;

#[test]
fn generated_cubes_verify() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["2", "6", "7", "11", "19"] {
        for format in ["json", "text"] {
            let file = format!("c{n}.{format}");
            let out = sbc(&["gen", n, "--format", format, "--out", &file], dir.path());
            assert_eq!(out.status.code(), Some(0), "gen {n}");
            let out = sbc(&["verify", &file], dir.path());
            assert_eq!(out.status.code(), Some(0), "verify {n} {format}");
            assert!(stdout(&out).starts_with("accepted"));
        }
    }
}

#[test]
fn text_output_has_one_block_per_layer() {
    let dir = tempfile::tempdir().unwrap();
    let out = sbc(&["gen", "7", "--format", "text"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# n=7 start=0"));
    assert_eq!(text.trim().split("\n\n").count(), 7);
}

#[test]
fn verify_figure_and_broken_copy() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sbc2.json"), FIGURE).unwrap();
    let out = sbc(&["verify", "sbc2.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "accepted, range [0,11]");

    fs::write(dir.path().join("broken.json"), FIGURE.replace("[4, 4]", "[4, 5]")).unwrap();
    let out = sbc(&["verify", "broken.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("rejected"), "{text}");
    assert!(text.contains("multiplicity 2"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| sbc(args, dir.path()).status.code();
    assert_eq!(code(&["gen", "9", "--strategy", "special"]), Some(2));
    assert_eq!(code(&["gen", "13", "--strategy", "inflate"]), Some(2));
    assert_eq!(code(&["pbd", "23"]), Some(2));
    assert_eq!(code(&["search", "sbts", "3"]), Some(3));
    assert_eq!(code(&["search", "sbc", "5", "--budget", "5"]), Some(4));
    assert_eq!(code(&["frobnicate"]), Some(64));
    assert_eq!(code(&["gen", "seven"]), Some(64));
    assert_eq!(code(&["gen", "5", "--format", "xml"]), Some(64));
    assert_eq!(code(&["verify", "missing.json"]), Some(74));
    assert_eq!(code(&["gen", "3", "--out", "no/such/dir/x.json"]), Some(74));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn searches() {
    let dir = tempfile::tempdir().unwrap();
    let out = sbc(&["search", "sbc", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    fs::write(dir.path().join("found.json"), out.stdout).unwrap();
    assert_eq!(sbc(&["verify", "found.json"], dir.path()).status.code(), Some(0));

    let out = sbc(&["blocks", "show", "SBHC3_12"], dir.path());
    fs::write(dir.path().join("j3.txt"), out.stdout).unwrap();
    let out = sbc(&["search", "mask", "j3.txt", "--start", "4", "--seed", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    fs::write(dir.path().join("j3found.json"), out.stdout).unwrap();
    let out = sbc(&["verify", "j3found.json"], dir.path());
    assert_eq!(stdout(&out).trim(), "accepted, range [4,24]");

    let out = sbc(&["search", "sbts", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("v=5"));

    let out = sbc(&["--threads", "2", "search", "mask", "j3.txt", "--exists"], dir.path());
    assert_eq!(stdout(&out).trim(), "found");
}

#[test]
fn pbd_and_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let out = sbc(&["pbd", "16"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["v"], 16);
    assert_eq!(doc["blocks"].as_array().unwrap().len(), 20);

    let out = sbc(&["pbd", "67", "--route"], dir.path());
    assert_eq!(out.status.code(), Some(0));

    let out = sbc(&["blocks", "list"], dir.path());
    assert_eq!(stdout(&out).lines().count(), 8);
    let out = sbc(&["blocks", "show", "sbc3", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(sbc(&["blocks", "show", "SBC4"], dir.path()).status.code(), Some(64));
}
