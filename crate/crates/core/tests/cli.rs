use std::fs;
use std::process::{Command, Output};

fn modalgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modalgame"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("modalgame-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn phi_three_is_valid_on_khat_three() {
    let phi = stdout(&modalgame(&["noncol", "--emit", "3"]));
    let o = modalgame(&["valid", "--frame", "builtin:khat3", "--formula", phi.trim()]);
    assert_eq!(stdout(&o), "VALID\n");
    let o = modalgame(&["valid", "--frame", "builtin:k3", "--formula", phi.trim()]);
    assert!(stdout(&o).starts_with("INVALID\nframe k3\n"));
}

#[test]
fn certify_reflexivity() {
    let o = modalgame(&[
        "certify",
        "--witnesses",
        "builtin:transfer-0-1",
        "--measure",
        "length",
        "--bound",
        "4",
        "--vars",
        "1",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict proved\n"));
    let o = modalgame(&[
        "certify",
        "--witnesses",
        "builtin:transfer-0-1",
        "--bound",
        "5",
    ]);
    assert!(stdout(&o).contains("verdict refuted\n"));
}

#[test]
fn certificates_are_deterministic_apart_from_timing() {
    let run = || {
        stdout(&modalgame(&[
            "certify",
            "--witnesses",
            "builtin:s4",
            "--bound",
            "8",
        ]))
        .lines()
        .filter(|l| !l.starts_with("wall-ms"))
        .collect::<Vec<_>>()
        .join("\n")
    };
    assert_eq!(run(), run());
}

#[test]
fn eval_bisim_colour_and_synth_on_files() {
    let a = tmp(
        "a.model",
        "frame a\nstates 1\nedge 0 0\ntrue p1 0\npoint 0\n",
    );
    let b = tmp(
        "b.model",
        "frame b\nstates 2\nedge 0 1\nedge 1 0\ntrue p1 0 1\npoint 1\n",
    );
    let c = tmp(
        "c.model",
        "frame c\nstates 2\nedge 0 1\ntrue p1 0 1\npoint 0\n",
    );
    assert_eq!(
        stdout(&modalgame(&["eval", "--model", &a, "--formula", "[] p1"])),
        "true\n"
    );
    assert_eq!(
        stdout(&modalgame(&["eval", "--model", &c, "--formula", "[] <> T"])),
        "false\n"
    );
    assert_eq!(
        stdout(&modalgame(&["bisim", "--left", &a, "--right", &b])),
        "BISIMILAR\n"
    );
    assert_eq!(
        stdout(&modalgame(&["bisim", "--left", &a, "--right", &c])),
        "NOT BISIMILAR\n"
    );
    let o = modalgame(&[
        "synth", "--models", &a, &b, &c, "--left", "0,1", "--right", "2",
    ]);
    assert!(
        stdout(&o).starts_with("<> <> T\n") || stdout(&o).starts_with("[] <> T\n"),
        "{}",
        stdout(&o)
    );
    let o = modalgame(&["synth", "--models", &a, &b, "--left", "0", "--right", "1"]);
    assert_eq!(stdout(&o), "NO SEPARATOR\n");
    let g = tmp(
        "g.frame",
        "frame g\nstates 3\nedge 0 1\nedge 1 2\nedge 2 0\n",
    );
    assert_eq!(
        stdout(&modalgame(&["colour", "--frame", &g, "--n", "2"])),
        "UNCOLOURABLE\n"
    );
    assert_eq!(
        stdout(&modalgame(&["colour", "--frame", &g, "--n", "3"])),
        "0 1 2\n"
    );
    assert_eq!(
        stdout(&modalgame(&["noncol", "--check", &g, "--n", "2"])),
        "EQUIVALENT\n"
    );
}

#[test]
fn game_emits_a_tree() {
    let path = tmp("tree.txt", "");
    let o = modalgame(&[
        "game",
        "--witnesses",
        "builtin:symmetry",
        "--budget",
        "8",
        "--emit-tree",
        &path,
    ]);
    assert!(stdout(&o).starts_with("cost 5\nformula "));
    let tree = fs::read_to_string(&path).unwrap();
    assert_eq!(tree.lines().count(), 5);
}

#[test]
fn exported_witnesses_reload() {
    let text = stdout(&modalgame(&[
        "export",
        "--witnesses",
        "builtin:transfer-2-1",
    ]));
    let path = tmp("t21.witness", &text);
    let o = modalgame(&["certify", "--witnesses", &path, "--bound", "6"]);
    assert!(stdout(&o).contains("verdict proved\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(modalgame(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        modalgame(&["valid", "--frame", "builtin:k3", "--formula", "(p1 |"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        modalgame(&["valid", "--frame", "/nonexistent/frame", "--formula", "p1"])
            .status
            .code(),
        Some(2)
    );
    let o = modalgame(&[
        "game",
        "--witnesses",
        "builtin:lob-3",
        "--budget",
        "9",
        "--vars",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = modalgame(&[
        "valid",
        "--frame",
        "builtin:k4",
        "--formula",
        "(p1 | p7)",
        "--cap-bits",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(3));
}
