use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn stegabot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stegabot")).args(args).env_remove("STEGABOT_LOG").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

/// Demo study covers, shared by the carrier tests.
fn covers() -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = stegabot(&["demo-study", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn embed_extract_every_carrier() {
    let dir = covers();
    let d = dir.path();
    for (cover, stego) in [("face.pgm", "x.pgm"), ("hello.wav", "x.wav"), ("joint_angles.csv", "x.csv")] {
        let out = stegabot(&["embed", "--in", &p(d, cover), "--out", &p(d, stego), "--message", "meet at dock 4"]);
        assert_eq!(code(&out), 0, "{cover}: {}", String::from_utf8_lossy(&out.stderr));
        let out = stegabot(&["--format", "text", "extract", "--in", &p(d, stego)]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out).trim_end(), "meet at dock 4");
    }
}

#[test]
fn layout_and_salt_round_trip() {
    let dir = covers();
    let d = dir.path();
    let embed = [
        "embed",
        "--in",
        &p(d, "hello.wav"),
        "--out",
        &p(d, "s.wav"),
        "--message",
        "x",
        "--offset",
        "100",
        "--stride",
        "3",
        "--salt",
        "0.5",
        "--seed",
        "9",
    ];
    assert_eq!(code(&stegabot(&embed)), 0);
    let out = stegabot(&["extract", "--in", &p(d, "s.wav"), "--offset", "100", "--stride", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"message\": \"x\""));
}

#[test]
fn clean_cover_has_no_message() {
    let dir = covers();
    for cover in ["face.pgm", "hello.wav", "joint_angles.csv"] {
        let out = stegabot(&["extract", "--in", &p(dir.path(), cover)]);
        assert_eq!(code(&out), 4, "{cover}");
    }
}

#[test]
fn exit_codes() {
    let dir = covers();
    let d = dir.path();
    assert_eq!(code(&stegabot(&["frobnicate"])), 2);
    assert_eq!(code(&stegabot(&["extract", "--in", &p(d, "missing.pgm")])), 5);
    let long = "a".repeat(1000);
    assert_eq!(code(&stegabot(&["embed", "--in", &p(d, "face.pgm"), "--out", &p(d, "y.pgm"), "--message", &long])), 3);
    let junk = write(d, "junk.pgm", "P5 not really");
    assert_eq!(code(&stegabot(&["extract", "--in", junk.to_str().unwrap()])), 5);
    assert_eq!(code(&stegabot(&["extract", "--in", &p(d, "face.pgm"), "--stride", "0"])), 2);
}

#[test]
fn plan_two_repetitions() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "props.json",
        r#"[{"id":"help","text":"SOS","value":1.0,"transmit_time":0.4,"loss_prob":0.5}]"#,
    );
    let out =
        stegabot(&["plan", "--in", input.to_str().unwrap(), "--distance", "100", "--speed", "10", "--density", "0.1"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["budget"], 1.0);
    assert_eq!(v["plan"]["counts"]["help"], 2);
    assert!((v["plan"]["used_time"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert_eq!(v["delivery"]["help"], 0.75);
}

#[test]
fn simulate_both_channels() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let motion = write(d, "m.json", r#"{"channel":"motion","message":"SOS","seed":1,"sensor":"gps_rtk"}"#);
    let out = stegabot(&["simulate", "--config", motion.to_str().unwrap(), "--out", &p(d, "m")]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["decoded_text"], "SOS");
    assert!(d.join("m/trajectory.csv").exists() && d.join("m/observed.csv").exists());

    let timing = write(d, "t.json", r#"{"channel":"timing","message":"HI","seed":1}"#);
    let out = stegabot(&["simulate", "--config", timing.to_str().unwrap(), "--out", &p(d, "t")]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["decoded_text"], "HI");
    assert!(d.join("t/utterances.wav").exists());
}

#[test]
fn analyze_reference_and_chi_square() {
    let dir = covers();
    let d = dir.path();
    let out = stegabot(&["analyze", "--in", &p(d, "face_stego.pgm"), "--reference", &p(d, "face.pgm")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"verdict\": \"stego\""));
    let out = stegabot(&["analyze", "--in", &p(d, "face.pgm"), "--reference", &p(d, "face.pgm")]);
    assert!(stdout(&out).contains("\"verdict\": \"clean\""));
    let out = stegabot(&["analyze", "--in", &p(d, "face.pgm")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("chi_square"));
}

#[test]
fn observe_is_seeded() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let motion = write(d, "m.json", r#"{"channel":"motion","message":"E","seed":1,"duration":20}"#);
    assert_eq!(code(&stegabot(&["simulate", "--config", motion.to_str().unwrap(), "--out", &p(d, "m")])), 0);
    let traj = p(d, "m/trajectory.csv");
    for name in ["a.csv", "b.csv"] {
        let out = stegabot(&["observe", "--in", &traj, "--out", &p(d, name), "--sensor", "gps_dgps", "--seed", "5"]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(d.join("a.csv")).unwrap(), std::fs::read(d.join("b.csv")).unwrap());
    let out = stegabot(&["observe", "--in", &traj, "--out", &p(d, "c.csv"), "--sensor", "sonar"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn reruns_are_byte_identical() {
    let a = covers();
    let b = covers();
    for entry in std::fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert_eq!(x, y, "{name:?}");
    }
    let one = stegabot(&["evaluate", "--threads", "1", "--seed", "3"]);
    let four = stegabot(&["evaluate", "--threads", "4", "--seed", "3"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let one = stegabot(&["montecarlo", "--channel", "timing", "--trials", "300", "--threads", "1"]);
    let four = stegabot(&["montecarlo", "--channel", "timing", "--trials", "300", "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}
