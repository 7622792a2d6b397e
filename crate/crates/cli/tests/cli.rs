use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pillowvol"))
        .env("PILLOWVOL_CACHE_DIR", cache)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn volume_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["volume", "-s", "2,-1^2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("4/3 · π^2"), "{}", stdout(&o));

    let o = run(dir.path(), &["--json", "volume", "-s", "-1^4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["num"], "2");
    assert_eq!(v["den"], "1");
    assert_eq!(v["pi_power"], 2);
}

#[test]
fn eo_convention_and_unnumbered() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--json", "volume", "-s", "-1^4", "--convention", "eo"]);
    assert!(o.status.success());
    let eo: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let o = run(dir.path(), &["--json", "volume", "-s", "-1^4", "--convention", "aez-unnumbered"]);
    let un: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(eo["pi_power"], 2);
    // four numbered poles, unnumbered divides by 4!
    assert_eq!((un["num"].as_str(), un["den"].as_str()), (Some("1"), Some("12")));
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [["volume", "-s", "3,-1"], ["volume", "-s", "x"]] {
        let o = run(dir.path(), &bad);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn covers_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["covers", "-s", "2,-1^2", "--max-degree", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "degree,all_num,all_den,connected_num,connected_den");
    assert_eq!(&lines[1..], ["2,1,2,1,2", "4,13,4,3,1", "6,127,16,6,1"]);
}

#[test]
fn verify_low_weight() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--max-weight", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("summary: PASS 6"));
    let o = run(dir.path(), &["verify", "--max-weight", "4", "--exclude-poles"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["volume", "-s", "1,-1^5"]).status.success());
    let info = stdout(&run(dir.path(), &["cache", "info"]));
    assert!(info.contains(&dir.path().display().to_string()), "{info}");
    assert!(run(dir.path(), &["cache", "clear"]).status.success());
    assert!(run(dir.path(), &["--no-cache", "volume", "-s", "1,-1^5"]).status.success());
}
