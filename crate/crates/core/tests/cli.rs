use std::process::{Command, Output};

fn powergraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powergraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn describe_prints_notation() {
    for (group, t, expected) in [
        (
            "quaternion:24",
            "3",
            "Cyc(2,T(3)) (+) 2xCyc(1,T(3)) (+) 6xCyc(2)",
        ),
        ("cyclic:4", "2", "{T(2,2)}"),
        ("abelian:6x12", "14", "{T(4,2)} (+) 4xCyc(2,T(4,2))"),
    ] {
        let o = powergraph(&["describe", "--group", group, "--t", t]);
        assert!(o.status.success(), "{group}");
        assert!(
            stdout(&o).contains(expected),
            "{group} t={t}: {}",
            stdout(&o)
        );
    }
}

#[test]
fn verify_exit_codes() {
    let o = powergraph(&["verify", "--group", "pgl2:11", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("isomorphic"));

    let o = powergraph(&["verify", "--group", "dihedral:7", "--t", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let o = powergraph(&["verify", "--group", "quaternion:12", "--t", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_parses() {
    let o = powergraph(&[
        "verify",
        "--group",
        "semidirect:n=7,m=3,s=2",
        "--t",
        "6",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["isomorphic"], serde_json::Value::Bool(true));
    assert_eq!(v["order"], 21);
}

#[test]
fn dot_output_is_stable() {
    let args = [
        "describe",
        "--group",
        "dihedral:12",
        "--t",
        "2",
        "--format",
        "dot",
    ];
    let a = stdout(&powergraph(&args));
    assert!(a.starts_with("digraph"));
    assert_eq!(a, stdout(&powergraph(&args)));
}

#[test]
fn sweep_over_dihedral_family() {
    let o = powergraph(&[
        "sweep",
        "--family",
        "dihedral",
        "--range",
        "3..8",
        "--t-range",
        "1..6",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn selftest_single_criterion() {
    let o = powergraph(&["selftest", "--criterion", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 PASS"));
}
