use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vakit_cli::app::{example, ModuleKind};
use vakit_cli::{parse, serialize};

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut out: Vec<PathBuf> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "vk")).collect();
    out.sort();
    out
}

fn vakit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vakit")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn one_dim_text() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/one_dim.vk")).unwrap()
}

#[test]
fn fixtures_round_trip() {
    let all = fixtures();
    assert!(all.len() >= 20);
    for p in all {
        let text = std::fs::read_to_string(&p).unwrap();
        let s = parse(&text).unwrap().structure;
        let canon = serialize(&s).unwrap();
        assert_eq!(parse(&canon).unwrap().structure, s, "{}", p.display());
        assert_eq!(canon, text, "{} is not in canonical form", p.display());
    }
}

/// Shipped fixtures are exactly what `vakit example` writes today.
#[test]
fn fixtures_match_builders() {
    for p in fixtures() {
        let file = p.file_name().unwrap().to_str().unwrap();
        let parts: Vec<&str> = file.trim_end_matches(".vk").split('.').collect();
        let dual = parts.last() == Some(&"dual");
        let (module, rank) = match parts.get(1).copied() {
            Some("adjoint") => (Some(ModuleKind::Adjoint), 2),
            Some("free2") => (Some(ModuleKind::Free), 2),
            _ => (None, 2),
        };
        let Ok(s) = example(parts[0], module, rank, dual) else {
            assert_eq!(parts[0], "zeta4", "{file} has no builder");
            continue;
        };
        assert_eq!(serialize(&s).unwrap(), std::fs::read_to_string(&p).unwrap(), "{file}");
    }
}

#[test]
fn missing_section_is_a_global_error() {
    let text = one_dim_text().replace("[vacuum]\n1 = 1\n", "");
    let e = parse(&text).unwrap_err();
    assert_eq!(e.line, 0);
    assert!(e.message.contains("vacuum"), "{e}");
}

#[test]
fn bad_scalar_reports_its_position() {
    let text = one_dim_text().replace("-1 | 1 1 -> 1 = 1", "-1 | 1 1 -> 1 = 1/0");
    let e = parse(&text).unwrap_err();
    let line = text.lines().position(|l| l.contains("1/0")).unwrap() + 1;
    assert_eq!(e.line, line);
    assert!(e.column > 1);
    assert!(e.to_string().starts_with(&format!("line {line}, column ")));
}

#[test]
fn torsion_coordinates_are_reduced_with_a_warning() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/zeta4.vk")).unwrap();
    let p = parse(&text.replace("u = (2)", "u = (6)")).unwrap();
    assert_eq!(p.warnings.len(), 1);
    assert_eq!(p.structure, parse(&text).unwrap().structure);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = |n: &str| format!("{}/../../fixtures/{n}", env!("CARGO_MANIFEST_DIR"));
    assert_eq!(vakit(&["check", &f("one_dim.vk")]).status.code(), Some(0));
    assert_eq!(vakit(&["check", &f("upper_triangular.vk")]).status.code(), Some(1));
    assert_eq!(vakit(&["check", "no/such/file.vk"]).status.code(), Some(3));
    assert_eq!(vakit(&["check", &f("one_dim.vk"), "--suite", "coalgebra"]).status.code(), Some(3));
    // beta(0,0) = -1 is not multiplicative
    let table = write(dir.path(), "table.vk", &one_dim_text().replace("kind = one", "kind = table\nentry = (0) (0) : -1"));
    let out = vakit(&["iso-check", &table, "--theorem", "7.5"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for p in fixtures() {
        let p = p.to_str().unwrap();
        let runs: Vec<Vec<u8>> = [
            vec!["check", p, "--no-timing", "--threads", "1"],
            vec!["check", p, "--no-timing", "--threads", "4"],
            vec!["check", p, "--no-timing", "--threads", "4"],
        ]
        .iter()
        .map(|a| vakit(a).stdout)
        .collect();
        assert!(!runs[0].is_empty());
        assert!(runs.iter().all(|r| r == &runs[0]), "{p}");
    }
    let src = format!("{}/../../fixtures/diffeps3.vk", env!("CARGO_MANIFEST_DIR"));
    let a = dir.path().join("a.vk");
    let b = dir.path().join("b.vk");
    vakit(&["dualize", &src, "-o", a.to_str().unwrap(), "--threads", "1"]);
    vakit(&["dualize", &src, "-o", b.to_str().unwrap(), "--threads", "4"]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn replay_reproduces_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f = format!("{}/../../fixtures/upper_triangular.vk", env!("CARGO_MANIFEST_DIR"));
    let out = vakit(&["check", &f, "--no-timing"]);
    let report = write(dir.path(), "report.json", std::str::from_utf8(&out.stdout).unwrap());
    let again = vakit(&["check", &f, "--replay", &report, "--no-timing"]);
    assert_eq!(again.status.code(), Some(1));
    let env: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert!(env["results"].as_array().unwrap().iter().any(|r| r["id"] == "jacobi" && r["verdict"] == "fail"));
}
