//! Runs every example binary that `cargo test` has built alongside the tests.

use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().join("examples")
}

#[test]
fn every_example_runs() {
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut names: Vec<String> = std::fs::read_dir(&src)
        .unwrap()
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(str::to_string))
        .collect();
    names.sort();
    assert!(names.len() >= 10);
    for name in names {
        let bin = examples_dir().join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        if !bin.exists() {
            // Built only by `cargo test` without a target filter.
            eprintln!("skipping {name}: {} not built", bin.display());
            continue;
        }
        let out = Command::new(&bin).env_remove("BLOWUP_THREADS").output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
