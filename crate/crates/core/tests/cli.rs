use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pbd3(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbd3"))
        .args(args)
        .current_dir(dir)
        .env_remove("PBD3_CACHE_DIR")
        .output()
        .expect("run pbd3")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = pbd3(dir, args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

#[test]
fn geometry_dimension_and_verify() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["construct", "pg", "3", "2", "-o", "pg32.pbd"]);
    ok(dir, &["construct", "pg", "2", "2", "-o", "fano.pbd"]);
    assert!(ok(dir, &["verify", "pg32.pbd"]).contains("PBD"));
    assert_eq!(ok(dir, &["dimension", "pg32.pbd", "--exact"]).trim(), "3");
    assert_eq!(ok(dir, &["dimension", "fano.pbd", "--exact"]).trim(), "2");

    let out = pbd3(dir, &["dimension", "fano.pbd", "--at-least", "3"]);
    assert_eq!(code(&out), 2);
    assert_eq!(stdout(&out).split_whitespace().count(), 3);

    let text = fs::read_to_string(dir.join("pg32.pbd")).unwrap();
    let corrupted: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    fs::write(dir.join("bad.pbd"), corrupted[..corrupted.len() - 1].join("\n") + "\n").unwrap();
    assert_eq!(code(&pbd3(dir, &["verify", "bad.pbd"])), 2);

    let planes = ok(dir, &["construct", "ag", "3", "3", "--list-planes"]);
    assert_eq!(planes.lines().count(), 39);
}

#[test]
fn recipe_build_then_verify() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let listing = ok(dir, &["recipe", "list"]);
    assert!(listing.lines().any(|l| l.starts_with("pbd46-34\t46\t{3,4}\tin-scope")));
    assert!(ok(dir, &["recipe", "describe", "pbd53-35"]).contains("5."));
    assert_eq!(code(&pbd3(dir, &["recipe", "describe", "nope"])), 1);

    let cache = dir.join("cache");
    let cache_arg = cache.to_str().unwrap();
    ok(dir, &["--cache-dir", cache_arg, "recipe", "build", "pbd46-34", "-o", "p46.pbd"]);
    assert!(fs::read_dir(&cache).unwrap().next().is_some());
    ok(dir, &["verify", "p46.pbd"]);
    assert_eq!(ok(dir, &["dimension", "p46.pbd", "--exact"]).trim(), "3");

    assert_eq!(code(&pbd3(dir, &["recipe", "build", "pbd48-34"])), 3);
}

#[test]
fn triple_systems_and_latin_squares() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["construct", "pg", "3", "2", "-o", "pg32.pbd"]);
    ok(dir, &["bibd", "expand", "pg32.pbd", "--lambda", "2", "-o", "t.txt"]);
    assert!(ok(dir, &["bibd", "check", "t.txt"]).contains("true"));

    ok(dir, &["construct", "ag", "3", "3", "-o", "ag.pbd"]);
    ok(dir, &["latin", "glue", "ag.pbd", "-o", "ag.latin"]);
    ok(dir, &["latin", "check", "ag.latin", "--design", "ag.pbd", "--exhaustive"]);

    ok(dir, &["construct", "pg", "2", "2", "-o", "fano.pbd"]);
    ok(dir, &["latin", "glue", "fano.pbd", "-o", "fano.latin"]);
    let out = pbd3(dir, &["latin", "check", "fano.latin", "--design", "fano.pbd", "--exhaustive"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gdd_search_wfc_fill_truncate() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["search-gdd", "--type", "2^3", "--K", "3", "-o", "g.gdd"]);
    ok(dir, &["verify", "g.gdd"]);
    assert_eq!(code(&pbd3(dir, &["search-gdd", "--type", "1^6", "--K", "3,4"])), 2);

    ok(dir, &["construct", "pg", "2", "2", "-o", "fano.pbd"]);
    ok(dir, &["wfc", "fano.pbd", "--uniform", "2", "--K", "3", "-o", "w.gdd"]);
    ok(dir, &["verify", "w.gdd"]);
    ok(dir, &["fill", "w.gdd", "--mode", "plus-point", "-o", "p15.pbd"]);
    assert!(ok(dir, &["verify", "p15.pbd"]).contains("15"));

    ok(dir, &["construct", "pg", "2", "3", "-o", "pg23.pbd"]);
    ok(dir, &["truncate", "pg23.pbd", "--points", "0", "-o", "t.pbd"]);
    ok(dir, &["verify", "t.pbd"]);
    assert_eq!(code(&pbd3(dir, &["truncate", "fano.pbd", "--points", "0"])), 3);
}

#[test]
fn tables_and_reports() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let table = ok(dir, &["recipe", "build-all", "--K", "3,5", "--max-v", "60"]);
    assert!(table.starts_with("v\tK\tclaim\tstatus\trecipe-id\tdimension-checked\n"));
    assert!(table.lines().any(|l| l.starts_with("33\t{3,5}\tnonexistent")));

    let first = ok(dir, &["report", "--quick"]);
    let second = ok(dir, &["report", "--quick"]);
    assert_eq!(first, second);
    assert!(first.lines().count() > 1);
}

#[test]
fn usage_errors() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    assert_eq!(code(&pbd3(dir, &["frobnicate"])), 1);
    assert_eq!(code(&pbd3(dir, &["construct", "pg"])), 1);
    assert_eq!(code(&pbd3(dir, &["--help"])), 0);
    assert_eq!(code(&pbd3(dir, &["verify", "missing.pbd"])), 3);
}
