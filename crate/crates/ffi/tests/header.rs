//! The generated header must compile as C and link against the static
//! library. Skipped when no C compiler is on the PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "entropy_games.h"

static const char *GAME =
  "{\"despot\":[\"d\"],\"tribune\":[\"t\"],\"people\":[\"p\"],"
  "\"arcs\":[{\"from\":\"d\",\"to\":\"t\"},{\"from\":\"t\",\"to\":\"p\"},"
  "{\"from\":\"p\",\"to\":\"d\",\"weight\":3}]}";

int main(void) {
  EgGame *g = NULL;
  EgReport *r = NULL;
  if (eg_game_from_json(GAME, &g) != EG_STATUS_OK) return 1;
  if (eg_solve(g, "pi", 0.0, &r) != EG_STATUS_OK) return 2;
  double v = eg_report_free_state_value(r);
  eg_report_free(r);
  eg_game_free(g);
  if (fabs(v - 3.0) > 1e-12) return 3;
  if (eg_game_from_json("[", &g) != EG_STATUS_PARSE) return 4;
  char msg[256];
  if (eg_last_error_message(msg, sizeof msg) < 2) return 5;
  puts("ok");
  return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let lib = target_dir().join("libentropy_games_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
