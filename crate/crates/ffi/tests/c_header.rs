//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "lsk.h"

int main(void) {
    const char *keys[] = {"R", "a"};
    double values[] = {2.0, 0.5};
    LskPatch *torus = NULL;
    if (lsk_patch_new("torus", keys, values, 2, &torus) != LSK_STATUS_OK) return 1;
    size_t grid[] = {8, 8};
    char *json = NULL;
    if (lsk_patch_analyze(torus, grid, 2, 0, &json) != LSK_STATUS_OK) return 2;
    int ok = strstr(json, "\"is_dupin\": true") != NULL;
    lsk_string_free(json);
    lsk_patch_free(torus);
    LskPatch *bad = NULL;
    if (lsk_patch_new("nope", NULL, NULL, 0, &bad) != LSK_STATUS_UNKNOWN_GENERATOR) return 3;
    if (strlen(lsk_last_error()) == 0) return 4;
    printf("%s\n", lsk_version());
    return ok ? 0 : 5;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/lsk.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for f in ["lsk_patch_new", "lsk_patch_free", "lsk_patch_analyze", "lsk_last_error", "LSK_STATUS_OK"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    // test binaries live in target/<profile>/deps; the static library one level up
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("liblsk_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
