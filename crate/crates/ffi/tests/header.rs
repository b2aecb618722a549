//! The checked-in header declares every exported symbol; if a C compiler is
//! available it also builds and runs a small program against the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn exported_functions() -> Vec<String> {
    let src = std::fs::read_to_string(manifest().join("src/lib.rs")).unwrap();
    src.lines()
        .filter_map(|l| l.trim().strip_prefix("pub ").filter(|r| r.contains("extern \"C\" fn ")))
        .map(|r| r.split("fn ").nth(1).unwrap().split('(').next().unwrap().to_string())
        .collect()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(manifest().join("include/hbps.h")).unwrap();
    let fns = exported_functions();
    assert!(fns.len() >= 14, "{fns:?}");
    for f in fns {
        assert!(header.contains(&format!("{f}(")), "{f} missing from include/hbps.h; rebuild with --features cbindgen");
    }
}

fn static_lib() -> Option<PathBuf> {
    // CARGO_TARGET_TMPDIR is <target>/tmp; the library sits in <target>/<profile>
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).parent()?;
    ["debug", "release"].iter().map(|p| target.join(p).join("libhbps_ffi.a")).find(|p| p.exists())
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "hbps.h"

int main(void) {
    HbpsRecord *rec = NULL;
    if (hbps_record_new(1, 3, -1, 1, 6, 1, 0, HBPS_SIDE_PLUS, &rec) != HBPS_STATUS_OK) {
        fprintf(stderr, "%s\n", hbps_last_error());
        return 1;
    }
    uint64_t euler = 0;
    hbps_record_euler(rec, &euler);
    hbps_record_free(rec);
    HbpsSeries *s = NULL;
    if (hbps_generating_function(0, 2, 1, 1, 1, 0, HBPS_SIDE_PLUS, HBPS_WHICH_F, 4, 1, &s) != HBPS_STATUS_LATTICE) {
        return 2;
    }
    printf("%llu\n", (unsigned long long)euler);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_lib() else {
        eprintln!("libhbps_ffi.a not built; skipping the C link test");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping the C link test");
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // Table 2, c2 = 6
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "40377");
}

fn tempfile_dir() -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("hbps-c-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
