use std::path::{Path, PathBuf};
use std::process::Command;

const EXPORTS: [&str; 22] = [
    "ti_version",
    "ti_last_error",
    "ti_hamiltonian_dense",
    "ti_spectrum_new",
    "ti_spectrum_len",
    "ti_spectrum_eigenvalues",
    "ti_spectrum_eigenstate",
    "ti_spectrum_free",
    "ti_state_new",
    "ti_state_bell_seed",
    "ti_state_dim",
    "ti_state_amplitudes",
    "ti_state_free",
    "ti_entropy_block",
    "ti_pair_concurrence",
    "ti_q_measure",
    "ti_total_tangle",
    "ti_localization",
    "ti_unfold_spacings",
    "ti_ks_statistic",
    "ti_propagator_new",
    "ti_propagator_evolve",
];

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "tilted_ising.h"

int main(void) {
    TiSpectrum *spec = NULL;
    if (ti_spectrum_new(2, 1.0, 1.0, M_PI / 2, TI_SECTOR_FULL, true, &spec) != TI_STATUS_OK) return 1;
    double ev[4];
    if (ti_spectrum_eigenvalues(spec, ev, 4) != TI_STATUS_OK) return 2;
    double want[4] = {-sqrt(5.0), -1.0, 1.0, sqrt(5.0)};
    for (int i = 0; i < 4; i++) if (fabs(ev[i] - want[i]) > 1e-12) return 3;
    ti_spectrum_free(spec);

    TiState *st = NULL;
    if (ti_state_bell_seed(10, &st) != TI_STATUS_OK) return 4;
    double q = 0.0;
    ti_q_measure(st, &q);
    if (fabs(q - 0.2) > 1e-12) return 5;
    double c = 0.0;
    if (ti_pair_concurrence(st, 3, 1, &c) != TI_STATUS_INVALID_INPUT) return 6;
    char msg[128];
    if (ti_last_error(msg, sizeof msg) == 0) return 7;
    ti_state_free(st);
    printf("ok %s\n", ti_version());
    return 0;
}
"#;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tilted_ising.h")
}

fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

fn compiler() -> String {
    std::env::var("CC").unwrap_or_else(|_| "cc".into())
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).expect("header generated by build script");
    for name in EXPORTS {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in ["typedef struct TiSpectrum TiSpectrum;", "typedef struct TiState TiState;", "TI_STATUS_BUFFER_TOO_SMALL = 6"] {
        assert!(text.contains(ty), "{ty} missing from header");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-c-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let lib = profile_dir().join("libtilted_ising_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let exe = dir.join("smoke");
    let status = Command::new(compiler())
        .args(["-std=c11", "-D_DEFAULT_SOURCE", "-Wall", "-Werror", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C smoke program failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C smoke program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
