use std::path::{Path, PathBuf};
use std::process::Command;

use elastinv::commands::{bench_resolution, forward, invert, reconstruct};
use elastinv::io::{read_field_dump, read_record, read_table, write_record};
use elastinv::{CliError, RunConfig, RunManifest};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("elastinv-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

/// Small grids keep the tests fast.
fn quick(extra: &str) -> RunConfig {
    RunConfig::parse(&format!("grid = [17, 320]\n{extra}")).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elastinv"))
}

#[test]
fn forward_writes_500_rows_and_manifest() {
    let out = scratch("forward");
    let m = forward(&quick(""), None, &out, true).unwrap();
    let rec = read_record(&out.join("trace_clean.csv")).unwrap();
    assert_eq!(rec.xs.len(), 500);
    assert!((rec.period - 3.1).abs() < 1e-12);
    let text = std::fs::read_to_string(out.join("trace_noisy.csv")).unwrap();
    assert!(text.starts_with(&format!("# run {}\n", m.run_id)));
    let back = RunManifest::load(&out.join("manifest.json")).unwrap();
    assert_eq!(back.artifacts, ["trace_clean.csv", "trace_noisy.csv", "field.bin"]);
    assert_eq!(back.cutoff, [3, 6]);
    assert!(back.finished.is_some());
    let ([nx, ny, kb], geom, rows) = read_field_dump(&out.join("field.bin")).unwrap();
    // the dump holds the fine level of the Richardson pair
    assert_eq!((nx, ny, kb), (17, 640, 16));
    assert_eq!(geom, [3.1, 2.0, 0.05]);
    assert_eq!(rows.len(), 641);
}

#[test]
fn zero_noise_and_reruns_are_identical() {
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    forward(&quick("noise_delta = 0.0"), None, &a, false).unwrap();
    let clean = std::fs::read(a.join("trace_clean.csv")).unwrap();
    assert_eq!(clean, std::fs::read(a.join("trace_noisy.csv")).unwrap());
    let cfg = quick("seed = 17");
    forward(&cfg, None, &a, false).unwrap();
    forward(&cfg, None, &b, false).unwrap();
    assert_eq!(std::fs::read(a.join("trace_noisy.csv")).unwrap(), std::fs::read(b.join("trace_noisy.csv")).unwrap());
}

#[test]
fn flat_trace_reconstructs_to_zero() {
    let out = scratch("flat");
    let cfg = quick("profile = \"flat\"\nperiod = 3.1\nnoise_delta = 0.0\ntol = 0.0");
    forward(&cfg, None, &out, false).unwrap();
    reconstruct(&cfg, None, &out.join("trace_clean.csv"), &out).unwrap();
    let (header, rows) = read_table(&out.join("reconstruction.csv")).unwrap();
    assert_eq!(header, ["x", "f_exact", "f_linear", "f_iter1", "f_iter2", "f_iter3"]);
    for r in &rows {
        for v in &r[2..] {
            assert!(v.abs() < 1e-6, "{v}");
        }
    }
    let (sv_header, sv) = read_table(&out.join("singular_values.csv")).unwrap();
    assert_eq!(sv_header, ["index", "sigma", "kept"]);
    assert_eq!(sv.len(), 7);
}

#[test]
fn example1_reconstruction_improves_with_iterations() {
    let cfg = quick("noise_delta = 0.0\ntol = 0.0");
    let (_, clean, _) = elastinv::commands::simulate(&cfg).unwrap();
    let (_, res) = invert(&cfg, &clean).unwrap();
    let exact = cfg.exact_surface(&res.xs).unwrap();
    let err = |f: &[f64]| elastinv_core::inversion::relative_l2_error(f, &exact);
    assert_eq!(res.iterates.len(), 4);
    assert!(err(&res.iterates[0]) < 0.3);
    assert!(err(&res.f_samples) < 0.05);
}

#[test]
fn bench_rows_follow_mode_grid() {
    let out = scratch("bench");
    let (_, rows) = bench_resolution(&quick("iters = 0"), None, &[1.0, 4.0], &out).unwrap();
    assert_eq!(rows[0].cutoff, [1, 3]);
    assert_eq!(rows[1].cutoff, [3, 6]);
    assert!(rows[1].err_linear < rows[0].err_linear);
    let (header, table) = read_table(&out.join("bench.csv")).unwrap();
    assert_eq!(header[..3], ["rho1", "N1", "N2"]);
    assert_eq!(table.len(), 2);
    assert!(matches!(bench_resolution(&quick(""), None, &[4.0], &out), Err(CliError::Config(_))));
}

#[test]
fn malformed_inputs_are_config_errors() {
    let dir = scratch("bad");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.csv");
    std::fs::write(&p, "x,re_u1,im_u1,re_u2,im_u2\n0.1,1,2,3\n").unwrap();
    assert!(matches!(read_record(&p), Err(CliError::Io(_)) | Err(CliError::Config(_))));
    std::fs::write(&p, "x,a,b\n0.1,1,2\n").unwrap();
    assert!(matches!(read_record(&p), Err(CliError::Config(_))));
    // a trace on the wrong period
    let cfg = quick("");
    let (_, clean, _) = elastinv::commands::simulate(&cfg).unwrap();
    write_record(&p, "test", &clean).unwrap();
    let other = quick("profile = \"example2\"");
    assert!(matches!(invert(&other, &read_record(&p).unwrap()), Err(CliError::Config(_))));
}

fn code(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, "rho1 = 0.5\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&["forward", "--config", c]), 3);
    assert_eq!(code(&["forward", "--config", "/nonexistent/c.toml"]), 5);
    assert_eq!(code(&["reconstruct", "/nonexistent/t.csv"]), 5);
    assert_eq!(code(&["forward", "--grid", "64,1280"]), 3);
    assert_eq!(code(&["frobnicate"]), 2);
    // Example 2 without regularization hits the α₁ = κ₁ Wood anomaly
    let d = dir.to_str().unwrap();
    std::fs::write(&cfg, "profile = \"example2\"\nrho1 = 1.0\ngrid = [17, 320]\n").unwrap();
    assert_eq!(code(&["forward", "--config", c, "--out", d]), 0);
    let trace = Path::new(d).join("trace_noisy.csv");
    assert_eq!(code(&["reconstruct", "--config", c, "--out", d, trace.to_str().unwrap()]), 4);
}

#[test]
fn cli_overrides_and_selftest() {
    let out = scratch("cli");
    let o = out.to_str().unwrap();
    let status = bin().args(["forward", "--out", o, "--seed", "5", "--rho1", "2", "--delta", "0.01", "--grid", "17,320"]).status().unwrap();
    assert!(status.success());
    let m = RunManifest::load(&out.join("manifest.json")).unwrap();
    assert_eq!((m.seed, m.config.rho1, m.config.noise_delta, m.config.grid), (5, 2.0, 0.01, Some([17, 320])));
    let st = bin().arg("selftest").output().unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stdout));
    assert_eq!(String::from_utf8_lossy(&st.stdout).lines().count(), 6);
}
