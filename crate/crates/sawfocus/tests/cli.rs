use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sawfocus::commands::{sweep_rows, WaistRange};
use sawfocus::config::Device;
use sawfocus_core::beam::BeamParams;
use sawfocus_core::resonator::transverse_splitting;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn sawfocus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sawfocus")).args(args).output().unwrap()
}

fn demo_config() -> String {
    data("demo_device.json").display().to_string()
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Writes a variant of the shipped config next to a copy of its material.
fn variant(dir: &Path, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(data("demo_device.json")).unwrap()).unwrap();
    edit(&mut v);
    fs::copy(data("reference_love.csv"), dir.join("reference_love.csv")).unwrap();
    let p = dir.join("device.json");
    fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    p
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn spectrum_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        ok(&sawfocus(&["spectrum", "--config", &demo_config(), "--out", d.path().to_str().unwrap()]));
    }
    for f in ["resonances.csv", "s21.csv"] {
        let x = fs::read(a.path().join(f)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, fs::read(b.path().join(f)).unwrap(), "{f} differs between runs");
    }
    let rows = csv_rows(&a.path().join("resonances.csv"));
    assert_eq!(rows.len(), 2 * 7);
    assert_eq!(csv_rows(&a.path().join("s21.csv")).len(), 5001);
}

#[test]
fn every_command_is_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let scan = data("synthetic_scan_l0.csv").display().to_string();
    let params = data("synthetic_scan_l0.json").display().to_string();
    for d in [&a, &b] {
        let out = d.path().to_str().unwrap();
        let cfg = demo_config();
        ok(&sawfocus(&["layout", "--config", &cfg, "--out", out]));
        ok(&sawfocus(&["field", "--config", &cfg, "--l", "2", "--out", out]));
        ok(&sawfocus(&["ladder", "--config", &cfg, "--out", out]));
        ok(&sawfocus(&["sweep", "--config", &cfg, "--out", out, "--w0-start", "2e-6", "--w0-stop", "4e-6"]));
        ok(&sawfocus(&["fit", "--scan", &scan, "--out", out]));
        ok(&sawfocus(&["classify", "--config", &cfg, "--scan", &scan, "--out", out]));
        ok(&sawfocus(&["synth-scan", "--params", &params, "--out", out]));
        let field = d.path().join("field_l2.csv").display().to_string();
        ok(&sawfocus(&["raster", "--field", &field, "--out", out]));
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 11);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn empty_mode_range_gives_header_only_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = variant(dir.path(), |v| {
        v["modes"]["n_min"] = 34.into();
        v["modes"]["n_max"] = 33.into();
    });
    ok(&sawfocus(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]));
    assert_eq!(
        fs::read_to_string(dir.path().join("resonances.csv")).unwrap(),
        "n,l,freq_hz,q_in,q_ext1,q_ext2\n"
    );
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let missing = sawfocus(&["spectrum", "--config", "/nonexistent/device.json", "--out", out]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());

    let negative = variant(dir.path(), |v| v["waist_m"] = (-1e-6).into());
    let r = sawfocus(&["spectrum", "--config", negative.to_str().unwrap(), "--out", out]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("waist_m"));

    let both = variant(dir.path(), |v| {
        v["mirror"] = serde_json::json!({
            "physical_gap_m": 2.15e-5, "reflectivity_per_period": 0.04, "stopband_center_hz": 2.2e9
        })
    });
    assert_eq!(sawfocus(&["spectrum", "--config", both.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    let no_material = variant(dir.path(), |v| v["material_file"] = "absent.csv".into());
    assert_eq!(sawfocus(&["layout", "--config", no_material.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    let version = variant(dir.path(), |v| v["schema_version"] = 2.into());
    assert_eq!(sawfocus(&["ladder", "--config", version.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    assert_eq!(sawfocus(&["spectrum"]).status.code(), Some(2));
    assert_eq!(sawfocus(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("zero.csv");
    fs::write(&scan, "x_m,y_m,amplitude,phase_rad\n0,-1e-6,0,0\n0,0,0,0\n0,1e-6,0,0\n").unwrap();
    let r = sawfocus(&[
        "classify",
        "--config",
        &demo_config(),
        "--scan",
        scan.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(3), "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn sweep_covers_the_waist_grid() {
    let dir = tempfile::tempdir().unwrap();
    let r = sawfocus(&[
        "sweep",
        "--config",
        &demo_config(),
        "--out",
        dir.path().to_str().unwrap(),
        "--w0-start",
        "2e-6",
        "--w0-stop",
        "10e-6",
        "--w0-step",
        "0.5e-6",
        "--modes",
        "2,4,8,12",
    ]);
    ok(&r);
    let rows = csv_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 17 * 4);

    let dev = Device::load(&data("demo_device.json"), false).unwrap();
    for (k, row) in rows.iter().enumerate() {
        let w0: f64 = row[0].parse().unwrap();
        let df: f64 = row[1].parse().unwrap();
        let l: u32 = row[2].parse().unwrap();
        assert_eq!(l, [2, 4, 8, 12][k % 4]);
        assert!((w0 - (2e-6 + 0.5e-6 * (k / 4) as f64)).abs() < 1e-18);
        let beam = BeamParams::new(2e-6, w0).unwrap();
        assert_eq!(df, transverse_splitting(&dev.spec, &beam, dev.vp, l));
    }
}

#[test]
fn single_waist_fundamental_has_no_splitting() {
    let dev = Device::load(&data("demo_device.json"), false).unwrap();
    let range = WaistRange {
        start: 3e-6,
        stop: 3e-6,
        step: 1e-6,
    };
    let rows = sweep_rows(&dev, range, &[0]).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].delta_f, 0.0);
    let bad = WaistRange {
        start: 3e-6,
        stop: 2e-6,
        step: 1e-6,
    };
    assert!(sweep_rows(&dev, bad, &[0]).is_err());
}

#[test]
fn field_on_single_pixel() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = variant(dir.path(), |v| {
        v["field"] = serde_json::json!({
            "x_min_m": 0.0, "x_max_m": 0.0, "nx": 1, "y_min_m": 0.0, "y_max_m": 0.0, "ny": 1
        })
    });
    ok(&sawfocus(&["field", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]));
    let rows = csv_rows(&dir.path().join("field_l0.csv"));
    assert_eq!(rows.len(), 1);
    let v: Vec<f64> = rows[0].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(v, [0.0, 0.0, 1.0, 0.0]);
}

#[test]
fn layout_counts_for_the_demo_device() {
    let dir = tempfile::tempdir().unwrap();
    ok(&sawfocus(&["layout", "--config", &demo_config(), "--out", dir.path().to_str().unwrap()]));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("layout.json")).unwrap()).unwrap();
    let count = |k: &str| doc["polygons"].as_array().unwrap().iter().filter(|p| p["kind"] == k).count();
    assert_eq!(count("idt_finger_port1"), 10);
    assert_eq!(count("idt_finger_port2"), 10);
    assert_eq!(count("mirror_strip"), 400);
    assert_eq!(doc["metadata"]["electrode_width_m"], 5e-7);
    assert_eq!(doc["metadata"]["electrode_gap_m"], 5e-7);
    assert_eq!(doc["metadata"]["counts"]["mirror_strip"], 400);
}

#[test]
fn apodized_flag_shrinks_fingers_and_suppresses_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&sawfocus(&["layout", "--config", &demo_config(), "--out", out, "--apodized"]));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("layout.json")).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["aperture_rule"], "apodized_const_w0");
    for p in doc["polygons"].as_array().unwrap().iter().filter(|p| p["kind"] != "mirror_strip") {
        for v in p["vertices"].as_array().unwrap() {
            assert!(v[1].as_f64().unwrap().abs() <= 2e-6 * (1.0 + 1e-12));
        }
    }

    ok(&sawfocus(&["ladder", "--config", &demo_config(), "--out", out, "--apodized", "--l-max", "4"]));
    let rows = csv_rows(&dir.path().join("ladder.csv"));
    let e2: f64 = rows[2][1].parse().unwrap();
    assert!(e2 < 2e-4, "E2/E0 = {e2}");
}

#[test]
fn fit_on_shipped_scan() {
    let dir = tempfile::tempdir().unwrap();
    let scan = data("synthetic_scan_l0.csv");
    ok(&sawfocus(&["fit", "--scan", scan.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    let w0 = doc["w0_est"].as_f64().unwrap();
    let err = doc["w0_err"].as_f64().unwrap();
    assert!((w0 - 2e-6).abs() < 0.05 * 2e-6, "w0 = {w0}");
    assert!(err > 0.0 && err < 0.1e-6);
    assert_eq!(doc["peak_at_edge"], false);
    for key in ["center_y", "amplitude_scale", "offset", "residual_rms", "iterations", "x_slice"] {
        assert!(!doc[key].is_null(), "{key} missing");
    }
    assert_eq!(doc["config"]["x_slice_requested_m"], 0.0);
}
