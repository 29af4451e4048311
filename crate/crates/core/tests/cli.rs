use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exciton-chain"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

#[test]
fn modes_writes_csv_and_manifest() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["modes", "--config"])
        .arg(config("reference_chain.toml"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let table = fs::read_to_string(out.path().join("modes.csv")).unwrap();
    assert!(table.starts_with("k,parity,energy_shift_ev,dipole_ratio,gamma_per_s,gamma_ratio\n"));
    assert_eq!(table.lines().filter(|l| l.contains(",bright,")).count(), 5);
    assert_eq!(table.lines().filter(|l| l.contains(",dark,")).count(), 5);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "modes");
    assert_eq!(manifest["constants"]["speed_of_light_m_per_s"], 299792458.0);
}

#[test]
fn json_format_mirrors_csv_fields() {
    let csv = tempfile::tempdir().unwrap();
    let json = tempfile::tempdir().unwrap();
    for (dir, fmt) in [(&csv, "csv"), (&json, "json")] {
        let status = bin()
            .args(["trace", "--format", fmt, "--threads", "2", "--config"])
            .arg(config("two_segment.toml"))
            .arg("--out")
            .arg(dir.path())
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let header = fs::read_to_string(csv.path().join("trace_1.csv")).unwrap();
    let header: Vec<&str> = header.lines().next().unwrap().split(',').collect();
    let records: Vec<serde_json::Map<String, serde_json::Value>> =
        serde_json::from_str(&fs::read_to_string(json.path().join("trace_1.json")).unwrap()).unwrap();
    let keys: Vec<&str> = records[0].keys().map(String::as_str).collect();
    assert_eq!(header, keys);
}

#[test]
fn check_flag_passes() {
    let out = bin().arg("--check").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 6);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn exit_code_1_for_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[chain]\nn_sitez = 4\n").unwrap();
    let out = bin().arg("modes").arg("--config").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chain.n_sitez"));

    fs::write(&bad, "[layout]\noccupancy = \"\"\n").unwrap();
    let out = bin().arg("trace").arg("--config").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // trace needs a layout
    let out = bin().arg("trace").arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().args(["modes", "--format", "xml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_code_2_for_computation_errors() {
    // an observation point at the segment centre
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "[layout]\noccupancy = \"11\"\n[observation]\npoints = [[0.5, 0.0, 0.0]]\n",
    )
    .unwrap();
    let out = bin()
        .arg("trace")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_code_3_for_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("modes")
        .arg("--config")
        .arg(dir.path().join("missing.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // output directory blocked by a regular file
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = bin()
        .arg("modes")
        .arg("--out")
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
