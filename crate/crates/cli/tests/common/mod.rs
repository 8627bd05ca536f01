#![allow(dead_code)]

use std::path::{Path, PathBuf};

use mbsim_cli::snapshot::Snapshot;

pub fn write_config(dir: &Path, name: &str, body: &str, out: &str) -> PathBuf {
    let text = format!(
        "{body}\n[output]\ndirectory = \"{}\"\n",
        dir.join(out).display()
    );
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// `(time, norm, residual, min|Δ_l|, |t|², |r|²)` rows.
pub fn timeseries(dir: &Path) -> Vec<[f64; 6]> {
    let text = std::fs::read_to_string(dir.join("timeseries.tsv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(mbsim_cli::run::TIMESERIES_HEADER));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split('\t').map(|c| c.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3], v[4], v[5]]
        })
        .collect()
}

pub fn snapshots(dir: &Path) -> Vec<Snapshot> {
    let mut files: Vec<_> = std::fs::read_dir(dir.join("snapshots"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "mbs"))
        .collect();
    files.sort();
    files.iter().map(|p| Snapshot::read(p).unwrap()).collect()
}

pub fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

/// Every file under `dir`, relative path and contents, sorted.
pub fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    std::fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

pub const FREE_GAUSSIAN: &str = r#"
[grid]
n_points = 256
length = 40.0

[physics]
dipole = 0.0
detuning = 5.0

[initial]
kind = "gaussian"
width = 1.5
norm = 2.0

[evolution]
dt = 0.01
n_steps = 200
snapshot_stride = 50
"#;

pub const DENSE_CLOUD: &str = r#"
[grid]
n_points = 256
length = 40.0

[physics]
dipole = 0.3
detuning = 4.0

[initial]
kind = "gaussian"
width = 2.0
norm = 3.0

[illumination]
left = 0.5

[evolution]
dt = 0.01
n_steps = 40
snapshot_stride = 10
"#;
