//! Concurrent execution of several configs with one run manifest.
//!
//! Workers only compute and write their own output files; every manifest
//! line goes through a channel to the calling thread, which is the single
//! writer of `manifest.jsonl`.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use serde::Serialize;

use crate::config::{assemble, Overrides};
use crate::emit::write_outputs;
use crate::error::CliError;
use crate::run::run;

pub const MANIFEST_NAME: &str = "manifest.jsonl";

#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub config: PathBuf,
    pub status: &'static str,
    pub exit_code: u8,
    pub outputs: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn run_one(index: usize, path: &Path, out_dir: &Path, overrides: &Overrides) -> Result<Vec<PathBuf>, CliError> {
    let config = assemble(Some(path), None, overrides)?;
    let record = run(&config)?;
    let stem = format!("{index:03}-{}", config.base_name());
    write_outputs(&record, out_dir, &stem, &config.formats())
}

/// Runs `configs` on up to `jobs` threads, writing each run's files under
/// `out_dir` and appending one manifest line per run. Returns the entries in
/// input order.
pub fn run_batch(
    configs: &[PathBuf],
    out_dir: &Path,
    jobs: usize,
    overrides: &Overrides,
) -> Result<Vec<ManifestEntry>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let manifest_path = out_dir.join(MANIFEST_NAME);
    let mut manifest = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&manifest_path)
        .map_err(|e| CliError::io(&manifest_path, e))?;

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<ManifestEntry>();
    let mut entries = Vec::with_capacity(configs.len());
    thread::scope(|scope| -> Result<(), CliError> {
        for _ in 0..jobs.clamp(1, configs.len().max(1)) {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = configs.get(index) else { break };
                let entry = match run_one(index, path, out_dir, overrides) {
                    Ok(outputs) => ManifestEntry {
                        index,
                        config: path.clone(),
                        status: "ok",
                        exit_code: 0,
                        outputs,
                        error: None,
                    },
                    Err(e) => ManifestEntry {
                        index,
                        config: path.clone(),
                        status: "error",
                        exit_code: e.exit_code(),
                        outputs: Vec::new(),
                        error: Some(e.to_string()),
                    },
                };
                if tx.send(entry).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for entry in rx {
            let line = serde_json::to_string(&entry).expect("manifest entry serializes");
            writeln!(manifest, "{line}").map_err(|e| CliError::io(&manifest_path, e))?;
            entries.push(entry);
        }
        Ok(())
    })?;
    entries.sort_by_key(|e| e.index);
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_writes_distinct_files_and_one_manifest_line_each() {
        let dir = tempfile::tempdir().unwrap();
        let mut paths = Vec::new();
        for (k, body) in [
            r#"{"schema_version":1,"kind":"search","n_qubits":2,"theta":"pi/6","seed":1,"shots":100}"#,
            r#"{"schema_version":1,"kind":"search","n_qubits":2,"theta":"pi/6","seed":1,"shots":100}"#,
            r#"{"schema_version":1,"kind":"verify-algebra","n_qubits":4,"seed":0}"#,
            r#"{"kind":"search","n_qubits":2,"seed":1}"#,
        ]
        .iter()
        .enumerate()
        {
            let p = dir.path().join(format!("c{k}.json"));
            std::fs::write(&p, body).unwrap();
            paths.push(p);
        }
        let out = dir.path().join("out");
        let entries = run_batch(&paths, &out, 3, &Overrides::default()).unwrap();
        assert_eq!(entries.iter().map(|e| e.status).collect::<Vec<_>>(), ["ok", "ok", "ok", "error"]);
        assert_eq!(entries[3].exit_code, 2);
        let a = std::fs::read_to_string(&entries[0].outputs[0]).unwrap();
        let b = std::fs::read_to_string(&entries[1].outputs[0]).unwrap();
        assert_ne!(entries[0].outputs, entries[1].outputs);
        let strip = |s: &str| s.lines().filter(|l| !l.contains("wall_time_s")).collect::<Vec<_>>().join("\n");
        assert_eq!(strip(&a), strip(&b));
        let manifest = std::fs::read_to_string(out.join(MANIFEST_NAME)).unwrap();
        assert_eq!(manifest.lines().count(), 4);
    }
}
