#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qgame::herm::CMatrix;
use qgame::{DensityMatrix, HermMatrix};
use qgame_cli::format::{Candidate, Instance};

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn instance(name: &str) -> PathBuf {
    repo_root().join("instances").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_qgame-cli"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exited normally"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

pub fn write_instance(dir: &Path, name: &str, inst: &Instance) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, inst.to_canonical()).unwrap();
    path
}

pub fn write_candidate(dir: &Path, name: &str, rho: &[f64], sigma: &[f64], epsilon: f64) -> PathBuf {
    let cand = Candidate {
        n: rho.len(),
        m: sigma.len(),
        rho: DensityMatrix::from_probabilities(rho).unwrap(),
        sigma: DensityMatrix::from_probabilities(sigma).unwrap(),
        epsilon,
    };
    let path = dir.join(name);
    std::fs::write(&path, cand.to_canonical()).unwrap();
    path
}

pub fn diag(values: &[f64]) -> HermMatrix {
    HermMatrix::from_diagonal(values)
}

pub fn real(rows: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_iterator(rows, rows, entries.iter().map(|&x| x.into())).transpose()
}
