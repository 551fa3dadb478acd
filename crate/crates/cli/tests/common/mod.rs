#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use gt_core::corpus::{self, acyclic_triangle, cycle, discrete, graph, path};
use gt_core::{representable, BaseCategory, Presheaf};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn rules_file(name: &str) -> PathBuf {
    corpus_dir().join("rules").join(format!("{name}.json"))
}

pub fn input_file(name: &str) -> PathBuf {
    corpus_dir().join("inputs").join(format!("{name}.json"))
}

/// The reference inputs by file stem.
pub fn inputs(base: &Arc<BaseCategory>) -> Vec<(&'static str, Presheaf)> {
    vec![
        ("triangle", acyclic_triangle(base)),
        ("d1", discrete(base, 1)),
        ("d2", discrete(base, 2)),
        ("p1", path(base, 1)),
        ("p2", path(base, 2)),
        ("p5", path(base, 5)),
        ("c3", cycle(base, 3)),
        ("vertex", representable(base, 0)),
        ("edge", representable(base, 1)),
        ("parallel3", graph(base, &["a", "b"], &[("e0", "a", "b"), ("e1", "a", "b"), ("e2", "a", "b")])),
    ]
}

pub fn graph_base() -> Arc<BaseCategory> {
    corpus::sierpinski().base().clone()
}

pub fn gt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gt")).args(args).output().expect("gt runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("gt exits normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

pub fn read_presheaf(path: &Path) -> Arc<Presheaf> {
    let s = std::fs::read_to_string(path).unwrap();
    Arc::new(gt_core::json::presheaf_from_str(&graph_base(), &s).unwrap())
}
