//! The named corpus as JSON files.

use std::path::{Path, PathBuf};

use covrep_core::examples::{corpus_instance, corpus_names, g2_induced};

use crate::error::{CliError, CliResult};
use crate::io::{write_instance, Instance};

/// File name of a corpus entry: `/` is not allowed in paths.
pub fn file_name(name: &str) -> String {
    format!("{}.json", name.replace('/', "_"))
}

pub fn corpus() -> Vec<Instance> {
    corpus_names()
        .iter()
        .map(|n| Instance::from_any(Some(n), &corpus_instance(n).expect("named corpus instance")))
        .collect()
}

/// `G2` induced with `K` spanning Fock levels `≥ m`, the invariant subspaces used by `richter`.
pub fn g2_level_instance(m: usize) -> Instance {
    let ind = g2_induced();
    let cols: usize = ind.level_dims[m..].iter().sum();
    let total: usize = ind.level_dims.iter().sum();
    let basis = covrep_core::linalg::eye(total).columns(total - cols, cols).into_owned();
    Instance::from_rep(Some(&format!("G2-levels-{m}")), &ind.rep).with_subspace(&basis)
}

pub fn write_corpus(dir: &Path) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    let extra = (1..=2).map(g2_level_instance);
    for inst in corpus().into_iter().chain(extra) {
        let path = dir.join(file_name(inst.name().expect("corpus entries are named")));
        write_instance(&path, &inst)?;
        out.push(path);
    }
    Ok(out)
}
