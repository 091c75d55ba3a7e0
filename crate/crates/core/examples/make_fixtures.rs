//! Writes the state fixtures used by the CLI tests and the README examples.
//!
//! `cargo run -p qgeodiv --example make_fixtures -- fixtures`

use std::fs;
use std::path::PathBuf;

use qgeodiv::linalg::pauli_x;
use qgeodiv::states::{random_density, RandomSpec};
use qgeodiv::{DensityMatrix, MatrixFile};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, file: MatrixFile| fs::write(dir.join(name), file.to_json() + "\n").unwrap();

    let rho = random_density(&RandomSpec::new(2, 42, 0.05).unwrap());
    let sigma = random_density(&RandomSpec::new(2, 43, 0.05).unwrap());
    write("rho_seed42.json", rho.to_file());
    write("sigma_seed42.json", sigma.to_file());

    write("rho_diag.json", DensityMatrix::from_diagonal(&[0.7, 0.2, 0.1]).unwrap().to_file());
    write("sigma_diag.json", DensityMatrix::from_diagonal(&[0.25, 0.25, 0.5]).unwrap().to_file());

    write("pauli_x.json", MatrixFile::from_matrix(&pauli_x()));
    write("qubit_07.json", DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap().to_file());
}
