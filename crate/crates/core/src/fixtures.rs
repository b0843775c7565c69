//! Matrix functions and measures used by the tests, benches and the CLI
//! fixture corpus.

use crate::opmodel::MatrixRationalInner;
use crate::scalar::ExactComplex;
use crate::torusmeasure::{MonomialBranch, TorusMeasure, TrigWeight};

fn phi(rows: &[&[&str]], den: &str) -> MatrixRationalInner {
    MatrixRationalInner::parse(rows, den).expect("fixture is valid")
}

/// `[[0, z²], [z, 0]]`, whose model pair is `(M_{t²}, M_{t³})` and whose
/// minimal polynomial is `w² − z³`.
pub fn phi_neil() -> MatrixRationalInner {
    phi(&[&["0", "z^2"], &["z", "0"]], "1")
}

/// `[[0, z], [z, 0]]`, minimal polynomial `w² − z²`.
pub fn phi_swap() -> MatrixRationalInner {
    phi(&[&["0", "z"], &["z", "0"]], "1")
}

pub fn phi_diag() -> MatrixRationalInner {
    phi(&[&["z", "0"], &["0", "z^3"]], "1")
}

/// `(1 − 2z)/(2 − z)`.
pub fn phi_mobius() -> MatrixRationalInner {
    phi(&[&["1 - 2z"]], "2 - z")
}

/// `diag((1 − 2z)/(2 − z), z)` over the common denominator `2 − z`.
pub fn phi_mobius_diag() -> MatrixRationalInner {
    phi(&[&["1 - 2z", "0"], &["0", "2z - z^2"]], "2 - z")
}

/// `[[0, (1−2z)/(2−z)], [z, 0]]`.
pub fn phi_mobius_swap() -> MatrixRationalInner {
    phi(&[&["0", "1 - 2z"], &["2z - z^2", "0"]], "2 - z")
}

pub fn polynomial_phis() -> Vec<(&'static str, MatrixRationalInner)> {
    vec![
        ("neil", phi_neil()),
        ("swap", phi_swap()),
        ("diag", phi_diag()),
        ("shift", phi(&[&["z"]], "1")),
    ]
}

pub fn rational_phis() -> Vec<(&'static str, MatrixRationalInner)> {
    vec![("mobius", phi_mobius()), ("mobius_diag", phi_mobius_diag()), ("mobius_swap", phi_mobius_swap())]
}

fn branch(a: u32, b: i64, phase: i64) -> MonomialBranch {
    MonomialBranch::new(a, b, ExactComplex::from_ints(phase, 0), TrigWeight::constant(1).unwrap()).unwrap()
}

/// Arc length on `w = z` and `w = −z`: the model space of `z² − w²`.
pub fn measure_two_branch() -> TorusMeasure {
    TorusMeasure::new(vec![branch(1, 1, 1), branch(1, 1, -1)]).unwrap()
}

/// `θ ↦ (e^{2iθ}, e^{3iθ})`, on `z³ = w²`.
pub fn measure_neil() -> TorusMeasure {
    TorusMeasure::new(vec![branch(2, 3, 1)]).unwrap()
}

/// `θ ↦ (e^{iθ}, e^{iθ})`.
pub fn measure_diagonal() -> TorusMeasure {
    TorusMeasure::new(vec![branch(1, 1, 1)]).unwrap()
}

/// Union of the two-branch and Neil measures, on `(z² − w²)(z³ − w²) = 0`.
pub fn measure_composite() -> TorusMeasure {
    TorusMeasure::new(vec![branch(1, 1, 1), branch(1, 1, -1), branch(2, 3, 1)]).unwrap()
}
