//! Dense reference implementations shared by the integration and acceptance
//! tests. Everything here is deliberately independent of the structured
//! Pauli-application path in the library.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use spinorq::pauli::dense_matrix;
use spinorq::{PauliString, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

pub fn dense(s: &PauliString) -> DMatrix<Complex64> {
    dense_matrix(s).expect("small register")
}

pub fn column(psi: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(psi.amplitudes())
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `exp(θB)` for a bivector matrix with `B² = -I`, through the eigenbasis of
/// the Hermitian matrix `iB`.
pub fn expm_bivector(b: &DMatrix<Complex64>, theta: f64) -> DMatrix<Complex64> {
    let h = b.map(|z| z * c(0.0, 1.0));
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -theta * l)));
    &v * d * v.adjoint()
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    StateVector::normalized(n, amps).expect("non-zero draw")
}

/// `k` orthonormal states from Gram–Schmidt on random draws.
pub fn random_orthonormal<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<StateVector> {
    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(k);
    while basis.len() < k {
        let mut v = column(&random_state(rng, n));
        for u in &basis {
            let proj = u.dotc(&v);
            v -= u * proj;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / c(norm, 0.0));
        }
    }
    basis
        .into_iter()
        .map(|v| StateVector::normalized(n, v.iter().copied().collect()).unwrap())
        .collect()
}

/// `P(Bin(n, p) ∈ keep)`.
pub fn binomial_mass(n: u64, p: f64, keep: impl Fn(u64) -> bool) -> f64 {
    let mut total = 0.0;
    let mut log_c = 0.0;
    for k in 0..=n {
        if k > 0 {
            log_c += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        if keep(k) {
            let lp = if k == 0 { 0.0 } else { k as f64 * p.ln() };
            let lq = if k == n { 0.0 } else { (n - k) as f64 * (1.0 - p).ln() };
            total += (log_c + lp + lq).exp();
        }
    }
    total
}
