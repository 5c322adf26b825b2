//! Dense statevector routines used as small-n oracles.
//!
//! Basis index bit `j` is qubit `j`, matching [`PauliString::dense_matrix`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Circuit, Gate};
use crate::pauli::{phase_factor, PauliString};

/// Largest qubit count handled by the dense oracles.
pub const STATEVECTOR_MAX_QUBITS: usize = 12;

pub type Amplitudes = Vec<Complex64>;

pub(crate) fn check_size(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "dense simulation qubits",
            needed: n as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

pub fn zero_state(n: usize) -> Amplitudes {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    v[0] = Complex64::new(1.0, 0.0);
    v
}

pub fn norm_sqr(psi: &[Complex64]) -> f64 {
    psi.iter().map(|a| a.norm_sqr()).sum()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `P|ψ⟩` using `σ(x,z) = i^{x·z} X^x Z^z` per qubit.
pub fn apply_pauli(p: &PauliString, psi: &[Complex64]) -> Amplitudes {
    let xmask = p.x_words().first().copied().unwrap_or(0) as usize;
    let zmask = p.z_words().first().copied().unwrap_or(0) as usize;
    let global = phase_factor(((p.phase() as u32 + (xmask & zmask).count_ones()) & 3) as u8);
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (b, &amp) in psi.iter().enumerate() {
        let sign = if (b & zmask).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
        out[b ^ xmask] = amp * global * sign;
    }
    out
}

/// `⟨ψ|P|ψ⟩`.
pub fn expectation(p: &PauliString, psi: &[Complex64]) -> Complex64 {
    inner(psi, &apply_pauli(p, psi))
}

pub fn apply_h(psi: &mut [Complex64], q: usize) {
    let bit = 1usize << q;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for b in 0..psi.len() {
        if b & bit == 0 {
            let (a0, a1) = (psi[b], psi[b | bit]);
            psi[b] = (a0 + a1) * s;
            psi[b | bit] = (a0 - a1) * s;
        }
    }
}

pub fn apply_cz(psi: &mut [Complex64], a: usize, b: usize) {
    let m = (1usize << a) | (1usize << b);
    for (i, amp) in psi.iter_mut().enumerate() {
        if i & m == m {
            *amp = -*amp;
        }
    }
}

/// Projects qubit `q` onto `|+⟩` without renormalizing; returns the branch
/// probability.
pub fn postselect_x_plus(psi: &mut [Complex64], q: usize) -> f64 {
    let bit = 1usize << q;
    for b in 0..psi.len() {
        if b & bit == 0 {
            let avg = (psi[b] + psi[b | bit]) * 0.5;
            psi[b] = avg;
            psi[b | bit] = avg;
        }
    }
    norm_sqr(psi)
}

/// Runs `circuit` on `psi`. Returns the product of postselection probabilities
/// (1 when the circuit has none); `psi` is left unnormalized.
pub fn run_circuit(circuit: &Circuit, psi: &mut [Complex64]) -> Result<f64> {
    if psi.len() != 1 << circuit.width() {
        return Err(Error::DimensionMismatch {
            expected: circuit.width(),
            found: psi.len().trailing_zeros() as usize,
        });
    }
    let mut prob = 1.0;
    for g in circuit.gates() {
        match *g {
            Gate::H(q) => apply_h(psi, q),
            Gate::Cz(a, b) => apply_cz(psi, a, b),
            Gate::MeasureXPostselect(q) => {
                let before = norm_sqr(psi);
                let after = postselect_x_plus(psi, q);
                prob *= if before > 0.0 { after / before } else { 0.0 };
            }
        }
    }
    Ok(prob)
}

/// Reduced density matrix on `subset` by summing out the other qubits.
/// Row/column bit `k` is qubit `subset[k]`.
pub fn partial_trace(psi: &[Complex64], n: usize, subset: &[usize]) -> DMatrix<Complex64> {
    let k = subset.len();
    let rest: Vec<usize> = (0..n).filter(|q| !subset.contains(q)).collect();
    let spread = |bits: usize, qubits: &[usize]| {
        qubits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &q)| acc | (((bits >> i) & 1) << q))
    };
    let mut rho = DMatrix::from_element(1 << k, 1 << k, Complex64::new(0.0, 0.0));
    for env in 0..(1usize << rest.len()) {
        let e = spread(env, &rest);
        for r in 0..(1usize << k) {
            let ar = psi[e | spread(r, subset)];
            if ar == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..(1usize << k) {
                rho[(r, c)] += ar * psi[e | spread(c, subset)].conj();
            }
        }
    }
    rho
}

/// `|ψ⟩⟨ψ|`.
pub fn projector(psi: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(psi.len(), psi.len(), |r, c| psi[r] * psi[c].conj())
}

/// Rotates the global phase so the largest-magnitude amplitude (first on
/// ties) is real and positive.
pub fn fix_global_phase(psi: &mut [Complex64]) {
    let mut best = 0;
    for (i, a) in psi.iter().enumerate() {
        if a.norm() > psi[best].norm() + 1e-12 {
            best = i;
        }
    }
    let a = psi[best];
    if a.norm() > 0.0 {
        let rot = a.conj() / a.norm();
        for x in psi.iter_mut() {
            *x *= rot;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_pauli_matches_dense_matrix() {
        let p: PauliString = "-YXZ".parse().unwrap();
        let psi: Amplitudes = (0..8)
            .map(|i| Complex64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.05))
            .collect();
        let direct = apply_pauli(&p, &psi);
        let dense = p.dense_matrix().unwrap() * nalgebra::DVector::from_vec(psi.clone());
        for (a, b) in direct.iter().zip(dense.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn postselection_probability() {
        let mut psi = zero_state(1);
        let mut c = Circuit::new(1);
        c.push(Gate::MeasureXPostselect(0)).unwrap();
        let p = run_circuit(&c, &mut psi).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut psi = zero_state(2);
        apply_h(&mut psi, 1);
        let rho = partial_trace(&psi, 2, &[1]);
        for r in 0..2 {
            for c in 0..2 {
                assert!((rho[(r, c)].re - 0.5).abs() < 1e-12);
            }
        }
    }
}
