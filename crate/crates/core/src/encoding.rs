//! Logical qubit encoded with an ancilla and CZ gates on a subset `A`.
//!
//! The encoded state is `α|cs⟩ + β Z_A|cs⟩`. It is prepared by entangling an
//! ancilla `α|0⟩ + β|1⟩` with every qubit of `A` through CZ, measuring the
//! ancilla in the X basis and keeping the `+1` outcome.
//!
//! `Z_A` anticommutes with `s_v` for each `v ∈ A`, so the code group of the
//! two-dimensional logical space is the subgroup of `S` commuting with `Z_A`.
//! Its logical operators are `Z_A` and any generator `s_v` with `v ∈ A`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cluster_generators, Circuit, Gate, Lattice};
use crate::pauli::{Pauli, PauliString};
use crate::stabilizer::{DependentPolicy, StabilizerGroup, SubsetSpec};
use crate::statevector::{apply_pauli, check_size, run_circuit, Amplitudes};
use crate::uniformity::{
    binomial, coset_min_weight, min_weight_bruteforce, next_combination, SearchOptions, WeightReport,
};

/// Largest base register simulated by [`encode_statevector`].
pub const ENCODE_MAX_QUBITS: usize = 10;
/// Largest register for the all-subsets family of [`minimal_a_search`].
pub const ALL_SUBSETS_MAX_QUBITS: usize = 14;

/// `α|cs⟩ + β Z_A|cs⟩` over a base stabilizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalEncoding {
    base: StabilizerGroup,
    a: SubsetSpec,
    z_a: PauliString,
    alpha: Complex64,
    beta: Complex64,
}

impl LogicalEncoding {
    pub fn new(base: StabilizerGroup, a: SubsetSpec, alpha: Complex64, beta: Complex64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("A must be nonempty".into()));
        }
        let n = base.num_qubits();
        if let Some(&q) = a.qubits().iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "|α|² + |β|² = {norm}, expected 1"
            )));
        }
        let z_a = PauliString::from_sparse(n, &a.qubits().iter().map(|&q| (q, Pauli::Z)).collect::<Vec<_>>())?;
        Ok(LogicalEncoding {
            base,
            a,
            z_a,
            alpha,
            beta,
        })
    }

    /// Encoding over the cluster state of `lat` with `α = 1, β = 0`.
    pub fn on_lattice(lat: &Lattice, a: SubsetSpec) -> Result<Self> {
        let base = StabilizerGroup::from_generators(cluster_generators(lat))?;
        Self::new(base, a, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn with_amplitudes(mut self, alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "|α|² + |β|² = {norm}, expected 1"
            )));
        }
        self.alpha = alpha;
        self.beta = beta;
        Ok(self)
    }

    pub fn base(&self) -> &StabilizerGroup {
        &self.base
    }

    pub fn subset(&self) -> &SubsetSpec {
        &self.a
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.z_a
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.alpha, self.beta)
    }

    /// Subgroup of the base group commuting with `Z_A`, plus the logical
    /// pair `[Z_A, s_v]` where `s_v` is the first generator anticommuting
    /// with `Z_A` (absent when every generator commutes).
    pub fn code_group(&self) -> Result<(StabilizerGroup, Vec<PauliString>)> {
        let gens = self.base.generators();
        let pivot = gens.iter().position(|g| !g.commutes_unchecked(&self.z_a));
        let mut code = Vec::with_capacity(gens.len());
        let mut logicals = vec![self.z_a.clone()];
        for (i, g) in gens.iter().enumerate() {
            match pivot {
                Some(p) if i == p => logicals.push(g.clone()),
                Some(p) if !g.commutes_unchecked(&self.z_a) => code.push(g.multiply(&gens[p])?),
                _ => code.push(g.clone()),
            }
        }
        let group = StabilizerGroup::with_policy_n(self.base.num_qubits(), code, DependentPolicy::Reject)?;
        Ok((group, logicals))
    }
}

/// Both constructions of the encoded state.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedState {
    /// Simulated ancilla circuit after postselection, renormalized.
    pub circuit: Amplitudes,
    /// `α|cs⟩ + β Z_A|cs⟩`, renormalized.
    pub formula: Amplitudes,
    /// Probability of the `+1` ancilla outcome.
    pub success_probability: f64,
    /// Largest entrywise `|circuit − formula|`.
    pub max_deviation: f64,
}

/// Runs the ancilla circuit on `|cs⟩ ⊗ (α|0⟩ + β|1⟩)`; the ancilla is qubit `n`.
pub fn encode_statevector(enc: &LogicalEncoding) -> Result<EncodedState> {
    let n = enc.base.num_qubits();
    check_size(n, ENCODE_MAX_QUBITS)?;
    let cs = enc.base.state_vector()?;
    let dim = 1usize << n;
    let mut full = vec![Complex64::new(0.0, 0.0); dim << 1];
    for (b, &amp) in cs.iter().enumerate() {
        full[b] = amp * enc.alpha;
        full[b | dim] = amp * enc.beta;
    }
    let mut circuit = Circuit::new(n + 1);
    for &q in enc.a.qubits() {
        circuit.push(Gate::Cz(n, q))?;
    }
    circuit.push(Gate::MeasureXPostselect(n))?;
    let success_probability = run_circuit(&circuit, &mut full)?;
    // postselection leaves |ψ⟩ ⊗ |+⟩; read the system off the ancilla-0 half
    let mut via_circuit: Amplitudes = full[..dim].to_vec();
    normalize(&mut via_circuit)?;

    let za_cs = apply_pauli(&enc.z_a, &cs);
    let mut via_formula: Amplitudes = cs
        .iter()
        .zip(&za_cs)
        .map(|(a, b)| enc.alpha * a + enc.beta * b)
        .collect();
    normalize(&mut via_formula)?;

    let max_deviation = via_circuit
        .iter()
        .zip(&via_formula)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(EncodedState {
        circuit: via_circuit,
        formula: via_formula,
        success_probability,
        max_deviation,
    })
}

fn normalize(v: &mut [Complex64]) -> Result<()> {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::InvalidArgument("encoded state vanishes".into()));
    }
    for a in v.iter_mut() {
        *a /= norm;
    }
    Ok(())
}

/// Verdict of [`logical_space_is_m_uniform`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalUniformity {
    pub m: usize,
    pub uniform: bool,
    /// Minimum support of `S \ {I}`.
    pub stabilizer: WeightReport,
    /// Minimum support of `Z_A·S`.
    pub coset: WeightReport,
}

/// Every state `α|cs⟩ + β Z_A|cs⟩` is m-uniform iff both `S \ {I}` and
/// `Z_A·S` have minimum support `> m`.
pub fn logical_space_is_m_uniform(enc: &LogicalEncoding, m: usize) -> Result<LogicalUniformity> {
    if !enc.base.is_state() {
        return Err(Error::NotAState {
            q: enc.base.num_generators(),
            n: enc.base.num_qubits(),
        });
    }
    let opts = SearchOptions::default();
    let stabilizer = min_weight_bruteforce(&enc.base, opts)?;
    let coset = coset_min_weight(&enc.base, &enc.z_a, opts)?;
    Ok(LogicalUniformity {
        m,
        uniform: stabilizer.min_support > m && coset.min_support > m,
        stabilizer,
        coset,
    })
}

/// Candidate families for [`minimal_a_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetFamily {
    /// Runs of consecutive vertices in linear order, wrapping around on
    /// fully periodic lattices.
    Contiguous,
    /// Every subset of the given size.
    AllSubsets,
}

impl std::str::FromStr for SubsetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contiguous" => Ok(SubsetFamily::Contiguous),
            "all-subsets" | "all" => Ok(SubsetFamily::AllSubsets),
            _ => Err(Error::InvalidArgument(format!("unknown subset family {s:?}"))),
        }
    }
}

/// Result of [`minimal_a_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalA {
    pub m: usize,
    pub family: SubsetFamily,
    /// Smallest `|A|` giving an m-uniform logical space, if any.
    pub minimal_size: Option<usize>,
    /// Lexicographically first such `A`.
    pub witness: Option<SubsetSpec>,
    pub candidates_checked: u64,
    /// The sufficient size `2D(2D+1) + 1`.
    pub sufficient_size: usize,
    /// Minimum support of the base group; nothing works when this is `≤ m`.
    pub stabilizer_min_support: usize,
}

fn contiguous_runs(n: usize, k: usize, wrap: bool) -> Vec<Vec<usize>> {
    if k == n {
        return vec![(0..n).collect()];
    }
    let starts = if wrap { n } else { n + 1 - k };
    (0..starts)
        .map(|s| {
            let mut v: Vec<usize> = (0..k).map(|i| (s + i) % n).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Smallest `A` in `family` whose encoded logical space is m-uniform.
pub fn minimal_a_search(lat: &Lattice, m: usize, family: SubsetFamily, cap: u128) -> Result<MinimalA> {
    let n = lat.num_vertices();
    let base = StabilizerGroup::from_generators(cluster_generators(lat))?;
    let d = lat.dim();
    let sufficient_size = 2 * d * (2 * d + 1) + 1;
    let opts = SearchOptions::default();
    let stabilizer = min_weight_bruteforce(&base, opts)?;
    let mut out = MinimalA {
        m,
        family,
        minimal_size: None,
        witness: None,
        candidates_checked: 0,
        sufficient_size,
        stabilizer_min_support: stabilizer.min_support,
    };
    if stabilizer.min_support <= m {
        return Ok(out);
    }
    let total: u128 = match family {
        SubsetFamily::Contiguous => (n as u128) * (n as u128),
        SubsetFamily::AllSubsets => {
            check_size(n, ALL_SUBSETS_MAX_QUBITS)?;
            1u128 << n
        }
    };
    if total > cap {
        return Err(Error::CapExceeded {
            what: "candidate subsets",
            needed: total,
            cap,
        });
    }
    for k in 1..=n {
        let candidates: Vec<Vec<usize>> = match family {
            SubsetFamily::Contiguous => contiguous_runs(n, k, lat.is_periodic()),
            SubsetFamily::AllSubsets => {
                let mut all = Vec::with_capacity(binomial(n, k) as usize);
                let mut c: Vec<usize> = (0..k).collect();
                loop {
                    all.push(c.clone());
                    if !next_combination(&mut c, n) {
                        break;
                    }
                }
                all
            }
        };
        let hits: Vec<bool> = candidates
            .par_iter()
            .map(|a| {
                let enc = LogicalEncoding::on_lattice_group(&base, a, n)?;
                let r = coset_min_weight(&enc.base, &enc.z_a, opts.stop_at(m))?;
                Ok(r.min_support > m)
            })
            .collect::<Result<_>>()?;
        out.candidates_checked += candidates.len() as u64;
        let mut found: Vec<&Vec<usize>> = candidates.iter().zip(&hits).filter(|(_, h)| **h).map(|(a, _)| a).collect();
        if !found.is_empty() {
            found.sort();
            out.minimal_size = Some(k);
            out.witness = Some(SubsetSpec::new(found[0].clone(), n)?);
            return Ok(out);
        }
    }
    Ok(out)
}

impl LogicalEncoding {
    fn on_lattice_group(base: &StabilizerGroup, a: &[usize], n: usize) -> Result<Self> {
        Self::new(
            base.clone(),
            SubsetSpec::new(a.to_vec(), n)?,
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }
}

/// Largest `|⟨φ|P|φ⟩|` over non-identity Paulis with support `≤ m`. Dense
/// oracle for [`logical_space_is_m_uniform`].
pub fn max_low_weight_expectation(psi: &[Complex64], n: usize, m: usize) -> Result<f64> {
    check_size(n, ENCODE_MAX_QUBITS)?;
    const TYPES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    let qubits: Vec<usize> = (0..n).collect();
    let mut worst = 0.0f64;
    for w in 1..=m.min(n) {
        let mut combo: Vec<usize> = (0..w).collect();
        loop {
            for code in 0..3usize.pow(w as u32) {
                let mut c = code;
                let ops: Vec<(usize, Pauli)> = combo
                    .iter()
                    .map(|&i| {
                        let t = TYPES[c % 3];
                        c /= 3;
                        (qubits[i], t)
                    })
                    .collect();
                let p = PauliString::from_sparse(n, &ops)?;
                let e = crate::statevector::expectation(&p, psi);
                worst = worst.max(e.norm());
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::syndrome::pure_code_check;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ring(n: usize) -> Lattice {
        Lattice::chain(n, Boundary::Pbc).unwrap()
    }

    fn enc(lat: &Lattice, a: Vec<usize>) -> LogicalEncoding {
        LogicalEncoding::on_lattice(lat, SubsetSpec::new(a, lat.num_vertices()).unwrap()).unwrap()
    }

    #[test]
    fn beta_zero_gives_base_state() {
        let lat = ring(5);
        let e = enc(&lat, vec![1, 2]);
        let s = encode_statevector(&e).unwrap();
        let cs = e.base().state_vector().unwrap();
        for (a, b) in s.circuit.iter().zip(&cs) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(s.max_deviation < 1e-12);
    }

    #[test]
    fn circuit_matches_formula() {
        let lat = ring(6);
        let e = enc(&lat, vec![0, 2, 3])
            .with_amplitudes(c(0.6, 0.0), c(0.0, 0.8))
            .unwrap();
        let s = encode_statevector(&e).unwrap();
        assert!(s.max_deviation < 1e-12);
        assert!((s.success_probability - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let lat = ring(5);
        let base = StabilizerGroup::from_generators(cluster_generators(&lat)).unwrap();
        let a = SubsetSpec::new(vec![1], 5).unwrap();
        assert!(LogicalEncoding::new(base.clone(), a.clone(), c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(LogicalEncoding::new(base, SubsetSpec::new(vec![], 5).unwrap(), c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn single_site_fails_at_m_one() {
        let lat = ring(8);
        let v = logical_space_is_m_uniform(&enc(&lat, vec![3]), 1).unwrap();
        assert!(!v.uniform);
        assert_eq!(v.coset.min_support, 1);
        assert_eq!(v.coset.witness.to_string(), "+IIIZIIII");
    }

    #[test]
    fn seven_sites_on_twenty_ring() {
        let lat = ring(20);
        let v = logical_space_is_m_uniform(&enc(&lat, (3..10).collect()), 2).unwrap();
        assert!(v.uniform);
        assert_eq!(v.stabilizer.min_support, 3);
        assert!(v.coset.min_support > 2);
    }

    #[test]
    fn code_group_matches_direct_criterion() {
        let lat = ring(9);
        for a in [vec![0], vec![2, 3], vec![1, 2, 3], vec![0, 4, 5, 6], vec![2, 3, 4, 5, 6]] {
            let e = enc(&lat, a);
            let (code, logicals) = e.code_group().unwrap();
            assert_eq!(code.num_generators(), 8);
            assert_eq!(logicals.len(), 2);
            for m in 0..3 {
                let direct = logical_space_is_m_uniform(&e, m).unwrap().uniform;
                let pure = pure_code_check(&code, &logicals, m, SearchOptions::default()).unwrap().pure;
                assert_eq!(direct, pure);
            }
        }
    }

    #[test]
    fn dense_expectations_agree_with_verdict() {
        let lat = ring(8);
        let amps = [(c(0.6, 0.0), c(0.0, 0.8)), (c(0.8, 0.0), c(0.36, 0.48))];
        for a in [vec![0], vec![1, 2], vec![2, 3, 4], vec![1, 2, 3, 4, 5]] {
            for m in 1..=2 {
                let e = enc(&lat, a.clone());
                let verdict = logical_space_is_m_uniform(&e, m).unwrap().uniform;
                let mut worst = 0.0f64;
                for &(al, be) in &amps {
                    let s = encode_statevector(&e.clone().with_amplitudes(al, be).unwrap()).unwrap();
                    worst = worst.max(max_low_weight_expectation(&s.formula, 8, m).unwrap());
                }
                assert_eq!(verdict, worst < 1e-10, "A={a:?} m={m} worst={worst}");
            }
        }
    }

    #[test]
    fn monotone_in_m() {
        let lat = ring(12);
        let e = enc(&lat, (0..5).collect());
        let mut prev = true;
        for m in 0..5 {
            let u = logical_space_is_m_uniform(&e, m).unwrap().uniform;
            assert!(prev || !u);
            prev = u;
        }
    }

    #[test]
    fn minimal_contiguous_on_twenty_ring() {
        let r = minimal_a_search(&ring(20), 2, SubsetFamily::Contiguous, 1 << 20).unwrap();
        let k = r.minimal_size.unwrap();
        assert!(k <= 7);
        assert!(k <= r.sufficient_size);
        assert_eq!(r.witness.unwrap().len(), k);
    }

    #[test]
    fn m_zero_needs_one_site() {
        let r = minimal_a_search(&ring(6), 0, SubsetFamily::AllSubsets, 1 << 20).unwrap();
        assert_eq!(r.minimal_size, Some(1));
        assert_eq!(r.witness.unwrap().qubits(), &[0]);
    }

    #[test]
    fn contiguous_runs_wrap() {
        assert_eq!(contiguous_runs(5, 2, true).len(), 5);
        assert_eq!(contiguous_runs(5, 2, true)[4], vec![0, 4]);
        assert_eq!(contiguous_runs(5, 2, false).len(), 4);
        assert_eq!(contiguous_runs(5, 5, true).len(), 1);
    }
}
