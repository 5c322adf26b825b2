//! Stabilizer groups: canonical form, Gray-code element enumeration, subset
//! restriction `S_A`, reduced density matrices and a statevector oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::pauli::PauliString;
use crate::statevector::{self, Amplitudes};

/// Default cap on the number of generators enumerated exhaustively (2^30 elements).
pub const DEFAULT_ENUMERATION_CAP: usize = 30;

/// Largest subset handled by [`StabilizerGroup::reduced_density_matrix`].
pub const RDM_MAX_QUBITS: usize = 12;

/// What [`StabilizerGroup::with_policy`] does with a generator that is a
/// product of earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DependentPolicy {
    #[default]
    Reject,
    Drop,
}

/// Sorted, duplicate-free qubit subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetSpec(Vec<usize>);

impl SubsetSpec {
    /// Sorts the indices; rejects duplicates and indices `>= n`.
    pub fn new(mut qubits: Vec<usize>, n: usize) -> Result<Self> {
        qubits.sort_unstable();
        if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        if qubits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("subset has duplicate qubits".into()));
        }
        Ok(SubsetSpec(qubits))
    }

    pub fn all(n: usize) -> Self {
        SubsetSpec((0..n).collect())
    }

    pub fn qubits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Word mask of the subset for `n` qubits.
    pub(crate) fn mask(&self, n: usize) -> Vec<u64> {
        let mut m = vec![0u64; n.div_ceil(64)];
        for &q in &self.0 {
            m[q / 64] |= 1 << (q % 64);
        }
        m
    }

    /// 1-based rendering, e.g. `{1,3}`.
    pub fn display_one_based(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|q| (q + 1).to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Abelian group generated by independent, commuting Hermitian Pauli strings
/// not containing `-I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
    /// Reduced row echelon form over columns `x_0..x_{n-1}, z_0..z_{n-1}`,
    /// one entry per row with its pivot column.
    canonical: Vec<(usize, PauliString)>,
}

fn column_bit(p: &PauliString, col: usize, n: usize) -> bool {
    let (words, c) = if col < n {
        (p.x_words(), col)
    } else {
        (p.z_words(), col - n)
    };
    (words[c / 64] >> (c % 64)) & 1 == 1
}

fn first_column(p: &PauliString, n: usize) -> Option<usize> {
    let scan = |words: &[u64]| {
        words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    };
    scan(p.x_words()).or_else(|| scan(p.z_words()).map(|c| c + n))
}

impl StabilizerGroup {
    /// Strict constructor: generators must be Hermitian, commute pairwise and
    /// be independent.
    pub fn from_generators(gens: Vec<PauliString>) -> Result<Self> {
        Self::with_policy(gens, DependentPolicy::Reject)
    }

    pub fn with_policy(gens: Vec<PauliString>, policy: DependentPolicy) -> Result<Self> {
        let n = gens.first().map_or(0, |g| g.num_qubits());
        Self::with_policy_n(n, gens, policy)
    }

    /// Like [`Self::with_policy`] with an explicit qubit count, so that an
    /// empty generator list still has a width.
    pub fn with_policy_n(n: usize, gens: Vec<PauliString>, policy: DependentPolicy) -> Result<Self> {
        for g in &gens {
            if g.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.num_qubits(),
                });
            }
        }
        for (i, g) in gens.iter().enumerate() {
            if !g.is_hermitian() {
                return Err(Error::InvalidArgument(format!(
                    "generator {i} ({g}) is not Hermitian"
                )));
            }
            for (j, h) in gens.iter().enumerate().take(i) {
                if !g.commutes_unchecked(h) {
                    return Err(Error::Anticommuting(j, i));
                }
            }
        }
        let mut group = StabilizerGroup {
            n,
            generators: Vec::with_capacity(gens.len()),
            canonical: Vec::new(),
        };
        for (i, g) in gens.into_iter().enumerate() {
            match group.reduce(&g) {
                (residual, _) if !residual.is_identity_up_to_phase() => {
                    group.insert_canonical(residual);
                    group.generators.push(g);
                }
                (residual, _) if residual.phase() != 0 => {
                    return Err(Error::InconsistentPhase(i));
                }
                _ => match policy {
                    DependentPolicy::Reject => return Err(Error::DependentGenerator(i)),
                    DependentPolicy::Drop => {}
                },
            }
        }
        group.canonical.sort_by_key(|(c, _)| *c);
        Ok(group)
    }

    /// Reduces `p` against the canonical rows; returns the residual and the
    /// canonical row indices used.
    fn reduce(&self, p: &PauliString) -> (PauliString, Vec<usize>) {
        let mut r = p.clone();
        let mut used = Vec::new();
        for (k, (pivot, row)) in self.canonical.iter().enumerate() {
            if column_bit(&r, *pivot, self.n) {
                r.mul_assign_unchecked(row);
                used.push(k);
            }
        }
        (r, used)
    }

    fn insert_canonical(&mut self, row: PauliString) {
        let pivot = first_column(&row, self.n).expect("nonidentity residual");
        for (_, existing) in self.canonical.iter_mut() {
            if column_bit(existing, pivot, self.n) {
                existing.mul_assign_unchecked(&row);
            }
        }
        self.canonical.push((pivot, row));
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Number of independent generators `q`.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// `k = n - q`.
    pub fn num_logical(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn is_state(&self) -> bool {
        self.generators.len() == self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Canonical (reduced row echelon) generator set.
    pub fn canonical(&self) -> Vec<PauliString> {
        self.canonical.iter().map(|(_, r)| r.clone()).collect()
    }

    /// If `p = i^k σ` for some `σ ∈ S`, returns `k`.
    pub fn membership(&self, p: &PauliString) -> Result<Option<u8>> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let (r, _) = self.reduce(p);
        Ok(r.is_identity_up_to_phase().then(|| r.phase()))
    }

    pub fn contains(&self, p: &PauliString) -> Result<bool> {
        Ok(self.membership(p)? == Some(0))
    }

    /// Product of the generators whose indices are listed.
    pub fn product_of(&self, indices: &[usize]) -> Result<PauliString> {
        let mut acc = PauliString::identity(self.n);
        for &i in indices {
            let g = self.generators.get(i).ok_or(Error::QubitOutOfRange {
                index: i,
                n: self.generators.len(),
            })?;
            acc.mul_assign_unchecked(g);
        }
        Ok(acc)
    }

    /// Product of the generators selected by the bits of `mask`.
    pub fn element_at(&self, mask: u64) -> PauliString {
        let mut acc = PauliString::identity(self.n);
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            acc.mul_assign_unchecked(&self.generators[j]);
            m &= m - 1;
        }
        acc
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.generators.len() > cap || self.generators.len() >= 64 {
            return Err(Error::CapExceeded {
                what: "group enumeration (generators)",
                needed: self.generators.len() as u128,
                cap: cap.min(63) as u128,
            });
        }
        Ok(())
    }

    /// All `2^q` elements in Gray-code order; each step is one generator
    /// multiplication.
    pub fn enumerate_elements(&self, cap: usize) -> Result<GrayElements<'_>> {
        self.check_cap(cap)?;
        Ok(self.elements_range(0, 1u64 << self.generators.len()))
    }

    /// Gray-code positions `start..end`. Disjoint ranges partition the group,
    /// so chunks can be walked independently.
    pub fn elements_range(&self, start: u64, end: u64) -> GrayElements<'_> {
        let end = end.min(1u64 << self.generators.len().min(63));
        GrayElements {
            group: self,
            next: start,
            end,
            current: (start < end).then(|| self.element_at(gray(start))),
        }
    }

    /// Generators of `S_A`: elements supported inside `a`.
    ///
    /// Solves for coefficient vectors whose product has no X or Z bit outside
    /// `a` (left kernel of the outside-`a` columns) rather than enumerating.
    pub fn restrict_to_subset(&self, a: &SubsetSpec) -> Result<StabilizerGroup> {
        let kernel = self.subset_kernel(a)?;
        let gens: Vec<PauliString> = kernel
            .iter()
            .map(|coeffs| {
                let idx: Vec<usize> = (0..self.generators.len())
                    .filter(|&i| (coeffs[i / 64] >> (i % 64)) & 1 == 1)
                    .collect();
                self.product_of(&idx).expect("indices in range")
            })
            .collect();
        StabilizerGroup::with_policy_n(self.n, gens, DependentPolicy::Reject)
    }

    /// `dim S_A` (so `|S_A| = 2^dim`), without building the generators.
    pub fn subset_dimension(&self, a: &SubsetSpec) -> Result<usize> {
        let m = self.outside_matrix(a)?;
        Ok(self.generators.len() - m.rank())
    }

    fn outside_matrix(&self, a: &SubsetSpec) -> Result<BitMatrix> {
        if let Some(&q) = a.qubits().iter().find(|&&q| q >= self.n) {
            return Err(Error::QubitOutOfRange { index: q, n: self.n });
        }
        let inside = a.mask(self.n);
        let outside: Vec<usize> = (0..self.n)
            .filter(|&q| (inside[q / 64] >> (q % 64)) & 1 == 0)
            .collect();
        let mut m = BitMatrix::zeros(self.generators.len(), 2 * outside.len());
        for (r, g) in self.generators.iter().enumerate() {
            for (c, &q) in outside.iter().enumerate() {
                let (w, b) = (q / 64, q % 64);
                m.set(r, 2 * c, (g.x_words()[w] >> b) & 1 == 1);
                m.set(r, 2 * c + 1, (g.z_words()[w] >> b) & 1 == 1);
            }
        }
        Ok(m)
    }

    fn subset_kernel(&self, a: &SubsetSpec) -> Result<Vec<Vec<u64>>> {
        Ok(self.outside_matrix(a)?.left_kernel())
    }

    /// `ρ_A = (1/2^|A|) Σ_{σ ∈ S_A} σ|_A`, which has unit trace.
    /// Row/column bit `k` is qubit `a.qubits()[k]`.
    pub fn reduced_density_matrix(&self, a: &SubsetSpec) -> Result<DensityMatrix> {
        if !self.is_state() {
            return Err(Error::NotAState {
                q: self.generators.len(),
                n: self.n,
            });
        }
        statevector::check_size(a.len(), RDM_MAX_QUBITS)?;
        let sub = self.restrict_to_subset(a)?;
        let dim = 1usize << a.len();
        let mut acc = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for sigma in sub.enumerate_elements(DEFAULT_ENUMERATION_CAP)? {
            acc += sigma.restrict(a.qubits())?.dense_matrix()?;
        }
        acc /= Complex64::new(dim as f64, 0.0);
        let rho = DensityMatrix {
            qubits: a.clone(),
            matrix: acc,
        };
        debug_assert!((rho.trace() - 1.0).abs() < 1e-9);
        Ok(rho)
    }

    /// Common `+1` eigenvector of all generators (`q = n`, `n ≤ 12`), with
    /// the largest amplitude made real and positive.
    pub fn state_vector(&self) -> Result<Amplitudes> {
        if !self.is_state() {
            return Err(Error::NotAState {
                q: self.generators.len(),
                n: self.n,
            });
        }
        statevector::check_size(self.n, statevector::STATEVECTOR_MAX_QUBITS)?;
        let dim = 1usize << self.n;
        let references = [
            statevector::zero_state(self.n),
            vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim],
            pseudo_random_state(self.n),
        ];
        for reference in references {
            let mut psi = reference;
            for g in &self.generators {
                let gpsi = statevector::apply_pauli(g, &psi);
                for (a, b) in psi.iter_mut().zip(gpsi) {
                    *a = (*a + b) * 0.5;
                }
            }
            let norm = statevector::norm_sqr(&psi).sqrt();
            if norm > 1e-6 {
                for a in psi.iter_mut() {
                    *a /= norm;
                }
                statevector::fix_global_phase(&mut psi);
                return Ok(psi);
            }
        }
        unreachable!("a generic reference state overlaps every stabilizer state")
    }
}

/// Deterministic generic vector with (almost surely) nonzero overlap with any state.
fn pseudo_random_state(n: usize) -> Amplitudes {
    let mut s: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    (0..1usize << n)
        .map(|_| Complex64::new(next(), next()))
        .collect()
}

#[inline]
pub(crate) fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Iterator over group elements in Gray-code order.
#[derive(Debug)]
pub struct GrayElements<'a> {
    group: &'a StabilizerGroup,
    next: u64,
    end: u64,
    current: Option<PauliString>,
}

impl GrayElements<'_> {
    /// Generator mask of the element the next call to `next` yields.
    pub fn peek_mask(&self) -> Option<u64> {
        (self.next < self.end).then(|| gray(self.next))
    }
}

impl Iterator for GrayElements<'_> {
    type Item = PauliString;

    fn next(&mut self) -> Option<PauliString> {
        if self.next >= self.end {
            return None;
        }
        let out = self.current.clone()?;
        self.next += 1;
        if self.next < self.end {
            let j = self.next.trailing_zeros() as usize;
            if let Some(c) = self.current.as_mut() {
                c.mul_assign_unchecked(&self.group.generators[j]);
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.end - self.next) as usize;
        (r, Some(r))
    }
}

/// Reduced density matrix on a qubit subset.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub qubits: SubsetSpec,
    pub matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_deviation(&self, other: &DMatrix<Complex64>) -> f64 {
        (&self.matrix - other)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Nested `[re, im]` arrays, row by row.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.dim())
            .map(|r| {
                serde_json::Value::Array(
                    (0..self.dim())
                        .map(|c| {
                            let z = self.matrix[(r, c)];
                            serde_json::json!([z.re, z.im])
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "qubits": self.qubits,
            "matrix": rows,
        })
    }
}
