//! n-qubit Pauli strings in binary symplectic form.
//!
//! A [`PauliString`] stores one X bit and one Z bit per qubit, packed into
//! 64-bit words, plus a global prefactor `i^phase`. The local operator on
//! qubit `j` is `I`, `X`, `Z`, `Y` for `(x, z)` = `(0,0)`, `(1,0)`, `(0,1)`,
//! `(1,1)`, where `Y = i·XZ`. The text form is a sign followed by one letter
//! per qubit, qubit 0 first: `+XZZ`, `-XXX`, `+iYI`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest qubit count for which [`PauliString::dense_matrix`] is allowed.
pub const DENSE_MAX_QUBITS: usize = 12;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Phase exponent (mod 4) picked up by the word-wise product of local Paulis.
///
/// Per qubit, `σ(x1,z1)·σ(x2,z2) = i^g σ(x1^x2, z1^z2)` with `g ∈ {-1,0,1}`;
/// this returns `Σ g mod 4` for one 64-qubit word.
#[inline]
pub(crate) fn product_phase_word(x1: u64, z1: u64, x2: u64, z2: u64) -> u32 {
    let y1 = x1 & z1;
    let xo1 = x1 & !z1;
    let zo1 = !x1 & z1;
    let y2 = x2 & z2;
    let xo2 = x2 & !z2;
    let zo2 = !x2 & z2;
    // Y·Z, X·Y, Z·X contribute +1; Y·X, X·Z, Z·Y contribute -1.
    let plus = (y1 & zo2) | (xo1 & y2) | (zo1 & xo2);
    let minus = (y1 & xo2) | (xo1 & zo2) | (zo1 & y2);
    (plus.count_ones() + 3 * minus.count_ones()) & 3
}

/// n-qubit Pauli operator `i^phase ⊗_j σ(x_j, z_j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// Builds a string from raw words. Bits at positions `>= n` must be clear.
    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Result<Self> {
        let w = words_for(n);
        if x.len() != w || z.len() != w {
            return Err(Error::InvalidArgument(format!(
                "expected {w} words for {n} qubits"
            )));
        }
        let p = PauliString {
            n,
            x,
            z,
            phase: phase & 3,
        };
        if p.has_stray_bits() {
            return Err(Error::InvalidArgument("bits set beyond qubit count".into()));
        }
        Ok(p)
    }

    fn has_stray_bits(&self) -> bool {
        let r = self.n % 64;
        if r == 0 || self.x.is_empty() {
            return false;
        }
        let mask = !((1u64 << r) - 1);
        let last = self.x.len() - 1;
        (self.x[last] | self.z[last]) & mask != 0
    }

    /// Single-qubit operator `p` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Result<Self> {
        let mut s = PauliString::identity(n);
        s.set(qubit, p)?;
        Ok(s)
    }

    /// Product of `p` over every listed qubit.
    pub fn from_sparse(n: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = PauliString::identity(n);
        for &(q, p) in ops {
            let single = PauliString::single(n, q, p)?;
            s = s.multiply(&single)?;
        }
        Ok(s)
    }

    /// `Z` on every qubit in `qubits`.
    pub fn z_on(n: usize, qubits: &[usize]) -> Result<Self> {
        let mut s = PauliString::identity(n);
        for &q in qubits {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            s.z[q / 64] ^= 1 << (q % 64);
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = (self.phase + 2) & 3;
        self
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        let (w, b) = (qubit / 64, qubit % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    /// Overwrites the local operator on `qubit`; the global phase is unchanged.
    pub fn set(&mut self, qubit: usize, p: Pauli) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n: self.n,
            });
        }
        let (w, b) = (qubit / 64, qubit % 64);
        let (xb, zb) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
        Ok(())
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Exact operator product `self · other`, phase included.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// In-place `self ← self · other`. Caller guarantees equal lengths.
    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliString) {
        let mut ph = self.phase as u32 + other.phase as u32;
        for w in 0..self.x.len() {
            ph += product_phase_word(self.x[w], self.z[w], other.x[w], other.z[w]);
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        self.phase = (ph & 3) as u8;
    }

    /// True iff the symplectic inner product vanishes.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc += ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        acc & 1 == 0
    }

    /// Qubit indices where the operator acts non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (&xw, &zw)) in self.x.iter().zip(&self.z).enumerate() {
            let mut bits = xw | zw;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Size of the support.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Identity up to the global phase.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Same X/Z bits, ignoring phase.
    pub fn same_up_to_phase(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// Compacts onto the listed qubits: qubit `subset[k]` becomes qubit `k`.
    /// Operators outside `subset` are discarded.
    pub fn restrict(&self, subset: &[usize]) -> Result<PauliString> {
        let mut out = PauliString::identity(subset.len());
        out.phase = self.phase;
        for (k, &q) in subset.iter().enumerate() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n: self.n,
                });
            }
            out.set(k, self.get(q))?;
        }
        Ok(out)
    }

    /// Dense `2^n × 2^n` matrix. Basis index bit `j` is qubit `j`, so the
    /// matrix is `σ_{n-1} ⊗ … ⊗ σ_0` times `i^phase`.
    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n > DENSE_MAX_QUBITS {
            return Err(Error::CapExceeded {
                what: "dense Pauli matrix qubits",
                needed: self.n as u128,
                cap: DENSE_MAX_QUBITS as u128,
            });
        }
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for j in 0..self.n {
            let loc = self.get(j).matrix();
            let loc = DMatrix::from_fn(2, 2, |r, c| loc[r][c]);
            m = loc.kronecker(&m);
        }
        Ok(m * phase_factor(self.phase))
    }
}

/// `i^phase` as a complex number.
pub fn phase_factor(phase: u8) -> Complex64 {
    match phase & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(sign)?;
        for j in 0..self.n {
            write!(f, "{}", self.get(j).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (phase, body) = if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else {
            (0, t)
        };
        let mut p = PauliString::identity(body.chars().count());
        for (j, c) in body.chars().enumerate() {
            let op = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::ParsePauli(s.to_string())),
            };
            p.set(j, op)?;
        }
        p.phase = phase;
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
