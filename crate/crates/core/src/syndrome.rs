//! Syndromes, error-identification tables and pure-code checks.
//!
//! Syndrome bit `i` is 1 iff the error anticommutes with generator `i`, in
//! the group's generator order (lattice linear order for cluster states).
//! Syndromes ignore phase, so `E`, `-E` and `iE` share one table entry.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::stabilizer::StabilizerGroup;
use crate::uniformity::{
    binomial, centralizer_coset_min_weight, min_weight_bruteforce, next_combination, SearchOptions,
    WeightReport,
};

/// Default cap on the number of errors tabulated.
pub const DEFAULT_TABLE_CAP: u128 = 20_000_000;

/// Packed syndrome bitstring; character `i` of the text form is bit `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    len: usize,
    words: Vec<u64>,
}

impl Syndrome {
    pub fn zeros(len: usize) -> Self {
        Syndrome {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Syndrome whose bit `i` is bit `i` of `bits`.
    pub fn from_index(bits: u64, len: usize) -> Self {
        let mut out = Syndrome::zeros(len);
        for i in 0..len.min(64) {
            out.set(i, (bits >> i) & 1 == 1);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        Syndrome {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Indices of set bits.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({self})")
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = Syndrome::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(i, true),
                _ => return Err(Error::InvalidArgument(format!("bad syndrome {s:?}"))),
            }
        }
        Ok(out)
    }
}

impl Serialize for Syndrome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Syndrome {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Anticommutation pattern of `e` against the generators of `s`.
pub fn syndrome(s: &StabilizerGroup, e: &PauliString) -> Result<Syndrome> {
    if e.num_qubits() != s.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: s.num_qubits(),
            found: e.num_qubits(),
        });
    }
    Ok(syndrome_of(s.generators(), e))
}

pub(crate) fn syndrome_of(gens: &[PauliString], e: &PauliString) -> Syndrome {
    let mut out = Syndrome::zeros(gens.len());
    for (i, g) in gens.iter().enumerate() {
        if !g.commutes_unchecked(e) {
            out.set(i, true);
        }
    }
    out
}

/// Human-readable error, 1-based: `X on qubit 3`, `X on qubit 1, Z on qubit 2`.
pub fn describe_error(e: &PauliString) -> String {
    let parts: Vec<String> = e
        .support()
        .into_iter()
        .map(|q| format!("{} on qubit {}", e.get(q).letter(), q + 1))
        .collect();
    if parts.is_empty() {
        "no error".to_string()
    } else {
        parts.join(", ")
    }
}

/// Every Pauli error of support exactly `w` on `qubits`, ordered by qubit
/// combination then by X < Y < Z per position.
fn errors_of_weight(n: usize, qubits: &[usize], w: usize) -> Vec<PauliString> {
    const TYPES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    if w == 0 {
        return vec![PauliString::identity(n)];
    }
    if w > qubits.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..w).collect();
    loop {
        for t in 0..3usize.pow(w as u32) {
            let mut e = PauliString::identity(n);
            let mut code = t;
            for &slot in combo.iter().rev() {
                e.set(qubits[slot], TYPES[code % 3]).expect("qubit in range");
                code /= 3;
            }
            out.push(e);
        }
        if !next_combination(&mut combo, qubits.len()) {
            break;
        }
    }
    out
}

/// Error model of a [`SyndromeTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorModel {
    /// Largest error support tabulated.
    pub max_support: usize,
    /// Qubits errors may act on; `None` means all.
    pub qubits: Option<Vec<usize>>,
}

/// Syndrome → errors map over all Pauli errors of bounded support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeTable {
    pub generator_order: Vec<PauliString>,
    pub model: ErrorModel,
    /// Errors under each syndrome, lightest first.
    pub entries: BTreeMap<Syndrome, Vec<PauliString>>,
    /// Every nonzero syndrome has exactly one error, and only the identity
    /// has the zero syndrome.
    pub pure: bool,
    pub num_errors: u64,
}

impl SyndromeTable {
    /// Tabulates every error of support `≤ t` (on `qubits`, if given).
    pub fn build(s: &StabilizerGroup, t: usize, qubits: Option<&[usize]>, cap: u128) -> Result<Self> {
        let n = s.num_qubits();
        let allowed: Vec<usize> = match qubits {
            Some(q) => {
                if let Some(&bad) = q.iter().find(|&&x| x >= n) {
                    return Err(Error::QubitOutOfRange { index: bad, n });
                }
                let mut v = q.to_vec();
                v.sort_unstable();
                v.dedup();
                v
            }
            None => (0..n).collect(),
        };
        let count: u128 = (0..=t)
            .map(|w| binomial(allowed.len(), w) * 3u128.pow(w as u32))
            .sum();
        if count > cap {
            return Err(Error::CapExceeded {
                what: "syndrome table (errors)",
                needed: count,
                cap,
            });
        }
        let gens = s.generators();
        let strata: Vec<Vec<(Syndrome, PauliString)>> = (0..=t)
            .into_par_iter()
            .map(|w| {
                errors_of_weight(n, &allowed, w)
                    .into_iter()
                    .map(|e| (syndrome_of(gens, &e), e))
                    .collect()
            })
            .collect();
        let mut entries: BTreeMap<Syndrome, Vec<PauliString>> = BTreeMap::new();
        let mut num_errors = 0;
        for (syn, e) in strata.into_iter().flatten() {
            num_errors += 1;
            entries.entry(syn).or_default().push(e);
        }
        let pure = entries.iter().all(|(syn, errs)| {
            errs.len() == 1 && (!syn.is_zero() || errs[0].is_identity_up_to_phase())
        });
        Ok(SyndromeTable {
            generator_order: gens.to_vec(),
            model: ErrorModel {
                max_support: t,
                qubits: qubits.map(|_| allowed),
            },
            entries,
            pure,
            num_errors,
        })
    }

    /// Syndromes shared by more than one tabulated error.
    pub fn collisions(&self) -> Vec<(&Syndrome, &[PauliString])> {
        self.entries
            .iter()
            .filter(|(_, e)| e.len() > 1)
            .map(|(s, e)| (s, e.as_slice()))
            .collect()
    }

    pub fn identify(&self, syn: &Syndrome) -> Result<Identification> {
        if syn.len() != self.generator_order.len() {
            return Err(Error::DimensionMismatch {
                expected: self.generator_order.len(),
                found: syn.len(),
            });
        }
        if syn.is_zero() {
            return Ok(Identification::NoError);
        }
        Ok(match self.entries.get(syn) {
            None => Identification::Unknown,
            Some(errs) if errs.len() == 1 => Identification::Error(errs[0].clone()),
            Some(errs) => Identification::Ambiguous(errs.clone()),
        })
    }

    /// `{syndrome: [error, …]}` as JSON.
    pub fn entries_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(s, errs)| {
                (
                    s.to_string(),
                    serde_json::Value::Array(
                        errs.iter().map(|e| serde_json::Value::String(e.to_string())).collect(),
                    ),
                )
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Result of looking a syndrome up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "errors", rename_all = "kebab-case")]
pub enum Identification {
    NoError,
    Error(PauliString),
    Ambiguous(Vec<PauliString>),
    /// Not produced by any error in the table's model.
    Unknown,
}

impl fmt::Display for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identification::NoError => f.write_str("no error"),
            Identification::Error(e) => f.write_str(&describe_error(e)),
            Identification::Ambiguous(es) => {
                let d: Vec<String> = es.iter().map(describe_error).collect();
                write!(f, "ambiguous: {}", d.join(" | "))
            }
            Identification::Unknown => f.write_str("unknown (outside the error model)"),
        }
    }
}

/// Per-condition results of [`pure_code_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureCodeReport {
    pub m: usize,
    pub pure: bool,
    /// `None` when the group has no nonidentity element.
    pub stabilizer: Option<WeightReport>,
    /// One report per nonempty product of logicals, in subset-mask order.
    pub logical_cosets: Vec<WeightReport>,
}

/// True iff `S \ {I}` and every coset `L·S` for nonempty products `L` of the
/// logicals have minimum support `> m`. With no logicals this is
/// m-uniformity of the state.
pub fn pure_code_check(
    s: &StabilizerGroup,
    logicals: &[PauliString],
    m: usize,
    opts: SearchOptions,
) -> Result<PureCodeReport> {
    if logicals.len() >= 16 {
        return Err(Error::CapExceeded {
            what: "logical operator products",
            needed: logicals.len() as u128,
            cap: 15,
        });
    }
    for l in logicals {
        if l.num_qubits() != s.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: s.num_qubits(),
                found: l.num_qubits(),
            });
        }
        if let Some(i) = s.generators().iter().position(|g| !g.commutes_unchecked(l)) {
            return Err(Error::NotInCentralizer(l.to_string(), i));
        }
    }
    let stabilizer = if s.num_generators() > 0 {
        Some(min_weight_bruteforce(s, opts)?)
    } else {
        None
    };
    let mut pure = stabilizer.as_ref().is_none_or(|r| r.min_support > m);
    let mut logical_cosets = Vec::new();
    for mask in 1u32..(1 << logicals.len()) {
        let mut l = PauliString::identity(s.num_qubits());
        for (i, op) in logicals.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                l = l.multiply(op)?;
            }
        }
        let r = centralizer_coset_min_weight(s, &l, opts)?;
        pure &= r.min_support > m;
        logical_cosets.push(r);
    }
    Ok(PureCodeReport {
        m,
        pure,
        stabilizer,
        logical_cosets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{cluster_generators, Boundary, Lattice};

    fn chain(n: usize, b: Boundary) -> StabilizerGroup {
        StabilizerGroup::from_generators(cluster_generators(&Lattice::chain(n, b).unwrap())).unwrap()
    }

    fn e(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn benchmark_patterns_on_five_ring() {
        let g = chain(5, Boundary::Pbc);
        assert_eq!(syndrome(&g, &e("IIZII")).unwrap().to_string(), "00100");
        assert_eq!(syndrome(&g, &e("IIXII")).unwrap().to_string(), "01010");
        assert_eq!(syndrome(&g, &e("IIYII")).unwrap().to_string(), "01110");
    }

    #[test]
    fn open_chain_collision() {
        let g = chain(5, Boundary::Obc);
        assert_eq!(syndrome(&g, &e("XIIII")).unwrap().to_string(), "01000");
        assert_eq!(syndrome(&g, &e("IZIII")).unwrap().to_string(), "01000");
        let t = SyndromeTable::build(&g, 1, None, DEFAULT_TABLE_CAP).unwrap();
        assert!(!t.pure);
        let id = t.identify(&"01000".parse().unwrap()).unwrap();
        assert_eq!(id, Identification::Ambiguous(vec![e("XIIII"), e("IZIII")]));
    }

    #[test]
    fn five_ring_single_errors_are_pure() {
        let g = chain(5, Boundary::Pbc);
        let t = SyndromeTable::build(&g, 1, None, DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(t.num_errors, 16);
        assert_eq!(t.entries.len(), 16);
        assert!(t.pure);
        assert_eq!(
            t.identify(&"01010".parse().unwrap()).unwrap().to_string(),
            "X on qubit 3"
        );
        assert_eq!(t.identify(&"00000".parse().unwrap()).unwrap(), Identification::NoError);
    }

    #[test]
    fn identify_unknown_and_length_mismatch() {
        let g = chain(5, Boundary::Pbc);
        let t = SyndromeTable::build(&g, 1, None, DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(t.identify(&"11111".parse().unwrap()).unwrap(), Identification::Unknown);
        assert!(t.identify(&"0000".parse().unwrap()).is_err());
    }

    #[test]
    fn assume_single_qubit() {
        let g = chain(5, Boundary::Obc);
        let t = SyndromeTable::build(&g, 1, Some(&[2]), DEFAULT_TABLE_CAP).unwrap();
        assert!(t.pure);
        assert_eq!(t.num_errors, 4);
        let patterns: Vec<String> = t.entries.keys().map(|s| s.to_string()).collect();
        assert_eq!(patterns, vec!["00000", "00100", "01010", "01110"]);
    }

    #[test]
    fn table_cap() {
        let g = chain(30, Boundary::Pbc);
        assert!(SyndromeTable::build(&g, 3, None, 1000).unwrap_err().is_resource_cap());
    }

    #[test]
    fn errors_enumeration_counts() {
        let qubits: Vec<usize> = (0..6).collect();
        assert_eq!(errors_of_weight(6, &qubits, 2).len(), 15 * 9);
        assert_eq!(errors_of_weight(6, &qubits, 0).len(), 1);
    }

    #[test]
    fn pure_check_for_states() {
        let g = chain(5, Boundary::Pbc);
        assert!(pure_code_check(&g, &[], 2, SearchOptions::default()).unwrap().pure);
        assert!(!pure_code_check(&g, &[], 3, SearchOptions::default()).unwrap().pure);
    }

    #[test]
    fn pure_check_rejects_anticommuting_logical() {
        let g = chain(5, Boundary::Pbc);
        assert!(pure_code_check(&g, &[e("ZIIII")], 1, SearchOptions::default()).is_err());
    }

    #[test]
    fn syndrome_text_round_trip() {
        let s: Syndrome = "0110".parse().unwrap();
        assert_eq!(s.ones(), vec![1, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"0110\"");
        assert!("01a".parse::<Syndrome>().is_err());
    }
}
