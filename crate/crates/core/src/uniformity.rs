//! Minimum-weight search over stabilizer groups and their cosets, and the
//! m-uniformity decisions built on it.
//!
//! A state is m-uniform iff every nonidentity stabilizer element has support
//! larger than m, so everything here reduces to finding the minimum support
//! over a set of group elements:
//!
//! * [`min_weight_bruteforce`] walks all `2^q` elements in Gray-code order,
//!   one XOR per step, split into contiguous chunks that run in parallel.
//! * [`min_weight_windowed`] only multiplies generators whose lattice
//!   centres are pairwise close. For graph-form generators the X part of a
//!   product is exactly the set of chosen centres, so a product of `k`
//!   generators weighs at least `k`; and a minimum is always attained on a
//!   set whose generators overlap in a connected pattern. The search
//!   enumerates only such connected, size-bounded windows.
//! * [`subset_sweep_check`] tests `S_A = {I}` directly for every `|A| = m`.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cluster_generators, Lattice};
use crate::pauli::PauliString;
use crate::stabilizer::{gray, StabilizerGroup, SubsetSpec, DEFAULT_ENUMERATION_CAP};

/// Default window radius: generator centres of any element with support
/// `≤ 2D` lie pairwise within lattice distance 4.
pub const DEFAULT_WINDOW_RADIUS: usize = 4;

/// Walks with more than this many elements are split into parallel chunks.
pub const PARALLEL_THRESHOLD: u64 = 1 << 24;

const CHUNK_SIZE: u64 = 1 << 20;

/// Default cap on `C(n, m)` for subset sweeps.
pub const DEFAULT_SUBSET_CAP: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    Brute,
    Windowed,
    SubsetSweep,
}

/// Result of a minimum-support search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub min_support: usize,
    pub witness: PauliString,
    /// Generator indices whose product (times the coset representative, for
    /// coset searches) is the witness.
    pub coefficients: Vec<usize>,
    pub method: SearchMethod,
    pub elements_scanned: u64,
    /// False when the walk stopped at the first element under the target;
    /// `min_support` is then an upper bound.
    pub exhaustive: bool,
    /// False for windowed searches outside the regime where the window
    /// provably contains every minimum.
    pub sound: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

/// Tuning for the exhaustive walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest `q` enumerated; `2^q` elements are visited.
    pub max_generators: usize,
    /// Stop at the first element (in Gray order) of support `≤ stop_at`.
    pub stop_at: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_generators: DEFAULT_ENUMERATION_CAP,
            stop_at: None,
        }
    }
}

impl SearchOptions {
    pub fn stop_at(mut self, m: usize) -> Self {
        self.stop_at = Some(m);
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    weight: usize,
    mask: u64,
    /// Gray position, for early-stop ordering.
    pos: u64,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    (a.weight, a.mask) < (b.weight, b.mask)
}

#[derive(Debug, Default)]
struct ChunkOutcome {
    best: Option<Candidate>,
    hit: Option<Candidate>,
}

/// Generators packed as `[x words | z words]` rows of width `W`.
struct Packed<const W: usize> {
    x: Vec<[u64; W]>,
    z: Vec<[u64; W]>,
    offset_x: [u64; W],
    offset_z: [u64; W],
}

impl<const W: usize> Packed<W> {
    fn new(group: &StabilizerGroup, offset: Option<&PauliString>) -> Self {
        let pack = |words: &[u64]| {
            let mut a = [0u64; W];
            a[..words.len()].copy_from_slice(words);
            a
        };
        let (ox, oz) = offset.map_or(([0; W], [0; W]), |l| (pack(l.x_words()), pack(l.z_words())));
        Packed {
            x: group.generators().iter().map(|g| pack(g.x_words())).collect(),
            z: group.generators().iter().map(|g| pack(g.z_words())).collect(),
            offset_x: ox,
            offset_z: oz,
        }
    }

    fn scan(
        &self,
        start: u64,
        end: u64,
        skip_identity: bool,
        stop_at: Option<usize>,
        chunk: u64,
        lowest_hit: &AtomicU64,
    ) -> ChunkOutcome {
        let mut cx = self.offset_x;
        let mut cz = self.offset_z;
        let mut m = gray(start);
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            for w in 0..W {
                cx[w] ^= self.x[j][w];
                cz[w] ^= self.z[j][w];
            }
            m &= m - 1;
        }
        let mut out = ChunkOutcome::default();
        let mut best_w = usize::MAX;
        let mut best_mask = u64::MAX;
        for k in start..end {
            if k != start {
                let j = k.trailing_zeros() as usize;
                for w in 0..W {
                    cx[w] ^= self.x[j][w];
                    cz[w] ^= self.z[j][w];
                }
                if k & 0xFFFF == 0 && stop_at.is_some() && lowest_hit.load(AtomicOrdering::Relaxed) < chunk {
                    break;
                }
            }
            let mask = gray(k);
            if skip_identity && mask == 0 {
                continue;
            }
            let mut weight = 0usize;
            for w in 0..W {
                weight += (cx[w] | cz[w]).count_ones() as usize;
            }
            if weight < best_w || (weight == best_w && mask < best_mask) {
                best_w = weight;
                best_mask = mask;
            }
            if let Some(t) = stop_at {
                if weight <= t {
                    out.hit = Some(Candidate { weight, mask, pos: k });
                    lowest_hit.fetch_min(chunk, AtomicOrdering::Relaxed);
                    break;
                }
            }
        }
        if best_w != usize::MAX {
            out.best = Some(Candidate {
                weight: best_w,
                mask: best_mask,
                pos: 0,
            });
        }
        out
    }
}

/// Exhaustive walk over `offset · S`; returns the selected candidate and the
/// number of elements examined (in sequential Gray order).
fn walk(
    group: &StabilizerGroup,
    offset: Option<&PauliString>,
    skip_identity: bool,
    opts: SearchOptions,
) -> Result<(Option<Candidate>, u64, bool)> {
    let q = group.num_generators();
    if q > opts.max_generators || q >= 63 {
        return Err(Error::CapExceeded {
            what: "exhaustive search (generators)",
            needed: q as u128,
            cap: opts.max_generators.min(62) as u128,
        });
    }
    let words = group.num_qubits().div_ceil(64).max(1);
    match words {
        1 => Ok(walk_packed::<1>(group, offset, skip_identity, opts)),
        2 => Ok(walk_packed::<2>(group, offset, skip_identity, opts)),
        3 => Ok(walk_packed::<3>(group, offset, skip_identity, opts)),
        4 => Ok(walk_packed::<4>(group, offset, skip_identity, opts)),
        5..=8 => Ok(walk_packed::<8>(group, offset, skip_identity, opts)),
        _ => Err(Error::CapExceeded {
            what: "exhaustive search (qubits)",
            needed: group.num_qubits() as u128,
            cap: 512,
        }),
    }
}

fn walk_packed<const W: usize>(
    group: &StabilizerGroup,
    offset: Option<&PauliString>,
    skip_identity: bool,
    opts: SearchOptions,
) -> (Option<Candidate>, u64, bool) {
    let packed = Packed::<W>::new(group, offset);
    let total = 1u64 << group.num_generators();
    let lowest_hit = AtomicU64::new(u64::MAX);
    let outcomes: Vec<ChunkOutcome> = if total > PARALLEL_THRESHOLD {
        let chunks = total.div_ceil(CHUNK_SIZE);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK_SIZE;
                packed.scan(
                    start,
                    (start + CHUNK_SIZE).min(total),
                    skip_identity,
                    opts.stop_at,
                    c,
                    &lowest_hit,
                )
            })
            .collect()
    } else {
        vec![packed.scan(0, total, skip_identity, opts.stop_at, 0, &lowest_hit)]
    };
    let identity_skipped = u64::from(skip_identity);
    if opts.stop_at.is_some() {
        // The lowest chunk containing a hit always runs to its first hit, so
        // this is the first hit in sequential order regardless of scheduling.
        if let Some(hit) = outcomes.iter().find_map(|o| o.hit) {
            return (Some(hit), hit.pos + 1 - identity_skipped, false);
        }
    }
    let best = outcomes
        .iter()
        .filter_map(|o| o.best)
        .reduce(|a, b| if better(&b, &a) { b } else { a });
    (best, total - identity_skipped, true)
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| (mask >> i) & 1 == 1).collect()
}

/// Minimum support over `S \ {I}`, by exhaustive Gray-code walk.
///
/// Ties are broken by the smallest generator-coefficient vector, read as a
/// binary number with generator 0 least significant.
pub fn min_weight_bruteforce(s: &StabilizerGroup, opts: SearchOptions) -> Result<WeightReport> {
    let t0 = Instant::now();
    if s.num_generators() == 0 {
        return Err(Error::InvalidArgument(
            "group has no nonidentity elements".into(),
        ));
    }
    let (cand, scanned, exhaustive) = walk(s, None, true, opts)?;
    let cand = cand.expect("nonempty walk");
    let witness = s.element_at(cand.mask);
    debug_assert_eq!(witness.weight(), cand.weight);
    Ok(WeightReport {
        min_support: cand.weight,
        witness,
        coefficients: mask_indices(cand.mask),
        method: SearchMethod::Brute,
        elements_scanned: scanned,
        exhaustive,
        sound: true,
        wall_time_s: Some(t0.elapsed().as_secs_f64()),
    })
}

/// Minimum support over the coset `{l·σ : σ ∈ S}`, identity included, so
/// `l ∈ ±S` gives 0. `l` need not commute with `S`.
pub fn coset_min_weight(
    s: &StabilizerGroup,
    l: &PauliString,
    opts: SearchOptions,
) -> Result<WeightReport> {
    let t0 = Instant::now();
    if l.num_qubits() != s.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: s.num_qubits(),
            found: l.num_qubits(),
        });
    }
    let (cand, scanned, exhaustive) = walk(s, Some(l), false, opts)?;
    let cand = cand.expect("coset is nonempty");
    let witness = l.multiply(&s.element_at(cand.mask))?;
    debug_assert_eq!(witness.weight(), cand.weight);
    Ok(WeightReport {
        min_support: cand.weight,
        witness,
        coefficients: mask_indices(cand.mask),
        method: SearchMethod::Brute,
        elements_scanned: scanned,
        exhaustive,
        sound: true,
        wall_time_s: Some(t0.elapsed().as_secs_f64()),
    })
}

/// [`coset_min_weight`] for a logical operator: `l` must commute with every
/// generator.
pub fn centralizer_coset_min_weight(
    s: &StabilizerGroup,
    l: &PauliString,
    opts: SearchOptions,
) -> Result<WeightReport> {
    if l.num_qubits() == s.num_qubits() {
        if let Some(i) = s.generators().iter().position(|g| !g.commutes_unchecked(l)) {
            return Err(Error::NotInCentralizer(l.to_string(), i));
        }
    }
    coset_min_weight(s, l, opts)
}

/// Uniformity verdict with the search that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityVerdict {
    pub m: usize,
    pub uniform: bool,
    pub report: WeightReport,
}

/// True iff every nonidentity element has support `> m`. Stops at the first
/// element of support `≤ m`.
pub fn is_m_uniform(s: &StabilizerGroup, m: usize, opts: SearchOptions) -> Result<UniformityVerdict> {
    if !s.is_state() {
        return Err(Error::NotAState {
            q: s.num_generators(),
            n: s.num_qubits(),
        });
    }
    let report = min_weight_bruteforce(s, opts.stop_at(m))?;
    Ok(UniformityVerdict {
        m,
        uniform: report.min_support > m,
        report,
    })
}

/// Outcome of [`subset_sweep_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub m: usize,
    pub passed: bool,
    pub first_failure: Option<SubsetSpec>,
    pub subsets_checked: u64,
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Advances `c` to the next `k`-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Checks `S_A = {I}` for every `|A| = m` in lexicographic order via the GF(2)
/// kernel, independently of the min-weight walks.
pub fn subset_sweep_check(s: &StabilizerGroup, m: usize, cap: u128) -> Result<SweepResult> {
    let n = s.num_qubits();
    if m > n {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {n}")));
    }
    let total = binomial(n, m);
    if total > cap {
        return Err(Error::CapExceeded {
            what: "subset sweep (subsets)",
            needed: total,
            cap,
        });
    }
    let mut combo: Vec<usize> = (0..m).collect();
    let mut checked = 0u64;
    loop {
        checked += 1;
        let a = SubsetSpec::new(combo.clone(), n)?;
        if s.subset_dimension(&a)? > 0 {
            return Ok(SweepResult {
                m,
                passed: false,
                first_failure: Some(a),
                subsets_checked: checked,
            });
        }
        if m == 0 || !next_combination(&mut combo, n) {
            break;
        }
    }
    Ok(SweepResult {
        m,
        passed: true,
        first_failure: None,
        subsets_checked: checked,
    })
}

/// Compares index sets as coefficient vectors read as binary numbers
/// (higher generator index more significant). Both must be sorted ascending.
fn cmp_coefficients(a: &[usize], b: &[usize]) -> Ordering {
    let mut ia = a.iter().rev();
    let mut ib = b.iter().rev();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x != y => return x.cmp(y),
            _ => {}
        }
    }
}

struct Window<'a> {
    lat: &'a Lattice,
    radius: usize,
    max_size: usize,
    x: Vec<Vec<u64>>,
    z: Vec<Vec<u64>>,
    /// Generators whose supports overlap, sorted.
    adjacency: Vec<Vec<usize>>,
}

struct WindowState {
    chosen: Vec<usize>,
    blocked: Vec<u32>,
    cx: Vec<u64>,
    cz: Vec<u64>,
    best: Option<(usize, Vec<usize>)>,
    visited: u64,
}

impl Window<'_> {
    fn record(&self, st: &mut WindowState) {
        st.visited += 1;
        let w: usize = st
            .cx
            .iter()
            .zip(&st.cz)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum();
        let mut sorted = st.chosen.clone();
        sorted.sort_unstable();
        let replace = match &st.best {
            None => true,
            Some((bw, bset)) => w < *bw || (w == *bw && cmp_coefficients(&sorted, bset) == Ordering::Less),
        };
        if replace {
            st.best = Some((w, sorted));
        }
    }

    fn toggle(&self, st: &mut WindowState, g: usize, add: bool) {
        for (c, x) in st.cx.iter_mut().zip(&self.x[g]) {
            *c ^= x;
        }
        for (c, z) in st.cz.iter_mut().zip(&self.z[g]) {
            *c ^= z;
        }
        let delta: i64 = if add { 1 } else { -1 };
        st.blocked[g] = (st.blocked[g] as i64 + delta) as u32;
        for &u in &self.adjacency[g] {
            st.blocked[u] = (st.blocked[u] as i64 + delta) as u32;
        }
        if add {
            st.chosen.push(g);
        } else {
            st.chosen.pop();
        }
    }

    /// ESU enumeration: every connected window containing `anchor` as its
    /// smallest index is visited exactly once.
    fn extend(&self, st: &mut WindowState, anchor: usize, mut ext: Vec<usize>) {
        self.record(st);
        if st.chosen.len() >= self.max_size {
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next: Vec<usize> = ext
                .iter()
                .copied()
                .filter(|&u| self.lat.hamming_distance(u, w) <= self.radius)
                .collect();
            for &u in &self.adjacency[w] {
                if u > anchor
                    && st.blocked[u] == 0
                    && self.lat.hamming_distance(u, w) <= self.radius
                    && st
                        .chosen
                        .iter()
                        .all(|&c| self.lat.hamming_distance(u, c) <= self.radius)
                {
                    next.push(u);
                }
            }
            self.toggle(st, w, true);
            self.extend(st, anchor, next);
            self.toggle(st, w, false);
        }
    }
}

/// Minimum support over products of generators whose lattice centres lie
/// pairwise within `radius`, sliding the window over every vertex.
///
/// Requires one generator per vertex with X exactly on its own vertex
/// (graph form). The result is exact for cluster groups on periodic lattices
/// with every side `≥ 8` and `radius ≥ 4`; otherwise it is an upper bound and
/// `sound` is false.
pub fn min_weight_windowed(s: &StabilizerGroup, lat: &Lattice, radius: usize) -> Result<WeightReport> {
    let t0 = Instant::now();
    let n = lat.num_vertices();
    if s.num_qubits() != n || s.num_generators() != n {
        return Err(Error::NonLatticeGroup(format!(
            "expected {n} generators on {n} qubits, got {} on {}",
            s.num_generators(),
            s.num_qubits()
        )));
    }
    for (i, g) in s.generators().iter().enumerate() {
        let xs: Vec<usize> = {
            let mut out = Vec::new();
            for (w, &word) in g.x_words().iter().enumerate() {
                let mut b = word;
                while b != 0 {
                    out.push(w * 64 + b.trailing_zeros() as usize);
                    b &= b - 1;
                }
            }
            out
        };
        if xs != [i] {
            return Err(Error::NonLatticeGroup(format!(
                "generator {i} ({g}) does not have X exactly on vertex {i}"
            )));
        }
    }

    let supports: Vec<Vec<usize>> = s.generators().iter().map(|g| g.support()).collect();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (g, sup) in supports.iter().enumerate() {
        for &q in sup {
            touching[q].push(g);
        }
    }
    let adjacency: Vec<Vec<usize>> = supports
        .iter()
        .enumerate()
        .map(|(g, sup)| {
            let mut adj: Vec<usize> = sup
                .iter()
                .flat_map(|&q| touching[q].iter().copied())
                .filter(|&h| h != g)
                .collect();
            adj.sort_unstable();
            adj.dedup();
            adj
        })
        .collect();

    // Single generators set the bound: a product of k graph-form generators
    // has weight at least k, so only windows of fewer generators can improve.
    let single_best = supports.iter().map(Vec::len).min().unwrap_or(0);
    let window = Window {
        lat,
        radius,
        max_size: single_best.saturating_sub(1).max(1),
        x: s.generators().iter().map(|g| g.x_words().to_vec()).collect(),
        z: s.generators().iter().map(|g| g.z_words().to_vec()).collect(),
        adjacency,
    };
    let words = n.div_ceil(64);

    type AnchorResult = (Option<(usize, Vec<usize>)>, u64);
    let per_anchor: Vec<AnchorResult> = (0..n)
        .into_par_iter()
        .map(|anchor| {
            let mut st = WindowState {
                chosen: Vec::with_capacity(window.max_size),
                blocked: vec![0; n],
                cx: vec![0; words],
                cz: vec![0; words],
                best: None,
                visited: 0,
            };
            window.toggle(&mut st, anchor, true);
            let ext: Vec<usize> = if radius == 0 {
                Vec::new()
            } else {
                window.adjacency[anchor]
                    .iter()
                    .copied()
                    .filter(|&u| u > anchor && lat.hamming_distance(u, anchor) <= radius)
                    .collect()
            };
            window.extend(&mut st, anchor, ext);
            (st.best, st.visited)
        })
        .collect();

    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut visited = 0;
    for (b, v) in per_anchor {
        visited += v;
        if let Some((w, set)) = b {
            let replace = match &best {
                None => true,
                Some((bw, bset)) => w < *bw || (w == *bw && cmp_coefficients(&set, bset) == Ordering::Less),
            };
            if replace {
                best = Some((w, set));
            }
        }
    }
    let (min_support, coefficients) = best.ok_or_else(|| Error::NonLatticeGroup("empty lattice".into()))?;
    let witness = s.product_of(&coefficients)?;
    debug_assert_eq!(witness.weight(), min_support);

    let sound = radius >= DEFAULT_WINDOW_RADIUS
        && lat.is_periodic()
        && lat.lengths().iter().all(|&l| l >= 8)
        && s.generators() == cluster_generators(lat).as_slice();
    Ok(WeightReport {
        min_support,
        witness,
        coefficients,
        method: SearchMethod::Windowed,
        elements_scanned: visited,
        exhaustive: true,
        sound,
        wall_time_s: Some(t0.elapsed().as_secs_f64()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{extended_generators, ghz_generators, Boundary};

    fn cluster(lat: &Lattice) -> StabilizerGroup {
        StabilizerGroup::from_generators(cluster_generators(lat)).unwrap()
    }

    fn ring(n: usize) -> (Lattice, StabilizerGroup) {
        let lat = Lattice::chain(n, Boundary::Pbc).unwrap();
        let g = cluster(&lat);
        (lat, g)
    }

    /// Minimum weight by filtering the plain element iterator.
    fn oracle_min_weight(s: &StabilizerGroup) -> usize {
        s.enumerate_elements(30)
            .unwrap()
            .skip(1)
            .map(|e| e.weight())
            .min()
            .unwrap()
    }

    #[test]
    fn small_rings() {
        let (_, g3) = ring(3);
        let r = min_weight_bruteforce(&g3, SearchOptions::default()).unwrap();
        assert_eq!(r.min_support, 2);
        assert!(r.witness.support().len() == 2);
        assert!(r.witness.to_string().chars().filter(|&c| c == 'Y').count() == 2);

        let (_, g4) = ring(4);
        let r = min_weight_bruteforce(&g4, SearchOptions::default()).unwrap();
        assert_eq!(r.min_support, 2);
        assert_eq!(r.elements_scanned, 15);

        let (_, g5) = ring(5);
        let r = min_weight_bruteforce(&g5, SearchOptions::default()).unwrap();
        assert_eq!(r.min_support, 3);
        assert_eq!(r.elements_scanned, 31);
        assert!(r.exhaustive);
    }

    #[test]
    fn witness_is_reproduced_by_its_coefficients() {
        for n in [4, 5, 7, 9] {
            let (_, g) = ring(n);
            let r = min_weight_bruteforce(&g, SearchOptions::default()).unwrap();
            assert_eq!(g.product_of(&r.coefficients).unwrap(), r.witness);
            assert_eq!(r.witness.weight(), r.min_support);
            assert_eq!(r.min_support, oracle_min_weight(&g));
        }
    }

    #[test]
    fn tie_break_smallest_coefficient_vector() {
        let (_, g) = ring(6);
        let r = min_weight_bruteforce(&g, SearchOptions::default()).unwrap();
        // Weight-3 elements are single generators; generator 0 has mask 1.
        assert_eq!(r.min_support, 3);
        assert_eq!(r.coefficients, vec![0]);
    }

    #[test]
    fn parallel_chunks_match_sequential_oracle() {
        // 2^25 elements takes the chunked path.
        let lat = Lattice::hypercubic(2, 5, Boundary::Pbc).unwrap();
        let g = cluster(&lat);
        let r = min_weight_bruteforce(&g, SearchOptions::default()).unwrap();
        assert_eq!(r.min_support, 5);
        assert_eq!(r.elements_scanned, (1 << 25) - 1);
        assert_eq!(r.coefficients, vec![0]);
    }

    #[test]
    fn early_stop_is_deterministic() {
        let lat = Lattice::hypercubic(2, 5, Boundary::Pbc).unwrap();
        let g = cluster(&lat);
        let a = min_weight_bruteforce(&g, SearchOptions::default().stop_at(5)).unwrap();
        let b = min_weight_bruteforce(&g, SearchOptions::default().stop_at(5)).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a.coefficients, vec![0]);
        assert_eq!(a.elements_scanned, 1);
        assert_eq!((a.coefficients, a.elements_scanned), (b.coefficients, b.elements_scanned));
    }

    #[test]
    fn cap_is_enforced() {
        let (_, g) = ring(12);
        let opts = SearchOptions {
            max_generators: 10,
            stop_at: None,
        };
        assert!(min_weight_bruteforce(&g, opts).unwrap_err().is_resource_cap());
    }

    #[test]
    fn ghz_is_one_uniform_only() {
        for n in 3..=8 {
            let g = StabilizerGroup::from_generators(ghz_generators(n).unwrap()).unwrap();
            assert!(is_m_uniform(&g, 1, SearchOptions::default()).unwrap().uniform);
            let v = is_m_uniform(&g, 2, SearchOptions::default()).unwrap();
            assert!(!v.uniform);
            assert_eq!(v.report.witness.weight(), 2);
        }
    }

    #[test]
    fn extended_range_two() {
        for n in 10..=16 {
            let g = StabilizerGroup::from_generators(extended_generators(n, 2, Boundary::Pbc).unwrap())
                .unwrap();
            let r = min_weight_bruteforce(&g, SearchOptions::default()).unwrap();
            assert_eq!(r.min_support, 4, "n = {n}");
        }
    }

    #[test]
    fn extended_range_two_nine_ring_has_weight_three() {
        // generators at 0, 3, 6 cancel every Z when n = 9
        let g = StabilizerGroup::from_generators(extended_generators(9, 2, Boundary::Pbc).unwrap())
            .unwrap();
        let r = min_weight_bruteforce(&g, SearchOptions::default()).unwrap();
        assert_eq!(r.min_support, 3);
        assert_eq!(r.witness.to_string(), "+XIIXIIXII");
    }

    #[test]
    fn sweep_worked_example() {
        let (_, g) = ring(3);
        assert!(subset_sweep_check(&g, 1, DEFAULT_SUBSET_CAP).unwrap().passed);
        let r = subset_sweep_check(&g, 2, DEFAULT_SUBSET_CAP).unwrap();
        assert!(!r.passed);
        assert_eq!(r.first_failure.unwrap().qubits(), &[0, 1]);
        assert!(subset_sweep_check(&g, 0, DEFAULT_SUBSET_CAP).unwrap().passed);
    }

    #[test]
    fn sweep_cap() {
        let (_, g) = ring(20);
        assert!(subset_sweep_check(&g, 10, 1000).unwrap_err().is_resource_cap());
    }

    #[test]
    fn sweep_agrees_with_min_weight() {
        for n in 3..=10 {
            let (_, g) = ring(n);
            let d = min_weight_bruteforce(&g, SearchOptions::default()).unwrap().min_support;
            for m in 0..=4.min(n) {
                let sweep = subset_sweep_check(&g, m, DEFAULT_SUBSET_CAP).unwrap().passed;
                assert_eq!(sweep, d > m, "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn coset_cases() {
        let (_, g) = ring(8);
        let s0 = g.generators()[0].clone();
        let r = coset_min_weight(&g, &s0, SearchOptions::default()).unwrap();
        assert_eq!(r.min_support, 0);
        assert!(r.witness.is_identity_up_to_phase());

        let z = PauliString::z_on(8, &[3]).unwrap();
        let r = coset_min_weight(&g, &z, SearchOptions::default()).unwrap();
        assert_eq!(r.min_support, 1);
    }

    #[test]
    fn centralizer_coset_rejects_anticommuting_operator() {
        let (_, g) = ring(5);
        let y = PauliString::single(5, 0, crate::pauli::Pauli::Y).unwrap();
        assert!(matches!(
            centralizer_coset_min_weight(&g, &y, SearchOptions::default()),
            Err(Error::NotInCentralizer(..))
        ));
        assert_eq!(coset_min_weight(&g, &y, SearchOptions::default()).unwrap().min_support, 1);
    }

    #[test]
    fn contiguous_z_string_on_twenty_ring() {
        let (_, g) = ring(20);
        let za = PauliString::z_on(20, &[3, 4, 5, 6, 7, 8, 9]).unwrap();
        let r = coset_min_weight(&g, &za, SearchOptions::default()).unwrap();
        assert!(r.min_support >= 3);
        assert_eq!(r.elements_scanned, 1 << 20);
        let expect = za.multiply(&g.product_of(&r.coefficients).unwrap()).unwrap();
        assert_eq!(expect, r.witness);
    }

    #[test]
    fn windowed_radius_zero_is_single_generators() {
        let lat = Lattice::hypercubic(2, 5, Boundary::Pbc).unwrap();
        let g = cluster(&lat);
        let r = min_weight_windowed(&g, &lat, 0).unwrap();
        assert_eq!(r.min_support, 5);
        assert_eq!(r.elements_scanned, 25);
    }

    #[test]
    fn windowed_matches_brute_on_rings() {
        for n in 3..=16 {
            let (lat, g) = ring(n);
            let b = min_weight_bruteforce(&g, SearchOptions::default()).unwrap();
            let w = min_weight_windowed(&g, &lat, DEFAULT_WINDOW_RADIUS).unwrap();
            assert_eq!(b.min_support, w.min_support, "n = {n}");
            assert_eq!(g.product_of(&w.coefficients).unwrap(), w.witness);
        }
    }

    #[test]
    fn windowed_soundness_flag() {
        let lat = Lattice::chain(8, Boundary::Pbc).unwrap();
        let g = cluster(&lat);
        assert!(min_weight_windowed(&g, &lat, 4).unwrap().sound);
        assert!(!min_weight_windowed(&g, &lat, 3).unwrap().sound);
        let small = Lattice::chain(7, Boundary::Pbc).unwrap();
        assert!(!min_weight_windowed(&cluster(&small), &small, 4).unwrap().sound);
    }

    #[test]
    fn windowed_rejects_non_graph_form() {
        let lat = Lattice::chain(3, Boundary::Pbc).unwrap();
        let g = StabilizerGroup::from_generators(ghz_generators(3).unwrap()).unwrap();
        assert!(matches!(
            min_weight_windowed(&g, &lat, 4),
            Err(Error::NonLatticeGroup(_))
        ));
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all.len(), binomial(4, 2) as usize);
        assert_eq!(all[1], vec![0, 2]);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
    }

    #[test]
    fn coefficient_order() {
        assert_eq!(cmp_coefficients(&[0, 5], &[1, 5]), Ordering::Less);
        assert_eq!(cmp_coefficients(&[5], &[0, 5]), Ordering::Less);
        assert_eq!(cmp_coefficients(&[0, 1, 2], &[3]), Ordering::Less);
    }
}
