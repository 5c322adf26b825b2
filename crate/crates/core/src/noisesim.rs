//! Delay-based error benchmarking on a 1D cluster state.
//!
//! The protocol prepares the cluster state with `U` (H layer, then CZs),
//! waits for a delay `t` under T1/T2 noise, applies `U†` and measures every
//! qubit in the Z basis. Bit `i` of the outcome is the eigenvalue of
//! generator `i`, so a single error on the probe qubit shows up as a fixed
//! pattern. The XZX variant adds an H layer before and after the delay.
//!
//! Two engines are provided: an exact density-matrix simulation (n ≤ 7) and
//! a seeded Pauli-frame sampler. Times are in microseconds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cluster_generators, graph_state_circuit, Boundary, Circuit, Gate, Lattice};
use crate::pauli::{Pauli, PauliString};
use crate::statevector::{check_size, run_circuit, zero_state};
use crate::syndrome::{syndrome_of, Syndrome};

/// Largest register for the density-matrix engine.
pub const EXACT_MAX_QUBITS: usize = 7;
/// Largest register for the Pauli-frame sampler.
pub const SAMPLER_MAX_QUBITS: usize = 64;

/// Which stabilizers the delayed state carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// The cluster state itself, generators `Z X Z`.
    Zxz,
    /// Hadamard-conjugated cluster state, generators `X Z X`.
    Xzx,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zxz" => Ok(Variant::Zxz),
            "xzx" => Ok(Variant::Xzx),
            _ => Err(Error::InvalidArgument(format!("unknown variant {s:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Zxz => "zxz",
            Variant::Xzx => "xzx",
        })
    }
}

/// How the delay channel is applied in the exact engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    /// Amplitude damping followed by pure dephasing.
    #[default]
    Physical,
    /// Pauli twirl of the physical channel (what the sampler uses).
    Twirled,
}

/// Noise parameters of the benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    pub readout_p: f64,
    pub delay_grid: Vec<f64>,
    pub variant: Variant,
    #[serde(default)]
    pub channel: ChannelModel,
    /// Qubits exposed to the delay channel; `None` means all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noisy_qubits: Option<Vec<usize>>,
}

impl NoiseModel {
    pub fn new(t1: f64, t2: f64, readout_p: f64, delay_grid: Vec<f64>, variant: Variant) -> Result<Self> {
        let m = NoiseModel {
            t1,
            t2,
            readout_p,
            delay_grid,
            variant,
            channel: ChannelModel::Physical,
            noisy_qubits: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_channel(mut self, channel: ChannelModel) -> Self {
        self.channel = channel;
        self
    }

    pub fn with_noisy_qubits(mut self, qubits: Vec<usize>) -> Self {
        self.noisy_qubits = Some(qubits);
        self
    }

    /// Checks T2 ≤ 2·T1, readout range and the delay grid. Infinite times
    /// mean no decay.
    pub fn validate(&self) -> Result<()> {
        if self.t1.is_nan() || self.t2.is_nan() || self.t1 <= 0.0 || self.t2 <= 0.0 {
            return Err(Error::InvalidNoise("T1 and T2 must be positive".into()));
        }
        if self.t2 > 2.0 * self.t1 * (1.0 + 1e-12) {
            return Err(Error::InvalidNoise(format!(
                "T2 = {} exceeds 2·T1 = {}",
                self.t2,
                2.0 * self.t1
            )));
        }
        if !(0.0..1.0).contains(&self.readout_p) {
            return Err(Error::InvalidNoise(format!(
                "readout_p = {} outside [0, 1)",
                self.readout_p
            )));
        }
        if self.delay_grid.is_empty() {
            return Err(Error::InvalidNoise("empty delay grid".into()));
        }
        if self.delay_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidNoise("delays must be finite and nonnegative".into()));
        }
        if self.delay_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidNoise("delay grid must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Amplitude-damping parameter `1 − e^{−t/T1}`.
    pub fn gamma(&self, t: f64) -> f64 {
        -(-t / self.t1).exp_m1()
    }

    /// Phase-flip probability of the pure-dephasing part,
    /// `(1 − e^{−t/Tφ})/2` with `1/Tφ = 1/T2 − 1/(2T1)`.
    pub fn dephasing_flip(&self, t: f64) -> f64 {
        let rate = (1.0 / self.t2 - 0.5 / self.t1).max(0.0);
        -(-t * rate).exp_m1() / 2.0
    }

    /// Twirled single-qubit error probabilities `[p_x, p_y, p_z]`.
    pub fn twirl_probabilities(&self, t: f64) -> Result<[f64; 3]> {
        let relax = -(-t / self.t1).exp_m1();
        let dephase = -(-t / self.t2).exp_m1();
        let pxy = relax / 4.0;
        let pz = dephase / 2.0 - relax / 4.0;
        if pz < -1e-15 {
            return Err(Error::InvalidNoise(format!(
                "negative twirled Z probability {pz} at t = {t}"
            )));
        }
        Ok([pxy, pxy, pz.max(0.0)])
    }

    fn is_noisy(&self, q: usize) -> bool {
        self.noisy_qubits.as_ref().is_none_or(|v| v.contains(&q))
    }
}

/// Parses `start:stop:step` (inclusive stop) or a comma-separated list.
pub fn parse_delay_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("bad delay grid {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let (start, stop, step) = (v[0], v[1], v[2]);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|k| start + k as f64 * step).collect());
    }
    if parts.len() != 1 {
        return Err(bad());
    }
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

/// Chain, boundary and probe qubit of the benchmark.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchLayout {
    pub n: usize,
    pub boundary: Boundary,
    pub probe: usize,
}

impl BenchLayout {
    /// Rejects an end-of-chain probe on open chains unless `allow_edge`.
    pub fn new(n: usize, boundary: Boundary, probe: usize, allow_edge: bool) -> Result<Self> {
        Lattice::chain(n, boundary)?;
        if probe >= n {
            return Err(Error::QubitOutOfRange { index: probe, n });
        }
        if boundary == Boundary::Obc && (probe == 0 || probe == n - 1) && !allow_edge {
            return Err(Error::InvalidArgument(format!(
                "probe qubit {} is on the boundary of an open chain (use allow-edge)",
                probe + 1
            )));
        }
        Ok(BenchLayout { n, boundary, probe })
    }

    /// Five-qubit open chain probed in the middle.
    pub fn default_five() -> Self {
        BenchLayout {
            n: 5,
            boundary: Boundary::Obc,
            probe: 2,
        }
    }

    fn lattice(&self) -> Lattice {
        Lattice::chain(self.n, self.boundary).expect("validated layout")
    }

    /// Generators of the delayed state, in qubit order.
    pub fn generators(&self, variant: Variant) -> Vec<PauliString> {
        let gens = cluster_generators(&self.lattice());
        match variant {
            Variant::Zxz => gens,
            Variant::Xzx => gens.iter().map(hadamard_conjugate).collect(),
        }
    }

    /// Preparation before the delay and the decoding after it.
    pub fn circuits(&self, variant: Variant) -> (Circuit, Circuit) {
        let u = graph_state_circuit(&self.lattice().graph());
        let mut prep = u.clone();
        let mut post = Circuit::new(self.n);
        if variant == Variant::Xzx {
            prep.h_layer();
            post.h_layer();
        }
        for g in u.inverse().expect("unitary circuit").gates() {
            post.push(*g).expect("same width");
        }
        (prep, post)
    }

    /// Outcome patterns of `X`, `Y`, `Z` on the probe.
    pub fn patterns(&self, variant: Variant) -> [Syndrome; 3] {
        let gens = self.generators(variant);
        [Pauli::X, Pauli::Y, Pauli::Z].map(|p| {
            syndrome_of(&gens, &PauliString::single(self.n, self.probe, p).expect("probe in range"))
        })
    }
}

fn hadamard_conjugate(p: &PauliString) -> PauliString {
    let mut out = PauliString::identity(p.num_qubits());
    for q in p.support() {
        let swapped = match p.get(q) {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
            other => other,
        };
        out.set(q, swapped).expect("same width");
    }
    out.with_phase(p.phase())
}

/// Error probabilities read off one delay point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternRates {
    pub t: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
    /// Any nonzero outcome other than the three probe patterns.
    pub p_other: f64,
    pub se_x: f64,
    pub se_y: f64,
    pub se_z: f64,
    pub se_other: f64,
}

impl PatternRates {
    fn from_distribution(t: f64, probs: impl Fn(&Syndrome) -> f64, total_nonzero: f64, pats: &[Syndrome; 3]) -> Self {
        let [p_x, p_y, p_z] = [probs(&pats[0]), probs(&pats[1]), probs(&pats[2])];
        PatternRates {
            t,
            p_x,
            p_y,
            p_z,
            p_other: (total_nonzero - p_x - p_y - p_z).max(0.0),
            se_x: 0.0,
            se_y: 0.0,
            se_z: 0.0,
            se_other: 0.0,
        }
    }
}

/// Exact outcome distributions, one per delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRun {
    pub layout: BenchLayout,
    pub noise: NoiseModel,
    /// `probabilities[k][b]`: outcome `b` (bit `i` = qubit `i`) at delay `k`.
    pub probabilities: Vec<Vec<f64>>,
    pub rates: Vec<PatternRates>,
}

impl ExactRun {
    pub fn probability(&self, k: usize, s: &Syndrome) -> f64 {
        self.probabilities[k][syndrome_to_index(s)]
    }
}

fn syndrome_to_index(s: &Syndrome) -> usize {
    s.ones().into_iter().fold(0, |acc, i| acc | (1 << i))
}

/// Row-major complex density matrix on `n` qubits.
struct Density {
    dim: usize,
    data: Vec<Complex64>,
}

impl Density {
    fn pure(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(psi[r] * psi[c].conj());
            }
        }
        Density { dim, data }
    }

    /// `M ρ M'†` restricted to qubit `q`.
    fn sandwich(&self, q: usize, m: &Matrix2<Complex64>, mp: &Matrix2<Complex64>) -> Vec<Complex64> {
        let d = self.dim;
        let bit = 1 << q;
        let mut left = vec![Complex64::new(0.0, 0.0); d * d];
        for r0 in (0..d).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c in 0..d {
                let (a0, a1) = (self.data[r0 * d + c], self.data[r1 * d + c]);
                left[r0 * d + c] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
                left[r1 * d + c] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c0 in (0..d).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let (a0, a1) = (left[r * d + c0], left[r * d + c1]);
                out[r * d + c0] = a0 * mp[(0, 0)].conj() + a1 * mp[(0, 1)].conj();
                out[r * d + c1] = a0 * mp[(1, 0)].conj() + a1 * mp[(1, 1)].conj();
            }
        }
        out
    }

    fn apply_kraus(&mut self, q: usize, kraus: &[(f64, Matrix2<Complex64>)]) {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.data.len()];
        for (w, k) in kraus {
            if *w == 0.0 {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(self.sandwich(q, k, k)) {
                *a += b * *w;
            }
        }
        self.data = acc;
    }

    fn apply_gate(&mut self, g: Gate) {
        let d = self.dim;
        match g {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let h = Matrix2::new(s, s, s, -s).map(|x| Complex64::new(x, 0.0));
                self.data = self.sandwich(q, &h, &h);
            }
            Gate::Cz(a, b) => {
                let m = (1 << a) | (1 << b);
                for r in 0..d {
                    for c in 0..d {
                        if ((r & m == m) as u8 ^ (c & m == m) as u8) == 1 {
                            self.data[r * d + c] = -self.data[r * d + c];
                        }
                    }
                }
            }
            Gate::MeasureXPostselect(_) => unreachable!("benchmark circuits are unitary"),
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).collect()
    }
}

fn pauli_matrix(p: Pauli) -> Matrix2<Complex64> {
    let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    match p {
        Pauli::I => Matrix2::new(o, z, z, o),
        Pauli::X => Matrix2::new(z, o, o, z),
        Pauli::Y => Matrix2::new(z, -i, i, z),
        Pauli::Z => Matrix2::new(o, z, z, -o),
    }
}

/// Weighted Kraus operators `(weight, matrix)` acting on one qubit.
type QubitKraus = Vec<(f64, Matrix2<Complex64>)>;

/// Kraus operators of the delay channel, one list per qubit.
fn delay_kraus(noise: &NoiseModel, t: f64) -> Result<Vec<QubitKraus>> {
    let c = |x: f64| Complex64::new(x, 0.0);
    Ok(match noise.channel {
        ChannelModel::Physical => {
            let g = noise.gamma(t);
            let damping = vec![
                (1.0, Matrix2::new(c(1.0), c(0.0), c(0.0), c((1.0 - g).sqrt()))),
                (1.0, Matrix2::new(c(0.0), c(g.sqrt()), c(0.0), c(0.0))),
            ];
            let lam = noise.dephasing_flip(t);
            let dephasing = vec![(1.0 - lam, pauli_matrix(Pauli::I)), (lam, pauli_matrix(Pauli::Z))];
            vec![damping, dephasing]
        }
        ChannelModel::Twirled => {
            let [px, py, pz] = noise.twirl_probabilities(t)?;
            vec![vec![
                (1.0 - px - py - pz, pauli_matrix(Pauli::I)),
                (px, pauli_matrix(Pauli::X)),
                (py, pauli_matrix(Pauli::Y)),
                (pz, pauli_matrix(Pauli::Z)),
            ]]
        }
    })
}

/// Independent bit flips with probability `p` on every outcome bit.
fn apply_readout(probs: &mut [f64], n: usize, p: f64) {
    if p == 0.0 {
        return;
    }
    for q in 0..n {
        let bit = 1 << q;
        for b in (0..probs.len()).filter(|b| b & bit == 0) {
            let (a0, a1) = (probs[b], probs[b | bit]);
            probs[b] = (1.0 - p) * a0 + p * a1;
            probs[b | bit] = p * a0 + (1.0 - p) * a1;
        }
    }
}

/// Exact outcome probabilities at every delay of `noise.delay_grid`.
pub fn run_exact(layout: &BenchLayout, noise: &NoiseModel) -> Result<ExactRun> {
    noise.validate()?;
    check_size(layout.n, EXACT_MAX_QUBITS)?;
    let (prep, post) = layout.circuits(noise.variant);
    let mut psi = zero_state(layout.n);
    run_circuit(&prep, &mut psi)?;
    let pats = layout.patterns(noise.variant);
    let probabilities: Vec<Vec<f64>> = noise
        .delay_grid
        .par_iter()
        .map(|&t| {
            let mut rho = Density::pure(&psi);
            let kraus = delay_kraus(noise, t)?;
            for q in (0..layout.n).filter(|&q| noise.is_noisy(q)) {
                for stage in &kraus {
                    rho.apply_kraus(q, stage);
                }
            }
            for g in post.gates() {
                rho.apply_gate(*g);
            }
            let mut probs: Vec<f64> = rho.diagonal().into_iter().map(|p| p.max(0.0)).collect();
            apply_readout(&mut probs, layout.n, noise.readout_p);
            Ok(probs)
        })
        .collect::<Result<_>>()?;
    let rates = noise
        .delay_grid
        .iter()
        .zip(&probabilities)
        .map(|(&t, probs)| {
            PatternRates::from_distribution(t, |s| probs[syndrome_to_index(s)], 1.0 - probs[0], &pats)
        })
        .collect();
    Ok(ExactRun {
        layout: layout.clone(),
        noise: noise.clone(),
        probabilities,
        rates,
    })
}

/// Measured outcome counts of a sampled run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeCounts {
    pub layout: BenchLayout,
    pub noise: NoiseModel,
    pub shots: u64,
    pub seed: u64,
    /// One map per delay, outcome → count.
    pub counts: Vec<BTreeMap<Syndrome, u64>>,
}

impl SyndromeCounts {
    pub fn count(&self, k: usize, s: &Syndrome) -> u64 {
        self.counts[k].get(s).copied().unwrap_or(0)
    }

    /// Pattern frequencies with binomial standard errors.
    pub fn rates(&self) -> Vec<PatternRates> {
        let pats = self.layout.patterns(self.noise.variant);
        let zero = Syndrome::zeros(self.layout.n);
        let shots = self.shots as f64;
        self.noise
            .delay_grid
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let f = |s: &Syndrome| self.count(k, s) as f64 / shots;
                let mut r = PatternRates::from_distribution(t, f, 1.0 - f(&zero), &pats);
                let se = |p: f64| (p * (1.0 - p) / shots).sqrt();
                r.se_x = se(r.p_x);
                r.se_y = se(r.p_y);
                r.se_z = se(r.p_z);
                r.se_other = se(r.p_other);
                r
            })
            .collect()
    }
}

/// Outcome flip mask of each single-qubit Pauli, found by pushing the
/// error through the decoding circuit as a Pauli frame.
fn frame_masks(post: &Circuit) -> Vec<[u64; 3]> {
    let n = post.width();
    (0..n)
        .map(|q| {
            [(true, false), (true, true), (false, true)].map(|(x0, z0)| {
                let (mut x, mut z) = (0u64, 0u64);
                if x0 {
                    x |= 1 << q;
                }
                if z0 {
                    z |= 1 << q;
                }
                for g in post.gates() {
                    match *g {
                        Gate::H(a) => {
                            let (xa, za) = ((x >> a) & 1, (z >> a) & 1);
                            x = (x & !(1 << a)) | (za << a);
                            z = (z & !(1 << a)) | (xa << a);
                        }
                        Gate::Cz(a, b) => {
                            z ^= ((x >> a) & 1) << b;
                            z ^= ((x >> b) & 1) << a;
                        }
                        Gate::MeasureXPostselect(_) => unreachable!("benchmark circuits are unitary"),
                    }
                }
                x
            })
        })
        .collect()
}

/// Pauli-frame sampling of the twirled delay channel. Delay `k` draws from
/// ChaCha8 seeded with `seed` on stream `k`, so results do not depend on
/// thread count.
pub fn run_sampled(layout: &BenchLayout, noise: &NoiseModel, shots: u64, seed: u64) -> Result<SyndromeCounts> {
    noise.validate()?;
    check_size(layout.n, SAMPLER_MAX_QUBITS)?;
    let (_, post) = layout.circuits(noise.variant);
    let masks = frame_masks(&post);
    let noisy: Vec<usize> = (0..layout.n).filter(|&q| noise.is_noisy(q)).collect();
    let n = layout.n;
    let counts = noise
        .delay_grid
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let [px, py, pz] = noise.twirl_probabilities(t)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
            for _ in 0..shots {
                let mut out = 0u64;
                for &q in &noisy {
                    let u: f64 = rng.random();
                    if u < px {
                        out ^= masks[q][0];
                    } else if u < px + py {
                        out ^= masks[q][1];
                    } else if u < px + py + pz {
                        out ^= masks[q][2];
                    }
                }
                if noise.readout_p > 0.0 {
                    for q in 0..n {
                        if rng.random::<f64>() < noise.readout_p {
                            out ^= 1 << q;
                        }
                    }
                }
                *tally.entry(out).or_default() += 1;
            }
            Ok(tally
                .into_iter()
                .map(|(b, c)| (Syndrome::from_index(b, n), c))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(SyndromeCounts {
        layout: layout.clone(),
        noise: noise.clone(),
        shots,
        seed,
        counts,
    })
}

/// Mean over independent realizations. Standard errors are the spread
/// between realizations over √R, floored at the pooled binomial error.
pub fn aggregate_realizations(runs: &[Vec<PatternRates>], shots_per_run: u64) -> Result<Vec<PatternRates>> {
    let first = runs
        .first()
        .ok_or_else(|| Error::InvalidArgument("no realizations to aggregate".into()))?;
    if runs.iter().any(|r| r.len() != first.len()) {
        return Err(Error::InvalidArgument("realizations have different delay grids".into()));
    }
    let r = runs.len() as f64;
    let pooled = r * shots_per_run as f64;
    Ok((0..first.len())
        .map(|k| {
            let stat = |get: fn(&PatternRates) -> f64| {
                let vals: Vec<f64> = runs.iter().map(|run| get(&run[k])).collect();
                let mean = vals.iter().sum::<f64>() / r;
                let spread = if runs.len() > 1 {
                    (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0) / r).sqrt()
                } else {
                    0.0
                };
                let binom = (mean * (1.0 - mean) / pooled).sqrt();
                (mean, spread.max(binom))
            };
            let (p_x, se_x) = stat(|p| p.p_x);
            let (p_y, se_y) = stat(|p| p.p_y);
            let (p_z, se_z) = stat(|p| p.p_z);
            let (p_other, se_other) = stat(|p| p.p_other);
            PatternRates {
                t: first[k].t,
                p_x,
                p_y,
                p_z,
                p_other,
                se_x,
                se_y,
                se_z,
                se_other,
            }
        })
        .collect())
}

/// Straight-line fit `p(t) = intercept + slope·t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
}

/// Slopes and intercepts of the probe-qubit error rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub x: LineFit,
    pub y: LineFit,
    pub z: LineFit,
    /// Fit of `p_X + p_Y`.
    pub xy: LineFit,
    /// `1 / slope(p_X + p_Y)`.
    pub t1_est: f64,
    /// `1 / slope(p_Z)`.
    pub t2_est: f64,
}

/// Weighted least squares. With all `se` zero the fit is unweighted and
/// standard errors come from the residuals.
pub fn fit_line(t: &[f64], p: &[f64], se: &[f64]) -> Result<LineFit> {
    if t.len() < 3 || t.len() != p.len() || t.len() != se.len() {
        return Err(Error::SingularFit(format!(
            "need at least 3 matching points, got {}",
            t.len()
        )));
    }
    let weighted = se.iter().all(|s| *s > 0.0);
    let w: Vec<f64> = if weighted {
        se.iter().map(|s| 1.0 / (s * s)).collect()
    } else {
        vec![1.0; t.len()]
    };
    let sw: f64 = w.iter().sum();
    let st: f64 = w.iter().zip(t).map(|(w, t)| w * t).sum();
    let stt: f64 = w.iter().zip(t).map(|(w, t)| w * t * t).sum();
    let sp: f64 = w.iter().zip(p).map(|(w, p)| w * p).sum();
    let stp: f64 = w.iter().zip(t).zip(p).map(|((w, t), p)| w * t * p).sum();
    let det = sw * stt - st * st;
    let tmean = st / sw;
    if det <= 1e-12 * sw * stt.max(tmean * tmean * sw).max(f64::MIN_POSITIVE) {
        return Err(Error::SingularFit("all delays are equal".into()));
    }
    let slope = (sw * stp - st * sp) / det;
    let intercept = (stt * sp - st * stp) / det;
    let scale = if weighted {
        1.0
    } else {
        let rss: f64 = t
            .iter()
            .zip(p)
            .map(|(t, p)| (p - intercept - slope * t).powi(2))
            .sum();
        rss / (t.len() - 2) as f64
    };
    Ok(LineFit {
        slope,
        intercept,
        slope_se: (scale * sw / det).sqrt(),
        intercept_se: (scale * stt / det).sqrt(),
    })
}

pub fn fit_error_rates(points: &[PatternRates]) -> Result<RateFit> {
    let t: Vec<f64> = points.iter().map(|p| p.t).collect();
    let col = |f: fn(&PatternRates) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    let x = fit_line(&t, &col(|p| p.p_x), &col(|p| p.se_x))?;
    let y = fit_line(&t, &col(|p| p.p_y), &col(|p| p.se_y))?;
    let z = fit_line(&t, &col(|p| p.p_z), &col(|p| p.se_z))?;
    let xy = fit_line(
        &t,
        &col(|p| p.p_x + p.p_y),
        &col(|p| (p.se_x * p.se_x + p.se_y * p.se_y).sqrt()),
    )?;
    Ok(RateFit {
        t1_est: 1.0 / xy.slope,
        t2_est: 1.0 / z.slope,
        x,
        y,
        z,
        xy,
    })
}

/// Time derivatives at `t = 0` of the exact `p_X`, `p_Y`, `p_Z`, from a
/// quadratic through three tiny delays with readout errors switched off.
pub fn initial_slopes(layout: &BenchLayout, noise: &NoiseModel) -> Result<[f64; 3]> {
    let h = 1e-3 * noise.t1.min(noise.t2);
    let mut probe = noise.clone();
    probe.readout_p = 0.0;
    probe.delay_grid = vec![0.0, h, 2.0 * h];
    let run = run_exact(layout, &probe)?;
    let d = |f: fn(&PatternRates) -> f64| {
        let (a, b, c) = (f(&run.rates[0]), f(&run.rates[1]), f(&run.rates[2]));
        (-3.0 * a + 4.0 * b - c) / (2.0 * h)
    };
    Ok([d(|p| p.p_x), d(|p| p.p_y), d(|p| p.p_z)])
}

/// Twirl weights `Σ_k |tr(E† K_k)/2|²` of a single-qubit Kraus set, in
/// `[I, X, Y, Z]` order. Test oracle for the exact engine.
pub fn kraus_twirl(kraus: &[Matrix2<Complex64>]) -> [f64; 4] {
    [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z].map(|p| {
        let e = pauli_matrix(p);
        kraus
            .iter()
            .map(|k| ((e.adjoint() * k).trace() / 2.0).norm_sqr())
            .sum()
    })
}
