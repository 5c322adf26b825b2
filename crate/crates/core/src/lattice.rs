//! Lattices, graphs, and the stabilizer generators and preparation circuits
//! of cluster, extended-cluster and general graph states.
//!
//! Vertices are linearized with the first axis varying fastest:
//! `index = i_0 + L_0·(i_1 + L_1·(i_2 + …))`. Generator lists are emitted in
//! this order, which fixes syndrome bit order downstream.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Pbc,
    Obc,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pbc" | "periodic" => Ok(Boundary::Pbc),
            "obc" | "open" => Ok(Boundary::Obc),
            _ => Err(Error::InvalidLattice(format!("unknown boundary {s:?}"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Pbc => "pbc",
            Boundary::Obc => "obc",
        })
    }
}

/// Per-axis boundaries as accepted in lattice JSON: one value for every axis,
/// or a list with one entry per axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    Uniform(Boundary),
    PerAxis(Vec<Boundary>),
}

/// Serialized lattice description, e.g. `{"D":2,"lengths":[5,5],"boundary":"pbc"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    #[serde(rename = "D")]
    pub dim: usize,
    pub lengths: Vec<usize>,
    #[serde(default = "default_boundary_spec")]
    pub boundary: BoundarySpec,
}

fn default_boundary_spec() -> BoundarySpec {
    BoundarySpec::Uniform(Boundary::Pbc)
}

/// D-dimensional hypercubic grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    lengths: Vec<usize>,
    boundary: Vec<Boundary>,
    strides: Vec<usize>,
    n: usize,
}

impl Lattice {
    pub fn new(lengths: Vec<usize>, boundary: Vec<Boundary>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidLattice("dimension must be at least 1".into()));
        }
        if boundary.len() != lengths.len() {
            return Err(Error::InvalidLattice(format!(
                "{} boundary entries for {} axes",
                boundary.len(),
                lengths.len()
            )));
        }
        for (axis, (&l, &b)) in lengths.iter().zip(&boundary).enumerate() {
            if l == 0 {
                return Err(Error::InvalidLattice(format!("axis {axis} has length 0")));
            }
            // L = 1, 2 would make v+e and v-e coincide with v or each other.
            if b == Boundary::Pbc && l < 3 {
                return Err(Error::InvalidLattice(format!(
                    "periodic axis {axis} needs length >= 3, got {l}"
                )));
            }
        }
        let mut strides = Vec::with_capacity(lengths.len());
        let mut acc = 1usize;
        for &l in &lengths {
            strides.push(acc);
            acc = acc
                .checked_mul(l)
                .ok_or_else(|| Error::InvalidLattice("vertex count overflows".into()))?;
        }
        Ok(Lattice {
            lengths,
            boundary,
            strides,
            n: acc,
        })
    }

    /// `dim` axes of length `len`, all with boundary `b`.
    pub fn hypercubic(dim: usize, len: usize, b: Boundary) -> Result<Self> {
        Lattice::new(vec![len; dim], vec![b; dim])
    }

    pub fn chain(n: usize, b: Boundary) -> Result<Self> {
        Lattice::new(vec![n], vec![b])
    }

    pub fn from_spec(spec: &LatticeSpec) -> Result<Self> {
        if spec.dim != spec.lengths.len() {
            return Err(Error::InvalidLattice(format!(
                "D = {} but {} lengths given",
                spec.dim,
                spec.lengths.len()
            )));
        }
        let boundary = match &spec.boundary {
            BoundarySpec::Uniform(b) => vec![*b; spec.dim],
            BoundarySpec::PerAxis(v) => v.clone(),
        };
        Lattice::new(spec.lengths.clone(), boundary)
    }

    pub fn to_spec(&self) -> LatticeSpec {
        let first = self.boundary[0];
        let boundary = if self.boundary.iter().all(|&b| b == first) {
            BoundarySpec::Uniform(first)
        } else {
            BoundarySpec::PerAxis(self.boundary.clone())
        };
        LatticeSpec {
            dim: self.dim(),
            lengths: self.lengths.clone(),
            boundary,
        }
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundary
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary.iter().all(|&b| b == Boundary::Pbc)
    }

    pub fn coords(&self, index: usize) -> Vec<usize> {
        self.lengths
            .iter()
            .zip(&self.strides)
            .map(|(&l, &s)| (index / s) % l)
            .collect()
    }

    pub fn index(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.dim() {
            return Err(Error::InvalidLattice(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        let mut idx = 0;
        for (axis, &c) in coords.iter().enumerate() {
            if c >= self.lengths[axis] {
                return Err(Error::InvalidLattice(format!(
                    "coordinate {c} out of range on axis {axis}"
                )));
            }
            idx += c * self.strides[axis];
        }
        Ok(idx)
    }

    /// Vertex reached from `index` by `step` (±1, ±2, …) along `axis`, if any.
    pub fn shift(&self, index: usize, axis: usize, step: isize) -> Option<usize> {
        let l = self.lengths[axis] as isize;
        let c = ((index / self.strides[axis]) % self.lengths[axis]) as isize;
        let target = c + step;
        let wrapped = match self.boundary[axis] {
            Boundary::Pbc => target.rem_euclid(l),
            Boundary::Obc if (0..l).contains(&target) => target,
            Boundary::Obc => return None,
        };
        Some((index as isize + (wrapped - c) * self.strides[axis] as isize) as usize)
    }

    /// The up-to-2D nearest neighbors of `index`, axis by axis (`-e` then `+e`).
    pub fn neighbors(&self, index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for axis in 0..self.dim() {
            for step in [-1, 1] {
                if let Some(w) = self.shift(index, axis, step) {
                    if w != index && !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
        }
        out
    }

    /// Shortest edge-path length between two vertices.
    pub fn hamming_distance(&self, v: usize, w: usize) -> usize {
        let mut d = 0;
        for axis in 0..self.dim() {
            let l = self.lengths[axis];
            let a = (v / self.strides[axis]) % l;
            let b = (w / self.strides[axis]) % l;
            let diff = a.abs_diff(b);
            d += match self.boundary[axis] {
                Boundary::Pbc => diff.min(l - diff),
                Boundary::Obc => diff,
            };
        }
        d
    }

    /// Nearest-neighbor graph of the lattice.
    pub fn graph(&self) -> Graph {
        let mut edges = BTreeSet::new();
        for v in 0..self.n {
            for w in self.neighbors(v) {
                edges.insert((v.min(w), v.max(w)));
            }
        }
        Graph {
            n: self.n,
            edges: edges.into_iter().collect(),
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        let bcs: Vec<String> = self.boundary.iter().map(|b| b.to_string()).collect();
        write!(f, "{} [{}]", dims.join("x"), bcs.join(","))
    }
}

/// Cluster-state generators `X_v ∏ Z_w` over the lattice neighbors `w` of `v`,
/// one per vertex in linear order. Open boundaries drop absent neighbors.
pub fn cluster_generators(lat: &Lattice) -> Vec<PauliString> {
    lat.graph().stabilizer_generators()
}

/// 1D generators `Z_{i-p}…Z_{i-1} X_i Z_{i+1}…Z_{i+p}`.
pub fn extended_generators(n: usize, range: usize, boundary: Boundary) -> Result<Vec<PauliString>> {
    extended_graph(n, range, boundary).map(|g| g.stabilizer_generators())
}

/// Graph whose state has the range-`p` extended cluster generators.
pub fn extended_graph(n: usize, range: usize, boundary: Boundary) -> Result<Graph> {
    if range == 0 {
        return Err(Error::InvalidArgument("range must be at least 1".into()));
    }
    if boundary == Boundary::Pbc && n <= 2 * range {
        return Err(Error::InvalidLattice(format!(
            "periodic chain with range {range} needs more than {} sites, got {n}",
            2 * range
        )));
    }
    if n == 0 {
        return Err(Error::InvalidLattice("empty chain".into()));
    }
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for d in 1..=range {
            let j = match boundary {
                Boundary::Pbc => (i + d) % n,
                Boundary::Obc if i + d < n => i + d,
                Boundary::Obc => continue,
            };
            edges.insert((i.min(j), i.max(j)));
        }
    }
    Graph::new(n, edges.into_iter().collect())
}

/// Generators of the n-qubit GHZ state: `X…X` and `Z_i Z_{i+1}`.
pub fn ghz_generators(n: usize) -> Result<Vec<PauliString>> {
    if n < 2 {
        return Err(Error::InvalidArgument("GHZ needs at least 2 qubits".into()));
    }
    let mut gens = Vec::with_capacity(n);
    let mut all_x = PauliString::identity(n);
    for q in 0..n {
        all_x.set(q, Pauli::X)?;
    }
    gens.push(all_x);
    for q in 0..n - 1 {
        gens.push(PauliString::z_on(n, &[q, q + 1])?);
    }
    Ok(gens)
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are normalized to `(min, max)` and sorted. Self-loops, duplicate
    /// edges and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
        })
    }

    /// Parses an edge list: one `u v` pair per line; blank lines and `#`
    /// comments are skipped. The vertex count is one more than the largest
    /// index unless `n` is given.
    pub fn from_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max = None::<usize>;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| {
                    Error::InvalidGraph(format!("line {}: bad vertex {s:?}", lineno + 1))
                })
            };
            if parts.len() != 2 {
                return Err(Error::InvalidGraph(format!(
                    "line {}: expected two vertices",
                    lineno + 1
                )));
            }
            let (u, v) = (parse(parts[0])?, parse(parts[1])?);
            max = Some(max.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push((u, v));
        }
        let n = n.unwrap_or_else(|| max.map_or(0, |m| m + 1));
        Graph::new(n, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `X_v ∏_{w ∈ N(v)} Z_w` for every vertex, in vertex order.
    pub fn stabilizer_generators(&self) -> Vec<PauliString> {
        let mut gens: Vec<PauliString> = (0..self.n)
            .map(|v| PauliString::single(self.n, v, Pauli::X).expect("vertex in range"))
            .collect();
        for &(a, b) in &self.edges {
            gens[a].set(b, Pauli::Z).expect("vertex in range");
            gens[b].set(a, Pauli::Z).expect("vertex in range");
        }
        gens
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    Cz(usize, usize),
    /// Measure in the X basis and keep only the `+1` branch.
    MeasureXPostselect(usize),
}

/// Ordered gate list on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let check = |q: usize| {
            if q < self.width {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange {
                    index: q,
                    n: self.width,
                })
            }
        };
        match gate {
            Gate::H(q) | Gate::MeasureXPostselect(q) => check(q)?,
            Gate::Cz(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::InvalidArgument(format!(
                        "CZ endpoints must differ, got ({a}, {b})"
                    )));
                }
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn h_layer(&mut self) {
        for q in 0..self.width {
            self.gates.push(Gate::H(q));
        }
    }

    /// Inverse circuit. H and CZ are self-inverse, so this reverses the order;
    /// postselection has no inverse and is rejected.
    pub fn inverse(&self) -> Result<Circuit> {
        if self.gates.iter().any(|g| matches!(g, Gate::MeasureXPostselect(_))) {
            return Err(Error::InvalidArgument(
                "circuit with postselection has no inverse".into(),
            ));
        }
        Ok(Circuit {
            width: self.width,
            gates: self.gates.iter().rev().copied().collect(),
        })
    }

    pub fn count_h(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::H(_))).count()
    }

    pub fn count_cz(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cz(..))).count()
    }
}

/// Hadamard on every qubit, then one CZ per edge in sorted edge order.
pub fn graph_state_circuit(g: &Graph) -> Circuit {
    let mut c = Circuit::new(g.num_vertices());
    c.h_layer();
    for &(a, b) in g.edges() {
        c.gates.push(Gate::Cz(a, b));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(gens: &[PauliString]) -> Vec<String> {
        gens.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn three_qubit_ring() {
        let lat = Lattice::chain(3, Boundary::Pbc).unwrap();
        assert_eq!(
            strs(&cluster_generators(&lat)),
            vec!["+XZZ", "+ZXZ", "+ZZX"]
        );
    }

    #[test]
    fn five_qubit_open_chain() {
        let lat = Lattice::chain(5, Boundary::Obc).unwrap();
        assert_eq!(
            strs(&cluster_generators(&lat)),
            vec!["+XZIII", "+ZXZII", "+IZXZI", "+IIZXZ", "+IIIZX"]
        );
    }

    #[test]
    fn square_5x5_supports() {
        let lat = Lattice::hypercubic(2, 5, Boundary::Pbc).unwrap();
        let gens = cluster_generators(&lat);
        assert_eq!(gens.len(), 25);
        assert!(gens.iter().all(|g| g.weight() == 5));
    }

    #[test]
    fn obc_boundary_generators_are_lighter() {
        let lat = Lattice::hypercubic(2, 4, Boundary::Obc).unwrap();
        let gens = cluster_generators(&lat);
        assert_eq!(gens[0].weight(), 3);
        assert_eq!(gens[lat.index(&[1, 1]).unwrap()].weight(), 5);
        assert_eq!(gens[lat.index(&[1, 0]).unwrap()].weight(), 4);
    }

    #[test]
    fn first_axis_varies_fastest() {
        let lat = Lattice::new(vec![3, 4], vec![Boundary::Pbc; 2]).unwrap();
        assert_eq!(lat.index(&[1, 2]).unwrap(), 1 + 3 * 2);
        assert_eq!(lat.coords(7), vec![1, 2]);
    }

    #[test]
    fn extended_reduces_to_cluster() {
        for b in [Boundary::Pbc, Boundary::Obc] {
            let lat = Lattice::chain(9, b).unwrap();
            assert_eq!(extended_generators(9, 1, b).unwrap(), cluster_generators(&lat));
        }
    }

    #[test]
    fn extended_range_two_reads_zzxzz() {
        let gens = extended_generators(9, 2, Boundary::Pbc).unwrap();
        assert_eq!(gens[4].to_string(), "+IIZZXZZII");
        assert_eq!(gens[0].to_string(), "+XZZIIIIZZ");
        assert!(gens.iter().all(|g| g.weight() == 5));
        assert!(extended_generators(4, 2, Boundary::Pbc).is_err());
    }

    #[test]
    fn ring_circuit_gate_counts() {
        let g = Lattice::chain(3, Boundary::Pbc).unwrap().graph();
        let c = graph_state_circuit(&g);
        assert_eq!((c.count_h(), c.count_cz()), (3, 3));
    }

    #[test]
    fn extended_range_two_is_a_ladder() {
        // Each site couples to i±1 and i±2: rungs plus rails of a ladder.
        let g = extended_graph(10, 2, Boundary::Pbc).unwrap();
        assert_eq!(g.edges().len(), 20);
        assert!(g.neighbors(0) == vec![1, 2, 8, 9]);
    }

    #[test]
    fn distances() {
        let lat = Lattice::chain(5, Boundary::Pbc).unwrap();
        assert_eq!(lat.hamming_distance(2, 2), 0);
        assert_eq!(lat.hamming_distance(0, 4), 1);
        let open = Lattice::chain(5, Boundary::Obc).unwrap();
        assert_eq!(open.hamming_distance(0, 4), 4);
    }

    #[test]
    fn adjacent_generators_have_disjoint_neighborhoods() {
        let lat = Lattice::hypercubic(2, 6, Boundary::Pbc).unwrap();
        for v in 0..lat.num_vertices() {
            for w in lat.neighbors(v) {
                let nv = lat.neighbors(v);
                let nw = lat.neighbors(w);
                assert!(nv.iter().all(|x| !nw.contains(x)));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Lattice::chain(2, Boundary::Pbc).is_err());
        assert!(Lattice::new(vec![], vec![]).is_err());
        assert!(Graph::new(3, vec![(0, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::Cz(1, 1)).is_err());
        assert!(c.push(Gate::H(2)).is_err());
    }

    #[test]
    fn lattice_spec_json() {
        let spec: LatticeSpec =
            serde_json::from_str(r#"{"D":2,"lengths":[5,5],"boundary":"pbc"}"#).unwrap();
        let lat = Lattice::from_spec(&spec).unwrap();
        assert_eq!(lat.num_vertices(), 25);
        assert_eq!(lat.to_spec(), spec);
        let mixed: LatticeSpec =
            serde_json::from_str(r#"{"D":2,"lengths":[5,4],"boundary":["pbc","obc"]}"#).unwrap();
        let lat = Lattice::from_spec(&mixed).unwrap();
        assert_eq!(lat.neighbors(0).len(), 3);
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::from_edge_list("0 1\n# comment\n1 2\n\n2 0\n", None).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert!(Graph::from_edge_list("0 1 2\n", None).is_err());
    }
}
