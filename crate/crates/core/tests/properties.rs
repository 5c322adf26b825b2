use clusterstab::lattice::{cluster_generators, Boundary, Graph, Lattice};
use clusterstab::noisesim::fit_line;
use clusterstab::syndrome::syndrome;
use clusterstab::uniformity::{is_m_uniform, min_weight_bruteforce, min_weight_windowed, subset_sweep_check};
use clusterstab::{Pauli, PauliString, SearchOptions, StabilizerGroup, SubsetSpec, Syndrome};
use proptest::prelude::*;

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(letters, phase)| {
        let ops: Vec<(usize, Pauli)> = letters
            .iter()
            .enumerate()
            .map(|(q, &l)| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]))
            .collect();
        PauliString::from_sparse(n, &ops).unwrap().with_phase(phase)
    })
}

fn three_strings() -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
    (1usize..70).prop_flat_map(|n| (pauli_string(n), pauli_string(n), pauli_string(n)))
}

fn graph_state() -> impl Strategy<Value = StabilizerGroup> {
    (2usize..9).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(&e, _)| e).collect();
            let g = Graph::new(n, edges).unwrap();
            StabilizerGroup::from_generators(g.stabilizer_generators()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_is_associative((a, b, c) in three_strings()) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutation_is_symmetric_and_matches_products((a, b, _) in three_strings()) {
        let c = a.commutes(&b).unwrap();
        prop_assert_eq!(c, b.commutes(&a).unwrap());
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        if c {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, ba.negated());
        }
    }

    #[test]
    fn product_matches_dense_matrices(a in pauli_string(3), b in pauli_string(3)) {
        let dense = a.dense_matrix().unwrap() * b.dense_matrix().unwrap();
        let packed = a.multiply(&b).unwrap().dense_matrix().unwrap();
        prop_assert!((dense - packed).norm() < 1e-12);
    }

    #[test]
    fn pauli_text_round_trips(a in pauli_string(17)) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<PauliString>().unwrap(), a);
    }

    #[test]
    fn syndrome_is_linear(s in graph_state(), seed in any::<u64>()) {
        let n = s.num_qubits();
        let pick = |k: u64| {
            let ops: Vec<(usize, Pauli)> = (0..n)
                .map(|q| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][((k >> (2 * q)) & 3) as usize]))
                .collect();
            PauliString::from_sparse(n, &ops).unwrap()
        };
        let (e1, e2) = (pick(seed), pick(seed.rotate_left(23) ^ 0x9e37_79b9));
        let lhs = syndrome(&s, &e1.multiply(&e2).unwrap()).unwrap();
        let rhs = syndrome(&s, &e1).unwrap().xor(&syndrome(&s, &e2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn syndrome_of_stabilizer_is_zero(s in graph_state(), mask in any::<u64>()) {
        let q = s.num_generators();
        let el = s.element_at(mask & ((1u64 << q) - 1));
        prop_assert!(syndrome(&s, &el).unwrap().is_zero());
    }

    #[test]
    fn syndrome_text_round_trips(bits in any::<u64>(), len in 1usize..64) {
        let syn = Syndrome::from_index(bits, len);
        prop_assert_eq!(syn.to_string().parse::<Syndrome>().unwrap(), syn);
    }

    #[test]
    fn sweep_agrees_with_min_weight(s in graph_state(), m in 1usize..4) {
        let m = m.min(s.num_qubits());
        let v = is_m_uniform(&s, m, SearchOptions::default()).unwrap();
        let sweep = subset_sweep_check(&s, m, 1 << 20).unwrap();
        prop_assert_eq!(v.uniform, sweep.passed);
    }

    #[test]
    fn subset_dimension_matches_rdm_rank(s in graph_state(), k in 1usize..4) {
        let n = s.num_qubits();
        let a = SubsetSpec::new((0..k.min(n)).collect(), n).unwrap();
        let rho = s.reduced_density_matrix(&a).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        let rank = rho.eigenvalues().iter().filter(|&&e| e > 1e-9).count();
        let dim = s.subset_dimension(&a).unwrap();
        prop_assert_eq!(rank, 1usize << (a.len() - dim));
    }

    #[test]
    fn fit_recovers_exact_lines(
        slope in -1.0f64..1.0,
        intercept in -1.0f64..1.0,
        npts in 3usize..30,
        step in 0.01f64..10.0,
    ) {
        let t: Vec<f64> = (0..npts).map(|k| k as f64 * step).collect();
        let p: Vec<f64> = t.iter().map(|t| intercept + slope * t).collect();
        let f = fit_line(&t, &p, &vec![0.0; npts]).unwrap();
        prop_assert!((f.slope - slope).abs() < 1e-9);
        prop_assert!((f.intercept - intercept).abs() < 1e-9);
        let w = fit_line(&t, &p, &vec![0.01; npts]).unwrap();
        prop_assert!((w.slope - slope).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn windowed_never_beats_brute_force_and_matches_when_sound(
        lx in 3usize..6,
        ly in 3usize..5,
        bx in any::<bool>(),
        by in any::<bool>(),
        radius in 2usize..5,
    ) {
        let b = |p: bool| if p { Boundary::Pbc } else { Boundary::Obc };
        let lat = Lattice::new(vec![lx, ly], vec![b(bx), b(by)]).unwrap();
        let s = StabilizerGroup::from_generators(cluster_generators(&lat)).unwrap();
        let brute = min_weight_bruteforce(&s, SearchOptions::default()).unwrap();
        let win = min_weight_windowed(&s, &lat, radius).unwrap();
        prop_assert!(win.min_support >= brute.min_support);
        prop_assert!(s.contains(&win.witness).unwrap());
        prop_assert_eq!(win.witness.weight(), win.min_support);
        if win.sound {
            prop_assert_eq!(win.min_support, brute.min_support);
        }
    }
}
