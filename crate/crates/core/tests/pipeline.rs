use clusterstab::encoding::{encode_statevector, logical_space_is_m_uniform, max_low_weight_expectation, LogicalEncoding};
use clusterstab::lattice::{cluster_generators, graph_state_circuit};
use clusterstab::noisesim::{fit_error_rates, parse_delay_grid, run_exact, BenchLayout, ChannelModel, NoiseModel, Variant};
use clusterstab::statevector::{run_circuit, zero_state};
use clusterstab::syndrome::{SyndromeTable, DEFAULT_TABLE_CAP};
use clusterstab::uniformity::is_m_uniform;
use clusterstab::{Boundary, Complex64, Identification, Lattice, SearchOptions, StabilizerGroup, SubsetSpec};

fn cluster(lat: &Lattice) -> StabilizerGroup {
    StabilizerGroup::from_generators(cluster_generators(lat)).unwrap()
}

#[test]
fn circuit_state_is_stabilized_by_generators() {
    let lat = Lattice::hypercubic(2, 3, Boundary::Obc).unwrap();
    let s = cluster(&lat);
    let mut psi = zero_state(9);
    run_circuit(&graph_state_circuit(&lat.graph()), &mut psi).unwrap();
    for g in s.generators() {
        let e = clusterstab::statevector::expectation(g, &psi);
        assert!((e.re - 1.0).abs() < 1e-12 && e.im.abs() < 1e-12, "{g}");
    }
}

#[test]
fn ring_code_identifies_every_single_qubit_error() {
    let s = cluster(&Lattice::chain(7, Boundary::Pbc).unwrap());
    assert!(is_m_uniform(&s, 2, SearchOptions::default()).unwrap().uniform);
    let table = SyndromeTable::build(&s, 1, None, DEFAULT_TABLE_CAP).unwrap();
    assert!(table.pure);
    assert_eq!(table.entries.len(), 22);
    for (syn, errs) in &table.entries {
        match table.identify(syn).unwrap() {
            Identification::NoError => assert!(syn.is_zero()),
            Identification::Error(e) => assert_eq!(&e, &errs[0]),
            other => panic!("{syn}: {other}"),
        }
    }
}

#[test]
fn exact_benchmark_fit_in_linear_regime() {
    let layout = BenchLayout::default_five();
    let grid = parse_delay_grid("0:0.4:0.02").unwrap();
    let mut fits = Vec::new();
    for v in [Variant::Zxz, Variant::Xzx] {
        let noise = NoiseModel::new(100.0, 30.0, 0.02, grid.clone(), v)
            .unwrap()
            .with_channel(ChannelModel::Twirled);
        fits.push(fit_error_rates(&run_exact(&layout, &noise).unwrap().rates).unwrap());
    }
    let (zxz, xzx) = (&fits[0], &fits[1]);
    assert!(zxz.z.slope > zxz.x.slope && zxz.z.slope > zxz.y.slope);
    assert!(zxz.z.intercept > 4.0 * zxz.x.intercept);
    assert!(xzx.x.intercept > xzx.z.intercept);
}

#[test]
fn encoded_logical_space_is_two_uniform_on_ten_ring() {
    let lat = Lattice::chain(10, Boundary::Pbc).unwrap();
    let a = SubsetSpec::new((2..9).collect(), 10).unwrap();
    let amp = Complex64::new(0.6, 0.0);
    let enc = LogicalEncoding::on_lattice(&lat, a)
        .unwrap()
        .with_amplitudes(amp, Complex64::new(0.0, 0.8))
        .unwrap();
    let v = logical_space_is_m_uniform(&enc, 2).unwrap();
    assert!(v.uniform);
    let st = encode_statevector(&enc).unwrap();
    assert!(st.max_deviation < 1e-12);
    assert!(max_low_weight_expectation(&st.circuit, 10, 2).unwrap() < 1e-12);
}
