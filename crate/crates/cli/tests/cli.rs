use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterstab"))
        .args(args)
        .env_remove("CLUSTERSTAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn five_ring_is_two_uniform_with_distance_three() {
    let out = run(&["uniformity", "--D", "1", "--L", "5", "--pbc", "--m", "2", "--sweep"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["d"], 3);
    assert_eq!(v["agree"], true);
    assert_eq!(v["schema_version"], "clusterstab/1");
    assert_eq!(v["state"]["lattice"]["boundary"], "pbc");
    assert!(v["report"].get("wall_time_s").is_none());
}

#[test]
fn failed_uniformity_exits_one() {
    let out = run(&["uniformity", "--D", "1", "--L", "5", "--obc", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn identifies_x_on_middle_qubit() {
    let out = run(&["syndromes", "--D", "1", "--L", "5", "--pbc", "--t", "1", "--identify", "01010"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["identification"]["result"], "X on qubit 3");
    assert_eq!(v["pure"], true);
    assert_eq!(v["table"].as_object().unwrap().len(), 16);
}

#[test]
fn ambiguous_syndrome_exits_one() {
    let out = run(&["syndromes", "--D", "1", "--L", "5", "--obc", "--identify", "01000"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["identification"]["detail"]["kind"], "ambiguous");
}

#[test]
fn assume_qubit_is_one_based() {
    let out = run(&["syndromes", "--D", "1", "--L", "5", "--assume-qubit", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["qubits"], serde_json::json!([3]));
    let table = v["table"].as_object().unwrap();
    assert_eq!(table["01010"][0], "+IIXII");
    assert_eq!(table.len(), 4);
}

#[test]
fn resource_cap_exits_three() {
    let out = run(&["syndromes", "--D", "1", "--L", "30", "--t", "3", "--cap", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn invalid_input_exits_two() {
    let out = run(&["bench", "--t1", "10", "--t2", "30"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bench", "--n", "5", "--obc", "--probe", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["uniformity", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["uniformity", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_csv_is_reproducible_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &str| {
        vec![
            "bench", "--n", "5", "--obc", "--t1", "100", "--t2", "30", "--readout", "0.02", "--delays",
            "0:40:5", "--shots", "3000", "--variant", "zxz", "--seed", "7", "--out", p,
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    for p in [&a, &b] {
        let argv = args(p.to_str().unwrap());
        let out = run(&argv.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema_version: clusterstab/1"));
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next(), Some("t,p_X,p_Y,p_Z,p_other,se_X,se_Y,se_Z,se_other"));
    assert_eq!(lines.count(), 9);

    let out = run(&["fit", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["points"], 9);
    assert_eq!(v["bench_config"]["bench"]["probe"], 3);
    assert!(v["fit"]["z"]["slope"].as_f64().unwrap() > 0.0);
}

#[test]
fn exact_engine_fit_recovers_readout_intercept() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("exact.csv");
    let out = run(&[
        "bench", "--engine", "exact", "--channel", "twirled", "--delays", "0:0.4:0.02", "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&run(&["fit", p.to_str().unwrap()]));
    let z0 = v["fit"]["z"]["intercept"].as_f64().unwrap();
    let x0 = v["fit"]["x"]["intercept"].as_f64().unwrap();
    assert!(z0 > 0.01 && z0 < 0.04, "{z0}");
    assert!(x0 < 0.25 * z0, "{x0}");
}

#[test]
fn encode_reports_both_weights() {
    let out = run(&["encode", "--D", "1", "--L", "10", "--A", "3,4,5,6,7,8,9", "--m", "2", "--statevector"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["uniform"], true);
    assert_eq!(v["A"], serde_json::json!([3, 4, 5, 6, 7, 8, 9]));
    assert_eq!(v["stabilizer"]["min_support"], 3);
    assert!(v["coset"]["min_support"].as_u64().unwrap() > 2);
    assert!(v["statevector"]["max_deviation"].as_f64().unwrap() < 1e-12);

    let out = run(&["encode", "--D", "1", "--L", "10", "--A", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn encode_minimal_search() {
    let out = run(&["encode", "--D", "1", "--L", "10", "--m", "2", "--minimal", "contiguous"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["minimal_size"], 5);
    assert_eq!(v["sufficient_size"], 7);
}

#[test]
fn lattice_json_and_graph_inputs() {
    let out = run(&["lattice", "--lattice", r#"{"D":2,"lengths":[3,3],"boundary":"obc"}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["generators"].as_array().unwrap().len(), 9);
    assert_eq!(v["edges"].as_array().unwrap().len(), 12);

    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("ring.txt");
    fs::write(&g, "# 5-ring\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let out = run(&["uniformity", "--graph", g.to_str().unwrap(), "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["d"], 3);

    let out = run(&["lattice", "--D", "1", "--L", "3", "--circuit"]);
    let v = json(&out);
    assert_eq!(v["circuit"]["h_count"], 3);
    assert_eq!(v["circuit"]["gates"][3], "CZ 1 2");
}

#[test]
fn windowed_and_coset_searches() {
    let out = run(&["minweight", "--D", "2", "--L", "5", "--method", "windowed"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["min_support"], 5);

    let out = run(&["minweight", "--D", "1", "--L", "5", "--coset", "+IIZII"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["min_support"], 1);
    let out = run(&["minweight", "--D", "1", "--L", "5", "--centralizer-coset", "+IIZII"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in_and_output_is_byte_identical() {
    let args = ["minweight", "--D", "1", "--L", "12", "--threads", "2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut with = args.to_vec();
    with.push("--timing");
    let t = json(&run(&with));
    assert!(t["report"]["wall_time_s"].as_f64().is_some());
}

#[test]
fn verify_subset_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("verify.json");
    let out = run(&["verify", "--criterion", "1", "--criterion", "7", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("criterion  1 PASS"));
    assert!(stdout.contains("2/2 criteria passed"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
}
