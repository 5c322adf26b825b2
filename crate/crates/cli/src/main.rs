//! `clusterstab` command-line front end.
//!
//! Qubits are 1-based on the command line and in human-readable output.
//! JSON goes to stdout unless `--out` is given; `bench` writes CSV.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use clusterstab::encoding::{
    encode_statevector, logical_space_is_m_uniform, minimal_a_search, LogicalEncoding, SubsetFamily,
};
use clusterstab::lattice::{cluster_generators, extended_generators, ghz_generators, graph_state_circuit};
use clusterstab::noisesim::{
    aggregate_realizations, fit_error_rates, parse_delay_grid, run_exact, run_sampled, BenchLayout,
    ChannelModel, NoiseModel, PatternRates, Variant,
};
use clusterstab::syndrome::DEFAULT_TABLE_CAP;
use clusterstab::uniformity::{
    centralizer_coset_min_weight, coset_min_weight, is_m_uniform, min_weight_bruteforce, min_weight_windowed,
    subset_sweep_check, DEFAULT_SUBSET_CAP, DEFAULT_WINDOW_RADIUS,
};
use clusterstab::verify::{criterion_10, linear_regime_passed, run_criterion, CriterionReport, VerifyConfig, VerifyReport};
use clusterstab::{
    Boundary, Complex64, Error, Gate, Graph, Lattice, LatticeSpec, PauliString, SearchOptions, StabilizerGroup,
    SubsetSpec, Syndrome, SyndromeTable, WeightReport, SCHEMA_VERSION,
};

#[derive(Parser, Debug)]
#[command(name = "clusterstab", version, about = "Cluster-state stabilizer codes: uniformity, syndromes, noise benchmarks")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CLUSTERSTAB_THREADS")]
    threads: Option<usize>,
    /// Include wall-clock times in JSON output (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Emit stabilizer generators (and optionally the preparation circuit).
    Lattice {
        #[command(flatten)]
        state: StateArgs,
        /// Include the H/CZ preparation circuit.
        #[arg(long)]
        circuit: bool,
    },
    /// Decide m-uniformity, optionally cross-checked by a subset sweep.
    Uniformity {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        m: usize,
        /// Also check every |A| = m subset directly.
        #[arg(long)]
        sweep: bool,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_WINDOW_RADIUS)]
        radius: usize,
    },
    /// Minimum support over the group, or over a coset of it.
    Minweight {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_WINDOW_RADIUS)]
        radius: usize,
        /// Search the coset P·S instead (P may anticommute with S).
        #[arg(long)]
        coset: Option<String>,
        /// As --coset, but P must commute with every generator.
        #[arg(long, conflicts_with = "coset")]
        centralizer_coset: Option<String>,
    },
    /// Syndrome table for errors of bounded support.
    Syndromes {
        #[command(flatten)]
        state: StateArgs,
        /// Largest error support.
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Restrict errors to these qubits (1-based, comma-separated).
        #[arg(long, value_delimiter = ',')]
        assume_qubit: Vec<usize>,
        /// Look up a syndrome bitstring, one bit per generator.
        #[arg(long)]
        identify: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: u128,
    },
    /// Simulate the delay benchmark and write rates as CSV.
    Bench(BenchArgs),
    /// Fit a bench CSV and emit slopes, intercepts and T1/T2 estimates.
    Fit {
        /// CSV written by `bench`.
        input: PathBuf,
    },
    /// Uniformity of the logical space encoded through Z_A.
    Encode {
        #[command(flatten)]
        state: StateArgs,
        /// Qubits of A (1-based, comma-separated).
        #[arg(long = "A", value_delimiter = ',')]
        a: Vec<usize>,
        #[arg(long)]
        m: usize,
        /// Search for the smallest A in this family instead.
        #[arg(long)]
        minimal: Option<Family>,
        /// Also build the encoded state with the ancilla circuit (n ≤ 10).
        #[arg(long)]
        statevector: bool,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: u128,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize, Clone)]
struct StateArgs {
    /// Lattice dimension.
    #[arg(long = "D")]
    dim: Option<usize>,
    /// Side length (all axes).
    #[arg(long = "L")]
    len: Option<usize>,
    /// Per-axis side lengths, overriding --D/--L.
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<usize>,
    #[arg(long, conflicts_with = "obc")]
    pbc: bool,
    #[arg(long)]
    obc: bool,
    /// Lattice JSON, inline or as a file path.
    #[arg(long)]
    lattice: Option<String>,
    /// Edge-list file (0-based `u v` pairs); builds the graph state.
    #[arg(long, conflicts_with_all = ["lattice", "dim", "lengths"])]
    graph: Option<PathBuf>,
    /// Extended 1D cluster with neighbours up to this range.
    #[arg(long)]
    extended: Option<usize>,
    /// n-qubit GHZ state.
    #[arg(long, conflicts_with_all = ["lattice", "dim", "lengths", "graph"])]
    ghz: Option<usize>,
}

#[derive(Args, Debug, Serialize, Clone)]
struct BenchArgs {
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, conflicts_with = "obc")]
    pbc: bool,
    /// Open chain (the default).
    #[arg(long)]
    obc: bool,
    /// Probe qubit, 1-based (default: middle of the chain).
    #[arg(long)]
    probe: Option<usize>,
    /// Allow an end-of-chain probe on an open chain.
    #[arg(long)]
    allow_edge: bool,
    /// T1 in µs.
    #[arg(long, default_value_t = 100.0)]
    t1: f64,
    /// T2 in µs.
    #[arg(long, default_value_t = 30.0)]
    t2: f64,
    /// Per-bit readout flip probability.
    #[arg(long, default_value_t = 0.02)]
    readout: f64,
    /// `start:stop:step` or a comma list, µs.
    #[arg(long, default_value = "0:400:20")]
    delays: String,
    #[arg(long, default_value_t = 20_000)]
    shots: u64,
    /// Independent sampled runs pooled per delay.
    #[arg(long, default_value_t = 1)]
    realizations: usize,
    #[arg(long, default_value = "zxz")]
    variant: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Engine::Sampled)]
    engine: Engine,
    /// Channel of the exact engine.
    #[arg(long, value_enum, default_value_t = Channel::Physical)]
    channel: Channel,
}

#[derive(Args, Debug, Serialize, Clone)]
struct VerifyArgs {
    /// Run only these criteria (repeatable).
    #[arg(long)]
    criterion: Vec<u8>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 20_000)]
    shots: u64,
    #[arg(long, default_value_t = 5)]
    realizations: usize,
    #[arg(long, default_value = "0:400:20")]
    delays: String,
    /// Skip the 3D lattice in criterion 2.
    #[arg(long)]
    skip_3d: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Method {
    Brute,
    Windowed,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Engine {
    Sampled,
    Exact,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Channel {
    Physical,
    Twirled,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    Contiguous,
    AllSubsets,
}

enum Failure {
    CheckFailed,
    Invalid(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

struct State {
    group: StabilizerGroup,
    lattice: Option<Lattice>,
    graph: Option<Graph>,
    kind: &'static str,
}

impl StateArgs {
    fn boundary(&self) -> Boundary {
        if self.obc {
            Boundary::Obc
        } else {
            Boundary::Pbc
        }
    }

    fn lattice(&self) -> CliResult<Option<Lattice>> {
        if let Some(src) = &self.lattice {
            let text = if src.trim_start().starts_with('{') {
                src.clone()
            } else {
                fs::read_to_string(src).map_err(|e| invalid(format!("{src}: {e}")))?
            };
            let spec: LatticeSpec =
                serde_json::from_str(&text).map_err(|e| invalid(format!("lattice JSON: {e}")))?;
            return Ok(Some(Lattice::from_spec(&spec)?));
        }
        let b = self.boundary();
        if !self.lengths.is_empty() {
            if let Some(d) = self.dim {
                if d != self.lengths.len() {
                    return Err(invalid(format!("--D {d} but {} lengths given", self.lengths.len())));
                }
            }
            return Ok(Some(Lattice::new(self.lengths.clone(), vec![b; self.lengths.len()])?));
        }
        match (self.dim, self.len) {
            (Some(d), Some(l)) => Ok(Some(Lattice::hypercubic(d, l, b)?)),
            (None, Some(l)) => Ok(Some(Lattice::chain(l, b)?)),
            (Some(_), None) => Err(invalid("--D needs --L or --lengths")),
            (None, None) => Ok(None),
        }
    }

    fn resolve(&self) -> CliResult<State> {
        if let Some(n) = self.ghz {
            return Ok(State {
                group: StabilizerGroup::from_generators(ghz_generators(n)?)?,
                lattice: None,
                graph: None,
                kind: "ghz",
            });
        }
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            let g = Graph::from_edge_list(&text, self.len)?;
            return Ok(State {
                group: StabilizerGroup::from_generators(g.stabilizer_generators())?,
                lattice: None,
                graph: Some(g),
                kind: "graph",
            });
        }
        let lat = self
            .lattice()?
            .ok_or_else(|| invalid("no state given: use --D/--L, --lengths, --lattice, --graph or --ghz"))?;
        if let Some(p) = self.extended {
            if lat.dim() != 1 {
                return Err(invalid("--extended needs a 1D lattice"));
            }
            let gens = extended_generators(lat.num_vertices(), p, lat.boundaries()[0])?;
            return Ok(State {
                group: StabilizerGroup::from_generators(gens)?,
                lattice: None,
                graph: None,
                kind: "extended-cluster",
            });
        }
        Ok(State {
            group: StabilizerGroup::from_generators(cluster_generators(&lat))?,
            graph: Some(lat.graph()),
            lattice: Some(lat),
            kind: "cluster",
        })
    }
}

struct Ctx {
    timing: bool,
    out: Option<PathBuf>,
    config: Value,
}

impl Ctx {
    fn write(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit(&self, mut body: serde_json::Map<String, Value>) -> CliResult<()> {
        let mut doc = serde_json::Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("config".into(), self.config.clone());
        doc.append(&mut body);
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        text.push('\n');
        self.write(&text)
    }

    fn weight(&self, mut r: WeightReport) -> Value {
        if !self.timing {
            r.wall_time_s = None;
        }
        serde_json::to_value(r).expect("serializable")
    }
}

fn obj(v: Value) -> serde_json::Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn one_based(qubits: &[usize]) -> Vec<usize> {
    qubits.iter().map(|q| q + 1).collect()
}

fn zero_based(qubits: &[usize], n: usize) -> CliResult<Vec<usize>> {
    qubits
        .iter()
        .map(|&q| {
            if q == 0 || q > n {
                Err(invalid(format!("qubit {q} out of range 1..={n}")))
            } else {
                Ok(q - 1)
            }
        })
        .collect()
}

fn state_json(st: &State) -> Value {
    json!({
        "kind": st.kind,
        "n": st.group.num_qubits(),
        "lattice": st.lattice.as_ref().map(|l| l.to_spec()),
    })
}

fn search(st: &State, method: Method, radius: usize, opts: SearchOptions) -> CliResult<WeightReport> {
    Ok(match method {
        Method::Brute => min_weight_bruteforce(&st.group, opts)?,
        Method::Windowed => {
            let lat = st
                .lattice
                .as_ref()
                .ok_or_else(|| invalid("windowed search needs a cluster-state lattice"))?;
            min_weight_windowed(&st.group, lat, radius)?
        }
    })
}

fn cmd_lattice(ctx: &Ctx, state: &StateArgs, circuit: bool) -> CliResult<()> {
    let st = state.resolve()?;
    let mut body = obj(json!({
        "state": state_json(&st),
        "generators": st.group.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    }));
    if let Some(g) = &st.graph {
        let edges: Vec<[usize; 2]> = g.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect();
        body.insert("edges".into(), json!(edges));
        if circuit {
            let c = graph_state_circuit(g);
            let gates: Vec<String> = c
                .gates()
                .iter()
                .map(|gate| match *gate {
                    Gate::H(q) => format!("H {}", q + 1),
                    Gate::Cz(a, b) => format!("CZ {} {}", a + 1, b + 1),
                    Gate::MeasureXPostselect(q) => format!("MX+ {}", q + 1),
                })
                .collect();
            body.insert(
                "circuit".into(),
                json!({"h_count": c.count_h(), "cz_count": c.count_cz(), "gates": gates}),
            );
        }
    } else if circuit {
        return Err(invalid("--circuit needs a graph state"));
    }
    ctx.emit(body)
}

fn cmd_uniformity(ctx: &Ctx, state: &StateArgs, m: usize, sweep: bool, method: Method, radius: usize) -> CliResult<()> {
    let st = state.resolve()?;
    let (uniform, report) = match method {
        Method::Brute => {
            let v = is_m_uniform(&st.group, m, SearchOptions::default())?;
            (v.uniform, v.report)
        }
        Method::Windowed => {
            let r = search(&st, method, radius, SearchOptions::default())?;
            (r.min_support > m, r)
        }
    };
    let mut body = obj(json!({
        "state": state_json(&st),
        "m": m,
        "uniform": uniform,
        "verdict": if uniform { "pass" } else { "fail" },
        "report": ctx.weight(report.clone()),
    }));
    if report.exhaustive {
        body.insert("d".into(), json!(report.min_support));
    }
    let mut ok = uniform;
    if sweep {
        let s = subset_sweep_check(&st.group, m, DEFAULT_SUBSET_CAP)?;
        ok &= s.passed;
        body.insert(
            "sweep".into(),
            json!({
                "passed": s.passed,
                "subsets_checked": s.subsets_checked,
                "first_failure": s.first_failure.map(|a| one_based(a.qubits())),
            }),
        );
        body.insert("agree".into(), json!(s.passed == uniform));
    }
    ctx.emit(body)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}

fn cmd_minweight(
    ctx: &Ctx,
    state: &StateArgs,
    method: Method,
    radius: usize,
    coset: Option<&str>,
    centralizer: Option<&str>,
) -> CliResult<()> {
    let st = state.resolve()?;
    let opts = SearchOptions::default();
    let report = match (coset, centralizer) {
        (Some(_), _) | (None, Some(_)) if method == Method::Windowed => {
            return Err(invalid("coset searches are brute force only"));
        }
        (Some(p), _) => coset_min_weight(&st.group, &PauliString::from_str(p)?, opts)?,
        (None, Some(p)) => centralizer_coset_min_weight(&st.group, &PauliString::from_str(p)?, opts)?,
        (None, None) => search(&st, method, radius, opts)?,
    };
    ctx.emit(obj(json!({
        "state": state_json(&st),
        "report": ctx.weight(report),
    })))
}

fn cmd_syndromes(
    ctx: &Ctx,
    state: &StateArgs,
    t: usize,
    assume: &[usize],
    identify: Option<&str>,
    cap: u128,
) -> CliResult<()> {
    let st = state.resolve()?;
    let n = st.group.num_qubits();
    let qubits = if assume.is_empty() {
        None
    } else {
        Some(zero_based(assume, n)?)
    };
    let table = SyndromeTable::build(&st.group, t, qubits.as_deref(), cap)?;
    let collisions: Vec<Value> = table
        .collisions()
        .into_iter()
        .map(|(s, errs)| json!({"syndrome": s.to_string(), "errors": errs.iter().map(|e| e.to_string()).collect::<Vec<_>>()}))
        .collect();
    let mut body = obj(json!({
        "state": state_json(&st),
        "generators": table.generator_order.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "max_support": t,
        "qubits": table.model.qubits.as_deref().map(one_based),
        "num_errors": table.num_errors,
        "pure": table.pure,
        "collisions": collisions,
        "table": table.entries_json(),
    }));
    let mut ok = true;
    if let Some(bits) = identify {
        let syn = Syndrome::from_str(bits)?;
        let id = table.identify(&syn)?;
        ok = matches!(
            id,
            clusterstab::Identification::NoError | clusterstab::Identification::Error(_)
        );
        body.insert(
            "identification".into(),
            json!({"syndrome": bits, "result": id.to_string(), "detail": id}),
        );
    }
    ctx.emit(body)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}

const CSV_COLUMNS: [&str; 9] = ["t", "p_X", "p_Y", "p_Z", "p_other", "se_X", "se_Y", "se_Z", "se_other"];

fn cmd_bench(ctx: &Ctx, args: &BenchArgs) -> CliResult<()> {
    let boundary = if args.pbc { Boundary::Pbc } else { Boundary::Obc };
    let probe = match args.probe {
        Some(p) => zero_based(&[p], args.n)?[0],
        None => args.n.saturating_sub(1) / 2,
    };
    let layout = BenchLayout::new(args.n, boundary, probe, args.allow_edge)?;
    let variant = Variant::from_str(&args.variant)?;
    let grid = parse_delay_grid(&args.delays)?;
    let noise = NoiseModel::new(args.t1, args.t2, args.readout, grid, variant)?;
    if args.shots == 0 || args.realizations == 0 {
        return Err(invalid("shots and realizations must be positive"));
    }
    let rates = match args.engine {
        Engine::Exact => {
            let channel = match args.channel {
                Channel::Physical => ChannelModel::Physical,
                Channel::Twirled => ChannelModel::Twirled,
            };
            run_exact(&layout, &noise.with_channel(channel))?.rates
        }
        Engine::Sampled => {
            let runs = (0..args.realizations)
                .map(|r| Ok(run_sampled(&layout, &noise, args.shots, args.seed + r as u64)?.rates()))
                .collect::<CliResult<Vec<_>>>()?;
            if runs.len() == 1 {
                runs.into_iter().next().expect("one run")
            } else {
                aggregate_realizations(&runs, args.shots)?
            }
        }
    };
    let mut config = ctx.config.clone();
    config["bench"]["probe"] = json!(probe + 1);
    config["bench"]["obc"] = json!(boundary == Boundary::Obc);
    config["bench"]["pbc"] = json!(boundary == Boundary::Pbc);
    ctx.write(&bench_csv(&config, &rates)?)
}

fn bench_csv(config: &Value, rates: &[PatternRates]) -> CliResult<String> {
    let mut text = format!("# schema_version: {SCHEMA_VERSION}\n# config: {config}\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| invalid(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in rates {
        let row = [r.t, r.p_x, r.p_y, r.p_z, r.p_other, r.se_x, r.se_y, r.se_z, r.se_other];
        w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
    text.push_str(&String::from_utf8(bytes).expect("ascii"));
    Ok(text)
}

fn read_bench_csv(path: &Path) -> CliResult<(Option<Value>, Vec<PatternRates>)> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let config = text
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .map(|c| serde_json::from_str(c).map_err(|e| invalid(format!("config header: {e}"))))
        .transpose()?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| invalid(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| invalid(format!("missing column {name}")))
    };
    let idx = CSV_COLUMNS.iter().map(|c| col(c)).collect::<CliResult<Vec<_>>>()?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| invalid(e.to_string()))?;
        let v = idx
            .iter()
            .map(|&i| {
                rec.get(i)
                    .unwrap_or("")
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad number in row {:?}", rec.position().map(|p| p.line()))))
            })
            .collect::<CliResult<Vec<_>>>()?;
        rows.push(PatternRates {
            t: v[0],
            p_x: v[1],
            p_y: v[2],
            p_z: v[3],
            p_other: v[4],
            se_x: v[5],
            se_y: v[6],
            se_z: v[7],
            se_other: v[8],
        });
    }
    Ok((config, rows))
}

fn cmd_fit(ctx: &Ctx, input: &Path) -> CliResult<()> {
    let (bench_config, rows) = read_bench_csv(input)?;
    let fit = fit_error_rates(&rows)?;
    ctx.emit(obj(json!({
        "bench_config": bench_config,
        "points": rows.len(),
        "fit": fit,
    })))
}

fn cmd_encode(
    ctx: &Ctx,
    state: &StateArgs,
    a: &[usize],
    m: usize,
    minimal: Option<Family>,
    statevector: bool,
    cap: u128,
) -> CliResult<()> {
    let st = state.resolve()?;
    let n = st.group.num_qubits();
    if let Some(fam) = minimal {
        let lat = st
            .lattice
            .as_ref()
            .ok_or_else(|| invalid("--minimal needs a cluster-state lattice"))?;
        let family = match fam {
            Family::Contiguous => SubsetFamily::Contiguous,
            Family::AllSubsets => SubsetFamily::AllSubsets,
        };
        let r = minimal_a_search(lat, m, family, cap)?;
        return ctx.emit(obj(json!({
            "state": state_json(&st),
            "m": m,
            "family": r.family,
            "minimal_size": r.minimal_size,
            "witness": r.witness.as_ref().map(|w| one_based(w.qubits())),
            "candidates_checked": r.candidates_checked,
            "sufficient_size": r.sufficient_size,
            "stabilizer_min_support": r.stabilizer_min_support,
        })));
    }
    if a.is_empty() {
        return Err(invalid("give --A or --minimal"));
    }
    let subset = SubsetSpec::new(zero_based(a, n)?, n)?;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let enc = LogicalEncoding::new(st.group.clone(), subset, h, h)?;
    let v = logical_space_is_m_uniform(&enc, m)?;
    let mut body = obj(json!({
        "state": state_json(&st),
        "A": one_based(enc.subset().qubits()),
        "logical_z": enc.logical_z().to_string(),
        "m": m,
        "uniform": v.uniform,
        "verdict": if v.uniform { "pass" } else { "fail" },
        "stabilizer": ctx.weight(v.stabilizer),
        "coset": ctx.weight(v.coset),
    }));
    if statevector {
        let e = encode_statevector(&enc)?;
        body.insert(
            "statevector".into(),
            json!({"success_probability": e.success_probability, "max_deviation": e.max_deviation}),
        );
    }
    ctx.emit(body)?;
    if v.uniform {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}

fn cmd_verify(ctx: &Ctx, args: &VerifyArgs) -> CliResult<()> {
    let cfg = VerifyConfig {
        seed: args.seed,
        shots: args.shots,
        realizations: args.realizations,
        delays: args.delays.clone(),
        include_3d: !args.skip_3d,
        ..VerifyConfig::default()
    };
    let ids: Vec<u8> = if args.criterion.is_empty() {
        (1..=10).collect()
    } else {
        args.criterion.clone()
    };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
        return Err(invalid(format!("no criterion {bad}")));
    }
    let mut done = Vec::new();
    for &id in &ids {
        let rep = if id == 10 {
            let mut first: Vec<CriterionReport> = done.iter().filter(|r: &&CriterionReport| r.id != 10).cloned().collect();
            for j in 1..=9u8 {
                if !first.iter().any(|r| r.id == j) {
                    first.push(run_criterion(j, &cfg)?);
                }
            }
            first.sort_by_key(|r| r.id);
            criterion_10(&cfg, &first)?
        } else {
            run_criterion(id, &cfg)?
        };
        println!("criterion {:>2} {} {}", rep.id, if rep.passed { "PASS" } else { "FAIL" }, rep.name);
        for f in rep.failures() {
            println!("    failed: {f}");
        }
        if let Some(lin) = linear_regime_passed(&rep) {
            println!("    linear-regime grid: {}", if lin { "pass" } else { "fail" });
        }
        done.push(rep);
    }
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION.into(),
        config: cfg,
        passed: done.iter().all(|r| r.passed),
        criteria: done,
    };
    let passed = report.criteria.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", report.criteria.len());
    if let Some(p) = &ctx.out {
        let mut text = serde_json::to_string_pretty(&report).expect("serializable");
        text.push('\n');
        fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(invalid("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| invalid(e.to_string()))?;
    }
    let ctx = Ctx {
        timing: cli.timing,
        out: cli.out.clone(),
        config: serde_json::to_value(&cli.command).expect("serializable"),
    };
    match &cli.command {
        Command::Lattice { state, circuit } => cmd_lattice(&ctx, state, *circuit),
        Command::Uniformity {
            state,
            m,
            sweep,
            method,
            radius,
        } => cmd_uniformity(&ctx, state, *m, *sweep, *method, *radius),
        Command::Minweight {
            state,
            method,
            radius,
            coset,
            centralizer_coset,
        } => cmd_minweight(&ctx, state, *method, *radius, coset.as_deref(), centralizer_coset.as_deref()),
        Command::Syndromes {
            state,
            t,
            assume_qubit,
            identify,
            cap,
        } => cmd_syndromes(&ctx, state, *t, assume_qubit, identify.as_deref(), *cap),
        Command::Bench(args) => cmd_bench(&ctx, args),
        Command::Fit { input } => cmd_fit(&ctx, input),
        Command::Encode {
            state,
            a,
            m,
            minimal,
            statevector,
            cap,
        } => cmd_encode(&ctx, state, a, *m, *minimal, *statevector, *cap),
        Command::Verify(args) => cmd_verify(&ctx, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::CheckFailed) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
