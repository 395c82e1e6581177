use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use morph_qec::code::{self, CodeJson, CssCode};
use morph_qec::colex::{self, Colex};
use morph_qec::decoder::{syndrome_of, Decoder, XDecoder};
use morph_qec::gates::{self, Circuit};
use morph_qec::hct::{self, HctLattice, LatticeJson, Method};
use morph_qec::morph::{self, MorphJson, MorphResult, MorphSpec};
use morph_qec::msd::{self, NoiseSpec, Protocol};
use morph_qec::scenarios::{self, Report, ScenarioOptions, ThresholdScale};
use morph_qec::threshold::{self, ExperimentConfig};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "morph", version, about = "Code morphing, hierarchical color codes, distillation and decoding")]
struct Cli {
    /// Master seed for anything random.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Built-in code catalog.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// Morph a region of a code into the logical qubits of its child code.
    Morph(MorphArgs),
    /// Hierarchical color-toric lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Logical gate verification by state-vector simulation.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Magic state distillation analysis.
    #[command(subcommand)]
    Msd(MsdCmd),
    /// Decode a single error.
    #[command(subcommand)]
    Decode(DecodeCmd),
    /// Monte Carlo threshold estimation.
    #[command(subcommand)]
    Threshold(ThresholdCmd),
    /// Run named scenarios and compare against reference values.
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand)]
enum CodesCmd {
    /// List catalog codes with their parameters.
    List,
    /// Write a catalog code as JSON.
    Build {
        #[arg(long)]
        name: String,
        #[arg(long)]
        d: Option<usize>,
    },
}

#[derive(Args)]
struct MorphArgs {
    /// Code JSON file or catalog name.
    #[arg(long)]
    code: String,
    /// Comma-separated qubit indices.
    #[arg(long, value_delimiter = ',')]
    region: Vec<usize>,
    /// `canonical` or `random:SEED`.
    #[arg(long, default_value = "canonical")]
    basis: String,
}

#[derive(Subcommand)]
enum LatticeCmd {
    Build {
        #[arg(long = "L")]
        l: usize,
        #[arg(long, default_value = "A1")]
        method: Method,
        #[arg(long, default_value_t = 0.0)]
        q: f64,
    },
    /// Summarize a lattice file.
    Info {
        #[arg(long)]
        lattice: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Logical action of a circuit on a code.
    Gates {
        #[arg(long)]
        code: String,
        #[arg(long)]
        circuit: PathBuf,
        /// Expected logical gate on a single logical qubit: R1 = Z, R2 = S, R3 = T, ...
        #[arg(long)]
        expect: Option<String>,
        /// Also classify every single Z fault.
        #[arg(long)]
        faults: bool,
    },
    /// Build and verify the transversal gate of the morphed QRM(d) code.
    Morphed {
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Write the circuit JSON here.
        #[arg(long)]
        circuit_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MsdCmd {
    /// Exact success and output-error polynomials.
    Analyze {
        /// Code or morph-result JSON file, or catalog name.
        #[arg(long)]
        code: String,
        /// `optimistic` or `file:PATH` with a noise spec JSON.
        #[arg(long, default_value = "optimistic")]
        noise: String,
        /// Also print the conditional output error series to this order.
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Cheapest multi-round protocol sequence.
    Cost {
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        #[arg(long)]
        target: f64,
        /// Comma-separated protocol names: 15, 10, 5.
        #[arg(long, value_delimiter = ',', default_value = "15,10")]
        protocols: Vec<String>,
        #[arg(long, default_value_t = 5)]
        max_rounds: usize,
        /// Protocol descriptor JSON for the 10-to-2 protocol "5".
        #[arg(long)]
        ten_to_two: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DecodeCmd {
    /// Decode one error pattern given as a JSON list of qubit indices.
    One {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        error: PathBuf,
        /// Error type.
        #[arg(long, default_value = "z")]
        pauli: PauliKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PauliKind {
    X,
    Z,
}

#[derive(Subcommand)]
enum ThresholdCmd {
    /// Run a sweep described by a config JSON; writes CSV rows.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Finite-size-scaling fit of a CSV produced by `run`.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct ReproduceArgs {
    /// Scenario name, `all`, or `list`.
    scenario: String,
    /// Directory with optional external data files.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    lattices: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                writeln!(o)?;
            }
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, v: &T) -> Result<()> {
    emit_text(out, &serde_json::to_string_pretty(v)?)
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T> {
    let s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&s).with_context(|| format!("parsing {}", p.display()))
}

enum Loaded {
    Code(CssCode),
    Morphed(MorphResult),
}

impl Loaded {
    fn code(&self) -> &CssCode {
        match self {
            Loaded::Code(c) => c,
            Loaded::Morphed(m) => &m.code,
        }
    }
}

/// A file holding a code or morph result, or a catalog name such as `qrm3`.
fn load_code(arg: &str) -> Result<Loaded> {
    let p = Path::new(arg);
    if !p.exists() {
        let (name, d) = match arg.split_once(':') {
            Some((n, d)) => (n, Some(d.parse().context("catalog dimension")?)),
            None => (arg, None),
        };
        return Ok(Loaded::Code(code::by_name(name, d).with_context(|| format!("{arg} is neither a file nor a catalog code"))?));
    }
    let v: serde_json::Value = read_json(p)?;
    if v.get("qubit_map").is_some() {
        let j: MorphJson = serde_json::from_value(v)?;
        Ok(Loaded::Morphed(MorphResult::from_json(&j)?))
    } else {
        let j: CodeJson = serde_json::from_value(v)?;
        Ok(Loaded::Code(CssCode::from_json(&j)?))
    }
}

fn params(c: &CssCode) -> serde_json::Value {
    let d = c.distance().ok();
    serde_json::json!({ "label": c.to_json().label, "n": c.n(), "k": c.k(), "d": d })
}

fn codes(cli: &Cli, cmd: &CodesCmd) -> Result<()> {
    match cmd {
        CodesCmd::List => {
            let list: Vec<serde_json::Value> = [("steane", None), ("qrm2", None), ("qrm3", None), ("hyperoct", Some(2)), ("hyperoct", Some(3))]
                .iter()
                .map(|&(n, d)| code::by_name(n, d).map(|c| params(&c)))
                .collect::<Result<_, _>>()?;
            emit_json(&cli.out, &list)
        }
        CodesCmd::Build { name, d } => emit_json(&cli.out, &code::by_name(name, *d)?.to_json()),
    }
}

fn run_morph(cli: &Cli, a: &MorphArgs) -> Result<()> {
    let parent = load_code(&a.code)?;
    let parent = parent.code();
    let spec = match a.basis.split_once(':') {
        None if a.basis == "canonical" => MorphSpec::canonical(parent, &a.region)?,
        Some(("random", s)) => MorphSpec::random(parent, &a.region, s.parse().context("random basis seed")?)?,
        _ => bail!("--basis must be canonical or random:SEED"),
    };
    let r = morph::morph(&spec)?;
    eprintln!("[[{},{}]] -> [[{},{}]]", parent.n(), parent.k(), r.code.n(), r.code.k());
    emit_json(&cli.out, &r.to_json())
}

fn lattice(cli: &Cli, cmd: &LatticeCmd) -> Result<()> {
    match cmd {
        LatticeCmd::Build { l, method, q } => {
            let lat = hct::generate(*l, *method, *q, cli.seed)?;
            emit_json(&cli.out, &lat.to_json(Some(*method), Some(*q), Some(cli.seed)))
        }
        LatticeCmd::Info { lattice } => {
            let lat = HctLattice::from_json(&read_json::<LatticeJson>(lattice)?)?;
            let code = lat.to_code();
            emit_json(
                &cli.out,
                &serde_json::json!({
                    "n_qubits": lat.n_qubits(),
                    "face_qubits": lat.n_face_qubits(),
                    "cc_edges": lat.cc_edges().len(),
                    "morphed_balls": lat.balls().len(),
                    "k": code.k(),
                }),
            )
        }
    }
}

fn parse_level(s: &str) -> Result<u32> {
    match s.to_ascii_uppercase().as_str() {
        "Z" => Ok(1),
        "S" => Ok(2),
        "T" => Ok(3),
        t => t.strip_prefix('R').and_then(|k| k.parse().ok()).context("--expect must be Z, S, T or Rk"),
    }
}

fn matrix_json(m: &[Vec<num_complex::Complex64>]) -> serde_json::Value {
    serde_json::json!(m.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn verify(cli: &Cli, cmd: &VerifyCmd) -> Result<bool> {
    match cmd {
        VerifyCmd::Gates { code, circuit, expect, faults } => {
            let code = load_code(code)?;
            let code = code.code();
            let c: Circuit = read_json(circuit)?;
            let act = gates::logical_action(code, &c)?;
            let mut ok = true;
            let mut rep = serde_json::json!({ "leak": act.leak, "logical": matrix_json(&act.matrix) });
            if let Some(e) = expect {
                let level = parse_level(e)?;
                let phase = gates::equal_up_to_phase(&act.matrix, &gates::r_matrix(level), gates::TOL);
                ok &= phase.is_some();
                rep["expected"] = serde_json::json!(e);
                rep["matches"] = serde_json::json!(phase.is_some());
                rep["global_phase"] = serde_json::json!(phase.map(|z| z.arg()));
            }
            if *faults {
                let f = gates::single_fault_check(code, &c)?;
                ok &= f.undetected_logical == 0;
                rep["faults"] = serde_json::to_value(f)?;
            }
            emit_json(&cli.out, &rep)?;
            Ok(ok)
        }
        VerifyCmd::Morphed { d, circuit_out } => {
            let cx = Colex::nested_simplex(*d);
            let parent = colex::color_code(&cx);
            let ball = cx.ball(*d + 1)?;
            let hubs = colex::default_hubs(&cx, &ball);
            let m = morph::morph(&MorphSpec::ball(&cx, &parent, &ball, &hubs)?)?;
            let (c, rep) = gates::verify_morphed_gate(&cx, &m, *d as u32)?;
            let f = gates::single_fault_check(&m.code, &c)?;
            if let Some(p) = circuit_out {
                std::fs::write(p, serde_json::to_string_pretty(&c)?)?;
            }
            emit_json(&cli.out, &serde_json::json!({ "code": params(&m.code), "gate": rep, "faults": f }))?;
            Ok(f.undetected_logical == 0)
        }
    }
}

fn builtin_protocol(name: &str, ten_to_two: &Option<PathBuf>) -> Result<Protocol> {
    Ok(match name {
        "15" => msd::fifteen_to_one()?.0,
        "10" => msd::ten_to_one()?.0,
        "5" => {
            let p = ten_to_two.as_ref().context("protocol 5 needs --ten-to-two FILE")?;
            msd::load_protocol(p)?
        }
        other => bail!("unknown protocol {other:?}; use 15, 10 or 5"),
    })
}

fn run_msd(cli: &Cli, cmd: &MsdCmd) -> Result<()> {
    match cmd {
        MsdCmd::Analyze { code, noise, order } => {
            let loaded = load_code(code)?;
            let spec = match (noise.as_str(), &loaded) {
                ("optimistic", Loaded::Morphed(m)) => NoiseSpec::optimistic_for_morph(&m.qubit_map)?,
                ("optimistic", Loaded::Code(c)) => NoiseSpec::all_t(c.n()),
                (s, _) => match s.strip_prefix("file:") {
                    Some(p) => read_json(Path::new(p))?,
                    None => bail!("--noise must be optimistic or file:PATH"),
                },
            };
            let a = msd::analyze(loaded.code(), &spec)?;
            let series = a.p_out_series(*order);
            eprintln!("p_s = {}\np_out = {} + O(p^{})", a.p_s, series, order + 1);
            emit_json(&cli.out, &serde_json::json!({ "p_s": a.p_s, "p_out_numerator": a.p_out_numerator, "p_out_series": series }))
        }
        MsdCmd::Cost { p, target, protocols, max_rounds, ten_to_two } => {
            let ps: Vec<Protocol> = protocols.iter().map(|n| builtin_protocol(n.trim(), ten_to_two)).collect::<Result<_>>()?;
            let r = msd::optimize_cost(*p, *target, &ps, *max_rounds)?;
            eprintln!("{}  C = {:.4}  -log10 p = {:.3}", r.sequence.join("-"), r.cost, -r.p_actual.log10());
            emit_json(&cli.out, &r)
        }
    }
}

fn decode(cli: &Cli, cmd: &DecodeCmd) -> Result<bool> {
    let DecodeCmd::One { lattice, error, pauli } = cmd;
    let lat = HctLattice::from_json(&read_json::<LatticeJson>(lattice)?)?;
    let mut err: Vec<usize> = read_json(error)?;
    err.sort_unstable();
    let (correction, success) = match pauli {
        PauliKind::Z => {
            let dec = Decoder::new(&lat);
            let c = dec.decode(&syndrome_of(&lat, &err)?)?;
            let ok = dec.judge(&err, &c)?;
            (c, ok)
        }
        PauliKind::X => {
            let dec = XDecoder::new(&lat)?;
            let c = dec.decode(&dec.syndrome_of(&err)?)?;
            let ok = dec.judge(&err, &c)?;
            (c, ok)
        }
    };
    let mut correction = correction;
    correction.sort_unstable();
    eprintln!("{}", if success { "corrected" } else { "logical failure" });
    emit_json(&cli.out, &correction)?;
    Ok(true)
}

fn run_threshold(cli: &Cli, cmd: &ThresholdCmd) -> Result<()> {
    match cmd {
        ThresholdCmd::Run { config } => {
            let cfg: ExperimentConfig = read_json(config)?;
            let rows = threshold::run(&cfg)?;
            match cli.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    threshold::write_csv(&rows, &mut buf)?;
                    emit_text(&cli.out, &String::from_utf8(buf)?)
                }
                Format::Json => emit_json(&cli.out, &rows),
            }
        }
        ThresholdCmd::Fit { input } => {
            let f = std::fs::File::open(input).with_context(|| format!("opening {}", input.display()))?;
            let rows = threshold::read_csv(f)?;
            let fit = threshold::fit_threshold(&rows)?;
            eprintln!("p_th = {:.5}, mu = {:.3}", fit.p_th, fit.mu);
            emit_json(&cli.out, &fit)
        }
    }
}

fn reports_csv(reports: &[Report]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scenario", "anchor", "status", "expected", "actual"])?;
    for r in reports {
        for a in &r.anchors {
            w.write_record([r.scenario.as_str(), &a.label, &a.status.to_string(), &a.expected, &a.actual])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn reproduce(cli: &Cli, a: &ReproduceArgs) -> Result<bool> {
    if a.scenario == "list" {
        for (n, d) in scenarios::SCENARIOS {
            println!("{n:18} {d}");
        }
        return Ok(true);
    }
    let mut scale = ThresholdScale::default();
    if let Some(l) = a.lattices {
        scale.lattices = l;
    }
    if let Some(t) = a.trials {
        scale.trials = t;
    }
    let opts = ScenarioOptions { seed: cli.seed, data_dir: a.data_dir.clone(), threshold: scale };
    let names: Vec<&str> = if a.scenario == "all" { scenarios::SCENARIOS.iter().map(|s| s.0).collect() } else { vec![a.scenario.as_str()] };
    let mut reports = Vec::new();
    for n in names {
        let r = scenarios::run_scenario(n, &opts)?;
        eprint!("{r}");
        reports.push(r);
    }
    match cli.format {
        Format::Json => emit_json(&cli.out, &reports)?,
        Format::Csv => emit_text(&cli.out, &reports_csv(&reports)?)?,
    }
    Ok(reports.iter().all(Report::passed))
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    match &cli.cmd {
        Cmd::Codes(c) => codes(cli, c).map(|_| true),
        Cmd::Morph(a) => run_morph(cli, a).map(|_| true),
        Cmd::Lattice(c) => lattice(cli, c).map(|_| true),
        Cmd::Verify(c) => verify(cli, c),
        Cmd::Msd(c) => run_msd(cli, c).map(|_| true),
        Cmd::Decode(c) => decode(cli, c),
        Cmd::Threshold(c) => run_threshold(cli, c).map(|_| true),
        Cmd::Reproduce(a) => reproduce(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
