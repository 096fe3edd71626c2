//! `dac`: sampling, exact polynomials, certificates and lattice curves for
//! the divide-and-color model.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Arg, Command};
use dac_core::tree::Status;
use dac_core::DacError;
use thiserror::Error;

use config::{parse_config_text, ConfigError, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] DacError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("certificate status: {0:?}")]
    Certificate(Status),
    #[error("{0}")]
    Usage(#[from] clap::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                DacError::CapExceeded { .. } => 3,
                DacError::InvalidGraph(_)
                | DacError::ParameterRange { .. }
                | DacError::Geometry(_)
                | DacError::Parse { .. }
                | DacError::InvalidArgument(_) => 2,
                _ => 1,
            },
            CliError::Io(_) => 1,
            CliError::Certificate(Status::Inconclusive) => 5,
            CliError::Certificate(_) => 4,
            // --help and --version are not failures
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) => 2,
        }
    }
}

fn graph_args(gadget_n_flag: &'static str) -> Vec<Arg> {
    vec![
        Arg::new("graph")
            .long("graph")
            .default_value("edge")
            .help("edge | path | dk | dn | z2box | file:PATH"),
        Arg::new("k").long("k").help("k for D^k"),
        Arg::new("gadget-n").long(gadget_n_flag).help("n for the parallel gadget D_n"),
        Arg::new("L").long("L").help("box size for z2box: [0,L] x [0,3L]"),
        Arg::new("mode").long("mode").default_value("nn").help("site adjacency for boxes: nn | star"),
    ]
}

fn cli() -> Command {
    let sample = Command::new("sample")
        .about("Draw samples: a hex dump, or the frequency of --event")
        .args(graph_args("gadget-n"))
        .args([
            Arg::new("p").long("p").help("bond parameter"),
            Arg::new("r").long("r").help("colour parameter"),
            Arg::new("samples").long("n").visible_alias("samples").default_value("1000").help("number of samples"),
            Arg::new("seed").long("seed").default_value("1"),
            Arg::new("event").long("event").help("all-black | connect | pivotal | crossing"),
        ]);
    let exact = Command::new("exact")
        .about("Exact connection (h) and pivotality (f) polynomials of a two-terminal graph")
        .args(graph_args("n"))
        .args([
            Arg::new("poly").long("poly").default_value("both").help("h | f | both"),
            Arg::new("eval-h").long("eval-h").value_name("P").help("evaluate h at P"),
            Arg::new("eval-f").long("eval-f").num_args(2).value_names(["P", "R"]).help("evaluate f at (P, R)"),
            Arg::new("max-edges").long("max-edges").default_value("24"),
        ]);
    let certify = Command::new("certify")
        .about("Run an exact certificate")
        .args([
            Arg::new("certificate")
                .required(true)
                .help("dk-nonmonotone | nonbounded-discontinuity | bounded-degree-discontinuity | rcbounds-check"),
            Arg::new("k").long("k").help("dk-nonmonotone: fix k instead of searching"),
            Arg::new("p0").long("p0").help("dk-nonmonotone: fix p_0"),
            Arg::new("grid").long("grid").help("p grid, start:stop:step or a list"),
            Arg::new("nmax").long("nmax").default_value("6").help("nonbounded-discontinuity: largest gadget index"),
            Arg::new("delta").long("delta").default_value("3").help("bounded-degree-discontinuity: degree bound"),
            Arg::new("depths").long("depths").default_value("1 2 3").help("bounded-degree-discontinuity: levels to check"),
            Arg::new("family").long("family").default_value("edge-gadget").help("rcbounds-check: edge-gadget | path-gadget"),
            Arg::new("max-edges").long("max-edges").default_value("24"),
        ]);
    let curve = Command::new("curve")
        .about("Monte Carlo curves on the square lattice")
        .args([
            Arg::new("kind").required(true).help("rc | duality | psi"),
            Arg::new("grid").long("grid").default_value("0:0.4:0.1").help("rc: p grid"),
            Arg::new("p").long("p").default_value("0.2").help("duality, psi: bond parameter"),
            Arg::new("L").long("L").default_value("32").help("box size"),
            Arg::new("samples").long("samples").default_value("20000"),
            Arg::new("seed").long("seed").default_value("1"),
            Arg::new("mode").long("mode").default_value("nn").help("rc: nn | star"),
            Arg::new("nmax").long("nmax").default_value("24").help("psi: largest radius"),
        ]);
    Command::new("dac")
        .about("Divide-and-color percolation toolkit")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .args([
            Arg::new("config").long("config").global(true).help("file of `key = value` lines; flags win"),
            Arg::new("threads")
                .long("threads")
                .global(true)
                .default_value("0")
                .help("worker threads (0: all cores); outputs do not depend on it"),
            Arg::new("out").long("out").global(true).help("write the primary output here instead of stdout"),
        ])
        .subcommands([sample, exact, certify, curve])
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let matches = cli().try_get_matches_from(args)?;
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let file = match sub.get_one::<String>("config") {
        Some(path) => Some(parse_config_text(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let root = cli();
    let known: Vec<String> = root
        .get_arguments()
        .chain(root.find_subcommand(name).expect("parsed subcommand").get_arguments())
        .map(|a| a.get_id().as_str().to_string())
        .collect();
    let mut cfg = RunConfig::resolve(name, &known, sub, file)?;
    let threads: usize = cfg.get("threads")?;
    let out_path = cfg.raw("out").map(str::to_string);
    if name == "certify" {
        let which = cfg.get::<String>("certificate")?;
        cfg.command = format!("certify {which}");
    }
    if name == "curve" {
        let which = cfg.get::<String>("kind")?;
        cfg.command = format!("curve {which}");
    }
    let output = dac_core::exec::with_threads(threads, || commands::dispatch(name, &cfg));
    let (text, status) = output?;
    match out_path {
        Some(path) => std::fs::write(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    match status {
        Some(s) if s != Status::Pass => Err(CliError::Certificate(s)),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            ExitCode::from(CliError::Usage(e).exit_code())
        }
        Err(e) => {
            if !matches!(e, CliError::Certificate(_)) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
