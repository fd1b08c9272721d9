//! Command-line frontend over the qtangles library: analyze a state,
//! sweep a family, classify, or run the identity selftest.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 failed constraint or
//! selftest check.

use clap::{Args, Parser, Subcommand};
use qtangles::analysis;
use qtangles::monogamy::{l_family_csv, linspace, sweep_l_family};
use qtangles::qstate::{read_state_json, PureState};
use qtangles::selftest::{run_all, SelftestConfig};
use qtangles::tangles::{RoofOptions, DEFAULT_SEED};
use qtangles::transfer::{apply_cnot_chain, transfer_csv};
use qtangles::zoo::{self, ZooName};
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qtangles", version, about = "Tangles and monogamy constraints of few-qubit pure states")]
struct Cli {
    /// Worker threads for sweeps and the convex-roof optimizer
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StateSource {
    /// JSON state file: {"n_qubits": n, "amplitudes": [[re, im], ...]}
    #[arg(long, conflicts_with = "zoo")]
    state: Option<PathBuf>,

    /// Built-in state name (GHZ4, CLUSTER, BELL_PRODUCT, L_AIA, CHI, PSI_S, W_TILDE, W4)
    #[arg(long)]
    zoo: Option<String>,

    /// Zoo state parameter as key=value (repeatable), e.g. --param a=1.5
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Full tangle, constraint, and classification report as JSON
    Analyze {
        #[command(flatten)]
        source: StateSource,

        /// Focus qubit
        #[arg(long, default_value_t = 1)]
        focus: usize,

        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,

        /// Convex-roof restarts
        #[arg(long, default_value_t = 32)]
        restarts: usize,

        /// Convex-roof iterations per restart
        #[arg(long, default_value_t = 400)]
        iterations: usize,

        /// Zero threshold for classification verdicts
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,

        /// Write the JSON document here instead of stdout
        #[arg(long)]
        json: Option<PathBuf>,
    },

    /// Parameter sweeps: the L_{a,ia,(ia)2} family or the transfer circuit
    Sweep {
        /// Family name (currently L_AIA)
        #[arg(long, conflicts_with = "transfer")]
        family: Option<String>,

        #[arg(long, default_value_t = 0.0)]
        a_min: f64,

        #[arg(long, default_value_t = 3.0)]
        a_max: f64,

        /// Run the CNOT transfer model over an x-grid instead
        #[arg(long)]
        transfer: bool,

        #[arg(long, default_value_t = 1.05)]
        x_min: f64,

        #[arg(long, default_value_t = 10.0)]
        x_max: f64,

        /// CNOT count for the transfer model
        #[arg(long, default_value_t = 8)]
        m: usize,

        #[arg(long, default_value_t = 61)]
        points: usize,

        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,

        /// Write CSV here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
    },

    /// Run every identity suite and print one pass/fail line per property
    Selftest {
        /// Random states per suite; 0 runs only the zoo checks
        #[arg(long, default_value_t = 200)]
        n_random: usize,

        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },

    /// Group I-IV classification with the evidence table
    Classify {
        #[command(flatten)]
        source: StateSource,

        /// Zero threshold for nonzero verdicts
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,

        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>, String> {
    let mut map = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("--param needs key=value, got '{item}'"))?;
        let value: f64 = v
            .parse()
            .map_err(|_| format!("--param {k}: '{v}' is not a number"))?;
        map.insert(k.to_string(), value);
    }
    Ok(map)
}

fn load_state(source: &StateSource) -> Result<(PureState, String, BTreeMap<String, f64>), String> {
    match (&source.state, &source.zoo) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let state = read_state_json(&text).map_err(|e| e.to_string())?;
            Ok((state, format!("file:{}", path.display()), BTreeMap::new()))
        }
        (None, Some(name)) => {
            let zoo_name: ZooName = name.parse().map_err(|e: qtangles::Error| e.to_string())?;
            let params = parse_params(&source.params)?;
            let named = zoo::make(zoo_name, &params).map_err(|e| e.to_string())?;
            Ok((named.state, format!("zoo:{zoo_name}"), named.params))
        }
        _ => Err("exactly one of --state or --zoo is required".into()),
    }
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    match cli.command {
        Command::Analyze {
            source,
            focus,
            seed,
            restarts,
            iterations,
            tol,
            json,
        } => {
            let (state, src, params) = load_state(&source)?;
            let opts = RoofOptions {
                restarts,
                iterations,
                seed,
            };
            let out = analysis::analyze(&state, src, params, focus, &opts, tol)
                .map_err(|e| e.to_string())?;
            let ok = out.constraints_pass();
            write_or_print(&json, &(out.to_json() + "\n"))?;
            Ok(if ok { 0 } else { 2 })
        }
        Command::Sweep {
            family,
            a_min,
            a_max,
            transfer,
            x_min,
            x_max,
            m,
            points,
            seed,
            csv,
        } => {
            let text = if transfer {
                let grid = linspace(x_min, x_max, points).map_err(|e| e.to_string())?;
                if grid.iter().any(|&x| x <= 1.0) {
                    return Err("transfer sweep needs x > 1 over the whole grid".into());
                }
                let runs: Result<Vec<_>, _> =
                    grid.iter().map(|&x| apply_cnot_chain(x, m.max(1), m)).collect();
                transfer_csv(&runs.map_err(|e| e.to_string())?)
            } else {
                match family.as_deref() {
                    Some("L_AIA") | Some("l_aia") | None => {}
                    Some(other) => return Err(format!("unknown family '{other}'")),
                }
                let grid = linspace(a_min, a_max, points).map_err(|e| e.to_string())?;
                let opts = RoofOptions {
                    seed,
                    ..Default::default()
                };
                let rows = sweep_l_family(&grid, &opts).map_err(|e| e.to_string())?;
                l_family_csv(&rows)
            };
            write_or_print(&csv, &text)?;
            Ok(0)
        }
        Command::Selftest { n_random, seed } => {
            let cfg = SelftestConfig {
                n_random,
                seed,
                roof: RoofOptions {
                    seed,
                    ..Default::default()
                },
            };
            let results = run_all(&cfg);
            let mut all_pass = true;
            for r in &results {
                println!(
                    "{} {} - {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                all_pass &= r.pass;
            }
            println!(
                "{} of {} checks passed",
                results.iter().filter(|r| r.pass).count(),
                results.len()
            );
            Ok(if all_pass { 0 } else { 2 })
        }
        Command::Classify { source, tol, seed } => {
            let (state, src, _) = load_state(&source)?;
            let opts = RoofOptions {
                seed,
                ..Default::default()
            };
            let label = zoo::classify(&state, tol, &opts).map_err(|e| e.to_string())?;
            println!("input: {src}");
            println!("group: {}", label.group);
            println!(
                "predicates: four_way={} two_tangles={} three_tangles={} four_tangles={}",
                label.four_way_entangled,
                label.any_two_tangle,
                label.any_three_tangle,
                label.any_four_tangle
            );
            println!("evidence (threshold {:.1e}):", label.zero_tol);
            for (name, ev) in &label.evidence {
                println!(
                    "  {:<20} {:>22.15e}  {}",
                    name,
                    ev.value,
                    if ev.nonzero { "nonzero" } else { "zero" }
                );
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
