//! Command-line front end: evolve policies, play and explain them, and
//! rebuild run statistics from protocol logs.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use policy2048::engine::{is_game_over, Board};
use policy2048::evolve::{
    history_csv, history_from_protocol, mutate, initial_policy, run_evolution_with, Comparator, EvoConfig,
};
use policy2048::export::{emit_executable, emit_pseudocode, explain, render_explanation};
use policy2048::fitness::{play_game_traced, read_protocol, FitnessStats, ProtocolWriter};
use policy2048::policy::Policy;
use policy2048::rng::{derive_seed, RandomStream};

/// Failure carrying its process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

/// Usage and configuration problems.
fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

/// Valid input the domain cannot handle, e.g. a finished game.
fn domain(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 3, error: error.into() }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "policy2048", version, about = "Evolve and inspect rule-based 2048 policies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an evolution and write the best policy, history and protocol.
    Evolve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Play games with a policy and print per-game results and statistics.
    Play {
        policy: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        games: u32,
        /// Write every decision as a JSON line {board, chosen}.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Explain the move a policy makes on one board.
    Explain {
        policy: PathBuf,
        /// 16 tile values, row-major, space separated.
        #[arg(long)]
        board: String,
        /// Evaluate every rule, not just those up to the firing one.
        #[arg(long)]
        full: bool,
    },
    /// Rebuild the per-generation history CSV from a protocol log.
    Stats {
        protocol: PathBuf,
        /// Config of the run, for a non-default objective priority.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write the pseudocode or the Python module of a policy.
    Export {
        policy: PathBuf,
        /// Output file; `.py` selects the Python module, anything else pseudocode.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        python: bool,
    },
    /// Print a random policy as JSON: an initial policy after a number of mutations.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        mutations: u32,
    },
}

fn load_policy(path: &Path) -> Result<Policy, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    Policy::from_json(&text)
        .with_context(|| format!("loading {}", path.display()))
        .map_err(usage)
}

fn load_config(path: Option<&Path>) -> Result<EvoConfig, Failure> {
    match path {
        Some(p) => EvoConfig::from_file(p).map_err(usage),
        None => Ok(EvoConfig::default()),
    }
}

fn cmd_evolve(config: Option<&Path>, out: &Path, seed: Option<u64>) -> CmdResult {
    let mut cfg = load_config(config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(usage)?;
    fs::create_dir_all(out)?;
    let mut protocol = ProtocolWriter::create(&out.join("protocol.jsonl"))?;
    let run = run_evolution_with(&cfg, |record| {
        if record.ind == 0 {
            eprint!("\rgeneration {}", record.gen);
        }
        protocol.write_record(record)
    })
    .map_err(usage)?;
    eprintln!();
    protocol.finish()?;

    let best = &run.best.policy;
    fs::write(out.join("best_policy.json"), best.to_json_pretty() + "\n")?;
    fs::write(out.join("best_policy.txt"), emit_pseudocode(best))?;
    fs::write(out.join("best_policy.py"), emit_executable(best))?;
    fs::write(out.join("history.csv"), history_csv(&run.history))?;

    let stats = run.best.fitness.expect("best individual is evaluated");
    println!("generations: {}", run.generations);
    println!("games played: {}", run.games_played);
    println!("best policy found in generation {}", run.best_generation);
    println!(
        "highest tile: max {} avg {} | total score: avg {}",
        stats.highest_tile.max, stats.highest_tile.avg, stats.total_score.avg
    );
    print!("{}", emit_pseudocode(best));
    Ok(())
}

fn cmd_play(policy: &Path, seed: u64, games: u32, trace: Option<&Path>) -> CmdResult {
    let policy = load_policy(policy)?;
    if games == 0 {
        return Err(usage(anyhow::anyhow!("--games must be at least 1")));
    }
    let mut trace_out = trace.map(File::create).transpose()?.map(BufWriter::new);
    let mut results = Vec::with_capacity(games as usize);
    for i in 0..games {
        let game_seed = derive_seed(&[seed, i as u64]);
        let mut write_err = None;
        let result = play_game_traced(&policy, game_seed, |board, dir| {
            if let (Some(out), None) = (trace_out.as_mut(), &write_err) {
                let line = serde_json::json!({ "board": board.cells(), "chosen": dir });
                if let Err(e) = writeln!(out, "{line}") {
                    write_err = Some(e);
                }
            }
        });
        if let Some(e) = write_err {
            return Err(e.into());
        }
        println!(
            "game {i}: seed {} score {} max_tile {} moves {}",
            result.seed, result.total_score, result.highest_tile, result.moves
        );
        results.push(result);
    }
    if let Some(out) = trace_out.as_mut() {
        out.flush()?;
    }
    let stats = FitnessStats::from_games(&results);
    println!("stats: {}", serde_json::to_string(&stats).expect("stats serialize"));
    Ok(())
}

fn cmd_explain(policy: &Path, board: &str, full: bool) -> CmdResult {
    let policy = load_policy(policy)?;
    let board: Board = board.parse().context("invalid --board").map_err(usage)?;
    if is_game_over(&board) {
        return Err(domain(anyhow::anyhow!("no legal move")));
    }
    let trace = explain(&policy, &board, full).map_err(domain)?;
    print!("{}", render_explanation(&policy, &trace));
    println!("{}", serde_json::to_string(&trace).expect("trace serializes"));
    Ok(())
}

fn cmd_stats(protocol: &Path, config: Option<&Path>) -> CmdResult {
    let cfg = load_config(config)?;
    let records = read_protocol(protocol)
        .with_context(|| format!("reading {}", protocol.display()))
        .map_err(usage)?;
    if records.is_empty() {
        return Err(usage(anyhow::anyhow!("{} contains no records", protocol.display())));
    }
    let cmp = Comparator::new(cfg.objective_priority, cfg.comparator);
    print!("{}", history_csv(&history_from_protocol(&records, &cmp)));
    Ok(())
}

fn cmd_export(policy: &Path, out: Option<&Path>, python: bool) -> CmdResult {
    let policy = load_policy(policy)?;
    let python = python || out.is_some_and(|p| p.extension().is_some_and(|e| e == "py"));
    let text = if python { emit_executable(&policy) } else { emit_pseudocode(&policy) };
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_random(seed: u64, mutations: u32) -> CmdResult {
    let mut rng = RandomStream::new(seed);
    let mut policy = initial_policy(&mut rng);
    for _ in 0..mutations {
        policy = mutate(&policy, &mut rng).0;
    }
    println!("{}", policy.to_json());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Evolve { config, out, seed } => cmd_evolve(config.as_deref(), out, *seed),
        Command::Play { policy, seed, games, trace } => cmd_play(policy, *seed, *games, trace.as_deref()),
        Command::Explain { policy, board, full } => cmd_explain(policy, board, *full),
        Command::Stats { protocol, config } => cmd_stats(protocol, config.as_deref()),
        Command::Export { policy, out, python } => cmd_export(policy, out.as_deref(), *python),
        Command::Random { seed, mutations } => cmd_random(*seed, *mutations),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
