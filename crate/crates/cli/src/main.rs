//! `qdesk`: seedable command-line demos for the simulator.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, Status};

#[derive(Debug, Parser)]
#[command(name = "qdesk", version, about = "Desk-scale quantum computation demos")]
struct Cli {
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = qdesk::defaults::SEED)]
    seed: u64,

    /// Print one `stage key=value` line per fact instead of prose.
    #[arg(long, global = true)]
    records: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prepare (|01> + |10>)/sqrt 2 and measure it.
    Epr,
    /// Classify f: {0,1} -> {0,1} with one oracle query.
    Deutsch {
        /// const0, const1, identity or negation.
        function: String,
    },
    /// Run the ripple-carry adder on a and b.
    Add {
        a: u64,
        b: u64,
        #[arg(long, default_value_t = qdesk::defaults::ADDER_WIDTH)]
        bits: usize,
    },
    /// Run the adder backwards to compute a - b.
    Sub {
        a: u64,
        b: u64,
        #[arg(long, default_value_t = qdesk::defaults::ADDER_WIDTH)]
        bits: usize,
    },
    /// a^x mod N on the modular multiplier network.
    Modexp { a: u64, x: u64, n: u64 },
    /// Compute f^4 with an increment network, copy, and uncompute.
    Garbage {
        /// Basis input for the register trace, 0..=7.
        #[arg(long, default_value_t = 3)]
        input: u64,
    },
    /// Factor N by period finding.
    Shor {
        n: u64,
        /// Base coprime to N; drawn at random per attempt if omitted.
        #[arg(long)]
        base: Option<u64>,
        /// First-register width; defaults to 2 ceil(log2 N) + 3.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = qdesk::defaults::SHOR_MAX_ATTEMPTS)]
        attempts: usize,
    },
    /// Build the trapped-ion CNOT from laser pulses.
    IontrapCnot {
        #[arg(long, default_value_t = qdesk::defaults::ETA)]
        eta: f64,
        #[arg(long, default_value_t = qdesk::defaults::RABI)]
        rabi: f64,
        #[arg(long, default_value_t = qdesk::defaults::PHONON_CUTOFF)]
        cutoff: usize,
        /// Initial phonon number of the center-of-mass mode.
        #[arg(long, default_value_t = 0)]
        phonon: usize,
    },
    /// Dephase an n-qubit GHZ state.
    Dephase {
        #[arg(long, default_value_t = 1)]
        qubits: usize,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Single time point; sweeps the default gamma*t grid if omitted.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = qdesk::defaults::TRAJECTORIES)]
        trajectories: usize,
    },
    /// Run one cycle of a 3-qubit code.
    Qec {
        /// amplitude or phase.
        code: String,
        /// Errors such as x0 or z2; repeat for several.
        #[arg(long = "error")]
        errors: Vec<String>,
        /// toffoli or measure.
        #[arg(long, default_value = "toffoli")]
        recovery: String,
        #[arg(long, default_value_t = 0.6)]
        alpha: f64,
        #[arg(long, default_value_t = 0.8)]
        beta: f64,
    },
    /// Check that a bit flip on a CNOT control spreads to the target.
    ErrorProp {
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Run a circuit file on |0...0>.
    Circuit { path: std::path::PathBuf },
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let seed = cli.seed;
    let result = match &cli.command {
        Command::Epr => commands::epr(seed),
        Command::Deutsch { function } => commands::deutsch(function, seed),
        Command::Add { a, b, bits } => commands::add(*a, *b, *bits),
        Command::Sub { a, b, bits } => commands::sub(*a, *b, *bits),
        Command::Modexp { a, x, n } => commands::modexp(*a, *x, *n),
        Command::Garbage { input } => commands::garbage(*input),
        Command::Shor { n, base, m, attempts } => commands::shor(*n, *base, *m, *attempts, seed),
        Command::IontrapCnot {
            eta,
            rabi,
            cutoff,
            phonon,
        } => commands::iontrap_cnot(*eta, *rabi, *cutoff, *phonon),
        Command::Dephase {
            qubits,
            gamma,
            t,
            trajectories,
        } => commands::dephase(*qubits, *gamma, *t, *trajectories, seed),
        Command::Qec {
            code,
            errors,
            recovery,
            alpha,
            beta,
        } => commands::qec(code, errors, recovery, *alpha, *beta, seed),
        Command::ErrorProp { samples } => commands::error_prop(*samples, seed),
        Command::Circuit { path } => commands::circuit(path, seed),
    };
    result.map(|mut o| {
        o.seed = seed;
        o
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.render(cli.records));
            match outcome.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Failed => ExitCode::from(2),
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
