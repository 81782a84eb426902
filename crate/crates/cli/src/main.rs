use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lpp_ensembles::mclab::{experiments, write_csv, Config};
use lpp_ensembles::Error;

/// Monte Carlo experiments on LPP, Dyson and avoiding-bridge ensembles.
///
/// Settings come from `--config FILE` (key=value lines), then `-p KEY=VALUE`,
/// then the named flags; later sources win. Output is CSV on stdout or `--out`.
#[derive(Parser)]
#[command(name = "mc-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// M^ℓ_n(n) from the DP against GUE top eigensums (keys: refine).
    SimulateLpp(Common),
    /// Hermitian Brownian motion at time n against direct GUE draws.
    SimulateDyson(Common),
    /// Avoiding-bridge closeness probabilities and slope (keys: a, b, x, phis, entrance, exit, correction).
    EstimateClose(Common),
    /// NearGeod probabilities on scaled Dyson or LPP (keys: source=gue|lpp, x, rs).
    EstimateNeargeod(Common),
    /// Karlin–McGregor determinant against rejection acceptance (keys: a, b, entrance, exit).
    CheckKm(Common),
    /// One-point marginal before and after a Gibbs resampling (keys: block_a, block_b, resample_k, curve, x).
    CheckGibbs(Common),
    /// Jump-ensemble invariant audit or oracle comparison (keys: mode=audit|oracle, t, d_ip, spacing, samples).
    JumpDemo(Common),
    /// Regular-sequence checks on scaled Dyson, or GUE edge tails (keys: source=dyson|gue, zs, s_lower, s_upper, ks, ts).
    CheckRegularity(Common),
    /// Sup of the scaled Dyson curve minus its chord against the Brownian bridge (keys: big_k, d, ss).
    BridgeCompare(Common),
}

impl Command {
    fn split(&self) -> (&'static str, &Common) {
        match self {
            Command::SimulateLpp(c) => ("simulate-lpp", c),
            Command::SimulateDyson(c) => ("simulate-dyson", c),
            Command::EstimateClose(c) => ("estimate-close", c),
            Command::EstimateNeargeod(c) => ("estimate-neargeod", c),
            Command::CheckKm(c) => ("check-km", c),
            Command::CheckGibbs(c) => ("check-gibbs", c),
            Command::JumpDemo(c) => ("jump-demo", c),
            Command::CheckRegularity(c) => ("check-regularity", c),
            Command::BridgeCompare(c) => ("bridge-compare", c),
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    /// CSV destination (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment setting KEY=VALUE (repeatable).
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

impl Common {
    fn config(&self) -> Result<Config, Error> {
        let mut cfg = match &self.config {
            Some(p) => Config::from_file(p)?,
            None => Config::new(),
        };
        for p in &self.params {
            let Some((k, v)) = p.split_once('=') else {
                return Err(Error::InvalidInput(format!("expected KEY=VALUE, got {p:?}")));
            };
            cfg.set(k.trim(), v.trim());
        }
        let named = [
            ("seed", self.seed.map(|v| v.to_string())),
            ("n", self.n.map(|v| v.to_string())),
            ("k", self.k.map(|v| v.to_string())),
            ("steps", self.steps.map(|v| v.to_string())),
            ("trials", self.trials.map(|v| v.to_string())),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                cfg.set(k, &v);
            }
        }
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::GridMismatch(_) | Error::FavFailure(_) => 2,
        Error::RejectionExhausted { .. } => 3,
        Error::Numerical(_) => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, common) = cli.command.split();
    let result = common
        .config()
        .and_then(|cfg| experiments::run(name, &cfg))
        .and_then(|rows| write_csv(common.out.as_deref(), &rows));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mc-lab {name}: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
