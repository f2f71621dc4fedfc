use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use loopforge_cli::{commands, threads_from_env, Outcome, ERROR_EXIT};

#[derive(Parser)]
#[command(name = "loopforge", version, about = "Curve surgery, Riesz potentials and div-curl diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a closed curve into loops of controlled ball growth.
    Surgery {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the Riesz potential of a curve measure on a grid.
    Potential {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lorentz and layer-cake norms of a field.
    Norms {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Solve curl Z = F, div Z = 0.
    Divcurl {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve −ΔU = F componentwise.
    Poisson {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        grad: Option<PathBuf>,
    },
    /// Run a verification campaign.
    Verify {
        #[arg(long)]
        campaign: PathBuf,
        /// Overrides the campaign's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Surgery { curve, epsilon, delta, out } => commands::surgery(&curve, epsilon, delta, out.as_deref()),
        Command::Potential { curve, alpha, grid, out } => commands::potential(&curve, alpha, grid, &out),
        Command::Norms { field, p, q } => commands::norms(&field, p, q),
        Command::Divcurl { field, out } => commands::divcurl(&field, &out),
        Command::Poisson { field, out, grad } => commands::poisson(&field, &out, grad.as_deref()),
        Command::Verify { campaign, out } => commands::verify(&campaign, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = threads_from_env() {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(ERROR_EXIT as u8);
        }
    }
    match run(cli) {
        Ok(o) => ExitCode::from(o.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT as u8)
        }
    }
}
