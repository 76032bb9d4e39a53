use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use hedonic_cli::commands::{self, parse_model, parse_notions, Format, HuntArgs, Output};
use hedonic_cli::server::{self, ServiceConfig};
use hedonic_core::search::HuntConfig;
use hedonic_core::stability::StabilityNotion;
use hedonic_core::PreferenceModel;

#[derive(Parser)]
#[command(
    name = "hedonic",
    version,
    about = "Hedonic games on friendship graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GameArgs {
    /// Game document (JSON).
    #[arg(long)]
    game: PathBuf,
    /// Override every player's preference model: FO, EO, FR, FR:sum, SF, EQ, AL.
    #[arg(long, value_parser = parse_model)]
    model: Option<PreferenceModel>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Per-player utilities under a partition.
    Eval {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Stability verdicts with witnesses; exits 1 when any notion is violated.
    Check {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        partition: PathBuf,
        /// Comma-separated: core, ir, nash, is. Defaults to all.
        #[arg(long, value_delimiter = ',')]
        notions: Vec<String>,
    },
    /// List every core-stable partition.
    Core {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Search all friendship graphs up to --max-n for an empty core.
    Hunt {
        #[arg(long, value_parser = parse_model)]
        model: PreferenceModel,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long)]
        connected_only: bool,
        /// Resume from / record progress in this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 1024)]
        range_size: u64,
        /// Report file; certificates for each counterexample are written next to it.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Time budget for a single core computation.
        #[arg(long, default_value_t = 10_000)]
        budget_ms: u64,
    },
}

fn read(path: &Path) -> Result<String, Output> {
    fs::read_to_string(path).map_err(|e| Output::input_error(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Output {
    match command {
        Command::Eval { game, partition } => {
            let (g, p) = match (read(&game.game), read(&partition)) {
                (Ok(g), Ok(p)) => (g, p),
                (Err(e), _) | (_, Err(e)) => return e,
            };
            commands::eval(&g, &p, game.model, game.format)
        }
        Command::Check {
            game,
            partition,
            notions,
        } => {
            let (g, p) = match (read(&game.game), read(&partition)) {
                (Ok(g), Ok(p)) => (g, p),
                (Err(e), _) | (_, Err(e)) => return e,
            };
            let notions = if notions.is_empty() {
                StabilityNotion::ALL.to_vec()
            } else {
                match parse_notions(&notions) {
                    Ok(n) => n,
                    Err(e) => return Output::input_error(e),
                }
            };
            commands::check(&g, &p, &notions, game.model, game.format)
        }
        Command::Core { game } => match read(&game.game) {
            Ok(g) => commands::core(&g, game.model, game.format),
            Err(e) => e,
        },
        Command::Hunt {
            model,
            max_n,
            connected_only,
            checkpoint,
            workers,
            range_size,
            output,
            format,
        } => {
            if range_size == 0 || workers == 0 {
                return Output::input_error("--range-size and --workers must be positive");
            }
            let mut config = HuntConfig::new(model, max_n, connected_only);
            config.workers = workers;
            config.range_size = range_size;
            commands::hunt(&HuntArgs {
                config,
                checkpoint: checkpoint.as_deref(),
                output: output.as_deref(),
                format,
            })
        }
        Command::Serve { port, budget_ms } => {
            let config = ServiceConfig {
                core_budget: Duration::from_millis(budget_ms),
            };
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => return Output::input_error(e),
            };
            match runtime.block_on(server::serve(port, config)) {
                Ok(()) => Output {
                    stdout: String::new(),
                    stderr: String::new(),
                    code: 0,
                },
                Err(e) => Output::input_error(format!("serve: {e}")),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out = run(cli.command);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
