use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use horodyn_cli::commands::{self, HorocodeArgs, RhoLambdaArgs, WalkArgs};
use horodyn_cli::emit::Output;
use horodyn_cli::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "horodyn",
    version,
    about = "Horofunction codings, transfer operators and cogrowth"
)]
struct Cli {
    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sphere sizes, growth rate and Coornaert constant
    Growth {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 20)]
        radius: usize,
        #[arg(long, default_value_t = 12)]
        bfs_radius: usize,
        #[arg(long, default_value = "json")]
        out: Output,
    },
    /// Subshift of finite type utilities
    Sft {
        #[command(subcommand)]
        command: SftCommand,
    },
    /// Horofunction codings
    Horocode {
        #[command(subcommand)]
        command: HorocodeCommand,
    },
    /// Spectral radius of the transfer operator
    Rho {
        #[arg(long)]
        sft: PathBuf,
        /// const:<value> or table:<file>
        #[arg(long, default_value = "const:1")]
        potential: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 40)]
        iters: usize,
        #[arg(long, default_value = "csv")]
        out: Output,
    },
    /// Spectral radius of the twisted operator on a truncated Schreier graph
    RhoLambda {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value_t = 10)]
        trunc: usize,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 60)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed_radius: usize,
        #[arg(long, default_value = "exact")]
        backend: String,
        #[arg(long, default_value = "csv")]
        out: Output,
    },
    /// Compare the twisted spectral radius against the growth bound
    GapReport {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        out: Output,
    },
    /// Return probabilities of the sphere-measure walk on cosets
    Walk {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "trivial")]
        subgroup: String,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        delta: usize,
        #[arg(long, default_value_t = 24)]
        nmax: usize,
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long, default_value = "csv")]
        out: Output,
    },
    /// Registered experiments
    Experiment {
        #[command(subcommand)]
        command: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum SftCommand {
    /// Communicating classes and their periods
    Scc {
        #[arg(long)]
        sft: PathBuf,
        #[arg(long, default_value = "json")]
        out: Output,
    },
}

#[derive(Subcommand)]
enum HorocodeCommand {
    /// Build the coding of a group
    Build {
        #[arg(long)]
        group: String,
        /// Comma-separated generator order
        #[arg(long)]
        order: Option<String>,
        #[arg(long = "R0", default_value_t = 1)]
        r0: usize,
        #[arg(long = "L0", default_value_t = 3)]
        l0: usize,
        #[arg(long)]
        r_stab: Option<usize>,
        #[arg(long, default_value = "exact")]
        backend: String,
        #[arg(long, default_value = "json")]
        out: Output,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run one experiment from a JSON config
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<Output>,
    },
    /// List registered experiments
    List,
}

fn dispatch(cli: Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("--threads {n}: {e}")))?;
    }
    match cli.command {
        Command::Growth {
            group,
            radius,
            bfs_radius,
            out,
        } => commands::growth(&group, radius, bfs_radius, &out),
        Command::Sft {
            command: SftCommand::Scc { sft, out },
        } => commands::sft_scc(&sft, &out),
        Command::Horocode {
            command:
                HorocodeCommand::Build {
                    group,
                    order,
                    r0,
                    l0,
                    r_stab,
                    backend,
                    out,
                },
        } => commands::horocode_build(
            &HorocodeArgs {
                group: &group,
                order: order.as_deref(),
                r0,
                l0,
                r_stab,
                backend: &backend,
            },
            &out,
        ),
        Command::Rho {
            sft,
            potential,
            depth,
            iters,
            out,
        } => commands::rho(&sft, &potential, depth, iters, &out),
        Command::RhoLambda {
            group,
            subgroup,
            trunc,
            depth,
            iters,
            seed_radius,
            backend,
            out,
        } => commands::rho_lambda_cmd(
            &RhoLambdaArgs {
                group: &group,
                subgroup: &subgroup,
                trunc,
                depth,
                iters,
                seed_radius,
                backend: &backend,
            },
            &out,
        ),
        Command::GapReport {
            group,
            subgroup,
            config,
            out,
        } => commands::gap_report(&group, &subgroup, config.as_deref(), &out),
        Command::Walk {
            group,
            subgroup,
            ell,
            delta,
            nmax,
            trunc,
            out,
        } => commands::walk(
            &WalkArgs {
                group: &group,
                subgroup: &subgroup,
                ell,
                delta,
                n_max: nmax,
                trunc,
            },
            &out,
        ),
        Command::Experiment {
            command: ExperimentCommand::Run { config, out },
        } => commands::experiment_run(&config, out.as_ref()),
        Command::Experiment {
            command: ExperimentCommand::List,
        } => commands::experiment_list(),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 4 } else { 0 });
        }
    };
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            e.exit_code()
        }
    };
    eprintln!("wall-clock {:.3} s", started.elapsed().as_secs_f64());
    ExitCode::from(code as u8)
}
