use clap::{Parser, ValueEnum};
use roughwet_cli::config::parse_config;
use roughwet_cli::{run, Subcommand, EXIT_OK, EXIT_USAGE};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    /// Effective wetting quantities for `wetting.gamma`
    Analyze,
    /// Explicit unreachability check of the groove domain
    Certify,
    /// Volume-constrained droplet on the configured domain
    Minimize,
    /// ε-sweep against the effective flat-wall model
    Converge,
}

/// Wetting on rough walls.
#[derive(Debug, Parser)]
#[command(name = "roughwet", version)]
struct Cli {
    command: Command,
    /// TOML configuration file
    config: PathBuf,
    /// Override a configuration key, e.g. `--set wetting.gamma=0.4`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_OK as u8 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: invalid thread count {n}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let cfg = match parse_config(&cli.config, &cli.set) {
        Ok(c) => c,
        Err(violations) => {
            for v in violations {
                eprintln!("error: {v}");
            }
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let cmd = match cli.command {
        Command::Analyze => Subcommand::Analyze,
        Command::Certify => Subcommand::Certify,
        Command::Minimize => Subcommand::Minimize,
        Command::Converge => Subcommand::Converge,
    };
    let mut out = String::new();
    let result = run(cmd, &cfg, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
