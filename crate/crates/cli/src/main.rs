use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use mixsing::nondegen::ProbeConfig;
use mixsing_cli::commands::{self, ProbeMode};
use mixsing_cli::{render, CliError};
use serde::Serialize;

/// Newton boundaries, non-degeneracy probes and link invariants of mixed
/// polynomials in z1, zb1, z2, zb2, ...
#[derive(Parser)]
#[command(name = "mixsing", version)]
struct Cli {
    /// Print a text summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

/// `u64` or `random`.
#[derive(Clone, Copy, Debug)]
enum Seed {
    Fixed(u64),
    Random,
}

impl FromStr for Seed {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "random" {
            return Ok(Seed::Random);
        }
        s.parse().map(Seed::Fixed).map_err(|_| format!("expected an unsigned integer or `random`, got `{s}`"))
    }
}

impl Seed {
    fn resolve(self) -> u64 {
        match self {
            Seed::Fixed(s) => s,
            Seed::Random => rand::random(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Nondegenerate,
    Strong,
    True,
    SuperStrong,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton boundary (n = 2) or the face of one weight (any n).
    Newton {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Comma-separated weight, e.g. `2,3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weight: Option<Vec<i64>>,
        /// Emit the vertex polyline as `x,y` CSV.
        #[arg(long)]
        plot_data: bool,
    },
    /// Full pipeline for a plane curve.
    Analyze {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "0")]
        seed: Seed,
    },
    /// Critical point search on faces.
    Probe {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_enum, default_value = "nondegenerate")]
        mode: ModeArg,
        #[arg(long, default_value = "0")]
        seed: Seed,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        /// Probe only the face of this weight.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weight: Option<Vec<i64>>,
    },
    /// Number of link components.
    Lkn {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 2048)]
        steps: usize,
        #[arg(long, default_value = "0")]
        seed: Seed,
    },
    /// Regular fan of the dual Newton diagram with multiplicities.
    Fan {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Monodromy zeta function and Milnor number.
    Zeta {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "0")]
        seed: Seed,
    },
}

fn emit<T: Serialize>(pretty: bool, report: &T, text: impl FnOnce(&T) -> String) {
    if pretty {
        print!("{}", text(report));
    } else {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
    }
}

fn run(cli: Cli) -> Result<(), (String, CliError)> {
    let p = cli.pretty;
    let tag = |name: &str| {
        let name = name.to_string();
        move |e| (name, e)
    };
    match cli.cmd {
        Cmd::Newton { expr, weight, plot_data } => {
            if plot_data {
                print!("{}", commands::plot_data(&expr).map_err(tag("newton"))?);
            } else {
                let r = commands::newton(&expr, weight.as_deref()).map_err(tag("newton"))?;
                emit(p, &r, render::newton);
            }
        }
        Cmd::Analyze { expr, seed } => {
            let r = commands::analyze(&expr, seed.resolve()).map_err(tag("analyze"))?;
            emit(p, &r, render::analyze);
        }
        Cmd::Probe { expr, mode, seed, starts, iters, weight } => {
            let mode = match mode {
                ModeArg::Nondegenerate => ProbeMode::NonDegenerate,
                ModeArg::Strong => ProbeMode::Strong,
                ModeArg::True => ProbeMode::True,
                ModeArg::SuperStrong => ProbeMode::SuperStrong,
            };
            let cfg = ProbeConfig { starts, iters, seed: seed.resolve(), ..ProbeConfig::default() };
            let r = commands::probe(&expr, mode, &cfg, weight.as_deref()).map_err(tag("probe"))?;
            emit(p, &r, render::probe);
        }
        Cmd::Lkn { expr, steps, seed } => {
            let r = commands::lkn(&expr, steps, seed.resolve()).map_err(tag("lkn"))?;
            emit(p, &r, render::lkn);
        }
        Cmd::Fan { expr } => {
            let r = commands::fan(&expr).map_err(tag("fan"))?;
            emit(p, &r, render::fan);
        }
        Cmd::Zeta { expr, seed } => {
            let r = commands::zeta(&expr, seed.resolve()).map_err(tag("zeta"))?;
            emit(p, &r, render::zeta);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the input-error code; help and version are successes.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let pretty = cli.pretty;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((command, e)) => {
            eprintln!("mixsing {command}: {e}");
            if !pretty {
                let r = commands::error_report(&command, &e);
                println!("{}", serde_json::to_string_pretty(&r).expect("reports serialize"));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
