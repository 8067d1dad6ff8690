//! `exotic`: command-line front end for the field, tower, rank-one,
//! unipotent, Sp4 and reconstruction engines.

mod commands;
mod context;
mod suite;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use context::{CliError, FieldArgs};

#[derive(Parser)]
#[command(
    name = "exotic",
    version,
    about = "Exact computations in mixed-type groups over F_p(t,u,v)"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Debug)]
struct Global {
    /// Characteristic (2, 3 or 5).
    #[arg(short = 'p', global = true)]
    p: Option<u32>,
    /// Comma-separated variable names, e.g. "t,u,v".
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Tower / indifferent / suite configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Exponent bound for torus searches.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field elements.
    #[command(subcommand)]
    Field(FieldCmd),
    /// λ-coordinates of b over K^p[a].
    Lambda {
        /// Comma-separated tuple a.
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        b: String,
    },
    #[command(subcommand)]
    Tower(ValidateCmd),
    #[command(subcommand)]
    Indifferent(ValidateCmd),
    /// SL2(L) inside SL2(K).
    #[command(subcommand)]
    Sl2(Sl2Cmd),
    /// Unipotent groups of type G2 and C2.
    #[command(subcommand)]
    U(UCmd),
    /// Sp4 over an indifferent set.
    #[command(subcommand)]
    Sp4(Sp4Cmd),
    /// Recover field operations from a black-box unipotent group.
    Reconstruct {
        kind: KindArg,
        /// Use an oracle with a deliberately wrong multiplication.
        #[arg(long)]
        corrupt: bool,
    },
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Print the canonical form of an expression.
    Eval { expr: String },
}

#[derive(Subcommand)]
enum ValidateCmd {
    /// Validate a configuration file (or --config).
    Validate { path: Option<PathBuf> },
}

#[derive(Subcommand)]
enum Sl2Cmd {
    Bruhat {
        /// "a;b;c;d"
        #[arg(long)]
        matrix: String,
    },
    Member {
        #[arg(long)]
        matrix: String,
    },
    /// Factor a torus coordinate into elements of L*.
    Witness {
        #[arg(long)]
        tau: String,
    },
    /// Extract (L, T̄, ·, σ) from torus generators.
    Recover {
        /// Comma-separated diagonal coordinates of T generators.
        #[arg(long, value_delimiter = ',', required = true)]
        torus: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    G2,
    C2,
}

#[derive(Subcommand)]
enum UCmd {
    Mult {
        #[arg(long)]
        kind: KindArg,
        x: String,
        y: String,
    },
    Comm {
        #[arg(long)]
        kind: KindArg,
        x: String,
        y: String,
    },
    Center {
        #[arg(long)]
        kind: KindArg,
        x: String,
    },
    /// Conjugate by h_alpha(a)h_beta(b), given as "a;b".
    Act {
        #[arg(long)]
        kind: KindArg,
        #[arg(long)]
        h: String,
        x: String,
    },
}

#[derive(Subcommand)]
enum Sp4Cmd {
    Bruhat {
        /// 16 ';'-separated entries, row by row.
        #[arg(long)]
        matrix: String,
    },
    Member {
        #[arg(long)]
        matrix: String,
    },
    TorusCheck {
        #[arg(long)]
        s_alpha: String,
        #[arg(long)]
        s_beta: String,
    },
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Run every property suite and print a JSON report.
    Run,
}

/// Result of a command: JSON output plus whether it counts as a failure.
pub struct Output {
    pub json: serde_json::Value,
    pub failed: bool,
    pub warning: Option<String>,
}

impl Output {
    pub fn ok(json: serde_json::Value) -> Self {
        Output {
            json,
            failed: false,
            warning: None,
        }
    }

    pub fn check(json: serde_json::Value, passed: bool) -> Self {
        Output {
            json,
            failed: !passed,
            warning: None,
        }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let g = cli.global;
    let fa = FieldArgs {
        p: g.p,
        vars: g.vars.clone(),
        config: g.config.clone(),
    };
    let seed = g.seed.unwrap_or(1);
    let bound = g.bound.unwrap_or(2);
    match cli.cmd {
        Cmd::Field(FieldCmd::Eval { expr }) => commands::field_eval(&fa, &expr),
        Cmd::Lambda { a, b } => commands::lambda(&fa, &a, &b),
        Cmd::Tower(ValidateCmd::Validate { path }) => {
            commands::tower_validate(&with_path(fa, path)?, g.samples.unwrap_or(32), seed)
        }
        Cmd::Indifferent(ValidateCmd::Validate { path }) => {
            commands::indifferent_validate(&with_path(fa, path)?)
        }
        Cmd::Sl2(c) => match c {
            Sl2Cmd::Bruhat { matrix } => commands::sl2_bruhat(&fa, &matrix),
            Sl2Cmd::Member { matrix } => commands::sl2_member(&fa, &matrix, bound),
            Sl2Cmd::Witness { tau } => commands::sl2_witness(&fa, &tau, bound),
            Sl2Cmd::Recover { torus } => commands::sl2_recover(&fa, &torus),
        },
        Cmd::U(c) => match c {
            UCmd::Mult { kind, x, y } => commands::u_binary(&fa, kind, &x, &y, false),
            UCmd::Comm { kind, x, y } => commands::u_binary(&fa, kind, &x, &y, true),
            UCmd::Center { kind, x } => commands::u_center(&fa, kind, &x),
            UCmd::Act { kind, h, x } => commands::u_act(&fa, kind, &h, &x),
        },
        Cmd::Sp4(c) => match c {
            Sp4Cmd::Bruhat { matrix } => commands::sp4_bruhat(&fa, &matrix),
            Sp4Cmd::Member { matrix } => commands::sp4_member(&fa, &matrix, bound),
            Sp4Cmd::TorusCheck { s_alpha, s_beta } => {
                commands::sp4_torus_check(&fa, &s_alpha, &s_beta)
            }
        },
        Cmd::Reconstruct { kind, corrupt } => {
            commands::reconstruct(&fa, kind, g.samples.unwrap_or(100), seed, corrupt)
        }
        Cmd::Suite(SuiteCmd::Run) => {
            let path = g
                .config
                .ok_or_else(|| CliError::Failed("suite run needs --config".into()))?;
            suite::run_suite(&path, g.seed, g.samples, g.bound)
        }
    }
}

fn with_path(mut fa: FieldArgs, path: Option<PathBuf>) -> Result<FieldArgs, CliError> {
    if let Some(p) = path {
        fa.config = Some(p);
    }
    if fa.config.is_none() {
        return Err(CliError::Failed("a configuration file is required".into()));
    }
    Ok(fa)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = cli.global.report.clone();
    match run(cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.json).expect("serializable");
            // A closed pipe downstream is not an error of the command.
            let _ = writeln!(std::io::stdout(), "{text}");
            if let Some(path) = report {
                if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            if let Some(w) = out.warning {
                eprintln!("warning: {w}");
            }
            ExitCode::from(out.failed as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
