use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};

use rnsym::commands::{run_with_code, BracketKind, Command, ComplexChoice, LiftMode};
use rnsym::problem::Problem;
use rnsym::Error;

/// Symmetries of R[n]-bundles over T[1]M, in exact arithmetic.
///
/// Exit codes: 0 every check passed, 1 a check failed, 2 input error.
#[derive(Parser)]
#[command(name = "rnsym", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Coefficient cap for polynomial bases (overrides the problem's `caps`).
    #[arg(long, global = true, value_name = "K")]
    caps: Option<u32>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Only print failing checks.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural checks: d² = 0, Jacobi, action homomorphism, Q² = 0, elements.
    Verify { spec: PathBuf },
    /// Betti numbers of a complex.
    Cohomology {
        spec: PathBuf,
        #[arg(long, value_parser = PossibleValuesParser::new(ComplexChoice::NAMES))]
        which: String,
        /// Highest degree to report.
        #[arg(long)]
        max_degree: Option<i32>,
    },
    /// Evaluate a bracket of named elements.
    Bracket {
        spec: PathBuf,
        #[arg(long, value_parser = PossibleValuesParser::new(BracketKind::NAMES))]
        kind: String,
        /// Element names from the problem's `elements` table.
        #[arg(required = true)]
        elements: Vec<String>,
        /// Use the convention with ⌊η∂t, ι_X + α∂t⌋ = 0 for `ham`.
        #[arg(long)]
        bhr: bool,
    },
    /// Lift certificates for the problem's action.
    Lift {
        spec: PathBuf,
        #[arg(long, value_parser = PossibleValuesParser::new(LiftMode::NAMES))]
        mode: String,
    },
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> T {
    s.parse().unwrap_or_else(|e| panic!("clap validated the value: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (path, cmd) = match cli.cmd {
        Cmd::Verify { spec } => (spec, Command::Verify),
        Cmd::Cohomology { spec, which, max_degree } => (spec, Command::Cohomology { which: parse(&which), max_degree }),
        Cmd::Bracket { spec, kind, elements, bhr } => (spec, Command::Bracket { kind: parse(&kind), args: elements, bhr }),
        Cmd::Lift { spec, mode } => (spec, Command::Lift { mode: parse(&mode) }),
    };
    let loaded =
        std::fs::read_to_string(&path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display()))).and_then(|src| Problem::from_json(&src));
    let (out, code) = match loaded {
        Ok(p) => run_with_code(&p, &cmd, cli.opts.caps),
        Err(e) => (Err(e), 2),
    };
    let text = match out {
        Ok(report) if cli.opts.json => report.to_json() + "\n",
        Ok(report) => report.render_text(cli.opts.quiet),
        Err(e) if cli.opts.json => serde_json::json!({ "command": cmd.name(), "error": e.to_string() }).to_string() + "\n",
        Err(e) => {
            eprintln!("rnsym: input error: {e}");
            String::new()
        }
    };
    // a closed pipe (`| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(code as u8)
}
