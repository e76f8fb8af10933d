//! File formats and commands behind the `fvr` binary.

pub mod commands;
pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_curve, cmd_gen, cmd_pvc, cmd_solve, cmd_verify, CliError, Rule, VerifyOptions,
};
pub use format::{
    parse_instance, parse_ranked, serialize_instance, serialize_ranked, FormatError, InstanceFile,
};

#[derive(Debug, Parser)]
#[command(
    name = "fvr",
    version,
    about = "Approval voting with guarantees for flexible voters"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Elect a winner or committee for an instance file.
    Solve {
        file: PathBuf,
        /// approval, threshold:<s0>, power:<p>, opt, seq or expanded.
        #[arg(long, default_value = "opt")]
        rule: String,
        /// Committee size (overrides the file).
        #[arg(long)]
        k: Option<usize>,
        /// Approval threshold (overrides the file).
        #[arg(long)]
        t: Option<usize>,
    },
    /// Emit guarantee curves of closed-form rules as CSV.
    Curve {
        /// Rules to include, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "approval,power:1,power:2,power:3"
        )]
        rule: Vec<String>,
        /// Thresholds j/(2g) for j = 1..2g-1.
        #[arg(long = "s-grid", default_value_t = 50)]
        s_grid: usize,
    },
    /// Generate an instance file, e.g. `fvr gen party_split k=2`.
    Gen {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        /// Seed for the random generator when the spec gives none.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run an invariant suite over every small profile.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        /// Maximum number of profiles to enumerate.
        #[arg(long, default_value_t = fvr_core::oracles::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Print the strong proportional veto core of a ranked profile file.
    Pvc { file: PathBuf },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<String, CliError> {
    match &cli.command {
        Command::Solve { file, rule, k, t } => cmd_solve(&read(file)?, &rule.parse()?, *k, *t),
        Command::Curve { rule, s_grid } => {
            let rules = rule
                .iter()
                .map(|r| r.parse())
                .collect::<Result<Vec<Rule>, _>>()?;
            cmd_curve(&rules, *s_grid)
        }
        Command::Gen { spec, seed } => {
            let (text, special) = cmd_gen(&spec.join(" "), *seed)?;
            if let Some(a) = special {
                let _ = writeln!(err, "special candidate: {a}");
            }
            Ok(text)
        }
        Command::Verify {
            suite,
            n_max,
            m_max,
            budget,
        } => cmd_verify(
            suite,
            VerifyOptions {
                n_max: *n_max,
                m_max: *m_max,
                budget: *budget,
            },
        ),
        Command::Pvc { file } => cmd_pvc(&read(file)?),
    }
}

fn emit(text: &str, target: &Option<PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    match target {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}"))),
    }
}

/// Parses arguments, runs the command and returns the process exit code:
/// 0 on success, 1 when a verification suite finds violations, 2 on usage,
/// parse or validation errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = execute(&cli, err);
    let (text, code) = match result {
        Ok(text) => (text, 0),
        Err(CliError::Violations(report)) => (report, 1),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = emit(&text, &cli.out, out) {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    code
}
