use clap::{Args, Parser, Subcommand};
use screenwave::BranchRule;
use screenwave_cli::{validate::Hooks, CliError, RunOptions};
use std::path::PathBuf;
use std::process::ExitCode;

/// Reflection and transmission of a near-cut-off waveguide mode by a
/// periodically gapped screen.
#[derive(Parser)]
#[command(name = "screenwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Asymptotic coefficient table over the configured slopes.
    Scan(RunArgs),
    /// Simulator reference table with residuals against the embedding formulas.
    Oracle(RunArgs),
    /// Acceptance checks; writes a JSON report.
    Validate {
        /// Run only the criteria with this name, tag or number.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flip the square-root branch in the closed forms.
        #[arg(long, hide = true)]
        perturb_branch: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot next to the CSV.
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl RunArgs {
    fn options(&self) -> Result<RunOptions, CliError> {
        if self.jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        Ok(RunOptions {
            out: self.out.clone(),
            svg: self.svg,
            strict: self.strict,
            jobs: self.jobs,
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scan(a) => screenwave_cli::scan(&a.config, &a.options()?).map(|_| ()),
        Command::Oracle(a) => screenwave_cli::oracle(&a.config, &a.options()?).map(|_| ()),
        Command::Validate { filter, out, perturb_branch } => {
            let hooks = Hooks {
                branch: if perturb_branch { BranchRule::Reflected } else { BranchRule::Principal },
            };
            screenwave_cli::validate(filter.as_deref(), &hooks, out.as_deref()).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
