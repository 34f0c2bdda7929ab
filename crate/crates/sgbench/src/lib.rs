//! Command-line front end over the workspace crates.
//!
//! Every command builds an [`Artifact`] holding the resolved configuration
//! and the result; [`run`] renders it and maps the outcome to an exit code.

mod args;
mod combinatorial;
mod error;
mod output;
mod params;
mod sim;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command, Format};
pub use error::CliError;
pub use output::{Artifact, Table, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parse `argv`, run the command and produce its artifact.
pub fn execute<I, T>(argv: I) -> Result<(Cli, Artifact), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)
        .map_err(|e| CliError::Usage(e.to_string().trim_start_matches("error: ").to_string()))?;
    let artifact = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Failed(e.to_string()))?
            .install(|| dispatch(&cli.command))?,
        None => dispatch(&cli.command)?,
    };
    Ok((cli, artifact))
}

fn dispatch(cmd: &Command) -> Result<Artifact, CliError> {
    match cmd {
        Command::Trees(c) => combinatorial::trees(c),
        Command::Renorm(c) => combinatorial::renorm(c),
        Command::Diagram(c) => combinatorial::diagram(c),
        Command::Multiscale(c) => combinatorial::multiscale(c),
        Command::Power(c) => combinatorial::power(c),
        Command::Sim(c) => sim::sim(c),
    }
}

/// Full run including output; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    match execute(argv.clone()) {
        Ok((cli, art)) => match art.emit(cli.format, cli.out.as_deref()) {
            Ok(()) if art.passed == Some(false) => {
                eprintln!("audit failed: {}", art.command);
                EXIT_AUDIT_FAILED
            }
            Ok(()) => EXIT_OK,
            Err(e) => report(e),
        },
        // help and version requests are not errors
        Err(CliError::Usage(msg)) if is_info_request(&argv) => {
            print!("{msg}");
            EXIT_OK
        }
        Err(e) => report(e),
    }
}

fn is_info_request(argv: &[OsString]) -> bool {
    let cli = Cli::try_parse_from(argv);
    matches!(
        cli.as_ref().map_err(|e| e.kind()),
        Err(clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion)
    )
}

fn report(e: CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}
