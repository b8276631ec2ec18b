//! Command-line front end for `orthobasis`: text formats and the
//! subcommands behind the `orthobasis` binary.

pub mod format;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use orthobasis::verify::{random_isometry, verify_certificate, VerificationReport};
use orthobasis::{factor_full, transform_between};

use crate::format::FormatError;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    /// Malformed input, invalid basis, bad arguments, or a factorization
    /// or I/O failure.
    Failure = 1,
    /// A certificate parsed but did not verify.
    VerificationFailed = 2,
}

#[derive(Debug, Parser)]
#[command(name = "orthobasis", version, about = "Factor orthogonal bases of the hyperbolic lattice into verified certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a basis file holds a valid orthogonal basis.
    CheckBasis {
        #[arg(long)]
        input: PathBuf,
    },
    /// Factor a basis into a certificate.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Certificate for the isometry carrying one basis to another.
    Transform {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Verify a certificate against its target.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Write a seeded random basis.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        /// Also write the generating word.
        #[arg(long)]
        with_word: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Core(#[from] orthobasis::Error),
    #[error("{0}")]
    Usage(String),
    #[error("certificate does not verify: {0}")]
    Verification(String),
}

impl CliError {
    fn exit(&self) -> Exit {
        match self {
            CliError::Verification(_) => Exit::VerificationFailed,
            _ => Exit::Failure,
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stderr: &mut dyn std::io::Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { Exit::Failure } else { Exit::Success };
        }
    };
    match execute(&cli.command, stderr) {
        Ok(()) => Exit::Success,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit()
        }
    }
}

fn execute(command: &Command, stderr: &mut dyn std::io::Write) -> Result<(), CliError> {
    match command {
        Command::CheckBasis { input } => {
            let basis = read(input, format::parse_basis)?;
            let _ = writeln!(stderr, "valid orthogonal basis, n = {}", basis.n());
        }
        Command::Reduce { input, output } => {
            let basis = read(input, format::parse_basis)?;
            let cert = factor_full(&basis)?;
            self_check(&verify_certificate(&cert))?;
            let _ = writeln!(
                stderr,
                "certificate: {} reflections, {} operations",
                cert.reflection_stage.len(),
                cert.op_stage.len()
            );
            write_outputs(&[(output, format::write_certificate(&cert))])?;
        }
        Command::Transform { from, to, output } => {
            let from_basis = read(from, format::parse_basis)?;
            let to_basis = read(to, format::parse_basis)?;
            let cert = transform_between(&from_basis, &to_basis)?;
            self_check(&orthobasis::verify::verify_mapping(&cert, &from_basis, &to_basis))?;
            write_outputs(&[(output, format::write_certificate(&cert))])?;
        }
        Command::Verify { cert } => {
            let cert = read(cert, format::parse_certificate)?;
            let report = verify_certificate(&cert);
            if !report.ok {
                return Err(CliError::Verification(describe(&report)));
            }
            let _ = writeln!(stderr, "certificate verifies ({} generators)", cert.len());
        }
        Command::Generate { n, length, seed, output, with_word } => {
            if *n == 0 || *n > format::MAX_GENUS {
                return Err(CliError::Usage(format!("--n must be between 1 and {}", format::MAX_GENUS)));
            }
            let (basis, word) = random_isometry(*n, *length, *seed)?;
            let mut outputs = vec![(output, format::write_basis(&basis))];
            if let Some(path) = with_word {
                if path == output {
                    return Err(CliError::Usage("--with-word must differ from --output".into()));
                }
                outputs.push((path, format::write_word(*n, &word)));
            }
            write_outputs(&outputs)?;
        }
    }
    Ok(())
}

fn read<T>(path: &Path, parse: fn(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse(&text).map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

/// A freshly computed certificate that fails verification is an internal
/// error, not a verification failure of user input.
fn self_check(report: &VerificationReport) -> Result<(), CliError> {
    if report.ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!("internal error, computed certificate is wrong: {}", describe(report))))
    }
}

fn describe(report: &VerificationReport) -> String {
    if let Some(e) = &report.error {
        return e.to_string();
    }
    let mut reasons = Vec::new();
    if let Some(d) = &report.first_divergence {
        reasons.push(format!("column {} is {} but the target has {}", d.column, d.actual, d.expected));
    }
    let checks = &report.stage_checks;
    for (holds, what) in [
        (checks.reflections_are_minus_two, "a reflection vector does not have self-pairing -2"),
        (checks.op_stage_is_op_only, "the operation stage contains a reflection"),
        (checks.ops_congruent_to_identity, "an operation is not congruent to the identity mod 2"),
        (checks.gram_preserved, "a generator does not preserve the form"),
        (checks.reflection_stage_matches_mod2, "the reflection stage does not match the target mod 2"),
    ] {
        if !holds {
            reasons.push(what.to_string());
        }
    }
    reasons.join("; ")
}

/// Writes every output to a temporary file next to it, then renames them
/// all into place. Nothing is left behind if any write fails.
fn write_outputs(outputs: &[(&PathBuf, String)]) -> Result<(), CliError> {
    fn io(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io { path: path.to_path_buf(), source }
    }
    let mut staged = Vec::new();
    for (path, contents) in outputs {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut file = tempfile::NamedTempFile::new_in(dir).map_err(io(path))?;
        file.write_all(contents.as_bytes()).map_err(io(path))?;
        file.as_file().sync_all().map_err(io(path))?;
        staged.push((file, *path));
    }
    for (file, path) in staged {
        file.persist(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.error })?;
    }
    Ok(())
}
