//! Command-line driver.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::StructureAlgebra;
use crate::certificate::{algebra_value, produce, verify, Certificate, Command, Request};
use crate::error::{Error, Result};
use crate::fixtures::{sls1, sls2q};

#[derive(Debug, Parser)]
#[command(name = "lsym", version, about = "Exact checks for Perm, left-symmetric and SLS structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Truncation bound D for tensor computations.
    #[arg(short = 'D', long)]
    pub bound: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random samples for sampled checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also write the structured certificate to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Presentation {
    /// Built-in variety: com, perm, lsym, nov, sls, dilsym, dinov.
    #[arg(long, conflicts_with = "identities")]
    pub variety: Option<String>,
    /// File of multilinear identities, one per line.
    #[arg(long)]
    pub identities: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Evaluate identities in the free differential Perm-algebra or in an algebra.
    CheckIdentity {
        identities: PathBuf,
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// derived, dialgebra, plain or plain-di.
        #[arg(long)]
        interp: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension of the multilinear component of arity n.
    Dim {
        #[command(flatten)]
        presentation: Presentation,
        #[arg(short = 'n', long)]
        arity: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the dialgebra presentation.
    Replicate {
        #[command(flatten)]
        presentation: Presentation,
        #[command(flatten)]
        common: Common,
    },
    /// Weight −1 multilinear monomials of the free differential Perm-algebra.
    SlsBasis {
        #[arg(short = 'n', long)]
        arity: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Tensor-algebra dialgebra checks on a left-symmetric algebra.
    EnvelopeTest {
        algebra: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    Nice {
        algebra: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    Special {
        algebra: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated ideal dimensions and the intersection with A.
    Ideals {
        algebra: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Split extension and Cur verification for a Novikov dialgebra.
    Cur {
        algebra: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the fixture algebras sls1.alg and sls2q.alg.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
    VerifyCertificate {
        certificate: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Algebra(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<serde_json::Value> {
    let a = StructureAlgebra::parse(&read(path)?).map_err(|e| match e {
        Error::Parse { line, column, msg } => Error::Parse { line, column, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })?;
    Ok(algebra_value(&a))
}

fn request(command: Command, common: &Common) -> Request {
    let mut r = Request::new(command);
    r.options.bound = common.bound;
    r.options.seed = common.seed;
    r.options.samples = common.samples;
    r
}

fn with_presentation(mut r: Request, p: &Presentation) -> Result<Request> {
    r.input.variety = p.variety.clone();
    r.input.identities = p.identities.as_deref().map(read).transpose()?;
    Ok(r)
}

fn with_algebra(command: Command, path: &Path, common: &Common) -> Result<Request> {
    let mut r = request(command, common);
    r.input.algebra = Some(load_algebra(path)?);
    Ok(r)
}

/// Exit status for an error: 1 for a failed verification, 2 for bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Violated(_) | Error::Mismatch(_) => 1,
        _ => 2,
    }
}

fn emit(cert: &Certificate, common: &Common, out: &mut dyn Write) -> Result<i32> {
    if let Some(path) = &common.out {
        std::fs::write(path, cert.to_json())?;
    }
    let text = match common.format {
        Format::Text => cert.to_text(),
        Format::Structured => cert.to_json(),
    };
    out.write_all(text.as_bytes())?;
    Ok(if cert.passed { 0 } else { 1 })
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let (req, common) = match &cli.command {
        Cmd::CheckIdentity { identities, algebra, interp, common } => {
            let mut r = request(Command::CheckIdentity, common);
            r.input.identities = Some(read(identities)?);
            r.input.algebra = algebra.as_deref().map(load_algebra).transpose()?;
            r.options.interpretation = interp.clone();
            (r, common)
        }
        Cmd::Dim { presentation, arity, common } => {
            let mut r = with_presentation(request(Command::Dim, common), presentation)?;
            r.options.arity = Some(*arity);
            (r, common)
        }
        Cmd::Replicate { presentation, common } => {
            (with_presentation(request(Command::Replicate, common), presentation)?, common)
        }
        Cmd::SlsBasis { arity, common } => {
            let mut r = request(Command::SlsBasis, common);
            r.options.arity = Some(*arity);
            (r, common)
        }
        Cmd::EnvelopeTest { algebra, common } => (with_algebra(Command::EnvelopeTest, algebra, common)?, common),
        Cmd::Nice { algebra, common } => (with_algebra(Command::Nice, algebra, common)?, common),
        Cmd::Special { algebra, common } => (with_algebra(Command::Special, algebra, common)?, common),
        Cmd::Ideals { algebra, common } => (with_algebra(Command::Ideals, algebra, common)?, common),
        Cmd::Cur { algebra, common } => (with_algebra(Command::Cur, algebra, common)?, common),
        Cmd::Fixtures { out: dir } => {
            std::fs::create_dir_all(dir)?;
            for (name, a) in [("sls1.alg", sls1()), ("sls2q.alg", sls2q())] {
                let path = dir.join(name);
                std::fs::write(&path, a.to_text())?;
                writeln!(out, "{}", path.display())?;
            }
            return Ok(0);
        }
        Cmd::VerifyCertificate { certificate } => {
            let cert = Certificate::from_json(&read(certificate)?)?;
            verify(&cert)?;
            writeln!(out, "certificate verified: {}", cert.verdict)?;
            return Ok(0);
        }
    };
    emit(&produce(&req)?, common, out)
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
