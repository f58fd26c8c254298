//! Command-line front-end: key generation, file encryption and decryption,
//! and the analysis harness.
//!
//! Binary payloads only ever travel through files. Reports go to standard
//! output, diagnostics to standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nabla_core::analysis::{
    bruteforce_known_plaintext, ciphertext_only_ambiguity, ciphertext_stats, leakage_to_kv, leakage_to_text,
    reuse_leakage, AttackConfig, KeySpace, DEFAULT_BUDGET, DEFAULT_DETAIL_LIMIT,
};
use nabla_core::format::{ciphertext_to_string, key_to_string, parse_ciphertext, parse_key};
use nabla_core::{decrypt, encrypt, keygen, validate_key, Ciphertext, Error, NablaKey, Plainvalue};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nabla", version, about = "Measure-by-nabla cipher: keys, files and cryptanalysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a fresh key file.
    Keygen {
        /// Key length (number of nabla elements).
        #[arg(long)]
        k: usize,
        /// Entries are drawn up to 2^bits.
        #[arg(long)]
        bits: u32,
        #[arg(long)]
        out: PathBuf,
        /// Deterministic generator seed, for tests.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Encrypt a file of bytes into a ciphertext file.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file back into the original bytes.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one of the cryptanalysis experiments.
    #[command(subcommand)]
    Analyze(Analysis),
}

#[derive(Debug, Subcommand)]
pub enum Analysis {
    /// Known-plaintext exhaustive key search.
    Bruteforce {
        /// Plaintext file (raw bytes).
        #[arg(long)]
        plain: PathBuf,
        /// Ciphertext file.
        #[arg(long)]
        ct: PathBuf,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Count keys under which a ciphertext decrypts cleanly.
    Ambiguity {
        #[arg(long)]
        ct: PathBuf,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Position-wise gcds of two ciphertexts made under one key.
    Reuse {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Expansion and byte statistics of a ciphertext.
    Stats {
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        plain: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub nabla_max: u64,
    #[arg(long)]
    pub delta_max: u64,
    #[arg(long)]
    pub p0_max: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Refuse key spaces larger than this.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Consistent keys to list in the report.
    #[arg(long, default_value_t = DEFAULT_DETAIL_LIMIT)]
    pub details: usize,
    /// Also write the report as key=value lines to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(_) => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command on the
/// process's standard streams, returning the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    main_with_io(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Like [`main_with_args`], with reports written to `out` and diagnostics to `err`.
pub fn main_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "nabla: {e}");
            e.exit_code()
        }
    }
}

/// Executes one command. Reports are written to `out`.
pub fn run(command: &Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Keygen { k, bits, out: path, seed } => {
            let key = match seed {
                Some(seed) => keygen(*k, *bits, &mut ChaCha20Rng::seed_from_u64(*seed))?,
                None => keygen(*k, *bits, &mut rand::rngs::OsRng)?,
            };
            write_atomic(path, key_to_string(&key).as_bytes())
        }
        Command::Encrypt { key, input, out: path } => {
            let key = load_key(key)?;
            let bytes = read(input)?;
            let c = encrypt(&Plainvalue::from_bytes(&bytes), &key)?;
            write_atomic(path, ciphertext_to_string(&c).as_bytes())
        }
        Command::Decrypt { key, input, out: path } => {
            let key = load_key(key)?;
            let c = load_ciphertext(input)?;
            if !c.bit_len.is_multiple_of(8) {
                return Err(Error::NotByteAligned(c.bit_len).into());
            }
            let bytes = decrypt(&c, &key)?.to_bytes()?;
            write_atomic(path, &bytes)
        }
        Command::Analyze(analysis) => analyze(analysis, out),
    }
}

fn analyze(analysis: &Analysis, out: &mut dyn Write) -> CliResult<()> {
    match analysis {
        Analysis::Bruteforce { plain, ct, space, run } => {
            let p = Plainvalue::from_bytes(&read(plain)?);
            let c = load_ciphertext(ct)?;
            let space = space.to_space()?;
            let report = bruteforce_known_plaintext(&p, &c, &space, &run.config()?)?;
            emit(out, &report.to_text("known-plaintext key search"), run.report.as_deref(), &report.to_kv())
        }
        Analysis::Ambiguity { ct, space, run } => {
            let c = load_ciphertext(ct)?;
            let space = space.to_space()?;
            let report = ciphertext_only_ambiguity(&c, &space, &run.config()?)?;
            emit(out, &report.to_text("ciphertext-only ambiguity"), run.report.as_deref(), &report.to_kv())
        }
        Analysis::Reuse { first, second, report } => {
            let leak = reuse_leakage(&load_ciphertext(first)?, &load_ciphertext(second)?)?;
            emit(out, &leakage_to_text(&leak), report.as_deref(), &leakage_to_kv(&leak))
        }
        Analysis::Stats { ct, plain, report } => {
            let stats = ciphertext_stats(&load_ciphertext(ct)?, &Plainvalue::from_bytes(&read(plain)?));
            emit(out, &stats.to_text(), report.as_deref(), &stats.to_kv())
        }
    }
}

impl SpaceArgs {
    fn to_space(&self) -> CliResult<KeySpace> {
        KeySpace::new(self.k, self.nabla_max, self.delta_max, self.p0_max).map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl RunArgs {
    fn config(&self) -> CliResult<AttackConfig> {
        if self.jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(AttackConfig { budget: self.budget, jobs: self.jobs, detail_limit: self.details })
    }
}

fn emit(out: &mut dyn Write, text: &str, report: Option<&Path>, kv: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })?;
    match report {
        Some(path) => write_atomic(path, kv.as_bytes()),
        None => Ok(()),
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_text(path: &Path) -> CliResult<String> {
    let bytes = read(path)?;
    String::from_utf8(bytes).map_err(|_| CliError::Core(Error::Parse { line: 0, msg: format!("{} is not UTF-8", path.display()) }))
}

pub fn load_key(path: &Path) -> CliResult<NablaKey> {
    let key = parse_key(&read_text(path)?)?;
    let violations = validate_key(&key);
    if !violations.is_empty() {
        return Err(Error::InvalidKey(violations).into());
    }
    Ok(key)
}

pub fn load_ciphertext(path: &Path) -> CliResult<Ciphertext> {
    Ok(parse_ciphertext(&read_text(path)?)?)
}

/// Writes through a sibling temp file and renames it into place, so a
/// failed run never leaves a partial file at `path`.
pub fn write_atomic(path: &Path, data: &[u8]) -> CliResult<()> {
    let io_err = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new().prefix(".nabla-").tempfile_in(dir).map_err(io_err)?;
    tmp.write_all(data).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
