//! The `knotcrypt` command line.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::codes::{canonical_dt, extract_dt, CodeError};
use crate::diagram::{connected_sum, Diagram, DiagramError};
use crate::invariants::{jones, kauffman_bracket, InvariantError};
use crate::protocol::{
    attack_invariant_demo, decrypt_message, derive_key_knots, encrypt_detailed, encrypt_message,
    make_key_package, receive_key_package, rsa_keygen, send_key_package, Ciphertext, Codebook, KeyKnot,
    KeyPackage, ProtocolError,
};
use crate::table::{format_entry, KnotTable, TableError};
use crate::tangle::{mutate, RotationKind, TangleError};

pub const TABLE_ENV: &str = "KNOTCRYPT_TABLE";

#[derive(Debug, Parser)]
#[command(name = "knotcrypt", version, about = "Knot diagrams, DT codes, Jones polynomials and a knot-based cipher")]
pub struct Cli {
    /// Knot table file; defaults to $KNOTCRYPT_TABLE, then the bundled table.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table operations.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Print the DT code of a table knot.
    Dt {
        name: String,
        /// Print the canonical code instead of the presentation code.
        #[arg(long)]
        canonical: bool,
    },
    /// Print the Jones polynomial of a table knot or a PD file.
    Invariant {
        target: String,
        /// Print the unnormalized Kauffman bracket instead.
        #[arg(long)]
        bracket: bool,
    },
    /// Print the PD of the connected sum of two knots.
    Compose {
        a: String,
        b: String,
        /// Print the DT code instead of the PD.
        #[arg(long)]
        dt: bool,
    },
    /// Print the PD of a table knot's mutant.
    Mutate {
        name: String,
        /// I, H, V or Z.
        rotation: RotationKind,
        #[arg(long)]
        dt: bool,
    },
    /// Generate an RSA key pair.
    Keygen {
        #[arg(long, default_value_t = 256)]
        bits: u32,
        #[arg(long)]
        seed: u64,
    },
    /// Generate a key package in clear form.
    Keypkg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Encrypt bytes into a ciphertext file.
    Encrypt(SessionArgs),
    /// Decrypt a ciphertext file.
    Decrypt(SessionArgs),
    /// Run the Jones-polynomial attack against a fresh session.
    AttackDemo {
        #[command(flatten)]
        session: SessionArgs,
        /// Key the session with the table's first recorded mutant pair.
        #[arg(long)]
        mutant_key: bool,
        /// Message to encrypt when --in is not given.
        #[arg(long, default_value = "KNOT")]
        message: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum TableAction {
    /// Print every table record.
    List,
}

#[derive(Debug, clap::Args)]
pub struct SessionArgs {
    /// Seed for the RSA key and the key package.
    #[arg(long)]
    pub seed: u64,
    /// Number of key knots.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// RSA modulus size used to carry the key package.
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
    /// Comma-separated list of 16 table names.
    #[arg(long)]
    pub codebook: Option<String>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown knot {0:?}")]
    Lookup(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Lookup(_) => "lookup",
            CliError::Io(_) => "io",
            CliError::Data(_) => "data",
            CliError::Table(_) => "table",
            CliError::Diagram(_) => "diagram",
            CliError::Code(_) => "code",
            CliError::Invariant(_) => "invariant",
            CliError::Tangle(_) => "tangle",
            CliError::Protocol(_) => "protocol",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn load_table(explicit: Option<&Path>) -> Result<KnotTable, CliError> {
    let from_env = std::env::var_os(TABLE_ENV).map(PathBuf::from);
    match explicit.map(Path::to_path_buf).or(from_env) {
        Some(p) => Ok(KnotTable::from_path(&p)?),
        None => Ok(KnotTable::bundled()),
    }
}

fn knot(table: &KnotTable, name: &str) -> Result<Diagram, CliError> {
    if name == "unknot" || name == "0_1" {
        return Ok(Diagram::unknot().with_name("0_1"));
    }
    table
        .get(name)
        .map(|e| e.pd.clone())
        .ok_or_else(|| CliError::Lookup(name.to_string()))
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) => std::fs::read(p).map_err(|e| io_err(p, e)),
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| io_err(p, e)),
        None => out.write_all(bytes).map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn codebook(args: &SessionArgs, table: &KnotTable) -> Result<Codebook, CliError> {
    Ok(match &args.codebook {
        Some(spec) => Codebook::parse(spec, table)?,
        None => Codebook::default_for(table)?,
    })
}

/// Everything one seeded session needs: the receiver's RSA key, the key
/// package sent under it, and the key knots both sides derive.
fn session(args: &SessionArgs, table: &KnotTable) -> Result<(Vec<KeyKnot>, Codebook), CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let rsa = rsa_keygen(args.bits, &mut rng)?;
    let pkg = make_key_package(table, args.n, &mut rng)?;
    let blocks = send_key_package(&pkg, &rsa.public())?;
    let received = receive_key_package(&blocks, &rsa)?;
    Ok((derive_key_knots(&received, table)?, codebook(args, table)?))
}

fn mutant_session(args: &SessionArgs, table: &KnotTable) -> Result<(Vec<KeyKnot>, Codebook), CliError> {
    let w = table
        .mutants()
        .first()
        .ok_or_else(|| CliError::Data("table records no mutant pair".into()))?;
    let pkg = KeyPackage::new(args.seed, vec![(w.source.clone(), w.rotation)])?;
    Ok((derive_key_knots(&pkg, table)?, codebook(args, table)?))
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}").map_err(|e| CliError::Io(e.to_string()))?;
                return Ok(());
            }
            let text = e.to_string();
            let summary: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            return Err(CliError::Usage(summary.join(" ").trim_start_matches("error: ").to_string()));
        }
    };
    execute(cli, out)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let table = load_table(cli.table.as_deref())?;
    let mut text = String::new();
    match cli.command {
        Command::Table { action: TableAction::List } => {
            for e in table.entries() {
                text.push_str(&format_entry(e));
                text.push('\n');
            }
        }
        Command::Dt { name, canonical } => {
            let d = knot(&table, &name)?;
            let code = if canonical { canonical_dt(&d)? } else { extract_dt(&d)? };
            text = format!("{code}\n");
        }
        Command::Invariant { target, bracket } => {
            let d = match knot(&table, &target) {
                Ok(d) => d,
                Err(CliError::Lookup(_)) if Path::new(&target).is_file() => {
                    let p = Path::new(&target);
                    let body = std::fs::read_to_string(p).map_err(|e| io_err(p, e))?;
                    body.parse::<Diagram>()?
                }
                Err(e) => return Err(e),
            };
            text = if bracket {
                format!("{}\n", kauffman_bracket(&d)?)
            } else {
                format!("{}\n", jones(&d)?)
            };
        }
        Command::Compose { a, b, dt } => {
            let d = connected_sum(&knot(&table, &a)?, &knot(&table, &b)?)?;
            text = if dt { format!("{}\n", extract_dt(&d)?) } else { d.to_string() };
        }
        Command::Mutate { name, rotation, dt } => {
            let e = table.get(&name).ok_or_else(|| CliError::Lookup(name.clone()))?;
            let d = mutate(&e.tangle, rotation)?;
            text = if dt { format!("{}\n", extract_dt(&d)?) } else { d.to_string() };
        }
        Command::Keygen { bits, seed } => {
            let k = rsa_keygen(bits, &mut ChaCha20Rng::seed_from_u64(seed))?;
            text = format!("n = {}\ne = {}\nd = {}\np = {}\nq = {}\n", k.n, k.e, k.d, k.p, k.q);
        }
        Command::Keypkg { n, seed } => {
            let pkg = make_key_package(&table, n, &mut ChaCha20Rng::seed_from_u64(seed))?;
            text = format!("{pkg}\n");
        }
        Command::Encrypt(args) => {
            let (keys, codebook) = session(&args, &table)?;
            let msg = read_input(args.input.as_deref())?;
            let c = encrypt_message(&msg, &keys, &codebook)?;
            return write_output(args.out.as_deref(), c.to_string().as_bytes(), out);
        }
        Command::Decrypt(args) => {
            let (keys, codebook) = session(&args, &table)?;
            let raw = read_input(args.input.as_deref())?;
            let body = String::from_utf8(raw).map_err(|_| CliError::Io("ciphertext is not UTF-8".into()))?;
            let c: Ciphertext = body.parse()?;
            let msg = decrypt_message(&c, &keys, &codebook)?;
            return write_output(args.out.as_deref(), &msg, out);
        }
        Command::AttackDemo {
            session: args,
            mutant_key,
            message,
        } => {
            let (keys, codebook) = if mutant_key {
                mutant_session(&args, &table)?
            } else {
                session(&args, &table)?
            };
            let msg = match &args.input {
                Some(p) => read_input(Some(p))?,
                None => message.into_bytes(),
            };
            let (c, granted) = encrypt_detailed(&msg, &keys, &codebook)?;
            let report = attack_invariant_demo(&c, &table, &granted)?;
            for (i, k) in keys.iter().enumerate() {
                text.push_str(&format!("key {i}: {}:{}\n", k.name, k.rotation));
            }
            text.push_str(&report.to_string());
            return write_output(args.out.as_deref(), text.as_bytes(), out);
        }
    }
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}
