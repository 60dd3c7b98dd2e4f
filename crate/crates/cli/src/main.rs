//! `qcldpc`: key generation, file encryption and analysis tables.
//!
//! Exit codes: 0 success, 1 I/O or other error, 2 usage error, 3 malformed
//! key or ciphertext file, 4 infeasible parameters, 5 decoding failure (the
//! sender should retransmit with a fresh error vector).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qcldpc::code::CodeSpec;
use qcldpc::complexity::PerBit;
use qcldpc::crypto::{
    decrypt, decrypt_systematic, default_decoder_config, default_t_prime, encrypt, encrypt_systematic, keygen,
    random_error_vector,
};
use qcldpc::format::{
    decode_ciphertext, decode_private, decode_public, encode_ciphertext, encode_private, encode_public,
    encode_systematic_public, frame_message, unframe_message, CiphertextFile, PublicKeyFile,
};
use qcldpc::tables::{
    decryption_table, encryption_table, key_size_table, security_table, threshold_table, Grid,
};
use qcldpc::{BitVector, DecoderConfig, Error, Exec, FlipRule, OpCounter};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

const EXIT_OTHER: u8 = 1;
const EXIT_FORMAT: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;
const EXIT_DECODE: u8 = 5;

#[derive(Parser)]
#[command(name = "qcldpc", version, about = "McEliece over QC-LDPC codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair, writing PREFIX.pub and PREFIX.priv.
    Keygen(KeygenArgs),
    /// Encrypt a file under a public key.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext file with a private key.
    Decrypt(DecryptArgs),
    /// Print one analysis table as CSV.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long, default_value_t = 4)]
    n0: usize,
    #[arg(long, default_value_t = 6144)]
    p: usize,
    #[arg(long, default_value_t = 13)]
    dv: usize,
    #[arg(long, default_value_t = 7)]
    m: usize,
    /// Intentional errors per block; defaults to floor(t_th / m).
    #[arg(long)]
    t_prime: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_prefix: PathBuf,
    /// Store the public key in systematic form.
    #[arg(long)]
    systematic: bool,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long = "priv")]
    private: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Flipping threshold; defaults to the threshold-optimal value.
    #[arg(long)]
    b: Option<usize>,
    #[arg(long, default_value_t = qcldpc::decoder::DEFAULT_MAX_ITERATIONS)]
    max_iterations: usize,
    #[arg(long, value_enum, default_value_t = Rule::Total)]
    rule: Rule,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Total,
    Extrinsic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Divisor {
    Cleartext,
    Ciphertext,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Parallel,
    Sequential,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// 1 key size, 2 encryption cost, 3 thresholds, 4 decryption cost,
    /// 6 intentional errors, 7 security level.
    #[arg(long, value_parser = ["1", "2", "3", "4", "6", "7"])]
    table: String,
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4])]
    n0: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [13usize, 15])]
    dv: Vec<usize>,
    /// Circulant sizes; defaults to 4096..=16384 in steps of 1024.
    #[arg(long, value_delimiter = ',')]
    p: Vec<usize>,
    #[arg(long, default_value_t = 7)]
    m: usize,
    /// Decoder iterations assumed by the decryption cost model.
    #[arg(long, default_value_t = qcldpc::complexity::DEFAULT_BF_ITERATIONS)]
    iterations: usize,
    #[arg(long, value_enum, default_value_t = Divisor::Cleartext)]
    per_bit: Divisor,
    #[arg(long, value_enum, default_value_t = Mode::Parallel)]
    exec: Mode,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Keygen(a) => cmd_keygen(a),
        Command::Encrypt(a) => cmd_encrypt(a),
        Command::Decrypt(a) => cmd_decrypt(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Format(_)) => EXIT_FORMAT,
        Some(Error::InfeasibleParameters(_)) => EXIT_INFEASIBLE,
        Some(Error::DecodeFailure { .. }) => EXIT_DECODE,
        _ => EXIT_OTHER,
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_keygen(a: KeygenArgs) -> Result<()> {
    let mut spec = CodeSpec::new(a.n0, a.p, a.dv, a.m, 0)?;
    spec.t_prime = match a.t_prime {
        Some(t) => t,
        None => default_t_prime(&spec)?,
    };
    spec.validate()?;
    let keys = keygen(&spec, a.seed)?;
    let public = if a.systematic {
        encode_systematic_public(&keys.public.to_systematic()?)
    } else {
        encode_public(&keys.public)
    };
    write(&with_suffix(&a.out_prefix, ".pub"), &public)?;
    write(&with_suffix(&a.out_prefix, ".priv"), &encode_private(&keys.private))?;
    Ok(())
}

fn cmd_encrypt(a: EncryptArgs) -> Result<()> {
    let key = decode_public(&read(&a.public)?)?;
    let spec = *key.spec();
    let message = read(&a.input)?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let blocks = frame_message(&message, spec.k())
        .iter()
        .map(|u| {
            let e = random_error_vector(spec.n(), spec.t_prime, rng.next_u64())?;
            let mut counter = OpCounter::new();
            match &key {
                PublicKeyFile::Full(k) => encrypt(k, u, &e, &mut counter),
                PublicKeyFile::Systematic(k) => encrypt_systematic(k, u, &e, &mut counter),
            }
        })
        .collect::<qcldpc::Result<Vec<BitVector>>>()?;
    let ct = CiphertextFile {
        spec,
        systematic: matches!(key, PublicKeyFile::Systematic(_)),
        blocks,
    };
    write(&a.out, &encode_ciphertext(&ct)?)
}

fn cmd_decrypt(a: DecryptArgs) -> Result<()> {
    let key = decode_private(&read(&a.private)?)?;
    let ct = decode_ciphertext(&read(&a.input)?)?;
    if ct.spec != *key.spec() {
        return Err(Error::Format("ciphertext parameters do not match the private key".into()).into());
    }
    let b = match a.b {
        Some(b) => b,
        None => default_decoder_config(key.spec())?.b,
    };
    let rule = match a.rule {
        Rule::Total => FlipRule::TotalCount,
        Rule::Extrinsic => FlipRule::Extrinsic,
    };
    let cfg = DecoderConfig::new(b)
        .with_max_iterations(a.max_iterations)
        .with_rule(rule);
    let blocks = ct
        .blocks
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut counter = OpCounter::new();
            let out = if ct.systematic {
                decrypt_systematic(&key, x, &cfg, &mut counter)
            } else {
                decrypt(&key, x, &cfg, &mut counter)
            };
            out.with_context(|| format!("block {i}"))
        })
        .collect::<Result<Vec<_>>>()?;
    write(&a.out, &unframe_message(&blocks)?)
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<()> {
    let mut grid = Grid {
        n0s: a.n0,
        d_vs: a.dv,
        m: a.m,
        iterations: a.iterations,
        ..Grid::default()
    };
    if !a.p.is_empty() {
        grid.ps = a.p;
    }
    if grid.n0s.iter().any(|&n0| n0 < 2) || grid.d_vs.iter().any(|&d| d < 2) || grid.m == 0 {
        bail!(Error::Parameter("grid needs n0 >= 2, d_v >= 2 and m >= 1".into()));
    }
    if grid.ps.iter().any(|&p| grid.d_vs.iter().any(|&d| d >= p)) {
        bail!(Error::Parameter("every p must exceed every d_v".into()));
    }
    let divisor = match a.per_bit {
        Divisor::Cleartext => PerBit::Cleartext,
        Divisor::Ciphertext => PerBit::Ciphertext,
    };
    let exec = match a.exec {
        Mode::Parallel => Exec::Parallel,
        Mode::Sequential => Exec::Sequential,
    };

    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    match a.table.as_str() {
        "1" => {
            w.write_record(["n0", "p", "public_key_bytes"])?;
            for r in key_size_table(&grid) {
                w.write_record([r.n0.to_string(), r.p.to_string(), r.bytes.to_string()])?;
            }
        }
        "2" => {
            w.write_record(["n0", "p", "ops_per_bit"])?;
            for r in encryption_table(&grid, divisor) {
                w.write_record([r.n0.to_string(), r.p.to_string(), format!("{:.1}", r.ops_per_bit)])?;
            }
        }
        "3" => {
            w.write_record(["n0", "d_v", "p", "t_th", "b_opt"])?;
            for r in threshold_table(&grid, exec)? {
                w.write_record([r.n0, r.d_v, r.p, r.t_th, r.b_opt].map(|v| v.to_string()))?;
            }
        }
        "4" => {
            w.write_record(["n0", "d_v", "p", "ops_per_bit"])?;
            for r in decryption_table(&grid, divisor) {
                w.write_record([
                    r.n0.to_string(),
                    r.d_v.to_string(),
                    r.p.to_string(),
                    format!("{:.1}", r.ops_per_bit),
                ])?;
            }
        }
        "6" => {
            w.write_record(["n0", "d_v", "p", "t_prime"])?;
            for r in threshold_table(&grid, exec)? {
                w.write_record([r.n0, r.d_v, r.p, r.t_prime].map(|v| v.to_string()))?;
            }
        }
        "7" => {
            w.write_record([
                "n0",
                "d_v",
                "p",
                "t_prime",
                "decoding_log2",
                "shifts",
                "dual_log2",
                "level_log2",
            ])?;
            let thresholds = threshold_table(&grid, exec)?;
            for r in security_table(&grid, &thresholds, exec)? {
                w.write_record([
                    r.n0.to_string(),
                    r.d_v.to_string(),
                    r.p.to_string(),
                    r.t_prime.to_string(),
                    format!("{:.1}", r.decoding_log2),
                    r.shifts.to_string(),
                    format!("{:.1}", r.dual_log2),
                    format!("{:.1}", r.level_log2),
                ])?;
            }
        }
        _ => unreachable!("restricted by the value parser"),
    }
    w.flush()?;
    Ok(())
}
