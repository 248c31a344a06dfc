//! `vermat`: key generation, proving, trustee responses, verification and
//! benchmarks from the shell.
//!
//! Exit codes: 0 accept, 1 reject, 2 malformed input, 3 bad parameters.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vermat_core::dotprod::DEFAULT_CHUNK_EXPONENT;
use vermat_core::pairing::DEFAULT_TOY_MODULUS;
use vermat_core::wire::Protocol;
use vermat_core::Error;

#[derive(Parser, Debug)]
#[command(name = "vermat", version, about = "Verifiable outsourced matrix-vector multiplication")]
struct Cli {
    #[command(flatten)]
    suite: SuiteArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SuiteArgs {
    /// Group backend used by keygen and bench; later steps read it from the key files.
    #[arg(long, value_enum, default_value_t = BackendArg::Real, global = true)]
    pub backend: BackendArg,
    /// Prime group order of the toy backend.
    #[arg(long, default_value_t = DEFAULT_TOY_MODULUS, global = true)]
    pub modulus: u64,
    /// Seed for every random choice; fresh entropy when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendArg {
    Real,
    Toy,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtoArg {
    Freivalds,
    Fg,
    Spmv,
    Rank1dp,
    Gendp,
    Chunked,
    Pvmat,
    Smallfield,
}

impl ProtoArg {
    pub fn container_tag(self) -> Protocol {
        match self {
            ProtoArg::Freivalds => Protocol::Freivalds,
            ProtoArg::Fg => Protocol::Fg,
            ProtoArg::Spmv => Protocol::Spmv,
            ProtoArg::Rank1dp => Protocol::Rank1Dp,
            ProtoArg::Gendp | ProtoArg::Chunked => Protocol::GenDp,
            ProtoArg::Pvmat => Protocol::Pvmat,
            ProtoArg::Smallfield => Protocol::SmallField,
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct DimArgs {
    #[arg(long)]
    pub b1: Option<usize>,
    #[arg(long)]
    pub b2: Option<usize>,
    #[arg(long)]
    pub c1: Option<usize>,
    #[arg(long)]
    pub c2: Option<usize>,
    #[arg(long)]
    pub d1: Option<usize>,
    #[arg(long)]
    pub d2: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct KeygenArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtoArg,
    /// Matrix Market file; for gendp and chunked a single row holding the fixed vector.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Vector length for rank1dp, whose vector is drawn at random.
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long, default_value = "ek.bin")]
    pub ek: PathBuf,
    #[arg(long, default_value = "vk.bin")]
    pub vk: PathBuf,
    /// Trustee secrets (spmv and smallfield).
    #[arg(long, default_value = "trustee.bin")]
    pub trustee: PathBuf,
    #[command(flatten)]
    pub dims: DimArgs,
    /// Chunk size exponent for the chunked dot product.
    #[arg(long, default_value_t = DEFAULT_CHUNK_EXPONENT)]
    pub chunk_a: f64,
    /// Data prime of the small-field protocol.
    #[arg(long, default_value_t = 65521)]
    pub small_prime: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate evaluation and verification keys (and trustee secrets).
    Keygen(KeygenArgs),
    /// Encode an input for the prover and verifier.
    Probgen {
        #[arg(long, value_enum)]
        protocol: Option<ProtoArg>,
        #[arg(long)]
        vk: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute y = A x together with its proof.
    Compute {
        #[arg(long, value_enum)]
        protocol: Option<ProtoArg>,
        #[arg(long)]
        ek: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value = "proof.bin")]
        proof: PathBuf,
    },
    /// Produce the trustee's response for a proof.
    Trustee {
        #[arg(long, value_enum)]
        protocol: Option<ProtoArg>,
        #[arg(long = "trustee-key")]
        trustee_key: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, default_value = "response.bin")]
        out: PathBuf,
    },
    /// Check a proof; prints the verified output and exits 0, or exits 1.
    Verify {
        #[arg(long, value_enum)]
        protocol: Option<ProtoArg>,
        #[arg(long)]
        vk: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        /// Trustee response (spmv and smallfield).
        #[arg(long)]
        response: Option<PathBuf>,
        /// Precomputed input key (fg); derived from the client key otherwise.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    /// Time every phase on random instances and print CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "pvmat,fg")]
        protocols: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "64")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = DEFAULT_CHUNK_EXPONENT)]
        chunk_a: f64,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed invocation and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn malformed(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }

    pub fn params(msg: impl Into<String>) -> Self {
        Failure { code: 3, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Rejected(_) | Error::UnboundPair => 1,
            Error::Parameter(_) => 3,
            Error::Dimension(_) | Error::Decode(_) | Error::MixedGroups { .. } | Error::Range(_) => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let s = &cli.suite;
    let result = match cli.cmd {
        Command::Keygen(args) => commands::keygen(s, &args),
        Command::Probgen { protocol, vk, x, out } => commands::probgen(protocol, &vk, &x, &out),
        Command::Compute { protocol, ek, x, proof } => commands::compute(protocol, &ek, &x, &proof),
        Command::Trustee {
            protocol,
            trustee_key,
            x,
            proof,
            out,
        } => commands::trustee(protocol, &trustee_key, &x, &proof, &out),
        Command::Verify {
            protocol,
            vk,
            x,
            proof,
            response,
            problem,
        } => commands::verify(s, protocol, &vk, &x, &proof, response.as_deref(), problem.as_deref()),
        Command::Bench {
            protocols,
            sizes,
            reps,
            chunk_a,
            out,
        } => commands::bench(s, protocols, sizes, reps, chunk_a, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if f.code == 1 {
                eprintln!("{}", f.msg);
            } else {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
