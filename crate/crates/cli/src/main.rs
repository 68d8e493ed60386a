use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bbt_polar::bits::{format_binary, format_hex, parse_bits};
use bbt_polar::construction::{construct_ga, DEFAULT_DESIGN_SNR_DB};
use bbt_polar::sim::{DEFAULT_LLR_CAP, DEFAULT_MAX_TRIALS, DEFAULT_MIN_ERRORS};
use bbt_polar::{
    construct, fer_bounds, run_simulation, sigma_from_ebn0, CrcConfig, DecoderKind, DecodingSubTree, GeneratorMatrix,
    Method, OpCounter, PolarCode, RateProfile, SimConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bbt-polar", version, about = "Length-flexible polar codes on a balanced binary tree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a rate profile and print it as JSON.
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        /// Write the profile here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the N×N generator matrix, one row per line.
    GenMatrix {
        #[arg(long)]
        n: usize,
    },
    /// Encode data bits into a codeword.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Data bits, binary (`0110…`) or hex (`0x…`).
        #[arg(long)]
        data: String,
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
    },
    /// Decode channel LLRs.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated LLRs.
        #[arg(long, conflicts_with = "llr_file")]
        llrs: Option<String>,
        /// File of whitespace- or comma-separated LLRs.
        #[arg(long)]
        llr_file: Option<PathBuf>,
        /// Noiseless input: the codeword to decode, as bits.
        #[arg(long, conflicts_with_all = ["llrs", "llr_file"])]
        codeword: Option<String>,
        #[arg(long)]
        psc: bool,
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long, default_value_t = 1)]
        list_size: usize,
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
    },
    /// Monte-Carlo FER/BER over BPSK-AWGN.
    Simulate(SimulateArgs),
    /// Analytical FER bounds for PSC decoding, as CSV.
    Bounds {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        tau: usize,
        /// Comma-separated Eb/N0 values in dB.
        #[arg(long, value_delimiter = ',', required = true)]
        ebn0: Vec<f64>,
    },
    /// Structural analysis of a code.
    Analyze {
        /// Print LLR-operation counts for SC and PSC.
        #[arg(long)]
        op_count: bool,
        #[arg(long)]
        n: usize,
        /// Information lengths to tabulate (comma-separated).
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Construction::Pw)]
        construction: Construction,
        #[arg(long)]
        design_snr: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        tau: Vec<usize>,
    },
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Profile JSON file; replaces --n/--k/--construction.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, required_unless_present = "profile")]
    n: Option<usize>,
    /// Information bits, CRC excluded.
    #[arg(long, required_unless_present = "profile")]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Construction::Pw)]
    construction: Construction,
    /// GA design Eb/N0 in dB.
    #[arg(long)]
    design_snr: Option<f64>,
    #[arg(long, value_enum, default_value_t = Crc::None)]
    crc: Crc,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Construction::Pw)]
    construction: Construction,
    #[arg(long)]
    design_snr: Option<f64>,
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Decoder::Sc)]
    decoder: Decoder,
    #[arg(long, default_value_t = 8)]
    list_size: usize,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long, value_enum, default_value_t = Crc::None)]
    crc: Crc,
    #[arg(long, value_delimiter = ',', required = true)]
    ebn0: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIALS)]
    max_trials: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_ERRORS)]
    min_errors: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_LLR_CAP)]
    llr_cap: f64,
    #[arg(long)]
    noiseless: bool,
    #[arg(long)]
    min_sum: bool,
    /// Output path; `.csv` selects CSV, anything else JSON. Stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Ga,
    Mhw,
    Pw,
}

impl From<Construction> for Method {
    fn from(c: Construction) -> Self {
        match c {
            Construction::Ga => Method::Ga,
            Construction::Mhw => Method::Mhw,
            Construction::Pw => Method::Pw,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Crc {
    None,
    #[value(name = "11")]
    Crc11,
}

impl Crc {
    fn config(self) -> Option<CrcConfig> {
        (self == Crc::Crc11).then(CrcConfig::crc11)
    }

    fn len(self) -> usize {
        self.config().map_or(0, |c| c.len())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Decoder {
    Sc,
    Scl,
    CaScl,
    Psc,
    Pscl,
    CaPscl,
}

impl From<Decoder> for DecoderKind {
    fn from(d: Decoder) -> Self {
        match d {
            Decoder::Sc => DecoderKind::Sc,
            Decoder::Scl => DecoderKind::Scl,
            Decoder::CaScl => DecoderKind::CaScl,
            Decoder::Psc => DecoderKind::Psc,
            Decoder::Pscl => DecoderKind::Pscl,
            Decoder::CaPscl => DecoderKind::CaPscl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Bin,
    Hex,
}

fn format_bits(bits: &[u8], format: Format) -> String {
    match format {
        Format::Bin => format_binary(bits),
        Format::Hex => format_hex(bits),
    }
}

fn build_profile(n: usize, active: usize, k: usize, method: Method, design_snr: Option<f64>) -> Result<RateProfile> {
    Ok(match method {
        Method::Ga => construct_ga(n, active, design_snr.unwrap_or(DEFAULT_DESIGN_SNR_DB), k.max(1) as f64 / n as f64)?,
        m => construct(m, n, active)?,
    })
}

impl CodeArgs {
    /// The profile (with `k + crc` active leaves) and the data length.
    fn resolve(&self) -> Result<(RateProfile, usize)> {
        let c = self.crc.len();
        if let Some(path) = &self.profile {
            let p = RateProfile::load(path).with_context(|| format!("reading {}", path.display()))?;
            if p.k < c {
                bail!("profile has {} active leaves, fewer than the CRC length {c}", p.k);
            }
            let k = p.k - c;
            return Ok((p, k));
        }
        let (n, k) = (self.n.expect("required by clap"), self.k.expect("required by clap"));
        Ok((build_profile(n, k + c, k, self.construction.into(), self.design_snr)?, k))
    }
}

fn read_llrs(inline: Option<&str>, file: Option<&Path>) -> Result<Vec<f64>> {
    let text = match (inline, file) {
        (Some(s), _) => s.to_string(),
        (None, Some(p)) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        (None, None) => bail!("one of --llrs, --llr-file or --codeword is required"),
    };
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad LLR {s:?}")))
        .collect()
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Construct { code, out } => {
            let (profile, _) = code.resolve()?;
            match out {
                Some(path) => profile.save(&path)?,
                None => println!("{}", profile.to_json()?),
            }
        }
        Command::GenMatrix { n } => print!("{}", GeneratorMatrix::new(n)?.to_text()),
        Command::Encode { code, data, format } => {
            let (profile, k) = code.resolve()?;
            let polar = PolarCode::new(profile)?;
            let bits = parse_bits(&data, k)?;
            let x = match code.crc.config() {
                Some(crc) => polar.encode_with_crc(&bits, &crc)?,
                None => polar.encode(&bits)?,
            };
            println!("{}", format_bits(&x, format));
        }
        Command::Decode { code, llrs, llr_file, codeword, psc, tau, list_size, format } => {
            let (profile, _) = code.resolve()?;
            let polar = PolarCode::new(profile)?;
            let llrs = match codeword {
                Some(cw) => parse_bits(&cw, polar.n())?
                    .iter()
                    .map(|&b| if b == 0 { DEFAULT_LLR_CAP } else { -DEFAULT_LLR_CAP })
                    .collect(),
                None => read_llrs(llrs.as_deref(), llr_file.as_deref())?,
            };
            let crc = code.crc.config();
            let mut ops = OpCounter::default();
            let (data, crc_ok) = if psc {
                let Some(tau) = tau else { bail!("--psc needs --tau") };
                let sub = DecodingSubTree::new(&polar, tau)?;
                match (&crc, list_size) {
                    (Some(c), l) => {
                        let r = sub.ca_pscl_decode(&llrs, l, c, &mut ops)?;
                        (r.data, Some(r.crc_ok))
                    }
                    (None, 1) => (sub.psc_decode(&llrs, &mut ops)?, None),
                    (None, l) => (sub.pscl_decode(&llrs, l, &mut ops)?, None),
                }
            } else {
                match (&crc, list_size) {
                    (Some(c), l) => {
                        let r = polar.ca_scl_decode(&llrs, l, c, &mut ops)?;
                        (r.data, Some(r.crc_ok))
                    }
                    (None, 1) => (polar.sc_decode(&llrs, &mut ops)?, None),
                    (None, l) => (polar.scl_decode(&llrs, l, &mut ops)?, None),
                }
            };
            println!("{}", format_bits(&data, format));
            eprintln!("llr_ops={}", ops.total());
            if let Some(ok) = crc_ok {
                eprintln!("crc_ok={ok}");
            }
        }
        Command::Simulate(args) => simulate(args)?,
        Command::Bounds { code, tau, ebn0 } => {
            let (profile, k) = code.resolve()?;
            let n = profile.n;
            let sub = DecodingSubTree::new(&PolarCode::new(profile)?, tau)?;
            println!("ebn0_db,g_ub,b_ub,lb");
            for db in ebn0 {
                let r = fer_bounds(&sub, sigma_from_ebn0(db, k as f64 / n as f64)?)?;
                println!("{:.16e},{:.16e},{:.16e},{:.16e}", db, r.g_ub, r.b_ub, r.lb);
            }
        }
        Command::Analyze { op_count, n, k, construction, design_snr, tau } => {
            if !op_count {
                bail!("nothing to analyze; pass --op-count");
            }
            let bound = n as u64 * (n as f64).log2().ceil() as u64;
            println!("n,k,decoder,tau,llr_ops");
            for &k in &k {
                let code = PolarCode::new(build_profile(n, k, k, construction.into(), design_snr)?)?;
                println!("{n},{k},sc,,{}", code.sc_op_count());
                for &t in &tau {
                    println!("{n},{k},psc,{t},{}", DecodingSubTree::new(&code, t)?.llr_op_count());
                }
            }
            eprintln!("N*ceil(log2 N) = {bound}");
        }
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let mut config = SimConfig::new(a.n, a.k, a.decoder.into());
    config.construction = a.construction.into();
    config.design_snr_db = a.design_snr;
    config.profile = a.profile.as_deref().map(RateProfile::load).transpose()?;
    config.list_size = if config.decoder.is_list() { a.list_size } else { 1 };
    config.tau = a.tau;
    config.crc = a.crc.len();
    config.ebn0_db = a.ebn0;
    config.max_trials = a.max_trials;
    config.min_errors = a.min_errors;
    config.seed = a.seed;
    config.llr_cap = a.llr_cap;
    config.noiseless = a.noiseless;
    if a.min_sum {
        config.f_rule = bbt_polar::FRule::MinSum;
    }
    let result = run_simulation(&config)?;
    let csv = a.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv"));
    let text = if csv { result.to_csv() } else { result.to_json()? + "\n" };
    match a.out {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
