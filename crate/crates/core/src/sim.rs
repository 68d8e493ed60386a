//! BPSK over AWGN and Monte-Carlo FER/BER estimation.
//!
//! Every trial draws from its own ChaCha8 substream: the seed picks the key,
//! the SNR index picks the stream, and the trial index picks a block of
//! 2^20 words inside it. Trials run in parallel batches and are then scanned
//! in order, so the stopping point and all counts do not depend on the
//! thread count.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{CrcConfig, FRule, OpCounter, PolarCode};
use crate::construction::{construct, construct_ga, Method, RateProfile, DEFAULT_DESIGN_SNR_DB};
use crate::error::{Error, Result};
use crate::psc::DecodingSubTree;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_LLR_CAP: f64 = 50.0;
pub const DEFAULT_MAX_TRIALS: u64 = 10_000_000;
pub const DEFAULT_MIN_ERRORS: u64 = 100;
const BATCH: u64 = 2048;
const WORDS_PER_TRIAL_LOG2: u32 = 20;

/// Noise deviation for unit-energy BPSK: `σ = 1/√(2 R 10^{Eb/N0/10})`.
pub fn sigma_from_ebn0(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!("rate must be positive, got {rate}")));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)).sqrt())
}

/// BPSK (`0 → +1`, `1 → −1`) through AWGN, returned as LLRs `2y/σ²`
/// saturated at `±cap`.
pub fn channel_llrs<R: Rng + ?Sized>(codeword: &[u8], sigma: f64, rng: &mut R, cap: f64) -> Vec<f64> {
    let scale = 2.0 / (sigma * sigma);
    codeword
        .iter()
        .map(|&b| {
            let noise: f64 = rng.sample(StandardNormal);
            let y = 1.0 - 2.0 * f64::from(b) + sigma * noise;
            (scale * y).clamp(-cap, cap)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    Sc,
    Scl,
    CaScl,
    Psc,
    Pscl,
    CaPscl,
}

impl DecoderKind {
    pub fn is_list(self) -> bool {
        matches!(self, Self::Scl | Self::CaScl | Self::Pscl | Self::CaPscl)
    }

    pub fn is_partitioned(self) -> bool {
        matches!(self, Self::Psc | Self::Pscl | Self::CaPscl)
    }

    pub fn uses_crc(self) -> bool {
        matches!(self, Self::CaScl | Self::CaPscl)
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sc => "sc",
            Self::Scl => "scl",
            Self::CaScl => "ca-scl",
            Self::Psc => "psc",
            Self::Pscl => "pscl",
            Self::CaPscl => "ca-pscl",
        })
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "sc" => Self::Sc,
            "scl" => Self::Scl,
            "ca-scl" => Self::CaScl,
            "psc" => Self::Psc,
            "pscl" => Self::Pscl,
            "ca-pscl" => Self::CaPscl,
            other => return Err(Error::Config(format!("unknown decoder {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    /// Information bits per frame, CRC excluded.
    pub k: usize,
    pub construction: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design_snr_db: Option<f64>,
    /// Overrides `construction` when set; must have `k + crc` active leaves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<RateProfile>,
    pub decoder: DecoderKind,
    pub list_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
    /// CRC length in bits; 0 or 11.
    pub crc: usize,
    pub ebn0_db: Vec<f64>,
    pub max_trials: u64,
    pub min_errors: u64,
    pub seed: u64,
    pub llr_cap: f64,
    /// Skip the noise and send `±llr_cap`.
    pub noiseless: bool,
    pub f_rule: FRule,
}

impl SimConfig {
    pub fn new(n: usize, k: usize, decoder: DecoderKind) -> Self {
        Self {
            n,
            k,
            construction: Method::Pw,
            design_snr_db: None,
            profile: None,
            decoder,
            list_size: 1,
            tau: None,
            crc: 0,
            ebn0_db: Vec::new(),
            max_trials: DEFAULT_MAX_TRIALS,
            min_errors: DEFAULT_MIN_ERRORS,
            seed: 0,
            llr_cap: DEFAULT_LLR_CAP,
            noiseless: false,
            f_rule: FRule::Exact,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_trials == 0 || self.min_errors == 0 {
            return Err(Error::Config("max_trials and min_errors must be at least 1".into()));
        }
        if self.k > self.n {
            return Err(Error::InvalidDimension { n: self.n, k: self.k });
        }
        if self.decoder.is_list() && self.list_size == 0 {
            return Err(Error::Config(format!("{} needs a list size of at least 1", self.decoder)));
        }
        if self.decoder.is_partitioned() && !self.tau.is_some_and(|t| t >= 1) {
            return Err(Error::Config(format!("{} needs tau >= 1", self.decoder)));
        }
        match (self.decoder.uses_crc(), self.crc) {
            (true, 11) | (false, 0) => {}
            (true, c) => return Err(Error::Config(format!("{} needs crc 11, got {c}", self.decoder))),
            (false, c) => return Err(Error::Config(format!("{} does not use a CRC, got crc {c}", self.decoder))),
        }
        if self.k + self.crc > self.n {
            return Err(Error::InvalidDimension { n: self.n, k: self.k + self.crc });
        }
        if !(self.llr_cap > 0.0) {
            return Err(Error::Config("llr_cap must be positive".into()));
        }
        if let Some(p) = &self.profile {
            p.validate()?;
            if p.n != self.n || p.k != self.k + self.crc {
                return Err(Error::Config(format!(
                    "profile is ({}, {}) but the config needs ({}, {})",
                    p.n,
                    p.k,
                    self.n,
                    self.k + self.crc
                )));
            }
        }
        Ok(())
    }

    /// Information rate `K/N` used for the Eb/N0 mapping.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn build_profile(&self) -> Result<RateProfile> {
        if let Some(p) = &self.profile {
            return Ok(p.clone());
        }
        let active = self.k + self.crc;
        match self.construction {
            Method::Ga => construct_ga(
                self.n,
                active,
                self.design_snr_db.unwrap_or(DEFAULT_DESIGN_SNR_DB),
                self.k.max(1) as f64 / self.n as f64,
            ),
            m => construct(m, self.n, active),
        }
    }
}

/// A ready-to-run decoder for one configuration.
#[derive(Debug, Clone)]
pub struct FrameDecoder {
    kind: DecoderKind,
    code: PolarCode,
    subtree: Option<DecodingSubTree>,
    list_size: usize,
    crc: Option<CrcConfig>,
}

impl FrameDecoder {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let code = PolarCode::new(config.build_profile()?)?.with_f_rule(config.f_rule);
        let subtree = match config.tau {
            Some(tau) if config.decoder.is_partitioned() => Some(DecodingSubTree::new(&code, tau)?),
            _ => None,
        };
        let crc = config.decoder.uses_crc().then(CrcConfig::crc11);
        Ok(Self { kind: config.decoder, code, subtree, list_size: config.list_size, crc })
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn data_len(&self) -> usize {
        self.code.k() - self.crc.map_or(0, |c| c.len())
    }

    pub fn encode(&self, data: &[u8]) -> Result<Vec<u8>> {
        match &self.crc {
            Some(crc) => self.code.encode_with_crc(data, crc),
            None => self.code.encode(data),
        }
    }

    pub fn decode(&self, llrs: &[f64], ops: &mut OpCounter) -> Result<Vec<u8>> {
        let sub = || self.subtree.as_ref().expect("partitioned decoder has a subtree");
        let crc = || self.crc.as_ref().expect("CRC decoder has a CRC");
        Ok(match self.kind {
            DecoderKind::Sc => self.code.sc_decode(llrs, ops)?,
            DecoderKind::Scl => self.code.scl_decode(llrs, self.list_size, ops)?,
            DecoderKind::CaScl => self.code.ca_scl_decode(llrs, self.list_size, crc(), ops)?.data,
            DecoderKind::Psc => sub().psc_decode(llrs, ops)?,
            DecoderKind::Pscl => sub().pscl_decode(llrs, self.list_size, ops)?,
            DecoderKind::CaPscl => sub().ca_pscl_decode(llrs, self.list_size, crc(), ops)?.data,
        })
    }

    /// LLR operations of one frame, from the tree structure alone.
    pub fn static_op_count(&self) -> u64 {
        match &self.subtree {
            Some(sub) => sub.llr_op_count(),
            None => self.code.sc_op_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub ebn0_db: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    /// Mean LLR operations per frame.
    pub llr_ops: f64,
}

impl SnrPoint {
    /// Binomial standard error of the FER estimate.
    pub fn fer_std_error(&self) -> f64 {
        (self.fer * (1.0 - self.fer) / self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub schema_version: u32,
    pub config: SimConfig,
    pub results: Vec<SnrPoint>,
}

impl SimResult {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("ebn0_db,trials,frame_errors,bit_errors,fer,ber,llr_ops\n");
        for p in &self.results {
            out += &format!(
                "{:.16e},{},{},{},{:.16e},{:.16e},{:.16e}\n",
                p.ebn0_db, p.trials, p.frame_errors, p.bit_errors, p.fer, p.ber, p.llr_ops
            );
        }
        out
    }
}

struct Trial {
    frame_error: bool,
    bit_errors: u64,
    ops: u64,
}

fn trial_rng(seed: u64, snr_index: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(snr_index as u64);
    rng.set_word_pos(u128::from(trial) << WORDS_PER_TRIAL_LOG2);
    rng
}

fn run_trial(dec: &FrameDecoder, config: &SimConfig, sigma: f64, snr_index: usize, t: u64) -> Result<Trial> {
    let mut rng = trial_rng(config.seed, snr_index, t);
    let data: Vec<u8> = (0..dec.data_len()).map(|_| u8::from(rng.random::<bool>())).collect();
    let x = dec.encode(&data)?;
    let llrs = if config.noiseless {
        x.iter().map(|&b| if b == 0 { config.llr_cap } else { -config.llr_cap }).collect()
    } else {
        channel_llrs(&x, sigma, &mut rng, config.llr_cap)
    };
    let mut ops = OpCounter::default();
    let est = dec.decode(&llrs, &mut ops)?;
    let bit_errors = est.iter().zip(&data).filter(|(a, b)| a != b).count() as u64;
    Ok(Trial { frame_error: bit_errors > 0, bit_errors, ops: ops.total() })
}

pub fn run_simulation(config: &SimConfig) -> Result<SimResult> {
    let dec = FrameDecoder::new(config)?;
    let rate = config.rate();
    let mut results = Vec::with_capacity(config.ebn0_db.len());
    for (idx, &db) in config.ebn0_db.iter().enumerate() {
        // K = 0 has no Eb; any finite noise level gives the same (trivial) outcome
        let sigma = if config.k == 0 { 1.0 } else { sigma_from_ebn0(db, rate)? };
        let (mut trials, mut frame_errors, mut bit_errors, mut ops) = (0u64, 0u64, 0u64, 0u64);
        'outer: while trials < config.max_trials {
            let end = (trials + BATCH).min(config.max_trials);
            let batch: Vec<Trial> =
                (trials..end).into_par_iter().map(|t| run_trial(&dec, config, sigma, idx, t)).collect::<Result<_>>()?;
            for tr in batch {
                trials += 1;
                frame_errors += u64::from(tr.frame_error);
                bit_errors += tr.bit_errors;
                ops += tr.ops;
                if frame_errors >= config.min_errors {
                    break 'outer;
                }
            }
        }
        let bits = trials * dec.data_len() as u64;
        results.push(SnrPoint {
            ebn0_db: db,
            trials,
            frame_errors,
            bit_errors,
            fer: frame_errors as f64 / trials as f64,
            ber: if bits == 0 { 0.0 } else { bit_errors as f64 / bits as f64 },
            llr_ops: ops as f64 / trials as f64,
        });
    }
    Ok(SimResult { schema_version: SCHEMA_VERSION, config: config.clone(), results })
}
