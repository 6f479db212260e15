//! BPSK over AWGN and a deterministic frame-error-rate engine.
//!
//! Every random quantity is drawn from a ChaCha8 stream keyed by the run
//! seed and the frame index (`set_stream(frame)`), with separate streams
//! for noise and message bits, so a frame's realization depends only on
//! `(seed, frame_index)` — never on scheduling or worker count. Gaussian
//! samples use the Box–Muller transform on 53-bit uniforms, so a given
//! build reproduces streams exactly.
//!
//! Frames are processed in fixed batches of [`FRAME_BATCH`]; the early-stop
//! check runs only at batch boundaries. A parallel driver that splits
//! batches across workers therefore produces byte-identical statistics to
//! the serial loop here.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::code::PolarCodeSpec;
use crate::encode::{encode_in_place, BitVector};
use crate::quant::{quantize, QuantConfig, QuantScDecoder};
use crate::sc::{DecodeMode, LlrVector, ScDecoder};
use crate::{Error, Result};

/// Frames per early-stop check; parallel drivers must split work along
/// these boundaries to preserve determinism.
pub const FRAME_BATCH: u64 = 1024;

/// Stream tag for channel noise draws.
const STREAM_NOISE: u64 = 0x9e37_79b9_7f4a_7c15;
/// Stream tag for message bit draws.
const STREAM_MESSAGE: u64 = 0xd1b5_4a32_d192_ed03;

/// AWGN channel operating point.
///
/// With noise enabled, `σ² = 1 / (2 · rate · 10^(ebn0_db/10))` and channel
/// LLRs are `2y/σ²`. With noise disabled the LLRs are `±2` (the noiseless
/// limit at a reference σ² of 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    pub rate: f64,
    pub noise_enabled: bool,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn awgn(ebn0_db: f64, rate: f64, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter("rate must be in (0, 1]"));
        }
        Ok(Self { ebn0_db, rate, noise_enabled: true, seed })
    }

    pub fn noiseless(seed: u64) -> Self {
        Self { ebn0_db: 0.0, rate: 1.0, noise_enabled: false, seed }
    }

    /// Noise variance σ² per real dimension.
    pub fn noise_sigma2(&self) -> f64 {
        1.0 / (2.0 * self.rate * libm::pow(10.0, self.ebn0_db / 10.0))
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// ChaCha8 generator for one (seed, purpose, frame) triple.
fn frame_rng(seed: u64, purpose: u64, frame_index: u64) -> ChaCha8Rng {
    let mut state = seed ^ purpose;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(frame_index);
    rng
}

/// Uniform draw in (0, 1] with 53-bit resolution.
#[inline]
fn uniform_open01(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One Box–Muller pair of independent standard normal samples.
#[inline]
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let r = libm::sqrt(-2.0 * libm::log(uniform_open01(rng)));
    let theta = 2.0 * core::f64::consts::PI * uniform_open01(rng);
    (r * libm::cos(theta), r * libm::sin(theta))
}

/// BPSK mapping: bit 0 → +1.0, bit 1 → −1.0.
pub fn modulate_bpsk(x: &BitVector) -> Vec<f64> {
    x.bits().iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Adds AWGN from the frame's noise stream and returns channel LLRs
/// `2y/σ²`; with noise disabled, `2s` (fixed magnitude 2).
pub fn awgn_llr(symbols: &[f64], cfg: &ChannelConfig, frame_index: u64) -> LlrVector {
    if !cfg.noise_enabled {
        return symbols.iter().map(|&s| 2.0 * s).collect();
    }
    let sigma2 = cfg.noise_sigma2();
    let sigma = libm::sqrt(sigma2);
    let mut rng = frame_rng(cfg.seed, STREAM_NOISE, frame_index);
    let mut llrs = Vec::with_capacity(symbols.len());
    let mut pending: Option<f64> = None;
    for &s in symbols {
        let z = match pending.take() {
            Some(z) => z,
            None => {
                let (z0, z1) = gaussian_pair(&mut rng);
                pending = Some(z1);
                z0
            }
        };
        llrs.push(2.0 * (s + sigma * z) / sigma2);
    }
    LlrVector::new(llrs)
}

/// K message bits from the frame's message stream.
pub fn random_message(seed: u64, frame_index: u64, k: usize) -> BitVector {
    let mut rng = frame_rng(seed, STREAM_MESSAGE, frame_index);
    (0..k).map(|_| (rng.next_u32() & 1) as u8).collect()
}

/// Which decoder a simulation run drives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderSelect {
    Exact,
    MinSum,
    Quantized(QuantConfig),
}

/// Monte Carlo counters for one Eb/N0 point.
#[derive(Debug, Clone, PartialEq)]
pub struct FerStatsRow {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
}

impl FerStatsRow {
    pub fn from_counts(
        ebn0_db: f64,
        k: usize,
        frames: u64,
        frame_errors: u64,
        bit_errors: u64,
    ) -> Self {
        let fer = frame_errors as f64 / frames as f64;
        let ber = bit_errors as f64 / (frames as f64 * k as f64);
        Self { ebn0_db, frames, frame_errors, bit_errors, fer, ber }
    }
}

/// Outcome of a single simulated frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    pub frame_error: bool,
}

enum InnerDecoder {
    Float(ScDecoder),
    Quant(QuantScDecoder, QuantConfig),
}

/// Encode–channel–decode pipeline for one code and decoder, with reusable
/// scratch. Instances are independent; one instance handles one frame at a
/// time.
pub struct FrameSimulator {
    layout: crate::code::StageLayout,
    decoder: InnerDecoder,
    info: Vec<usize>,
    u: Vec<u8>,
    x: Vec<u8>,
    symbols: Vec<f64>,
    u_hat: Vec<u8>,
    x_hat: Vec<u8>,
}

impl FrameSimulator {
    pub fn new(spec: &PolarCodeSpec, select: DecoderSelect) -> Self {
        let decoder = match select {
            DecoderSelect::Exact => InnerDecoder::Float(ScDecoder::new(spec, DecodeMode::Exact)),
            DecoderSelect::MinSum => {
                InnerDecoder::Float(ScDecoder::new(spec, DecodeMode::MinSum))
            }
            DecoderSelect::Quantized(cfg) => {
                InnerDecoder::Quant(QuantScDecoder::new(spec, cfg), cfg)
            }
        };
        let n = spec.n();
        Self {
            layout: spec.stage_layout(),
            decoder,
            info: spec.info_indices(),
            u: vec![0; n],
            x: vec![0; n],
            symbols: vec![0.0; n],
            u_hat: vec![0; n],
            x_hat: vec![0; n],
        }
    }

    /// Simulates one frame: random message, encode, BPSK+AWGN, decode, and
    /// error counting over the message (non-frozen) positions.
    pub fn simulate(&mut self, cfg: &ChannelConfig, frame_index: u64) -> FrameOutcome {
        let msg = random_message(cfg.seed, frame_index, self.info.len());
        self.u.fill(0);
        for (slot, &i) in msg.bits().iter().zip(&self.info) {
            self.u[i] = *slot;
        }
        self.x.copy_from_slice(&self.u);
        encode_in_place(&self.layout, &mut self.x).expect("u has length N");
        for (sym, &bit) in self.symbols.iter_mut().zip(&self.x) {
            *sym = if bit == 0 { 1.0 } else { -1.0 };
        }
        let llrs = awgn_llr(&self.symbols, cfg, frame_index);
        match &mut self.decoder {
            InnerDecoder::Float(dec) => {
                dec.decode_into(&llrs, &mut self.u_hat, &mut self.x_hat).expect("length N")
            }
            InnerDecoder::Quant(dec, qcfg) => {
                let qllrs: Vec<_> = llrs.values().iter().map(|&v| quantize(v, qcfg)).collect();
                dec.decode_into(&qllrs, &mut self.u_hat, &mut self.x_hat).expect("length N")
            }
        }
        let bit_errors =
            self.info.iter().filter(|&&i| self.u_hat[i] != self.u[i]).count() as u64;
        FrameOutcome { bit_errors, frame_error: bit_errors > 0 }
    }
}

/// Serial Monte Carlo run for one channel configuration. Stops at
/// `max_frames`, or at the first batch boundary where `min_frame_errors`
/// frame errors have accumulated (0 disables early stopping).
pub fn run_point(
    spec: &PolarCodeSpec,
    select: DecoderSelect,
    cfg: &ChannelConfig,
    max_frames: u64,
    min_frame_errors: u64,
) -> Result<FerStatsRow> {
    if max_frames == 0 {
        return Err(Error::InvalidParameter("max_frames must be at least 1"));
    }
    if spec.k() == 0 {
        return Err(Error::InvalidParameter("FER simulation needs K >= 1"));
    }
    let mut sim = FrameSimulator::new(spec, select);
    let (mut frames, mut frame_errors, mut bit_errors) = (0u64, 0u64, 0u64);
    while frames < max_frames {
        let end = (frames + FRAME_BATCH).min(max_frames);
        for f in frames..end {
            let outcome = sim.simulate(cfg, f);
            bit_errors += outcome.bit_errors;
            frame_errors += u64::from(outcome.frame_error);
        }
        frames = end;
        if min_frame_errors > 0 && frame_errors >= min_frame_errors {
            break;
        }
    }
    Ok(FerStatsRow::from_counts(cfg.ebn0_db, spec.k(), frames, frame_errors, bit_errors))
}

/// FER/BER sweep over Eb/N0 points, one row per point. Rows are exactly
/// reproducible from the seed.
pub fn run_fer(
    spec: &PolarCodeSpec,
    select: DecoderSelect,
    snr_points_db: &[f64],
    max_frames: u64,
    min_frame_errors: u64,
    seed: u64,
) -> Result<Vec<FerStatsRow>> {
    let rate = spec.k() as f64 / spec.n() as f64;
    snr_points_db
        .iter()
        .map(|&ebn0_db| {
            let cfg = ChannelConfig::awgn(ebn0_db, rate, seed)?;
            run_point(spec, select, &cfg, max_frames, min_frame_errors)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::KernelKind;

    fn spec_p12_6() -> PolarCodeSpec {
        let kernels = vec![KernelKind::Binary, KernelKind::Ternary, KernelKind::Binary];
        PolarCodeSpec::new(kernels, 6, [0, 1, 2, 3, 4, 6]).unwrap()
    }

    #[test]
    fn bpsk_mapping() {
        let x = BitVector::new(vec![0, 1, 0]).unwrap();
        assert_eq!(modulate_bpsk(&x), vec![1.0, -1.0, 1.0]);
        assert_eq!(modulate_bpsk(&BitVector::zeros(4)), vec![1.0; 4]);
    }

    #[test]
    fn noiseless_llrs_have_magnitude_two() {
        let cfg = ChannelConfig::noiseless(7);
        let llrs = awgn_llr(&[1.0, -1.0], &cfg, 0);
        assert_eq!(llrs.values(), &[2.0, -2.0]);
    }

    #[test]
    fn sigma_squared_at_rate_half_and_zero_db_is_one() {
        let cfg = ChannelConfig::awgn(0.0, 0.5, 1).unwrap();
        assert!((cfg.noise_sigma2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_rate_is_rejected() {
        assert!(ChannelConfig::awgn(1.0, 0.0, 1).is_err());
        assert!(ChannelConfig::awgn(1.0, 1.5, 1).is_err());
    }

    #[test]
    fn identical_seed_and_frame_give_identical_llrs() {
        let cfg = ChannelConfig::awgn(2.0, 0.5, 42).unwrap();
        let symbols = [1.0, -1.0, 1.0, 1.0, -1.0];
        let a = awgn_llr(&symbols, &cfg, 17);
        let b = awgn_llr(&symbols, &cfg, 17);
        assert_eq!(a, b);
        let c = awgn_llr(&symbols, &cfg, 18);
        assert_ne!(a, c);
    }

    #[test]
    fn message_stream_is_independent_of_noise_stream() {
        // same (seed, frame): the two purposes must not replay each other
        let msg = random_message(42, 17, 64);
        let msg2 = random_message(42, 17, 64);
        assert_eq!(msg, msg2);
        let other = random_message(43, 17, 64);
        assert_ne!(msg, other);
    }

    #[test]
    fn noiseless_run_has_zero_errors() {
        let spec = spec_p12_6();
        let cfg = ChannelConfig::noiseless(3);
        for select in [
            DecoderSelect::Exact,
            DecoderSelect::MinSum,
            DecoderSelect::Quantized(QuantConfig::new(7, 3).unwrap()),
        ] {
            let row = run_point(&spec, select, &cfg, 200, 0).unwrap();
            assert_eq!(row.frame_errors, 0);
            assert_eq!(row.bit_errors, 0);
            assert_eq!(row.fer, 0.0);
            assert_eq!(row.ber, 0.0);
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let spec = spec_p12_6();
        let points = [0.0, 2.0];
        let a = run_fer(&spec, DecoderSelect::MinSum, &points, 3000, 50, 99).unwrap();
        let b = run_fer(&spec, DecoderSelect::MinSum, &points, 3000, 50, 99).unwrap();
        assert_eq!(a, b);
        assert!(a[0].frames >= 1);
        assert!(a[0].fer >= a[1].fer || a[0].frames < 3000);
    }

    #[test]
    fn early_stop_respects_batch_boundaries() {
        let spec = spec_p12_6();
        // at -3 dB nearly every frame fails, so the first batch collects
        // far more than min_frame_errors and the run stops there
        let rows = run_fer(&spec, DecoderSelect::MinSum, &[-3.0], 100_000, 10, 5).unwrap();
        assert_eq!(rows[0].frames, FRAME_BATCH);
        assert!(rows[0].frame_errors >= 10);
    }

    #[test]
    fn zero_max_frames_is_rejected() {
        let spec = spec_p12_6();
        assert!(run_fer(&spec, DecoderSelect::MinSum, &[1.0], 0, 0, 1).is_err());
    }
}
