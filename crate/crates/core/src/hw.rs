//! Analytic cost model of the semi-parallel multi-kernel SC decoder:
//! decoding latency in clock cycles, coded throughput, memory footprint,
//! and code-parameter storage.

use alloc::vec::Vec;

use crate::code::PolarCodeSpec;
use crate::{Error, Result};

/// Decoder sizing parameters. `p` processing elements (a multiple of 3 so
/// binary and ternary operations pack evenly), LLRs on `q` bits, memories
/// sized for codes up to `n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareConfig {
    pub n_max: usize,
    pub p: usize,
    pub q: u32,
    pub w_cod: usize,
    pub w_frozen: usize,
    pub f_clk_hz: f64,
}

impl HardwareConfig {
    pub fn new(
        n_max: usize,
        p: usize,
        q: u32,
        w_cod: usize,
        w_frozen: usize,
        f_clk_hz: f64,
    ) -> Result<Self> {
        if p == 0 || !p.is_multiple_of(3) {
            return Err(Error::InvalidParameter("P must be a positive multiple of 3"));
        }
        if n_max < 2 {
            return Err(Error::InvalidParameter("N_max must be at least 2"));
        }
        if w_cod == 0 || w_frozen == 0 {
            return Err(Error::InvalidParameter("memory widths must be at least 1"));
        }
        if f_clk_hz.is_nan() || f_clk_hz <= 0.0 {
            return Err(Error::InvalidParameter("clock frequency must be positive"));
        }
        Ok(Self { n_max, p, q, w_cod, w_frozen, f_clk_hz })
    }
}

/// Per-memory bit counts and depths of the decoder's five RAMs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryFootprint {
    pub channel_llr_bits: u64,
    pub internal_llr_bits: u64,
    pub internal_beta_bits: u64,
    pub codeword_bits: u64,
    pub frozen_bits: u64,
    pub total_bits: u64,
    pub channel_llr_depth: u64,
    pub internal_llr_depth: u64,
    pub internal_beta_depth: u64,
    pub codeword_depth: u64,
    pub frozen_depth: u64,
}

/// Decoding latency in clock cycles:
/// `Σ_s ⌈N_s / 2P⌉ · ((n_s + 1) · N / N_s − 1)` over the root-first stage
/// layout.
pub fn decode_latency_cc(spec: &PolarCodeSpec, p: usize) -> u64 {
    assert!(p >= 1, "P must be at least 1");
    let n = spec.n() as u64;
    spec.stage_layout()
        .stages()
        .iter()
        .map(|stage| {
            let size = stage.size as u64;
            let dim = stage.kernel_dim() as u64;
            let steps = size.div_ceil(2 * p as u64);
            steps * ((dim + 1) * (n / size) - 1)
        })
        .sum()
}

/// Coded throughput as (bits per clock cycle, bits per second).
pub fn throughput(spec: &PolarCodeSpec, p: usize, f_clk_hz: f64) -> (f64, f64) {
    assert!(f_clk_hz > 0.0, "clock frequency must be positive");
    let latency = decode_latency_cc(spec, p) as f64;
    let bpc = spec.n() as f64 / latency;
    (bpc, bpc * f_clk_hz)
}

/// Memory footprint of a decoder sized for `cfg.n_max`.
///
/// Depths follow the per-RAM formulas with the purely binary stage count
/// `log2(N_max)` as the upper bound (the deepest tree over the supported
/// kernel mixes). The codeword and frozen-pattern RAMs hold exactly `N_max`
/// bits regardless of the chosen word width; the width only sets the
/// reported depth.
pub fn memory_footprint(cfg: &HardwareConfig) -> Result<MemoryFootprint> {
    if !cfg.n_max.is_power_of_two() {
        return Err(Error::InvalidParameter("N_max must be a power of two"));
    }
    let n_max = cfg.n_max as u64;
    let two_p = 2 * cfg.p as u64;
    let q = u64::from(cfg.q);
    let log2_n = n_max.ilog2() as u64;

    let channel_depth = n_max.div_ceil(two_p);
    // one word per stage s = 1 .. log2(N_max)-1, each ⌈N_max / (2^s·2P)⌉ deep
    let internal_depth: u64 = (1..log2_n).map(|s| (n_max >> s).div_ceil(two_p)).sum();
    let beta_depth: u64 = (0..log2_n).map(|s| (n_max >> s).div_ceil(two_p)).sum();
    let codeword_depth = n_max.div_ceil(cfg.w_cod as u64);
    let frozen_depth = n_max.div_ceil(cfg.w_frozen as u64);

    let channel_llr_bits = channel_depth * two_p * q;
    let internal_llr_bits = internal_depth * two_p * q;
    // three β banks, each 2P wide
    let internal_beta_bits = 3 * beta_depth * two_p;
    let codeword_bits = n_max;
    let frozen_bits = n_max;

    Ok(MemoryFootprint {
        channel_llr_bits,
        internal_llr_bits,
        internal_beta_bits,
        codeword_bits,
        frozen_bits,
        total_bits: channel_llr_bits
            + internal_llr_bits
            + internal_beta_bits
            + codeword_bits
            + frozen_bits,
        channel_llr_depth: channel_depth,
        internal_llr_depth: internal_depth,
        internal_beta_depth: beta_depth,
        codeword_depth,
        frozen_depth,
    })
}

/// `⌈log2(x)⌉` with the convention that values at or below 1 give 0.
fn ceil_log2(x: usize) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from((x - 1).ilog2()) + 1
    }
}

/// Smallest t with `2^t ≥ n / (2p)`, i.e. `⌈log2(N / 2P)⌉`, 0 when the
/// ratio is at most 1.
fn ceil_log2_ratio(n: usize, two_p: usize) -> u64 {
    let mut t = 0;
    let mut reach = two_p as u64;
    while reach < n as u64 {
        reach *= 2;
        t += 1;
    }
    t
}

/// Register bits needed to hold the per-code parameters:
/// `⌈log2 N⌉ + s_m · (2 + 2⌈log2(N / 2P)⌉)`.
pub fn code_param_bits(n: usize, s_m: usize, p: usize) -> u64 {
    assert!(n >= 2 && p >= 1);
    ceil_log2(n) + s_m as u64 * (2 + 2 * ceil_log2_ratio(n, 2 * p))
}

/// All supported code lengths `N = 2^a · 3^b` with `2 ≤ N ≤ n_max`, sorted.
pub fn supported_code_lengths(n_max: usize) -> Vec<usize> {
    assert!(n_max >= 2);
    let mut lengths = Vec::new();
    let mut pow3 = 1usize;
    loop {
        let mut n = pow3;
        loop {
            if n >= 2 {
                lengths.push(n);
            }
            match n.checked_mul(2) {
                Some(next) if next <= n_max => n = next,
                _ => break,
            }
        }
        match pow3.checked_mul(3) {
            Some(next) if next <= n_max => pow3 = next,
            _ => break,
        }
    }
    lengths.sort_unstable();
    lengths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::KernelKind;

    fn spec(dims: &[usize]) -> PolarCodeSpec {
        let kernels: Vec<KernelKind> =
            dims.iter().map(|&d| KernelKind::from_dimension(d).unwrap()).collect();
        let n: usize = dims.iter().product();
        PolarCodeSpec::new(kernels, n, core::iter::empty()).unwrap()
    }

    #[test]
    fn latency_of_published_configurations() {
        assert_eq!(decode_latency_cc(&spec(&[3, 2, 2, 2, 2]), 18), 137);
        assert_eq!(decode_latency_cc(&spec(&[3, 3, 3, 3]), 18), 162);
        assert_eq!(decode_latency_cc(&spec(&[2, 3, 2, 2, 2, 3, 3, 3, 3]), 120), 7965);
        assert_eq!(decode_latency_cc(&spec(&[2, 2, 2, 3, 2, 2]), 18), 272);
    }

    #[test]
    fn throughput_of_published_configurations() {
        let (bpc, bps) = throughput(&spec(&[3, 3, 3, 3]), 18, 1.23e9);
        assert!((bpc - 0.50).abs() < 5e-3);
        assert!((bps / 1e6 - 615.0).abs() < 0.05);
        let (bpc, bps) = throughput(&spec(&[3, 2, 2, 2, 2]), 18, 1.23e9);
        assert!((bpc - 0.35).abs() < 5e-3);
        assert!((bps / 1e6 - 430.9).abs() < 0.1);
    }

    #[test]
    fn memory_footprint_of_published_configurations() {
        let cases = [
            (4096, 120, 7, [30240u64, 43680, 31680, 4096, 4096], 113792u64),
            (1024, 60, 6, [6480, 11520, 9000, 1024, 1024], 29048),
            (256, 18, 5, [1440, 1980, 2052, 256, 256], 5984),
        ];
        for (n_max, p, q, parts, total) in cases {
            let cfg = HardwareConfig::new(n_max, p, q, 32, 32, 1e9).unwrap();
            let m = memory_footprint(&cfg).unwrap();
            assert_eq!(m.channel_llr_bits, parts[0], "channel, N_max={n_max}");
            assert_eq!(m.internal_llr_bits, parts[1], "internal LLR, N_max={n_max}");
            assert_eq!(m.internal_beta_bits, parts[2], "beta, N_max={n_max}");
            assert_eq!(m.codeword_bits, parts[3], "codeword, N_max={n_max}");
            assert_eq!(m.frozen_bits, parts[4], "frozen, N_max={n_max}");
            assert_eq!(m.total_bits, total, "total, N_max={n_max}");
        }
    }

    #[test]
    fn non_power_of_two_n_max_is_rejected() {
        let cfg = HardwareConfig::new(96, 18, 5, 32, 32, 1e9).unwrap();
        assert!(matches!(memory_footprint(&cfg), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn config_invariants_are_enforced() {
        assert!(HardwareConfig::new(256, 16, 5, 32, 32, 1e9).is_err()); // P not multiple of 3
        assert!(HardwareConfig::new(1, 18, 5, 32, 32, 1e9).is_err());
        assert!(HardwareConfig::new(256, 18, 5, 0, 32, 1e9).is_err());
    }

    #[test]
    fn code_param_bits_examples() {
        assert_eq!(code_param_bits(48, 5, 18), 26);
        assert_eq!(code_param_bits(2, 1, 3), 3);
        // non-decreasing in the number of kernels
        let mut prev = 0;
        for s_m in 1..=12 {
            let bits = code_param_bits(768, s_m, 60);
            assert!(bits >= prev);
            prev = bits;
        }
    }

    #[test]
    fn supported_lengths_match_published_counts() {
        assert_eq!(supported_code_lengths(4096).len(), 55);
        assert_eq!(supported_code_lengths(1024).len(), 40);
        assert_eq!(supported_code_lengths(256).len(), 27);
        assert_eq!(supported_code_lengths(2), vec![2]);
    }

    #[test]
    fn supported_lengths_are_sorted_unique_and_3_smooth() {
        let lengths = supported_code_lengths(4096);
        for w in lengths.windows(2) {
            assert!(w[0] < w[1]);
        }
        for &n in &lengths {
            let mut m = n;
            while m % 2 == 0 {
                m /= 2;
            }
            while m % 3 == 0 {
                m /= 3;
            }
            assert_eq!(m, 1, "{n} has a prime factor other than 2 and 3");
        }
    }
}
