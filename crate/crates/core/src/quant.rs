//! Sign-magnitude fixed-point SC decoding.
//!
//! LLRs are stored as a sign bit plus an unsigned magnitude on `Q` total
//! bits, `Q_f` of them fractional. The processing-element rules work
//! directly on the sign/magnitude decomposition: f outputs the XOR of signs
//! and the minimum magnitude; the g rules compute `max ± min` selected by a
//! parity bit χ, take the sign of the dominant operand via a comparator bit
//! γ, and saturate additions at the top of the representable range. This
//! reproduces the min-sum decoder bit for bit whenever nothing saturates.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::code::PolarCodeSpec;
use crate::encode::BitVector;
use crate::sc::{DecodeResult, LlrVector};
use crate::tree::{KernelOps, ScEngine};
use crate::{Error, Result};

/// Fixed-point format: `q` total bits with `q_f` fractional bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantConfig {
    q: u32,
    qf: u32,
}

impl QuantConfig {
    pub fn new(q: u32, qf: u32) -> Result<Self> {
        if !(2..=24).contains(&q) {
            return Err(Error::InvalidParameter("Q must be in [2, 24]"));
        }
        if qf > q - 1 {
            return Err(Error::InvalidParameter("Q_f must be at most Q-1"));
        }
        Ok(Self { q, qf })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn qf(&self) -> u32 {
        self.qf
    }

    /// Format pairing used by the reference decoder sizings: (7, 3) for
    /// codes up to 4096, (6, 3) up to 1024, (5, 2) up to 256.
    pub fn recommended_for(n_max: usize) -> Self {
        let (q, qf) = if n_max <= 256 {
            (5, 2)
        } else if n_max <= 1024 {
            (6, 3)
        } else {
            (7, 3)
        };
        Self { q, qf }
    }

    /// Largest representable magnitude, `2^(Q-1) - 1` units.
    pub fn max_mag(&self) -> u32 {
        (1u32 << (self.q - 1)) - 1
    }

    /// LLR units per magnitude step.
    pub fn step(&self) -> f64 {
        1.0 / f64::from(1u32 << self.qf)
    }
}

/// Quantized LLR in sign-magnitude form. The zero is canonical: magnitude 0
/// always carries a non-negative sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignMagLlr {
    negative: bool,
    mag: u32,
}

impl SignMagLlr {
    /// Builds a value, saturating the magnitude to the format range and
    /// canonicalizing zero.
    pub fn new(cfg: &QuantConfig, negative: bool, mag: u32) -> Self {
        let mag = mag.min(cfg.max_mag());
        Self { negative: negative && mag > 0, mag }
    }

    pub const ZERO: SignMagLlr = SignMagLlr { negative: false, mag: 0 };

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Sign bit: 0 for non-negative values.
    pub fn sign_bit(&self) -> u8 {
        u8::from(self.negative)
    }

    /// Magnitude in integer units.
    pub fn mag(&self) -> u32 {
        self.mag
    }

    /// Value in LLR units.
    pub fn value(&self, cfg: &QuantConfig) -> f64 {
        let m = f64::from(self.mag) * cfg.step();
        if self.negative {
            -m
        } else {
            m
        }
    }
}

/// Quantizes an LLR: round to the nearest magnitude step with ties away
/// from zero, saturate at `2^(Q-1)-1`, canonical zero.
pub fn quantize(x: f64, cfg: &QuantConfig) -> SignMagLlr {
    let scaled = libm::round(libm::fabs(x) * f64::from(1u32 << cfg.qf));
    let max = cfg.max_mag();
    let mag = if scaled >= f64::from(max) { max } else { scaled as u32 };
    SignMagLlr::new(cfg, x < 0.0, mag)
}

/// Quantizes a whole channel LLR vector.
pub fn quantize_llrs(llrs: &LlrVector, cfg: &QuantConfig) -> Vec<SignMagLlr> {
    llrs.values().iter().map(|&x| quantize(x, cfg)).collect()
}

/// Saturating magnitude combiner for the g-style rules: `hi + lo` when the
/// parity `chi` is 0, `hi - lo` otherwise (`hi >= lo`). Returns the result
/// and whether the addition saturated.
#[inline]
fn combine_mags(cfg: &QuantConfig, hi: u32, lo: u32, chi: bool) -> (u32, bool) {
    if chi {
        (hi - lo, false)
    } else {
        let sum = hi + lo;
        let max = cfg.max_mag();
        (sum.min(max), sum > max)
    }
}

/// Binary f: sign XOR, minimum magnitude.
pub fn pe_f_bin_q(a: SignMagLlr, b: SignMagLlr) -> SignMagLlr {
    let mag = a.mag.min(b.mag);
    SignMagLlr { negative: (a.negative ^ b.negative) && mag > 0, mag }
}

#[inline]
fn g_bin_q_impl(cfg: &QuantConfig, a: SignMagLlr, b: SignMagLlr, u0: u8) -> (SignMagLlr, bool) {
    let term_a_neg = (u0 == 1) ^ a.negative;
    let chi = term_a_neg ^ b.negative;
    let gamma = a.mag > b.mag;
    let (hi, lo) = if gamma { (a.mag, b.mag) } else { (b.mag, a.mag) };
    let (mag, sat) = combine_mags(cfg, hi, lo, chi);
    let negative = if gamma { term_a_neg } else { b.negative };
    (SignMagLlr::new(cfg, negative, mag), sat)
}

/// Binary g with the left decision `u0`: magnitude `max ± min` selected by
/// the parity of the operand signs, sign of the larger operand, saturated.
pub fn pe_g_bin_q(a: SignMagLlr, b: SignMagLlr, u0: u8, cfg: &QuantConfig) -> SignMagLlr {
    g_bin_q_impl(cfg, a, b, u0).0
}

/// Ternary f: three-way sign XOR, minimum of the three magnitudes.
pub fn pe_f_tern_q(a: SignMagLlr, b: SignMagLlr, c: SignMagLlr) -> SignMagLlr {
    let mag = a.mag.min(b.mag).min(c.mag);
    SignMagLlr { negative: (a.negative ^ b.negative ^ c.negative) && mag > 0, mag }
}

#[inline]
fn g1_tern_q_impl(
    cfg: &QuantConfig,
    a: SignMagLlr,
    b: SignMagLlr,
    c: SignMagLlr,
    u0: u8,
) -> (SignMagLlr, bool) {
    // second operand is the binary-f combination of b and c
    let f_mag = b.mag.min(c.mag);
    let f_neg = b.negative ^ c.negative;
    let term_a_neg = (u0 == 1) ^ a.negative;
    let chi = term_a_neg ^ f_neg;
    let gamma = a.mag > f_mag;
    let (hi, lo) = if gamma { (a.mag, f_mag) } else { (f_mag, a.mag) };
    let (mag, sat) = combine_mags(cfg, hi, lo, chi);
    let negative = if gamma { term_a_neg } else { f_neg };
    (SignMagLlr::new(cfg, negative, mag), sat)
}

/// Ternary g1 with the left decision `u0`.
pub fn pe_g1_tern_q(
    a: SignMagLlr,
    b: SignMagLlr,
    c: SignMagLlr,
    u0: u8,
    cfg: &QuantConfig,
) -> SignMagLlr {
    g1_tern_q_impl(cfg, a, b, c, u0).0
}

#[inline]
fn g2_tern_q_impl(
    cfg: &QuantConfig,
    b: SignMagLlr,
    c: SignMagLlr,
    u0: u8,
    u1: u8,
) -> (SignMagLlr, bool) {
    let term_b_neg = (u0 == 1) ^ b.negative;
    let term_c_neg = ((u0 ^ u1) == 1) ^ c.negative;
    let chi = term_b_neg ^ term_c_neg;
    let gamma = b.mag > c.mag;
    let (hi, lo) = if gamma { (b.mag, c.mag) } else { (c.mag, b.mag) };
    let (mag, sat) = combine_mags(cfg, hi, lo, chi);
    let negative = if gamma { term_b_neg } else { term_c_neg };
    (SignMagLlr::new(cfg, negative, mag), sat)
}

/// Ternary g2 with the left and center decisions `u0`, `u1`.
pub fn pe_g2_tern_q(
    b: SignMagLlr,
    c: SignMagLlr,
    u0: u8,
    u1: u8,
    cfg: &QuantConfig,
) -> SignMagLlr {
    g2_tern_q_impl(cfg, b, c, u0, u1).0
}

pub(crate) struct QuantOps {
    cfg: QuantConfig,
    saturations: Cell<u64>,
}

impl QuantOps {
    fn count(&self, sat: bool) {
        if sat {
            self.saturations.set(self.saturations.get() + 1);
        }
    }
}

impl KernelOps for QuantOps {
    type Llr = SignMagLlr;
    #[inline]
    fn f_bin(&self, a: SignMagLlr, b: SignMagLlr) -> SignMagLlr {
        let r = pe_f_bin_q(a, b);
        debug_assert!(r.mag > 0 || !r.negative);
        r
    }
    #[inline]
    fn g_bin(&self, a: SignMagLlr, b: SignMagLlr, u0: u8) -> SignMagLlr {
        let (r, sat) = g_bin_q_impl(&self.cfg, a, b, u0);
        self.count(sat);
        debug_assert!(r.mag > 0 || !r.negative);
        r
    }
    #[inline]
    fn f_tern(&self, a: SignMagLlr, b: SignMagLlr, c: SignMagLlr) -> SignMagLlr {
        let r = pe_f_tern_q(a, b, c);
        debug_assert!(r.mag > 0 || !r.negative);
        r
    }
    #[inline]
    fn g1_tern(&self, a: SignMagLlr, b: SignMagLlr, c: SignMagLlr, u0: u8) -> SignMagLlr {
        let (r, sat) = g1_tern_q_impl(&self.cfg, a, b, c, u0);
        self.count(sat);
        debug_assert!(r.mag > 0 || !r.negative);
        r
    }
    #[inline]
    fn g2_tern(&self, b: SignMagLlr, c: SignMagLlr, u0: u8, u1: u8) -> SignMagLlr {
        let (r, sat) = g2_tern_q_impl(&self.cfg, b, c, u0, u1);
        self.count(sat);
        debug_assert!(r.mag > 0 || !r.negative);
        r
    }
    #[inline]
    fn is_negative(&self, a: SignMagLlr) -> bool {
        a.negative
    }
}

/// Reusable fixed-point SC decoder. Same traversal as [`crate::sc`], with
/// every arithmetic step in the sign-magnitude domain.
pub struct QuantScDecoder {
    engine: ScEngine<SignMagLlr>,
    frozen: Vec<bool>,
    ops: QuantOps,
}

impl QuantScDecoder {
    pub fn new(spec: &PolarCodeSpec, cfg: QuantConfig) -> Self {
        Self {
            engine: ScEngine::new(&spec.stage_layout(), SignMagLlr::ZERO),
            frozen: spec.frozen_mask(),
            ops: QuantOps { cfg, saturations: Cell::new(0) },
        }
    }

    pub fn decode_into(
        &mut self,
        llrs: &[SignMagLlr],
        u_hat: &mut [u8],
        x_hat: &mut [u8],
    ) -> Result<()> {
        let n = self.engine.n();
        if llrs.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: llrs.len() });
        }
        self.ops.saturations.set(0);
        let frozen = &self.frozen;
        let ops = &self.ops;
        self.engine.run(ops, llrs, x_hat, |i, alpha| {
            let bit = u8::from(!frozen[i] && ops.is_negative(alpha));
            u_hat[i] = bit;
            bit
        });
        Ok(())
    }

    pub fn decode(&mut self, llrs: &[SignMagLlr]) -> Result<DecodeResult> {
        let n = self.engine.n();
        let mut u_hat = vec![0u8; n];
        let mut x_hat = vec![0u8; n];
        self.decode_into(llrs, &mut u_hat, &mut x_hat)?;
        Ok(DecodeResult {
            u_hat: BitVector::new(u_hat).expect("decisions are bits"),
            x_hat: BitVector::new(x_hat).expect("decisions are bits"),
        })
    }

    /// Saturating additions observed during the most recent decode.
    pub fn saturation_events(&self) -> u64 {
        self.ops.saturations.get()
    }
}

/// One-shot fixed-point SC decode.
pub fn decode_q(
    spec: &PolarCodeSpec,
    llrs: &[SignMagLlr],
    cfg: QuantConfig,
) -> Result<DecodeResult> {
    QuantScDecoder::new(spec, cfg).decode(llrs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::KernelKind;
    use crate::sc::{self, DecodeMode};
    use proptest::prelude::*;

    fn cfg(q: u32, qf: u32) -> QuantConfig {
        QuantConfig::new(q, qf).unwrap()
    }

    fn sm(cfg: &QuantConfig, negative: bool, mag: u32) -> SignMagLlr {
        SignMagLlr::new(cfg, negative, mag)
    }

    /// All canonical values of a format, zero first.
    fn all_values(cfg: &QuantConfig) -> Vec<SignMagLlr> {
        let mut v = vec![SignMagLlr::ZERO];
        for mag in 1..=cfg.max_mag() {
            v.push(sm(cfg, false, mag));
            v.push(sm(cfg, true, mag));
        }
        v
    }

    #[test]
    fn quantize_examples() {
        let c = cfg(5, 2);
        assert_eq!(quantize(1.3, &c), sm(&c, false, 5));
        assert_eq!(quantize(10.0, &c), sm(&c, false, 15));
        assert_eq!(quantize(-0.124, &c), SignMagLlr::ZERO);
        assert_eq!(quantize(-0.125, &c), sm(&c, true, 1)); // tie rounds away from zero
    }

    #[test]
    fn config_validation() {
        assert!(QuantConfig::new(1, 0).is_err());
        assert!(QuantConfig::new(5, 5).is_err());
        assert_eq!(cfg(5, 2).max_mag(), 15);
    }

    #[test]
    fn recommended_formats_match_the_reference_sizings() {
        assert_eq!(QuantConfig::recommended_for(256), cfg(5, 2));
        assert_eq!(QuantConfig::recommended_for(1024), cfg(6, 3));
        assert_eq!(QuantConfig::recommended_for(4096), cfg(7, 3));
    }

    #[test]
    fn f_bin_q_examples() {
        let c = cfg(5, 2);
        assert_eq!(pe_f_bin_q(sm(&c, false, 10), sm(&c, true, 4)), sm(&c, true, 4));
        assert_eq!(pe_f_bin_q(SignMagLlr::ZERO, sm(&c, true, 7)), SignMagLlr::ZERO);
    }

    #[test]
    fn g_bin_q_examples() {
        let c = cfg(5, 2);
        // 14 + 4 saturates at 15
        assert_eq!(pe_g_bin_q(sm(&c, false, 14), sm(&c, false, 4), 0, &c), sm(&c, false, 15));
        // opposite signs subtract, sign of the larger term
        assert_eq!(pe_g_bin_q(sm(&c, false, 10), sm(&c, true, 4), 0, &c), sm(&c, false, 6));
    }

    #[test]
    fn f_tern_q_examples() {
        let c = cfg(5, 2);
        assert_eq!(
            pe_f_tern_q(sm(&c, false, 8), sm(&c, true, 2), sm(&c, false, 4)),
            sm(&c, true, 2)
        );
        assert_eq!(
            pe_f_tern_q(sm(&c, false, 8), SignMagLlr::ZERO, sm(&c, true, 4)),
            SignMagLlr::ZERO
        );
    }

    #[test]
    fn g1_tern_q_examples() {
        let c = cfg(5, 2);
        assert_eq!(
            pe_g1_tern_q(sm(&c, false, 4), sm(&c, false, 8), sm(&c, true, 2), 0, &c),
            sm(&c, false, 2)
        );
        assert_eq!(
            pe_g1_tern_q(sm(&c, false, 4), sm(&c, false, 8), sm(&c, false, 2), 1, &c),
            sm(&c, true, 2)
        );
        // zero first argument reduces to the binary f of (b, c)
        let (b, c3) = (sm(&c, true, 9), sm(&c, false, 3));
        assert_eq!(pe_g1_tern_q(SignMagLlr::ZERO, b, c3, 0, &c), pe_f_bin_q(b, c3));
    }

    #[test]
    fn g2_tern_q_examples() {
        let c = cfg(5, 2);
        assert_eq!(pe_g2_tern_q(sm(&c, false, 8), sm(&c, true, 2), 0, 1, &c), sm(&c, false, 10));
        assert_eq!(pe_g2_tern_q(sm(&c, false, 8), sm(&c, false, 2), 0, 0, &c), sm(&c, false, 10));
        assert_eq!(pe_g2_tern_q(sm(&c, false, 15), sm(&c, false, 15), 0, 0, &c), sm(&c, false, 15));
    }

    /// Checks one pe result against quantize∘(float min-sum)∘dequantize:
    /// equal when representable, saturation bound with the float sign
    /// otherwise.
    fn assert_matches_float(c: &QuantConfig, got: SignMagLlr, float: f64, ctx: &str) {
        let limit = f64::from(c.max_mag()) * c.step();
        if float.abs() > limit + 1e-9 {
            assert_eq!(got.mag(), c.max_mag(), "{ctx}: saturation magnitude");
            assert_eq!(got.is_negative(), float < 0.0, "{ctx}: saturation sign");
        } else {
            assert_eq!(got, quantize(float, c), "{ctx}");
        }
    }

    /// Exhaustive equivalence with the float min-sum rules at Q=5.
    #[test]
    fn pe_ops_match_float_minsum_exhaustively() {
        let c = cfg(5, 2);
        let values = all_values(&c);
        for &a in &values {
            for &b in &values {
                let (fa, fb) = (a.value(&c), b.value(&c));
                assert_matches_float(
                    &c,
                    pe_f_bin_q(a, b),
                    sc::f_bin(fa, fb, DecodeMode::MinSum),
                    "f_bin",
                );
                for u0 in 0..2u8 {
                    assert_matches_float(
                        &c,
                        pe_g_bin_q(a, b, u0, &c),
                        sc::g_bin(fa, fb, u0),
                        "g_bin",
                    );
                    for u1 in 0..2u8 {
                        assert_matches_float(
                            &c,
                            pe_g2_tern_q(a, b, u0, u1, &c),
                            sc::g2_tern(fa, fb, u0, u1),
                            "g2_tern",
                        );
                    }
                }
                for &d in &values {
                    let fd = d.value(&c);
                    assert_matches_float(
                        &c,
                        pe_f_tern_q(a, b, d),
                        sc::f_tern(fa, fb, fd, DecodeMode::MinSum),
                        "f_tern",
                    );
                    for u0 in 0..2u8 {
                        assert_matches_float(
                            &c,
                            pe_g1_tern_q(a, b, d, u0, &c),
                            sc::g1_tern(fa, fb, fd, u0, DecodeMode::MinSum),
                            "g1_tern",
                        );
                    }
                }
            }
        }
    }

    fn spec(dims: &[usize], k: usize, frozen: &[usize]) -> PolarCodeSpec {
        let kernels: Vec<KernelKind> =
            dims.iter().map(|&d| KernelKind::from_dimension(d).unwrap()).collect();
        PolarCodeSpec::new(kernels, k, frozen.iter().copied()).unwrap()
    }

    #[test]
    fn n2_decode_mirrors_the_float_decoder() {
        let c = cfg(5, 2);
        let s = spec(&[2], 1, &[0]);
        let llrs = vec![quantize(1.0, &c), quantize(-2.0, &c)];
        let r = decode_q(&s, &llrs, c).unwrap();
        assert_eq!(r.u_hat.bits(), &[0, 1]);
    }

    #[test]
    fn quantized_length_mismatch_is_reported() {
        let c = cfg(5, 2);
        let s = spec(&[2], 1, &[0]);
        let llrs = vec![SignMagLlr::ZERO; 3];
        assert!(matches!(
            decode_q(&s, &llrs, c),
            Err(Error::LengthMismatch { expected: 2, actual: 3 })
        ));
    }

    #[test]
    fn noiseless_quantized_roundtrip() {
        let c = cfg(7, 3);
        let s = spec(&[3, 2, 2], 6, &[0, 1, 2, 3, 4, 6]);
        let msg = BitVector::new(vec![1, 0, 1, 1, 0, 1]).unwrap();
        let u = crate::encode::load_message(&s, &msg).unwrap();
        let x = crate::encode::encode(&s, &u).unwrap();
        let llrs: Vec<SignMagLlr> = x
            .bits()
            .iter()
            .map(|&b| sm(&c, b == 1, c.max_mag()))
            .collect();
        let r = decode_q(&s, &llrs, c).unwrap();
        assert_eq!(r.u_hat, u);
        assert_eq!(r.x_hat, x);
    }

    /// With saturation-free inputs the quantized decoder equals float
    /// min-sum on the dequantized LLRs.
    #[test]
    fn paired_execution_against_float_minsum() {
        let c = cfg(7, 3);
        let s = spec(&[2, 3, 2], 6, &[0, 1, 2, 4, 6, 8]);
        let mut dec = QuantScDecoder::new(&s, c);
        let mut state = 0xfeed_d06f_0123_4567u64;
        for _ in 0..500 {
            // magnitudes at most 1.0: twelve leaves cannot accumulate past
            // the 15.875 format limit, so no saturation can occur
            let qllrs: Vec<SignMagLlr> = (0..12)
                .map(|_| {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    let x = ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
                    quantize(x, &c)
                })
                .collect();
            let fllrs: LlrVector = qllrs.iter().map(|v| v.value(&c)).collect();
            let rq = dec.decode(&qllrs).unwrap();
            assert_eq!(dec.saturation_events(), 0);
            let rf = sc::decode(&s, &fllrs, DecodeMode::MinSum).unwrap();
            assert_eq!(rq.u_hat, rf.u_hat);
        }
    }

    proptest! {
        #[test]
        fn quantize_is_monotone(x1 in -6.0f64..6.0, x2 in -6.0f64..6.0) {
            let c = cfg(5, 2);
            let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
            prop_assert!(quantize(lo, &c).value(&c) <= quantize(hi, &c).value(&c));
        }

        #[test]
        fn quantize_never_exceeds_the_range(x in -1e9f64..1e9) {
            let c = cfg(6, 3);
            let v = quantize(x, &c);
            prop_assert!(v.mag() <= c.max_mag());
            prop_assert!(v.mag() > 0 || !v.is_negative());
        }
    }
}
