//! Successive-cancellation decoding in floating point.
//!
//! Binary nodes use the f/g/comb updates; ternary nodes use the three-input
//! f, the two g updates conditioned on earlier decisions, and the ternary
//! comb. Both the exact tanh-domain rules and the min-sum approximation are
//! available, selected by [`DecodeMode`].

use alloc::vec;
use alloc::vec::Vec;

use crate::code::PolarCodeSpec;
use crate::encode::BitVector;
use crate::tree::{KernelOps, ScEngine};
use crate::{Error, Result};

/// LLR magnitudes above this are clamped when an [`LlrVector`] is built,
/// keeping the tanh-domain rules finite for saturated inputs.
pub const LLR_CLAMP: f64 = 1e6;

/// tanh products are kept this far away from ±1 before the inverse.
const TANH_EPS: f64 = 1e-12;

/// Channel or intermediate LLR vector; positive values favor bit 0.
///
/// Construction clamps magnitudes to [`LLR_CLAMP`] (mapping infinities to
/// the clamp bound and NaN to 0), so every stored value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Self {
        let mut values = values;
        for v in &mut values {
            *v = if v.is_nan() { 0.0 } else { v.clamp(-LLR_CLAMP, LLR_CLAMP) };
        }
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl FromIterator<f64> for LlrVector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Arithmetic used by the floating-point decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    /// Exact tanh-domain check-node rule.
    Exact,
    /// Sign-and-minimum approximation.
    MinSum,
}

#[inline]
fn sign_bit(x: f64) -> bool {
    x < 0.0
}

#[inline]
fn apply_sign(mag: f64, negative: bool) -> f64 {
    if negative {
        -mag
    } else {
        mag
    }
}

#[inline]
fn atanh_clamped(p: f64) -> f64 {
    libm::atanh(p.clamp(-1.0 + TANH_EPS, 1.0 - TANH_EPS))
}

/// Binary f: left-child LLR from the two parent LLRs.
pub fn f_bin(a: f64, b: f64, mode: DecodeMode) -> f64 {
    match mode {
        DecodeMode::Exact => 2.0 * atanh_clamped(libm::tanh(a / 2.0) * libm::tanh(b / 2.0)),
        DecodeMode::MinSum => {
            apply_sign(libm::fabs(a).min(libm::fabs(b)), sign_bit(a) ^ sign_bit(b))
        }
    }
}

/// Binary g: right-child LLR given the left decision.
pub fn g_bin(a: f64, b: f64, beta_l: u8) -> f64 {
    (1.0 - 2.0 * f64::from(beta_l)) * a + b
}

/// Binary comb: recombined hard decisions `(βl ⊕ βr, βr)`.
pub fn comb_bin(beta_l: u8, beta_r: u8) -> (u8, u8) {
    (beta_l ^ beta_r, beta_r)
}

/// Ternary f: left-child LLR from the three parent LLRs.
pub fn f_tern(a: f64, b: f64, c: f64, mode: DecodeMode) -> f64 {
    match mode {
        DecodeMode::Exact => {
            2.0 * atanh_clamped(
                libm::tanh(a / 2.0) * libm::tanh(b / 2.0) * libm::tanh(c / 2.0),
            )
        }
        DecodeMode::MinSum => apply_sign(
            libm::fabs(a).min(libm::fabs(b)).min(libm::fabs(c)),
            sign_bit(a) ^ sign_bit(b) ^ sign_bit(c),
        ),
    }
}

/// Ternary g1: center-child LLR given the left decision.
pub fn g1_tern(a: f64, b: f64, c: f64, beta_l: u8, mode: DecodeMode) -> f64 {
    (1.0 - 2.0 * f64::from(beta_l)) * a + f_bin(b, c, mode)
}

/// Ternary g2: right-child LLR given the left and center decisions.
pub fn g2_tern(b: f64, c: f64, beta_l: u8, beta_c: u8) -> f64 {
    (1.0 - 2.0 * f64::from(beta_l)) * b + (1.0 - 2.0 * f64::from(beta_l ^ beta_c)) * c
}

/// Ternary comb: `(βl ⊕ βc, βl ⊕ βr, βl ⊕ βc ⊕ βr)`.
pub fn comb_tern(beta_l: u8, beta_c: u8, beta_r: u8) -> (u8, u8, u8) {
    (beta_l ^ beta_c, beta_l ^ beta_r, beta_l ^ beta_c ^ beta_r)
}

/// Leaf decision: 0 when the LLR is non-negative or the index is frozen.
pub fn hard_decision(alpha: f64, frozen: bool) -> u8 {
    u8::from(!frozen && alpha < 0.0)
}

/// Decoder output: the estimated input vector and the matching re-encoded
/// codeword (`x_hat = encode(u_hat)` by construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub u_hat: BitVector,
    pub x_hat: BitVector,
}

pub(crate) struct FloatOps {
    mode: DecodeMode,
}

/// Min-sum arithmetic for internal users of the traversal engine.
pub(crate) fn min_sum_ops() -> FloatOps {
    FloatOps { mode: DecodeMode::MinSum }
}

impl KernelOps for FloatOps {
    type Llr = f64;
    #[inline]
    fn f_bin(&self, a: f64, b: f64) -> f64 {
        f_bin(a, b, self.mode)
    }
    #[inline]
    fn g_bin(&self, a: f64, b: f64, u0: u8) -> f64 {
        g_bin(a, b, u0)
    }
    #[inline]
    fn f_tern(&self, a: f64, b: f64, c: f64) -> f64 {
        f_tern(a, b, c, self.mode)
    }
    #[inline]
    fn g1_tern(&self, a: f64, b: f64, c: f64, u0: u8) -> f64 {
        g1_tern(a, b, c, u0, self.mode)
    }
    #[inline]
    fn g2_tern(&self, b: f64, c: f64, u0: u8, u1: u8) -> f64 {
        g2_tern(b, c, u0, u1)
    }
    #[inline]
    fn is_negative(&self, a: f64) -> bool {
        sign_bit(a)
    }
}

/// Reusable floating-point SC decoder for one code.
///
/// An instance owns its scratch buffers: decoding is not re-entrant on one
/// instance, but independent instances may run concurrently.
pub struct ScDecoder {
    engine: ScEngine<f64>,
    frozen: Vec<bool>,
    ops: FloatOps,
}

impl ScDecoder {
    pub fn new(spec: &PolarCodeSpec, mode: DecodeMode) -> Self {
        Self {
            engine: ScEngine::new(&spec.stage_layout(), 0.0),
            frozen: spec.frozen_mask(),
            ops: FloatOps { mode },
        }
    }

    /// Decodes into caller-provided buffers of length N.
    pub fn decode_into(
        &mut self,
        llrs: &LlrVector,
        u_hat: &mut [u8],
        x_hat: &mut [u8],
    ) -> Result<()> {
        let n = self.engine.n();
        if llrs.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: llrs.len() });
        }
        let frozen = &self.frozen;
        let ops = &self.ops;
        self.engine.run(ops, llrs.values(), x_hat, |i, alpha| {
            let bit = hard_decision(alpha, frozen[i]);
            u_hat[i] = bit;
            bit
        });
        Ok(())
    }

    pub fn decode(&mut self, llrs: &LlrVector) -> Result<DecodeResult> {
        let n = self.engine.n();
        let mut u_hat = vec![0u8; n];
        let mut x_hat = vec![0u8; n];
        self.decode_into(llrs, &mut u_hat, &mut x_hat)?;
        Ok(DecodeResult {
            u_hat: BitVector::new(u_hat).expect("decisions are bits"),
            x_hat: BitVector::new(x_hat).expect("decisions are bits"),
        })
    }
}

/// One-shot SC decode of `llrs` for `spec`.
pub fn decode(spec: &PolarCodeSpec, llrs: &LlrVector, mode: DecodeMode) -> Result<DecodeResult> {
    ScDecoder::new(spec, mode).decode(llrs)
}
