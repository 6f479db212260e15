//! Multi-kernel polar codes over binary (2×2) and ternary (3×3) kernels.
//!
//! The crate covers the full functional pipeline for codes whose generator
//! matrix is a Kronecker product of `T2` and `T3` kernels, giving code
//! lengths of the form `2^a · 3^b`:
//!
//! - [`code`]: kernels, code specifications, and the per-stage layout of the
//!   successive-cancellation decoding tree.
//! - [`encode`]: stage-wise Kronecker encoding plus a closed-form generator
//!   matrix used as a brute-force oracle.
//! - [`sc`]: floating-point successive-cancellation decoding in exact (tanh)
//!   and min-sum arithmetic.
//! - [`quant`]: bit-exact sign-magnitude fixed-point decoding with saturating
//!   processing-element arithmetic.
//! - [`construct`]: genie-aided Monte Carlo reliability estimation and
//!   frozen-set selection.
//! - [`channel`]: BPSK over AWGN, LLR computation, and a deterministic
//!   frame-error-rate engine.
//! - [`hw`]: analytic latency, throughput, and memory model of a
//!   semi-parallel hardware decoder.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the
//! multi-threaded simulation driver live in the companion `mkpolar` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod channel;
pub mod code;
pub mod construct;
pub mod encode;
mod error;
pub mod hw;
pub mod quant;
pub mod sc;
mod tree;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
