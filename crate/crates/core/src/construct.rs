//! Genie-aided code construction.
//!
//! Reliability is estimated by Monte Carlo: all-zero codewords are sent
//! over AWGN at the design SNR and decoded with min-sum SC while a genie
//! replaces every leaf decision with the true value (0) after recording
//! whether the unaided decision was wrong. The per-index error counts rank
//! the synthetic channels; freezing keeps the least reliable indices. This
//! applies uniformly to any mix of binary and ternary kernels.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::channel::{awgn_llr, run_fer, ChannelConfig, DecoderSelect};
use crate::code::{KernelKind, PolarCodeSpec, StageLayout};
use crate::sc::DecodeMode;
use crate::tree::ScEngine;
use crate::{Error, Result};

/// Rate used for the design-SNR σ when the final code rate is not known
/// yet (reliability ranking is rate-agnostic).
pub const DEFAULT_DESIGN_RATE: f64 = 0.5;

/// Cap on the number of kernel orders [`sweep_kernel_orders`] will evaluate.
pub const DEFAULT_ORDER_CAP: usize = 500;

/// Per-index genie error counts and the reliability ranking they induce.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityTable {
    error_counts: Vec<u64>,
    frames: u64,
    design_snr_db: f64,
    rank: Vec<usize>,
}

impl ReliabilityTable {
    /// First-pass decision errors per input index.
    pub fn error_counts(&self) -> &[u64] {
        &self.error_counts
    }

    pub fn frames(&self) -> u64 {
        self.frames
    }

    pub fn design_snr_db(&self) -> f64 {
        self.design_snr_db
    }

    /// Indices sorted by ascending reliability (most error-prone first),
    /// ties broken by ascending index.
    pub fn rank(&self) -> &[usize] {
        &self.rank
    }

    pub fn n(&self) -> usize {
        self.error_counts.len()
    }
}

/// Builds a table from accumulated counts; used by parallel drivers that
/// merge per-worker counters.
pub fn table_from_counts(
    error_counts: Vec<u64>,
    frames: u64,
    design_snr_db: f64,
) -> ReliabilityTable {
    let mut rank: Vec<usize> = (0..error_counts.len()).collect();
    rank.sort_by_key(|&i| (Reverse(error_counts[i]), i));
    ReliabilityTable { error_counts, frames, design_snr_db, rank }
}

/// Genie-aided all-zero-codeword simulator for one kernel sequence.
///
/// [`GenieSimulator::run_frame`] is keyed by `(seed, frame_index)` exactly
/// like the FER engine, so frames can be distributed across workers and
/// the merged counts stay schedule-independent.
pub struct GenieSimulator {
    engine: ScEngine<f64>,
    cfg: ChannelConfig,
    symbols: Vec<f64>,
    x_scratch: Vec<u8>,
}

impl GenieSimulator {
    pub fn new(kernels: &[KernelKind], design_snr_db: f64, rate: f64) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::EmptyKernelList);
        }
        let layout = StageLayout::from_kernels(kernels);
        let n = layout.n();
        Ok(Self {
            engine: ScEngine::new(&layout, 0.0),
            cfg: ChannelConfig::awgn(design_snr_db, rate, 0)?,
            symbols: vec![1.0; n],
            x_scratch: vec![0; n],
        })
    }

    pub fn n(&self) -> usize {
        self.engine.n()
    }

    /// Simulates one all-zero frame and adds each index's unaided decision
    /// error into `counts`.
    pub fn run_frame(&mut self, seed: u64, frame_index: u64, counts: &mut [u64]) {
        debug_assert_eq!(counts.len(), self.engine.n());
        let mut cfg = self.cfg;
        cfg.seed = seed;
        let llrs = awgn_llr(&self.symbols, &cfg, frame_index);
        let ops = crate::sc::min_sum_ops();
        self.engine.run(&ops, llrs.values(), &mut self.x_scratch, |i, alpha| {
            if alpha < 0.0 {
                counts[i] += 1;
            }
            0 // genie: the true bit is always 0
        });
    }
}

/// Genie reliability estimate at the default design rate of 1/2.
pub fn genie_reliability(
    kernels: &[KernelKind],
    design_snr_db: f64,
    frames: u64,
    seed: u64,
) -> Result<ReliabilityTable> {
    genie_reliability_at_rate(kernels, design_snr_db, DEFAULT_DESIGN_RATE, frames, seed)
}

/// Genie reliability estimate with σ computed from an explicit code rate.
pub fn genie_reliability_at_rate(
    kernels: &[KernelKind],
    design_snr_db: f64,
    rate: f64,
    frames: u64,
    seed: u64,
) -> Result<ReliabilityTable> {
    if frames < 1 {
        return Err(Error::InvalidParameter("frames must be at least 1"));
    }
    let mut sim = GenieSimulator::new(kernels, design_snr_db, rate)?;
    let mut counts = vec![0u64; sim.n()];
    for frame in 0..frames {
        sim.run_frame(seed, frame, &mut counts);
    }
    Ok(table_from_counts(counts, frames, design_snr_db))
}

/// The `N - K` least reliable indices, sorted ascending.
pub fn select_frozen(table: &ReliabilityTable, k: usize) -> Result<Vec<usize>> {
    let n = table.n();
    if k > n {
        return Err(Error::RangeError("K exceeds N"));
    }
    let mut frozen: Vec<usize> = table.rank()[..n - k].to_vec();
    frozen.sort_unstable();
    Ok(frozen)
}

/// Evaluates every distinct order of the given kernel multiset: each order
/// gets a genie frozen set at `snr_db` and a min-sum FER estimate there,
/// and orders are returned sorted by ascending FER (ties lexicographic).
pub fn sweep_kernel_orders(
    dims: &[KernelKind],
    k: usize,
    snr_db: f64,
    frames: u64,
    seed: u64,
) -> Result<Vec<(Vec<KernelKind>, f64)>> {
    sweep_kernel_orders_capped(dims, k, snr_db, frames, seed, DEFAULT_ORDER_CAP)
}

/// [`sweep_kernel_orders`] with an explicit permutation cap.
pub fn sweep_kernel_orders_capped(
    dims: &[KernelKind],
    k: usize,
    snr_db: f64,
    frames: u64,
    seed: u64,
    cap: usize,
) -> Result<Vec<(Vec<KernelKind>, f64)>> {
    if dims.is_empty() {
        return Err(Error::EmptyKernelList);
    }
    let orders = distinct_permutations(dims, cap)?;
    let n: usize = dims.iter().map(|d| d.dimension()).product();
    if k > n {
        return Err(Error::RangeError("K exceeds N"));
    }
    let rate = k as f64 / n as f64;
    let mut ranked = Vec::with_capacity(orders.len());
    for order in orders {
        let table = genie_reliability_at_rate(&order, snr_db, rate, frames, seed)?;
        let frozen = select_frozen(&table, k)?;
        let spec = PolarCodeSpec::new(order.clone(), k, frozen)?;
        let rows = run_fer(&spec, DecoderSelect::MinSum, &[snr_db], frames, 0, seed)?;
        ranked.push((order, rows[0].fer));
    }
    ranked.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    Ok(ranked)
}

/// All distinct permutations of a kernel multiset in lexicographic order.
fn distinct_permutations(dims: &[KernelKind], cap: usize) -> Result<Vec<Vec<KernelKind>>> {
    let mut current = dims.to_vec();
    current.sort_unstable();
    let mut orders = vec![current.clone()];
    while next_permutation(&mut current) {
        orders.push(current.clone());
        if orders.len() > cap {
            return Err(Error::CapExceeded { count: orders.len(), cap });
        }
    }
    Ok(orders)
}

/// Advances to the next lexicographic permutation; false once wrapped.
fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    let len = items.len();
    if len < 2 {
        return false;
    }
    let Some(pivot) = (0..len - 1).rev().find(|&i| items[i] < items[i + 1]) else {
        return false;
    };
    let swap = (pivot + 1..len).rev().find(|&j| items[j] > items[pivot]).unwrap();
    items.swap(pivot, swap);
    items[pivot + 1..].reverse();
    true
}

/// Genie construction happens in min-sum arithmetic to match the decoders
/// being characterized.
#[allow(dead_code)]
const GENIE_MODE: DecodeMode = DecodeMode::MinSum;

#[cfg(test)]
mod tests {
    use super::*;

    const B: KernelKind = KernelKind::Binary;
    const T: KernelKind = KernelKind::Ternary;

    #[test]
    fn t2_minus_channel_is_the_unreliable_one() {
        // Analytic oracle for the single T2 kernel over BPSK/AWGN at
        // Eb/N0 = 2 dB, rate 1/2 (σ² = 10^-0.2, min-sum is exact here):
        //   p := P(channel LLR < 0) = Q(1/σ) = Q(1.2589) = 0.10402
        //   index 0 (check combination): 2p(1-p)          = 0.18640
        //   index 1 (sum with genie bit): Q(sqrt(2)/σ)    = 0.03751
        let frames = 40_000u64;
        let table = genie_reliability(&[B], 2.0, frames, 11).unwrap();
        let e0 = table.error_counts()[0] as f64 / frames as f64;
        let e1 = table.error_counts()[1] as f64 / frames as f64;
        assert!((e0 - 0.18640).abs() < 0.006, "index 0 error rate {e0}");
        assert!((e1 - 0.03751).abs() < 0.004, "index 1 error rate {e1}");
        assert_eq!(table.rank(), &[0, 1]);
    }

    #[test]
    fn counts_are_bounded_by_frames() {
        let frames = 500;
        let table = genie_reliability(&[T, B], 1.0, frames, 7).unwrap();
        assert!(table.error_counts().iter().all(|&c| c <= frames));
        assert_eq!(table.frames(), frames);
    }

    #[test]
    fn same_seed_gives_identical_tables() {
        let a = genie_reliability(&[B, T], 2.0, 2000, 5).unwrap();
        let b = genie_reliability(&[B, T], 2.0, 2000, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_frames_is_rejected() {
        assert!(genie_reliability(&[B], 2.0, 0, 1).is_err());
    }

    #[test]
    fn select_frozen_edges() {
        let table = table_from_counts(vec![5, 1, 3, 0], 10, 2.0);
        assert_eq!(table.rank(), &[0, 2, 1, 3]);
        assert!(select_frozen(&table, 4).unwrap().is_empty());
        assert_eq!(select_frozen(&table, 0).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(select_frozen(&table, 2).unwrap(), vec![0, 2]);
        assert!(select_frozen(&table, 5).is_err());
    }

    #[test]
    fn rank_breaks_ties_by_ascending_index() {
        let table = table_from_counts(vec![2, 7, 2, 7], 10, 2.0);
        assert_eq!(table.rank(), &[1, 3, 0, 2]);
    }

    #[test]
    fn sweep_enumerates_distinct_orders() {
        let ranked = sweep_kernel_orders(&[B, B], 2, 2.0, 500, 3).unwrap();
        assert_eq!(ranked.len(), 1);
        let ranked = sweep_kernel_orders(&[B, T], 3, 2.0, 500, 3).unwrap();
        assert_eq!(ranked.len(), 2);
        let orders: Vec<_> = ranked.iter().map(|(o, _)| o.clone()).collect();
        assert!(orders.contains(&vec![B, T]));
        assert!(orders.contains(&vec![T, B]));
        let again = sweep_kernel_orders(&[B, T], 3, 2.0, 500, 3).unwrap();
        assert_eq!(ranked, again);
    }

    #[test]
    fn sweep_cap_is_enforced() {
        let dims = [B, T, B, T, B, T];
        assert!(matches!(
            sweep_kernel_orders_capped(&dims, 100, 2.0, 10, 1, 5),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn permutation_enumeration_handles_duplicates() {
        let mut v = [B, B, T];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 3);
    }
}
