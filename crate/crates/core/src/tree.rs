//! Shared successive-cancellation tree traversal.
//!
//! The traversal is generic over the LLR arithmetic so the exact, min-sum,
//! and sign-magnitude fixed-point decoders monomorphize onto the same
//! depth-first schedule: at every node the children are produced left to
//! right (f, then the g updates conditioned on earlier hard decisions),
//! and completed children are recombined with the kernel's comb rule.

use alloc::vec;
use alloc::vec::Vec;

use crate::code::{KernelKind, StageLayout};
use crate::encode::kernel_combine;

/// Node update rules for one LLR domain.
pub(crate) trait KernelOps {
    type Llr: Copy;

    fn f_bin(&self, a: Self::Llr, b: Self::Llr) -> Self::Llr;
    fn g_bin(&self, a: Self::Llr, b: Self::Llr, u0: u8) -> Self::Llr;
    fn f_tern(&self, a: Self::Llr, b: Self::Llr, c: Self::Llr) -> Self::Llr;
    fn g1_tern(&self, a: Self::Llr, b: Self::Llr, c: Self::Llr, u0: u8) -> Self::Llr;
    fn g2_tern(&self, b: Self::Llr, c: Self::Llr, u0: u8, u1: u8) -> Self::Llr;
    /// Hard decision: 1 when the LLR favors bit 1.
    fn is_negative(&self, a: Self::Llr) -> bool;
}

/// Reusable traversal state for one stage layout.
///
/// Only one node per stage is ever in flight during the depth-first walk,
/// so the engine keeps a single child-LLR and child-bit buffer per stage.
/// The walk itself is a loop over those per-stage cursors; no call stack
/// grows with the code length.
pub(crate) struct ScEngine<L: Copy> {
    stages: Vec<StageState>,
    child_alpha: Vec<Vec<L>>,
    child_beta: Vec<Vec<u8>>,
    n: usize,
}

struct StageState {
    kernel: KernelKind,
    /// Child size N_s / n_s.
    stride: usize,
    /// Next child to produce at the node currently in flight.
    cursor: usize,
}

impl<L: Copy> ScEngine<L> {
    pub(crate) fn new(layout: &StageLayout, zero: L) -> Self {
        let stages = layout
            .stages()
            .iter()
            .map(|s| StageState { kernel: s.kernel, stride: s.child_size(), cursor: 0 })
            .collect();
        let child_alpha = layout
            .stages()
            .iter()
            .map(|s| vec![zero; s.child_size()])
            .collect();
        let child_beta = layout.stages().iter().map(|s| vec![0u8; s.size]).collect();
        Self { stages, child_alpha, child_beta, n: layout.n() }
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    /// Runs one SC pass. `leaf` receives each leaf index and its LLR in
    /// natural order and returns the hard decision fed back into the tree;
    /// `x_out` receives the root recombination (the re-encoded codeword).
    pub(crate) fn run<O>(
        &mut self,
        ops: &O,
        llrs: &[O::Llr],
        x_out: &mut [u8],
        mut leaf: impl FnMut(usize, O::Llr) -> u8,
    ) where
        O: KernelOps<Llr = L>,
    {
        debug_assert_eq!(llrs.len(), self.n);
        debug_assert_eq!(x_out.len(), self.n);
        let last = self.stages.len() - 1;
        for st in &mut self.stages {
            st.cursor = 0;
        }
        let mut leaf_idx = 0;
        let mut s = 0;
        loop {
            self.compute_child(ops, s, llrs);
            if s < last {
                s += 1;
                self.stages[s].cursor = 0;
                continue;
            }
            // children of the last stage are leaves
            let alpha = self.child_alpha[last][0];
            let bit = leaf(leaf_idx, alpha);
            leaf_idx += 1;
            let cursor = self.stages[last].cursor;
            self.child_beta[last][cursor] = bit;
            self.stages[last].cursor += 1;
            // recombine completed nodes on the way back up
            let mut t = last;
            loop {
                if self.stages[t].cursor < self.stages[t].kernel.dimension() {
                    s = t;
                    break;
                }
                let done = self.recombine(t, x_out);
                if done {
                    return;
                }
                self.stages[t].cursor = 0;
                t -= 1;
                self.stages[t].cursor += 1;
            }
        }
    }

    /// Computes the LLR vector of child `cursor` of the stage-`s` node from
    /// the node's input LLRs and the already-decided sibling bits.
    fn compute_child<O>(&mut self, ops: &O, s: usize, llrs: &[O::Llr])
    where
        O: KernelOps<Llr = L>,
    {
        let (head, tail) = self.child_alpha.split_at_mut(s);
        let out = &mut tail[0];
        let input: &[L] = if s == 0 { llrs } else { &head[s - 1] };
        let stride = self.stages[s].stride;
        let cursor = self.stages[s].cursor;
        let beta = &self.child_beta[s];
        match self.stages[s].kernel {
            KernelKind::Binary => match cursor {
                0 => {
                    for i in 0..stride {
                        out[i] = ops.f_bin(input[i], input[i + stride]);
                    }
                }
                _ => {
                    for i in 0..stride {
                        out[i] = ops.g_bin(input[i], input[i + stride], beta[i]);
                    }
                }
            },
            KernelKind::Ternary => match cursor {
                0 => {
                    for i in 0..stride {
                        out[i] =
                            ops.f_tern(input[i], input[i + stride], input[i + 2 * stride]);
                    }
                }
                1 => {
                    for i in 0..stride {
                        out[i] = ops.g1_tern(
                            input[i],
                            input[i + stride],
                            input[i + 2 * stride],
                            beta[i],
                        );
                    }
                }
                _ => {
                    for i in 0..stride {
                        out[i] = ops.g2_tern(
                            input[i + stride],
                            input[i + 2 * stride],
                            beta[i],
                            beta[i + stride],
                        );
                    }
                }
            },
        }
    }

    /// Combines the completed children of the stage-`t` node and stores the
    /// result in the parent's bit buffer (or `x_out` at the root). Children
    /// are buffered contiguously; the comb output is strided, matching the
    /// node's codeword index layout. Returns true once the root is written.
    fn recombine(&mut self, t: usize, x_out: &mut [u8]) -> bool {
        let stride = self.stages[t].stride;
        let kernel = self.stages[t].kernel;
        let dim = kernel.dimension();
        let size = stride * dim;
        let (head, tail) = self.child_beta.split_at_mut(t);
        let child = &mut tail[0];
        // contiguous child blocks -> strided node output, in place
        let mut scratch = [0u8; 3];
        for i in 0..stride {
            for d in 0..dim {
                scratch[d] = child[d * stride + i];
            }
            kernel_combine(kernel, &mut scratch, 0, 1);
            for d in 0..dim {
                child[d * stride + i] = scratch[d];
            }
        }
        if t == 0 {
            x_out.copy_from_slice(child);
            true
        } else {
            let parent_cursor = self.stages[t - 1].cursor;
            let dest = &mut head[t - 1][parent_cursor * size..(parent_cursor + 1) * size];
            dest.copy_from_slice(child);
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::KernelKind;

    struct XorOps;

    // Degenerate arithmetic: LLR = ±1 symbols with exact combining, so a
    // noiseless pass must reproduce the encoder bit for bit.
    impl KernelOps for XorOps {
        type Llr = i8;
        fn f_bin(&self, a: i8, b: i8) -> i8 {
            a * b
        }
        fn g_bin(&self, a: i8, b: i8, u0: u8) -> i8 {
            (if u0 == 1 { -a } else { a } + b).signum()
        }
        fn f_tern(&self, a: i8, b: i8, c: i8) -> i8 {
            a * b * c
        }
        fn g1_tern(&self, a: i8, b: i8, c: i8, u0: u8) -> i8 {
            (if u0 == 1 { -a } else { a } + b * c).signum()
        }
        fn g2_tern(&self, b: i8, c: i8, u0: u8, u1: u8) -> i8 {
            let sb = if u0 == 1 { -b } else { b };
            let sc = if u0 ^ u1 == 1 { -c } else { c };
            (sb + sc).signum()
        }
        fn is_negative(&self, a: i8) -> bool {
            a < 0
        }
    }

    #[test]
    fn noiseless_hard_symbols_invert_the_encoder() {
        use crate::encode::encode_in_place;
        let kernels = [KernelKind::Ternary, KernelKind::Binary, KernelKind::Binary];
        let layout = StageLayout::from_kernels(&kernels);
        let n = layout.n();
        let u: alloc::vec::Vec<u8> = (0..n).map(|i| ((i * 5 + 2) % 3 % 2) as u8).collect();
        let mut x = u.clone();
        encode_in_place(&layout, &mut x).unwrap();
        let llrs: alloc::vec::Vec<i8> = x.iter().map(|&b| if b == 0 { 1 } else { -1 }).collect();
        let mut engine = ScEngine::new(&layout, 0i8);
        let mut x_hat = alloc::vec![0u8; n];
        let mut u_hat = alloc::vec![0u8; n];
        let ops = XorOps;
        engine.run(&ops, &llrs, &mut x_hat, |i, a| {
            let bit = u8::from(ops.is_negative(a));
            u_hat[i] = bit;
            bit
        });
        assert_eq!(u_hat, u);
        assert_eq!(x_hat, x);
    }
}
