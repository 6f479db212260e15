//! Stage-wise multi-kernel encoding and a generator-matrix oracle.
//!
//! [`encode`] applies the Kronecker transform in place, one kernel stage at
//! a time, in `O(N · Σ n_s)` bit operations. [`generator_matrix`] builds the
//! full `N×N` matrix from the closed-form entry product instead, so the two
//! routes are independent and can check each other.

use alloc::vec;
use alloc::vec::Vec;

use crate::code::{KernelKind, PolarCodeSpec, StageLayout, T2, T3};
use crate::{Error, Result};

/// Default row bound for [`generator_matrix`].
pub const DEFAULT_ORACLE_BOUND: usize = 4096;

/// A vector of bits, each 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    /// Wraps a bit vector, rejecting values other than 0 and 1.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::RangeError("bit value must be 0 or 1"));
        }
        Ok(Self(bits))
    }

    /// The all-zero vector of length `len`.
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }
}

impl core::ops::Index<usize> for BitVector {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl FromIterator<u8> for BitVector {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Self(iter.into_iter().map(|b| b & 1).collect())
    }
}

/// Dense binary matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinMatrix {
    n: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BinMatrix {
    fn zero(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        Self { n, words_per_row, words: vec![0; n * words_per_row] }
    }

    /// Matrix dimension (square).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        let w = self.words[row * self.words_per_row + col / 64];
        ((w >> (col % 64)) & 1) as u8
    }

    fn set(&mut self, row: usize, col: usize) {
        self.words[row * self.words_per_row + col / 64] |= 1u64 << (col % 64);
    }

    /// Row as a plain bit vector.
    pub fn row(&self, row: usize) -> Vec<u8> {
        (0..self.n).map(|j| self.get(row, j)).collect()
    }

    /// Row-vector product `u · M` over GF(2): XOR of the rows selected by u.
    pub fn mul_vec(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: u.len() });
        }
        let mut acc = vec![0u64; self.words_per_row];
        for (i, &bit) in u.iter().enumerate() {
            if bit & 1 == 1 {
                let row = &self.words[i * self.words_per_row..(i + 1) * self.words_per_row];
                for (a, &w) in acc.iter_mut().zip(row) {
                    *a ^= w;
                }
            }
        }
        Ok((0..self.n).map(|j| ((acc[j / 64] >> (j % 64)) & 1) as u8).collect())
    }
}

/// Generator matrix `T_{k1} ⊗ T_{k2} ⊗ … ⊗ T_{km}` over GF(2), built with
/// the default bound of [`DEFAULT_ORACLE_BOUND`] rows.
pub fn generator_matrix(spec: &PolarCodeSpec) -> Result<BinMatrix> {
    generator_matrix_with_bound(spec, DEFAULT_ORACLE_BOUND)
}

/// Generator matrix with an explicit row bound.
///
/// Each entry is the product of kernel entries over the mixed-radix digit
/// decomposition of the row and column indices, with the first kernel
/// owning the most significant digit. This never touches the stage-wise
/// encoder, so it can serve as its oracle.
pub fn generator_matrix_with_bound(spec: &PolarCodeSpec, bound: usize) -> Result<BinMatrix> {
    let n = spec.n();
    if n > bound {
        return Err(Error::OracleBoundExceeded { n, bound });
    }
    let kernels = spec.kernels();
    let mut m = BinMatrix::zero(n);
    for row in 0..n {
        for col in 0..n {
            let mut entry = 1u8;
            let (mut r, mut c, mut place) = (row, col, n);
            for &kernel in kernels {
                let dim = kernel.dimension();
                place /= dim;
                let (dr, dc) = (r / place, c / place);
                r %= place;
                c %= place;
                entry &= match kernel {
                    KernelKind::Binary => T2[dr][dc],
                    KernelKind::Ternary => T3[dr][dc],
                };
                if entry == 0 {
                    break;
                }
            }
            if entry == 1 {
                m.set(row, col);
            }
        }
    }
    Ok(m)
}

/// Applies one kernel to the `dim` values of `block` at `offset` with the
/// given stride; shared by the encoder and the decoder's comb step.
#[inline]
pub(crate) fn kernel_combine(kernel: KernelKind, block: &mut [u8], offset: usize, stride: usize) {
    match kernel {
        KernelKind::Binary => {
            let b1 = block[offset + stride];
            block[offset] ^= b1;
        }
        KernelKind::Ternary => {
            let b0 = block[offset];
            let b1 = block[offset + stride];
            let b2 = block[offset + 2 * stride];
            block[offset] = b0 ^ b1;
            block[offset + stride] = b0 ^ b2;
            block[offset + 2 * stride] = b0 ^ b1 ^ b2;
        }
    }
}

/// In-place stage-wise Kronecker transform over the layout's stages,
/// root-first: within each block of size N_s the kernel acts at stride
/// N_s / n_s.
pub fn encode_in_place(layout: &StageLayout, bits: &mut [u8]) -> Result<()> {
    let n = layout.n();
    if bits.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: bits.len() });
    }
    for stage in layout.stages() {
        let size = stage.size;
        let stride = stage.child_size();
        for block in bits.chunks_exact_mut(size) {
            for t in 0..stride {
                kernel_combine(stage.kernel, block, t, stride);
            }
        }
    }
    Ok(())
}

/// Codeword `x = u · G` over GF(2), computed stage-wise without
/// materializing G.
pub fn encode(spec: &PolarCodeSpec, u: &BitVector) -> Result<BitVector> {
    let mut bits = u.bits().to_vec();
    encode_in_place(&spec.stage_layout(), &mut bits)?;
    Ok(BitVector(bits))
}

/// Expands a K-bit message to the N-bit input vector `u`: message bits fill
/// the non-frozen indices in ascending order, frozen indices are 0.
pub fn load_message(spec: &PolarCodeSpec, msg: &BitVector) -> Result<BitVector> {
    if msg.len() != spec.k() {
        return Err(Error::LengthMismatch { expected: spec.k(), actual: msg.len() });
    }
    let mut u = vec![0u8; spec.n()];
    let mut next = 0;
    for (i, slot) in u.iter_mut().enumerate() {
        if !spec.is_frozen(i) {
            *slot = msg[next];
            next += 1;
        }
    }
    Ok(BitVector(u))
}

/// Inverse of [`load_message`]: the K message bits at non-frozen indices.
pub fn extract_message(spec: &PolarCodeSpec, u: &BitVector) -> Result<BitVector> {
    if u.len() != spec.n() {
        return Err(Error::LengthMismatch { expected: spec.n(), actual: u.len() });
    }
    Ok(BitVector(
        (0..spec.n()).filter(|&i| !spec.is_frozen(i)).map(|i| u[i]).collect(),
    ))
}
