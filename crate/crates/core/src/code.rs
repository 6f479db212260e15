//! Kernels, code specifications, and the stage layout of the decoding tree.

use alloc::vec::Vec;

use crate::{Error, Result};

/// T2, the 2×2 binary polarization kernel.
pub const T2: [[u8; 2]; 2] = [[1, 0], [1, 1]];

/// T3, the 3×3 ternary polarization kernel.
pub const T3: [[u8; 3]; 3] = [[1, 1, 1], [1, 0, 1], [0, 1, 1]];

/// Polarization kernel kind. `Binary` is the 2×2 kernel T2, `Ternary` the
/// 3×3 kernel T3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KernelKind {
    Binary,
    Ternary,
}

impl KernelKind {
    /// Kernel dimension: 2 for T2, 3 for T3.
    pub const fn dimension(self) -> usize {
        match self {
            KernelKind::Binary => 2,
            KernelKind::Ternary => 3,
        }
    }

    /// Kernel from its dimension.
    pub fn from_dimension(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(KernelKind::Binary),
            3 => Ok(KernelKind::Ternary),
            _ => Err(Error::RangeError("kernel dimension must be 2 or 3")),
        }
    }
}

/// The kernel's polarization matrix as rows of 0/1 entries.
pub fn kernel_matrix(kind: KernelKind) -> &'static [&'static [u8]] {
    const T2_ROWS: [&[u8]; 2] = [&T2[0], &T2[1]];
    const T3_ROWS: [&[u8]; 3] = [&T3[0], &T3[1], &T3[2]];
    match kind {
        KernelKind::Binary => &T2_ROWS,
        KernelKind::Ternary => &T3_ROWS,
    }
}

/// A validated multi-kernel polar code: length `N`, dimension `K`, ordered
/// kernel sequence, and frozen set.
///
/// The first kernel in the list is the leftmost Kronecker factor of the
/// generator matrix and corresponds to the root stage of the decoding tree.
/// Frozen bits carry the value 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCodeSpec {
    kernels: Vec<KernelKind>,
    n: usize,
    k: usize,
    frozen: Vec<usize>,
}

impl PolarCodeSpec {
    /// Builds a spec from a kernel sequence, information length `k`, and
    /// frozen index set, validating all invariants.
    pub fn new(
        kernels: Vec<KernelKind>,
        k: usize,
        frozen: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::EmptyKernelList);
        }
        let n = kernels.iter().map(|kr| kr.dimension()).product::<usize>();
        if k > n {
            return Err(Error::RangeError("K exceeds N"));
        }
        let mut frozen: Vec<usize> = frozen.into_iter().collect();
        frozen.sort_unstable();
        if frozen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RangeError("duplicate frozen index"));
        }
        if frozen.last().is_some_and(|&last| last >= n) {
            return Err(Error::RangeError("frozen index outside [0, N)"));
        }
        if frozen.len() != n - k {
            return Err(Error::DimensionMismatch {
                expected: n - k,
                actual: frozen.len(),
            });
        }
        Ok(Self { kernels, n, k, frozen })
    }

    /// Code length N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Information length K.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Kernel sequence, leftmost Kronecker factor first.
    pub fn kernels(&self) -> &[KernelKind] {
        &self.kernels
    }

    /// Frozen indices, sorted ascending.
    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    /// Whether input index `i` is frozen.
    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen.binary_search(&i).is_ok()
    }

    /// Per-index frozen flags.
    pub fn frozen_mask(&self) -> Vec<bool> {
        let mut mask = alloc::vec![false; self.n];
        for &i in &self.frozen {
            mask[i] = true;
        }
        mask
    }

    /// Non-frozen (information) indices, sorted ascending.
    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.is_frozen(i)).collect()
    }

    /// Stage layout of the decoding tree for this code.
    pub fn stage_layout(&self) -> StageLayout {
        StageLayout::from_kernels(&self.kernels)
    }
}

/// One stage of the decoding tree: nodes of size `size` applying `kernel`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage {
    /// 1-based stage index; stage 1 is the root.
    pub index: usize,
    /// Node size N_s at this stage.
    pub size: usize,
    /// Kernel applied at this stage.
    pub kernel: KernelKind,
}

impl Stage {
    /// Kernel dimension n_s.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.dimension()
    }

    /// Child node size N_s / n_s.
    pub fn child_size(&self) -> usize {
        self.size / self.kernel_dim()
    }
}

/// Root-to-leaf stage sizes of the decoding tree: `N_1 = N` and
/// `N_{s+1} = N_s / n_s`, ending with a last ratio of 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageLayout {
    stages: Vec<Stage>,
}

impl StageLayout {
    /// Layout implied by a kernel sequence (leftmost factor = root stage).
    pub fn from_kernels(kernels: &[KernelKind]) -> Self {
        let n: usize = kernels.iter().map(|kr| kr.dimension()).product();
        let mut size = n;
        let stages = kernels
            .iter()
            .enumerate()
            .map(|(i, &kernel)| {
                let stage = Stage { index: i + 1, size, kernel };
                size /= kernel.dimension();
                stage
            })
            .collect();
        Self { stages }
    }

    /// Stages in root-to-leaf order.
    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Number of kernels s_m.
    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    /// Code length N (= N_1).
    pub fn n(&self) -> usize {
        self.stages.first().map_or(0, |s| s.size)
    }
}

/// Stage layout of a validated code specification.
pub fn stage_layout(spec: &PolarCodeSpec) -> StageLayout {
    spec.stage_layout()
}
