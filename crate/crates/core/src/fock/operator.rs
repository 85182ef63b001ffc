use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{OracleConfig, OracleError};

/// Sparse vector inside one oscillator-number sector.
pub type SparseVec = BTreeMap<usize, C64>;

/// A vector of the truncated direct sum, one block per sector `n = 1..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    sectors: Vec<DVector<C64>>,
}

impl FockState {
    pub fn zeros(cfg: &OracleConfig) -> Self {
        FockState {
            sectors: (1..=cfg.max_oscillators)
                .map(|n| DVector::zeros(cfg.sector_dim(n)))
                .collect(),
        }
    }

    pub fn from_sectors(sectors: Vec<DVector<C64>>) -> Self {
        FockState { sectors }
    }

    pub fn sectors(&self) -> &[DVector<C64>] {
        &self.sectors
    }

    /// Sector `n`, counting from 1.
    pub fn sector(&self, n: usize) -> &DVector<C64> {
        &self.sectors[n - 1]
    }

    pub fn sector_mut(&mut self, n: usize) -> &mut DVector<C64> {
        &mut self.sectors[n - 1]
    }

    pub fn max_oscillators(&self) -> usize {
        self.sectors.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockState) -> C64 {
        self.sectors
            .iter()
            .zip(&other.sectors)
            .map(|(a, b)| a.dotc(b))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sectors.iter().map(|s| s.norm_squared()).sum()
    }

    pub fn scale(&mut self, z: C64) {
        for s in &mut self.sectors {
            *s *= z;
        }
    }

    pub fn axpy(&mut self, z: C64, other: &FockState) {
        for (a, b) in self.sectors.iter_mut().zip(&other.sectors) {
            a.axpy(z, b, C64::new(1.0, 0.0));
        }
    }

    pub fn max_abs_diff(&self, other: &FockState) -> f64 {
        self.sectors
            .iter()
            .zip(&other.sectors)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }
}

/// Extension `⊕_n w_n Σ_i 1⊗…⊗X⊗…⊗1` of a one-oscillator operator `X`.
///
/// Only the `M·D × M·D` block is stored; sectors are acted on matrix-free.
#[derive(Clone, Debug)]
pub struct OneBodyOperator {
    local: DMatrix<C64>,
    columns: Vec<Vec<(usize, C64)>>,
    weights: Vec<f64>,
}

impl OneBodyOperator {
    pub fn new(local: DMatrix<C64>, weights: Vec<f64>) -> Self {
        assert_eq!(local.nrows(), local.ncols());
        let columns = (0..local.ncols())
            .map(|c| {
                (0..local.nrows())
                    .filter(|&r| local[(r, c)] != C64::new(0.0, 0.0))
                    .map(|r| (r, local[(r, c)]))
                    .collect()
            })
            .collect();
        OneBodyOperator {
            local,
            columns,
            weights,
        }
    }

    pub fn local(&self) -> &DMatrix<C64> {
        &self.local
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn local_dim(&self) -> usize {
        self.local.nrows()
    }

    pub fn adjoint(&self) -> Self {
        OneBodyOperator::new(self.local.adjoint(), self.weights.clone())
    }

    fn scatter(&self, n: usize, idx: usize, v: C64, mut emit: impl FnMut(usize, C64)) {
        let w = self.weights[n - 1];
        if w == 0.0 {
            return;
        }
        let l = self.local_dim();
        let mut stride = 1usize;
        for _ in 0..n {
            let digit = (idx / stride) % l;
            let base = idx - digit * stride;
            for &(r, x) in &self.columns[digit] {
                emit(base + r * stride, x * v * w);
            }
            stride *= l;
        }
    }

    pub fn apply_sector(&self, n: usize, input: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(input.len());
        for (idx, &v) in input.iter().enumerate() {
            if v != C64::new(0.0, 0.0) {
                self.scatter(n, idx, v, |j, z| out[j] += z);
            }
        }
        out
    }

    pub fn apply(&self, state: &FockState) -> FockState {
        FockState::from_sectors(
            state
                .sectors()
                .iter()
                .enumerate()
                .map(|(i, s)| self.apply_sector(i + 1, s))
                .collect(),
        )
    }

    pub fn apply_sparse(&self, n: usize, input: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&idx, &v) in input {
            self.scatter(n, idx, v, |j, z| *out.entry(j).or_default() += z);
        }
        out
    }

    /// Dense block of sector `n`.
    pub fn sector_matrix(&self, n: usize, dense_cap: usize) -> Result<DMatrix<C64>, OracleError> {
        let dim = self.local_dim().pow(n as u32);
        if dim > dense_cap {
            return Err(OracleError::DimensionCap {
                dim,
                cap: dense_cap,
            });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            self.scatter(n, col, C64::new(1.0, 0.0), |row, z| m[(row, col)] += z);
        }
        Ok(m)
    }

    pub fn to_dense(&self, cfg: &OracleConfig) -> Result<DenseOperator, OracleError> {
        let blocks = (1..=cfg.max_oscillators)
            .map(|n| self.sector_matrix(n, cfg.dense_cap))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DenseOperator::new(blocks))
    }
}

/// Block-diagonal operator stored as one dense matrix per sector.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    blocks: Vec<DMatrix<C64>>,
}

impl DenseOperator {
    pub fn new(blocks: Vec<DMatrix<C64>>) -> Self {
        DenseOperator { blocks }
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.blocks
    }

    /// Block of sector `n`, counting from 1.
    pub fn block(&self, n: usize) -> &DMatrix<C64> {
        &self.blocks[n - 1]
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator::new(self.blocks.iter().map(|b| b.adjoint()).collect())
    }

    pub fn apply(&self, state: &FockState) -> FockState {
        FockState::from_sectors(
            self.blocks
                .iter()
                .zip(state.sectors())
                .map(|(b, v)| b * v)
                .collect(),
        )
    }

    pub fn mul(&self, other: &DenseOperator) -> Self {
        DenseOperator::new(
            self.blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    pub fn map_blocks(&self, f: impl Fn(&DMatrix<C64>) -> DMatrix<C64>) -> Self {
        DenseOperator::new(self.blocks.iter().map(f).collect())
    }

    /// `max |A − A†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                (b - b.adjoint())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}
