use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::operator::{DenseOperator, FockState, OneBodyOperator, SparseVec};
use super::{OracleConfig, OracleError};
use crate::algebra::{Generator, GeneratorKind, ModeId};

/// Extended `𝒂_λ`, `𝒂†_λ`, `𝟙_λ` for every mode of a configuration.
#[derive(Clone, Debug)]
pub struct Generators {
    cfg: OracleConfig,
    annihilators: Vec<OneBodyOperator>,
    creators: Vec<OneBodyOperator>,
    units: Vec<OneBodyOperator>,
}

/// Truncated one-oscillator lowering matrix `a` of size `D`.
pub fn lowering_matrix(d: usize) -> DMatrix<C64> {
    DMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `|λ_m⟩⟨λ_m| ⊗ X` in the `M·D` one-oscillator space.
fn mode_block(cfg: &OracleConfig, mode: usize, x: &DMatrix<C64>) -> DMatrix<C64> {
    let l = cfg.local_dim();
    let d = cfg.fock_dim;
    let mut m = DMatrix::zeros(l, l);
    m.view_mut((mode * d, mode * d), (d, d)).copy_from(x);
    m
}

pub fn build_generators(cfg: &OracleConfig) -> Result<Generators, OracleError> {
    cfg.validate()?;
    let n_max = cfg.max_oscillators;
    let c: Vec<f64> = (1..=n_max).map(|n| cfg.weights.c(n)).collect();
    let c2: Vec<f64> = c.iter().map(|x| x * x).collect();
    let a = lowering_matrix(cfg.fock_dim);
    let id = DMatrix::identity(cfg.fock_dim, cfg.fock_dim);
    let mut annihilators = Vec::new();
    let mut creators = Vec::new();
    let mut units = Vec::new();
    for m in 0..cfg.modes.len() {
        let op = OneBodyOperator::new(mode_block(cfg, m, &a), c.clone());
        creators.push(op.adjoint());
        annihilators.push(op);
        units.push(OneBodyOperator::new(mode_block(cfg, m, &id), c2.clone()));
    }
    Ok(Generators {
        cfg: cfg.clone(),
        annihilators,
        creators,
        units,
    })
}

impl Generators {
    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    fn index(&self, id: &ModeId) -> Result<usize, OracleError> {
        self.cfg
            .mode_index(id)
            .ok_or_else(|| OracleError::UnknownMode(id.to_string()))
    }

    pub fn annihilator(&self, id: &ModeId) -> Result<&OneBodyOperator, OracleError> {
        Ok(&self.annihilators[self.index(id)?])
    }

    pub fn creator(&self, id: &ModeId) -> Result<&OneBodyOperator, OracleError> {
        Ok(&self.creators[self.index(id)?])
    }

    pub fn unit(&self, id: &ModeId) -> Result<&OneBodyOperator, OracleError> {
        Ok(&self.units[self.index(id)?])
    }

    pub fn get(&self, g: &Generator) -> Result<&OneBodyOperator, OracleError> {
        match g.kind {
            GeneratorKind::Annihilate => self.annihilator(&g.mode),
            GeneratorKind::Create => self.creator(&g.mode),
            GeneratorKind::Unit => self.unit(&g.mode),
        }
    }

    /// `𝓗 = ⊕_n Σ_i 1⊗…⊗H⊗…⊗1` with `H = ½ Σ_λ ω_λ |λ⟩⟨λ| ⊗ (a a† + a† a)`.
    pub fn h_script(&self) -> OneBodyOperator {
        let a = lowering_matrix(self.cfg.fock_dim);
        let ad = a.adjoint();
        let anti = (&a * &ad + &ad * &a) * C64::new(0.5, 0.0);
        let mut local = DMatrix::zeros(self.cfg.local_dim(), self.cfg.local_dim());
        for (m, mode) in self.cfg.modes.iter().enumerate() {
            local += mode_block(&self.cfg, m, &anti) * C64::new(mode.omega, 0.0);
        }
        OneBodyOperator::new(local, vec![1.0; self.cfg.max_oscillators])
    }

    /// `𝐇 ψ = ½ Σ_λ ω_λ (𝒂†_λ 𝒂_λ + 𝒂_λ 𝒂†_λ) ψ`, applied without forming a matrix.
    pub fn apply_h_bold(&self, state: &FockState) -> FockState {
        let mut out = FockState::zeros(&self.cfg);
        for (m, mode) in self.cfg.modes.iter().enumerate() {
            let a = &self.annihilators[m];
            let ad = &self.creators[m];
            let w = C64::new(0.5 * mode.omega, 0.0);
            out.axpy(w, &ad.apply(&a.apply(state)));
            out.axpy(w, &a.apply(&ad.apply(state)));
        }
        out
    }

    fn h_bold_sparse(&self, n: usize, input: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (m, mode) in self.cfg.modes.iter().enumerate() {
            let a = &self.annihilators[m];
            let ad = &self.creators[m];
            let w = 0.5 * mode.omega;
            let terms = [
                ad.apply_sparse(n, &a.apply_sparse(n, input)),
                a.apply_sparse(n, &ad.apply_sparse(n, input)),
            ];
            for t in terms {
                for (j, z) in t {
                    *out.entry(j).or_default() += z * w;
                }
            }
        }
        out
    }

    /// Dense `𝐇`, built column by column from the extended generators.
    pub fn h_bold(&self) -> Result<DenseOperator, OracleError> {
        let mut blocks = Vec::new();
        for n in 1..=self.cfg.max_oscillators {
            let dim = self.cfg.sector_dim(n);
            if dim > self.cfg.dense_cap {
                return Err(OracleError::DimensionCap {
                    dim,
                    cap: self.cfg.dense_cap,
                });
            }
            let mut m = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                let e = SparseVec::from([(col, C64::new(1.0, 0.0))]);
                for (row, z) in self.h_bold_sparse(n, &e) {
                    m[(row, col)] = z;
                }
            }
            blocks.push(m);
        }
        Ok(DenseOperator::new(blocks))
    }
}

/// Dense `(𝓗, 𝐇)`.
pub fn hamiltonians(cfg: &OracleConfig) -> Result<(DenseOperator, DenseOperator), OracleError> {
    let gens = build_generators(cfg)?;
    Ok((gens.h_script().to_dense(cfg)?, gens.h_bold()?))
}
