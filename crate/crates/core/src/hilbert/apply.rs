use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{HamiltonianSpec, SiteOperator};
use crate::{Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Vectors above this length are processed in parallel chunks.
const PARALLEL_DIM: usize = 1 << 14;

/// A Hermitian operator that can be applied to dense vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`; `y` is overwritten.
    fn apply(&self, x: &[C64], y: &mut [C64]);

    fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![ZERO; n];
        let mut col = vec![ZERO; n];
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            self.apply(&e, &mut col);
            e[j] = ZERO;
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }
}

/// Single-site factor with exactly one nonzero per column, stored for the
/// gather form `(A v)[n] = phase[n] · v[source[n]]`.
#[derive(Clone, Debug)]
struct MonomialFactor {
    stride: usize,
    source: Vec<usize>,
    phase: Vec<C64>,
}

impl MonomialFactor {
    fn try_new(op: &SiteOperator, stride: usize) -> Option<Self> {
        let d = op.dim();
        let mut source = vec![0; d];
        let mut phase = vec![ZERO; d];
        let mut hit = vec![false; d];
        for c in 0..d {
            let nz: Vec<usize> = (0..d).filter(|&r| op.matrix[(r, c)] != ZERO).collect();
            match nz.as_slice() {
                [r] if !hit[*r] => {
                    hit[*r] = true;
                    source[*r] = c;
                    phase[*r] = op.matrix[(*r, c)];
                }
                _ => return None,
            }
        }
        Some(Self { stride, source, phase })
    }
}

#[derive(Clone, Debug)]
struct MonomialTerm {
    coefficient: C64,
    factors: Vec<MonomialFactor>,
}

#[derive(Clone, Debug)]
struct DenseTerm {
    coefficient: C64,
    factors: Vec<(usize, DMatrix<C64>)>,
}

#[derive(Clone, Debug)]
struct CompiledCoupling {
    strides: (usize, usize),
    table: Vec<C64>,
}

/// Pre-processed [`HamiltonianSpec`] for repeated matrix-free application.
#[derive(Clone, Debug)]
pub struct CompiledHamiltonian {
    d: usize,
    dim: usize,
    monomial: Vec<MonomialTerm>,
    dense: Vec<DenseTerm>,
    couplings: Vec<CompiledCoupling>,
}

impl CompiledHamiltonian {
    pub fn new(spec: &HamiltonianSpec) -> Result<Self> {
        spec.validate()?;
        let d = spec.d;
        let dim = spec.dim()?;
        let stride = |site: usize| d.pow(site as u32);
        let mut monomial = Vec::new();
        let mut dense = Vec::new();
        for term in &spec.terms {
            if term.coefficient == ZERO {
                continue;
            }
            let mono: Option<Vec<MonomialFactor>> =
                term.factors().iter().map(|(s, op)| MonomialFactor::try_new(op, stride(*s))).collect();
            match mono {
                Some(factors) => monomial.push(MonomialTerm { coefficient: term.coefficient, factors }),
                None => dense.push(DenseTerm {
                    coefficient: term.coefficient,
                    factors: term.factors().iter().map(|(s, op)| (stride(*s), op.matrix.clone())).collect(),
                }),
            }
        }
        let couplings = spec
            .couplings
            .iter()
            .map(|c| CompiledCoupling {
                strides: (stride(c.sites.0), stride(c.sites.1)),
                table: (0..d * d).map(|k| c.coefficient * c.weights[(k / d, k % d)]).collect(),
            })
            .collect();
        Ok(Self { d, dim, monomial, dense, couplings })
    }

    fn gather_chunk(&self, x: &[C64], y: &mut [C64], offset: usize) {
        let d = self.d;
        for (k, out) in y.iter_mut().enumerate() {
            let j = offset + k;
            let mut acc = ZERO;
            for term in &self.monomial {
                let mut src = j;
                let mut amp = term.coefficient;
                for f in &term.factors {
                    let n = (j / f.stride) % d;
                    amp *= f.phase[n];
                    src = src + f.source[n] * f.stride - n * f.stride;
                }
                if amp != ZERO {
                    acc += amp * x[src];
                }
            }
            for c in &self.couplings {
                let a = (j / c.strides.0) % d;
                let b = (j / c.strides.1) % d;
                acc += c.table[a * d + b] * x[j];
            }
            *out = acc;
        }
    }

    fn apply_dense_terms(&self, x: &[C64], y: &mut [C64]) {
        if self.dense.is_empty() {
            return;
        }
        let mut cur = vec![ZERO; self.dim];
        let mut next = vec![ZERO; self.dim];
        for term in &self.dense {
            cur.copy_from_slice(x);
            for (stride, m) in &term.factors {
                apply_site_matrix(self.d, *stride, m, &cur, &mut next);
                std::mem::swap(&mut cur, &mut next);
            }
            for (yi, ci) in y.iter_mut().zip(&cur) {
                *yi += term.coefficient * ci;
            }
        }
    }
}

/// `out = (I ⊗ … ⊗ M_site ⊗ … ⊗ I) x` for the site with the given stride.
pub(crate) fn apply_site_matrix(d: usize, stride: usize, m: &DMatrix<C64>, x: &[C64], out: &mut [C64]) {
    let block = stride * d;
    for base in (0..x.len()).step_by(block) {
        for inner in 0..stride {
            let i0 = base + inner;
            for a in 0..d {
                let mut acc = ZERO;
                for b in 0..d {
                    let w = m[(a, b)];
                    if w != ZERO {
                        acc += w * x[i0 + b * stride];
                    }
                }
                out[i0 + a * stride] = acc;
            }
        }
    }
}

impl LinearOperator for CompiledHamiltonian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        if self.dim >= PARALLEL_DIM {
            let chunk = PARALLEL_DIM / 4;
            y.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(c, ys)| self.gather_chunk(x, ys, c * chunk));
        } else {
            self.gather_chunk(x, y, 0);
        }
        self.apply_dense_terms(x, y);
    }
}
