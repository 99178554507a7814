//! Quantum-resource measures of pure chain states: multipartite entanglement
//! (generalized geometric measure), nonstabilizerness (stabilizer Rényi
//! entropy) and fermionic non-Gaussianity (antiflatness of the Majorana
//! covariance matrix).

mod fermionic;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::hilbert::{apply_site_matrix, hilbert_dim, StateVector};
use crate::{Error, Result, C64};

pub use fermionic::{faf, faf_with, jordan_wigner_covariance, majoranas, CovarianceMatrix, JwConvention, PauliString};

/// Tolerance on `‖ψ‖ - 1` accepted by the measures.
pub const NORM_TOL: f64 = 1e-8;

/// Default cap on the number of Pauli strings `d^{2L}` enumerated by [`sre`].
pub const DEFAULT_SRE_BUDGET: u128 = 1 << 32;

/// A bipartition `A:B` of the chain, stored as the bit mask of `A`.
///
/// The canonical form has site 0 in `A`, so each unordered bipartition
/// appears once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    mask: u64,
    l: usize,
}

impl Bipartition {
    pub fn new(mask: u64, l: usize) -> Result<Self> {
        if !(2..=63).contains(&l) {
            return Err(Error::InvalidArgument(format!("bipartitions need 2 <= L <= 63, got {l}")));
        }
        let full = (1u64 << l) - 1;
        if mask & !full != 0 || mask == 0 || mask == full {
            return Err(Error::InvalidArgument(format!("mask {mask:#b} is not a nontrivial subset of {l} sites")));
        }
        let mask = if mask & 1 == 0 { full & !mask } else { mask };
        Ok(Self { mask, l })
    }

    /// All `2^{L-1} - 1` bipartitions in canonical form, contiguous or not.
    pub fn all(l: usize) -> Result<Vec<Self>> {
        if !(2..=63).contains(&l) {
            return Err(Error::InvalidArgument(format!("bipartitions need 2 <= L <= 63, got {l}")));
        }
        let full = (1u64 << l) - 1;
        Ok((0..1u64 << (l - 1)).map(|m| (m << 1) | 1).filter(|&m| m != full).map(|mask| Self { mask, l }).collect())
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn sites_a(&self) -> Vec<usize> {
        (0..self.l).filter(|&i| self.mask >> i & 1 == 1).collect()
    }

    pub fn sites_b(&self) -> Vec<usize> {
        (0..self.l).filter(|&i| self.mask >> i & 1 == 0).collect()
    }
}

/// Amplitudes reshaped into a `d^|S| × d^|S^c|` matrix, rows indexed by the
/// sites in `rows`.
fn reshape(state: &StateVector, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
    let d = state.d();
    let nr = d.pow(rows.len() as u32);
    let nc = d.pow(cols.len() as u32);
    let mut m = DMatrix::zeros(nr, nc);
    let strides: Vec<usize> = (0..state.sites()).map(|i| d.pow(i as u32)).collect();
    let index = |sites: &[usize], i: usize| {
        sites.iter().rev().fold(0, |acc, &s| acc * d + (i / strides[s]) % d)
    };
    for (i, a) in state.amplitudes().iter().enumerate() {
        m[(index(rows, i), index(cols, i))] = *a;
    }
    m
}

/// Largest squared Schmidt coefficient across `part`.
pub fn max_schmidt_sq(state: &StateVector, part: &Bipartition) -> Result<f64> {
    if part.l != state.sites() {
        return Err(Error::Dimension(format!("bipartition of {} sites, state has {}", part.l, state.sites())));
    }
    let (mut small, mut large) = (part.sites_a(), part.sites_b());
    if small.len() > large.len() {
        std::mem::swap(&mut small, &mut large);
    }
    let psi = reshape(state, &small, &large);
    let rho = &psi * psi.adjoint();
    Ok(rho.symmetric_eigen().eigenvalues.iter().cloned().fold(0.0, f64::max))
}

/// Generalized geometric measure `1 - max_{A:B} λ_max²`, maximized over
/// every nontrivial bipartition.
pub fn ggm(state: &StateVector) -> Result<f64> {
    state.check_normalized(NORM_TOL)?;
    let parts = Bipartition::all(state.sites())?;
    let norm2 = state.norm().powi(2);
    let best = parts
        .par_iter()
        .map(|p| max_schmidt_sq(state, p))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((1.0 - best / norm2).max(0.0))
}

fn check_sre_args(state: &StateVector, renyi_index: u32, budget: u128) -> Result<()> {
    state.check_normalized(NORM_TOL)?;
    if renyi_index < 2 {
        return Err(Error::InvalidArgument(format!("Rényi index must be at least 2, got {renyi_index}")));
    }
    let required = (state.dim() as u128).pow(2);
    if required > budget {
        return Err(Error::BudgetExceeded { required, limit: budget });
    }
    Ok(())
}

fn sre_from_sums(sum_sq: f64, sum_k: f64, dim: usize, renyi_index: u32) -> Result<f64> {
    let purity = sum_sq / dim as f64;
    if (purity - 1.0).abs() > 1e-8 {
        return Err(Error::SelfCheck(format!("Σ_P ⟨P⟩² / d^L = {purity}, expected 1")));
    }
    Ok((sum_k / dim as f64).ln() / (1.0 - renyi_index as f64))
}

/// `j ↦ index of (digits(i) + digits(j)) mod d`.
fn digit_add(i: usize, j: usize, d: usize, l: usize) -> usize {
    let (mut a, mut b, mut out, mut stride) = (i, j, 0, 1);
    for _ in 0..l {
        out += ((a % d + b % d) % d) * stride;
        a /= d;
        b /= d;
        stride *= d;
    }
    out
}

/// Stabilizer Rényi entropy `M_k = ln(Σ_P ⟨P⟩^{2k} / d^L) / (1 - k)` over all
/// `d^{2L}` Weyl–Heisenberg strings `⊗_j X^{x_j} Z^{z_j}`.
///
/// For a fixed shift pattern `x` the expectations of all `d^L` strings
/// `X^x Z^z` are the multidimensional DFT of `conj(ψ[m+x]) ψ[m]` over `m`.
/// The sum `Σ_P ⟨P⟩² = d^L` is checked on the same pass.
pub fn sre(state: &StateVector, renyi_index: u32) -> Result<f64> {
    sre_with_budget(state, renyi_index, DEFAULT_SRE_BUDGET)
}

pub fn sre_with_budget(state: &StateVector, renyi_index: u32, budget: u128) -> Result<f64> {
    check_sre_args(state, renyi_index, budget)?;
    let (d, l, dim) = (state.d(), state.sites(), state.dim());
    let psi = state.amplitudes();
    let dft = DMatrix::from_fn(d, d, |z, m| C64::from_polar(1.0, 2.0 * PI * ((z * m) % d) as f64 / d as f64));
    let strides: Vec<usize> = (0..l).map(|i| d.pow(i as u32)).collect();
    let partial: Vec<(f64, f64)> = (0..dim)
        .into_par_iter()
        .map(|x| {
            let mut f: Vec<C64> = (0..dim).map(|m| psi[digit_add(m, x, d, l)].conj() * psi[m]).collect();
            let mut g = vec![C64::new(0.0, 0.0); dim];
            for &s in &strides {
                apply_site_matrix(d, s, &dft, &f, &mut g);
                std::mem::swap(&mut f, &mut g);
            }
            f.iter().fold((0.0, 0.0), |(a, b), e| {
                let p = e.norm_sqr();
                (a + p, b + p.powi(renyi_index as i32))
            })
        })
        .collect();
    let (sum_sq, sum_k) = partial.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    sre_from_sums(sum_sq, sum_k, dim, renyi_index)
}

/// `⟨ψ| ⊗_j X^{x_j} Z^{z_j} |ψ⟩` with the exponents given per site.
pub fn pauli_expectation(state: &StateVector, x: &[usize], z: &[usize]) -> Result<C64> {
    let (d, l) = (state.d(), state.sites());
    if x.len() != l || z.len() != l {
        return Err(Error::Dimension(format!("exponent vectors of length {}/{} for {l} sites", x.len(), z.len())));
    }
    if let Some(j) = (0..l).find(|&j| x[j] >= d || z[j] >= d) {
        return Err(Error::InvalidExponent { d, v1: x[j], v2: z[j] });
    }
    let psi = state.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for (m, a) in psi.iter().enumerate() {
        // X^x Z^z |m⟩ = ω^{z·m} |m + x⟩
        let (mut rest, mut target, mut stride, mut phase) = (m, 0, 1, 0);
        for j in 0..l {
            let mj = rest % d;
            rest /= d;
            target += ((mj + x[j]) % d) * stride;
            stride *= d;
            phase += z[j] * mj;
        }
        let w = C64::from_polar(1.0, 2.0 * PI * (phase % d) as f64 / d as f64);
        acc += psi[target].conj() * w * a;
    }
    Ok(acc)
}

/// Reference implementation of [`sre`]: one matrix-free expectation value per
/// Pauli string.
pub fn sre_naive(state: &StateVector, renyi_index: u32) -> Result<f64> {
    check_sre_args(state, renyi_index, DEFAULT_SRE_BUDGET)?;
    let (d, l, dim) = (state.d(), state.sites(), state.dim());
    let mut sum_sq = 0.0;
    let mut sum_k = 0.0;
    let mut x = vec![0; l];
    let mut z = vec![0; l];
    for xi in 0..dim {
        let mut r = xi;
        x.iter_mut().for_each(|v| {
            *v = r % d;
            r /= d;
        });
        for zi in 0..dim {
            let mut r = zi;
            z.iter_mut().for_each(|v| {
                *v = r % d;
                r /= d;
            });
            let p = pauli_expectation(state, &x, &z)?.norm_sqr();
            sum_sq += p;
            sum_k += p.powi(renyi_index as i32);
        }
    }
    sre_from_sums(sum_sq, sum_k, dim, renyi_index)
}

/// Haar-random pure state: normalized vector of i.i.d. standard complex
/// Gaussians.
pub fn haar_state(d: usize, l: usize, seed: u64) -> Result<StateVector> {
    let dim = hilbert_dim(d, l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    StateVector::new(d, l, amps)?.normalized()
}
