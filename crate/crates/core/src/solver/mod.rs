//! Ground states, low-lying spectra and energy gaps.
//!
//! Hilbert spaces up to [`SolverOptions::dense_threshold`] are diagonalized
//! densely; larger ones use Lanczos with full reorthogonalization on the
//! matrix-free Hamiltonian, deflating one converged eigenvector at a time so
//! that exactly degenerate levels are all resolved.

mod lanczos;
mod symmetry;

use crate::hilbert::{HamiltonianSpec, LinearOperator, StateVector};
use crate::{Error, Result, C64};

pub use symmetry::{GlobalSymmetry, SymmetryAction};
use symmetry::SectorOperator;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Largest dimension diagonalized densely.
    pub dense_threshold: usize,
    /// Matrix-vector products allowed per eigenpair.
    pub max_iterations: usize,
    /// Krylov dimension before an explicit restart.
    pub krylov_dim: usize,
    /// Relative residual tolerance of the Lanczos Ritz estimate.
    pub tol: f64,
    /// Relative tolerance under which two levels count as degenerate.
    pub degeneracy_tol: f64,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dense_threshold: 512,
            max_iterations: 2000,
            krylov_dim: 250,
            tol: 1e-10,
            degeneracy_tol: 1e-8,
            seed: 0x5eed,
        }
    }
}

impl SolverOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn lanczos_only(mut self) -> Self {
        self.dense_threshold = 0;
        self
    }

    pub fn dense_up_to(mut self, threshold: usize) -> Self {
        self.dense_threshold = threshold;
        self
    }
}

/// Lowest eigenpairs of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
    /// `‖H v - λ v‖` for each pair.
    pub residuals: Vec<f64>,
    /// Groups of indices whose eigenvalues agree within the degeneracy tolerance.
    pub degeneracy_clusters: Vec<Vec<usize>>,
    /// Matrix-vector products used (0 for dense solves).
    pub iterations: usize,
}

impl SpectrumResult {
    pub fn gap(&self) -> Option<f64> {
        (self.eigenvalues.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }
}

fn clusters(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(c) if {
                let first = values[c[0]];
                (v - first).abs() <= tol * v.abs().max(first.abs()).max(1.0)
            } =>
            {
                c.push(i)
            }
            _ => out.push(vec![i]),
        }
    }
    out
}

struct RawSpectrum {
    values: Vec<f64>,
    vectors: Vec<Vec<C64>>,
    residuals: Vec<f64>,
    iterations: usize,
}

fn residual(op: &dyn LinearOperator, v: &[C64], value: f64) -> f64 {
    let mut w = vec![C64::new(0.0, 0.0); v.len()];
    op.apply(v, &mut w);
    w.iter().zip(v).map(|(a, b)| (a - b * value).norm_sqr()).sum::<f64>().sqrt()
}

fn dense_lowest(op: &dyn LinearOperator, m: usize) -> RawSpectrum {
    let h = op.to_dense();
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let take: Vec<usize> = order.into_iter().take(m).collect();
    let vectors: Vec<Vec<C64>> = take.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    let values: Vec<f64> = take.iter().map(|&i| eig.eigenvalues[i]).collect();
    let residuals = values.iter().zip(&vectors).map(|(&e, v)| residual(op, v, e)).collect();
    RawSpectrum { values, vectors, residuals, iterations: 0 }
}

fn lanczos_lowest(op: &dyn LinearOperator, m: usize, opts: &SolverOptions, start: Option<&dyn Fn(u64) -> Vec<C64>>) -> Result<RawSpectrum> {
    let params = lanczos::LanczosParams { max_iterations: opts.max_iterations, krylov_dim: opts.krylov_dim, tol: opts.tol };
    let mut locked: Vec<Vec<C64>> = Vec::new();
    let mut pairs = Vec::new();
    let mut iterations = 0;
    for j in 0..m {
        let seed = opts.seed.wrapping_add(j as u64);
        let v0 = match start {
            Some(f) => f(seed),
            None => lanczos::random_vector(op.dim(), seed),
        };
        let pair = lanczos::lowest_eigenpair(op, &locked, v0, &params)?;
        iterations += pair.iterations;
        locked.push(pair.vector.clone());
        pairs.push(pair);
    }
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(RawSpectrum {
        values: pairs.iter().map(|p| p.value).collect(),
        residuals: pairs.iter().map(|p| p.residual).collect(),
        vectors: pairs.into_iter().map(|p| p.vector).collect(),
        iterations,
    })
}

fn lowest(op: &dyn LinearOperator, m: usize, opts: &SolverOptions) -> Result<RawSpectrum> {
    if m == 0 {
        return Err(Error::InvalidArgument("requested zero eigenpairs".into()));
    }
    let m = m.min(op.dim());
    if op.dim() <= opts.dense_threshold {
        Ok(dense_lowest(op, m))
    } else {
        lanczos_lowest(op, m, opts, None)
    }
}

fn to_spectrum(spec: &HamiltonianSpec, raw: RawSpectrum, opts: &SolverOptions) -> Result<SpectrumResult> {
    let eigenvectors =
        raw.vectors.into_iter().map(|v| StateVector::new(spec.d, spec.l, v)).collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult {
        degeneracy_clusters: clusters(&raw.values, opts.degeneracy_tol),
        eigenvalues: raw.values,
        eigenvectors,
        residuals: raw.residuals,
        iterations: raw.iterations,
    })
}

/// Lowest eigenpair of `spec`.
pub fn ground_state(spec: &HamiltonianSpec, opts: &SolverOptions) -> Result<(f64, StateVector)> {
    let s = low_spectrum(spec, 1, opts)?;
    Ok((s.eigenvalues[0], s.eigenvectors.into_iter().next().unwrap()))
}

/// The `m` lowest eigenpairs with degeneracy clusters annotated.
pub fn low_spectrum(spec: &HamiltonianSpec, m: usize, opts: &SolverOptions) -> Result<SpectrumResult> {
    let op = spec.compile()?;
    let raw = lowest(&op, m, opts)?;
    to_spectrum(spec, raw, opts)
}

/// `E₁ - E₀`.
pub fn energy_gap(spec: &HamiltonianSpec, opts: &SolverOptions) -> Result<f64> {
    low_spectrum(spec, 2, opts)?
        .gap()
        .ok_or_else(|| Error::InvalidArgument("Hilbert space has a single state".into()))
}

/// The `m` lowest levels in the trivial sector of `symmetry`.
pub fn sector_spectrum(
    spec: &HamiltonianSpec,
    symmetry: &GlobalSymmetry,
    m: usize,
    opts: &SolverOptions,
) -> Result<SpectrumResult> {
    if symmetry.d() != spec.d {
        return Err(Error::Dimension(format!("symmetry acts on d = {}, chain has d = {}", symmetry.d(), spec.d)));
    }
    let op = spec.compile()?;
    let action = symmetry.action(spec.l)?;
    let violation = action.commutator_norm(&op, opts.seed);
    if violation > 1e-8 {
        return Err(Error::SymmetryViolation(violation));
    }
    let bound = spec.norm_bound();
    let sector = SectorOperator { base: &op, action: &action, shift: 2.0 * bound + 1.0 };
    let raw = if op.dim() <= opts.dense_threshold {
        dense_lowest(&sector, m)
    } else {
        let start = |seed: u64| {
            let v = lanczos::random_vector(op.dim(), seed);
            let mut pv = vec![C64::new(0.0, 0.0); v.len()];
            action.project_trivial(&v, &mut pv);
            pv
        };
        lanczos_lowest(&sector, m, opts, Some(&start))?
    };
    // Levels at the shift belong to other sectors; the trivial sector was exhausted.
    let keep = raw.values.iter().take_while(|&&v| v < bound + 0.5).count();
    let raw = RawSpectrum {
        values: raw.values[..keep].to_vec(),
        vectors: raw.vectors[..keep].to_vec(),
        residuals: raw.residuals[..keep].to_vec(),
        iterations: raw.iterations,
    };
    to_spectrum(spec, raw, opts)
}

/// Gaps resolved by the global symmetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorGaps {
    /// Gap between the two lowest trivial-sector levels.
    pub gap_same_sector: f64,
    /// Unrestricted `E₁ - E₀`.
    pub gap_any: f64,
}

pub fn symmetry_resolved_gap(spec: &HamiltonianSpec, symmetry: &GlobalSymmetry, opts: &SolverOptions) -> Result<SectorGaps> {
    let sector = sector_spectrum(spec, symmetry, 2, opts)?;
    let gap_same_sector = sector
        .gap()
        .ok_or_else(|| Error::InvalidArgument("trivial sector holds fewer than two states".into()))?;
    Ok(SectorGaps { gap_same_sector, gap_any: energy_gap(spec, opts)? })
}

/// Ground state used for resource evaluation.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
    pub residual: f64,
    pub iterations: usize,
    /// Whether the state was taken from the trivial symmetry sector.
    pub symmetric: bool,
}

/// Lowest eigenpair, choosing the symmetric representative of a degenerate
/// ground manifold.
///
/// When the lowest trivial-sector level of `symmetry` coincides with the
/// unrestricted ground energy (within the degeneracy tolerance), that
/// trivial-sector eigenvector is returned. Exactly or numerically degenerate
/// ground manifolds otherwise yield an arbitrary, solver-dependent mixture.
pub fn representative_ground_state(
    spec: &HamiltonianSpec,
    symmetry: Option<&GlobalSymmetry>,
    opts: &SolverOptions,
) -> Result<GroundState> {
    let full = low_spectrum(spec, 1, opts)?;
    let e0 = full.eigenvalues[0];
    let mut iterations = full.iterations;
    if let Some(sym) = symmetry {
        let sector = sector_spectrum(spec, sym, 1, opts)?;
        iterations += sector.iterations;
        if let Some(&es) = sector.eigenvalues.first() {
            if (es - e0).abs() <= opts.degeneracy_tol * e0.abs().max(1.0) {
                return Ok(GroundState {
                    energy: es,
                    residual: sector.residuals[0],
                    state: sector.eigenvectors.into_iter().next().unwrap(),
                    iterations,
                    symmetric: true,
                });
            }
        }
    }
    Ok(GroundState {
        energy: e0,
        residual: full.residuals[0],
        state: full.eigenvectors.into_iter().next().unwrap(),
        iterations,
        symmetric: false,
    })
}

/// Lowest Ritz value after each of `steps` Lanczos steps from a seeded random
/// start vector.
pub fn krylov_ritz_history(spec: &HamiltonianSpec, steps: usize, seed: u64) -> Result<Vec<f64>> {
    let op = spec.compile()?;
    Ok(lanczos::ritz_history(&op, lanczos::random_vector(op.dim(), seed), steps))
}
