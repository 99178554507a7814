//! Dense state vectors on qudit chains, tensor-product operator terms and
//! their matrix-free application.
//!
//! Amplitude index `i` of a chain of `L` qudits with local dimension `d`
//! encodes the configuration `(m_0, …, m_{L-1})` as `i = Σ_j m_j d^j`.

mod apply;
mod io;

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;

use crate::{Error, Result, C64};

pub(crate) use apply::apply_site_matrix;
pub use apply::{CompiledHamiltonian, LinearOperator};
pub use io::{read_state, write_state, STATE_MAGIC, STATE_VERSION};

/// Dense matrices are only materialized up to this Hilbert-space dimension
/// unless the caller asks for a different limit.
pub const DEFAULT_DENSE_THRESHOLD: usize = 4096;

/// `d^l`, or an error if it does not fit in memory-addressable sizes.
pub fn hilbert_dim(d: usize, l: usize) -> Result<usize> {
    u32::try_from(l)
        .ok()
        .and_then(|l| d.checked_pow(l))
        .filter(|&n| n <= 1 << 32)
        .ok_or_else(|| Error::Dimension(format!("{d}^{l} is too large")))
}

/// Base-`d` digit of `index` at `site`.
#[inline]
pub fn digit(index: usize, d: usize, stride: usize) -> usize {
    (index / stride) % d
}

/// Pure state of a qudit chain.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    d: usize,
    l: usize,
}

impl StateVector {
    pub fn new(d: usize, l: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Dimension(format!("local dimension {d} < 2")));
        }
        let dim = hilbert_dim(d, l)?;
        if amplitudes.len() != dim {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {l} sites of dimension {d} (expected {dim})",
                amplitudes.len()
            )));
        }
        Ok(Self { amplitudes, d, l })
    }

    pub fn zeros(d: usize, l: usize) -> Result<Self> {
        Self::new(d, l, vec![C64::new(0.0, 0.0); hilbert_dim(d, l)?])
    }

    /// Computational basis state with the given flat index.
    pub fn basis(d: usize, l: usize, index: usize) -> Result<Self> {
        let mut s = Self::zeros(d, l)?;
        if index >= s.dim() {
            return Err(Error::Dimension(format!("basis index {index} >= {}", s.dim())));
        }
        s.amplitudes[index] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Tensor product of single-site states, site 0 first.
    pub fn product(site_states: &[Vec<C64>]) -> Result<Self> {
        let d = site_states.first().map(Vec::len).unwrap_or(0);
        if site_states.iter().any(|s| s.len() != d) {
            return Err(Error::Dimension("site states of unequal dimension".into()));
        }
        let l = site_states.len();
        let dim = hilbert_dim(d, l)?;
        let amplitudes = (0..dim)
            .map(|i| {
                let mut rest = i;
                site_states.iter().fold(C64::new(1.0, 0.0), |acc, s| {
                    let m = rest % d;
                    rest /= d;
                    acc * s[m]
                })
            })
            .collect();
        Self::new(d, l, amplitudes)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of sites `L`.
    pub fn sites(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(self)
    }

    /// Error unless `| ‖ψ‖ - 1 | <= tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol {
            Err(Error::NotNormalized(n))
        } else {
            Ok(())
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same_space(other)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub(crate) fn check_same_space(&self, other: &StateVector) -> Result<()> {
        if self.d != other.d || self.l != other.l {
            return Err(Error::Dimension(format!(
                "states on ({}, {}) and ({}, {})",
                self.d, self.l, other.d, other.l
            )));
        }
        Ok(())
    }
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A d×d single-site operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteOperator {
    pub label: String,
    pub matrix: DMatrix<C64>,
}

impl SiteOperator {
    pub fn new(label: impl Into<String>, matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "site operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { label: label.into(), matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self { label: "I".into(), matrix: DMatrix::identity(d, d) }
    }

    pub fn diagonal(label: impl Into<String>, diag: &[C64]) -> Self {
        Self { label: label.into(), matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self { label: format!("{}†", self.label), matrix: self.matrix.adjoint() }
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &SiteOperator) -> Self {
        Self { label: format!("{}{}", self.label, other.label), matrix: &self.matrix * &other.matrix }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut m = DMatrix::identity(self.dim(), self.dim());
        for _ in 0..n {
            m = &m * &self.matrix;
        }
        Self { label: format!("{}^{n}", self.label), matrix: m }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(self.dim(), self.dim())).norm()
            < tol
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|c| r == c || self.matrix[(r, c)] == C64::new(0.0, 0.0)))
    }
}

/// ℤ_N clock pair: `Z = diag(ω^m)` and the cyclic shift `X|m⟩ = |m+1 mod N⟩`,
/// with ω = e^{2πi/N}. With this ordering `Z X = ω X Z`.
pub fn clock_operators(n: usize) -> Result<(SiteOperator, SiteOperator)> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let omega = |m: usize| C64::from_polar(1.0, 2.0 * PI * (m % n) as f64 / n as f64);
    let z = DMatrix::from_fn(n, n, |r, c| if r == c { omega(r) } else { C64::new(0.0, 0.0) });
    let x = DMatrix::from_fn(n, n, |r, c| {
        if r == (c + 1) % n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok((SiteOperator { label: "Z".into(), matrix: z }, SiteOperator { label: "X".into(), matrix: x }))
}

/// Generalized Pauli operator `X^{v1} Z^{v2}` on a qudit of dimension `d`.
pub fn pauli_qudit(d: usize, v1: usize, v2: usize) -> Result<SiteOperator> {
    if v1 >= d || v2 >= d {
        return Err(Error::InvalidExponent { d, v1, v2 });
    }
    let (z, x) = clock_operators(d)?;
    let mut p = x.pow(v1).compose(&z.pow(v2));
    p.label = format!("P({v1},{v2})");
    Ok(p)
}

/// `coefficient · ⊗_k A_k` with `A_k` acting on distinct sites.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTerm {
    pub coefficient: C64,
    factors: Vec<(usize, SiteOperator)>,
}

impl OperatorTerm {
    /// Factors may be given in any order; they are sorted by site. Repeated
    /// sites are rejected.
    pub fn new(coefficient: C64, mut factors: Vec<(usize, SiteOperator)>) -> Result<Self> {
        factors.sort_by_key(|(s, _)| *s);
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidTerm("repeated site within one term".into()));
        }
        if let Some((_, op)) = factors.iter().find(|(_, op)| op.dim() != factors[0].1.dim()) {
            return Err(Error::InvalidTerm(format!("factor `{}` has mismatched dimension", op.label)));
        }
        Ok(Self { coefficient, factors })
    }

    pub fn real(coefficient: f64, factors: Vec<(usize, SiteOperator)>) -> Result<Self> {
        Self::new(C64::new(coefficient, 0.0), factors)
    }

    pub fn single(coefficient: C64, site: usize, op: SiteOperator) -> Self {
        Self { coefficient, factors: vec![(site, op)] }
    }

    /// The identity scaled by `coefficient`.
    pub fn identity(coefficient: C64) -> Self {
        Self { coefficient, factors: Vec::new() }
    }

    pub fn factors(&self) -> &[(usize, SiteOperator)] {
        &self.factors
    }

    pub fn adjoint(&self) -> Self {
        Self {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().map(|(s, op)| (*s, op.dagger())).collect(),
        }
    }

    pub fn validate(&self, d: usize, l: usize) -> Result<()> {
        for (site, op) in &self.factors {
            if *site >= l {
                return Err(Error::InvalidSite { site: *site, len: l });
            }
            if op.dim() != d {
                return Err(Error::Dimension(format!(
                    "factor `{}` is {}x{} on a chain with d = {d}",
                    op.label,
                    op.dim(),
                    op.dim()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for OperatorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficient)?;
        for (s, op) in &self.factors {
            write!(f, " {}_{s}", op.label)?;
        }
        Ok(())
    }
}

/// Two-site operator diagonal in the computational basis:
/// `|a⟩_i |b⟩_j ↦ coefficient · weights[(a, b)] |a⟩_i |b⟩_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalCoupling {
    pub coefficient: C64,
    pub sites: (usize, usize),
    pub weights: DMatrix<C64>,
}

impl DiagonalCoupling {
    pub fn validate(&self, d: usize, l: usize) -> Result<()> {
        let (i, j) = self.sites;
        for s in [i, j] {
            if s >= l {
                return Err(Error::InvalidSite { site: s, len: l });
            }
        }
        if i == j {
            return Err(Error::InvalidTerm("diagonal coupling on a single site".into()));
        }
        if self.weights.nrows() != d || self.weights.ncols() != d {
            return Err(Error::Dimension("coupling weights must be d x d".into()));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self { coefficient: self.coefficient.conj(), sites: self.sites, weights: self.weights.map(|w| w.conj()) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" | "obc" => Ok(Boundary::Open),
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            other => Err(Error::Config(format!("unknown boundary `{other}`"))),
        }
    }
}

/// A chain Hamiltonian as a sum of product terms and diagonal couplings.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub d: usize,
    pub l: usize,
    pub boundary: Boundary,
    pub terms: Vec<OperatorTerm>,
    pub couplings: Vec<DiagonalCoupling>,
}

impl HamiltonianSpec {
    pub fn new(d: usize, l: usize, boundary: Boundary) -> Self {
        Self { d, l, boundary, terms: Vec::new(), couplings: Vec::new() }
    }

    pub fn dim(&self) -> Result<usize> {
        hilbert_dim(self.d, self.l)
    }

    pub fn push(&mut self, term: OperatorTerm) {
        self.terms.push(term);
    }

    pub fn push_coupling(&mut self, coupling: DiagonalCoupling) {
        self.couplings.push(coupling);
    }

    pub fn validate(&self) -> Result<()> {
        self.dim()?;
        for t in &self.terms {
            t.validate(self.d, self.l)?;
        }
        for c in &self.couplings {
            c.validate(self.d, self.l)?;
        }
        Ok(())
    }

    pub fn compile(&self) -> Result<CompiledHamiltonian> {
        CompiledHamiltonian::new(self)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        apply_hamiltonian(self, state)
    }

    /// Dense matrix of the Hamiltonian; refused above `threshold` dimensions.
    pub fn dense_matrix(&self, threshold: usize) -> Result<DMatrix<C64>> {
        let dim = self.dim()?;
        if dim > threshold {
            return Err(Error::Dimension(format!(
                "dense matrix of dimension {dim} exceeds threshold {threshold}"
            )));
        }
        Ok(self.compile()?.to_dense())
    }

    /// Upper bound on the operator norm: Σ |c| Π ‖A_k‖_F.
    pub fn norm_bound(&self) -> f64 {
        let terms: f64 = self
            .terms
            .iter()
            .map(|t| t.coefficient.norm() * t.factors.iter().map(|(_, op)| op.matrix.norm()).product::<f64>())
            .sum();
        let couplings: f64 = self
            .couplings
            .iter()
            .map(|c| c.coefficient.norm() * c.weights.iter().map(|w| w.norm()).fold(0.0, f64::max))
            .sum();
        terms + couplings
    }

    /// ⟨ψ|H|ψ⟩.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        let h_psi = self.apply(state)?;
        state.inner(&h_psi)
    }
}

fn check_term_space(term: &OperatorTerm, state: &StateVector) -> Result<()> {
    term.validate(state.d, state.l)
}

/// `coefficient · (⊗ factors)|ψ⟩`, identity on unlisted sites.
pub fn apply_term(term: &OperatorTerm, state: &StateVector) -> Result<StateVector> {
    check_term_space(term, state)?;
    let mut spec = HamiltonianSpec::new(state.d, state.l, Boundary::Open);
    spec.push(term.clone());
    apply_hamiltonian(&spec, state)
}

/// `H|ψ⟩` without materializing any matrix of size `d^L`.
pub fn apply_hamiltonian(spec: &HamiltonianSpec, state: &StateVector) -> Result<StateVector> {
    if spec.d != state.d || spec.l != state.l {
        return Err(Error::Dimension(format!(
            "Hamiltonian on ({}, {}) applied to state on ({}, {})",
            spec.d, spec.l, state.d, state.l
        )));
    }
    let op = spec.compile()?;
    let mut out = vec![C64::new(0.0, 0.0); state.dim()];
    op.apply(state.amplitudes(), &mut out);
    StateVector::new(state.d, state.l, out)
}

/// ⟨ψ|T|ψ⟩.
pub fn expectation(state: &StateVector, term: &OperatorTerm) -> Result<C64> {
    let t_psi = apply_term(term, state)?;
    state.inner(&t_psi)
}

#[cfg(test)]
mod tests;
