//! The three chain Hamiltonians obtained from pure-gauge flux ladders and
//! their plaquette observables.
//!
//! - SU(2), hardcore-gluon truncation (qubits):
//!   `H = g² Σ_i [-3/2 Z_i Z_{i+1} + 3 Z_i] - 1/g² Σ_i (1-3Z_{i-1}) X_i (1-3Z_{i+1})`
//! - ℤ_N clock chain in superselection sector `k` (qudits, d = N):
//!   `H = -g²/2 Σ_i [Z†_{i-1} Z_i + (1+ω^k) Z_i + h.c.] - 1/(2g²) Σ_i (X_i + X†_i)`
//! - gauge-fixed D₃ chain (d = 6, group-element basis, open boundary):
//!   `H = -g² Σ_i Σ_J α_J [P^J_i + 2 Π_{i'<i} P^J_{i'}] - 1/(2g²) Σ_i (Tr[U†_i U_{i+1}] + h.c.)`
//!   with `α_J = dim(J)/6 · ε_J`.
//!
//! For SU(2) with an open boundary the missing `(1-3Z)` factor at a chain
//! edge is replaced by 1, its value on the J = 0 vacuum.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::group_algebra::{d3_group, d3_irreps, projector_matrix};
use crate::hilbert::{
    clock_operators, Boundary, DiagonalCoupling, HamiltonianSpec, OperatorTerm, SiteOperator, StateVector,
};
use crate::solver::GlobalSymmetry;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "SU2", alias = "su2")]
    Su2,
    #[serde(rename = "ZN", alias = "zn", alias = "Zn")]
    Zn,
    #[serde(rename = "D3", alias = "d3")]
    D3,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Su2 => "SU2",
            ModelKind::Zn => "ZN",
            ModelKind::D3 => "D3",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SU2" | "SU(2)" => Ok(ModelKind::Su2),
            "ZN" | "Z_N" => Ok(ModelKind::Zn),
            "D3" => Ok(ModelKind::D3),
            other => Err(Error::Config(format!("unknown model `{other}`"))),
        }
    }
}

/// How the D₃ plaquette coupling is assembled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaquetteForm {
    /// Diagonal two-site coupling `2 χ_τ(g_i⁻¹ g_{i+1})`.
    #[default]
    Character,
    /// Explicit contraction `Σ_{pq} (U_i)*_{pq} (U_{i+1})_{pq} + h.c.` of the
    /// fundamental-irrep matrices.
    Contraction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub model: ModelKind,
    pub g2: f64,
    pub l: usize,
    /// Group order (ℤ_N only).
    pub n: usize,
    /// Superselection sector (ℤ_N only).
    pub k: usize,
    /// Electric energies (trivial, parity, fundamental) for D₃.
    pub epsilon: [f64; 3],
    pub boundary: Boundary,
    pub plaquette_form: PlaquetteForm,
}

impl ModelConfig {
    pub fn su2(l: usize, g2: f64) -> Self {
        Self {
            model: ModelKind::Su2,
            g2,
            l,
            n: 2,
            k: 0,
            epsilon: [1.0, 0.0, 0.0],
            boundary: Boundary::Periodic,
            plaquette_form: PlaquetteForm::Character,
        }
    }

    pub fn zn(n: usize, k: usize, l: usize, g2: f64) -> Self {
        Self { model: ModelKind::Zn, n, k, ..Self::su2(l, g2) }
    }

    pub fn d3(l: usize, g2: f64) -> Self {
        Self { model: ModelKind::D3, n: 6, boundary: Boundary::Open, ..Self::su2(l, g2) }
    }

    /// The default boundary of a model: periodic for SU(2) and ℤ_N, open for D₃.
    pub fn default_boundary(model: ModelKind) -> Boundary {
        match model {
            ModelKind::D3 => Boundary::Open,
            _ => Boundary::Periodic,
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_epsilon(mut self, epsilon: [f64; 3]) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_g2(mut self, g2: f64) -> Self {
        self.g2 = g2;
        self
    }

    pub fn local_dim(&self) -> usize {
        match self.model {
            ModelKind::Su2 => 2,
            ModelKind::Zn => self.n,
            ModelKind::D3 => 6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g2 > 0.0 && self.g2.is_finite()) {
            return Err(Error::Config(format!("g2 must be positive and finite, got {}", self.g2)));
        }
        match self.model {
            ModelKind::Su2 => {
                if self.l < 2 {
                    return Err(Error::Config("SU2 chain needs L >= 2".into()));
                }
                if self.boundary == Boundary::Periodic && self.l < 3 {
                    return Err(Error::Config("periodic SU2 chain needs L >= 3".into()));
                }
            }
            ModelKind::Zn => {
                if self.n < 2 {
                    return Err(Error::Config(format!("N must be >= 2, got {}", self.n)));
                }
                if self.k >= self.n {
                    return Err(Error::Config(format!("k = {} must be < N = {}", self.k, self.n)));
                }
                if self.l < 2 {
                    return Err(Error::Config("ZN chain needs L >= 2".into()));
                }
            }
            ModelKind::D3 => {
                if self.l < 2 {
                    return Err(Error::Config("D3 chain needs L >= 2".into()));
                }
                if self.boundary != Boundary::Open {
                    return Err(Error::Config("D3 chain is defined with an open boundary only".into()));
                }
                if self.epsilon.iter().any(|e| !e.is_finite()) {
                    return Err(Error::Config("epsilon entries must be finite".into()));
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<HamiltonianSpec> {
        match self.model {
            ModelKind::Su2 => su2_chain(self),
            ModelKind::Zn => zn_chain(self),
            ModelKind::D3 => d3_chain(self),
        }
    }

    /// Global symmetry group commuting with the Hamiltonian, as a group of
    /// site-local permutations applied uniformly to every site.
    ///
    /// - ℤ_N: charge conjugation `m ↦ -k-m (mod N)`, plus the uniform shift
    ///   `m ↦ m+1` when the longitudinal field vanishes (`2k = N`).
    /// - D₃: left multiplication `g ↦ f g` for every `f ∈ D₃`.
    /// - SU(2): none used.
    pub fn global_symmetry(&self) -> Result<Option<GlobalSymmetry>> {
        self.validate()?;
        match self.model {
            ModelKind::Su2 => Ok(None),
            ModelKind::Zn => {
                let n = self.n;
                let conj: Vec<usize> = (0..n).map(|m| (2 * n - self.k - m) % n).collect();
                let mut gens = vec![conj];
                if 2 * self.k == n {
                    gens.push((0..n).map(|m| (m + 1) % n).collect());
                }
                GlobalSymmetry::from_generators(n, gens).map(Some)
            }
            ModelKind::D3 => GlobalSymmetry::from_left_regular(&d3_group()).map(Some),
        }
    }
}

fn pauli_z() -> SiteOperator {
    clock_operators(2).expect("N = 2").0
}

fn pauli_x() -> SiteOperator {
    clock_operators(2).expect("N = 2").1
}

/// Bonds `(i, i+1)` of the chain, wrapping for a periodic boundary.
fn bonds(l: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    match boundary {
        Boundary::Periodic => (0..l).map(|i| (i, (i + 1) % l)).collect(),
        Boundary::Open => (0..l - 1).map(|i| (i, i + 1)).collect(),
    }
}

/// Neighbours of site `i`, `None` where an open chain ends.
fn neighbours(i: usize, l: usize, boundary: Boundary) -> (Option<usize>, Option<usize>) {
    match boundary {
        Boundary::Periodic => (Some((i + l - 1) % l), Some((i + 1) % l)),
        Boundary::Open => (i.checked_sub(1), (i + 1 < l).then_some(i + 1)),
    }
}

/// Expansion of `(1-3Z_{left}) X_i (1-3Z_{right})` into product terms, each
/// scaled by `scale`; an absent neighbour contributes a factor 1.
fn dressed_flip_terms(i: usize, left: Option<usize>, right: Option<usize>, scale: f64) -> Result<Vec<OperatorTerm>> {
    let mut out = Vec::new();
    let lefts: Vec<(f64, Option<usize>)> = match left {
        Some(s) => vec![(1.0, None), (-3.0, Some(s))],
        None => vec![(1.0, None)],
    };
    let rights: Vec<(f64, Option<usize>)> = match right {
        Some(s) => vec![(1.0, None), (-3.0, Some(s))],
        None => vec![(1.0, None)],
    };
    for (cl, sl) in &lefts {
        for (cr, sr) in &rights {
            let mut factors = vec![(i, pauli_x())];
            factors.extend(sl.iter().map(|&s| (s, pauli_z())));
            factors.extend(sr.iter().map(|&s| (s, pauli_z())));
            out.push(OperatorTerm::real(scale * cl * cr, factors)?);
        }
    }
    Ok(out)
}

pub fn su2_chain(config: &ModelConfig) -> Result<HamiltonianSpec> {
    if config.model != ModelKind::Su2 {
        return Err(Error::Config(format!("su2_chain called with model {}", config.model)));
    }
    config.validate()?;
    let (l, g2) = (config.l, config.g2);
    let mut spec = HamiltonianSpec::new(2, l, config.boundary);
    for (i, j) in bonds(l, config.boundary) {
        spec.push(OperatorTerm::real(-1.5 * g2, vec![(i, pauli_z()), (j, pauli_z())])?);
    }
    for i in 0..l {
        spec.push(OperatorTerm::real(3.0 * g2, vec![(i, pauli_z())])?);
    }
    for i in 0..l {
        let (left, right) = neighbours(i, l, config.boundary);
        for t in dressed_flip_terms(i, left, right, -1.0 / g2)? {
            spec.push(t);
        }
    }
    Ok(spec)
}

/// `1 + ω^k`, with the exact zero at `2k = N`.
pub fn longitudinal_coefficient(n: usize, k: usize) -> C64 {
    if 2 * k == n {
        return C64::new(0.0, 0.0);
    }
    C64::new(1.0, 0.0) + C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

pub fn zn_chain(config: &ModelConfig) -> Result<HamiltonianSpec> {
    if config.model != ModelKind::Zn {
        return Err(Error::Config(format!("zn_chain called with model {}", config.model)));
    }
    config.validate()?;
    let (n, l, g2) = (config.n, config.l, config.g2);
    let (z, x) = clock_operators(n)?;
    let mut spec = HamiltonianSpec::new(n, l, config.boundary);
    for (i, j) in bonds(l, config.boundary) {
        let t = OperatorTerm::real(-g2 / 2.0, vec![(i, z.dagger()), (j, z.clone())])?;
        spec.push(t.adjoint());
        spec.push(t);
    }
    let field = longitudinal_coefficient(n, config.k);
    if field.norm() > 0.0 {
        for i in 0..l {
            let t = OperatorTerm::single(field * (-g2 / 2.0), i, z.clone());
            spec.push(t.adjoint());
            spec.push(t);
        }
    }
    for i in 0..l {
        let t = OperatorTerm::single(C64::new(-1.0 / (2.0 * g2), 0.0), i, x.clone());
        spec.push(t.adjoint());
        spec.push(t);
    }
    Ok(spec)
}

/// `2 χ_τ(a⁻¹ b)` for all pairs of D₃ elements.
fn d3_character_weights() -> DMatrix<C64> {
    let g = d3_group();
    let tau = &d3_irreps()[2];
    DMatrix::from_fn(6, 6, |a, b| tau.character(g.mult(g.inverse(a), b)) * 2.0)
}

/// `-1/(2g²) (Tr[U†_i U_j] + h.c.)` pushed onto `spec` in the requested form.
fn push_d3_plaquette(spec: &mut HamiltonianSpec, i: usize, j: usize, scale: f64, form: PlaquetteForm) -> Result<()> {
    match form {
        PlaquetteForm::Character => spec.push_coupling(DiagonalCoupling {
            coefficient: C64::new(scale, 0.0),
            sites: (i, j),
            weights: d3_character_weights(),
        }),
        PlaquetteForm::Contraction => {
            let tau = &d3_irreps()[2];
            for p in 0..2 {
                for q in 0..2 {
                    let entries: Vec<C64> = tau.matrices.iter().map(|m| m[(p, q)]).collect();
                    let conj: Vec<C64> = entries.iter().map(|e| e.conj()).collect();
                    let t = OperatorTerm::real(
                        scale,
                        vec![
                            (i, SiteOperator::diagonal(format!("U*{p}{q}"), &conj)),
                            (j, SiteOperator::diagonal(format!("U{p}{q}"), &entries)),
                        ],
                    )?;
                    spec.push(t.adjoint());
                    spec.push(t);
                }
            }
        }
    }
    Ok(())
}

pub fn d3_chain(config: &ModelConfig) -> Result<HamiltonianSpec> {
    if config.model != ModelKind::D3 {
        return Err(Error::Config(format!("d3_chain called with model {}", config.model)));
    }
    config.validate()?;
    let (l, g2) = (config.l, config.g2);
    let group = d3_group();
    let mut spec = HamiltonianSpec::new(6, l, Boundary::Open);
    for (irrep, eps) in d3_irreps().iter().zip(config.epsilon) {
        let alpha = irrep.dim as f64 / group.order() as f64 * eps;
        if alpha == 0.0 {
            continue;
        }
        let proj = SiteOperator::new(format!("P[{}]", irrep.label), projector_matrix(&group, irrep)?)?;
        for i in 0..l {
            spec.push(OperatorTerm::single(C64::new(-g2 * alpha, 0.0), i, proj.clone()));
            // The first rung carries no string term.
            if i > 0 {
                let string = (0..i).map(|s| (s, proj.clone())).collect();
                spec.push(OperatorTerm::real(-2.0 * g2 * alpha, string)?);
            }
        }
    }
    for (i, j) in bonds(l, Boundary::Open) {
        push_d3_plaquette(&mut spec, i, j, -1.0 / (2.0 * g2), config.plaquette_form)?;
    }
    Ok(spec)
}

/// Site-averaged plaquette operator normalized to the interval [-1, 1].
#[derive(Clone, Debug)]
pub struct PlaquetteObservable {
    /// `(1/n) Σ_p B_p / λ_max(B_p)`.
    pub operator: HamiltonianSpec,
    /// Number of plaquettes averaged over.
    pub plaquettes: usize,
}

impl PlaquetteObservable {
    pub fn evaluate(&self, state: &StateVector) -> Result<f64> {
        Ok(self.operator.expectation(state)?.re)
    }
}

/// Per-plaquette operator of each model, averaged over plaquettes and divided
/// by its largest eigenvalue:
/// SU(2) `(1-3Z_{i-1}) X_i (1-3Z_{i+1})`, ℤ_N `(X_i + X†_i)/2`,
/// D₃ `(Tr[U†_i U_{i+1}] + h.c.)/2`.
pub fn plaquette_observable(config: &ModelConfig) -> Result<PlaquetteObservable> {
    config.validate()?;
    let l = config.l;
    match config.model {
        ModelKind::Su2 => {
            let mut op = HamiltonianSpec::new(2, l, config.boundary);
            for i in 0..l {
                let (left, right) = neighbours(i, l, config.boundary);
                // (1-3Z) has eigenvalues -2 and 4, so each dressing factor contributes at most 4.
                let max_eig = 4f64.powi(left.is_some() as i32 + right.is_some() as i32);
                for t in dressed_flip_terms(i, left, right, 1.0 / (max_eig * l as f64))? {
                    op.push(t);
                }
            }
            Ok(PlaquetteObservable { operator: op, plaquettes: l })
        }
        ModelKind::Zn => {
            let (_, x) = clock_operators(config.n)?;
            let mut op = HamiltonianSpec::new(config.n, l, config.boundary);
            let w = C64::new(0.5 / l as f64, 0.0);
            for i in 0..l {
                op.push(OperatorTerm::single(w, i, x.clone()));
                op.push(OperatorTerm::single(w, i, x.dagger()));
            }
            Ok(PlaquetteObservable { operator: op, plaquettes: l })
        }
        ModelKind::D3 => {
            let mut op = HamiltonianSpec::new(6, l, Boundary::Open);
            let plaquettes = l - 1;
            // (Tr + h.c.)/2 = χ_τ, whose largest value is χ_τ(e) = 2.
            for (i, j) in bonds(l, Boundary::Open) {
                push_d3_plaquette(&mut op, i, j, 0.25 / plaquettes as f64, config.plaquette_form)?;
            }
            Ok(PlaquetteObservable { operator: op, plaquettes })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::left_regular_permutation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn is_hermitian(spec: &HamiltonianSpec) -> f64 {
        let h = spec.dense_matrix(4096).unwrap();
        (h.adjoint() - &h).norm()
    }

    fn lowest(spec: &HamiltonianSpec) -> (f64, Vec<C64>) {
        let h = spec.dense_matrix(4096).unwrap();
        let eig = h.symmetric_eigen();
        let (idx, e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        (*e, eig.eigenvectors.column(idx).iter().copied().collect())
    }

    fn coefficient_multiset(spec: &HamiltonianSpec, pattern: &str) -> Vec<f64> {
        let mut v: Vec<f64> = spec
            .terms
            .iter()
            .filter(|t| t.factors().iter().map(|(_, o)| o.label.as_str()).collect::<String>() == pattern)
            .map(|t| t.coefficient.re)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn su2_term_coefficients() {
        let spec = su2_chain(&ModelConfig::su2(4, 1.0)).unwrap();
        assert_eq!(coefficient_multiset(&spec, "ZZ"), vec![-1.5; 4]);
        assert_eq!(coefficient_multiset(&spec, "Z"), vec![3.0; 4]);
        assert_eq!(coefficient_multiset(&spec, "X"), vec![-1.0; 4]);
        assert_eq!(coefficient_multiset(&spec, "ZX").len() + coefficient_multiset(&spec, "XZ").len(), 8);
        assert!(coefficient_multiset(&spec, "ZX").iter().all(|&c| c == 3.0));
        assert_eq!(coefficient_multiset(&spec, "ZXZ"), vec![-9.0; 2]);
        // Site 0 and 3 have wrap-around neighbours: Z_3 X_0 Z_1 orders as X Z Z.
        assert_eq!(coefficient_multiset(&spec, "XZZ"), vec![-9.0]);
        assert_eq!(coefficient_multiset(&spec, "ZZX"), vec![-9.0]);
        assert!(is_hermitian(&spec) < 1e-12);
    }

    #[test]
    fn su2_open_boundary_edges() {
        let spec = su2_chain(&ModelConfig::su2(3, 2.0).with_boundary(Boundary::Open)).unwrap();
        // ZZ on 2 bonds, Z on 3 sites, flips: 2 + 4 + 2 terms at sites 0, 1, 2.
        assert_eq!(spec.terms.len(), 2 + 3 + 8);
        assert!(is_hermitian(&spec) < 1e-12);
        assert!(su2_chain(&ModelConfig::su2(2, 1.0)).is_err());
    }

    #[test]
    fn su2_electric_limit_is_aligned() {
        let spec = su2_chain(&ModelConfig::su2(4, 1e3)).unwrap();
        let (_, v) = lowest(&spec);
        assert!(v[15].norm() > 1.0 - 1e-6, "all spins in |1>");
    }

    #[test]
    fn zn_longitudinal_vanishing() {
        assert_eq!(longitudinal_coefficient(2, 1), C64::new(0.0, 0.0));
        assert_eq!(longitudinal_coefficient(4, 2), C64::new(0.0, 0.0));
        let z2 = zn_chain(&ModelConfig::zn(2, 1, 4, 1.0)).unwrap();
        assert!(z2.terms.iter().all(|t| t.factors().len() == 2 || t.factors()[0].1.label.starts_with('X')));
        let z2k0 = zn_chain(&ModelConfig::zn(2, 0, 4, 1.0)).unwrap();
        for t in &z2k0.terms {
            assert!(t.coefficient.im.abs() < 1e-15);
        }
        assert!(is_hermitian(&z2k0) < 1e-12);
        for (n, k) in [(3, 1), (4, 1), (5, 2), (6, 3)] {
            let spec = zn_chain(&ModelConfig::zn(n, k, 3, 0.7)).unwrap();
            assert!(is_hermitian(&spec) < 1e-12);
        }
        assert!(zn_chain(&ModelConfig::zn(3, 3, 3, 1.0)).is_err());
    }

    #[test]
    fn z2_and_su2_differ() {
        let a = zn_chain(&ModelConfig::zn(2, 0, 4, 1.0)).unwrap().dense_matrix(4096).unwrap();
        let b = su2_chain(&ModelConfig::su2(4, 1.0)).unwrap().dense_matrix(4096).unwrap();
        assert!((a - b).norm() > 1.0);
    }

    #[test]
    fn d3_plaquette_element() {
        let w = d3_character_weights();
        assert!((w[(1, 1)] - C64::new(4.0, 0.0)).norm() < 1e-14);
        // Two forms agree as operators.
        let a = d3_chain(&ModelConfig::d3(3, 0.4)).unwrap().dense_matrix(4096).unwrap();
        let mut cfg = ModelConfig::d3(3, 0.4);
        cfg.plaquette_form = PlaquetteForm::Contraction;
        let b = d3_chain(&cfg).unwrap().dense_matrix(4096).unwrap();
        assert!((&a - b).norm() < 1e-12);
        assert!((a.adjoint() - &a).norm() < 1e-12);
    }

    #[test]
    fn d3_electric_part_has_uniform_product_eigenstate() {
        let cfg = ModelConfig::d3(3, 1.0);
        let full = d3_chain(&cfg).unwrap();
        let electric = HamiltonianSpec { couplings: Vec::new(), ..full };
        let uniform = vec![C64::new(1.0 / 6f64.sqrt(), 0.0); 6];
        let psi = StateVector::product(&[uniform.clone(), uniform.clone(), uniform]).unwrap();
        let h_psi = electric.apply(&psi).unwrap();
        let e = psi.inner(&h_psi).unwrap().re;
        let residual: f64 = h_psi
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b * e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(residual < 1e-10);
        // α_e = 1/6: three single-site projectors and two strings, all with eigenvalue 1.
        assert!((e - (-(3.0 + 2.0 * 2.0) / 6.0)).abs() < 1e-12);
        // And it is the ground state of the electric part.
        let (e0, _) = lowest(&electric);
        assert!((e0 - e).abs() < 1e-10);
    }

    #[test]
    fn d3_strong_coupling_ground_state_is_uniform_product() {
        let spec = d3_chain(&ModelConfig::d3(2, 1e3)).unwrap();
        let (_, v) = lowest(&spec);
        let overlap: C64 = v.iter().map(|a| a / 6.0).sum();
        assert!(overlap.norm() > 1.0 - 1e-6);
    }

    #[test]
    fn d3_global_symmetry_commutes() {
        let group = d3_group();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in [2, 3] {
            let spec = d3_chain(&ModelConfig::d3(l, 0.8)).unwrap();
            let h = spec.dense_matrix(4096).unwrap();
            let dim = h.nrows();
            for f in 0..6 {
                let perm = left_regular_permutation(&group, f).unwrap();
                let mut theta = DMatrix::<C64>::zeros(dim, dim);
                for i in 0..dim {
                    let (mut rest, mut j, mut stride) = (i, 0, 1);
                    for _ in 0..l {
                        j += perm[rest % 6] * stride;
                        rest /= 6;
                        stride *= 6;
                    }
                    theta[(j, i)] = C64::new(1.0, 0.0);
                }
                assert!((&h * &theta - &theta * &h).norm() < 1e-10);
            }
            let _ = rng.random::<u8>();
        }
    }

    #[test]
    fn config_validation() {
        assert!(ModelConfig::su2(4, 0.0).validate().is_err());
        assert!(ModelConfig::su2(4, -1.0).build().is_err());
        assert!(ModelConfig::d3(3, 1.0).with_boundary(Boundary::Periodic).build().is_err());
        assert!(ModelConfig::d3(1, 1.0).build().is_err());
        let mut wrong = ModelConfig::su2(4, 1.0);
        wrong.model = ModelKind::Zn;
        assert!(su2_chain(&wrong).is_err());
    }

    #[test]
    fn plaquette_limits() {
        // Magnetic limit of ℤ_N: X-polarized paramagnet.
        for n in [2, 3, 5] {
            let cfg = ModelConfig::zn(n, 0, 3, 1e-3);
            let (_, v) = lowest(&cfg.build().unwrap());
            let psi = StateVector::new(n, 3, v).unwrap();
            let b = plaquette_observable(&cfg).unwrap().evaluate(&psi).unwrap();
            assert!((b - 1.0).abs() < 1e-4, "N={n}: {b}");
        }
        // Electric limit of ℤ₂ k=0: Z-polarized, ⟨X⟩ → 0.
        let cfg = ModelConfig::zn(2, 0, 4, 1e3);
        let (_, v) = lowest(&cfg.build().unwrap());
        let b = plaquette_observable(&cfg).unwrap().evaluate(&StateVector::new(2, 4, v).unwrap()).unwrap();
        assert!(b.abs() < 1e-4);
    }

    #[test]
    fn plaquette_observable_is_bounded() {
        for cfg in [ModelConfig::su2(4, 1.0), ModelConfig::zn(3, 1, 3, 1.0), ModelConfig::d3(2, 1.0)] {
            let m = plaquette_observable(&cfg).unwrap().operator.dense_matrix(4096).unwrap();
            let eig = m.symmetric_eigen().eigenvalues;
            let max = eig.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            assert!(max <= 1.0 + 1e-12, "{:?}: {max}", cfg.model);
        }
    }
}
