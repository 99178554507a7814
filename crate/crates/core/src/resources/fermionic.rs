//! Jordan–Wigner Majorana operators on qubit chains and the fermionic
//! antiflatness of their covariance matrix.

use nalgebra::DMatrix;

use crate::hilbert::StateVector;
use crate::{Error, Result, C64};

use super::NORM_TOL;

/// `i^phase · ⊗_j X_j^{x_j} Z_j^{z_j}` on up to 64 qubits, with `X` to the
/// left of `Z` on each site. Site `j` is bit `j` of the masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    /// Power of `i`, taken mod 4.
    pub phase: u8,
}

impl PauliString {
    pub const IDENTITY: Self = Self { x: 0, z: 0, phase: 0 };

    pub fn x(site: usize) -> Self {
        Self { x: 1 << site, z: 0, phase: 0 }
    }

    pub fn z(site: usize) -> Self {
        Self { x: 0, z: 1 << site, phase: 0 }
    }

    /// `Y = i X Z`.
    pub fn y(site: usize) -> Self {
        Self { x: 1 << site, z: 1 << site, phase: 1 }
    }

    pub fn scaled(self, power_of_i: u8) -> Self {
        Self { phase: (self.phase + power_of_i) % 4, ..self }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        // Z^a X^b = (-1)^{ab} X^b Z^a on each site.
        let swaps = (self.z & other.x).count_ones() as u8;
        Self { x: self.x ^ other.x, z: self.z ^ other.z, phase: (self.phase + other.phase + 2 * swaps) % 4 }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.z & other.x).count_ones() + (self.x & other.z).count_ones()).is_multiple_of(2)
    }

    fn phase_factor(&self) -> C64 {
        [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][self.phase as usize % 4]
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.d() != 2 {
            return Err(Error::UnsupportedDimension(state.d()));
        }
        let l = state.sites();
        if l < 64 && (self.x | self.z) >> l != 0 {
            return Err(Error::InvalidSite { site: 63 - (self.x | self.z).leading_zeros() as usize, len: l });
        }
        Ok(())
    }

    /// `P |ψ⟩`.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check(state)?;
        let c = self.phase_factor();
        let mut out = vec![C64::new(0.0, 0.0); state.dim()];
        for (m, a) in state.amplitudes().iter().enumerate() {
            let sign = if (self.z & m as u64).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            out[m ^ self.x as usize] = c * a * sign;
        }
        StateVector::new(2, state.sites(), out)
    }

    /// `⟨ψ| P |ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        self.check(state)?;
        let psi = state.amplitudes();
        let mut acc = C64::new(0.0, 0.0);
        for (m, a) in psi.iter().enumerate() {
            let t = psi[m ^ self.x as usize].conj() * a;
            if (self.z & m as u64).count_ones().is_multiple_of(2) {
                acc += t;
            } else {
                acc -= t;
            }
        }
        Ok(acc * self.phase_factor())
    }

    /// Dense `2^l × 2^l` matrix.
    pub fn to_dense(&self, l: usize) -> DMatrix<C64> {
        let dim = 1usize << l;
        let c = self.phase_factor();
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let sign = if (self.z & col as u64).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            m[(col ^ self.x as usize, col)] = c * sign;
        }
        m
    }
}

/// Which Pauli operator carries the Jordan–Wigner string.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum JwConvention {
    /// `γ_{2j} = (Π_{l<j} X_l) Z_j`, `γ_{2j+1} = (Π_{l<j} X_l) Y_j`. The ℤ₂
    /// chain's `ZZ` coupling and `X` field are quadratic in this basis.
    XString,
    /// `γ_{2j} = (Π_{l<j} Z_l) X_j`, `γ_{2j+1} = (Π_{l<j} Z_l) Y_j`, the
    /// textbook mapping. Here `Z_j` and `X_j X_{j+1}` are quadratic, and the
    /// X-polarized magnetic limit of the ℤ₂ chain has `F_2 = 1` for every `L`.
    #[default]
    ZString,
}

/// The `2L` Majorana operators of a chain of `l` qubits.
pub fn majoranas(l: usize, convention: JwConvention) -> Result<Vec<PauliString>> {
    if l == 0 || l > 63 {
        return Err(Error::InvalidArgument(format!("Majoranas need 1 <= L <= 63, got {l}")));
    }
    let mut out = Vec::with_capacity(2 * l);
    for j in 0..l {
        let below = (1u64 << j) - 1;
        let (string, head) = match convention {
            JwConvention::XString => (PauliString { x: below, z: 0, phase: 0 }, PauliString::z(j)),
            JwConvention::ZString => (PauliString { x: 0, z: below, phase: 0 }, PauliString::x(j)),
        };
        out.push(string.multiply(&head));
        out.push(string.multiply(&PauliString::y(j)));
    }
    Ok(out)
}

/// Majorana covariance matrix `M_mn = -(i/2)⟨[γ_m, γ_n]⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    m: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || !m.nrows().is_multiple_of(2) {
            return Err(Error::Dimension(format!("covariance matrix must be 2L × 2L, got {}×{}", m.nrows(), m.ncols())));
        }
        let asym = (&m + m.transpose()).amax();
        if asym > 1e-10 {
            return Err(Error::InvalidArgument(format!("covariance matrix not antisymmetric (‖M + Mᵀ‖ = {asym:.3e})")));
        }
        let cov = Self { m };
        let top = cov.singular_values().iter().cloned().fold(0.0, f64::max);
        if top > 1.0 + 1e-10 {
            return Err(Error::InvalidArgument(format!("covariance singular value {top} exceeds 1")));
        }
        Ok(cov)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.m.clone().svd(false, false).singular_values.iter().copied().collect()
    }

    /// `F_k = L - ½ tr[(MᵀM)^k]`.
    pub fn antiflatness(&self, k: u32) -> f64 {
        let mtm = self.m.transpose() * &self.m;
        let mut p = DMatrix::identity(mtm.nrows(), mtm.ncols());
        for _ in 0..k {
            p = &p * &mtm;
        }
        self.modes() as f64 - 0.5 * p.trace()
    }
}

/// Covariance matrix of `state` under the chosen Jordan–Wigner convention.
pub fn jordan_wigner_covariance(state: &StateVector, convention: JwConvention) -> Result<CovarianceMatrix> {
    if state.d() != 2 {
        return Err(Error::UnsupportedDimension(state.d()));
    }
    state.check_normalized(NORM_TOL)?;
    let gammas = majoranas(state.sites(), convention)?;
    let n = gammas.len();
    let mut m = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a + 1..n {
            // γ_a γ_b is anti-Hermitian for a ≠ b, so -i⟨γ_a γ_b⟩ is real.
            let v = (gammas[a].multiply(&gammas[b]).expectation(state)? * C64::new(0.0, -1.0)).re;
            m[(a, b)] = v;
            m[(b, a)] = -v;
        }
    }
    CovarianceMatrix::new(m)
}

/// Fermionic antiflatness `F_k` under the default (Z-string) convention.
pub fn faf(state: &StateVector, k: u32) -> Result<f64> {
    faf_with(state, k, JwConvention::default())
}

pub fn faf_with(state: &StateVector, k: u32, convention: JwConvention) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("antiflatness index must be positive".into()));
    }
    Ok(jordan_wigner_covariance(state, convention)?.antiflatness(k))
}
