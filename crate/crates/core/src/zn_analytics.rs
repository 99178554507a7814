//! Strong-coupling structure of the ℤ_N clock chain: longitudinal energies of
//! uniform configurations, their degeneracies, the two-branch pair states that
//! dominate the electric limit, and a closed form for their stabilizer Rényi
//! entropy.

use std::f64::consts::PI;

use crate::hilbert::StateVector;
use crate::{Error, Result, C64};

/// Absolute tolerance under which two longitudinal energies count as equal.
pub const ENERGY_TOL: f64 = 1e-12;

fn check_sector(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    if k >= n {
        return Err(Error::InvalidArgument(format!("sector k = {k} out of range for N = {n}")));
    }
    Ok(())
}

/// Energy of `|a⟩` under `-[(1 + ω^k) Z + h.c.]`:
/// `E_a = -4 cos(πk/N) cos(2π(k/2 + a)/N)`.
pub fn longitudinal_energy(n: usize, k: usize, a: usize) -> Result<f64> {
    check_sector(n, k)?;
    if a >= n {
        return Err(Error::InvalidArgument(format!("basis state {a} out of range for N = {n}")));
    }
    let (n, k, a) = (n as f64, k as f64, a as f64);
    Ok(-4.0 * (PI * k / n).cos() * (2.0 * PI / n * (k / 2.0 + a)).cos())
}

/// Degenerate uniform configurations of one `(N, k)` sector.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyReport {
    pub n: usize,
    pub k: usize,
    /// `E_a` for `a = 0..N`.
    pub energies: Vec<f64>,
    /// Sets of two or more basis states sharing an energy, each sorted,
    /// ordered by their smallest member.
    pub degenerate_pairs: Vec<Vec<usize>>,
    /// The degenerate set at the global minimum, if the minimum is degenerate.
    pub ground_pair: Option<Vec<usize>>,
}

pub fn degenerate_pairs(n: usize, k: usize) -> Result<DegeneracyReport> {
    check_sector(n, k)?;
    let energies = (0..n).map(|a| longitudinal_energy(n, k, a)).collect::<Result<Vec<_>>>()?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; n];
    for a in 0..n {
        if assigned[a] {
            continue;
        }
        let group: Vec<usize> = (a..n).filter(|&b| (energies[b] - energies[a]).abs() < ENERGY_TOL).collect();
        group.iter().for_each(|&b| assigned[b] = true);
        if group.len() > 1 {
            groups.push(group);
        }
    }
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let ground_pair = groups.iter().find(|g| (energies[g[0]] - min).abs() < ENERGY_TOL).cloned();
    Ok(DegeneracyReport { n, k, energies, degenerate_pairs: groups, ground_pair })
}

/// `(|a⟩^{⊗L} + |b⟩^{⊗L}) / √2` on `L` qudits of dimension `N`.
pub fn pair_state(n: usize, l: usize, a: usize, b: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    if a == b || a >= n || b >= n {
        return Err(Error::InvalidArgument(format!("pair ({a}, {b}) must be two distinct states below N = {n}")));
    }
    let mut psi = StateVector::zeros(n, l)?;
    let uniform = |m: usize| (0..l).fold(0, |acc, _| acc * n + m);
    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    psi.amplitudes_mut()[uniform(a)] = amp;
    psi.amplitudes_mut()[uniform(b)] = amp;
    Ok(psi)
}

fn binomial(n: i128, k: i128) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of `(s_1, …, s_L) ∈ [0, N-1]^L` with `Σ_j s_j = x`, by
/// inclusion–exclusion `Σ_m (-1)^m C(L, m) C(x - mN + L - 1, L - 1)`.
pub fn multiplicity_cx(l: usize, n: usize, x: usize) -> Result<u128> {
    if n < 2 || l == 0 {
        return Err(Error::InvalidArgument(format!("need N >= 2 and L >= 1, got N = {n}, L = {l}")));
    }
    if x > l * (n - 1) {
        return Err(Error::InvalidArgument(format!("x = {x} exceeds L(N-1) = {}", l * (n - 1))));
    }
    let (l, n, x) = (l as i128, n as i128, x as i128);
    let total: i128 = (0..=x / n)
        .map(|m| {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            sign * binomial(l, m) * binomial(x - m * n + l - 1, l - 1)
        })
        .sum();
    Ok(total as u128)
}

/// Stabilizer Rényi-2 entropy of [`pair_state`] in closed form,
/// `M₂ = -ln[Σ_x c_x (cos⁴(π d x / N) + 1/8) / N^L]` with `d = b - a`.
///
/// Strings with no shift contribute `cos⁴`; the two shifts mapping one
/// branch onto the other contribute `2 · (1/2)⁴ = 1/8` each. Pairs with
/// `2d ≡ 0 (mod N)` are excluded since extra strings contribute there.
pub fn analytic_sre_pair(n: usize, l: usize, a: usize, b: usize) -> Result<f64> {
    if n < 2 || l == 0 || a == b || a >= n || b >= n {
        return Err(Error::InvalidArgument(format!("invalid pair ({a}, {b}) for N = {n}, L = {l}")));
    }
    let d = b as i64 - a as i64;
    if (2 * d).rem_euclid(n as i64) == 0 {
        return Err(Error::InvalidArgument(format!(
            "pair ({a}, {b}) has 2(b - a) ≡ 0 mod {n}; the closed form does not apply"
        )));
    }
    let mut sum = 0.0;
    for x in 0..=l * (n - 1) {
        let c = multiplicity_cx(l, n, x)? as f64;
        let cos = (PI * d as f64 * x as f64 / n as f64).cos();
        sum += c * (cos.powi(4) + 0.125);
    }
    Ok(-(sum / (n as f64).powi(l as i32)).ln())
}
