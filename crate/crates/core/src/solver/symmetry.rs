use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group_algebra::{left_regular_permutation, FiniteGroup};
use crate::hilbert::{hilbert_dim, LinearOperator};
use crate::{Error, Result, C64};

/// A finite group acting on a chain by applying the same single-site
/// permutation of basis states to every site: `Θ(f) = Π_i θ_i(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalSymmetry {
    d: usize,
    site_perms: Vec<Vec<usize>>,
}

impl GlobalSymmetry {
    /// Closure of the given site permutations under composition.
    pub fn from_generators(d: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        for g in &generators {
            let mut seen = vec![false; d];
            if g.len() != d || g.iter().any(|&x| x >= d || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidArgument(format!("{g:?} is not a permutation of 0..{d}")));
            }
        }
        let mut elements: Vec<Vec<usize>> = vec![(0..d).collect()];
        let mut frontier = elements.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for g in &generators {
                    let composed: Vec<usize> = a.iter().map(|&x| g[x]).collect();
                    if !elements.contains(&composed) {
                        elements.push(composed.clone());
                        next.push(composed);
                    }
                }
            }
            frontier = next;
        }
        Ok(Self { d, site_perms: elements })
    }

    /// Left-regular action `g ↦ f g` of a finite group on its element basis.
    pub fn from_left_regular(group: &FiniteGroup) -> Result<Self> {
        let site_perms =
            (0..group.order()).map(|f| left_regular_permutation(group, f)).collect::<Result<Vec<_>>>()?;
        Ok(Self { d: group.order(), site_perms })
    }

    pub fn order(&self) -> usize {
        self.site_perms.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn site_permutations(&self) -> &[Vec<usize>] {
        &self.site_perms
    }

    /// Index maps of every group element on a chain of `l` sites.
    pub fn action(&self, l: usize) -> Result<SymmetryAction> {
        let dim = hilbert_dim(self.d, l)?;
        let d = self.d;
        let maps = self
            .site_perms
            .iter()
            .map(|perm| {
                (0..dim)
                    .map(|i| {
                        let (mut rest, mut j, mut stride) = (i, 0, 1);
                        for _ in 0..l {
                            j += perm[rest % d] * stride;
                            rest /= d;
                            stride *= d;
                        }
                        j
                    })
                    .collect()
            })
            .collect();
        Ok(SymmetryAction { dim, maps })
    }
}

/// [`GlobalSymmetry`] materialized for a fixed chain length.
#[derive(Clone, Debug)]
pub struct SymmetryAction {
    dim: usize,
    maps: Vec<Vec<usize>>,
}

impl SymmetryAction {
    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Θ(f) x`.
    pub fn apply_element(&self, f: usize, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); x.len()];
        for (i, &j) in self.maps[f].iter().enumerate() {
            y[j] = x[i];
        }
        y
    }

    /// Projector onto the trivial sector, `P = 1/|G| Σ_f Θ(f)`.
    pub fn project_trivial(&self, x: &[C64], y: &mut [C64]) {
        y.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for map in &self.maps {
            for (i, &j) in map.iter().enumerate() {
                y[j] += x[i];
            }
        }
        let w = 1.0 / self.maps.len() as f64;
        y.iter_mut().for_each(|v| *v *= w);
    }

    /// Largest `‖[H, Θ(f)] v‖ / max(1, ‖H v‖)` over group elements and a few
    /// seeded random probe vectors.
    pub fn commutator_norm(&self, op: &dyn LinearOperator, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut hv = vec![C64::new(0.0, 0.0); self.dim];
        let mut h_tv = vec![C64::new(0.0, 0.0); self.dim];
        for _ in 0..2 {
            let v: Vec<C64> =
                (0..self.dim).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
            op.apply(&v, &mut hv);
            let scale = hv.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt().max(1.0);
            for f in 0..self.order() {
                let tv = self.apply_element(f, &v);
                op.apply(&tv, &mut h_tv);
                let t_hv = self.apply_element(f, &hv);
                let diff = h_tv.iter().zip(&t_hv).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(diff / scale);
            }
        }
        worst
    }
}

/// `P H P + shift (1 - P)`: trivial-sector levels of `H`, with every other
/// sector pushed up to `shift`.
pub(crate) struct SectorOperator<'a> {
    pub base: &'a dyn LinearOperator,
    pub action: &'a SymmetryAction,
    pub shift: f64,
}

impl LinearOperator for SectorOperator<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let mut px = vec![C64::new(0.0, 0.0); x.len()];
        self.action.project_trivial(x, &mut px);
        let mut hpx = vec![C64::new(0.0, 0.0); x.len()];
        self.base.apply(&px, &mut hpx);
        self.action.project_trivial(&hpx, y);
        for ((yi, xi), pi) in y.iter_mut().zip(x).zip(&px) {
            *yi += (xi - pi) * self.shift;
        }
    }
}
