//! Finite groups (ℤ_N and D₃), their irreducible representations, characters
//! and irrep projectors in the group-element (regular) basis.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::{Error, Result, C64};

/// A finite group given by its multiplication table over element indices.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    name: String,
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
    classes: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Build a group from a Cayley table, deriving identity, inverses and
    /// conjugacy classes. The table is checked to be a Latin square with an
    /// identity and associative multiplication.
    pub fn from_table(name: impl Into<String>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        for (a, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {a} has length {}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidTable(format!("row {a} is not a permutation")));
                }
            }
        }
        for b in 0..n {
            let mut seen = vec![false; n];
            for row in &mult {
                if std::mem::replace(&mut seen[row[b]], true) {
                    return Err(Error::InvalidTable(format!("column {b} is not a permutation")));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mult[e][g] == g && mult[g][e] == g))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverse: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| mult[a][b] == identity).unwrap())
            .collect();

        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut assigned = vec![false; n];
        for g in 0..n {
            if assigned[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|h| mult[mult[h][g]][inverse[h]]).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                assigned[c] = true;
            }
            classes.push(class);
        }

        Ok(Self { name: name.into(), mult, inverse, identity, classes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Index of the conjugacy class containing `g`.
    pub fn class_of(&self, g: usize) -> usize {
        self.classes.iter().position(|c| c.contains(&g)).expect("classes partition the group")
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidElement { index: g, order: self.order() })
        }
    }
}

/// Cyclic group ℤ_N with `mult(a, b) = (a + b) mod N`.
pub fn zn_cyclic(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(format!("Z{n}"), mult)
}

/// Index of `s^f r^j` in the D₃ element order (e, r, r², s, sr, sr²).
fn d3_index(f: usize, j: usize) -> usize {
    3 * f + j
}

/// Dihedral group of the triangle, elements ordered (e, r, r², s, sr, sr²).
pub fn d3_group() -> FiniteGroup {
    // s^f1 r^j1 · s^f2 r^j2 = s^(f1+f2) r^((-1)^f2 j1 + j2) since r^j s = s r^-j.
    let mult = (0..6)
        .map(|a| {
            let (f1, j1) = (a / 3, a % 3);
            (0..6)
                .map(|b| {
                    let (f2, j2) = (b / 3, b % 3);
                    let j = if f2 == 0 { j1 + j2 } else { 3 - j1 + j2 };
                    d3_index((f1 + f2) % 2, j % 3)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table("D3", mult).expect("D3 table is a valid group")
}

/// An irreducible unitary representation, one matrix per group element.
#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<DMatrix<C64>>,
}

impl Irrep {
    pub fn character(&self, g: usize) -> C64 {
        self.matrices[g].trace()
    }

    /// Whether this irrep is a homomorphism from `group` (checked on all pairs).
    pub fn is_representation_of(&self, group: &FiniteGroup, tol: f64) -> bool {
        let n = group.order();
        if self.matrices.len() != n {
            return false;
        }
        (0..n).all(|a| {
            (0..n).all(|b| {
                let prod = &self.matrices[a] * &self.matrices[b];
                (prod - &self.matrices[group.mult(a, b)]).norm() < tol
            })
        })
    }
}

/// The N one-dimensional irreps of ℤ_N, `q ↦ ω^{q a}`.
pub fn zn_irreps(n: usize) -> Result<Vec<Irrep>> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    Ok((0..n)
        .map(|q| Irrep {
            label: format!("q{q}"),
            dim: 1,
            matrices: (0..n)
                .map(|a| {
                    let phase = C64::from_polar(1.0, 2.0 * PI * ((q * a) % n) as f64 / n as f64);
                    DMatrix::from_element(1, 1, phase)
                })
                .collect(),
        })
        .collect())
}

/// Trivial, parity and fundamental irreps of D₃, in that order.
///
/// The fundamental irrep uses real orthogonal matrices: `r` rotates by 2π/3
/// and `s` reflects the second axis.
pub fn d3_irreps() -> Vec<Irrep> {
    let one = |x: f64| DMatrix::from_element(1, 1, C64::new(x, 0.0));
    let (c, s) = ((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
    let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]).map(|x| C64::new(x, 0.0));
    let refl = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]).map(|x| C64::new(x, 0.0));
    let mut fundamental = Vec::with_capacity(6);
    for f in 0..2 {
        let mut m = if f == 0 { DMatrix::identity(2, 2) } else { refl.clone() };
        for _ in 0..3 {
            fundamental.push(m.clone());
            m = &m * &rot;
        }
    }
    vec![
        Irrep { label: "trivial".into(), dim: 1, matrices: (0..6).map(|_| one(1.0)).collect() },
        Irrep {
            label: "parity".into(),
            dim: 1,
            matrices: (0..6).map(|g| one(if g < 3 { 1.0 } else { -1.0 })).collect(),
        },
        Irrep { label: "fundamental".into(), dim: 2, matrices: fundamental },
    ]
}

/// Character values χ^J on each conjugacy class.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub irrep_labels: Vec<String>,
    pub classes: Vec<Vec<usize>>,
    /// `chi[j][c]` is the character of irrep `j` on class `c`.
    pub chi: Vec<Vec<C64>>,
}

impl CharacterTable {
    pub fn new(group: &FiniteGroup, irreps: &[Irrep]) -> Result<Self> {
        for irrep in irreps {
            if irrep.matrices.len() != group.order() {
                return Err(Error::MismatchedIrrep(irrep.label.clone()));
            }
        }
        let classes = group.conjugacy_classes().to_vec();
        let chi = irreps
            .iter()
            .map(|irrep| classes.iter().map(|c| irrep.character(c[0])).collect())
            .collect();
        Ok(Self { irrep_labels: irreps.iter().map(|i| i.label.clone()).collect(), classes, chi })
    }

    pub fn value(&self, irrep: usize, class: usize) -> C64 {
        self.chi[irrep][class]
    }
}

/// Left-regular action θ^L(h)|g⟩ = |hg⟩ as a permutation of element indices.
pub fn left_regular_permutation(group: &FiniteGroup, h: usize) -> Result<Vec<usize>> {
    group.check_element(h)?;
    Ok((0..group.order()).map(|g| group.mult(h, g)).collect())
}

/// Left-regular action as a |G|×|G| permutation matrix.
pub fn left_regular(group: &FiniteGroup, h: usize) -> Result<DMatrix<C64>> {
    let perm = left_regular_permutation(group, h)?;
    let n = group.order();
    let mut m = DMatrix::zeros(n, n);
    for (g, &hg) in perm.iter().enumerate() {
        m[(hg, g)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

/// Orthogonal projector onto the isotypic component of `irrep` in the
/// regular representation: `P^J = dim(J)/|G| Σ_h χ^J(h)* θ^L(h)`.
pub fn projector_matrix(group: &FiniteGroup, irrep: &Irrep) -> Result<DMatrix<C64>> {
    if !irrep.is_representation_of(group, 1e-10) {
        return Err(Error::MismatchedIrrep(irrep.label.clone()));
    }
    let n = group.order();
    let scale = irrep.dim as f64 / n as f64;
    let mut p = DMatrix::zeros(n, n);
    for h in 0..n {
        let weight = irrep.character(h).conj() * scale;
        for g in 0..n {
            p[(group.mult(h, g), g)] += weight;
        }
    }
    Ok(p)
}
