//! Homology via Smith normal form, with explicit cycle-class coordinates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::complex::{ChainComplex, Degree};
use super::matrix::Matrix;
use super::smith::{self, SmithForm, SmithOptions};

/// `ℤ^free ⊕ ℤ/t_1 ⊕ … ⊕ ℤ/t_k` with `t_1 | t_2 | … | t_k`, all `t_i ≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Canonicalizes arbitrary cyclic orders into invariant-factor form.
    pub fn from_cyclic(free_rank: usize, orders: &[BigInt]) -> Self {
        let orders: Vec<BigInt> = orders.iter().filter(|o| !o.is_one()).cloned().collect();
        let n = orders.len();
        let mut m = Matrix::zeros(n, n);
        for (i, o) in orders.iter().enumerate() {
            m.set(i, i, o.clone());
        }
        let s = SmithForm::compute(&m, SmithOptions::FACTORS);
        let zero_orders = n - s.rank;
        AbelianGroup { free_rank: free_rank + zero_orders, torsion: s.torsion() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// True iff the torsion list is a divisibility chain of integers ≥ 2.
    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|t| *t >= BigInt::from(2))
            && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homology groups indexed by degree over a window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedAbelianGroup {
    pub groups: BTreeMap<Degree, AbelianGroup>,
}

impl GradedAbelianGroup {
    pub fn get(&self, n: Degree) -> AbelianGroup {
        self.groups.get(&n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.values().all(AbelianGroup::is_zero)
    }

    /// Degrees with a nonzero group.
    pub fn nonzero_degrees(&self) -> Vec<Degree> {
        self.groups.iter().filter(|(_, g)| !g.is_zero()).map(|(&n, _)| n).collect()
    }

    /// Same groups after dropping zero entries; compares across windows.
    pub fn nonzero_part(&self) -> BTreeMap<Degree, AbelianGroup> {
        self.groups.iter().filter(|(_, g)| !g.is_zero()).map(|(&n, g)| (n, g.clone())).collect()
    }
}

impl fmt::Display for GradedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(|(n, g)| format!("H{n}={g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The cycle group of one degree with coordinates adapted to homology.
///
/// Cycles are written in the basis `kernel · U⁻¹`; the first `rank` of these
/// coordinates are reduced modulo the invariant factors of the boundary
/// lattice, the remaining ones are free.
#[derive(Clone, Debug)]
pub struct HomologyDegree {
    pub degree: Degree,
    kernel_basis: Matrix,
    kernel_coords: Matrix,
    u: Matrix,
    u_inv: Matrix,
    factors: Vec<BigInt>,
    pub group: AbelianGroup,
}

/// One summand of the class coordinates: either `ℤ/t` or `ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cyclic {
    Torsion(BigInt),
    Free,
}

impl HomologyDegree {
    pub fn compute(c: &ChainComplex, n: Degree) -> Self {
        let k = smith::kernel(&c.diff(n));
        let boundary = &k.coords * &*c.diff(n + 1);
        let s = SmithForm::compute(&boundary, SmithOptions::LEFT);
        let u = s.left().clone();
        let kdim = k.basis.cols();
        let torsion = s.torsion();
        let group = AbelianGroup { free_rank: kdim - s.rank, torsion };
        HomologyDegree {
            degree: n,
            kernel_basis: k.basis,
            kernel_coords: k.coords,
            u: u.forward,
            u_inv: u.inverse,
            factors: s.invariant_factors,
            group,
        }
    }

    /// Generators of the nontrivial cyclic summands, in the order of
    /// [`Self::summands`], as cycles of the complex.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.active()
            .map(|i| {
                let col = self.u_inv.column(i);
                self.kernel_basis.mul_vec(&col)
            })
            .collect()
    }

    /// Orders of the nontrivial cyclic summands.
    pub fn summands(&self) -> Vec<Cyclic> {
        self.active()
            .map(|i| match self.factors.get(i) {
                Some(t) => Cyclic::Torsion(t.clone()),
                None => Cyclic::Free,
            })
            .collect()
    }

    fn active(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kernel_basis.cols()).filter(|&i| self.factors.get(i).is_none_or(|t| !t.is_one()))
    }

    /// Coordinates of the class of `z` in the summands (torsion parts reduced
    /// into `[0, t)`), or `None` if `z` is not a cycle of this degree.
    pub fn class_of(&self, c: &ChainComplex, z: &[BigInt]) -> Option<Vec<BigInt>> {
        if z.len() != self.kernel_basis.rows() || c.diff(self.degree).mul_vec(z).iter().any(|x| !x.is_zero()) {
            return None;
        }
        let coords = self.u.mul_vec(&self.kernel_coords.mul_vec(z));
        Some(
            self.active()
                .map(|i| match self.factors.get(i) {
                    Some(t) => coords[i].mod_floor(t),
                    None => coords[i].clone(),
                })
                .collect(),
        )
    }

    /// A cycle representing the given class coordinates.
    pub fn representative(&self, class: &[BigInt]) -> Vec<BigInt> {
        let mut full = vec![BigInt::zero(); self.kernel_basis.cols()];
        for (slot, i) in self.active().enumerate() {
            full[i] = class[slot].clone();
        }
        self.kernel_basis.mul_vec(&self.u_inv.mul_vec(&full))
    }

    pub fn is_zero_class(&self, class: &[BigInt]) -> bool {
        class.iter().all(Zero::is_zero)
    }
}

/// `H_n(C)` for every `n` in the window `[a, b]`.
pub fn homology(c: &ChainComplex, window: (Degree, Degree)) -> GradedAbelianGroup {
    let mut groups = BTreeMap::new();
    for n in window.0..=window.1 {
        let g = if c.rank(n) == 0 { AbelianGroup::zero() } else { homology_group(c, n) };
        groups.insert(n, g);
    }
    GradedAbelianGroup { groups }
}

/// `H_n(C)` as an abstract group.
pub fn homology_group(c: &ChainComplex, n: Degree) -> AbelianGroup {
    let dn = c.diff(n);
    let dn1 = c.diff(n + 1);
    let s_out = SmithForm::compute(&dn, SmithOptions::FACTORS);
    let s_in = SmithForm::compute(&dn1, SmithOptions::FACTORS);
    AbelianGroup { free_rank: c.rank(n) - s_out.rank - s_in.rank, torsion: s_in.torsion() }
}

/// Homology over the full support of the complex.
pub fn homology_full(c: &ChainComplex) -> GradedAbelianGroup {
    match c.support() {
        Some(w) => homology(c, w),
        None => GradedAbelianGroup::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_of_two() {
        let c = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2]));
        let h = homology(&c, (0, 1));
        assert_eq!(h.get(0), AbelianGroup { free_rank: 0, torsion: vec![2.into()] });
        assert!(h.get(1).is_zero());
    }

    #[test]
    fn zero_differential() {
        let c = ChainComplex::concentrated(2, 3);
        assert_eq!(homology(&c, (2, 2)).get(2), AbelianGroup::free(3));
    }

    #[test]
    fn class_coordinates() {
        let c = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2]));
        let h = HomologyDegree::compute(&c, 0);
        assert_eq!(h.summands(), vec![Cyclic::Torsion(2.into())]);
        assert_eq!(h.class_of(&c, &[3.into()]), Some(vec![1.into()]));
        assert_eq!(h.class_of(&c, &[4.into()]), Some(vec![0.into()]));
        let g = h.generators();
        assert_eq!(h.class_of(&c, &g[0]), Some(vec![1.into()]));
    }

    #[test]
    fn canonical_cyclic() {
        let g = AbelianGroup::from_cyclic(0, &[2.into(), 3.into()]);
        assert_eq!(g.torsion, vec![BigInt::from(6)]);
        assert!(g.is_canonical());
    }
}
