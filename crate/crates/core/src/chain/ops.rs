//! Shifts, cones, and the quasi-isomorphism and cofibration tests.

use std::sync::Arc;

use num_bigint::BigInt;

use super::complex::{ChainComplex, ChainMap, Degree};
use super::error::ChainError;
use super::homology::{homology, GradedAbelianGroup};
use super::matrix::Matrix;
use super::smith::{SmithForm, SmithOptions};
use super::tensor::TensorLayout;

fn parity_sign(k: Degree) -> BigInt {
    BigInt::from(if k.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// `C[k]`: degree `n` holds `C_{n−k}`, differential `(−1)^k d_C`.
pub fn shift(c: &ChainComplex, k: Degree) -> ChainComplex {
    let Some((lo, hi)) = c.support() else {
        return ChainComplex::zero();
    };
    let s = parity_sign(k);
    let ranks = (lo..=hi).map(|n| c.rank(n)).collect();
    let diffs = (lo..=hi).map(|n| c.diff(n).scale(&s)).collect();
    ChainComplex::new(lo + k, ranks, diffs).expect("shift preserves shapes")
}

/// `f[k] : A[k] → B[k]`, same matrices.
pub fn shift_map(f: &ChainMap, k: Degree) -> ChainMap {
    let a = Arc::new(shift(f.source(), k));
    let b = Arc::new(shift(f.target(), k));
    ChainMap::from_fn(a, b, |n, _| Some(f.component(n - k).into_owned()))
}

/// The canonical isomorphism `C[k] → ℤ[k] ⊗ C`. With the Koszul
/// convention both sides carry the same differential, so every component is
/// an identity matrix.
pub fn shift_tensor_iso(c: &ChainComplex, k: Degree) -> ChainMap {
    let shifted = Arc::new(shift(c, k));
    let layout = TensorLayout::new(vec![Arc::new(ChainComplex::z(k)), Arc::new(c.clone())]);
    ChainMap::from_fn(shifted, layout.complex().clone(), |_, (r, _)| Some(Matrix::identity(r)))
}

/// A mapping cone with its canonical maps.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Arc<ChainComplex>,
    /// `B → cone(f)`.
    pub inclusion: ChainMap,
    /// `cone(f) → A[1]`.
    pub projection: ChainMap,
}

/// `cone(f)_n = B_n ⊕ A_{n−1}` with differential `[[d_B, f], [0, −d_A]]`.
pub fn mapping_cone(f: &ChainMap) -> Cone {
    let (a, b) = (f.source(), f.target());
    let lo = [b.min_degree(), a.min_degree().map(|x| x + 1)].into_iter().flatten().min();
    let hi = [b.max_degree(), a.max_degree().map(|x| x + 1)].into_iter().flatten().max();
    let complex = match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let mut ranks = Vec::new();
            let mut diffs = Vec::new();
            for n in lo..=hi {
                ranks.push(b.rank(n) + a.rank(n - 1));
                let mut d = Matrix::zeros(b.rank(n - 1) + a.rank(n - 2), b.rank(n) + a.rank(n - 1));
                d.set_block(0, 0, &b.diff(n));
                d.set_block(0, b.rank(n), &f.component(n - 1));
                d.set_block(b.rank(n - 1), b.rank(n), &-&*a.diff(n - 1));
                diffs.push(d);
            }
            ChainComplex::new(lo, ranks, diffs).expect("cone shapes are consistent")
        }
        _ => ChainComplex::zero(),
    };
    let complex = Arc::new(complex);
    let shifted = Arc::new(shift(a, 1));
    let inclusion = ChainMap::from_fn(b.clone(), complex.clone(), |_, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        m.set_block(0, 0, &Matrix::identity(cols));
        Some(m)
    });
    let projection = ChainMap::from_fn(complex.clone(), shifted, |n, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        m.set_block(0, b.rank(n), &Matrix::identity(rows));
        Some(m)
    });
    Cone { complex, inclusion, projection }
}

/// Outcome of a quasi-isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoVerdict {
    pub quasi_iso: bool,
    pub cone_homology: GradedAbelianGroup,
}

/// Smallest window that sees every degree where the homology of source,
/// target or cone can be nonzero; `None` if all three vanish.
pub fn required_window(f: &ChainMap) -> Option<(Degree, Degree)> {
    let (a, b) = (f.source(), f.target());
    let lo = [a.min_degree(), b.min_degree()].into_iter().flatten().min();
    let hi = [a.max_degree().map(|x| x + 1), b.max_degree()].into_iter().flatten().max();
    lo.zip(hi)
}

/// Quasi-isomorphism test over a window that must cover
/// [`required_window`]; smaller windows are rejected as unsound.
pub fn is_quasi_iso(f: &ChainMap, window: (Degree, Degree)) -> Result<QuasiIsoVerdict, ChainError> {
    if let Some(req) = required_window(f) {
        if window.0 > req.0 || window.1 < req.1 {
            return Err(ChainError::UnsoundWindow { window, required: req });
        }
    }
    let cone = mapping_cone(f);
    let h = homology(&cone.complex, window);
    Ok(QuasiIsoVerdict { quasi_iso: h.is_zero(), cone_homology: h })
}

/// Quasi-isomorphism test over the whole support, always sound.
pub fn is_quasi_iso_full(f: &ChainMap) -> QuasiIsoVerdict {
    let w = required_window(f).unwrap_or((0, 0));
    is_quasi_iso(f, w).expect("required window is sound")
}

/// Tests whether `f` induces isomorphisms `H_m` for `m ∈ [a, b]` by checking
/// that the cone is acyclic on `[a, b+1]`. No soundness check: the caller
/// vouches that both complexes are exact through degree `b+1` and that
/// nothing lives below `a`.
pub fn is_quasi_iso_in_window(f: &ChainMap, window: (Degree, Degree)) -> QuasiIsoVerdict {
    let cone = mapping_cone(f);
    let h = homology(&cone.complex, (window.0, window.1 + 1));
    QuasiIsoVerdict { quasi_iso: h.is_zero(), cone_homology: h }
}

/// First degree where `f` fails to be split injective, with its invariant
/// factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofibrationFailure {
    pub degree: Degree,
    pub rank_deficit: usize,
    pub torsion: Vec<BigInt>,
}

impl std::fmt::Display for CofibrationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "degree {}: kernel rank {}", self.degree, self.rank_deficit)?;
        if !self.torsion.is_empty() {
            let t: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
            write!(f, ", cokernel torsion {}", t.join(", "))?;
        }
        Ok(())
    }
}

/// Degreewise injective with free cokernel, or the first failing degree.
pub fn cofibration_check(f: &ChainMap) -> Result<(), CofibrationFailure> {
    for n in f.source().degrees() {
        let c = f.component(n);
        let s = SmithForm::compute(&c, SmithOptions::FACTORS);
        let torsion = s.torsion();
        if s.rank < c.cols() || !torsion.is_empty() {
            return Err(CofibrationFailure { degree: n, rank_deficit: c.cols() - s.rank, torsion });
        }
    }
    Ok(())
}

pub fn is_cofibration(f: &ChainMap) -> bool {
    cofibration_check(f).is_ok()
}

/// The symmetry `A ⊗ B → B ⊗ A`, `a ⊗ b ↦ (−1)^{|a||b|} b ⊗ a`.
pub fn koszul_swap(a: &Arc<ChainComplex>, b: &Arc<ChainComplex>) -> ChainMap {
    let src = TensorLayout::new(vec![a.clone(), b.clone()]);
    let dst = TensorLayout::new(vec![b.clone(), a.clone()]);
    ChainMap::from_fn(src.complex().clone(), dst.complex().clone(), |n, (rows, cols)| {
        let mut m = Matrix::zeros(rows, cols);
        for blk in src.blocks(n) {
            let (p, q) = (blk.degrees[0], blk.degrees[1]);
            let s = parity_sign(p * q);
            for i in 0..blk.dims[0] {
                for j in 0..blk.dims[1] {
                    let col = src.index_of(&[p, q], &[i, j]).expect("in range");
                    let row = dst.index_of(&[q, p], &[j, i]).expect("in range");
                    m.set(row, col, s.clone());
                }
            }
        }
        Some(m)
    })
}

/// `A ⊕ B ⊕ …` in the given order.
pub fn direct_sum(parts: &[Arc<ChainComplex>]) -> ChainComplex {
    (**super::tensor::SumLayout::new(parts.to_vec()).complex()).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::complex::validate_complex;
    use crate::chain::homology::AbelianGroup;

    fn times(k: i64) -> ChainMap {
        let z = Arc::new(ChainComplex::z(0));
        ChainMap::new(z.clone(), z, vec![(0, Matrix::from_i64(1, 1, &[k]))]).unwrap()
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[3])));
        let cone = mapping_cone(&ChainMap::identity(c));
        assert!(validate_complex(&cone.complex).is_ok());
        assert!(homology(&cone.complex, (-1, 3)).is_zero());
        assert!(cone.inclusion.check().is_ok());
        assert!(cone.projection.check().is_ok());
    }

    #[test]
    fn cone_of_zero_source() {
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[3])));
        let cone = mapping_cone(&ChainMap::zero(Arc::new(ChainComplex::zero()), c.clone()));
        assert_eq!(*cone.complex, *c);
    }

    #[test]
    fn cone_of_two() {
        let cone = mapping_cone(&times(2));
        let h = homology(&cone.complex, (-1, 2));
        assert_eq!(h.get(0), AbelianGroup { free_rank: 0, torsion: vec![2.into()] });
        assert_eq!(h.nonzero_degrees(), vec![0]);
    }

    #[test]
    fn quasi_iso_examples() {
        assert!(is_quasi_iso(&times(1), (0, 1)).unwrap().quasi_iso);
        assert!(!is_quasi_iso(&times(2), (0, 1)).unwrap().quasi_iso);
        assert!(matches!(is_quasi_iso(&times(2), (0, 0)), Err(ChainError::UnsoundWindow { .. })));
        let acyclic = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[1])));
        let f = ChainMap::zero(Arc::new(ChainComplex::zero()), acyclic);
        assert!(is_quasi_iso(&f, (0, 1)).unwrap().quasi_iso);
    }

    #[test]
    fn cofibration_examples() {
        let c = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[3])));
        assert!(is_cofibration(&ChainMap::zero(Arc::new(ChainComplex::zero()), c.clone())));
        assert!(is_cofibration(&ChainMap::identity(c)));
        let fail = cofibration_check(&times(2)).unwrap_err();
        assert_eq!(fail.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn shift_composes_and_matches_tensor() {
        let c = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[3]));
        assert_eq!(shift(&shift(&c, 1), 1), shift(&c, 2));
        let iso = shift_tensor_iso(&c, 3);
        assert!(iso.check().is_ok());
        assert!(iso.is_isomorphism());
    }

    #[test]
    fn swap_is_invertible_chain_map() {
        let a = Arc::new(ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2])));
        let b = Arc::new(ChainComplex::two_term(2, Matrix::from_i64(2, 1, &[1, 3])));
        let s = koszul_swap(&a, &b);
        assert!(s.check().is_ok());
        assert!(s.is_isomorphism());
    }
}
