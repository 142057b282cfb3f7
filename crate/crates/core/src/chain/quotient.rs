//! Quotient complexes presented on free representatives.

use std::sync::Arc;

use super::complex::{ChainComplex, ChainMap, Degree};
use super::error::ChainError;
use super::matrix::Matrix;
use super::smith::cokernel;

/// `B / im f` as a free complex, with the projection from `B` and a graded
/// section of it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: Arc<ChainComplex>,
    /// `B → B / im f`, a chain map.
    pub projection: ChainMap,
    /// Graded map back to `B` with `projection ∘ section = id`.
    pub section: ChainMap,
}

/// The cokernel of `f : A → B` degreewise. Torsion in any degree is an error:
/// the quotient would not be free.
pub fn cokernel_complex(f: &ChainMap) -> Result<Quotient, ChainError> {
    let b = f.target().clone();
    let Some((lo, hi)) = b.support() else {
        let z = Arc::new(ChainComplex::zero());
        return Ok(Quotient {
            complex: z.clone(),
            projection: ChainMap::zero(b.clone(), z.clone()),
            section: ChainMap::zero(z, b),
        });
    };
    let mut projs = Vec::new();
    let mut sects = Vec::new();
    for n in lo..=hi {
        let c = cokernel(&f.component(n));
        if !c.is_free() {
            return Err(ChainError::TorsionCokernel { degree: n, torsion: c.torsion });
        }
        projs.push(c.proj);
        sects.push(c.section);
    }
    let at = |n: Degree| (n - lo) as usize;
    let ranks: Vec<usize> = projs.iter().map(Matrix::rows).collect();
    let diffs = (lo..=hi)
        .map(|n| if n == lo { Matrix::zeros(0, ranks[0]) } else { &(&projs[at(n - 1)] * &*b.diff(n)) * &sects[at(n)] })
        .collect();
    let complex = Arc::new(ChainComplex::new(lo, ranks, diffs)?);
    let projection = ChainMap::from_fn(b.clone(), complex.clone(), |n, _| Some(projs[at(n)].clone()));
    let section = ChainMap::from_fn(complex.clone(), b, |n, (r, c)| {
        let k = n - lo;
        (k >= 0 && (k as usize) < sects.len()).then(|| sects[k as usize].clone()).filter(|m| m.shape() == (r, c))
    });
    Ok(Quotient { complex, projection, section })
}

impl Quotient {
    /// The map `B / im f → C` induced by `g : B → C`, assuming `g ∘ f = 0`.
    pub fn descend(&self, g: &ChainMap) -> ChainMap {
        g.compose(&self.section).retarget(self.complex.clone(), g.target().clone())
    }

    /// The map `B / im f → B′ / im f′` induced by `g : B → B′`, assuming
    /// `g` carries `im f` into `im f′`.
    pub fn induced(&self, g: &ChainMap, target: &Quotient) -> ChainMap {
        target.projection.compose(g).compose(&self.section)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::homology::homology_full;
    use crate::chain::validate_complex;

    #[test]
    fn quotient_by_a_subcomplex() {
        // Sub ℤ (degree 1, diagonal) inside the cone of the identity on ℤ².
        let b = Arc::new(ChainComplex::two_term(1, Matrix::identity(2)));
        let a = Arc::new(ChainComplex::two_term(1, Matrix::identity(1)));
        let f = ChainMap::new(
            a,
            b.clone(),
            vec![(1, Matrix::from_i64(2, 1, &[1, 1])), (0, Matrix::from_i64(2, 1, &[1, 1]))],
        )
        .unwrap();
        let q = cokernel_complex(&f).unwrap();
        assert!(validate_complex(&q.complex).is_ok());
        assert_eq!(q.complex.rank(0), 1);
        assert!(q.projection.check().is_ok());
        assert!(homology_full(&q.complex).is_zero());
        let id = q.induced(&ChainMap::identity(b), &q);
        assert_eq!(id, ChainMap::identity(q.complex.clone()));
    }

    #[test]
    fn torsion_is_rejected() {
        let z = Arc::new(ChainComplex::z(0));
        let f = ChainMap::new(z.clone(), z, vec![(0, Matrix::from_i64(1, 1, &[2]))]).unwrap();
        assert!(matches!(cokernel_complex(&f), Err(ChainError::TorsionCokernel { degree: 0, .. })));
    }
}
