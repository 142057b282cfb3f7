//! Extra degeneracies and the collapse of augmented objects.

use super::realize::{realize, TruncationCertificate};
use super::{SimplicialError, SimplicialObject};
use crate::chain::{is_quasi_iso_in_window, ChainMap, Degree, QuasiIsoVerdict};

/// Which extra-degeneracy relation failed first, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraDegeneracyReport {
    pub holds: bool,
    pub first_failure: Option<String>,
}

/// Checks the relations of an extra degeneracy `s_{−1}` against the faces,
/// degeneracies and augmentation:
/// `ε s_{−1} = id`, `d_0 s_{−1} = id`, `d_{i+1} s_{−1} = s_{−1} d_i`
/// (with `d_0 = ε` on level 0), `s_{j+1} s_{−1} = s_{−1} s_j` and
/// `s_0 s_{−1} = s_{−1} s_{−1}`.
pub fn check_extra_degeneracy(x: &SimplicialObject) -> Result<ExtraDegeneracyReport, SimplicialError> {
    let aug = x.augmentation().ok_or(SimplicialError::MissingAugmentation)?;
    if !x.has_extra_degeneracy() {
        return Err(SimplicialError::MissingExtraDegeneracy);
    }
    let h = |n: usize| x.extra_degeneracy(n).expect("present");
    let top = x.truncation();
    let report = |relation: String| Ok(ExtraDegeneracyReport { holds: false, first_failure: Some(relation) });
    // d_i on level n, with d_0 on level 0 read as ε.
    let face = |n: usize, i: usize| -> ChainMap {
        if n == 0 {
            aug.map.clone()
        } else {
            x.face(n, i).clone()
        }
    };

    if aug.map.compose(h(0)) != ChainMap::identity(aug.target.clone()) {
        return report("ε∘s-1 = id".into());
    }
    for n in 1..=top {
        let below = x.level(n - 1).clone();
        if x.face(n, 0).compose(h(n)) != ChainMap::identity(below) {
            return report(format!("d0∘s-1 = id on level {}", n - 1));
        }
        for i in 0..n {
            if x.face(n, i + 1).compose(h(n)) != h(n - 1).compose(&face(n - 1, i)) {
                return report(format!("d{}∘s-1 = s-1∘d{i} on level {}", i + 1, n - 1));
            }
        }
    }
    for n in 0..top {
        // s_{−1} : X_{n−1} → X_n followed by maps X_n → X_{n+1}.
        if x.degeneracy(n, 0).compose(h(n)) != h(n + 1).compose(h(n)) {
            return report(format!("s0∘s-1 = s-1∘s-1 into level {}", n + 1));
        }
        if n >= 1 {
            for j in 0..n {
                if x.degeneracy(n, j + 1).compose(h(n)) != h(n + 1).compose(x.degeneracy(n - 1, j)) {
                    return report(format!("s{}∘s-1 = s-1∘s{j} on level {}", j + 1, n - 1));
                }
            }
        }
    }
    Ok(ExtraDegeneracyReport { holds: true, first_failure: None })
}

/// Whether `|X| → X_{−1}` is a quasi-isomorphism on a window.
#[derive(Clone, Debug)]
pub struct CollapseVerdict {
    /// Present when the object carries an extra degeneracy.
    pub extra_degeneracy: Option<ExtraDegeneracyReport>,
    pub quasi_iso: QuasiIsoVerdict,
    pub certificate: TruncationCertificate,
}

impl CollapseVerdict {
    pub fn collapses(&self) -> bool {
        self.quasi_iso.quasi_iso
    }
}

/// Realizes `x` and tests the augmentation on `window`. A heuristic
/// truncation is an error unless `allow_heuristic` is set.
pub fn collapse_check(
    x: &SimplicialObject,
    window: (Degree, Degree),
    allow_heuristic: bool,
) -> Result<CollapseVerdict, SimplicialError> {
    if x.augmentation().is_none() {
        return Err(SimplicialError::MissingAugmentation);
    }
    let r = realize(x, window)?;
    if !r.certificate.is_sound() && !allow_heuristic {
        return Err(SimplicialError::HeuristicTruncation { truncation: x.truncation(), window });
    }
    let extra_degeneracy = if x.has_extra_degeneracy() { Some(check_extra_degeneracy(x)?) } else { None };
    let aug = r.augmentation.as_ref().expect("augmented object realizes with augmentation");
    let quasi_iso = is_quasi_iso_in_window(aug, window);
    Ok(CollapseVerdict { extra_degeneracy, quasi_iso, certificate: r.certificate })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chain::ChainComplex;
    use crate::simplicial::scalar_map;

    fn augmented(c: Arc<ChainComplex>, n: usize, eps: i64, h: i64) -> SimplicialObject {
        SimplicialObject::constant(c.clone(), n)
            .with_augmentation(c.clone(), scalar_map(c.clone(), eps))
            .unwrap()
            .with_extra_degeneracy(vec![scalar_map(c, h); n + 1])
            .unwrap()
    }

    #[test]
    fn constant_with_identity_contraction() {
        let c = Arc::new(ChainComplex::two_term(1, crate::chain::Matrix::from_i64(1, 1, &[2])));
        let x = augmented(c, 3, 1, 1);
        let rep = check_extra_degeneracy(&x).unwrap();
        assert!(rep.holds, "{:?}", rep.first_failure);
        let v = collapse_check(&x, (0, 1), false).unwrap();
        assert!(v.collapses());
        assert!(v.certificate.is_sound());
    }

    #[test]
    fn zero_contraction_fails_named_relation() {
        let c = Arc::new(ChainComplex::z(0));
        let x = augmented(c, 2, 1, 0);
        let rep = check_extra_degeneracy(&x).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.first_failure.as_deref(), Some("ε∘s-1 = id"));
    }

    #[test]
    fn doubling_augmentation_does_not_collapse() {
        let c = Arc::new(ChainComplex::z(0));
        let x = SimplicialObject::constant(c.clone(), 2).with_augmentation(c.clone(), scalar_map(c, 2)).unwrap();
        let v = collapse_check(&x, (0, 0), false).unwrap();
        assert!(v.extra_degeneracy.is_none());
        assert!(!v.collapses());
    }

    #[test]
    fn missing_pieces_are_errors() {
        let c = Arc::new(ChainComplex::z(0));
        let x = SimplicialObject::constant(c, 1);
        assert_eq!(check_extra_degeneracy(&x).unwrap_err(), SimplicialError::MissingAugmentation);
        assert!(matches!(collapse_check(&x, (0, 0), true), Err(SimplicialError::MissingAugmentation)));
    }
}
